//! Output files are created before any computation so an unwritable path
//! fails fast. Files of a command that errors are removed again.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::CliError;

pub struct Outputs {
    files: Vec<(PathBuf, Option<File>)>,
    keep: bool,
}

impl Outputs {
    pub fn new() -> Self {
        Self { files: Vec::new(), keep: false }
    }

    /// Creates (truncates) `path` and returns its slot index.
    pub fn create(&mut self, path: &Path) -> Result<usize, CliError> {
        if self.files.iter().any(|(p, _)| p == path) {
            return Err(CliError::Usage(format!("output path {} used twice", path.display())));
        }
        let f = File::create(path).map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?;
        self.files.push((path.to_path_buf(), Some(f)));
        Ok(self.files.len() - 1)
    }

    /// Writes the whole content of slot `i` through `body`.
    pub fn write(
        &mut self,
        i: usize,
        body: impl FnOnce(&mut dyn Write) -> std::io::Result<()>,
    ) -> Result<(), CliError> {
        let (path, f) = &mut self.files[i];
        let f = f.take().expect("output slot written twice");
        let mut w = BufWriter::new(f);
        body(&mut w).and_then(|_| w.flush()).map_err(|e| CliError::Io(format!("writing {}: {e}", path.display())))
    }

    /// Keeps the files once every slot is written.
    pub fn commit(mut self) {
        self.keep = true;
    }
}

impl Drop for Outputs {
    fn drop(&mut self) {
        if !self.keep {
            for (p, _) in &self.files {
                let _ = std::fs::remove_file(p);
            }
        }
    }
}

/// `base` with its extension replaced, refusing to collide with `base`.
pub fn sibling(base: &Path, ext: &str) -> Result<PathBuf, CliError> {
    let p = base.with_extension(ext);
    if p == base {
        return Err(CliError::Usage(format!("--out {} must not end in .{ext}", base.display())));
    }
    Ok(p)
}

pub fn write_json(w: &mut dyn Write, v: &serde_json::Value) -> std::io::Result<()> {
    serde_json::to_writer_pretty(&mut *w, v)?;
    writeln!(w)
}
