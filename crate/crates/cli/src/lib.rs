//! The `floguide` command line.
//!
//! Exit codes: 0 success (stable for `point`), 10 unstable point,
//! 11 diverged simulation, 20 numerical failure, 1 failed `verify`,
//! 2 usage or parameter error, 3 I/O error while writing results.

pub mod config;
mod output;

use std::f64::consts::{PI, TAU};
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use floguide_core::bounds::{bound_curve, threshold_omega, threshold_ratio};
use floguide_core::floquet::{monodromy, Backend, LinearizedSystem, MonodromySettings, SeriesSettings};
use floguide_core::guide::{integrate_nonlinear, steady_orbit, NonlinearSettings, NonlinearState};
use floguide_core::params::{alphas_from_physical, characteristic_frequencies};
use floguide_core::scan::{overlay_bound, run_scan, AxisQuantity, AxisScale, ScanAxis, ScanMode, ScanSpec};
use floguide_core::verify::{run_verify, VerifyConfig};
use floguide_core::{AlphaParams, BranchIndex, Error, PhysicalParams};
use serde_json::json;

pub use config::PhysicalArgs;
use output::{sibling, write_json, Outputs};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;
pub const EXIT_UNSTABLE: i32 = 10;
pub const EXIT_DIVERGED: i32 = 11;
pub const EXIT_NUMERICAL: i32 = 20;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Numerical(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Numerical(_) => EXIT_NUMERICAL,
            CliError::Io(_) => EXIT_IO,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Numerical(m) => write!(f, "numerical failure: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParameter(_) => CliError::Usage(e.to_string()),
            Error::Io(_) | Error::Json(_) => CliError::Io(e.to_string()),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "floguide", version, about = "Floquet stability of a modulated magnetic waveguide")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print characteristic frequencies and alphas of a physical guide.
    Params(ParamsArgs),
    /// Floquet multipliers and stability of one parameter point (JSON).
    Point(PointArgs),
    /// Stability over a 2-D parameter grid (CSV, JSON sidecar, PGM).
    Scan(ScanArgs),
    /// Estimated upper stability bound and threshold frequency.
    Boundary(BoundaryArgs),
    /// Integrate the full spin-motion dynamics (trajectory CSV).
    Simulate(SimulateArgs),
    /// Run the seeded self-check suite.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Args)]
pub struct AlphaArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub alpha1: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha2: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha3: Option<f64>,
}

impl AlphaArgs {
    fn given(&self) -> bool {
        self.alpha1.is_some() || self.alpha2.is_some() || self.alpha3.is_some()
    }

    fn complete(&self) -> Result<AlphaParams, CliError> {
        match (self.alpha1, self.alpha2, self.alpha3) {
            (Some(a1), Some(a2), Some(a3)) => {
                let a = AlphaParams::new(a1, a2, a3);
                a.check()?;
                Ok(a)
            }
            _ => Err(CliError::Usage("--alpha1, --alpha2 and --alpha3 must be given together".into())),
        }
    }
}

/// Alphas from `--alpha*` or from a physical source, exactly one of them.
fn resolve_alphas(alpha: &AlphaArgs, phys: &PhysicalArgs) -> Result<AlphaParams, CliError> {
    match (alpha.given(), phys.given()) {
        (true, true) => Err(CliError::Usage("give either --alpha1/2/3 or physical parameters, not both".into())),
        (true, false) => alpha.complete(),
        (false, true) => Ok(alphas_from_physical(&phys.resolve_or_reference()?)?),
        (false, false) => {
            Err(CliError::Usage("no parameters: give --alpha1/2/3, --config or inline physical flags".into()))
        }
    }
}

#[derive(Debug, Clone, Copy, Args)]
pub struct BranchArgs {
    /// Branch index k (theta = k pi).
    #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
    pub k: i64,
    /// Branch index m (nu = (2m+1) pi/2).
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    pub m: i64,
}

impl BranchArgs {
    fn branch(&self) -> BranchIndex {
        BranchIndex::new(self.k, self.m)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BackendChoice {
    Propagate,
    Series,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct BackendArgs {
    #[arg(long, value_enum, default_value_t = BackendChoice::Propagate)]
    pub backend: BackendChoice,
    /// Minimum RK4 steps per period (propagation backend).
    #[arg(long, default_value_t = 1024)]
    pub steps: usize,
    /// Series truncation order.
    #[arg(long, default_value_t = 4)]
    pub order: usize,
    /// Series quadrature nodes (odd).
    #[arg(long, default_value_t = 2049)]
    pub nodes: usize,
    /// Series segments; 0 picks them from the truncation estimate.
    #[arg(long, default_value_t = 0)]
    pub segments: usize,
    /// Stable when max |multiplier| <= 1 + eps.
    #[arg(long, default_value_t = 1e-3, allow_hyphen_values = true)]
    pub eps_stab: f64,
}

impl BackendArgs {
    fn settings(&self) -> Result<MonodromySettings, CliError> {
        let backend = match self.backend {
            BackendChoice::Propagate => Backend::Propagation { steps: self.steps },
            BackendChoice::Series => {
                Backend::Series(SeriesSettings { order: self.order, nodes: self.nodes, segments: self.segments })
            }
        };
        let s = MonodromySettings { backend, eps_stab: self.eps_stab };
        s.validate()?;
        Ok(s)
    }
}

#[derive(Debug, Args)]
pub struct ParamsArgs {
    #[command(flatten)]
    pub phys: PhysicalArgs,
    /// Print JSON (SI units) instead of the text report.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct PointArgs {
    #[command(flatten)]
    pub alpha: AlphaArgs,
    #[command(flatten)]
    pub phys: PhysicalArgs,
    #[command(flatten)]
    pub branch: BranchArgs,
    #[command(flatten)]
    pub backend: BackendArgs,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    /// Fixed alphas in abstract mode; scanned quantities override them.
    #[command(flatten)]
    pub alpha: AlphaArgs,
    #[command(flatten)]
    pub phys: PhysicalArgs,
    /// Physical mode with the Rb-87 reference guide.
    #[arg(long)]
    pub physical: bool,
    #[arg(long, default_value = "ratio_a2_a1")]
    pub x: AxisQuantity,
    #[arg(long)]
    pub x_scale: Option<AxisScale>,
    #[arg(long, allow_hyphen_values = true)]
    pub x_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub x_max: Option<f64>,
    #[arg(long, default_value_t = 50)]
    pub nx: usize,
    #[arg(long, default_value = "alpha3")]
    pub y: AxisQuantity,
    #[arg(long)]
    pub y_scale: Option<AxisScale>,
    #[arg(long, allow_hyphen_values = true)]
    pub y_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub y_max: Option<f64>,
    #[arg(long, default_value_t = 50)]
    pub ny: usize,
    #[command(flatten)]
    pub branch: BranchArgs,
    #[command(flatten)]
    pub backend: BackendArgs,
    /// Worker threads; 0 uses all cores.
    #[arg(long, default_value_t = 0)]
    pub workers: usize,
    /// Scan CSV; the sidecar goes next to it with extension .json.
    #[arg(long)]
    pub out: PathBuf,
    /// Also write a PGM heatmap with extension .pgm.
    #[arg(long)]
    pub pgm: bool,
    /// Overlay the estimated upper bound (y must be alpha3 or phi).
    #[arg(long)]
    pub overlay: bool,
}

/// Fixed alpha1 of the default abstract scan (Rb-87 guide at 10 kHz).
pub const DEFAULT_FIXED_ALPHA1: f64 = 1.57e-3;

fn default_axis(q: AxisQuantity) -> (AxisScale, f64, f64) {
    match q {
        AxisQuantity::RatioA2A1 => (AxisScale::Log, 1e3, 1e5),
        AxisQuantity::Alpha1 => (AxisScale::Log, 1e-4, 1e-1),
        AxisQuantity::Alpha2 => (AxisScale::Log, 1e-1, 1e2),
        AxisQuantity::Alpha3 => (AxisScale::Linear, 0.0, PI),
        AxisQuantity::Omega => (AxisScale::Log, TAU * 1e3, TAU * 1e5),
        AxisQuantity::Phi => (AxisScale::Linear, 0.0, 0.3),
    }
}

fn axis(q: AxisQuantity, scale: Option<AxisScale>, min: Option<f64>, max: Option<f64>, n: usize) -> ScanAxis {
    let (s, lo, hi) = default_axis(q);
    ScanAxis::new(q, scale.unwrap_or(s), min.unwrap_or(lo), max.unwrap_or(hi), n)
}

impl ScanArgs {
    pub fn spec(&self) -> Result<ScanSpec, CliError> {
        let physical = self.physical || self.phys.given();
        let mode = if physical {
            if self.alpha.given() {
                return Err(CliError::Usage("--alpha1/2/3 are not used in physical mode".into()));
            }
            ScanMode::Physical { params: self.phys.resolve_or_reference()? }
        } else {
            let a = &self.alpha;
            ScanMode::Abstract {
                fixed: AlphaParams::new(
                    a.alpha1.unwrap_or(DEFAULT_FIXED_ALPHA1),
                    a.alpha2.unwrap_or(0.0),
                    a.alpha3.unwrap_or(0.0),
                ),
            }
        };
        let spec = ScanSpec {
            x: axis(self.x, self.x_scale, self.x_min, self.x_max, self.nx),
            y: axis(self.y, self.y_scale, self.y_min, self.y_max, self.ny),
            mode,
            branch: self.branch.branch(),
            settings: self.backend.settings()?,
        };
        spec.validate()?;
        Ok(spec)
    }
}

#[derive(Debug, Args)]
pub struct BoundaryArgs {
    #[command(flatten)]
    pub phys: PhysicalArgs,
    #[command(flatten)]
    pub branch: BranchArgs,
    /// Lowest frequency (default: the threshold).
    #[arg(long)]
    pub omega_min: Option<f64>,
    /// Highest frequency (default: 20 times the threshold).
    #[arg(long)]
    pub omega_max: Option<f64>,
    #[arg(long, default_value_t = 200)]
    pub n: usize,
    /// Boundary CSV; the sidecar goes next to it with extension .json.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub alpha: AlphaArgs,
    #[command(flatten)]
    pub phys: PhysicalArgs,
    /// Start on the steady orbit of branch (K, M).
    #[arg(long, num_args = 2, value_names = ["K", "M"], allow_hyphen_values = true, conflicts_with = "state")]
    pub steady: Option<Vec<i64>>,
    /// Initial state `x,vx,z,vz,nx,ny,nz`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub state: Option<Vec<f64>>,
    #[arg(long, default_value_t = 10.0)]
    pub periods: f64,
    #[arg(long, default_value_t = 1024)]
    pub steps: usize,
    /// Keep every N-th step.
    #[arg(long, default_value_t = 1)]
    pub sample_every: usize,
    /// Rescale the moment to unit length after every step.
    #[arg(long)]
    pub renormalize: bool,
    /// Trajectory CSV; the sidecar goes next to it with extension .json.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Random draws for the determinant and pairing checks.
    #[arg(long, default_value_t = 1000)]
    pub draws: usize,
    /// Random points for the backend comparison.
    #[arg(long, default_value_t = 100)]
    pub agreement_points: usize,
    /// Grid side of the mirrored symmetry scans.
    #[arg(long, default_value_t = 20)]
    pub symmetry_n: usize,
    #[command(flatten)]
    pub backend: BackendArgs,
    #[arg(long, default_value_t = 0)]
    pub workers: usize,
    /// Write the JSON report here.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Parses `args` (program name first), runs the command and returns the
/// exit code. Diagnostics go to stderr.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let stdout = std::io::stdout();
    match run(&cli.command, &mut stdout.lock()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("floguide: {e}");
            e.exit_code()
        }
    }
}

pub fn run(cmd: &Command, out: &mut dyn Write) -> Result<i32, CliError> {
    match cmd {
        Command::Params(a) => cmd_params(a, out),
        Command::Point(a) => cmd_point(a, out),
        Command::Scan(a) => cmd_scan(a, out),
        Command::Boundary(a) => cmd_boundary(a, out),
        Command::Simulate(a) => cmd_simulate(a, out),
        Command::Verify(a) => cmd_verify(a, out),
    }
}

fn io(e: std::io::Error) -> CliError {
    CliError::Io(e.to_string())
}

fn hz(omega: f64) -> f64 {
    omega / TAU
}

pub fn cmd_params(a: &ParamsArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let p = a.phys.resolve_or_reference()?;
    let f = characteristic_frequencies(&p)?;
    let al = alphas_from_physical(&p)?;
    let w_th = threshold_omega(&f);
    if a.json {
        let v = json!({
            "params": p,
            "frequencies_rad_s": f,
            "alphas": al,
            "threshold_omega_rad_s": w_th,
            "threshold_ratio_a2_a1": threshold_ratio(&f),
            "phase_out_of_regime": p.phase_out_of_regime(),
        });
        write_json(out, &v).map_err(io)?;
        return Ok(EXIT_OK);
    }
    let line =
        |out: &mut dyn Write, name: &str, w: f64| writeln!(out, "{name:<12} {w:>14.6e} rad/s   {:>14.6e} Hz", hz(w));
    (|| -> std::io::Result<()> {
        writeln!(
            out,
            "gradient {:.4} G/cm, bias {:.4} G, phi {:.4e} rad, pitch {:.4} um",
            p.gradient_b * 100.0,
            p.bias_bb * 1e4,
            p.phase_phi,
            p.wire_pitch_l * 1e6
        )?;
        line(out, "omega", p.mod_omega)?;
        line(out, "omega_L", f.larmor_omega_l)?;
        line(out, "omega_perp", f.transverse_omega_perp)?;
        line(out, "Omega", f.rabi_omega)?;
        writeln!(out, "alpha1       {:.6e}", al.alpha1)?;
        writeln!(out, "alpha2       {:.6e}", al.alpha2)?;
        writeln!(out, "alpha3       {:.6e}", al.alpha3)?;
        writeln!(out, "alpha2/alpha1 {:.6e}", al.ratio_a2_a1())?;
        line(out, "omega_th", w_th)?;
        writeln!(out, "alpha2/alpha1 at threshold {:.6e}", threshold_ratio(&f))?;
        if p.phase_out_of_regime() {
            writeln!(out, "warning: |phi| is outside the small-offset regime of the field model")?;
        }
        Ok(())
    })()
    .map_err(io)?;
    Ok(EXIT_OK)
}

pub fn cmd_point(a: &PointArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let alphas = resolve_alphas(&a.alpha, &a.phys)?;
    let settings = a.backend.settings()?;
    let mut files = Outputs::new();
    let slot = a.out.as_deref().map(|p| files.create(p)).transpose()?;
    let sys = LinearizedSystem::new(alphas, a.branch.branch());
    let r = monodromy(&sys, &settings)?;
    let report = serde_json::to_value(r.report(&sys, settings.eps_stab)).map_err(|e| CliError::Io(e.to_string()))?;
    match slot {
        Some(i) => files.write(i, |w| write_json(w, &report))?,
        None => write_json(out, &report).map_err(io)?,
    }
    files.commit();
    Ok(if r.stable { EXIT_OK } else { EXIT_UNSTABLE })
}

pub fn cmd_scan(a: &ScanArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let spec = a.spec()?;
    if a.overlay && !matches!(spec.y.quantity, AxisQuantity::Alpha3 | AxisQuantity::Phi) {
        return Err(CliError::Usage("--overlay needs y = alpha3 or phi".into()));
    }
    let mut files = Outputs::new();
    let csv = files.create(&a.out)?;
    let side = files.create(&sibling(&a.out, "json")?)?;
    let pgm = if a.pgm { Some(files.create(&sibling(&a.out, "pgm")?)?) } else { None };

    let mut result = run_scan(&spec, a.workers)?;
    if a.overlay {
        overlay_bound(&mut result)?;
    }
    files.write(csv, |w| result.write_csv(w))?;
    files.write(side, |w| write_json(w, &result.sidecar_json()))?;
    if let Some(i) = pgm {
        files.write(i, |w| result.write_pgm(w))?;
    }
    files.commit();

    (|| -> std::io::Result<()> {
        writeln!(
            out,
            "{} nodes, {} stable ({:.4}), {} failed, status {:?}, {:.2} s",
            result.nodes.len(),
            result.stable_count(),
            result.stable_fraction(),
            result.failures,
            result.status,
            result.wall_time_s
        )?;
        if let Some(o) = &result.overlay {
            writeln!(
                out,
                "{}: {} of {} stable cells above the curve ({:.4})",
                o.label, o.stable_above, o.stable_total, o.fraction_stable_above
            )?;
            if let Some(n) = &o.note {
                writeln!(out, "note: {n}")?;
            }
        }
        Ok(())
    })()
    .map_err(io)?;
    Ok(EXIT_OK)
}

pub fn cmd_boundary(a: &BoundaryArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let p: PhysicalParams = a.phys.resolve_or_reference()?;
    let f = characteristic_frequencies(&p)?;
    let w_th = threshold_omega(&f);
    let lo = a.omega_min.unwrap_or(w_th);
    let hi = a.omega_max.unwrap_or(20.0 * w_th);
    let mut files = Outputs::new();
    let csv = files.create(&a.out)?;
    let side = files.create(&sibling(&a.out, "json")?)?;
    let curve = bound_curve(&f, a.branch.branch(), (lo, hi), a.n)?;
    let mut sidecar = curve.sidecar_json();
    sidecar["threshold_ratio_a2_a1"] = json!(threshold_ratio(&f));
    sidecar["omega_range_rad_s"] = json!([lo, hi]);
    files.write(csv, |w| curve.write_csv(w))?;
    files.write(side, |w| write_json(w, &sidecar))?;
    files.commit();
    writeln!(
        out,
        "threshold omega_th = {:.6e} rad/s ({:.4} kHz), alpha2/alpha1 = {:.6e}; {} samples ({})",
        w_th,
        hz(w_th) / 1e3,
        threshold_ratio(&f),
        curve.samples.len(),
        curve.label
    )
    .map_err(io)?;
    Ok(EXIT_OK)
}

pub fn cmd_simulate(a: &SimulateArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let alphas = resolve_alphas(&a.alpha, &a.phys)?;
    let s0 = match (&a.steady, &a.state) {
        (Some(km), None) => steady_orbit(BranchIndex::new(km[0], km[1]), &alphas).initial_state(),
        (None, Some(v)) => {
            let [x, vx, z, vz, nx, ny, nz] = v[..] else {
                return Err(CliError::Usage(format!("--state needs 7 values, got {}", v.len())));
            };
            let s = NonlinearState { x, vx, z, vz, nx, ny, nz, tau: 0.0 };
            if !s.to_vector().iter().all(|c| c.is_finite()) {
                return Err(CliError::Usage("--state must be finite".into()));
            }
            s
        }
        _ => return Err(CliError::Usage("give exactly one of --steady K M or --state".into())),
    };
    let settings = NonlinearSettings {
        periods: a.periods,
        steps_per_period: a.steps,
        renormalize_spin: a.renormalize,
        sample_every: a.sample_every,
    };
    settings.validate()?;
    let mut files = Outputs::new();
    let csv = files.create(&a.out)?;
    let side = files.create(&sibling(&a.out, "json")?)?;
    let tr = integrate_nonlinear(&s0, &alphas, &settings)?;
    let sidecar = json!({
        "alphas": alphas,
        "initial_state": s0,
        "settings": settings,
        "samples": tr.samples.len(),
        "truncated": tr.divergence.is_some(),
        "divergence": tr.divergence,
        "max_spin_norm_drift": tr.max_spin_norm_drift(),
    });
    files.write(csv, |w| tr.write_csv(w))?;
    files.write(side, |w| write_json(w, &sidecar))?;
    files.commit();
    let last = tr.last();
    match &tr.divergence {
        Some(d) => {
            writeln!(out, "diverged at tau = {:.6} (trajectory truncated)", d.tau).map_err(io)?;
            Ok(EXIT_DIVERGED)
        }
        None => {
            writeln!(
                out,
                "{} samples to tau = {:.6}; spin norm drift {:.3e}",
                tr.samples.len(),
                last.tau,
                tr.max_spin_norm_drift()
            )
            .map_err(io)?;
            Ok(EXIT_OK)
        }
    }
}

pub fn cmd_verify(a: &VerifyArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let cfg = VerifyConfig {
        seed: a.seed,
        draws: a.draws,
        agreement_points: a.agreement_points,
        symmetry_n: a.symmetry_n,
        settings: a.backend.settings()?,
        workers: a.workers,
    };
    let mut files = Outputs::new();
    let slot = a.out.as_deref().map(|p| files.create(p)).transpose()?;
    let report = run_verify(&cfg)?;
    if let Some(i) = slot {
        let v = serde_json::to_value(&report).map_err(|e| CliError::Io(e.to_string()))?;
        files.write(i, |w| write_json(w, &v))?;
    }
    files.commit();
    (|| -> std::io::Result<()> {
        for c in &report.checks {
            writeln!(
                out,
                "{} {:<18} worst {:.3e} (tolerance {:.1e}, {} samples) {}",
                if c.pass { "PASS" } else { "FAIL" },
                c.name,
                c.worst,
                c.tolerance,
                c.samples,
                c.detail
            )?;
        }
        writeln!(out, "seed {}: {}", report.seed, if report.pass { "all checks passed" } else { "FAILED" })
    })()
    .map_err(io)?;
    Ok(if report.pass { EXIT_OK } else { EXIT_VERIFY_FAILED })
}
