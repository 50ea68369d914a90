//! Flat `key = value` parameter files and the matching inline flags.

use std::path::{Path, PathBuf};

use clap::Args;
use floguide_core::{PhysicalParams, SpeciesConstants};

use crate::CliError;

/// Keys accepted in a parameter file, in documentation order.
pub const PARAM_KEYS: [&str; 8] =
    ["species", "mass_kg", "g_F", "gradient_T_per_m", "bias_T", "phi_rad", "pitch_m", "omega_rad_s"];

/// Parameter values as read from a file or from flags; unset keys fall
/// back to the Rb-87 reference guide.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ParamValues {
    pub species: Option<String>,
    pub mass_kg: Option<f64>,
    pub g_f: Option<f64>,
    pub gradient_t_per_m: Option<f64>,
    pub bias_t: Option<f64>,
    pub phi_rad: Option<f64>,
    pub pitch_m: Option<f64>,
    pub omega_rad_s: Option<f64>,
}

impl ParamValues {
    pub fn is_empty(&self) -> bool {
        *self == Self::default()
    }

    pub fn to_physical(&self) -> Result<PhysicalParams, CliError> {
        let mut p = PhysicalParams::rubidium87_reference();
        if let Some(name) = &self.species {
            p.species = SpeciesConstants::by_name(name)?;
        }
        if self.mass_kg.is_some() || self.g_f.is_some() {
            p.species = SpeciesConstants::custom(
                self.mass_kg.unwrap_or(p.species.mass_kg),
                self.g_f.unwrap_or(p.species.lande_g_factor),
            )?;
        }
        let set = |slot: &mut f64, v: Option<f64>| {
            if let Some(v) = v {
                *slot = v;
            }
        };
        set(&mut p.gradient_b, self.gradient_t_per_m);
        set(&mut p.bias_bb, self.bias_t);
        set(&mut p.phase_phi, self.phi_rad);
        set(&mut p.wire_pitch_l, self.pitch_m);
        set(&mut p.mod_omega, self.omega_rad_s);
        p.validate()?;
        Ok(p)
    }
}

/// Parses a parameter file. Blank lines and `#` comments are ignored;
/// unknown and repeated keys are errors.
pub fn parse_param_file(text: &str) -> Result<ParamValues, CliError> {
    let mut v = ParamValues::default();
    let mut seen: Vec<&str> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| CliError::Usage(format!("line {}: {msg}", lineno + 1));
        let (key, value) = line.split_once('=').ok_or_else(|| err(format!("expected `key = value`, got `{line}`")))?;
        let (key, value) = (key.trim(), value.trim());
        let Some(&key) = PARAM_KEYS.iter().find(|k| **k == key) else {
            return Err(err(format!("unknown key `{key}`; expected one of {}", PARAM_KEYS.join(", "))));
        };
        if seen.contains(&key) {
            return Err(err(format!("key `{key}` given twice")));
        }
        seen.push(key);
        if key == "species" {
            v.species = Some(value.to_string());
            continue;
        }
        let x: f64 = value.parse().map_err(|_| err(format!("`{key}`: `{value}` is not a number")))?;
        let slot = match key {
            "mass_kg" => &mut v.mass_kg,
            "g_F" => &mut v.g_f,
            "gradient_T_per_m" => &mut v.gradient_t_per_m,
            "bias_T" => &mut v.bias_t,
            "phi_rad" => &mut v.phi_rad,
            "pitch_m" => &mut v.pitch_m,
            "omega_rad_s" => &mut v.omega_rad_s,
            _ => unreachable!(),
        };
        *slot = Some(x);
    }
    Ok(v)
}

pub fn read_param_file(path: &Path) -> Result<ParamValues, CliError> {
    let text =
        std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    parse_param_file(&text).map_err(|e| match e {
        CliError::Usage(m) => CliError::Usage(format!("{}: {m}", path.display())),
        other => other,
    })
}

/// Physical parameters from a file or from inline flags (not both).
#[derive(Debug, Clone, Default, Args)]
pub struct PhysicalArgs {
    /// Parameter file with `key = value` lines.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Named species (Rb87).
    #[arg(long)]
    pub species: Option<String>,
    #[arg(long, value_name = "KG", allow_hyphen_values = true)]
    pub mass_kg: Option<f64>,
    /// Landé factor g_F.
    #[arg(long = "g-f", value_name = "G", allow_hyphen_values = true)]
    pub g_f: Option<f64>,
    /// Field gradient b.
    #[arg(long = "gradient-t-per-m", value_name = "T_PER_M", allow_hyphen_values = true)]
    pub gradient_t_per_m: Option<f64>,
    /// Wire field B_b.
    #[arg(long = "bias-t", value_name = "T", allow_hyphen_values = true)]
    pub bias_t: Option<f64>,
    /// Phase offset between the wire currents.
    #[arg(long = "phi-rad", value_name = "RAD", allow_hyphen_values = true)]
    pub phi_rad: Option<f64>,
    /// Wire separation l.
    #[arg(long = "pitch-m", value_name = "M", allow_hyphen_values = true)]
    pub pitch_m: Option<f64>,
    /// Modulation angular frequency.
    #[arg(long = "omega-rad-s", value_name = "RAD_S", allow_hyphen_values = true)]
    pub omega_rad_s: Option<f64>,
}

impl PhysicalArgs {
    fn inline(&self) -> ParamValues {
        ParamValues {
            species: self.species.clone(),
            mass_kg: self.mass_kg,
            g_f: self.g_f,
            gradient_t_per_m: self.gradient_t_per_m,
            bias_t: self.bias_t,
            phi_rad: self.phi_rad,
            pitch_m: self.pitch_m,
            omega_rad_s: self.omega_rad_s,
        }
    }

    /// True when any physical source was given.
    pub fn given(&self) -> bool {
        self.config.is_some() || !self.inline().is_empty()
    }

    /// The parameters, or `None` when nothing was given.
    pub fn resolve(&self) -> Result<Option<PhysicalParams>, CliError> {
        let inline = self.inline();
        match (&self.config, inline.is_empty()) {
            (Some(_), false) => Err(CliError::Usage("give either --config or inline parameter flags, not both".into())),
            (Some(path), true) => read_param_file(path)?.to_physical().map(Some),
            (None, false) => inline.to_physical().map(Some),
            (None, true) => Ok(None),
        }
    }

    pub fn resolve_or_reference(&self) -> Result<PhysicalParams, CliError> {
        Ok(self.resolve()?.unwrap_or_else(PhysicalParams::rubidium87_reference))
    }
}
