//! Physical constants and species data.
//!
//! All values are CODATA-2018 (atomic masses from AME2016). The table is
//! versioned so output metadata can record which constant set produced it.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const CONSTANTS_VERSION: &str = "CODATA-2018";

/// Reduced Planck constant (J s).
pub const HBAR: f64 = 1.054_571_817e-34;
/// Bohr magneton (J/T).
pub const BOHR_MAGNETON: f64 = 9.274_010_078_3e-24;
/// Unified atomic mass unit (kg).
pub const ATOMIC_MASS_UNIT: f64 = 1.660_539_066_60e-27;
/// Mass of rubidium-87 in atomic mass units.
pub const RB87_MASS_U: f64 = 86.909_180_527;
/// Landé factor of the Rb-87 F=2 ground-state manifold.
pub const RB87_G_F: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpeciesConstants {
    pub mass_kg: f64,
    pub lande_g_factor: f64,
    pub bohr_magneton: f64,
    pub hbar: f64,
}

impl SpeciesConstants {
    pub fn rubidium87() -> Self {
        Self {
            mass_kg: RB87_MASS_U * ATOMIC_MASS_UNIT,
            lande_g_factor: RB87_G_F,
            bohr_magneton: BOHR_MAGNETON,
            hbar: HBAR,
        }
    }

    /// A species with arbitrary mass and Landé factor, using the table's
    /// fundamental constants.
    pub fn custom(mass_kg: f64, lande_g_factor: f64) -> Result<Self> {
        let s = Self { mass_kg, lande_g_factor, bohr_magneton: BOHR_MAGNETON, hbar: HBAR };
        s.validate()?;
        Ok(s)
    }

    /// Looks up a named species. Names are case-insensitive.
    pub fn by_name(name: &str) -> Result<Self> {
        match name.to_ascii_lowercase().as_str() {
            "rb87" | "rb-87" | "87rb" => Ok(Self::rubidium87()),
            other => Err(Error::invalid(format!("unknown species `{other}`"))),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("mass_kg", self.mass_kg),
            ("lande_g_factor", self.lande_g_factor),
            ("bohr_magneton", self.bohr_magneton),
            ("hbar", self.hbar),
        ];
        for (name, v) in fields {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::invalid(format!("{name} must be finite and > 0, got {v}")));
            }
        }
        Ok(())
    }

    /// g_F * mu_B, the coupling that appears in every characteristic frequency.
    pub(crate) fn moment(&self) -> f64 {
        self.lande_g_factor * self.bohr_magneton
    }
}
