//! Conversion between hardware parameters and the dimensionless couplings
//! `alpha1 = omega_perp^2 / omega^2`, `alpha2 = Omega / omega`,
//! `alpha3 = omega_L / omega`.

use serde::{Deserialize, Serialize};

use crate::constants::SpeciesConstants;
use crate::error::{Error, Result};

/// Above this phase offset the first-order field model is no longer a
/// good approximation.
pub const PHASE_VALIDITY_LIMIT: f64 = 0.3;

/// Hardware and species description of the guide, in SI units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams {
    pub species: SpeciesConstants,
    /// Field gradient `b` (T/m).
    pub gradient_b: f64,
    /// Field of the inner and outer wires `B_b` (T).
    pub bias_bb: f64,
    /// Phase offset between the modulated currents (rad).
    pub phase_phi: f64,
    /// Wire separation `l` (m).
    pub wire_pitch_l: f64,
    /// Modulation angular frequency (rad/s).
    pub mod_omega: f64,
}

impl PhysicalParams {
    /// Rb-87 in the reference geometry: b = 290 G/cm, B_b = 1.5 G,
    /// l = 15 um, phi = 1 mrad, omega = 2 pi x 10 kHz.
    pub fn rubidium87_reference() -> Self {
        Self {
            species: SpeciesConstants::rubidium87(),
            gradient_b: 2.90,
            bias_bb: 1.5e-4,
            phase_phi: 1.0e-3,
            wire_pitch_l: 15.0e-6,
            mod_omega: 2.0 * std::f64::consts::PI * 1.0e4,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.species.validate()?;
        let positive = [
            ("gradient_b", self.gradient_b),
            ("bias_Bb", self.bias_bb),
            ("wire_pitch_l", self.wire_pitch_l),
            ("mod_omega", self.mod_omega),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::invalid(format!("{name} must be finite and > 0, got {v}")));
            }
        }
        if !self.phase_phi.is_finite() {
            return Err(Error::invalid(format!("phase_phi must be finite, got {}", self.phase_phi)));
        }
        Ok(())
    }

    /// True when `|phi|` exceeds the small-offset regime of the field model.
    pub fn phase_out_of_regime(&self) -> bool {
        self.phase_phi.abs() > PHASE_VALIDITY_LIMIT
    }

    pub fn with_omega(mut self, omega: f64) -> Self {
        self.mod_omega = omega;
        self
    }

    pub fn with_phi(mut self, phi: f64) -> Self {
        self.phase_phi = phi;
        self
    }

    /// Phase offset that produces `alpha3` at modulation frequency `omega`.
    pub fn phi_for_alpha3(&self, alpha3: f64, omega: f64) -> f64 {
        alpha3 * omega * self.species.hbar / (self.species.moment() * self.bias_bb)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CharacteristicFrequencies {
    /// Larmor frequency in the offset field (rad/s); carries the sign of phi.
    pub larmor_omega_l: f64,
    /// Transverse motional frequency (rad/s).
    pub transverse_omega_perp: f64,
    /// Rabi frequency of the moment in the gradient (rad/s).
    pub rabi_omega: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlphaParams {
    pub alpha1: f64,
    pub alpha2: f64,
    pub alpha3: f64,
}

impl AlphaParams {
    pub const ZERO: AlphaParams = AlphaParams { alpha1: 0.0, alpha2: 0.0, alpha3: 0.0 };

    pub fn new(alpha1: f64, alpha2: f64, alpha3: f64) -> Self {
        Self { alpha1, alpha2, alpha3 }
    }

    /// Accepts the closed physical domain `alpha1, alpha2 >= 0` so that the
    /// uncoupled limit stays representable.
    pub fn check(&self) -> Result<()> {
        if !(self.alpha1.is_finite() && self.alpha2.is_finite() && self.alpha3.is_finite()) {
            return Err(Error::invalid(format!("non-finite alphas {self:?}")));
        }
        if self.alpha1 < 0.0 || self.alpha2 < 0.0 {
            return Err(Error::invalid(format!("alpha1 and alpha2 must be >= 0, got {self:?}")));
        }
        Ok(())
    }

    pub fn ratio_a2_a1(&self) -> f64 {
        self.alpha2 / self.alpha1
    }
}

pub fn characteristic_frequencies(p: &PhysicalParams) -> Result<CharacteristicFrequencies> {
    p.validate()?;
    let s = &p.species;
    let moment = s.moment();
    let freqs = CharacteristicFrequencies {
        larmor_omega_l: moment * p.phase_phi * p.bias_bb / s.hbar,
        transverse_omega_perp: (moment * p.gradient_b / (s.mass_kg * p.wire_pitch_l)).sqrt(),
        rabi_omega: moment * p.gradient_b * p.wire_pitch_l / s.hbar,
    };
    let all_finite =
        freqs.larmor_omega_l.is_finite() && freqs.transverse_omega_perp.is_finite() && freqs.rabi_omega.is_finite();
    if !all_finite || freqs.transverse_omega_perp <= 0.0 || freqs.rabi_omega <= 0.0 {
        return Err(Error::invalid(format!("degenerate characteristic frequencies {freqs:?}")));
    }
    Ok(freqs)
}

pub fn alphas_from_physical(p: &PhysicalParams) -> Result<AlphaParams> {
    let freqs = characteristic_frequencies(p)?;
    Ok(alphas_at_omega(&freqs, p.mod_omega))
}

/// The alphas for given characteristic frequencies at modulation `omega`.
pub fn alphas_at_omega(freqs: &CharacteristicFrequencies, omega: f64) -> AlphaParams {
    let w = freqs.transverse_omega_perp / omega;
    AlphaParams { alpha1: w * w, alpha2: freqs.rabi_omega / omega, alpha3: freqs.larmor_omega_l / omega }
}

/// Modulation frequency at which `alpha2 / alpha1` equals `ratio_a2_a1`.
pub fn omega_from_alpha_ratio(ratio_a2_a1: f64, freqs: &CharacteristicFrequencies) -> Result<f64> {
    if !(ratio_a2_a1.is_finite() && ratio_a2_a1 > 0.0) {
        return Err(Error::invalid(format!("alpha2/alpha1 ratio must be > 0, got {ratio_a2_a1}")));
    }
    if freqs.rabi_omega == 0.0 || !freqs.rabi_omega.is_finite() {
        return Err(Error::invalid("Rabi frequency must be nonzero"));
    }
    let wp = freqs.transverse_omega_perp;
    Ok(ratio_a2_a1 * wp * wp / freqs.rabi_omega)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    // Independent evaluation of the defining formulas with literal
    // CODATA-2018 numbers.
    const MU_B: f64 = 9.2740100783e-24;
    const HBAR: f64 = 1.054571817e-34;
    const M_RB: f64 = 1.44316e-25;

    fn reference() -> PhysicalParams {
        PhysicalParams::rubidium87_reference()
    }

    #[test]
    fn rb87_frequencies_match_direct_evaluation() {
        let f = characteristic_frequencies(&reference()).unwrap();
        let g = 0.5;
        let wperp = (g * MU_B * 2.90 / (M_RB * 15e-6)).sqrt();
        let rabi = g * MU_B * 2.90 * 15e-6 / HBAR;
        let larmor = g * MU_B * 1e-3 * 1.5e-4 / HBAR;
        assert_relative_eq!(f.transverse_omega_perp, wperp, max_relative = 1e-5);
        assert_relative_eq!(f.rabi_omega, rabi, max_relative = 1e-9);
        assert_relative_eq!(f.larmor_omega_l, larmor, max_relative = 1e-9);
        // Rounded values quoted alongside the reference geometry.
        assert_relative_eq!(f.transverse_omega_perp, 2.49e3, max_relative = 5e-3);
        assert_relative_eq!(f.rabi_omega, 1.91e6, max_relative = 5e-3);
        assert_relative_eq!(f.larmor_omega_l, 6.6e3, max_relative = 5e-3);
    }

    #[test]
    fn zero_phase_gives_zero_larmor() {
        let f = characteristic_frequencies(&reference().with_phi(0.0)).unwrap();
        assert_eq!(f.larmor_omega_l, 0.0);
        let a = alphas_from_physical(&reference().with_phi(0.0)).unwrap();
        assert_eq!(a.alpha3, 0.0);
    }

    #[test]
    fn gradient_scaling() {
        let p = reference();
        let mut p2 = p;
        p2.gradient_b *= 2.0;
        let f1 = characteristic_frequencies(&p).unwrap();
        let f2 = characteristic_frequencies(&p2).unwrap();
        assert_relative_eq!(f2.rabi_omega, 2.0 * f1.rabi_omega, max_relative = 1e-14);
        assert_relative_eq!(f2.transverse_omega_perp, 2f64.sqrt() * f1.transverse_omega_perp, max_relative = 1e-14);
        assert_eq!(f2.larmor_omega_l, f1.larmor_omega_l);
    }

    #[test]
    fn rb87_alphas_at_ten_khz() {
        let a = alphas_from_physical(&reference()).unwrap();
        assert_relative_eq!(a.alpha1, 1.57e-3, max_relative = 5e-3);
        assert_relative_eq!(a.alpha2, 30.4, max_relative = 5e-3);
        assert_relative_eq!(a.alpha3, 0.105, max_relative = 1e-2);
    }

    #[test]
    fn tenfold_omega_scaling() {
        let p = reference();
        let a = alphas_from_physical(&p).unwrap();
        let b = alphas_from_physical(&p.with_omega(10.0 * p.mod_omega)).unwrap();
        assert_relative_eq!(b.alpha1 / a.alpha1, 1e-2, max_relative = 1e-13);
        assert_relative_eq!(b.alpha2 / a.alpha2, 1e-1, max_relative = 1e-13);
        assert_relative_eq!(b.alpha3 / a.alpha3, 1e-1, max_relative = 1e-13);
    }

    #[test]
    fn ratio_inversion() {
        let f = characteristic_frequencies(&reference()).unwrap();
        let w = omega_from_alpha_ratio(6e3, &f).unwrap();
        let direct = 6e3 * f.transverse_omega_perp.powi(2) / f.rabi_omega;
        assert_relative_eq!(w, direct, max_relative = 1e-15);
        assert_relative_eq!(w, 1.95e4, max_relative = 5e-3);
        assert_relative_eq!(w / (2.0 * PI), 3.1e3, max_relative = 1e-2);

        let tiny = omega_from_alpha_ratio(1e-300, &f).unwrap();
        assert!(tiny > 0.0 && tiny < 1e-290);
        assert!(omega_from_alpha_ratio(0.0, &f).is_err());
        let no_rabi = CharacteristicFrequencies { rabi_omega: 0.0, ..f };
        assert!(omega_from_alpha_ratio(1.0, &no_rabi).is_err());
    }

    #[test]
    fn invalid_inputs_rejected() {
        let mut p = reference();
        p.wire_pitch_l = -1e-6;
        assert!(characteristic_frequencies(&p).is_err());
        let mut p = reference();
        p.mod_omega = 0.0;
        assert!(alphas_from_physical(&p).is_err());
        let mut p = reference();
        p.gradient_b = 1e308;
        p.wire_pitch_l = 1e308;
        assert!(characteristic_frequencies(&p).is_err());
        assert!(reference().with_phi(0.5).phase_out_of_regime());
        assert!(!reference().phase_out_of_regime());
    }

    fn arb_params() -> impl Strategy<Value = PhysicalParams> {
        (1e-27f64..1e-24, 0.1f64..3.0, 0.01f64..100.0, 1e-6f64..1e-2, -0.3f64..0.3, 1e-6f64..1e-3, 1e2f64..1e7)
            .prop_map(|(mass, g, b, bb, phi, l, w)| PhysicalParams {
                species: SpeciesConstants::custom(mass, g).unwrap(),
                gradient_b: b,
                bias_bb: bb,
                phase_phi: phi,
                wire_pitch_l: l,
                mod_omega: w,
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn alpha_identities_hold(p in arb_params()) {
            let f = characteristic_frequencies(&p).unwrap();
            let a = alphas_from_physical(&p).unwrap();
            let w = p.mod_omega;
            let prod = f.transverse_omega_perp.powi(2) * f.rabi_omega / w.powi(3);
            let ratio = f.rabi_omega * w / f.transverse_omega_perp.powi(2);
            prop_assert!(((a.alpha1 * a.alpha2) / prod - 1.0).abs() <= 1e-12);
            prop_assert!((a.ratio_a2_a1() / ratio - 1.0).abs() <= 1e-12);
        }

        #[test]
        fn frequencies_round_trip(p in arb_params()) {
            let f = characteristic_frequencies(&p).unwrap();
            let a = alphas_from_physical(&p).unwrap();
            let w = p.mod_omega;
            prop_assert!(((a.alpha1.sqrt() * w) / f.transverse_omega_perp - 1.0).abs() <= 1e-12);
            prop_assert!(((a.alpha2 * w) / f.rabi_omega - 1.0).abs() <= 1e-12);
            if f.larmor_omega_l != 0.0 {
                prop_assert!(((a.alpha3 * w) / f.larmor_omega_l - 1.0).abs() <= 1e-12);
            }
            prop_assert_eq!(f.larmor_omega_l.signum(), p.phase_phi.signum());
            let back = omega_from_alpha_ratio(a.ratio_a2_a1(), &f).unwrap();
            prop_assert!((back / w - 1.0).abs() <= 1e-12);
        }
    }
}
