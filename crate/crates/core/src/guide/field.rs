use serde::{Deserialize, Serialize};

use crate::params::PhysicalParams;

/// First-order field of the three-wire guide near its minimum, with the
/// offset generated by the current phase error `phi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldModel {
    pub gradient_b: f64,
    pub bias_bb: f64,
    pub phase_phi: f64,
    pub omega: f64,
}

impl FieldModel {
    pub fn from_params(p: &PhysicalParams) -> Self {
        Self { gradient_b: p.gradient_b, bias_bb: p.bias_bb, phase_phi: p.phase_phi, omega: p.mod_omega }
    }

    /// `(Bx, Bz)` in tesla at position `(x, z)` (m) and time `t` (s).
    pub fn at(&self, x: f64, z: f64, t: f64) -> [f64; 2] {
        field_at(self.gradient_b, self.bias_bb, self.phase_phi, x, z, t, self.omega)
    }
}

pub fn field_at(b: f64, bias_bb: f64, phi: f64, x: f64, z: f64, t: f64, omega: f64) -> [f64; 2] {
    let (s, c) = (omega * t).sin_cos();
    [b * z * c + phi * bias_bb * s, b * x * c]
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    const B: f64 = 2.9;
    const BB: f64 = 1.5e-4;
    const PHI: f64 = 1e-3;
    const W: f64 = 6.0e4;

    #[test]
    fn zero_at_origin_at_t0() {
        assert_eq!(field_at(B, BB, PHI, 0.0, 0.0, 0.0, W), [0.0, 0.0]);
    }

    #[test]
    fn pure_offset_at_quarter_period() {
        let t = FRAC_PI_2 / W;
        let [bx, bz] = field_at(B, BB, PHI, 0.0, 0.0, t, W);
        assert!((bx - PHI * BB).abs() < 1e-20);
        assert_eq!(bz, 0.0);
    }

    #[test]
    fn diagonal_symmetry() {
        let m = FieldModel { gradient_b: B, bias_bb: BB, phase_phi: PHI, omega: W };
        for i in 0..50 {
            let t = i as f64 * 1.3e-5;
            let x = 1e-6 * (i as f64 - 20.0);
            let [bx, bz] = m.at(x, x, t);
            let offset = PHI * BB * (W * t).sin();
            assert!((bx - offset - bz).abs() <= 1e-18);
        }
    }
}
