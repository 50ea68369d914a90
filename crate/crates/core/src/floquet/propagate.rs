use std::f64::consts::TAU;

use super::linearized::{Generator, Matrix6};
use crate::error::{Error, Result};

/// Coarsest allowed step density for the fundamental-matrix integrator.
pub const MIN_STEPS_PER_PERIOD: usize = 256;

/// Fundamental matrix `Phi(tau_end)` of `Phi' = A(tau) Phi`, `Phi(0) = I`,
/// by `steps` classical RK4 steps.
pub fn fundamental_matrix_propagate<G: Generator + ?Sized>(sys: &G, tau_end: f64, steps: usize) -> Result<Matrix6> {
    if !tau_end.is_finite() || tau_end < 0.0 {
        return Err(Error::invalid(format!("tau_end must be finite and >= 0, got {tau_end}")));
    }
    if tau_end == 0.0 {
        return Ok(Matrix6::identity());
    }
    let needed = (MIN_STEPS_PER_PERIOD as f64 * tau_end / TAU - 1e-9).ceil() as usize;
    if steps < needed.max(1) {
        return Err(Error::invalid(format!(
            "{steps} steps over tau = {tau_end} is coarser than {MIN_STEPS_PER_PERIOD} per period"
        )));
    }
    let h = tau_end / steps as f64;
    let half = 0.5 * h;
    let mut phi = Matrix6::identity();
    let mut a0 = sys.at(0.0);
    for i in 0..steps {
        let t = i as f64 * h;
        let am = sys.at(t + half);
        let a1 = sys.at(t + h);
        let k1 = a0 * phi;
        let k2 = am * (phi + k1 * half);
        let k3 = am * (phi + k2 * half);
        let k4 = a1 * (phi + k3 * h);
        phi += (k1 + (k2 + k3) * 2.0 + k4) * (h / 6.0);
        a0 = a1;
    }
    if phi.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite { tau: tau_end });
    }
    Ok(phi)
}
