//! Analytic stability bound from the rotating-frame phase `beta`.
//!
//! `beta` solves `beta' + f = 1` with `beta(0) = 0`. Requiring
//! `beta(pi) = beta(2 pi)` gives a linear relation between `alpha1 * alpha2`
//! and `alpha3`, which maps to a curve in the `(omega, omega_L)` plane.

use std::f64::consts::PI;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fmt::num;
use crate::guide::BranchIndex;
use crate::params::{alphas_at_omega, AlphaParams, CharacteristicFrequencies};

pub const BOUND_LABEL: &str = "estimated upper bound";

pub const BOUNDARY_CSV_HEADER: &str = "omega_rad_s,omega_L_rad_s,alpha1,alpha2,alpha3";

/// Closed-form `beta(tau) = tau - int_0^tau f`.
pub fn beta(a: &AlphaParams, branch: BranchIndex, tau: f64) -> f64 {
    let p = a.alpha1 * a.alpha2;
    tau - branch.sign_k()
        * (branch.sign_km() * p * (tau / 2.0 + (2.0 * tau).sin() / 4.0) + a.alpha3 * (1.0 - tau.cos()))
}

/// Periodicity defects of `beta`. Only `second_half` enters the bound; the
/// other is reported alongside.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BetaResiduals {
    /// `beta(2 pi) - beta(pi)`.
    pub second_half: f64,
    /// `beta(pi) - beta(0)`.
    pub first_half: f64,
}

pub fn beta_residuals(a: &AlphaParams, branch: BranchIndex) -> BetaResiduals {
    let b_pi = beta(a, branch, PI);
    BetaResiduals { second_half: beta(a, branch, 2.0 * PI) - b_pi, first_half: b_pi }
}

/// `(-1)^k [(-1)^(k+m) pi a1 a2 / 2 - 2 a3] - pi`; zero on the bound.
pub fn equation_of_state_residual(a: &AlphaParams, branch: BranchIndex) -> f64 {
    branch.sign_k() * (branch.sign_km() * PI * a.alpha1 * a.alpha2 / 2.0 - 2.0 * a.alpha3) - PI
}

/// The `alpha3` that puts `(alpha1, alpha2)` on the bound of `branch`.
pub fn bound_alpha3(branch: BranchIndex, alpha1: f64, alpha2: f64) -> f64 {
    (branch.sign_km() * PI * alpha1 * alpha2 / 2.0 - branch.sign_k() * PI) / 2.0
}

/// Modulation frequency at which `alpha1 * alpha2 = 2`, below which no
/// `(k odd, m even)` bound exists.
pub fn threshold_omega(freqs: &CharacteristicFrequencies) -> f64 {
    let wp = freqs.transverse_omega_perp;
    (wp * wp * freqs.rabi_omega / 2.0).cbrt()
}

/// `alpha2 / alpha1` at the threshold frequency.
pub fn threshold_ratio(freqs: &CharacteristicFrequencies) -> f64 {
    let wp2 = freqs.transverse_omega_perp.powi(2);
    (freqs.rabi_omega.powi(4) / (2.0 * wp2 * wp2)).cbrt()
}

/// Residual of `omega^2 (omega - 2 omega_L / pi) - omega_perp^2 Omega / 2`,
/// relative to the larger of its two terms.
pub fn cubic_bound_residual(freqs: &CharacteristicFrequencies, omega: f64, omega_l: f64) -> f64 {
    let lhs = omega * omega * (omega - 2.0 * omega_l / PI);
    let rhs = freqs.transverse_omega_perp.powi(2) * freqs.rabi_omega / 2.0;
    (lhs - rhs) / lhs.abs().max(rhs.abs())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundSample {
    pub omega: f64,
    pub omega_l: f64,
    pub alpha1: f64,
    pub alpha2: f64,
    pub alpha3: f64,
}

impl BoundSample {
    pub fn alphas(&self) -> AlphaParams {
        AlphaParams::new(self.alpha1, self.alpha2, self.alpha3)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundCurve {
    pub branch: BranchIndex,
    pub label: String,
    pub samples: Vec<BoundSample>,
    pub threshold_omega: f64,
}

#[derive(Serialize)]
struct BoundSidecar<'a> {
    label: &'a str,
    branch: BranchIndex,
    threshold_omega_rad_s: f64,
    threshold_hz: f64,
    n_samples: usize,
}

impl BoundCurve {
    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "{BOUNDARY_CSV_HEADER}")?;
        for s in &self.samples {
            writeln!(w, "{},{},{},{},{}", num(s.omega), num(s.omega_l), num(s.alpha1), num(s.alpha2), num(s.alpha3))?;
        }
        Ok(())
    }

    pub fn sidecar_json(&self) -> serde_json::Value {
        serde_json::to_value(BoundSidecar {
            label: &self.label,
            branch: self.branch,
            threshold_omega_rad_s: self.threshold_omega,
            threshold_hz: self.threshold_omega / (2.0 * PI),
            n_samples: self.samples.len(),
        })
        .expect("sidecar is plain data")
    }
}

/// Bound sampled geometrically in `omega` over `omega_range`.
///
/// For even `m` the curve only exists above the threshold frequency, where
/// it leaves the `omega_L = 0` axis; the range is clipped there and the
/// threshold point is the first sample. An empty feasible range gives an
/// empty curve that still carries the threshold.
pub fn bound_curve(
    freqs: &CharacteristicFrequencies,
    branch: BranchIndex,
    omega_range: (f64, f64),
    n_samples: usize,
) -> Result<BoundCurve> {
    let (lo, hi) = omega_range;
    if !(lo.is_finite() && hi.is_finite() && lo > 0.0 && hi >= lo) {
        return Err(Error::invalid(format!("omega range must satisfy 0 < lo <= hi, got ({lo}, {hi})")));
    }
    if n_samples < 2 {
        return Err(Error::invalid("bound curve needs at least 2 samples"));
    }
    let w_th = threshold_omega(freqs);
    let mut curve = BoundCurve {
        branch,
        label: BOUND_LABEL.to_string(),
        samples: Vec::with_capacity(n_samples),
        threshold_omega: w_th,
    };
    let clipped = branch.sign_m() > 0.0;
    let start = if clipped { lo.max(w_th) } else { lo };
    if start > hi {
        return Ok(curve);
    }
    let ratio = (hi / start).ln() / (n_samples - 1) as f64;
    for i in 0..n_samples {
        let omega = if i + 1 == n_samples { hi } else { start * (ratio * i as f64).exp() };
        let a = alphas_at_omega(freqs, omega);
        let alpha3 = if clipped && omega == w_th { 0.0 } else { bound_alpha3(branch, a.alpha1, a.alpha2) };
        curve.samples.push(BoundSample { omega, omega_l: alpha3 * omega, alpha1: a.alpha1, alpha2: a.alpha2, alpha3 });
    }
    Ok(curve)
}
