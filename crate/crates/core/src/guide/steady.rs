use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use super::envelope::EnvelopeState;
use super::nonlinear::NonlinearState;
use crate::params::AlphaParams;

/// Integer labels `(k, m)` of a steady periodic orbit: the spin angles sit
/// at `theta = k pi`, `nu = (2m + 1) pi / 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BranchIndex {
    pub k: i64,
    pub m: i64,
}

fn parity_sign(n: i64) -> f64 {
    if n.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

impl BranchIndex {
    pub const fn new(k: i64, m: i64) -> Self {
        Self { k, m }
    }

    /// `(-1)^k`
    pub fn sign_k(&self) -> f64 {
        parity_sign(self.k)
    }

    /// `(-1)^m`
    pub fn sign_m(&self) -> f64 {
        parity_sign(self.m)
    }

    /// `(-1)^(k+m)`
    pub fn sign_km(&self) -> f64 {
        self.sign_k() * self.sign_m()
    }
}

impl std::fmt::Display for BranchIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(k={}, m={})", self.k, self.m)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SteadyOrbit {
    pub branch: BranchIndex,
    pub zc_star: f64,
    pub theta_star: f64,
    pub nu_star: f64,
}

pub fn steady_orbit(branch: BranchIndex, a: &AlphaParams) -> SteadyOrbit {
    SteadyOrbit {
        branch,
        zc_star: branch.sign_km() * a.alpha1,
        theta_star: branch.k as f64 * PI,
        nu_star: (2 * branch.m + 1) as f64 * FRAC_PI_2,
    }
}

impl SteadyOrbit {
    /// Moment direction along the orbit, `n = ((-1)^(k+m), 0, 0)`.
    pub fn spin_x(&self) -> f64 {
        self.branch.sign_km()
    }

    /// Full-dynamics state on the orbit at `tau = 0`.
    pub fn initial_state(&self) -> NonlinearState {
        self.state_at(0.0)
    }

    /// Exact orbit `X = 0`, `Z = Zc* cos(tau)` with the moment frozen.
    pub fn state_at(&self, tau: f64) -> NonlinearState {
        let (s, c) = tau.sin_cos();
        NonlinearState {
            x: 0.0,
            vx: 0.0,
            z: self.zc_star * c,
            vz: 0.0 - self.zc_star * s,
            nx: self.spin_x(),
            ny: 0.0,
            nz: 0.0,
            tau,
        }
    }

    pub fn envelope_state(&self, tau: f64) -> EnvelopeState {
        EnvelopeState { xc: 0.0, xs: 0.0, zc: self.zc_star, zs: 0.0, theta: self.theta_star, nu: self.nu_star, tau }
    }
}
