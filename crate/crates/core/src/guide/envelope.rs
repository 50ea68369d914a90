use std::cell::Cell;
use std::f64::consts::TAU;

use nalgebra::Vector6;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ode::rk4_step;
use crate::params::AlphaParams;

/// Below this `|sin(nu)|` the `cot(nu)` term is treated as a pole.
pub const SINGULAR_SIN_NU: f64 = 1e-12;

/// Slowly varying envelopes `X = Xc cos(tau) + Xs sin(tau)` (same for Z)
/// and spherical angles of the moment, `n = (cos t sin v, sin t sin v, cos v)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeState {
    pub xc: f64,
    pub xs: f64,
    pub zc: f64,
    pub zs: f64,
    pub theta: f64,
    pub nu: f64,
    pub tau: f64,
}

impl EnvelopeState {
    /// Components in the order `(Xc, Xs, Zc, Zs, theta, nu)`.
    pub fn to_vector(&self) -> Vector6<f64> {
        Vector6::new(self.xc, self.xs, self.zc, self.zs, self.theta, self.nu)
    }

    pub fn from_vector(v: &Vector6<f64>, tau: f64) -> Self {
        Self { xc: v[0], xs: v[1], zc: v[2], zs: v[3], theta: v[4], nu: v[5], tau }
    }
}

pub fn envelope_rhs(e: &EnvelopeState, a: &AlphaParams) -> Result<Vector6<f64>> {
    rhs(e.tau, &e.to_vector(), a)
}

fn rhs(tau: f64, y: &Vector6<f64>, a: &AlphaParams) -> Result<Vector6<f64>> {
    let (xc, xs, zc, zs, theta, nu) = (y[0], y[1], y[2], y[3], y[4], y[5]);
    let (sin_nu, cos_nu) = nu.sin_cos();
    if sin_nu.abs() < SINGULAR_SIN_NU {
        return Err(Error::SingularCoordinate { tau, sin_nu });
    }
    let (sin_th, cos_th) = theta.sin_cos();
    let (s, c) = tau.sin_cos();
    let (c2, sc) = (c * c, s * c);

    // Field seen by the moment along z and x, in units of the modulation.
    let drive_z = a.alpha2 * (zc * c2 + zs * sc) + a.alpha3 * s;
    let drive_x = a.alpha2 * (xc * c2 + xs * sc);
    let theta_dot = if cos_th == 0.0 { drive_x } else { -cos_th * (cos_nu / sin_nu) * drive_z + drive_x };
    Ok(Vector6::new(
        -0.5 * xs,
        0.5 * xc - 0.5 * a.alpha1 * cos_nu,
        -0.5 * zs,
        0.5 * zc - 0.5 * a.alpha1 * cos_th * sin_nu,
        theta_dot,
        -sin_th * drive_z,
    ))
}

/// RK4 integration of the envelope equations, sampled every step. Used to
/// validate the averaged model against the full dynamics.
pub fn integrate_envelope(
    e0: &EnvelopeState,
    a: &AlphaParams,
    periods: f64,
    steps_per_period: usize,
) -> Result<Vec<EnvelopeState>> {
    if steps_per_period < 64 {
        return Err(Error::invalid(format!("steps_per_period must be >= 64, got {steps_per_period}")));
    }
    let h = TAU / steps_per_period as f64;
    let steps = (periods * steps_per_period as f64).round() as usize;
    let mut out = Vec::with_capacity(steps + 1);
    out.push(*e0);
    let mut y = e0.to_vector();
    for i in 0..steps {
        let t = e0.tau + i as f64 * h;
        // RK4 stages may land on the pole; surface it as the error it is.
        let failure = Cell::new(None);
        let f = |tt: f64, yy: &Vector6<f64>| match rhs(tt, yy, a) {
            Ok(d) => d,
            Err(err) => {
                if let (None, Error::SingularCoordinate { tau, sin_nu }) = (failure.get(), err) {
                    failure.set(Some((tau, sin_nu)));
                }
                Vector6::from_element(f64::NAN)
            }
        };
        y = rk4_step(&f, t, &y, h);
        if let Some((tau, sin_nu)) = failure.get() {
            return Err(Error::SingularCoordinate { tau, sin_nu });
        }
        out.push(EnvelopeState::from_vector(&y, e0.tau + (i + 1) as f64 * h));
    }
    Ok(out)
}
