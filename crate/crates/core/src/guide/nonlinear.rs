use std::f64::consts::TAU;
use std::io::Write;

use nalgebra::SVector;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fmt::num;
use crate::ode::rk4_step;
use crate::params::AlphaParams;

pub type Vector7 = SVector<f64, 7>;

/// A state is considered divergent once any component exceeds this.
pub const DIVERGENCE_LIMIT: f64 = 1e12;

pub const TRAJECTORY_CSV_HEADER: &str = "tau,X,Vx,Z,Vz,nx,ny,nz";

/// Dimensionless position, velocity and moment direction at phase `tau`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NonlinearState {
    pub x: f64,
    pub vx: f64,
    pub z: f64,
    pub vz: f64,
    pub nx: f64,
    pub ny: f64,
    pub nz: f64,
    pub tau: f64,
}

impl NonlinearState {
    /// Components in the order `(X, Vx, Z, Vz, nx, ny, nz)`.
    pub fn to_vector(&self) -> Vector7 {
        Vector7::from([self.x, self.vx, self.z, self.vz, self.nx, self.ny, self.nz])
    }

    pub fn from_vector(v: &Vector7, tau: f64) -> Self {
        Self { x: v[0], vx: v[1], z: v[2], vz: v[3], nx: v[4], ny: v[5], nz: v[6], tau }
    }

    pub fn spin_norm_sq(&self) -> f64 {
        self.nx * self.nx + self.ny * self.ny + self.nz * self.nz
    }

    /// Max-norm distance over the seven dynamical components.
    pub fn distance(&self, other: &NonlinearState) -> f64 {
        (self.to_vector() - other.to_vector()).amax()
    }
}

/// Time derivative of `(X, Vx, Z, Vz, nx, ny, nz)` at phase `tau`.
pub fn nonlinear_rhs(s: &NonlinearState, a: &AlphaParams) -> Vector7 {
    rhs(s.tau, &s.to_vector(), a)
}

#[inline]
fn rhs(tau: f64, y: &Vector7, a: &AlphaParams) -> Vector7 {
    let (s, c) = tau.sin_cos();
    let (x, vx, z, vz) = (y[0], y[1], y[2], y[3]);
    let (nx, ny, nz) = (y[4], y[5], y[6]);
    Vector7::from([
        vx,
        -a.alpha1 * nz * c,
        vz,
        -a.alpha1 * nx * c,
        -a.alpha2 * ny * x * c,
        -a.alpha2 * (nz * z - nx * x) * c - a.alpha3 * nz * s,
        a.alpha2 * ny * z * c + a.alpha3 * ny * s,
    ])
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NonlinearSettings {
    /// Duration in modulation periods (may be fractional).
    pub periods: f64,
    pub steps_per_period: usize,
    /// Rescale the moment to unit length after every step.
    pub renormalize_spin: bool,
    /// Keep every `sample_every`-th step; the final state is always kept.
    pub sample_every: usize,
}

impl Default for NonlinearSettings {
    fn default() -> Self {
        Self { periods: 10.0, steps_per_period: 1024, renormalize_spin: false, sample_every: 1 }
    }
}

impl NonlinearSettings {
    pub fn validate(&self) -> Result<()> {
        if self.steps_per_period < 64 {
            return Err(Error::invalid(format!("steps_per_period must be >= 64, got {}", self.steps_per_period)));
        }
        if !(self.periods.is_finite() && self.periods >= 0.0) {
            return Err(Error::invalid(format!("periods must be >= 0, got {}", self.periods)));
        }
        if self.sample_every == 0 {
            return Err(Error::invalid("sample_every must be >= 1"));
        }
        Ok(())
    }
}

/// Where and why an integration stopped early.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Divergence {
    pub tau: f64,
    pub non_finite: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub samples: Vec<NonlinearState>,
    pub divergence: Option<Divergence>,
}

impl Trajectory {
    pub fn first(&self) -> &NonlinearState {
        &self.samples[0]
    }

    pub fn last(&self) -> &NonlinearState {
        self.samples.last().expect("trajectory always holds the initial state")
    }

    pub fn max_spin_norm_drift(&self) -> f64 {
        self.samples.iter().map(|s| (s.spin_norm_sq() - 1.0).abs()).fold(0.0, f64::max)
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "{TRAJECTORY_CSV_HEADER}")?;
        for s in &self.samples {
            writeln!(
                w,
                "{},{},{},{},{},{},{},{}",
                num(s.tau),
                num(s.x),
                num(s.vx),
                num(s.z),
                num(s.vz),
                num(s.nx),
                num(s.ny),
                num(s.nz)
            )?;
        }
        Ok(())
    }
}

/// Fixed-step RK4 integration of the full spin-motion equations starting
/// at `s0.tau`. Blow-up in unstable regions is reported through
/// [`Trajectory::divergence`], not as an error.
pub fn integrate_nonlinear(s0: &NonlinearState, a: &AlphaParams, settings: &NonlinearSettings) -> Result<Trajectory> {
    settings.validate()?;
    let h = TAU / settings.steps_per_period as f64;
    let steps = (settings.periods * settings.steps_per_period as f64).round() as usize;
    let f = |t: f64, y: &Vector7| rhs(t, y, a);

    let mut y = s0.to_vector();
    let mut samples = Vec::with_capacity(steps / settings.sample_every + 2);
    samples.push(*s0);
    let mut divergence = None;
    for i in 0..steps {
        let t = s0.tau + i as f64 * h;
        let mut next = rk4_step(&f, t, &y, h);
        if settings.renormalize_spin {
            let n = next.fixed_rows::<3>(4).norm();
            next.fixed_rows_mut::<3>(4).unscale_mut(n);
        }
        let t_next = s0.tau + (i + 1) as f64 * h;
        let non_finite = next.iter().any(|v| !v.is_finite());
        if non_finite || next.amax() > DIVERGENCE_LIMIT {
            divergence = Some(Divergence { tau: t_next, non_finite });
            // End the series on the last finite state.
            if samples.last().map(|s| s.tau) != Some(t) {
                samples.push(NonlinearState::from_vector(&y, t));
            }
            break;
        }
        y = next;
        if (i + 1) % settings.sample_every == 0 || i + 1 == steps {
            samples.push(NonlinearState::from_vector(&y, t_next));
        }
    }
    Ok(Trajectory { samples, divergence })
}
