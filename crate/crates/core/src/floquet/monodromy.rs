use std::f64::consts::TAU;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::eigen::{eigenvalues, eigenvector};
use super::linearized::{LinearizedSystem, Matrix6};
use super::propagate::fundamental_matrix_propagate;
use super::series::{fundamental_matrix_series, SeriesSettings};
use crate::error::{Error, Result};
use crate::guide::BranchIndex;
use crate::params::AlphaParams;

/// Width of the band above the unit circle still counted as stable.
///
/// `trace(A) = 0` forces `det(M) = 1`, so the multipliers of a stable orbit
/// lie on the unit circle and a strict `|lambda| < 1` test can never pass.
pub const DEFAULT_EPS_STAB: f64 = 1e-3;

pub const DEFAULT_PROPAGATION_STEPS: usize = 1024;

/// Relative eigenpair residual `||(M - lambda I) v|| / ||M||` required of
/// every multiplier.
pub const EIGEN_RESIDUAL_BOUND: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Backend {
    /// RK4 integration of `Phi' = A Phi` with at least `steps` per period;
    /// see [`propagation_steps`].
    Propagation { steps: usize },
    /// Truncated Peano-Baker series.
    Series(SeriesSettings),
}

impl Default for Backend {
    fn default() -> Self {
        Backend::Propagation { steps: DEFAULT_PROPAGATION_STEPS }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BackendKind {
    Series,
    Propagation,
}

impl Backend {
    pub fn kind(&self) -> BackendKind {
        match self {
            Backend::Propagation { .. } => BackendKind::Propagation,
            Backend::Series(_) => BackendKind::Series,
        }
    }

    pub fn order_or_steps(&self) -> usize {
        match self {
            Backend::Propagation { steps } => *steps,
            Backend::Series(s) => s.order,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MonodromySettings {
    pub backend: Backend,
    pub eps_stab: f64,
}

impl Default for MonodromySettings {
    fn default() -> Self {
        Self { backend: Backend::default(), eps_stab: DEFAULT_EPS_STAB }
    }
}

impl MonodromySettings {
    pub fn validate(&self) -> Result<()> {
        if !(self.eps_stab.is_finite() && self.eps_stab >= 0.0) {
            return Err(Error::invalid(format!("eps_stab must be >= 0, got {}", self.eps_stab)));
        }
        if let Backend::Series(s) = &self.backend {
            s.validate()?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonodromyResult {
    pub monodromy: Matrix6,
    /// Sorted by decreasing modulus; conjugate partners are adjacent.
    pub multipliers: Vec<Complex64>,
    pub max_modulus: f64,
    pub stable: bool,
    pub backend: BackendKind,
    pub order_or_steps: usize,
    /// `|det(M) - 1|`.
    pub det_residual: f64,
}

/// The single-point JSON report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointReport {
    pub alphas: AlphaParams,
    pub branch: BranchIndex,
    pub backend: BackendKind,
    pub order_or_steps: usize,
    pub eps_stab: f64,
    pub multipliers: Vec<[f64; 2]>,
    pub max_modulus: f64,
    pub det_residual: f64,
    pub stable: bool,
}

impl MonodromyResult {
    pub fn report(&self, sys: &LinearizedSystem, eps_stab: f64) -> PointReport {
        PointReport {
            alphas: sys.alphas,
            branch: sys.branch,
            backend: self.backend,
            order_or_steps: self.order_or_steps,
            eps_stab,
            multipliers: self.multipliers.iter().map(|c| [c.re, c.im]).collect(),
            max_modulus: self.max_modulus,
            det_residual: self.det_residual,
            stable: self.stable,
        }
    }
}

pub fn classify(max_modulus: f64, eps_stab: f64) -> bool {
    max_modulus <= 1.0 + eps_stab
}

/// Eigenvalues of a monodromy matrix, each certified by an eigenvector
/// residual, sorted by decreasing modulus.
pub fn multipliers(m: &Matrix6) -> Result<Vec<Complex64>> {
    let dm = DMatrix::from_column_slice(6, 6, m.as_slice());
    let mut values = eigenvalues(&dm)?;
    let bound = EIGEN_RESIDUAL_BOUND * dm.norm().max(f64::MIN_POSITIVE);
    for &v in &values {
        let pair = eigenvector(&dm, v);
        if pair.residual > bound {
            return Err(Error::EigenResidual { multiplier: v, residual: pair.residual, bound });
        }
    }
    values.sort_by(|a, b| b.norm().total_cmp(&a.norm()).then(b.re.total_cmp(&a.re)).then(b.im.total_cmp(&a.im)));
    Ok(values)
}

/// Largest distance from a multiplier to the conjugate of its nearest
/// partner; zero for an exactly conjugation-closed set.
pub fn conjugate_pairing_defect(values: &[Complex64]) -> f64 {
    let mut used = vec![false; values.len()];
    let mut worst: f64 = 0.0;
    for (i, v) in values.iter().enumerate() {
        if used[i] {
            continue;
        }
        used[i] = true;
        if v.im == 0.0 {
            continue;
        }
        let partner = values
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .min_by(|(_, a), (_, b)| (*a - v.conj()).norm().total_cmp(&(*b - v.conj()).norm()));
        match partner {
            Some((j, p)) => {
                used[j] = true;
                worst = worst.max((p - v.conj()).norm());
            }
            None => worst = worst.max(v.im.abs()),
        }
    }
    worst
}

/// Largest `h * scale` allowed for the propagation backend.
pub const MAX_STEP_SCALE: f64 = 0.1;

/// Bound on the spurious RK4 damping of a multiplier over one period.
pub const DAMPING_BUDGET: f64 = 1e-5;

/// Steps per period actually used: `requested`, raised when the couplings
/// are too strong for it. RK4 damps a rotation at rate `w` by about
/// `(h w)^6 / 144` per step; with `w` taken as the system scale the
/// accumulated damping over a period stays below [`DAMPING_BUDGET`].
pub fn propagation_steps(sys: &LinearizedSystem, requested: usize) -> usize {
    let s = sys.scale();
    let hs = (144.0 * DAMPING_BUDGET / (TAU * s)).powf(0.2).min(MAX_STEP_SCALE);
    let needed = (TAU * s / hs).ceil();
    if needed.is_finite() && needed > requested as f64 {
        needed as usize
    } else {
        requested
    }
}

/// Monodromy matrix over one modulation period, its multipliers and the
/// stability verdict.
pub fn monodromy(sys: &LinearizedSystem, settings: &MonodromySettings) -> Result<MonodromyResult> {
    settings.validate()?;
    sys.alphas.check()?;
    let (m, order_or_steps) = match &settings.backend {
        Backend::Propagation { steps } => {
            let n = propagation_steps(sys, *steps);
            (fundamental_matrix_propagate(sys, TAU, n)?, n)
        }
        Backend::Series(s) => (fundamental_matrix_series(sys, TAU, s)?, s.order),
    };
    let values = multipliers(&m)?;
    let max_modulus = values.iter().map(|c| c.norm()).fold(0.0, f64::max);
    Ok(MonodromyResult {
        monodromy: m,
        det_residual: (m.determinant() - 1.0).abs(),
        stable: classify(max_modulus, settings.eps_stab),
        multipliers: values,
        max_modulus,
        backend: settings.backend.kind(),
        order_or_steps,
    })
}
