//! Truncated Peano-Baker series for the fundamental matrix.
//!
//! The order-`N` partial sum `I + int A + int A int A + ...` equals the
//! `N`-th Picard iterate `Phi_{j+1}(t) = I + int_0^t A(s) Phi_j(s) ds`
//! started from `Phi_0 = I`, so it is computed that way on a uniform grid
//! with cumulative Simpson quadrature. Over a full period the partial sum
//! alone is not accurate (the rotation blocks turn by pi), so the interval
//! may be cut into segments whose partial sums are multiplied together.

use serde::{Deserialize, Serialize};

use super::linearized::{Generator, Matrix6};
use crate::error::{Error, Result};

/// Target truncation error used when the segment count is chosen
/// automatically.
pub const SERIES_PRECISION: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesSettings {
    /// Number of iterated integrals kept.
    pub order: usize,
    /// Odd number of quadrature nodes across the whole interval.
    pub nodes: usize,
    /// Number of segments; `0` selects the smallest count whose
    /// truncation estimate is below [`SERIES_PRECISION`]. `1` is the plain
    /// partial sum over the whole interval.
    pub segments: usize,
}

impl Default for SeriesSettings {
    fn default() -> Self {
        Self { order: 4, nodes: 2049, segments: 0 }
    }
}

impl SeriesSettings {
    pub fn validate(&self) -> Result<()> {
        if self.order < 1 {
            return Err(Error::invalid("series order must be >= 1"));
        }
        if self.nodes < 129 {
            return Err(Error::invalid(format!("quadrature nodes must be >= 129, got {}", self.nodes)));
        }
        if self.nodes & 1 == 0 {
            return Err(Error::invalid(format!(
                "quadrature nodes must be odd for composite Simpson, got {}",
                self.nodes
            )));
        }
        Ok(())
    }
}

fn sup_norm<G: Generator + ?Sized>(sys: &G, tau_end: f64) -> f64 {
    // Infinity norm sampled densely; A is a trigonometric polynomial of
    // low degree so 512 samples per period resolve its maximum.
    let samples = ((tau_end / std::f64::consts::TAU) * 512.0).ceil().max(64.0) as usize;
    (0..=samples)
        .map(|i| {
            let m = sys.at(tau_end * i as f64 / samples as f64);
            m.row_iter().map(|r| r.iter().map(|v| v.abs()).sum::<f64>()).fold(0.0, f64::max)
        })
        .fold(0.0, f64::max)
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

/// Summed remainder estimate `K^(N+1) / (N+1)! * e^K` over segments,
/// with `K = sup|A| * segment length`.
pub fn truncation_bound<G: Generator + ?Sized>(sys: &G, tau_end: f64, order: usize, segments: usize) -> f64 {
    let k = sup_norm(sys, tau_end) * tau_end / segments.max(1) as f64;
    segments.max(1) as f64 * k.powi(order as i32 + 1) / factorial(order + 1) * k.exp()
}

/// Smallest segment count whose truncation estimate is below `precision`.
pub fn auto_segments<G: Generator + ?Sized>(sys: &G, tau_end: f64, order: usize, precision: f64) -> usize {
    let sup = sup_norm(sys, tau_end);
    let bound = |n: usize| {
        let k = sup * tau_end / n as f64;
        n as f64 * k.powi(order as i32 + 1) / factorial(order + 1) * k.exp()
    };
    let mut n = 1;
    while bound(n) >= precision && n < (1 << 20) {
        n *= 2;
    }
    // Bisect down between n/2 and n for the smallest passing count.
    let (mut lo, mut hi) = (n / 2, n);
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if bound(mid) < precision {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi.max(1)
}

impl SeriesSettings {
    pub(crate) fn resolved_segments<G: Generator + ?Sized>(&self, sys: &G, tau_end: f64) -> usize {
        if self.segments == 0 {
            auto_segments(sys, tau_end, self.order, SERIES_PRECISION)
        } else {
            self.segments
        }
    }
}

/// Order-`order` Picard iterate on `[t0, t1]` from the identity, with
/// `nodes` (odd, >= 3) grid points.
fn picard_segment<G: Generator + ?Sized>(sys: &G, t0: f64, t1: f64, order: usize, nodes: usize) -> Matrix6 {
    let h = (t1 - t0) / (nodes - 1) as f64;
    let a: Vec<Matrix6> = (0..nodes).map(|i| sys.at(t0 + i as f64 * h)).collect();
    let mut phi = vec![Matrix6::identity(); nodes];
    let mut integrand = vec![Matrix6::zeros(); nodes];
    for _ in 0..order {
        for i in 0..nodes {
            integrand[i] = a[i] * phi[i];
        }
        let mut acc_even = Matrix6::zeros();
        phi[0] = Matrix6::identity();
        for i in (2..nodes).step_by(2) {
            // Odd node from the third-order half-panel rule, even node from
            // composite Simpson.
            let g = &integrand;
            let odd = acc_even + (g[i - 2] * 5.0 + g[i - 1] * 8.0 - g[i]) * (h / 12.0);
            acc_even += (g[i - 2] + g[i - 1] * 4.0 + g[i]) * (h / 3.0);
            phi[i - 1] = Matrix6::identity() + odd;
            phi[i] = Matrix6::identity() + acc_even;
        }
    }
    phi[nodes - 1]
}

/// Fundamental matrix at `tau_end` from the truncated series.
pub fn fundamental_matrix_series<G: Generator + ?Sized>(
    sys: &G,
    tau_end: f64,
    settings: &SeriesSettings,
) -> Result<Matrix6> {
    settings.validate()?;
    if !tau_end.is_finite() || tau_end < 0.0 {
        return Err(Error::invalid(format!("tau_end must be finite and >= 0, got {tau_end}")));
    }
    if tau_end == 0.0 {
        return Ok(Matrix6::identity());
    }
    let segments = settings.resolved_segments(sys, tau_end);
    // Share the node budget across segments, at least one Simpson panel each.
    let intervals = (settings.nodes - 1).div_ceil(segments);
    let per_segment = intervals + intervals % 2 + 1;
    let width = tau_end / segments as f64;
    let mut phi = Matrix6::identity();
    for s in 0..segments {
        let t0 = s as f64 * width;
        let t1 = if s + 1 == segments { tau_end } else { t0 + width };
        phi = picard_segment(sys, t0, t1, settings.order, per_segment) * phi;
    }
    if phi.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite { tau: tau_end });
    }
    Ok(phi)
}
