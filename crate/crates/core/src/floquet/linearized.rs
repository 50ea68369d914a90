use serde::{Deserialize, Serialize};

use crate::guide::BranchIndex;
use crate::params::AlphaParams;

pub type Matrix6 = nalgebra::Matrix6<f64>;

pub const STATE_ORDER: [&str; 6] = ["dXc", "dXs", "dZc", "dZs", "dtheta", "dnu"];

/// A time-dependent coefficient matrix `A(tau)` of a linear system
/// `Phi' = A(tau) Phi`.
pub trait Generator: Sync {
    fn at(&self, tau: f64) -> Matrix6;
}

impl<F> Generator for F
where
    F: Fn(f64) -> Matrix6 + Sync,
{
    fn at(&self, tau: f64) -> Matrix6 {
        self(tau)
    }
}

/// Envelope equations linearized around the `(k, m)` steady orbit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearizedSystem {
    pub alphas: AlphaParams,
    pub branch: BranchIndex,
}

impl LinearizedSystem {
    pub fn new(alphas: AlphaParams, branch: BranchIndex) -> Self {
        Self { alphas, branch }
    }

    /// Rough magnitude of `A`, `alpha1 alpha2 + |alpha3| + 1`.
    pub fn scale(&self) -> f64 {
        self.alphas.alpha1 * self.alphas.alpha2 + self.alphas.alpha3.abs() + 1.0
    }
}

impl Generator for LinearizedSystem {
    fn at(&self, tau: f64) -> Matrix6 {
        build_a(&self.alphas, self.branch, tau)
    }
}

/// Rate at which the spin-angle perturbations rotate into each other.
pub fn f_coeff(a: &AlphaParams, branch: BranchIndex, tau: f64) -> f64 {
    let (s, c) = tau.sin_cos();
    branch.sign_k() * (branch.sign_km() * a.alpha1 * a.alpha2 * c * c + a.alpha3 * s)
}

pub fn build_a(a: &AlphaParams, branch: BranchIndex, tau: f64) -> Matrix6 {
    let (s, c) = tau.sin_cos();
    let f = branch.sign_k() * (branch.sign_km() * a.alpha1 * a.alpha2 * c * c + a.alpha3 * s);
    let mut m = Matrix6::zeros();
    m[(0, 1)] = -0.5;
    m[(1, 0)] = 0.5;
    m[(1, 5)] = branch.sign_m() * 0.5 * a.alpha1;
    m[(2, 3)] = -0.5;
    m[(3, 2)] = 0.5;
    m[(4, 0)] = a.alpha2 * c * c;
    m[(4, 1)] = a.alpha2 * s * c;
    m[(4, 5)] = f;
    m[(5, 4)] = -f;
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::guide::{envelope_rhs, steady_orbit, EnvelopeState};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{FRAC_PI_2, TAU};

    fn random_alphas(rng: &mut ChaCha8Rng) -> AlphaParams {
        AlphaParams::new(
            10f64.powf(rng.random_range(-4.0..-1.0)),
            10f64.powf(rng.random_range(-1.0..2.0)),
            rng.random_range(-1.0..1.0),
        )
    }

    #[test]
    fn f_examples() {
        let a = AlphaParams::new(2e-3, 40.0, 0.3);
        let b10 = BranchIndex::new(1, 0);
        assert!((f_coeff(&a, b10, 0.0) - a.alpha1 * a.alpha2).abs() < 1e-15);
        assert!((f_coeff(&a, b10, FRAC_PI_2) + a.alpha3).abs() < 1e-15);
        assert!((f_coeff(&a, BranchIndex::new(0, 0), FRAC_PI_2) - a.alpha3).abs() < 1e-15);
    }

    #[test]
    fn trace_free_and_periodic() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..10_000 {
            let a = random_alphas(&mut rng);
            let b = BranchIndex::new(rng.random_range(-3..4), rng.random_range(-3..4));
            let tau = rng.random_range(-10.0..10.0);
            let m = build_a(&a, b, tau);
            assert_eq!(m.trace(), 0.0);
            let shifted = build_a(&a, b, tau + TAU);
            let d = (m - shifted).amax();
            // Absolute rounding of tau + 2 pi is amplified by the coupling size.
            let scale = 1.0 + a.alpha2 + a.alpha3.abs();
            assert!(d <= 1e-14 * scale, "{d:e} {a:?} {tau}");
        }
    }

    #[test]
    fn quarter_period_rows() {
        let a = AlphaParams::new(3e-3, 20.0, 0.6);
        let m = build_a(&a, BranchIndex::new(1, 0), FRAC_PI_2);
        let row5: Vec<f64> = m.row(4).iter().copied().collect();
        let row6: Vec<f64> = m.row(5).iter().copied().collect();
        let tol = 1e-14;
        let expect5 = [0.0, 0.0, 0.0, 0.0, 0.0, -0.6];
        let expect6 = [0.0, 0.0, 0.0, 0.0, 0.6, 0.0];
        for i in 0..6 {
            assert!((row5[i] - expect5[i]).abs() < tol, "row5 {row5:?}");
            assert!((row6[i] - expect6[i]).abs() < tol, "row6 {row6:?}");
        }
        assert_eq!(m[(1, 5)], 1.5e-3);
        assert_eq!(build_a(&a, BranchIndex::new(1, 1), 0.3)[(1, 5)], -1.5e-3);
    }

    #[test]
    fn uncoupled_structure() {
        let m = build_a(&AlphaParams::ZERO, BranchIndex::new(1, 0), 0.7);
        let mut expect = Matrix6::zeros();
        expect[(0, 1)] = -0.5;
        expect[(1, 0)] = 0.5;
        expect[(2, 3)] = -0.5;
        expect[(3, 2)] = 0.5;
        assert_eq!(m, expect);
    }

    /// Central-difference Jacobian of the envelope equations at the steady
    /// point reproduces the closed-form matrix.
    #[test]
    fn matches_envelope_jacobian() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20 {
            let a = random_alphas(&mut rng);
            for (k, m) in [(0, 0), (0, 1), (1, 0), (1, 1), (2, -1)] {
                let branch = BranchIndex::new(k, m);
                let tau = rng.random_range(0.0..TAU);
                let base = steady_orbit(branch, &a).envelope_state(tau).to_vector();
                let exact = build_a(&a, branch, tau);
                let eps = 1e-6;
                for j in 0..6 {
                    let mut up = base;
                    let mut dn = base;
                    up[j] += eps;
                    dn[j] -= eps;
                    let fu = envelope_rhs(&EnvelopeState::from_vector(&up, tau), &a).unwrap();
                    let fd = envelope_rhs(&EnvelopeState::from_vector(&dn, tau), &a).unwrap();
                    let col = (fu - fd) / (2.0 * eps);
                    for i in 0..6 {
                        let tol = 1e-7 * (1.0 + exact[(i, j)].abs() + a.alpha2);
                        assert!(
                            (col[i] - exact[(i, j)]).abs() < tol,
                            "entry ({i},{j}) fd {} exact {}",
                            col[i],
                            exact[(i, j)]
                        );
                    }
                }
            }
        }
    }
}
