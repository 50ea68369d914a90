//! Linearized dynamics around a steady orbit and its Floquet multipliers.
//!
//! The perturbation state is always ordered
//! `(dXc, dXs, dZc, dZs, dtheta, dnu)`; see [`STATE_ORDER`].

mod eigen;
mod linearized;
mod monodromy;
mod propagate;
mod series;

pub use eigen::{eigenvalues, eigenvector, Eigenpair};
pub use linearized::{build_a, f_coeff, Generator, LinearizedSystem, Matrix6, STATE_ORDER};
pub use monodromy::{
    classify, conjugate_pairing_defect, monodromy, multipliers, propagation_steps, Backend, BackendKind,
    MonodromyResult, MonodromySettings, PointReport, DAMPING_BUDGET, DEFAULT_EPS_STAB, DEFAULT_PROPAGATION_STEPS,
    EIGEN_RESIDUAL_BOUND, MAX_STEP_SCALE,
};
pub use propagate::{fundamental_matrix_propagate, MIN_STEPS_PER_PERIOD};
pub use series::{auto_segments, fundamental_matrix_series, truncation_bound, SeriesSettings, SERIES_PRECISION};
