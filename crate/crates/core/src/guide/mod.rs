//! The modulated guide: field model, full spin-motion dynamics, slow
//! envelope equations and their steady periodic orbits.

mod envelope;
mod field;
mod nonlinear;
mod steady;

pub use envelope::{envelope_rhs, integrate_envelope, EnvelopeState, SINGULAR_SIN_NU};
pub use field::{field_at, FieldModel};
pub use nonlinear::{
    integrate_nonlinear, nonlinear_rhs, Divergence, NonlinearSettings, NonlinearState, Trajectory, DIVERGENCE_LIMIT,
    TRAJECTORY_CSV_HEADER,
};
pub use steady::{steady_orbit, BranchIndex, SteadyOrbit};
