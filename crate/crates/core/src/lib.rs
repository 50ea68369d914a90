//! Orbital stability of a time-modulated magnetic waveguide whose offset
//! field is generated by a small phase error between the wire currents.
//!
//! The crate converts hardware parameters into the dimensionless couplings
//! ([`params`]), integrates the spin-motion dynamics ([`guide`]), computes
//! Floquet multipliers of the dynamics linearized around the steady orbits
//! ([`floquet`]), evaluates the analytic stability bound ([`bounds`]) and
//! scans parameter planes in parallel ([`scan`]).

pub mod bounds;
pub mod constants;
mod error;
pub mod floquet;
pub mod fmt;
pub mod guide;
pub mod ode;
pub mod params;
pub mod scan;
pub mod verify;

pub use constants::SpeciesConstants;
pub use error::{Error, Result};
pub use floquet::{
    classify, monodromy, Backend, BackendKind, LinearizedSystem, MonodromyResult, MonodromySettings, SeriesSettings,
};
pub use guide::{BranchIndex, EnvelopeState, NonlinearState, SteadyOrbit};
pub use params::{AlphaParams, CharacteristicFrequencies, PhysicalParams};
