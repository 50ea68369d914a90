//! Shared fixtures for the benchmarks.

use floguide_core::scan::{AxisQuantity, AxisScale, ScanAxis, ScanMode, ScanSpec};
use floguide_core::{AlphaParams, BranchIndex, LinearizedSystem, MonodromySettings, PhysicalParams};

/// Rb-87 reference guide at 10 kHz, branch (1, 0).
pub fn reference_system() -> LinearizedSystem {
    LinearizedSystem::new(AlphaParams::new(1.57e-3, 30.4, 0.105), BranchIndex::new(1, 0))
}

/// A strongly coupled point where the step floor raises the RK4 density.
pub fn strong_system() -> LinearizedSystem {
    LinearizedSystem::new(AlphaParams::new(0.1184, 264.0, 0.091), BranchIndex::new(1, 0))
}

/// `n` x `n` physical scan around the threshold.
pub fn threshold_scan(n: usize) -> ScanSpec {
    ScanSpec {
        x: ScanAxis::new(AxisQuantity::RatioA2A1, AxisScale::Log, 1e3, 6e4, n),
        y: ScanAxis::new(AxisQuantity::Alpha3, AxisScale::Linear, 0.0, std::f64::consts::PI, n),
        mode: ScanMode::Physical { params: PhysicalParams::rubidium87_reference() },
        branch: BranchIndex::new(1, 0),
        settings: MonodromySettings::default(),
    }
}
