//! Seeded self-checks over random parameter draws, plus the comparison
//! between Floquet growth and the full nonlinear dynamics.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::floquet::{
    conjugate_pairing_defect, eigenvector, fundamental_matrix_propagate, fundamental_matrix_series, monodromy,
    LinearizedSystem, MonodromySettings, SeriesSettings,
};
use crate::guide::{integrate_nonlinear, steady_orbit, BranchIndex, NonlinearSettings, NonlinearState};
use crate::params::AlphaParams;
use crate::scan::{compare_symmetry, run_scan, AxisQuantity, AxisScale, ScanAxis, ScanMode, ScanSpec};

pub const DET_TOLERANCE: f64 = 1e-6;
pub const PAIRING_TOLERANCE: f64 = 1e-8;
pub const STEADY_TOLERANCE: f64 = 1e-6;
pub const AGREEMENT_TOLERANCE: f64 = 1e-3;

/// Box in which the order-4 series backend is documented to agree with
/// propagation: log-uniform `alpha1` and `alpha2`, uniform `alpha3`.
pub const SERIES_VALIDITY_ALPHA1: (f64, f64) = (1e-4, 1e-1);
pub const SERIES_VALIDITY_ALPHA2: (f64, f64) = (1e-1, 1e2);
pub const SERIES_VALIDITY_ALPHA3: (f64, f64) = (-1.0, 1.0);

/// Steps per period of the propagation reference in backend comparisons.
pub const REFERENCE_STEPS: usize = 1 << 14;

const BRANCHES: [BranchIndex; 4] =
    [BranchIndex::new(0, 0), BranchIndex::new(0, 1), BranchIndex::new(1, 0), BranchIndex::new(1, 1)];

fn log_uniform<R: Rng>(rng: &mut R, (lo, hi): (f64, f64)) -> f64 {
    (rng.random_range(lo.ln()..hi.ln())).exp()
}

/// A random point of the general draw box and a random branch.
pub fn random_draw<R: Rng>(rng: &mut R) -> (AlphaParams, BranchIndex) {
    let a =
        AlphaParams::new(log_uniform(rng, (1e-4, 1e-1)), log_uniform(rng, (1e-1, 1e2)), rng.random_range(-3.0..3.0));
    (a, BRANCHES[rng.random_range(0..4)])
}

/// A random point inside the series validity box.
pub fn random_series_point<R: Rng>(rng: &mut R) -> AlphaParams {
    AlphaParams::new(
        log_uniform(rng, SERIES_VALIDITY_ALPHA1),
        log_uniform(rng, SERIES_VALIDITY_ALPHA2),
        rng.random_range(SERIES_VALIDITY_ALPHA3.0..SERIES_VALIDITY_ALPHA3.1),
    )
}

/// `max |M_series - M_prop| / max |M_prop|`.
pub fn backend_disagreement(sys: &LinearizedSystem, series: &SeriesSettings) -> Result<f64> {
    let p = fundamental_matrix_propagate(sys, TAU, REFERENCE_STEPS)?;
    let s = fundamental_matrix_series(sys, TAU, series)?;
    Ok((s - p).amax() / p.amax())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    /// Worst value of the checked quantity.
    pub worst: f64,
    pub tolerance: f64,
    pub samples: usize,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub checks: Vec<CheckResult>,
    pub pass: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Random draws for the determinant and pairing checks.
    pub draws: usize,
    /// Random points for the backend comparison.
    pub agreement_points: usize,
    /// Side of the mirrored symmetry scans.
    pub symmetry_n: usize,
    pub settings: MonodromySettings,
    pub workers: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            draws: 200,
            agreement_points: 20,
            symmetry_n: 8,
            settings: MonodromySettings::default(),
            workers: 0,
        }
    }
}

fn check(name: &str, worst: f64, tolerance: f64, samples: usize, detail: String) -> CheckResult {
    CheckResult { name: name.to_string(), pass: worst <= tolerance, worst, tolerance, samples, detail }
}

pub fn run_verify(cfg: &VerifyConfig) -> Result<VerifyReport> {
    cfg.settings.validate()?;
    if cfg.draws == 0 || cfg.agreement_points == 0 || cfg.symmetry_n < 2 {
        return Err(Error::invalid("verify needs draws >= 1, agreement_points >= 1, symmetry_n >= 2"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut checks = Vec::new();

    let (mut det, mut pairing) = (0.0f64, 0.0f64);
    for _ in 0..cfg.draws {
        let (a, br) = random_draw(&mut rng);
        let r = monodromy(&LinearizedSystem::new(a, br), &cfg.settings)?;
        det = det.max(r.det_residual);
        pairing = pairing.max(conjugate_pairing_defect(&r.multipliers));
    }
    checks.push(check("determinant", det, DET_TOLERANCE, cfg.draws, "max |det M - 1|".into()));
    checks.push(check("conjugate_pairing", pairing, PAIRING_TOLERANCE, cfg.draws, "max pairing defect".into()));

    let a = AlphaParams::new(1.57e-3, 30.4, 0.105);
    let mut steady = 0.0f64;
    for br in BRANCHES {
        let o = steady_orbit(br, &a);
        let tr = integrate_nonlinear(&o.initial_state(), &a, &NonlinearSettings::default())?;
        for s in &tr.samples {
            steady = steady.max(s.distance(&o.state_at(s.tau)));
        }
    }
    checks.push(check("steady_orbit", steady, STEADY_TOLERANCE, 4, "max deviation over 10 periods".into()));

    let series = SeriesSettings::default();
    let mut agree = 0.0f64;
    for _ in 0..cfg.agreement_points {
        let a = random_series_point(&mut rng);
        let br = BRANCHES[rng.random_range(0..4)];
        agree = agree.max(backend_disagreement(&LinearizedSystem::new(a, br), &series)?);
    }
    checks.push(check(
        "backend_agreement",
        agree,
        AGREEMENT_TOLERANCE,
        cfg.agreement_points,
        "max |M_series - M_prop| / max |M_prop|".into(),
    ));

    let n = cfg.symmetry_n;
    let x = ScanAxis::new(AxisQuantity::RatioA2A1, AxisScale::Log, 1e3, 1e5, n);
    let mode = ScanMode::Abstract { fixed: AlphaParams::new(0.01, 0.0, 0.0) };
    let neg = ScanSpec {
        x,
        y: ScanAxis::new(AxisQuantity::Alpha3, AxisScale::Linear, -2.0, -0.02, n),
        mode,
        branch: BranchIndex::new(0, 0),
        settings: cfg.settings,
    };
    let pos = ScanSpec {
        y: ScanAxis::new(AxisQuantity::Alpha3, AxisScale::Linear, 0.02, 2.0, n),
        branch: BranchIndex::new(1, 0),
        ..neg
    };
    let rep = compare_symmetry(&run_scan(&neg, cfg.workers)?, &run_scan(&pos, cfg.workers)?)?;
    let mut sym = check(
        "symmetry",
        (rep.mismatches + rep.failed) as f64,
        0.0,
        rep.cells,
        format!("{} of {} mirrored cells agree", rep.matches, rep.cells),
    );
    sym.pass = rep.pass;
    checks.push(sym);

    let pass = checks.iter().all(|c| c.pass);
    Ok(VerifyReport { seed: cfg.seed, checks, pass })
}

/// Growth of a small perturbation of a steady orbit under the full
/// dynamics, next to the growth predicted by the largest multiplier.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthReport {
    pub alphas: AlphaParams,
    pub branch: BranchIndex,
    pub max_modulus: f64,
    pub periods: usize,
    pub initial: f64,
    /// Deviation from the orbit after each period, max-norm.
    pub deviations: Vec<f64>,
    /// `periods * ln(max_modulus)`.
    pub predicted_log_growth: f64,
    /// `ln(final deviation / initial deviation)`.
    pub measured_log_growth: f64,
    pub diverged: bool,
}

/// Starts the full dynamics on the steady orbit displaced along the
/// dominant Floquet mode (real part, or imaginary part if that vanishes),
/// scaled to max-norm `amplitude`.
pub fn perturbation_growth(
    a: &AlphaParams,
    branch: BranchIndex,
    amplitude: f64,
    periods: usize,
    settings: &MonodromySettings,
) -> Result<GrowthReport> {
    let sys = LinearizedSystem::new(*a, branch);
    let r = monodromy(&sys, settings)?;
    let m = nalgebra::DMatrix::from_column_slice(6, 6, r.monodromy.as_slice());
    let lead = eigenvector(&m, r.multipliers[0]);
    let re: Vec<f64> = lead.vector.iter().map(|c| c.re).collect();
    let im: Vec<f64> = lead.vector.iter().map(|c| c.im).collect();
    let norm = |v: &[f64]| v.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
    let v = if norm(&re) >= 1e-3 * norm(&im) { re } else { im };
    let scale = amplitude / norm(&v);
    let d: Vec<f64> = v.iter().map(|x| x * scale).collect();

    let orbit = steady_orbit(branch, a);
    let c = orbit.initial_state();
    // Envelope displacement at tau = 0: X = Xc, Vx = Xs, and likewise for Z;
    // the angles move the moment within the tangent plane.
    let (th, nu) = (orbit.theta_star, orbit.nu_star);
    let dn = [
        -th.sin() * nu.sin() * d[4] + th.cos() * nu.cos() * d[5],
        th.cos() * nu.sin() * d[4] + th.sin() * nu.cos() * d[5],
        -nu.sin() * d[5],
    ];
    let n = [c.nx + dn[0], c.ny + dn[1], c.nz + dn[2]];
    let nn = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
    let s0 = NonlinearState {
        x: c.x + d[0],
        vx: c.vx + d[1],
        z: c.z + d[2],
        vz: c.vz + d[3],
        nx: n[0] / nn,
        ny: n[1] / nn,
        nz: n[2] / nn,
        tau: 0.0,
    };
    let initial = s0.distance(&c);
    let steps = 1024;
    let settings = NonlinearSettings {
        periods: periods as f64,
        steps_per_period: steps,
        sample_every: steps,
        ..Default::default()
    };
    let tr = integrate_nonlinear(&s0, a, &settings)?;
    let deviations: Vec<f64> = tr.samples.iter().skip(1).map(|s| s.distance(&orbit.state_at(s.tau))).collect();
    let last = deviations.last().copied().unwrap_or(initial);
    Ok(GrowthReport {
        alphas: *a,
        branch,
        max_modulus: r.max_modulus,
        periods,
        initial,
        predicted_log_growth: periods as f64 * r.max_modulus.ln(),
        measured_log_growth: (last / initial).ln(),
        diverged: tr.divergence.is_some(),
        deviations,
    })
}
