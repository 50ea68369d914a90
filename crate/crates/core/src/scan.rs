//! Stability phase diagrams over two-parameter grids.
//!
//! Nodes are laid out row-major with `y` as the outer index, so node
//! `(i, j)` sits at `j * nx + i`. Rows are evaluated in parallel and
//! reassembled in order, which keeps every output independent of the
//! worker count.

use std::io::Write;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{bound_alpha3, BOUND_LABEL};
use crate::constants::CONSTANTS_VERSION;
use crate::error::{Error, Result};
use crate::floquet::{monodromy, LinearizedSystem, MonodromySettings};
use crate::fmt::num;
use crate::guide::BranchIndex;
use crate::params::{alphas_at_omega, characteristic_frequencies, omega_from_alpha_ratio, AlphaParams, PhysicalParams};

pub const SCAN_CSV_HEADER: &str = "x,y,alpha1,alpha2,alpha3,max_modulus,stable";

/// Failed-node fraction above which a scan is flagged.
pub const FAILURE_WARNING_FRACTION: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AxisQuantity {
    Alpha1,
    Alpha2,
    Alpha3,
    RatioA2A1,
    Omega,
    Phi,
}

impl AxisQuantity {
    pub fn name(&self) -> &'static str {
        match self {
            AxisQuantity::Alpha1 => "alpha1",
            AxisQuantity::Alpha2 => "alpha2",
            AxisQuantity::Alpha3 => "alpha3",
            AxisQuantity::RatioA2A1 => "ratio_a2_a1",
            AxisQuantity::Omega => "omega",
            AxisQuantity::Phi => "phi",
        }
    }

    /// Quantities that fix the modulation frequency in physical mode.
    fn sets_omega(&self) -> bool {
        matches!(self, AxisQuantity::Alpha1 | AxisQuantity::Alpha2 | AxisQuantity::RatioA2A1 | AxisQuantity::Omega)
    }
}

impl std::str::FromStr for AxisQuantity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "alpha1" => AxisQuantity::Alpha1,
            "alpha2" => AxisQuantity::Alpha2,
            "alpha3" => AxisQuantity::Alpha3,
            "ratio_a2_a1" | "ratio" => AxisQuantity::RatioA2A1,
            "omega" => AxisQuantity::Omega,
            "phi" => AxisQuantity::Phi,
            _ => return Err(Error::invalid(format!("unknown axis quantity '{s}'"))),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AxisScale {
    Linear,
    Log,
}

impl std::str::FromStr for AxisScale {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linear" | "lin" => Ok(AxisScale::Linear),
            "log" => Ok(AxisScale::Log),
            _ => Err(Error::invalid(format!("unknown axis scale '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanAxis {
    pub quantity: AxisQuantity,
    pub scale: AxisScale,
    pub min: f64,
    pub max: f64,
    pub n: usize,
}

impl ScanAxis {
    pub fn new(quantity: AxisQuantity, scale: AxisScale, min: f64, max: f64, n: usize) -> Self {
        Self { quantity, scale, min, max, n }
    }

    pub fn validate(&self) -> Result<()> {
        let q = self.quantity.name();
        if self.n < 2 {
            return Err(Error::invalid(format!("axis {q}: n must be >= 2, got {}", self.n)));
        }
        if !(self.min.is_finite() && self.max.is_finite() && self.min < self.max) {
            return Err(Error::invalid(format!("axis {q}: need finite min < max, got [{}, {}]", self.min, self.max)));
        }
        if self.scale == AxisScale::Log && self.min <= 0.0 {
            return Err(Error::invalid(format!("axis {q}: log scale needs min > 0, got {}", self.min)));
        }
        Ok(())
    }

    /// Node `i`; the end points are exact.
    pub fn value(&self, i: usize) -> f64 {
        if i == 0 {
            return self.min;
        }
        if i + 1 == self.n {
            return self.max;
        }
        let t = i as f64 / (self.n - 1) as f64;
        match self.scale {
            AxisScale::Linear => self.min + (self.max - self.min) * t,
            AxisScale::Log => (self.min.ln() + (self.max.ln() - self.min.ln()) * t).exp(),
        }
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.value(i)).collect()
    }
}

/// Where the parameters not on an axis come from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum ScanMode {
    Abstract { fixed: AlphaParams },
    Physical { params: PhysicalParams },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanSpec {
    pub x: ScanAxis,
    pub y: ScanAxis,
    #[serde(flatten)]
    pub mode: ScanMode,
    pub branch: BranchIndex,
    pub settings: MonodromySettings,
}

impl ScanSpec {
    pub fn validate(&self) -> Result<()> {
        self.x.validate()?;
        self.y.validate()?;
        self.settings.validate()?;
        let (qx, qy) = (self.x.quantity, self.y.quantity);
        if qx == qy {
            return Err(Error::invalid(format!("x and y both scan {}", qx.name())));
        }
        let pair = |a: AxisQuantity, b: AxisQuantity| (qx == a && qy == b) || (qx == b && qy == a);
        match &self.mode {
            ScanMode::Abstract { fixed } => {
                fixed.check()?;
                for q in [qx, qy] {
                    if matches!(q, AxisQuantity::Omega | AxisQuantity::Phi) {
                        return Err(Error::invalid(format!("axis {} needs physical mode", q.name())));
                    }
                }
                if pair(AxisQuantity::Alpha2, AxisQuantity::RatioA2A1) {
                    return Err(Error::invalid("alpha2 and ratio_a2_a1 cannot both be scanned"));
                }
            }
            ScanMode::Physical { params } => {
                params.validate()?;
                if qx.sets_omega() && qy.sets_omega() {
                    return Err(Error::invalid(format!(
                        "{} and {} both fix the modulation frequency",
                        qx.name(),
                        qy.name()
                    )));
                }
                if pair(AxisQuantity::Alpha3, AxisQuantity::Phi) {
                    return Err(Error::invalid("alpha3 and phi cannot both be scanned"));
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.x.n * self.y.n
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// The axis index that carries the sign of `alpha3`, if any.
    fn alpha3_axis(&self) -> Option<Axis> {
        let carries = |q: AxisQuantity| matches!(q, AxisQuantity::Alpha3 | AxisQuantity::Phi);
        if carries(self.x.quantity) {
            Some(Axis::X)
        } else if carries(self.y.quantity) {
            Some(Axis::Y)
        } else {
            None
        }
    }

    /// Alphas at grid coordinates `(x, y)`.
    pub fn resolve(&self, x: f64, y: f64) -> Result<AlphaParams> {
        Ok(self.resolve_node(x, y)?.0)
    }

    /// Alphas and, in physical mode, the parameters that produced them.
    fn resolve_node(&self, x: f64, y: f64) -> Result<(AlphaParams, Option<PhysicalParams>)> {
        let coords = [(self.x.quantity, x), (self.y.quantity, y)];
        let get = |q: AxisQuantity| coords.iter().find(|c| c.0 == q).map(|c| c.1);
        match &self.mode {
            ScanMode::Abstract { fixed } => {
                let mut a = *fixed;
                if let Some(v) = get(AxisQuantity::Alpha1) {
                    a.alpha1 = v;
                }
                if let Some(v) = get(AxisQuantity::Alpha2) {
                    a.alpha2 = v;
                }
                if let Some(v) = get(AxisQuantity::Alpha3) {
                    a.alpha3 = v;
                }
                if let Some(r) = get(AxisQuantity::RatioA2A1) {
                    a.alpha2 = r * a.alpha1;
                }
                a.check()?;
                Ok((a, None))
            }
            ScanMode::Physical { params } => {
                let mut p = *params;
                let freqs = characteristic_frequencies(&p)?;
                if let Some(w) = get(AxisQuantity::Omega) {
                    p.mod_omega = w;
                } else if let Some(r) = get(AxisQuantity::RatioA2A1) {
                    p.mod_omega = omega_from_alpha_ratio(r, &freqs)?;
                } else if let Some(a1) = get(AxisQuantity::Alpha1) {
                    p.mod_omega = freqs.transverse_omega_perp / a1.sqrt();
                } else if let Some(a2) = get(AxisQuantity::Alpha2) {
                    p.mod_omega = freqs.rabi_omega / a2;
                }
                if let Some(phi) = get(AxisQuantity::Phi) {
                    p.phase_phi = phi;
                } else if let Some(a3) = get(AxisQuantity::Alpha3) {
                    p.phase_phi = p.phi_for_alpha3(a3, p.mod_omega);
                }
                p.validate()?;
                let freqs = characteristic_frequencies(&p)?;
                let mut a = alphas_at_omega(&freqs, p.mod_omega);
                // Keep scanned alphas exact rather than round-tripped.
                if let Some(a3) = get(AxisQuantity::Alpha3) {
                    a.alpha3 = a3;
                }
                a.check()?;
                Ok((a, Some(p)))
            }
        }
    }

    /// Grid coordinate of `alpha3` at fixed `(alpha1, alpha2)` along the
    /// axis that carries it.
    fn alpha3_coordinate(&self, alpha3: f64, physical: Option<&PhysicalParams>) -> f64 {
        match (self.alpha3_axis().map(|ax| self.axis(ax).quantity), physical) {
            (Some(AxisQuantity::Phi), Some(p)) => p.phi_for_alpha3(alpha3, p.mod_omega),
            _ => alpha3,
        }
    }

    fn axis(&self, ax: Axis) -> &ScanAxis {
        match ax {
            Axis::X => &self.x,
            Axis::Y => &self.y,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Axis {
    X,
    Y,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanNode {
    pub x: f64,
    pub y: f64,
    pub alphas: AlphaParams,
    /// NaN when the node failed.
    pub max_modulus: f64,
    /// `None` when the node failed.
    pub stable: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    /// The phase offset left the small-offset regime (physical mode only).
    #[serde(skip_serializing_if = "std::ops::Not::not", default)]
    pub out_of_regime: bool,
}

impl ScanNode {
    pub fn failed(&self) -> bool {
        self.stable.is_none()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScanStatus {
    Ok,
    Warning,
}

/// Bound curve in scan coordinates plus the stable-above statistic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Overlay {
    pub label: String,
    pub branch: BranchIndex,
    /// One entry per x node; `None` where the curve does not exist.
    pub curve: Vec<Option<f64>>,
    pub stable_total: usize,
    pub stable_above: usize,
    /// Stable cells in columns where the curve does not exist.
    pub stable_without_curve: usize,
    /// `stable_above / stable_total`, zero when nothing is stable.
    pub fraction_stable_above: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanResult {
    pub spec: ScanSpec,
    pub nodes: Vec<ScanNode>,
    pub failures: usize,
    pub status: ScanStatus,
    pub wall_time_s: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub overlay: Option<Overlay>,
}

impl ScanResult {
    pub fn node(&self, i: usize, j: usize) -> &ScanNode {
        &self.nodes[j * self.spec.x.n + i]
    }

    pub fn stable_count(&self) -> usize {
        self.nodes.iter().filter(|n| n.stable == Some(true)).count()
    }

    pub fn stable_fraction(&self) -> f64 {
        self.stable_count() as f64 / self.nodes.len() as f64
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "{SCAN_CSV_HEADER}")?;
        for n in &self.nodes {
            let stable = match n.stable {
                Some(true) => "1",
                Some(false) => "0",
                None => "",
            };
            writeln!(
                w,
                "{},{},{},{},{},{},{}",
                num(n.x),
                num(n.y),
                num(n.alphas.alpha1),
                num(n.alphas.alpha2),
                num(n.alphas.alpha3),
                num(n.max_modulus),
                stable
            )?;
        }
        Ok(())
    }

    /// Plain-text grayscale map, top row at the largest `y`.
    pub fn write_pgm<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        let (nx, ny) = (self.spec.x.n, self.spec.y.n);
        writeln!(w, "P2")?;
        writeln!(w, "{nx} {ny}")?;
        writeln!(w, "255")?;
        for j in (0..ny).rev() {
            let row: Vec<&str> = (0..nx)
                .map(|i| match self.node(i, j).stable {
                    Some(true) => "255",
                    Some(false) => "0",
                    None => "128",
                })
                .collect();
            writeln!(w, "{}", row.join(" "))?;
        }
        Ok(())
    }

    pub fn sidecar_json(&self) -> serde_json::Value {
        let failed: Vec<serde_json::Value> = self
            .nodes
            .iter()
            .filter(|n| n.failed())
            .map(|n| serde_json::json!({ "x": n.x, "y": n.y, "error": n.error }))
            .collect();
        serde_json::json!({
            "spec": self.spec,
            "eps_stab": self.spec.settings.eps_stab,
            "backend": self.spec.settings.backend,
            "constants": CONSTANTS_VERSION,
            "n_nodes": self.nodes.len(),
            "stable_nodes": self.stable_count(),
            "failures": self.failures,
            "failed_nodes": failed,
            "out_of_regime_nodes": self.nodes.iter().filter(|n| n.out_of_regime).count(),
            "status": self.status,
            "wall_time_s": self.wall_time_s,
            "overlay": self.overlay,
        })
    }
}

fn evaluate(spec: &ScanSpec, i: usize, j: usize) -> ScanNode {
    let (x, y) = (spec.x.value(i), spec.y.value(j));
    let failed = |alphas: AlphaParams, msg: String| ScanNode {
        x,
        y,
        alphas,
        max_modulus: f64::NAN,
        stable: None,
        error: Some(msg),
        out_of_regime: false,
    };
    let (alphas, physical) = match spec.resolve_node(x, y) {
        Ok(r) => r,
        Err(e) => {
            let nan = AlphaParams::new(f64::NAN, f64::NAN, f64::NAN);
            return failed(nan, e.to_string());
        }
    };
    let out_of_regime = physical.is_some_and(|p| p.phase_out_of_regime());
    match monodromy(&LinearizedSystem::new(alphas, spec.branch), &spec.settings) {
        Ok(r) => {
            ScanNode { x, y, alphas, max_modulus: r.max_modulus, stable: Some(r.stable), error: None, out_of_regime }
        }
        Err(e) => ScanNode { out_of_regime, ..failed(alphas, e.to_string()) },
    }
}

/// Evaluates every node of `spec` on `workers` threads (0 = rayon default).
pub fn run_scan(spec: &ScanSpec, workers: usize) -> Result<ScanResult> {
    spec.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::invalid(format!("cannot start worker pool: {e}")))?;
    let start = Instant::now();
    let rows: Vec<Vec<ScanNode>> = pool.install(|| {
        (0..spec.y.n).into_par_iter().map(|j| (0..spec.x.n).map(|i| evaluate(spec, i, j)).collect()).collect()
    });
    let nodes: Vec<ScanNode> = rows.into_iter().flatten().collect();
    let failures = nodes.iter().filter(|n| n.failed()).count();
    let status = if failures as f64 > FAILURE_WARNING_FRACTION * nodes.len() as f64 {
        ScanStatus::Warning
    } else {
        ScanStatus::Ok
    };
    Ok(ScanResult { spec: *spec, nodes, failures, status, wall_time_s: start.elapsed().as_secs_f64(), overlay: None })
}

/// Attaches the analytic bound of the scan's branch, expressed along the
/// axis that carries `alpha3`, which must be `y`.
///
/// For even `m` the curve exists only where `alpha1 * alpha2 <= 2`.
pub fn overlay_bound(result: &mut ScanResult) -> Result<&Overlay> {
    let spec = result.spec;
    if spec.alpha3_axis() != Some(Axis::Y) {
        return Err(Error::invalid("bound overlay needs alpha3 or phi on the y axis"));
    }
    let branch = spec.branch;
    let mut curve = Vec::with_capacity(spec.x.n);
    for i in 0..spec.x.n {
        // Any y will do: the bound depends on alpha1 and alpha2 only.
        let (a, physical) = spec.resolve_node(spec.x.value(i), spec.y.min)?;
        let exists = branch.sign_m() < 0.0 || a.alpha1 * a.alpha2 <= 2.0;
        curve.push(exists.then(|| spec.alpha3_coordinate(bound_alpha3(branch, a.alpha1, a.alpha2), physical.as_ref())));
    }
    let (mut total, mut above, mut without) = (0, 0, 0);
    for j in 0..spec.y.n {
        for (i, c) in curve.iter().enumerate() {
            let n = result.node(i, j);
            if n.stable != Some(true) {
                continue;
            }
            total += 1;
            match c {
                Some(c) if n.y > *c => above += 1,
                Some(_) => {}
                None => without += 1,
            }
        }
    }
    let (ymin, ymax) = (spec.y.min, spec.y.max);
    let inside = curve.iter().flatten().any(|c| (ymin..=ymax).contains(c));
    let note = if curve.iter().all(Option::is_none) {
        Some("bound does not exist anywhere in the scan window".to_string())
    } else if !inside {
        Some("bound lies outside the scan window".to_string())
    } else {
        None
    };
    result.overlay = Some(Overlay {
        label: BOUND_LABEL.to_string(),
        branch,
        curve,
        stable_total: total,
        stable_above: above,
        stable_without_curve: without,
        fraction_stable_above: if total == 0 { 0.0 } else { above as f64 / total as f64 },
        note,
    });
    Ok(result.overlay.as_ref().expect("just set"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Pairing {
    /// Node `n` of one scan against node `n` of the other.
    Identity,
    /// Nodes paired with the sign of `alpha3` flipped.
    Mirrored,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymmetryReport {
    pub pairing: Pairing,
    pub cells: usize,
    pub matches: usize,
    pub mismatches: usize,
    /// Pairs where either node failed; counted as neither.
    pub failed: usize,
    pub agreement: f64,
    pub pass: bool,
}

fn same(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1e-300)
}

/// Cell-by-cell comparison of stability flags between two scans of equal
/// shape, paired either node for node or with `alpha3` mirrored.
pub fn compare_symmetry(a: &ScanResult, b: &ScanResult) -> Result<SymmetryReport> {
    let (sa, sb) = (&a.spec, &b.spec);
    if sa.x.n != sb.x.n || sa.y.n != sb.y.n {
        return Err(Error::invalid("symmetry check needs grids of the same shape"));
    }
    let (nx, ny) = (sa.x.n, sa.y.n);
    let pairs_with = |map: &dyn Fn(usize, usize) -> (usize, usize), flip: f64| -> bool {
        (0..ny).all(|j| {
            (0..nx).all(|i| {
                let (p, q) = (a.node(i, j).alphas, {
                    let (ib, jb) = map(i, j);
                    b.node(ib, jb).alphas
                });
                same(p.alpha1, q.alpha1) && same(p.alpha2, q.alpha2) && same(p.alpha3, flip * q.alpha3)
            })
        })
    };
    let identity = |i: usize, j: usize| (i, j);
    let mirror = |i: usize, j: usize| match sa.alpha3_axis() {
        Some(Axis::X) => (nx - 1 - i, j),
        _ => (i, ny - 1 - j),
    };
    let (pairing, map): (Pairing, &dyn Fn(usize, usize) -> (usize, usize)) = if pairs_with(&identity, 1.0) {
        (Pairing::Identity, &identity)
    } else if sa.alpha3_axis().is_some() && sa.alpha3_axis() == sb.alpha3_axis() && pairs_with(&mirror, -1.0) {
        (Pairing::Mirrored, &mirror)
    } else {
        return Err(Error::invalid("scans do not cover the same or mirrored parameter nodes"));
    };
    let (mut matches, mut mismatches, mut failed) = (0, 0, 0);
    for j in 0..ny {
        for i in 0..nx {
            let (ib, jb) = map(i, j);
            match (a.node(i, j).stable, b.node(ib, jb).stable) {
                (Some(p), Some(q)) if p == q => matches += 1,
                (Some(_), Some(_)) => mismatches += 1,
                _ => failed += 1,
            }
        }
    }
    let cells = nx * ny;
    Ok(SymmetryReport {
        pairing,
        cells,
        matches,
        mismatches,
        failed,
        agreement: matches as f64 / cells as f64,
        pass: mismatches == 0 && failed == 0,
    })
}

/// Runs both scans and compares them.
pub fn symmetry_check(a: &ScanSpec, b: &ScanSpec, workers: usize) -> Result<SymmetryReport> {
    let ra = run_scan(a, workers)?;
    let rb = run_scan(b, workers)?;
    compare_symmetry(&ra, &rb)
}
