//! Birman–Schwinger eigenvalue search in the gap, coupling algebra, and the
//! critical-case clustering diagnostic.
//!
//! `z ∈ (−|m|, |m|)` is a discrete eigenvalue iff `B(z) = I + V C_z` is
//! singular, where `V = ησ0 + τσ3` acts nodewise on each loop.

use crate::bem::{single_layer, BemError, BoundaryOperatorMatrix, CzAssembler};
use crate::fourier::lambda_alpha;
use crate::geometry::{golden_min, LoopSystem};
use crate::kernel::pauli::{Mat2, PauliAlgebra, SIGMA0};
use faer::{c64, Mat, Side};
use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::sync::Once;
use thiserror::Error;

pub const REGIME_TOL: f64 = 1e-12;
pub const CLUSTER_THRESHOLD: f64 = 0.05;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectralError {
    #[error("mass m = 0: the gap is empty and the spectrum is the whole real line")]
    ZeroMass,
    #[error("coupling ({eta}, {tau}) is {regime:?}, expected {expected:?}")]
    RegimeMismatch { eta: f64, tau: f64, regime: Regime, expected: Regime },
    #[error("duality needs |η| ≠ |τ|, got ({0}, {1})")]
    DualityUndefined(f64, f64),
    #[error("transmission matrix M is undefined for η² − τ² = −4 (confinement)")]
    TransmissionUndefined,
    #[error("no loop carries a critical coupling")]
    NoCriticalLoop,
    #[error("not an accepted eigenvalue entry: {0}")]
    NotAnEigenvalue(String),
    #[error("linear algebra failed: {0}")]
    Numerical(String),
    #[error(transparent)]
    Bem(#[from] BemError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Free,
    Noncritical,
    Critical,
    Confinement,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InteractionType {
    None,
    Electrostatic,
    LorentzScalar,
    Mixed,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CouplingPair {
    pub eta: f64,
    pub tau: f64,
    pub d: f64,
    pub regime: Regime,
}

pub fn classify(eta: f64, tau: f64) -> CouplingPair {
    let d = eta * eta - tau * tau;
    let regime = if eta == 0.0 && tau == 0.0 {
        Regime::Free
    } else if (d - 4.0).abs() < REGIME_TOL {
        Regime::Critical
    } else if (d + 4.0).abs() < REGIME_TOL {
        Regime::Confinement
    } else {
        Regime::Noncritical
    };
    CouplingPair { eta, tau, d, regime }
}

impl CouplingPair {
    pub fn interaction_type(&self) -> InteractionType {
        match (self.eta == 0.0, self.tau == 0.0) {
            (true, true) => InteractionType::None,
            (false, true) => InteractionType::Electrostatic,
            (true, false) => InteractionType::LorentzScalar,
            (false, false) => InteractionType::Mixed,
        }
    }

    /// Diagonal of `ησ0 + τσ3`.
    pub fn diagonal(&self) -> [f64; 2] {
        [self.eta + self.tau, self.eta - self.tau]
    }

    pub fn matrix(&self) -> Mat2 {
        Mat2::real_diag(self.eta, self.tau)
    }
}

pub fn critical_essential_point(c: &CouplingPair, m: f64) -> Result<f64, SpectralError> {
    if c.regime != Regime::Critical {
        return Err(SpectralError::RegimeMismatch { eta: c.eta, tau: c.tau, regime: c.regime, expected: Regime::Critical });
    }
    Ok(-(c.tau / c.eta) * m)
}

/// `(η, τ) ↦ (−4η/d, −4τ/d)`.
pub fn dual_coupling(c: &CouplingPair) -> Result<CouplingPair, SpectralError> {
    if c.d == 0.0 {
        return Err(SpectralError::DualityUndefined(c.eta, c.tau));
    }
    Ok(classify(-4.0 * c.eta / c.d, -4.0 * c.tau / c.d))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Transmission {
    /// `R = (i/2)(σ·ν)(ησ0 + τσ3)`.
    pub r: Mat2,
    /// `M = (σ0 − R)^{-1}(σ0 + R)`; `None` under confinement.
    pub m: Option<Mat2>,
}

impl Transmission {
    pub fn require_m(&self) -> Result<Mat2, SpectralError> {
        self.m.ok_or(SpectralError::TransmissionUndefined)
    }
}

pub fn transmission_matrix(c: &CouplingPair, nu: [f64; 2]) -> Result<Transmission, SpectralError> {
    let r = PauliAlgebra::dot(nu) * c.matrix() * C64::new(0.0, 0.5);
    if c.regime == Regime::Confinement {
        return Ok(Transmission { r, m: None });
    }
    let lhs = (SIGMA0 - r).inverse().ok_or(SpectralError::TransmissionUndefined)?;
    let m = lhs * (SIGMA0 + r);
    let closed = (SIGMA0 + r) * (SIGMA0 + r) * (4.0 / (4.0 + c.d));
    if (m - closed).norm() > 1e-10 * (1.0 + m.norm()) {
        return Err(SpectralError::Numerical("transmission matrix identity violated".into()));
    }
    Ok(Transmission { r, m: Some(m) })
}

fn sequential_linalg() {
    static ONCE: Once = Once::new();
    ONCE.call_once(|| faer::set_global_parallelism(faer::Par::Seq));
}

/// `B(z)` and its singular values (descending).
#[derive(Clone, Debug)]
pub struct BSOperator {
    pub z: f64,
    pub matrix: Mat<c64>,
    pub singular_values: Vec<f64>,
}

impl BSOperator {
    pub fn sigma_min(&self) -> f64 {
        *self.singular_values.last().unwrap_or(&1.0)
    }
}

/// Evaluates `B(z)` and derived quantities for a fixed system and node counts.
pub struct BsEvaluator {
    assembler: CzAssembler,
    /// `(η+τ, η−τ)` for every unknown, in assembler order.
    coupling: Vec<f64>,
    m: f64,
}

impl BsEvaluator {
    pub fn new(system: &LoopSystem, m: f64, sizes: &[usize]) -> Result<Self, SpectralError> {
        if m == 0.0 {
            return Err(SpectralError::ZeroMass);
        }
        sequential_linalg();
        let assembler = CzAssembler::new(system, sizes)?;
        let mut coupling = Vec::with_capacity(assembler.dim());
        for ((_, c), &n) in system.loops().iter().zip(sizes) {
            let v = c.diagonal();
            coupling.extend(std::iter::repeat_n(v[0], n));
            coupling.extend(std::iter::repeat_n(v[1], n));
        }
        Ok(BsEvaluator { assembler, coupling, m })
    }

    pub fn uniform(system: &LoopSystem, m: f64, n: usize) -> Result<Self, SpectralError> {
        BsEvaluator::new(system, m, &vec![n; system.len()])
    }

    pub fn assembler(&self) -> &CzAssembler {
        &self.assembler
    }

    pub fn cz(&self, z: f64) -> Result<BoundaryOperatorMatrix, SpectralError> {
        Ok(self.assembler.assemble(self.m, z)?)
    }

    pub fn matrix(&self, z: f64) -> Result<Mat<c64>, SpectralError> {
        let c = self.cz(z)?.matrix;
        let n = c.nrows();
        Ok(Mat::from_fn(n, n, |i, j| {
            let v = c[(i, j)] * self.coupling[i];
            if i == j {
                v + 1.0
            } else {
                v
            }
        }))
    }

    pub fn singular_values(&self, z: f64) -> Result<Vec<f64>, SpectralError> {
        if self.coupling.iter().all(|&v| v == 0.0) {
            return Ok(vec![1.0; self.assembler.dim()]);
        }
        self.matrix(z)?.singular_values().map_err(|e| SpectralError::Numerical(format!("{e:?}")))
    }

    pub fn sigma_min(&self, z: f64) -> Result<f64, SpectralError> {
        Ok(*self.singular_values(z)?.last().unwrap())
    }

    pub fn operator(&self, z: f64) -> Result<BSOperator, SpectralError> {
        let singular_values = self.singular_values(z)?;
        Ok(BSOperator { z, matrix: self.matrix(z)?, singular_values })
    }

    /// Singular values and right singular vectors of `B(z)`.
    pub fn svd(&self, z: f64) -> Result<(Vec<f64>, Mat<c64>), SpectralError> {
        let svd = self.matrix(z)?.svd().map_err(|e| SpectralError::Numerical(format!("{e:?}")))?;
        let s: Vec<f64> = svd.S().column_vector().iter().map(|v| v.re).collect();
        Ok((s, svd.V().to_owned()))
    }

    /// True when every loop has invertible `ησ0 + τσ3`.
    pub fn coupling_invertible(&self) -> bool {
        self.coupling.iter().all(|&v| v != 0.0)
    }

    /// Number of negative eigenvalues of the Hermitian `W(V^{-1} + C_z)`,
    /// `W` the trapezoid weights. Its changes in `z` count roots of `B`.
    pub fn inertia(&self, z: f64) -> Result<usize, SpectralError> {
        let cz = self.cz(z)?;
        let w = cz.weights();
        let c = cz.matrix;
        let n = c.nrows();
        let h = Mat::from_fn(n, n, |i, j| {
            let v = c[(i, j)] * w[i];
            if i == j {
                v + w[i] / self.coupling[i]
            } else {
                v
            }
        });
        let ev = h.self_adjoint_eigenvalues(Side::Lower).map_err(|e| SpectralError::Numerical(format!("{e:?}")))?;
        Ok(ev.iter().filter(|&&x| x < 0.0).count())
    }

    /// `Λ P B(z) Λ` with `P` the nodewise `(ησ0+τσ3)^{-1}` (identity where a
    /// diagonal entry vanishes) and `Λ` the order-1/2 multiplier on each loop
    /// and component.
    pub fn weighted_matrix(&self, z: f64, c0: f64) -> Result<Mat<c64>, SpectralError> {
        let b = self.matrix(z)?;
        let dim = b.nrows();
        let lam = lambda_alpha(1.0, c0);
        let mut lmat = Mat::<c64>::zeros(dim, dim);
        for (&off, &n) in self.assembler.offsets().iter().zip(&self.assembler.sizes()) {
            // Circulant kernel of Λ on n nodes.
            let col: Vec<f64> = (0..n)
                .map(|k| {
                    (0..n)
                        .map(|j| {
                            let f = crate::fourier::freq(j, n);
                            lam.symbol(f).re * (2.0 * std::f64::consts::PI * (f * k as i64) as f64 / n as f64).cos()
                        })
                        .sum::<f64>()
                        / n as f64
                })
                .collect();
            for comp in 0..2 {
                let base = off + comp * n;
                for i in 0..n {
                    for j in 0..n {
                        lmat[(base + i, base + j)] = c64::new(col[(i + n - j) % n], 0.0);
                    }
                }
            }
        }
        let pb = Mat::from_fn(dim, dim, |i, j| {
            let v = self.coupling[i];
            if v != 0.0 {
                b[(i, j)] / v
            } else {
                b[(i, j)]
            }
        });
        Ok(&lmat * &pb * &lmat)
    }
}

pub fn bs_matrix(system: &LoopSystem, m: f64, z: f64, n: usize) -> Result<BSOperator, SpectralError> {
    BsEvaluator::uniform(system, m, n)?.operator(z)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScanConfig {
    pub z_min: Option<f64>,
    pub z_max: Option<f64>,
    pub samples: usize,
    pub tol_accept: f64,
    pub gap_margin: f64,
    /// Exclusion radius around each critical point, as a fraction of the gap width `2|m|`.
    pub critical_exclusion: f64,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig { z_min: None, z_max: None, samples: 400, tol_accept: 1e-6, gap_margin: 1e-3, critical_exclusion: 0.02 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenvalueEntry {
    pub z: f64,
    pub sigma_min: f64,
    pub multiplicity: usize,
    /// One nodal density per multiplicity, in assembler order.
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub densities: Vec<Vec<[f64; 2]>>,
}

impl EigenvalueEntry {
    pub fn density(&self, k: usize) -> Vec<C64> {
        self.densities[k].iter().map(|v| C64::new(v[0], v[1])).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenvalueReport {
    pub eigenvalues: Vec<EigenvalueEntry>,
    pub scan: Vec<(f64, f64)>,
    /// `(center, radius)` of each excluded critical neighborhood.
    pub excluded: Vec<(f64, f64)>,
    pub sizes: Vec<usize>,
    pub curve_hash: u64,
    pub couplings: Vec<(f64, f64)>,
    pub m: f64,
    pub warnings: Vec<String>,
}

impl EigenvalueReport {
    pub fn roots(&self) -> Vec<f64> {
        self.eigenvalues.iter().map(|e| e.z).collect()
    }

    /// Roots repeated by multiplicity.
    pub fn root_multiset(&self) -> Vec<f64> {
        self.eigenvalues.iter().flat_map(|e| std::iter::repeat_n(e.z, e.multiplicity)).collect()
    }
}

fn system_hash(system: &LoopSystem, sizes: &[usize]) -> u64 {
    use std::hash::{DefaultHasher, Hash, Hasher};
    let mut h = DefaultHasher::new();
    for ((c, _), n) in system.loops().iter().zip(sizes) {
        let (p, _, _) = c.node_data(*n);
        for v in p {
            v.re.to_bits().hash(&mut h);
            v.im.to_bits().hash(&mut h);
        }
    }
    h.finish()
}

/// Critical neighborhoods `(center, radius)` for the system at mass `m`.
pub fn excluded_neighborhoods(system: &LoopSystem, m: f64, fraction: f64) -> Vec<(f64, f64)> {
    system
        .loops()
        .iter()
        .filter_map(|(_, c)| critical_essential_point(c, m).ok())
        .map(|zc| (zc, fraction * 2.0 * m.abs()))
        .collect()
}

/// Allowed scan segments: `[lo, hi]` minus the open excluded neighborhoods.
fn allowed_segments(lo: f64, hi: f64, excluded: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut segs = vec![(lo, hi)];
    for &(c, r) in excluded {
        let (a, b) = (c - r, c + r);
        segs = segs
            .into_iter()
            .flat_map(|(s, e)| {
                let mut out = Vec::new();
                if a > s {
                    out.push((s, a.min(e)));
                }
                if b < e {
                    out.push((b.max(s), e));
                }
                out
            })
            .filter(|(s, e)| e > s)
            .collect();
    }
    segs
}

/// Accepted root at `z`: multiplicity is the number of singular values
/// below `10·σ_min`, raised to `min_mult` when the inertia count demands it.
fn entry_at(ev: &BsEvaluator, z: f64, min_mult: usize) -> Result<EigenvalueEntry, SpectralError> {
    let (s, v) = ev.svd(z)?;
    let smin = *s.last().unwrap();
    let mult = s.iter().filter(|&&x| x < 10.0 * smin).count().max(min_mult).max(1);
    let dim = s.len();
    let densities = (0..mult.min(dim))
        .map(|k| (0..v.nrows()).map(|i| [v[(i, dim - 1 - k)].re, v[(i, dim - 1 - k)].im]).collect())
        .collect();
    Ok(EigenvalueEntry { z, sigma_min: smin, multiplicity: mult, densities })
}

fn multiplicity_in(roots: &[EigenvalueEntry], a: f64, b: f64) -> usize {
    roots.iter().filter(|e| e.z > a && e.z < b).map(|e| e.multiplicity).sum()
}

/// Bisects on the inertia count until every root inside `(a, b)` is isolated,
/// then locates the missing ones by golden-section search on `σ_min`.
/// Clusters narrower than the refinement tolerance take their multiplicity
/// from the count.
#[allow(clippy::too_many_arguments)]
fn repair_segment(
    ev: &BsEvaluator,
    (a, na): (f64, usize),
    (b, nb): (f64, usize),
    roots: &mut Vec<EigenvalueEntry>,
    tol_accept: f64,
    tol_z: f64,
    depth: usize,
) -> Result<(), SpectralError> {
    let count = na.abs_diff(nb);
    let found = multiplicity_in(roots, a, b);
    if count == 0 || found >= count || depth > 60 {
        return Ok(());
    }
    let narrow = b - a < 1e3 * tol_z;
    if narrow {
        if let Some(e) = roots.iter_mut().filter(|e| e.z > a && e.z < b).min_by(|x, y| x.sigma_min.total_cmp(&y.sigma_min)) {
            let want = e.multiplicity + count - found;
            *e = entry_at(ev, e.z, want)?;
            return Ok(());
        }
    }
    if count == 1 || narrow {
        let z = golden_min(|z| ev.sigma_min(z).unwrap_or(f64::INFINITY), a, b, tol_z);
        if ev.sigma_min(z)? < tol_accept {
            roots.push(entry_at(ev, z, if narrow { count - found } else { 1 })?);
        }
        return Ok(());
    }
    let mid = 0.5 * (a + b);
    let nm = ev.inertia(mid)?;
    repair_segment(ev, (a, na), (mid, nm), roots, tol_accept, tol_z, depth + 1)?;
    repair_segment(ev, (mid, nm), (b, nb), roots, tol_accept, tol_z, depth + 1)
}

pub fn find_eigenvalues(system: &LoopSystem, m: f64, n: usize, cfg: &ScanConfig) -> Result<EigenvalueReport, SpectralError> {
    let sizes = vec![n; system.len()];
    let ev = BsEvaluator::new(system, m, &sizes)?;
    find_eigenvalues_with(&ev, system, m, &sizes, cfg)
}

pub fn find_eigenvalues_with(
    ev: &BsEvaluator,
    system: &LoopSystem,
    m: f64,
    sizes: &[usize],
    cfg: &ScanConfig,
) -> Result<EigenvalueReport, SpectralError> {
    if m == 0.0 {
        return Err(SpectralError::ZeroMass);
    }
    let ma = m.abs();
    let lo = cfg.z_min.unwrap_or(f64::NEG_INFINITY).max(-ma + cfg.gap_margin);
    let hi = cfg.z_max.unwrap_or(f64::INFINITY).min(ma - cfg.gap_margin);
    let excluded = excluded_neighborhoods(system, m, cfg.critical_exclusion);
    let segments = allowed_segments(lo, hi, &excluded);
    let step = (hi - lo) / (cfg.samples.max(2) - 1) as f64;

    let mut grid: Vec<(usize, f64)> = Vec::new();
    for (si, &(a, b)) in segments.iter().enumerate() {
        grid.push((si, a));
        for i in 0..cfg.samples.max(2) {
            let z = lo + i as f64 * step;
            if z > a + 1e-3 * step && z < b - 1e-3 * step {
                grid.push((si, z));
            }
        }
        grid.push((si, b));
    }
    let values: Vec<f64> = grid.par_iter().map(|&(_, z)| ev.sigma_min(z)).collect::<Result<_, _>>()?;
    let scan: Vec<(f64, f64)> = grid.iter().zip(&values).map(|(&(_, z), &s)| (z, s)).collect();

    // Local minima within each segment, with one-sided brackets at the ends.
    let mut brackets = Vec::new();
    for si in 0..segments.len() {
        let idx: Vec<usize> = (0..grid.len()).filter(|&i| grid[i].0 == si).collect();
        for (p, &i) in idx.iter().enumerate() {
            let left = if p > 0 { Some(idx[p - 1]) } else { None };
            let right = idx.get(p + 1).copied();
            let f = values[i];
            let lower_left = left.is_none_or(|l| f < values[l]);
            let lower_right = right.is_none_or(|r| f <= values[r]);
            if lower_left && lower_right && (left.is_some() || right.is_some()) {
                let a = left.unwrap_or(i);
                let b = right.unwrap_or(i);
                brackets.push((grid[a].1, grid[b].1, values[a].max(values[b])));
            }
        }
    }

    let tol_z = 1e-10 * ma;
    let refined: Vec<Option<(f64, f64)>> = brackets
        .par_iter()
        .map(|&(a, b, edge)| {
            let z = golden_min(|z| ev.sigma_min(z).unwrap_or(f64::INFINITY), a, b, tol_z);
            let s = ev.sigma_min(z).ok()?;
            (s < cfg.tol_accept && edge >= 100.0 * s).then_some((z, s))
        })
        .collect();
    let mut accepted: Vec<(f64, f64)> = refined.into_iter().flatten().collect();
    accepted.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    accepted.dedup_by(|b, a| (a.0 - b.0).abs() < 10.0 * tol_z);

    let mut eigenvalues =
        accepted.iter().map(|&(z, _)| entry_at(ev, z, 1)).collect::<Result<Vec<_>, _>>()?;
    let mut warnings = Vec::new();
    if ev.coupling_invertible() {
        // Eigenvalue crossings of W(V^{-1} + C_z) count roots; recover any the
        // sampled minima merged or missed.
        for &(a, b) in &segments {
            let (na, nb) = (ev.inertia(a)?, ev.inertia(b)?);
            repair_segment(ev, (a, na), (b, nb), &mut eigenvalues, cfg.tol_accept, tol_z, 0)?;
            let found = multiplicity_in(&eigenvalues, a, b);
            let count = na.abs_diff(nb);
            if count != found {
                warnings.push(format!(
                    "inertia count {count} differs from accepted multiplicity {found} in [{a:.12}, {b:.12}]"
                ));
            }
        }
        eigenvalues.sort_by(|x, y| x.z.total_cmp(&y.z));
    }
    for w in eigenvalues.windows(2) {
        if w[1].z - w[0].z < 3.0 * step {
            warnings.push(format!(
                "roots {:.12} and {:.12} are closer than 3 grid steps; more samples are advised",
                w[0].z, w[1].z
            ));
        }
    }

    if !excluded.is_empty() {
        warnings.push(format!(
            "critical neighborhoods excluded from the scan: {}",
            excluded.iter().map(|(c, r)| format!("{c:.12}±{r:.6}")).collect::<Vec<_>>().join(", ")
        ));
    }

    Ok(EigenvalueReport {
        eigenvalues,
        scan,
        excluded,
        sizes: sizes.to_vec(),
        curve_hash: system_hash(system, sizes),
        couplings: system.loops().iter().map(|(_, c)| (c.eta, c.tau)).collect(),
        m,
        warnings,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum ClusterOperator {
    /// Singular values of `B(z)` itself.
    BirmanSchwinger,
    /// Singular values of `Λ(ησ0+τσ3)^{-1}B(z)Λ`.
    Weighted { c0: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClusterRow {
    pub z: f64,
    pub n: usize,
    pub count: usize,
    pub sigma_min: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeSummary {
    pub z: f64,
    pub counts: Vec<usize>,
    /// Counts strictly increase with `N`: the diagnostic fires.
    pub fires: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClusterReport {
    pub operator: ClusterOperator,
    pub threshold: f64,
    pub rows: Vec<ClusterRow>,
    pub probes: Vec<ProbeSummary>,
}

impl ClusterReport {
    pub fn probe(&self, z: f64) -> Option<&ProbeSummary> {
        self.probes.iter().find(|p| (p.z - z).abs() < 1e-12)
    }
}

/// Counts singular values below [`CLUSTER_THRESHOLD`] for every probe and
/// node count.
pub fn critical_cluster_diagnostic(
    system: &LoopSystem,
    m: f64,
    n_list: &[usize],
    probes: &[f64],
    operator: ClusterOperator,
) -> Result<ClusterReport, SpectralError> {
    if !system.loops().iter().any(|(_, c)| c.regime == Regime::Critical) {
        return Err(SpectralError::NoCriticalLoop);
    }
    cluster_counts(system, m, n_list, probes, operator)
}

/// Same counts without requiring a critical loop (used for controls).
pub fn cluster_counts(
    system: &LoopSystem,
    m: f64,
    n_list: &[usize],
    probes: &[f64],
    operator: ClusterOperator,
) -> Result<ClusterReport, SpectralError> {
    let mut rows = Vec::new();
    for &n in n_list {
        let ev = BsEvaluator::uniform(system, m, n)?;
        for &z in probes {
            let s = match operator {
                ClusterOperator::BirmanSchwinger => ev.singular_values(z)?,
                ClusterOperator::Weighted { c0 } => ev
                    .weighted_matrix(z, c0)?
                    .singular_values()
                    .map_err(|e| SpectralError::Numerical(format!("{e:?}")))?,
            };
            let count = s.iter().filter(|&&x| x < CLUSTER_THRESHOLD).count();
            rows.push(ClusterRow { z, n, count, sigma_min: *s.last().unwrap() });
        }
    }
    let probes = probes
        .iter()
        .map(|&z| {
            let counts: Vec<usize> = rows.iter().filter(|r| r.z == z).map(|r| r.count).collect();
            let fires = counts.len() > 1 && counts.windows(2).all(|w| w[1] > w[0]);
            ProbeSummary { z, counts, fires }
        })
        .collect();
    Ok(ClusterReport { operator, threshold: CLUSTER_THRESHOLD, rows, probes })
}

/// `u = Φ_zφ` at `targets`, normalized to unit discrete ℓ² norm over the targets.
pub fn eigenfunction(
    system: &LoopSystem,
    m: f64,
    entry: &EigenvalueEntry,
    sizes: &[usize],
    targets: &[[f64; 2]],
    oversample: usize,
) -> Result<Vec<[C64; 2]>, SpectralError> {
    if entry.densities.is_empty() {
        return Err(SpectralError::NotAnEigenvalue(format!("z = {} carries no nullspace density", entry.z)));
    }
    let field = single_layer(system, m, entry.z, sizes, &entry.density(0), targets, oversample)?;
    let norm = field.iter().map(|v| v[0].norm_sqr() + v[1].norm_sqr()).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Ok(field);
    }
    Ok(field.into_iter().map(|v| [v[0] / norm, v[1] / norm]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Curve, RawCurve};
    use crate::kernel::pauli::{SIGMA1, SIGMA2};

    fn circle_system(eta: f64, tau: f64) -> LoopSystem {
        LoopSystem::single(Curve::from_raw(&RawCurve::circle(1.0, [0.0, 0.0]), 128).unwrap(), classify(eta, tau))
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify(0.0, 0.0).regime, Regime::Free);
        assert_eq!(classify(2.5, 1.5).regime, Regime::Critical);
        assert_eq!(classify(0.0, 2.0).regime, Regime::Confinement);
        assert_eq!(classify(-3.0, 0.0).regime, Regime::Noncritical);
        assert_eq!(classify(2.0, 0.0).interaction_type(), InteractionType::Electrostatic);
        assert_eq!(classify(0.0, 1.0).interaction_type(), InteractionType::LorentzScalar);
        assert_eq!(classify(2.0, 1.0).interaction_type(), InteractionType::Mixed);
    }

    #[test]
    fn essential_point_examples() {
        assert!((critical_essential_point(&classify(2.5, 1.5), 1.0).unwrap() + 0.6).abs() < 1e-15);
        assert_eq!(critical_essential_point(&classify(2.0, 0.0), 1.0).unwrap(), 0.0);
        assert!((critical_essential_point(&classify(2.5, -1.5), 1.0).unwrap() - 0.6).abs() < 1e-15);
        assert!(critical_essential_point(&classify(3.0, 0.0), 1.0).is_err());
    }

    #[test]
    fn duality_examples() {
        let d = dual_coupling(&classify(1.0, 0.0)).unwrap();
        assert_eq!((d.eta, d.tau), (-4.0, 0.0));
        let d = dual_coupling(&classify(0.0, 1.0)).unwrap();
        assert_eq!((d.eta, d.tau), (0.0, 4.0));
        let d = dual_coupling(&classify(2.5, 1.5)).unwrap();
        assert_eq!((d.eta, d.tau, d.regime), (-2.5, -1.5, Regime::Critical));
        assert!(dual_coupling(&classify(1.0, 1.0)).is_err());
    }

    #[test]
    fn transmission_examples() {
        let t = transmission_matrix(&classify(2.0, 0.0), [1.0, 0.0]).unwrap();
        let i_s1 = SIGMA1 * C64::new(0.0, 1.0);
        assert!((t.r - i_s1).norm() < 1e-15 && (t.m.unwrap() - i_s1).norm() < 1e-15);
        let t = transmission_matrix(&classify(0.0, 2.0), [1.0, 0.0]).unwrap();
        assert!((t.r - SIGMA2).norm() < 1e-15 && (t.r * t.r - SIGMA0).norm() < 1e-15);
        assert_eq!(t.require_m(), Err(SpectralError::TransmissionUndefined));
        let t = transmission_matrix(&classify(0.0, 0.0), [0.6, 0.8]).unwrap();
        assert_eq!(t.r, Mat2::ZERO);
        assert!((t.m.unwrap() - SIGMA0).norm() < 1e-15);
    }

    #[test]
    fn free_case_is_identity() {
        let op = bs_matrix(&circle_system(0.0, 0.0), 1.0, 0.3, 32).unwrap();
        assert!(op.singular_values.iter().all(|&s| s == 1.0));
        let n = op.matrix.nrows();
        for i in 0..n {
            for j in 0..n {
                let want = if i == j { 1.0 } else { 0.0 };
                assert_eq!(op.matrix[(i, j)], c64::new(want, 0.0));
            }
        }
    }

    #[test]
    fn allowed_segments_split() {
        let s = allowed_segments(-1.0, 1.0, &[(-0.6, 0.04)]);
        let want = [(-1.0, -0.64), (-0.56, 1.0)];
        assert_eq!(s.len(), 2);
        for (a, b) in s.iter().zip(want) {
            assert!((a.0 - b.0).abs() < 1e-15 && (a.1 - b.1).abs() < 1e-15);
        }
        assert_eq!(allowed_segments(-1.0, 1.0, &[]), vec![(-1.0, 1.0)]);
    }

    #[test]
    fn zero_mass_refused() {
        assert_eq!(
            find_eigenvalues(&circle_system(-3.0, 0.0), 0.0, 32, &ScanConfig::default()).unwrap_err(),
            SpectralError::ZeroMass
        );
    }

    #[test]
    fn cluster_needs_critical_loop() {
        assert_eq!(
            critical_cluster_diagnostic(&circle_system(3.0, 0.0), 1.0, &[16], &[0.0], ClusterOperator::BirmanSchwinger)
                .unwrap_err(),
            SpectralError::NoCriticalLoop
        );
    }
}
