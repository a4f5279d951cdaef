//! Nyström discretization of `C_z` and of the single-layer potential.
//!
//! Unknowns are nodal values at `t_j = j/N` on each loop, ordered
//! loop-major, then component, then node: loop `L` with `N_L` nodes occupies
//! `[off_L, off_L + 2N_L)`, component 1 first.
//!
//! The self-interaction block splits the kernel as in [`crate::kernel`]:
//! the log part uses the Kress weights, the smooth part the trapezoid rule,
//! and the Cauchy entries `1/ξ`, `1/ξ̄` are written as `π cot(π(t−s))·g + E`
//! with `g = ½(1/ρ'(t) + 1/ρ'(s))`. The symmetric `g` makes `E` vanish on
//! the diagonal and keeps the discrete operator exactly self-adjoint.

use crate::fourier::freq;
use crate::geometry::{Curve, LoopSystem};
use crate::kernel::pauli::{Mat2, PauliAlgebra};
use crate::kernel::{green_kernel, split_from_geometry, KernelError, SpectralParams};
use crate::kernel::bessel::{bessel_i0, bessel_i1, k0_regular, k1_regular, EULER_GAMMA};
use crate::spectral::classify;
use faer::{c64, Mat};
use num_complex::Complex64 as C64;
use rayon::prelude::*;
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BemError {
    #[error("node count {0} must be a power of two and at least 16")]
    BadNodeCount(usize),
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error("target ({x:.6}, {y:.6}) is {dist:e} from the boundary, below the guard {guard:e}")]
    TargetTooClose { x: f64, y: f64, dist: f64, guard: f64 },
    #[error("density length {got} does not match the system size {want}")]
    DensityLength { got: usize, want: usize },
    #[error("{0}")]
    Invalid(String),
}

const ZERO: C64 = C64::new(0.0, 0.0);

/// Toeplitz product-quadrature weights on `N` equispaced nodes.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureTables {
    n: usize,
    /// `R(k)`: `Σ_j R(i−j) f_j ≈ ∫ ln|2 sin π(t_i−s)| f(s) ds`.
    log_w: Vec<f64>,
    /// `w(k)`: `Σ_j w(i−j) f_j ≈ PV∫ cot(π(t_i−s)) f(s) ds`.
    cot_w: Vec<f64>,
}

pub fn build_quadrature(n: usize) -> Result<QuadratureTables, BemError> {
    if n < 16 || !n.is_power_of_two() {
        return Err(BemError::BadNodeCount(n));
    }
    let h = n / 2;
    let hf = h as f64;
    let log_w = (0..n)
        .map(|k| {
            let theta = 2.0 * PI * k as f64 / n as f64;
            let s: f64 = (1..h).map(|m| (m as f64 * theta).cos() / m as f64).sum();
            -s / (2.0 * hf) - (hf * theta).cos() / (4.0 * hf * hf)
        })
        .collect();
    let cot_w = (0..n)
        .map(|k| if k % 2 == 1 { 2.0 / n as f64 / (PI * k as f64 / n as f64).tan() } else { 0.0 })
        .collect();
    Ok(QuadratureTables { n, log_w, cot_w })
}

impl QuadratureTables {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn log_weight(&self, i: usize, j: usize) -> f64 {
        self.log_w[(i + self.n - j) % self.n]
    }

    pub fn cot_weight(&self, i: usize, j: usize) -> f64 {
        self.cot_w[(i + self.n - j) % self.n]
    }

    /// Overwrites one Toeplitz log weight (fault injection for the verifier).
    pub fn perturb_log_weight(&mut self, k: usize, delta: f64) {
        self.log_w[k % self.n] += delta;
    }

    fn apply(&self, w: &[f64], f: &[C64]) -> Vec<C64> {
        (0..self.n).map(|i| (0..self.n).map(|j| f[j] * w[(i + self.n - j) % self.n]).sum()).collect()
    }

    pub fn apply_log(&self, f: &[C64]) -> Vec<C64> {
        self.apply(&self.log_w, f)
    }

    /// Rule for `ln|sin π(t−s)| = ln|2 sin π(t−s)| − ln 2`.
    pub fn apply_log_sin(&self, f: &[C64]) -> Vec<C64> {
        let mean: C64 = f.iter().sum::<C64>() / self.n as f64;
        self.apply_log(f).into_iter().map(|v| v - mean * std::f64::consts::LN_2).collect()
    }

    pub fn apply_cot(&self, f: &[C64]) -> Vec<C64> {
        self.apply(&self.cot_w, f)
    }
}

/// Nodal geometry of one loop.
#[derive(Clone, Debug)]
pub struct NodeTable {
    pub n: usize,
    pub length: f64,
    pub rho: Vec<C64>,
    pub d1: Vec<C64>,
    pub d2: Vec<C64>,
}

impl NodeTable {
    pub fn new(curve: &Curve, n: usize) -> Self {
        let (rho, d1, d2) = curve.node_data(n);
        NodeTable { n, length: curve.length(), rho, d1, d2 }
    }

    /// Outward unit normal `ν = (T2, −T1)` at node `j`.
    pub fn normal(&self, j: usize) -> [f64; 2] {
        let t = self.d1[j] / self.d1[j].norm();
        [t.im, -t.re]
    }

    pub fn point(&self, j: usize) -> [f64; 2] {
        [self.rho[j].re, self.rho[j].im]
    }
}

/// z-independent data of a self-interaction block, row-major `n × n`.
#[derive(Debug)]
struct SelfPairs {
    r: Vec<f64>,
    xhat: Vec<[f64; 2]>,
    log_ratio: Vec<f64>,
    c12: Vec<C64>,
    c21: Vec<C64>,
}

impl SelfPairs {
    fn new(nodes: &NodeTable, quad: &QuadratureTables) -> Self {
        let n = nodes.n;
        let l = nodes.length;
        let mut out = SelfPairs {
            r: vec![0.0; n * n],
            xhat: vec![[0.0; 2]; n * n],
            log_ratio: vec![(l / (2.0 * PI)).ln(); n * n],
            c12: vec![ZERO; n * n],
            c21: vec![ZERO; n * n],
        };
        let pref = C64::new(0.0, l / (2.0 * PI));
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let idx = i * n + j;
                let xi = nodes.rho[i] - nodes.rho[j];
                let r = xi.norm();
                let h = (i as f64 - j as f64) / n as f64;
                let cot = 1.0 / (PI * h).tan();
                out.r[idx] = r;
                out.xhat[idx] = [xi.re / r, xi.im / r];
                out.log_ratio[idx] = r.ln() - (2.0 * (PI * h).sin()).abs().ln();
                let g = 0.5 * (nodes.d1[i].inv() + nodes.d1[j].inv());
                let e = xi.inv() - g * (PI * cot);
                let w = quad.cot_weight(i, j);
                out.c12[idx] = pref * (g * (PI * w) + e / n as f64);
                out.c21[idx] = pref * (g.conj() * (PI * w) + e.conj() / n as f64);
            }
        }
        out
    }
}

#[derive(Debug)]
struct LoopData {
    nodes: NodeTable,
    quad: QuadratureTables,
    pairs: SelfPairs,
}

/// Caches every z-independent quantity needed to assemble `C_z` for one
/// loop system and node counts; safe to share across threads.
#[derive(Debug)]
pub struct CzAssembler {
    loops: Vec<LoopData>,
    offsets: Vec<usize>,
    dim: usize,
}

/// Dense Nyström matrix of `C_z` at one spectral point.
#[derive(Clone, Debug)]
pub struct BoundaryOperatorMatrix {
    pub z: f64,
    pub m: f64,
    pub matrix: Mat<c64>,
    pub offsets: Vec<usize>,
    pub sizes: Vec<usize>,
    pub lengths: Vec<f64>,
}

impl BoundaryOperatorMatrix {
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Block `(j, k)` as a copy.
    pub fn block(&self, j: usize, k: usize) -> Mat<c64> {
        let (r0, c0) = (self.offsets[j], self.offsets[k]);
        let (nr, nc) = (2 * self.sizes[j], 2 * self.sizes[k]);
        Mat::from_fn(nr, nc, |a, b| self.matrix[(r0 + a, c0 + b)])
    }

    pub fn apply(&self, u: &[C64]) -> Vec<C64> {
        matvec(&self.matrix, u)
    }

    /// Trapezoid weight `ℓ/N` of each unknown.
    pub fn weights(&self) -> Vec<f64> {
        let mut w = Vec::with_capacity(self.dim());
        for (n, l) in self.sizes.iter().zip(&self.lengths) {
            w.extend(std::iter::repeat_n(l / *n as f64, 2 * n));
        }
        w
    }
}

pub fn matvec(a: &Mat<c64>, u: &[C64]) -> Vec<C64> {
    (0..a.nrows()).map(|i| (0..a.ncols()).map(|j| a[(i, j)] * u[j]).sum()).collect()
}

impl CzAssembler {
    pub fn new(system: &LoopSystem, sizes: &[usize]) -> Result<Self, BemError> {
        if sizes.len() != system.len() {
            return Err(BemError::Invalid(format!("{} node counts for {} loops", sizes.len(), system.len())));
        }
        let mut loops = Vec::new();
        let mut offsets = Vec::new();
        let mut dim = 0;
        for ((curve, _), &n) in system.loops().iter().zip(sizes) {
            let quad = build_quadrature(n)?;
            let nodes = NodeTable::new(curve, n);
            let pairs = SelfPairs::new(&nodes, &quad);
            offsets.push(dim);
            dim += 2 * n;
            loops.push(LoopData { nodes, quad, pairs });
        }
        Ok(CzAssembler { loops, offsets, dim })
    }

    pub fn uniform(system: &LoopSystem, n: usize) -> Result<Self, BemError> {
        CzAssembler::new(system, &vec![n; system.len()])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.loops.iter().map(|l| l.nodes.n).collect()
    }

    pub fn nodes(&self, loop_index: usize) -> &NodeTable {
        &self.loops[loop_index].nodes
    }

    pub fn assemble(&self, m: f64, z: f64) -> Result<BoundaryOperatorMatrix, BemError> {
        let p = SpectralParams::new(m, z)?;
        // (loop, node) for every global node row.
        let rows: Vec<(usize, usize)> =
            self.loops.iter().enumerate().flat_map(|(l, d)| (0..d.nodes.n).map(move |i| (l, i))).collect();
        // Upper triangle (including diagonal) of 2×2 blocks, one Vec per row.
        let upper: Vec<Vec<Mat2>> = rows
            .par_iter()
            .enumerate()
            .map(|(gi, &(l, i))| {
                rows[gi..].iter().map(|&(k, j)| self.pair_block(&p, l, i, k, j)).collect()
            })
            .collect();
        let mut mat = Mat::<c64>::zeros(self.dim, self.dim);
        let index = |l: usize, i: usize, a: usize| self.offsets[l] + a * self.loops[l].nodes.n + i;
        for (gi, row) in upper.iter().enumerate() {
            let (l, i) = rows[gi];
            for (off, blk) in row.iter().enumerate() {
                let (k, j) = rows[gi + off];
                let wl = self.loops[l].nodes.length / self.loops[l].nodes.n as f64;
                let wk = self.loops[k].nodes.length / self.loops[k].nodes.n as f64;
                for a in 0..2 {
                    for b in 0..2 {
                        mat[(index(l, i, a), index(k, j, b))] = blk.0[a][b];
                        if off > 0 {
                            // Weighted self-adjointness: w_i C_ij = conj(w_j C_ji).
                            mat[(index(k, j, b), index(l, i, a))] = blk.0[a][b].conj() * (wl / wk);
                        }
                    }
                }
            }
        }
        Ok(BoundaryOperatorMatrix {
            z,
            m,
            matrix: mat,
            offsets: self.offsets.clone(),
            sizes: self.sizes(),
            lengths: self.loops.iter().map(|d| d.nodes.length).collect(),
        })
    }

    /// Entry block for target node `(l, i)` and source node `(k, j)`,
    /// quadrature weight included.
    fn pair_block(&self, p: &SpectralParams, l: usize, i: usize, k: usize, j: usize) -> Mat2 {
        let src = &self.loops[k];
        if l != k {
            let x = self.loops[l].nodes.rho[i] - src.nodes.rho[j];
            let w = src.nodes.length / src.nodes.n as f64;
            return green_kernel(p, [x.re, x.im]).expect("distinct loops never touch") * w;
        }
        let n = src.nodes.n;
        let len = src.nodes.length;
        let mm = p.mass_matrix();
        let rw = src.quad.log_weight(i, j);
        if i == j {
            let f1 = mm * (-1.0 / (2.0 * PI));
            let f2 = mm * (-(EULER_GAMMA + (p.k * len / (4.0 * PI)).ln()) / (2.0 * PI));
            return (f1 * rw + f2 * (1.0 / n as f64)) * len;
        }
        let idx = i * n + j;
        let pr = &src.pairs;
        let kappa = p.k * pr.r[idx];
        let sx = PauliAlgebra::dot(pr.xhat[idx]);
        let ik = C64::new(0.0, p.k / (2.0 * PI));
        let f1 = sx * (ik * bessel_i1(kappa)) + mm * (-bessel_i0(kappa) / (2.0 * PI));
        let g = f1 * p.k.ln() + sx * (ik * k1_regular(kappa)) + mm * (k0_regular(kappa) / (2.0 * PI));
        let f2 = g + f1 * pr.log_ratio[idx];
        let mut blk = (f1 * rw + f2 * (1.0 / n as f64)) * len;
        blk.0[0][1] += pr.c12[idx];
        blk.0[1][0] += pr.c21[idx];
        blk
    }
}

pub fn assemble_cz(system: &LoopSystem, m: f64, z: f64, n: usize) -> Result<BoundaryOperatorMatrix, BemError> {
    CzAssembler::uniform(system, n)?.assemble(m, z)
}

/// `(C_Σ, C_Σ′)` on `n` nodes, from the cot rule plus the smooth remainders
/// `ρ'(s)/(ρ(t)−ρ(s)) − π cot π(t−s)` and `conj(ρ'(t)/(ρ(t)−ρ(s))) − π cot π(t−s)`.
pub fn assemble_cauchy(curve: &Curve, n: usize) -> Result<(Mat<c64>, Mat<c64>), BemError> {
    let quad = build_quadrature(n)?;
    let nodes = NodeTable::new(curve, n);
    let i_unit = C64::new(0.0, 1.0);
    let build = |dual: bool| {
        Mat::<c64>::from_fn(n, n, |a, b| {
            let rem = if a == b {
                let q = nodes.d2[a] / (2.0 * nodes.d1[a]);
                if dual {
                    q.conj()
                } else {
                    -q
                }
            } else {
                let h = (a as f64 - b as f64) / n as f64;
                let xi = nodes.rho[a] - nodes.rho[b];
                let main = if dual { (nodes.d1[a] / xi).conj() } else { nodes.d1[b] / xi };
                main - PI / (PI * h).tan()
            };
            i_unit * quad.cot_weight(a, b) + i_unit * rem / (PI * n as f64)
        })
    };
    Ok((build(false), build(true)))
}

/// Minimal distance from `x` to any loop, by dense sampling.
pub fn distance_to_system(system: &LoopSystem, x: [f64; 2]) -> f64 {
    let q = C64::new(x[0], x[1]);
    system
        .loops()
        .iter()
        .map(|(c, _)| {
            let (pts, _, _) = c.node_data(1024.max(c.n_quad()));
            pts.iter().map(|p| (p - q).norm()).fold(f64::INFINITY, f64::min)
        })
        .fold(f64::INFINITY, f64::min)
}

/// Off-curve accuracy guard: `0.02·ℓ_min / oversample`.
pub fn single_layer_guard(system: &LoopSystem, oversample: usize) -> f64 {
    0.02 * system.min_length() / oversample.max(1) as f64
}

/// Trigonometric interpolation of `n` samples onto `m ≥ n` nodes.
pub fn upsample(u: &[C64], m: usize) -> Vec<C64> {
    let n = u.len();
    if m == n {
        return u.to_vec();
    }
    let c = crate::fourier::coeffs_unchecked(u).into_vec();
    let mut big = vec![ZERO; m];
    for (j, v) in c.iter().enumerate() {
        let f = freq(j, n);
        if f == -(n as i64) / 2 {
            // split the Nyquist mode evenly between ±n/2
            big[(n / 2) % m] += v * 0.5;
            big[m - n / 2] += v * 0.5;
        } else {
            big[f.rem_euclid(m as i64) as usize] += v;
        }
    }
    let mut planner = rustfft::FftPlanner::new();
    planner.plan_fft_inverse(m).process(&mut big);
    big
}

/// `Φ_zφ(x) = ∫_Σ φ_z(x−y) φ(y) ds(y)` by the trapezoid rule on
/// `oversample × N` nodes per loop, `density` laid out as in [`CzAssembler`].
pub fn single_layer(
    system: &LoopSystem,
    m: f64,
    z: f64,
    sizes: &[usize],
    density: &[C64],
    targets: &[[f64; 2]],
    oversample: usize,
) -> Result<Vec<[C64; 2]>, BemError> {
    let p = SpectralParams::new(m, z)?;
    let want: usize = sizes.iter().map(|n| 2 * n).sum();
    if density.len() != want || sizes.len() != system.len() {
        return Err(BemError::DensityLength { got: density.len(), want });
    }
    let guard = single_layer_guard(system, oversample);
    for x in targets {
        let dist = distance_to_system(system, *x);
        if dist < guard {
            return Err(BemError::TargetTooClose { x: x[0], y: x[1], dist, guard });
        }
    }
    let mut sources: Vec<(C64, f64, [C64; 2])> = Vec::new();
    let mut off = 0;
    for ((curve, _), &n) in system.loops().iter().zip(sizes) {
        let mq = n * oversample.max(1);
        let u1 = upsample(&density[off..off + n], mq);
        let u2 = upsample(&density[off + n..off + 2 * n], mq);
        let (pts, _, _) = curve.node_data(mq);
        let w = curve.length() / mq as f64;
        for j in 0..mq {
            sources.push((pts[j], w, [u1[j], u2[j]]));
        }
        off += 2 * n;
    }
    Ok(targets
        .par_iter()
        .map(|x| {
            let mut acc = [ZERO; 2];
            for (y, w, f) in &sources {
                if f[0] == ZERO && f[1] == ZERO {
                    continue;
                }
                let g = green_kernel(&p, [x[0] - y.re, x[1] - y.im]).expect("target off the curve");
                let v = g.apply(*f);
                acc[0] += v[0] * *w;
                acc[1] += v[1] * *w;
            }
            acc
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq)]
pub struct PlemeljReport {
    /// Relative deviation of the extrapolated `(inner+outer)/2` from `C_zφ`.
    pub average_residual: f64,
    /// Relative deviation of the extrapolated `inner − outer` from `−i(σ·ν)φ`.
    pub jump_residual: f64,
    pub probes: Vec<usize>,
    /// Extrapolated inner and outer traces at the probe nodes.
    pub inner: Vec<[C64; 2]>,
    pub outer: Vec<[C64; 2]>,
}

/// Value at `d = 0` of the polynomial through `(d_i, v_i)` (Neville).
pub fn richardson_zero(d: &[f64], v: &[C64]) -> C64 {
    let mut p = v.to_vec();
    for k in 1..p.len() {
        for i in 0..p.len() - k {
            p[i] = (p[i] * d[i + k] - p[i + 1] * d[i]) / (d[i + k] - d[i]);
        }
    }
    p[0]
}

/// Checks `T±Φ_zφ = ∓(i/2)(σ·ν)φ + C_zφ` on a single curve by evaluating
/// `Φ_zφ` at `γ ∓ dν` for every distance and extrapolating to `d = 0`
/// through all of them. `density` holds both components on `n` nodes.
pub fn plemelj_check(
    curve: &Curve,
    m: f64,
    z: f64,
    density: &[C64],
    distances: &[f64],
    oversample: usize,
) -> Result<PlemeljReport, BemError> {
    let n = density.len() / 2;
    if distances.len() < 2 {
        return Err(BemError::Invalid("need at least two distances".into()));
    }
    let mut ds = distances.to_vec();
    ds.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let d1 = ds[0];
    let system = LoopSystem::single(curve.clone(), classify(0.0, 0.0));
    let guard = single_layer_guard(&system, oversample);
    if d1 < guard {
        return Err(BemError::TargetTooClose { x: f64::NAN, y: f64::NAN, dist: d1, guard });
    }
    let cz = assemble_cz(&system, m, z, n)?;
    let c_phi = cz.apply(density);
    let nodes = NodeTable::new(curve, n);
    let stride = (n / 64).max(1);
    let probes: Vec<usize> = (0..n).step_by(stride).collect();

    let side = |d: f64, sign: f64| -> Result<Vec<[C64; 2]>, BemError> {
        let targets: Vec<[f64; 2]> = probes
            .iter()
            .map(|&j| {
                let (p, nu) = (nodes.point(j), nodes.normal(j));
                [p[0] + sign * d * nu[0], p[1] + sign * d * nu[1]]
            })
            .collect();
        single_layer(&system, m, z, &[n], density, &targets, oversample)
    };
    let trace = |sign: f64| -> Result<Vec<[C64; 2]>, BemError> {
        let samples = ds.iter().map(|&d| side(d, sign)).collect::<Result<Vec<_>, _>>()?;
        Ok((0..probes.len())
            .map(|q| {
                let e = |k: usize| richardson_zero(&ds, &samples.iter().map(|s| s[q][k]).collect::<Vec<_>>());
                [e(0), e(1)]
            })
            .collect())
    };
    let inner = trace(-1.0)?;
    let outer = trace(1.0)?;

    let (mut avg_err, mut avg_ref, mut jump_err, mut jump_ref) = (0.0, 0.0, 0.0, 0.0);
    for (q, &j) in probes.iter().enumerate() {
        let phi = [density[j], density[n + j]];
        let want_jump = (PauliAlgebra::dot(nodes.normal(j)) * C64::new(0.0, -1.0)).apply(phi);
        for a in 0..2 {
            let avg = (inner[q][a] + outer[q][a]) * 0.5;
            let cref = c_phi[a * n + j];
            avg_err += (avg - cref).norm_sqr();
            avg_ref += cref.norm_sqr();
            jump_err += (inner[q][a] - outer[q][a] - want_jump[a]).norm_sqr();
            jump_ref += want_jump[a].norm_sqr();
        }
    }
    let rel = |e: f64, r: f64| if r > 0.0 { (e / r).sqrt() } else { e.sqrt() };
    Ok(PlemeljReport {
        average_residual: rel(avg_err, avg_ref),
        jump_residual: rel(jump_err, jump_ref),
        probes,
        inner,
        outer,
    })
}

/// Direct kernel split at nodes `(i, j)` of `nodes`, for diagnostics.
pub fn node_split(p: &SpectralParams, nodes: &NodeTable, i: usize, j: usize) -> crate::kernel::KernelSplit {
    split_from_geometry(p, nodes.rho[i] - nodes.rho[j], (i as f64 - j as f64) / nodes.n as f64, nodes.length)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fourier::{log_sin_coefficient, PeriodicGrid};
    use crate::geometry::RawCurve;

    fn circle() -> Curve {
        Curve::from_raw(&RawCurve::circle(1.0, [0.0, 0.0]), 256).unwrap()
    }

    fn max_diff(a: &[C64], b: &[C64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
    }

    #[test]
    fn quadrature_examples() {
        assert!(build_quadrature(8).is_err());
        let q = build_quadrature(64).unwrap();
        let g = PeriodicGrid::new(64).unwrap();
        let one = g.exponential(0);
        assert!(q.apply_log_sin(&one).iter().all(|v| (v.re + std::f64::consts::LN_2).abs() < 1e-13));
        let e3 = g.exponential(3);
        let out = q.apply_log_sin(&e3);
        for (o, e) in out.iter().zip(&e3) {
            assert!((o - e * (-1.0 / 6.0)).norm() < 1e-13);
        }
        assert!(q.apply_cot(&one).iter().all(|v| v.norm() < 1e-13));
    }

    #[test]
    fn quadrature_exact_on_band() {
        let n = 64;
        let q = build_quadrature(n).unwrap();
        let g = PeriodicGrid::new(n).unwrap();
        for f in -(n as i64 / 2) + 1..(n as i64 / 2) {
            let e = g.exponential(f);
            let lw: Vec<C64> = e.iter().map(|v| v * log_sin_coefficient(f)).collect();
            assert!(max_diff(&q.apply_log_sin(&e), &lw) < 1e-12, "log rule n={f}");
            let hil: Vec<C64> = q.apply_cot(&e).iter().map(|v| v * C64::new(0.0, 1.0)).collect();
            let want: Vec<C64> = e.iter().map(|v| v * f.signum() as f64).collect();
            assert!(max_diff(&hil, &want) < 1e-12, "cot rule n={f}");
        }
    }

    #[test]
    fn circle_cauchy_is_hilbert_plus_mean() {
        let (c, cd) = assemble_cauchy(&circle(), 64).unwrap();
        let g = PeriodicGrid::new(64).unwrap();
        let e0 = g.exponential(0);
        assert!(max_diff(&matvec(&c, &e0), &e0) < 1e-13);
        let e4 = g.exponential(-4);
        let want: Vec<C64> = e4.iter().map(|v| -v).collect();
        assert!(max_diff(&matvec(&c, &e4), &want) < 1e-13);
        assert!(max_diff(&matvec(&cd, &e4), &want) < 1e-13);
    }

    #[test]
    fn cz_self_convergence_and_hermitian() {
        let sys = LoopSystem::single(circle(), classify(0.0, 0.0));
        let a = assemble_cz(&sys, 1.0, 0.0, 64).unwrap();
        let b = assemble_cz(&sys, 1.0, 0.0, 128).unwrap();
        let band = |n: usize| -> Vec<C64> {
            let g = PeriodicGrid::new(n).unwrap();
            let mut u: Vec<C64> = g.exponential(3).iter().zip(g.exponential(-2)).map(|(x, y)| x + y * 0.5).collect();
            u.extend(g.exponential(1).iter().map(|v| v * C64::new(0.0, 0.3)));
            u
        };
        let (ua, ub) = (a.apply(&band(64)), b.apply(&band(128)));
        for c in 0..2 {
            for j in 0..64 {
                assert!((ua[c * 64 + j] - ub[c * 128 + 2 * j]).norm() < 1e-10);
            }
        }
        let m = &b.matrix;
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                assert!((m[(i, j)] - m[(j, i)].conj()).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn cz_rotation_equivariance() {
        let n = 32;
        let sys = LoopSystem::single(circle(), classify(0.0, 0.0));
        let c = assemble_cz(&sys, 1.0, 0.3, n).unwrap().matrix;
        let ph = C64::from_polar(1.0, 2.0 * PI / n as f64);
        for a in 0..2 {
            for b in 0..2 {
                for i in 0..n {
                    for j in 0..n {
                        let shifted = c[(a * n + (i + 1) % n, b * n + (j + 1) % n)];
                        // σ·x picks up e^{∓iθ} in its off-diagonal entries under rotation.
                        let phase = match (a, b) {
                            (0, 1) => ph.conj(),
                            (1, 0) => ph,
                            _ => C64::new(1.0, 0.0),
                        };
                        assert!((shifted - c[(a * n + i, b * n + j)] * phase).norm() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn single_layer_basics() {
        let sys = LoopSystem::single(circle(), classify(0.0, 0.0));
        let zero = vec![ZERO; 64];
        let out = single_layer(&sys, 1.0, 0.0, &[32], &zero, &[[3.0, 0.0], [0.0, 0.2]], 1).unwrap();
        assert!(out.iter().all(|v| v[0] == ZERO && v[1] == ZERO));
        assert!(matches!(
            single_layer(&sys, 1.0, 0.0, &[32], &zero, &[[1.01, 0.0]], 1),
            Err(BemError::TargetTooClose { .. })
        ));
        let g = PeriodicGrid::new(32).unwrap();
        let mut u = g.exponential(1);
        u.extend(vec![ZERO; 32]);
        let far = single_layer(&sys, 1.0, 0.0, &[32], &u, &[[20.0, 0.0], [0.0, -20.0]], 1).unwrap();
        for v in far {
            assert!(v[0].norm() + v[1].norm() < (-15f64).exp());
        }
    }

    #[test]
    fn upsample_is_interpolation() {
        let g = PeriodicGrid::new(16).unwrap();
        let u: Vec<C64> = g.exponential(3).iter().zip(g.exponential(-5)).map(|(a, b)| a + b).collect();
        let big = upsample(&u, 64);
        let g2 = PeriodicGrid::new(64).unwrap();
        let want: Vec<C64> = g2.exponential(3).iter().zip(g2.exponential(-5)).map(|(a, b)| a + b).collect();
        assert!(max_diff(&big, &want) < 1e-13);
    }
}
