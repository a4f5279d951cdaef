//! Smooth closed curves given by finite Fourier series, their arc-length
//! parametrization, and collections of disjoint loops.

use crate::fourier::{coeffs_unchecked, freq};
use crate::spectral::CouplingPair;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use thiserror::Error;

const TAU: f64 = 2.0 * PI;
const DENSE_SAMPLES: usize = 1024;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("curve derivative vanishes (min speed {min:e} < 1e-8 * max speed {max:e})")]
    VanishingDerivative { min: f64, max: f64 },
    #[error("curve self-intersects near parameters {0:.6} and {1:.6}")]
    SelfIntersection(f64, f64),
    #[error("n_quad = {0} must be a power of two and at least 64")]
    BadQuadrature(usize),
    #[error("loops {0} and {1} intersect or touch (distance {2:e})")]
    IntersectingLoops(usize, usize, f64),
    #[error("invalid curve: {0}")]
    Invalid(String),
}

/// `x(u) = Σ_k a_k cos 2πku + b_k sin 2πku` for each coordinate, `k = 0..=K`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RawCurve {
    pub x_cos: Vec<f64>,
    pub x_sin: Vec<f64>,
    pub y_cos: Vec<f64>,
    pub y_sin: Vec<f64>,
}

impl RawCurve {
    pub fn new(x_cos: Vec<f64>, x_sin: Vec<f64>, y_cos: Vec<f64>, y_sin: Vec<f64>) -> Self {
        let k = [x_cos.len(), x_sin.len(), y_cos.len(), y_sin.len()].into_iter().max().unwrap_or(0).max(1);
        let pad = |mut v: Vec<f64>| {
            v.resize(k, 0.0);
            v
        };
        RawCurve { x_cos: pad(x_cos), x_sin: pad(x_sin), y_cos: pad(y_cos), y_sin: pad(y_sin) }
    }

    pub fn circle(radius: f64, center: [f64; 2]) -> Self {
        RawCurve::ellipse(radius, radius, center)
    }

    pub fn ellipse(a: f64, b: f64, center: [f64; 2]) -> Self {
        RawCurve::new(vec![center[0], a], vec![0.0, 0.0], vec![center[1], 0.0], vec![0.0, b])
    }

    /// Polar rose `r(θ) = R(1 + A cos pθ)` expanded into harmonics `1` and `p ± 1`.
    pub fn star(radius: f64, amplitude: f64, petals: u32, center: [f64; 2]) -> Self {
        let p = petals as usize;
        let k = p + 2;
        let (mut xc, xs, mut yc, mut ys) = (vec![0.0; k], vec![0.0; k], vec![0.0; k], vec![0.0; k]);
        xc[0] = center[0];
        yc[0] = center[1];
        xc[1] += radius;
        ys[1] += radius;
        let h = 0.5 * radius * amplitude;
        xc[p + 1] += h;
        ys[p + 1] += h;
        // cos((p−1)θ) and −sin((p−1)θ); sin is odd so a negative index flips sign.
        let q = p.abs_diff(1);
        xc[q] += h;
        if p >= 1 {
            ys[q] -= h;
        } else {
            ys[q] += h;
        }
        RawCurve::new(xc, xs, yc, ys)
    }

    pub fn harmonics(&self) -> usize {
        self.x_cos.len() - 1
    }

    pub fn eval(&self, u: f64) -> [f64; 2] {
        self.series(u, 0)
    }

    pub fn derivative(&self, u: f64) -> [f64; 2] {
        self.series(u, 1)
    }

    fn series(&self, u: f64, order: u32) -> [f64; 2] {
        let mut out = [0.0; 2];
        for k in 0..self.x_cos.len() {
            if order > 0 && k == 0 {
                continue;
            }
            let w = TAU * k as f64;
            let (s, c) = (w * u).sin_cos();
            let (dc, ds) = match order {
                0 => (c, s),
                _ => (-w * s, w * c),
            };
            out[0] += self.x_cos[k] * dc + self.x_sin[k] * ds;
            out[1] += self.y_cos[k] * dc + self.y_sin[k] * ds;
        }
        out
    }

    /// `u ↦ −u`.
    pub fn reversed(&self) -> Self {
        let neg = |v: &Vec<f64>| v.iter().map(|x| -x).collect();
        RawCurve { x_cos: self.x_cos.clone(), x_sin: neg(&self.x_sin), y_cos: self.y_cos.clone(), y_sin: neg(&self.y_sin) }
    }

    /// `½∮(x dy − y dx)`; positive for counterclockwise curves.
    pub fn signed_area(&self) -> f64 {
        let m = DENSE_SAMPLES.max(8 * self.x_cos.len());
        (0..m)
            .map(|j| {
                let u = j as f64 / m as f64;
                let (p, d) = (self.eval(u), self.derivative(u));
                p[0] * d[1] - p[1] * d[0]
            })
            .sum::<f64>()
            * 0.5
            / m as f64
    }

    pub fn validate(&self) -> Result<(), GeometryError> {
        let all = [&self.x_cos, &self.x_sin, &self.y_cos, &self.y_sin];
        if all.iter().any(|v| v.iter().any(|x| !x.is_finite())) {
            return Err(GeometryError::Invalid("non-finite coefficient".into()));
        }
        let m = DENSE_SAMPLES.max(16 * self.x_cos.len());
        let speeds: Vec<f64> = (0..m)
            .map(|j| {
                let d = self.derivative(j as f64 / m as f64);
                d[0].hypot(d[1])
            })
            .collect();
        let max = speeds.iter().cloned().fold(0.0, f64::max);
        let min = speeds.iter().cloned().fold(f64::INFINITY, f64::min);
        if !(min >= 1e-8 * max) || max == 0.0 {
            return Err(GeometryError::VanishingDerivative { min, max });
        }
        let pts: Vec<[f64; 2]> = (0..m).map(|j| self.eval(j as f64 / m as f64)).collect();
        if let Some((i, j)) = polygon_self_intersection(&pts) {
            return Err(GeometryError::SelfIntersection(i as f64 / m as f64, j as f64 / m as f64));
        }
        Ok(())
    }
}

fn orient(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> f64 {
    (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
}

fn segments_cross(p1: [f64; 2], p2: [f64; 2], q1: [f64; 2], q2: [f64; 2]) -> bool {
    let d1 = orient(q1, q2, p1);
    let d2 = orient(q1, q2, p2);
    let d3 = orient(p1, p2, q1);
    let d4 = orient(p1, p2, q2);
    d1 * d2 <= 0.0 && d3 * d4 <= 0.0 && !(d1 == 0.0 && d2 == 0.0)
}

/// First pair of non-adjacent edges of the closed polygon that cross.
fn polygon_self_intersection(pts: &[[f64; 2]]) -> Option<(usize, usize)> {
    let m = pts.len();
    let bbox = |i: usize| {
        let (a, b) = (pts[i], pts[(i + 1) % m]);
        [a[0].min(b[0]), a[0].max(b[0]), a[1].min(b[1]), a[1].max(b[1])]
    };
    let boxes: Vec<[f64; 4]> = (0..m).map(bbox).collect();
    for i in 0..m {
        for j in i + 2..m {
            if i == 0 && j == m - 1 {
                continue;
            }
            let (a, b) = (boxes[i], boxes[j]);
            if a[1] < b[0] || b[1] < a[0] || a[3] < b[2] || b[3] < a[2] {
                continue;
            }
            if segments_cross(pts[i], pts[(i + 1) % m], pts[j], pts[(j + 1) % m]) {
                return Some((i, j));
            }
        }
    }
    None
}

/// Point, unit tangent and unit outward normal.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Frame {
    pub point: [f64; 2],
    pub tangent: [f64; 2],
    pub normal: [f64; 2],
}

impl Frame {
    /// `T = t1 + i t2`.
    pub fn tangent_complex(&self) -> C64 {
        C64::new(self.tangent[0], self.tangent[1])
    }
}

/// Arc-length parametrized, positively oriented closed curve. The unit
/// parameter `s ∈ [0,1)` maps to `γ(sℓ)`, written as the complex `ρ(s)`
/// with `|ρ'(s)| = ℓ`.
#[derive(Clone, Debug, PartialEq)]
pub struct Curve {
    length: f64,
    /// Trigonometric interpolant of the arc-length samples, FFT order.
    coeffs: Vec<C64>,
    reversed: bool,
    bbox: [f64; 4],
}

pub const MAX_QUAD: usize = 16384;

impl Curve {
    /// Arc-length reparametrization with at least `n_quad` samples, doubled
    /// until the upper half of the spectrum is negligible.
    pub fn from_raw(raw: &RawCurve, n_quad: usize) -> Result<Curve, GeometryError> {
        let mut n = n_quad;
        loop {
            let c = arc_length_reparametrize(raw, n)?;
            if n >= MAX_QUAD || c.tail() < 1e-14 * c.length {
                return Ok(c);
            }
            n *= 2;
        }
    }

    fn tail(&self) -> f64 {
        let n = self.coeffs.len();
        (n / 4..3 * n / 4).map(|j| self.coeffs[j].norm()).fold(0.0, f64::max)
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    /// True when the input parametrization was clockwise and got reversed.
    pub fn was_reversed(&self) -> bool {
        self.reversed
    }

    /// `[x_min, x_max, y_min, y_max]`.
    pub fn bbox(&self) -> [f64; 4] {
        self.bbox
    }

    pub fn n_quad(&self) -> usize {
        self.coeffs.len()
    }

    fn eval_deriv(&self, s: f64, order: u32) -> C64 {
        let n = self.coeffs.len();
        let mut acc = C64::new(0.0, 0.0);
        for (j, c) in self.coeffs.iter().enumerate() {
            let f = freq(j, n);
            if f == -(n as i64) / 2 {
                continue;
            }
            let w = TAU * f as f64;
            let factor = C64::new(0.0, w).powu(order);
            acc += c * factor * C64::from_polar(1.0, w * s);
        }
        acc
    }

    pub fn rho(&self, s: f64) -> C64 {
        self.eval_deriv(s, 0)
    }

    pub fn rho_d1(&self, s: f64) -> C64 {
        self.eval_deriv(s, 1)
    }

    pub fn rho_d2(&self, s: f64) -> C64 {
        self.eval_deriv(s, 2)
    }

    pub fn point(&self, s: f64) -> [f64; 2] {
        let p = self.rho(s);
        [p.re, p.im]
    }

    /// `(ρ, ρ', ρ'')` at `s_j = j/n`, evaluated through the interpolant with
    /// FFTs of size `max(n, n_quad)`.
    pub fn node_data(&self, n: usize) -> (Vec<C64>, Vec<C64>, Vec<C64>) {
        let nq = self.coeffs.len();
        let big = n.max(nq);
        let step = big / n;
        let mut out = [vec![], vec![], vec![]];
        for (order, slot) in out.iter_mut().enumerate() {
            let mut buf = vec![C64::new(0.0, 0.0); big];
            for (j, c) in self.coeffs.iter().enumerate() {
                let f = freq(j, nq);
                if f == -(nq as i64) / 2 {
                    continue;
                }
                let factor = C64::new(0.0, TAU * f as f64).powu(order as u32);
                buf[f.rem_euclid(big as i64) as usize] = c * factor;
            }
            let mut planner = rustfft::FftPlanner::new();
            planner.plan_fft_inverse(big).process(&mut buf);
            *slot = buf.into_iter().step_by(step).collect();
        }
        let [a, b, c] = out;
        (a, b, c)
    }

    pub fn frame(&self, s: f64) -> Frame {
        let d = self.rho_d1(s);
        let t = d / d.norm();
        Frame { point: self.point(s), tangent: [t.re, t.im], normal: [t.im, -t.re] }
    }

    /// Winding number of the curve around `p`.
    pub fn winding_number(&self, p: [f64; 2]) -> i64 {
        let m = DENSE_SAMPLES.max(2 * self.coeffs.len());
        let (pts, _, _) = self.node_data(m);
        let q = C64::new(p[0], p[1]);
        let mut total = 0.0;
        for j in 0..m {
            let a = pts[j] - q;
            let b = pts[(j + 1) % m] - q;
            total += (b / a).arg();
        }
        (total / TAU).round() as i64
    }
}

/// Trapezoid arc length, cumulative arc length by exact integration of the
/// trigonometric interpolant of the speed, and Newton inversion onto a
/// uniform arc-length grid.
pub fn arc_length_reparametrize(raw: &RawCurve, n_quad: usize) -> Result<Curve, GeometryError> {
    if n_quad < 64 || !n_quad.is_power_of_two() {
        return Err(GeometryError::BadQuadrature(n_quad));
    }
    raw.validate()?;
    let reversed = raw.signed_area() < 0.0;
    let raw = if reversed { raw.reversed() } else { raw.clone() };

    let speed = |u: f64| {
        let d = raw.derivative(u);
        d[0].hypot(d[1])
    };
    let nq = n_quad;
    let samples: Vec<C64> = (0..nq).map(|j| C64::new(speed(j as f64 / nq as f64), 0.0)).collect();
    let vhat = coeffs_unchecked(&samples);
    let length = vhat.get(0).re;

    // σ(u) = u + (1/ℓ) Σ_{n≠0} v̂_n (e^{2πinu} − 1)/(2πin)
    let terms: Vec<(f64, C64)> = (1..nq as i64 / 2)
        .flat_map(|f| [f, -f])
        .map(|f| (TAU * f as f64, vhat.get(f) / (C64::new(0.0, TAU * f as f64) * length)))
        .collect();
    let sigma = |u: f64| {
        let mut acc = u;
        for &(w, c) in &terms {
            acc += (c * (C64::from_polar(1.0, w * u) - 1.0)).re;
        }
        acc
    };

    let mut pts = Vec::with_capacity(nq);
    let mut u = 0.0;
    for j in 0..nq {
        let target = j as f64 / nq as f64;
        if j > 0 {
            u += 1.0 / nq as f64;
        }
        for _ in 0..50 {
            let du = (sigma(u) - target) * length / speed(u);
            u -= du;
            if du.abs() < 1e-13 {
                break;
            }
        }
        let p = raw.eval(u);
        pts.push(C64::new(p[0], p[1]));
    }
    let bbox = pts.iter().fold([f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY], |b, p| {
        [b[0].min(p.re), b[1].max(p.re), b[2].min(p.im), b[3].max(p.im)]
    });
    Ok(Curve { length, coeffs: coeffs_unchecked(&pts).into_vec(), reversed, bbox })
}

pub fn frame(curve: &Curve, s: f64) -> Frame {
    curve.frame(s)
}

/// Dense-sample minimum refined by alternating golden-section searches.
pub fn min_distance(a: &Curve, b: &Curve) -> f64 {
    let m = 512;
    let (pa, _, _) = a.node_data(m);
    let (pb, _, _) = b.node_data(m);
    let mut best = (f64::INFINITY, 0, 0);
    for (i, p) in pa.iter().enumerate() {
        for (j, q) in pb.iter().enumerate() {
            let d = (p - q).norm();
            if d < best.0 {
                best = (d, i, j);
            }
        }
    }
    let (mut sa, mut sb) = (best.1 as f64 / m as f64, best.2 as f64 / m as f64);
    let h = 1.5 / m as f64;
    let mut d = best.0;
    for _ in 0..8 {
        let qb = b.rho(sb);
        sa = golden_min(|s| (a.rho(s) - qb).norm(), sa - h, sa + h, 1e-13);
        let qa = a.rho(sa);
        sb = golden_min(|s| (qa - b.rho(s)).norm(), sb - h, sb + h, 1e-13);
        let nd = (a.rho(sa) - b.rho(sb)).norm();
        if (d - nd).abs() < 1e-15 {
            d = nd;
            break;
        }
        d = nd;
    }
    d.min(best.0)
}

/// Golden-section minimizer of a unimodal function on `[lo, hi]`.
pub fn golden_min(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > tol {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        x1
    } else {
        x2
    }
}

/// Ordered loops with their couplings and pairwise minimal distances.
#[derive(Clone, Debug)]
pub struct LoopSystem {
    loops: Vec<(Curve, CouplingPair)>,
    distances: Vec<Vec<f64>>,
}

impl LoopSystem {
    pub fn new(loops: Vec<(Curve, CouplingPair)>) -> Result<Self, GeometryError> {
        if loops.is_empty() {
            return Err(GeometryError::Invalid("a loop system needs at least one loop".into()));
        }
        let n = loops.len();
        let mut distances = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in i + 1..n {
                let d = min_distance(&loops[i].0, &loops[j].0);
                if d < 1e-6 * loops[i].0.length().max(loops[j].0.length()) {
                    return Err(GeometryError::IntersectingLoops(i, j, d));
                }
                distances[i][j] = d;
                distances[j][i] = d;
            }
        }
        Ok(LoopSystem { loops, distances })
    }

    pub fn single(curve: Curve, coupling: CouplingPair) -> Self {
        LoopSystem { loops: vec![(curve, coupling)], distances: vec![vec![0.0]] }
    }

    pub fn loops(&self) -> &[(Curve, CouplingPair)] {
        &self.loops
    }

    pub fn len(&self) -> usize {
        self.loops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.loops.is_empty()
    }

    pub fn distances(&self) -> &[Vec<f64>] {
        &self.distances
    }

    pub fn min_length(&self) -> f64 {
        self.loops.iter().map(|l| l.0.length()).fold(f64::INFINITY, f64::min)
    }

    /// Same curves with different couplings.
    pub fn with_couplings(&self, couplings: &[CouplingPair]) -> Self {
        assert_eq!(couplings.len(), self.loops.len());
        LoopSystem {
            loops: self.loops.iter().zip(couplings).map(|((c, _), k)| (c.clone(), *k)).collect(),
            distances: self.distances.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::classify;

    fn presets() -> Vec<Curve> {
        vec![
            Curve::from_raw(&RawCurve::circle(1.0, [0.0, 0.0]), 256).unwrap(),
            Curve::from_raw(&RawCurve::ellipse(2.0, 1.0, [0.5, -0.3]), 512).unwrap(),
            Curve::from_raw(&RawCurve::star(1.0, 0.2, 5, [0.0, 0.0]), 512).unwrap(),
            Curve::from_raw(&RawCurve::new(vec![0.0, 1.0, 0.1], vec![0.0, 0.0, 0.05], vec![0.0, 0.0, 0.0], vec![0.0, -1.3, 0.1]), 512)
                .unwrap(),
        ]
    }

    #[test]
    fn circle_is_arc_length() {
        let c = Curve::from_raw(&RawCurve::circle(1.0, [0.0, 0.0]), 64).unwrap();
        assert!((c.length() - TAU).abs() < 1e-13);
        for s in [0.0, 0.1, 0.37, 0.9] {
            let want = C64::from_polar(1.0, TAU * s);
            assert!((c.rho(s) - want).norm() < 1e-13);
        }
    }

    #[test]
    fn ellipse_perimeter() {
        // Adaptive-quadrature value of the perimeter integral.
        let c = Curve::from_raw(&RawCurve::ellipse(2.0, 1.0, [0.0, 0.0]), 512).unwrap();
        assert!((c.length() / 9.688448220547676 - 1.0).abs() < 1e-10);
    }

    #[test]
    fn unit_ellipse_equals_circle() {
        let a = Curve::from_raw(&RawCurve::ellipse(1.0, 1.0, [0.0, 0.0]), 128).unwrap();
        let b = Curve::from_raw(&RawCurve::circle(1.0, [0.0, 0.0]), 128).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn frame_examples() {
        let c = Curve::from_raw(&RawCurve::circle(1.0, [0.0, 0.0]), 64).unwrap();
        let close = |a: [f64; 2], b: [f64; 2]| (a[0] - b[0]).abs() < 1e-13 && (a[1] - b[1]).abs() < 1e-13;
        let f = c.frame(0.0);
        assert!(close(f.point, [1.0, 0.0]) && close(f.tangent, [0.0, 1.0]) && close(f.normal, [1.0, 0.0]));
        let f = c.frame(0.25);
        assert!(close(f.point, [0.0, 1.0]) && close(f.tangent, [-1.0, 0.0]) && close(f.normal, [0.0, 1.0]));
        let e = Curve::from_raw(&RawCurve::ellipse(2.0, 1.0, [0.0, 0.0]), 512).unwrap();
        let f = e.frame(0.0);
        assert!(close(f.point, [2.0, 0.0]) && close(f.tangent, [0.0, 1.0]) && close(f.normal, [1.0, 0.0]));
    }

    #[test]
    fn preset_invariants() {
        for c in presets() {
            let l = c.length();
            let (p, d1, _) = c.node_data(1024);
            let mut area = 0.0;
            for j in 0..1024 {
                assert!((d1[j].norm() / l - 1.0).abs() < 1e-10, "speed at {j}");
                let f = c.frame(j as f64 / 1024.0);
                let t = f.tangent;
                let n = f.normal;
                assert!((n[0].hypot(n[1]) - 1.0).abs() < 1e-12);
                assert!((n[0] * t[0] + n[1] * t[1]).abs() < 1e-12);
                area += (p[j].conj() * d1[j]).im;
                let eps = 1e-3 * l;
                assert_eq!(c.winding_number([f.point[0] + eps * n[0], f.point[1] + eps * n[1]]), 0);
                if j % 128 == 0 {
                    assert_eq!(c.winding_number([f.point[0] - eps * n[0], f.point[1] - eps * n[1]]), 1);
                }
            }
            assert!(area > 0.0);
        }
    }

    #[test]
    fn clockwise_input_is_reversed() {
        let cw = RawCurve::circle(1.0, [0.0, 0.0]).reversed();
        let c = Curve::from_raw(&cw, 64).unwrap();
        assert!(c.was_reversed());
        assert!(c.frame(0.0).normal[0] > 0.99);
    }

    #[test]
    fn reparametrization_idempotent() {
        let e = Curve::from_raw(&RawCurve::ellipse(2.0, 1.0, [0.0, 0.0]), 512).unwrap();
        // Re-express the arc-length curve as a raw Fourier series and redo it.
        let nq = e.n_quad();
        let mut raw = RawCurve::new(vec![0.0; nq / 2], vec![0.0; nq / 2], vec![0.0; nq / 2], vec![0.0; nq / 2]);
        for k in 0..nq / 2 {
            let (cp, cm) = (e.coeffs[k], e.coeffs[(nq - k) % nq]);
            let (a, b) = if k == 0 { (cp, C64::new(0.0, 0.0)) } else { (cp + cm, C64::new(0.0, 1.0) * (cp - cm)) };
            raw.x_cos[k] = a.re;
            raw.x_sin[k] = b.re;
            raw.y_cos[k] = a.im;
            raw.y_sin[k] = b.im;
        }
        let again = Curve::from_raw(&raw, nq).unwrap();
        for j in 0..256 {
            let s = j as f64 / 256.0;
            assert!((again.rho(s) - e.rho(s)).norm() < 1e-10);
        }
    }

    #[test]
    fn construction_errors() {
        let degenerate = RawCurve::new(vec![0.0, 1.0], vec![0.0, 0.0], vec![0.0, 1.0], vec![0.0, 0.0]);
        assert!(matches!(Curve::from_raw(&degenerate, 64), Err(GeometryError::VanishingDerivative { .. })));
        let figure_eight = RawCurve::new(vec![0.0, 0.0], vec![0.0, 1.0], vec![0.0, 0.0, 0.0], vec![0.0, 0.0, 1.0]);
        assert!(matches!(Curve::from_raw(&figure_eight, 64), Err(GeometryError::SelfIntersection(..))));
        assert!(matches!(
            Curve::from_raw(&RawCurve::circle(1.0, [0.0, 0.0]), 100),
            Err(GeometryError::BadQuadrature(100))
        ));
    }

    #[test]
    fn distance_examples() {
        let c = |r: f64, x: f64| Curve::from_raw(&RawCurve::circle(r, [x, 0.0]), 128).unwrap();
        assert!((min_distance(&c(1.0, 0.0), &c(1.0, 4.0)) - 2.0).abs() < 1e-10);
        assert!((min_distance(&c(1.0, 0.0), &c(2.0, 0.0)) - 1.0).abs() < 1e-10);
        let e = Curve::from_raw(&RawCurve::ellipse(2.0, 1.0, [5.0, 0.0]), 512).unwrap();
        assert!((min_distance(&c(1.0, 0.0), &e) - 2.0).abs() < 1e-10);
    }

    #[test]
    fn loop_system_rejects_overlap() {
        let c = |x: f64| Curve::from_raw(&RawCurve::circle(1.0, [x, 0.0]), 128).unwrap();
        let k = classify(1.0, 0.0);
        assert!(matches!(LoopSystem::new(vec![(c(0.0), k), (c(1.0), k)]), Err(GeometryError::IntersectingLoops(0, 1, _))));
        let sys = LoopSystem::new(vec![(c(0.0), k), (c(4.0), k)]).unwrap();
        assert!((sys.distances()[0][1] - 2.0).abs() < 1e-10);
    }
}
