//! 2×2 complex matrices and the Pauli basis.

use num_complex::Complex64 as C64;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

const O: C64 = C64::new(0.0, 0.0);
const I1: C64 = C64::new(1.0, 0.0);
const IM: C64 = C64::new(0.0, 1.0);

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat2(pub [[C64; 2]; 2]);

pub const SIGMA0: Mat2 = Mat2([[I1, O], [O, I1]]);
pub const SIGMA1: Mat2 = Mat2([[O, I1], [I1, O]]);
pub const SIGMA2: Mat2 = Mat2([[O, C64::new(0.0, -1.0)], [IM, O]]);
pub const SIGMA3: Mat2 = Mat2([[I1, O], [O, C64::new(-1.0, 0.0)]]);

/// The four constant matrices `σ0..σ3`.
pub struct PauliAlgebra;

impl PauliAlgebra {
    pub const SIGMA: [Mat2; 4] = [SIGMA0, SIGMA1, SIGMA2, SIGMA3];

    /// `σ·x = x1 σ1 + x2 σ2`.
    pub fn dot(x: [f64; 2]) -> Mat2 {
        Mat2([
            [O, C64::new(x[0], -x[1])],
            [C64::new(x[0], x[1]), O],
        ])
    }
}

impl Mat2 {
    pub const ZERO: Mat2 = Mat2([[O, O], [O, O]]);

    pub fn diag(a: C64, b: C64) -> Self {
        Mat2([[a, O], [O, b]])
    }

    /// `a σ0 + b σ3` for real `a`, `b`.
    pub fn real_diag(a: f64, b: f64) -> Self {
        Mat2::diag(C64::new(a + b, 0.0), C64::new(a - b, 0.0))
    }

    pub fn adjoint(&self) -> Self {
        let m = &self.0;
        Mat2([[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]])
    }

    pub fn scale(&self, c: C64) -> Self {
        let m = &self.0;
        Mat2([[m[0][0] * c, m[0][1] * c], [m[1][0] * c, m[1][1] * c]])
    }

    pub fn det(&self) -> C64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    pub fn inverse(&self) -> Option<Self> {
        let d = self.det();
        if d.norm() == 0.0 {
            return None;
        }
        let m = &self.0;
        Some(Mat2([[m[1][1], -m[0][1]], [-m[1][0], m[0][0]]]).scale(d.inv()))
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.0.iter().flatten().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn apply(&self, v: [C64; 2]) -> [C64; 2] {
        [
            self.0[0][0] * v[0] + self.0[0][1] * v[1],
            self.0[1][0] * v[0] + self.0[1][1] * v[1],
        ]
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, r: Mat2) -> Mat2 {
        let (a, b) = (self.0, r.0);
        Mat2([
            [a[0][0] + b[0][0], a[0][1] + b[0][1]],
            [a[1][0] + b[1][0], a[1][1] + b[1][1]],
        ])
    }
}

impl AddAssign for Mat2 {
    fn add_assign(&mut self, r: Mat2) {
        *self = *self + r;
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, r: Mat2) -> Mat2 {
        self + (-r)
    }
}

impl Neg for Mat2 {
    type Output = Mat2;
    fn neg(self) -> Mat2 {
        self.scale(C64::new(-1.0, 0.0))
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, r: Mat2) -> Mat2 {
        let (a, b) = (self.0, r.0);
        let e = |i: usize, j: usize| a[i][0] * b[0][j] + a[i][1] * b[1][j];
        Mat2([[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]])
    }
}

impl Mul<f64> for Mat2 {
    type Output = Mat2;
    fn mul(self, r: f64) -> Mat2 {
        self.scale(C64::new(r, 0.0))
    }
}

impl Mul<C64> for Mat2 {
    type Output = Mat2;
    fn mul(self, r: C64) -> Mat2 {
        self.scale(r)
    }
}
