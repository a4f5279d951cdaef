//! Periodic Fourier calculus on the unit torus.
//!
//! Coefficients are stored in FFT order: index `j` holds frequency `j` for
//! `j < N/2` and `j − N` otherwise, so the Nyquist slot is frequency `−N/2`.

use num_complex::Complex64 as C64;
use rustfft::FftPlanner;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FourierError {
    #[error("grid size {0} must be a power of two and at least 8")]
    BadGrid(usize),
    #[error("sample length {got} does not match grid size {want}")]
    LengthMismatch { got: usize, want: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PeriodicGrid {
    n: usize,
}

impl PeriodicGrid {
    pub fn new(n: usize) -> Result<Self, FourierError> {
        if n < 8 || !n.is_power_of_two() {
            return Err(FourierError::BadGrid(n));
        }
        Ok(PeriodicGrid { n })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn node(&self, j: usize) -> f64 {
        j as f64 / self.n as f64
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.node(j)).collect()
    }

    /// Samples of `e_n(t) = e^{2πint}` on the grid.
    pub fn exponential(&self, n: i64) -> Vec<C64> {
        (0..self.n)
            .map(|j| C64::from_polar(1.0, 2.0 * std::f64::consts::PI * n as f64 * self.node(j)))
            .collect()
    }
}

/// Frequency carried by FFT slot `j` of an `n`-point transform.
pub fn freq(j: usize, n: usize) -> i64 {
    if j < n / 2 {
        j as i64
    } else {
        j as i64 - n as i64
    }
}

/// FFT slot of frequency `f` (taken modulo `n`).
pub fn slot(f: i64, n: usize) -> usize {
    f.rem_euclid(n as i64) as usize
}

#[derive(Clone, Debug, PartialEq)]
pub struct FourierCoeffs {
    data: Vec<C64>,
}

impl FourierCoeffs {
    pub fn from_fft_order(data: Vec<C64>) -> Self {
        FourierCoeffs { data }
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    /// `f̂(n)` for `|n| < N/2`, zero outside the represented band.
    pub fn get(&self, n: i64) -> C64 {
        let len = self.data.len() as i64;
        if 2 * n.abs() >= len {
            return C64::new(0.0, 0.0);
        }
        self.data[slot(n, self.data.len())]
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<C64> {
        self.data
    }
}

fn transform(mut buf: Vec<C64>, inverse: bool) -> Vec<C64> {
    let mut planner = FftPlanner::new();
    let fft = if inverse {
        planner.plan_fft_inverse(buf.len())
    } else {
        planner.plan_fft_forward(buf.len())
    };
    fft.process(&mut buf);
    buf
}

/// `f̂(n) = (1/N) Σ_j f(t_j) e^{−2πint_j}`.
pub fn coeffs(samples: &[C64]) -> Result<FourierCoeffs, FourierError> {
    PeriodicGrid::new(samples.len())?;
    Ok(coeffs_unchecked(samples))
}

pub(crate) fn coeffs_unchecked(samples: &[C64]) -> FourierCoeffs {
    let scale = 1.0 / samples.len() as f64;
    let data = transform(samples.to_vec(), false).into_iter().map(|c| c * scale).collect();
    FourierCoeffs { data }
}

/// Samples from a full FFT-order coefficient table.
pub fn inverse(c: &FourierCoeffs) -> Vec<C64> {
    transform(c.data.clone(), true)
}

type Symbol = Arc<dyn Fn(i64) -> C64 + Send + Sync>;

/// A frequency-independent-of-`t` symbol `h(n)` with declared order `α`.
#[derive(Clone)]
pub struct FourierMultiplier {
    symbol: Symbol,
    pub order: f64,
}

impl std::fmt::Debug for FourierMultiplier {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FourierMultiplier").field("order", &self.order).finish()
    }
}

impl FourierMultiplier {
    pub fn new(order: f64, symbol: impl Fn(i64) -> C64 + Send + Sync + 'static) -> Self {
        FourierMultiplier { symbol: Arc::new(symbol), order }
    }

    pub fn identity() -> Self {
        FourierMultiplier::new(0.0, |_| C64::new(1.0, 0.0))
    }

    pub fn symbol(&self, n: i64) -> C64 {
        (self.symbol)(n)
    }

    /// `self ∘ other`: symbols multiply, orders add.
    pub fn compose(&self, other: &FourierMultiplier) -> FourierMultiplier {
        let (a, b) = (self.symbol.clone(), other.symbol.clone());
        FourierMultiplier::new(self.order + other.order, move |n| a(n) * b(n))
    }

    /// Smallest `C` with `|h(n)| ≤ C n̲^α` over `|n| ≤ n_max`.
    pub fn order_constant(&self, n_max: i64) -> f64 {
        (-n_max..=n_max)
            .map(|n| self.symbol(n).norm() / (n.abs().max(1) as f64).powf(self.order))
            .fold(0.0, f64::max)
    }
}

/// Output coefficients are `h(n) û(n)` on every grid frequency, Nyquist included.
pub fn apply_multiplier(m: &FourierMultiplier, u: &[C64]) -> Vec<C64> {
    let n = u.len();
    let mut c = coeffs_unchecked(u).into_vec();
    for (j, v) in c.iter_mut().enumerate() {
        *v *= m.symbol(freq(j, n));
    }
    transform(c, true)
}

/// Symbol `(c0² + |n|)^{α/2}`.
pub fn lambda_alpha(alpha: f64, c0: f64) -> FourierMultiplier {
    assert!(c0 > 0.0, "c0 must be positive");
    let c2 = c0 * c0;
    FourierMultiplier::new(alpha / 2.0, move |n| C64::new((c2 + n.abs() as f64).powf(alpha / 2.0), 0.0))
}

/// Symbol `sign(n)`.
pub fn hilbert_multiplier() -> FourierMultiplier {
    FourierMultiplier::new(0.0, |n| C64::new(n.signum() as f64, 0.0))
}

pub fn hilbert_transform(u: &[C64]) -> Vec<C64> {
    apply_multiplier(&hilbert_multiplier(), u)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SobolevWeight {
    /// `n̲ = max(|n|, 1)`.
    Underline,
    /// `(c0² + |n|)^{1/2}`.
    Lambda { c0: f64 },
}

/// `(Σ_{|n|<N/2} w(n)^{2s} |û(n)|²)^{1/2}`.
pub fn sobolev_norm(u: &[C64], s: f64, weight: SobolevWeight) -> f64 {
    let n = u.len();
    let c = coeffs_unchecked(u);
    let mut acc = 0.0;
    for f in -(n as i64 / 2) + 1..(n as i64 / 2) {
        let w = match weight {
            SobolevWeight::Underline => f.abs().max(1) as f64,
            SobolevWeight::Lambda { c0 } => (c0 * c0 + f.abs() as f64).sqrt(),
        };
        acc += w.powf(2.0 * s) * c.get(f).norm_sqr();
    }
    acc.sqrt()
}

/// Exact Fourier coefficients of `ln|sin πt|`: `−ln 2` at 0, `−1/(2|n|)` otherwise.
pub fn log_sin_coefficient(n: i64) -> f64 {
    if n == 0 {
        -std::f64::consts::LN_2
    } else {
        -0.5 / n.abs() as f64
    }
}
