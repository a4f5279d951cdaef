//! Free Dirac Green kernel in the spectral gap and its singular split.
//!
//! With `k = √(m² − z²)`, `r = |x|`, `M = mσ3 + zσ0`,
//!
//! ```text
//! φ_z(x) = (ik/2π) K1(kr) σ·x/r + (1/2π) K0(kr) M
//!        = (i/2π) σ·x/r²  +  ln r · F1(x)  +  G(x)
//! F1(x)  = (ik/2π) I1(kr) σ·x̂ − (1/2π) I0(kr) M
//! G(x)   = ln k · F1(x) + (ik/2π) k1r(kr) σ·x̂ + (1/2π) k0r(kr) M
//! ```
//!
//! where `k0r`, `k1r` are the regular parts from [`bessel`]. On a curve the
//! log is rewritten as `ln|2 sin π(t−s)| + ln(r/|2 sin π(t−s)|)`, the second
//! term being smooth, so `φ = cauchy + F1·ln|2 sin π(t−s)| + F2` with
//! `F2 = G + F1·ln(r/|2 sin π(t−s)|)`. On the diagonal `r/|2 sin| → ℓ/2π`,
//! which gives
//!
//! ```text
//! F1(t,t) = −(1/2π) M
//! F2(t,t) = −(1/2π) (γ + ln(kℓ/4π)) M
//! ```

pub mod bessel;
pub mod pauli;

use crate::geometry::Curve;
use bessel::{bessel_i0, bessel_i1, bessel_k01, k0_regular, k1_regular, EULER_GAMMA};
use num_complex::Complex64 as C64;
use pauli::{Mat2, PauliAlgebra};
use std::f64::consts::PI;
use thiserror::Error;

/// Parameter separation below which the analytic diagonal limits are used.
pub const DIAGONAL_THRESHOLD: f64 = 1e-6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KernelError {
    #[error("Bessel K requires x > 0, got {0}")]
    BesselDomain(f64),
    #[error("only Bessel K orders 0 and 1 are provided, got {0}")]
    BesselOrder(u32),
    #[error("mass m = 0: the spectral gap is empty and the spectrum is the whole real line")]
    ZeroMass,
    #[error("spectral point z = {z} is outside the open gap (-{m_abs}, {m_abs})")]
    OutsideGap { z: f64, m_abs: f64 },
    #[error("Green kernel is singular at x = 0")]
    SingularPoint,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectralParams {
    pub m: f64,
    pub z: f64,
    pub k: f64,
}

impl SpectralParams {
    pub fn new(m: f64, z: f64) -> Result<Self, KernelError> {
        if m == 0.0 {
            return Err(KernelError::ZeroMass);
        }
        if !(z.abs() < m.abs()) {
            return Err(KernelError::OutsideGap { z, m_abs: m.abs() });
        }
        let k = ((m - z) * (m + z)).sqrt();
        Ok(SpectralParams { m, z, k })
    }

    /// `mσ3 + zσ0`.
    pub fn mass_matrix(&self) -> Mat2 {
        Mat2::real_diag(self.z, self.m)
    }
}

/// `φ_z(x)` evaluated directly from `K0` and `K1`.
pub fn green_kernel(p: &SpectralParams, x: [f64; 2]) -> Result<Mat2, KernelError> {
    let r = x[0].hypot(x[1]);
    if r == 0.0 {
        return Err(KernelError::SingularPoint);
    }
    let (k0, k1) = bessel_k01(p.k * r);
    let sx = PauliAlgebra::dot([x[0] / r, x[1] / r]);
    Ok(sx * C64::new(0.0, p.k * k1 / (2.0 * PI)) + p.mass_matrix() * (k0 / (2.0 * PI)))
}

/// One node pair of the split `φ = cauchy + F1·ln|2 sin π(t−s)| + F2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KernelSplit {
    /// `(i/2π) antidiag(1/ξ, 1/ξ̄)` with `ξ = ρ(t) − ρ(s)`; `None` on the diagonal.
    pub cauchy: Option<Mat2>,
    pub f1: Mat2,
    pub f2: Mat2,
    /// `ln|2 sin π(t−s)|`; `None` on the diagonal.
    pub log_factor: Option<f64>,
}

impl KernelSplit {
    /// The Cauchy weight `i/2π` shared by both anti-diagonal entries.
    pub const CAUCHY_WEIGHT: C64 = C64::new(0.0, 1.0 / (2.0 * PI));

    pub fn reassemble(&self) -> Option<Mat2> {
        Some(self.cauchy? + self.f1 * self.log_factor? + self.f2)
    }
}

/// Wraps a parameter difference into `(−1/2, 1/2]`.
pub fn wrap_unit(h: f64) -> f64 {
    let w = h - h.round();
    if w <= -0.5 {
        w + 1.0
    } else {
        w
    }
}

/// Split from raw geometry: `xi = ρ(t) − ρ(s)`, `h = t − s`, curve length `length`.
pub fn split_from_geometry(p: &SpectralParams, xi: C64, h: f64, length: f64) -> KernelSplit {
    let h = wrap_unit(h);
    let mm = p.mass_matrix();
    if h.abs() < DIAGONAL_THRESHOLD {
        let f1 = mm * (-1.0 / (2.0 * PI));
        let f2 = mm * (-(EULER_GAMMA + (p.k * length / (4.0 * PI)).ln()) / (2.0 * PI));
        return KernelSplit { cauchy: None, f1, f2, log_factor: None };
    }
    let r = xi.norm();
    let kappa = p.k * r;
    let sx = PauliAlgebra::dot([xi.re / r, xi.im / r]);
    let ik = C64::new(0.0, p.k / (2.0 * PI));
    let f1 = sx * (ik * bessel_i1(kappa)) + mm * (-bessel_i0(kappa) / (2.0 * PI));
    let g = f1 * p.k.ln() + sx * (ik * k1_regular(kappa)) + mm * (k0_regular(kappa) / (2.0 * PI));
    let log_sin = (2.0 * (PI * h).sin()).abs().ln();
    let f2 = g + f1 * (r.ln() - log_sin);
    let inv = xi.inv();
    let w = KernelSplit::CAUCHY_WEIGHT;
    let cauchy = Mat2([[C64::new(0.0, 0.0), w * inv], [w * inv.conj(), C64::new(0.0, 0.0)]]);
    KernelSplit { cauchy: Some(cauchy), f1, f2, log_factor: Some(log_sin) }
}

/// Kernel split at unit parameters `(t, s)` on `curve`.
pub fn kernel_split(p: &SpectralParams, curve: &Curve, t: f64, s: f64) -> KernelSplit {
    let xi = curve.rho(t) - curve.rho(s);
    split_from_geometry(p, xi, t - s, curve.length())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Curve, RawCurve};
    use pauli::{SIGMA0, SIGMA1, SIGMA3};

    fn circle() -> Curve {
        Curve::from_raw(&RawCurve::circle(1.0, [0.0, 0.0]), 256).unwrap()
    }

    #[test]
    fn params_validate() {
        assert_eq!(SpectralParams::new(0.0, 0.0), Err(KernelError::ZeroMass));
        assert!(SpectralParams::new(1.0, 1.0).is_err());
        assert!(SpectralParams::new(-1.0, 0.5).is_ok());
        assert_eq!(SpectralParams::new(1.0, 0.6).unwrap().k, 0.8);
    }

    #[test]
    fn green_direct_substitution() {
        let p = SpectralParams::new(1.0, 0.0).unwrap();
        let g = green_kernel(&p, [1.0, 0.0]).unwrap();
        let (k0, k1) = bessel_k01(1.0);
        let want = SIGMA1 * C64::new(0.0, k1 / (2.0 * PI)) + SIGMA3 * (k0 / (2.0 * PI));
        assert!((g - want).norm() < 1e-16);
        assert_eq!(green_kernel(&p, [0.0, 0.0]), Err(KernelError::SingularPoint));
    }

    #[test]
    fn green_hermitian_symmetry() {
        let p = SpectralParams::new(1.0, 0.37).unwrap();
        for x in [[0.3, -0.2], [2.0, 1.0], [-0.01, 0.004]] {
            let a = green_kernel(&p, x).unwrap().adjoint();
            let b = green_kernel(&p, [-x[0], -x[1]]).unwrap();
            assert!((a - b).norm() <= 1e-13 * b.norm());
        }
    }

    #[test]
    fn green_far_field_decay() {
        // |φ(x)| √r e^{r} approaches a constant for m = 1, z = 0.
        let p = SpectralParams::new(1.0, 0.0).unwrap();
        let scaled: Vec<f64> = [5.0, 10.0, 20.0]
            .iter()
            .map(|&r| green_kernel(&p, [r, 0.0]).unwrap().norm() * r.sqrt() * r.exp())
            .collect();
        assert!((scaled[1] / scaled[2] - 1.0).abs() < 0.05);
        assert!((scaled[0] / scaled[2] - 1.0).abs() < 0.1);
    }

    #[test]
    fn split_reassembles_on_circle() {
        let c = circle();
        let p = SpectralParams::new(1.0, 0.0).unwrap();
        let sp = kernel_split(&p, &c, 0.3, 0.7);
        let x = c.rho(0.3) - c.rho(0.7);
        let direct = green_kernel(&p, [x.re, x.im]).unwrap();
        assert!((sp.reassemble().unwrap() - direct).norm() < 1e-12 * direct.norm());
    }

    #[test]
    fn f1_diagonal() {
        let c = circle();
        let p = SpectralParams::new(1.0, 0.5).unwrap();
        let sp = kernel_split(&p, &c, 0.2, 0.2);
        let want = (SIGMA3 + SIGMA0 * 0.5) * (-1.0 / (2.0 * PI));
        assert!((sp.f1 - want).norm() < 1e-15);
        assert!(sp.cauchy.is_none());
    }

    #[test]
    fn f2_diagonal_limit() {
        let c = circle();
        let p = SpectralParams::new(1.0, 0.3).unwrap();
        let t = 0.41;
        let f2d = kernel_split(&p, &c, t, t).f2;
        let errs: Vec<f64> = [1e-2, 1e-3, 1e-4]
            .iter()
            .map(|&h| (kernel_split(&p, &c, t, t + h).f2 - f2d).norm())
            .collect();
        assert!(errs[2] < 1e-3);
        for w in errs.windows(2) {
            // order ≥ 1: each decade of h buys at least one decade (up to log factors)
            assert!(w[0] / w[1] > 5.0, "{errs:?}");
        }
    }

    #[test]
    fn cauchy_part_parameter_free() {
        let c = circle();
        let a = kernel_split(&SpectralParams::new(1.0, 0.0).unwrap(), &c, 0.1, 0.6);
        let b = kernel_split(&SpectralParams::new(3.0, -2.5).unwrap(), &c, 0.1, 0.6);
        assert_eq!(a.cauchy, b.cauchy);
    }
}
