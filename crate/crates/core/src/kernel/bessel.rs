//! Modified Bessel functions of integer order for real positive arguments.
//!
//! `K0`/`K1` use the ascending series up to `x = 2` and Steed's continued
//! fraction above. The `*_regular` variants strip the logarithmic and pole
//! singularities so the kernel split can evaluate them without cancellation.

use super::KernelError;

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const SERIES_LIMIT: f64 = 2.0;
const EPS: f64 = 1e-17;
const MAX_TERMS: usize = 2000;

/// `I_n(x)` by its ascending series (all terms positive).
pub fn bessel_i(n: u32, x: f64) -> f64 {
    if x == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    let half = 0.5 * x;
    let mut lead = 1.0;
    for j in 1..=n {
        lead *= half / j as f64;
    }
    lead * series_i_tail(n, x)
}

pub fn bessel_i0(x: f64) -> f64 {
    series_i_tail(0, x)
}

pub fn bessel_i1(x: f64) -> f64 {
    0.5 * x * series_i_tail(1, x)
}

/// `sum_k (x^2/4)^k n! / (k! (n+k)!)`, i.e. `I_n(x)` with the leading
/// `(x/2)^n / n!` factored out.
fn series_i_tail(n: u32, x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..MAX_TERMS {
        term *= q / (k as f64 * (n as f64 + k as f64));
        sum += term;
        if term < EPS * sum {
            break;
        }
    }
    sum
}

/// `K_0` or `K_1`. Underflows silently to 0 beyond `x ≈ 705`.
pub fn bessel_k(order: u32, x: f64) -> Result<f64, KernelError> {
    if !(x > 0.0) {
        return Err(KernelError::BesselDomain(x));
    }
    let (k0, k1) = bessel_k01(x);
    match order {
        0 => Ok(k0),
        1 => Ok(k1),
        _ => Err(KernelError::BesselOrder(order)),
    }
}

/// `(K0(x), K1(x))` for `x > 0`.
pub fn bessel_k01(x: f64) -> (f64, f64) {
    if x <= SERIES_LIMIT {
        let (r0, r1) = small_regular(x);
        let lx = x.ln();
        (r0 - lx * bessel_i0(x), r1 + 1.0 / x + lx * bessel_i1(x))
    } else {
        let (s0, s1) = steed_scaled(x);
        let e = (-x).exp();
        (s0 * e, s1 * e)
    }
}

/// `(e^x K0(x), e^x K1(x))`.
pub fn bessel_k01_scaled(x: f64) -> (f64, f64) {
    if x <= SERIES_LIMIT {
        let (k0, k1) = bessel_k01(x);
        let e = x.exp();
        (k0 * e, k1 * e)
    } else {
        steed_scaled(x)
    }
}

/// `K0(x) + ln(x) I0(x)`: the analytic remainder of `K0` once the log is removed.
pub fn k0_regular(x: f64) -> f64 {
    if x <= SERIES_LIMIT {
        small_regular(x).0
    } else {
        bessel_k01(x).0 + x.ln() * bessel_i0(x)
    }
}

/// `K1(x) − 1/x − ln(x) I1(x)`: vanishes like `x ln x` at the origin.
pub fn k1_regular(x: f64) -> f64 {
    if x <= SERIES_LIMIT {
        small_regular(x).1
    } else {
        bessel_k01(x).1 - 1.0 / x - x.ln() * bessel_i1(x)
    }
}

/// Both regular parts from the ascending series:
///   K0 + ln x I0 = (ln 2 − γ) I0 + Σ_{k≥1} H_k q^k/(k!)²
///   K1 − 1/x − ln x I1 = −ln 2 I1 − (x/4) Σ_{k≥0} (ψ(k+1)+ψ(k+2)) q^k/(k!(k+1)!)
/// with q = x²/4 and ψ(k+1) = H_k − γ.
fn small_regular(x: f64) -> (f64, f64) {
    let q = 0.25 * x * x;
    let ln2 = std::f64::consts::LN_2;

    let mut t0 = 1.0; // q^k/(k!)^2
    let mut t1 = 1.0; // q^k/(k!(k+1)!)
    let mut h = 0.0; // H_k
    let mut i0 = 1.0;
    let mut i1 = 1.0;
    let mut s0 = 0.0;
    let mut s1 = 1.0 - 2.0 * EULER_GAMMA; // k = 0: ψ(1)+ψ(2)
    for k in 1..MAX_TERMS {
        let kf = k as f64;
        t0 *= q / (kf * kf);
        t1 *= q / (kf * (kf + 1.0));
        h += 1.0 / kf;
        let h_next = h + 1.0 / (kf + 1.0);
        i0 += t0;
        i1 += t1;
        s0 += h * t0;
        s1 += (h + h_next - 2.0 * EULER_GAMMA) * t1;
        if t0 < EPS * i0 && t1 < EPS * i1.max(s1.abs()) {
            break;
        }
    }
    let i1 = 0.5 * x * i1;
    let r0 = (ln2 - EULER_GAMMA) * i0 + s0;
    let r1 = -ln2 * i1 - 0.25 * x * s1;
    (r0, r1)
}

/// Steed's continued fraction (Temme's CF2) for the scaled pair
/// `(e^x K0, e^x K1)`; converges quickly for `x ≥ 2`.
fn steed_scaled(x: f64) -> (f64, f64) {
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut h = d;
    let mut delh = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let a1 = 0.25;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    for i in 2..MAX_TERMS {
        let fi = i as f64;
        a -= 2.0 * (fi - 1.0);
        c = -a * c / fi;
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh *= b * d - 1.0;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < 1e-17 {
            break;
        }
    }
    h *= a1;
    let k0 = (std::f64::consts::PI / (2.0 * x)).sqrt() / s;
    let k1 = k0 * (x + 0.5 - h) / x;
    (k0, k1)
}

/// `ln I_n(x)` without overflow in `n`.
pub fn ln_bessel_i(n: u32, x: f64) -> f64 {
    let mut ln_fact = 0.0;
    for j in 2..=n {
        ln_fact += (j as f64).ln();
    }
    n as f64 * (0.5 * x).ln() - ln_fact + series_i_tail(n, x).ln()
}

/// `ln K_n(x)` by forward recurrence on the ratios `K_{j+1}/K_j`, which is
/// stable in the increasing direction.
pub fn ln_bessel_k(n: u32, x: f64) -> f64 {
    let (s0, s1) = bessel_k01_scaled(x);
    let mut ln_k = s0.ln() - x;
    let mut ratio = s1 / s0;
    for j in 1..=n {
        ln_k += ratio.ln();
        ratio = 1.0 / ratio + 2.0 * j as f64 / x;
    }
    ln_k
}

/// `I_n(x) K_n(x)`, stable for large `n` and small `x`.
pub fn bessel_ik_product(n: u32, x: f64) -> f64 {
    (ln_bessel_i(n, x) + ln_bessel_k(n, x)).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn reference_values() {
        // 30-digit values from an arbitrary-precision library.
        let cases = [
            (1e-8, 18.536612259610778409, 99999999.999999904817),
            (0.1, 2.4270690247020166125, 9.8538447808706061348),
            (1.0, 0.42102443824070833334, 0.60190723019723457474),
            (2.0, 0.11389387274953343565, 0.13986588181652242728),
            (2.5, 0.062347553200366186029, 0.073890816347747063649),
            (10.0, 1.7780062316167651811e-5, 1.8648773453825584597e-5),
            (50.0, 3.4101677497894955139e-23, 3.4441022267175556126e-23),
            (700.0, 4.669776431685376881e-306, 4.6731107967079661091e-306),
        ];
        for (x, k0, k1) in cases {
            let (a, b) = bessel_k01(x);
            assert!(rel(a, k0) < 1e-14, "K0({x}) = {a}, want {k0}");
            assert!(rel(b, k1) < 1e-14, "K1({x}) = {b}, want {k1}");
        }
    }

    #[test]
    fn small_argument_limits() {
        for x in [1e-4, 1e-6, 1e-8] {
            let (k0, k1) = bessel_k01(x);
            assert!((k0 + (x / 2.0).ln() + EULER_GAMMA).abs() < 1e-6);
            assert!((x * k1 - 1.0).abs() < 1e-6);
        }
    }

    #[test]
    fn branches_agree_across_switch() {
        for i in 0..=100 {
            let x = 1.5 + i as f64 / 100.0;
            let (a0, a1) = steed_scaled(x);
            let (r0, r1) = small_regular(x);
            let lx = x.ln();
            let e = x.exp();
            let b0 = (r0 - lx * bessel_i0(x)) * e;
            let b1 = (r1 + 1.0 / x + lx * bessel_i1(x)) * e;
            assert!(rel(a0, b0) < 2e-14, "x={x}");
            assert!(rel(a1, b1) < 2e-14, "x={x}");
        }
    }

    #[test]
    fn domain_errors() {
        assert!(bessel_k(0, 0.0).is_err());
        assert!(bessel_k(1, -1.0).is_err());
        assert!(bessel_k(2, 1.0).is_err());
        assert_eq!(bessel_k(0, 800.0).unwrap(), 0.0);
    }

    #[test]
    fn wronskian() {
        // I_n K_{n+1} + I_{n+1} K_n = 1/x
        for &x in &[0.05, 0.7, 3.0, 12.0] {
            for n in 0..30u32 {
                let w = (ln_bessel_i(n, x) + ln_bessel_k(n + 1, x)).exp()
                    + (ln_bessel_i(n + 1, x) + ln_bessel_k(n, x)).exp();
                assert!(rel(w, 1.0 / x) < 1e-12, "n={n} x={x}");
            }
        }
    }

    #[test]
    fn ik_product_bound() {
        for n in 1..60u32 {
            for &x in &[1e-3, 0.1, 1.0, 5.0] {
                assert!(bessel_ik_product(n, x) <= 0.5 / n as f64 * (1.0 + 1e-12));
            }
        }
    }

    #[test]
    fn i_values() {
        // I0(1), I1(1), I5(2)
        assert!(rel(bessel_i0(1.0), 1.2660658777520083356) < 1e-15);
        assert!(rel(bessel_i1(1.0), 0.56515910399248502721) < 1e-15);
        assert!(rel(bessel_i(5, 2.0), 0.0098256793231317023) < 1e-14);
    }
}
