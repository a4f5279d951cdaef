use diracshell::spectral::{eigenfunction, find_eigenvalues, EigenvalueEntry, EigenvalueReport, ScanConfig};
use diracshell::validation::{circle_oracle, circle_system};
use num_complex::Complex64 as C64;
use std::f64::consts::PI;
use std::sync::OnceLock;

fn report() -> &'static EigenvalueReport {
    static R: OnceLock<EigenvalueReport> = OnceLock::new();
    R.get_or_init(|| find_eigenvalues(&circle_system(-3.0, 0.0), 1.0, 64, &ScanConfig::default()).unwrap())
}

fn ring(r: f64, count: usize) -> Vec<[f64; 2]> {
    (0..count).map(|j| 2.0 * PI * j as f64 / count as f64).map(|t| [r * t.cos(), r * t.sin()]).collect()
}

fn field(entry: &EigenvalueEntry, targets: &[[f64; 2]]) -> Vec<[C64; 2]> {
    eigenfunction(&circle_system(-3.0, 0.0), 1.0, entry, &report().sizes, targets, 8).unwrap()
}

/// Share of the field's energy on the ring in `e^{inθ}` (upper) and
/// `e^{i(n+1)θ}` (lower).
fn mode_correlation(u: &[[C64; 2]], n: i64) -> f64 {
    let count = u.len() as f64;
    let project = |k: usize, f: i64| -> C64 {
        u.iter()
            .enumerate()
            .map(|(j, v)| v[k] * C64::from_polar(1.0, -2.0 * PI * (f * j as i64) as f64 / count))
            .sum::<C64>()
            / count
    };
    let energy: f64 = u.iter().map(|v| v[0].norm_sqr() + v[1].norm_sqr()).sum();
    let captured = count * (project(0, n).norm_sqr() + project(1, n + 1).norm_sqr());
    (captured / energy).sqrt()
}

#[test]
fn circle_eigenfunctions_are_angular_modes() {
    let oracle = circle_oracle(1.0, 1.0, -3.0, 0.0);
    assert_eq!(report().eigenvalues.len(), 5);
    for e in &report().eigenvalues {
        let n = oracle.channel_of(e.z).unwrap();
        for r in [0.5, 2.0] {
            let c = mode_correlation(&field(e, &ring(r, 128)), n);
            assert!(c >= 0.999, "z = {}, channel {n}, r = {r}: correlation {c}", e.z);
        }
    }
}

#[test]
fn eigenfunction_decays_like_kernel() {
    let e = report().eigenvalues.iter().find(|e| (e.z + 0.679).abs() < 1e-3).unwrap();
    let k = (1.0 - e.z * e.z).sqrt();
    // One call, so both rings share the normalization.
    let mut targets = ring(2.0, 32);
    targets.extend(ring(10.0, 32));
    let u = field(e, &targets);
    let mean = |s: &[[C64; 2]]| s.iter().map(|v| (v[0].norm_sqr() + v[1].norm_sqr()).sqrt()).sum::<f64>() / 32.0;
    let ratio = mean(&u[32..]) / mean(&u[..32]);
    let want = (-k * 8.0).exp();
    assert!(ratio / want > 1.0 / 3.0 && ratio / want < 3.0, "ratio {ratio:e} vs {want:e}");
}

#[test]
fn zero_density_gives_zero_field() {
    let mut entry = report().eigenvalues[0].clone();
    entry.densities = vec![vec![[0.0, 0.0]; entry.densities[0].len()]];
    let u = field(&entry, &ring(2.0, 8));
    assert!(u.iter().all(|v| v[0] == C64::new(0.0, 0.0) && v[1] == C64::new(0.0, 0.0)));
}
