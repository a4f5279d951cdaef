//! Log and cot quadrature rules reproduce their Fourier symbols exactly
//! on band-limited input.

use diracshell::bem::build_quadrature;
use diracshell::fourier::{log_sin_coefficient, PeriodicGrid};
use num_complex::Complex64 as C64;

fn main() {
    let n = 64;
    let q = build_quadrature(n).unwrap();
    let grid = PeriodicGrid::new(n).unwrap();
    println!("{:>4} {:>12} {:>12}", "n", "log err", "cot err");
    for f in [-20i64, -1, 0, 1, 7, 31] {
        let e = grid.exponential(f);
        let log = q.apply_log_sin(&e);
        let cot = q.apply_cot(&e);
        let le = log.iter().zip(&e).map(|(g, x)| (g - x * log_sin_coefficient(f)).norm()).fold(0.0, f64::max);
        let ce = cot
            .iter()
            .zip(&e)
            .map(|(g, x)| (g * C64::new(0.0, 1.0) - x * f.signum() as f64).norm())
            .fold(0.0, f64::max);
        println!("{f:>4} {le:>12.2e} {ce:>12.2e}");
    }
}
