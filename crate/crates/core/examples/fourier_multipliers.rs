//! Hilbert transform, the log|sin| symbol and Sobolev norms on a periodic grid.

use diracshell::fourier::{coeffs, hilbert_transform, log_sin_coefficient, sobolev_norm, PeriodicGrid, SobolevWeight};
use num_complex::Complex64 as C64;

fn main() {
    let grid = PeriodicGrid::new(64).unwrap();
    for n in [-3i64, 0, 5] {
        let e = grid.exponential(n);
        let h = hilbert_transform(&e);
        let sym = coeffs(&h).unwrap().get(n);
        println!("T0 e_{n}: symbol {:+.3} (sign n = {})", sym.re, n.signum());
    }
    for n in [0i64, 1, 2, 8] {
        println!("ln|sin πt| coefficient at {n}: {:.6}", log_sin_coefficient(n));
    }
    let u: Vec<C64> = grid.nodes().iter().map(|&t| C64::new((2.0 * std::f64::consts::PI * 3.0 * t).cos(), 0.0)).collect();
    for s in [-0.5, 0.0, 0.5] {
        println!("‖cos 6πt‖_H^{s} = {:.6}", sobolev_norm(&u, s, SobolevWeight::Underline));
    }
}
