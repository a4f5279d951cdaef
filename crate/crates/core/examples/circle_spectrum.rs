//! Boundary-element eigenvalues of the unit circle next to the oracle.

use diracshell::spectral::{find_eigenvalues, ScanConfig};
use diracshell::validation::{circle_system, oracle_roots};

fn main() {
    let (eta, tau) = (-3.0, 0.0);
    let cfg = ScanConfig::default();
    let want = oracle_roots(eta, tau, &cfg);
    for n in [32, 64] {
        let rep = find_eigenvalues(&circle_system(eta, tau), 1.0, n, &cfg).unwrap();
        println!("N = {n}");
        for (e, w) in rep.eigenvalues.iter().zip(&want) {
            println!("  z = {:+.12}  σ = {:.1e}  mult {}  |Δ| = {:.1e}", e.z, e.sigma_min, e.multiplicity, (e.z - w).abs());
        }
        for w in &rep.warnings {
            println!("  warning: {w}");
        }
    }
}
