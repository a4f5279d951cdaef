//! Two distant unit circles with the same coupling: every eigenvalue of
//! one circle appears twice.

use diracshell::spectral::{classify, find_eigenvalues, ScanConfig};
use diracshell::validation::{circle_system, set_distance, two_circles};

fn main() {
    let c = classify(-3.0, 0.0);
    let cfg = ScanConfig::default();
    let one = find_eigenvalues(&circle_system(-3.0, 0.0), 1.0, 32, &cfg).unwrap();
    let two = find_eigenvalues(&two_circles(c, c), 1.0, 32, &cfg).unwrap();
    let mut doubled: Vec<f64> = one.roots().iter().flat_map(|&z| [z, z]).collect();
    doubled.sort_by(f64::total_cmp);
    for e in &two.eigenvalues {
        println!("pair {:+.12} x{}  σ = {:.1e}", e.z, e.multiplicity, e.sigma_min);
    }
    println!("distance to doubled single-circle set: {:.2e}", set_distance(&two.root_multiset(), &doubled));
}
