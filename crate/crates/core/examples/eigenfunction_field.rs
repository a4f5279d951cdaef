//! Lowest eigenfunction of the unit circle sampled along the x axis.

use diracshell::spectral::{eigenfunction, find_eigenvalues, ScanConfig};
use diracshell::validation::{circle_oracle, circle_system};

fn main() {
    let sys = circle_system(-3.0, 0.0);
    let rep = find_eigenvalues(&sys, 1.0, 64, &ScanConfig::default()).unwrap();
    let entry = &rep.eigenvalues[0];
    let channel = circle_oracle(1.0, 1.0, -3.0, 0.0).channel_of(entry.z);
    println!("z = {:.12}, oracle channel {channel:?}", entry.z);
    let targets: Vec<[f64; 2]> = (0..12).map(|i| [0.25 + 0.5 * i as f64, 0.0]).collect();
    let field = eigenfunction(&sys, 1.0, entry, &rep.sizes, &targets, 8).unwrap();
    for (x, u) in targets.iter().zip(field) {
        println!("x = {:5.2}  |u1| = {:.4e}  |u2| = {:.4e}", x[0], u[0].norm(), u[1].norm());
    }
}
