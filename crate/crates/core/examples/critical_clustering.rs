//! Small singular values pile up at the critical point `−(τ/η)m` as N grows.

use diracshell::spectral::{critical_cluster_diagnostic, ClusterOperator};
use diracshell::validation::circle_system;

fn main() {
    let sys = circle_system(2.5, 1.5);
    for op in [ClusterOperator::BirmanSchwinger, ClusterOperator::Weighted { c0: 1.0 }] {
        let rep = critical_cluster_diagnostic(&sys, 1.0, &[32, 64, 128], &[-0.6, 0.3], op).unwrap();
        println!("{op:?}");
        for p in &rep.probes {
            println!("  z = {:+.2}: counts {:?} fires {}", p.z, p.counts, p.fires);
        }
    }
}
