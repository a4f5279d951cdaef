//! Regime, interaction type, dual coupling and transmission matrix for a
//! handful of `(η, τ)` pairs at `m = 1`.

use diracshell::spectral::{classify, critical_essential_point, dual_coupling, transmission_matrix};
use num_complex::Complex64 as C64;

fn fmt(c: C64) -> String {
    format!("{:+.3}{:+.3}i", c.re + 0.0, c.im + 0.0)
}

fn main() {
    let m = 1.0;
    for (eta, tau) in [(0.0, 0.0), (-3.0, 0.0), (0.0, 2.0), (2.0, 1.0), (2.5, 1.5)] {
        let c = classify(eta, tau);
        print!("({eta:>4}, {tau:>4})  d = {:>5}  {:?} / {:?}", c.d, c.regime, c.interaction_type());
        if let Ok(z) = critical_essential_point(&c, m) {
            print!("  essential point {z}");
        }
        match dual_coupling(&c) {
            Ok(dual) => print!("  dual ({:.4}, {:.4})", dual.eta, dual.tau),
            Err(e) => print!("  no dual: {e}"),
        }
        println!();
        if let Ok(t) = transmission_matrix(&c, [1.0, 0.0]) {
            let row = |i: usize| format!("[{}, {}]", fmt(t.r.0[i][0]), fmt(t.r.0[i][1]));
            println!("    R at ν = (1,0): [{}, {}]", row(0), row(1));
        }
    }
}
