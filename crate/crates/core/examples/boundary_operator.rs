//! Assembles `C_z` on a star-shaped loop and reports σ_min of
//! `B(z) = I + (ησ0+τσ3)C_z` along a coarse z grid.

use diracshell::geometry::{Curve, LoopSystem, RawCurve};
use diracshell::spectral::{classify, BsEvaluator};

fn main() {
    let curve = Curve::from_raw(&RawCurve::star(1.0, 0.2, 5, [0.0, 0.0]), 512).unwrap();
    println!("star length {:.12}", curve.length());
    let sys = LoopSystem::single(curve, classify(-3.0, 0.0));
    let ev = BsEvaluator::uniform(&sys, 1.0, 64).unwrap();
    println!("dim C_z = {}", ev.assembler().dim());
    for i in 0..=8 {
        let z = -0.9 + 0.225 * i as f64;
        println!("z = {z:+.3}  σ_min = {:.6e}", ev.sigma_min(z).unwrap());
    }
}
