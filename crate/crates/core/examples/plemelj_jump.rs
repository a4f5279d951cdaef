//! Inner and outer traces of the single layer on the unit circle, checked
//! against the jump relation.

use diracshell::bem::plemelj_check;
use diracshell::fourier::PeriodicGrid;
use diracshell::geometry::{Curve, RawCurve};
use num_complex::Complex64 as C64;

fn main() {
    let curve = Curve::from_raw(&RawCurve::circle(1.0, [0.0, 0.0]), 256).unwrap();
    let n = 256;
    let mut density = PeriodicGrid::new(n).unwrap().exponential(1);
    density.extend(vec![C64::new(0.0, 0.0); n]);
    for z in [0.0, 0.5] {
        let r = plemelj_check(&curve, 1.0, z, &density, &[0.08, 0.04, 0.02], 8).unwrap();
        println!("z = {z}: average {:.2e}, jump {:.2e}", r.average_residual, r.jump_residual);
    }
}
