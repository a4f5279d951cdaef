//! Green kernel of `D − z` evaluated directly and through the log/Cauchy
//! split used by the quadrature.

use diracshell::geometry::{Curve, RawCurve};
use diracshell::kernel::{green_kernel, kernel_split, SpectralParams};

fn main() {
    let p = SpectralParams::new(1.0, 0.3).unwrap();
    let curve = Curve::from_raw(&RawCurve::ellipse(2.0, 1.0, [0.0, 0.0]), 512).unwrap();
    for (t, s) in [(0.1, 0.35), (0.5, 0.52), (0.9, 0.05)] {
        let split = kernel_split(&p, &curve, t, s);
        let a = curve.point(t);
        let b = curve.point(s);
        let direct = green_kernel(&p, [a[0] - b[0], a[1] - b[1]]).unwrap();
        let err = (split.reassemble().unwrap() - direct).norm() / direct.norm();
        println!("t = {t}, s = {s}: |φ| = {:.6e}, split vs direct {err:.2e}", direct.norm());
    }
    let diag = kernel_split(&p, &curve, 0.2, 0.2);
    println!("diagonal F1 = {:?}", diag.f1.0);
}
