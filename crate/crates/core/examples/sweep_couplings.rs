//! Eigenvalue counts across a small coupling grid, driven through the
//! command layer with an inline JSON problem.

use diracshell::cli::{cmd_sweep, ProblemConfig};

fn main() {
    let cfg = ProblemConfig::parse(
        r#"{
  "m": 1.0,
  "loops": [{"curve": {"type": "circle", "radius": 1.0}, "eta": 0.0, "tau": 0.0}],
  "discretization": {"n": 32},
  "scan": {"samples": 200}
}"#,
    )
    .unwrap();
    print!("{}", cmd_sweep(&cfg, [-3.0, 3.0], [0.0, 1.0], 3).unwrap());
}
