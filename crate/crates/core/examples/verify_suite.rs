//! Runs the cheap residual suites and prints one line per test.

use diracshell::validation::{run_suite, Level, SuiteOptions};

fn main() {
    for name in ["fourier", "kernel", "cauchy", "jump"] {
        for r in run_suite(name, Level::Quick, &SuiteOptions::default()).unwrap() {
            println!("{:<9} {:<32} {:.2e} <= {:.0e}  {}", r.suite, r.test, r.residual, r.tolerance, if r.pass { "ok" } else { "FAIL" });
        }
    }
}
