//! Separation-of-variables eigenvalues of the unit circle, channel by channel.

use diracshell::validation::circle_oracle;

fn main() {
    for (eta, tau) in [(-3.0, 0.0), (2.0, 1.0)] {
        let o = circle_oracle(1.0, 1.0, eta, tau);
        println!("(η, τ) = ({eta}, {tau})");
        for z in o.eigenvalues() {
            println!("  z = {z:+.12}  channel {}", o.channel_of(z).unwrap());
        }
    }
}
