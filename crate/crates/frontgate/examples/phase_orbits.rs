//! Phase-plane orbits of X' = Y, Y' = -CY - f(X): energy decay and the
//! crossing from the entry level set E = F(1) to the exit level set E = 0.

use frontgate::phaseplane::{energy, entry_point, integrate_orbit, ExitReason, OrbitOptions};
use frontgate::reaction::ReactionModel;

fn main() {
    let model = ReactionModel::cubic(0.25).unwrap();
    let c = 1.0;
    println!("orbits from the entry level set, C = {c} (cubic theta = 0.25):\n");
    for beta in [0.5, 0.7, 0.9, 0.99] {
        let start = entry_point(&model, beta).unwrap();
        let orbit = integrate_orbit(&model, c, start, 500.0, OrbitOptions::default()).unwrap();
        match orbit.exit {
            ExitReason::HitGammaA { alpha, y } => println!(
                "beta = {beta:4.2}: exits at alpha = {alpha:.6} (y = {y:+.4}) after flight {:.4}  => half-length {:.4}",
                orbit.exit_time,
                0.5 * orbit.exit_time
            ),
            other => println!("beta = {beta:4.2}: {other:?} at t = {:.3}", orbit.exit_time),
        }
    }

    // Energy monotonicity along one orbit.
    let start = entry_point(&model, 0.9).unwrap();
    let orbit = integrate_orbit(&model, c, start, 500.0, OrbitOptions::default()).unwrap();
    println!("\nenergy along the beta = 0.9 orbit (E decreases at rate C Y^2):");
    for (t, pt) in orbit.samples.iter().step_by(orbit.samples.len() / 8) {
        println!("  t = {t:6.3}: X = {:.5}, Y = {:+.5}, E = {:+.6e}", pt.x, pt.y, energy(&model, *pt));
    }
    println!("  exit state energy: {:+.3e}", energy(&model, orbit.exit_state));
}
