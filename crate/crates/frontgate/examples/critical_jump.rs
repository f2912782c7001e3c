//! Critical population jump: the minimal discontinuous population ratio
//! N_R / N_L = (1 - F(1)/F(theta))^(1/4) that stops a bistable wave, and the
//! local-barrier exponent K(alpha0) it minimizes.

use frontgate::barrier::{critical_jump, local_barrier_exponent, min_coefficient};
use frontgate::reaction::{ReactionModel, WolbachiaParams};

fn main() {
    let cubic = ReactionModel::cubic(0.25).unwrap();
    let jump = critical_jump(&cubic).unwrap();
    println!("cubic theta = 0.25: critical jump N_R/N_L = {jump:.6}");

    println!("\nlocal-barrier exponent K(alpha0) = (1/4) log(1 - F(1)/F(alpha0)):");
    for alpha0 in [0.1, 0.2, 0.25, 0.3, 0.38] {
        let k = local_barrier_exponent(&cubic, alpha0).unwrap();
        println!("  alpha0 = {alpha0:4.2}: K = {k:.6}{}", if alpha0 == 0.25 { "   <- minimal, = log(jump)" } else { "" });
    }

    // The jump is the L -> 0 limit of exp(C*(L) L): a strong thin gradient
    // and a weak wide one block equally well at the margin.
    println!("\nexp(C*(L) L) against the jump for shrinking L (cubic):");
    for l in [0.5, 0.2, 0.1] {
        let c = min_coefficient(&cubic, l, 1e-6).unwrap();
        println!("  L = {l:4.2}: C*(L) = {c:8.4}, exp(C* L) = {:.5}", (c * l).exp());
    }

    let wolbachia = ReactionModel::wolbachia(WolbachiaParams::default()).unwrap();
    println!(
        "\nincompatibility model (defaults): jump = {:.6}",
        critical_jump(&wolbachia).unwrap()
    );
}
