//! The double-shooting solver: for an exit/entry pair (alpha, beta) there is
//! a unique advection coefficient gamma(alpha, beta) and half-length
//! lambda(alpha, beta); barriers at (C, L) exist iff L >= L*(C).

use frontgate::barrier::{
    enumerate_barriers, limit_endpoints, min_half_length, shooting_pair,
};
use frontgate::reaction::ReactionModel;

fn main() {
    let model = ReactionModel::cubic(0.25).unwrap();

    println!("gamma / lambda on a grid (cubic theta = 0.25):");
    println!("{:>6} {:>6} {:>10} {:>10} {:>14}", "alpha", "beta", "gamma", "lambda", "2*lambda*gamma");
    for alpha in [0.1, 0.2, 0.3] {
        for beta in [0.5, 0.7, 0.9] {
            let pair = shooting_pair(&model, alpha, beta, 1e-10).unwrap();
            println!(
                "{alpha:>6.2} {beta:>6.2} {:>10.6} {:>10.6} {:>14.6}",
                pair.coefficient,
                pair.half_length,
                2.0 * pair.half_length * pair.coefficient
            );
        }
    }

    let c = 1.0;
    let (alpha_c, beta_c) = limit_endpoints(&model, c, 1e-6).unwrap();
    let min = min_half_length(&model, c, 1e-10).unwrap();
    println!("\nat C = {c}: admissible entries beta in ({beta_c:.5}, 1), exits up to alpha_C = {alpha_c:.5}");
    println!(
        "minimal blocking half-length L*({c}) = {:.6} at (alpha*, beta*) = ({:.5}, {:.5})",
        min.l_star, min.alpha_star, min.beta_star
    );

    let l = 1.5 * min.l_star;
    let set = enumerate_barriers(&model, c, l, 1e-10).unwrap();
    println!("\nbarriers at (C, L) = ({c}, {l:.4}): {} found", set.solutions.len());
    for sol in &set.solutions {
        println!(
            "  {:?}: beta = {:.6}, alpha = {:.6}, interior residual {:.1e}",
            sol.kind,
            sol.pair.beta,
            sol.pair.alpha,
            sol.interior_residual(&model)
        );
    }
    let below = enumerate_barriers(&model, c, 0.5 * min.l_star, 1e-10).unwrap();
    println!("barriers at (C, L) = ({c}, {:.4}): {} found (below the threshold)", 0.5 * min.l_star, below.solutions.len());
}
