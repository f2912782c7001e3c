//! Traveling-wave speeds: the unique bistable speed for cubic and
//! incompatibility-model nonlinearities, and the KPP minimal speed.

use frontgate::reaction::{ReactionModel, WolbachiaParams};
use frontgate::wavespeed::{bistable_speed, kpp_min_speed};

fn main() {
    println!("bistable cubic f(u) = u(1-u)(u-theta):");
    println!("{:>7}  {:>12}  {:>12}  {:>9}", "theta", "computed c", "(1-2t)/v2", "residual");
    for theta in [0.1, 0.2, 0.25, 0.3, 0.4] {
        let model = ReactionModel::cubic(theta).unwrap();
        let result = bistable_speed(&model, 1e-10).unwrap();
        let exact = (1.0 - 2.0 * theta) / 2f64.sqrt();
        println!(
            "{theta:>7.2}  {:>12.8}  {:>12.8}  {:>9.1e}",
            result.speed, exact, result.residual
        );
    }

    let params = WolbachiaParams::default();
    let wolbachia = ReactionModel::wolbachia(params).unwrap();
    let result = bistable_speed(&wolbachia, 1e-10).unwrap();
    println!(
        "\nincompatibility model (defaults): theta = {:.4}, F(1) = {:.6}, c = {:.6}",
        wolbachia.theta().unwrap(),
        wolbachia.mass(),
        result.speed
    );

    println!("\nKPP minimal speed 2 sqrt(f'(0)) for logistic r u(1-u):");
    for rate in [1.0, 4.0] {
        let model = ReactionModel::logistic(rate).unwrap();
        println!("  r = {rate}: c = {:.6}", kpp_min_speed(&model).unwrap());
    }
}
