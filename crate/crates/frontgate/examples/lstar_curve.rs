//! The minimal blocking half-length curve C -> L*(C) and its asymptote:
//! 4 C L*(C) -> log(1 - F(1)/F(theta)) as C grows, diverging at the wave speed.

use frontgate::barrier::l_star_curve;
use frontgate::reaction::ReactionModel;
use frontgate::wavespeed::bistable_speed;

fn main() {
    let model = ReactionModel::cubic(0.25).unwrap();
    let c_star = bistable_speed(&model, 1e-10).unwrap().speed;
    let theta = model.theta().unwrap();
    let limit = (1.0 - model.mass() / model.potential(theta)).ln();
    println!("cubic theta = 0.25: c* = {c_star:.6}, asymptotic constant = {limit:.6}\n");

    let cs: Vec<f64> = vec![0.45, 0.6, 0.8, 1.0, 1.5, 2.0, 3.0, 5.0, 10.0, 20.0, 50.0];
    let curve = l_star_curve(&model, &cs, 1e-10).unwrap();
    println!("{:>7} {:>11} {:>11} {:>9} {:>9}", "C", "L*(C)", "4C L*(C)", "beta*", "alpha*");
    for i in 0..cs.len() {
        println!(
            "{:>7.2} {:>11.6} {:>11.6} {:>9.5} {:>9.5}",
            curve.c_values[i],
            curve.l_star[i],
            4.0 * curve.c_values[i] * curve.l_star[i],
            curve.beta_star[i],
            curve.alpha_star[i]
        );
    }
    println!("\nL* decreases, 4C L* approaches the constant, and the minimizing");
    println!("pair (alpha*, beta*) closes onto theta = {theta} like 1/C.");
}
