//! The blocking alternative in time: the same front either passes the
//! gradient region or converges to a standing blocked front, depending on
//! whether L is below or above the threshold L*(C).

use frontgate::barrier::{enumerate_barriers, min_half_length};
use frontgate::pde::{
    simulate_heterogeneous, GradientProfile, Grid1D, InitialDatum, SimOptions,
};
use frontgate::reaction::ReactionModel;

fn main() {
    let model = ReactionModel::cubic(0.25).unwrap();
    let c = 1.0;
    let l_star = min_half_length(&model, c, 1e-10).unwrap().l_star;
    println!("cubic theta = 0.25, C = {c}: threshold L* = {l_star:.5}\n");

    let grid = Grid1D::new(-20.0, 20.0, 0.1).unwrap();
    for factor in [0.8, 1.2] {
        let l = factor * l_star;
        let result = simulate_heterogeneous(
            &model,
            &GradientProfile::IntervalConstant { c, l },
            &InitialDatum::Front { x0: -14.0 },
            &grid,
            SimOptions::default(),
        )
        .unwrap();
        println!("L = {factor} L* = {l:.4}: outcome {:?}", result.outcome);
        print!("  front position:");
        for (t, x) in result.front_positions.iter().step_by(1600) {
            print!("  t={t:3.0}: {}", x.map_or("  --  ".into(), |x| format!("{x:+6.2}")));
        }
        println!();
    }

    // The blocked run converges onto the minimal standing front.
    let l = 1.2 * l_star;
    let set = enumerate_barriers(&model, c, l, 1e-10).unwrap();
    let minimal = &set.solutions[0];
    let result = simulate_heterogeneous(
        &model,
        &GradientProfile::IntervalConstant { c, l },
        &InitialDatum::Front { x0: -14.0 },
        &grid,
        SimOptions::default(),
    )
    .unwrap();
    let mut worst = f64::NEG_INFINITY;
    for (i, x) in grid.xs().iter().enumerate() {
        worst = worst.max((result.final_field[i] - minimal.eval(*x)).abs());
    }
    println!("\nblocked final state vs minimal barrier: sup distance {worst:.2e}");
}
