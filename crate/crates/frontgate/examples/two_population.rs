//! Blocking in the two-population model: a carrying capacity rising
//! exponentially across [-L, L] stops the infection front once its slope is
//! steep enough, mirroring the single-equation theory.

use frontgate::pde::{
    exp_ramp_capacity, simulate_two_population, two_population_front_init, Grid1D, SimOptions,
};
use frontgate::reaction::WolbachiaParams;

fn main() {
    let params = WolbachiaParams::default();
    let grid = Grid1D::new(-20.0, 20.0, 0.1).unwrap();
    let opts = SimOptions { dt: 0.02, ..Default::default() };

    println!("K(x) = K_L exp(C min((x+L)+, 2L)), L = 4, K_L = 10, defaults:");
    for c in [0.05, 0.1, 0.15, 0.2] {
        let capacity = exp_ramp_capacity(10.0, c, 4.0, &grid);
        let init = two_population_front_init(&params, &capacity, &grid, -14.0).unwrap();
        let result = simulate_two_population(&params, &capacity, &init, &grid, opts).unwrap();
        println!("  C = {c:4.2}: {:?}", result.frequency.outcome);
    }

    // A blocked run in detail: the frequency front stalls at the ramp while
    // total population follows the capacity.
    let capacity = exp_ramp_capacity(10.0, 0.2, 4.0, &grid);
    let init = two_population_front_init(&params, &capacity, &grid, -14.0).unwrap();
    let result = simulate_two_population(&params, &capacity, &init, &grid, opts).unwrap();
    println!("\nC = 0.2 final state (frequency and densities):");
    for i in (0..grid.n).step_by(40) {
        let x = grid.x(i);
        let p = result.frequency.final_field[i];
        println!(
            "  x = {x:6.1}: p = {p:.4}, n_i = {:7.3}, n_u = {:7.3}",
            result.final_infected[i], result.final_uninfected[i]
        );
    }
    if let Some((_, Some(front))) = result.frequency.front_positions.last() {
        println!("front held at x = {front:.3} (gradient support [-4, 4])");
    }
}
