//! Reversing the wave by the population law alone: past a critical eps the
//! integral int f h_eps^4 turns negative and an established infection hump
//! recedes instead of invading.

use frontgate::pde::{simulate_frequency_law, Grid1D, InitialDatum, SimOptions};
use frontgate::reaction::{speed_sign_integral, FrequencyLaw, ReactionModel, WolbachiaParams};

fn main() {
    let params = WolbachiaParams::default();
    let model = ReactionModel::wolbachia(params).unwrap();

    println!("eps sweep of the speed-sign integral:");
    let mut crossing = None;
    let mut prev: Option<(f64, f64)> = None;
    for k in 0..=31 {
        let eps = 0.62 * k as f64 / 31.0;
        if let Ok(law) = FrequencyLaw::wolbachia(WolbachiaParams { eps, ..params }) {
            let v = speed_sign_integral(&model, &law).unwrap();
            if k % 4 == 0 {
                println!("  eps = {eps:4.2}: {v:+.4e}");
            }
            if let Some((pe, pv)) = prev {
                if pv > 0.0 && v < 0.0 {
                    crossing = Some((pe, eps));
                }
            }
            prev = Some((eps, v));
        }
    }
    let (lo, hi) = crossing.expect("sign change in range");
    println!("sign change between eps = {lo:.3} and {hi:.3}\n");

    let eps = hi + 0.07;
    let law = FrequencyLaw::wolbachia(WolbachiaParams { eps, ..params }).unwrap();
    let grid = Grid1D::new(-20.0, 20.0, 0.1).unwrap();
    let result = simulate_frequency_law(
        &model,
        &law,
        &InitialDatum::Propagule { alpha: 0.995, center: 0.0 },
        &grid,
        SimOptions { t_end: 24.0, ..Default::default() },
    )
    .unwrap();
    println!("bubble-seeded run at eps = {eps:.2} (negative side): front recedes");
    for (t, x) in result.front_positions.iter().step_by(80) {
        println!("  t = {t:5.1}: front at {}", x.map_or("--".into(), |x| format!("{x:+.3}")));
    }
}
