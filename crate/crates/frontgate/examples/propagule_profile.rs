//! Invasion propagules: compactly supported initial data guaranteeing
//! invasion, with support half-length L_alpha.

use frontgate::propagule::{bubble_length, bubble_profile};
use frontgate::reaction::{FrequencyLaw, ReactionModel, WolbachiaParams};

fn main() {
    let model = ReactionModel::cubic(0.25).unwrap();
    let constant = FrequencyLaw::constant();
    let theta_c = model.theta_c().unwrap();

    println!("support half-length L_alpha (cubic theta = 0.25, h = 1):");
    println!("theta_c = {theta_c:.6}; L_alpha diverges as alpha approaches it\n");
    for alpha in [theta_c + 0.001, 0.45, 0.55, 0.65, 0.75, 0.85, 0.95] {
        let l = bubble_length(&model, &constant, alpha).unwrap();
        println!("  alpha = {alpha:.3}: L = {l:8.4}");
    }

    let bubble = bubble_profile(&model, &constant, 0.8, 33).unwrap();
    println!("\nprofile for alpha = 0.8 (half support {:.4}):", bubble.half_length);
    for (x, v) in bubble.xs.iter().zip(bubble.v.iter()).step_by(4) {
        let bar = "#".repeat((v * 60.0) as usize);
        println!("  x = {x:6.3}  v = {v:.4}  {bar}");
    }

    let law = FrequencyLaw::wolbachia(WolbachiaParams::default()).unwrap();
    println!(
        "\nwith the default population law: L_0.8 = {:.4}",
        bubble_length(&model, &law, 0.8).unwrap()
    );
}
