//! The reduction y = H(p): transforms the frequency-dependent equation into
//! plain reaction-diffusion with nonlinearity g satisfying g(H(x)) = f(x)h2(x).

use frontgate::reaction::{
    change_of_variable, speed_sign_integral, FrequencyLaw, ReactionModel, WolbachiaParams,
};

fn main() {
    let model = ReactionModel::cubic(0.25).unwrap();
    let law = FrequencyLaw::wolbachia(WolbachiaParams::default()).unwrap().normalized();
    let vc = change_of_variable(&model, &law).unwrap();

    println!("map H and image nonlinearity g (cubic theta = 0.25, default law):");
    println!("{:>6} {:>10} {:>12} {:>12} {:>10}", "x", "H(x)", "f(x)h^2(x)", "g(H(x))", "defect");
    for k in 0..=10 {
        let x = k as f64 / 10.0;
        let h = law.h(x);
        let target = model.f(x) * h * h;
        let image = vc.g.f(vc.forward(x));
        println!(
            "{x:>6.2} {:>10.6} {:>12.3e} {:>12.3e} {:>10.1e}",
            vc.forward(x),
            target,
            image,
            (image - target).abs()
        );
    }
    println!(
        "\ninterior zero carried through: H(theta) = {:.6} = theta(g) = {:.6}",
        vc.forward(model.theta().unwrap()),
        vc.g.theta().unwrap()
    );
    println!(
        "g'(0) = {:.6} equals f'(0) = {:.6}",
        vc.g.fprime0(),
        model.fprime0()
    );

    let wolbachia = ReactionModel::wolbachia(WolbachiaParams::default()).unwrap();
    println!("\nspeed-sign integral int f h_eps^4 for the incompatibility model:");
    for eps in [0.0, 0.1, 0.3, 0.5, 0.55] {
        let law = FrequencyLaw::wolbachia(WolbachiaParams { eps, ..Default::default() }).unwrap();
        let integral = speed_sign_integral(&wolbachia, &law).unwrap();
        println!("  eps = {eps:4.2}: {integral:+.6e}  ({})", if integral > 0.0 { "invades" } else { "recedes" });
    }
}
