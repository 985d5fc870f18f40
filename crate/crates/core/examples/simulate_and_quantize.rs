//! Simulate the two-pole benchmark system, quantize its output and check the
//! model-level assumptions.
//!
//! Run with: `cargo run --example simulate_and_quantize`

use qarx::stability::ar_roots;
use qarx::{
    check_stability, quantization_noise_bound, quantization_noise_sequence, simulate, ArxModel,
    InputSpec, Quantizer,
};

fn main() -> qarx::Result<()> {
    // y_{n+1} = -0.7 y_n - 0.1 y_{n-1} + u_n + w_{n+1}
    let model = ArxModel::new(vec![0.7, 0.1], vec![1.0], 1.0)?;
    let quantizer = Quantizer::new(0.001)?;
    let c = model.max_abs_coefficient();

    println!("A(z) roots: {:?}", ar_roots(&model.a));
    println!("stable: {}", check_stability(&model));
    println!(
        "step {} below limit {:.4}: {}",
        quantizer.epsilon(),
        Quantizer::max_step(model.p0(), c),
        quantizer.satisfies_step_bound(&model, c)
    );

    let traj = simulate(&model, &InputSpec::new(3.0)?, 10, 42)?.quantized(&quantizer)?;
    println!("\n  i          u_i          y_i          s_i");
    for i in 0..=traj.horizon() {
        let u = traj
            .u()
            .get(i)
            .map_or(String::from("-"), |v| format!("{v:+.6}"));
        println!(
            "{i:>3} {u:>12} {:>+12.6} {:>+12.6}",
            traj.y()[i],
            traj.s()?[i]
        );
    }

    let long = simulate(&model, &InputSpec::new(3.0)?, 4000, 42)?.quantized(&quantizer)?;
    let noise = quantization_noise_sequence(&long, &model)?;
    let worst = noise.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    println!(
        "\nquantization noise over 4000 steps: max |e| = {worst:.6}, bound = {:.6}",
        quantization_noise_bound(&model, &quantizer)
    );
    Ok(())
}
