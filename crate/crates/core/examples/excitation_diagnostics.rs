//! Persistent-excitation diagnostics on the two-pole benchmark system.
//!
//! For every grid cell used by the order search, prints the smallest
//! `λ_min(n)/(n+1)` and largest `λ_max(n)/(n+1)` seen over a batch of seeds
//! and checkpoints. The AR-axis cells `(p, q*)` use inputs on `[−3, 3]`, the
//! X-axis cells `(p*, q)` inputs on `[−1, 1]`.
//!
//! Run with: `cargo run --release --example excitation_diagnostics -- [first_seed] [seeds]`

use qarx::{excitation_profile, simulate, ArxModel, InputSpec, Quantizer};

fn main() -> qarx::Result<()> {
    let mut args = std::env::args().skip(1);
    let first_seed: u64 = args.next().map_or(1000, |s| s.parse().expect("seed"));
    let seeds: u64 = args.next().map_or(20, |s| s.parse().expect("count"));

    let model = ArxModel::new(vec![0.7, 0.1], vec![1.0], 1.0)?;
    let quantizer = Quantizer::new(0.001)?;
    let (p_star, q_star) = (3, 3);
    let checkpoints = [1000, 2000, 4000];

    for (label, delta, cells) in [
        (
            "ar",
            3.0,
            (0..=p_star).map(|p| (p, q_star)).collect::<Vec<_>>(),
        ),
        ("x", 1.0, (1..=q_star).map(|q| (p_star, q)).collect()),
    ] {
        let input = InputSpec::new(delta)?;
        let trajs = (first_seed..first_seed + seeds)
            .map(|seed| simulate(&model, &input, 4000, seed)?.quantized(&quantizer))
            .collect::<qarx::Result<Vec<_>>>()?;
        println!("axis {label} (delta = {delta})");
        println!("    p  q   min lambda_min/(n+1)   max lambda_max/(n+1)");
        for (p, q) in cells {
            let mut floor = f64::INFINITY;
            let mut ceiling: f64 = 0.0;
            for traj in &trajs {
                for s in excitation_profile(traj, p, q, &checkpoints)? {
                    floor = floor.min(s.lambda_min_rate);
                    ceiling = ceiling.max(s.lambda_max_rate);
                }
            }
            println!("  {p:>3} {q:>2}   {floor:>20.6}   {ceiling:>20.6}");
        }
    }
    Ok(())
}
