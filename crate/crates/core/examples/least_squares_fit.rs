//! Regularized least squares on quantized data: estimates, parameter error and
//! gram eigenvalues as the sample count grows.
//!
//! Run with: `cargo run --release --example least_squares_fit`

use qarx::{
    lambda_extremes, pad_theta, param_error_norm, simulate, solve_theta, ArxModel, GramState,
    InputSpec, PaddedTheta, Quantizer,
};

fn main() -> qarx::Result<()> {
    let model = ArxModel::new(vec![0.7, 0.1], vec![1.0], 1.0)?;
    let traj =
        simulate(&model, &InputSpec::new(3.0)?, 8000, 7)?.quantized(&Quantizer::new(0.001)?)?;

    // over-parameterised fit at (p0, q*) = (2, 3)
    let (p, q) = (2, 3);
    let truth = PaddedTheta::truth(&model, p, q);
    let mut state = GramState::new(p, q)?;
    println!("      n   theta_n                                             |err|   lmin/(n+1) lmax/(n+1)");
    for n in [100, 500, 1000, 2000, 4000, 8000] {
        state.extend(&traj, n)?;
        let theta = solve_theta(&state)?;
        let err = param_error_norm(&pad_theta(&theta, p, q, p, q)?, &truth)?;
        let (lo, hi) = lambda_extremes(&state);
        let shown: Vec<String> = theta.iter().map(|v| format!("{v:+.4}")).collect();
        println!(
            "{n:>7}   [{}]   {err:.4}   {:>9.4} {:>9.4}",
            shown.join(", "),
            lo / (n + 1) as f64,
            hi / (n + 1) as f64
        );
    }
    println!("truth     {:?}", truth.values);
    let a_hat: Vec<f64> = solve_theta(&state)?[..p].iter().map(|v| -v).collect();
    println!("a estimates (A(z) convention): {a_hat:?}");
    Ok(())
}
