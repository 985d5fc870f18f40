//! Trajectories of the order estimates `p̂_n` and `q̂_n` for one realisation,
//! together with the criterion table at the final sample count.
//!
//! Run with: `cargo run --release --example order_estimation -- [seed] [bound]`

use qarx::{estimate_orders_at, simulate, ArxModel, InputSpec, PenaltySchedule, Quantizer};

fn main() -> qarx::Result<()> {
    let mut args = std::env::args().skip(1);
    let seed: u64 = args.next().map_or(3, |s| s.parse().expect("seed"));
    let bound: usize = args.next().map_or(3, |s| s.parse().expect("bound"));

    let model = ArxModel::new(vec![0.7, 0.1], vec![1.0], 1.0)?;
    let quantizer = Quantizer::new(0.001)?;
    let slope = PenaltySchedule::new(0.006)?;
    let checkpoints: Vec<usize> = (1..=40).map(|k| k * 100).collect();

    // the AR order is studied with inputs on [-3, 3], the exogenous order with [-1, 1]
    let ar_traj = simulate(&model, &InputSpec::new(3.0)?, 4000, seed)?.quantized(&quantizer)?;
    let x_traj = simulate(&model, &InputSpec::new(1.0)?, 4000, seed)?.quantized(&quantizer)?;
    let ar = estimate_orders_at(&ar_traj, bound, bound, &slope, &slope, &checkpoints)?;
    let x = estimate_orders_at(&x_traj, bound, bound, &slope, &slope, &checkpoints)?;

    println!("     n  p_hat  q_hat");
    for (a, b) in ar.iter().zip(&x) {
        println!("{:>6}  {:>5}  {:>5}", a.n, a.p_hat, b.q_hat);
    }

    let last = ar.last().expect("checkpoints");
    println!("\nL_n(p, q*) at n = {}:", last.n);
    for cell in &last.ar_table.cells {
        println!(
            "  p = {}  sigma = {:>12.3}  L = {:>12.3}",
            cell.p, cell.sigma, cell.criterion
        );
    }
    let last = x.last().expect("checkpoints");
    println!("V_n(p*, q) at n = {}:", last.n);
    for cell in &last.x_table.cells {
        println!(
            "  q = {}  sigma = {:>12.3}  V = {:>12.3}",
            cell.q, cell.sigma, cell.criterion
        );
    }
    Ok(())
}
