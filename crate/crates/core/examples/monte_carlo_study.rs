//! Seeded Monte Carlo study driven by a config file, writing the same CSV
//! artifacts as `qarx run`.
//!
//! Run with:
//! `cargo run --release --example monte_carlo_study -- crates/core/configs/p_eps0.001_bound3.toml`

use std::path::PathBuf;

use qarx::experiment::{format_summary, write_summary};
use qarx::{run_experiment, summarize, write_results, ExperimentConfig};

fn main() -> qarx::Result<()> {
    let path: PathBuf = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| {
            PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("configs/p_eps0.001_bound3.toml")
        });
    let config = ExperimentConfig::load(&path)?;
    for w in config.warnings() {
        eprintln!("warning: {w}");
    }

    let start = std::time::Instant::now();
    let results = run_experiment(&config)?;
    write_results(&results, &config)?;
    let summary = summarize(&results);
    write_summary(&summary, &config.output_dir)?;

    println!(
        "{} trials x {} steps in {:.2?} -> {}",
        config.trials,
        config.horizon,
        start.elapsed(),
        config.output_dir.display()
    );
    print!("{}", format_summary(&summary));
    Ok(())
}
