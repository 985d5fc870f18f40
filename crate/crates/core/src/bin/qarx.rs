use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use qarx::experiment::{self, ExperimentConfig};
use qarx::{penalty_interval_p, penalty_interval_q, PenaltyInterval};

#[derive(Parser)]
#[command(
    name = "qarx",
    about = "Order estimation for ARX systems with quantized outputs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a Monte Carlo experiment and write CSV artifacts to the configured output_dir.
    Run {
        #[arg(long)]
        config: PathBuf,
    },
    /// Re-aggregate orders.csv in an output directory into summary.csv.
    Summarize {
        #[arg(long)]
        dir: PathBuf,
    },
    /// Evaluate the admissible penalty-slope intervals for the config's [hypothesis] block.
    Feasibility {
        #[arg(long)]
        config: PathBuf,
    },
}

fn run(config: PathBuf) -> qarx::Result<()> {
    let config = ExperimentConfig::load(&config)?;
    for w in config.warnings() {
        eprintln!("warning: {w}");
    }
    std::fs::create_dir_all(&config.output_dir).map_err(|e| qarx::Error::Io {
        path: config.output_dir.clone(),
        source: e,
    })?;
    let results = experiment::run_experiment(&config)?;
    experiment::write_results(&results, &config)?;
    let summary = experiment::summarize(&results);
    experiment::write_summary(&summary, &config.output_dir)?;
    print!("{}", experiment::format_summary(&summary));
    Ok(())
}

fn summarize(dir: PathBuf) -> qarx::Result<()> {
    let results = experiment::read_orders(&dir)?;
    let summary = experiment::summarize(&results);
    experiment::write_summary(&summary, &dir)?;
    print!("{}", experiment::format_summary(&summary));
    Ok(())
}

fn report(label: &str, interval: &PenaltyInterval, slope: f64) {
    println!(
        "{label}: lo = {:.6e}  hi = {:.6e}  feasible = {}  configured slope {slope} inside = {}",
        interval.lo,
        interval.hi,
        interval.feasible,
        interval.contains(slope)
    );
}

fn feasibility(config: PathBuf) -> qarx::Result<()> {
    let config = ExperimentConfig::load(&config)?;
    let h = config.penalty_hypothesis()?;
    report("l_n/n", &penalty_interval_p(&h)?, config.slope_l);
    report("v_n/n", &penalty_interval_q(&h)?, config.slope_v);
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run { config } => run(config),
        Command::Summarize { dir } => summarize(dir),
        Command::Feasibility { config } => feasibility(config),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
