//! Seeded Monte Carlo order-estimation runs and their on-disk artifacts.
//!
//! A run writes into `output_dir`:
//! * `orders.csv` — `trial,seed,n,p_hat,q_hat`
//! * `criteria.csv` — `trial,n,axis,order,sigma,criterion` (only with `write_tables`)
//! * `config.json` — the resolved configuration, loadable again with `qarx run`
//! * `summary.csv` — `n,trials,p_mode,p_fraction,q_mode,q_fraction`

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::criterion::{estimate_orders_at, CriterionTable, PenaltyHypothesis, PenaltySchedule};
use crate::error::{Error, Result};
use crate::model::{ArxModel, InputSpec};
use crate::quantizer::Quantizer;
use crate::simulate::simulate;
use crate::stability::check_stability;

pub const ORDERS_FILE: &str = "orders.csv";
pub const CRITERIA_FILE: &str = "criteria.csv";
pub const CONFIG_FILE: &str = "config.json";
pub const SUMMARY_FILE: &str = "summary.csv";

fn default_trials() -> usize {
    20
}

/// Hypothesised constants for `qarx feasibility`.
///
/// `c`, `a_p0_sq` and `b_q0_sq` default to the configured coefficient bound and
/// the squared trailing coefficients of the configured model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HypothesisConfig {
    #[serde(default)]
    pub c: Option<f64>,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
    pub gamma: f64,
    pub gamma_prime: f64,
    #[serde(default)]
    pub a_p0_sq: Option<f64>,
    #[serde(default)]
    pub b_q0_sq: Option<f64>,
    pub alpha1: f64,
    pub alpha2: f64,
    pub beta1: f64,
    pub beta2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub model: ArxModel,
    /// Half-width `δ` of the uniform input law.
    pub input_delta: f64,
    pub epsilon: f64,
    pub p_star: usize,
    pub q_star: usize,
    pub slope_l: f64,
    pub slope_v: f64,
    pub horizon: usize,
    pub checkpoints: Vec<usize>,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default)]
    pub base_seed: u64,
    pub output_dir: PathBuf,
    /// Coefficient bound `c`; defaults to the largest coefficient magnitude.
    #[serde(default)]
    pub coefficient_bound: Option<f64>,
    #[serde(default)]
    pub write_tables: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hypothesis: Option<HypothesisConfig>,
}

impl ExperimentConfig {
    /// Reads a TOML document, or JSON when the extension is `.json`, and resolves defaults.
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let is_json = path.extension().is_some_and(|e| e == "json");
        let config = if is_json {
            Self::from_json_str(&text)?
        } else {
            Self::from_toml_str(&text)?
        };
        Ok(config)
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let config: ExperimentConfig =
            toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        config.resolved()
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let config: ExperimentConfig =
            serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        config.resolved()
    }

    /// Fills defaults that depend on other fields and validates.
    pub fn resolved(mut self) -> Result<Self> {
        self.model.validate()?;
        if self.coefficient_bound.is_none() {
            self.coefficient_bound = Some(self.model.max_abs_coefficient());
        }
        self.validate()?;
        Ok(self)
    }

    pub fn coefficient_bound(&self) -> f64 {
        self.coefficient_bound
            .unwrap_or_else(|| self.model.max_abs_coefficient())
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        self.model.validate()?;
        InputSpec::new(self.input_delta)?;
        Quantizer::new(self.epsilon)?;
        PenaltySchedule::new(self.slope_l)?;
        PenaltySchedule::new(self.slope_v)?;
        if self.q_star == 0 {
            return bad("q_star must be at least 1".into());
        }
        if self.horizon == 0 {
            return bad("horizon must be at least 1".into());
        }
        if self.trials == 0 {
            return bad("trials must be at least 1".into());
        }
        if self.checkpoints.first().is_some_and(|&n| n == 0) {
            return bad("checkpoints must be positive".into());
        }
        if self.checkpoints.windows(2).any(|w| w[0] >= w[1]) {
            return bad("checkpoints must be strictly increasing".into());
        }
        if let Some(&last) = self.checkpoints.last() {
            if last > self.horizon {
                return bad(format!(
                    "checkpoint {last} exceeds horizon {}",
                    self.horizon
                ));
            }
        }
        if let Some(c) = self.coefficient_bound {
            if !(c.is_finite() && c > 0.0) {
                return bad(format!("coefficient_bound must be positive, got {c}"));
            }
        }
        Ok(())
    }

    /// Assumption violations that do not prevent a run.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        let c = self.coefficient_bound();
        if self.model.check_coefficient_bound(c).is_err() {
            out.push(format!(
                "model coefficients exceed coefficient_bound {c} (max |coef| = {})",
                self.model.max_abs_coefficient()
            ));
        }
        let limit = Quantizer::max_step(self.model.p0(), c);
        if self.epsilon >= limit {
            out.push(format!(
                "epsilon {} is not below 1/(2(1 + p0*c)) = {limit}",
                self.epsilon
            ));
        }
        if !check_stability(&self.model) {
            out.push("A(z) has a root on or inside the unit circle".into());
        }
        if self.model.p0() > self.p_star || self.model.q0() > self.q_star {
            out.push(format!(
                "true orders ({}, {}) lie outside the search grid p <= {}, q <= {}",
                self.model.p0(),
                self.model.q0(),
                self.p_star,
                self.q_star
            ));
        }
        out
    }

    pub fn seed_for(&self, trial: usize) -> u64 {
        self.base_seed.wrapping_add(trial as u64)
    }

    /// Builds the constants for the slope-interval diagnostic from the `hypothesis` block.
    pub fn penalty_hypothesis(&self) -> Result<PenaltyHypothesis> {
        let h = self
            .hypothesis
            .as_ref()
            .ok_or_else(|| Error::Config("config has no [hypothesis] block".into()))?;
        let trailing_sq = |v: Option<&f64>| v.map_or(0.0, |x| x * x);
        Ok(PenaltyHypothesis {
            c: h.c.unwrap_or_else(|| self.coefficient_bound()),
            c1: h.c1,
            c2: h.c2,
            c3: h.c3,
            c4: h.c4,
            gamma: h.gamma,
            gamma_prime: h.gamma_prime,
            a_p0_sq: h
                .a_p0_sq
                .unwrap_or_else(|| trailing_sq(self.model.a.last())),
            b_q0_sq: h
                .b_q0_sq
                .unwrap_or_else(|| trailing_sq(self.model.b.last())),
            alpha1: h.alpha1,
            alpha2: h.alpha2,
            beta1: h.beta1,
            beta2: h.beta2,
            p_star: self.p_star,
            q_star: self.q_star,
            epsilon: self.epsilon,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckpointRecord {
    pub n: usize,
    pub p_hat: usize,
    pub q_hat: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialResult {
    pub trial: usize,
    pub seed: u64,
    pub records: Vec<CheckpointRecord>,
    /// `(ar, x)` criterion tables per checkpoint, kept when `write_tables` is set.
    pub tables: Option<Vec<(CriterionTable, CriterionTable)>>,
}

fn run_trial(config: &ExperimentConfig, trial: usize) -> Result<TrialResult> {
    let seed = config.seed_for(trial);
    let input = InputSpec::new(config.input_delta)?;
    let quantizer = Quantizer::new(config.epsilon)?;
    let traj = simulate(&config.model, &input, config.horizon, seed)?.quantized(&quantizer)?;
    let estimates = estimate_orders_at(
        &traj,
        config.p_star,
        config.q_star,
        &PenaltySchedule::new(config.slope_l)?,
        &PenaltySchedule::new(config.slope_v)?,
        &config.checkpoints,
    )?;
    let records = estimates
        .iter()
        .map(|e| CheckpointRecord {
            n: e.n,
            p_hat: e.p_hat,
            q_hat: e.q_hat,
        })
        .collect();
    let tables = config.write_tables.then(|| {
        estimates
            .into_iter()
            .map(|e| (e.ar_table, e.x_table))
            .collect()
    });
    Ok(TrialResult {
        trial,
        seed,
        records,
        tables,
    })
}

/// Simulates, quantizes and estimates `(p̂_n, q̂_n)` at every checkpoint for each trial.
///
/// Trials run in parallel; trial `k` depends only on seed `base_seed + k` and
/// the results come back ordered by trial index.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Vec<TrialResult>> {
    config.validate()?;
    (0..config.trials)
        .into_par_iter()
        .map(|trial| run_trial(config, trial))
        .collect()
}

fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

fn csv_bytes(path: &Path, header: &[&str], rows: Vec<Vec<String>>) -> Result<Vec<u8>> {
    let csv_err = |source| Error::Csv {
        path: path.to_path_buf(),
        source,
    };
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(csv_err)?;
    for row in rows {
        w.write_record(&row).map_err(csv_err)?;
    }
    w.into_inner().map_err(|e| Error::io(path, e.into_error()))
}

/// Writes `bytes` to a temporary file next to `path`, then renames it into place.
fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| Error::io(dir, e))?;
    tmp.write_all(bytes).map_err(|e| Error::io(path, e))?;
    tmp.as_file().sync_all().map_err(|e| Error::io(path, e))?;
    tmp.persist(path).map_err(|e| Error::io(path, e.error))?;
    Ok(())
}

fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

/// Writes `orders.csv`, `config.json` and, when tables were kept, `criteria.csv`.
pub fn write_results(results: &[TrialResult], config: &ExperimentConfig) -> Result<()> {
    if results.is_empty() {
        return Err(Error::InvalidArgument("no trial results to write".into()));
    }
    let dir = &config.output_dir;
    ensure_dir(dir)?;

    let mut sorted: Vec<&TrialResult> = results.iter().collect();
    sorted.sort_by_key(|r| r.trial);

    let orders_path = dir.join(ORDERS_FILE);
    let mut rows = Vec::new();
    for r in &sorted {
        let mut records = r.records.clone();
        records.sort_by_key(|c| c.n);
        for c in records {
            rows.push(vec![
                r.trial.to_string(),
                r.seed.to_string(),
                c.n.to_string(),
                c.p_hat.to_string(),
                c.q_hat.to_string(),
            ]);
        }
    }
    let bytes = csv_bytes(
        &orders_path,
        &["trial", "seed", "n", "p_hat", "q_hat"],
        rows,
    )?;
    write_atomic(&orders_path, &bytes)?;

    if sorted.iter().any(|r| r.tables.is_some()) {
        let criteria_path = dir.join(CRITERIA_FILE);
        let mut rows = Vec::new();
        for r in &sorted {
            for (ar, x) in r.tables.iter().flatten() {
                for table in [ar, x] {
                    for cell in &table.cells {
                        rows.push(vec![
                            r.trial.to_string(),
                            table.n.to_string(),
                            table.axis.as_str().to_string(),
                            cell.order.to_string(),
                            fmt_float(cell.sigma),
                            fmt_float(cell.criterion),
                        ]);
                    }
                }
            }
        }
        let bytes = csv_bytes(
            &criteria_path,
            &["trial", "n", "axis", "order", "sigma", "criterion"],
            rows,
        )?;
        write_atomic(&criteria_path, &bytes)?;
    }

    let config_path = dir.join(CONFIG_FILE);
    let mut json = serde_json::to_string_pretty(config)
        .map_err(|e| Error::Config(format!("cannot serialise config: {e}")))?;
    json.push('\n');
    write_atomic(&config_path, json.as_bytes())
}

/// Reads `orders.csv` back into per-trial results (without tables).
pub fn read_orders(dir: &Path) -> Result<Vec<TrialResult>> {
    let path = dir.join(ORDERS_FILE);
    let csv_err = |source| Error::Csv {
        path: path.clone(),
        source,
    };
    #[derive(Deserialize)]
    struct Row {
        trial: usize,
        seed: u64,
        n: usize,
        p_hat: usize,
        q_hat: usize,
    }
    let mut reader = csv::Reader::from_path(&path).map_err(csv_err)?;
    let mut by_trial: BTreeMap<usize, TrialResult> = BTreeMap::new();
    for row in reader.deserialize::<Row>() {
        let row = row.map_err(csv_err)?;
        by_trial
            .entry(row.trial)
            .or_insert_with(|| TrialResult {
                trial: row.trial,
                seed: row.seed,
                records: Vec::new(),
                tables: None,
            })
            .records
            .push(CheckpointRecord {
                n: row.n,
                p_hat: row.p_hat,
                q_hat: row.q_hat,
            });
    }
    Ok(by_trial.into_values().collect())
}

/// One row of `criteria.csv`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct CriteriaRow {
    pub trial: usize,
    pub n: usize,
    pub axis: String,
    pub order: usize,
    pub sigma: f64,
    pub criterion: f64,
}

pub fn read_criteria(dir: &Path) -> Result<Vec<CriteriaRow>> {
    let path = dir.join(CRITERIA_FILE);
    let csv_err = |source| Error::Csv {
        path: path.clone(),
        source,
    };
    let mut reader = csv::Reader::from_path(&path).map_err(csv_err)?;
    reader.deserialize().map(|r| r.map_err(csv_err)).collect()
}

/// Per-checkpoint agreement across trials.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryRow {
    pub n: usize,
    pub trials: usize,
    pub p_mode: usize,
    pub p_fraction: f64,
    pub q_mode: usize,
    pub q_fraction: f64,
}

/// Most frequent value and its share; ties go to the smaller value.
fn mode(values: &[usize]) -> (usize, f64) {
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    for &v in values {
        *counts.entry(v).or_default() += 1;
    }
    let (value, count) = counts.iter().fold(
        (0, 0),
        |best, (&v, &c)| if c > best.1 { (v, c) } else { best },
    );
    (value, count as f64 / values.len() as f64)
}

pub fn summarize(results: &[TrialResult]) -> Vec<SummaryRow> {
    let mut by_n: BTreeMap<usize, (Vec<usize>, Vec<usize>)> = BTreeMap::new();
    for r in results {
        for c in &r.records {
            let entry = by_n.entry(c.n).or_default();
            entry.0.push(c.p_hat);
            entry.1.push(c.q_hat);
        }
    }
    by_n.into_iter()
        .map(|(n, (ps, qs))| {
            let (p_mode, p_fraction) = mode(&ps);
            let (q_mode, q_fraction) = mode(&qs);
            SummaryRow {
                n,
                trials: ps.len(),
                p_mode,
                p_fraction,
                q_mode,
                q_fraction,
            }
        })
        .collect()
}

pub fn format_summary(rows: &[SummaryRow]) -> String {
    let mut out = String::from("       n  trials  p_mode  p_frac  q_mode  q_frac\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{:>8}  {:>6}  {:>6}  {:>6.3}  {:>6}  {:>6.3}",
            r.n, r.trials, r.p_mode, r.p_fraction, r.q_mode, r.q_fraction
        );
    }
    out
}

pub fn write_summary(rows: &[SummaryRow], dir: &Path) -> Result<()> {
    ensure_dir(dir)?;
    let path = dir.join(SUMMARY_FILE);
    let rows = rows
        .iter()
        .map(|r| {
            vec![
                r.n.to_string(),
                r.trials.to_string(),
                r.p_mode.to_string(),
                fmt_float(r.p_fraction),
                r.q_mode.to_string(),
                fmt_float(r.q_fraction),
            ]
        })
        .collect();
    let bytes = csv_bytes(
        &path,
        &[
            "n",
            "trials",
            "p_mode",
            "p_fraction",
            "q_mode",
            "q_fraction",
        ],
        rows,
    )?;
    write_atomic(&path, &bytes)
}
