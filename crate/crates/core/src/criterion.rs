//! Penalized order criteria and the admissible penalty slopes.
//!
//! `L_n(p, q*) = σ_n(p, q*) + l_n (p + q*)` selects the AR order and
//! `V_n(p*, q) = σ_n(p*, q) + v_n (p* + q)` selects the exogenous order, with
//! linear penalties `l_n = κ n`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimator::{solve_theta, GramState};
use crate::simulate::{stack_lags, Trajectory};

/// Linear penalty `κ n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PenaltySchedule {
    slope: f64,
}

impl PenaltySchedule {
    pub fn new(slope: f64) -> Result<Self> {
        if !(slope.is_finite() && slope > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "penalty slope must be positive, got {slope}"
            )));
        }
        Ok(PenaltySchedule { slope })
    }

    pub fn slope(&self) -> f64 {
        self.slope
    }

    pub fn at(&self, n: usize) -> f64 {
        self.slope * n as f64
    }
}

/// Which order varies in a [`CriterionTable`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    /// `p` varies over `0 … p*` at `q = q*`.
    Ar,
    /// `q` varies over `1 … q*` at `p = p*`.
    X,
}

impl Axis {
    pub fn as_str(self) -> &'static str {
        match self {
            Axis::Ar => "ar",
            Axis::X => "x",
        }
    }
}

impl std::str::FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ar" => Ok(Axis::Ar),
            "x" => Ok(Axis::X),
            other => Err(Error::InvalidArgument(format!("unknown axis {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionCell {
    /// The varying order (`p` on the AR axis, `q` on the X axis).
    pub order: usize,
    pub p: usize,
    pub q: usize,
    pub sigma: f64,
    pub criterion: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionTable {
    pub axis: Axis,
    pub n: usize,
    pub slope: f64,
    pub cells: Vec<CriterionCell>,
}

impl CriterionTable {
    /// Order with the smallest criterion; ties go to the smaller order.
    pub fn argmin(&self) -> usize {
        let mut best = &self.cells[0];
        for cell in &self.cells[1..] {
            if cell.criterion < best.criterion {
                best = cell;
            }
        }
        best.order
    }
}

/// `σ_n(p, q) = Σ_{i<n} (s_{i+1} − θᵀψ_i(p, q))²`.
pub fn sigma_n(traj: &Trajectory, theta: &[f64], p: usize, q: usize, n: usize) -> Result<f64> {
    if theta.len() != p + q {
        return Err(Error::DimensionMismatch {
            expected: p + q,
            found: theta.len(),
        });
    }
    if n > traj.horizon() {
        return Err(Error::IndexOutOfRange {
            index: n,
            bound: traj.horizon() + 1,
        });
    }
    let s = traj.s()?;
    Ok((0..n)
        .map(|i| {
            let psi = stack_lags(s, traj.u(), i, p, q);
            let r = s[i + 1] - theta.iter().zip(&psi).map(|(t, x)| t * x).sum::<f64>();
            r * r
        })
        .sum())
}

/// `σ + κ n (p + q)`.
pub fn criterion(sigma: f64, schedule: &PenaltySchedule, n: usize, p: usize, q: usize) -> f64 {
    sigma + schedule.at(n) * (p + q) as f64
}

fn validate_grid(traj: &Trajectory, q_star: usize, n: usize) -> Result<()> {
    if q_star == 0 {
        return Err(Error::InvalidArgument("q* must be at least 1".into()));
    }
    if n == 0 {
        return Err(Error::InvalidArgument(
            "sample count must be at least 1".into(),
        ));
    }
    if n > traj.horizon() {
        return Err(Error::IndexOutOfRange {
            index: n,
            bound: traj.horizon() + 1,
        });
    }
    Ok(())
}

fn axis_cells(axis: Axis, p_star: usize, q_star: usize) -> Vec<(usize, usize, usize)> {
    match axis {
        Axis::Ar => (0..=p_star).map(|p| (p, p, q_star)).collect(),
        Axis::X => (1..=q_star).map(|q| (q, p_star, q)).collect(),
    }
}

fn cell_from_state(
    traj: &Trajectory,
    state: &GramState,
    order: usize,
    schedule: &PenaltySchedule,
) -> Result<CriterionCell> {
    let (p, q, n) = (state.p(), state.q(), state.count());
    let theta = solve_theta(state)?;
    let sigma = sigma_n(traj, &theta, p, q, n)?;
    Ok(CriterionCell {
        order,
        p,
        q,
        sigma,
        criterion: criterion(sigma, schedule, n, p, q),
    })
}

fn estimate_axis(
    traj: &Trajectory,
    axis: Axis,
    p_star: usize,
    q_star: usize,
    schedule: &PenaltySchedule,
    n: usize,
) -> Result<(usize, CriterionTable)> {
    validate_grid(traj, q_star, n)?;
    let cells = axis_cells(axis, p_star, q_star)
        .into_iter()
        .map(|(order, p, q)| {
            let state = GramState::from_trajectory(traj, p, q, n)?;
            cell_from_state(traj, &state, order, schedule)
        })
        .collect::<Result<Vec<_>>>()?;
    let table = CriterionTable {
        axis,
        n,
        slope: schedule.slope(),
        cells,
    };
    Ok((table.argmin(), table))
}

/// `p̂_n = argmin_{0 ≤ p ≤ p*} L_n(p, q*)` using the first `n` samples.
pub fn estimate_p(
    traj: &Trajectory,
    p_star: usize,
    q_star: usize,
    schedule: &PenaltySchedule,
    n: usize,
) -> Result<(usize, CriterionTable)> {
    estimate_axis(traj, Axis::Ar, p_star, q_star, schedule, n)
}

/// `q̂_n = argmin_{1 ≤ q ≤ q*} V_n(p*, q)` using the first `n` samples.
pub fn estimate_q(
    traj: &Trajectory,
    p_star: usize,
    q_star: usize,
    schedule: &PenaltySchedule,
    n: usize,
) -> Result<(usize, CriterionTable)> {
    estimate_axis(traj, Axis::X, p_star, q_star, schedule, n)
}

/// Both order estimates at one checkpoint.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckpointEstimate {
    pub n: usize,
    pub p_hat: usize,
    pub q_hat: usize,
    pub ar_table: CriterionTable,
    pub x_table: CriterionTable,
}

/// Runs [`estimate_p`] and [`estimate_q`] at every checkpoint, sharing the
/// gram accumulation of each cell across checkpoints.
///
/// `checkpoints` must be strictly increasing.
pub fn estimate_orders_at(
    traj: &Trajectory,
    p_star: usize,
    q_star: usize,
    slope_l: &PenaltySchedule,
    slope_v: &PenaltySchedule,
    checkpoints: &[usize],
) -> Result<Vec<CheckpointEstimate>> {
    if checkpoints.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument(
            "checkpoints must be strictly increasing".into(),
        ));
    }
    for &n in checkpoints {
        validate_grid(traj, q_star, n)?;
    }
    let ar_cells = axis_cells(Axis::Ar, p_star, q_star);
    let x_cells = axis_cells(Axis::X, p_star, q_star);
    let mut ar_states = ar_cells
        .iter()
        .map(|&(_, p, q)| GramState::new(p, q))
        .collect::<Result<Vec<_>>>()?;
    let mut x_states = x_cells
        .iter()
        .map(|&(_, p, q)| GramState::new(p, q))
        .collect::<Result<Vec<_>>>()?;

    let mut out = Vec::with_capacity(checkpoints.len());
    for &n in checkpoints {
        let mut tables = Vec::with_capacity(2);
        for (axis, cells, states, schedule) in [
            (Axis::Ar, &ar_cells, &mut ar_states, slope_l),
            (Axis::X, &x_cells, &mut x_states, slope_v),
        ] {
            let mut row = Vec::with_capacity(cells.len());
            for (&(order, _, _), state) in cells.iter().zip(states.iter_mut()) {
                state.extend(traj, n)?;
                row.push(cell_from_state(traj, state, order, schedule)?);
            }
            tables.push(CriterionTable {
                axis,
                n,
                slope: schedule.slope(),
                cells: row,
            });
        }
        let x_table = tables.pop().expect("two tables");
        let ar_table = tables.pop().expect("two tables");
        out.push(CheckpointEstimate {
            n,
            p_hat: ar_table.argmin(),
            q_hat: x_table.argmin(),
            ar_table,
            x_table,
        });
    }
    Ok(out)
}

/// Hypothesised constants for the admissible penalty slopes.
///
/// None of these can be estimated from data; they are supplied by the user and
/// the interval formulas are only evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PenaltyHypothesis {
    /// Coefficient bound `c`.
    pub c: f64,
    /// Excitation growth along the AR axis, `λ_min ≥ c₁(n+1)`.
    pub c1: f64,
    /// Excitation growth along the X axis.
    pub c2: f64,
    /// `λ_max ≤ c₃(n+1)` at `(p₀, q*)`.
    pub c3: f64,
    /// `λ_max ≤ c₄(n+1)` at `(p*, q₀)`.
    pub c4: f64,
    pub gamma: f64,
    pub gamma_prime: f64,
    pub a_p0_sq: f64,
    pub b_q0_sq: f64,
    pub alpha1: f64,
    pub alpha2: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub p_star: usize,
    pub q_star: usize,
    pub epsilon: f64,
}

impl PenaltyHypothesis {
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::InvalidArgument(what.to_string()));
        if !(self.alpha1 > 0.0) {
            return bad("alpha1 must be positive");
        }
        if !(self.beta1 > 0.0) {
            return bad("beta1 must be positive");
        }
        if !(self.alpha2 > 0.0 && self.alpha2 < 1.0) {
            return bad("alpha2 must lie in (0, 1)");
        }
        if !(self.beta2 > 0.0 && self.beta2 < 1.0) {
            return bad("beta2 must lie in (0, 1)");
        }
        if !(self.epsilon > 0.0) {
            return bad("epsilon must be positive");
        }
        Ok(())
    }

    /// `(1 + p* c) ε`, the quantization term shared by all four bounds.
    fn quant_term(&self) -> f64 {
        (1.0 + self.p_star as f64 * self.c) * self.epsilon
    }
}

/// Admissible slope range `[lo, hi]`; `feasible` is `lo ≤ hi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PenaltyInterval {
    pub lo: f64,
    pub hi: f64,
    pub feasible: bool,
}

impl PenaltyInterval {
    fn new(lo: f64, hi: f64) -> Self {
        PenaltyInterval {
            lo,
            hi,
            feasible: lo <= hi,
        }
    }

    pub fn contains(&self, slope: f64) -> bool {
        self.feasible && self.lo <= slope && slope <= self.hi
    }
}

/// Slope interval for `l_n / n`:
/// `lo = 5(1+p*c)ε + α₁`,
/// `hi = (α₂/p*)(a²_{p₀}c₁ − 2γ√(c₃(1+p*c)ε) − 3(1+p*c)ε)`.
pub fn penalty_interval_p(h: &PenaltyHypothesis) -> Result<PenaltyInterval> {
    h.validate()?;
    if h.p_star == 0 {
        return Err(Error::InvalidArgument("p* must be positive".into()));
    }
    let k = h.quant_term();
    let lo = 5.0 * k + h.alpha1;
    let hi = h.alpha2 / h.p_star as f64
        * (h.a_p0_sq * h.c1 - 2.0 * h.gamma * (h.c3 * k).sqrt() - 3.0 * k);
    Ok(PenaltyInterval::new(lo, hi))
}

/// Slope interval for `v_n / n`:
/// `lo = 5(1+p*c)ε + β₁`,
/// `hi = (β₂/q*)(b²_{q₀}c₂ − 2γ′√(c₄(1+p*c)ε) − 3(1+p*c)ε)`.
pub fn penalty_interval_q(h: &PenaltyHypothesis) -> Result<PenaltyInterval> {
    h.validate()?;
    if h.q_star == 0 {
        return Err(Error::InvalidArgument("q* must be positive".into()));
    }
    let k = h.quant_term();
    let lo = 5.0 * k + h.beta1;
    let hi = h.beta2 / h.q_star as f64
        * (h.b_q0_sq * h.c2 - 2.0 * h.gamma_prime * (h.c4 * k).sqrt() - 3.0 * k);
    Ok(PenaltyInterval::new(lo, hi))
}
