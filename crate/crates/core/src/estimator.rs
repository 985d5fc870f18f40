//! Regularized least squares on quantized regressors.
//!
//! For a candidate order `(p, q)` the estimate after `n` samples is
//! `θ_n(p, q) = (I + Σ ψ_i ψ_iᵀ)⁻¹ Σ ψ_i s_{i+1}` with `i = 0 … n−1`,
//! laid out as `[−a_{1n}, …, −a_{pn}, b_{1n}, …, b_{qn}]`.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg;
use crate::model::ArxModel;
use crate::simulate::{stack_lags, Trajectory};

/// `ψ_i(p, q) = [s_i, …, s_{i−p+1}, u_i, …, u_{i−q+1}]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Regressor {
    pub p: usize,
    pub q: usize,
    pub entries: Vec<f64>,
}

impl Regressor {
    pub fn dim(&self) -> usize {
        self.entries.len()
    }
}

fn check_orders(q: usize) -> Result<()> {
    if q == 0 {
        return Err(Error::InvalidArgument(
            "exogenous order q must be at least 1".into(),
        ));
    }
    Ok(())
}

/// Quantized regressor at time `i`; entries with negative index are zero.
pub fn build_regressor(traj: &Trajectory, i: usize, p: usize, q: usize) -> Result<Regressor> {
    check_orders(q)?;
    if i >= traj.horizon() {
        return Err(Error::IndexOutOfRange {
            index: i,
            bound: traj.horizon(),
        });
    }
    Ok(Regressor {
        p,
        q,
        entries: stack_lags(traj.s()?, traj.u(), i, p, q),
    })
}

/// Normal equations `I + Σ ψψᵀ` and `Σ ψ s_next` for one `(p, q)` cell.
#[derive(Debug, Clone, PartialEq)]
pub struct GramState {
    p: usize,
    q: usize,
    gram: DMatrix<f64>,
    moment: DVector<f64>,
    count: usize,
}

impl GramState {
    /// Empty state: `gram = I`, `moment = 0`.
    pub fn new(p: usize, q: usize) -> Result<Self> {
        check_orders(q)?;
        let dim = p + q;
        Ok(GramState {
            p,
            q,
            gram: DMatrix::identity(dim, dim),
            moment: DVector::zeros(dim),
            count: 0,
        })
    }

    /// Accumulates `ψ_i s_{i+1}` for `i = 0 … n−1` in increasing order.
    pub fn from_trajectory(traj: &Trajectory, p: usize, q: usize, n: usize) -> Result<Self> {
        let mut state = GramState::new(p, q)?;
        state.extend(traj, n)?;
        Ok(state)
    }

    /// Continues accumulation from `self.count()` up to (excluding) sample `n`.
    pub fn extend(&mut self, traj: &Trajectory, n: usize) -> Result<()> {
        if n > traj.horizon() {
            return Err(Error::IndexOutOfRange {
                index: n,
                bound: traj.horizon() + 1,
            });
        }
        let s = traj.s()?;
        for i in self.count..n {
            let psi = stack_lags(s, traj.u(), i, self.p, self.q);
            self.push_unchecked(&psi, s[i + 1]);
        }
        Ok(())
    }

    pub fn push(&mut self, psi: &Regressor, s_next: f64) -> Result<()> {
        if psi.p != self.p || psi.q != self.q || psi.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: psi.dim(),
            });
        }
        self.push_unchecked(&psi.entries, s_next);
        Ok(())
    }

    fn push_unchecked(&mut self, psi: &[f64], s_next: f64) {
        let dim = psi.len();
        for c in 0..dim {
            for r in 0..dim {
                self.gram[(r, c)] += psi[r] * psi[c];
            }
            self.moment[c] += psi[c] * s_next;
        }
        self.count += 1;
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn dim(&self) -> usize {
        self.p + self.q
    }

    pub fn gram(&self) -> &DMatrix<f64> {
        &self.gram
    }

    pub fn moment(&self) -> &DVector<f64> {
        &self.moment
    }

    /// Number of accumulated samples `n`.
    pub fn count(&self) -> usize {
        self.count
    }
}

/// Value-style transition: returns `state` with `(ψ, s_next)` added.
pub fn accumulate(mut state: GramState, psi: &Regressor, s_next: f64) -> Result<GramState> {
    state.push(psi, s_next)?;
    Ok(state)
}

/// `θ_n(p, q) = gram⁻¹ · moment` by Cholesky.
pub fn solve_theta(state: &GramState) -> Result<Vec<f64>> {
    Ok(linalg::cholesky_solve(&state.gram, &state.moment)?
        .iter()
        .copied()
        .collect())
}

/// Smallest and largest eigenvalue of the regularized gram.
pub fn lambda_extremes(state: &GramState) -> (f64, f64) {
    linalg::symmetric_extremes(&state.gram)
}

/// Normalised extremes `λ_min(n)/(n+1)` and `λ_max(n)/(n+1)` of cell `(p, q)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExcitationSample {
    pub n: usize,
    pub lambda_min_rate: f64,
    pub lambda_max_rate: f64,
}

/// Tracks the eigenvalue growth of the `(p, q)` gram at increasing sample counts.
///
/// A persistently exciting input keeps `lambda_min_rate` away from zero.
pub fn excitation_profile(
    traj: &Trajectory,
    p: usize,
    q: usize,
    checkpoints: &[usize],
) -> Result<Vec<ExcitationSample>> {
    let mut state = GramState::new(p, q)?;
    let mut out = Vec::with_capacity(checkpoints.len());
    for &n in checkpoints {
        if n < state.count() {
            return Err(Error::InvalidArgument(
                "checkpoints must be non-decreasing".into(),
            ));
        }
        state.extend(traj, n)?;
        let (lo, hi) = lambda_extremes(&state);
        let scale = (n + 1) as f64;
        out.push(ExcitationSample {
            n,
            lambda_min_rate: lo / scale,
            lambda_max_rate: hi / scale,
        });
    }
    Ok(out)
}

/// Parameter vector in a fixed `(p_ref, q_ref)` layout
/// `[−a₁ … −a_{p_ref}, b₁ … b_{q_ref}]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PaddedTheta {
    pub p_ref: usize,
    pub q_ref: usize,
    pub values: Vec<f64>,
}

/// Zero-pads an order-`(p, q)` vector into the `(p_ref, q_ref)` layout.
pub fn pad_theta(
    theta: &[f64],
    p: usize,
    q: usize,
    p_ref: usize,
    q_ref: usize,
) -> Result<PaddedTheta> {
    if theta.len() != p + q {
        return Err(Error::DimensionMismatch {
            expected: p + q,
            found: theta.len(),
        });
    }
    if p > p_ref || q > q_ref {
        return Err(Error::InvalidArgument(format!(
            "cannot pad order ({p}, {q}) into ({p_ref}, {q_ref})"
        )));
    }
    let mut values = vec![0.0; p_ref + q_ref];
    values[..p].copy_from_slice(&theta[..p]);
    values[p_ref..p_ref + q].copy_from_slice(&theta[p..]);
    Ok(PaddedTheta {
        p_ref,
        q_ref,
        values,
    })
}

impl PaddedTheta {
    /// `θ̄(p, q)` of the true model: `a_i = 0` for `i > p₀`, `b_j = 0` for `j > q₀`.
    pub fn truth(model: &ArxModel, p: usize, q: usize) -> Self {
        let ar = (0..p).map(|i| model.a.get(i).map_or(0.0, |a| -a));
        let x = (0..q).map(|j| model.b.get(j).copied().unwrap_or(0.0));
        PaddedTheta {
            p_ref: p,
            q_ref: q,
            values: ar.chain(x).collect(),
        }
    }
}

/// `‖truth − estimate‖₂`.
pub fn param_error_norm(estimate: &PaddedTheta, truth: &PaddedTheta) -> Result<f64> {
    if estimate.p_ref != truth.p_ref || estimate.q_ref != truth.q_ref {
        return Err(Error::InvalidArgument(format!(
            "layout ({}, {}) does not match ({}, {})",
            estimate.p_ref, estimate.q_ref, truth.p_ref, truth.q_ref
        )));
    }
    Ok(truth
        .values
        .iter()
        .zip(&estimate.values)
        .map(|(t, e)| (t - e) * (t - e))
        .sum::<f64>()
        .sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantizer::Quantizer;

    fn small_traj() -> Trajectory {
        // s = [0, 1, 2, 3], u = [10, 20, 30]
        Trajectory::from_observations(vec![10.0, 20.0, 30.0], vec![0.0, 1.0, 2.0, 3.0], 1.0)
            .unwrap()
    }

    #[test]
    fn regressor_layouts() {
        let t = small_traj();
        assert_eq!(
            build_regressor(&t, 2, 2, 1).unwrap().entries,
            vec![2.0, 1.0, 30.0]
        );
        assert_eq!(
            build_regressor(&t, 0, 2, 2).unwrap().entries,
            vec![0.0, 0.0, 10.0, 0.0]
        );
        assert_eq!(build_regressor(&t, 1, 0, 1).unwrap().entries, vec![20.0]);
        assert!(build_regressor(&t, 3, 1, 1).is_err());
        assert!(build_regressor(&t, 1, 1, 0).is_err());
    }

    #[test]
    fn one_step_accumulation() {
        let state = GramState::new(1, 1).unwrap();
        let psi = Regressor {
            p: 1,
            q: 1,
            entries: vec![1.0, 1.0],
        };
        let state = accumulate(state, &psi, 2.0).unwrap();
        assert_eq!(state.gram().as_slice(), &[2.0, 1.0, 1.0, 2.0]);
        assert_eq!(state.moment().as_slice(), &[2.0, 2.0]);
        assert_eq!(state.count(), 1);

        let theta = solve_theta(&state).unwrap();
        assert!((theta[0] - 2.0 / 3.0).abs() < 1e-15);
        assert!((theta[1] - 2.0 / 3.0).abs() < 1e-15);

        let (lo, hi) = lambda_extremes(&state);
        assert!((lo - 1.0).abs() < 1e-12);
        assert!((hi - 3.0).abs() < 1e-12);
    }

    #[test]
    fn zero_regressor_only_counts() {
        let state = GramState::new(2, 1).unwrap();
        let before = state.clone();
        let psi = Regressor {
            p: 2,
            q: 1,
            entries: vec![0.0; 3],
        };
        let after = accumulate(state, &psi, 5.0).unwrap();
        assert_eq!(after.gram(), before.gram());
        assert_eq!(after.moment(), before.moment());
        assert_eq!(after.count(), 1);
    }

    #[test]
    fn order_of_two_samples_commutes() {
        let a = Regressor {
            p: 1,
            q: 1,
            entries: vec![1.0, -2.0],
        };
        let b = Regressor {
            p: 1,
            q: 1,
            entries: vec![0.5, 3.0],
        };
        let s1 = GramState::new(1, 1).unwrap();
        let ab = accumulate(accumulate(s1.clone(), &a, 1.0).unwrap(), &b, -1.0).unwrap();
        let ba = accumulate(accumulate(s1, &b, -1.0).unwrap(), &a, 1.0).unwrap();
        assert_eq!(ab, ba);
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let state = GramState::new(1, 1).unwrap();
        let psi = Regressor {
            p: 2,
            q: 1,
            entries: vec![0.0; 3],
        };
        assert!(accumulate(state, &psi, 0.0).is_err());
        assert!(GramState::new(1, 0).is_err());
    }

    #[test]
    fn fresh_state() {
        let state = GramState::new(2, 3).unwrap();
        assert_eq!(solve_theta(&state).unwrap(), vec![0.0; 5]);
        assert_eq!(lambda_extremes(&state), (1.0, 1.0));
    }

    #[test]
    fn extend_and_from_trajectory_agree() {
        let t = small_traj();
        let batch = GramState::from_trajectory(&t, 1, 2, 3).unwrap();
        let mut inc = GramState::new(1, 2).unwrap();
        inc.extend(&t, 1).unwrap();
        inc.extend(&t, 3).unwrap();
        assert_eq!(batch, inc);
        assert!(inc.extend(&t, 4).is_err());
    }

    #[test]
    fn excitation_profile_checks() {
        let t = small_traj();
        let prof = excitation_profile(&t, 1, 1, &[0, 1, 3]).unwrap();
        assert_eq!(prof[0].lambda_min_rate, 1.0);
        assert_eq!(prof[0].lambda_max_rate, 1.0);
        assert_eq!(prof[2].n, 3);
        assert!(excitation_profile(&t, 1, 1, &[3, 1]).is_err());
    }

    #[test]
    fn padding() {
        let p = pad_theta(&[-0.5, 2.0], 1, 1, 2, 2).unwrap();
        assert_eq!(p.values, vec![-0.5, 0.0, 2.0, 0.0]);
        let same = pad_theta(&[1.0, 2.0, 3.0], 2, 1, 2, 1).unwrap();
        assert_eq!(same.values, vec![1.0, 2.0, 3.0]);
        assert!(pad_theta(&[1.0], 1, 1, 2, 2).is_err());
        assert!(pad_theta(&[1.0, 2.0, 3.0], 2, 1, 1, 1).is_err());
    }

    #[test]
    fn true_parameter_layout() {
        let m = ArxModel::new(vec![0.7, 0.1], vec![1.0], 1.0).unwrap();
        let t = PaddedTheta::truth(&m, 3, 3);
        assert_eq!(t.values, vec![-0.7, -0.1, 0.0, 1.0, 0.0, 0.0]);
        let padded = pad_theta(&m.theta(), 2, 1, 3, 3).unwrap();
        assert_eq!(padded, t);
        assert_eq!(PaddedTheta::truth(&m, 1, 1).values, vec![-0.7, 1.0]);
    }

    #[test]
    fn error_norm() {
        let a = PaddedTheta {
            p_ref: 1,
            q_ref: 1,
            values: vec![1.0, 0.0],
        };
        let b = PaddedTheta {
            p_ref: 1,
            q_ref: 1,
            values: vec![0.0, 1.0],
        };
        assert_eq!(param_error_norm(&a, &a).unwrap(), 0.0);
        assert!((param_error_norm(&a, &b).unwrap() - 2f64.sqrt()).abs() < 1e-15);
        let c = PaddedTheta {
            p_ref: 2,
            q_ref: 0,
            values: vec![0.0, 1.0],
        };
        assert!(param_error_norm(&a, &c).is_err());
    }

    #[test]
    fn noise_free_fit_recovers_sign_convention() {
        let m = ArxModel::new(vec![0.7, 0.1], vec![1.0], 0.0).unwrap();
        let traj = crate::simulate(&m, &crate::InputSpec::new(3.0).unwrap(), 3000, 2)
            .unwrap()
            .quantized(&Quantizer::new(1e-12).unwrap())
            .unwrap();
        let theta = solve_theta(&GramState::from_trajectory(&traj, 2, 1, 3000).unwrap()).unwrap();
        let a_hat: Vec<f64> = theta[..2].iter().map(|v| -v).collect();
        assert!((a_hat[0] - 0.7).abs() < 1e-3, "{a_hat:?}");
        assert!((a_hat[1] - 0.1).abs() < 1e-3, "{a_hat:?}");
        assert!((theta[2] - 1.0).abs() < 1e-3);
    }
}
