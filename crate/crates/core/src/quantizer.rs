//! Mid-tread uniform quantizer and the equation noise it induces.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::ArxModel;
use crate::simulate::{stack_lags, Trajectory};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Quantizer {
    epsilon: f64,
}

impl Quantizer {
    pub fn new(epsilon: f64) -> Result<Self> {
        if !(epsilon.is_finite() && epsilon > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "quantization step must be positive, got {epsilon}"
            )));
        }
        Ok(Quantizer { epsilon })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// Upper limit on the step for which the consistency results apply: `1 / (2(1 + p₀c))`.
    pub fn max_step(p0: usize, c: f64) -> f64 {
        1.0 / (2.0 * (1.0 + p0 as f64 * c))
    }

    /// Whether `ε < 1 / (2(1 + p₀c))` holds for `model` under coefficient bound `c`.
    pub fn satisfies_step_bound(&self, model: &ArxModel, c: f64) -> bool {
        self.epsilon < Self::max_step(model.p0(), c)
    }
}

/// `ε⌊y/ε + 1/2⌋`: maps `[kε − ε/2, kε + ε/2)` to `kε`.
///
/// The cell index is corrected after the floor so that the returned value is
/// always within `ε/2` of `y` in floating point as well.
pub fn quantize(y: f64, q: &Quantizer) -> Result<f64> {
    if !y.is_finite() {
        return Err(Error::NonFinite(y));
    }
    let eps = q.epsilon;
    let half = 0.5 * eps;
    let mut k = (y / eps + 0.5).floor();
    if k * eps - y > half {
        k -= 1.0;
    } else if y - k * eps > half {
        k += 1.0;
    }
    let s = k * eps;
    // normalise -0.0
    Ok(if s == 0.0 { 0.0 } else { s })
}

/// Grid index `k` of a quantized value `s = kε`.
///
/// `s` is stored as the rounded product `fl(kε)`, so `s / ε` is only within a
/// few ulps of `k`; rounding recovers it exactly for `|k| < 2⁵⁰`.
pub fn grid_index(s: f64, q: &Quantizer) -> f64 {
    (s / q.epsilon).round()
}

/// Whether `s` is exactly the floating-point product of an integer and `ε`.
pub fn is_on_grid(s: f64, q: &Quantizer) -> bool {
    s.is_finite() && grid_index(s, q) * q.epsilon == s
}

/// Element-wise quantization of `traj.y`; see [`Trajectory::quantized`].
pub fn quantize_trajectory(traj: &Trajectory, q: &Quantizer) -> Result<Trajectory> {
    traj.quantized(q)
}

/// `(ε/2)(|a₁| + … + |a_{p₀}| + 1)`, the uniform bound on the quantization noise.
pub fn quantization_noise_bound(model: &ArxModel, q: &Quantizer) -> f64 {
    0.5 * q.epsilon * (model.ar_abs_sum() + 1.0)
}

/// `ε_{n+1} = s_{n+1} − θᵀψ_n(p₀, q₀) − w_{n+1}` for `n = 0 … N−1`.
///
/// Element `k` of the result is the noise at time `k + 1`.
pub fn quantization_noise_sequence(traj: &Trajectory, model: &ArxModel) -> Result<Vec<f64>> {
    model.validate()?;
    let s = traj.s()?;
    let theta = model.theta();
    let (p0, q0) = (model.p0(), model.q0());
    Ok((0..traj.horizon())
        .map(|n| {
            let psi = stack_lags(s, traj.u(), n, p0, q0);
            let fit: f64 = theta.iter().zip(&psi).map(|(t, x)| t * x).sum();
            s[n + 1] - fit - traj.w()[n + 1]
        })
        .collect())
}
