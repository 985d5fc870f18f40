//! The true system `A(z) y_{n+1} = B(z) u_n + w_{n+1}` and its input law.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// ARX system with `A(z) = 1 + a₁z + … + a_{p₀}z^{p₀}` and
/// `B(z) = b₁ + b₂z + … + b_{q₀}z^{q₀−1}`, driven by i.i.d. `N(0, noise_std²)` noise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArxModel {
    /// `a₁ … a_{p₀}`, in the `A(z)` sign convention.
    pub a: Vec<f64>,
    /// `b₁ … b_{q₀}`.
    pub b: Vec<f64>,
    #[serde(default = "default_noise_std")]
    pub noise_std: f64,
}

fn default_noise_std() -> f64 {
    1.0
}

impl ArxModel {
    pub fn new(a: Vec<f64>, b: Vec<f64>, noise_std: f64) -> Result<Self> {
        let model = ArxModel { a, b, noise_std };
        model.validate()?;
        Ok(model)
    }

    pub fn validate(&self) -> Result<()> {
        if self.b.is_empty() {
            return Err(Error::InvalidModel("q0 must be at least 1".into()));
        }
        if let Some(v) = self.a.iter().chain(&self.b).find(|v| !v.is_finite()) {
            return Err(Error::NonFinite(*v));
        }
        if self.a.last().is_some_and(|&v| v == 0.0) {
            return Err(Error::InvalidModel(
                "trailing coefficient a_p0 is zero".into(),
            ));
        }
        if self.b.last().is_some_and(|&v| v == 0.0) {
            return Err(Error::InvalidModel(
                "trailing coefficient b_q0 is zero".into(),
            ));
        }
        // zero is allowed so that noise-free runs can be built for testing
        if !(self.noise_std.is_finite() && self.noise_std >= 0.0) {
            return Err(Error::InvalidModel(format!(
                "noise_std must be finite and non-negative, got {}",
                self.noise_std
            )));
        }
        Ok(())
    }

    pub fn p0(&self) -> usize {
        self.a.len()
    }

    pub fn q0(&self) -> usize {
        self.b.len()
    }

    /// Largest coefficient magnitude, i.e. the smallest admissible coefficient bound `c`.
    pub fn max_abs_coefficient(&self) -> f64 {
        self.a
            .iter()
            .chain(&self.b)
            .fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    /// Checks `|a_i| ≤ c` and `|b_j| ≤ c`.
    pub fn check_coefficient_bound(&self, c: f64) -> Result<()> {
        if !(c > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "coefficient bound must be positive, got {c}"
            )));
        }
        if self.max_abs_coefficient() > c {
            return Err(Error::InvalidModel(format!(
                "coefficient magnitude {} exceeds bound {c}",
                self.max_abs_coefficient()
            )));
        }
        Ok(())
    }

    /// True parameter `[−a₁, …, −a_{p₀}, b₁, …, b_{q₀}]`.
    pub fn theta(&self) -> Vec<f64> {
        self.a
            .iter()
            .map(|v| -v)
            .chain(self.b.iter().copied())
            .collect()
    }

    /// `|a₁| + … + |a_{p₀}|`.
    pub fn ar_abs_sum(&self) -> f64 {
        self.a.iter().map(|v| v.abs()).sum()
    }
}

/// Input law: `u_i` i.i.d. uniform on `[−δ, δ]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InputSpec {
    pub delta: f64,
}

impl InputSpec {
    pub fn new(delta: f64) -> Result<Self> {
        if !(delta.is_finite() && delta > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "input half-width must be positive, got {delta}"
            )));
        }
        Ok(InputSpec { delta })
    }
}
