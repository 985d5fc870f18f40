//! Seeded simulation of an [`ArxModel`].

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, Uniform};

use crate::error::{Error, Result};
use crate::model::{ArxModel, InputSpec};
use crate::quantizer::{quantize, Quantizer};

/// Aligned signals of one run over a horizon `n`.
///
/// Index conventions:
/// * `u[i]` for `i = 0 … n−1`
/// * `w[i]` for `i = 1 … n` (`w[0]` is stored as `0`)
/// * `y[i]`, `s[i]` for `i = 0 … n`, with `y[0] = s[0] = 0`
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    u: Vec<f64>,
    w: Vec<f64>,
    y: Vec<f64>,
    s: Option<Vec<f64>>,
    epsilon_used: Option<f64>,
}

impl Trajectory {
    /// Runs the recursion on explicit input and noise sequences.
    ///
    /// `u` has length `n` and `w` has length `n + 1` (`w[0]` ignored).
    pub fn from_signals(model: &ArxModel, u: Vec<f64>, w: Vec<f64>) -> Result<Self> {
        model.validate()?;
        let horizon = u.len();
        if horizon == 0 {
            return Err(Error::InvalidArgument("horizon must be at least 1".into()));
        }
        if w.len() != horizon + 1 {
            return Err(Error::DimensionMismatch {
                expected: horizon + 1,
                found: w.len(),
            });
        }
        let mut w = w;
        w[0] = 0.0;

        let mut y = vec![0.0; horizon + 1];
        for n in 0..horizon {
            let t = n + 1;
            let mut next = w[t];
            for (i, a) in model.a.iter().enumerate() {
                if let Some(k) = t.checked_sub(i + 1) {
                    next -= a * y[k];
                }
            }
            for (j, b) in model.b.iter().enumerate() {
                if let Some(k) = t.checked_sub(j + 1) {
                    next += b * u[k];
                }
            }
            y[t] = next;
        }

        Ok(Trajectory {
            u,
            w,
            y,
            s: None,
            epsilon_used: None,
        })
    }

    /// Builds a trajectory directly from recorded signals, e.g. measured data.
    ///
    /// `s` must have length `u.len() + 1`; `w` and `y` are unknown and stored as zeros.
    pub fn from_observations(u: Vec<f64>, s: Vec<f64>, epsilon: f64) -> Result<Self> {
        let horizon = u.len();
        if horizon == 0 {
            return Err(Error::InvalidArgument("horizon must be at least 1".into()));
        }
        if s.len() != horizon + 1 {
            return Err(Error::DimensionMismatch {
                expected: horizon + 1,
                found: s.len(),
            });
        }
        Quantizer::new(epsilon)?;
        Ok(Trajectory {
            u,
            w: vec![0.0; horizon + 1],
            y: vec![0.0; horizon + 1],
            s: Some(s),
            epsilon_used: Some(epsilon),
        })
    }

    pub fn horizon(&self) -> usize {
        self.u.len()
    }

    pub fn u(&self) -> &[f64] {
        &self.u
    }

    pub fn w(&self) -> &[f64] {
        &self.w
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn s(&self) -> Result<&[f64]> {
        self.s.as_deref().ok_or(Error::NotQuantized)
    }

    pub fn epsilon_used(&self) -> Option<f64> {
        self.epsilon_used
    }

    /// Returns a copy carrying `s[i] = quantize(y[i])`.
    pub fn quantized(&self, q: &Quantizer) -> Result<Self> {
        let s = self
            .y
            .iter()
            .map(|&v| quantize(v, q))
            .collect::<Result<Vec<_>>>()?;
        Ok(Trajectory {
            s: Some(s),
            epsilon_used: Some(q.epsilon()),
            ..self.clone()
        })
    }

    /// Unquantized regressor `φ_i = [y_i, …, y_{i−p+1}, u_i, …, u_{i−q+1}]`.
    pub fn phi(&self, i: usize, p: usize, q: usize) -> Result<Vec<f64>> {
        if i >= self.horizon() {
            return Err(Error::IndexOutOfRange {
                index: i,
                bound: self.horizon(),
            });
        }
        Ok(stack_lags(&self.y, &self.u, i, p, q))
    }
}

/// `[out_i, …, out_{i−p+1}, inp_i, …, inp_{i−q+1}]`, zero for negative indices.
pub(crate) fn stack_lags(out: &[f64], inp: &[f64], i: usize, p: usize, q: usize) -> Vec<f64> {
    let lag = |xs: &[f64], k: usize| i.checked_sub(k).map_or(0.0, |t| xs[t]);
    (0..p)
        .map(|k| lag(out, k))
        .chain((0..q).map(|k| lag(inp, k)))
        .collect()
}

/// Simulates `horizon` steps from `y[0] = 0`.
///
/// Draws are taken from a ChaCha8 stream seeded with `seed`, in the order
/// `u[0], w[1], u[1], w[2], …`. Noise uses a ziggurat Gaussian, input an
/// inclusive uniform on `[−δ, δ]`.
pub fn simulate(
    model: &ArxModel,
    input: &InputSpec,
    horizon: usize,
    seed: u64,
) -> Result<Trajectory> {
    model.validate()?;
    if horizon == 0 {
        return Err(Error::InvalidArgument("horizon must be at least 1".into()));
    }
    let input = InputSpec::new(input.delta)?;
    let uniform = Uniform::new_inclusive(-input.delta, input.delta)
        .map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let normal =
        Normal::new(0.0, model.noise_std).map_err(|e| Error::InvalidModel(e.to_string()))?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut u = Vec::with_capacity(horizon);
    let mut w = Vec::with_capacity(horizon + 1);
    w.push(0.0);
    for _ in 0..horizon {
        u.push(uniform.sample(&mut rng));
        w.push(normal.sample(&mut rng));
    }
    Trajectory::from_signals(model, u, w)
}
