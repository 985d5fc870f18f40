//! Order estimation for stochastic ARX systems whose outputs are only seen
//! through a uniform quantizer.
//!
//! The crate is organised around the pipeline
//!
//! 1. [`model`] / [`simulate`]: define `A(z) y_{n+1} = B(z) u_n + w_{n+1}`, draw
//!    a seeded trajectory and check stability of `A(z)`;
//! 2. [`quantizer`]: observe `s_n = ε⌊y_n/ε + 1/2⌋` and bound the induced
//!    equation noise;
//! 3. [`estimator`]: regularized least squares `θ_n(p, q)` on quantized
//!    regressors, with eigenvalue and parameter-error diagnostics;
//! 4. [`criterion`]: the penalized criteria `L_n` / `V_n`, the order estimates
//!    `p̂_n` / `q̂_n`, and the admissible penalty-slope intervals;
//! 5. [`experiment`]: seeded Monte Carlo runs with CSV output.
//!
//! ```
//! use qarx::{ArxModel, InputSpec, Quantizer, PenaltySchedule};
//!
//! let model = ArxModel::new(vec![0.7, 0.1], vec![1.0], 1.0).unwrap();
//! let traj = qarx::simulate(&model, &InputSpec::new(3.0).unwrap(), 2000, 7)
//!     .unwrap()
//!     .quantized(&Quantizer::new(0.001).unwrap())
//!     .unwrap();
//! let (p_hat, _) =
//!     qarx::estimate_p(&traj, 3, 3, &PenaltySchedule::new(0.006).unwrap(), 2000).unwrap();
//! assert_eq!(p_hat, 2);
//! ```

// `!(x > 0.0)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod criterion;
pub mod error;
pub mod estimator;
pub mod experiment;
mod linalg;
pub mod model;
pub mod quantizer;
pub mod simulate;
pub mod stability;

pub use criterion::{
    criterion, estimate_orders_at, estimate_p, estimate_q, penalty_interval_p, penalty_interval_q,
    sigma_n, Axis, CheckpointEstimate, CriterionCell, CriterionTable, PenaltyHypothesis,
    PenaltyInterval, PenaltySchedule,
};
pub use error::{Error, Result};
pub use estimator::{
    accumulate, build_regressor, excitation_profile, lambda_extremes, pad_theta, param_error_norm,
    solve_theta, ExcitationSample, GramState, PaddedTheta, Regressor,
};
pub use experiment::{
    run_experiment, summarize, write_results, CheckpointRecord, ExperimentConfig, SummaryRow,
    TrialResult,
};
pub use model::{ArxModel, InputSpec};
pub use quantizer::{
    is_on_grid, quantization_noise_bound, quantization_noise_sequence, quantize, Quantizer,
};
pub use simulate::{simulate, Trajectory};
pub use stability::check_stability;
