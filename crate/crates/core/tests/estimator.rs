mod common;

use proptest::prelude::*;
use qarx::{
    accumulate, build_regressor, lambda_extremes, pad_theta, param_error_norm, simulate,
    solve_theta, GramState, InputSpec, PaddedTheta, Quantizer, Trajectory,
};

fn random_traj(u: Vec<f64>, s_tail: Vec<f64>) -> Trajectory {
    let mut s = vec![0.0];
    s.extend(s_tail);
    Trajectory::from_observations(u, s, 0.001).unwrap()
}

fn instance() -> impl Strategy<Value = (usize, usize, Trajectory)> {
    (0usize..=5, 1usize..=6, 1usize..=50)
        .prop_filter("p + q <= 6", |(p, q, _)| p + q <= 6)
        .prop_flat_map(|(p, q, n)| {
            (
                Just(p),
                Just(q),
                prop::collection::vec(-3.0f64..3.0, n),
                prop::collection::vec(-5.0f64..5.0, n),
            )
        })
        .prop_map(|(p, q, u, s)| (p, q, random_traj(u, s)))
}

proptest! {
    #[test]
    fn solve_matches_dense_oracle((p, q, traj) in instance()) {
        let n = traj.horizon();
        let state = GramState::from_trajectory(&traj, p, q, n).unwrap();
        let theta = solve_theta(&state).unwrap();

        let s = traj.s().unwrap();
        let rows: Vec<Vec<f64>> = (0..n).map(|i| build_regressor(&traj, i, p, q).unwrap().entries).collect();
        let oracle = common::ls_oracle(&rows, &s[1..=n], p + q);
        for (a, b) in theta.iter().zip(&oracle) {
            prop_assert!((a - b).abs() <= 1e-9, "{theta:?} vs {oracle:?}");
        }

        // residual of the normal equations
        let g = state.gram();
        let m = state.moment();
        let scale = m.amax().max(1.0);
        for r in 0..p + q {
            let lhs: f64 = (0..p + q).map(|c| g[(r, c)] * theta[c]).sum();
            prop_assert!((lhs - m[r]).abs() <= 1e-9 * scale);
        }
    }

    #[test]
    fn incremental_equals_batch((p, q, traj) in instance()) {
        let n = traj.horizon();
        let batch = GramState::from_trajectory(&traj, p, q, n).unwrap();
        let mut inc = GramState::new(p, q).unwrap();
        for i in 0..n {
            let psi = build_regressor(&traj, i, p, q).unwrap();
            inc = accumulate(inc, &psi, traj.s().unwrap()[i + 1]).unwrap();
        }
        prop_assert_eq!(&inc, &batch);
        prop_assert_eq!(inc.count(), n);
        // symmetry
        let g = inc.gram();
        prop_assert_eq!(g, &g.transpose());
    }

    #[test]
    fn lambda_min_floor_and_growth((p, q, traj) in instance()) {
        let mut state = GramState::new(p, q).unwrap();
        let mut prev = 1.0;
        for i in 0..traj.horizon() {
            state.extend(&traj, i + 1).unwrap();
            let (lo, hi) = lambda_extremes(&state);
            prop_assert!(lo >= 1.0 - 1e-9);
            prop_assert!(lo >= prev - 1e-9 * hi);
            prop_assert!(hi >= lo);
            prev = lo;
        }
    }
}

#[test]
fn parameter_error_stays_bounded_on_paper_data() {
    let model = common::paper_model();
    let traj = simulate(&model, &InputSpec::new(3.0).unwrap(), 5000, 17)
        .unwrap()
        .quantized(&Quantizer::new(0.001).unwrap())
        .unwrap();
    let truth = PaddedTheta::truth(&model, 2, 3);
    let mut state = GramState::new(2, 3).unwrap();
    let mut worst: f64 = 0.0;
    for n in (500..=5000).step_by(500) {
        state.extend(&traj, n).unwrap();
        let est = pad_theta(&solve_theta(&state).unwrap(), 2, 3, 2, 3).unwrap();
        worst = worst.max(param_error_norm(&est, &truth).unwrap());
    }
    assert!(worst < 0.5, "parameter error {worst}");
}

#[test]
fn under_fitted_error_is_bounded_too() {
    // p < p₀: the missing coefficient keeps the error away from zero but finite.
    let model = common::paper_model();
    let traj = simulate(&model, &InputSpec::new(3.0).unwrap(), 4000, 8)
        .unwrap()
        .quantized(&Quantizer::new(0.001).unwrap())
        .unwrap();
    let truth = PaddedTheta::truth(&model, 2, 3);
    let mut state = GramState::new(1, 3).unwrap();
    for n in [1000, 2000, 4000] {
        state.extend(&traj, n).unwrap();
        let est = pad_theta(&solve_theta(&state).unwrap(), 1, 3, 2, 3).unwrap();
        let e = param_error_norm(&est, &truth).unwrap();
        assert!(e > 0.05 && e < 1.0, "n = {n}: {e}");
    }
}
