//! Admissible penalty slopes for a few hypothesised constant sets.
//!
//! The lower end grows with the quantization step, the upper end shrinks with
//! it; whether the interval is non-empty depends on constants that cannot be
//! observed, so the result is reported per hypothesis.
//!
//! Run with: `cargo run --example penalty_feasibility`

use qarx::{penalty_interval_p, penalty_interval_q, PenaltyHypothesis};

fn main() -> qarx::Result<()> {
    let base = PenaltyHypothesis {
        c: 1.0,
        c1: 2.0,
        c2: 1.5,
        c3: 4.0,
        c4: 3.0,
        gamma: 0.1,
        gamma_prime: 0.2,
        a_p0_sq: 0.01,
        b_q0_sq: 1.0,
        alpha1: 0.001,
        alpha2: 0.9,
        beta1: 0.001,
        beta2: 0.9,
        p_star: 3,
        q_star: 3,
        epsilon: 0.001,
    };

    println!("   epsilon   a_p0^2 |        l_n/n interval         |        v_n/n interval");
    for epsilon in [1e-6, 1e-5, 1e-4, 1e-3, 2e-3] {
        for a_p0_sq in [0.01, 0.25] {
            let h = PenaltyHypothesis {
                epsilon,
                a_p0_sq,
                ..base
            };
            let p = penalty_interval_p(&h)?;
            let q = penalty_interval_q(&h)?;
            println!(
                "{epsilon:>10.0e} {a_p0_sq:>8} | [{:>9.5}, {:>9.5}] {:<5} | [{:>9.5}, {:>9.5}] {:<5}",
                p.lo,
                p.hi,
                if p.feasible { "ok" } else { "empty" },
                q.lo,
                q.hi,
                if q.feasible { "ok" } else { "empty" },
            );
        }
    }
    Ok(())
}
