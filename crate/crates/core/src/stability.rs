//! Stability of `A(z) = 1 + a₁z + … + a_pz^p`.

use nalgebra::DMatrix;

use crate::model::ArxModel;

/// Root moduli must exceed `1 + STABILITY_MARGIN`.
pub const STABILITY_MARGIN: f64 = 1e-9;

/// Roots of `A(z)` as `(re, im)` pairs.
///
/// The roots are the reciprocals of the eigenvalues of the companion matrix of
/// the reversed polynomial `λ^p + a₁λ^{p−1} + … + a_p`.
pub fn ar_roots(a: &[f64]) -> Vec<(f64, f64)> {
    let p = a.len();
    if p == 0 {
        return Vec::new();
    }
    let mut companion = DMatrix::<f64>::zeros(p, p);
    for (j, &coef) in a.iter().enumerate() {
        companion[(0, j)] = -coef;
    }
    for i in 1..p {
        companion[(i, i - 1)] = 1.0;
    }
    companion
        .complex_eigenvalues()
        .iter()
        .map(|lambda| {
            let inv = lambda.inv();
            (inv.re, inv.im)
        })
        .collect()
}

/// True iff `A(z) ≠ 0` on the closed unit disk.
pub fn check_stability(model: &ArxModel) -> bool {
    ar_polynomial_is_stable(&model.a)
}

pub fn ar_polynomial_is_stable(a: &[f64]) -> bool {
    ar_roots(a)
        .iter()
        .all(|&(re, im)| re.hypot(im) > 1.0 + STABILITY_MARGIN)
}
