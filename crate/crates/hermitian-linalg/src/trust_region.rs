//! Exact maximization of a convex Hermitian quadratic over a complex ball.
//!
//! Computes `max { (g + d)ᴴ M (g + d) : ‖d‖ <= eps }` for PSD `M`. The
//! objective is convex, so the maximum sits on the sphere `‖d‖ = eps`;
//! stationarity there gives `(ν I − M) d = M g` with multiplier
//! `ν >= λ_max(M)`, and `ν` is pinned down by the secular equation
//! `‖d(ν)‖ = eps`. A safeguarded Newton iteration on `1/‖d(ν)‖ − 1/eps`
//! with a bisection fallback handles the nearly-hard case; the exact hard
//! case (`M g` orthogonal to the top eigenspace with interior pseudo-step)
//! is resolved in closed form.

use crate::spectral::eig_hermitian;
use crate::{CVec, HermitianMatrix, LinalgError};

const PSD_TOL: f64 = 1e-9;
const MAX_SECULAR_ITERS: usize = 200;

pub fn trust_region_quadratic_max(
    m: &HermitianMatrix,
    g_hat: &CVec,
    eps: f64,
) -> Result<f64, LinalgError> {
    if g_hat.len() != m.dim() {
        return Err(LinalgError::DimensionMismatch(format!(
            "vector length {} vs matrix dim {}",
            g_hat.len(),
            m.dim()
        )));
    }
    if !eps.is_finite() || eps < 0.0 {
        return Err(LinalgError::InvalidArgument(format!(
            "radius must be finite and nonnegative, got {eps}"
        )));
    }

    let eig = eig_hermitian(m);
    let lmax = eig.lambda_max();
    if eig.lambda_min() < -PSD_TOL * (1.0 + lmax.abs()) {
        return Err(LinalgError::NotPsd {
            lambda_min: eig.lambda_min(),
        });
    }
    // Clamp solver-noise negatives; the maximizer below assumes λ >= 0.
    let lambda: Vec<f64> = eig.eigenvalues.iter().map(|&l| l.max(0.0)).collect();
    let n = lambda.len();
    let lmax = lambda[n - 1];

    // Coordinates of g in the eigenbasis.
    let g_eig = eig.eigenvectors.adjoint() * g_hat;
    let base: f64 = (0..n).map(|i| lambda[i] * g_eig[i].norm_sqr()).sum();

    if eps == 0.0 || lmax <= 0.0 {
        return Ok(base.max(0.0));
    }

    // beta_i = (M g)_i in the eigenbasis; top eigenspace split.
    let top_cut = lmax - 1e-12 * (1.0 + lmax);
    let beta_sq: Vec<f64> = (0..n)
        .map(|i| (lambda[i] * lambda[i]) * g_eig[i].norm_sqr())
        .collect();
    let beta_norm_sq: f64 = beta_sq.iter().sum();
    let top_beta_sq: f64 = (0..n)
        .filter(|&i| lambda[i] >= top_cut)
        .map(|i| beta_sq[i])
        .sum();

    // ‖d(ν)‖² as ν ↓ λ_max: diverges unless beta has no top component.
    let pseudo_norm_sq: f64 = (0..n)
        .filter(|&i| lambda[i] < top_cut)
        .map(|i| beta_sq[i] / (lmax - lambda[i]).powi(2))
        .sum();

    let top_is_empty = top_beta_sq <= (1e-13 * (beta_norm_sq.sqrt() + f64::MIN_POSITIVE)).powi(2);
    if top_is_empty && pseudo_norm_sq.sqrt() <= eps {
        // Hard case: pseudo-step plus a free rotation in the top eigenspace.
        let tau = (eps * eps - pseudo_norm_sq).max(0.0).sqrt();
        let mut value = 0.0;
        let mut top_g_norm_sq = 0.0;
        for i in 0..n {
            if lambda[i] >= top_cut {
                top_g_norm_sq += g_eig[i].norm_sqr();
            } else {
                let denom = lmax - lambda[i];
                // g'_i + d_i = g'_i * λ_max / (λ_max − λ_i)
                let scale = if denom > 0.0 { lmax / denom } else { 1.0 };
                value += lambda[i] * g_eig[i].norm_sqr() * scale * scale;
            }
        }
        value += lmax * (top_g_norm_sq.sqrt() + tau).powi(2);
        return Ok(value.max(base));
    }

    // Easy case: secular root on (λ_max, λ_max + ‖beta‖/eps].
    let norm_d = |nu: f64| -> f64 {
        (0..n)
            .map(|i| beta_sq[i] / (nu - lambda[i]).powi(2))
            .sum::<f64>()
            .sqrt()
    };
    let mut hi = lmax + beta_norm_sq.sqrt() / eps;
    let mut lo = lmax + 1e-14 * (1.0 + hi);
    let h = |nu: f64| 1.0 / norm_d(nu) - 1.0 / eps;
    let mut nu = if h(lo) >= 0.0 {
        lo
    } else {
        // Safeguarded Newton from the upper end; h is increasing in ν.
        let mut nu = hi;
        for _ in 0..MAX_SECULAR_ITERS {
            let nd = norm_d(nu);
            if (nd - eps).abs() <= 1e-13 * eps {
                break;
            }
            if nd > eps {
                lo = lo.max(nu);
            } else {
                hi = hi.min(nu);
            }
            let dnorm_sq_dnu: f64 = (0..n)
                .map(|i| -2.0 * beta_sq[i] / (nu - lambda[i]).powi(3))
                .sum();
            let h_val = 1.0 / nd - 1.0 / eps;
            let h_prime = -0.5 * dnorm_sq_dnu / (nd * nd * nd);
            let newton = nu - h_val / h_prime;
            nu = if newton > lo && newton < hi {
                newton
            } else {
                0.5 * (lo + hi)
            };
        }
        nu
    };
    if !nu.is_finite() {
        nu = hi;
    }

    // value = Σ λ_i |g'_i|² ν² / (ν − λ_i)²
    let value: f64 = (0..n)
        .map(|i| {
            let r = nu / (nu - lambda[i]);
            lambda[i] * g_eig[i].norm_sqr() * r * r
        })
        .sum();
    Ok(value.max(base))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{C64, CMat};

    fn cv(v: &[f64]) -> CVec {
        CVec::from_iterator(v.len(), v.iter().map(|&x| C64::new(x, 0.0)))
    }

    #[test]
    fn identity_zero_center_unit_ball() {
        let m = HermitianMatrix::identity(3);
        let g = cv(&[0.0, 0.0, 0.0]);
        let v = trust_region_quadratic_max(&m, &g, 1.0).unwrap();
        assert!((v - 1.0).abs() < 1e-12, "got {v}");
    }

    #[test]
    fn identity_general_center() {
        let m = HermitianMatrix::identity(4);
        let g = cv(&[1.0, -2.0, 0.5, 0.0]);
        let eps = 0.7;
        let expect = (g.norm() + eps).powi(2);
        let v = trust_region_quadratic_max(&m, &g, eps).unwrap();
        assert!((v - expect).abs() < 1e-10 * expect, "got {v}, want {expect}");
    }

    #[test]
    fn zero_radius_returns_center_value() {
        let m = HermitianMatrix::new(CMat::from_diagonal(&cv(&[2.0, 5.0]))).unwrap();
        let g = cv(&[1.0, 1.0]);
        let v = trust_region_quadratic_max(&m, &g, 0.0).unwrap();
        assert!((v - 7.0).abs() < 1e-12);
    }

    #[test]
    fn hard_case_center_in_low_eigenspace() {
        // g aligned with λ=1 eigenvector, top eigenvalue 4 unused by M g.
        let m = HermitianMatrix::new(CMat::from_diagonal(&cv(&[1.0, 4.0]))).unwrap();
        let g = cv(&[0.1, 0.0]);
        let eps = 1.0;
        // pseudo step along e1: d1 = 0.1*1/(4-1); ‖d‖ small, rest of the
        // budget goes to e2: value = 1*(0.1*4/3)^2 + 4*(eps² − d1²)
        let d1 = 0.1_f64 / 3.0;
        let expect = (0.1_f64 * 4.0 / 3.0).powi(2) + 4.0 * (1.0 - d1 * d1);
        let v = trust_region_quadratic_max(&m, &g, eps).unwrap();
        assert!((v - expect).abs() < 1e-10, "got {v}, want {expect}");
    }

    #[test]
    fn rejects_indefinite() {
        let m = HermitianMatrix::new(CMat::from_diagonal(&cv(&[1.0, -1.0]))).unwrap();
        let g = cv(&[1.0, 1.0]);
        assert!(matches!(
            trust_region_quadratic_max(&m, &g, 1.0),
            Err(LinalgError::NotPsd { .. })
        ));
    }

    #[test]
    fn result_at_least_center_value() {
        let m = HermitianMatrix::new(CMat::from_diagonal(&cv(&[0.5, 2.0, 3.0]))).unwrap();
        let g = cv(&[1.0, 2.0, 3.0]);
        let center: f64 = 0.5 + 2.0 * 4.0 + 3.0 * 9.0;
        let v = trust_region_quadratic_max(&m, &g, 1e-9).unwrap();
        assert!(v >= center);
    }
}
