//! S-procedure LMI builders for the two robust constraint families.
//!
//! The interference-temperature constraint over the CSI ball becomes one
//! LMI of dimension `n_pr·n_t + 1` per primary receiver: with
//! `ĝ = vec(Ĝ)`, `U = [I, ĝ]` and the Kronecker lifts `I ⊗ W`, `I ⊗ V`,
//!
//! `S = ω·diag(I, −ε²) + P_I·e eᴴ − Uᴴ (I ⊗ (V + Σ W)) U ⪰ 0`.
//!
//! The eavesdropper-rate constraint becomes one LMI of dimension
//! `n_pr + n_t` per (receiver, primary) pair: with `R = [Ĝ, I]`,
//!
//! `S = ξ·Rᴴ V R − Rᴴ W₁ R + δ·diag(−I_pr, I/ε²) + ξσ²·diag(I_pr, 0) ⪰ 0`.

use hermitian_linalg::{C64, CMat, HermitianMatrix};
use sdp_core::{BlockId, LmiExpr, LmiTerm, ScalarId};

use crate::AssemblyError;

/// `[I_{n_pr·n_t}, vec(Ĝ)]`, the S-procedure border map for C̄3.
pub(crate) fn c3_lift_map(g_hat: &CMat) -> CMat {
    let (n_t, n_pr) = g_hat.shape();
    let dim = n_t * n_pr;
    let mut u = CMat::zeros(dim, dim + 1);
    for i in 0..dim {
        u[(i, i)] = C64::new(1.0, 0.0);
    }
    let g_vec = hermitian_linalg::vectorize(g_hat);
    for i in 0..dim {
        u[(i, dim)] = g_vec[i];
    }
    u
}

/// `[Ĝ, I_{n_t}]`, the quadratic-matrix-inequality border map for C̄4.
pub(crate) fn c4_lift_map(g_hat: &CMat) -> CMat {
    let (n_t, n_pr) = g_hat.shape();
    let mut r = CMat::zeros(n_t, n_pr + n_t);
    r.view_mut((0, 0), (n_t, n_pr)).copy_from(g_hat);
    for i in 0..n_t {
        r[(i, n_pr + i)] = C64::new(1.0, 0.0);
    }
    r
}

/// Robust interference-temperature LMI for one primary receiver.
///
/// Any `(W, V, ω ≥ 0)` satisfying the returned cone keeps the received
/// interference below `p_i` for every channel error in the ε-ball.
pub fn build_c3bar_lmi(
    w_refs: &[BlockId],
    v_ref: BlockId,
    omega_ref: ScalarId,
    g_hat_j: &CMat,
    eps_j: f64,
    p_i_j: f64,
) -> Result<LmiExpr, AssemblyError> {
    if !(eps_j > 0.0) {
        return Err(AssemblyError::InvalidChannels(format!(
            "C3 LMI requires a positive CSI radius, got {eps_j}"
        )));
    }
    let (n_t, n_pr) = g_hat_j.shape();
    if n_t == 0 || n_pr == 0 {
        return Err(AssemblyError::DimensionMismatch(
            "estimated channel must be nonempty".into(),
        ));
    }
    let dim = n_pr * n_t + 1;

    let mut constant = CMat::zeros(dim, dim);
    constant[(dim - 1, dim - 1)] = C64::new(p_i_j, 0.0);

    let mut omega_coeff = CMat::zeros(dim, dim);
    for i in 0..dim - 1 {
        omega_coeff[(i, i)] = C64::new(1.0, 0.0);
    }
    omega_coeff[(dim - 1, dim - 1)] = C64::new(-eps_j * eps_j, 0.0);

    let u = c3_lift_map(g_hat_j);
    let mut lmi = LmiExpr::new(HermitianMatrix::new(constant)?).with_term(LmiTerm::ScalarCoeff {
        scalar: omega_ref,
        coeff: HermitianMatrix::new(omega_coeff)?,
    });
    for &w in w_refs {
        lmi = lmi.with_term(LmiTerm::BlockCongruence {
            block: w,
            p: u.clone(),
            lift: n_pr,
            scale: -1.0,
        });
    }
    lmi = lmi.with_term(LmiTerm::BlockCongruence {
        block: v_ref,
        p: u,
        lift: n_pr,
        scale: -1.0,
    });
    Ok(lmi)
}

/// Robust eavesdropper-rate LMI for one (secondary k, primary j) pair.
///
/// For rank-one `W₁`, feasibility with some `δ ≥ 0` caps the primary
/// receiver's decoding rate for layer 1 of receiver `k` at `log2(1 + ξ)`
/// over the whole CSI ball.
pub fn build_c4bar_lmi(
    w1k_ref: BlockId,
    v_ref: BlockId,
    delta_ref: ScalarId,
    g_hat_j: &CMat,
    eps_j: f64,
    xi: f64,
    sigma_pu_sq_j: f64,
) -> Result<LmiExpr, AssemblyError> {
    build_c4bar_lmi_impl(
        w1k_ref,
        v_ref,
        delta_ref,
        g_hat_j,
        eps_j,
        xi,
        sigma_pu_sq_j,
        false,
    )
}

/// Internal variant with a deliberate sign fault on the beamforming term,
/// used by the validation suite to prove the soundness checks can fail.
#[doc(hidden)]
#[allow(clippy::too_many_arguments)]
pub fn build_c4bar_lmi_impl(
    w1k_ref: BlockId,
    v_ref: BlockId,
    delta_ref: ScalarId,
    g_hat_j: &CMat,
    eps_j: f64,
    xi: f64,
    sigma_pu_sq_j: f64,
    inject_sign_flip: bool,
) -> Result<LmiExpr, AssemblyError> {
    if !(xi > 0.0) {
        return Err(AssemblyError::InvalidQos(format!(
            "C4 LMI requires xi > 0 (positive eavesdropper rate limit), got {xi}"
        )));
    }
    if !(eps_j > 0.0) {
        return Err(AssemblyError::InvalidChannels(format!(
            "C4 LMI requires a positive CSI radius, got {eps_j}"
        )));
    }
    let (n_t, n_pr) = g_hat_j.shape();
    let dim = n_pr + n_t;

    let mut constant = CMat::zeros(dim, dim);
    for i in 0..n_pr {
        constant[(i, i)] = C64::new(xi * sigma_pu_sq_j, 0.0);
    }

    // The stored multiplier is δ' = δ/ε²: with the raw δ the unit top-left
    // coefficient anchors equilibration while the surrounding entries live
    // at channel-gain scale, leaving the cone numerically unbalanced.
    let mut delta_coeff = CMat::zeros(dim, dim);
    for i in 0..n_pr {
        delta_coeff[(i, i)] = C64::new(-(eps_j * eps_j), 0.0);
    }
    for i in n_pr..dim {
        delta_coeff[(i, i)] = C64::new(1.0, 0.0);
    }

    let r = c4_lift_map(g_hat_j);
    let w_scale = if inject_sign_flip { 1.0 } else { -1.0 };
    Ok(LmiExpr::new(HermitianMatrix::new(constant)?)
        .with_term(LmiTerm::ScalarCoeff {
            scalar: delta_ref,
            coeff: HermitianMatrix::new(delta_coeff)?,
        })
        .with_term(LmiTerm::BlockCongruence {
            block: v_ref,
            p: r.clone(),
            lift: 1,
            scale: xi,
        })
        .with_term(LmiTerm::BlockCongruence {
            block: w1k_ref,
            p: r,
            lift: 1,
            scale: w_scale,
        }))
}
