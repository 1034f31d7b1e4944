use hermitian_linalg::{eig_hermitian, HermitianMatrix};
use robust_constraints::{
    assemble_power_scaling_problem, assemble_relaxed_problem, extract_power_scaling_solution,
    synthetic_solution, BeamformingSolution, NetworkChannels, QosSpec,
};
use sdp_core::{check_solution, solve_sdp, SolveStatus, SolverConfig};
use thiserror::Error;

use crate::dual::DualBundle;

/// Relative eigenvalue cut for numerical rank decisions; sits a decade
/// above interior-point solution noise.
pub const DEFAULT_RANK_TOL: f64 = 1e-7;

/// λ₂/λ₁ threshold below which a beamforming matrix already counts as
/// rank-one; matches the output contract of the construction, so inputs at
/// this level pass through untouched.
pub const RANK_ONE_FLAG_TOL: f64 = 1e-6;

/// Eigenvalues below this fraction of λ₁ are interior-point noise rather
/// than structure: they move into the noise covariance unconditionally,
/// which keeps the total power bit-exact and perturbs constraints only at
/// the solver's own noise level.
pub const NOISE_MASS_TOL: f64 = 3e-6;

/// Null-direction classification: `‖A v‖ <= factor·(1 + λ_max(A))`.
const CLASS_TOL_FACTOR: f64 = 1e-6;

/// Accepted relative power change and constraint violation of the
/// constructed solution.
const POWER_TOL: f64 = 1e-6;
const FEAS_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Error)]
pub enum RecoveryError {
    #[error("rank-one construction failed: {0}")]
    ConstructionFailed(String),

    #[error("scheme infeasible: power scaling returned {status:?}")]
    SchemeInfeasible { status: SolveStatus },

    #[error(transparent)]
    Assembly(#[from] robust_constraints::AssemblyError),

    #[error(transparent)]
    Sdp(#[from] sdp_core::SdpError),

    #[error(transparent)]
    Linalg(#[from] hermitian_linalg::LinalgError),
}

/// Count of eigenvalues above `tol·λ_max`; PSD inputs only.
pub fn numerical_rank(w: &HermitianMatrix, tol: f64) -> usize {
    hermitian_linalg::numerical_rank(w, tol)
}

/// The KKT matrix whose null space spans the noise-interchangeable
/// directions of `W_{l,k}`:
/// `A = Y* + (γ*_{l,k} − Σ_{t<l} γ*_{t,k}·Γ_req_{t,k})·h_k h_kᴴ`.
pub fn compute_a_matrix(
    l: usize,
    k: usize,
    duals: &DualBundle,
    ch: &NetworkChannels,
    q: &QosSpec,
) -> HermitianMatrix {
    let mut c = duals.gamma[k][l];
    for t in 0..l {
        if let Some(g) = q.gamma_req[k][t] {
            c -= duals.gamma[k][t] * g;
        }
    }
    let h_k = HermitianMatrix::outer(&ch.h[k]);
    duals.y[k][l].axpy(c, &h_k)
}

/// Per-pair record of what the construction did, including the numerical
/// checks backing the structure result (the `H_k Υ = 0` property and the
/// nonvanishing of the `c·H_k` term).
#[derive(Debug, Clone)]
pub struct PairDiagnostic {
    pub k: usize,
    pub l: usize,
    pub rank_before: usize,
    /// `γ* − Σ γ*Γ`; expected nonzero whenever a reduction is needed.
    pub c_coefficient: f64,
    /// max over null directions of `‖H_k φ‖ / ‖H_k‖`.
    pub h_null_residual: f64,
    pub used_fallback: bool,
}

#[derive(Debug, Clone)]
pub struct RecoveryOutcome {
    pub solution: BeamformingSolution,
    pub diagnostics: Vec<PairDiagnostic>,
    pub used_fallback: bool,
}

/// Build a rank-one optimal solution from the relaxed optimum and its
/// duals. Direct path: eigendecompose each offending `W`, classify its
/// eigenvectors against `null(A)`, and move the null-space mass into the
/// artificial-noise covariance — power and feasibility are preserved
/// exactly. If classification does not leave a single signal direction,
/// fall back to re-optimizing powers along the classified directions
/// (a convex solve that attains the same objective).
pub fn construct_rank_one_solution(
    primal: &BeamformingSolution,
    duals: &DualBundle,
    ch: &NetworkChannels,
    q: &QosSpec,
    cfg: &SolverConfig,
) -> Result<RecoveryOutcome, RecoveryError> {
    let mut w = primal.w.clone();
    let mut v = primal.v.as_matrix().clone();
    let mut diagnostics = Vec::new();
    let mut fallback_pairs: Vec<(usize, usize)> = Vec::new();

    for k in 0..w.len() {
        for l in 0..w[k].len() {
            if primal.is_rank_one(k, l, RANK_ONE_FLAG_TOL) {
                continue;
            }
            let rank = numerical_rank(&w[k][l], DEFAULT_RANK_TOL);
            let a = compute_a_matrix(l, k, duals, ch, q);
            let eig_a = eig_hermitian(&a);
            let a_scale = eig_a
                .eigenvalues
                .iter()
                .fold(0.0_f64, |acc, &x| acc.max(x.abs()));
            let class_tol = CLASS_TOL_FACTOR * (1.0 + a_scale);

            let eig_w = eig_hermitian(&w[k][l]);
            let n = eig_w.eigenvalues.len();
            let lmax_w = eig_w.eigenvalues[n - 1];
            let h_norm = ch.h[k].norm();

            let mut signal: Vec<(f64, hermitian_linalg::CVec)> = Vec::new();
            let mut moved = Vec::new();
            let mut h_null_residual = 0.0_f64;
            for i in 0..n {
                let lam = eig_w.eigenvalues[i];
                if lam <= RANK_ONE_FLAG_TOL * lmax_w {
                    continue;
                }
                let vec = eig_w.eigenvectors.column(i).clone_owned();
                if lam <= NOISE_MASS_TOL * lmax_w {
                    moved.push((lam, vec));
                    continue;
                }
                let a_resid = (a.as_matrix() * &vec).norm();
                if a_resid <= class_tol {
                    let h_resid = (ch.h[k].adjoint() * &vec).norm() / h_norm.max(1e-300);
                    h_null_residual = h_null_residual.max(h_resid);
                    moved.push((lam, vec));
                } else {
                    signal.push((lam, vec));
                }
            }

            let c_coeff = {
                let mut c = duals.gamma[k][l];
                for t in 0..l {
                    if let Some(g) = q.gamma_req[k][t] {
                        c -= duals.gamma[k][t] * g;
                    }
                }
                c
            };

            if signal.len() == 1 {
                for (lam, phi) in &moved {
                    v += phi * phi.adjoint() * hermitian_linalg::C64::new(*lam, 0.0);
                }
                let (f, u) = &signal[0];
                w[k][l] = HermitianMatrix::outer(u).scale(*f);
                diagnostics.push(PairDiagnostic {
                    k,
                    l,
                    rank_before: rank,
                    c_coefficient: c_coeff,
                    h_null_residual,
                    used_fallback: false,
                });
            } else {
                fallback_pairs.push((k, l));
                diagnostics.push(PairDiagnostic {
                    k,
                    l,
                    rank_before: rank,
                    c_coefficient: c_coeff,
                    h_null_residual,
                    used_fallback: true,
                });
            }
        }
    }

    // Audit a candidate: power preserved, constraints satisfied, rank one.
    let assembled = assemble_relaxed_problem(ch, q)?;
    let verify = |solution: &BeamformingSolution| -> Result<(), String> {
        let rel_power = (solution.total_power - primal.total_power).abs()
            / primal.total_power.max(1e-300);
        if rel_power > POWER_TOL {
            return Err(format!("power changed by {rel_power:.3e} (relative)"));
        }
        let synthetic = synthetic_solution(&assembled.problem, &assembled.index, solution);
        let report = check_solution(&assembled.problem, &synthetic);
        let scale = solution.total_power.max(1.0);
        if report.max_relative_violation() > FEAS_TOL * scale {
            return Err(format!(
                "constraint violation {:.3e}",
                report.max_relative_violation()
            ));
        }
        if !solution.all_rank_one(RANK_ONE_FLAG_TOL) {
            return Err("residual rank above one".into());
        }
        Ok(())
    };

    let mut used_fallback = false;
    let mut candidate = if fallback_pairs.is_empty() {
        let v = HermitianMatrix::from_nearly_hermitian(&v)?;
        let total_power = BeamformingSolution::compute_total_power(&w, &v);
        Some(BeamformingSolution {
            w,
            v,
            omega: primal.omega.clone(),
            delta: primal.delta.clone(),
            total_power,
        })
    } else {
        None
    };
    let mut direct_err = None;
    if let Some(sol) = &candidate {
        if let Err(e) = verify(sol) {
            direct_err = Some(e);
            candidate = None;
        }
    }

    let solution = match candidate {
        Some(sol) => sol,
        None => {
            // Convex re-solve: fix every pair to a rank-one direction
            // (signal direction from the null-space split where ambiguous)
            // and re-optimize powers and the noise covariance. The direct
            // construction is a feasible point of this program, so its
            // optimum matches the relaxed objective.
            used_fallback = true;
            let directions = classified_directions(primal, duals, ch, q)?;
            let ps = assemble_power_scaling_problem(&directions, ch, q)?;
            let sol = solve_sdp(&ps.problem, cfg)?;
            if sol.status != SolveStatus::Optimal {
                return Err(RecoveryError::ConstructionFailed(format!(
                    "fallback power scaling returned {:?} (direct path: {})",
                    sol.status,
                    direct_err.unwrap_or_else(|| "not applicable".into())
                )));
            }
            let sol = extract_power_scaling_solution(&sol, &ps.index, &directions);
            verify(&sol).map_err(RecoveryError::ConstructionFailed)?;
            sol
        }
    };

    Ok(RecoveryOutcome {
        solution,
        diagnostics,
        used_fallback,
    })
}

/// Rank-one directions for every pair: the signal direction from the
/// null(A)-complement where a reduction is needed, the principal
/// eigenvector otherwise.
fn classified_directions(
    primal: &BeamformingSolution,
    duals: &DualBundle,
    ch: &NetworkChannels,
    q: &QosSpec,
) -> Result<Vec<Vec<HermitianMatrix>>, RecoveryError> {
    let mut out = Vec::with_capacity(primal.w.len());
    for k in 0..primal.w.len() {
        let mut row = Vec::with_capacity(primal.w[k].len());
        for l in 0..primal.w[k].len() {
            let wm = &primal.w[k][l];
            let dir = if primal.is_rank_one(k, l, RANK_ONE_FLAG_TOL) {
                principal_direction(wm, &ch.h[k])
            } else {
                let a = compute_a_matrix(l, k, duals, ch, q);
                let basis = hermitian_linalg::null_space_basis(&a, CLASS_TOL_FACTOR)?;
                // project W onto the complement of null(A), take the top
                // eigenvector of what remains
                let projected = if basis.ncols() == 0 {
                    wm.as_matrix().clone()
                } else {
                    let p_null = &basis * basis.adjoint();
                    let id = hermitian_linalg::CMat::identity(wm.dim(), wm.dim());
                    let p_sig = &id - &p_null;
                    &p_sig * wm.as_matrix() * &p_sig
                };
                let h = HermitianMatrix::from_nearly_hermitian(&projected)?;
                principal_direction(&h, &ch.h[k])
            };
            row.push(dir);
        }
        out.push(row);
    }
    Ok(out)
}

/// Unit-trace rank-one direction along the principal eigenvector; falls
/// back to the user's channel direction for numerically zero matrices.
pub(crate) fn principal_direction(w: &HermitianMatrix, h: &hermitian_linalg::CVec) -> HermitianMatrix {
    let eig = eig_hermitian(w);
    let n = eig.eigenvalues.len();
    if eig.eigenvalues[n - 1] <= 1e-300 {
        let unit = h / hermitian_linalg::C64::new(h.norm(), 0.0);
        return HermitianMatrix::outer(&unit);
    }
    let u = eig.eigenvectors.column(n - 1).clone_owned();
    let unit = &u / hermitian_linalg::C64::new(u.norm(), 0.0);
    HermitianMatrix::outer(&unit)
}
