//! Problem assembly: the relaxed robust design problem, the power-scaling
//! problem used by the suboptimal schemes, and the two baseline variants
//! (single-layer transmission, and non-robust design at the CSI estimate).

use hermitian_linalg::{kron_identity_left, CMat, HermitianMatrix};
use sdp_core::{
    BlockId, ConstraintId, DualValue, LinearExpr, LmiExpr, LmiTerm, Relation, ResidualNorms,
    ScalarId, SdpProblem, SdpSolution, SolveStatus,
};

use crate::lmi::{build_c3bar_lmi, build_c4bar_lmi_impl, c3_lift_map, c4_lift_map};
use crate::types::{BeamformingSolution, NetworkChannels, QosSpec};
use crate::AssemblyError;

/// Deliberate faults for validating that the soundness checks can fail.
#[derive(Debug, Clone, Copy, Default)]
pub struct FaultInjection {
    /// Flip the sign of the beamforming term inside every C̄4 LMI.
    pub c4_sign_flip: bool,
}

/// Variable and constraint handles of an assembled design problem.
#[derive(Debug, Clone)]
pub struct RelaxedIndex {
    pub w_blocks: Vec<Vec<BlockId>>,
    pub v_block: BlockId,
    pub omega: Vec<ScalarId>,
    /// Scaled multipliers δ/ε²; conversions use `eps_sq`.
    pub delta: Vec<Vec<ScalarId>>,
    /// ε² per primary receiver.
    pub eps_sq: Vec<f64>,
    pub c1: Vec<Vec<Option<ConstraintId>>>,
    /// `c2[t][k]`: receiver `t` overhearing layer 1 of receiver `k`.
    pub c2: Vec<Vec<Option<ConstraintId>>>,
    pub c3: Vec<ConstraintId>,
    pub c4: Vec<Vec<ConstraintId>>,
    /// False for the non-robust baseline (no ω/δ multipliers).
    pub robust: bool,
}

#[derive(Debug, Clone)]
pub struct AssembledProblem {
    pub problem: SdpProblem,
    pub index: RelaxedIndex,
}

fn channel_outer(ch: &NetworkChannels, k: usize) -> HermitianMatrix {
    HermitianMatrix::outer(&ch.h[k])
}

/// C1 left-hand side for (receiver k, layer l) minus the SINR-weighted
/// interference; `>= gamma·sigma²` closes the constraint.
fn c1_expr(
    ch: &NetworkChannels,
    q: &QosSpec,
    w_blocks: &[Vec<BlockId>],
    v_block: BlockId,
    h_k: &HermitianMatrix,
    k: usize,
    l: usize,
    gamma: f64,
) -> LinearExpr {
    let mut expr = LinearExpr::new().with_block(w_blocks[k][l], h_k.clone());
    let neg = h_k.scale(-gamma);
    for n in 0..ch.num_secondary() {
        if n == k {
            continue;
        }
        for r in 0..q.layers[n] {
            expr = expr.with_block(w_blocks[n][r], neg.clone());
        }
    }
    for m in (l + 1)..q.layers[k] {
        expr = expr.with_block(w_blocks[k][m], neg.clone());
    }
    expr.with_block(v_block, neg)
}

/// C2 left-hand side: receiver `t` decoding layer 1 of receiver `k`,
/// after cancelling its own signal; `<= gamma_tol·sigma²_t` closes it.
fn c2_expr(
    ch: &NetworkChannels,
    q: &QosSpec,
    w_blocks: &[Vec<BlockId>],
    v_block: BlockId,
    h_t: &HermitianMatrix,
    t: usize,
    k: usize,
) -> LinearExpr {
    let mut expr = LinearExpr::new().with_block(w_blocks[k][0], h_t.clone());
    let neg = h_t.scale(-q.gamma_tol);
    for n in 0..ch.num_secondary() {
        if n == t || n == k {
            continue;
        }
        for r in 0..q.layers[n] {
            expr = expr.with_block(w_blocks[n][r], neg.clone());
        }
    }
    for m in 1..q.layers[k] {
        expr = expr.with_block(w_blocks[k][m], neg.clone());
    }
    expr.with_block(v_block, neg)
}

/// The SDP relaxation of the robust power-minimization problem: C1/C2 as
/// trace inequalities, one C̄3 LMI per primary receiver, one C̄4 LMI per
/// (secondary, primary) pair, and the rank constraints dropped.
pub fn assemble_relaxed_problem(
    ch: &NetworkChannels,
    q: &QosSpec,
) -> Result<AssembledProblem, AssemblyError> {
    assemble_relaxed_problem_with(ch, q, FaultInjection::default())
}

pub fn assemble_relaxed_problem_with(
    ch: &NetworkChannels,
    q: &QosSpec,
    faults: FaultInjection,
) -> Result<AssembledProblem, AssemblyError> {
    ch.validate()?;
    q.validate(ch)?;
    let (kk, jj) = (ch.num_secondary(), ch.num_primary());
    let mut p = SdpProblem::new();

    let w_blocks: Vec<Vec<BlockId>> = (0..kk)
        .map(|k| {
            (0..q.layers[k])
                .map(|l| p.add_psd_block(format!("W_k{}_l{}", k + 1, l + 1), ch.n_t))
                .collect()
        })
        .collect();
    let v_block = p.add_psd_block("V", ch.n_t);
    let omega: Vec<ScalarId> = (0..jj)
        .map(|j| p.add_nonneg_scalar(format!("omega_{}", j + 1)))
        .collect();
    let delta: Vec<Vec<ScalarId>> = (0..kk)
        .map(|k| {
            (0..jj)
                .map(|j| p.add_nonneg_scalar(format!("delta_k{}_j{}", k + 1, j + 1)))
                .collect()
        })
        .collect();

    let mut objective = LinearExpr::new();
    for row in &w_blocks {
        for &w in row {
            objective = objective.with_block(w, HermitianMatrix::identity(ch.n_t));
        }
    }
    objective = objective.with_block(v_block, HermitianMatrix::identity(ch.n_t));
    p.set_objective(objective);

    let h_outer: Vec<HermitianMatrix> = (0..kk).map(|k| channel_outer(ch, k)).collect();

    let mut c1 = vec![vec![None; 0]; kk];
    for k in 0..kk {
        c1[k] = vec![None; q.layers[k]];
        for l in 0..q.layers[k] {
            let Some(gamma) = q.gamma_req[k][l] else {
                continue;
            };
            let expr = c1_expr(ch, q, &w_blocks, v_block, &h_outer[k], k, l, gamma);
            let id = p.add_scalar_constraint(
                format!("C1_k{}_l{}", k + 1, l + 1),
                expr,
                Relation::Ge,
                gamma * ch.sigma_s_sq[k],
            );
            c1[k][l] = Some(id);
        }
    }

    let mut c2 = vec![vec![None; kk]; kk];
    for t in 0..kk {
        for k in 0..kk {
            if t == k {
                continue;
            }
            let expr = c2_expr(ch, q, &w_blocks, v_block, &h_outer[t], t, k);
            let id = p.add_scalar_constraint(
                format!("C2_t{}_k{}", t + 1, k + 1),
                expr,
                Relation::Le,
                q.gamma_tol * ch.sigma_s_sq[t],
            );
            c2[t][k] = Some(id);
        }
    }

    let flat_w: Vec<BlockId> = w_blocks.iter().flatten().copied().collect();
    let mut c3 = Vec::with_capacity(jj);
    for j in 0..jj {
        let lmi = build_c3bar_lmi(&flat_w, v_block, omega[j], &ch.g_hat[j], ch.eps[j], q.p_i[j])?;
        c3.push(p.add_lmi_constraint(format!("C3bar_j{}", j + 1), lmi));
    }
    let mut c4 = vec![Vec::with_capacity(jj); kk];
    for k in 0..kk {
        for j in 0..jj {
            let lmi = build_c4bar_lmi_impl(
                w_blocks[k][0],
                v_block,
                delta[k][j],
                &ch.g_hat[j],
                ch.eps[j],
                q.xi_eav(j, k),
                ch.sigma_pu_sq[j],
                faults.c4_sign_flip,
            )?;
            c4[k].push(p.add_lmi_constraint(format!("C4bar_k{}_j{}", k + 1, j + 1), lmi));
        }
    }

    Ok(AssembledProblem {
        problem: p,
        index: RelaxedIndex {
            w_blocks,
            v_block,
            omega,
            delta,
            eps_sq: ch.eps.iter().map(|e| e * e).collect(),
            c1,
            c2,
            c3,
            c4,
            robust: true,
        },
    })
}

/// Fold per-layer SINR targets into the single-layer equivalent
/// `Γ = Π(1 + Γ_l) − 1`, preserving the total rate of the layered stream.
pub fn fold_single_layer_qos(q: &QosSpec) -> QosSpec {
    let gamma_req: Vec<Vec<Option<f64>>> = q
        .gamma_req
        .iter()
        .map(|row| {
            let folded = row
                .iter()
                .flatten()
                .fold(1.0_f64, |acc, &g| acc * (1.0 + g))
                - 1.0;
            vec![Some(folded)]
        })
        .collect();
    QosSpec {
        layers: vec![1; q.layers.len()],
        gamma_req,
        gamma_tol: q.gamma_tol,
        p_i: q.p_i.clone(),
        r_eav: q.r_eav.clone(),
    }
}

/// Baseline 1: single-layer transmission with the folded SINR targets,
/// same robust machinery otherwise. Returns the folded QoS alongside the
/// problem so evaluation uses consistent targets.
pub fn assemble_baseline1(
    ch: &NetworkChannels,
    q: &QosSpec,
) -> Result<(AssembledProblem, QosSpec), AssemblyError> {
    let folded = fold_single_layer_qos(q);
    let assembled = assemble_relaxed_problem(ch, &folded)?;
    Ok((assembled, folded))
}

/// Baseline 2: treats the CSI estimate as perfect. C3 collapses to a plain
/// trace inequality at `Ĝ`; C4 uses the matrix-inequality bound evaluated
/// at `Ĝ` only, with no S-procedure multipliers.
pub fn assemble_baseline2(
    ch: &NetworkChannels,
    q: &QosSpec,
) -> Result<AssembledProblem, AssemblyError> {
    ch.validate()?;
    q.validate(ch)?;
    let (kk, jj) = (ch.num_secondary(), ch.num_primary());
    let mut p = SdpProblem::new();

    let w_blocks: Vec<Vec<BlockId>> = (0..kk)
        .map(|k| {
            (0..q.layers[k])
                .map(|l| p.add_psd_block(format!("W_k{}_l{}", k + 1, l + 1), ch.n_t))
                .collect()
        })
        .collect();
    let v_block = p.add_psd_block("V", ch.n_t);

    let mut objective = LinearExpr::new();
    for row in &w_blocks {
        for &w in row {
            objective = objective.with_block(w, HermitianMatrix::identity(ch.n_t));
        }
    }
    objective = objective.with_block(v_block, HermitianMatrix::identity(ch.n_t));
    p.set_objective(objective);

    let h_outer: Vec<HermitianMatrix> = (0..kk).map(|k| channel_outer(ch, k)).collect();

    let mut c1 = vec![vec![None; 0]; kk];
    for k in 0..kk {
        c1[k] = vec![None; q.layers[k]];
        for l in 0..q.layers[k] {
            let Some(gamma) = q.gamma_req[k][l] else {
                continue;
            };
            let expr = c1_expr(ch, q, &w_blocks, v_block, &h_outer[k], k, l, gamma);
            let id = p.add_scalar_constraint(
                format!("C1_k{}_l{}", k + 1, l + 1),
                expr,
                Relation::Ge,
                gamma * ch.sigma_s_sq[k],
            );
            c1[k][l] = Some(id);
        }
    }
    let mut c2 = vec![vec![None; kk]; kk];
    for t in 0..kk {
        for k in 0..kk {
            if t == k {
                continue;
            }
            let expr = c2_expr(ch, q, &w_blocks, v_block, &h_outer[t], t, k);
            let id = p.add_scalar_constraint(
                format!("C2_t{}_k{}", t + 1, k + 1),
                expr,
                Relation::Le,
                q.gamma_tol * ch.sigma_s_sq[t],
            );
            c2[t][k] = Some(id);
        }
    }

    // C3 at the estimate: tr(Ĝᴴ (V + ΣW) Ĝ) = ⟨ĜĜᴴ, V + ΣW⟩ <= P_I.
    let mut c3 = Vec::with_capacity(jj);
    for j in 0..jj {
        let gg = HermitianMatrix::from_nearly_hermitian(&(&ch.g_hat[j] * ch.g_hat[j].adjoint()))?;
        let mut expr = LinearExpr::new();
        for row in &w_blocks {
            for &w in row {
                expr = expr.with_block(w, gg.clone());
            }
        }
        expr = expr.with_block(v_block, gg.clone());
        c3.push(p.add_scalar_constraint(
            format!("C3_j{}", j + 1),
            expr,
            Relation::Le,
            q.p_i[j],
        ));
    }

    // C4 at the estimate: ξ(ĜᴴVĜ + σ²I) − ĜᴴW₁Ĝ ⪰ 0.
    let mut c4 = vec![Vec::with_capacity(jj); kk];
    for k in 0..kk {
        for j in 0..jj {
            let xi = q.xi_eav(j, k);
            if !(xi > 0.0) {
                return Err(AssemblyError::InvalidQos(format!(
                    "C4 requires xi > 0, got {xi}"
                )));
            }
            let mut constant = CMat::zeros(ch.n_pr, ch.n_pr);
            for i in 0..ch.n_pr {
                constant[(i, i)] = hermitian_linalg::C64::new(xi * ch.sigma_pu_sq[j], 0.0);
            }
            let lmi = LmiExpr::new(HermitianMatrix::new(constant)?)
                .with_term(LmiTerm::BlockCongruence {
                    block: v_block,
                    p: ch.g_hat[j].clone(),
                    lift: 1,
                    scale: xi,
                })
                .with_term(LmiTerm::BlockCongruence {
                    block: w_blocks[k][0],
                    p: ch.g_hat[j].clone(),
                    lift: 1,
                    scale: -1.0,
                });
            c4[k].push(p.add_lmi_constraint(format!("C4_k{}_j{}", k + 1, j + 1), lmi));
        }
    }

    Ok(AssembledProblem {
        problem: p,
        index: RelaxedIndex {
            w_blocks,
            v_block,
            omega: Vec::new(),
            delta: vec![Vec::new(); kk],
            eps_sq: Vec::new(),
            c1,
            c2,
            c3,
            c4,
            robust: false,
        },
    })
}

/// Variable handles of the power-scaling problem.
#[derive(Debug, Clone)]
pub struct PowerScalingIndex {
    pub p_scalars: Vec<Vec<ScalarId>>,
    pub v_block: BlockId,
    pub omega: Vec<ScalarId>,
    /// Scaled multipliers δ/ε²; conversions use `eps_sq`.
    pub delta: Vec<Vec<ScalarId>>,
    pub eps_sq: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct AssembledPowerScaling {
    pub problem: SdpProblem,
    pub index: PowerScalingIndex,
}

const DIRECTION_TRACE_TOL: f64 = 1e-6;
const DIRECTION_RANK_TOL: f64 = 1e-6;

/// Power-scaling problem: beamforming directions fixed to the given
/// unit-trace rank-one matrices, powers `P` and the noise covariance `V`
/// re-optimized under the same constraint set.
pub fn assemble_power_scaling_problem(
    directions: &[Vec<HermitianMatrix>],
    ch: &NetworkChannels,
    q: &QosSpec,
) -> Result<AssembledPowerScaling, AssemblyError> {
    ch.validate()?;
    q.validate(ch)?;
    let (kk, jj) = (ch.num_secondary(), ch.num_primary());
    if directions.len() != kk {
        return Err(AssemblyError::InvalidDirection(
            "one direction row per secondary receiver required".into(),
        ));
    }
    for k in 0..kk {
        if directions[k].len() != q.layers[k] {
            return Err(AssemblyError::InvalidDirection(format!(
                "receiver {k} needs {} directions",
                q.layers[k]
            )));
        }
        for (l, d) in directions[k].iter().enumerate() {
            if d.dim() != ch.n_t {
                return Err(AssemblyError::InvalidDirection(format!(
                    "direction ({k},{l}) has dim {}, expected {}",
                    d.dim(),
                    ch.n_t
                )));
            }
            if (d.trace() - 1.0).abs() > DIRECTION_TRACE_TOL {
                return Err(AssemblyError::InvalidDirection(format!(
                    "direction ({k},{l}) has trace {}, expected unit trace",
                    d.trace()
                )));
            }
            let eig = hermitian_linalg::eig_hermitian(d);
            let n = eig.eigenvalues.len();
            let l1 = eig.eigenvalues[n - 1];
            if n > 1 && (l1 <= 0.0 || eig.eigenvalues[n - 2] > DIRECTION_RANK_TOL * l1) {
                return Err(AssemblyError::InvalidDirection(format!(
                    "direction ({k},{l}) is not rank-one"
                )));
            }
        }
    }

    let mut p = SdpProblem::new();
    let v_block = p.add_psd_block("V", ch.n_t);
    let p_scalars: Vec<Vec<ScalarId>> = (0..kk)
        .map(|k| {
            (0..q.layers[k])
                .map(|l| p.add_nonneg_scalar(format!("P_k{}_l{}", k + 1, l + 1)))
                .collect()
        })
        .collect();
    let omega: Vec<ScalarId> = (0..jj)
        .map(|j| p.add_nonneg_scalar(format!("omega_{}", j + 1)))
        .collect();
    let delta: Vec<Vec<ScalarId>> = (0..kk)
        .map(|k| {
            (0..jj)
                .map(|j| p.add_nonneg_scalar(format!("delta_k{}_j{}", k + 1, j + 1)))
                .collect()
        })
        .collect();

    // Objective: Σ P (directions are unit trace) + tr(V).
    let mut objective = LinearExpr::new().with_block(v_block, HermitianMatrix::identity(ch.n_t));
    for row in &p_scalars {
        for &ps in row {
            objective = objective.with_scalar(ps, 1.0);
        }
    }
    p.set_objective(objective);

    let h_outer: Vec<HermitianMatrix> = (0..kk).map(|k| channel_outer(ch, k)).collect();
    // gain[k][l][t] = tr(H_t · Ŵ_{l,k})
    let gain = |t: usize, k: usize, l: usize| -> f64 {
        hermitian_linalg::inner(h_outer[t].as_matrix(), directions[k][l].as_matrix())
    };

    for k in 0..kk {
        for l in 0..q.layers[k] {
            let Some(gamma) = q.gamma_req[k][l] else {
                continue;
            };
            let mut expr = LinearExpr::new().with_scalar(p_scalars[k][l], gain(k, k, l));
            for n in 0..kk {
                if n == k {
                    continue;
                }
                for r in 0..q.layers[n] {
                    expr = expr.with_scalar(p_scalars[n][r], -gamma * gain(k, n, r));
                }
            }
            for m in (l + 1)..q.layers[k] {
                expr = expr.with_scalar(p_scalars[k][m], -gamma * gain(k, k, m));
            }
            expr = expr.with_block(v_block, h_outer[k].scale(-gamma));
            p.add_scalar_constraint(
                format!("C1_k{}_l{}", k + 1, l + 1),
                expr,
                Relation::Ge,
                gamma * ch.sigma_s_sq[k],
            );
        }
    }
    for t in 0..kk {
        for k in 0..kk {
            if t == k {
                continue;
            }
            let mut expr = LinearExpr::new().with_scalar(p_scalars[k][0], gain(t, k, 0));
            for n in 0..kk {
                if n == t || n == k {
                    continue;
                }
                for r in 0..q.layers[n] {
                    expr = expr.with_scalar(p_scalars[n][r], -q.gamma_tol * gain(t, n, r));
                }
            }
            for m in 1..q.layers[k] {
                expr = expr.with_scalar(p_scalars[k][m], -q.gamma_tol * gain(t, k, m));
            }
            expr = expr.with_block(v_block, h_outer[t].scale(-q.gamma_tol));
            p.add_scalar_constraint(
                format!("C2_t{}_k{}", t + 1, k + 1),
                expr,
                Relation::Le,
                q.gamma_tol * ch.sigma_s_sq[t],
            );
        }
    }

    for j in 0..jj {
        if !(ch.eps[j] > 0.0) {
            return Err(AssemblyError::InvalidChannels(
                "power scaling requires positive CSI radii".into(),
            ));
        }
        let u = c3_lift_map(&ch.g_hat[j]);
        let dim = ch.n_pr * ch.n_t + 1;
        let mut constant = CMat::zeros(dim, dim);
        constant[(dim - 1, dim - 1)] = hermitian_linalg::C64::new(q.p_i[j], 0.0);
        let mut omega_coeff = CMat::zeros(dim, dim);
        for i in 0..dim - 1 {
            omega_coeff[(i, i)] = hermitian_linalg::C64::new(1.0, 0.0);
        }
        omega_coeff[(dim - 1, dim - 1)] =
            hermitian_linalg::C64::new(-ch.eps[j] * ch.eps[j], 0.0);
        let mut lmi =
            LmiExpr::new(HermitianMatrix::new(constant)?).with_term(LmiTerm::ScalarCoeff {
                scalar: omega[j],
                coeff: HermitianMatrix::new(omega_coeff)?,
            });
        lmi = lmi.with_term(LmiTerm::BlockCongruence {
            block: v_block,
            p: u.clone(),
            lift: ch.n_pr,
            scale: -1.0,
        });
        for k in 0..kk {
            for l in 0..q.layers[k] {
                let lifted = kron_identity_left(ch.n_pr, directions[k][l].as_matrix());
                let coeff = u.adjoint() * &lifted * &u * hermitian_linalg::C64::new(-1.0, 0.0);
                lmi = lmi.with_term(LmiTerm::ScalarCoeff {
                    scalar: p_scalars[k][l],
                    coeff: HermitianMatrix::from_nearly_hermitian(&coeff)?,
                });
            }
        }
        p.add_lmi_constraint(format!("C3bar_j{}", j + 1), lmi);
    }

    for k in 0..kk {
        for j in 0..jj {
            let xi = q.xi_eav(j, k);
            let r = c4_lift_map(&ch.g_hat[j]);
            let dim = ch.n_pr + ch.n_t;
            let mut constant = CMat::zeros(dim, dim);
            for i in 0..ch.n_pr {
                constant[(i, i)] = hermitian_linalg::C64::new(xi * ch.sigma_pu_sq[j], 0.0);
            }
            let mut delta_coeff = CMat::zeros(dim, dim);
            for i in 0..ch.n_pr {
                delta_coeff[(i, i)] =
                    hermitian_linalg::C64::new(-(ch.eps[j] * ch.eps[j]), 0.0);
            }
            for i in ch.n_pr..dim {
                delta_coeff[(i, i)] = hermitian_linalg::C64::new(1.0, 0.0);
            }
            let w_coeff = r.adjoint() * directions[k][0].as_matrix() * &r
                * hermitian_linalg::C64::new(-1.0, 0.0);
            let lmi = LmiExpr::new(HermitianMatrix::new(constant)?)
                .with_term(LmiTerm::ScalarCoeff {
                    scalar: delta[k][j],
                    coeff: HermitianMatrix::new(delta_coeff)?,
                })
                .with_term(LmiTerm::BlockCongruence {
                    block: v_block,
                    p: r,
                    lift: 1,
                    scale: xi,
                })
                .with_term(LmiTerm::ScalarCoeff {
                    scalar: p_scalars[k][0],
                    coeff: HermitianMatrix::from_nearly_hermitian(&w_coeff)?,
                });
            p.add_lmi_constraint(format!("C4bar_k{}_j{}", k + 1, j + 1), lmi);
        }
    }

    Ok(AssembledPowerScaling {
        problem: p,
        index: PowerScalingIndex {
            p_scalars,
            v_block,
            omega,
            delta,
            eps_sq: ch.eps.iter().map(|e| e * e).collect(),
        },
    })
}

/// Read a [`BeamformingSolution`] out of a solved design problem.
pub fn extract_solution(sol: &SdpSolution, idx: &RelaxedIndex) -> BeamformingSolution {
    let w: Vec<Vec<HermitianMatrix>> = idx
        .w_blocks
        .iter()
        .map(|row| row.iter().map(|b| sol.blocks[b.index()].clone()).collect())
        .collect();
    let v = sol.blocks[idx.v_block.index()].clone();
    let omega = idx.omega.iter().map(|s| sol.scalars[s.index()]).collect();
    // the stored multiplier is δ/ε²; report the paper-facing δ
    let delta = idx
        .delta
        .iter()
        .map(|row| {
            row.iter()
                .zip(idx.eps_sq.iter())
                .map(|(s, e2)| sol.scalars[s.index()] * e2)
                .collect()
        })
        .collect();
    let total_power = BeamformingSolution::compute_total_power(&w, &v);
    BeamformingSolution {
        w,
        v,
        omega,
        delta,
        total_power,
    }
}

/// Compose the rank-one solution of a power-scaling solve: `W = P·Ŵ`.
pub fn extract_power_scaling_solution(
    sol: &SdpSolution,
    idx: &PowerScalingIndex,
    directions: &[Vec<HermitianMatrix>],
) -> BeamformingSolution {
    let w: Vec<Vec<HermitianMatrix>> = idx
        .p_scalars
        .iter()
        .zip(directions.iter())
        .map(|(ps_row, d_row)| {
            ps_row
                .iter()
                .zip(d_row.iter())
                .map(|(ps, d)| d.scale(sol.scalars[ps.index()]))
                .collect()
        })
        .collect();
    let v = sol.blocks[idx.v_block.index()].clone();
    let omega = idx.omega.iter().map(|s| sol.scalars[s.index()]).collect();
    let delta = idx
        .delta
        .iter()
        .map(|row| {
            row.iter()
                .zip(idx.eps_sq.iter())
                .map(|(s, e2)| sol.scalars[s.index()] * e2)
                .collect()
        })
        .collect();
    let total_power = BeamformingSolution::compute_total_power(&w, &v);
    BeamformingSolution {
        w,
        v,
        omega,
        delta,
        total_power,
    }
}

/// Pack a beamforming design back into solution form so the generic
/// residual checker can audit it against an assembled problem.
pub fn synthetic_solution(
    problem: &SdpProblem,
    idx: &RelaxedIndex,
    bf: &BeamformingSolution,
) -> SdpSolution {
    let mut blocks = vec![HermitianMatrix::zeros(1); problem.num_blocks()];
    for (k, row) in idx.w_blocks.iter().enumerate() {
        for (l, b) in row.iter().enumerate() {
            blocks[b.index()] = bf.w[k][l].clone();
        }
    }
    blocks[idx.v_block.index()] = bf.v.clone();
    let mut scalars = vec![0.0; problem.num_scalars()];
    for (j, s) in idx.omega.iter().enumerate() {
        scalars[s.index()] = bf.omega[j];
    }
    for (k, row) in idx.delta.iter().enumerate() {
        for (j, s) in row.iter().enumerate() {
            scalars[s.index()] = bf.delta[k][j] / idx.eps_sq[j].max(f64::MIN_POSITIVE);
        }
    }
    let block_duals = blocks
        .iter()
        .map(|b| HermitianMatrix::zeros(b.dim()))
        .collect();
    let scalar_duals = vec![0.0; problem.num_scalars()];
    let constraint_duals = (0..problem.num_constraints())
        .map(|_| DualValue::Scalar(0.0))
        .collect();
    SdpSolution {
        status: SolveStatus::Optimal,
        blocks,
        scalars,
        block_duals,
        scalar_duals,
        constraint_duals,
        objective_value: bf.total_power,
        dual_objective_value: bf.total_power,
        duality_gap: 0.0,
        residuals: ResidualNorms::default(),
        iterations: 0,
    }
}
