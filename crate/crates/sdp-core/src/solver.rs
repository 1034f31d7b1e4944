//! Primal-dual path-following interior-point method with Nesterov–Todd
//! scaling and a Mehrotra predictor-corrector step, operating natively on
//! complex Hermitian cones.
//!
//! Canonical form after compilation: minimize cᵀx subject to
//! `S_i(x) = F0_i + Σ_a x_a E_{i,a} ∈ K_i`, with K_i a Hermitian PSD cone,
//! the nonnegative orthant, or the zero cone (equalities). Slacks `s_i`
//! track the cone contents and duals `z_i` live in the same cones; each
//! Newton step eliminates (ds, dz) and solves an n×n Gram system in dx.

use hermitian_linalg::{hermitian_part, C64, CMat, HermitianMatrix};
use nalgebra::{Cholesky, DMatrix, DVector};

use crate::compile::{compile, Compiled, MatCone, MatConeOrigin, RowOrigin};
use crate::problem::{SdpProblem, SolverConfig};
use crate::solution::{DualValue, ResidualNorms, SdpSolution, SolveStatus};
use crate::SdpError;

const EQUILIBRATE_SWEEPS: usize = 14;

fn trace_enabled() -> bool {
    static ENABLED: std::sync::OnceLock<bool> = std::sync::OnceLock::new();
    *ENABLED.get_or_init(|| std::env::var("SDP_CORE_TRACE").is_ok())
}
const STALL_LIMIT: usize = 6;
const DIVERGENCE_GUARD: f64 = 1e9;

/// Solve a block-structured SDP, returning both primal and dual data.
///
/// Degenerate instances can stall an interior-point trajectory just shy of
/// the tolerances; a failed attempt is deterministically retried from
/// rescaled starting points before reporting failure.
pub fn solve_sdp(problem: &SdpProblem, config: &SolverConfig) -> Result<SdpSolution, SdpError> {
    problem.validate()?;
    config.validate()?;
    let mut compiled = compile(problem);
    compiled.equilibrate(EQUILIBRATE_SWEEPS);

    let mut best: Option<Outcome> = None;
    for (init_scale, step_fraction) in [
        (10.0, config.step_fraction),
        (100.0, config.step_fraction),
        (3.0, 0.9_f64.min(config.step_fraction)),
    ] {
        let attempt_cfg = SolverConfig {
            step_fraction,
            ..config.clone()
        };
        let outcome = ipm(&compiled, &attempt_cfg, init_scale);
        let done = matches!(
            outcome.status,
            SolveStatus::Optimal | SolveStatus::Infeasible | SolveStatus::Unbounded
        );
        match &best {
            None => best = Some(outcome),
            Some(b) if rank_status(&b.status) < rank_status(&outcome.status) => {
                best = Some(outcome)
            }
            _ => {}
        }
        if done {
            break;
        }
    }
    Ok(extract(problem, &compiled, best.expect("at least one attempt")))
}

fn rank_status(s: &SolveStatus) -> u8 {
    match s {
        SolveStatus::Optimal | SolveStatus::Infeasible | SolveStatus::Unbounded => 2,
        SolveStatus::MaxIterations => 1,
        SolveStatus::NumericalFailure => 0,
    }
}

#[derive(Clone)]
struct IpmState {
    x: DVector<f64>,
    s_mat: Vec<CMat>,
    z_mat: Vec<CMat>,
    s_nn: DVector<f64>,
    z_nn: DVector<f64>,
    z_eq: DVector<f64>,
}

struct Outcome {
    status: SolveStatus,
    state: IpmState,
    iterations: usize,
    pobj: f64,
    dobj: f64,
    residuals: ResidualNorms,
}

struct NtScaling {
    g: CMat,
    ginv: CMat,
    winv: CMat,
    d: DVector<f64>,
}

fn eig_sorted(m: &CMat) -> (DVector<f64>, CMat) {
    let e = hermitian_linalg::eig_hermitian(
        &HermitianMatrix::from_nearly_hermitian(m).expect("finite Hermitian iterate"),
    );
    (e.eigenvalues, e.eigenvectors)
}

fn nt_scaling(s: &CMat, z: &CMat) -> Option<NtScaling> {
    let (ls, vs) = eig_sorted(s);
    if ls[0] <= 0.0 {
        return None;
    }
    let sqrt_s = {
        let diag = CMat::from_diagonal(&ls.map(|x| C64::new(x.sqrt(), 0.0)));
        &vs * diag * vs.adjoint()
    };
    let isqrt_s = {
        let diag = CMat::from_diagonal(&ls.map(|x| C64::new(1.0 / x.sqrt(), 0.0)));
        &vs * diag * vs.adjoint()
    };
    let q = hermitian_part(&(&sqrt_s * z * &sqrt_s));
    let (lq, vq) = eig_sorted(&q);
    if lq[0] <= 0.0 {
        return None;
    }
    let qm4 = CMat::from_diagonal(&lq.map(|x| C64::new(x.powf(-0.25), 0.0)));
    let qp4 = CMat::from_diagonal(&lq.map(|x| C64::new(x.powf(0.25), 0.0)));
    let g = &sqrt_s * &vq * qm4;
    let ginv = qp4 * vq.adjoint() * &isqrt_s;
    let winv = hermitian_part(&(ginv.adjoint() * &ginv));
    let dvec = lq.map(|x| x.sqrt());
    if dvec.iter().any(|v| !v.is_finite()) || winv.iter().any(|v| !v.re.is_finite()) {
        return None;
    }
    Some(NtScaling {
        g,
        ginv,
        winv,
        d: dvec,
    })
}

/// Largest step `alpha` with `m + alpha * dm ⪰ 0`, computed in the scaled
/// frame where `m` becomes `diag(d)`.
fn max_step_scaled(d: &DVector<f64>, dm_scaled: &CMat) -> f64 {
    let n = d.len();
    let mut h = dm_scaled.clone();
    for j in 0..n {
        for i in 0..n {
            h[(i, j)] /= (d[i] * d[j]).sqrt();
        }
    }
    let (ev, _) = eig_sorted(&h);
    let lmin = ev[0];
    if lmin >= -1e-14 {
        f64::INFINITY
    } else {
        -1.0 / lmin
    }
}

fn max_step_nn(s: &DVector<f64>, ds: &DVector<f64>) -> f64 {
    let mut alpha = f64::INFINITY;
    for i in 0..s.len() {
        if ds[i] < 0.0 {
            alpha = alpha.min(-s[i] / ds[i]);
        }
    }
    alpha
}

/// Dense accumulation of `Σ_a x_a E_{i,a}` for one cone.
fn cone_content_lin(cone: &MatCone, x: &DVector<f64>) -> CMat {
    let d = cone.dim;
    let mut acc = CMat::zeros(d, d);
    let slice = acc.as_mut_slice();
    for (var, sp) in &cone.coeffs {
        let xv = x[*var as usize];
        if xv != 0.0 {
            for &(i, j, c) in &sp.entries {
                slice[i as usize + j as usize * d] += c * xv;
            }
        }
    }
    acc
}

fn row_value(terms: &[(u32, f64)], x: &DVector<f64>) -> f64 {
    terms.iter().map(|&(v, c)| c * x[v as usize]).sum()
}

struct Workspace {
    gram: DMatrix<f64>,
    chol: Option<Cholesky<f64, nalgebra::Dyn>>,
    eq_border: DMatrix<f64>,
    eq_chol: Option<Cholesky<f64, nalgebra::Dyn>>,
}

/// Factor the Gram (Schur complement) system for the current scaling.
fn factor(
    compiled: &Compiled,
    scalings: &[NtScaling],
    s_nn: &DVector<f64>,
    z_nn: &DVector<f64>,
    ws: &mut Workspace,
) -> bool {
    let n = compiled.n_vars;
    ws.gram.fill(0.0);
    let gram_slice_dim = n;
    for (cone, sc) in compiled.mat_cones.iter().zip(scalings.iter()) {
        let d = cone.dim;
        let winv = sc.winv.as_slice();
        let mut t = CMat::zeros(d, d);
        for (bi, (var_b, sp_b)) in cone.coeffs.iter().enumerate() {
            // T = Winv E_b Winv as a sum of scaled column outer products.
            t.fill(C64::new(0.0, 0.0));
            let ts = t.as_mut_slice();
            for &(ei, ej, c) in &sp_b.entries {
                let coli = &winv[ei as usize * d..ei as usize * d + d];
                let colj = &winv[ej as usize * d..ej as usize * d + d];
                for v in 0..d {
                    let f = c * colj[v].conj();
                    if f == C64::new(0.0, 0.0) {
                        continue;
                    }
                    let base = v * d;
                    for u in 0..d {
                        ts[base + u] += f * coli[u];
                    }
                }
            }
            for (var_a, sp_a) in cone.coeffs.iter().take(bi + 1) {
                let mut acc = 0.0;
                let ts = t.as_slice();
                for &(i, j, c) in &sp_a.entries {
                    acc += (c * ts[j as usize + i as usize * d]).re;
                }
                let (hi, lo) = if var_a >= var_b {
                    (*var_a as usize, *var_b as usize)
                } else {
                    (*var_b as usize, *var_a as usize)
                };
                ws.gram[(hi, lo)] += acc;
            }
        }
    }
    for (r, row) in compiled.nn_rows.iter().enumerate() {
        let w2 = z_nn[r] / s_nn[r];
        for (ai, &(va, ca)) in row.terms.iter().enumerate() {
            for &(vb, cb) in row.terms.iter().take(ai + 1) {
                let (hi, lo) = if va >= vb { (va, vb) } else { (vb, va) };
                ws.gram[(hi as usize, lo as usize)] += w2 * ca * cb;
            }
        }
    }
    // Mirror to upper triangle.
    for j in 0..gram_slice_dim {
        for i in 0..j {
            ws.gram[(i, j)] = ws.gram[(j, i)];
        }
    }
    // Factor without perturbation; regularize only on breakdown.
    ws.chol = None;
    let mut reg = 0.0;
    for attempt in 0..5 {
        let mut m = ws.gram.clone();
        if reg > 0.0 {
            for i in 0..n {
                m[(i, i)] += reg;
            }
        }
        if let Some(ch) = Cholesky::new(m) {
            ws.chol = Some(ch);
            break;
        }
        if attempt == 0 {
            let mut mx = 0.0_f64;
            for i in 0..n {
                mx = mx.max(ws.gram[(i, i)]);
            }
            reg = 1e-14 * (1.0 + mx);
        } else {
            reg *= 1e3;
        }
    }
    let Some(chol) = ws.chol.as_ref() else {
        return false;
    };

    if !compiled.eq_rows.is_empty() {
        let me = compiled.eq_rows.len();
        let mut bt = DMatrix::zeros(n, me);
        for (r, row) in compiled.eq_rows.iter().enumerate() {
            for &(v, c) in &row.terms {
                bt[(v as usize, r)] = c;
            }
        }
        let ginv_bt = chol.solve(&bt);
        let mut s = DMatrix::zeros(me, me);
        for a in 0..me {
            for b in 0..me {
                let mut acc = 0.0;
                for &(v, c) in &compiled.eq_rows[a].terms {
                    acc += c * ginv_bt[(v as usize, b)];
                }
                s[(a, b)] = acc;
            }
        }
        ws.eq_border = bt;
        ws.eq_chol = None;
        let mut reg_e = 0.0;
        for attempt in 0..5 {
            let mut m = s.clone();
            if reg_e > 0.0 {
                for i in 0..me {
                    m[(i, i)] += reg_e;
                }
            }
            if let Some(ch) = Cholesky::new(m) {
                ws.eq_chol = Some(ch);
                break;
            }
            if attempt == 0 {
                reg_e = 1e-14 * (1.0 + s.diagonal().amax());
            } else {
                reg_e *= 1e3;
            }
        }
        if ws.eq_chol.is_none() {
            return false;
        }
    }
    true
}

struct Direction {
    dx: DVector<f64>,
    ds_mat: Vec<CMat>,
    dz_mat: Vec<CMat>,
    ds_nn: DVector<f64>,
    dz_nn: DVector<f64>,
    dz_eq: DVector<f64>,
}

/// Solve the (possibly bordered) KKT system
/// `Gram dx − Bᵀ dz_eq = rhs_x`, `B dx = rhs_e`
/// with two rounds of iterative refinement against the unregularized Gram,
/// which recovers direction accuracy when the scaling is nearly singular.
fn kkt_solve_refined(
    compiled: &Compiled,
    ws: &Workspace,
    rhs_x: &DVector<f64>,
    rhs_e: &DVector<f64>,
) -> (DVector<f64>, DVector<f64>) {
    let chol = ws.chol.as_ref().expect("factorization present");
    let me = compiled.eq_rows.len();

    let base_solve = |bx: &DVector<f64>, be: &DVector<f64>| -> (DVector<f64>, DVector<f64>) {
        if me == 0 {
            (chol.solve(bx), DVector::zeros(0))
        } else {
            let t1 = chol.solve(bx);
            let mut se = DVector::zeros(me);
            for (r, row) in compiled.eq_rows.iter().enumerate() {
                se[r] = be[r] - row_value(&row.terms, &t1);
            }
            let dz = ws
                .eq_chol
                .as_ref()
                .expect("eq factorization present")
                .solve(&se);
            let mut dx = t1;
            dx += chol.solve(&(&ws.eq_border * &dz));
            (dx, dz)
        }
    };

    let (mut dx, mut dz_eq) = base_solve(rhs_x, rhs_e);
    for _ in 0..6 {
        // Residual against the exact (unregularized) system.
        let mut res_x = rhs_x - &ws.gram * &dx;
        if me > 0 {
            res_x += &ws.eq_border * &dz_eq;
        }
        let mut res_e = DVector::zeros(me);
        for (r, row) in compiled.eq_rows.iter().enumerate() {
            res_e[r] = rhs_e[r] - row_value(&row.terms, &dx);
        }
        if res_x.amax() <= 1e-14 * (1.0 + rhs_x.amax()) && res_e.amax() <= 1e-14 {
            break;
        }
        let (ex, ee) = base_solve(&res_x, &res_e);
        dx += ex;
        dz_eq += ee;
    }
    (dx, dz_eq)
}

#[allow(clippy::too_many_arguments)]
fn solve_direction(
    compiled: &Compiled,
    scalings: &[NtScaling],
    ws: &Workspace,
    r_p_mat: &[CMat],
    r_p_nn: &DVector<f64>,
    r_p_eq: &DVector<f64>,
    r_d: &DVector<f64>,
    rc_mat: &[CMat],
    rc_nn: &DVector<f64>,
    s_nn: &DVector<f64>,
    z_nn: &DVector<f64>,
) -> Direction {
    // rhs_x = Eᵀ[W⁻¹(R_c − r_p)W⁻¹] − r_d
    let mut rhs = -r_d.clone();
    let mut w_terms: Vec<CMat> = Vec::with_capacity(compiled.mat_cones.len());
    for (i, (cone, sc)) in compiled.mat_cones.iter().zip(scalings.iter()).enumerate() {
        let diff = &rc_mat[i] - &r_p_mat[i];
        let wt = &sc.winv * diff * &sc.winv;
        for (var, sp) in &cone.coeffs {
            rhs[*var as usize] += sp.inner(&wt);
        }
        w_terms.push(wt);
    }
    for (r, row) in compiled.nn_rows.iter().enumerate() {
        let f = (z_nn[r] / s_nn[r]) * (rc_nn[r] - r_p_nn[r]);
        for &(v, c) in &row.terms {
            rhs[v as usize] += c * f;
        }
    }

    let rhs_e_target = -r_p_eq;
    let (dx, dz_eq) = kkt_solve_refined(compiled, ws, &rhs, &rhs_e_target);

    let mut ds_mat = Vec::with_capacity(compiled.mat_cones.len());
    let mut dz_mat = Vec::with_capacity(compiled.mat_cones.len());
    for (i, (cone, sc)) in compiled.mat_cones.iter().zip(scalings.iter()).enumerate() {
        let e_dx = cone_content_lin(cone, &dx);
        // dz = W⁻¹(R_c − r_p − E dx)W⁻¹ = w_terms − W⁻¹ (E dx) W⁻¹
        let dz = &w_terms[i] - &sc.winv * &e_dx * &sc.winv;
        let ds = &e_dx + &r_p_mat[i];
        ds_mat.push(hermitian_part(&ds));
        dz_mat.push(hermitian_part(&dz));
    }
    let mut ds_nn = DVector::zeros(compiled.nn_rows.len());
    let mut dz_nn = DVector::zeros(compiled.nn_rows.len());
    for (r, row) in compiled.nn_rows.iter().enumerate() {
        let e_dx = row_value(&row.terms, &dx);
        ds_nn[r] = e_dx + r_p_nn[r];
        dz_nn[r] = (z_nn[r] / s_nn[r]) * (rc_nn[r] - r_p_nn[r] - e_dx);
    }

    Direction {
        dx,
        ds_mat,
        dz_mat,
        ds_nn,
        dz_nn,
        dz_eq,
    }
}

fn ipm(compiled: &Compiled, config: &SolverConfig, init_scale: f64) -> Outcome {
    let n = compiled.n_vars;
    let nu: f64 = compiled.mat_cones.iter().map(|c| c.dim as f64).sum::<f64>()
        + compiled.nn_rows.len() as f64;

    // Identity-based strictly feasible start in the cones.
    let mut state = IpmState {
        x: DVector::zeros(n),
        s_mat: compiled
            .mat_cones
            .iter()
            .map(|c| {
                let eta = init_scale.max(2.0 * hermitian_linalg::fro_norm(&c.f0));
                CMat::identity(c.dim, c.dim) * C64::new(eta, 0.0)
            })
            .collect(),
        z_mat: compiled
            .mat_cones
            .iter()
            .map(|c| CMat::identity(c.dim, c.dim) * C64::new(init_scale, 0.0))
            .collect(),
        s_nn: DVector::from_iterator(
            compiled.nn_rows.len(),
            compiled.nn_rows.iter().map(|r| init_scale.max(2.0 * r.f0.abs())),
        ),
        z_nn: DVector::from_element(compiled.nn_rows.len(), init_scale),
        z_eq: DVector::zeros(compiled.eq_rows.len()),
    };

    let mut ws = Workspace {
        gram: DMatrix::zeros(n, n),
        chol: None,
        eq_border: DMatrix::zeros(0, 0),
        eq_chol: None,
    };

    let f0_norm: f64 = {
        let mats: f64 = compiled
            .mat_cones
            .iter()
            .map(|c| hermitian_linalg::fro_norm(&c.f0).powi(2))
            .sum();
        let nns: f64 = compiled.nn_rows.iter().map(|r| r.f0 * r.f0).sum();
        let eqs: f64 = compiled.eq_rows.iter().map(|r| r.f0 * r.f0).sum();
        (mats + nns + eqs).sqrt()
    };
    let c_norm = compiled.c.amax();

    let mut stall = 0usize;
    let mut recoveries = 0usize;
    let mut recenter_budget = 0usize;
    let mut last_status = SolveStatus::MaxIterations;
    let mut iterations = 0usize;
    let (mut pobj, mut dobj) = (f64::NAN, f64::NAN);
    let mut residuals = ResidualNorms::default();
    // Best iterate meeting gap and feasibility tolerances; falls back to it
    // when the final centering phase cannot tighten complementarity further.
    let mut snapshot: Option<(f64, IpmState, usize, f64, f64, ResidualNorms)> = None;
    let mut centering_rounds = 0usize;
    // Once the gap and feasibility tolerances have been met, only pure
    // centering steps follow; aggressive μ-reduction past that point makes
    // the Newton systems numerically unusable.
    let mut endgame = false;

    for iter in 0..=config.max_iterations {
        iterations = iter;
        // Residuals.
        let mut r_p_mat: Vec<CMat> = Vec::with_capacity(compiled.mat_cones.len());
        for (i, cone) in compiled.mat_cones.iter().enumerate() {
            let mut content = cone_content_lin(cone, &state.x);
            content += &cone.f0;
            r_p_mat.push(&content - &state.s_mat[i]);
        }
        let mut r_p_nn = DVector::zeros(compiled.nn_rows.len());
        for (r, row) in compiled.nn_rows.iter().enumerate() {
            r_p_nn[r] = row.f0 + row_value(&row.terms, &state.x) - state.s_nn[r];
        }
        let mut r_p_eq = DVector::zeros(compiled.eq_rows.len());
        for (r, row) in compiled.eq_rows.iter().enumerate() {
            r_p_eq[r] = row.f0 + row_value(&row.terms, &state.x);
        }
        let mut r_d = compiled.c.clone();
        for (i, cone) in compiled.mat_cones.iter().enumerate() {
            for (var, sp) in &cone.coeffs {
                r_d[*var as usize] -= sp.inner(&state.z_mat[i]);
            }
        }
        for (r, row) in compiled.nn_rows.iter().enumerate() {
            for &(v, c) in &row.terms {
                r_d[v as usize] -= c * state.z_nn[r];
            }
        }
        for (r, row) in compiled.eq_rows.iter().enumerate() {
            for &(v, c) in &row.terms {
                r_d[v as usize] -= c * state.z_eq[r];
            }
        }

        let rp_norm = {
            let mats: f64 = r_p_mat.iter().map(|m| hermitian_linalg::fro_norm(m).powi(2)).sum();
            (mats + r_p_nn.norm_squared() + r_p_eq.norm_squared()).sqrt()
        };
        let rd_norm = r_d.norm();
        // Residuals are measured relative to the data and iterate
        // magnitudes; degenerate instances carry large dual multipliers
        // whose roundoff floor would otherwise never clear an absolute
        // tolerance.
        let z_scale: f64 = state
            .z_mat
            .iter()
            .map(hermitian_linalg::fro_norm)
            .fold(0.0, f64::max)
            .max(if state.z_nn.is_empty() { 0.0 } else { state.z_nn.amax() })
            .max(if state.z_eq.is_empty() { 0.0 } else { state.z_eq.amax() });
        let s_scale: f64 = state
            .s_mat
            .iter()
            .map(hermitian_linalg::fro_norm)
            .fold(0.0, f64::max)
            .max(if state.s_nn.is_empty() { 0.0 } else { state.s_nn.amax() });
        let p_res = rp_norm / (1.0 + f0_norm + s_scale);
        let d_res = rd_norm / (1.0 + c_norm + z_scale);

        pobj = compiled.c.dot(&state.x);
        dobj = {
            let mut acc = 0.0;
            for (i, cone) in compiled.mat_cones.iter().enumerate() {
                acc -= hermitian_linalg::inner(&cone.f0, &state.z_mat[i]);
            }
            for (r, row) in compiled.nn_rows.iter().enumerate() {
                acc -= row.f0 * state.z_nn[r];
            }
            for (r, row) in compiled.eq_rows.iter().enumerate() {
                acc -= row.f0 * state.z_eq[r];
            }
            acc
        };
        // Convergence gap in the caller's units (matches the reported gap).
        let cs = compiled.cost_scale;
        let pobj_u = cs * pobj + compiled.obj_constant;
        let dobj_u = cs * dobj + compiled.obj_constant;
        let gap = (pobj_u - dobj_u).abs() / (1.0 + pobj_u.abs() + dobj_u.abs());
        residuals = ResidualNorms {
            primal: p_res,
            dual: d_res,
        };

        if trace_enabled() {
            eprintln!("it {iter}: gap {gap:.3e} p_res {p_res:.3e} d_res {d_res:.3e} pobj {pobj_u:.9e}");
        }
        let main_converged =
            p_res <= config.feas_tol && d_res <= config.feas_tol && gap <= config.gap_tol;
        if main_converged {
            endgame = true;
        }
        let needs_centering = endgame || recenter_budget > 0;
        if recenter_budget > 0 {
            recenter_budget -= 1;
        }
        if main_converged {
            // Per-pair complementarity in the caller's units:
            // ‖Z·X‖ ≤ gap_tol·(1 + ‖X‖). Off-central iterates inflate the
            // product by the scaling condition number, so a failed check
            // triggers pure centering steps (σ = 1) instead of termination.
            let mut comp_metric = 0.0_f64;
            for (i, cone) in compiled.mat_cones.iter().enumerate() {
                let dscale = &compiled.cone_diag[i];
                let mut s_u = state.s_mat[i].clone();
                let mut z_u = state.z_mat[i].clone();
                for col in 0..cone.dim {
                    for row in 0..cone.dim {
                        let f = dscale[row] * dscale[col];
                        s_u[(row, col)] /= C64::new(f, 0.0);
                        z_u[(row, col)] *= C64::new(cs * f, 0.0);
                    }
                }
                let prod = &z_u * &s_u;
                let s_norm = hermitian_linalg::fro_norm(&s_u);
                comp_metric =
                    comp_metric.max(hermitian_linalg::fro_norm(&prod) / (1.0 + s_norm));
            }
            for (r, _row) in compiled.nn_rows.iter().enumerate() {
                let prod = cs * state.s_nn[r] * state.z_nn[r];
                let s_u = state.s_nn[r] / compiled.nn_row_scale[r];
                comp_metric = comp_metric.max(prod.abs() / (1.0 + s_u.abs()));
            }
            if trace_enabled() {
                eprintln!("iter {iter}: comp {comp_metric:.3e} gap {gap:.3e} p_res {p_res:.3e} d_res {d_res:.3e}");
            }
            if snapshot.as_ref().map_or(true, |s| comp_metric < s.0) {
                snapshot = Some((comp_metric, state.clone(), iter, pobj, dobj, residuals));
            }
            if comp_metric <= config.gap_tol {
                last_status = SolveStatus::Optimal;
                break;
            }
        }
        if endgame {
            centering_rounds += 1;
            if centering_rounds > 20 {
                last_status = SolveStatus::Optimal;
                break;
            }
        }

        // Primal infeasibility certificate: z with Eᵀz ≈ 0 and ⟨F0, z⟩ < 0.
        let f0_dot_z = -dobj;
        if f0_dot_z < 0.0 {
            let t = -f0_dot_z;
            let hom = (&compiled.c - &r_d).norm();
            if hom <= 1e-7 * t {
                last_status = SolveStatus::Infeasible;
                break;
            }
        }
        // Dual infeasibility (unbounded primal): ray x̂ with E(x̂) ∈ K, cᵀx̂ < 0.
        let xnorm = state.x.norm();
        if xnorm > 1e5 {
            let xhat = &state.x / xnorm;
            let cval = compiled.c.dot(&xhat);
            if cval < -1e-9 {
                let mut in_cone = true;
                for cone in &compiled.mat_cones {
                    let lin = cone_content_lin(cone, &xhat);
                    let (ev, _) = eig_sorted(&lin);
                    if ev[0] < -1e-7 {
                        in_cone = false;
                        break;
                    }
                }
                if in_cone {
                    for row in &compiled.nn_rows {
                        if row_value(&row.terms, &xhat) < -1e-7 {
                            in_cone = false;
                            break;
                        }
                    }
                }
                if in_cone {
                    for row in &compiled.eq_rows {
                        if row_value(&row.terms, &xhat).abs() > 1e-7 {
                            in_cone = false;
                            break;
                        }
                    }
                }
                if in_cone {
                    last_status = SolveStatus::Unbounded;
                    break;
                }
            }
        }
        if xnorm > DIVERGENCE_GUARD || !xnorm.is_finite() {
            last_status = SolveStatus::NumericalFailure;
            break;
        }
        if iter == config.max_iterations {
            last_status = SolveStatus::MaxIterations;
            break;
        }

        // NT scalings.
        let mut scalings = Vec::with_capacity(compiled.mat_cones.len());
        let mut scaling_ok = true;
        for i in 0..compiled.mat_cones.len() {
            match nt_scaling(&state.s_mat[i], &state.z_mat[i]) {
                Some(sc) => scalings.push(sc),
                None => {
                    scaling_ok = false;
                    break;
                }
            }
        }
        if !scaling_ok || state.s_nn.iter().any(|&v| v <= 0.0) || state.z_nn.iter().any(|&v| v <= 0.0)
        {
            last_status = SolveStatus::NumericalFailure;
            break;
        }

        let mu = {
            let mats: f64 = (0..compiled.mat_cones.len())
                .map(|i| hermitian_linalg::inner(&state.s_mat[i], &state.z_mat[i]))
                .sum();
            (mats + state.s_nn.dot(&state.z_nn)) / nu.max(1.0)
        };

        if !factor(compiled, &scalings, &state.s_nn, &state.z_nn, &mut ws) {
            last_status = SolveStatus::NumericalFailure;
            break;
        }

        // Predictor (affine scaling direction).
        let rc_mat_aff: Vec<CMat> = state.s_mat.iter().map(|s| -s.clone()).collect();
        let rc_nn_aff = -state.s_nn.clone();
        let aff = solve_direction(
            compiled, &scalings, &ws, &r_p_mat, &r_p_nn, &r_p_eq, &r_d, &rc_mat_aff, &rc_nn_aff,
            &state.s_nn, &state.z_nn,
        );

        // Scaled affine directions; reused for step length and corrector.
        let mut dshat_aff = Vec::with_capacity(scalings.len());
        let mut dzhat_aff = Vec::with_capacity(scalings.len());
        for (i, sc) in scalings.iter().enumerate() {
            dshat_aff.push(hermitian_part(&(&sc.ginv * &aff.ds_mat[i] * sc.ginv.adjoint())));
            dzhat_aff.push(hermitian_part(&(sc.g.adjoint() * &aff.dz_mat[i] * &sc.g)));
        }
        let mut alpha_p_aff: f64 = 1.0;
        let mut alpha_d_aff: f64 = 1.0;
        for (i, sc) in scalings.iter().enumerate() {
            alpha_p_aff = alpha_p_aff.min(max_step_scaled(&sc.d, &dshat_aff[i]));
            alpha_d_aff = alpha_d_aff.min(max_step_scaled(&sc.d, &dzhat_aff[i]));
        }
        alpha_p_aff = alpha_p_aff.min(max_step_nn(&state.s_nn, &aff.ds_nn));
        alpha_d_aff = alpha_d_aff.min(max_step_nn(&state.z_nn, &aff.dz_nn));
        alpha_p_aff = alpha_p_aff.min(1.0);
        alpha_d_aff = alpha_d_aff.min(1.0);

        let mu_aff = {
            let mut acc = 0.0;
            for i in 0..compiled.mat_cones.len() {
                let s_new = &state.s_mat[i] + &aff.ds_mat[i] * C64::new(alpha_p_aff, 0.0);
                let z_new = &state.z_mat[i] + &aff.dz_mat[i] * C64::new(alpha_d_aff, 0.0);
                acc += hermitian_linalg::inner(&s_new, &z_new);
            }
            for r in 0..compiled.nn_rows.len() {
                acc += (state.s_nn[r] + alpha_p_aff * aff.ds_nn[r])
                    * (state.z_nn[r] + alpha_d_aff * aff.dz_nn[r]);
            }
            acc / nu.max(1.0)
        };
        let sigma = if needs_centering {
            1.0
        } else {
            (mu_aff / mu).clamp(0.0, 1.0).powi(3)
        };

        // Corrector right-hand side in the scaled frame.
        // Pure centering steps omit the second-order cross term; it is
        // built from the aggressive affine direction and would distort the
        // recentering of an already-converged iterate.
        let use_cross = !needs_centering;
        let mut rc_mat = Vec::with_capacity(compiled.mat_cones.len());
        for (i, sc) in scalings.iter().enumerate() {
            let dim = compiled.mat_cones[i].dim;
            let cross = if use_cross {
                hermitian_part(&(&dshat_aff[i] * &dzhat_aff[i]))
            } else {
                CMat::zeros(dim, dim)
            };
            let mut e = CMat::zeros(dim, dim);
            for cc in 0..dim {
                for rr in 0..dim {
                    let mut v = -cross[(rr, cc)];
                    if rr == cc {
                        v += C64::new(sigma * mu - sc.d[rr] * sc.d[rr], 0.0);
                    }
                    e[(rr, cc)] = v * C64::new(2.0 / (sc.d[rr] + sc.d[cc]), 0.0);
                }
            }
            rc_mat.push(hermitian_part(&(&sc.g * e * sc.g.adjoint())));
        }
        let mut rc_nn = DVector::zeros(compiled.nn_rows.len());
        for r in 0..compiled.nn_rows.len() {
            let cross = if use_cross {
                aff.ds_nn[r] * aff.dz_nn[r]
            } else {
                0.0
            };
            rc_nn[r] = (sigma * mu - state.s_nn[r] * state.z_nn[r] - cross) / state.z_nn[r];
        }

        let dir = solve_direction(
            compiled, &scalings, &ws, &r_p_mat, &r_p_nn, &r_p_eq, &r_d, &rc_mat, &rc_nn,
            &state.s_nn, &state.z_nn,
        );

        let mut alpha_p: f64 = f64::INFINITY;
        let mut alpha_d: f64 = f64::INFINITY;
        for (i, sc) in scalings.iter().enumerate() {
            let dsh = hermitian_part(&(&sc.ginv * &dir.ds_mat[i] * sc.ginv.adjoint()));
            let dzh = hermitian_part(&(sc.g.adjoint() * &dir.dz_mat[i] * &sc.g));
            let ap = max_step_scaled(&sc.d, &dsh);
            let ad = max_step_scaled(&sc.d, &dzh);
            if trace_enabled() && (ap < 1e-4 || ad < 1e-4) {
                eprintln!("    cone {i} (dim {}): ap {ap:.2e} ad {ad:.2e} dmin {:.2e} dmax {:.2e}",
                    compiled.mat_cones[i].dim, sc.d.min(), sc.d.max());
            }
            alpha_p = alpha_p.min(ap);
            alpha_d = alpha_d.min(ad);
        }
        alpha_p = alpha_p.min(max_step_nn(&state.s_nn, &dir.ds_nn));
        alpha_d = alpha_d.min(max_step_nn(&state.z_nn, &dir.dz_nn));
        alpha_p = (config.step_fraction * alpha_p).min(1.0);
        alpha_d = (config.step_fraction * alpha_d).min(1.0);

        if trace_enabled() {
            eprintln!("  step: sigma {sigma:.3e} mu {mu:.3e} alpha_p {alpha_p:.3e} alpha_d {alpha_d:.3e} centering {needs_centering}");
        }
        if alpha_p < 1e-6 && alpha_d < 1e-6 {
            stall += 1;
            if stall == 2 && recoveries < 4 {
                // Aggressive steps collapse when the iterate drifts far off
                // center on a degenerate face; pure centering steps remain
                // well-conditioned there, so recenter and retry.
                recoveries += 1;
                stall = 0;
                recenter_budget = 3;
            }
            if stall >= STALL_LIMIT {
                last_status = SolveStatus::NumericalFailure;
                break;
            }
        } else {
            stall = 0;
        }

        state.x += &dir.dx * alpha_p;
        for i in 0..compiled.mat_cones.len() {
            state.s_mat[i] += &dir.ds_mat[i] * C64::new(alpha_p, 0.0);
            state.z_mat[i] += &dir.dz_mat[i] * C64::new(alpha_d, 0.0);
            state.s_mat[i] = hermitian_part(&state.s_mat[i]);
            state.z_mat[i] = hermitian_part(&state.z_mat[i]);
        }
        state.s_nn += &dir.ds_nn * alpha_p;
        state.z_nn += &dir.dz_nn * alpha_d;
        state.z_eq += &dir.dz_eq * alpha_d;
    }

    // Any termination after the main tolerances were once met returns the
    // most complementary of those iterates.
    if let Some((_, snap_state, snap_iter, snap_p, snap_d, snap_res)) = snapshot {
        return Outcome {
            status: SolveStatus::Optimal,
            state: snap_state,
            iterations: snap_iter,
            pobj: snap_p,
            dobj: snap_d,
            residuals: snap_res,
        };
    }

    Outcome {
        status: last_status,
        state,
        iterations,
        pobj,
        dobj,
        residuals,
    }
}

fn extract(problem: &SdpProblem, compiled: &Compiled, outcome: Outcome) -> SdpSolution {
    let cs = compiled.cost_scale;
    let state = &outcome.state;

    let blocks: Vec<HermitianMatrix> = (0..problem.num_blocks())
        .map(|b| compiled.reconstruct_block(b, &state.x))
        .collect();
    let scalars: Vec<f64> = (0..problem.num_scalars())
        .map(|s| compiled.reconstruct_scalar(s, &state.x))
        .collect();

    let mut block_duals = vec![HermitianMatrix::zeros(1); problem.num_blocks()];
    let mut constraint_duals: Vec<DualValue> = problem
        .constraints
        .iter()
        .map(|_| DualValue::Scalar(0.0))
        .collect();
    for (i, cone) in compiled.mat_cones.iter().enumerate() {
        // unscale: z = cost_scale · D z' D
        let dscale = &compiled.cone_diag[i];
        let mut z = state.z_mat[i].clone();
        for c in 0..cone.dim {
            for r in 0..cone.dim {
                z[(r, c)] *= C64::new(cs * dscale[r] * dscale[c], 0.0);
            }
        }
        let zh = HermitianMatrix::from_nearly_hermitian(&z).expect("finite dual");
        match cone.origin {
            MatConeOrigin::BlockMembership(b) => block_duals[b] = zh,
            MatConeOrigin::LmiConstraint(cidx) => constraint_duals[cidx] = DualValue::Matrix(zh),
        }
    }
    let mut scalar_duals = vec![0.0; problem.num_scalars()];
    for (r, row) in compiled.nn_rows.iter().enumerate() {
        let z = cs * compiled.nn_row_scale[r] * state.z_nn[r];
        match row.origin {
            RowOrigin::ScalarMembership(s) => scalar_duals[s] = z,
            RowOrigin::ScalarConstraint(cidx) => constraint_duals[cidx] = DualValue::Scalar(z),
        }
    }
    for (r, row) in compiled.eq_rows.iter().enumerate() {
        let z = cs * compiled.eq_row_scale[r] * state.z_eq[r];
        constraint_duals[row.constraint] = DualValue::Scalar(z);
    }

    let objective_value = cs * outcome.pobj + compiled.obj_constant;
    let dual_objective_value = cs * outcome.dobj + compiled.obj_constant;
    let duality_gap = (objective_value - dual_objective_value).abs()
        / (1.0 + objective_value.abs() + dual_objective_value.abs());

    SdpSolution {
        status: outcome.status,
        blocks,
        scalars,
        block_duals,
        scalar_duals,
        constraint_duals,
        objective_value,
        dual_objective_value,
        duality_gap,
        residuals: outcome.residuals,
        iterations: outcome.iterations,
    }
}
