//! The cross-module property suite behind `secbeam validate`: every module
//! invariant exercised on freshly sampled instances, one pass/fail line
//! per property. An optional injected sign fault on the eavesdropper LMI
//! demonstrates that the soundness checks have teeth.

use hermitian_linalg::{
    eig_hermitian, kron, kron_identity_left, trust_region_quadratic_max, vectorize, C64, CMat,
    CVec, HermitianMatrix,
};
use rand::{Rng, RngExt, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, StandardNormal};
use robust_constraints::{
    assemble_baseline1, assemble_relaxed_problem, assemble_relaxed_problem_with, extract_solution,
    FaultInjection, QosSpec,
};
use beamforming_recovery::{
    construct_rank_one_solution, extract_dual_bundle, scheme1_eigenvector, scheme2_randomization,
};
use network_sim::{
    db_to_lin, dbm_to_watts, evaluate_solution, generate_realization, lin_to_db, run_campaign,
    secrecy_floor, watts_to_dbm, CampaignOptions, SchemeId, SimConfig, SweepParameter, SweepSpec,
    TrialStatus,
};
use sdp_core::{solve_sdp, LinearExpr, Relation, SdpProblem, SolveStatus, SolverConfig};

pub struct PropertyResult {
    pub name: &'static str,
    pub outcome: Result<(), String>,
}

pub struct ValidationOptions {
    pub seed: u64,
    pub inject_c4_sign_flip: bool,
}

impl Default for ValidationOptions {
    fn default() -> Self {
        Self {
            seed: 1,
            inject_c4_sign_flip: false,
        }
    }
}

fn randn_c(rng: &mut impl Rng) -> C64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

fn rand_hermitian(rng: &mut impl Rng, n: usize) -> HermitianMatrix {
    let a = CMat::from_fn(n, n, |_, _| randn_c(rng));
    HermitianMatrix::from_nearly_hermitian(&((&a + a.adjoint()) * C64::new(0.5, 0.0))).unwrap()
}

fn rand_psd(rng: &mut impl Rng, n: usize, rank: usize) -> HermitianMatrix {
    let mut m = CMat::zeros(n, n);
    for _ in 0..rank {
        let v = CVec::from_fn(n, |_, _| randn_c(rng));
        m += &v * v.adjoint();
    }
    HermitianMatrix::from_nearly_hermitian(&m).unwrap()
}

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn prop_kron_and_vectorize(seed: u64) -> Result<(), String> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    for _ in 0..20 {
        let a = CMat::from_fn(2, 3, |_, _| randn_c(&mut rng));
        let b = CMat::from_fn(3, 2, |_, _| randn_c(&mut rng));
        let c = CMat::from_fn(2, 2, |_, _| randn_c(&mut rng));
        let left = kron(&kron(&a, &b), &c);
        let right = kron(&a, &kron(&b, &c));
        check(
            hermitian_linalg::fro_norm(&(&left - &right))
                <= 1e-12 * hermitian_linalg::fro_norm(&left).max(1.0),
            "kron associativity violated",
        )?;

        let g = CMat::from_fn(3, 2, |_, _| randn_c(&mut rng));
        let m = rand_hermitian(&mut rng, 3);
        let v = vectorize(&g);
        let lifted = kron_identity_left(2, m.as_matrix());
        let lhs = (v.adjoint() * &lifted * &v)[(0, 0)].re;
        let rhs = hermitian_linalg::inner(&g, &(m.as_matrix() * &g));
        check(
            (lhs - rhs).abs() <= 1e-10 * (1.0 + rhs.abs()),
            format!("vec/kron trace identity violated: {lhs} vs {rhs}"),
        )?;
    }
    Ok(())
}

fn prop_eig_reconstruction(seed: u64) -> Result<(), String> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed ^ 0x9E37);
    for n in [3usize, 6, 10] {
        let m = rand_hermitian(&mut rng, n);
        let eig = eig_hermitian(&m);
        let recon = eig.map_rebuild(|x| x);
        let rel = hermitian_linalg::fro_norm(&(&recon - m.as_matrix()))
            / hermitian_linalg::fro_norm(m.as_matrix()).max(1e-300);
        check(rel <= 1e-9, format!("eig reconstruction error {rel}"))?;
    }
    Ok(())
}

fn prop_trust_region(seed: u64) -> Result<(), String> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed ^ 0x51AB);
    for trial in 0..5 {
        let n = 4 + trial % 2;
        let m = rand_psd(&mut rng, n, n);
        let g = CVec::from_fn(n, |_, _| randn_c(&mut rng));
        let mut prev = f64::NEG_INFINITY;
        for k in 0..6 {
            let eps = 0.3 * k as f64;
            let v = trust_region_quadratic_max(&m, &g, eps).map_err(|e| e.to_string())?;
            check(v + 1e-12 * (1.0 + v.abs()) >= prev, "not monotone in radius")?;
            prev = v;
        }
        // coarse ascent cross-check
        let eps = 0.8;
        let exact = trust_region_quadratic_max(&m, &g, eps).map_err(|e| e.to_string())?;
        let mut best = f64::NEG_INFINITY;
        for _ in 0..50 {
            let mut d = CVec::from_fn(n, |_, _| randn_c(&mut rng));
            d *= C64::new(eps / d.norm(), 0.0);
            let gd = &g + &d;
            best = best.max((gd.adjoint() * m.as_matrix() * &gd)[(0, 0)].re);
        }
        check(
            best <= exact * (1.0 + 1e-9) + 1e-12,
            format!("boundary sample {best} beat the exact maximum {exact}"),
        )?;
    }
    Ok(())
}

fn prop_det_trace_bound(seed: u64) -> Result<(), String> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed ^ 0xDE7);
    for trial in 0..1000 {
        let n = 2 + trial % 4;
        let rank = 1 + trial % n;
        let a = rand_psd(&mut rng, n, rank);
        let det = (CMat::identity(n, n) + a.as_matrix()).determinant().re;
        let tr = a.trace();
        check(det >= (1.0 + tr) * (1.0 - 1e-12), "det(I+A) >= 1+tr(A) violated")?;
        let gap = det - (1.0 + tr);
        if rank == 1 {
            check(gap.abs() <= 1e-9 * (1.0 + tr), "rank-one equality violated")?;
        }
    }
    Ok(())
}

fn prop_solver_eigenvalue_family(seed: u64) -> Result<(), String> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed ^ 0x5D9);
    for trial in 0..15 {
        let n = 2 + trial % 4;
        let c = rand_hermitian(&mut rng, n);
        let lmin = eig_hermitian(&c).lambda_min();
        let mut p = SdpProblem::new();
        let x = p.add_psd_block("X", n);
        p.set_objective(LinearExpr::new().with_block(x, c));
        p.add_scalar_constraint(
            "trace",
            LinearExpr::new().with_block(x, HermitianMatrix::identity(n)),
            Relation::Eq,
            1.0,
        );
        let sol = solve_sdp(&p, &SolverConfig::default()).map_err(|e| e.to_string())?;
        check(sol.status == SolveStatus::Optimal, "eigenvalue instance not solved")?;
        check(
            (sol.objective_value - lmin).abs() <= 1e-6 * (1.0 + lmin.abs()),
            format!("objective {} vs λ_min {lmin}", sol.objective_value),
        )?;
        check(sol.duality_gap <= 1e-8, format!("gap {}", sol.duality_gap))?;
        check(
            sol.objective_value >= sol.dual_objective_value - 1e-8 * (1.0 + sol.objective_value.abs()),
            "weak duality violated",
        )?;
    }
    Ok(())
}

fn prop_solver_determinism(seed: u64) -> Result<(), String> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed ^ 0xD37);
    let c = rand_hermitian(&mut rng, 4);
    let build = || {
        let mut p = SdpProblem::new();
        let x = p.add_psd_block("X", 4);
        p.set_objective(LinearExpr::new().with_block(x, c.clone()));
        p.add_scalar_constraint(
            "trace",
            LinearExpr::new().with_block(x, HermitianMatrix::identity(4)),
            Relation::Eq,
            1.0,
        );
        p
    };
    let a = solve_sdp(&build(), &SolverConfig::default()).map_err(|e| e.to_string())?;
    let b = solve_sdp(&build(), &SolverConfig::default()).map_err(|e| e.to_string())?;
    check(a.iterations == b.iterations, "iteration counts differ")?;
    check(
        a.objective_value.to_bits() == b.objective_value.to_bits(),
        "objective values differ bitwise",
    )
}

/// Solved Table-I instances used by the soundness properties.
fn solved_instances(
    seed: u64,
    want: usize,
    faults: FaultInjection,
) -> Vec<(network_sim::Realization, robust_constraints::BeamformingSolution)> {
    let cfg = SimConfig {
        gamma_base_db: 3.0,
        seed,
        ..SimConfig::default()
    };
    solved_instances_with(&cfg, want, faults)
}

fn solved_instances_with(
    cfg: &SimConfig,
    want: usize,
    faults: FaultInjection,
) -> Vec<(network_sim::Realization, robust_constraints::BeamformingSolution)> {
    let cfg = cfg.clone();
    let mut out = Vec::new();
    let mut trial = 0u64;
    while out.len() < want && trial < 40 * want as u64 {
        let rz = generate_realization(&cfg, trial);
        trial += 1;
        let Ok(assembled) = assemble_relaxed_problem_with(&rz.channels, &rz.qos, faults) else {
            continue;
        };
        let Ok(sol) = solve_sdp(&assembled.problem, &SolverConfig::default()) else {
            continue;
        };
        if sol.status != SolveStatus::Optimal {
            continue;
        }
        let bf = extract_solution(&sol, &assembled.index);
        out.push((rz, bf));
    }
    out
}

fn prop_c3_soundness(seed: u64, faults: FaultInjection) -> Result<(), String> {
    let instances = solved_instances(seed, 8, faults);
    check(instances.len() >= 4, "too few solved instances for the C3 check")?;
    for (rz, bf) in &instances {
        let m_total = bf.transmit_covariance();
        for j in 0..rz.channels.num_primary() {
            let lifted = HermitianMatrix::from_nearly_hermitian(&kron_identity_left(
                rz.channels.n_pr,
                &m_total,
            ))
            .map_err(|e| e.to_string())?;
            let worst = trust_region_quadratic_max(
                &lifted,
                &vectorize(&rz.channels.g_hat[j]),
                rz.channels.eps[j],
            )
            .map_err(|e| e.to_string())?;
            check(
                worst <= rz.qos.p_i[j] * (1.0 + 1e-6),
                format!(
                    "worst-case interference {worst:.3e} exceeds {:.3e} at primary {j}",
                    rz.qos.p_i[j]
                ),
            )?;
        }
    }
    Ok(())
}

fn prop_c4_soundness(seed: u64, faults: FaultInjection) -> Result<(), String> {
    // nearer primary receivers and a loose interference cap make the
    // eavesdropper-rate constraint the binding one
    let cfg = SimConfig {
        gamma_base_db: 8.0,
        primary_distance_m: 120.0,
        p_i_dbm: -80.0,
        seed,
        ..SimConfig::default()
    };
    let instances = solved_instances_with(&cfg, 6, faults);
    check(instances.len() >= 3, "too few solved instances for the C4 check")?;
    let mut rng = ChaCha12Rng::seed_from_u64(seed ^ 0xC4);
    for (rz, bf) in &instances {
        for k in 0..rz.channels.num_secondary() {
            for j in 0..rz.channels.num_primary() {
                let rate = network_sim::worst_eavesdropper_rate(
                    &rz.channels.g_hat[j],
                    rz.channels.eps[j],
                    bf.w[k][0].as_matrix(),
                    bf.v.as_matrix(),
                    rz.channels.sigma_pu_sq[j],
                    300,
                    5,
                    &mut rng,
                );
                check(
                    rate <= rz.qos.r_eav[j][k] + 1e-4,
                    format!(
                        "eavesdropper rate {rate:.6} exceeds {:.3} at ({j},{k})",
                        rz.qos.r_eav[j][k]
                    ),
                )?;
            }
        }
    }
    Ok(())
}

fn prop_monotonicity(seed: u64) -> Result<(), String> {
    let cfg = SimConfig {
        gamma_base_db: 2.0,
        seed,
        ..SimConfig::default()
    };
    let mut checked = 0;
    let mut trial = 0u64;
    while checked < 3 && trial < 120 {
        let rz = generate_realization(&cfg, trial);
        trial += 1;
        let solve = |q: &QosSpec| -> Option<f64> {
            let a = assemble_relaxed_problem(&rz.channels, q).ok()?;
            let s = solve_sdp(&a.problem, &SolverConfig::default()).ok()?;
            (s.status == SolveStatus::Optimal).then_some(s.objective_value)
        };
        let Some(base) = solve(&rz.qos) else { continue };
        // raising a SINR floor cannot lower the power
        let mut harder = rz.qos.clone();
        harder.gamma_req[0][0] = harder.gamma_req[0][0].map(|g| g * 1.5);
        if let Some(v) = solve(&harder) {
            check(
                v >= base * (1.0 - 1e-6),
                format!("objective decreased when Γ_req rose: {v} < {base}"),
            )?;
        }
        // loosening the interference cap cannot raise the power
        let mut looser = rz.qos.clone();
        for p in looser.p_i.iter_mut() {
            *p *= 2.0;
        }
        if let Some(v) = solve(&looser) {
            check(
                v <= base * (1.0 + 1e-6),
                format!("objective rose when P_I loosened: {v} > {base}"),
            )?;
        }
        checked += 1;
    }
    check(checked >= 1, "no feasible instance found for monotonicity")
}

fn prop_recovery_and_ordering(seed: u64) -> Result<(), String> {
    let instances = solved_instances(seed ^ 0xAB, 4, FaultInjection::default());
    check(instances.len() >= 2, "too few instances for recovery checks")?;
    let solver = SolverConfig::default();
    for (rz, bf) in &instances {
        let assembled =
            assemble_relaxed_problem(&rz.channels, &rz.qos).map_err(|e| e.to_string())?;
        let sol = solve_sdp(&assembled.problem, &solver).map_err(|e| e.to_string())?;
        let duals = extract_dual_bundle(&sol, &assembled.index);
        let outcome = construct_rank_one_solution(bf, &duals, &rz.channels, &rz.qos, &solver)
            .map_err(|e| e.to_string())?;
        check(outcome.solution.all_rank_one(1e-6), "construction not rank-one")?;
        let rel = (outcome.solution.total_power - bf.total_power).abs() / bf.total_power;
        check(rel <= 1e-6, format!("construction changed power by {rel}"))?;

        let s1 = scheme1_eigenvector(bf, &rz.channels, &rz.qos, &solver)
            .map_err(|e| e.to_string())?;
        check(
            s1.total_power >= bf.total_power * (1.0 - 1e-5),
            format!(
                "scheme 1 beat the relaxed bound: {} vs {}",
                s1.total_power, bf.total_power
            ),
        )?;
        let s2 = scheme2_randomization(bf, &rz.channels, &rz.qos, 5, seed, &solver)
            .map_err(|e| e.to_string())?;
        check(
            s2.total_power >= bf.total_power * (1.0 - 1e-5),
            format!(
                "scheme 2 beat the relaxed bound: {} vs {}",
                s2.total_power, bf.total_power
            ),
        )?;
        let (b1, _) = assemble_baseline1(&rz.channels, &rz.qos).map_err(|e| e.to_string())?;
        let b1sol = solve_sdp(&b1.problem, &solver).map_err(|e| e.to_string())?;
        if b1sol.status == SolveStatus::Optimal {
            check(
                b1sol.objective_value >= bf.total_power * (1.0 - 1e-5),
                format!(
                    "single-layer baseline undercut the layered optimum: {} vs {}",
                    b1sol.objective_value, bf.total_power
                ),
            )?;
            check(
                b1sol.objective_value >= s1.total_power * (1.0 - 1e-5),
                format!(
                    "scheme 1 above baseline 1: {} vs {}",
                    s1.total_power, b1sol.objective_value
                ),
            )?;
        }
    }
    Ok(())
}

fn prop_secrecy_floor(seed: u64, faults: FaultInjection) -> Result<(), String> {
    let instances = solved_instances(seed ^ 0x5EC, 4, faults);
    check(instances.len() >= 2, "too few instances for the secrecy floor")?;
    for (i, (rz, bf)) in instances.iter().enumerate() {
        let m = evaluate_solution(&bf.clone(), &rz.channels, &rz.qos, 300, seed ^ i as u64);
        check(m.status == TrialStatus::Solved, "evaluation failed")?;
        for k in 0..rz.channels.num_secondary() {
            let floor = secrecy_floor(&rz.qos, k);
            check(
                m.secrecy_rate_layer1[k] >= floor - 1e-6,
                format!(
                    "secrecy rate {:.6} below floor {floor:.6} at receiver {k}",
                    m.secrecy_rate_layer1[k]
                ),
            )?;
        }
        check(!m.secrecy_violation, "secrecy violation flagged on a robust solution")?;
        check(
            !m.interference_violation,
            "interference violation flagged on a robust solution",
        )?;
    }
    Ok(())
}

fn prop_units_roundtrip(seed: u64) -> Result<(), String> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed ^ 0xDB);
    for _ in 0..200 {
        let x = (rng.random::<f64>() - 0.5) * 300.0;
        check(
            (lin_to_db(db_to_lin(x)) - x).abs() <= 1e-12 * (1.0 + x.abs()),
            "dB round trip",
        )?;
        check(
            (watts_to_dbm(dbm_to_watts(x)) - x).abs() <= 1e-12 * (1.0 + x.abs()),
            "dBm round trip",
        )?;
    }
    Ok(())
}

fn prop_campaign_determinism(seed: u64) -> Result<(), String> {
    let cfg = SimConfig {
        k: 2,
        j: 1,
        n_t: 6,
        gamma_base_db: 2.0,
        trials: 3,
        seed,
        ..SimConfig::default()
    };
    let schemes = [SchemeId::Optimal, SchemeId::Baseline2];
    let sweep = SweepSpec {
        parameter: SweepParameter::GammaBaseDb,
        values: vec![2.0],
    };
    let opts = CampaignOptions {
        n_error_samples: 40,
        scheme2_tries: 2,
        ..CampaignOptions::default()
    };
    let a = run_campaign(&cfg, &schemes, &sweep, &opts)?;
    let b = run_campaign(&cfg, &schemes, &sweep, &opts)?;
    for (ra, rb) in a.rows.iter().zip(b.rows.iter()) {
        check(ra.trials_feasible == rb.trials_feasible, "feasible counts differ")?;
        check(
            ra.mean_power_dbm.to_bits() == rb.mean_power_dbm.to_bits(),
            "mean powers differ bitwise",
        )?;
    }
    Ok(())
}

/// Run the whole suite; the injected C̄4 fault applies to the LMI-soundness
/// and secrecy properties through the faulty assembler.
pub fn run_validation(opts: &ValidationOptions) -> Vec<PropertyResult> {
    let faults = FaultInjection {
        c4_sign_flip: opts.inject_c4_sign_flip,
    };
    let seed = opts.seed;
    let mut results = Vec::new();
    let mut push = |name: &'static str, outcome: Result<(), String>| {
        results.push(PropertyResult { name, outcome });
    };
    push("linalg-kron-vectorize-identities", prop_kron_and_vectorize(seed));
    push("linalg-eig-reconstruction", prop_eig_reconstruction(seed));
    push("linalg-trust-region-maximizer", prop_trust_region(seed));
    push("linalg-det-trace-bound", prop_det_trace_bound(seed));
    push("sdp-eigenvalue-family", prop_solver_eigenvalue_family(seed));
    push("sdp-determinism", prop_solver_determinism(seed));
    push("c3bar-soundness", prop_c3_soundness(seed, faults));
    push("c4bar-soundness", prop_c4_soundness(seed, faults));
    push("relaxed-monotonicity", prop_monotonicity(seed));
    push("theorem1-and-scheme-ordering", prop_recovery_and_ordering(seed));
    push("secrecy-floor", prop_secrecy_floor(seed, faults));
    push("units-roundtrip", prop_units_roundtrip(seed));
    push("campaign-determinism", prop_campaign_determinism(seed));
    results
}
