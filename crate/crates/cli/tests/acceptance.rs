//! Acceptance suite: every exit criterion checked at its stated tolerance,
//! one pass/fail line per criterion (run with `--nocapture` to watch).
//!
//! The trend criteria average over realizations that are feasible for
//! every scheme at every sweep point; per-point feasible subsets suffer
//! selection bias (harder targets keep only geometrically cheap
//! realizations), while the common set inherits per-realization
//! monotonicity. Channel draws depend only on (seed, trial), so the
//! gamma sweep reuses identical realizations across points.

use std::collections::BTreeSet;

use beamforming_recovery::{
    construct_rank_one_solution, extract_dual_bundle, numerical_rank, DualBundle,
    DEFAULT_RANK_TOL,
};
use hermitian_linalg::{
    eig_hermitian, kron_identity_left, trust_region_quadratic_max, vectorize, C64, CMat, CVec,
    HermitianMatrix,
};
use network_sim::{
    generate_realization, run_campaign, secrecy_floor, worst_eavesdropper_rate, CampaignOptions,
    CampaignResult, Realization, SchemeId, SimConfig, SweepParameter, SweepSpec, TrialStatus,
};
use rand::{Rng, RngExt, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use robust_constraints::{
    assemble_relaxed_problem, check_solution as _, extract_solution, synthetic_solution,
    BeamformingSolution, QosSpec,
};
use sdp_core::{solve_sdp, LinearExpr, Relation, SdpProblem, SolveStatus, SolverConfig};

const ALL_SCHEMES: [SchemeId; 5] = [
    SchemeId::Optimal,
    SchemeId::Scheme1,
    SchemeId::Scheme2,
    SchemeId::Baseline1,
    SchemeId::Baseline2,
];

struct Criterion {
    name: &'static str,
    outcome: Result<String, String>,
}

fn randn_c(rng: &mut impl Rng) -> C64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Criterion 1: eigenvalue-embedding family, 100 instances.
fn criterion_solver_correctness() -> Result<String, String> {
    let results: Vec<Result<(f64, f64), String>> = (0..100u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha12Rng::seed_from_u64(9_000 + i);
            let n = 2 + (i % 6) as usize;
            let a = CMat::from_fn(n, n, |_, _| randn_c(&mut rng));
            let c = HermitianMatrix::from_nearly_hermitian(
                &((&a + a.adjoint()) * C64::new(0.5, 0.0)),
            )
            .unwrap();
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
            if sol.status != SolveStatus::Optimal {
                return Err(format!("instance {i}: status {:?}", sol.status));
            }
            Ok((
                (sol.objective_value - lmin).abs() / (1.0 + lmin.abs()),
                sol.duality_gap,
            ))
        })
        .collect();
    let mut max_err: f64 = 0.0;
    let mut max_gap: f64 = 0.0;
    for r in results {
        let (err, gap) = r?;
        max_err = max_err.max(err);
        max_gap = max_gap.max(gap);
    }
    if max_err > 1e-6 {
        return Err(format!("objective error {max_err:.3e} > 1e-6"));
    }
    if max_gap > 1e-8 {
        return Err(format!("duality gap {max_gap:.3e} > 1e-8"));
    }
    Ok(format!(
        "100 instances: max objective error {max_err:.2e}, max gap {max_gap:.2e}"
    ))
}

/// Solved Table-I instances shared by criteria 2 and 3.
fn solved_table_i(count: usize, seed: u64) -> Vec<(Realization, BeamformingSolution)> {
    let cfg = SimConfig {
        gamma_base_db: 5.0,
        seed,
        ..SimConfig::default()
    };
    let cap = 40 * count as u64;
    let found: Vec<_> = (0..cap)
        .into_par_iter()
        .filter_map(|trial| {
            let rz = generate_realization(&cfg, trial);
            let a = assemble_relaxed_problem(&rz.channels, &rz.qos).ok()?;
            let sol = solve_sdp(&a.problem, &SolverConfig::default()).ok()?;
            if sol.status != SolveStatus::Optimal {
                return None;
            }
            let bf = extract_solution(&sol, &a.index);
            Some((trial, rz, bf))
        })
        .collect();
    let mut found = found;
    found.sort_by_key(|(t, _, _)| *t);
    found.truncate(count);
    found.into_iter().map(|(_, rz, bf)| (rz, bf)).collect()
}

/// Criterion 2: exact worst-case interference within the cap on 100
/// solved Table-I instances.
fn criterion_c3_soundness(instances: &[(Realization, BeamformingSolution)]) -> Result<String, String> {
    if instances.len() < 100 {
        return Err(format!("only {} solved instances", instances.len()));
    }
    let mut worst_margin: f64 = f64::NEG_INFINITY;
    for (rz, bf) in instances {
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
            let ratio = worst / rz.qos.p_i[j];
            worst_margin = worst_margin.max(ratio);
            if worst > rz.qos.p_i[j] * (1.0 + 1e-6) {
                return Err(format!(
                    "worst-case interference ratio {ratio:.9} exceeds 1 + 1e-6"
                ));
            }
        }
    }
    Ok(format!(
        "{} instances: max worst-case/cap ratio {worst_margin:.9}",
        instances.len()
    ))
}

/// Criterion 3: sampled-plus-ascent eavesdropper rate within R_eav + 1e-4.
fn criterion_c4_soundness(instances: &[(Realization, BeamformingSolution)]) -> Result<String, String> {
    if instances.len() < 100 {
        return Err(format!("only {} solved instances", instances.len()));
    }
    let results: Vec<Result<f64, String>> = instances
        .par_iter()
        .enumerate()
        .map(|(i, (rz, bf))| {
            let mut rng = ChaCha12Rng::seed_from_u64(77_000 + i as u64);
            let mut worst = f64::NEG_INFINITY;
            for k in 0..rz.channels.num_secondary() {
                for j in 0..rz.channels.num_primary() {
                    let rate = worst_eavesdropper_rate(
                        &rz.channels.g_hat[j],
                        rz.channels.eps[j],
                        bf.w[k][0].as_matrix(),
                        bf.v.as_matrix(),
                        rz.channels.sigma_pu_sq[j],
                        1000,
                        5,
                        &mut rng,
                    );
                    let excess = rate - rz.qos.r_eav[j][k];
                    worst = worst.max(excess);
                    if excess > 1e-4 {
                        return Err(format!(
                            "instance {i}: eavesdropper rate exceeds cap by {excess:.6}"
                        ));
                    }
                }
            }
            Ok(worst)
        })
        .collect();
    let mut max_excess = f64::NEG_INFINITY;
    for r in results {
        max_excess = max_excess.max(r?);
    }
    Ok(format!(
        "{} instances: max rate excess {max_excess:.2e} (tolerance 1e-4)",
        instances.len()
    ))
}

/// Exchange-neutral rank-2 optimal variants: move artificial-noise mass
/// orthogonal to the premium channel into the layer-1 beam, verified
/// feasible at equal power. These are optimal solutions a different
/// interior-point trajectory could return, and they exercise the null(A)
/// classification path of the construction.
fn face_moved_instance(
    rz: &Realization,
    bf: &BeamformingSolution,
) -> Option<BeamformingSolution> {
    let n_t = rz.channels.n_t;
    if bf.v.trace() <= 1e-4 * bf.total_power {
        return None;
    }
    let ve = eig_hermitian(&bf.v);
    let v_top = ve.eigenvectors.column(n_t - 1).clone_owned();
    let h1 = &rz.channels.h[0];
    let coef = (h1.adjoint() * &v_top)[(0, 0)] / C64::new(h1.norm_squared(), 0.0);
    let raw = &v_top - h1 * coef;
    let norm = raw.norm();
    if norm < 1e-6 {
        return None;
    }
    let phi: CVec = &raw / C64::new(norm, 0.0);
    let quad = (phi.adjoint() * bf.v.as_matrix() * &phi)[(0, 0)].re;
    if quad <= 1e-4 * bf.total_power {
        return None;
    }
    let assembled = assemble_relaxed_problem(&rz.channels, &rz.qos).ok()?;
    for frac in [0.5, 0.2, 0.05] {
        let mass = frac * quad;
        // must be visible above the rank-one flag on the layer-1 beam
        let w1_top = eig_hermitian(&bf.w[0][0]).lambda_max();
        if mass <= 3e-5 * w1_top {
            continue;
        }
        let atom = &phi * phi.adjoint() * C64::new(mass, 0.0);
        let mut w = bf.w.clone();
        w[0][0] =
            HermitianMatrix::from_nearly_hermitian(&(w[0][0].as_matrix() + &atom)).ok()?;
        let v = HermitianMatrix::from_nearly_hermitian(&(bf.v.as_matrix() - &atom)).ok()?;
        if hermitian_linalg::eig_hermitian_raw(v.as_matrix()).lambda_min()
            < -1e-12 * bf.v.trace()
        {
            continue;
        }
        let total_power = BeamformingSolution::compute_total_power(&w, &v);
        let candidate = BeamformingSolution {
            w,
            v,
            omega: bf.omega.clone(),
            delta: bf.delta.clone(),
            total_power,
        };
        let syn = synthetic_solution(&assembled.problem, &assembled.index, &candidate);
        let report = sdp_core::check_solution(&assembled.problem, &syn);
        if report.max_relative_violation() > 1e-9 {
            continue;
        }
        if candidate.all_rank_one(1e-6) {
            continue;
        }
        return Some(candidate);
    }
    None
}

/// Criterion 4: the construction succeeds on 100 rank>1 optimal inputs.
fn criterion_theorem1_recovery() -> Result<String, String> {
    // configurations that produce artificial-noise-active solutions
    let configs = [
        SimConfig {
            gamma_base_db: 8.0,
            primary_distance_m: 120.0,
            p_i_dbm: -80.0,
            seed: 31_000,
            ..SimConfig::default()
        },
        SimConfig {
            gamma_base_db: 6.0,
            gamma_tol_db: -4.0,
            primary_distance_m: 150.0,
            p_i_dbm: -85.0,
            seed: 32_000,
            ..SimConfig::default()
        },
        SimConfig {
            gamma_base_db: 0.0,
            seed: 33_000,
            ..SimConfig::default()
        },
    ];
    let per_config = 340u64;
    let mut cases: Vec<(Realization, BeamformingSolution, DualBundle)> = Vec::new();
    for cfg in &configs {
        if cases.len() >= 100 {
            break;
        }
        let mut found: Vec<(u64, Realization, BeamformingSolution, DualBundle)> = (0..per_config)
            .into_par_iter()
            .filter_map(|trial| {
                let rz = generate_realization(cfg, trial);
                let a = assemble_relaxed_problem(&rz.channels, &rz.qos).ok()?;
                let sol = solve_sdp(&a.problem, &SolverConfig::default()).ok()?;
                if sol.status != SolveStatus::Optimal {
                    return None;
                }
                let bf = extract_solution(&sol, &a.index);
                let duals = extract_dual_bundle(&sol, &a.index);
                if !bf.all_rank_one(1e-6) {
                    return Some((trial, rz, bf, duals));
                }
                let moved = face_moved_instance(&rz, &bf)?;
                Some((trial, rz, moved, duals))
            })
            .collect();
        found.sort_by_key(|(t, _, _, _)| *t);
        for (_, rz, bf, duals) in found {
            if cases.len() >= 100 {
                break;
            }
            cases.push((rz, bf, duals));
        }
    }
    if cases.len() < 100 {
        return Err(format!(
            "harvested only {} rank>1 optimal inputs",
            cases.len()
        ));
    }
    let outcomes: Vec<Result<(), String>> = cases
        .par_iter()
        .enumerate()
        .map(|(i, (rz, bf, duals))| {
            let outcome =
                construct_rank_one_solution(bf, duals, &rz.channels, &rz.qos, &SolverConfig::default())
                    .map_err(|e| format!("case {i}: {e}"))?;
            if !outcome.solution.all_rank_one(1e-6) {
                return Err(format!("case {i}: output not rank-one at 1e-6"));
            }
            let rel = (outcome.solution.total_power - bf.total_power).abs() / bf.total_power;
            if rel > 1e-6 {
                return Err(format!("case {i}: power changed by {rel:.3e}"));
            }
            Ok(())
        })
        .collect();
    let mut failures = 0;
    let mut first_err = String::new();
    for o in outcomes {
        if let Err(e) = o {
            failures += 1;
            if first_err.is_empty() {
                first_err = e;
            }
        }
    }
    if failures > 0 {
        return Err(format!("{failures}/100 constructions failed; first: {first_err}"));
    }
    Ok("100/100 rank>1 inputs reconstructed rank-one at equal power".to_string())
}

fn fig3_campaign() -> CampaignResult {
    let cfg = SimConfig {
        trials: 200,
        seed: 41_000,
        ..SimConfig::default()
    };
    let sweep = SweepSpec {
        parameter: SweepParameter::GammaBaseDb,
        values: vec![0.0, 2.0, 4.0, 6.0, 8.0, 10.0],
    };
    let opts = CampaignOptions {
        n_error_samples: 1000,
        scheme2_tries: 50,
        keep_trial_logs: true,
        ..CampaignOptions::default()
    };
    run_campaign(&cfg, &ALL_SCHEMES, &sweep, &opts).expect("campaign must run")
}

/// Trials feasible for every scheme at every sweep point.
fn common_feasible_trials(result: &CampaignResult, values: &[f64]) -> BTreeSet<u64> {
    let mut common: Option<BTreeSet<u64>> = None;
    for &v in values {
        let mut per_point: std::collections::HashMap<u64, usize> = Default::default();
        for e in &result.logs {
            if e.sweep_value == v && e.metrics.status == TrialStatus::Solved {
                *per_point.entry(e.trial).or_insert(0) += 1;
            }
        }
        let full: BTreeSet<u64> = per_point
            .into_iter()
            .filter(|&(_, n)| n == ALL_SCHEMES.len())
            .map(|(t, _)| t)
            .collect();
        common = Some(match common {
            None => full,
            Some(c) => c.intersection(&full).copied().collect(),
        });
    }
    common.unwrap_or_default()
}

fn mean_power_dbm(
    result: &CampaignResult,
    value: f64,
    scheme: SchemeId,
    trials: &BTreeSet<u64>,
) -> f64 {
    let watts: Vec<f64> = result
        .logs
        .iter()
        .filter(|e| {
            e.sweep_value == value && e.scheme == scheme && trials.contains(&e.trial)
        })
        .map(|e| 10.0_f64.powf((e.metrics.total_power_dbm - 30.0) / 10.0))
        .collect();
    let mean = watts.iter().sum::<f64>() / watts.len() as f64;
    10.0 * mean.log10() + 30.0
}

/// Criterion 5: rank-one frequency of the relaxed SDP on Table-I trials.
fn criterion_rank_one_frequency(fig3: &CampaignResult) -> Result<String, String> {
    let flags: Vec<bool> = fig3
        .logs
        .iter()
        .filter(|e| e.scheme == SchemeId::Optimal && e.metrics.status == TrialStatus::Solved)
        .filter_map(|e| e.metrics.rank_one_at_relaxation)
        .collect();
    if flags.len() < 200 {
        return Err(format!("only {} solved relaxations", flags.len()));
    }
    let freq = flags.iter().filter(|&&b| b).count() as f64 / flags.len() as f64;
    if !(0.70..=1.0).contains(&freq) {
        return Err(format!("rank-one frequency {freq:.3} outside [0.70, 1.00]"));
    }
    Ok(format!(
        "rank-one at relaxation: {freq:.3} over {} solves",
        flags.len()
    ))
}

/// Criterion 6: power curves across the SINR sweep.
fn criterion_fig3_trend(fig3: &CampaignResult, common: &BTreeSet<u64>) -> Result<String, String> {
    let values = [0.0, 2.0, 4.0, 6.0, 8.0, 10.0];
    if common.len() < 10 {
        return Err(format!("common-feasible set too small: {}", common.len()));
    }
    let mut prev = f64::NEG_INFINITY;
    for &v in &values {
        let opt = mean_power_dbm(fig3, v, SchemeId::Optimal, common);
        if opt <= prev {
            return Err(format!("optimal mean power not strictly increasing at {v} dB"));
        }
        prev = opt;
        let b1 = mean_power_dbm(fig3, v, SchemeId::Baseline1, common);
        let b2 = mean_power_dbm(fig3, v, SchemeId::Baseline2, common);
        if b1 < opt - 1e-9 {
            return Err(format!("baseline 1 below optimal at {v} dB: {b1} vs {opt}"));
        }
        if b2 > opt + 1e-9 {
            return Err(format!("baseline 2 above optimal at {v} dB: {b2} vs {opt}"));
        }
    }
    let lo = mean_power_dbm(fig3, values[0], SchemeId::Optimal, common);
    let hi = mean_power_dbm(fig3, values[5], SchemeId::Optimal, common);
    Ok(format!(
        "{} common trials; optimal power {lo:.1} → {hi:.1} dBm, baselines ordered",
        common.len()
    ))
}

/// Criterion 7: power versus the number of secondary receivers.
fn criterion_fig4_trend() -> Result<String, String> {
    let cfg = SimConfig {
        j: 1,
        trials: 200,
        seed: 42_000,
        ..SimConfig::default()
    };
    let sweep = SweepSpec {
        parameter: SweepParameter::K,
        values: vec![1.0, 2.0, 3.0, 4.0, 5.0],
    };
    let schemes = [SchemeId::Optimal, SchemeId::Baseline1];
    let opts = CampaignOptions {
        n_error_samples: 100,
        keep_trial_logs: true,
        ..CampaignOptions::default()
    };
    let result = run_campaign(&cfg, &schemes, &sweep, &opts).map_err(|e| e.to_string())?;
    // per-point paired means; the gap subtracts identical trial sets
    let mut prev = f64::NEG_INFINITY;
    let mut gaps = Vec::new();
    for &v in &sweep.values {
        let row_opt = result
            .rows
            .iter()
            .find(|r| r.sweep_value == v && r.scheme == SchemeId::Optimal)
            .ok_or("missing row")?;
        let row_b1 = result
            .rows
            .iter()
            .find(|r| r.sweep_value == v && r.scheme == SchemeId::Baseline1)
            .ok_or("missing row")?;
        if row_opt.trials_paired < 10 {
            return Err(format!("too few paired trials at K={v}: {}", row_opt.trials_paired));
        }
        if row_opt.mean_power_dbm <= prev {
            return Err(format!("mean power not increasing at K={v}"));
        }
        prev = row_opt.mean_power_dbm;
        gaps.push(row_b1.mean_power_dbm - row_opt.mean_power_dbm);
    }
    if gaps[4] <= gaps[0] {
        return Err(format!(
            "baseline-1 gap did not widen: {:.2} dB at K=1 vs {:.2} dB at K=5",
            gaps[0], gaps[4]
        ));
    }
    Ok(format!(
        "power increasing in K; baseline-1 gap {:.2} → {:.2} dB",
        gaps[0], gaps[4]
    ))
}

/// Criterion 8: power versus the number of transmit antennas.
fn criterion_fig5_trend() -> Result<String, String> {
    let cfg = SimConfig {
        trials: 200,
        seed: 43_000,
        ..SimConfig::default()
    };
    let sweep = SweepSpec {
        parameter: SweepParameter::NT,
        values: vec![5.0, 6.0, 7.0, 8.0, 9.0],
    };
    let schemes = [SchemeId::Optimal];
    let opts = CampaignOptions {
        n_error_samples: 100,
        keep_trial_logs: false,
        ..CampaignOptions::default()
    };
    let result = run_campaign(&cfg, &schemes, &sweep, &opts).map_err(|e| e.to_string())?;
    let mut prev = f64::INFINITY;
    let mut powers = Vec::new();
    for &v in &sweep.values {
        let row = result
            .rows
            .iter()
            .find(|r| r.sweep_value == v && r.scheme == SchemeId::Optimal)
            .ok_or("missing row")?;
        if row.trials_feasible < 10 {
            return Err(format!("too few solved trials at N_T={v}"));
        }
        if row.mean_power_dbm >= prev {
            return Err(format!("mean power not decreasing at N_T={v}"));
        }
        prev = row.mean_power_dbm;
        powers.push(row.mean_power_dbm);
    }
    Ok(format!(
        "power decreasing in N_T: {:.1} → {:.1} dBm",
        powers[0], powers[4]
    ))
}

/// Criterion 9: robustness flags across the Fig-3 campaign.
fn criterion_security_robustness(fig3: &CampaignResult) -> Result<String, String> {
    let mut robust_solved = 0usize;
    for e in &fig3.logs {
        if e.metrics.status != TrialStatus::Solved {
            continue;
        }
        if e.scheme != SchemeId::Baseline2 {
            robust_solved += 1;
            if e.metrics.secrecy_violation {
                return Err(format!(
                    "{:?} secrecy violation at sweep {} trial {}",
                    e.scheme, e.sweep_value, e.trial
                ));
            }
            if e.metrics.interference_violation {
                return Err(format!(
                    "{:?} interference violation at sweep {} trial {}",
                    e.scheme, e.sweep_value, e.trial
                ));
            }
        }
    }
    // baseline 2: positive violation rate, growing with the SINR target
    let rate = |value: f64| -> f64 {
        let solved: Vec<_> = fig3
            .logs
            .iter()
            .filter(|e| {
                e.sweep_value == value
                    && e.scheme == SchemeId::Baseline2
                    && e.metrics.status == TrialStatus::Solved
            })
            .collect();
        if solved.is_empty() {
            return f64::NAN;
        }
        solved
            .iter()
            .filter(|e| e.metrics.interference_violation)
            .count() as f64
            / solved.len() as f64
    };
    let lo = rate(0.0);
    let hi = rate(10.0);
    if !(hi > 0.0) {
        return Err(format!("baseline-2 violation rate at 10 dB is {hi}"));
    }
    if !(hi > lo) {
        return Err(format!(
            "baseline-2 violation rate did not grow: {lo:.3} → {hi:.3}"
        ));
    }
    Ok(format!(
        "{robust_solved} robust solves violation-free; baseline-2 rate {lo:.2} → {hi:.2}"
    ))
}

/// Criterion 10: suboptimal schemes within 1 dB of optimal mean power.
fn criterion_suboptimal_gap(fig3: &CampaignResult, common: &BTreeSet<u64>) -> Result<String, String> {
    let values = [0.0, 2.0, 4.0, 6.0, 8.0, 10.0];
    let mut worst: f64 = 0.0;
    for &v in &values {
        let opt = mean_power_dbm(fig3, v, SchemeId::Optimal, common);
        for scheme in [SchemeId::Scheme1, SchemeId::Scheme2] {
            let s = mean_power_dbm(fig3, v, scheme, common);
            let gap = s - opt;
            worst = worst.max(gap);
            if gap > 1.0 {
                return Err(format!("{:?} gap {gap:.2} dB at {v} dB", scheme));
            }
        }
    }
    Ok(format!("max suboptimal gap {worst:.3} dB (limit 1 dB)"))
}

/// Criterion 11: the closed-form secrecy floor and its campaign-wide hold.
fn criterion_secrecy_floor(fig3: &CampaignResult) -> Result<String, String> {
    let q = QosSpec {
        layers: vec![2, 1],
        gamma_req: vec![
            vec![
                Some(network_sim::db_to_lin(5.0)),
                Some(network_sim::db_to_lin(8.0)),
            ],
            vec![Some(network_sim::db_to_lin(5.0))],
        ],
        gamma_tol: 1.0,
        p_i: vec![1.0; 2],
        r_eav: vec![vec![1.0; 2]; 2],
    };
    let floor = secrecy_floor(&q, 0);
    let expect = (1.0 + 10.0_f64.powf(0.5)).log2() - 1.0;
    if (floor - expect).abs() > 1e-12 {
        return Err(format!("floor {floor} vs closed form {expect}"));
    }
    if (floor - 1.057).abs() > 2e-3 {
        return Err(format!("floor {floor:.4} not ≈ 1.057"));
    }
    // floor compliance across the campaign: no robust scheme ever dips
    for e in &fig3.logs {
        if e.metrics.status != TrialStatus::Solved || e.scheme == SchemeId::Baseline2 {
            continue;
        }
        if e.metrics.secrecy_violation {
            return Err("secrecy floor violated by a robust scheme".into());
        }
    }
    Ok(format!("floor at 5 dB = {floor:.4} bit/s/Hz; held campaign-wide"))
}

/// Criterion 12: determinant–trace bound on 10⁴ random PSD matrices.
fn criterion_det_trace_bound() -> Result<String, String> {
    let failures: usize = (0..10_000u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha12Rng::seed_from_u64(55_000 + i);
            let n = 2 + (i % 5) as usize;
            let rank = 1 + (i % n as u64) as usize;
            let mut m = CMat::zeros(n, n);
            for _ in 0..rank {
                let v = CVec::from_fn(n, |_, _| randn_c(&mut rng));
                m += &v * v.adjoint();
            }
            let a = HermitianMatrix::from_nearly_hermitian(&m).unwrap();
            let det = (CMat::identity(n, n) + a.as_matrix()).determinant().re;
            let tr = a.trace();
            let bound_ok = det >= (1.0 + tr) * (1.0 - 1e-12);
            let equality_ok = if rank == 1 {
                (det - (1.0 + tr)).abs() <= 1e-9 * (1.0 + tr)
            } else {
                det - (1.0 + tr) > 1e-9 * (1.0 + tr)
            };
            usize::from(!(bound_ok && equality_ok))
        })
        .sum();
    if failures > 0 {
        return Err(format!("{failures}/10000 instances violated the bound"));
    }
    Ok("10000 PSD instances: det(I+A) ≥ 1+tr(A), equality iff rank ≤ 1".into())
}

#[test]
fn acceptance_criteria() {
    let mut results: Vec<Criterion> = Vec::new();

    results.push(Criterion {
        name: "1 solver-correctness",
        outcome: criterion_solver_correctness(),
    });

    let instances = solved_table_i(100, 21_000);
    results.push(Criterion {
        name: "2 lmi-soundness-c3",
        outcome: criterion_c3_soundness(&instances),
    });
    results.push(Criterion {
        name: "3 lmi-soundness-c4",
        outcome: criterion_c4_soundness(&instances),
    });
    drop(instances);

    results.push(Criterion {
        name: "4 theorem1-recovery",
        outcome: criterion_theorem1_recovery(),
    });

    let fig3 = fig3_campaign();
    let common = common_feasible_trials(&fig3, &[0.0, 2.0, 4.0, 6.0, 8.0, 10.0]);
    results.push(Criterion {
        name: "5 rank-one-frequency",
        outcome: criterion_rank_one_frequency(&fig3),
    });
    results.push(Criterion {
        name: "6 fig3-power-trend",
        outcome: criterion_fig3_trend(&fig3, &common),
    });
    results.push(Criterion {
        name: "7 fig4-receiver-trend",
        outcome: criterion_fig4_trend(),
    });
    results.push(Criterion {
        name: "8 fig5-antenna-trend",
        outcome: criterion_fig5_trend(),
    });
    results.push(Criterion {
        name: "9 security-robustness",
        outcome: criterion_security_robustness(&fig3),
    });
    results.push(Criterion {
        name: "10 suboptimal-gap",
        outcome: criterion_suboptimal_gap(&fig3, &common),
    });
    results.push(Criterion {
        name: "11 secrecy-floor",
        outcome: criterion_secrecy_floor(&fig3),
    });
    results.push(Criterion {
        name: "12 det-trace-bound",
        outcome: criterion_det_trace_bound(),
    });

    let mut failed = 0;
    for c in &results {
        match &c.outcome {
            Ok(msg) => println!("PASS criterion {} — {msg}", c.name),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {} — {msg}", c.name);
            }
        }
    }
    assert_eq!(failed, 0, "{failed} acceptance criteria failed");
}
