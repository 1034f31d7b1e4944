//! Monte-Carlo campaign driver: sweeps one parameter, runs independent
//! trials in parallel with per-trial derived seeds, solves the requested
//! schemes on each realization, and aggregates deterministic statistics
//! (collection is trial-ordered and sums use a fixed-shape pairwise tree,
//! so parallel and serial runs agree bit for bit).

use std::io::Write;
use std::time::Instant;

use beamforming_recovery::{
    construct_rank_one_solution, derive_seed, extract_dual_bundle, scheme1_eigenvector,
    scheme2_randomization, RecoveryError,
};
use rayon::prelude::*;
use robust_constraints::{
    assemble_baseline1, assemble_baseline2, assemble_relaxed_problem, extract_solution,
    BeamformingSolution, QosSpec,
};
use sdp_core::{solve_sdp, SolveStatus, SolverConfig};
use serde::{Deserialize, Serialize};

use crate::channel::{generate_realization, Realization};
use crate::config::{watts_to_dbm, SimConfig};
use crate::evaluate::{evaluate_solution, TrialMetrics, TrialStatus};

pub const RANK_ONE_FLAG_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SchemeId {
    Optimal,
    Scheme1,
    Scheme2,
    Baseline1,
    Baseline2,
}

impl SchemeId {
    pub fn name(&self) -> &'static str {
        match self {
            SchemeId::Optimal => "optimal",
            SchemeId::Scheme1 => "scheme1",
            SchemeId::Scheme2 => "scheme2",
            SchemeId::Baseline1 => "baseline1",
            SchemeId::Baseline2 => "baseline2",
        }
    }

    pub fn parse(s: &str) -> Option<SchemeId> {
        match s {
            "optimal" => Some(SchemeId::Optimal),
            "scheme1" => Some(SchemeId::Scheme1),
            "scheme2" => Some(SchemeId::Scheme2),
            "baseline1" => Some(SchemeId::Baseline1),
            "baseline2" => Some(SchemeId::Baseline2),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParameter {
    GammaBaseDb,
    K,
    NT,
    J,
    CsiErrorNormalized,
    PIdBm,
}

impl SweepParameter {
    pub fn name(&self) -> &'static str {
        match self {
            SweepParameter::GammaBaseDb => "gamma_base_db",
            SweepParameter::K => "k",
            SweepParameter::NT => "n_t",
            SweepParameter::J => "j",
            SweepParameter::CsiErrorNormalized => "csi_error_normalized",
            SweepParameter::PIdBm => "p_i_dbm",
        }
    }

    pub fn parse(s: &str) -> Option<SweepParameter> {
        match s {
            "gamma_base_db" => Some(SweepParameter::GammaBaseDb),
            "k" => Some(SweepParameter::K),
            "n_t" => Some(SweepParameter::NT),
            "j" => Some(SweepParameter::J),
            "csi_error_normalized" => Some(SweepParameter::CsiErrorNormalized),
            "p_i_dbm" => Some(SweepParameter::PIdBm),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepSpec {
    pub parameter: SweepParameter,
    pub values: Vec<f64>,
}

impl SweepSpec {
    /// A single-point "sweep" at the configuration's own values.
    pub fn single_point(cfg: &SimConfig) -> SweepSpec {
        SweepSpec {
            parameter: SweepParameter::GammaBaseDb,
            values: vec![cfg.gamma_base_db],
        }
    }
}

#[derive(Debug, Clone)]
pub struct CampaignOptions {
    pub n_error_samples: usize,
    pub scheme2_tries: usize,
    pub solver: SolverConfig,
    pub threads: Option<usize>,
    /// Retain per-trial logs in the result (JSON-lines output).
    pub keep_trial_logs: bool,
}

impl Default for CampaignOptions {
    fn default() -> Self {
        Self {
            n_error_samples: 1000,
            scheme2_tries: 50,
            solver: SolverConfig::default(),
            threads: None,
            keep_trial_logs: false,
        }
    }
}

pub fn apply_sweep(cfg: &SimConfig, parameter: SweepParameter, value: f64) -> SimConfig {
    let mut c = cfg.clone();
    match parameter {
        SweepParameter::GammaBaseDb => c.gamma_base_db = value,
        SweepParameter::K => c.k = value.round() as usize,
        SweepParameter::NT => c.n_t = value.round() as usize,
        SweepParameter::J => c.j = value.round() as usize,
        SweepParameter::CsiErrorNormalized => c.csi_error_normalized = value,
        SweepParameter::PIdBm => c.p_i_dbm = value,
    }
    c
}

fn status_of(solve: SolveStatus) -> TrialStatus {
    match solve {
        SolveStatus::Optimal => TrialStatus::Solved,
        SolveStatus::Infeasible => TrialStatus::Infeasible,
        _ => TrialStatus::Failed,
    }
}

fn recovery_status(err: &RecoveryError) -> TrialStatus {
    match err {
        RecoveryError::SchemeInfeasible {
            status: SolveStatus::Infeasible,
        } => TrialStatus::Infeasible,
        _ => TrialStatus::Failed,
    }
}

struct EvalCtx<'a> {
    rz: &'a Realization,
    n_error_samples: usize,
    eval_seed: u64,
}

fn evaluate(ctx: &EvalCtx, sol: &BeamformingSolution, q: &QosSpec, base_ms: f64) -> TrialMetrics {
    let mut m = evaluate_solution(sol, &ctx.rz.channels, q, ctx.n_error_samples, ctx.eval_seed);
    m.solve_time_ms = base_ms;
    m
}

/// Solve every requested scheme on one realization.
pub fn run_trial(
    cfg: &SimConfig,
    trial_index: u64,
    schemes: &[SchemeId],
    opts: &CampaignOptions,
) -> Vec<(SchemeId, TrialMetrics)> {
    let rz = generate_realization(cfg, trial_index);
    let trial_seed = derive_seed(cfg.seed, trial_index);
    let mut out = Vec::with_capacity(schemes.len());

    let needs_relaxed = schemes.iter().any(|s| {
        matches!(
            s,
            SchemeId::Optimal | SchemeId::Scheme1 | SchemeId::Scheme2
        )
    });
    // (solution, duals, rank-one flag, elapsed ms) or terminal status
    let relaxed = if needs_relaxed {
        let t0 = Instant::now();
        match assemble_relaxed_problem(&rz.channels, &rz.qos) {
            Ok(assembled) => match solve_sdp(&assembled.problem, &opts.solver) {
                Ok(sol) => {
                    let ms = t0.elapsed().as_secs_f64() * 1e3;
                    if sol.status == SolveStatus::Optimal {
                        let bf = extract_solution(&sol, &assembled.index);
                        let duals = extract_dual_bundle(&sol, &assembled.index);
                        let rank_one = bf.all_rank_one(RANK_ONE_FLAG_TOL);
                        Ok((bf, duals, rank_one, ms))
                    } else {
                        Err((status_of(sol.status), ms))
                    }
                }
                Err(_) => Err((TrialStatus::Failed, t0.elapsed().as_secs_f64() * 1e3)),
            },
            Err(_) => Err((TrialStatus::Failed, 0.0)),
        }
    } else {
        Err((TrialStatus::Failed, 0.0))
    };

    for (si, &scheme) in schemes.iter().enumerate() {
        let ctx = EvalCtx {
            rz: &rz,
            n_error_samples: opts.n_error_samples,
            eval_seed: derive_seed(trial_seed, 100 + si as u64),
        };
        let metrics = match scheme {
            SchemeId::Optimal => match &relaxed {
                Ok((bf, duals, rank_one, ms)) => {
                    let t0 = Instant::now();
                    match construct_rank_one_solution(bf, duals, &rz.channels, &rz.qos, &opts.solver)
                    {
                        Ok(outcome) => {
                            let total_ms = ms + t0.elapsed().as_secs_f64() * 1e3;
                            let mut m = evaluate(&ctx, &outcome.solution, &rz.qos, total_ms);
                            m.rank_one_at_relaxation = Some(*rank_one);
                            m
                        }
                        Err(_) => {
                            let mut m = TrialMetrics::unsolved(TrialStatus::Failed, *ms);
                            m.rank_one_at_relaxation = Some(*rank_one);
                            m
                        }
                    }
                }
                Err((status, ms)) => TrialMetrics::unsolved(*status, *ms),
            },
            SchemeId::Scheme1 => match &relaxed {
                Ok((bf, _, rank_one, ms)) => {
                    let t0 = Instant::now();
                    match scheme1_eigenvector(bf, &rz.channels, &rz.qos, &opts.solver) {
                        Ok(sol) => {
                            let total_ms = ms + t0.elapsed().as_secs_f64() * 1e3;
                            let mut m = evaluate(&ctx, &sol, &rz.qos, total_ms);
                            m.rank_one_at_relaxation = Some(*rank_one);
                            m
                        }
                        Err(e) => TrialMetrics::unsolved(recovery_status(&e), *ms),
                    }
                }
                Err((status, ms)) => TrialMetrics::unsolved(*status, *ms),
            },
            SchemeId::Scheme2 => match &relaxed {
                Ok((bf, _, rank_one, ms)) => {
                    let t0 = Instant::now();
                    let seed2 = derive_seed(trial_seed, 7);
                    match scheme2_randomization(
                        bf,
                        &rz.channels,
                        &rz.qos,
                        opts.scheme2_tries,
                        seed2,
                        &opts.solver,
                    ) {
                        Ok(sol) => {
                            let total_ms = ms + t0.elapsed().as_secs_f64() * 1e3;
                            let mut m = evaluate(&ctx, &sol, &rz.qos, total_ms);
                            m.rank_one_at_relaxation = Some(*rank_one);
                            m
                        }
                        Err(e) => TrialMetrics::unsolved(recovery_status(&e), *ms),
                    }
                }
                Err((status, ms)) => TrialMetrics::unsolved(*status, *ms),
            },
            SchemeId::Baseline1 => {
                let t0 = Instant::now();
                match assemble_baseline1(&rz.channels, &rz.qos) {
                    Ok((assembled, folded)) => match solve_sdp(&assembled.problem, &opts.solver) {
                        Ok(sol) if sol.status == SolveStatus::Optimal => {
                            let bf = extract_solution(&sol, &assembled.index);
                            let duals = extract_dual_bundle(&sol, &assembled.index);
                            let rank_one = bf.all_rank_one(RANK_ONE_FLAG_TOL);
                            match construct_rank_one_solution(
                                &bf,
                                &duals,
                                &rz.channels,
                                &folded,
                                &opts.solver,
                            ) {
                                Ok(outcome) => {
                                    let ms = t0.elapsed().as_secs_f64() * 1e3;
                                    let mut m = evaluate(&ctx, &outcome.solution, &folded, ms);
                                    m.rank_one_at_relaxation = Some(rank_one);
                                    m
                                }
                                Err(_) => TrialMetrics::unsolved(
                                    TrialStatus::Failed,
                                    t0.elapsed().as_secs_f64() * 1e3,
                                ),
                            }
                        }
                        Ok(sol) => TrialMetrics::unsolved(
                            status_of(sol.status),
                            t0.elapsed().as_secs_f64() * 1e3,
                        ),
                        Err(_) => TrialMetrics::unsolved(
                            TrialStatus::Failed,
                            t0.elapsed().as_secs_f64() * 1e3,
                        ),
                    },
                    Err(_) => TrialMetrics::unsolved(TrialStatus::Failed, 0.0),
                }
            }
            SchemeId::Baseline2 => {
                let t0 = Instant::now();
                match assemble_baseline2(&rz.channels, &rz.qos) {
                    Ok(assembled) => match solve_sdp(&assembled.problem, &opts.solver) {
                        Ok(sol) if sol.status == SolveStatus::Optimal => {
                            let bf = extract_solution(&sol, &assembled.index);
                            let rank_one = bf.all_rank_one(RANK_ONE_FLAG_TOL);
                            let ms = t0.elapsed().as_secs_f64() * 1e3;
                            // evaluated at the relaxed optimum; the metrics
                            // are rank-agnostic trace forms
                            let mut m = evaluate(&ctx, &bf, &rz.qos, ms);
                            m.rank_one_at_relaxation = Some(rank_one);
                            m
                        }
                        Ok(sol) => TrialMetrics::unsolved(
                            status_of(sol.status),
                            t0.elapsed().as_secs_f64() * 1e3,
                        ),
                        Err(_) => TrialMetrics::unsolved(
                            TrialStatus::Failed,
                            t0.elapsed().as_secs_f64() * 1e3,
                        ),
                    },
                    Err(_) => TrialMetrics::unsolved(TrialStatus::Failed, 0.0),
                }
            }
        };
        out.push((scheme, metrics));
    }
    out
}

/// One aggregated row of the metrics table.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepRow {
    pub sweep_param: String,
    pub sweep_value: f64,
    pub scheme: SchemeId,
    pub trials_total: usize,
    /// Trials this scheme solved.
    pub trials_feasible: usize,
    /// Trials where every requested scheme solved (the paired set behind
    /// the mean columns).
    pub trials_paired: usize,
    pub mean_power_dbm: f64,
    pub mean_secrecy_l1_bps_hz: f64,
    pub mean_pu_interference_dbm: f64,
    pub secrecy_violation_rate: f64,
    pub interference_violation_rate: f64,
    pub rank_one_rate: f64,
    pub mean_solve_ms: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct TrialLogEntry {
    pub sweep_value: f64,
    pub trial: u64,
    pub scheme: SchemeId,
    pub metrics: TrialMetrics,
}

#[derive(Debug, Clone)]
pub struct CampaignResult {
    pub parameter: SweepParameter,
    pub rows: Vec<SweepRow>,
    pub logs: Vec<TrialLogEntry>,
}

/// Fixed-shape pairwise tree sum: deterministic regardless of thread
/// scheduling, and better conditioned than a running sum.
fn tree_sum(values: &[f64]) -> f64 {
    match values.len() {
        0 => 0.0,
        1 => values[0],
        n => {
            let mid = n / 2;
            tree_sum(&values[..mid]) + tree_sum(&values[mid..])
        }
    }
}

fn tree_mean(values: &[f64]) -> f64 {
    if values.is_empty() {
        f64::NAN
    } else {
        tree_sum(values) / values.len() as f64
    }
}

pub fn run_campaign(
    cfg: &SimConfig,
    schemes: &[SchemeId],
    sweep: &SweepSpec,
    opts: &CampaignOptions,
) -> Result<CampaignResult, String> {
    if schemes.is_empty() {
        return Err("at least one scheme required".into());
    }
    let pool = match opts.threads {
        Some(n) => Some(
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| e.to_string())?,
        ),
        None => None,
    };

    let mut rows = Vec::new();
    let mut logs = Vec::new();
    for &value in &sweep.values {
        let point_cfg = apply_sweep(cfg, sweep.parameter, value);
        point_cfg.validate()?;
        let run = || -> Vec<Vec<(SchemeId, TrialMetrics)>> {
            (0..point_cfg.trials as u64)
                .into_par_iter()
                .map(|t| run_trial(&point_cfg, t, schemes, opts))
                .collect()
        };
        let trial_results = match &pool {
            Some(p) => p.install(run),
            None => run(),
        };

        // Paired inclusion: all schemes solved.
        let paired: Vec<bool> = trial_results
            .iter()
            .map(|r| r.iter().all(|(_, m)| m.status == TrialStatus::Solved))
            .collect();
        let paired_count = paired.iter().filter(|&&p| p).count();

        for (si, &scheme) in schemes.iter().enumerate() {
            let solved: Vec<&TrialMetrics> = trial_results
                .iter()
                .map(|r| &r[si].1)
                .filter(|m| m.status == TrialStatus::Solved)
                .collect();
            let included: Vec<&TrialMetrics> = trial_results
                .iter()
                .zip(paired.iter())
                .filter(|(_, &p)| p)
                .map(|(r, _)| &r[si].1)
                .collect();

            let power_w: Vec<f64> = included
                .iter()
                .map(|m| 10.0_f64.powf((m.total_power_dbm - 30.0) / 10.0))
                .collect();
            let secrecy: Vec<f64> = included
                .iter()
                .flat_map(|m| m.secrecy_rate_layer1.iter().copied())
                .collect();
            let interference_w: Vec<f64> = included
                .iter()
                .flat_map(|m| {
                    m.pu_interference_dbm
                        .iter()
                        .map(|d| 10.0_f64.powf((d - 30.0) / 10.0))
                })
                .collect();
            let solve_ms: Vec<f64> = solved.iter().map(|m| m.solve_time_ms).collect();
            let sec_viol =
                solved.iter().filter(|m| m.secrecy_violation).count() as f64;
            let int_viol = solved
                .iter()
                .filter(|m| m.interference_violation)
                .count() as f64;
            let rank_flags: Vec<f64> = solved
                .iter()
                .filter_map(|m| m.rank_one_at_relaxation.map(|b| if b { 1.0 } else { 0.0 }))
                .collect();

            rows.push(SweepRow {
                sweep_param: sweep.parameter.name().to_string(),
                sweep_value: value,
                scheme,
                trials_total: point_cfg.trials,
                trials_feasible: solved.len(),
                trials_paired: paired_count,
                mean_power_dbm: watts_to_dbm(tree_mean(&power_w)),
                mean_secrecy_l1_bps_hz: tree_mean(&secrecy),
                mean_pu_interference_dbm: if interference_w.is_empty() {
                    f64::NAN
                } else {
                    watts_to_dbm(tree_mean(&interference_w))
                },
                secrecy_violation_rate: if solved.is_empty() {
                    f64::NAN
                } else {
                    sec_viol / solved.len() as f64
                },
                interference_violation_rate: if solved.is_empty() {
                    f64::NAN
                } else {
                    int_viol / solved.len() as f64
                },
                rank_one_rate: tree_mean(&rank_flags),
                mean_solve_ms: tree_mean(&solve_ms),
            });
        }

        if opts.keep_trial_logs {
            for (t, r) in trial_results.into_iter().enumerate() {
                for (scheme, metrics) in r {
                    logs.push(TrialLogEntry {
                        sweep_value: value,
                        trial: t as u64,
                        scheme,
                        metrics,
                    });
                }
            }
        }
    }

    Ok(CampaignResult {
        parameter: sweep.parameter,
        rows,
        logs,
    })
}

fn fmt(v: f64) -> String {
    if v.is_nan() {
        "nan".to_string()
    } else {
        format!("{v:.6}")
    }
}

/// Versioned CSV emission: one row per (sweep value, scheme).
pub fn write_csv(result: &CampaignResult, out: &mut impl Write) -> std::io::Result<()> {
    writeln!(out, "# schema=1")?;
    writeln!(
        out,
        "sweep_param,sweep_value,scheme,trials_feasible,mean_power_dbm,\
         mean_secrecy_l1_bps_hz,mean_pu_interference_dbm,secrecy_violation_rate,\
         interference_violation_rate,rank_one_rate,mean_solve_ms"
    )?;
    for r in &result.rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{}",
            r.sweep_param,
            fmt(r.sweep_value),
            r.scheme.name(),
            r.trials_feasible,
            fmt(r.mean_power_dbm),
            fmt(r.mean_secrecy_l1_bps_hz),
            fmt(r.mean_pu_interference_dbm),
            fmt(r.secrecy_violation_rate),
            fmt(r.interference_violation_rate),
            fmt(r.rank_one_rate),
            fmt(r.mean_solve_ms),
        )?;
    }
    Ok(())
}

/// Per-trial logs as JSON lines.
pub fn write_trial_logs(result: &CampaignResult, out: &mut impl Write) -> std::io::Result<()> {
    for entry in &result.logs {
        let line = serde_json::to_string(entry).map_err(std::io::Error::other)?;
        writeln!(out, "{line}")?;
    }
    Ok(())
}
