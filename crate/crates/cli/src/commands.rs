//! Command implementations. Exit codes: 0 solved/success, 2 infeasible,
//! 1 error.

use std::fs;
use std::path::{Path, PathBuf};

use network_sim::{run_campaign, write_csv, write_trial_logs, SchemeId, SweepSpec, TrialStatus};

use crate::run_config::RunConfig;

pub struct CommandOutcome {
    pub exit_code: i32,
    pub summary: String,
}

fn load_config(path: &Path, overrides: &Overrides) -> Result<RunConfig, String> {
    let text = fs::read_to_string(path)
        .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    let mut cfg = RunConfig::parse(&text)?;
    if let Some(seed) = overrides.seed {
        cfg.seed = seed;
    }
    if let Some(trials) = overrides.trials {
        cfg.trials = trials;
    }
    Ok(cfg)
}

#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub trials: Option<usize>,
    pub threads: Option<usize>,
    pub out_dir: Option<PathBuf>,
}

fn ensure_out_dir(dir: &Path) -> Result<(), String> {
    fs::create_dir_all(dir).map_err(|e| format!("cannot create {}: {e}", dir.display()))
}

/// Solve one realization (trial 0) with every requested scheme; write each
/// scheme's beamforming solution and the combined metrics as JSON.
pub fn cmd_solve(config_path: &Path, overrides: &Overrides) -> Result<CommandOutcome, String> {
    let cfg = load_config(config_path, overrides)?;
    let sim = cfg.sim_config();
    sim.validate()?;
    let schemes = cfg.scheme_ids()?;
    let out_dir = overrides
        .out_dir
        .clone()
        .unwrap_or_else(|| PathBuf::from("out"));
    ensure_out_dir(&out_dir)?;

    let rz = network_sim::generate_realization(&sim, 0);
    let mut lines = Vec::new();
    let mut any_infeasible = false;
    let mut any_failed = false;
    let mut metrics_json = Vec::new();
    for (si, &scheme) in schemes.iter().enumerate() {
        let t0 = std::time::Instant::now();
        let solved = solve_scheme(&rz, &sim, scheme, &cfg);
        let ms = t0.elapsed().as_secs_f64() * 1e3;
        match solved {
            Ok((solution, qos)) => {
                let eval_seed = beamforming_recovery::derive_seed(
                    beamforming_recovery::derive_seed(sim.seed, 0),
                    100 + si as u64,
                );
                let mut m = network_sim::evaluate_solution(
                    &solution,
                    &rz.channels,
                    &qos,
                    cfg.n_error_samples,
                    eval_seed,
                );
                m.solve_time_ms = ms;
                lines.push(format!(
                    "{}: solved, total power {:.2} dBm ({:.1} ms)",
                    scheme.name(),
                    m.total_power_dbm,
                    ms
                ));
                metrics_json.push(serde_json::json!({
                    "scheme": scheme.name(),
                    "metrics": m,
                }));
                let path = out_dir.join(format!("solution_{}.json", scheme.name()));
                fs::write(
                    &path,
                    serde_json::to_string_pretty(&solution).map_err(|e| e.to_string())?,
                )
                .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
            }
            Err(TrialStatus::Infeasible) => {
                any_infeasible = true;
                lines.push(format!("{}: infeasible", scheme.name()));
                metrics_json.push(serde_json::json!({
                    "scheme": scheme.name(),
                    "metrics": network_sim::TrialMetrics::unsolved(TrialStatus::Infeasible, ms),
                }));
            }
            Err(_) => {
                any_failed = true;
                lines.push(format!("{}: numerical failure", scheme.name()));
                metrics_json.push(serde_json::json!({
                    "scheme": scheme.name(),
                    "metrics": network_sim::TrialMetrics::unsolved(TrialStatus::Failed, ms),
                }));
            }
        }
    }

    let metrics_path = out_dir.join("metrics.json");
    fs::write(
        &metrics_path,
        serde_json::to_string_pretty(&metrics_json).map_err(|e| e.to_string())?,
    )
    .map_err(|e| format!("cannot write {}: {e}", metrics_path.display()))?;

    let exit_code = if any_failed {
        1
    } else if any_infeasible {
        2
    } else {
        0
    };
    Ok(CommandOutcome {
        exit_code,
        summary: lines.join("\n"),
    })
}

/// Solve one scheme on a realization, returning the design and the QoS
/// its guarantees refer to (folded targets for the single-layer baseline).
fn solve_scheme(
    rz: &network_sim::Realization,
    sim: &network_sim::SimConfig,
    scheme: SchemeId,
    cfg: &RunConfig,
) -> Result<(robust_constraints::BeamformingSolution, robust_constraints::QosSpec), TrialStatus> {
    use beamforming_recovery::{
        construct_rank_one_solution, derive_seed, extract_dual_bundle, scheme1_eigenvector,
        scheme2_randomization,
    };
    use robust_constraints::{
        assemble_baseline1, assemble_baseline2, assemble_relaxed_problem, extract_solution,
    };
    use sdp_core::{solve_sdp, SolveStatus};

    let solver = cfg.solver_config();
    let to_status = |s: SolveStatus| match s {
        SolveStatus::Infeasible => TrialStatus::Infeasible,
        _ => TrialStatus::Failed,
    };
    match scheme {
        SchemeId::Optimal | SchemeId::Scheme1 | SchemeId::Scheme2 => {
            let assembled =
                assemble_relaxed_problem(&rz.channels, &rz.qos).map_err(|_| TrialStatus::Failed)?;
            let sol = solve_sdp(&assembled.problem, &solver).map_err(|_| TrialStatus::Failed)?;
            if sol.status != SolveStatus::Optimal {
                return Err(to_status(sol.status));
            }
            let bf = extract_solution(&sol, &assembled.index);
            let solution = match scheme {
                SchemeId::Optimal => {
                    let duals = extract_dual_bundle(&sol, &assembled.index);
                    construct_rank_one_solution(&bf, &duals, &rz.channels, &rz.qos, &solver)
                        .map(|o| o.solution)
                        .map_err(|_| TrialStatus::Failed)?
                }
                SchemeId::Scheme1 => scheme1_eigenvector(&bf, &rz.channels, &rz.qos, &solver)
                    .map_err(|_| TrialStatus::Failed)?,
                SchemeId::Scheme2 => scheme2_randomization(
                    &bf,
                    &rz.channels,
                    &rz.qos,
                    cfg.scheme2_tries,
                    derive_seed(derive_seed(sim.seed, 0), 7),
                    &solver,
                )
                .map_err(|_| TrialStatus::Failed)?,
                _ => unreachable!(),
            };
            Ok((solution, rz.qos.clone()))
        }
        SchemeId::Baseline1 => {
            let (assembled, folded) =
                assemble_baseline1(&rz.channels, &rz.qos).map_err(|_| TrialStatus::Failed)?;
            let sol = solve_sdp(&assembled.problem, &solver).map_err(|_| TrialStatus::Failed)?;
            if sol.status != SolveStatus::Optimal {
                return Err(to_status(sol.status));
            }
            let bf = extract_solution(&sol, &assembled.index);
            let duals = extract_dual_bundle(&sol, &assembled.index);
            let solution =
                construct_rank_one_solution(&bf, &duals, &rz.channels, &folded, &solver)
                    .map(|o| o.solution)
                    .map_err(|_| TrialStatus::Failed)?;
            Ok((solution, folded))
        }
        SchemeId::Baseline2 => {
            let assembled =
                assemble_baseline2(&rz.channels, &rz.qos).map_err(|_| TrialStatus::Failed)?;
            let sol = solve_sdp(&assembled.problem, &solver).map_err(|_| TrialStatus::Failed)?;
            if sol.status != SolveStatus::Optimal {
                return Err(to_status(sol.status));
            }
            Ok((extract_solution(&sol, &assembled.index), rz.qos.clone()))
        }
    }
}

/// Run the configured sweep, write the metrics CSV and per-trial JSON
/// lines, and print the summary table.
pub fn cmd_campaign(config_path: &Path, overrides: &Overrides) -> Result<CommandOutcome, String> {
    let cfg = load_config(config_path, overrides)?;
    let sim = cfg.sim_config();
    sim.validate()?;
    let schemes = cfg.scheme_ids()?;
    let sweep = cfg
        .sweep_spec()?
        .unwrap_or_else(|| SweepSpec::single_point(&sim));
    let opts = cfg.campaign_options(overrides.threads, true);
    let out_dir = overrides
        .out_dir
        .clone()
        .unwrap_or_else(|| PathBuf::from("out"));
    ensure_out_dir(&out_dir)?;

    let result = run_campaign(&sim, &schemes, &sweep, &opts)?;

    let csv_path = out_dir.join("campaign.csv");
    let mut csv = Vec::new();
    write_csv(&result, &mut csv).map_err(|e| e.to_string())?;
    fs::write(&csv_path, &csv).map_err(|e| format!("cannot write {}: {e}", csv_path.display()))?;

    let log_path = out_dir.join("trials.jsonl");
    let mut logs = Vec::new();
    write_trial_logs(&result, &mut logs).map_err(|e| e.to_string())?;
    fs::write(&log_path, &logs).map_err(|e| format!("cannot write {}: {e}", log_path.display()))?;

    let mut summary = String::new();
    summary.push_str(&format!(
        "{:>14} {:>10} {:>9} {:>15} {:>18} {:>14}\n",
        "sweep", "scheme", "feasible", "mean power dBm", "mean secrecy b/s/Hz", "int viol rate"
    ));
    for row in &result.rows {
        summary.push_str(&format!(
            "{:>14.3} {:>10} {:>9} {:>15.2} {:>18.3} {:>14.3}\n",
            row.sweep_value,
            row.scheme.name(),
            format!("{}/{}", row.trials_feasible, row.trials_total),
            row.mean_power_dbm,
            row.mean_secrecy_l1_bps_hz,
            row.interference_violation_rate,
        ));
    }
    summary.push_str(&format!("wrote {} and {}", csv_path.display(), log_path.display()));
    Ok(CommandOutcome {
        exit_code: 0,
        summary,
    })
}
