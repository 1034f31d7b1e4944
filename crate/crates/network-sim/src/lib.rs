//! Monte-Carlo simulation of the secure layered-video downlink: channel
//! realization generation, design evaluation against ground truth, and
//! campaign sweeps that reproduce the qualitative system trends.

mod campaign;
mod channel;
mod config;
mod evaluate;

pub use campaign::{
    apply_sweep, run_campaign, run_trial, write_csv, write_trial_logs, CampaignOptions,
    CampaignResult, SchemeId, SweepParameter, SweepRow, SweepSpec, TrialLogEntry,
    RANK_ONE_FLAG_TOL,
};
pub use channel::{
    effective_noise_power, generate_realization, path_gain, path_loss_db, sample_csi_error,
    Realization,
};
pub use config::{db_to_lin, dbm_to_watts, lin_to_db, watts_to_dbm, SimConfig};
pub use evaluate::{
    eavesdropper_rate, evaluate_solution, secrecy_floor, worst_eavesdropper_rate, TrialMetrics,
    TrialStatus,
};
