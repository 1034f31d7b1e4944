//! JSON run configuration: Table-I defaults for everything except the
//! trial count, which must be stated explicitly. Powers are dBm and SINRs
//! dB at this boundary only.

use network_sim::{CampaignOptions, SchemeId, SimConfig, SweepParameter, SweepSpec};
use sdp_core::SolverConfig;
use serde::{Deserialize, Serialize};

fn default_seed() -> u64 {
    1
}
fn default_k() -> usize {
    2
}
fn default_j() -> usize {
    2
}
fn default_n_t() -> usize {
    8
}
fn default_n_pr() -> usize {
    2
}
fn default_n_pt() -> usize {
    8
}
fn default_layers() -> usize {
    2
}
fn default_gamma_base_db() -> f64 {
    5.0
}
fn default_gamma_step_db() -> f64 {
    3.0
}
fn default_gamma_tol_db() -> f64 {
    0.0
}
fn default_r_eav() -> f64 {
    1.0
}
fn default_p_i_dbm() -> f64 {
    -110.35
}
fn default_thermal_dbm() -> f64 {
    -107.35
}
fn default_primary_tx_power_dbm() -> f64 {
    5.0
}
fn default_primary_distance_m() -> f64 {
    500.0
}
fn default_cell_radius_m() -> f64 {
    500.0
}
fn default_reference_distance_m() -> f64 {
    30.0
}
fn default_carrier_ghz() -> f64 {
    2.6
}
fn default_csi_error() -> f64 {
    0.05
}
fn default_schemes() -> Vec<String> {
    vec!["optimal".into()]
}
fn default_n_error_samples() -> usize {
    1000
}
fn default_scheme2_tries() -> usize {
    50
}
fn default_gap_tol() -> f64 {
    1e-8
}
fn default_feas_tol() -> f64 {
    1e-8
}
fn default_max_iterations() -> usize {
    200
}
fn default_step_fraction() -> f64 {
    0.98
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub parameter: String,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub trials: usize,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_k")]
    pub k: usize,
    #[serde(default = "default_j")]
    pub j: usize,
    #[serde(default = "default_n_t")]
    pub n_t: usize,
    #[serde(default = "default_n_pr")]
    pub n_pr: usize,
    #[serde(default = "default_n_pt")]
    pub n_pt: usize,
    #[serde(default = "default_layers")]
    pub layers: usize,
    #[serde(default = "default_gamma_base_db")]
    pub gamma_base_db: f64,
    #[serde(default = "default_gamma_step_db")]
    pub gamma_step_db: f64,
    #[serde(default = "default_gamma_tol_db")]
    pub gamma_tol_db: f64,
    #[serde(default = "default_r_eav")]
    pub r_eav_bps_hz: f64,
    #[serde(default = "default_p_i_dbm")]
    pub p_i_dbm: f64,
    #[serde(default = "default_thermal_dbm")]
    pub thermal_dbm: f64,
    #[serde(default = "default_primary_tx_power_dbm")]
    pub primary_tx_power_dbm: f64,
    #[serde(default = "default_primary_distance_m")]
    pub primary_distance_m: f64,
    #[serde(default = "default_cell_radius_m")]
    pub cell_radius_m: f64,
    #[serde(default = "default_reference_distance_m")]
    pub reference_distance_m: f64,
    #[serde(default = "default_carrier_ghz")]
    pub carrier_ghz: f64,
    #[serde(default = "default_csi_error")]
    pub csi_error_normalized: f64,
    #[serde(default = "default_schemes")]
    pub schemes: Vec<String>,
    #[serde(default)]
    pub sweep: Option<SweepConfig>,
    #[serde(default = "default_n_error_samples")]
    pub n_error_samples: usize,
    #[serde(default = "default_scheme2_tries")]
    pub scheme2_tries: usize,
    #[serde(default = "default_gap_tol")]
    pub gap_tol: f64,
    #[serde(default = "default_feas_tol")]
    pub feas_tol: f64,
    #[serde(default = "default_max_iterations")]
    pub max_iterations: usize,
    #[serde(default = "default_step_fraction")]
    pub step_fraction: f64,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<RunConfig, String> {
        serde_json::from_str(text).map_err(|e| format!("config error: {e}"))
    }

    pub fn sim_config(&self) -> SimConfig {
        SimConfig {
            k: self.k,
            j: self.j,
            n_t: self.n_t,
            n_pr: self.n_pr,
            n_pt: self.n_pt,
            layers: self.layers,
            gamma_base_db: self.gamma_base_db,
            gamma_step_db: self.gamma_step_db,
            gamma_tol_db: self.gamma_tol_db,
            r_eav_bps_hz: self.r_eav_bps_hz,
            p_i_dbm: self.p_i_dbm,
            thermal_dbm: self.thermal_dbm,
            primary_tx_power_dbm: self.primary_tx_power_dbm,
            primary_distance_m: self.primary_distance_m,
            cell_radius_m: self.cell_radius_m,
            reference_distance_m: self.reference_distance_m,
            carrier_ghz: self.carrier_ghz,
            csi_error_normalized: self.csi_error_normalized,
            trials: self.trials,
            seed: self.seed,
        }
    }

    pub fn scheme_ids(&self) -> Result<Vec<SchemeId>, String> {
        if self.schemes.is_empty() {
            return Err("config error: at least one scheme required".into());
        }
        self.schemes
            .iter()
            .map(|s| {
                SchemeId::parse(s).ok_or_else(|| {
                    format!(
                        "config error: unknown scheme '{s}' (expected one of optimal, \
                         scheme1, scheme2, baseline1, baseline2)"
                    )
                })
            })
            .collect()
    }

    pub fn sweep_spec(&self) -> Result<Option<SweepSpec>, String> {
        match &self.sweep {
            None => Ok(None),
            Some(sw) => {
                let parameter = SweepParameter::parse(&sw.parameter).ok_or_else(|| {
                    format!(
                        "config error: unknown sweep parameter '{}' (expected one of \
                         gamma_base_db, k, n_t, j, csi_error_normalized, p_i_dbm)",
                        sw.parameter
                    )
                })?;
                if sw.values.is_empty() {
                    return Err("config error: sweep values must be nonempty".into());
                }
                Ok(Some(SweepSpec {
                    parameter,
                    values: sw.values.clone(),
                }))
            }
        }
    }

    pub fn solver_config(&self) -> SolverConfig {
        SolverConfig {
            gap_tol: self.gap_tol,
            feas_tol: self.feas_tol,
            max_iterations: self.max_iterations,
            step_fraction: self.step_fraction,
        }
    }

    pub fn campaign_options(&self, threads: Option<usize>, keep_logs: bool) -> CampaignOptions {
        CampaignOptions {
            n_error_samples: self.n_error_samples,
            scheme2_tries: self.scheme2_tries,
            solver: self.solver_config(),
            threads,
            keep_trial_logs: keep_logs,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn missing_trials_is_diagnosed() {
        let err = RunConfig::parse("{}").unwrap_err();
        assert!(err.contains("trials"), "diagnostic should name the field: {err}");
    }

    #[test]
    fn round_trip_identity() {
        let cfg = RunConfig::parse(r#"{"trials": 7, "gamma_base_db": 3.5, "schemes": ["optimal", "baseline2"]}"#)
            .unwrap();
        let text = serde_json::to_string(&cfg).unwrap();
        let again = RunConfig::parse(&text).unwrap();
        assert_eq!(cfg, again);
    }

    #[test]
    fn unknown_field_rejected() {
        let err = RunConfig::parse(r#"{"trials": 1, "bogus": 2}"#).unwrap_err();
        assert!(err.contains("bogus"));
    }
}
