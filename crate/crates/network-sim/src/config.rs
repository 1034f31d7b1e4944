//! Simulation configuration and unit conversions. All internal math runs
//! on linear quantities (Watts, ratios); dB and dBm appear only at this
//! boundary.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default)]
pub struct SimConfig {
    /// Secondary (video) receivers.
    pub k: usize,
    /// Primary receivers.
    pub j: usize,
    /// Transmit antennas at the secondary transmitter.
    pub n_t: usize,
    /// Receive antennas per primary receiver.
    pub n_pr: usize,
    /// Antennas at the primary transmitter.
    pub n_pt: usize,
    /// Video layers for the premium receiver; the remaining receivers
    /// carry a guaranteed base layer only.
    pub layers: usize,
    pub gamma_base_db: f64,
    /// Per-layer SINR increment: layer l requires `gamma_base + l·step` dB.
    pub gamma_step_db: f64,
    pub gamma_tol_db: f64,
    pub r_eav_bps_hz: f64,
    pub p_i_dbm: f64,
    pub thermal_dbm: f64,
    pub primary_tx_power_dbm: f64,
    pub primary_distance_m: f64,
    pub cell_radius_m: f64,
    pub reference_distance_m: f64,
    pub carrier_ghz: f64,
    /// Normalized maximum CSI estimation error `ε² / ‖G‖²_F`.
    pub csi_error_normalized: f64,
    pub trials: usize,
    pub seed: u64,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            k: 2,
            j: 2,
            n_t: 8,
            n_pr: 2,
            n_pt: 8,
            layers: 2,
            gamma_base_db: 5.0,
            gamma_step_db: 3.0,
            gamma_tol_db: 0.0,
            r_eav_bps_hz: 1.0,
            p_i_dbm: -110.35,
            thermal_dbm: -107.35,
            primary_tx_power_dbm: 5.0,
            primary_distance_m: 500.0,
            cell_radius_m: 500.0,
            reference_distance_m: 30.0,
            carrier_ghz: 2.6,
            csi_error_normalized: 0.05,
            trials: 200,
            seed: 1,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<(), String> {
        if self.k == 0 || self.n_t == 0 || self.layers == 0 || self.trials == 0 {
            return Err("counts must be positive".into());
        }
        if self.j > 0 && self.n_t <= self.n_pr {
            return Err(format!(
                "n_t ({}) must exceed n_pr ({})",
                self.n_t, self.n_pr
            ));
        }
        if !(self.reference_distance_m > 0.0)
            || self.cell_radius_m < self.reference_distance_m
        {
            return Err("cell radius must be at least the reference distance".into());
        }
        if !(self.carrier_ghz > 0.0) {
            return Err("carrier frequency must be positive".into());
        }
        if !(self.csi_error_normalized >= 0.0) {
            return Err("csi_error_normalized must be nonnegative".into());
        }
        if self.j > 0 && !(self.csi_error_normalized > 0.0) {
            return Err("robust design requires a positive CSI error bound".into());
        }
        if !(self.r_eav_bps_hz > 0.0) {
            return Err("r_eav_bps_hz must be positive".into());
        }
        Ok(())
    }
}

pub fn db_to_lin(db: f64) -> f64 {
    10.0_f64.powf(db / 10.0)
}

pub fn lin_to_db(lin: f64) -> f64 {
    10.0 * lin.log10()
}

pub fn dbm_to_watts(dbm: f64) -> f64 {
    10.0_f64.powf((dbm - 30.0) / 10.0)
}

pub fn watts_to_dbm(w: f64) -> f64 {
    10.0 * w.log10() + 30.0
}
