//! Channel realization generation: urban-micro NLOS path loss, Rayleigh
//! small-scale fading, uniformly placed receivers, and CSI errors drawn
//! uniformly inside the Frobenius uncertainty ball.

use hermitian_linalg::{C64, CMat, CVec};
use rand::{Rng, RngExt};
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, StandardNormal};
use robust_constraints::{NetworkChannels, QosSpec};

use crate::config::{db_to_lin, dbm_to_watts, SimConfig};
use beamforming_recovery::derive_seed;
use rand::SeedableRng;

/// 3GPP urban-micro NLOS path loss, in dB: `22.7 + 36.7·log10(d_m) +
/// 26·log10(f_GHz)`; transceiver gains of 0 dBi leave it unadjusted.
pub fn path_loss_db(distance_m: f64, carrier_ghz: f64) -> f64 {
    22.7 + 36.7 * distance_m.log10() + 26.0 * carrier_ghz.log10()
}

pub fn path_gain(distance_m: f64, carrier_ghz: f64) -> f64 {
    10.0_f64.powf(-path_loss_db(distance_m.max(1.0), carrier_ghz) / 10.0)
}

fn randn_c(rng: &mut impl Rng) -> C64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Average received power at a secondary receiver from the primary
/// transmitter plus thermal noise: the equivalent-noise model for the
/// primary-network interference.
pub fn effective_noise_power(cfg: &SimConfig, distance_to_primary_tx_m: f64) -> f64 {
    let thermal = dbm_to_watts(cfg.thermal_dbm);
    let ptx = dbm_to_watts(cfg.primary_tx_power_dbm);
    thermal + ptx * path_gain(distance_to_primary_tx_m, cfg.carrier_ghz)
}

/// Uniform draw from the Frobenius ball of radius `eps`: uniformly
/// directed matrix scaled by `eps·u^(1/(2·n_t·n_pr))` (the real dimension
/// of the complex matrix space is `2·n_t·n_pr`).
pub fn sample_csi_error(rng: &mut impl Rng, n_t: usize, n_pr: usize, eps: f64) -> CMat {
    let mut d = CMat::from_fn(n_t, n_pr, |_, _| randn_c(rng));
    let norm = hermitian_linalg::fro_norm(&d);
    if norm <= 0.0 {
        return CMat::zeros(n_t, n_pr);
    }
    let u: f64 = rng.random();
    let radius = eps * u.powf(1.0 / (2.0 * (n_t * n_pr) as f64));
    d *= C64::new(radius / norm, 0.0);
    d
}

/// One generated realization, with the geometry retained for diagnostics.
#[derive(Debug, Clone)]
pub struct Realization {
    pub channels: NetworkChannels,
    pub qos: QosSpec,
    /// Distance of each secondary receiver from the secondary transmitter.
    pub su_distances_m: Vec<f64>,
    /// Distance of each secondary receiver from the primary transmitter.
    pub su_primary_tx_distances_m: Vec<f64>,
    /// Distance of each primary receiver from the secondary transmitter.
    pub pu_distances_m: Vec<f64>,
}

/// Deterministic realization for (config, trial index): receivers placed
/// uniformly in `[reference, cell_radius]` around the secondary
/// transmitter, Rayleigh small-scale fading scaled by the path gain, CSI
/// estimate obtained by subtracting a ball-sampled error from the truth.
pub fn generate_realization(cfg: &SimConfig, trial_index: u64) -> Realization {
    let mut rng = ChaCha12Rng::seed_from_u64(derive_seed(cfg.seed, trial_index));
    let thermal = dbm_to_watts(cfg.thermal_dbm);

    let mut h = Vec::with_capacity(cfg.k);
    let mut sigma_s_sq = Vec::with_capacity(cfg.k);
    let mut su_distances_m = Vec::with_capacity(cfg.k);
    let mut su_primary_tx_distances_m = Vec::with_capacity(cfg.k);
    for _ in 0..cfg.k {
        let r = cfg.reference_distance_m
            + rng.random::<f64>() * (cfg.cell_radius_m - cfg.reference_distance_m);
        let theta = rng.random::<f64>() * std::f64::consts::TAU;
        let gain = path_gain(r, cfg.carrier_ghz);
        let scale = C64::new(gain.sqrt(), 0.0);
        let hk = CVec::from_fn(cfg.n_t, |_, _| randn_c(&mut rng)) * scale;
        // distance to the primary transmitter located `primary_distance_m`
        // away from the secondary transmitter
        let dp = (r * r + cfg.primary_distance_m * cfg.primary_distance_m
            - 2.0 * r * cfg.primary_distance_m * theta.cos())
        .sqrt();
        h.push(hk);
        sigma_s_sq.push(effective_noise_power(cfg, dp));
        su_distances_m.push(r);
        su_primary_tx_distances_m.push(dp);
    }

    // Primary receivers are served by the primary transmitter and placed
    // uniformly in [reference, cell_radius] around it; what the secondary
    // design sees is their distance to the secondary transmitter. Placing
    // them inside the secondary cell instead makes the interference
    // temperature unattainable for nearly every realization.
    let mut g_hat = Vec::with_capacity(cfg.j);
    let mut g_true = Vec::with_capacity(cfg.j);
    let mut eps = Vec::with_capacity(cfg.j);
    let mut pu_distances_m = Vec::with_capacity(cfg.j);
    for _ in 0..cfg.j {
        let r_pu = cfg.reference_distance_m
            + rng.random::<f64>() * (cfg.cell_radius_m - cfg.reference_distance_m);
        let theta = rng.random::<f64>() * std::f64::consts::TAU;
        let r = (cfg.primary_distance_m * cfg.primary_distance_m + r_pu * r_pu
            - 2.0 * cfg.primary_distance_m * r_pu * theta.cos())
        .sqrt()
        .max(cfg.reference_distance_m);
        let gain = path_gain(r, cfg.carrier_ghz);
        let scale = C64::new(gain.sqrt(), 0.0);
        let gt = CMat::from_fn(cfg.n_t, cfg.n_pr, |_, _| randn_c(&mut rng)) * scale;
        let radius = cfg.csi_error_normalized.sqrt() * hermitian_linalg::fro_norm(&gt);
        let delta = sample_csi_error(&mut rng, cfg.n_t, cfg.n_pr, radius);
        g_hat.push(&gt - &delta);
        g_true.push(gt);
        eps.push(radius);
        pu_distances_m.push(r);
    }

    let channels = NetworkChannels {
        n_t: cfg.n_t,
        n_pr: cfg.n_pr,
        h,
        g_hat,
        g_true: Some(g_true),
        eps,
        sigma_s_sq,
        sigma_pu_sq: vec![thermal; cfg.j],
    };

    // Premium receiver 0 carries all layers with the stepped targets; the
    // regular receivers carry a guaranteed base layer only.
    let layers: Vec<usize> = (0..cfg.k)
        .map(|k| if k == 0 { cfg.layers } else { 1 })
        .collect();
    let gamma_req: Vec<Vec<Option<f64>>> = (0..cfg.k)
        .map(|k| {
            (0..layers[k])
                .map(|l| Some(db_to_lin(cfg.gamma_base_db + l as f64 * cfg.gamma_step_db)))
                .collect()
        })
        .collect();
    let qos = QosSpec {
        layers,
        gamma_req,
        gamma_tol: db_to_lin(cfg.gamma_tol_db),
        p_i: vec![dbm_to_watts(cfg.p_i_dbm); cfg.j],
        r_eav: vec![vec![cfg.r_eav_bps_hz; cfg.k]; cfg.j],
    };

    Realization {
        channels,
        qos,
        su_distances_m,
        su_primary_tx_distances_m,
        pu_distances_m,
    }
}
