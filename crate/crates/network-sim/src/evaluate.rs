//! Evaluation of a transmit design against ground truth: achieved SINRs,
//! the layer-1 secrecy rate under the worst channel error found by ball
//! sampling plus local ascent, and received interference both at the true
//! channel and at the exact worst case over the uncertainty ball.

use hermitian_linalg::{
    kron_identity_left, trust_region_quadratic_max, vectorize, C64, CMat, HermitianMatrix,
};
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use robust_constraints::{BeamformingSolution, NetworkChannels, QosSpec};
use serde::{Deserialize, Serialize};

use crate::channel::sample_csi_error;
use crate::config::watts_to_dbm;

pub const SECRECY_FLOOR_TOL: f64 = 1e-6;
pub const INTERFERENCE_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TrialStatus {
    Solved,
    Infeasible,
    Failed,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrialMetrics {
    pub status: TrialStatus,
    pub total_power_dbm: f64,
    /// Achieved SINR per (receiver, layer), linear.
    pub sinr: Vec<Vec<f64>>,
    /// Per secondary receiver: layer-1 secrecy rate under the worst
    /// sampled channel error (bit/s/Hz).
    pub secrecy_rate_layer1: Vec<f64>,
    /// Per primary receiver: received interference at the true channel.
    pub pu_interference_dbm: Vec<f64>,
    /// Per primary receiver: exact worst case over the uncertainty ball.
    pub pu_interference_worst_dbm: Vec<f64>,
    pub secrecy_violation: bool,
    pub interference_violation: bool,
    /// Whether every beamforming matrix of the relaxed solve was already
    /// rank-one; filled by the campaign driver.
    pub rank_one_at_relaxation: Option<bool>,
    pub solve_time_ms: f64,
}

impl TrialMetrics {
    pub fn unsolved(status: TrialStatus, solve_time_ms: f64) -> Self {
        TrialMetrics {
            status,
            total_power_dbm: f64::NAN,
            sinr: Vec::new(),
            secrecy_rate_layer1: Vec::new(),
            pu_interference_dbm: Vec::new(),
            pu_interference_worst_dbm: Vec::new(),
            secrecy_violation: false,
            interference_violation: false,
            rank_one_at_relaxation: None,
            solve_time_ms,
        }
    }
}

/// `log2 det(I + Σ⁻¹ Gᴴ W G)` with `Σ = Gᴴ V G + σ² I`; the decoding-rate
/// upper bound at a primary receiver with channel `G`.
pub fn eavesdropper_rate(g: &CMat, w: &CMat, v: &CMat, sigma_sq: f64) -> f64 {
    let n_pr = g.ncols();
    let sigma = g.adjoint() * v * g + CMat::identity(n_pr, n_pr) * C64::new(sigma_sq, 0.0);
    let numer = &sigma + g.adjoint() * w * g;
    (numer.determinant().re / sigma.determinant().re).log2()
}

/// Wirtinger gradient of the rate with respect to the channel matrix.
fn eav_rate_gradient(g: &CMat, w: &CMat, v: &CMat, sigma_sq: f64) -> CMat {
    let n_pr = g.ncols();
    let sigma = g.adjoint() * v * g + CMat::identity(n_pr, n_pr) * C64::new(sigma_sq, 0.0);
    let total = &sigma + g.adjoint() * w * g;
    let sigma_inv = sigma.clone().try_inverse().unwrap_or_else(|| CMat::zeros(n_pr, n_pr));
    let total_inv = total.clone().try_inverse().unwrap_or_else(|| CMat::zeros(n_pr, n_pr));
    let vw = v + w;
    (vw * g * total_inv - v * g * sigma_inv) * C64::new(1.0 / std::f64::consts::LN_2, 0.0)
}

/// Worst-case eavesdropper rate over the CSI ball: uniform ball samples
/// plus projected-gradient ascent from the most promising starts.
pub fn worst_eavesdropper_rate(
    g_hat: &CMat,
    eps: f64,
    w: &CMat,
    v: &CMat,
    sigma_sq: f64,
    n_samples: usize,
    ascent_starts: usize,
    rng: &mut ChaCha12Rng,
) -> f64 {
    let (n_t, n_pr) = g_hat.shape();
    let mut best: Vec<(f64, CMat)> = vec![(eavesdropper_rate(g_hat, w, v, sigma_sq), CMat::zeros(n_t, n_pr))];
    for _ in 0..n_samples {
        let d = sample_csi_error(rng, n_t, n_pr, eps);
        let rate = eavesdropper_rate(&(g_hat + &d), w, v, sigma_sq);
        best.push((rate, d));
    }
    best.sort_by(|a, b| b.0.total_cmp(&a.0));
    best.truncate(ascent_starts.max(1));

    let mut overall = best[0].0;
    for (_, d0) in best {
        let mut d = d0;
        let mut step = 0.3 * eps;
        let mut current = eavesdropper_rate(&(g_hat + &d), w, v, sigma_sq);
        for _ in 0..60 {
            let g = g_hat + &d;
            let grad = eav_rate_gradient(&g, w, v, sigma_sq);
            let gnorm = hermitian_linalg::fro_norm(&grad);
            if gnorm <= 1e-14 {
                break;
            }
            let mut trial = &d + &grad * C64::new(step / gnorm, 0.0);
            let tnorm = hermitian_linalg::fro_norm(&trial);
            if tnorm > eps {
                trial *= C64::new(eps / tnorm, 0.0);
            }
            let value = eavesdropper_rate(&(g_hat + &trial), w, v, sigma_sq);
            if value > current {
                d = trial;
                current = value;
            } else {
                step *= 0.5;
                if step < 1e-6 * eps {
                    break;
                }
            }
        }
        overall = overall.max(current);
    }
    overall
}

fn trace_quad(h: &CMat, m: &CMat) -> f64 {
    // tr(hᴴ M h) for a column h
    let mh = m * h;
    h.iter().zip(mh.iter()).map(|(a, b)| (a.conj() * b).re).sum()
}

/// The guaranteed secrecy floor for receiver `k`:
/// `[log2(1+Γ_req,1) − max(log2(1+Γ_tol), max_j R_eav)]⁺`.
pub fn secrecy_floor(q: &QosSpec, k: usize) -> f64 {
    let gamma1 = q.gamma_req[k][0].unwrap_or(0.0);
    let legit = (1.0 + gamma1).log2();
    let mut eav_cap = (1.0 + q.gamma_tol).log2();
    for j in 0..q.p_i.len() {
        eav_cap = eav_cap.max(q.r_eav[j][k]);
    }
    (legit - eav_cap).max(0.0)
}

/// Evaluate one design against the realization's ground truth.
///
/// The eavesdropper side uses `n_error_samples` ball samples plus ascent;
/// interference is reported both at the true channel and at the exact
/// worst case from the trust-region maximizer. Violation flags compare
/// the worst available evidence against the QoS targets.
pub fn evaluate_solution(
    sol: &BeamformingSolution,
    ch: &NetworkChannels,
    q: &QosSpec,
    n_error_samples: usize,
    seed: u64,
) -> TrialMetrics {
    let kk = ch.num_secondary();
    let jj = ch.num_primary();
    let mut rng = ChaCha12Rng::seed_from_u64(seed);

    // Achieved SINR per (receiver, layer), trace forms.
    let mut sinr = vec![Vec::new(); kk];
    for k in 0..kk {
        let hk = &ch.h[k];
        let v_noise = trace_quad(&CMat::from_column_slice(ch.n_t, 1, hk.as_slice()), sol.v.as_matrix());
        for l in 0..sol.w[k].len() {
            let hmat = CMat::from_column_slice(ch.n_t, 1, hk.as_slice());
            let signal = trace_quad(&hmat, sol.w[k][l].as_matrix());
            let mut interference = 0.0;
            for n in 0..kk {
                if n == k {
                    continue;
                }
                for r in 0..sol.w[n].len() {
                    interference += trace_quad(&hmat, sol.w[n][r].as_matrix());
                }
            }
            for m in (l + 1)..sol.w[k].len() {
                interference += trace_quad(&hmat, sol.w[k][m].as_matrix());
            }
            sinr[k].push(signal / (interference + v_noise + ch.sigma_s_sq[k]));
        }
    }

    // Strongest eavesdropper per receiver: unintended secondary receivers
    // (exact; their channels are known) and primary receivers (worst case
    // over the CSI ball).
    let mut secrecy = Vec::with_capacity(kk);
    for k in 0..kk {
        let c_legit = (1.0 + sinr[k][0]).log2();
        let mut eav = 0.0_f64;
        for t in 0..kk {
            if t == k {
                continue;
            }
            let ht = CMat::from_column_slice(ch.n_t, 1, ch.h[t].as_slice());
            let signal = trace_quad(&ht, sol.w[k][0].as_matrix());
            let mut interference = 0.0;
            for n in 0..kk {
                if n == t || n == k {
                    continue;
                }
                for r in 0..sol.w[n].len() {
                    interference += trace_quad(&ht, sol.w[n][r].as_matrix());
                }
            }
            for m in 1..sol.w[k].len() {
                interference += trace_quad(&ht, sol.w[k][m].as_matrix());
            }
            let v_noise = trace_quad(&ht, sol.v.as_matrix());
            let gamma_t = signal / (interference + v_noise + ch.sigma_s_sq[t]);
            eav = eav.max((1.0 + gamma_t).log2());
        }
        for j in 0..jj {
            let rate = worst_eavesdropper_rate(
                &ch.g_hat[j],
                ch.eps[j],
                sol.w[k][0].as_matrix(),
                sol.v.as_matrix(),
                ch.sigma_pu_sq[j],
                n_error_samples,
                5,
                &mut rng,
            );
            eav = eav.max(rate);
        }
        secrecy.push((c_legit - eav).max(0.0));
    }

    // Interference at the primary receivers.
    let m_total = sol.transmit_covariance();
    let mut pu_true = Vec::with_capacity(jj);
    let mut pu_worst = Vec::with_capacity(jj);
    let mut interference_violation = false;
    for j in 0..jj {
        let worst = {
            let lifted = HermitianMatrix::from_nearly_hermitian(&kron_identity_left(
                ch.n_pr, &m_total,
            ))
            .expect("finite covariance");
            trust_region_quadratic_max(&lifted, &vectorize(&ch.g_hat[j]), ch.eps[j])
                .unwrap_or(f64::INFINITY)
        };
        let actual = ch.g_true.as_ref().map(|gt| {
            hermitian_linalg::inner(&(&gt[j] * gt[j].adjoint()), &m_total)
        });
        let cap = q.p_i[j] * (1.0 + INTERFERENCE_TOL);
        if worst > cap {
            interference_violation = true;
        }
        if let Some(a) = actual {
            if a > cap {
                interference_violation = true;
            }
        }
        pu_worst.push(watts_to_dbm(worst));
        pu_true.push(actual.map_or(f64::NAN, watts_to_dbm));
    }

    let mut secrecy_violation = false;
    for k in 0..kk {
        if secrecy[k] < secrecy_floor(q, k) - SECRECY_FLOOR_TOL {
            secrecy_violation = true;
        }
    }

    TrialMetrics {
        status: TrialStatus::Solved,
        total_power_dbm: watts_to_dbm(sol.total_power),
        sinr,
        secrecy_rate_layer1: secrecy,
        pu_interference_dbm: pu_true,
        pu_interference_worst_dbm: pu_worst,
        secrecy_violation,
        interference_violation,
        rank_one_at_relaxation: None,
        solve_time_ms: 0.0,
    }
}
