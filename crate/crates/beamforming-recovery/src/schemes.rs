//! Primal-only suboptimal schemes: fix rank-one beamforming directions
//! (principal eigenvectors, or Gaussian randomization candidates drawn
//! from the relaxed solution's spectral factor), then re-optimize powers
//! and the noise covariance through the power-scaling problem.

use hermitian_linalg::{eig_hermitian, C64, CVec, HermitianMatrix};
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, StandardNormal};
use robust_constraints::{
    assemble_power_scaling_problem, extract_power_scaling_solution, BeamformingSolution,
    NetworkChannels, QosSpec,
};
use sdp_core::{solve_sdp, SolveStatus, SolverConfig};

use crate::recovery::{principal_direction, RecoveryError};

/// SplitMix64: stable derivation of stream seeds from (seed, index), so
/// per-trial and per-try streams are independent of how many run.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_mul(0x9E3779B97F4A7C15);
    z = z.wrapping_add(0x9E3779B97F4A7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

fn solve_with_directions(
    directions: &[Vec<HermitianMatrix>],
    ch: &NetworkChannels,
    q: &QosSpec,
    cfg: &SolverConfig,
) -> Result<BeamformingSolution, RecoveryError> {
    let assembled = assemble_power_scaling_problem(directions, ch, q)?;
    let sol = solve_sdp(&assembled.problem, cfg)?;
    if sol.status != SolveStatus::Optimal {
        return Err(RecoveryError::SchemeInfeasible { status: sol.status });
    }
    Ok(extract_power_scaling_solution(&sol, &assembled.index, &directions.to_vec()))
}

/// Scheme 1: beamform along the principal eigenvector of each relaxed
/// matrix, then rescale powers. Exact (zero gap) whenever the relaxed
/// solution was already rank-one.
pub fn scheme1_eigenvector(
    relaxed: &BeamformingSolution,
    ch: &NetworkChannels,
    q: &QosSpec,
    cfg: &SolverConfig,
) -> Result<BeamformingSolution, RecoveryError> {
    let directions: Vec<Vec<HermitianMatrix>> = relaxed
        .w
        .iter()
        .enumerate()
        .map(|(k, row)| {
            row.iter()
                .map(|w| principal_direction(w, &ch.h[k]))
                .collect()
        })
        .collect();
    solve_with_directions(&directions, ch, q, cfg)
}

/// One Gaussian randomization candidate: `w = U Θ^{1/2} q, q ~ CN(0, I)`,
/// normalized to a unit-trace rank-one direction. Eigenvalues below the
/// rank-one flag are solver noise, not spectrum: dropping them makes every
/// candidate of a rank-one input collapse to the principal direction.
fn randomized_direction(
    w: &HermitianMatrix,
    h: &CVec,
    rng: &mut ChaCha12Rng,
) -> HermitianMatrix {
    let eig = eig_hermitian(w);
    let n = eig.eigenvalues.len();
    let q = CVec::from_fn(n, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
    });
    let lmax = eig.eigenvalues[n - 1].max(0.0);
    let cut = crate::recovery::RANK_ONE_FLAG_TOL * lmax;
    let theta_sqrt = nalgebra::DMatrix::from_diagonal(
        &eig.eigenvalues
            .map(|x| C64::new(if x > cut { x.sqrt() } else { 0.0 }, 0.0)),
    );
    let cand = &eig.eigenvectors * theta_sqrt * q;
    let norm = cand.norm();
    if norm <= 1e-300 {
        let unit = h / C64::new(h.norm(), 0.0);
        return HermitianMatrix::outer(&unit);
    }
    let unit = &cand / C64::new(norm, 0.0);
    HermitianMatrix::outer(&unit)
}

/// Scheme 2: repeated Gaussian randomization; returns the lowest-power
/// feasible candidate (ties break toward the earliest try). Try seeds are
/// derived from (seed, try index), so candidate sets nest as `n_tries`
/// grows and identical seeds reproduce bit-identical output.
pub fn scheme2_randomization(
    relaxed: &BeamformingSolution,
    ch: &NetworkChannels,
    q: &QosSpec,
    n_tries: usize,
    seed: u64,
    cfg: &SolverConfig,
) -> Result<BeamformingSolution, RecoveryError> {
    assert!(n_tries >= 1, "at least one randomization try required");
    let mut best: Option<(f64, usize, BeamformingSolution)> = None;
    let mut last_err = None;
    for t in 0..n_tries {
        let mut rng = ChaCha12Rng::seed_from_u64(derive_seed(seed, t as u64));
        let directions: Vec<Vec<HermitianMatrix>> = relaxed
            .w
            .iter()
            .enumerate()
            .map(|(k, row)| {
                row.iter()
                    .map(|w| randomized_direction(w, &ch.h[k], &mut rng))
                    .collect()
            })
            .collect();
        match solve_with_directions(&directions, ch, q, cfg) {
            Ok(sol) => {
                let better = match &best {
                    None => true,
                    Some((obj, _, _)) => sol.total_power < *obj,
                };
                if better {
                    best = Some((sol.total_power, t, sol));
                }
            }
            Err(e) => last_err = Some(e),
        }
    }
    match best {
        Some((_, _, sol)) => Ok(sol),
        None => Err(last_err.unwrap_or(RecoveryError::ConstructionFailed(
            "no randomization try produced a feasible candidate".into(),
        ))),
    }
}
