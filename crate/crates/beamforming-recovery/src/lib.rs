//! Rank-one beamformer recovery.
//!
//! The relaxed design SDP may return beamforming matrices of rank greater
//! than one. The KKT multipliers pin down their structure: with
//! `A = Y + (γ − Σ_{t<l} γ_t Γ_t)·hhᴴ`, every optimal `W` decomposes into
//! null-space directions of `A` (interchangeable with artificial noise)
//! plus a single signal direction. Moving the null-space mass into the
//! noise covariance produces a rank-one optimal solution at identical
//! power. Two primal-only fallback schemes (principal eigenvector, and
//! Gaussian randomization) cover the case where dual data is not used.

mod dual;
mod recovery;
mod schemes;

pub use dual::{extract_dual_bundle, DualBundle};
pub use recovery::{
    compute_a_matrix, construct_rank_one_solution, numerical_rank, PairDiagnostic,
    RecoveryError, RecoveryOutcome, DEFAULT_RANK_TOL, NOISE_MASS_TOL, RANK_ONE_FLAG_TOL,
};
pub use schemes::{derive_seed, scheme1_eigenvector, scheme2_randomization};
