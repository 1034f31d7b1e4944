//! Domain data: one channel realization, the QoS targets, and a complete
//! beamforming design (matrices, artificial noise, auxiliary scalars).

use hermitian_linalg::{fro_norm, CMat, CVec, HermitianMatrix};
use serde::{Deserialize, Serialize};

use crate::AssemblyError;

/// All channel quantities of one network realization.
///
/// `h[k]` are the secondary downlink vectors (length `n_t`), `g_hat[j]`
/// the estimated `n_t × n_pr` channels towards the primary receivers, and
/// `eps[j]` the Frobenius radii of the CSI uncertainty balls around them.
/// `g_true` carries the simulation ground truth when available and must
/// then lie inside the ball.
#[derive(Debug, Clone)]
pub struct NetworkChannels {
    pub n_t: usize,
    pub n_pr: usize,
    pub h: Vec<CVec>,
    pub g_hat: Vec<CMat>,
    pub g_true: Option<Vec<CMat>>,
    pub eps: Vec<f64>,
    pub sigma_s_sq: Vec<f64>,
    pub sigma_pu_sq: Vec<f64>,
}

impl NetworkChannels {
    pub fn num_secondary(&self) -> usize {
        self.h.len()
    }

    pub fn num_primary(&self) -> usize {
        self.g_hat.len()
    }

    pub fn validate(&self) -> Result<(), AssemblyError> {
        let (k, j) = (self.num_secondary(), self.num_primary());
        if k == 0 {
            return Err(AssemblyError::InvalidChannels(
                "at least one secondary receiver required".into(),
            ));
        }
        if j > 0 && self.n_t <= self.n_pr {
            return Err(AssemblyError::InvalidChannels(format!(
                "transmit antennas ({}) must exceed primary receive antennas ({})",
                self.n_t, self.n_pr
            )));
        }
        for (i, h) in self.h.iter().enumerate() {
            if h.len() != self.n_t {
                return Err(AssemblyError::DimensionMismatch(format!(
                    "h[{i}] has length {}, expected {}",
                    h.len(),
                    self.n_t
                )));
            }
        }
        for (i, g) in self.g_hat.iter().enumerate() {
            if g.shape() != (self.n_t, self.n_pr) {
                return Err(AssemblyError::DimensionMismatch(format!(
                    "g_hat[{i}] is {}x{}, expected {}x{}",
                    g.nrows(),
                    g.ncols(),
                    self.n_t,
                    self.n_pr
                )));
            }
        }
        if self.eps.len() != j || self.sigma_pu_sq.len() != j {
            return Err(AssemblyError::DimensionMismatch(
                "eps/sigma_pu_sq must have one entry per primary receiver".into(),
            ));
        }
        if self.sigma_s_sq.len() != k {
            return Err(AssemblyError::DimensionMismatch(
                "sigma_s_sq must have one entry per secondary receiver".into(),
            ));
        }
        if self.eps.iter().any(|&e| !(e >= 0.0)) {
            return Err(AssemblyError::InvalidChannels("CSI radii must be >= 0".into()));
        }
        if self
            .sigma_s_sq
            .iter()
            .chain(self.sigma_pu_sq.iter())
            .any(|&v| !(v > 0.0))
        {
            return Err(AssemblyError::InvalidChannels("noise powers must be > 0".into()));
        }
        if let Some(g_true) = &self.g_true {
            if g_true.len() != j {
                return Err(AssemblyError::DimensionMismatch(
                    "g_true must have one entry per primary receiver".into(),
                ));
            }
            for jj in 0..j {
                let err = fro_norm(&(&g_true[jj] - &self.g_hat[jj]));
                if err > self.eps[jj] * (1.0 + 1e-9) + 1e-30 {
                    return Err(AssemblyError::InvalidChannels(format!(
                        "true channel {jj} lies outside its uncertainty ball: {err} > {}",
                        self.eps[jj]
                    )));
                }
            }
        }
        Ok(())
    }
}

/// QoS targets; all SINR-like quantities are linear ratios, powers in
/// Watts, eavesdropper caps in bit/s/Hz. `gamma_req[k][l] = None` leaves
/// layer `l` of receiver `k` unconstrained (best effort).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QosSpec {
    pub layers: Vec<usize>,
    pub gamma_req: Vec<Vec<Option<f64>>>,
    pub gamma_tol: f64,
    pub p_i: Vec<f64>,
    pub r_eav: Vec<Vec<f64>>,
}

impl QosSpec {
    /// `ξ = 2^R − 1` for primary receiver `j` eavesdropping on receiver `k`.
    pub fn xi_eav(&self, j: usize, k: usize) -> f64 {
        2.0_f64.powf(self.r_eav[j][k]) - 1.0
    }

    pub fn validate(&self, ch: &NetworkChannels) -> Result<(), AssemblyError> {
        let (k, j) = (ch.num_secondary(), ch.num_primary());
        if self.layers.len() != k || self.gamma_req.len() != k {
            return Err(AssemblyError::InvalidQos(
                "layers/gamma_req must have one entry per secondary receiver".into(),
            ));
        }
        for kk in 0..k {
            if self.layers[kk] == 0 {
                return Err(AssemblyError::InvalidQos(format!(
                    "receiver {kk} must carry at least one layer"
                )));
            }
            if self.gamma_req[kk].len() != self.layers[kk] {
                return Err(AssemblyError::InvalidQos(format!(
                    "gamma_req[{kk}] must have {} entries",
                    self.layers[kk]
                )));
            }
            if self.gamma_req[kk][0].is_none() {
                return Err(AssemblyError::InvalidQos(format!(
                    "base layer of receiver {kk} must carry a SINR target"
                )));
            }
            for g in self.gamma_req[kk].iter().flatten() {
                if !(*g > 0.0) {
                    return Err(AssemblyError::InvalidQos("SINR targets must be > 0".into()));
                }
            }
        }
        if !(self.gamma_tol > 0.0) {
            return Err(AssemblyError::InvalidQos("gamma_tol must be > 0".into()));
        }
        if self.p_i.len() != j || self.r_eav.len() != j {
            return Err(AssemblyError::InvalidQos(
                "p_i/r_eav must have one entry per primary receiver".into(),
            ));
        }
        if self.p_i.iter().any(|&v| !(v > 0.0)) {
            return Err(AssemblyError::InvalidQos("interference temperatures must be > 0".into()));
        }
        for row in &self.r_eav {
            if row.len() != k {
                return Err(AssemblyError::InvalidQos(
                    "r_eav rows must have one entry per secondary receiver".into(),
                ));
            }
            if row.iter().any(|&r| !(r > 0.0)) {
                return Err(AssemblyError::InvalidQos(
                    "eavesdropper rate limits must be > 0".into(),
                ));
            }
        }
        Ok(())
    }
}

/// A complete transmit design: beamforming matrices per (receiver, layer),
/// artificial-noise covariance, the S-procedure multipliers, and the total
/// radiated power `Σ tr(W) + tr(V)`.
#[derive(Debug, Clone)]
pub struct BeamformingSolution {
    /// `w[k][l]`, each `n_t × n_t` Hermitian PSD.
    pub w: Vec<Vec<HermitianMatrix>>,
    pub v: HermitianMatrix,
    /// `omega[j]`; empty for the non-robust baseline.
    pub omega: Vec<f64>,
    /// `delta[k][j]`; empty for the non-robust baseline.
    pub delta: Vec<Vec<f64>>,
    pub total_power: f64,
}

impl BeamformingSolution {
    pub fn compute_total_power(w: &[Vec<HermitianMatrix>], v: &HermitianMatrix) -> f64 {
        w.iter().flatten().map(|m| m.trace()).sum::<f64>() + v.trace()
    }

    /// λ₂/λ₁ of `w[k][l]`; zero matrices report `true` (rank ≤ 1).
    pub fn is_rank_one(&self, k: usize, l: usize, tol: f64) -> bool {
        let eig = hermitian_linalg::eig_hermitian(&self.w[k][l]);
        let n = eig.eigenvalues.len();
        let l1 = eig.eigenvalues[n - 1];
        if l1 <= 0.0 {
            return true;
        }
        if n == 1 {
            return true;
        }
        eig.eigenvalues[n - 2] / l1 <= tol
    }

    pub fn all_rank_one(&self, tol: f64) -> bool {
        (0..self.w.len()).all(|k| (0..self.w[k].len()).all(|l| self.is_rank_one(k, l, tol)))
    }

    /// Sum of all beamforming matrices plus the noise covariance; the
    /// transmit covariance seen by the primary receivers.
    pub fn transmit_covariance(&self) -> CMat {
        let n = self.v.dim();
        let mut acc = self.v.as_matrix().clone();
        for row in &self.w {
            for w in row {
                acc += w.as_matrix();
            }
        }
        let _ = n;
        acc
    }
}

// JSON round-trip through a plain DTO: matrices as row-major [re, im] grids.
#[derive(Serialize, Deserialize)]
struct MatrixDto(Vec<Vec<[f64; 2]>>);

impl MatrixDto {
    fn from_mat(m: &CMat) -> Self {
        MatrixDto(
            (0..m.nrows())
                .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
                .collect(),
        )
    }

    fn to_hermitian(&self) -> Result<HermitianMatrix, AssemblyError> {
        let rows = self.0.len();
        let mut m = CMat::zeros(rows, rows);
        for (i, row) in self.0.iter().enumerate() {
            if row.len() != rows {
                return Err(AssemblyError::DimensionMismatch(
                    "serialized matrix is not square".into(),
                ));
            }
            for (j, e) in row.iter().enumerate() {
                m[(i, j)] = hermitian_linalg::C64::new(e[0], e[1]);
            }
        }
        Ok(HermitianMatrix::new(m)?)
    }
}

#[derive(Serialize, Deserialize)]
struct BeamformingSolutionDto {
    w: Vec<Vec<MatrixDto>>,
    v: MatrixDto,
    omega: Vec<f64>,
    delta: Vec<Vec<f64>>,
    total_power_watts: f64,
}

impl Serialize for BeamformingSolution {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        BeamformingSolutionDto {
            w: self
                .w
                .iter()
                .map(|row| row.iter().map(|m| MatrixDto::from_mat(m.as_matrix())).collect())
                .collect(),
            v: MatrixDto::from_mat(self.v.as_matrix()),
            omega: self.omega.clone(),
            delta: self.delta.clone(),
            total_power_watts: self.total_power,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for BeamformingSolution {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let dto = BeamformingSolutionDto::deserialize(deserializer)?;
        let conv = |m: &MatrixDto| m.to_hermitian().map_err(serde::de::Error::custom);
        let w = dto
            .w
            .iter()
            .map(|row| row.iter().map(conv).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        let v = conv(&dto.v)?;
        Ok(BeamformingSolution {
            w,
            v,
            omega: dto.omega,
            delta: dto.delta,
            total_power: dto.total_power_watts,
        })
    }
}
