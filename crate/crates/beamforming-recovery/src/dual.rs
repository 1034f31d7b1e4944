use hermitian_linalg::HermitianMatrix;
use robust_constraints::RelaxedIndex;
use sdp_core::{DualValue, SdpSolution};

/// The Lagrange multipliers of one solved design problem: `y[k][l]` for the
/// PSD-ness of each beamforming matrix, `gamma[k][l]` for the SINR floors
/// (zero where no target was imposed), `psi[t][k]` for the leakage caps,
/// and the PSD multipliers of the two robust LMI families.
#[derive(Debug, Clone)]
pub struct DualBundle {
    pub y: Vec<Vec<HermitianMatrix>>,
    pub gamma: Vec<Vec<f64>>,
    pub psi: Vec<Vec<f64>>,
    pub d_c3: Vec<HermitianMatrix>,
    pub d_c4: Vec<Vec<HermitianMatrix>>,
}

fn scalar_dual(sol: &SdpSolution, id: sdp_core::ConstraintId) -> f64 {
    match &sol.constraint_duals[id.index()] {
        DualValue::Scalar(v) => *v,
        DualValue::Matrix(_) => 0.0,
    }
}

fn matrix_dual(sol: &SdpSolution, id: sdp_core::ConstraintId, dim: usize) -> HermitianMatrix {
    match &sol.constraint_duals[id.index()] {
        DualValue::Matrix(m) => m.clone(),
        DualValue::Scalar(_) => HermitianMatrix::zeros(dim),
    }
}

/// Collect the multipliers needed by the rank-one construction.
pub fn extract_dual_bundle(sol: &SdpSolution, idx: &RelaxedIndex) -> DualBundle {
    let kk = idx.w_blocks.len();
    let y = idx
        .w_blocks
        .iter()
        .map(|row| {
            row.iter()
                .map(|b| sol.block_duals[b.index()].clone())
                .collect()
        })
        .collect();
    let gamma = idx
        .c1
        .iter()
        .map(|row| {
            row.iter()
                .map(|c| c.map_or(0.0, |id| scalar_dual(sol, id)))
                .collect()
        })
        .collect();
    let psi = (0..kk)
        .map(|t| {
            (0..kk)
                .map(|k| idx.c2[t][k].map_or(0.0, |id| scalar_dual(sol, id)))
                .collect()
        })
        .collect();
    let d_c3 = idx
        .c3
        .iter()
        .map(|&id| matrix_dual(sol, id, 1))
        .collect();
    let d_c4 = idx
        .c4
        .iter()
        .map(|row| row.iter().map(|&id| matrix_dual(sol, id, 1)).collect())
        .collect();
    DualBundle {
        y,
        gamma,
        psi,
        d_c3,
        d_c4,
    }
}
