use hermitian_linalg::HermitianMatrix;

/// Termination status of one solve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Optimal,
    Infeasible,
    Unbounded,
    MaxIterations,
    NumericalFailure,
}

impl SolveStatus {
    pub fn is_optimal(&self) -> bool {
        matches!(self, SolveStatus::Optimal)
    }
}

/// Dual multiplier attached to one constraint.
#[derive(Debug, Clone)]
pub enum DualValue {
    Scalar(f64),
    Matrix(HermitianMatrix),
}

impl DualValue {
    pub fn as_scalar(&self) -> Option<f64> {
        match self {
            DualValue::Scalar(v) => Some(*v),
            DualValue::Matrix(_) => None,
        }
    }

    pub fn as_matrix(&self) -> Option<&HermitianMatrix> {
        match self {
            DualValue::Matrix(m) => Some(m),
            DualValue::Scalar(_) => None,
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ResidualNorms {
    /// Relative primal infeasibility over all cones.
    pub primal: f64,
    /// Relative dual infeasibility.
    pub dual: f64,
}

/// Primal and dual solution of an [`crate::SdpProblem`].
#[derive(Debug, Clone)]
pub struct SdpSolution {
    pub status: SolveStatus,
    /// Primal value of each PSD decision block, in declaration order.
    pub blocks: Vec<HermitianMatrix>,
    /// Primal value of each nonnegative scalar.
    pub scalars: Vec<f64>,
    /// Dual multiplier of the PSD membership of each decision block.
    pub block_duals: Vec<HermitianMatrix>,
    /// Dual multiplier of each scalar nonnegativity bound.
    pub scalar_duals: Vec<f64>,
    /// Dual multiplier per constraint, in declaration order: scalars for
    /// (in)equality rows, PSD matrices for LMI cones.
    pub constraint_duals: Vec<DualValue>,
    pub objective_value: f64,
    pub dual_objective_value: f64,
    /// Relative duality gap |p − d| / (1 + |p| + |d|).
    pub duality_gap: f64,
    pub residuals: ResidualNorms,
    pub iterations: usize,
}
