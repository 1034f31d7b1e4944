//! Independent residual checking: recomputes every constraint of the
//! original problem from the returned primal values, reports per-constraint
//! violations, eigenvalue floors of the PSD blocks, and complementary
//! slackness of each primal/dual cone pair.

use hermitian_linalg::{eig_hermitian_raw, fro_norm, kron_identity_left, CMat, HermitianMatrix};

use crate::problem::{ConstraintBody, LinearExpr, LmiExpr, LmiTerm, Relation, SdpProblem};
use crate::solution::{DualValue, SdpSolution};

pub(crate) fn eval_expr(expr: &LinearExpr, sol: &SdpSolution) -> f64 {
    let mut acc = expr.constant;
    for (b, coeff) in &expr.block_terms {
        acc += hermitian_linalg::inner(coeff.as_matrix(), sol.blocks[b.index()].as_matrix());
    }
    for (s, c) in &expr.scalar_terms {
        acc += c * sol.scalars[s.index()];
    }
    acc
}

/// Materialize the constraint-cone content of an LMI at the solution.
pub(crate) fn eval_lmi(lmi: &LmiExpr, sol: &SdpSolution) -> CMat {
    let mut acc = lmi.constant.as_matrix().clone();
    for term in &lmi.terms {
        match term {
            LmiTerm::BlockCongruence {
                block,
                p,
                lift,
                scale,
            } => {
                let x = sol.blocks[block.index()].as_matrix();
                let lifted = kron_identity_left(*lift, x);
                acc += p.adjoint() * lifted * p * hermitian_linalg::C64::new(*scale, 0.0);
            }
            LmiTerm::ScalarCoeff { scalar, coeff } => {
                acc += coeff.as_matrix()
                    * hermitian_linalg::C64::new(sol.scalars[scalar.index()], 0.0);
            }
        }
    }
    acc
}

#[derive(Debug, Clone)]
pub struct ConstraintReport {
    pub label: String,
    /// Violation in natural units: constraint slack shortfall for scalar
    /// rows, `max(0, −λ_min)` for LMI cones.
    pub violation: f64,
    /// `‖Z·S‖_F / (1 + ‖S‖_F)` for LMI cones, `|z·s|` for scalar rows.
    pub complementarity: f64,
    /// Natural magnitude of the constraint (|lhs| + |rhs| or ‖content‖),
    /// for relative violation thresholds.
    pub scale: f64,
}

#[derive(Debug, Clone)]
pub struct SolutionReport {
    pub constraints: Vec<ConstraintReport>,
    /// λ_min of each primal PSD block.
    pub block_min_eigs: Vec<f64>,
    /// `‖Y·X‖_F / (1 + ‖X‖_F)` per decision block.
    pub block_complementarity: Vec<f64>,
    /// Values of the nonnegative scalars (negative entries are violations).
    pub scalar_values: Vec<f64>,
    pub objective_value: f64,
}

impl SolutionReport {
    /// Largest constraint violation, including PSD-ness of decision blocks
    /// and nonnegativity of scalars.
    pub fn max_violation(&self) -> f64 {
        let c = self
            .constraints
            .iter()
            .fold(0.0_f64, |a, r| a.max(r.violation));
        let b = self
            .block_min_eigs
            .iter()
            .fold(0.0_f64, |a, &l| a.max((-l).max(0.0)));
        let s = self
            .scalar_values
            .iter()
            .fold(0.0_f64, |a, &v| a.max((-v).max(0.0)));
        c.max(b).max(s)
    }

    /// Largest violation relative to each constraint's own magnitude
    /// (`viol / (1 + scale)`), plus absolute PSD/scalar sign violations.
    pub fn max_relative_violation(&self) -> f64 {
        let c = self
            .constraints
            .iter()
            .fold(0.0_f64, |a, r| a.max(r.violation / (1.0 + r.scale)));
        let b = self
            .block_min_eigs
            .iter()
            .fold(0.0_f64, |a, &l| a.max((-l).max(0.0)));
        let s = self
            .scalar_values
            .iter()
            .fold(0.0_f64, |a, &v| a.max((-v).max(0.0)));
        c.max(b).max(s)
    }

    pub fn max_complementarity(&self) -> f64 {
        let c = self
            .constraints
            .iter()
            .fold(0.0_f64, |a, r| a.max(r.complementarity));
        let b = self
            .block_complementarity
            .iter()
            .fold(0.0_f64, |a, &v| a.max(v));
        c.max(b)
    }
}

/// Recompute all constraint residuals of `problem` at `solution`.
pub fn check_solution(problem: &SdpProblem, solution: &SdpSolution) -> SolutionReport {
    let mut constraints = Vec::with_capacity(problem.constraints().len());
    for (idx, c) in problem.constraints().iter().enumerate() {
        let (violation, complementarity, scale) = match &c.body {
            ConstraintBody::Scalar {
                expr,
                relation,
                rhs,
            } => {
                let lhs = eval_expr(expr, solution);
                let viol = match relation {
                    Relation::Ge => (rhs - lhs).max(0.0),
                    Relation::Le => (lhs - rhs).max(0.0),
                    Relation::Eq => (lhs - rhs).abs(),
                };
                let comp = match solution.constraint_duals.get(idx) {
                    Some(DualValue::Scalar(z)) => {
                        let slack = match relation {
                            Relation::Ge => lhs - rhs,
                            Relation::Le => rhs - lhs,
                            Relation::Eq => 0.0,
                        };
                        (z * slack).abs()
                    }
                    _ => 0.0,
                };
                (viol, comp, lhs.abs() + rhs.abs())
            }
            ConstraintBody::Lmi(lmi) => {
                let content = eval_lmi(lmi, solution);
                let eig = eig_hermitian_raw(&content);
                let viol = (-eig.lambda_min()).max(0.0);
                let comp = match solution.constraint_duals.get(idx) {
                    Some(DualValue::Matrix(z)) => {
                        let prod = z.as_matrix() * &content;
                        fro_norm(&prod) / (1.0 + fro_norm(&content))
                    }
                    _ => 0.0,
                };
                (viol, comp, fro_norm(&content))
            }
        };
        constraints.push(ConstraintReport {
            label: c.label.clone(),
            violation,
            complementarity,
            scale,
        });
    }

    let block_min_eigs: Vec<f64> = solution
        .blocks
        .iter()
        .map(|x| eig_hermitian_raw(x.as_matrix()).lambda_min())
        .collect();
    let block_complementarity: Vec<f64> = solution
        .blocks
        .iter()
        .zip(solution.block_duals.iter())
        .map(|(x, y)| {
            let prod = y.as_matrix() * x.as_matrix();
            fro_norm(&prod) / (1.0 + fro_norm(x.as_matrix()))
        })
        .collect();

    SolutionReport {
        constraints,
        block_min_eigs,
        block_complementarity,
        scalar_values: solution.scalars.clone(),
        objective_value: solution.objective_value,
    }
}

/// Check a [`HermitianMatrix`] is PSD up to `tol` (used by downstream
/// feasibility assertions).
pub fn min_eig(m: &HermitianMatrix) -> f64 {
    eig_hermitian_raw(m.as_matrix()).lambda_min()
}
