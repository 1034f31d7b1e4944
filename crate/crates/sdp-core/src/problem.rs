//! Problem description: Hermitian PSD decision blocks, nonnegative scalars,
//! a linear objective, scalar (in)equality constraints, and LMI constraints
//! given as affine maps from the decision variables into constraint cones.

use hermitian_linalg::{CMat, HermitianMatrix};

use crate::SdpError;

/// Handle to a PSD decision block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BlockId(pub(crate) usize);

/// Handle to a nonnegative scalar decision variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ScalarId(pub(crate) usize);

/// Handle to a constraint; indexes [`crate::SdpSolution::constraint_duals`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ConstraintId(pub(crate) usize);

impl BlockId {
    pub fn index(&self) -> usize {
        self.0
    }
}
impl ScalarId {
    pub fn index(&self) -> usize {
        self.0
    }
}
impl ConstraintId {
    pub fn index(&self) -> usize {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Eq,
    Le,
    Ge,
}

/// Scalar-valued affine expression `Σ ⟨B, X⟩ + Σ c·x + constant`.
#[derive(Debug, Clone, Default)]
pub struct LinearExpr {
    pub block_terms: Vec<(BlockId, HermitianMatrix)>,
    pub scalar_terms: Vec<(ScalarId, f64)>,
    pub constant: f64,
}

impl LinearExpr {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_block(mut self, block: BlockId, coeff: HermitianMatrix) -> Self {
        self.block_terms.push((block, coeff));
        self
    }

    pub fn with_scalar(mut self, scalar: ScalarId, coeff: f64) -> Self {
        self.scalar_terms.push((scalar, coeff));
        self
    }

    pub fn with_constant(mut self, c: f64) -> Self {
        self.constant += c;
        self
    }
}

/// One additive term of an LMI-valued affine map.
#[derive(Debug, Clone)]
pub enum LmiTerm {
    /// `scale · Pᴴ (I_lift ⊗ X_block) P`, the congruence lift used by the
    /// S-procedure constraints. `p` has `lift * block_dim` rows and
    /// `lmi_dim` columns; `lift = 1` gives a plain congruence `scale·PᴴXP`.
    BlockCongruence {
        block: BlockId,
        p: CMat,
        lift: usize,
        scale: f64,
    },
    /// `x_scalar · coeff`.
    ScalarCoeff {
        scalar: ScalarId,
        coeff: HermitianMatrix,
    },
}

/// Affine map from the decision variables into a `dim`-dimensional
/// Hermitian PSD constraint cone: `constant + Σ terms ⪰ 0`.
#[derive(Debug, Clone)]
pub struct LmiExpr {
    pub dim: usize,
    pub constant: HermitianMatrix,
    pub terms: Vec<LmiTerm>,
}

impl LmiExpr {
    pub fn new(constant: HermitianMatrix) -> Self {
        Self {
            dim: constant.dim(),
            constant,
            terms: Vec::new(),
        }
    }

    pub fn with_term(mut self, term: LmiTerm) -> Self {
        self.terms.push(term);
        self
    }
}

#[derive(Debug, Clone)]
pub enum ConstraintBody {
    Scalar {
        expr: LinearExpr,
        relation: Relation,
        rhs: f64,
    },
    Lmi(LmiExpr),
}

#[derive(Debug, Clone)]
pub struct Constraint {
    pub label: String,
    pub body: ConstraintBody,
}

#[derive(Debug, Clone)]
pub(crate) struct BlockInfo {
    pub name: String,
    pub dim: usize,
}

/// A block-structured semidefinite program with a linear objective
/// (minimization convention).
#[derive(Debug, Clone, Default)]
pub struct SdpProblem {
    pub(crate) blocks: Vec<BlockInfo>,
    pub(crate) scalars: Vec<String>,
    pub(crate) objective: LinearExpr,
    pub(crate) constraints: Vec<Constraint>,
}

impl SdpProblem {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_psd_block(&mut self, name: impl Into<String>, dim: usize) -> BlockId {
        self.blocks.push(BlockInfo {
            name: name.into(),
            dim,
        });
        BlockId(self.blocks.len() - 1)
    }

    pub fn add_nonneg_scalar(&mut self, name: impl Into<String>) -> ScalarId {
        self.scalars.push(name.into());
        ScalarId(self.scalars.len() - 1)
    }

    pub fn set_objective(&mut self, objective: LinearExpr) {
        self.objective = objective;
    }

    pub fn add_scalar_constraint(
        &mut self,
        label: impl Into<String>,
        expr: LinearExpr,
        relation: Relation,
        rhs: f64,
    ) -> ConstraintId {
        self.constraints.push(Constraint {
            label: label.into(),
            body: ConstraintBody::Scalar {
                expr,
                relation,
                rhs,
            },
        });
        ConstraintId(self.constraints.len() - 1)
    }

    pub fn add_lmi_constraint(&mut self, label: impl Into<String>, lmi: LmiExpr) -> ConstraintId {
        self.constraints.push(Constraint {
            label: label.into(),
            body: ConstraintBody::Lmi(lmi),
        });
        ConstraintId(self.constraints.len() - 1)
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn num_scalars(&self) -> usize {
        self.scalars.len()
    }

    pub fn num_constraints(&self) -> usize {
        self.constraints.len()
    }

    pub fn block_dim(&self, b: BlockId) -> usize {
        self.blocks[b.0].dim
    }

    pub fn block_name(&self, b: BlockId) -> &str {
        &self.blocks[b.0].name
    }

    pub fn constraint_label(&self, c: ConstraintId) -> &str {
        &self.constraints[c.0].label
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    fn check_expr(&self, expr: &LinearExpr, what: &str) -> Result<(), SdpError> {
        for (b, coeff) in &expr.block_terms {
            let Some(info) = self.blocks.get(b.0) else {
                return Err(SdpError::InvalidProblem(format!(
                    "{what}: unknown block id {}",
                    b.0
                )));
            };
            if coeff.dim() != info.dim {
                return Err(SdpError::InvalidProblem(format!(
                    "{what}: coefficient dim {} vs block '{}' dim {}",
                    coeff.dim(),
                    info.name,
                    info.dim
                )));
            }
            if !coeff.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
                return Err(SdpError::InvalidProblem(format!("{what}: non-finite coefficient")));
            }
        }
        for (s, c) in &expr.scalar_terms {
            if s.0 >= self.scalars.len() {
                return Err(SdpError::InvalidProblem(format!(
                    "{what}: unknown scalar id {}",
                    s.0
                )));
            }
            if !c.is_finite() {
                return Err(SdpError::InvalidProblem(format!("{what}: non-finite coefficient")));
            }
        }
        Ok(())
    }

    /// Structural validation: referenced variables exist, every coefficient
    /// is Hermitian with matching dimensions, LMI cone dimensions >= 1.
    pub fn validate(&self) -> Result<(), SdpError> {
        self.check_expr(&self.objective, "objective")?;
        for (idx, constraint) in self.constraints.iter().enumerate() {
            let what = format!("constraint #{idx} '{}'", constraint.label);
            match &constraint.body {
                ConstraintBody::Scalar { expr, rhs, .. } => {
                    self.check_expr(expr, &what)?;
                    if !rhs.is_finite() {
                        return Err(SdpError::InvalidProblem(format!("{what}: non-finite rhs")));
                    }
                }
                ConstraintBody::Lmi(lmi) => {
                    if lmi.dim == 0 {
                        return Err(SdpError::InvalidProblem(format!("{what}: empty LMI cone")));
                    }
                    if lmi.constant.dim() != lmi.dim {
                        return Err(SdpError::InvalidProblem(format!(
                            "{what}: constant dim {} vs cone dim {}",
                            lmi.constant.dim(),
                            lmi.dim
                        )));
                    }
                    for term in &lmi.terms {
                        match term {
                            LmiTerm::BlockCongruence {
                                block,
                                p,
                                lift,
                                scale,
                            } => {
                                let Some(info) = self.blocks.get(block.0) else {
                                    return Err(SdpError::InvalidProblem(format!(
                                        "{what}: unknown block id {}",
                                        block.0
                                    )));
                                };
                                if *lift == 0 {
                                    return Err(SdpError::InvalidProblem(format!(
                                        "{what}: zero lift factor"
                                    )));
                                }
                                if p.nrows() != lift * info.dim || p.ncols() != lmi.dim {
                                    return Err(SdpError::InvalidProblem(format!(
                                        "{what}: lift map is {}x{}, expected {}x{}",
                                        p.nrows(),
                                        p.ncols(),
                                        lift * info.dim,
                                        lmi.dim
                                    )));
                                }
                                if !scale.is_finite() {
                                    return Err(SdpError::InvalidProblem(format!(
                                        "{what}: non-finite scale"
                                    )));
                                }
                            }
                            LmiTerm::ScalarCoeff { scalar, coeff } => {
                                if scalar.0 >= self.scalars.len() {
                                    return Err(SdpError::InvalidProblem(format!(
                                        "{what}: unknown scalar id {}",
                                        scalar.0
                                    )));
                                }
                                if coeff.dim() != lmi.dim {
                                    return Err(SdpError::InvalidProblem(format!(
                                        "{what}: scalar coefficient dim {} vs cone dim {}",
                                        coeff.dim(),
                                        lmi.dim
                                    )));
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// Interior-point solver parameters.
#[derive(Debug, Clone)]
pub struct SolverConfig {
    /// Relative duality-gap tolerance.
    pub gap_tol: f64,
    /// Relative primal/dual feasibility tolerance.
    pub feas_tol: f64,
    pub max_iterations: usize,
    /// Fraction of the maximal step to the cone boundary, in (0, 1).
    pub step_fraction: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            gap_tol: 1e-8,
            feas_tol: 1e-8,
            max_iterations: 200,
            step_fraction: 0.98,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<(), SdpError> {
        if !(self.gap_tol > 0.0) || !(self.feas_tol > 0.0) {
            return Err(SdpError::InvalidConfig("tolerances must be positive".into()));
        }
        if !(self.step_fraction > 0.0 && self.step_fraction < 1.0) {
            return Err(SdpError::InvalidConfig(
                "step_fraction must lie in (0, 1)".into(),
            ));
        }
        if self.max_iterations == 0 {
            return Err(SdpError::InvalidConfig("max_iterations must be positive".into()));
        }
        Ok(())
    }
}
