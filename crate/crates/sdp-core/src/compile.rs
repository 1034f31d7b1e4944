//! Compilation of an [`SdpProblem`] into the solver's canonical conic form.
//!
//! Decision blocks are flattened into real degrees of freedom (diagonal
//! entries plus re/im pairs of the upper triangle). Every constraint becomes
//! "affine map of the variables lands in a cone": decision blocks map
//! identically into their own PSD membership cones, LMIs map into constraint
//! PSD cones, scalar inequalities into a nonnegative cone, and equalities
//! into a zero cone. A Ruiz-style diagonal equilibration pass balances the
//! widely differing magnitudes of channel gains and interference limits.

use hermitian_linalg::{C64, CMat, HermitianMatrix};
use nalgebra::DVector;

use crate::problem::{ConstraintBody, LinearExpr, LmiTerm, Relation, SdpProblem};

/// Degree-of-freedom descriptor within one Hermitian block.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum DofKind {
    Diag(usize),
    /// Real part of entry (i, j), i < j.
    Re(usize, usize),
    /// Imaginary part of entry (i, j), i < j.
    Im(usize, usize),
}

pub(crate) fn block_dofs(dim: usize) -> Vec<DofKind> {
    let mut out = Vec::with_capacity(dim * dim);
    for j in 0..dim {
        for i in 0..j {
            out.push(DofKind::Re(i, j));
            out.push(DofKind::Im(i, j));
        }
        out.push(DofKind::Diag(j));
    }
    out
}

/// Entries of the Hermitian basis matrix for one dof (full matrix, both
/// triangles).
fn dof_basis_entries(kind: DofKind) -> Vec<(usize, usize, C64)> {
    match kind {
        DofKind::Diag(i) => vec![(i, i, C64::new(1.0, 0.0))],
        DofKind::Re(i, j) => vec![(i, j, C64::new(1.0, 0.0)), (j, i, C64::new(1.0, 0.0))],
        DofKind::Im(i, j) => vec![(i, j, C64::new(0.0, 1.0)), (j, i, C64::new(0.0, -1.0))],
    }
}

/// `⟨B_dof, M⟩` for Hermitian `M`.
pub(crate) fn dof_inner(kind: DofKind, m: &CMat) -> f64 {
    match kind {
        DofKind::Diag(i) => m[(i, i)].re,
        DofKind::Re(i, j) => 2.0 * m[(i, j)].re,
        DofKind::Im(i, j) => 2.0 * m[(i, j)].im,
    }
}

/// Rebuild a Hermitian matrix from its dof slice.
pub(crate) fn dofs_to_matrix(dim: usize, x: &[f64]) -> CMat {
    let mut m = CMat::zeros(dim, dim);
    for (a, kind) in block_dofs(dim).iter().enumerate() {
        match *kind {
            DofKind::Diag(i) => m[(i, i)] += C64::new(x[a], 0.0),
            DofKind::Re(i, j) => {
                m[(i, j)] += C64::new(x[a], 0.0);
                m[(j, i)] += C64::new(x[a], 0.0);
            }
            DofKind::Im(i, j) => {
                m[(i, j)] += C64::new(0.0, x[a]);
                m[(j, i)] += C64::new(0.0, -x[a]);
            }
        }
    }
    m
}

/// Sparse Hermitian coefficient matrix; stores every nonzero entry.
#[derive(Debug, Clone)]
pub(crate) struct SparseHerm {
    pub entries: Vec<(u32, u32, C64)>,
}

impl SparseHerm {
    pub fn from_dense(m: &CMat) -> Self {
        let mut entries = Vec::new();
        for j in 0..m.ncols() {
            for i in 0..m.nrows() {
                let v = m[(i, j)];
                if v != C64::new(0.0, 0.0) {
                    entries.push((i as u32, j as u32, v));
                }
            }
        }
        Self { entries }
    }

    /// `Re tr(self · M)` for Hermitian `M` (self is Hermitian too).
    #[inline]
    pub fn inner(&self, m: &CMat) -> f64 {
        let mut acc = 0.0;
        for &(i, j, c) in &self.entries {
            // tr(EM) = Σ E[i,j] M[j,i]; M[j,i] = conj(M[i,j])
            acc += (c * m[(j as usize, i as usize)]).re;
        }
        acc
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().fold(0.0, |a, &(_, _, c)| a.max(c.norm()))
    }

    pub fn scale_rows_cols(&mut self, d: &DVector<f64>) {
        for (i, j, c) in self.entries.iter_mut() {
            *c *= d[*i as usize] * d[*j as usize];
        }
    }

    pub fn scale(&mut self, s: f64) {
        for (_, _, c) in self.entries.iter_mut() {
            *c *= s;
        }
    }
}

/// Where a compiled matrix cone came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum MatConeOrigin {
    BlockMembership(usize),
    LmiConstraint(usize),
}

/// Where a compiled scalar row came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum RowOrigin {
    ScalarMembership(usize),
    /// Constraint index plus the sign applied to its dual on extraction:
    /// duals of Ge/Le rows are the usual nonnegative multipliers.
    ScalarConstraint(usize),
}

#[derive(Debug, Clone)]
pub(crate) struct MatCone {
    pub dim: usize,
    pub f0: CMat,
    /// (variable index, coefficient); at most one entry per variable.
    pub coeffs: Vec<(u32, SparseHerm)>,
    pub origin: MatConeOrigin,
}

#[derive(Debug, Clone)]
pub(crate) struct ScalarRow {
    pub f0: f64,
    pub terms: Vec<(u32, f64)>,
    pub origin: RowOrigin,
}

#[derive(Debug, Clone)]
pub(crate) struct EqRow {
    pub f0: f64,
    pub terms: Vec<(u32, f64)>,
    pub constraint: usize,
}

/// Fully compiled conic program, including the equilibration state needed
/// to map solutions and duals back to the original units.
#[derive(Debug, Clone)]
pub(crate) struct Compiled {
    pub n_vars: usize,
    pub c: DVector<f64>,
    pub obj_constant: f64,
    pub mat_cones: Vec<MatCone>,
    pub nn_rows: Vec<ScalarRow>,
    pub eq_rows: Vec<EqRow>,
    /// Variable offsets: blocks first (d² dofs each), then scalars.
    pub block_offsets: Vec<usize>,
    pub block_dims: Vec<usize>,
    pub scalar_offset: usize,
    // Scaling state (identity before equilibrate()).
    pub var_scale: DVector<f64>,
    pub cone_diag: Vec<DVector<f64>>,
    pub nn_row_scale: Vec<f64>,
    pub eq_row_scale: Vec<f64>,
    pub cost_scale: f64,
}

fn expr_row(
    expr: &LinearExpr,
    sign: f64,
    compiled_offsets: (&[usize], usize),
) -> Vec<(u32, f64)> {
    let (block_offsets, scalar_offset) = compiled_offsets;
    let mut acc: std::collections::BTreeMap<u32, f64> = Default::default();
    for (b, coeff) in &expr.block_terms {
        let base = block_offsets[b.0];
        for (a, kind) in block_dofs(coeff.dim()).iter().enumerate() {
            let v = sign * dof_inner(*kind, coeff.as_matrix());
            if v != 0.0 {
                *acc.entry((base + a) as u32).or_insert(0.0) += v;
            }
        }
    }
    for (s, c) in &expr.scalar_terms {
        if *c != 0.0 {
            *acc.entry((scalar_offset + s.0) as u32).or_insert(0.0) += sign * c;
        }
    }
    acc.into_iter().filter(|&(_, v)| v != 0.0).collect()
}

/// `scale · Pᴴ (I_lift ⊗ B_dof) P`, exploiting the sparsity of the lifted
/// basis matrix (at most `2·lift` nonzero rows).
fn congruence_dof(p: &CMat, lift: usize, scale: f64, bdim: usize, kind: DofKind) -> CMat {
    let cols = p.ncols();
    let mut e = CMat::zeros(cols, cols);
    let basis = dof_basis_entries(kind);
    // M = (I⊗B)P has row r·bdim+bi equal to Σ c · P[r·bdim+bj, :].
    // E = Pᴴ M accumulated row by row: E += (P row u)ᴴ · (M row u).
    for r in 0..lift {
        for &(bi, bj, cval) in &basis {
            let u = r * bdim + bi;
            let src = r * bdim + bj;
            for a in 0..cols {
                let pu = p[(u, a)].conj();
                if pu == C64::new(0.0, 0.0) {
                    continue;
                }
                for b in 0..cols {
                    let m = cval * p[(src, b)];
                    e[(a, b)] += pu * m;
                }
            }
        }
    }
    e * C64::new(scale, 0.0)
}

pub(crate) fn compile(problem: &SdpProblem) -> Compiled {
    let mut block_offsets = Vec::with_capacity(problem.blocks.len());
    let mut block_dims = Vec::with_capacity(problem.blocks.len());
    let mut n = 0usize;
    for info in &problem.blocks {
        block_offsets.push(n);
        block_dims.push(info.dim);
        n += info.dim * info.dim;
    }
    let scalar_offset = n;
    n += problem.scalars.len();

    // Objective vector.
    let mut c = DVector::zeros(n);
    for (var, v) in expr_row(&problem.objective, 1.0, (&block_offsets, scalar_offset)) {
        c[var as usize] += v;
    }

    let mut mat_cones = Vec::new();
    let mut nn_rows = Vec::new();
    let mut eq_rows = Vec::new();

    // Membership cones for the decision blocks themselves.
    for (b, info) in problem.blocks.iter().enumerate() {
        let base = block_offsets[b];
        let coeffs = block_dofs(info.dim)
            .iter()
            .enumerate()
            .map(|(a, kind)| {
                let mut dense = CMat::zeros(info.dim, info.dim);
                for (i, j, v) in dof_basis_entries(*kind) {
                    dense[(i, j)] += v;
                }
                ((base + a) as u32, SparseHerm::from_dense(&dense))
            })
            .collect();
        mat_cones.push(MatCone {
            dim: info.dim,
            f0: CMat::zeros(info.dim, info.dim),
            coeffs,
            origin: MatConeOrigin::BlockMembership(b),
        });
    }

    // Membership rows for nonnegative scalars.
    for s in 0..problem.scalars.len() {
        nn_rows.push(ScalarRow {
            f0: 0.0,
            terms: vec![((scalar_offset + s) as u32, 1.0)],
            origin: RowOrigin::ScalarMembership(s),
        });
    }

    // Constraints.
    for (cidx, constraint) in problem.constraints.iter().enumerate() {
        match &constraint.body {
            ConstraintBody::Scalar {
                expr,
                relation,
                rhs,
            } => {
                // Ge: expr − rhs >= 0; Le: rhs − expr >= 0; Eq: expr − rhs = 0.
                let sign = match relation {
                    Relation::Ge | Relation::Eq => 1.0,
                    Relation::Le => -1.0,
                };
                let terms = expr_row(expr, sign, (&block_offsets, scalar_offset));
                let f0 = sign * (expr.constant - rhs);
                match relation {
                    Relation::Eq => eq_rows.push(EqRow {
                        f0,
                        terms,
                        constraint: cidx,
                    }),
                    _ => nn_rows.push(ScalarRow {
                        f0,
                        terms,
                        origin: RowOrigin::ScalarConstraint(cidx),
                    }),
                }
            }
            ConstraintBody::Lmi(lmi) => {
                // Accumulate per-variable coefficient matrices densely first
                // so repeated terms on the same variable merge.
                let mut per_var: std::collections::BTreeMap<u32, CMat> = Default::default();
                for term in &lmi.terms {
                    match term {
                        LmiTerm::BlockCongruence {
                            block,
                            p,
                            lift,
                            scale,
                        } => {
                            let bdim = problem.blocks[block.0].dim;
                            let base = block_offsets[block.0];
                            for (a, kind) in block_dofs(bdim).iter().enumerate() {
                                let e = congruence_dof(p, *lift, *scale, bdim, *kind);
                                per_var
                                    .entry((base + a) as u32)
                                    .and_modify(|acc| *acc += &e)
                                    .or_insert(e);
                            }
                        }
                        LmiTerm::ScalarCoeff { scalar, coeff } => {
                            let var = (scalar_offset + scalar.0) as u32;
                            let e = coeff.as_matrix().clone();
                            per_var
                                .entry(var)
                                .and_modify(|acc| *acc += &e)
                                .or_insert(e);
                        }
                    }
                }
                let coeffs: Vec<(u32, SparseHerm)> = per_var
                    .into_iter()
                    .map(|(var, dense)| (var, SparseHerm::from_dense(&dense)))
                    .filter(|(_, sp)| !sp.entries.is_empty())
                    .collect();
                mat_cones.push(MatCone {
                    dim: lmi.dim,
                    f0: lmi.constant.as_matrix().clone(),
                    coeffs,
                    origin: MatConeOrigin::LmiConstraint(cidx),
                });
            }
        }
    }

    Compiled {
        n_vars: n,
        cost_scale: 1.0,
        obj_constant: problem.objective.constant,
        var_scale: DVector::from_element(n, 1.0),
        cone_diag: mat_cones
            .iter()
            .map(|c| DVector::from_element(c.dim, 1.0))
            .collect(),
        nn_row_scale: vec![1.0; nn_rows.len()],
        eq_row_scale: vec![1.0; eq_rows.len()],
        c,
        mat_cones,
        nn_rows,
        eq_rows,
        block_offsets,
        block_dims,
        scalar_offset,
    }
}

const SCALE_CLAMP: f64 = 1e10;

fn clamp_scale(s: f64) -> f64 {
    if !s.is_finite() || s == 0.0 {
        1.0
    } else {
        s.clamp(1.0 / SCALE_CLAMP, SCALE_CLAMP)
    }
}

impl Compiled {
    /// Ruiz-style equilibration over cone diagonals and variables; run once
    /// after [`compile`]. Deterministic.
    pub fn equilibrate(&mut self, sweeps: usize) {
        let n = self.n_vars;
        for _ in 0..sweeps {
            // Cone-diagonal scaling from coefficient row maxima.
            for (ci, cone) in self.mat_cones.iter_mut().enumerate() {
                let mut rowmax = vec![0.0_f64; cone.dim];
                for (_, sp) in &cone.coeffs {
                    for &(i, j, v) in &sp.entries {
                        let a = v.norm();
                        rowmax[i as usize] = rowmax[i as usize].max(a);
                        rowmax[j as usize] = rowmax[j as usize].max(a);
                    }
                }
                // The constant part participates in the cone content, so a
                // constant entry dwarfing every coefficient would otherwise
                // leave the cone catastrophically unbalanced.
                for j in 0..cone.dim {
                    for i in 0..cone.dim {
                        let a = cone.f0[(i, j)].norm();
                        rowmax[i] = rowmax[i].max(a);
                        rowmax[j] = rowmax[j].max(a);
                    }
                }
                let d = DVector::from_iterator(
                    cone.dim,
                    rowmax.iter().map(|&m| clamp_scale(1.0 / m.sqrt())),
                );
                for (_, sp) in cone.coeffs.iter_mut() {
                    sp.scale_rows_cols(&d);
                }
                for j in 0..cone.dim {
                    for i in 0..cone.dim {
                        cone.f0[(i, j)] *= d[i] * d[j];
                    }
                }
                self.cone_diag[ci].component_mul_assign(&d);
            }
            for (ri, row) in self.nn_rows.iter_mut().enumerate() {
                let m = row.terms.iter().fold(0.0_f64, |a, &(_, v)| a.max(v.abs()));
                let s = clamp_scale(1.0 / m);
                for (_, v) in row.terms.iter_mut() {
                    *v *= s;
                }
                row.f0 *= s;
                self.nn_row_scale[ri] *= s;
            }
            for (ri, row) in self.eq_rows.iter_mut().enumerate() {
                let m = row.terms.iter().fold(0.0_f64, |a, &(_, v)| a.max(v.abs()));
                let s = clamp_scale(1.0 / m);
                for (_, v) in row.terms.iter_mut() {
                    *v *= s;
                }
                row.f0 *= s;
                self.eq_row_scale[ri] *= s;
            }

            // Variable scaling from column maxima.
            let mut colmax = vec![0.0_f64; n];
            for cone in &self.mat_cones {
                for (var, sp) in &cone.coeffs {
                    colmax[*var as usize] = colmax[*var as usize].max(sp.max_abs());
                }
            }
            for row in &self.nn_rows {
                for &(var, v) in &row.terms {
                    colmax[var as usize] = colmax[var as usize].max(v.abs());
                }
            }
            for row in &self.eq_rows {
                for &(var, v) in &row.terms {
                    colmax[var as usize] = colmax[var as usize].max(v.abs());
                }
            }
            let sigma: Vec<f64> = colmax
                .iter()
                .map(|&m| clamp_scale(1.0 / m.sqrt()))
                .collect();
            for cone in self.mat_cones.iter_mut() {
                for (var, sp) in cone.coeffs.iter_mut() {
                    sp.scale(sigma[*var as usize]);
                }
            }
            for row in self.nn_rows.iter_mut() {
                for (var, v) in row.terms.iter_mut() {
                    *v *= sigma[*var as usize];
                }
            }
            for row in self.eq_rows.iter_mut() {
                for (var, v) in row.terms.iter_mut() {
                    *v *= sigma[*var as usize];
                }
            }
            for a in 0..n {
                self.c[a] *= sigma[a];
                self.var_scale[a] *= sigma[a];
            }
        }

        // Objective normalization.
        let cmax = self.c.iter().fold(0.0_f64, |a, &v| a.max(v.abs()));
        if cmax > 0.0 && cmax.is_finite() {
            self.cost_scale = cmax;
            self.c /= cmax;
        }
    }

    pub fn reconstruct_block(&self, b: usize, x_scaled: &DVector<f64>) -> HermitianMatrix {
        let dim = self.block_dims[b];
        let base = self.block_offsets[b];
        let unscaled: Vec<f64> = (0..dim * dim)
            .map(|a| x_scaled[base + a] * self.var_scale[base + a])
            .collect();
        HermitianMatrix::from_nearly_hermitian(&dofs_to_matrix(dim, &unscaled))
            .expect("dof reconstruction is Hermitian by construction")
    }

    pub fn reconstruct_scalar(&self, s: usize, x_scaled: &DVector<f64>) -> f64 {
        let idx = self.scalar_offset + s;
        x_scaled[idx] * self.var_scale[idx]
    }
}
