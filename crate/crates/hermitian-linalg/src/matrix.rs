use crate::{fro_norm, hermitian_part, C64, CMat, LinalgError, HERMITIAN_TOL};

/// A validated dense complex matrix: finite entries, column-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix(CMat);

impl ComplexMatrix {
    /// Build from column-major entries. Fails on non-finite entries or an
    /// entry count that does not match `rows * cols`.
    pub fn from_column_major(
        rows: usize,
        cols: usize,
        entries: Vec<C64>,
    ) -> Result<Self, LinalgError> {
        if entries.len() != rows * cols {
            return Err(LinalgError::DimensionMismatch(format!(
                "{} entries for a {}x{} matrix",
                entries.len(),
                rows,
                cols
            )));
        }
        let m = CMat::from_vec(rows, cols, entries);
        Self::from_matrix(m)
    }

    pub fn from_matrix(m: CMat) -> Result<Self, LinalgError> {
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(LinalgError::NonFinite);
        }
        Ok(Self(m))
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn as_matrix(&self) -> &CMat {
        &self.0
    }

    pub fn into_matrix(self) -> CMat {
        self.0
    }
}

impl std::ops::Deref for ComplexMatrix {
    type Target = CMat;
    fn deref(&self) -> &CMat {
        &self.0
    }
}

/// A validated Hermitian matrix: square, `M = Mᴴ` within [`HERMITIAN_TOL`]
/// relative, real diagonal, finite entries.
///
/// Construction symmetrizes the input exactly, so the stored matrix carries
/// a bit-true Hermitian structure even when the input only satisfied the
/// tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix(CMat);

impl HermitianMatrix {
    pub fn new(m: CMat) -> Result<Self, LinalgError> {
        if m.nrows() != m.ncols() {
            return Err(LinalgError::NotSquare {
                rows: m.nrows(),
                cols: m.ncols(),
            });
        }
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(LinalgError::NonFinite);
        }
        let scale = fro_norm(&m).max(1.0);
        let asym = fro_norm(&(&m - m.adjoint())) / scale;
        if asym > HERMITIAN_TOL {
            return Err(LinalgError::NotHermitian { asymmetry: asym });
        }
        Ok(Self(hermitian_part(&m)))
    }

    /// Symmetrize unconditionally; for matrices that are Hermitian up to
    /// solver noise rather than construction noise.
    pub fn from_nearly_hermitian(m: &CMat) -> Result<Self, LinalgError> {
        if m.nrows() != m.ncols() {
            return Err(LinalgError::NotSquare {
                rows: m.nrows(),
                cols: m.ncols(),
            });
        }
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(LinalgError::NonFinite);
        }
        Ok(Self(hermitian_part(m)))
    }

    pub fn zeros(dim: usize) -> Self {
        Self(CMat::zeros(dim, dim))
    }

    pub fn identity(dim: usize) -> Self {
        Self(CMat::identity(dim, dim))
    }

    /// Rank-one Hermitian `v vᴴ`.
    pub fn outer(v: &crate::CVec) -> Self {
        Self(v * v.adjoint())
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_matrix(&self) -> &CMat {
        &self.0
    }

    pub fn into_matrix(self) -> CMat {
        self.0
    }

    /// Trace; real by construction.
    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.0[(i, i)].re).sum()
    }

    pub fn fro_norm(&self) -> f64 {
        fro_norm(&self.0)
    }

    /// `self + c * other`, staying in the Hermitian type.
    pub fn axpy(&self, c: f64, other: &HermitianMatrix) -> HermitianMatrix {
        HermitianMatrix(&self.0 + &other.0 * C64::new(c, 0.0))
    }

    pub fn scale(&self, c: f64) -> HermitianMatrix {
        HermitianMatrix(&self.0 * C64::new(c, 0.0))
    }
}

impl std::ops::Deref for HermitianMatrix {
    type Target = CMat;
    fn deref(&self) -> &CMat {
        &self.0
    }
}
