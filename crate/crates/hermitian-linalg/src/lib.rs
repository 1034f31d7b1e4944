//! Dense complex linear algebra primitives shared by the beamforming stack.
//!
//! Everything here is column-major (`nalgebra` storage), so [`vectorize`]
//! really is the "stack the columns" operation and Kronecker-lifted
//! quadratic forms can be evaluated without copying.

mod error;
mod matrix;
mod ops;
mod spectral;
mod trust_region;

pub use error::LinalgError;
pub use matrix::{ComplexMatrix, HermitianMatrix};
pub use ops::{kron, kron_identity_left, quad_form, vectorize};
pub use spectral::{eig_hermitian, eig_hermitian_raw, null_space_basis, numerical_rank, HermitianEig};
pub use trust_region::trust_region_quadratic_max;

/// Complex scalar used throughout the workspace.
pub type C64 = num_complex::Complex<f64>;
/// Dense complex matrix (column-major).
pub type CMat = nalgebra::DMatrix<C64>;
/// Dense complex column vector.
pub type CVec = nalgebra::DVector<C64>;

/// Relative tolerance used to validate Hermitian symmetry on construction.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Default relative eigenvalue threshold for numerical rank decisions.
/// Interior-point solutions carry roughly 1e-8 noise, so the cut sits a
/// decade above that.
pub const DEFAULT_RANK_TOL: f64 = 1e-7;

/// Real inner product `Re tr(AᴴB)` of two complex matrices.
pub fn inner(a: &CMat, b: &CMat) -> f64 {
    debug_assert_eq!(a.shape(), b.shape());
    a.iter().zip(b.iter()).map(|(x, y)| (x.conj() * y).re).sum()
}

/// Frobenius norm.
pub fn fro_norm(a: &CMat) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// Symmetrize a nearly-Hermitian matrix: `(M + Mᴴ) / 2`.
pub fn hermitian_part(m: &CMat) -> CMat {
    let mut out = m.clone();
    let n = m.nrows();
    for j in 0..n {
        for i in 0..n {
            out[(i, j)] = (m[(i, j)] + m[(j, i)].conj()) * 0.5;
        }
    }
    out
}
