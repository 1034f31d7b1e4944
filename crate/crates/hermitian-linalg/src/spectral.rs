use crate::{C64, CMat, HermitianMatrix, LinalgError};
use nalgebra::DVector;

/// Eigendecomposition of a Hermitian matrix with eigenvalues sorted
/// ascending and the eigenvector columns permuted to match.
#[derive(Debug, Clone)]
pub struct HermitianEig {
    pub eigenvalues: DVector<f64>,
    /// Unitary; column `i` pairs with `eigenvalues[i]`.
    pub eigenvectors: CMat,
}

impl HermitianEig {
    /// Largest eigenvalue (last entry).
    pub fn lambda_max(&self) -> f64 {
        self.eigenvalues[self.eigenvalues.len() - 1]
    }

    pub fn lambda_min(&self) -> f64 {
        self.eigenvalues[0]
    }

    /// `V diag(f(λ)) Vᴴ`.
    pub fn map_rebuild(&self, f: impl Fn(f64) -> f64) -> CMat {
        let d = CMat::from_diagonal(&self.eigenvalues.map(|x| C64::new(f(x), 0.0)));
        &self.eigenvectors * d * self.eigenvectors.adjoint()
    }
}

/// Hermitian eigendecomposition, eigenvalues ascending.
pub fn eig_hermitian(m: &HermitianMatrix) -> HermitianEig {
    eig_hermitian_raw(m.as_matrix())
}

/// Same as [`eig_hermitian`] but on a raw matrix the caller already knows to
/// be Hermitian (e.g. solver internals that maintain the structure exactly).
pub fn eig_hermitian_raw(m: &CMat) -> HermitianEig {
    let se = nalgebra::SymmetricEigen::new(m.clone());
    let n = se.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| se.eigenvalues[a].total_cmp(&se.eigenvalues[b]));
    let eigenvalues = DVector::from_iterator(n, order.iter().map(|&i| se.eigenvalues[i]));
    let mut eigenvectors = CMat::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        eigenvectors.column_mut(dst).copy_from(&se.eigenvectors.column(src));
    }
    HermitianEig {
        eigenvalues,
        eigenvectors,
    }
}

/// Number of eigenvalues above `tol * lambda_max`, for PSD matrices.
/// A numerically zero or negative-semidefinite input has rank 0.
pub fn numerical_rank(m: &HermitianMatrix, tol: f64) -> usize {
    let eig = eig_hermitian(m);
    let lmax = eig.lambda_max();
    if lmax <= 0.0 {
        return 0;
    }
    eig.eigenvalues.iter().filter(|&&l| l > tol * lmax).count()
}

/// Orthonormal basis of the numerical null space of a Hermitian matrix.
///
/// A column `v` is selected when `|λ| <= tol * (1 + max|λ|)`, which bounds
/// `‖m v‖` by the same quantity. Full-rank input yields zero columns.
pub fn null_space_basis(m: &HermitianMatrix, tol: f64) -> Result<CMat, LinalgError> {
    if tol <= 0.0 {
        return Err(LinalgError::InvalidArgument(format!(
            "null space tolerance must be positive, got {tol}"
        )));
    }
    let eig = eig_hermitian(m);
    let amax = eig
        .eigenvalues
        .iter()
        .fold(0.0_f64, |acc, &l| acc.max(l.abs()));
    let thr = tol * (1.0 + amax);
    let keep: Vec<usize> = (0..eig.eigenvalues.len())
        .filter(|&i| eig.eigenvalues[i].abs() <= thr)
        .collect();
    let n = m.dim();
    let mut basis = CMat::zeros(n, keep.len());
    for (dst, &src) in keep.iter().enumerate() {
        basis
            .column_mut(dst)
            .copy_from(&eig.eigenvectors.column(src));
    }
    Ok(basis)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::CVec;

    #[test]
    fn identity_eigenvalues() {
        let eig = eig_hermitian(&HermitianMatrix::identity(3));
        for l in eig.eigenvalues.iter() {
            assert!((l - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn diag_eigenvalues_sorted() {
        let m = CMat::from_diagonal(&CVec::from_vec(vec![C64::new(3.0, 0.0), C64::new(2.0, 0.0)]));
        let eig = eig_hermitian(&HermitianMatrix::new(m).unwrap());
        assert!((eig.eigenvalues[0] - 2.0).abs() < 1e-14);
        assert!((eig.eigenvalues[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn null_space_of_rank_deficient_diag() {
        let m = CMat::from_diagonal(&CVec::from_vec(vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)]));
        let h = HermitianMatrix::new(m).unwrap();
        let basis = null_space_basis(&h, 1e-10).unwrap();
        assert_eq!(basis.ncols(), 1);
        assert!((basis[(1, 0)].norm() - 1.0).abs() < 1e-12);
        assert!(basis[(0, 0)].norm() < 1e-12);
    }

    #[test]
    fn null_space_of_positive_definite_is_empty() {
        let m = CMat::identity(4, 4) * C64::new(2.0, 0.0);
        let h = HermitianMatrix::new(m).unwrap();
        let basis = null_space_basis(&h, 1e-10).unwrap();
        assert_eq!(basis.ncols(), 0);
    }

    #[test]
    fn rank_of_outer_product() {
        let v = CVec::from_vec(vec![C64::new(1.0, 2.0), C64::new(-0.5, 0.25), C64::new(0.0, 1.0)]);
        let w = HermitianMatrix::outer(&v);
        assert_eq!(numerical_rank(&w, 1e-9), 1);
        assert_eq!(numerical_rank(&HermitianMatrix::zeros(3), 1e-9), 0);
    }
}
