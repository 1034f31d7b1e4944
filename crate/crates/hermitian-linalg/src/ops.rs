use crate::{CMat, CVec};

/// Kronecker product `a ⊗ b`: block `(i, j)` of the result is `a[i,j] * b`.
pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

/// `I_n ⊗ m` without materializing the identity.
pub fn kron_identity_left(n: usize, m: &CMat) -> CMat {
    let (r, c) = m.shape();
    let mut out = CMat::zeros(n * r, n * c);
    for k in 0..n {
        out.view_mut((k * r, k * c), (r, c)).copy_from(m);
    }
    out
}

/// Stack the columns of `a` from left to right into one column vector.
/// Column-major storage makes this a straight copy of the backing slice.
pub fn vectorize(a: &CMat) -> CVec {
    CVec::from_column_slice(a.as_slice())
}

/// Quadratic form `xᴴ M x`; real part only (exact for Hermitian `M`).
pub fn quad_form(m: &CMat, x: &CVec) -> f64 {
    let mx = m * x;
    x.iter().zip(mx.iter()).map(|(a, b)| (a.conj() * b).re).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::C64;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn kron_identity_block_diagonal() {
        let a = CMat::from_row_slice(2, 2, &[c(1., 2.), c(3., 0.), c(0., -1.), c(4., 4.)]);
        let i2 = CMat::identity(2, 2);
        let k = kron(&i2, &a);
        assert_eq!(k.shape(), (4, 4));
        assert_eq!(k[(0, 0)], a[(0, 0)]);
        assert_eq!(k[(2, 2)], a[(0, 0)]);
        assert_eq!(k[(3, 2)], a[(1, 0)]);
        assert_eq!(k[(0, 2)], c(0., 0.));
        assert_eq!(k, kron_identity_left(2, &a));
    }

    #[test]
    fn kron_swap_times_scalar_block() {
        let swap = CMat::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)]);
        let b = CMat::from_element(1, 1, c(2., 0.));
        let k = kron(&swap, &b);
        let expect = CMat::from_row_slice(2, 2, &[c(0., 0.), c(2., 0.), c(2., 0.), c(0., 0.)]);
        assert_eq!(k, expect);
    }

    #[test]
    fn kron_dimension_rule() {
        let a = CMat::zeros(2, 3);
        let b = CMat::zeros(4, 5);
        assert_eq!(kron(&a, &b).shape(), (8, 15));
    }

    #[test]
    fn vectorize_stacks_columns() {
        // [[1,3],[2,4]] -> [1,2,3,4]
        let a = CMat::from_row_slice(2, 2, &[c(1., 0.), c(3., 0.), c(2., 0.), c(4., 0.)]);
        let v = vectorize(&a);
        let got: Vec<f64> = v.iter().map(|z| z.re).collect();
        assert_eq!(got, vec![1.0, 2.0, 3.0, 4.0]);
    }

    #[test]
    fn vectorize_zero() {
        let v = vectorize(&CMat::zeros(3, 2));
        assert!(v.iter().all(|z| *z == c(0., 0.)));
        assert_eq!(v.len(), 6);
    }
}
