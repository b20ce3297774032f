//! Dense complex linear algebra and the geometry of the unitary group.
//!
//! Everything here is a pure function on [`ComplexMatrix`] values. The
//! tangent space of the unitary group at `X` is `{ Z : X* Z skew-Hermitian }`,
//! and any `H` splits as `X skew(X* H) + X herm(X* H)`; [`tangent_project`]
//! keeps the first term.

mod decomp;
mod matrix;
mod random;

pub use decomp::{hermitian_eig, poldec, HermitianEigen, PolarFactors};
pub use matrix::ComplexMatrix;
pub use random::{random_density, random_hermitian, random_matrix, random_unitary};

use crate::error::{Error, Result};

/// Relative tolerance applied when validating unitary or Hermitian inputs.
pub const INPUT_REL_TOL: f64 = 1e-10;

/// Absolute tolerance promised by constructors for unitarity and Hermiticity.
pub const CONSTRUCTION_TOL: f64 = 1e-12;

/// Frobenius norm `(Σ |a_ij|²)^{1/2}`.
pub fn frob_norm(a: &ComplexMatrix) -> f64 {
    a.as_slice()
        .iter()
        .map(|z| z.norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// Real inner product `Re tr(A* B)`.
pub fn real_inner(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    a.ensure_same_shape(b)?;
    // Re tr(A* B) = Σ Re(conj(a_ij) b_ij)
    Ok(a.as_slice()
        .iter()
        .zip(b.as_slice())
        .map(|(x, y)| x.re * y.re + x.im * y.im)
        .sum())
}

/// `(A + A*) / 2`.
pub fn herm_part(a: &ComplexMatrix) -> ComplexMatrix {
    let n = a.rows();
    assert!(a.is_square(), "herm_part needs a square matrix");
    ComplexMatrix::from_fn(n, n, |i, j| (a[(i, j)] + a[(j, i)].conj()) * 0.5)
}

/// `(A − A*) / 2`.
pub fn skew_part(a: &ComplexMatrix) -> ComplexMatrix {
    let n = a.rows();
    assert!(a.is_square(), "skew_part needs a square matrix");
    ComplexMatrix::from_fn(n, n, |i, j| (a[(i, j)] - a[(j, i)].conj()) * 0.5)
}

/// Rejects `x` unless `‖X*X − I‖_F ≤ INPUT_REL_TOL · √n`.
pub fn ensure_unitary(x: &ComplexMatrix) -> Result<()> {
    x.ensure_square()?;
    let deviation = x.unitary_defect();
    if deviation > INPUT_REL_TOL * (x.rows() as f64).sqrt() {
        return Err(Error::NotUnitary { deviation });
    }
    Ok(())
}

/// Rejects `a` unless `‖A − A*‖_F ≤ INPUT_REL_TOL · ‖A‖_F`.
pub fn ensure_hermitian(a: &ComplexMatrix) -> Result<()> {
    a.ensure_square()?;
    let deviation = a.hermitian_defect();
    if deviation > INPUT_REL_TOL * frob_norm(a) {
        return Err(Error::NotHermitian { deviation });
    }
    Ok(())
}

/// Projection of `h` onto the tangent space at the unitary `x`: `X skew(X* H)`.
pub fn tangent_project(x: &ComplexMatrix, h: &ComplexMatrix) -> Result<ComplexMatrix> {
    ensure_unitary(x)?;
    x.ensure_same_shape(h)?;
    Ok(x * &skew_part(&(&x.adjoint() * h)))
}

/// Kronecker product; `(m×n) ⊗ (p×q)` is `(mp)×(nq)`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (p, q) = b.shape();
    ComplexMatrix::from_fn(a.rows() * p, a.cols() * q, |i, j| {
        a[(i / p, j / q)] * b[(i % p, j % q)]
    })
}

/// Smallest gap between consecutive eigenvalues of a descending spectrum.
/// Returns `f64::INFINITY` for a single eigenvalue.
pub fn min_eigengap(eigenvalues: &[f64]) -> f64 {
    eigenvalues
        .windows(2)
        .map(|w| (w[0] - w[1]).abs())
        .fold(f64::INFINITY, f64::min)
}

#[cfg(test)]
pub(crate) fn c(re: f64, im: f64) -> num_complex::Complex64 {
    num_complex::Complex64::new(re, im)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn hadamard() -> ComplexMatrix {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        ComplexMatrix::from_real_rows(&[&[h, h], &[h, -h]]).unwrap()
    }

    #[test]
    fn frob_norm_examples() {
        assert_eq!(frob_norm(&ComplexMatrix::identity(2)), 2f64.sqrt());
        assert_eq!(frob_norm(&ComplexMatrix::zeros(3, 3)), 0.0);
        let a = ComplexMatrix::from_real_diagonal(&[3.0, 4.0]);
        assert_eq!(frob_norm(&a), 5.0);
    }

    #[test]
    fn real_inner_examples() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(real_inner(&i2, &i2).unwrap(), 2.0);

        let a = ComplexMatrix::from_diagonal(&[c(0.0, 1.0)]);
        let b = ComplexMatrix::identity(1);
        assert_eq!(real_inner(&a, &b).unwrap(), 0.0);

        let r = random_matrix(4, 4, 17);
        let n = frob_norm(&r);
        assert!((real_inner(&r, &r).unwrap() - n * n).abs() < 1e-12 * n * n);
    }

    #[test]
    fn real_inner_rejects_shape_mismatch() {
        let a = ComplexMatrix::identity(2);
        let b = ComplexMatrix::identity(3);
        assert!(matches!(
            real_inner(&a, &b),
            Err(Error::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn herm_skew_examples() {
        let a = ComplexMatrix::from_real_rows(&[&[0.0, 2.0], &[0.0, 0.0]]).unwrap();
        let expect_h = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap();
        let expect_s = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[-1.0, 0.0]]).unwrap();
        assert_eq!(herm_part(&a), expect_h);
        assert_eq!(skew_part(&a), expect_s);

        let h = random_hermitian(3, 5);
        assert_eq!(herm_part(&h), h);
        assert_eq!(frob_norm(&skew_part(&h)), 0.0);

        let s = skew_part(&random_matrix(3, 3, 6));
        assert_eq!(skew_part(&s), s);
        assert_eq!(frob_norm(&herm_part(&s)), 0.0);
    }

    #[test]
    fn tangent_project_at_identity() {
        let i3 = ComplexMatrix::identity(3);
        let s = skew_part(&random_matrix(3, 3, 1));
        assert!(tangent_project(&i3, &s).unwrap().max_abs_diff(&s) < 1e-15);
        let h = random_hermitian(3, 2);
        assert!(frob_norm(&tangent_project(&i3, &h).unwrap()) < 1e-15);
    }

    #[test]
    fn tangent_project_is_idempotent() {
        for seed in 0..20 {
            let x = random_unitary(5, seed);
            let h = random_matrix(5, 5, 100 + seed);
            let once = tangent_project(&x, &h).unwrap();
            let twice = tangent_project(&x, &once).unwrap();
            assert!(frob_norm(&(&once - &twice)) < 1e-13 * frob_norm(&h).max(1.0));
        }
    }

    #[test]
    fn tangent_project_rejects_non_unitary() {
        let x = ComplexMatrix::from_real_diagonal(&[1.0, 2.0]);
        let h = ComplexMatrix::identity(2);
        assert!(matches!(
            tangent_project(&x, &h),
            Err(Error::NotUnitary { .. })
        ));
    }

    #[test]
    fn kron_examples() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(kron(&i2, &i2), ComplexMatrix::identity(4));
        let d = ComplexMatrix::from_real_diagonal(&[1.0, 2.0]);
        assert_eq!(
            kron(&d, &i2),
            ComplexMatrix::from_real_diagonal(&[1.0, 1.0, 2.0, 2.0])
        );

        let hh = kron(&hadamard(), &hadamard());
        // H⊗H = ½ [[1,1,1,1],[1,-1,1,-1],[1,1,-1,-1],[1,-1,-1,1]]
        let signs = [
            [1.0, 1.0, 1.0, 1.0],
            [1.0, -1.0, 1.0, -1.0],
            [1.0, 1.0, -1.0, -1.0],
            [1.0, -1.0, -1.0, 1.0],
        ];
        for (i, row) in signs.iter().enumerate() {
            for (j, s) in row.iter().enumerate() {
                assert!((hh[(i, j)] - c(0.5 * s, 0.0)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn kron_rectangular_shape() {
        let a = ComplexMatrix::zeros(2, 3);
        let b = ComplexMatrix::zeros(4, 5);
        assert_eq!(kron(&a, &b).shape(), (8, 15));
    }

    proptest! {
        #[test]
        fn projection_split_reconstructs(seed in 0u64..10_000, n in 1usize..7) {
            let x = random_unitary(n, seed);
            let h = random_matrix(n, n, seed.wrapping_add(7));
            let xh = &x.adjoint() * &h;
            let split = &(&x * &skew_part(&xh)) + &(&x * &herm_part(&xh));
            prop_assert!(frob_norm(&(&split - &h)) < 1e-13 * frob_norm(&h).max(1.0));
        }

        #[test]
        fn tangent_output_is_tangent(seed in 0u64..10_000, n in 1usize..7) {
            let x = random_unitary(n, seed);
            let h = random_matrix(n, n, seed ^ 0x5a5a);
            let z = tangent_project(&x, &h).unwrap();
            prop_assert!(frob_norm(&herm_part(&(&x.adjoint() * &z))) < 1e-12);
        }

        #[test]
        fn real_inner_symmetric_on_hermitian(seed in 0u64..10_000, n in 1usize..7) {
            let a = random_hermitian(n, seed);
            let b = random_hermitian(n, seed + 1);
            let ab = real_inner(&a, &b).unwrap();
            let ba = real_inner(&b, &a).unwrap();
            prop_assert!((ab - ba).abs() <= 1e-12 * ab.abs().max(1.0));
        }
    }
}
