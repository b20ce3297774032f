//! Seeded random matrices. Each generator draws from its own ChaCha stream,
//! so using the same seed for a unitary and a density yields unrelated draws.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::decomp::poldec;
use super::herm_part;
use super::matrix::ComplexMatrix;

const DENSITY_SHIFT: f64 = 1e-3;

const STREAM_GAUSSIAN: u64 = 0;
const STREAM_UNITARY: u64 = 1;
const STREAM_DENSITY: u64 = 2;
const STREAM_HERMITIAN: u64 = 3;

fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

fn gaussian(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re, im)
    })
}

/// Complex Gaussian matrix with i.i.d. standard normal real and imaginary parts.
pub fn random_matrix(rows: usize, cols: usize, seed: u64) -> ComplexMatrix {
    gaussian(rows, cols, &mut rng(seed, STREAM_GAUSSIAN))
}

/// Unitary factor of a complex Gaussian matrix.
pub fn random_unitary(n: usize, seed: u64) -> ComplexMatrix {
    assert!(n >= 1, "dimension must be positive");
    let g = gaussian(n, n, &mut rng(seed, STREAM_UNITARY));
    poldec(&g)
        .expect("SVD of a finite Gaussian matrix converges")
        .unitary
}

/// Density matrix `(G G* + εI) / tr(G G* + εI)` with `ε = 1e-3`; strictly
/// positive definite with unit trace.
pub fn random_density(n: usize, seed: u64) -> ComplexMatrix {
    assert!(n >= 1, "dimension must be positive");
    let g = gaussian(n, n, &mut rng(seed, STREAM_DENSITY));
    let shifted = &(&g * &g.adjoint()) + &ComplexMatrix::identity(n).scale_real(DENSITY_SHIFT);
    let shifted = herm_part(&shifted);
    let tr = shifted.trace().re;
    shifted.scale_real(1.0 / tr)
}

/// Random Hermitian matrix `(G + G*) / 2`.
pub fn random_hermitian(n: usize, seed: u64) -> ComplexMatrix {
    herm_part(&gaussian(n, n, &mut rng(seed, STREAM_HERMITIAN)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matkit::hermitian_eig;

    #[test]
    fn unitary_scalar_case() {
        let u = random_unitary(1, 9);
        assert!((u[(0, 0)].norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn unitary_is_deterministic_and_unitary() {
        assert_eq!(random_unitary(10, 5), random_unitary(10, 5));
        assert_ne!(random_unitary(10, 5), random_unitary(10, 6));
        for seed in 0..10 {
            assert!(random_unitary(10, seed).unitary_defect() < 1e-12);
        }
    }

    #[test]
    fn density_scalar_case() {
        let d = random_density(1, 3);
        assert_eq!(d[(0, 0)], Complex64::new(1.0, 0.0));
    }

    #[test]
    fn density_is_positive_with_unit_trace() {
        for seed in 0..20 {
            let n = 2 + (seed as usize % 9);
            let d = random_density(n, seed);
            assert_eq!(d.hermitian_defect(), 0.0);
            assert!((d.trace().re - 1.0).abs() < 1e-12);
            let e = hermitian_eig(&d).unwrap();
            assert!(*e.eigenvalues.last().unwrap() > 0.0);
            assert!(e.eigenvalues[0] < 1.0);
        }
        assert_eq!(random_density(6, 1), random_density(6, 1));
    }

    #[test]
    fn streams_are_independent() {
        // same seed, different generators: no shared Gaussian draw
        let u = random_unitary(3, 11);
        let g = random_matrix(3, 3, 11);
        assert!(u.max_abs_diff(&poldec(&g).unwrap().unitary) > 1e-3);
    }
}
