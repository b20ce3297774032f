use num_complex::Complex64;

use super::matrix::ComplexMatrix;
use super::{ensure_hermitian, herm_part};
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 10_000;

/// Spectral factorization `A = Q diag(λ) Q*` of a Hermitian matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianEigen {
    /// Sorted in descending order.
    pub eigenvalues: Vec<f64>,
    /// Column `i` is the eigenvector of `eigenvalues[i]`. The entry of largest
    /// modulus in each column is real and positive.
    pub eigenvectors: ComplexMatrix,
}

impl HermitianEigen {
    pub fn reconstruct(&self) -> ComplexMatrix {
        let q = &self.eigenvectors;
        &(q * &ComplexMatrix::from_real_diagonal(&self.eigenvalues)) * &q.adjoint()
    }
}

/// Polar factors `A = W P` with `W` unitary and `P` Hermitian positive semidefinite.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarFactors {
    pub unitary: ComplexMatrix,
    pub psd: ComplexMatrix,
    /// Singular values of the decomposed matrix, descending.
    pub singular_values: Vec<f64>,
}

impl PolarFactors {
    /// `σ_min / σ_max`; zero for a singular (or zero) input.
    pub fn conditioning(&self) -> f64 {
        let max = self.singular_values.first().copied().unwrap_or(0.0);
        let min = self.singular_values.last().copied().unwrap_or(0.0);
        if max > 0.0 {
            min / max
        } else {
            0.0
        }
    }
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues descending.
///
/// The input is symmetrized before factorization. Each eigenvector column is
/// rotated so that its largest-modulus entry (lowest row on ties) is real and
/// positive, which makes the output reproducible across calls.
pub fn hermitian_eig(a: &ComplexMatrix) -> Result<HermitianEigen> {
    ensure_hermitian(a)?;
    let n = a.rows();
    let sym = herm_part(a).to_nalgebra();
    let eig = sym
        .try_symmetric_eigen(f64::EPSILON, MAX_SWEEPS)
        .ok_or(Error::NoConvergence("Hermitian eigenvalue"))?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));

    let eigenvalues: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut columns: Vec<Vec<Complex64>> = order
        .iter()
        .map(|&k| eig.eigenvectors.column(k).iter().copied().collect())
        .collect();
    for col in &mut columns {
        fix_phase(col);
    }
    let eigenvectors = ComplexMatrix::from_fn(n, n, |i, j| columns[j][i]);
    Ok(HermitianEigen {
        eigenvalues,
        eigenvectors,
    })
}

fn fix_phase(col: &mut [Complex64]) {
    let mut pivot = 0;
    let mut best = -1.0;
    for (i, z) in col.iter().enumerate() {
        let m = z.norm();
        if m > best {
            best = m;
            pivot = i;
        }
    }
    if best <= 0.0 {
        return;
    }
    let rot = col[pivot].conj() / best;
    for z in col.iter_mut() {
        *z *= rot;
    }
    col[pivot] = Complex64::new(col[pivot].norm(), 0.0);
}

/// Polar decomposition through the singular value factorization
/// `A = W Σ Y*`: unitary factor `W Y*`, PSD factor `Y Σ Y*`.
///
/// Rank-deficient inputs go through the same formula; the unitary factor is
/// then one valid completion.
pub fn poldec(a: &ComplexMatrix) -> Result<PolarFactors> {
    a.ensure_square()?;
    let svd = a
        .to_nalgebra()
        .try_svd(true, true, f64::EPSILON, MAX_SWEEPS)
        .ok_or(Error::NoConvergence("singular value"))?;
    let (w, yt) = match (&svd.u, &svd.v_t) {
        (Some(w), Some(yt)) => (w, yt),
        _ => return Err(Error::NoConvergence("singular value")),
    };
    let unitary = ComplexMatrix::from_nalgebra(&(w * yt));
    let sigma =
        nalgebra::DMatrix::from_diagonal(&svd.singular_values.map(|s| Complex64::new(s, 0.0)));
    let psd = herm_part(&ComplexMatrix::from_nalgebra(&(yt.adjoint() * sigma * yt)));
    let mut singular_values: Vec<f64> = svd.singular_values.iter().copied().collect();
    singular_values.sort_by(|a, b| b.total_cmp(a));
    Ok(PolarFactors {
        unitary,
        psd,
        singular_values,
    })
}
