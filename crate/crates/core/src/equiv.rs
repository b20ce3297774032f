//! Checks for when two unitaries describe the same channel.
//!
//! Two unitaries that send one non-degenerate `ρ` to the same `σ` differ by
//! a diagonal phase in the eigenbasis `V` of `ρ`: `U₁ = U₂ V D V*`. Two
//! unitaries that agree on every state differ by a single global phase.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matkit::{frob_norm, hermitian_eig, min_eigengap, ComplexMatrix};

/// `|tr(V*U)|` below which the optimal global phase is undefined.
pub const DEGENERATE_ALIGNMENT: f64 = 1e-14;

/// Smallest pivot modulus accepted by [`normalized_diff`].
pub const MIN_PIVOT: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseAlignment {
    /// Unimodular `μ` minimising `‖U − μV‖_F`.
    pub mu: Complex64,
    pub distance: f64,
    /// Set when `tr(V*U)` vanishes; `mu` is then 1.
    pub degenerate: bool,
}

/// Best global phase between `u` and `v`: `μ = tr(V*U)/|tr(V*U)|`.
pub fn global_phase_align(u: &ComplexMatrix, v: &ComplexMatrix) -> Result<PhaseAlignment> {
    u.ensure_same_shape(v)?;
    let overlap: Complex64 = v
        .as_slice()
        .iter()
        .zip(u.as_slice())
        .map(|(a, b)| a.conj() * b)
        .sum();
    let modulus = overlap.norm();
    let (mu, degenerate) = if modulus < DEGENERATE_ALIGNMENT {
        (Complex64::new(1.0, 0.0), true)
    } else {
        (overlap / modulus, false)
    };
    let distance = frob_norm(&(u - &v.scale(mu)));
    Ok(PhaseAlignment {
        mu,
        distance,
        degenerate,
    })
}

/// Diagonal and off-diagonal content of `Δ = V* U₂* U₁ V`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalRelation {
    pub d_hat: Vec<Complex64>,
    pub offdiag_mass: f64,
}

impl DiagonalRelation {
    /// Phases `arg(d_k)`.
    pub fn phases(&self) -> Vec<f64> {
        self.d_hat.iter().map(|d| d.arg()).collect()
    }
}

pub fn relation_matrix(
    u1: &ComplexMatrix,
    u2: &ComplexMatrix,
    v: &ComplexMatrix,
) -> Result<DiagonalRelation> {
    u1.ensure_same_shape(u2)?;
    u1.ensure_same_shape(v)?;
    let delta = &(&(&v.adjoint() * &u2.adjoint()) * u1) * v;
    let d_hat = delta.diagonal();
    let off = ComplexMatrix::from_fn(delta.rows(), delta.cols(), |i, j| {
        if i == j {
            Complex64::new(0.0, 0.0)
        } else {
            delta[(i, j)]
        }
    });
    Ok(DiagonalRelation {
        d_hat,
        offdiag_mass: frob_norm(&off),
    })
}

/// Whether `u1 = u2 V D V*` for a unimodular diagonal `D`, up to `tol`.
/// Mismatched shapes are never equivalent.
pub fn is_equiv_under(u1: &ComplexMatrix, u2: &ComplexMatrix, v: &ComplexMatrix, tol: f64) -> bool {
    match relation_matrix(u1, u2, v) {
        Ok(rel) => {
            rel.offdiag_mass <= tol && rel.d_hat.iter().all(|d| (d.norm() - 1.0).abs() <= tol)
        }
        Err(_) => false,
    }
}

/// Equivalence test against the eigenbasis of `rho`, reported together with
/// the eigengap of `rho` (the eigenbasis ordering is unreliable when the gap
/// is tiny).
#[derive(Debug, Clone, PartialEq)]
pub struct EquivalenceReport {
    pub relation: DiagonalRelation,
    pub eigengap: f64,
    pub equivalent: bool,
}

pub fn equivalence_report(
    u1: &ComplexMatrix,
    u2: &ComplexMatrix,
    rho: &ComplexMatrix,
    tol: f64,
) -> Result<EquivalenceReport> {
    let eig = hermitian_eig(rho)?;
    let relation = relation_matrix(u1, u2, &eig.eigenvectors)?;
    let equivalent = relation.offdiag_mass <= tol
        && relation.d_hat.iter().all(|d| (d.norm() - 1.0).abs() <= tol);
    Ok(EquivalenceReport {
        relation,
        eigengap: min_eigengap(&eig.eigenvalues),
        equivalent,
    })
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Pivot {
    /// Entry (1,1).
    #[default]
    Entry11,
    /// Largest-modulus entry of the first matrix (first in row-major order on
    /// ties); the same position is used in the second matrix.
    MaxModulus,
}

/// `‖U/p − U'/p'‖_F` with `p`, `p'` the pivot entries of each matrix.
pub fn normalized_diff(u: &ComplexMatrix, u_prime: &ComplexMatrix, pivot: Pivot) -> Result<f64> {
    u.ensure_same_shape(u_prime)?;
    let (i, j) = match pivot {
        Pivot::Entry11 => (0, 0),
        Pivot::MaxModulus => {
            let mut best = (0, 0);
            let mut best_mod = -1.0;
            for r in 0..u.rows() {
                for c in 0..u.cols() {
                    let m = u[(r, c)].norm();
                    if m > best_mod {
                        best_mod = m;
                        best = (r, c);
                    }
                }
            }
            best
        }
    };
    let p = u[(i, j)];
    let p_prime = u_prime[(i, j)];
    for z in [p, p_prime] {
        if z.norm() <= MIN_PIVOT {
            return Err(Error::PivotTooSmall { modulus: z.norm() });
        }
    }
    Ok(frob_norm(
        &(&u.scale(p.inv()) - &u_prime.scale(p_prime.inv())),
    ))
}

/// [`normalized_diff`] with the (1,1) pivot, falling back to the
/// max-modulus pivot when (1,1) is too small.
pub fn normalized_diff_auto(u: &ComplexMatrix, u_prime: &ComplexMatrix) -> Result<f64> {
    match normalized_diff(u, u_prime, Pivot::Entry11) {
        Err(Error::PivotTooSmall { .. }) => normalized_diff(u, u_prime, Pivot::MaxModulus),
        other => other,
    }
}
