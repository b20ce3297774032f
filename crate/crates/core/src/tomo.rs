//! Simulated measurements and channel reconstruction.
//!
//! The pipeline recovers a hidden `U` (up to global phase) from expectation
//! value queries only:
//!
//! 1. tomograph `σ₀ = Φ(ρ₀)` for a non-degenerate `ρ₀` (`n² + n` queries) and
//!    fit `u0` with the polar iteration. Then `U = u0 V diag(d) V*` where `V`
//!    is the eigenbasis of `ρ₀` and `d` is an unknown unimodular vector.
//! 2. for each `q ≥ 2`, feed the two probes `ρ±` built on `(v₁, v_q)` through
//!    the channel and measure them against `w = u0 (v₁ + v_q)/√2`. This gives
//!    `Re` and `Im` of `d₁ conj(d_q)` (2 queries per `q`).
//! 3. fix `d₁ = 1`.
//!
//! Indices in this module are zero-based.

use std::sync::atomic::{AtomicU64, Ordering};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matkit::{
    ensure_unitary, frob_norm, hermitian_eig, min_eigengap, random_density, real_inner,
    ComplexMatrix,
};
use crate::search::{self, ChannelInstance, Init, IterationTrace, SolverConfig, Status};

/// Relative eigengap (against `λ_max − λ_min`) below which `ρ₀` is rejected.
pub const DEGENERACY_THRESHOLD: f64 = 1e-8;

/// Largest accepted deviation of `|α|` from one.
pub const PHASE_MODULUS_TOL: f64 = 1e-3;

/// Residual bound for the post-reconstruction check on random test states.
pub const VERIFY_TOL: f64 = 1e-8;

/// Objective above which a solver run that hit `max_iters` counts as failed.
pub const SOLVER_FAILURE_OBJECTIVE: f64 = 1e-16;

/// Solver settings for the `u0` fit. The recovered unitary inherits the
/// error of `u0` amplified by the inverse eigengaps of `ρ₀`, so the fit is run
/// well past the general-purpose default.
pub const RECONSTRUCTION_SOLVER: SolverConfig = SolverConfig {
    max_iters: 20_000,
    tol: 1e-28,
    stall_tol: 1e-15,
    init: Init::Identity,
};

const VERIFY_STATES: u64 = 5;
const VERIFY_SEED: u64 = 0x5eed_7e57;

/// A unitary channel `ρ ↦ UρU*` hidden behind a counting measurement interface.
#[derive(Debug)]
pub struct ChannelOracle {
    hidden: ComplexMatrix,
    queries: AtomicU64,
}

impl ChannelOracle {
    pub fn new(hidden: ComplexMatrix) -> Result<Self> {
        ensure_unitary(&hidden)?;
        Ok(Self {
            hidden,
            queries: AtomicU64::new(0),
        })
    }

    pub fn dim(&self) -> usize {
        self.hidden.rows()
    }

    /// Applies the channel to a Hermitian matrix. Not counted as a query.
    pub fn apply(&self, state: &ComplexMatrix) -> ComplexMatrix {
        state.conjugate_by(&self.hidden)
    }

    /// `Re tr(Φ(state) · obs)`; counts as one query.
    pub fn expectation(&self, state: &ComplexMatrix, obs: &Observable) -> f64 {
        self.queries.fetch_add(1, Ordering::SeqCst);
        // tr(AB) = Σ a_ij b_ji; with both Hermitian, b_ji = conj(b_ij)
        real_inner(&obs.matrix, &self.apply(state)).expect("state and observable shapes agree")
    }

    pub fn queries(&self) -> u64 {
        self.queries.load(Ordering::SeqCst)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum ObservableLabel {
    /// `(e_i e_jᵀ + e_j e_iᵀ)/2`
    Plus {
        i: usize,
        j: usize,
    },
    /// `(e_i e_jᵀ − e_j e_iᵀ)/2i`
    Minus {
        i: usize,
        j: usize,
    },
    Probe,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Observable {
    pub matrix: ComplexMatrix,
    pub label: ObservableLabel,
}

impl Observable {
    pub fn plus(n: usize, i: usize, j: usize) -> Self {
        let matrix = ComplexMatrix::from_fn(n, n, |r, c| {
            let hits = usize::from(r == i && c == j) + usize::from(r == j && c == i);
            Complex64::new(0.5 * hits as f64, 0.0)
        });
        Self {
            matrix,
            label: ObservableLabel::Plus { i, j },
        }
    }

    pub fn minus(n: usize, i: usize, j: usize) -> Self {
        // 1/(2i) = −i/2
        let matrix = ComplexMatrix::from_fn(n, n, |r, c| {
            let sign =
                f64::from(u8::from(r == i && c == j)) - f64::from(u8::from(r == j && c == i));
            Complex64::new(0.0, -0.5 * sign)
        });
        Self {
            matrix,
            label: ObservableLabel::Minus { i, j },
        }
    }

    /// Projector `w w*` onto a vector.
    pub fn projector(w: &[Complex64]) -> Self {
        Self {
            matrix: ComplexMatrix::outer(w, w),
            label: ObservableLabel::Probe,
        }
    }
}

/// The `n² + n` tomography observables: for every `i ≤ j` in row-major
/// order, `(E_ij)₊` followed by `(E_ij)₋`. The diagonal `(E_ii)₋` vanish.
pub fn basis_observables(n: usize) -> Vec<Observable> {
    assert!(n >= 1, "dimension must be positive");
    let mut out = Vec::with_capacity(n * n + n);
    for i in 0..n {
        for j in i..n {
            out.push(Observable::plus(n, i, j));
            out.push(Observable::minus(n, i, j));
        }
    }
    out
}

pub fn measure(oracle: &ChannelOracle, state: &ComplexMatrix, obs: &Observable) -> f64 {
    oracle.expectation(state, obs)
}

/// Entrywise reconstruction of `Φ(state)` from `n² + n` queries.
pub fn state_tomography(oracle: &ChannelOracle, state: &ComplexMatrix) -> ComplexMatrix {
    let n = oracle.dim();
    let mut re = vec![0.0; n * n];
    let mut im = vec![0.0; n * n];
    for obs in basis_observables(n) {
        let m = measure(oracle, state, &obs);
        match obs.label {
            ObservableLabel::Plus { i, j } => {
                re[i * n + j] = m;
                re[j * n + i] = m;
            }
            ObservableLabel::Minus { i, j } if i != j => {
                // tr(ρ (E_ij)₋) = −Im ρ_ij
                im[i * n + j] = -m;
                im[j * n + i] = m;
            }
            _ => {}
        }
    }
    ComplexMatrix::from_parts(n, n, &re, &im).expect("measurements are finite")
}

fn check_index(index: usize, n: usize) -> Result<()> {
    if index >= n {
        return Err(Error::IndexOutOfRange { index, n });
    }
    Ok(())
}

fn probe_pair(v: &ComplexMatrix, p: usize, q: usize, r: usize) -> (ComplexMatrix, ComplexMatrix) {
    let (vp, vq, vr) = (v.column(p), v.column(q), v.column(r));
    let anchor = ComplexMatrix::outer(&vr, &vr);
    let pq = ComplexMatrix::outer(&vp, &vq);
    let qp = ComplexMatrix::outer(&vq, &vp);
    let plus = &anchor + &(&pq + &qp).scale_real(0.5);
    let minus = &anchor + &(&pq - &qp).scale(Complex64::new(0.0, -0.5));
    (plus, minus)
}

/// The probes `ρ₊ = v_r v_r* + ½(v_p v_q* + v_q v_p*)` and
/// `ρ₋ = v_r v_r* + (v_p v_q* − v_q v_p*)/2i`.
///
/// Both have unit trace but are not positive semidefinite; the channel acts
/// on them linearly.
pub fn probe_states(
    v: &ComplexMatrix,
    p: usize,
    q: usize,
    r: usize,
) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let n = v.rows();
    for idx in [p, q, r] {
        check_index(idx, n)?;
    }
    if p == q || p == r || q == r {
        return Err(Error::IndexCollision { p, q, r });
    }
    Ok(probe_pair(v, p, q, r))
}

/// `α = d_p conj(d_q)` for a channel `U = u0 V diag(d) V*`, from two queries.
///
/// The anchor `r` is the smallest index outside `{p, q}`. In dimension 2
/// there is none; the anchor is then `v_p` itself, which adds a known `½` to
/// both readings.
pub fn extract_phase_product(
    oracle: &ChannelOracle,
    u0: &ComplexMatrix,
    v: &ComplexMatrix,
    p: usize,
    q: usize,
) -> Result<Complex64> {
    let n = v.rows();
    check_index(p, n)?;
    check_index(q, n)?;
    if p == q {
        return Err(Error::IndexCollision { p, q, r: p });
    }
    let (r, offset) = match (0..n).find(|&k| k != p && k != q) {
        Some(r) => (r, 0.0),
        None => (p, 0.5),
    };
    let (plus, minus) = probe_pair(v, p, q, r);

    let s = std::f64::consts::FRAC_1_SQRT_2;
    let vpq: Vec<Complex64> = v
        .column(p)
        .iter()
        .zip(v.column(q))
        .map(|(a, b)| (a + b) * s)
        .collect();
    let probe = Observable::projector(&u0.mul_vec(&vpq));

    let m_plus = measure(oracle, &plus, &probe) - offset;
    let m_minus = measure(oracle, &minus, &probe) - offset;
    let alpha = Complex64::new(2.0 * m_plus, 2.0 * m_minus);
    if (alpha.norm() - 1.0).abs() > PHASE_MODULUS_TOL {
        return Err(Error::InconsistentPhase {
            modulus: alpha.norm(),
        });
    }
    Ok(alpha)
}

/// Outcome of a full reconstruction.
#[derive(Debug, Clone, PartialEq)]
pub struct ReconstructionReport {
    /// Solver output for the single pair `(ρ₀, Φ(ρ₀))`.
    pub u0: ComplexMatrix,
    /// Eigenbasis of `ρ₀`, eigenvalues descending.
    pub v: ComplexMatrix,
    /// Recovered diagonal phases, `d[0] = 1`.
    pub d: Vec<Complex64>,
    pub u_recovered: ComplexMatrix,
    pub budget_used: u64,
    /// Smallest gap between consecutive eigenvalues of `ρ₀`.
    pub eigengap: f64,
    /// Worst `‖Φ(ρ_t) − u_recovered ρ_t u_recovered*‖_F` over the test states.
    pub residual_on_tests: f64,
    pub solver_status: Status,
    pub trace: IterationTrace,
}

impl ReconstructionReport {
    pub fn verified(&self) -> bool {
        self.residual_on_tests < VERIFY_TOL
    }
}

/// Query count of a full reconstruction in dimension `n`: `n² + n + 2(n − 1)`.
pub fn expected_budget(n: usize) -> u64 {
    let n = n as u64;
    n * n + n + 2 * (n - 1)
}

/// Validates that `rho0` is positive definite with a non-degenerate spectrum
/// and returns its eigendecomposition.
pub fn check_probe_state(rho0: &ComplexMatrix) -> Result<crate::matkit::HermitianEigen> {
    let eig = hermitian_eig(rho0)?;
    let max = eig.eigenvalues[0];
    let min = *eig.eigenvalues.last().expect("non-empty spectrum");
    if min <= 0.0 {
        return Err(Error::NotPositiveDefinite {
            min_eigenvalue: min,
        });
    }
    if eig.eigenvalues.len() > 1 {
        let gap = min_eigengap(&eig.eigenvalues);
        let threshold = DEGENERACY_THRESHOLD * (max - min);
        if gap.is_nan() || gap <= threshold {
            return Err(Error::DegenerateState { gap, threshold });
        }
    }
    Ok(eig)
}

/// Recovers the hidden unitary of `oracle` (up to global phase) using
/// `rho0` as the probe state.
pub fn reconstruct(
    oracle: &ChannelOracle,
    rho0: &ComplexMatrix,
    config: &SolverConfig,
) -> Result<ReconstructionReport> {
    if rho0.shape() != (oracle.dim(), oracle.dim()) {
        return Err(Error::ShapeMismatch {
            expected: (oracle.dim(), oracle.dim()),
            found: rho0.shape(),
        });
    }
    let eig = check_probe_state(rho0)?;
    let n = oracle.dim();
    let start = oracle.queries();

    let sigma0 = state_tomography(oracle, rho0);
    let instance = ChannelInstance::single(rho0.clone(), sigma0)?;
    let solved = search::solve(&instance, config)?;
    if solved.status == Status::MaxIters && solved.final_objective() > SOLVER_FAILURE_OBJECTIVE {
        return Err(Error::SolverFailure {
            status: solved.status.to_string(),
            objective: solved.final_objective(),
        });
    }
    let u0 = solved.u_hat.clone();
    let v = eig.eigenvectors.clone();

    let mut d = vec![Complex64::new(1.0, 0.0); n];
    for (q, dq) in d.iter_mut().enumerate().skip(1) {
        let alpha = extract_phase_product(oracle, &u0, &v, 0, q)?;
        *dq = alpha.conj() / alpha.norm();
    }
    let budget_used = oracle.queries() - start;

    let u_recovered = &(&(&u0 * &v) * &ComplexMatrix::from_diagonal(&d)) * &v.adjoint();
    let residual_on_tests = (0..VERIFY_STATES)
        .map(|k| {
            let rho_t = random_density(n, VERIFY_SEED + k);
            frob_norm(&(&oracle.apply(&rho_t) - &rho_t.conjugate_by(&u_recovered)))
        })
        .fold(0.0, f64::max);

    Ok(ReconstructionReport {
        u0,
        v,
        d,
        u_recovered,
        budget_used,
        eigengap: min_eigengap(&eig.eigenvalues),
        residual_on_tests,
        solver_status: solved.status,
        trace: solved.trace,
    })
}
