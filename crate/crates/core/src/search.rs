//! Least-squares channel fitting on the unitary group.
//!
//! For a pair `(ρ, σ)` the objective is `g(U) = ½‖σ − UρU*‖_F²`. Its
//! negative Euclidean gradient (real and imaginary parts taken separately) is
//! `2σUρ`, and the solver iterates `U ← poldec(Σᵢ 2σᵢUρᵢ).unitary`, the
//! nearest unitary to the negative gradient. A fixed point `U = poldec(2σUρ)`
//! has `U*(2σUρ)` Hermitian, so the projected gradient vanishes there.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matkit::{
    ensure_hermitian, frob_norm, hermitian_eig, poldec, random_unitary, real_inner, skew_part,
    ComplexMatrix,
};

/// Allowed increase between consecutive objective values before a step is
/// counted as a monotonicity violation.
pub const MONOTONE_SLACK: f64 = 1e-12;

/// Conditioning `σ_min/σ_max` of the gradient sum below which a step is
/// flagged as singular.
pub const SINGULAR_GRADIENT: f64 = 1e-14;

const OBJECTIVE_UNITARY_TOL: f64 = 1e-8;

/// One input/output observation `σ = Φ(ρ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelPair {
    pub rho: ComplexMatrix,
    pub sigma: ComplexMatrix,
}

impl ChannelPair {
    pub fn new(rho: ComplexMatrix, sigma: ComplexMatrix) -> Self {
        Self { rho, sigma }
    }

    pub fn dim(&self) -> usize {
        self.rho.rows()
    }

    fn ensure_compatible(&self, u: &ComplexMatrix) -> Result<()> {
        self.rho.ensure_same_shape(&self.sigma)?;
        self.rho.ensure_same_shape(u)
    }
}

/// A validated, non-empty list of Hermitian positive definite pairs of one
/// common dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelInstance {
    pairs: Vec<ChannelPair>,
}

impl ChannelInstance {
    pub fn new(pairs: Vec<ChannelPair>) -> Result<Self> {
        let Some(first) = pairs.first() else {
            return Err(Error::InvalidInstance("no pairs".into()));
        };
        let n = first.dim();
        let mut clean = Vec::with_capacity(pairs.len());
        for (k, pair) in pairs.into_iter().enumerate() {
            for (name, m) in [("rho", &pair.rho), ("sigma", &pair.sigma)] {
                if m.shape() != (n, n) {
                    return Err(Error::InvalidInstance(format!(
                        "pair {k}: {name} has shape {:?}, expected ({n}, {n})",
                        m.shape()
                    )));
                }
                check_positive_definite(m)
                    .map_err(|e| Error::InvalidInstance(format!("pair {k}: {name}: {e}")))?;
            }
            clean.push(ChannelPair {
                rho: crate::matkit::herm_part(&pair.rho),
                sigma: crate::matkit::herm_part(&pair.sigma),
            });
        }
        Ok(Self { pairs: clean })
    }

    pub fn single(rho: ComplexMatrix, sigma: ComplexMatrix) -> Result<Self> {
        Self::new(vec![ChannelPair::new(rho, sigma)])
    }

    pub fn pairs(&self) -> &[ChannelPair] {
        &self.pairs
    }

    pub fn dim(&self) -> usize {
        self.pairs[0].dim()
    }
}

fn check_positive_definite(m: &ComplexMatrix) -> Result<()> {
    ensure_hermitian(m)?;
    let eig = hermitian_eig(m)?;
    let min = eig.eigenvalues.last().copied().unwrap_or(0.0);
    if min <= 0.0 {
        return Err(Error::NotPositiveDefinite {
            min_eigenvalue: min,
        });
    }
    Ok(())
}

/// Starting point of the iteration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Init {
    Identity,
    Random { seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub max_iters: usize,
    /// Exit once the objective drops below this value.
    pub tol: f64,
    /// Exit once `‖U⁺ − U‖_F` drops below this value.
    pub stall_tol: f64,
    pub init: Init,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            max_iters: 5000,
            tol: 1e-24,
            stall_tol: 1e-13,
            init: Init::Identity,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_iters < 1 {
            return Err(Error::InvalidConfig("max_iters must be at least 1".into()));
        }
        if self.tol.is_nan() || self.tol <= 0.0 {
            return Err(Error::InvalidConfig("tol must be positive".into()));
        }
        if self.stall_tol.is_nan() || self.stall_tol < 0.0 {
            return Err(Error::InvalidConfig(
                "stall_tol must be non-negative".into(),
            ));
        }
        Ok(())
    }

    fn initial_point(&self, n: usize) -> ComplexMatrix {
        match self.init {
            Init::Identity => ComplexMatrix::identity(n),
            Init::Random { seed } => random_unitary(n, seed),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub iter: usize,
    pub objective: f64,
    /// `‖U^(s) − U^(s−1)‖_F`; zero for the starting point.
    pub step_norm: f64,
    /// `‖skew(U* ∇g(U))‖_F`.
    pub residual: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct IterationTrace {
    pub records: Vec<IterationRecord>,
}

impl IterationTrace {
    pub fn last(&self) -> Option<&IterationRecord> {
        self.records.last()
    }

    pub fn objectives(&self) -> impl Iterator<Item = f64> + '_ {
        self.records.iter().map(|r| r.objective)
    }

    /// Count of steps where the objective rose by more than `slack`.
    pub fn monotonicity_violations(&self, slack: f64) -> usize {
        self.records
            .windows(2)
            .filter(|w| w[1].objective > w[0].objective + slack)
            .count()
    }

    pub fn is_non_increasing(&self, slack: f64) -> bool {
        self.monotonicity_violations(slack) == 0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    ConvergedTol,
    ConvergedStall,
    MaxIters,
}

impl Status {
    pub fn is_converged(self) -> bool {
        !matches!(self, Status::MaxIters)
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::ConvergedTol => "converged-tol",
            Status::ConvergedStall => "converged-stall",
            Status::MaxIters => "max-iters",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    pub u_hat: ComplexMatrix,
    pub trace: IterationTrace,
    pub status: Status,
    /// Number of steps whose gradient sum was numerically singular; the SVD
    /// completion of the polar factor was used for those.
    pub singular_steps: usize,
}

impl SolveResult {
    pub fn final_objective(&self) -> f64 {
        self.trace.last().map_or(f64::NAN, |r| r.objective)
    }

    pub fn final_residual(&self) -> f64 {
        self.trace.last().map_or(f64::NAN, |r| r.residual)
    }

    pub fn iterations(&self) -> usize {
        self.trace.last().map_or(0, |r| r.iter)
    }
}

/// `½‖σ − UρU*‖_F²`.
pub fn objective(u: &ComplexMatrix, pair: &ChannelPair) -> Result<f64> {
    pair.ensure_compatible(u)?;
    check_objective_unitary(u)?;
    Ok(objective_unchecked(u, pair))
}

/// The same objective through `½(‖σ‖² + ‖ρ‖² − 2 Re⟨σ, UρU*⟩)`, which is only
/// valid for unitary `U`.
pub fn objective_expanded(u: &ComplexMatrix, pair: &ChannelPair) -> Result<f64> {
    pair.ensure_compatible(u)?;
    check_objective_unitary(u)?;
    let s = frob_norm(&pair.sigma);
    let r = frob_norm(&pair.rho);
    let cross = real_inner(&pair.sigma, &pair.rho.conjugate_by(u))?;
    Ok(0.5 * (s * s + r * r - 2.0 * cross))
}

fn check_objective_unitary(u: &ComplexMatrix) -> Result<()> {
    let deviation = u.unitary_defect();
    if deviation > OBJECTIVE_UNITARY_TOL {
        return Err(Error::NotUnitary { deviation });
    }
    Ok(())
}

fn objective_unchecked(u: &ComplexMatrix, pair: &ChannelPair) -> f64 {
    let r = frob_norm(&(&pair.sigma - &pair.rho.conjugate_by(u)));
    0.5 * r * r
}

fn total_objective(u: &ComplexMatrix, pairs: &[ChannelPair]) -> f64 {
    pairs.iter().map(|p| objective_unchecked(u, p)).sum()
}

/// `−∇g(U) = 2σUρ`.
pub fn neg_gradient(u: &ComplexMatrix, pair: &ChannelPair) -> Result<ComplexMatrix> {
    pair.ensure_compatible(u)?;
    Ok(neg_gradient_unchecked(u, pair))
}

fn neg_gradient_unchecked(u: &ComplexMatrix, pair: &ChannelPair) -> ComplexMatrix {
    (&(&pair.sigma * u) * &pair.rho).scale_real(2.0)
}

fn neg_gradient_sum(u: &ComplexMatrix, pairs: &[ChannelPair]) -> ComplexMatrix {
    let mut iter = pairs.iter();
    let first = neg_gradient_unchecked(u, iter.next().expect("non-empty pair list"));
    iter.fold(first, |acc, p| &acc + &neg_gradient_unchecked(u, p))
}

fn residual_from_gradient(u: &ComplexMatrix, neg_grad: &ComplexMatrix) -> f64 {
    frob_norm(&skew_part(&(&u.adjoint() * neg_grad)))
}

/// Norm of the skew-Hermitian part of `U* Σᵢ ∇gᵢ(U)`; zero exactly at
/// first-order critical points.
pub fn residual(u: &ComplexMatrix, pairs: &[ChannelPair]) -> f64 {
    residual_from_gradient(u, &neg_gradient_sum(u, pairs))
}

/// One polar update `poldec(Σᵢ 2σᵢUρᵢ).unitary`.
pub fn step(u: &ComplexMatrix, pairs: &[ChannelPair]) -> Result<ComplexMatrix> {
    if pairs.is_empty() {
        return Err(Error::InvalidInstance("no pairs".into()));
    }
    for p in pairs {
        p.ensure_compatible(u)?;
    }
    Ok(poldec(&neg_gradient_sum(u, pairs))?.unitary)
}

/// Relative defect `‖Û P̂ − G‖_F / ‖G‖_F` where `G = Σᵢ 2σᵢÛρᵢ` and `P̂` is
/// the PSD polar factor of `G`. Zero when `Û` is a fixed point of the update.
pub fn fixed_point_defect(u_hat: &ComplexMatrix, pairs: &[ChannelPair]) -> Result<f64> {
    let g = neg_gradient_sum(u_hat, pairs);
    let p = poldec(&g)?.psd;
    Ok(frob_norm(&(&(u_hat * &p) - &g)) / frob_norm(&g))
}

/// Runs the polar fixed-point iteration.
pub fn solve(instance: &ChannelInstance, config: &SolverConfig) -> Result<SolveResult> {
    solve_with_observer(instance, config, |_, _| {})
}

/// Like [`solve`], calling `observe` with every recorded iterate (including
/// the starting point) as soon as it is available.
pub fn solve_with_observer(
    instance: &ChannelInstance,
    config: &SolverConfig,
    mut observe: impl FnMut(&IterationRecord, &ComplexMatrix),
) -> Result<SolveResult> {
    config.validate()?;
    let pairs = instance.pairs();
    let mut u = config.initial_point(instance.dim());
    let mut grad = neg_gradient_sum(&u, pairs);
    let mut trace = IterationTrace::default();
    let mut singular_steps = 0;

    let start = IterationRecord {
        iter: 0,
        objective: total_objective(&u, pairs),
        step_norm: 0.0,
        residual: residual_from_gradient(&u, &grad),
    };
    observe(&start, &u);
    trace.records.push(start);
    if start.objective < config.tol {
        return Ok(SolveResult {
            u_hat: u,
            trace,
            status: Status::ConvergedTol,
            singular_steps,
        });
    }

    let mut status = Status::MaxIters;
    for iter in 1..=config.max_iters {
        let polar = poldec(&grad)?;
        if polar.conditioning() < SINGULAR_GRADIENT {
            singular_steps += 1;
        }
        let next = polar.unitary;
        let step_norm = frob_norm(&(&next - &u));
        u = next;
        grad = neg_gradient_sum(&u, pairs);
        let record = IterationRecord {
            iter,
            objective: total_objective(&u, pairs),
            step_norm,
            residual: residual_from_gradient(&u, &grad),
        };
        observe(&record, &u);
        trace.records.push(record);

        if record.objective < config.tol {
            status = Status::ConvergedTol;
            break;
        }
        if step_norm < config.stall_tol {
            status = Status::ConvergedStall;
            break;
        }
    }

    Ok(SolveResult {
        u_hat: u,
        trace,
        status,
        singular_steps,
    })
}

/// Builds the exact instance `σᵢ = UρᵢU*`.
pub fn exact_instance(hidden: &ComplexMatrix, rhos: Vec<ComplexMatrix>) -> Result<ChannelInstance> {
    let pairs = rhos
        .into_iter()
        .map(|rho| {
            let sigma = rho.conjugate_by(hidden);
            ChannelPair::new(rho, sigma)
        })
        .collect();
    ChannelInstance::new(pairs)
}
