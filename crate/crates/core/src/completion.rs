//! Optimal completion of a frame `F₀` by `k` vectors with prescribed squared
//! norms `β`.
//!
//! The optimal spectrum is `ν(λ(S_{F₀}), d − k, tr S_{F₀} + tr β)`. It is
//! attainable exactly when `β ≺ μ̂`, where `μ̂` is the waterfilling increment
//! on the trailing eigenvalues of `S_{F₀}`; the added vectors then have frame
//! operator `B = Σ μ̂_j h_{r̂+j} h_{r̂+j}*`.

use serde::Serialize;

use crate::error::{FrameError, Result};
use crate::frames::{Frame, FrameJson};
use crate::linalg::{spectral_sum, ComplexMatrix, HermitianPSD};
use crate::majorization::{majorizes, sort_desc, trace_f, PotentialKind, SpectrumVec, DEFAULT_TOL};
use crate::schur_horn::realize_frame;
use crate::spectra::{c_lambda_m, nu, r_lambda_m, s_star};

/// Relative tolerance for eigenvalue ties in the uniqueness test.
const TIE_TOL: f64 = 1e-9;

/// A frame `F₀` and the squared norms `β` of the vectors to add.
#[derive(Clone, Debug)]
pub struct CompletionProblem {
    f0: Frame,
    beta: Vec<f64>,
    tol: f64,
}

impl CompletionProblem {
    pub fn new(f0: Frame, beta: Vec<f64>) -> Result<Self> {
        if beta.is_empty() {
            return Err(FrameError::InvalidInput("at least one norm is required".into()));
        }
        if beta.iter().any(|&b| !(b > 0.0) || !b.is_finite()) {
            return Err(FrameError::InvalidInput("squared norms must be positive".into()));
        }
        let d = f0.dim();
        let k = beta.len();
        if k < d {
            let required = d - k;
            let rank = f0.frame_operator().rank();
            if rank < required {
                return Err(FrameError::RankDeficient { rank, required });
            }
        }
        Ok(Self { f0, beta, tol: DEFAULT_TOL })
    }

    /// Tolerance for the feasibility test `β ≺ μ̂`.
    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn f0(&self) -> &Frame {
        &self.f0
    }

    pub fn beta(&self) -> &[f64] {
        &self.beta
    }

    pub fn k(&self) -> usize {
        self.beta.len()
    }

    /// `m = d − k`.
    pub fn m(&self) -> i64 {
        self.f0.dim() as i64 - self.k() as i64
    }

    /// `t = tr S_{F₀} + tr β`.
    pub fn t(&self) -> f64 {
        self.lambda().trace() + self.beta.iter().sum::<f64>()
    }

    pub fn lambda(&self) -> &SpectrumVec {
        self.f0.frame_operator().eigenvalues()
    }
}

/// Waterfilling data of a completion problem.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CompletionPlan {
    pub r_hat: usize,
    pub c_hat: f64,
    /// `(ĉ − λ_{r̂+j})_j`, nondecreasing.
    pub mu_hat: Vec<f64>,
    pub nu: SpectrumVec,
    pub feasible: bool,
    #[serde(rename = "unique_B")]
    pub unique_b: bool,
}

/// Uniqueness of the optimal added operator for the data `(λ, m, t)`.
pub(crate) fn operator_is_unique(lambda: &[f64], m: i64, t: f64) -> Result<bool> {
    if m <= 0 {
        return Ok(true);
    }
    let m_idx = m as usize;
    let tie = TIE_TOL * (1.0 + lambda[0].abs());
    if lambda[m_idx - 1] - lambda[m_idx] > tie {
        return Ok(true);
    }
    Ok(t <= s_star(lambda, m)? + tie)
}

/// Computes `r̂`, `ĉ`, `μ̂`, `ν` and the feasibility and uniqueness flags.
pub fn plan(problem: &CompletionProblem) -> Result<CompletionPlan> {
    let lambda = problem.lambda().as_slice();
    let d = lambda.len();
    let m = problem.m();
    let t = problem.t();
    if m >= d as i64 {
        return Err(FrameError::BadM { m, d });
    }

    let r = r_lambda_m(lambda, m, t)?;
    let r_hat = if m >= 1 { r.max(m as usize) } else { r };
    let c_hat = c_lambda_m(lambda, m, t)?;
    let mu_hat: Vec<f64> = lambda[r_hat..].iter().map(|l| c_hat - l).collect();
    let nu = nu(problem.lambda(), m, t)?.nu;

    let k = problem.k();
    let len = k.max(mu_hat.len());
    let mut mu_padded = sort_desc(&mu_hat)?.into_vec();
    mu_padded.resize(len, 0.0);
    let mut beta_padded = problem.beta.clone();
    beta_padded.resize(len, 0.0);
    let tol = problem.tol * (1.0 + t);
    let feasible = majorizes(&mu_padded, &beta_padded, tol)?;

    Ok(CompletionPlan { r_hat, c_hat, mu_hat, nu, feasible, unique_b: operator_is_unique(lambda, m, t)? })
}

/// `B = Σ_j μ̂_j h_{r̂+j} h_{r̂+j}*` over the eigenbasis of `S₀` in use.
pub fn optimal_b(s0: &HermitianPSD, plan: &CompletionPlan) -> Result<HermitianPSD> {
    if !plan.feasible {
        return Err(FrameError::Infeasible);
    }
    optimal_b_in_basis(s0.eigenvectors(), plan)
}

/// Same as [`optimal_b`] but over an arbitrary orthonormal eigenbasis of `S₀`
/// (columns paired with `λ(S₀)` in nonincreasing order); feasibility is not checked.
pub fn optimal_b_in_basis(eigenvectors: &ComplexMatrix, plan: &CompletionPlan) -> Result<HermitianPSD> {
    let d = eigenvectors.rows();
    let mut weights = vec![0.0; d];
    for (j, mu) in plan.mu_hat.iter().enumerate() {
        weights[plan.r_hat + j] = mu.max(0.0);
    }
    HermitianPSD::new(spectral_sum(eigenvectors, &weights))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LowerBounds {
    pub fp: f64,
    pub mse: Option<f64>,
}

/// Outcome of [`complete`]; infeasible problems carry the plan and bounds only.
#[derive(Clone, Debug)]
pub struct CompletionResult {
    pub plan: CompletionPlan,
    /// Added vectors (present iff feasible).
    pub f1: Option<Frame>,
    /// `(F₀, F₁)` (present iff feasible).
    pub completed: Option<Frame>,
    pub lower_bounds: LowerBounds,
}

impl CompletionResult {
    pub fn feasible(&self) -> bool {
        self.plan.feasible
    }

    pub fn to_json(&self) -> CompletionJson {
        CompletionJson {
            feasible: self.plan.feasible,
            nu: self.plan.nu.as_slice().to_vec(),
            unique_b: self.plan.unique_b,
            f1: self.f1.as_ref().map(FrameJson::from_frame),
            lower_bounds: self.lower_bounds.clone(),
        }
    }
}

/// `{"feasible", "nu", "unique_B", "F1", "lower_bounds": {"fp", "mse"}}`.
#[derive(Clone, Debug, Serialize)]
pub struct CompletionJson {
    pub feasible: bool,
    pub nu: Vec<f64>,
    #[serde(rename = "unique_B")]
    pub unique_b: bool,
    #[serde(rename = "F1")]
    pub f1: Option<FrameJson>,
    pub lower_bounds: LowerBounds,
}

/// `Σ f(ν_i)`, a lower bound for `P_f` over all completions; attained iff
/// the problem is feasible and `λ(S_F) = ν`.
pub fn lower_bound(nu: &SpectrumVec, f: PotentialKind) -> Result<f64> {
    trace_f(nu.as_slice(), f)
}

/// Plans and, when feasible, builds an optimal completion.
pub fn complete(problem: &CompletionProblem) -> Result<CompletionResult> {
    let plan = plan(problem)?;
    let lower_bounds = LowerBounds {
        fp: lower_bound(&plan.nu, PotentialKind::FramePotential)?,
        mse: lower_bound(&plan.nu, PotentialKind::MeanSquareError).ok(),
    };
    if !plan.feasible {
        return Ok(CompletionResult { plan, f1: None, completed: None, lower_bounds });
    }
    let s0 = problem.f0.frame_operator();
    let b = optimal_b(s0, &plan)?;
    let vectors = realize_frame(&b, &problem.beta, 1e-9)?;
    let f1 = Frame::from_vectors(problem.f0.dim(), &vectors)?;
    let completed = problem.f0.concat(&f1)?;
    Ok(CompletionResult { plan, f1: Some(f1), completed: Some(completed), lower_bounds })
}
