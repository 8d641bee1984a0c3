//! Optimal dual frames under a trace constraint `tr S_W ≥ t`.
//!
//! Every dual of `F` is `F# + Z` with `Z*` vanishing on the range of `T_F`,
//! so the frame operators of duals are `S_F⁻¹ + B` with `rank B ≤ n − d`.
//! The optimal `B` raises the trailing eigenvalues of `S_F⁻¹` to the
//! waterfilling level `c_{λ,m}(t)`, with `m = 2d − n`.

use serde::Serialize;

use crate::completion::operator_is_unique;
use crate::error::{FrameError, Result};
use crate::frames::{Frame, FrameJson};
use crate::linalg::{eig_hermitian, null_space_onb, ComplexMatrix, HermitianPSD};
use crate::majorization::SpectrumVec;
use crate::spectra::{c_lambda_m, nu, r_lambda_m, NuBreakdown, Regime};

/// Relative tolerance for the spectral equalities in the tight/Parseval tests.
pub const EXISTENCE_TOL: f64 = 1e-8;

/// A spanning frame and a lower bound `t` on the trace of the dual's frame operator.
#[derive(Clone, Debug)]
pub struct DualProblem {
    frame: Frame,
    t: f64,
    inverse: HermitianPSD,
}

impl DualProblem {
    pub fn new(frame: Frame, t: f64) -> Result<Self> {
        if !frame.is_spanning() {
            return Err(FrameError::NotSpanning);
        }
        let inverse = HermitianPSD::new(frame.inverse_frame_operator()?)?;
        let trace = inverse.eigenvalues().trace();
        if !t.is_finite() {
            return Err(FrameError::InvalidInput(format!("trace target {t} is not finite")));
        }
        if t < trace - 1e-9 {
            return Err(FrameError::BadTrace { t, trace });
        }
        Ok(Self { frame, t: t.max(trace), inverse })
    }

    /// The problem at `t = tr S_F⁻¹`, whose solution is the canonical dual.
    pub fn at_canonical_trace(frame: Frame) -> Result<Self> {
        let probe = Self::new(frame, f64::MAX)?;
        let t = probe.lambda().trace();
        Ok(Self { t, ..probe })
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    /// `m = 2d − n`.
    pub fn m(&self) -> i64 {
        2 * self.frame.dim() as i64 - self.frame.len() as i64
    }

    /// `λ(S_F⁻¹)`.
    pub fn lambda(&self) -> &SpectrumVec {
        self.inverse.eigenvalues()
    }

    /// `S_F⁻¹` with its canonical eigenbasis.
    pub fn inverse_operator(&self) -> &HermitianPSD {
        &self.inverse
    }
}

#[derive(Clone, Debug)]
pub struct DualResult {
    pub w: Frame,
    pub s_t: HermitianPSD,
    pub nu: SpectrumVec,
    pub unique_s: bool,
}

impl DualResult {
    pub fn to_json(&self) -> DualJson {
        DualJson {
            nu: self.nu.as_slice().to_vec(),
            unique_s: self.unique_s,
            w: FrameJson::from_frame(&self.w),
            trace: self.s_t.trace(),
        }
    }
}

/// `{"nu", "unique_S", "W", "trace"}`.
#[derive(Clone, Debug, Serialize)]
pub struct DualJson {
    pub nu: Vec<f64>,
    #[serde(rename = "unique_S")]
    pub unique_s: bool,
    #[serde(rename = "W")]
    pub w: FrameJson,
    pub trace: f64,
}

/// When `n = d` the canonical dual is the only dual.
fn unique_dual_breakdown(problem: &DualProblem) -> Result<NuBreakdown> {
    let lambda = problem.lambda();
    let trace = lambda.trace();
    if problem.t > trace + 1e-9 * (1.0 + trace) {
        return Err(FrameError::BadTrace { t: problem.t, trace });
    }
    Ok(NuBreakdown {
        r: lambda.len() - 1,
        c: lambda.as_slice()[lambda.len() - 1],
        s_star: None,
        s_star_star: None,
        nu: lambda.clone(),
        regime: Regime::AtOrBelowSStar,
    })
}

/// `ν(λ(S_F⁻¹), 2d − n, t)`, the submajorization-minimal dual spectrum.
pub fn optimal_dual_spectrum(problem: &DualProblem) -> Result<NuBreakdown> {
    let d = problem.frame.dim() as i64;
    if problem.m() >= d {
        return unique_dual_breakdown(problem);
    }
    nu(problem.lambda(), problem.m(), problem.t)
}

/// Builds a dual `W ∈ D_t(F)` with `λ(S_W) = ν`.
pub fn optimal_dual(problem: &DualProblem) -> Result<DualResult> {
    let frame = &problem.frame;
    let d = frame.dim();
    let n = frame.len();
    let m = problem.m();
    let canonical = frame.canonical_dual()?;

    if m >= d as i64 {
        let breakdown = unique_dual_breakdown(problem)?;
        let s_t = canonical.frame_operator().clone();
        return Ok(DualResult { w: canonical, s_t, nu: breakdown.nu, unique_s: true });
    }

    let lambda = problem.lambda().as_slice();
    let t = problem.t;
    let breakdown = nu(problem.lambda(), m, t)?;
    let r = r_lambda_m(lambda, m, t)?;
    let r_prime = if m >= 1 { r.max(m as usize) } else { r };
    let c = c_lambda_m(lambda, m, t)?;

    let needed = d - r_prime;
    let kernel = null_space_onb(frame.synthesis())?;
    if needed > kernel.cols() {
        return Err(FrameError::InsufficientCorank { needed, available: kernel.cols() });
    }

    // Z* = Σ_i sqrt(c − λ_{r'+i}) h_{r'+i} u_i*, a d×n map vanishing on R(T_F)
    let h = problem.inverse.eigenvectors();
    let mut z_adj = ComplexMatrix::zeros(d, n);
    for i in 0..needed {
        let weight = (c - lambda[r_prime + i]).max(0.0).sqrt();
        if weight == 0.0 {
            continue;
        }
        for a in 0..d {
            let ha = h[(a, r_prime + i)] * weight;
            for b in 0..n {
                z_adj[(a, b)] += ha * kernel[(b, i)].conj();
            }
        }
    }
    let w = Frame::from_synthesis(canonical.synthesis().add(&z_adj))?;
    let s_t = w.frame_operator().clone();
    Ok(DualResult { w, s_t, nu: breakdown.nu, unique_s: operator_is_unique(lambda, m, t)? })
}

fn frame_spectrum(frame: &Frame) -> Result<&[f64]> {
    if !frame.is_spanning() {
        return Err(FrameError::NotSpanning);
    }
    Ok(frame.frame_operator().eigenvalues().as_slice())
}

/// Whether `F` has a tight dual: `m ≤ 0`, or the smallest eigenvalue of
/// `S_F` has multiplicity at least `m`.
pub fn tight_dual_exists(frame: &Frame) -> Result<bool> {
    let spectrum = frame_spectrum(frame)?;
    let d = spectrum.len();
    let m = 2 * d as i64 - frame.len() as i64;
    if m <= 0 {
        return Ok(true);
    }
    let m = (m as usize).min(d);
    let tol = EXISTENCE_TOL * (1.0 + spectrum[0]);
    Ok(spectrum[d - m] - spectrum[d - 1] <= tol)
}

/// Whether `F` has a Parseval dual: `S_F ≥ I` and `rank(S_F − I) ≤ d − m`.
pub fn parseval_dual_exists(frame: &Frame) -> Result<bool> {
    let spectrum = frame_spectrum(frame)?;
    let d = spectrum.len();
    let m = 2 * d as i64 - frame.len() as i64;
    let tol = EXISTENCE_TOL * (1.0 + spectrum[0]);
    if spectrum[d - 1] < 1.0 - tol {
        return Ok(false);
    }
    if m <= 0 {
        return Ok(true);
    }
    let m = (m as usize).min(d);
    Ok((spectrum[d - m] - 1.0).abs() <= tol && (spectrum[d - 1] - 1.0).abs() <= tol)
}

/// A random dual `F# + Z` with `Z* T_F = 0`: `Z*` is `A·K*` for an orthonormal
/// kernel basis `K` and the given `d×(n−d)` coefficient matrix `A`.
pub fn dual_from_kernel_coefficients(frame: &Frame, coefficients: &ComplexMatrix) -> Result<Frame> {
    let kernel = null_space_onb(frame.synthesis())?;
    if coefficients.rows() != frame.dim() || coefficients.cols() != kernel.cols() {
        return Err(FrameError::ShapeMismatch(format!(
            "coefficients must be {}x{}",
            frame.dim(),
            kernel.cols()
        )));
    }
    let z_adj = coefficients.matmul(&kernel.adjoint());
    Frame::from_synthesis(frame.canonical_dual()?.synthesis().add(&z_adj))
}

/// Eigenvalues of `S_W − S_{F#}`, used to check that every dual dominates the canonical one.
pub fn excess_over_canonical(frame: &Frame, dual: &Frame) -> Result<SpectrumVec> {
    let canonical = frame.canonical_dual()?;
    let diff = dual.frame_operator().matrix().sub(canonical.frame_operator().matrix());
    Ok(eig_hermitian(&diff)?.0)
}
