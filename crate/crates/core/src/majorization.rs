//! Vector preorders (majorization, submajorization, entrywise order) and
//! tracial sums `tr f(x)` for the convex potentials.

use serde::{Deserialize, Serialize};

use crate::error::{FrameError, Result};

/// Default absolute tolerance on prefix sums.
pub const DEFAULT_TOL: f64 = 1e-9;

/// A nonincreasing real vector (eigenvalue list).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SpectrumVec(Vec<f64>);

impl SpectrumVec {
    /// Validates that `values` is finite and nonincreasing.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|x| !x.is_finite()) {
            return Err(FrameError::InvalidInput("non-finite spectrum entry".into()));
        }
        if values.windows(2).any(|w| w[0] < w[1]) {
            return Err(FrameError::InvalidInput("spectrum must be nonincreasing".into()));
        }
        Ok(Self(values))
    }

    pub(crate) fn from_sorted_unchecked(values: Vec<f64>) -> Self {
        debug_assert!(values.windows(2).all(|w| w[0] >= w[1]));
        Self(values)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn trace(&self) -> f64 {
        self.0.iter().sum()
    }

    /// Pads with zeros (or truncates) to length `len`.
    pub fn resized(&self, len: usize) -> Self {
        let mut v = self.0.clone();
        v.resize(len, 0.0);
        Self::from_sorted_unchecked(v)
    }
}

impl AsRef<[f64]> for SpectrumVec {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

/// Convex functions defining frame potentials `P_f(F) = tr f(S_F)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PotentialKind {
    /// `f(x) = x²` (Benedetto-Fickus frame potential).
    FramePotential,
    /// `f(x) = 1/x`.
    MeanSquareError,
    /// `f(x) = x·log x`, with `0·log 0 = 0`.
    NegEntropy,
}

impl PotentialKind {
    pub fn eval(self, x: f64) -> Result<f64> {
        match self {
            PotentialKind::FramePotential => Ok(x * x),
            PotentialKind::MeanSquareError => {
                if x > 0.0 {
                    Ok(1.0 / x)
                } else {
                    Err(FrameError::DomainError(format!("1/x undefined at {x}")))
                }
            }
            PotentialKind::NegEntropy => {
                if x > 0.0 {
                    Ok(x * x.ln())
                } else if x == 0.0 {
                    Ok(0.0)
                } else {
                    Err(FrameError::DomainError(format!("x log x undefined at {x}")))
                }
            }
        }
    }
}

/// Rearranges `x` in nonincreasing order.
pub fn sort_desc(x: &[f64]) -> Result<SpectrumVec> {
    if x.iter().any(|v| !v.is_finite()) {
        return Err(FrameError::InvalidInput("non-finite entry".into()));
    }
    let mut v = x.to_vec();
    v.sort_by(|a, b| b.total_cmp(a));
    Ok(SpectrumVec(v))
}

fn sorted_prefix_sums(x: &[f64]) -> Vec<f64> {
    let mut v = x.to_vec();
    v.sort_by(|a, b| b.total_cmp(a));
    v.iter()
        .scan(0.0, |acc, &e| {
            *acc += e;
            Some(*acc)
        })
        .collect()
}

fn check_lengths(x: &[f64], y: &[f64]) -> Result<()> {
    if x.len() != y.len() {
        return Err(FrameError::LengthMismatch { left: x.len(), right: y.len() });
    }
    Ok(())
}

/// Answers `x ≺_w y`: every prefix sum of `x↓` is at most that of `y↓` (plus `tol`).
pub fn submajorizes(y: &[f64], x: &[f64], tol: f64) -> Result<bool> {
    check_lengths(x, y)?;
    let px = sorted_prefix_sums(x);
    let py = sorted_prefix_sums(y);
    Ok(px.iter().zip(&py).all(|(a, b)| *a <= b + tol))
}

/// Answers `x ≺ y`: submajorization plus equal traces (within `tol`).
pub fn majorizes(y: &[f64], x: &[f64], tol: f64) -> Result<bool> {
    let trx: f64 = x.iter().sum();
    let try_: f64 = y.iter().sum();
    Ok(submajorizes(y, x, tol)? && (trx - try_).abs() <= tol)
}

/// `x_i ≤ y_i + tol` for every `i`.
pub fn entrywise_leq(x: &[f64], y: &[f64], tol: f64) -> Result<bool> {
    check_lengths(x, y)?;
    Ok(x.iter().zip(y).all(|(a, b)| *a <= b + tol))
}

/// `Σ f(x_i)`.
pub fn trace_f(x: &[f64], f: PotentialKind) -> Result<f64> {
    x.iter().try_fold(0.0, |acc, &v| Ok(acc + f.eval(v)?))
}
