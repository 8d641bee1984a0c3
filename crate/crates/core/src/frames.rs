//! Finite frames in `C^d`: frame operator, bounds, canonical dual, duality
//! test and convex potentials. A frame is stored through its `d×n`
//! synthesis matrix, whose `i`-th column is `f_i`.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{FrameError, Result};
use crate::linalg::{ComplexMatrix, HermitianPSD, C64, TOL_RANK};
use crate::majorization::{trace_f, PotentialKind};

#[derive(Clone, Debug)]
pub struct Frame {
    synthesis: ComplexMatrix,
    operator: OnceLock<HermitianPSD>,
}

impl PartialEq for Frame {
    fn eq(&self, other: &Self) -> bool {
        self.synthesis == other.synthesis
    }
}

impl Frame {
    pub fn from_synthesis(synthesis: ComplexMatrix) -> Result<Self> {
        if synthesis.cols() == 0 || synthesis.rows() == 0 {
            return Err(FrameError::InvalidInput("a frame needs d ≥ 1 and n ≥ 1".into()));
        }
        Ok(Self { synthesis, operator: OnceLock::new() })
    }

    pub fn from_vectors(d: usize, vectors: &[Vec<C64>]) -> Result<Self> {
        Self::from_synthesis(ComplexMatrix::from_columns(d, vectors)?)
    }

    /// Real frame from row-major synthesis entries (`d` rows, `n` columns).
    pub fn from_real_synthesis(d: usize, n: usize, entries: &[f64]) -> Result<Self> {
        Self::from_synthesis(ComplexMatrix::from_real(d, n, entries)?)
    }

    pub fn dim(&self) -> usize {
        self.synthesis.rows()
    }

    pub fn len(&self) -> usize {
        self.synthesis.cols()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `T_F*`, the `d×n` matrix with columns `f_i`.
    pub fn synthesis(&self) -> &ComplexMatrix {
        &self.synthesis
    }

    /// `T_F`, the `n×d` matrix `x ↦ (⟨x, f_i⟩)_i`.
    pub fn analysis(&self) -> ComplexMatrix {
        self.synthesis.adjoint()
    }

    pub fn vector(&self, i: usize) -> Vec<C64> {
        self.synthesis.column(i)
    }

    pub fn vectors(&self) -> Vec<Vec<C64>> {
        (0..self.len()).map(|i| self.vector(i)).collect()
    }

    pub fn squared_norms(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.vector(i).iter().map(|z| z.norm_sqr()).sum()).collect()
    }

    /// Frames `(F, G)` concatenated as one sequence.
    pub fn concat(&self, other: &Frame) -> Result<Frame> {
        if self.dim() != other.dim() {
            return Err(FrameError::ShapeMismatch(format!("dimensions {} and {}", self.dim(), other.dim())));
        }
        let mut vectors = self.vectors();
        vectors.extend(other.vectors());
        Frame::from_vectors(self.dim(), &vectors)
    }

    /// `S_F = Σ f_i f_i*`, computed once and cached.
    pub fn frame_operator(&self) -> &HermitianPSD {
        self.operator.get_or_init(|| {
            let s = self.synthesis.matmul(&self.synthesis.adjoint());
            HermitianPSD::new(s).expect("Gram-type matrix is Hermitian PSD")
        })
    }

    /// `λ_min(S_F) > TOL_RANK·λ_max(S_F)`.
    pub fn is_spanning(&self) -> bool {
        let ev = self.frame_operator().eigenvalues().as_slice();
        let top = ev[0];
        let bottom = ev[ev.len() - 1];
        top > 0.0 && bottom > TOL_RANK * top
    }

    fn require_spanning(&self) -> Result<()> {
        if self.is_spanning() {
            Ok(())
        } else {
            Err(FrameError::NotSpanning)
        }
    }

    /// Optimal frame bounds `(A, B) = (λ_min(S_F), λ_max(S_F))`.
    pub fn frame_bounds(&self) -> Result<(f64, f64)> {
        self.require_spanning()?;
        let ev = self.frame_operator().eigenvalues().as_slice();
        Ok((ev[ev.len() - 1], ev[0]))
    }

    pub fn is_tight(&self, tol: f64) -> Result<bool> {
        let (a, b) = self.frame_bounds()?;
        Ok(b - a <= tol * (1.0 + b))
    }

    /// `S_F⁻¹`.
    pub fn inverse_frame_operator(&self) -> Result<ComplexMatrix> {
        self.require_spanning()?;
        self.frame_operator().inverse()
    }

    /// `F# = S_F⁻¹·F`.
    pub fn canonical_dual(&self) -> Result<Frame> {
        let inv = self.inverse_frame_operator()?;
        Frame::from_synthesis(inv.matmul(&self.synthesis))
    }

    /// `‖T_G* T_F − I‖_F`.
    pub fn duality_residual(&self, other: &Frame) -> Result<f64> {
        if self.dim() != other.dim() || self.len() != other.len() {
            return Err(FrameError::ShapeMismatch(format!(
                "frames of shape {}x{} and {}x{}",
                self.dim(),
                self.len(),
                other.dim(),
                other.len()
            )));
        }
        let prod = other.synthesis.matmul(&self.synthesis.adjoint());
        Ok(prod.sub(&ComplexMatrix::identity(self.dim())).frobenius_norm())
    }

    /// `P_f(F) = tr f(S_F)`.
    pub fn potential(&self, kind: PotentialKind) -> Result<f64> {
        if kind == PotentialKind::MeanSquareError && !self.is_spanning() {
            return Err(FrameError::SingularFrameOperator);
        }
        trace_f(self.frame_operator().eigenvalues().as_slice(), kind)
    }

    /// `Σ_{i,j} |⟨f_i, f_j⟩|²`, the Gram-matrix form of the frame potential.
    pub fn frame_potential_gram(&self) -> f64 {
        let gram = self.synthesis.adjoint().matmul(&self.synthesis);
        gram.as_slice().iter().map(|z| z.norm_sqr()).sum()
    }
}

/// `‖Σ g_i f_i* − I‖_F ≤ tol`.
pub fn is_dual(f: &Frame, g: &Frame, tol: f64) -> Result<bool> {
    Ok(f.duality_residual(g)? <= tol)
}

/// A frame entry: bare real number or `[re, im]`.
#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum EntryJson {
    Real(f64),
    Complex([f64; 2]),
}

/// `{"d": int, "n": int, "vectors": [[entry; d]; n]}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct FrameJson {
    pub d: usize,
    pub n: usize,
    pub vectors: Vec<Vec<EntryJson>>,
}

impl FrameJson {
    /// Real entries are written as bare numbers when the whole frame is real.
    pub fn from_frame(frame: &Frame) -> Self {
        let real = frame.synthesis().is_real();
        let vectors = frame
            .vectors()
            .into_iter()
            .map(|v| {
                v.into_iter()
                    .map(|z| if real { EntryJson::Real(z.re) } else { EntryJson::Complex([z.re, z.im]) })
                    .collect()
            })
            .collect();
        Self { d: frame.dim(), n: frame.len(), vectors }
    }

    pub fn to_frame(&self) -> Result<Frame> {
        if self.vectors.len() != self.n {
            return Err(FrameError::InvalidInput(format!("n = {} but {} vectors given", self.n, self.vectors.len())));
        }
        let vectors: Vec<Vec<C64>> = self
            .vectors
            .iter()
            .map(|v| {
                if v.len() != self.d {
                    return Err(FrameError::InvalidInput(format!("vector of length {} in dimension {}", v.len(), self.d)));
                }
                Ok(v.iter()
                    .map(|e| match *e {
                        EntryJson::Real(x) => C64::new(x, 0.0),
                        EntryJson::Complex([re, im]) => C64::new(re, im),
                    })
                    .collect())
            })
            .collect::<Result<_>>()?;
        Frame::from_vectors(self.d, &vectors)
    }
}

impl Serialize for Frame {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        FrameJson::from_frame(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Frame {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        FrameJson::deserialize(deserializer)?.to_frame().map_err(serde::de::Error::custom)
    }
}
