//! Submajorization-optimal frame completions with prescribed norms and
//! trace-constrained optimal dual frames.
//!
//! Both problems reduce to finding the `≺_w`-minimal spectrum among
//! `S₀ + B` with `B ≥ 0`, `rank B ≤ d − m` and `tr(S₀ + B) ≥ t`; see
//! [`spectra::nu`]. [`completion`] and [`duals`] turn that spectrum into
//! explicit frames.

pub mod cli;
pub mod completion;
pub mod duals;
pub mod error;
pub mod frames;
pub mod linalg;
pub mod majorization;
pub mod schur_horn;
pub mod spectra;

pub use completion::{complete, plan, CompletionPlan, CompletionProblem, CompletionResult};
pub use duals::{optimal_dual, optimal_dual_spectrum, parseval_dual_exists, tight_dual_exists, DualProblem, DualResult};
pub use error::{FrameError, Result};
pub use frames::{is_dual, Frame, FrameJson};
pub use linalg::{ComplexMatrix, HermitianPSD, C64};
pub use majorization::{PotentialKind, SpectrumVec};
pub use spectra::{nu, NuBreakdown, Regime};
