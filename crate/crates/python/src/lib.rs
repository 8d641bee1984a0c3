//! Python bindings: frames, the minimal spectrum `ν`, optimal completions and
//! optimal duals.

use num_complex::Complex64;
use optframe::completion::CompletionProblem;
use optframe::duals::DualProblem;
use optframe::linalg::ComplexMatrix;
use optframe::majorization::{self, PotentialKind, SpectrumVec};
use optframe::{frames, schur_horn, spectra, HermitianPSD};
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

create_exception!(optframe, FrameError, PyValueError, "Invalid input or violated precondition.");

fn to_py(e: optframe::FrameError) -> PyErr {
    FrameError::new_err(e.to_string())
}

fn parse_kind(kind: &str) -> PyResult<PotentialKind> {
    match kind {
        "fp" | "frame_potential" => Ok(PotentialKind::FramePotential),
        "mse" | "mean_square_error" => Ok(PotentialKind::MeanSquareError),
        "entropy" | "neg_entropy" => Ok(PotentialKind::NegEntropy),
        other => Err(PyValueError::new_err(format!("unknown potential kind {other:?} (fp, mse, entropy)"))),
    }
}

fn spectrum(values: Vec<f64>) -> PyResult<SpectrumVec> {
    SpectrumVec::new(values).map_err(to_py)
}

fn rows_of(m: &ComplexMatrix) -> Vec<Vec<Complex64>> {
    (0..m.rows()).map(|i| m.row(i).to_vec()).collect()
}

/// A finite sequence of vectors in C^d.
#[pyclass(name = "Frame", module = "optframe", skip_from_py_object)]
#[derive(Clone)]
pub struct PyFrame {
    inner: frames::Frame,
}

#[pymethods]
impl PyFrame {
    /// Builds a frame from a list of vectors (real or complex entries).
    #[new]
    fn new(vectors: Vec<Vec<Complex64>>) -> PyResult<Self> {
        let d = vectors.first().map(Vec::len).ok_or_else(|| PyValueError::new_err("at least one vector is required"))?;
        Ok(Self { inner: frames::Frame::from_vectors(d, &vectors).map_err(to_py)? })
    }

    /// Parses `{"d": .., "n": .., "vectors": [...]}`.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let json: frames::FrameJson = serde_json::from_str(text).map_err(|e| FrameError::new_err(e.to_string()))?;
        Ok(Self { inner: json.to_frame().map_err(to_py)? })
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&frames::FrameJson::from_frame(&self.inner)).map_err(|e| FrameError::new_err(e.to_string()))
    }

    #[getter]
    fn d(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.len()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("Frame(d={}, n={})", self.inner.dim(), self.inner.len())
    }

    fn vectors(&self) -> Vec<Vec<Complex64>> {
        self.inner.vectors()
    }

    fn squared_norms(&self) -> Vec<f64> {
        self.inner.squared_norms()
    }

    /// `S_F = T_F* T_F` as a list of rows.
    fn frame_operator(&self) -> Vec<Vec<Complex64>> {
        rows_of(self.inner.frame_operator().matrix())
    }

    /// Eigenvalues of `S_F`, nonincreasing.
    fn spectrum(&self) -> Vec<f64> {
        self.inner.frame_operator().eigenvalues().as_slice().to_vec()
    }

    fn is_spanning(&self) -> bool {
        self.inner.is_spanning()
    }

    fn frame_bounds(&self) -> PyResult<(f64, f64)> {
        self.inner.frame_bounds().map_err(to_py)
    }

    #[pyo3(signature = (tol = 1e-9))]
    fn is_tight(&self, tol: f64) -> PyResult<bool> {
        self.inner.is_tight(tol).map_err(to_py)
    }

    fn canonical_dual(&self) -> PyResult<Self> {
        Ok(Self { inner: self.inner.canonical_dual().map_err(to_py)? })
    }

    /// `‖T_G* T_F − I‖_F` for `G = other`.
    fn duality_residual(&self, other: &PyFrame) -> PyResult<f64> {
        self.inner.duality_residual(&other.inner).map_err(to_py)
    }

    #[pyo3(signature = (kind = "fp"))]
    fn potential(&self, kind: &str) -> PyResult<f64> {
        self.inner.potential(parse_kind(kind)?).map_err(to_py)
    }

    fn concat(&self, other: &PyFrame) -> PyResult<Self> {
        Ok(Self { inner: self.inner.concat(&other.inner).map_err(to_py)? })
    }
}

#[pyclass(name = "NuBreakdown", module = "optframe", skip_from_py_object, get_all)]
#[derive(Clone)]
pub struct PyNuBreakdown {
    r: usize,
    c: f64,
    s_star: Option<f64>,
    s_star_star: Option<f64>,
    nu: Vec<f64>,
    regime: String,
}

#[pymethods]
impl PyNuBreakdown {
    fn __repr__(&self) -> String {
        format!("NuBreakdown(r={}, c={}, nu={:?}, regime={:?})", self.r, self.c, self.nu, self.regime)
    }
}

/// Result of an optimal completion; `f1` and `completed` are `None` when infeasible.
#[pyclass(name = "Completion", module = "optframe", skip_from_py_object, get_all)]
#[derive(Clone)]
pub struct PyCompletion {
    feasible: bool,
    nu: Vec<f64>,
    unique_b: bool,
    r_hat: usize,
    c_hat: f64,
    mu_hat: Vec<f64>,
    f1: Option<PyFrame>,
    completed: Option<PyFrame>,
    lower_bound_fp: f64,
    lower_bound_mse: Option<f64>,
}

#[pymethods]
impl PyCompletion {
    fn __repr__(&self) -> String {
        format!("Completion(feasible={}, nu={:?})", self.feasible, self.nu)
    }
}

#[pyclass(name = "Dual", module = "optframe", skip_from_py_object, get_all)]
#[derive(Clone)]
pub struct PyDual {
    w: PyFrame,
    nu: Vec<f64>,
    unique_s: bool,
    trace: f64,
}

#[pymethods]
impl PyDual {
    fn __repr__(&self) -> String {
        format!("Dual(trace={}, nu={:?})", self.trace, self.nu)
    }
}

/// The submajorization-minimal element `ν(λ, m, t)` of `Λ_t(λ, m)`.
#[pyfunction]
fn nu(lam: Vec<f64>, m: i64, t: f64) -> PyResult<PyNuBreakdown> {
    let b = spectra::nu(&spectrum(lam)?, m, t).map_err(to_py)?;
    let regime = serde_json::to_value(b.regime).ok().and_then(|v| v.as_str().map(str::to_owned)).unwrap_or_default();
    Ok(PyNuBreakdown { r: b.r, c: b.c, s_star: b.s_star, s_star_star: b.s_star_star, nu: b.nu.into_vec(), regime })
}

#[pyfunction]
#[pyo3(signature = (lam, m, t, mu, tol = 1e-9))]
fn in_lambda_set(lam: Vec<f64>, m: i64, t: f64, mu: Vec<f64>, tol: f64) -> PyResult<bool> {
    spectra::in_lambda_set(&lam, m, t, &mu, tol).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (lam, m, t, seed = 0))]
fn sample_lambda_set(lam: Vec<f64>, m: i64, t: f64, seed: u64) -> PyResult<Vec<f64>> {
    Ok(spectra::sample_lambda_set(&spectrum(lam)?, m, t, seed).map_err(to_py)?.into_vec())
}

/// `x ≺_w y`.
#[pyfunction]
#[pyo3(signature = (y, x, tol = 1e-9))]
fn submajorizes(y: Vec<f64>, x: Vec<f64>, tol: f64) -> PyResult<bool> {
    majorization::submajorizes(&y, &x, tol).map_err(to_py)
}

/// `x ≺ y`.
#[pyfunction]
#[pyo3(signature = (y, x, tol = 1e-9))]
fn majorizes(y: Vec<f64>, x: Vec<f64>, tol: f64) -> PyResult<bool> {
    majorization::majorizes(&y, &x, tol).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (x, kind = "fp"))]
fn trace_f(x: Vec<f64>, kind: &str) -> PyResult<f64> {
    majorization::trace_f(&x, parse_kind(kind)?).map_err(to_py)
}

/// Optimal completion of `f0` by vectors with squared norms `beta`.
#[pyfunction]
#[pyo3(signature = (f0, beta, tol = 1e-9))]
fn complete(f0: &PyFrame, beta: Vec<f64>, tol: f64) -> PyResult<PyCompletion> {
    let problem = CompletionProblem::new(f0.inner.clone(), beta).map_err(to_py)?.with_tol(tol);
    let result = optframe::complete(&problem).map_err(to_py)?;
    let plan = result.plan;
    Ok(PyCompletion {
        feasible: plan.feasible,
        nu: plan.nu.into_vec(),
        unique_b: plan.unique_b,
        r_hat: plan.r_hat,
        c_hat: plan.c_hat,
        mu_hat: plan.mu_hat,
        f1: result.f1.map(|inner| PyFrame { inner }),
        completed: result.completed.map(|inner| PyFrame { inner }),
        lower_bound_fp: result.lower_bounds.fp,
        lower_bound_mse: result.lower_bounds.mse,
    })
}

/// Dual of `frame` with `tr S_W ≥ t` whose frame operator is submajorization-minimal.
#[pyfunction]
fn optimal_dual(frame: &PyFrame, t: f64) -> PyResult<PyDual> {
    let problem = DualProblem::new(frame.inner.clone(), t).map_err(to_py)?;
    let result = optframe::optimal_dual(&problem).map_err(to_py)?;
    let trace = result.s_t.trace();
    Ok(PyDual { w: PyFrame { inner: result.w }, nu: result.nu.into_vec(), unique_s: result.unique_s, trace })
}

#[pyfunction]
#[pyo3(signature = (f, g, tol = 1e-8))]
fn is_dual(f: &PyFrame, g: &PyFrame, tol: f64) -> PyResult<bool> {
    frames::is_dual(&f.inner, &g.inner, tol).map_err(to_py)
}

#[pyfunction]
fn tight_dual_exists(frame: &PyFrame) -> PyResult<bool> {
    optframe::tight_dual_exists(&frame.inner).map_err(to_py)
}

#[pyfunction]
fn parseval_dual_exists(frame: &PyFrame) -> PyResult<bool> {
    optframe::parseval_dual_exists(&frame.inner).map_err(to_py)
}

/// Vectors with frame operator `b` (a PSD matrix given as rows) and squared norms `beta`.
#[pyfunction]
#[pyo3(signature = (b, beta, tol = 1e-9))]
fn realize_frame(b: Vec<Vec<Complex64>>, beta: Vec<f64>, tol: f64) -> PyResult<PyFrame> {
    let d = b.len();
    if b.iter().any(|row| row.len() != d) {
        return Err(FrameError::new_err("b must be square"));
    }
    let matrix = ComplexMatrix::from_vec(d, d, b.into_iter().flatten().collect()).map_err(to_py)?;
    let psd = HermitianPSD::new(matrix).map_err(to_py)?;
    let vectors = schur_horn::realize_frame(&psd, &beta, tol).map_err(to_py)?;
    Ok(PyFrame { inner: frames::Frame::from_vectors(d, &vectors).map_err(to_py)? })
}

#[pymodule]
#[pyo3(name = "optframe")]
fn optframe_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("FrameError", m.py().get_type::<FrameError>())?;
    m.add_class::<PyFrame>()?;
    m.add_class::<PyNuBreakdown>()?;
    m.add_class::<PyCompletion>()?;
    m.add_class::<PyDual>()?;
    m.add_function(wrap_pyfunction!(nu, m)?)?;
    m.add_function(wrap_pyfunction!(in_lambda_set, m)?)?;
    m.add_function(wrap_pyfunction!(sample_lambda_set, m)?)?;
    m.add_function(wrap_pyfunction!(submajorizes, m)?)?;
    m.add_function(wrap_pyfunction!(majorizes, m)?)?;
    m.add_function(wrap_pyfunction!(trace_f, m)?)?;
    m.add_function(wrap_pyfunction!(complete, m)?)?;
    m.add_function(wrap_pyfunction!(optimal_dual, m)?)?;
    m.add_function(wrap_pyfunction!(is_dual, m)?)?;
    m.add_function(wrap_pyfunction!(tight_dual_exists, m)?)?;
    m.add_function(wrap_pyfunction!(parseval_dual_exists, m)?)?;
    m.add_function(wrap_pyfunction!(realize_frame, m)?)?;
    Ok(())
}
