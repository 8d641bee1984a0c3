//! Dense complex matrices and the Hermitian kernels the rest of the crate
//! builds on: a cyclic Jacobi eigensolver, kernel bases and plane rotations.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::error::{FrameError, Result};
use crate::majorization::SpectrumVec;

pub type C64 = Complex64;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Relative threshold on the off-diagonal mass at which Jacobi sweeps stop.
pub const JACOBI_TOL: f64 = 1e-12;
/// Relative tolerance used to decide numerical rank from singular values.
pub const TOL_RANK: f64 = 1e-8;
/// Relative tolerance on the Hermitian symmetry check.
pub const TOL_SYM: f64 = 1e-10;
/// Relative tolerance for eigenvalue clamping in PSD matrices.
pub const TOL_EIG: f64 = 1e-9;

const MAX_SWEEPS: usize = 100;

/// Row-major dense complex matrix.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(FrameError::LengthMismatch { left: data.len(), right: rows * cols });
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(FrameError::InvalidInput("non-finite matrix entry".into()));
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a real matrix from row-major entries.
    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        Self::from_vec(rows, cols, data.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, columns: &[Vec<C64>]) -> Result<Self> {
        if let Some(bad) = columns.iter().find(|c| c.len() != rows) {
            return Err(FrameError::LengthMismatch { left: bad.len(), right: rows });
        }
        let cols = columns.len();
        let m = Self::from_fn(rows, cols, |i, j| columns[j][i]);
        Self::from_vec(rows, cols, m.data)
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = C64::new(v, 0.0);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn set_column(&mut self, j: usize, values: &[C64]) {
        for (i, &v) in values.iter().enumerate() {
            self[(i, j)] = v;
        }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matmul shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                let orow = other.row(k);
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, &b) in dst.iter_mut().zip(orow) {
                    *d += a * b;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.cols, v.len(), "mul_vec shape mismatch");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Self { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Self { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, s: C64) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * s).collect() }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn is_real(&self) -> bool {
        self.data.iter().all(|z| z.im == 0.0)
    }

    /// Frobenius norm of `self - self*`.
    pub fn hermitian_defect(&self) -> f64 {
        if self.rows != self.cols {
            return f64::INFINITY;
        }
        let mut acc = 0.0;
        for i in 0..self.rows {
            for j in 0..self.cols {
                acc += (self[(i, j)] - self[(j, i)].conj()).norm_sqr();
            }
        }
        acc.sqrt()
    }

    /// Keeps only the columns in `range`.
    pub fn column_slice(&self, range: std::ops::Range<usize>) -> Self {
        let start = range.start;
        Self::from_fn(self.rows, range.len(), |i, j| self[(i, start + j)])
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self
                .row(i)
                .iter()
                .map(|z| if z.im == 0.0 { format!("{:.6}", z.re) } else { format!("{:.6}", z) })
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Hermitian positive semidefinite matrix with its eigendecomposition.
#[derive(Clone, Debug)]
pub struct HermitianPSD {
    matrix: ComplexMatrix,
    eigenvalues: SpectrumVec,
    eigenvectors: ComplexMatrix,
}

impl HermitianPSD {
    /// Decomposes `matrix`; eigenvalues within `TOL_EIG·(1+‖A‖_F)` below zero are clamped.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let (values, vectors) = eig_hermitian(&matrix)?;
        let tol = TOL_EIG * (1.0 + matrix.frobenius_norm());
        let min = values.as_slice().last().copied().unwrap_or(0.0);
        if min < -tol {
            return Err(FrameError::NotPositive { min_eigenvalue: min });
        }
        let clamped = values.as_slice().iter().map(|&x| x.max(0.0)).collect();
        let matrix = symmetrized(&matrix);
        Ok(Self { matrix, eigenvalues: SpectrumVec::from_sorted_unchecked(clamped), eigenvectors: vectors })
    }

    /// Builds `Σ w_i v_i v_i*` from orthonormal columns and nonnegative weights.
    pub fn from_spectral(eigenvectors: &ComplexMatrix, weights: &[f64]) -> Result<Self> {
        Self::new(spectral_sum(eigenvectors, weights))
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn eigenvalues(&self) -> &SpectrumVec {
        &self.eigenvalues
    }

    /// Unitary whose j-th column pairs with the j-th eigenvalue.
    pub fn eigenvectors(&self) -> &ComplexMatrix {
        &self.eigenvectors
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    /// Numerical rank relative to the largest eigenvalue.
    pub fn rank(&self) -> usize {
        let top = self.eigenvalues.as_slice().first().copied().unwrap_or(0.0);
        let cutoff = TOL_RANK * top.max(f64::MIN_POSITIVE);
        self.eigenvalues.as_slice().iter().filter(|&&x| x > cutoff).count()
    }

    /// Applies `f` to the spectrum: `V f(Λ) V*`.
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let w: Vec<f64> = self.eigenvalues.as_slice().iter().map(|&x| f(x)).collect();
        spectral_sum(&self.eigenvectors, &w)
    }

    /// Inverse of a positive definite matrix, via the spectrum.
    pub fn inverse(&self) -> Result<ComplexMatrix> {
        if self.rank() < self.dim() {
            return Err(FrameError::RankDeficient { rank: self.rank(), required: self.dim() });
        }
        Ok(self.apply(|x| 1.0 / x))
    }
}

/// `Σ_j w_j v_j v_j*` over the columns `v_j` of `vectors`.
pub fn spectral_sum(vectors: &ComplexMatrix, weights: &[f64]) -> ComplexMatrix {
    let d = vectors.rows();
    let mut out = ComplexMatrix::zeros(d, d);
    for (j, &w) in weights.iter().enumerate() {
        if w == 0.0 {
            continue;
        }
        for a in 0..d {
            let va = vectors[(a, j)] * w;
            if va == ZERO {
                continue;
            }
            for b in 0..d {
                out[(a, b)] += va * vectors[(b, j)].conj();
            }
        }
    }
    out
}

fn symmetrized(a: &ComplexMatrix) -> ComplexMatrix {
    let n = a.rows();
    ComplexMatrix::from_fn(n, n, |i, j| {
        if i == j {
            C64::new(a[(i, i)].re, 0.0)
        } else {
            (a[(i, j)] + a[(j, i)].conj()) * 0.5
        }
    })
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += a[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
///
/// Eigenvalues are returned in nonincreasing order; ties keep the original
/// diagonal index order. Each eigenvector is rephased so that its first entry
/// of modulus above `1e-9` is real and positive. Real input never leaves the
/// real axis.
pub fn eig_hermitian(a: &ComplexMatrix) -> Result<(SpectrumVec, ComplexMatrix)> {
    if a.rows() != a.cols() {
        return Err(FrameError::ShapeMismatch(format!("{}x{} matrix is not square", a.rows(), a.cols())));
    }
    let norm = a.frobenius_norm();
    let tol_sym = TOL_SYM * (1.0 + norm);
    let defect = a.hermitian_defect();
    if !(defect <= tol_sym) {
        return Err(FrameError::NotHermitian { asymmetry: defect, tolerance: tol_sym });
    }
    let n = a.rows();
    let mut m = symmetrized(a);
    let mut v = ComplexMatrix::identity(n);
    let stop = JACOBI_TOL * m.frobenius_norm();

    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&m) <= stop {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                jacobi_rotate(&mut m, &mut v, p, q);
            }
        }
    }

    let diag: Vec<f64> = (0..n).map(|i| m[(i, i)].re).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| diag[j].total_cmp(&diag[i]).then(i.cmp(&j)));

    let values: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        let mut col = v.column(src);
        normalize_phase(&mut col);
        vectors.set_column(dst, &col);
    }
    Ok((SpectrumVec::from_sorted_unchecked(values), vectors))
}

/// Makes the first entry with modulus above 1e-9 real and positive.
pub(crate) fn normalize_phase(v: &mut [C64]) {
    if let Some(lead) = v.iter().copied().find(|z| z.norm() > 1e-9) {
        let phase = if lead.im == 0.0 {
            C64::new(lead.re.signum(), 0.0)
        } else {
            lead / lead.norm()
        };
        let fix = phase.conj();
        if fix != ONE {
            for z in v.iter_mut() {
                *z *= fix;
            }
        }
    }
}

/// One Jacobi step zeroing `m[p][q]`; accumulates the rotation into `v`.
fn jacobi_rotate(m: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = m[(p, q)];
    let g = apq.norm();
    if g == 0.0 {
        return;
    }
    let app = m[(p, p)].re;
    let aqq = m[(q, q)].re;
    // below rounding of the diagonal the entry is already converged
    if g <= f64::EPSILON * 1e-3 * (app.abs() + aqq.abs()) {
        m[(p, q)] = ZERO;
        m[(q, p)] = ZERO;
        return;
    }
    let phase = if apq.im == 0.0 { C64::new(apq.re.signum(), 0.0) } else { apq / g };

    let theta = (aqq - app) / (2.0 * g);
    let t = if theta.is_infinite() {
        0.0
    } else {
        let sgn = if theta >= 0.0 { 1.0 } else { -1.0 };
        sgn / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    // J = [[c, s·e^{iφ}], [-s·e^{-iφ}, c]] on (p, q); M ← J* M J, V ← V J.
    let jpq = phase * s;
    let jqp = -(phase.conj() * s);
    let n = m.rows();
    for k in 0..n {
        let mkp = m[(k, p)];
        let mkq = m[(k, q)];
        m[(k, p)] = mkp * c + mkq * jqp;
        m[(k, q)] = mkp * jpq + mkq * c;
    }
    for k in 0..n {
        let mpk = m[(p, k)];
        let mqk = m[(q, k)];
        m[(p, k)] = mpk * c + mqk * jqp.conj();
        m[(q, k)] = mpk * jpq.conj() + mqk * c;
    }
    m[(p, q)] = ZERO;
    m[(q, p)] = ZERO;
    m[(p, p)] = C64::new(m[(p, p)].re, 0.0);
    m[(q, q)] = C64::new(m[(q, q)].re, 0.0);
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * c + vkq * jqp;
        v[(k, q)] = vkp * jpq + vkq * c;
    }
}

/// Orthonormal basis of `ker M` for a full-row-rank `d×n` matrix `M`.
///
/// The basis comes from the trailing eigenvectors of `M*M`, ordered by
/// increasing eigenvalue, then refined by one projection onto the kernel.
pub fn null_space_onb(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let (d, n) = (m.rows(), m.cols());
    if d > n {
        return Err(FrameError::RankDeficient { rank: n, required: d });
    }
    let gram = m.matmul(&m.adjoint());
    let (sv2, u) = eig_hermitian(&gram)?;
    let sv2 = sv2.as_slice();
    let largest = sv2.first().copied().unwrap_or(0.0).max(0.0).sqrt();
    let rank = sv2.iter().filter(|&&x| x.max(0.0).sqrt() > TOL_RANK * largest).count();
    if d > 0 && (largest == 0.0 || rank < d) {
        return Err(FrameError::RankDeficient { rank, required: d });
    }
    let kernel_dim = n - d;
    if kernel_dim == 0 {
        return Ok(ComplexMatrix::zeros(n, 0));
    }

    let (_, w) = eig_hermitian(&m.adjoint().matmul(m))?;
    // (MM*)^{-1} from the d×d decomposition, for the refinement step
    let inv_weights: Vec<f64> = sv2.iter().map(|&x| 1.0 / x).collect();
    let gram_inv = spectral_sum(&u, &inv_weights);
    let pinv = m.adjoint().matmul(&gram_inv);

    let mut basis: Vec<Vec<C64>> = Vec::with_capacity(kernel_dim);
    for j in (d..n).rev() {
        let mut col = w.column(j);
        let residual = m.mul_vec(&col);
        let correction = pinv.mul_vec(&residual);
        for (x, c) in col.iter_mut().zip(&correction) {
            *x -= c;
        }
        basis.push(col);
    }
    orthonormalize(&mut basis);
    for col in basis.iter_mut() {
        normalize_phase(col);
    }
    ComplexMatrix::from_columns(n, &basis)
}

/// Modified Gram-Schmidt, applied twice.
fn orthonormalize(vectors: &mut [Vec<C64>]) {
    for _ in 0..2 {
        for i in 0..vectors.len() {
            let (done, rest) = vectors.split_at_mut(i);
            let v = &mut rest[0];
            for u in done.iter() {
                let proj: C64 = u.iter().zip(v.iter()).map(|(a, b)| a.conj() * b).sum();
                for (x, y) in v.iter_mut().zip(u) {
                    *x -= proj * y;
                }
            }
            let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            for x in v.iter_mut() {
                *x /= norm;
            }
        }
    }
}

/// Left-multiplies rows `i`, `j` of `m` by the unitary `[[c, s], [-s̄, c̄]]`.
pub fn givens_left(m: &ComplexMatrix, i: usize, j: usize, c: C64, s: C64) -> Result<ComplexMatrix> {
    let mut out = m.clone();
    givens_left_in_place(&mut out, i, j, c, s)?;
    Ok(out)
}

pub(crate) fn givens_left_in_place(m: &mut ComplexMatrix, i: usize, j: usize, c: C64, s: C64) -> Result<()> {
    let rows = m.rows();
    if i >= rows || j >= rows || i == j {
        return Err(FrameError::IndexOutOfRange { row: i, other: j, rows });
    }
    let unit = c.norm_sqr() + s.norm_sqr();
    if (unit - 1.0).abs() > 1e-12 {
        return Err(FrameError::InvalidInput(format!("|c|²+|s|² = {unit} is not 1")));
    }
    for k in 0..m.cols() {
        let a = m[(i, k)];
        let b = m[(j, k)];
        m[(i, k)] = c * a + s * b;
        m[(j, k)] = -s.conj() * a + c.conj() * b;
    }
    Ok(())
}
