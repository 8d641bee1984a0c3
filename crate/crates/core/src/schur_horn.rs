//! Sequences with prescribed frame operator and prescribed norms.
//!
//! `unitary_for_diagonal` builds a real orthogonal `U` with
//! `diag(U·diag(λ)·U*) = target` by a chain of plane rotations, each pinning
//! one diagonal entry. `realize_frame` turns it into `k` vectors whose frame
//! operator is a given `B` and whose squared norms are a given `β`.

use crate::error::{FrameError, Result};
use crate::linalg::{eig_hermitian, givens_left_in_place, normalize_phase, ComplexMatrix, HermitianPSD, C64};
use crate::majorization::{majorizes, SpectrumVec};

/// Output of the rotation chain.
#[derive(Clone, Debug)]
pub struct DiagonalRealization {
    pub unitary: ComplexMatrix,
    pub rotations: usize,
}

/// Unitary `U` with `diag(U·diag(λ)·U*) = target`, for `target ≺ λ`.
pub fn unitary_for_diagonal(lambda: &SpectrumVec, target: &[f64], tol: f64) -> Result<ComplexMatrix> {
    Ok(unitary_for_diagonal_counted(lambda, target, tol)?.unitary)
}

/// Same as [`unitary_for_diagonal`], also reporting how many rotations were used.
///
/// Targets are pinned from largest to smallest. Each one is placed using the
/// adjacent pair of still-free diagonal values that straddles it, which is the
/// straddling pair with the smallest gap. At most `k − 1` rotations are used.
pub fn unitary_for_diagonal_counted(lambda: &SpectrumVec, target: &[f64], tol: f64) -> Result<DiagonalRealization> {
    let k = lambda.len();
    if target.len() != k {
        return Err(FrameError::LengthMismatch { left: target.len(), right: k });
    }
    if !majorizes(lambda.as_slice(), target, tol)? {
        return Err(FrameError::NotMajorized);
    }

    let mut q = ComplexMatrix::identity(k);
    // free diagonal entries as (position, value), kept sorted by value descending
    let mut free: Vec<(usize, f64)> = lambda.as_slice().iter().copied().enumerate().collect();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| target[b].total_cmp(&target[a]).then(a.cmp(&b)));
    let mut position_of_target = vec![0usize; k];
    let mut rotations = 0;

    for (step, &ti) in order.iter().enumerate() {
        let b = target[ti];
        if step + 1 == k {
            // trace equality pins the last entry
            position_of_target[ti] = free[0].0;
            break;
        }
        let last = free.len() - 1;
        let idx = if b >= free[0].1 {
            Some(0)
        } else if b <= free[last].1 {
            Some(last)
        } else {
            None
        };
        if let Some(i) = idx {
            position_of_target[ti] = free[i].0;
            free.remove(i);
            continue;
        }
        // free[i].1 ≥ b ≥ free[i+1].1
        let i = free.windows(2).position(|w| w[0].1 >= b && b >= w[1].1).expect("straddling pair exists");
        let (pi, ai) = free[i];
        let (pj, aj) = free[i + 1];
        let gap = ai - aj;
        if gap <= f64::EPSILON * (ai.abs() + aj.abs()) || ai == b {
            position_of_target[ti] = pi;
            free.remove(i);
            continue;
        }
        if b == aj {
            position_of_target[ti] = pj;
            free.remove(i + 1);
            continue;
        }
        let c2 = ((b - aj) / gap).clamp(0.0, 1.0);
        let c = c2.sqrt();
        let s = (1.0 - c2).sqrt();
        givens_left_in_place(&mut q, pi, pj, C64::new(c, 0.0), C64::new(s, 0.0))?;
        rotations += 1;
        position_of_target[ti] = pi;
        let remaining = ai + aj - b;
        free.remove(i);
        // the partner keeps its position but takes the leftover value; it stays in sorted order
        let j = free.iter().position(|&(p, _)| p == pj).expect("partner is free");
        free[j].1 = remaining;
        free.sort_by(|x, y| y.1.total_cmp(&x.1).then(x.0.cmp(&y.0)));
    }

    let unitary = ComplexMatrix::from_fn(k, k, |r, c| q[(position_of_target[r], c)]);
    Ok(DiagonalRealization { unitary, rotations })
}

/// `k` vectors `g_i` with `Σ g_i g_i* = B` and `‖g_i‖² = β_i`.
///
/// Requires `β > 0`, `rank(B) ≤ k` and `β ≺ λ(B)` (zero-padded or truncated
/// to length `k`). Vectors are returned in the order of `beta`.
pub fn realize_frame(b: &HermitianPSD, beta: &[f64], tol: f64) -> Result<Vec<Vec<C64>>> {
    Ok(realize_frame_counted(b, beta, tol)?.0)
}

pub(crate) fn realize_frame_counted(b: &HermitianPSD, beta: &[f64], tol: f64) -> Result<(Vec<Vec<C64>>, usize)> {
    let d = b.dim();
    let k = beta.len();
    if k == 0 {
        return Err(FrameError::InvalidInput("no norms given".into()));
    }
    if beta.iter().any(|&x| !(x > 0.0) || !x.is_finite()) {
        return Err(FrameError::InvalidInput("squared norms must be positive".into()));
    }
    let spectrum = b.eigenvalues().as_slice();
    let scale = 1.0 + b.matrix().frobenius_norm();
    let rank_tol = tol * scale;
    let rank = spectrum.iter().filter(|&&x| x > rank_tol).count();
    if rank > k {
        return Err(FrameError::RankTooLarge { rank, k });
    }
    let lambda = b.eigenvalues().resized(k);
    let realization = unitary_for_diagonal_counted(&lambda, beta, tol * scale.max(beta.iter().sum::<f64>()))?;
    let u = realization.unitary;

    // T = U·D^{1/2}·V_k*, rows of T are g_i*
    let roots: Vec<f64> = lambda.as_slice().iter().map(|&x| x.max(0.0).sqrt()).collect();
    let v = b.eigenvectors();
    let width = k.min(d);
    let mut vectors = Vec::with_capacity(k);
    for i in 0..k {
        let mut g = vec![C64::new(0.0, 0.0); d];
        for j in 0..width {
            let coeff = u[(i, j)].conj() * roots[j];
            if coeff == C64::new(0.0, 0.0) {
                continue;
            }
            for (a, gi) in g.iter_mut().enumerate() {
                *gi += coeff * v[(a, j)];
            }
        }
        normalize_phase(&mut g);
        vectors.push(g);
    }
    Ok((vectors, realization.rotations))
}

/// Squared norms of `vectors` sorted descending, checked against `λ(Σ g g*)`;
/// the only-if direction of the realization criterion.
pub fn norms_majorized_by_spectrum(vectors: &[Vec<C64>], tol: f64) -> Result<bool> {
    let k = vectors.len();
    if k == 0 {
        return Ok(true);
    }
    let d = vectors[0].len();
    let synthesis = ComplexMatrix::from_columns(d, vectors)?;
    let (spectrum, _) = eig_hermitian(&synthesis.matmul(&synthesis.adjoint()))?;
    let norms: Vec<f64> = vectors.iter().map(|g| g.iter().map(|z| z.norm_sqr()).sum()).collect();
    majorizes(spectrum.resized(k).as_slice(), &norms, tol)
}
