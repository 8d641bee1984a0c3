//! Waterfilling spectra: irregularity `r_λ(t)`, level `c_λ(t)`, the
//! thresholds `s*`, `s**`, and the submajorization-minimal vector `ν(λ, m, t)`
//! of the spectral set `Λ_t(λ, m)`.
//!
//! All indices are 0-based counts: `r` is the number of leading eigenvalues
//! that are kept untouched, so `λ_{r+1}` in one-based notation is `lambda[r]`.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::error::{FrameError, Result};
use crate::majorization::SpectrumVec;

/// Slack below the trace of `λ` that is clamped instead of rejected.
pub const TRACE_CLAMP: f64 = 1e-9;

fn tie_slack(lambda: &[f64]) -> f64 {
    1e-12 * (1.0 + lambda.first().map_or(0.0, |x| x.abs()))
}

/// Parameters `(λ, m, t)` of the spectral set `Λ_t(λ, m)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralParams {
    lambda: SpectrumVec,
    m: i64,
    t: f64,
}

impl SpectralParams {
    pub fn new(lambda: SpectrumVec, m: i64, t: f64) -> Result<Self> {
        let d = lambda.len();
        if d == 0 {
            return Err(FrameError::InvalidInput("empty spectrum".into()));
        }
        if m >= d as i64 {
            return Err(FrameError::BadM { m, d });
        }
        let t = clamp_trace(lambda.as_slice(), t)?;
        Ok(Self { lambda, m, t })
    }

    pub fn lambda(&self) -> &SpectrumVec {
        &self.lambda
    }

    pub fn m(&self) -> i64 {
        self.m
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn nu(&self) -> Result<NuBreakdown> {
        nu(&self.lambda, self.m, self.t)
    }
}

/// Which branch of the piecewise description of `ν` applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    AtOrBelowSStar,
    Between,
    AtOrAboveSStarStar,
}

/// The minimal vector `ν(λ, m, t)` together with the quantities it is built from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NuBreakdown {
    pub r: usize,
    pub c: f64,
    pub s_star: Option<f64>,
    pub s_star_star: Option<f64>,
    pub nu: SpectrumVec,
    pub regime: Regime,
}

fn clamp_trace(lambda: &[f64], t: f64) -> Result<f64> {
    let trace: f64 = lambda.iter().sum();
    if !t.is_finite() {
        return Err(FrameError::InvalidInput(format!("trace target {t} is not finite")));
    }
    if t >= trace {
        Ok(t)
    } else if t >= trace - TRACE_CLAMP {
        Ok(trace)
    } else {
        Err(FrameError::BadTrace { t, trace })
    }
}

fn check_m(lambda: &[f64], m: i64) -> Result<usize> {
    let d = lambda.len();
    if m < 1 || m >= d as i64 {
        return Err(FrameError::BadM { m, d });
    }
    Ok(m as usize)
}

/// `p_λ(r, t) = (t − Σ_{j≤r} λ_j) / (d − r)`.
pub fn p_lambda(lambda: &[f64], r: usize, t: f64) -> Result<f64> {
    let d = lambda.len();
    if d == 0 || r >= d {
        return Err(FrameError::BadIndex { r, max: d.saturating_sub(1) });
    }
    let head: f64 = lambda[..r].iter().sum();
    Ok((t - head) / (d - r) as f64)
}

/// The `t`-irregularity `r_λ(t)`: the least `r` whose waterfilling level
/// `p_λ(r, t)` reaches `λ_{r+1}`.
pub fn irregularity(lambda: &[f64], t: f64) -> Result<usize> {
    let t = clamp_trace(lambda, t)?;
    Ok(irregularity_unchecked(lambda, t))
}

fn irregularity_unchecked(lambda: &[f64], t: f64) -> usize {
    let d = lambda.len();
    let slack = tie_slack(lambda);
    let mut head = 0.0;
    for r in 0..d {
        let p = (t - head) / (d - r) as f64;
        if p >= lambda[r] - slack {
            return r;
        }
        head += lambda[r];
    }
    d - 1
}

/// `c_λ(t) = p_λ(r_λ(t), t)`.
pub fn c_lambda(lambda: &[f64], t: f64) -> Result<f64> {
    let t = clamp_trace(lambda, t)?;
    let r = irregularity_unchecked(lambda, t);
    p_lambda(lambda, r, t)
}

/// `s*(λ, m) = Σ_{i≤m} λ_i + (d − m)·λ_m`, the trace at which `c_λ` reaches `λ_m`.
pub fn s_star(lambda: &[f64], m: i64) -> Result<f64> {
    let m = check_m(lambda, m)?;
    let d = lambda.len();
    Ok(lambda[..m].iter().sum::<f64>() + (d - m) as f64 * lambda[m - 1])
}

/// `s**(λ, m) = (d − m)·λ_1 + Σ_{j≤m} λ_j`, the trace at which `c_{λ,m}` reaches `λ_1`.
pub fn s_star_star(lambda: &[f64], m: i64) -> Result<f64> {
    let m = check_m(lambda, m)?;
    let d = lambda.len();
    Ok((d - m) as f64 * lambda[0] + lambda[..m].iter().sum::<f64>())
}

/// Level `c_{λ,m}(t)`; for `m ≥ 1` it grows linearly past `s*` with only
/// `d − m` free directions.
pub fn c_lambda_m(lambda: &[f64], m: i64, t: f64) -> Result<f64> {
    let d = lambda.len();
    if m >= d as i64 || d == 0 {
        return Err(FrameError::BadM { m, d });
    }
    let t = clamp_trace(lambda, t)?;
    if m <= 0 {
        return c_lambda(lambda, t);
    }
    let s = s_star(lambda, m)?;
    if t <= s {
        c_lambda(lambda, t)
    } else {
        let m = m as usize;
        Ok(lambda[m - 1] + (t - s) / (d - m) as f64)
    }
}

/// `r_{λ,m}(t) = min{r ≥ 0 : c_{λ,m}(t) ≥ λ_{r+1}}` (and `r_λ(t)` when `m ≤ 0`).
pub fn r_lambda_m(lambda: &[f64], m: i64, t: f64) -> Result<usize> {
    let d = lambda.len();
    if m >= d as i64 || d == 0 {
        return Err(FrameError::BadM { m, d });
    }
    let t = clamp_trace(lambda, t)?;
    if m <= 0 {
        return Ok(irregularity_unchecked(lambda, t));
    }
    let c = c_lambda_m(lambda, m, t)?;
    Ok(first_below(lambda, c))
}

fn first_below(lambda: &[f64], c: f64) -> usize {
    let slack = tie_slack(lambda);
    lambda.iter().position(|&l| c >= l - slack).unwrap_or(lambda.len() - 1)
}

/// The unique `≺_w`-minimal element `ν(λ, m, t)` of `Λ_t(λ, m)`.
pub fn nu(lambda: &SpectrumVec, m: i64, t: f64) -> Result<NuBreakdown> {
    let lam = lambda.as_slice();
    let d = lam.len();
    if d == 0 || m >= d as i64 {
        return Err(FrameError::BadM { m, d });
    }
    let t = clamp_trace(lam, t)?;
    let r = r_lambda_m(lam, m, t)?;
    let c = c_lambda_m(lam, m, t)?;

    let (s1, s2) = if m >= 1 { (Some(s_star(lam, m)?), Some(s_star_star(lam, m)?)) } else { (None, None) };

    let (values, regime) = match (s1, s2) {
        (Some(s1), Some(s2)) if t > s1 => {
            let m = m as usize;
            if t < s2 {
                let mut v = lam[..r].to_vec();
                v.extend(std::iter::repeat_n(c, d - m));
                v.extend_from_slice(&lam[r..m]);
                (v, Regime::Between)
            } else {
                let mut v = vec![c; d - m];
                v.extend_from_slice(&lam[..m]);
                (v, Regime::AtOrAboveSStarStar)
            }
        }
        _ => {
            let mut v = lam[..r].to_vec();
            v.extend(std::iter::repeat_n(c, d - r));
            (v, Regime::AtOrBelowSStar)
        }
    };

    // the branches are ordered up to tie slack; sorting removes sub-ulp inversions
    let mut values = values;
    values.sort_by(|a, b| b.total_cmp(a));
    Ok(NuBreakdown {
        r,
        c,
        s_star: s1,
        s_star_star: s2,
        nu: SpectrumVec::from_sorted_unchecked(values),
        regime,
    })
}

/// Membership in `Λ_t(λ, m)`: `μ ≥ λ` entrywise, `tr μ ≥ t`, and for `m ≥ 1`
/// the interlacing caps `μ_{d−m+i} ≤ λ_i`.
pub fn in_lambda_set(lambda: &[f64], m: i64, t: f64, mu: &[f64], tol: f64) -> Result<bool> {
    let d = lambda.len();
    if mu.len() != d {
        return Err(FrameError::LengthMismatch { left: mu.len(), right: d });
    }
    if mu.windows(2).any(|w| w[0] < w[1] - tol) {
        return Ok(false);
    }
    if mu.iter().zip(lambda).any(|(a, b)| *a < b - tol) {
        return Ok(false);
    }
    if mu.iter().sum::<f64>() < t - tol {
        return Ok(false);
    }
    if m >= 1 {
        let m = m as usize;
        if m > d {
            return Err(FrameError::BadM { m: m as i64, d });
        }
        if (0..m).any(|i| mu[d - m + i] > lambda[i] + tol) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A pseudo-random member of `Λ_t(λ, m)` determined by `seed`.
pub fn sample_lambda_set(lambda: &SpectrumVec, m: i64, t: f64, seed: u64) -> Result<SpectrumVec> {
    sample_lambda_set_with_spread(lambda, m, t, seed, 1.0)
}

/// Convex combination `(1 − spread)·ν + spread·X` of `ν` and a random member
/// `X`; `spread = 0` returns `ν`. The result is checked for membership and
/// falls back to `ν` if rounding pushed it outside.
pub fn sample_lambda_set_with_spread(
    lambda: &SpectrumVec,
    m: i64,
    t: f64,
    seed: u64,
    spread: f64,
) -> Result<SpectrumVec> {
    let minimal = nu(lambda, m, t)?.nu;
    let t = clamp_trace(lambda.as_slice(), t)?;
    let spread = spread.clamp(0.0, 1.0);
    if spread == 0.0 {
        return Ok(minimal);
    }
    let mut rng = StdRng::seed_from_u64(seed);
    let exact_trace = rng.random_bool(0.3);
    let other = random_member(lambda.as_slice(), m, t, exact_trace, &mut rng);
    let mixed: Vec<f64> =
        minimal.as_slice().iter().zip(&other).map(|(a, b)| (1.0 - spread) * a + spread * b).collect();
    let tol = 1e-9 * (1.0 + t.abs());
    if in_lambda_set(lambda.as_slice(), m, t, &mixed, tol)? {
        Ok(SpectrumVec::from_sorted_unchecked(mixed))
    } else {
        Ok(minimal)
    }
}

/// Builds a sorted `μ ∈ Λ(λ, m)` from the bottom up, respecting
/// `max(λ_i, μ_{i+1}) ≤ μ_i ≤ λ_{i−(d−m)}`, then tops up (or shrinks toward
/// `λ`) to reach the trace constraint.
fn random_member<R: Rng>(lambda: &[f64], m: i64, t: f64, exact_trace: bool, rng: &mut R) -> Vec<f64> {
    let d = lambda.len();
    let k = if m >= 1 { d - m as usize } else { d };
    let scale = 1.0 + lambda.first().copied().unwrap_or(0.0) + (t - lambda.iter().sum::<f64>()) / d as f64;
    let mut mu = vec![0.0; d];
    for i in (0..d).rev() {
        let lower = if i + 1 < d { lambda[i].max(mu[i + 1]) } else { lambda[i] };
        let upper = if i >= k { lambda[i - k] } else { lower + scale * rng.random::<f64>() };
        mu[i] = lower + (upper - lower).max(0.0) * rng.random::<f64>();
    }
    let trace: f64 = mu.iter().sum();
    if trace < t {
        mu[0] += t - trace;
    } else if exact_trace {
        let t0: f64 = lambda.iter().sum();
        let s = if trace > t0 { (t - t0) / (trace - t0) } else { 0.0 };
        for (x, l) in mu.iter_mut().zip(lambda) {
            *x = l + s * (*x - l);
        }
    }
    mu
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::majorization::{submajorizes, DEFAULT_TOL};

    fn spec(v: &[f64]) -> SpectrumVec {
        SpectrumVec::new(v.to_vec()).unwrap()
    }

    fn assert_close(a: &[f64], b: &[f64], tol: f64) {
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(b) {
            assert!((x - y).abs() <= tol, "{a:?} vs {b:?}");
        }
    }

    const EJ1: [f64; 5] = [9.0, 5.0, 4.0, 2.0, 1.0];
    const THIRD: [f64; 5] = [7.0, 4.0, 4.0, 3.0, 1.0];
    const DUAL: [f64; 5] = [4.0, 3.0, 1.5, 0.5, 0.4];

    #[test]
    fn p_lambda_examples() {
        assert!((p_lambda(&EJ1, 3, 23.75).unwrap() - 2.875).abs() < 1e-12);
        assert_eq!(p_lambda(&EJ1, 0, 45.0).unwrap(), 9.0);
        // (24 − 7) / 4
        assert_eq!(p_lambda(&THIRD, 1, 24.0).unwrap(), 4.25);
        assert!(matches!(p_lambda(&EJ1, 5, 30.0), Err(FrameError::BadIndex { .. })));
    }

    #[test]
    fn irregularity_examples() {
        assert_eq!(irregularity(&EJ1, 23.75).unwrap(), 3);
        assert_eq!(irregularity(&EJ1, 21.0).unwrap(), 4);
        assert_eq!(irregularity(&EJ1, 45.0).unwrap(), 0);
        assert_eq!(irregularity(&EJ1, 100.0).unwrap(), 0);
        assert_eq!(irregularity(&[2.0, 2.0, 2.0], 6.0).unwrap(), 0);
        assert!(matches!(irregularity(&EJ1, 20.0), Err(FrameError::BadTrace { .. })));
        // rounding just below the trace is clamped
        assert_eq!(irregularity(&EJ1, 21.0 - 1e-12).unwrap(), 4);
    }

    #[test]
    fn c_lambda_examples() {
        assert_eq!(c_lambda(&EJ1, 21.0).unwrap(), 1.0);
        assert!((c_lambda(&EJ1, 23.75).unwrap() - 2.875).abs() < 1e-12);
        assert_eq!(c_lambda(&EJ1, 45.0).unwrap(), 9.0);
    }

    #[test]
    fn s_star_examples() {
        assert_eq!(s_star(&THIRD, 2).unwrap(), 23.0);
        assert_eq!(s_star(&[4.0, 3.0, 1.5, 0.5, 0.4], 2).unwrap(), 16.0);
        assert_eq!(s_star_star(&[4.0, 3.0, 1.5, 0.5, 0.4], 2).unwrap(), 19.0);
        let flat = [1.5; 4];
        for m in 1..4 {
            assert_eq!(s_star(&flat, m).unwrap(), 6.0);
            assert_eq!(s_star_star(&flat, m).unwrap(), 6.0);
        }
        assert!(matches!(s_star(&EJ1, 0), Err(FrameError::BadM { .. })));
        assert!(matches!(s_star(&EJ1, 5), Err(FrameError::BadM { .. })));
    }

    #[test]
    fn c_and_r_with_rank_constraint() {
        assert!((c_lambda_m(&EJ1, 3, 26.5).unwrap() - 4.25).abs() < 1e-12);
        assert_eq!(r_lambda_m(&EJ1, 3, 26.5).unwrap(), 2);
        assert!((c_lambda_m(&THIRD, 2, 24.0).unwrap() - 13.0 / 3.0).abs() < 1e-12);
        assert_eq!(r_lambda_m(&THIRD, 2, 24.0).unwrap(), 1);
        assert!((c_lambda_m(&DUAL, 2, 16.5).unwrap() - 19.0 / 6.0).abs() < 1e-12);
        assert_eq!(r_lambda_m(&DUAL, 2, 16.5).unwrap(), 1);
    }

    #[test]
    fn nu_examples() {
        let b = nu(&spec(&EJ1), 3, 26.5).unwrap();
        assert_close(b.nu.as_slice(), &[9.0, 5.0, 4.25, 4.25, 4.0], 1e-12);
        assert_eq!(b.regime, Regime::Between);
        assert_eq!(b.s_star, Some(26.0));

        let b = nu(&spec(&DUAL), 2, 16.5).unwrap();
        let c = 19.0 / 6.0;
        assert_close(b.nu.as_slice(), &[4.0, c, c, c, 3.0], 1e-12);
        assert_close(b.nu.as_slice(), &[4.0, 3.1667, 3.1667, 3.1667, 3.0], 1e-3);

        for m in [-3, 0] {
            let b = nu(&spec(&EJ1), m, 21.0).unwrap();
            assert_eq!(b.nu.as_slice(), &EJ1);
            assert_eq!(b.regime, Regime::AtOrBelowSStar);
            assert_eq!(b.s_star, None);
        }
    }

    #[test]
    fn nu_regimes_and_traces() {
        let lam = spec(&DUAL);
        // s* = 16, s** = 19
        for (t, regime) in [(12.0, Regime::AtOrBelowSStar), (16.0, Regime::AtOrBelowSStar), (17.5, Regime::Between), (19.0, Regime::AtOrAboveSStarStar), (40.0, Regime::AtOrAboveSStarStar)] {
            let b = nu(&lam, 2, t).unwrap();
            assert_eq!(b.regime, regime, "t = {t}");
            assert!((b.nu.trace() - t).abs() < 1e-9);
        }
        let b = nu(&lam, 2, 40.0).unwrap();
        // c·1_3 followed by λ_1, λ_2
        let c = (40.0 - 7.0) / 3.0;
        assert_close(b.nu.as_slice(), &[c, c, c, 4.0, 3.0], 1e-12);
    }

    #[test]
    fn flat_top_collapses_middle_regime() {
        let lam = spec(&[3.0, 3.0, 1.0, 0.5]);
        // λ_1 == λ_2, so s* == s**
        assert_eq!(s_star(lam.as_slice(), 2).unwrap(), s_star_star(lam.as_slice(), 2).unwrap());
        let b = nu(&lam, 2, 12.5).unwrap();
        assert_eq!(b.regime, Regime::AtOrAboveSStarStar);
        assert_close(b.nu.as_slice(), &[3.25, 3.25, 3.0, 3.0], 1e-12);
    }

    #[test]
    fn nu_rejects_bad_inputs() {
        assert!(matches!(nu(&spec(&EJ1), 5, 30.0), Err(FrameError::BadM { .. })));
        assert!(matches!(nu(&spec(&EJ1), 2, 10.0), Err(FrameError::BadTrace { .. })));
    }

    #[test]
    fn membership_examples() {
        assert!(in_lambda_set(&[2.0, 1.0], 1, 3.0, &[3.0, 1.5], DEFAULT_TOL).unwrap());
        assert!(!in_lambda_set(&[2.0, 1.0], 1, 3.0, &[3.0, 2.5], DEFAULT_TOL).unwrap());
        for m in [-1, 0, 1, 3] {
            assert!(in_lambda_set(&EJ1, m, 21.0, &EJ1, DEFAULT_TOL).unwrap());
        }
        assert!(matches!(in_lambda_set(&EJ1, 1, 21.0, &[1.0], DEFAULT_TOL), Err(FrameError::LengthMismatch { .. })));
    }

    #[test]
    fn sampler_zero_spread_returns_nu() {
        let lam = spec(&EJ1);
        let s = sample_lambda_set_with_spread(&lam, 3, 26.5, 7, 0.0).unwrap();
        assert_eq!(s, nu(&lam, 3, 26.5).unwrap().nu);
    }

    #[test]
    fn sampler_members_dominate_nu() {
        let lam = spec(&DUAL);
        for m in [-2, 0, 1, 2, 4] {
            for seed in 0..200 {
                let t = 9.4 + (seed % 17) as f64;
                let mu = sample_lambda_set(&lam, m, t, seed).unwrap();
                assert!(in_lambda_set(lam.as_slice(), m, t, mu.as_slice(), 1e-9).unwrap());
                let v = nu(&lam, m, t).unwrap().nu;
                assert!(submajorizes(mu.as_slice(), v.as_slice(), 1e-9).unwrap());
            }
        }
    }

    #[test]
    fn sampler_allows_large_mass_when_unconstrained() {
        let lam = spec(&[1.0, 1.0, 1.0]);
        let mu = sample_lambda_set(&lam, 0, 3.0, 11).unwrap();
        assert!(in_lambda_set(lam.as_slice(), 0, 3.0, mu.as_slice(), 1e-9).unwrap());
    }
}
