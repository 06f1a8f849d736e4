//! Bias correction: recovering the true degree distribution `p̂_k` and mean
//! degree `⟨k̂⟩` from a biased observed sample, per sampling technique.
//!
//! Walk corrections are closed-form. The traversal correction solves a
//! chicken-and-egg problem — the bias law needs the stub time `t`, but `t`
//! follows from the unknown `p_k` — by bisecting on `t`: the coverage implied
//! by the candidate correction is monotone increasing in `t`, and the real
//! coverage `f_real` must be supplied by the caller.

use thiserror::Error;

use crate::degree::{DegreeDistribution, DegreeSample};
use crate::float::{cast, cast_usize, Real};
use crate::theory::{coverage_of_t, one_minus_pow_one_minus_t, TheoryError, BISECT_MAX_ITERS};

#[derive(Debug, Error, PartialEq)]
pub enum EstimateError {
    #[error("degree-0 in walk sample")]
    DegreeZero,
    #[error("empty sample")]
    EmptySample,
    #[error("coverage must lie in (0, 1]")]
    BadCoverage,
    #[error("correction failed to converge: residual {residual} after {iters} iterations")]
    NoConvergence { residual: f64, iters: usize },
    #[error(transparent)]
    Theory(#[from] TheoryError),
}

/// Inverts the random-walk bias: `p̂_k ∝ q̂_k / k`.
pub fn correct_rw<T: Real>(
    q_hat: &DegreeDistribution<T>,
) -> Result<DegreeDistribution<T>, EstimateError> {
    if q_hat.fraction(0) > T::zero() {
        return Err(EstimateError::DegreeZero);
    }
    let weights: Vec<(usize, T)> =
        q_hat.iter().map(|(k, w)| (k, w / cast_usize::<T>(k))).collect();
    DegreeDistribution::from_weights(weights).map_err(|_| EstimateError::EmptySample)
}

/// Mean-degree estimate from a random-walk sample: the harmonic mean
/// `|S| / Σ_{v∈S} 1/k_v`, which cancels the walk's degree-proportional bias.
pub fn rw_mean_estimate<T: Real>(sample: &DegreeSample<T>) -> Result<T, EstimateError> {
    if sample.is_empty() {
        return Err(EstimateError::EmptySample);
    }
    let mut inv_sum = T::zero();
    for &k in sample.degrees() {
        if k == 0 {
            return Err(EstimateError::DegreeZero);
        }
        inv_sum += T::one() / cast_usize::<T>(k);
    }
    Ok(cast_usize::<T>(sample.len()) / inv_sum)
}

/// Metropolis-Hastings walks already observe the true distribution; the
/// correction is the identity.
pub fn correct_mhrw<T: Real>(q_hat: &DegreeDistribution<T>) -> DegreeDistribution<T> {
    q_hat.clone()
}

/// The candidate correction at stub time `t`: `p̂_k(t) ∝ q̂_k / (1−(1−t)^k)`.
fn traversal_correction_at<T: Real>(
    q_hat: &DegreeDistribution<T>,
    t: T,
) -> Result<DegreeDistribution<T>, EstimateError> {
    let weights: Vec<(usize, T)> = q_hat
        .iter()
        .map(|(k, w)| (k, w / one_minus_pow_one_minus_t(t, k)))
        .collect();
    DegreeDistribution::from_weights(weights).map_err(|_| EstimateError::EmptySample)
}

/// Inverts the traversal bias given the real covered fraction `f_real`.
///
/// Finds the `t*` at which the self-consistency equation
/// `coverage_of_t(p̂(t), t) = f_real` holds, with
/// `p̂_k(t) ∝ q̂_k/(1−(1−t)^k)`, by bisection over `t ∈ (0, 1]`: the implied
/// coverage is 0 at `t → 0`, 1 at `t = 1`, and monotone in between. Returns
/// the corrected distribution, `t*`, and the number of bisection iterations.
///
/// Degrees absent from `q_hat` get estimate 0; a sample carries no support
/// information beyond what it saw.
pub fn correct_traversal<T: Real>(
    q_hat: &DegreeDistribution<T>,
    f_real: T,
) -> Result<(DegreeDistribution<T>, T, usize), EstimateError> {
    if q_hat.fraction(0) > T::zero() {
        return Err(EstimateError::DegreeZero);
    }
    if !(f_real > T::zero() && f_real <= T::one()) {
        return Err(EstimateError::BadCoverage);
    }
    if f_real == T::one() {
        return Ok((q_hat.clone(), T::one(), 0));
    }
    let tol = cast::<T>(1e-9).max(T::epsilon() * cast::<T>(8.0));
    let two = cast::<T>(2.0);
    let (mut lo, mut hi) = (T::zero(), T::one());
    let mut best: Option<(DegreeDistribution<T>, T)> = None;
    let mut best_residual = T::infinity();
    for iters in 1..=BISECT_MAX_ITERS {
        let mid = (lo + hi) / two;
        let candidate = traversal_correction_at(q_hat, mid)?;
        let implied = coverage_of_t(&candidate, mid)?;
        let residual = implied - f_real;
        if residual.abs() < best_residual {
            best_residual = residual.abs();
            best = Some((candidate, mid));
        }
        if residual.abs() <= tol {
            let (p_hat, t_star) = best.expect("just set");
            return Ok((p_hat, t_star, iters));
        }
        if residual < T::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(EstimateError::NoConvergence {
        residual: best_residual.to_f64().unwrap_or(f64::NAN),
        iters: BISECT_MAX_ITERS,
    })
}

/// Mean degree implied by [`correct_traversal`]: `⟨k̂⟩ = Σ_k k·p̂_k`.
pub fn traversal_mean_estimate<T: Real>(
    q_hat: &DegreeDistribution<T>,
    f_real: T,
) -> Result<T, EstimateError> {
    Ok(correct_traversal(q_hat, f_real)?.0.mean())
}
