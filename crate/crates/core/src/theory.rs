//! Analytic bias predictions: what each sampling technique is expected to
//! observe on a configuration-model random graph, as a function of the true
//! degree distribution `p_k` and the covered fraction `f`.
//!
//! The central objects are the stub-index clock `t` and the pair of maps
//!
//! - `f(t) = Σ_k p_k (1 − (1−t)^k)` — fraction of nodes discovered by time `t`,
//! - `q_k(f) ∝ p_k (1 − (1−t(f))^k)` — degree distribution among them,
//!
//! with `t(f)` obtained by bisection of the strictly monotone `f(t)`.

use std::io::Write;

use thiserror::Error;

use crate::degree::DegreeDistribution;
use crate::float::{cast, cast_usize, Real};

/// Hard iteration cap for the monotone bisection.
pub const BISECT_MAX_ITERS: usize = 200;
/// Residual tolerance of the bisection in double precision; other scalar
/// types fall back to a small multiple of their epsilon.
pub const BISECT_TOL_F64: f64 = 1e-12;

#[derive(Debug, Error, PartialEq)]
pub enum TheoryError {
    #[error("degree distribution has no positive-degree mass")]
    NoPositiveMass,
    #[error("coverage unreachable: isolated nodes")]
    CoverageUnreachable,
    #[error("coverage must lie in [0, 1]")]
    BadCoverage,
    #[error("stub time must lie in [0, 1]")]
    BadT,
    #[error("bisection residual {residual} after {iters} iterations")]
    NoConvergence { residual: f64, iters: usize },
    #[error("coverage grid must be strictly increasing within (0, 1]")]
    BadGrid,
}

/// Residual tolerance for the scalar type in use.
pub(crate) fn bisect_tol<T: Real>() -> T {
    cast::<T>(BISECT_TOL_F64).max(T::epsilon() * cast::<T>(8.0))
}

/// `1 − (1−t)^k` computed without cancellation as `−expm1(k·ln1p(−t))`;
/// accurate for `t` down to the underflow threshold and exact at both ends
/// (`t=0 → 0`, `t=1 → 1` for `k ≥ 1`).
pub(crate) fn one_minus_pow_one_minus_t<T: Real>(t: T, k: usize) -> T {
    if k == 0 {
        return T::zero();
    }
    if t >= T::one() {
        return T::one();
    }
    -(cast_usize::<T>(k) * (-t).ln_1p()).exp_m1()
}

/// Fraction of nodes, of any degree, discovered by stub time `t`:
/// `f(t) = Σ_k p_k (1 − (1−t)^k)`. Strictly increasing in `t` whenever some
/// positive degree carries mass; `f(0) = 0` and `f(1) = 1 − p_0`.
pub fn coverage_of_t<T: Real>(dist: &DegreeDistribution<T>, t: T) -> Result<T, TheoryError> {
    if !(t >= T::zero() && t <= T::one()) {
        return Err(TheoryError::BadT);
    }
    let mut f = T::zero();
    for (k, w) in dist.iter() {
        f += w * one_minus_pow_one_minus_t(t, k);
    }
    // Normalized fractions may sum to 1 plus an ulp; keep f a coverage.
    Ok(f.min(T::one()))
}

/// Inverts [`coverage_of_t`]: the stub time at which coverage reaches `f`.
///
/// `f` must lie in `[0, 1 − p_0]`; isolated nodes are never discovered, so
/// larger coverages do not exist. Bisection on `[0, 1]` stops when the
/// coverage residual drops below `1e-12` (double precision) and is capped at
/// 200 iterations.
pub fn t_of_coverage<T: Real>(dist: &DegreeDistribution<T>, f: T) -> Result<T, TheoryError> {
    if !(f >= T::zero() && f <= T::one()) {
        return Err(TheoryError::BadCoverage);
    }
    if !dist.has_positive_degree() {
        return Err(TheoryError::NoPositiveMass);
    }
    let f_max = coverage_of_t(dist, T::one())?;
    let tol = bisect_tol::<T>();
    if f > f_max {
        // Normalization slop can leave f_max an ulp short of a legitimate
        // request (e.g. f = 1 with no isolated mass); only reject gaps a
        // bisection could not have closed anyway.
        if f - f_max <= tol {
            return Ok(T::one());
        }
        return Err(TheoryError::CoverageUnreachable);
    }
    if f == T::zero() {
        return Ok(T::zero());
    }
    if f == f_max {
        return Ok(T::one());
    }
    let two = cast::<T>(2.0);
    let (mut lo, mut hi) = (T::zero(), T::one());
    let mut best = T::zero();
    let mut best_residual = T::infinity();
    for iters in 0..BISECT_MAX_ITERS {
        let mid = (lo + hi) / two;
        let fm = coverage_of_t(dist, mid)?;
        let residual = (fm - f).abs();
        if residual < best_residual {
            best = mid;
            best_residual = residual;
        }
        if residual <= tol {
            return Ok(mid);
        }
        if fm < f {
            lo = mid;
        } else {
            hi = mid;
        }
        let _ = iters;
    }
    if best_residual <= tol {
        Ok(best)
    } else {
        Err(TheoryError::NoConvergence {
            residual: best_residual.to_f64().unwrap_or(f64::NAN),
            iters: BISECT_MAX_ITERS,
        })
    }
}

/// Expected degree distribution of the nodes discovered by a traversal that
/// covered fraction `f`: `q_k(f) ∝ p_k (1 − (1−t(f))^k)`.
///
/// At `f = 0` the limiting law `k·p_k/⟨k⟩` is returned — an infinitesimally
/// short traversal has exactly the random-walk bias.
pub fn traversal_expected_qk<T: Real>(
    dist: &DegreeDistribution<T>,
    f: T,
) -> Result<DegreeDistribution<T>, TheoryError> {
    if f == T::zero() {
        return rw_expected_qk(dist);
    }
    let t = t_of_coverage(dist, f)?;
    let weights: Vec<(usize, T)> = dist
        .iter()
        .map(|(k, w)| (k, w * one_minus_pow_one_minus_t(t, k)))
        .collect();
    DegreeDistribution::from_weights(weights).map_err(|_| TheoryError::NoPositiveMass)
}

/// Mean of [`traversal_expected_qk`] — the expected observed average degree
/// `⟨k*⟩(f)`, which decreases from `⟨k²⟩/⟨k⟩` at `f → 0` to `⟨k⟩` at full
/// coverage.
pub fn traversal_expected_mean<T: Real>(
    dist: &DegreeDistribution<T>,
    f: T,
) -> Result<T, TheoryError> {
    Ok(traversal_expected_qk(dist, f)?.mean())
}

/// Stationary observed degree law of a random walk: `q_k = k·p_k/⟨k⟩`.
pub fn rw_expected_qk<T: Real>(
    dist: &DegreeDistribution<T>,
) -> Result<DegreeDistribution<T>, TheoryError> {
    let weights: Vec<(usize, T)> = dist.iter().map(|(k, w)| (k, cast_usize::<T>(k) * w)).collect();
    DegreeDistribution::from_weights(weights).map_err(|_| TheoryError::NoPositiveMass)
}

/// Expected observed mean degree of a random walk: `⟨k²⟩/⟨k⟩`.
pub fn rw_expected_mean<T: Real>(dist: &DegreeDistribution<T>) -> Result<T, TheoryError> {
    let (mean, second) = dist.moments();
    if mean <= T::zero() {
        return Err(TheoryError::NoPositiveMass);
    }
    Ok(second / mean)
}

/// Stationary observed degree law of a Metropolis-Hastings random walk: the
/// walk is engineered to visit nodes uniformly, so it observes `p_k` itself.
pub fn mhrw_expected_qk<T: Real>(dist: &DegreeDistribution<T>) -> DegreeDistribution<T> {
    dist.clone()
}

/// Expected observed mean degree of a Metropolis-Hastings walk: `⟨k⟩`.
pub fn mhrw_expected_mean<T: Real>(dist: &DegreeDistribution<T>) -> T {
    dist.mean()
}

/// One point of a [`BiasCurve`].
#[derive(Debug, Clone)]
pub struct BiasPoint<T: Real> {
    pub f: T,
    pub t: T,
    pub q: DegreeDistribution<T>,
    pub mean_observed: T,
}

/// The analytic traversal-bias curve evaluated on a coverage grid.
#[derive(Debug, Clone)]
pub struct BiasCurve<T: Real> {
    points: Vec<BiasPoint<T>>,
}

impl<T: Real> BiasCurve<T> {
    /// Evaluates the curve for `dist` on a strictly increasing grid of
    /// coverages in `(0, 1]`.
    pub fn compute(dist: &DegreeDistribution<T>, f_grid: &[T]) -> Result<Self, TheoryError> {
        if f_grid.is_empty()
            || f_grid.windows(2).any(|w| !(w[0] < w[1]))
            || !(f_grid[0] > T::zero())
            || !(*f_grid.last().expect("non-empty") <= T::one())
        {
            return Err(TheoryError::BadGrid);
        }
        let mut points = Vec::with_capacity(f_grid.len());
        for &f in f_grid {
            let t = t_of_coverage(dist, f)?;
            let q = traversal_expected_qk(dist, f)?;
            let mean_observed = q.mean();
            points.push(BiasPoint { f, t, q, mean_observed });
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> &[BiasPoint<T>] {
        &self.points
    }

    /// Writes the curve as CSV: `f,t,mean_observed`, one row per grid point,
    /// 17 significant digits. With `per_degree`, appends one `q{k}` column
    /// per degree in the union of the supports.
    pub fn write_csv<W: Write>(&self, writer: &mut W, per_degree: bool) -> std::io::Result<()> {
        let mut degree_cols: Vec<usize> = Vec::new();
        if per_degree {
            for p in &self.points {
                for (k, _) in p.q.iter() {
                    if let Err(pos) = degree_cols.binary_search(&k) {
                        degree_cols.insert(pos, k);
                    }
                }
            }
        }
        write!(writer, "f,t,mean_observed")?;
        for &k in &degree_cols {
            write!(writer, ",q{k}")?;
        }
        writeln!(writer)?;
        for p in &self.points {
            let f = p.f.to_f64().expect("fits f64");
            let t = p.t.to_f64().expect("fits f64");
            let m = p.mean_observed.to_f64().expect("fits f64");
            write!(writer, "{f:.16e},{t:.16e},{m:.16e}")?;
            for &k in &degree_cols {
                let q = p.q.fraction(k).to_f64().expect("fits f64");
                write!(writer, ",{q:.16e}")?;
            }
            writeln!(writer)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::preset;

    fn two_point() -> DegreeDistribution<f64> {
        preset::two_point()
    }

    #[test]
    fn coverage_hand_value() {
        let f = coverage_of_t(&two_point(), 0.5).unwrap();
        assert!((f - 0.6875).abs() < 1e-15, "f = {f}");
    }

    #[test]
    fn coverage_boundaries() {
        for (_, d) in preset::corpus::<f64>() {
            assert_eq!(coverage_of_t(&d, 0.0).unwrap(), 0.0);
        }
        assert_eq!(coverage_of_t(&two_point(), 1.0).unwrap(), 1.0);
        // 20% isolated nodes cap the reachable coverage at 0.8.
        let iso = DegreeDistribution::<f64>::from_weights([(0, 0.2), (1, 0.3), (4, 0.5)]).unwrap();
        assert!((coverage_of_t(&iso, 1.0).unwrap() - 0.8).abs() < 1e-15);
        assert_eq!(coverage_of_t(&two_point(), 1.5).unwrap_err(), TheoryError::BadT);
        assert_eq!(coverage_of_t(&two_point(), -0.1).unwrap_err(), TheoryError::BadT);
    }

    #[test]
    fn coverage_strictly_increasing() {
        let d = preset::heavy_tail::<f64>();
        let mut prev = -1.0;
        for i in 0..=100 {
            let t = i as f64 / 100.0;
            let f = coverage_of_t(&d, t).unwrap();
            assert!(f > prev, "not increasing at t={t}");
            prev = f;
        }
    }

    #[test]
    fn t_of_coverage_hand_values() {
        let t = t_of_coverage(&two_point(), 0.6875).unwrap();
        assert!((t - 0.5).abs() < 1e-9, "t = {t}");
        assert_eq!(t_of_coverage(&two_point(), 0.0).unwrap(), 0.0);
        // Single degree 2: f = 1 - (1-t)^2, so f = 0.75 gives t = 0.5.
        let d2 = preset::regular::<f64>(2);
        let t = t_of_coverage(&d2, 0.75).unwrap();
        assert!((t - 0.5).abs() < 1e-9, "t = {t}");
    }

    #[test]
    fn t_of_coverage_residual_meets_tolerance() {
        for (name, d) in preset::corpus::<f64>() {
            let f_max = coverage_of_t(&d, 1.0).unwrap();
            for i in 1..=50 {
                let f = f_max * i as f64 / 50.0;
                let t = t_of_coverage(&d, f).unwrap();
                let back = coverage_of_t(&d, t).unwrap();
                assert!((back - f).abs() <= 1e-9, "{name}: f={f} back={back}");
            }
        }
    }

    #[test]
    fn t_of_coverage_rejects_unreachable() {
        let iso = DegreeDistribution::from_weights([(0, 0.2), (1, 0.8)]).unwrap();
        let err = t_of_coverage(&iso, 0.9).unwrap_err();
        assert_eq!(err, TheoryError::CoverageUnreachable);
        assert_eq!(err.to_string(), "coverage unreachable: isolated nodes");
        let zero = DegreeDistribution::from_weights([(0, 1.0)]).unwrap();
        assert_eq!(t_of_coverage(&zero, 0.0).unwrap_err(), TheoryError::NoPositiveMass);
    }

    #[test]
    fn qk_hand_values() {
        let q = traversal_expected_qk(&two_point(), 0.6875).unwrap();
        assert!((q.fraction(1) - 4.0 / 11.0).abs() < 1e-9);
        assert!((q.fraction(3) - 7.0 / 11.0).abs() < 1e-9);
        let q1 = traversal_expected_qk(&two_point(), 1.0).unwrap();
        assert!((q1.fraction(1) - 0.5).abs() < 1e-9);
        assert!((q1.fraction(3) - 0.5).abs() < 1e-9);
        let q0 = traversal_expected_qk(&two_point(), 0.0).unwrap();
        assert!((q0.fraction(1) - 0.25).abs() < 1e-15);
        assert!((q0.fraction(3) - 0.75).abs() < 1e-15);
    }

    #[test]
    fn mean_hand_values() {
        assert!((traversal_expected_mean(&two_point(), 0.0).unwrap() - 2.5).abs() < 1e-15);
        assert!(
            (traversal_expected_mean(&two_point(), 0.6875).unwrap() - 25.0 / 11.0).abs() < 1e-9
        );
        assert!((traversal_expected_mean(&two_point(), 1.0).unwrap() - 2.0).abs() < 1e-9);
    }

    #[test]
    fn rw_formulas() {
        let q = rw_expected_qk(&two_point()).unwrap();
        assert!((q.fraction(1) - 0.25).abs() < 1e-15);
        assert!((q.fraction(3) - 0.75).abs() < 1e-15);
        assert!((rw_expected_mean(&two_point()).unwrap() - 2.5).abs() < 1e-15);
        let reg = preset::regular::<f64>(7);
        assert_eq!(rw_expected_qk(&reg).unwrap(), reg);
        assert_eq!(rw_expected_mean(&reg).unwrap(), 7.0);
        let one = preset::regular::<f64>(1);
        assert_eq!(rw_expected_qk(&one).unwrap(), one);
        let zero = DegreeDistribution::from_weights([(0, 1.0)]).unwrap();
        assert_eq!(rw_expected_qk(&zero).unwrap_err(), TheoryError::NoPositiveMass);
        assert_eq!(rw_expected_mean(&zero).unwrap_err(), TheoryError::NoPositiveMass);
    }

    #[test]
    fn rw_qk_drops_isolated_mass() {
        let iso = DegreeDistribution::<f64>::from_weights([(0, 0.2), (1, 0.3), (4, 0.5)]).unwrap();
        let q = rw_expected_qk(&iso).unwrap();
        assert_eq!(q.fraction(0), 0.0);
        let expect_1 = 0.3 / (0.3 + 2.0);
        assert!((q.fraction(1) - expect_1).abs() < 1e-15);
    }

    #[test]
    fn mhrw_is_identity() {
        for (_, d) in preset::corpus::<f64>() {
            assert_eq!(mhrw_expected_qk(&d), d);
            assert_eq!(mhrw_expected_mean(&d), d.mean());
        }
    }

    #[test]
    fn boundary_agreement_with_rw() {
        // f → 0 reduces the traversal law to the walk law.
        for (name, d) in preset::corpus::<f64>() {
            if !d.has_positive_degree() {
                continue;
            }
            let q_small = traversal_expected_qk(&d, 1e-9).unwrap();
            let q_rw = rw_expected_qk(&d).unwrap();
            let tv = q_small.total_variation(&q_rw);
            assert!(tv <= 1e-7, "{name}: tv {tv}");
        }
    }

    #[test]
    fn mean_monotone_on_grid() {
        let d = preset::heavy_tail::<f64>();
        let grid: Vec<f64> = (1..=200).map(|i| i as f64 / 200.0).collect();
        let curve = BiasCurve::compute(&d, &grid).unwrap();
        let pts = curve.points();
        for w in pts.windows(2) {
            assert!(
                w[1].mean_observed <= w[0].mean_observed + 1e-12,
                "mean increased between f={} and f={}",
                w[0].f,
                w[1].f
            );
            assert!(w[1].t > w[0].t, "t not increasing");
        }
        // Strict decrease for a non-regular distribution.
        assert!(pts.last().unwrap().mean_observed < pts[0].mean_observed);
        // Endpoints: q(1) = p within 1e-9.
        let tv = pts.last().unwrap().q.total_variation(&d);
        assert!(tv <= 1e-9, "tv at f=1: {tv}");
    }

    #[test]
    fn regular_dist_curve_is_flat() {
        let d = preset::regular::<f64>(4);
        let grid = [0.1, 0.5, 1.0];
        let curve = BiasCurve::compute(&d, &grid).unwrap();
        for p in curve.points() {
            assert_eq!(p.mean_observed, 4.0);
        }
    }

    #[test]
    fn bad_grids_rejected() {
        let d = two_point();
        assert_eq!(BiasCurve::compute(&d, &[]).unwrap_err(), TheoryError::BadGrid);
        assert_eq!(BiasCurve::compute(&d, &[0.0, 0.5]).unwrap_err(), TheoryError::BadGrid);
        assert_eq!(BiasCurve::compute(&d, &[0.5, 0.5]).unwrap_err(), TheoryError::BadGrid);
        assert_eq!(BiasCurve::compute(&d, &[0.5, 0.2]).unwrap_err(), TheoryError::BadGrid);
        assert_eq!(BiasCurve::compute(&d, &[0.5, 1.2]).unwrap_err(), TheoryError::BadGrid);
    }

    #[test]
    fn csv_export_shape() {
        let d = two_point();
        let curve = BiasCurve::compute(&d, &[0.6875, 1.0]).unwrap();
        let mut buf = Vec::new();
        curve.write_csv(&mut buf, false).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[0], "f,t,mean_observed");
        assert!(lines[1].starts_with("6.875"));
        let mut buf = Vec::new();
        curve.write_csv(&mut buf, true).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.lines().next().unwrap() == "f,t,mean_observed,q1,q3");
    }

    #[test]
    fn stable_small_t_power() {
        // 1 - (1-t)^k for tiny t must match the k·t first-order term.
        for &(t, k) in &[(1e-12f64, 3usize), (1e-9, 100), (1e-7, 1000)] {
            let got = one_minus_pow_one_minus_t(t, k);
            let expect = k as f64 * t;
            assert!(
                ((got - expect) / expect).abs() < 1e-4,
                "t={t} k={k}: {got} vs {expect}"
            );
        }
        assert_eq!(one_minus_pow_one_minus_t(1.0, 5), 1.0);
        assert_eq!(one_minus_pow_one_minus_t(0.0, 5), 0.0);
        assert_eq!(one_minus_pow_one_minus_t(0.3, 0), 0.0);
        // Large-k underflow must clamp to exactly 1 (complement 0), and the
        // stable form must agree with a brute-force repeated product.
        assert_eq!(one_minus_pow_one_minus_t(0.9, 100_000), 1.0);
        for &(t, k) in &[(0.25f64, 3usize), (0.5, 64), (0.1, 65), (0.9, 500)] {
            let mut pow = 1.0f64;
            for _ in 0..k {
                pow *= 1.0 - t;
            }
            let a = 1.0 - pow;
            let b = one_minus_pow_one_minus_t(t, k);
            assert!((a - b).abs() < 1e-12, "t={t} k={k}: {a} vs {b}");
        }
    }

    #[test]
    fn works_in_single_precision() {
        let d = preset::two_point::<f32>();
        let t = t_of_coverage(&d, 0.6875f32).unwrap();
        assert!((t - 0.5).abs() < 1e-5, "t = {t}");
        let m = traversal_expected_mean(&d, 0.6875f32).unwrap();
        assert!((m - 25.0 / 11.0).abs() < 1e-5);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_dist() -> impl Strategy<Value = DegreeDistribution<f64>> {
            proptest::collection::vec((1usize..500, 1e-4f64..10.0), 1..15)
                .prop_map(|pairs| DegreeDistribution::from_weights(pairs).unwrap())
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(128))]

            #[test]
            fn round_trip_identity(d in arb_dist(), frac in 0.001f64..0.999) {
                let f = frac * coverage_of_t(&d, 1.0).unwrap();
                let t = t_of_coverage(&d, f).unwrap();
                let back = coverage_of_t(&d, t).unwrap();
                prop_assert!((back - f).abs() <= 1e-9, "f={} back={}", f, back);
            }

            #[test]
            fn qk_is_normalized_and_mean_bracketed(d in arb_dist(), frac in 0.001f64..1.0) {
                let f = frac * coverage_of_t(&d, 1.0).unwrap();
                let q = traversal_expected_qk(&d, f).unwrap();
                let total: f64 = q.iter().map(|(_, w)| w).sum();
                prop_assert!((total - 1.0).abs() < 1e-9);
                let m = q.mean();
                let lo = d.mean() - 1e-9;
                let hi = rw_expected_mean(&d).unwrap() + 1e-9;
                prop_assert!(m >= lo && m <= hi, "mean {} outside [{}, {}]", m, lo, hi);
            }

            #[test]
            fn mean_monotone_in_f(d in arb_dist(), a in 0.01f64..0.99, delta in 0.001f64..0.5) {
                let f_max = coverage_of_t(&d, 1.0).unwrap();
                let f1 = a * f_max;
                let f2 = (a + delta).min(1.0) * f_max;
                prop_assume!(f2 > f1);
                let m1 = traversal_expected_mean(&d, f1).unwrap();
                let m2 = traversal_expected_mean(&d, f2).unwrap();
                prop_assert!(m2 <= m1 + 1e-9, "mean rose: {} -> {}", m1, m2);
            }
        }
    }
}
