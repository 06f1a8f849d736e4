//! Degree distributions and degree samples.
//!
//! [`DegreeDistribution`] is the shared currency of the crate: generators
//! consume it, the analytic layer predicts sampling bias from it, and the
//! estimators hand corrected copies back. Fractions are kept in a sorted map
//! so iteration order, serialization and arithmetic are all deterministic.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use thiserror::Error;

use crate::float::{cast, cast_usize, Real};

/// Errors from distribution construction, binning and file I/O.
#[derive(Debug, Error, PartialEq)]
pub enum DistError {
    #[error("empty distribution")]
    Empty,
    #[error("negative weight for degree {0}")]
    NegativeWeight(usize),
    #[error("non-finite weight for degree {0}")]
    NonFiniteWeight(usize),
    #[error("empty sample")]
    EmptySample,
    #[error("coverage must lie in (0, 1]")]
    BadCoverage,
    #[error("bin ratio must be a finite value greater than 1")]
    BadBinRatio,
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for DistError {
    fn from(e: std::io::Error) -> Self {
        DistError::Io(e.to_string())
    }
}

/// A node-degree distribution: `fraction(k)` is the share of nodes with
/// degree `k`.
///
/// Invariants enforced at construction:
/// - every fraction is positive and finite (exact zeros are dropped),
/// - the fractions sum to one (inputs are treated as weights and normalized,
///   so raw counts are accepted).
///
/// Degree 0 is permitted and matters for book-keeping, but no exploration
/// ever reaches an isolated node; the operations that must invert the
/// coverage map reject distributions whose positive-degree mass is zero.
#[derive(Debug, Clone, PartialEq)]
pub struct DegreeDistribution<T: Real> {
    fractions: BTreeMap<usize, T>,
}

impl<T: Real> DegreeDistribution<T> {
    /// Builds a distribution from `(degree, weight)` pairs.
    ///
    /// Weights for a repeated degree accumulate, negative or non-finite
    /// weights are rejected, and the result is normalized to sum to one.
    pub fn from_weights<I>(weights: I) -> Result<Self, DistError>
    where
        I: IntoIterator<Item = (usize, T)>,
    {
        let mut fractions: BTreeMap<usize, T> = BTreeMap::new();
        for (k, w) in weights {
            if !w.is_finite() {
                return Err(DistError::NonFiniteWeight(k));
            }
            if w < T::zero() {
                return Err(DistError::NegativeWeight(k));
            }
            *fractions.entry(k).or_insert_with(T::zero) += w;
        }
        let total: T = fractions.values().copied().sum();
        if !(total > T::zero()) {
            return Err(DistError::Empty);
        }
        fractions.retain(|_, w| *w > T::zero());
        for w in fractions.values_mut() {
            *w /= total;
        }
        Ok(Self { fractions })
    }

    /// Builds the empirical distribution of a list of degrees.
    pub fn from_degrees(degrees: &[usize]) -> Result<Self, DistError> {
        if degrees.is_empty() {
            return Err(DistError::EmptySample);
        }
        let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
        for &k in degrees {
            *counts.entry(k).or_insert(0) += 1;
        }
        Self::from_weights(counts.into_iter().map(|(k, c)| (k, cast_usize::<T>(c))))
    }

    /// Fraction of nodes with degree `k` (zero when `k` is not in the support).
    pub fn fraction(&self, k: usize) -> T {
        self.fractions.get(&k).copied().unwrap_or_else(T::zero)
    }

    /// Iterates over `(degree, fraction)` pairs in ascending degree order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, T)> + '_ {
        self.fractions.iter().map(|(&k, &w)| (k, w))
    }

    /// Degrees in the support, ascending.
    pub fn degrees(&self) -> impl Iterator<Item = usize> + '_ {
        self.fractions.keys().copied()
    }

    /// Number of degrees in the support.
    pub fn support_len(&self) -> usize {
        self.fractions.len()
    }

    /// Smallest degree in the support.
    pub fn min_degree(&self) -> usize {
        *self.fractions.keys().next().expect("non-empty by construction")
    }

    /// Largest degree in the support.
    pub fn max_degree(&self) -> usize {
        *self.fractions.keys().next_back().expect("non-empty by construction")
    }

    /// True when some degree `k >= 1` carries positive mass; exploration and
    /// coverage inversion are only defined in that case.
    pub fn has_positive_degree(&self) -> bool {
        self.fractions.keys().any(|&k| k >= 1)
    }

    /// First and second moments `(⟨k⟩, ⟨k²⟩)`.
    pub fn moments(&self) -> (T, T) {
        let mut mean = T::zero();
        let mut second = T::zero();
        for (&k, &w) in &self.fractions {
            let kf = cast_usize::<T>(k);
            mean += kf * w;
            second += kf * kf * w;
        }
        (mean, second)
    }

    /// Mean degree `⟨k⟩`.
    pub fn mean(&self) -> T {
        self.moments().0
    }

    /// Total-variation distance to another distribution: `½ Σ |p_k − q_k|`.
    pub fn total_variation(&self, other: &Self) -> T {
        let mut acc = T::zero();
        for &k in self.fractions.keys().chain(other.fractions.keys()) {
            // Union iteration visits shared degrees twice; halve at the end
            // only once, so skip the duplicate here.
            if self.fractions.contains_key(&k) && other.fractions.contains_key(&k) {
                continue;
            }
            acc += (self.fraction(k) - other.fraction(k)).abs();
        }
        for (&k, &w) in &self.fractions {
            if let Some(&v) = other.fractions.get(&k) {
                acc += (w - v).abs();
            }
        }
        acc / cast::<T>(2.0)
    }

    /// Restriction to degrees `k >= 1`, renormalized. Errors when there is no
    /// positive-degree mass.
    pub fn positive_part(&self) -> Result<Self, DistError> {
        Self::from_weights(self.iter().filter(|&(k, _)| k >= 1))
    }

    /// Reads a distribution from `path`; see [`read_dist`] for the format.
    pub fn load(path: impl AsRef<Path>) -> Result<Self, DistError> {
        read_dist(BufReader::new(File::open(path)?))
    }

    /// Writes the distribution to `path`; see [`write_dist`] for the format.
    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), DistError> {
        let mut w = BufWriter::new(File::create(path)?);
        write_dist(&mut w, self)
    }
}

/// A list of observed node degrees together with the coverage at which the
/// sample was taken (`None` for samplers with no notion of coverage).
#[derive(Debug, Clone, PartialEq)]
pub struct DegreeSample<T: Real> {
    degrees: Vec<usize>,
    coverage: Option<T>,
}

impl<T: Real> DegreeSample<T> {
    /// Wraps observed degrees; `coverage`, when given, must lie in `(0, 1]`.
    pub fn new(degrees: Vec<usize>, coverage: Option<T>) -> Result<Self, DistError> {
        if let Some(f) = coverage {
            if !(f > T::zero() && f <= T::one()) {
                return Err(DistError::BadCoverage);
            }
        }
        Ok(Self { degrees, coverage })
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn coverage(&self) -> Option<T> {
        self.coverage
    }

    pub fn len(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degrees.is_empty()
    }
}

/// Empirical degree distribution of a sample: counts divided by sample size.
pub fn empirical_distribution<T: Real>(
    sample: &DegreeSample<T>,
) -> Result<DegreeDistribution<T>, DistError> {
    DegreeDistribution::from_degrees(sample.degrees())
}

/// Groups a distribution into logarithmic bins `[ratio^b, ratio^(b+1))`.
///
/// Returns `(bin_center, mean_fraction)` pairs where the center is the
/// geometric mean of the bin edges and the mean averages `p_k` over the
/// integer degrees of the bin that fall inside the support range
/// `[min_degree, max_degree]` (absent degrees count as zero). Bins containing
/// no such degree are omitted; degree 0 falls in no bin.
pub fn log_binned<T: Real>(
    dist: &DegreeDistribution<T>,
    bin_ratio: T,
) -> Result<Vec<(T, T)>, DistError> {
    if !(bin_ratio.is_finite() && bin_ratio > T::one()) {
        return Err(DistError::BadBinRatio);
    }
    let k_max = dist.max_degree();
    let k_lo = dist.min_degree().max(1);
    if k_max < 1 {
        return Ok(Vec::new());
    }
    let ratio = bin_ratio.to_f64().expect("finite ratio");
    // Start one bin early to be safe against log rounding at the boundary;
    // empty bins are skipped anyway.
    let mut b = ((k_lo as f64).ln() / ratio.ln()).floor() as i32 - 1;
    let mut out = Vec::new();
    loop {
        let lo = ratio.powi(b);
        if lo > k_max as f64 {
            break;
        }
        let hi = ratio.powi(b + 1);
        let first = (lo.ceil() as usize).max(k_lo);
        let mut last = hi.ceil() as usize - 1;
        last = last.min(k_max);
        if first <= last && (first as f64) >= lo && (first as f64) < hi {
            let mut sum = T::zero();
            let mut n = 0usize;
            for k in first..=last {
                if (k as f64) < hi {
                    sum += dist.fraction(k);
                    n += 1;
                }
            }
            if n > 0 {
                let center = cast::<T>((lo * hi).sqrt());
                out.push((center, sum / cast_usize::<T>(n)));
            }
        }
        b += 1;
    }
    Ok(out)
}

/// Parses a degree distribution from "k value" lines.
///
/// Whitespace separates the two fields, blank lines are skipped and `#`
/// starts a comment line. Values are weights: the result is normalized, so
/// both probability files and raw-count files load the same way.
pub fn read_dist<T: Real, R: BufRead>(reader: R) -> Result<DegreeDistribution<T>, DistError> {
    let mut entries: Vec<(usize, T)> = Vec::new();
    let mut seen: BTreeMap<usize, usize> = BTreeMap::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = i + 1;
        let text = line.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let mut fields = text.split_whitespace();
        let (k_tok, v_tok) = match (fields.next(), fields.next(), fields.next()) {
            (Some(k), Some(v), None) => (k, v),
            _ => {
                return Err(DistError::Parse {
                    line: lineno,
                    msg: format!("expected \"k value\", got {text:?}"),
                })
            }
        };
        let k: usize = k_tok.parse().map_err(|_| DistError::Parse {
            line: lineno,
            msg: format!("invalid degree {k_tok:?}"),
        })?;
        let v: f64 = v_tok.parse().map_err(|_| DistError::Parse {
            line: lineno,
            msg: format!("invalid value {v_tok:?}"),
        })?;
        if let Some(&prev) = seen.get(&k) {
            return Err(DistError::Parse {
                line: lineno,
                msg: format!("duplicate degree {k} (first on line {prev})"),
            });
        }
        seen.insert(k, lineno);
        if v < 0.0 {
            return Err(DistError::NegativeWeight(k));
        }
        entries.push((k, cast::<T>(v)));
    }
    DegreeDistribution::from_weights(entries)
}

/// Writes a distribution as "k value" lines, degrees ascending, values with
/// 17 significant digits so an `f64` round-trips bit-exactly.
pub fn write_dist<T: Real, W: Write>(
    writer: &mut W,
    dist: &DegreeDistribution<T>,
) -> Result<(), DistError> {
    for (k, w) in dist.iter() {
        let v = w.to_f64().expect("fraction fits in f64");
        writeln!(writer, "{k} {v:.16e}")?;
    }
    Ok(())
}
