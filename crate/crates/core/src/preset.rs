//! Named degree-distribution presets used by the CLI and the test corpus.

use thiserror::Error;

use crate::degree::{DegreeDistribution, DistError};
use crate::float::{cast, Real};

#[derive(Debug, Error, PartialEq)]
pub enum PresetError {
    #[error("unknown preset {0:?} (known: two-point, heavy-tail, regular-K)")]
    Unknown(String),
    #[error(transparent)]
    Dist(#[from] DistError),
}

/// Half the nodes with degree 1, half with degree 3.
pub fn two_point<T: Real>() -> DegreeDistribution<T> {
    DegreeDistribution::from_weights([(1, T::one()), (3, T::one())]).expect("valid preset")
}

/// Every node with degree `c`.
pub fn regular<T: Real>(c: usize) -> DegreeDistribution<T> {
    DegreeDistribution::from_weights([(c, T::one())]).expect("valid preset")
}

/// Truncated power law `p_k ∝ k^(-2.5)` on `k ∈ [1, 316]`, normalized.
pub fn heavy_tail<T: Real>() -> DegreeDistribution<T> {
    DegreeDistribution::from_weights(
        (1..=316).map(|k| (k, cast::<T>((k as f64).powf(-2.5)))),
    )
    .expect("valid preset")
}

/// Resolves a preset by name: `two-point`, `heavy-tail`, or `regular-K`
/// (for example `regular-2`).
pub fn from_name<T: Real>(name: &str) -> Result<DegreeDistribution<T>, PresetError> {
    match name {
        "two-point" => Ok(two_point()),
        "heavy-tail" => Ok(heavy_tail()),
        _ => {
            if let Some(k) = name.strip_prefix("regular-") {
                let c: usize = k
                    .parse()
                    .map_err(|_| PresetError::Unknown(name.to_string()))?;
                if c == 0 {
                    return Err(PresetError::Unknown(name.to_string()));
                }
                return Ok(regular(c));
            }
            Err(PresetError::Unknown(name.to_string()))
        }
    }
}

/// The distributions exercised by the cross-module test corpus.
pub fn corpus<T: Real>() -> Vec<(&'static str, DegreeDistribution<T>)> {
    vec![
        ("two-point", two_point()),
        ("regular-2", regular(2)),
        ("heavy-tail", heavy_tail()),
        (
            "geometric-ish",
            DegreeDistribution::from_weights((1..=20).map(|k| (k, cast::<T>(0.5f64.powi(k as i32)))))
                .expect("valid"),
        ),
        (
            "with-isolated",
            DegreeDistribution::from_weights([
                (0, cast::<T>(0.2)),
                (1, cast::<T>(0.3)),
                (4, cast::<T>(0.5)),
            ])
            .expect("valid"),
        ),
    ]
}
