//! Graph sampling laboratory.
//!
//! This crate simulates how graph exploration techniques (breadth-first and
//! depth-first traversal, forest fire, snowball sampling, random walks,
//! Metropolis-Hastings walks, respondent-driven sampling) observe the node
//! degrees of large random graphs, predicts the degree bias of traversals
//! analytically as a function of the fraction of the graph covered, and
//! corrects biased samples back to the underlying degree distribution.
//!
//! The numeric machinery is generic over the scalar type via [`float::Real`]
//! (any `num-traits` float works; `f32` and `f64` are tested). The aliases at
//! the crate root fix `f64`, which is what the command-line tool and the
//! documented tolerances assume.

// Validation guards are written `if !(x > 0.0)` on purpose: the negation
// rejects NaN along with out-of-range values, which `x <= 0.0` would not.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod degree;
pub mod estimate;
pub mod experiment;
pub mod float;
pub mod generate;
pub mod graph;
pub mod preset;
pub mod sample;
pub mod seed;
pub mod theory;

pub use degree::{
    empirical_distribution, log_binned, read_dist, write_dist, DegreeDistribution, DegreeSample,
    DistError,
};
pub use estimate::{
    correct_mhrw, correct_rw, correct_traversal, rw_mean_estimate, traversal_mean_estimate,
    EstimateError,
};
pub use experiment::{
    pipeline_on_graph, run_experiment, DistSource, ExperimentConfig, ExperimentError,
    ExperimentResult, Method, MethodRow, PipelineBudget, PipelineSummary, RewireReport,
    StartPolicy,
};
pub use float::Real;
pub use generate::{
    generate, generate_from_dist, realize_sequence, rewire_to_assortativity,
    rewire_to_assortativity_connected, DegreeSequence, GenError, RewireOutcome,
};
pub use graph::{read_edge_list, write_edge_list, GraphError, HalfEdge, Multigraph};
pub use sample::{
    mhrw, on_the_fly_sample, random_walk, rds, stationary_start, traverse,
    traverse_with_restarts, traverse_with_restarts_count, uniform_gc_start, uniform_sample,
    weighted_wor_sample, write_visits_csv, SampleError, SampleSequence, TraversalPolicy,
};
pub use seed::{child_seed, rng_for, rng_from};
pub use theory::{
    coverage_of_t, mhrw_expected_mean, mhrw_expected_qk, rw_expected_mean, rw_expected_qk,
    t_of_coverage, traversal_expected_mean, traversal_expected_qk, BiasCurve, BiasPoint,
    TheoryError,
};

/// Double-precision degree distribution (the default throughout the CLI).
pub type Dist64 = DegreeDistribution<f64>;
/// Single-precision degree distribution.
pub type Dist32 = DegreeDistribution<f32>;
/// Double-precision degree sample.
pub type Sample64 = DegreeSample<f64>;
/// Single-precision degree sample.
pub type Sample32 = DegreeSample<f32>;
