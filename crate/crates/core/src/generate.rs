//! Configuration-model graph generation and degree-preserving rewiring.
//!
//! A degree distribution is materialized into an integer degree sequence by
//! largest-remainder apportionment, the sequence's stubs (half-edges) are
//! matched by a uniform random perfect matching, and the resulting multigraph
//! can then be rewired toward a target assortativity without touching any
//! node's degree.

use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

use crate::degree::DegreeDistribution;
use crate::float::{cast_usize, Real};
use crate::graph::{assortativity_from_sums, assortativity_sums, GraphError, Multigraph};

#[derive(Debug, Error, PartialEq)]
pub enum GenError {
    #[error("node count must be at least 1")]
    EmptySequence,
    #[error("no stubs to match")]
    NoStubs,
    #[error("odd stub count")]
    OddStubSum,
    #[error("rewiring target must lie in (-1, 1)")]
    BadTarget,
    #[error("rewiring tolerance must be non-negative")]
    BadTolerance,
    #[error("need at least 2 edges to rewire")]
    TooFewEdges,
    #[error("graph must be connected for connectivity-preserving rewiring")]
    NotConnected,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// One degree per node. The even-stub-sum invariant is established by
/// [`realize_sequence`]; hand-built sequences are checked when a graph is
/// generated from them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeSequence {
    degrees: Vec<usize>,
}

impl DegreeSequence {
    pub fn new(degrees: Vec<usize>) -> Self {
        Self { degrees }
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn len(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degrees.is_empty()
    }

    /// Total number of stubs, `Σ k_v`.
    pub fn stub_sum(&self) -> usize {
        self.degrees.iter().sum()
    }

    /// Empirical distribution of the sequence (the ground truth that a
    /// full-coverage sample must reproduce exactly).
    pub fn distribution<T: Real>(&self) -> Result<DegreeDistribution<T>, crate::degree::DistError> {
        DegreeDistribution::from_degrees(&self.degrees)
    }
}

impl From<Vec<usize>> for DegreeSequence {
    fn from(degrees: Vec<usize>) -> Self {
        Self::new(degrees)
    }
}

/// `n·p_k` rounded to integer per-degree counts by largest remainder:
/// every degree gets `floor(n·p_k)` and the leftover units go to the largest
/// fractional parts (ties favor the smaller degree). Deterministic in
/// `(dist, n)`.
fn apportion<T: Real>(dist: &DegreeDistribution<T>, n: usize) -> Vec<(usize, usize)> {
    let nf = cast_usize::<T>(n);
    let mut counts: Vec<(usize, usize)> = Vec::with_capacity(dist.support_len());
    let mut remainders: Vec<(usize, T)> = Vec::with_capacity(dist.support_len());
    let mut assigned = 0usize;
    for (k, w) in dist.iter() {
        let target = nf * w;
        let base = target.floor().to_usize().expect("degree count fits usize");
        counts.push((k, base));
        remainders.push((k, target - target.floor()));
        assigned += base;
    }
    let mut leftover = n - assigned;
    remainders.sort_by(|a, b| b.1.partial_cmp(&a.1).expect("finite").then(a.0.cmp(&b.0)));
    let mut bump: Vec<usize> = Vec::with_capacity(leftover);
    for (k, _) in remainders {
        if leftover == 0 {
            break;
        }
        bump.push(k);
        leftover -= 1;
    }
    for k in bump {
        counts.iter_mut().find(|(d, _)| *d == k).expect("present").1 += 1;
    }
    debug_assert_eq!(counts.iter().map(|&(_, c)| c).sum::<usize>(), n);
    counts
}

/// Materializes `dist` at size `n`: per-degree node counts by
/// largest-remainder apportionment (so the multiset is deterministic in
/// `(dist, n)`), degrees assigned to node ids in ascending-degree order.
///
/// When the stub sum comes out odd, one node chosen uniformly among those
/// with the smallest positive degree has its degree raised by 1 so that stub
/// matching is possible; the adjusted node id is reported.
pub fn realize_sequence<T: Real, R: Rng + ?Sized>(
    dist: &DegreeDistribution<T>,
    n: usize,
    rng: &mut R,
) -> Result<(DegreeSequence, Option<usize>), GenError> {
    if n == 0 {
        return Err(GenError::EmptySequence);
    }
    let mut degrees: Vec<usize> = Vec::with_capacity(n);
    for (k, count) in apportion(dist, n) {
        degrees.extend(std::iter::repeat_n(k, count));
    }
    let mut adjusted = None;
    if degrees.iter().sum::<usize>() % 2 == 1 {
        // An odd sum implies some positive degree exists.
        let smallest = degrees.iter().copied().filter(|&k| k > 0).min().expect("odd sum");
        let candidates: Vec<usize> = (0..n).filter(|&v| degrees[v] == smallest).collect();
        let v = *candidates.choose(rng).expect("non-empty");
        degrees[v] += 1;
        adjusted = Some(v);
    }
    Ok((DegreeSequence::new(degrees), adjusted))
}

/// Uniform configuration-model multigraph over `seq`: each node `v` gets
/// `k_v` stubs, the stub multiset is shuffled uniformly, and consecutive
/// stubs are paired into edges. Self-loops and parallel edges are kept.
pub fn generate<R: Rng + ?Sized>(
    seq: &DegreeSequence,
    rng: &mut R,
) -> Result<Multigraph, GenError> {
    let total = seq.stub_sum();
    if total % 2 == 1 {
        return Err(GenError::OddStubSum);
    }
    if total == 0 && !seq.is_empty() {
        return Err(GenError::NoStubs);
    }
    let mut stubs: Vec<usize> = Vec::with_capacity(total);
    for (v, &k) in seq.degrees().iter().enumerate() {
        stubs.extend(std::iter::repeat_n(v, k));
    }
    stubs.shuffle(rng);
    let edges: Vec<(usize, usize)> = stubs.chunks_exact(2).map(|p| (p[0], p[1])).collect();
    Ok(Multigraph::from_edges(seq.len(), edges)?)
}

/// Convenience: realize a sequence from `dist` and generate the graph.
pub fn generate_from_dist<T: Real, R: Rng + ?Sized>(
    dist: &DegreeDistribution<T>,
    n: usize,
    rng: &mut R,
) -> Result<(Multigraph, DegreeSequence), GenError> {
    let (seq, _) = realize_sequence(dist, n, rng)?;
    let g = generate(&seq, rng)?;
    Ok((g, seq))
}

/// Result of a rewiring run.
#[derive(Debug, Clone)]
pub struct RewireOutcome {
    pub graph: Multigraph,
    /// Assortativity of the returned graph.
    pub achieved_r: f64,
    /// Proposals that were accepted (improved the distance to the target).
    pub accepted: u64,
    /// Total proposals examined.
    pub proposals: u64,
    /// True when |achieved_r − target| ≤ tolerance.
    pub converged: bool,
}

/// Degree-preserving rewiring toward a target assortativity.
///
/// Repeatedly picks two distinct edges `{v1,w1}`, `{v2,w2}` uniformly (with a
/// fair coin deciding the pairing orientation) and replaces them by
/// `{v1,w2}`, `{v2,w1}` only when that strictly reduces `|r − target_r|`.
/// Swaps that create self-loops or parallel edges are allowed (multigraph
/// semantics). Stops once within `tolerance` or after `max_steps` proposals;
/// running out of proposals is reported via [`RewireOutcome::converged`],
/// not an error.
pub fn rewire_to_assortativity<R: Rng + ?Sized>(
    g: &Multigraph,
    target_r: f64,
    tolerance: f64,
    max_steps: u64,
    rng: &mut R,
) -> Result<RewireOutcome, GenError> {
    rewire_impl(g, target_r, tolerance, max_steps, rng, false)
}

/// Like [`rewire_to_assortativity`], but requires a connected input graph and
/// rejects any swap that would disconnect it (checked by re-traversal, and
/// reverted). Useful when a walk or traversal must see the same node set
/// before and after rewiring.
pub fn rewire_to_assortativity_connected<R: Rng + ?Sized>(
    g: &Multigraph,
    target_r: f64,
    tolerance: f64,
    max_steps: u64,
    rng: &mut R,
) -> Result<RewireOutcome, GenError> {
    rewire_impl(g, target_r, tolerance, max_steps, rng, true)
}

fn rewire_impl<R: Rng + ?Sized>(
    g: &Multigraph,
    target_r: f64,
    tolerance: f64,
    max_steps: u64,
    rng: &mut R,
    keep_connected: bool,
) -> Result<RewireOutcome, GenError> {
    if !(target_r > -1.0 && target_r < 1.0) {
        return Err(GenError::BadTarget);
    }
    if !(tolerance >= 0.0) {
        return Err(GenError::BadTolerance);
    }
    if g.edge_count() < 2 {
        return Err(GenError::TooFewEdges);
    }
    if keep_connected && !is_connected(g.node_count(), g.edges()) {
        return Err(GenError::NotConnected);
    }
    let degrees = g.degrees();
    let mut edges: Vec<(usize, usize)> = g.edges().to_vec();
    let m = edges.len();
    // Degrees never change, so S1 = Σk² and Sxx = Σk³ are fixed; only the
    // cross term Sxy moves, by a constant-time delta per swap.
    let (s1, sxx, mut sxy) = assortativity_sums(&degrees, &edges);
    let mut r = assortativity_from_sums(m, s1, sxx, sxy)?;
    let mut dist = (r - target_r).abs();
    let mut accepted = 0u64;
    let mut proposals = 0u64;
    while dist > tolerance && proposals < max_steps {
        proposals += 1;
        let e1 = rng.gen_range(0..m);
        let e2 = rng.gen_range(0..m);
        if e1 == e2 {
            continue;
        }
        let (v1, w1) = edges[e1];
        // Orientation coin: swapping which endpoint of e2 goes with v1 makes
        // the proposal distribution symmetric over both pairings.
        let (v2, w2) = if rng.gen::<bool>() { edges[e2] } else { (edges[e2].1, edges[e2].0) };
        let (k_v1, k_w1) = (degrees[v1] as i128, degrees[w1] as i128);
        let (k_v2, k_w2) = (degrees[v2] as i128, degrees[w2] as i128);
        let delta = 2 * (k_v1 * k_w2 + k_v2 * k_w1 - k_v1 * k_w1 - k_v2 * k_w2);
        let r_new = assortativity_from_sums(m, s1, sxx, sxy + delta)?;
        if (r_new - target_r).abs() >= dist {
            continue;
        }
        edges[e1] = (v1, w2);
        edges[e2] = (v2, w1);
        if keep_connected && !is_connected(g.node_count(), &edges) {
            edges[e1] = (v1, w1);
            edges[e2] = (v2, w2);
            continue;
        }
        sxy += delta;
        debug_assert!((r_new - target_r).abs() < dist);
        r = r_new;
        dist = (r - target_r).abs();
        accepted += 1;
    }
    let graph = Multigraph::from_edges(g.node_count(), edges)?;
    debug_assert_eq!(graph.degrees(), degrees);
    Ok(RewireOutcome {
        graph,
        achieved_r: r,
        accepted,
        proposals,
        converged: dist <= tolerance,
    })
}

fn is_connected(node_count: usize, edges: &[(usize, usize)]) -> bool {
    if node_count <= 1 {
        return true;
    }
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); node_count];
    for &(u, v) in edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    let mut seen = vec![false; node_count];
    let mut stack = vec![0usize];
    seen[0] = true;
    let mut count = 1usize;
    while let Some(u) = stack.pop() {
        for &v in &adj[u] {
            if !seen[v] {
                seen[v] = true;
                count += 1;
                stack.push(v);
            }
        }
    }
    count == node_count
}
