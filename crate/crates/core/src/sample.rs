//! Exploration techniques: graph traversals (BFS, DFS, forest fire,
//! snowball), random walks (plain, Metropolis-Hastings, respondent-driven),
//! uniform node sampling, the on-the-fly stub-index construction, and the
//! weighted-without-replacement oracle.
//!
//! All traversals share one stub-level engine: a queue of discovered-but-not-
//! followed half-edges. The scheduling discipline of that queue is the only
//! thing distinguishing BFS (FIFO), DFS (LIFO), forest fire (independent
//! per-stub losses) and snowball (keep at most `n` stubs per node). An edge,
//! once followed in either direction, is never followed again.

use std::collections::VecDeque;
use std::io::Write;

use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

use crate::degree::{DegreeDistribution, DegreeSample, DistError};
use crate::float::Real;
use crate::generate::{realize_sequence, DegreeSequence, GenError};
use crate::graph::Multigraph;

#[derive(Debug, Error, PartialEq)]
pub enum SampleError {
    #[error("node id {0} out of range")]
    NodeOutOfRange(usize),
    #[error("no incident edges")]
    IsolatedStart,
    #[error("stop fraction must lie in (0, 1]")]
    BadStopFraction,
    #[error("forest fire probability must lie in (0, 1]")]
    BadFireProbability,
    #[error("snowball count must be at least 1")]
    BadSnowballCount,
    #[error("referral count must be at least 1")]
    BadReferralCount,
    #[error("walk must take at least 1 step")]
    BadSteps,
    #[error("burn-in consumed the whole walk")]
    BurnInTooLong,
    #[error("sample size must be at least 1")]
    BadSampleSize,
    #[error("cannot draw {requested} distinct positive-degree nodes, only {available} exist")]
    TooManyDraws { requested: usize, available: usize },
    #[error("empty graph")]
    EmptyGraph,
    #[error("graph has no edges")]
    NoEdges,
    #[error(transparent)]
    Gen(#[from] GenError),
}

/// Queue discipline of the traversal engine.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TraversalPolicy {
    /// Follow the oldest waiting stub (FIFO).
    Bfs,
    /// Follow the newest waiting stub (LIFO).
    Dfs,
    /// Enqueue each stub independently with this probability; revive from a
    /// random sampled node when the fire dies early.
    ForestFire(f64),
    /// Enqueue the stubs of at most `n` randomly chosen neighbors per node.
    Snowball(usize),
}

impl TraversalPolicy {
    fn validate(&self) -> Result<(), SampleError> {
        match *self {
            TraversalPolicy::ForestFire(p) if !(p > 0.0 && p <= 1.0) => {
                Err(SampleError::BadFireProbability)
            }
            TraversalPolicy::Snowball(0) => Err(SampleError::BadSnowballCount),
            _ => Ok(()),
        }
    }
}

/// An ordered record of node visits, each with the node's degree at visit
/// time.
///
/// `coverage` is the number of distinct visited nodes divided by the size of
/// the reachable set the sampler ran against (the start node's component for
/// fixed-graph samplers, all nodes for whole-graph and on-the-fly samplers).
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSequence {
    visits: Vec<(usize, usize)>,
    denominator: usize,
    revisits_allowed: bool,
}

impl SampleSequence {
    fn new(visits: Vec<(usize, usize)>, denominator: usize, revisits_allowed: bool) -> Self {
        debug_assert!(denominator > 0);
        Self { visits, denominator, revisits_allowed }
    }

    /// Assembles a sequence from raw parts (used when pooling several runs).
    pub(crate) fn from_parts(
        visits: Vec<(usize, usize)>,
        denominator: usize,
        revisits_allowed: bool,
    ) -> Self {
        Self::new(visits, denominator, revisits_allowed)
    }

    /// `(node id, degree)` per visit, in visit order.
    pub fn visits(&self) -> &[(usize, usize)] {
        &self.visits
    }

    /// Observed degrees in visit order.
    pub fn degrees(&self) -> Vec<usize> {
        self.visits.iter().map(|&(_, k)| k).collect()
    }

    pub fn len(&self) -> usize {
        self.visits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.visits.is_empty()
    }

    pub fn revisits_allowed(&self) -> bool {
        self.revisits_allowed
    }

    /// Number of distinct nodes among the visits.
    pub fn unique_count(&self) -> usize {
        if !self.revisits_allowed {
            return self.visits.len();
        }
        let mut nodes: Vec<usize> = self.visits.iter().map(|&(v, _)| v).collect();
        nodes.sort_unstable();
        nodes.dedup();
        nodes.len()
    }

    /// Size of the reachable set this sample was measured against.
    pub fn denominator(&self) -> usize {
        self.denominator
    }

    /// Fraction of the reachable set covered: `unique / denominator`.
    pub fn coverage(&self) -> f64 {
        self.unique_count() as f64 / self.denominator as f64
    }

    /// The first `count` visits as a sample of their own (same denominator).
    pub fn prefix(&self, count: usize) -> SampleSequence {
        SampleSequence::new(
            self.visits[..count.min(self.visits.len())].to_vec(),
            self.denominator,
            self.revisits_allowed,
        )
    }

    /// Converts to a degree sample carrying the coverage.
    pub fn to_degree_sample<T: Real>(&self) -> Result<DegreeSample<T>, DistError> {
        let f = crate::float::cast::<T>(self.coverage());
        DegreeSample::new(self.degrees(), Some(f))
    }

    /// Empirical degree distribution of the visits.
    pub fn empirical<T: Real>(&self) -> Result<DegreeDistribution<T>, DistError> {
        DegreeDistribution::from_degrees(&self.degrees())
    }
}

/// Writes the visit record as CSV: header `position,node_id,degree`, one row
/// per visit, positions starting at 1.
pub fn write_visits_csv<W: Write>(writer: &mut W, seq: &SampleSequence) -> std::io::Result<()> {
    writeln!(writer, "position,node_id,degree")?;
    for (i, &(v, k)) in seq.visits().iter().enumerate() {
        writeln!(writer, "{},{v},{k}", i + 1)?;
    }
    Ok(())
}

/// Fenwick tree over integer node weights; supports prefix-sum draws and
/// weight removal, which is all that degree-proportional sampling without
/// replacement needs.
pub(crate) struct Fenwick {
    tree: Vec<u64>,
    len: usize,
}

impl Fenwick {
    pub(crate) fn new(weights: &[u64]) -> Self {
        let len = weights.len();
        let mut fen = Self { tree: vec![0u64; len + 1], len };
        for (i, &w) in weights.iter().enumerate() {
            fen.add(i, w);
        }
        fen
    }

    fn add(&mut self, i: usize, w: u64) {
        let mut idx = i + 1;
        while idx <= self.len {
            self.tree[idx] += w;
            idx += idx & idx.wrapping_neg();
        }
    }

    pub(crate) fn subtract(&mut self, i: usize, w: u64) {
        let mut idx = i + 1;
        while idx <= self.len {
            self.tree[idx] -= w;
            idx += idx & idx.wrapping_neg();
        }
    }

    pub(crate) fn total(&self) -> u64 {
        self.prefix(self.len)
    }

    fn prefix(&self, count: usize) -> u64 {
        let mut idx = count;
        let mut acc = 0u64;
        while idx > 0 {
            acc += self.tree[idx];
            idx -= idx & idx.wrapping_neg();
        }
        acc
    }

    /// Current weight of element `i`.
    pub(crate) fn get(&self, i: usize) -> u64 {
        self.prefix(i + 1) - self.prefix(i)
    }

    /// Smallest `i` whose cumulative weight exceeds `r` (`r < total`).
    pub(crate) fn find(&self, mut r: u64) -> usize {
        debug_assert!(r < self.total());
        let mut pos = 0usize;
        let mut step = self.len.next_power_of_two();
        while step > 0 {
            let next = pos + step;
            if next <= self.len && self.tree[next] <= r {
                r -= self.tree[next];
                pos = next;
            }
            step >>= 1;
        }
        pos
    }
}

/// The shared stub-level engine.
struct Engine<'g> {
    g: &'g Multigraph,
    policy: TraversalPolicy,
    discovered: Vec<bool>,
    edge_done: Vec<bool>,
    /// Per node: incident adjacency entries whose edge is not yet done.
    live_stubs: Vec<usize>,
    /// Discovered nodes that still have live stubs (revival candidates).
    candidates: Vec<usize>,
    candidate_pos: Vec<usize>,
    queue: VecDeque<(usize, usize)>,
    visits: Vec<(usize, usize)>,
}

impl<'g> Engine<'g> {
    fn new(g: &'g Multigraph, policy: TraversalPolicy) -> Self {
        Self {
            g,
            policy,
            discovered: vec![false; g.node_count()],
            edge_done: vec![false; g.edge_count()],
            live_stubs: g.degrees(),
            candidates: Vec::new(),
            candidate_pos: vec![usize::MAX; g.node_count()],
            queue: VecDeque::new(),
            visits: Vec::new(),
        }
    }

    fn candidate_add(&mut self, v: usize) {
        debug_assert_eq!(self.candidate_pos[v], usize::MAX);
        self.candidate_pos[v] = self.candidates.len();
        self.candidates.push(v);
    }

    fn candidate_remove(&mut self, v: usize) {
        let pos = self.candidate_pos[v];
        if pos == usize::MAX {
            return;
        }
        let last = *self.candidates.last().expect("non-empty");
        self.candidates.swap_remove(pos);
        if last != v {
            self.candidate_pos[last] = pos;
        }
        self.candidate_pos[v] = usize::MAX;
    }

    fn mark_edge_done(&mut self, e: usize) {
        debug_assert!(!self.edge_done[e]);
        self.edge_done[e] = true;
        let (a, b) = self.g.endpoints(e);
        for v in [a, b] {
            self.live_stubs[v] -= 1;
            if self.live_stubs[v] == 0 {
                self.candidate_remove(v);
            }
        }
    }

    /// Policy-filtered enqueue of a node's stubs. At discovery every
    /// adjacency entry is considered; at revival only entries with live
    /// edges are (re-flipping coins and re-choosing, since the original
    /// choices went nowhere).
    fn enqueue_stubs<R: Rng + ?Sized>(&mut self, v: usize, revival: bool, rng: &mut R) {
        let entries: Vec<(usize, usize)> = self
            .g
            .adjacency(v)
            .iter()
            .filter(|h| !revival || !self.edge_done[h.edge])
            .map(|h| (h.edge, h.neighbor))
            .collect();
        match self.policy {
            TraversalPolicy::Bfs | TraversalPolicy::Dfs => {
                self.queue.extend(entries);
            }
            TraversalPolicy::ForestFire(p) => {
                for entry in entries {
                    if rng.gen::<f64>() < p {
                        self.queue.push_back(entry);
                    }
                }
            }
            TraversalPolicy::Snowball(n) => {
                let take = n.min(entries.len());
                for i in rand::seq::index::sample(rng, entries.len(), take).iter() {
                    self.queue.push_back(entries[i]);
                }
            }
        }
    }

    fn discover<R: Rng + ?Sized>(&mut self, v: usize, rng: &mut R) {
        debug_assert!(!self.discovered[v]);
        self.discovered[v] = true;
        self.visits.push((v, self.g.adjacency(v).len()));
        if self.live_stubs[v] > 0 {
            self.candidate_add(v);
        }
        self.enqueue_stubs(v, false, rng);
    }

    /// Runs until `target` nodes are discovered or every entered component
    /// is exhausted. Returns true when the target was reached.
    fn run<R: Rng + ?Sized>(&mut self, target: usize, rng: &mut R) -> bool {
        while self.visits.len() < target {
            let stub = match self.policy {
                TraversalPolicy::Dfs => self.queue.pop_back(),
                _ => self.queue.pop_front(),
            };
            match stub {
                Some((e, w)) => {
                    if self.edge_done[e] {
                        continue;
                    }
                    self.mark_edge_done(e);
                    if !self.discovered[w] {
                        self.discover(w, rng);
                    }
                }
                None => {
                    // The fire died (or the snowball melted) with the stop
                    // target still ahead: revive from a random sampled node
                    // that still has unexplored edges.
                    let Some(&v) = self.candidates.choose(rng) else {
                        return false;
                    };
                    self.enqueue_stubs(v, true, rng);
                }
            }
        }
        true
    }
}

/// Stub-level traversal of the component containing `start`.
///
/// The visit sequence begins with `start`, contains each node at most once,
/// and stops as soon as `ceil(stop_fraction · |component|)` distinct nodes
/// have been seen. Forest fire and snowball, whose stub losses can strand
/// the frontier early, revive from a random already-sampled node with
/// unexplored edges; BFS and DFS never need to.
pub fn traverse<R: Rng + ?Sized>(
    g: &Multigraph,
    policy: TraversalPolicy,
    start: usize,
    stop_fraction: f64,
    rng: &mut R,
) -> Result<SampleSequence, SampleError> {
    policy.validate()?;
    if start >= g.node_count() {
        return Err(SampleError::NodeOutOfRange(start));
    }
    if !(stop_fraction > 0.0 && stop_fraction <= 1.0) {
        return Err(SampleError::BadStopFraction);
    }
    let component_size = g.component_of(start).expect("checked").len();
    let target = (stop_fraction * component_size as f64).ceil() as usize;
    let target = target.clamp(1, component_size);
    let mut engine = Engine::new(g, policy);
    engine.discover(start, rng);
    let reached = engine.run(target, rng);
    debug_assert!(reached, "a component traversal cannot strand below its own size");
    Ok(SampleSequence::new(engine.visits, component_size, false))
}

/// Whole-graph traversal: like [`traverse`], but when the current component
/// is exhausted the exploration restarts from a fresh node chosen among the
/// unvisited ones with probability proportional to degree — the exact law of
/// continuing the stub-index scan into the remaining components. Coverage is
/// measured against all nodes; isolated nodes are unreachable, so the
/// traversal returns early (with coverage below target) if only they remain.
pub fn traverse_with_restarts<R: Rng + ?Sized>(
    g: &Multigraph,
    policy: TraversalPolicy,
    start: usize,
    stop_fraction: f64,
    rng: &mut R,
) -> Result<SampleSequence, SampleError> {
    if !(stop_fraction > 0.0 && stop_fraction <= 1.0) {
        return Err(SampleError::BadStopFraction);
    }
    // Coverage counts reachable nodes: restarts reach exactly the
    // positive-degree nodes, so a full-coverage request is always honored
    // even when the graph has isolated nodes.
    let reachable = g.degrees().iter().filter(|&&k| k > 0).count();
    let target = ((stop_fraction * reachable as f64).ceil() as usize).clamp(1, reachable.max(1));
    traverse_with_restarts_count(g, policy, start, target, rng)
}

/// [`traverse_with_restarts`] with the stop target given as an exact number
/// of distinct nodes rather than a fraction.
pub fn traverse_with_restarts_count<R: Rng + ?Sized>(
    g: &Multigraph,
    policy: TraversalPolicy,
    start: usize,
    target: usize,
    rng: &mut R,
) -> Result<SampleSequence, SampleError> {
    policy.validate()?;
    if start >= g.node_count() {
        return Err(SampleError::NodeOutOfRange(start));
    }
    if g.adjacency(start).is_empty() {
        return Err(SampleError::IsolatedStart);
    }
    if target == 0 {
        return Err(SampleError::BadSampleSize);
    }
    let reachable = g.degrees().iter().filter(|&&k| k > 0).count();
    let target = target.min(reachable);
    let weights: Vec<u64> = g.degrees().iter().map(|&k| k as u64).collect();
    let mut remaining = Fenwick::new(&weights);
    let mut engine = Engine::new(g, policy);
    let mut current = start;
    loop {
        remaining.subtract(current, remaining.get(current));
        engine.discover(current, rng);
        // Zero out everything the component run discovers as it goes.
        let before = engine.visits.len();
        let reached = engine.run(target, rng);
        for &(v, _) in &engine.visits[before..] {
            remaining.subtract(v, remaining.get(v));
        }
        if reached || remaining.total() == 0 {
            break;
        }
        let r = rng.gen_range(0..remaining.total());
        current = remaining.find(r);
    }
    Ok(SampleSequence::new(engine.visits, reachable, false))
}

/// Simulates a traversal of a configuration-model graph over `dist` without
/// materializing the graph: realizes a degree sequence, lines its stubs up
/// in a uniformly random order, and emits each node the first time one of
/// its stubs comes up, until `ceil(stop_fraction · n)` distinct nodes have
/// appeared. Every traversal policy produces this same visit law, so there
/// is no policy parameter.
pub fn on_the_fly_sample<T: Real, R: Rng + ?Sized>(
    dist: &DegreeDistribution<T>,
    n: usize,
    stop_fraction: f64,
    rng: &mut R,
) -> Result<SampleSequence, SampleError> {
    if !(stop_fraction > 0.0 && stop_fraction <= 1.0) {
        return Err(SampleError::BadStopFraction);
    }
    let (seq, _) = realize_sequence(dist, n, rng)?;
    if seq.stub_sum() == 0 {
        return Err(SampleError::Gen(GenError::NoStubs));
    }
    let degrees = seq.degrees();
    let mut stubs: Vec<usize> = Vec::with_capacity(seq.stub_sum());
    for (v, &k) in degrees.iter().enumerate() {
        stubs.extend(std::iter::repeat_n(v, k));
    }
    stubs.shuffle(rng);
    // Isolated nodes never appear in the stub scan; coverage counts the
    // reachable (positive-degree) nodes only.
    let reachable = degrees.iter().filter(|&&k| k > 0).count();
    let target = ((stop_fraction * reachable as f64).ceil() as usize).clamp(1, reachable);
    let mut seen = vec![false; n];
    let mut visits: Vec<(usize, usize)> = Vec::with_capacity(target);
    for v in stubs {
        if seen[v] {
            continue;
        }
        seen[v] = true;
        visits.push((v, degrees[v]));
        if visits.len() >= target {
            break;
        }
    }
    Ok(SampleSequence::new(visits, reachable, false))
}

/// Draws `m` distinct nodes, each draw proportional to degree among the
/// nodes not yet drawn — the exact node-sequence law shared by all
/// traversals on a configuration-model graph.
pub fn weighted_wor_sample<R: Rng + ?Sized>(
    degrees: &DegreeSequence,
    m: usize,
    rng: &mut R,
) -> Result<SampleSequence, SampleError> {
    if m == 0 {
        return Err(SampleError::BadSampleSize);
    }
    let ks = degrees.degrees();
    let available = ks.iter().filter(|&&k| k > 0).count();
    if m > available {
        return Err(SampleError::TooManyDraws { requested: m, available });
    }
    let weights: Vec<u64> = ks.iter().map(|&k| k as u64).collect();
    let mut fen = Fenwick::new(&weights);
    let mut visits = Vec::with_capacity(m);
    for _ in 0..m {
        let r = rng.gen_range(0..fen.total());
        let v = fen.find(r);
        fen.subtract(v, fen.get(v));
        visits.push((v, ks[v]));
    }
    Ok(SampleSequence::new(visits, available, false))
}

/// A degree-proportional random node — the law of the first node discovered
/// by the stub-index scan, and the natural start for traversals that should
/// match the analytic bias curve exactly.
pub fn stationary_start<R: Rng + ?Sized>(
    g: &Multigraph,
    rng: &mut R,
) -> Result<usize, SampleError> {
    let degrees = g.degrees();
    let total: u64 = degrees.iter().map(|&k| k as u64).sum();
    if total == 0 {
        return Err(SampleError::NoEdges);
    }
    let mut r = rng.gen_range(0..total);
    for (v, &k) in degrees.iter().enumerate() {
        let k = k as u64;
        if r < k {
            return Ok(v);
        }
        r -= k;
    }
    unreachable!("r < total")
}

/// A uniformly random node of the largest connected component — the default
/// start for walks, which are confined to one component anyway.
pub fn uniform_gc_start<R: Rng + ?Sized>(
    g: &Multigraph,
    rng: &mut R,
) -> Result<usize, SampleError> {
    let gc = g.largest_component();
    if gc.is_empty() {
        return Err(SampleError::EmptyGraph);
    }
    Ok(gc[rng.gen_range(0..gc.len())])
}

fn check_walk_start(g: &Multigraph, start: usize) -> Result<(), SampleError> {
    if start >= g.node_count() {
        return Err(SampleError::NodeOutOfRange(start));
    }
    if g.adjacency(start).is_empty() {
        return Err(SampleError::IsolatedStart);
    }
    Ok(())
}

fn walk_denominator(g: &Multigraph, start: usize) -> usize {
    g.component_of(start).expect("checked").len()
}

fn apply_burn_in(
    mut visits: Vec<(usize, usize)>,
    burn_in: usize,
) -> Result<Vec<(usize, usize)>, SampleError> {
    if burn_in >= visits.len() {
        return Err(SampleError::BurnInTooLong);
    }
    visits.drain(..burn_in);
    Ok(visits)
}

/// Simple random walk: from `u`, move along a uniformly chosen incident
/// half-edge. Records `steps + 1` visits (including the start), then drops
/// the first `burn_in` of them.
pub fn random_walk<R: Rng + ?Sized>(
    g: &Multigraph,
    start: usize,
    steps: usize,
    burn_in: usize,
    rng: &mut R,
) -> Result<SampleSequence, SampleError> {
    check_walk_start(g, start)?;
    if steps == 0 {
        return Err(SampleError::BadSteps);
    }
    let mut visits = Vec::with_capacity(steps + 1);
    let mut u = start;
    visits.push((u, g.adjacency(u).len()));
    for _ in 0..steps {
        let adj = g.adjacency(u);
        u = adj[rng.gen_range(0..adj.len())].neighbor;
        visits.push((u, g.adjacency(u).len()));
    }
    let visits = apply_burn_in(visits, burn_in)?;
    Ok(SampleSequence::new(visits, walk_denominator(g, start), true))
}

/// Metropolis-Hastings random walk: propose a uniform neighbor `w` of `u`,
/// accept with probability `min(1, k_u/k_w)`, otherwise stay at `u` and
/// record it again. The acceptance rule makes the stationary distribution
/// uniform over the component, so the walk observes the true degree
/// distribution. Records `steps + 1` visits minus burn-in, like
/// [`random_walk`].
pub fn mhrw<R: Rng + ?Sized>(
    g: &Multigraph,
    start: usize,
    steps: usize,
    burn_in: usize,
    rng: &mut R,
) -> Result<SampleSequence, SampleError> {
    check_walk_start(g, start)?;
    if steps == 0 {
        return Err(SampleError::BadSteps);
    }
    let mut visits = Vec::with_capacity(steps + 1);
    let mut u = start;
    let mut k_u = g.adjacency(u).len();
    visits.push((u, k_u));
    for _ in 0..steps {
        let adj = g.adjacency(u);
        let w = adj[rng.gen_range(0..adj.len())].neighbor;
        let k_w = g.adjacency(w).len();
        // min(1, k_u/k_w): only draw the coin when the ratio is below 1.
        let accept = k_u >= k_w || rng.gen::<f64>() < k_u as f64 / k_w as f64;
        if accept {
            u = w;
            k_u = k_w;
        }
        visits.push((u, k_u));
    }
    let visits = apply_burn_in(visits, burn_in)?;
    Ok(SampleSequence::new(visits, walk_denominator(g, start), true))
}

/// Respondent-driven sampling: a FIFO queue of scheduled respondents. Each
/// visited node refers `min(n, k_u)` of its neighbors, chosen uniformly
/// without replacement among its adjacency entries. Visits are recorded in
/// queue order until exactly `steps` of them have happened. With `n = 1`
/// the visit law is exactly that of [`random_walk`].
pub fn rds<R: Rng + ?Sized>(
    g: &Multigraph,
    start: usize,
    n: usize,
    steps: usize,
    rng: &mut R,
) -> Result<SampleSequence, SampleError> {
    check_walk_start(g, start)?;
    if n == 0 {
        return Err(SampleError::BadReferralCount);
    }
    if steps == 0 {
        return Err(SampleError::BadSteps);
    }
    let mut queue: VecDeque<usize> = VecDeque::new();
    queue.push_back(start);
    let mut visits = Vec::with_capacity(steps);
    while visits.len() < steps {
        let u = queue.pop_front().expect("every visited node enqueues at least one referral");
        let adj = g.adjacency(u);
        visits.push((u, adj.len()));
        if visits.len() == steps {
            break;
        }
        let take = n.min(adj.len());
        for i in rand::seq::index::sample(rng, adj.len(), take).iter() {
            queue.push_back(adj[i].neighbor);
        }
    }
    Ok(SampleSequence::new(visits, walk_denominator(g, start), true))
}

/// `m` independent uniform node draws, with replacement — the unbiased
/// ground-truth sampler.
pub fn uniform_sample<R: Rng + ?Sized>(
    g: &Multigraph,
    m: usize,
    rng: &mut R,
) -> Result<SampleSequence, SampleError> {
    if g.node_count() == 0 {
        return Err(SampleError::EmptyGraph);
    }
    if m == 0 {
        return Err(SampleError::BadSampleSize);
    }
    let mut visits = Vec::with_capacity(m);
    for _ in 0..m {
        let v = rng.gen_range(0..g.node_count());
        visits.push((v, g.adjacency(v).len()));
    }
    Ok(SampleSequence::new(visits, g.node_count(), true))
}
