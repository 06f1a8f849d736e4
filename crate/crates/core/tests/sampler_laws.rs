//! Statistical laws of the samplers, checked against independent oracles:
//! an exact dynamic program for the traversal visit law, power iteration for
//! the random-walk stationary distribution, exact rational arithmetic for
//! the Metropolis-Hastings transition matrix, and a chi-square comparison of
//! RDS(1) against RW.

// Matrix code reads most clearly with explicit row/column indices.
#![allow(clippy::needless_range_loop)]

use gslab::generate::{generate, realize_sequence};
use gslab::graph::Multigraph;
use gslab::sample::{
    mhrw, on_the_fly_sample, random_walk, rds, stationary_start, traverse_with_restarts,
    weighted_wor_sample, TraversalPolicy,
};
use gslab::seed::rng_from;
use gslab::{DegreeDistribution, DegreeSequence};
use num_rational::Ratio;
use statrs::distribution::{ChiSquared, ContinuousCDF};

/// Exact probability that the node drawn at 0-based position `j` of a
/// degree-weighted without-replacement sample has degree 3, for a population
/// of `n1` degree-1 nodes and `n3` degree-3 nodes. Dynamic program over the
/// number of degree-3 nodes already drawn — independent of the sampler code.
fn exact_three_prob(n1: usize, n3: usize, j: usize) -> f64 {
    assert!(j < n1 + n3);
    let mut prob = vec![1.0f64];
    for m in 0..j {
        let mut next = vec![0.0; m + 2];
        for (a, &p) in prob.iter().enumerate() {
            if p == 0.0 {
                continue;
            }
            let threes_left = (n3 - a) as f64;
            let ones_left = (n1 - (m - a)) as f64;
            let p3 = 3.0 * threes_left / (3.0 * threes_left + ones_left);
            next[a + 1] += p * p3;
            next[a] += p * (1.0 - p3);
        }
        prob = next;
    }
    prob.iter()
        .enumerate()
        .map(|(a, &p)| {
            let threes_left = (n3 - a) as f64;
            let ones_left = (n1 - (j - a)) as f64;
            p * 3.0 * threes_left / (3.0 * threes_left + ones_left)
        })
        .sum()
}

const POLICY_RUNS: usize = 4_000;
const FIXTURE_N: usize = 30; // realizes 15 degree-1 and 15 degree-3 nodes

fn degree_at_position_frequency<F>(mut one_run: F, position: usize) -> f64
where
    F: FnMut() -> Vec<usize>,
{
    let mut hits = 0usize;
    for _ in 0..POLICY_RUNS {
        let degrees = one_run();
        assert!(degrees.len() > position);
        if degrees[position] == 3 {
            hits += 1;
        }
    }
    hits as f64 / POLICY_RUNS as f64
}

/// Every traversal policy, the on-the-fly construction, and the weighted
/// without-replacement oracle share one visit law on configuration-model
/// graphs. Each is compared to the exact DP probability at several
/// positions.
#[test]
fn traversal_policies_share_the_wor_law() {
    let dist: DegreeDistribution<f64> = gslab::preset::two_point();
    let positions = [0usize, 2, 7];

    let policies = [
        ("BFS", Some(TraversalPolicy::Bfs)),
        ("DFS", Some(TraversalPolicy::Dfs)),
        ("FF(0.5)", Some(TraversalPolicy::ForestFire(0.5))),
        ("SBS(2)", Some(TraversalPolicy::Snowball(2))),
        ("on-the-fly", None),
    ];

    for (name, policy) in policies {
        let mut rng = rng_from(0xBEEF ^ name.len() as u64);
        for &pos in &positions {
            let freq = degree_at_position_frequency(
                || match policy {
                    Some(policy) => {
                        let (seq, _) = realize_sequence(&dist, FIXTURE_N, &mut rng).unwrap();
                        let g = generate(&seq, &mut rng).unwrap();
                        let start = stationary_start(&g, &mut rng).unwrap();
                        traverse_with_restarts(&g, policy, start, 1.0, &mut rng)
                            .unwrap()
                            .degrees()
                    }
                    None => on_the_fly_sample(&dist, FIXTURE_N, 1.0, &mut rng).unwrap().degrees(),
                },
                pos,
            );
            let p = exact_three_prob(15, 15, pos);
            let sigma = (p * (1.0 - p) / POLICY_RUNS as f64).sqrt();
            assert!(
                (freq - p).abs() <= 4.0 * sigma,
                "{name} at position {pos}: frequency {freq:.4} vs exact {p:.4} (4 sigma = {:.4})",
                4.0 * sigma
            );
        }
    }

    // The WOR sampler itself against the same oracle.
    let (seq, _) = realize_sequence(&dist, FIXTURE_N, &mut rng_from(9)).unwrap();
    let degrees = DegreeSequence::new(seq.degrees().to_vec());
    let mut rng = rng_from(0xABCD);
    for &pos in &positions {
        let freq = degree_at_position_frequency(
            || weighted_wor_sample(&degrees, FIXTURE_N, &mut rng).unwrap().degrees(),
            pos,
        );
        let p = exact_three_prob(15, 15, pos);
        let sigma = (p * (1.0 - p) / POLICY_RUNS as f64).sqrt();
        assert!(
            (freq - p).abs() <= 4.0 * sigma,
            "WOR at position {pos}: frequency {freq:.4} vs exact {p:.4}"
        );
    }
}

/// The expected degree at visit position is non-increasing: early visits are
/// biased toward high degrees, late visits toward low ones.
#[test]
fn mean_degree_decreases_along_the_visit_order() {
    let dist: DegreeDistribution<f64> = gslab::preset::two_point();
    let mut rng = rng_from(77);
    let mut first = 0.0f64;
    let mut last = 0.0f64;
    for _ in 0..POLICY_RUNS {
        let degrees = on_the_fly_sample(&dist, FIXTURE_N, 1.0, &mut rng).unwrap().degrees();
        first += degrees[0] as f64;
        last += *degrees.last().unwrap() as f64;
    }
    first /= POLICY_RUNS as f64;
    last /= POLICY_RUNS as f64;
    assert!(
        first - last > 0.5,
        "first-position mean {first:.3} should clearly exceed last-position mean {last:.3}"
    );
    // The first position has the exact f -> 0 law k p_k / <k>: mean 2.5.
    assert!((first - 2.5).abs() < 0.05, "first-position mean {first:.3}");
}

fn walk_fixture() -> Multigraph {
    // Odd cycle (aperiodic), a parallel pair, and a pendant path.
    Multigraph::from_edges(
        5,
        vec![(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (3, 4)],
    )
    .unwrap()
}

/// Power iteration of the exact transition matrix — an oracle for the
/// random-walk stationary law that never touches the sampler code.
fn power_iteration_stationary(g: &Multigraph) -> Vec<f64> {
    let n = g.node_count();
    let mut p = vec![vec![0.0f64; n]; n];
    for u in 0..n {
        let k = g.adjacency(u).len() as f64;
        for h in g.adjacency(u) {
            p[u][h.neighbor] += 1.0 / k;
        }
    }
    let mut pi = vec![1.0 / n as f64; n];
    for _ in 0..500 {
        let mut next = vec![0.0; n];
        for u in 0..n {
            for v in 0..n {
                next[v] += pi[u] * p[u][v];
            }
        }
        pi = next;
    }
    pi
}

#[test]
fn random_walk_matches_power_iteration() {
    let g = walk_fixture();
    let pi = power_iteration_stationary(&g);
    // Sanity: the oracle itself should match the closed form k_v / 2|E|.
    let degrees = g.degrees();
    let two_m: f64 = degrees.iter().map(|&k| k as f64).sum();
    for (v, &k) in degrees.iter().enumerate() {
        assert!((pi[v] - k as f64 / two_m).abs() < 1e-12);
    }

    let steps = 200_000;
    let seq = random_walk(&g, 0, steps, 1_000, &mut rng_from(4242)).unwrap();
    let mut counts = vec![0usize; g.node_count()];
    for &(v, _) in seq.visits() {
        counts[v] += 1;
    }
    let total = seq.len() as f64;
    let l1: f64 = counts
        .iter()
        .enumerate()
        .map(|(v, &c)| (c as f64 / total - pi[v]).abs())
        .sum();
    assert!(l1 <= 0.02, "L1 distance to stationary oracle {l1:.4}");
}

/// The Metropolis-Hastings transition matrix in exact rational arithmetic:
/// rows sum to one, the matrix is symmetric off the diagonal (detailed
/// balance with the uniform target), and therefore doubly stochastic.
#[test]
fn mhrw_transition_matrix_is_exactly_doubly_stochastic() {
    // Self-loop, parallel edges, and a leaf all at once.
    let g = Multigraph::from_edges(
        4,
        vec![(0, 1), (0, 1), (1, 2), (2, 2), (2, 3)],
    )
    .unwrap();
    let n = g.node_count();
    let degrees = g.degrees();
    let zero = Ratio::new(0i64, 1);
    let one = Ratio::new(1i64, 1);
    let mut p = vec![vec![zero; n]; n];
    for u in 0..n {
        let k_u = degrees[u] as i64;
        let mut away = zero;
        for h in g.adjacency(u) {
            let w = h.neighbor;
            if w == u {
                continue; // self-loop proposals always stay at u
            }
            let k_w = degrees[w] as i64;
            let propose = Ratio::new(1, k_u);
            let accept = if k_u >= k_w { one } else { Ratio::new(k_u, k_w) };
            p[u][w] += propose * accept;
            away += propose * accept;
        }
        p[u][u] = one - away;
    }
    for u in 0..n {
        let row_sum: Ratio<i64> = p[u].iter().sum();
        assert_eq!(row_sum, one, "row {u} must sum to 1 exactly");
        for w in 0..n {
            assert_eq!(p[u][w], p[w][u], "transition must be symmetric: {u} <-> {w}");
        }
    }
    for w in 0..n {
        let col_sum: Ratio<i64> = (0..n).map(|u| p[u][w]).sum();
        assert_eq!(col_sum, one, "column {w} must sum to 1 (uniform is stationary)");
    }
}

/// Long-run MHRW visit frequencies are uniform over the component.
#[test]
fn mhrw_empirical_frequencies_are_uniform()
{
    let g = walk_fixture();
    let steps = 200_000;
    let seq = mhrw(&g, 0, steps, 1_000, &mut rng_from(31337)).unwrap();
    let mut counts = vec![0usize; g.node_count()];
    for &(v, _) in seq.visits() {
        counts[v] += 1;
    }
    let total = seq.len() as f64;
    let uniform = 1.0 / g.node_count() as f64;
    let l1: f64 = counts.iter().map(|&c| (c as f64 / total - uniform).abs()).sum();
    assert!(l1 <= 0.02, "L1 distance to uniform {l1:.4}");
}

/// With one referral per respondent, RDS is a random walk: the node laws at
/// a fixed position are statistically indistinguishable (chi-square
/// homogeneity test on a 6-node fixture).
#[test]
fn rds_with_one_referral_matches_rw_law() {
    let g = Multigraph::from_edges(
        6,
        vec![(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0), (0, 3)],
    )
    .unwrap();
    let runs = 20_000;
    let position = 4;
    let mut rw_counts = vec![0u64; 6];
    let mut rds_counts = vec![0u64; 6];
    let mut rng_a = rng_from(2024);
    let mut rng_b = rng_from(4048);
    for _ in 0..runs {
        let w = random_walk(&g, 0, position, 0, &mut rng_a).unwrap();
        rw_counts[w.visits()[position].0] += 1;
        let r = rds(&g, 0, 1, position + 1, &mut rng_b).unwrap();
        rds_counts[r.visits()[position].0] += 1;
    }
    // Chi-square homogeneity over the 2 x 6 contingency table.
    let mut stat = 0.0f64;
    let mut df = 0usize;
    for v in 0..6 {
        let pooled = (rw_counts[v] + rds_counts[v]) as f64 / 2.0;
        if pooled == 0.0 {
            continue;
        }
        df += 1;
        stat += (rw_counts[v] as f64 - pooled).powi(2) / pooled;
        stat += (rds_counts[v] as f64 - pooled).powi(2) / pooled;
    }
    let chi = ChiSquared::new((df - 1) as f64).unwrap();
    let p_value = 1.0 - chi.cdf(stat);
    assert!(
        p_value > 0.01,
        "RDS(1) and RW laws differ: chi-square {stat:.2}, p {p_value:.4}, rw {rw_counts:?}, rds {rds_counts:?}"
    );
}
