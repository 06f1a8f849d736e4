//! Undirected multigraph storage with self-loops, degree queries,
//! connectivity, assortativity measurement and edge-list I/O.
//!
//! The adjacency of a node is an *ordered* list of half-edges; that order is
//! part of the observable behaviour because traversal tie-breaking depends on
//! it. Graphs are immutable after construction — the rewiring machinery in
//! the generator module builds a fresh graph from a mutated edge list.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use thiserror::Error;

/// Errors from graph construction, measurement and file I/O.
#[derive(Debug, Error, PartialEq)]
pub enum GraphError {
    #[error("node id {0} out of range")]
    NodeOutOfRange(usize),
    #[error("assortativity undefined")]
    AssortativityUndefined,
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for GraphError {
    fn from(e: std::io::Error) -> Self {
        GraphError::Io(e.to_string())
    }
}

/// One end of an edge, as stored in a node's adjacency list.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HalfEdge {
    /// Node at the other end of the edge.
    pub neighbor: usize,
    /// Identifier of the edge this half-edge belongs to.
    pub edge: usize,
}

/// An undirected multigraph with dense node ids `0..node_count`.
///
/// Self-loops and parallel edges are permitted. A self-loop contributes two
/// half-edges (and hence 2) to its endpoint's degree, and every edge id
/// appears on exactly two half-edges.
#[derive(Debug, Clone, PartialEq)]
pub struct Multigraph {
    adj: Vec<Vec<HalfEdge>>,
    edges: Vec<(usize, usize)>,
}

impl Multigraph {
    /// Builds a graph from an edge list; edges keep their list order as their
    /// ids, and half-edges enter the adjacency in edge order.
    pub fn from_edges(
        node_count: usize,
        edges: Vec<(usize, usize)>,
    ) -> Result<Self, GraphError> {
        let mut adj: Vec<Vec<HalfEdge>> = vec![Vec::new(); node_count];
        for (id, &(u, v)) in edges.iter().enumerate() {
            if u >= node_count {
                return Err(GraphError::NodeOutOfRange(u));
            }
            if v >= node_count {
                return Err(GraphError::NodeOutOfRange(v));
            }
            adj[u].push(HalfEdge { neighbor: v, edge: id });
            adj[v].push(HalfEdge { neighbor: u, edge: id });
        }
        Ok(Self { adj, edges })
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Endpoints of every edge, indexed by edge id.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Endpoints of edge `e`.
    pub fn endpoints(&self, e: usize) -> (usize, usize) {
        self.edges[e]
    }

    /// Number of half-edges incident to `v` (a self-loop counts 2).
    pub fn degree(&self, v: usize) -> Result<usize, GraphError> {
        self.adj
            .get(v)
            .map(Vec::len)
            .ok_or(GraphError::NodeOutOfRange(v))
    }

    /// Ordered half-edges of `v`.
    pub fn adjacency(&self, v: usize) -> &[HalfEdge] {
        &self.adj[v]
    }

    /// Degrees of all nodes, indexed by node id.
    pub fn degrees(&self) -> Vec<usize> {
        self.adj.iter().map(Vec::len).collect()
    }

    /// Pearson correlation of endpoint degrees over the directed-edge
    /// multiset: every undirected edge `{u, w}` contributes both `(u, w)` and
    /// `(w, u)`, and a self-loop contributes `(v, v)` twice. Parallel edges
    /// each count.
    pub fn assortativity(&self) -> Result<f64, GraphError> {
        if self.edges.is_empty() {
            return Err(GraphError::AssortativityUndefined);
        }
        let deg = self.degrees();
        let (s1, sxx, sxy) = assortativity_sums(&deg, &self.edges);
        assortativity_from_sums(self.edges.len(), s1, sxx, sxy)
    }

    /// All nodes reachable from `v` (including `v`), ascending.
    pub fn component_of(&self, v: usize) -> Result<Vec<usize>, GraphError> {
        if v >= self.node_count() {
            return Err(GraphError::NodeOutOfRange(v));
        }
        let mut seen = vec![false; self.node_count()];
        let mut stack = vec![v];
        seen[v] = true;
        while let Some(u) = stack.pop() {
            for h in &self.adj[u] {
                if !seen[h.neighbor] {
                    seen[h.neighbor] = true;
                    stack.push(h.neighbor);
                }
            }
        }
        Ok((0..self.node_count()).filter(|&u| seen[u]).collect())
    }

    /// The nodes of the largest connected component, ascending. Ties go to
    /// the component containing the smallest node id. Empty graphs yield an
    /// empty set.
    pub fn largest_component(&self) -> Vec<usize> {
        let mut assigned = vec![false; self.node_count()];
        let mut best: Vec<usize> = Vec::new();
        for v in 0..self.node_count() {
            if assigned[v] {
                continue;
            }
            let comp = self.component_of(v).expect("v in range");
            for &u in &comp {
                assigned[u] = true;
            }
            if comp.len() > best.len() {
                best = comp;
            }
        }
        best
    }

    /// Subgraph induced by `nodes`, relabelled to `0..nodes.len()` in
    /// ascending old-id order. Returns the subgraph together with the map
    /// from new id to old id. Edges keep their relative order.
    pub fn induced_subgraph(&self, nodes: &[usize]) -> Result<(Multigraph, Vec<usize>), GraphError> {
        let mut old_ids: Vec<usize> = nodes.to_vec();
        old_ids.sort_unstable();
        old_ids.dedup();
        if let Some(&v) = old_ids.iter().find(|&&v| v >= self.node_count()) {
            return Err(GraphError::NodeOutOfRange(v));
        }
        let mut new_id = vec![usize::MAX; self.node_count()];
        for (i, &v) in old_ids.iter().enumerate() {
            new_id[v] = i;
        }
        let edges: Vec<(usize, usize)> = self
            .edges
            .iter()
            .filter(|&&(u, v)| new_id[u] != usize::MAX && new_id[v] != usize::MAX)
            .map(|&(u, v)| (new_id[u], new_id[v]))
            .collect();
        let g = Multigraph::from_edges(old_ids.len(), edges)?;
        Ok((g, old_ids))
    }

    /// Reads a graph from `path`; see [`read_edge_list`] for the format.
    pub fn load(path: impl AsRef<Path>) -> Result<Self, GraphError> {
        read_edge_list(BufReader::new(File::open(path)?))
    }

    /// Writes the graph to `path`; see [`write_edge_list`] for the format.
    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), GraphError> {
        let mut w = BufWriter::new(File::create(path)?);
        write_edge_list(&mut w, self)
    }
}

/// The three Pearson sums over the directed-edge multiset, as exact integers:
/// `S1 = Σ k_src`, `Sxx = Σ k_src²`, `Sxy = Σ k_src·k_dst`. The first two
/// depend only on the degree sequence (`Σ k_v²` and `Σ k_v³`), which is what
/// makes incremental rewiring updates cheap.
pub(crate) fn assortativity_sums(
    degrees: &[usize],
    edges: &[(usize, usize)],
) -> (i128, i128, i128) {
    let mut s1: i128 = 0;
    let mut sxx: i128 = 0;
    for &k in degrees {
        let k = k as i128;
        s1 += k * k;
        sxx += k * k * k;
    }
    let mut sxy: i128 = 0;
    for &(u, v) in edges {
        sxy += 2 * (degrees[u] as i128) * (degrees[v] as i128);
    }
    (s1, sxx, sxy)
}

/// Assortativity from the integer sums; `m` is the undirected edge count.
pub(crate) fn assortativity_from_sums(
    m: usize,
    s1: i128,
    sxx: i128,
    sxy: i128,
) -> Result<f64, GraphError> {
    let n = 2 * m as i128;
    let den = n * sxx - s1 * s1;
    if den == 0 {
        return Err(GraphError::AssortativityUndefined);
    }
    Ok((n * sxy - s1 * s1) as f64 / den as f64)
}

/// Parses an edge list: one edge per line as two whitespace-separated
/// non-negative integers; `#` starts a comment line; blank lines are
/// skipped. An optional `#nodes N` header declares the node count (needed
/// for trailing isolated nodes); otherwise it is the maximum id plus one.
/// Repeated lines create parallel edges and `u u` creates a self-loop.
pub fn read_edge_list<R: BufRead>(reader: R) -> Result<Multigraph, GraphError> {
    let mut declared: Option<usize> = None;
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut max_id: Option<usize> = None;
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = i + 1;
        let text = line.trim();
        if text.is_empty() {
            continue;
        }
        if let Some(rest) = text.strip_prefix('#') {
            let mut fields = rest.split_whitespace();
            if fields.next() == Some("nodes") {
                let tok = fields.next().ok_or_else(|| GraphError::Parse {
                    line: lineno,
                    msg: "expected \"#nodes N\"".into(),
                })?;
                let n: usize = tok.parse().map_err(|_| GraphError::Parse {
                    line: lineno,
                    msg: format!("invalid node count {tok:?}"),
                })?;
                declared = Some(n);
            }
            continue;
        }
        let mut fields = text.split_whitespace();
        let (u_tok, v_tok) = match (fields.next(), fields.next(), fields.next()) {
            (Some(u), Some(v), None) => (u, v),
            _ => {
                return Err(GraphError::Parse {
                    line: lineno,
                    msg: format!("expected \"u v\", got {text:?}"),
                })
            }
        };
        let parse_id = |tok: &str| -> Result<usize, GraphError> {
            tok.parse().map_err(|_| GraphError::Parse {
                line: lineno,
                msg: format!("invalid node id {tok:?}"),
            })
        };
        let u = parse_id(u_tok)?;
        let v = parse_id(v_tok)?;
        max_id = Some(max_id.map_or(u.max(v), |m| m.max(u).max(v)));
        edges.push((u, v));
    }
    let implied = max_id.map_or(0, |m| m + 1);
    let node_count = match declared {
        Some(n) if n < implied => {
            return Err(GraphError::Parse {
                line: 0,
                msg: format!("declared node count {n} smaller than max id {}", implied - 1),
            })
        }
        Some(n) => n,
        None => implied,
    };
    Multigraph::from_edges(node_count, edges)
}

/// Writes the `#nodes N` header followed by one `u v` line per edge in edge
/// id order. Loading the output reproduces the graph exactly, including
/// adjacency order.
pub fn write_edge_list<W: Write>(writer: &mut W, g: &Multigraph) -> Result<(), GraphError> {
    writeln!(writer, "#nodes {}", g.node_count())?;
    for &(u, v) in g.edges() {
        writeln!(writer, "{u} {v}")?;
    }
    Ok(())
}
