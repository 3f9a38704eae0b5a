//! Discrete model of the factor-½ covering inequality.
//!
//! A graph with a free involution doubly covers its quotient. Every cycle of
//! the quotient lifts either to a cycle of the same length or to half of a
//! cycle of twice the length, so the quotient girth is at least half the
//! cover girth.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub weight: f64,
}

/// Weighted multigraph on `0..n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Multigraph {
    pub n: usize,
    pub edges: Vec<Edge>,
}

/// A simple weighted graph with a fixed-point-free involution acting as a
/// graph automorphism that fixes no edge.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CoveringGraphFile", into = "CoveringGraphFile")]
pub struct CoveringGraph {
    graph: Multigraph,
    involution: Vec<usize>,
}

/// On-disk form `{n, edges: [{u, v, weight}], involution}`, validated on load.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoveringGraphFile {
    pub n: usize,
    pub edges: Vec<Edge>,
    pub involution: Vec<usize>,
}

impl TryFrom<CoveringGraphFile> for CoveringGraph {
    type Error = Error;

    fn try_from(f: CoveringGraphFile) -> Result<Self> {
        CoveringGraph::new(f.n, f.edges, f.involution)
    }
}

impl From<CoveringGraph> for CoveringGraphFile {
    fn from(g: CoveringGraph) -> Self {
        Self {
            n: g.graph.n,
            edges: g.graph.edges,
            involution: g.involution,
        }
    }
}

fn key(u: usize, v: usize) -> (usize, usize) {
    (u.min(v), u.max(v))
}

impl CoveringGraph {
    pub fn new(n: usize, edges: Vec<Edge>, involution: Vec<usize>) -> Result<Self> {
        let bad = |msg: String| Err(Error::Parameter(msg));
        if involution.len() != n {
            return bad(format!("involution has {} entries for {n} vertices", involution.len()));
        }
        for (v, &s) in involution.iter().enumerate() {
            if s >= n || involution[s] != v {
                return bad(format!("vertex map is not an involution at {v}"));
            }
            if s == v {
                return bad(format!("involution fixes vertex {v}"));
            }
        }
        let mut weights = HashMap::new();
        for e in &edges {
            if e.u >= n || e.v >= n {
                return bad(format!("edge ({}, {}) leaves the vertex set", e.u, e.v));
            }
            if e.u == e.v {
                return bad(format!("self-loop at {}", e.u));
            }
            if !(e.weight > 0.0 && e.weight.is_finite()) {
                return bad(format!("edge ({}, {}) has weight {}", e.u, e.v, e.weight));
            }
            if weights.insert(key(e.u, e.v), e.weight).is_some() {
                return bad(format!("parallel edges between {} and {}", e.u, e.v));
            }
        }
        for e in &edges {
            let image = key(involution[e.u], involution[e.v]);
            if image == key(e.u, e.v) {
                return bad(format!("involution fixes edge ({}, {})", e.u, e.v));
            }
            if weights.get(&image) != Some(&e.weight) {
                return bad(format!("involution does not carry edge ({}, {}) to an edge", e.u, e.v));
            }
        }
        Ok(Self {
            graph: Multigraph { n, edges },
            involution,
        })
    }

    pub fn graph(&self) -> &Multigraph {
        &self.graph
    }

    pub fn involution(&self) -> &[usize] {
        &self.involution
    }

    /// Quotient by the involution. Vertex orbits are numbered by their
    /// smaller member; each edge orbit becomes one edge, so parallel edges
    /// appear when two cover edges join the same pair of orbits.
    pub fn quotient(&self) -> Multigraph {
        let mut index = vec![usize::MAX; self.graph.n];
        let mut m = 0;
        for v in 0..self.graph.n {
            if index[v] == usize::MAX {
                index[v] = m;
                index[self.involution[v]] = m;
                m += 1;
            }
        }
        let edges = self
            .graph
            .edges
            .iter()
            .filter(|e| {
                // keep the orbit representative with the smaller key
                key(e.u, e.v) < key(self.involution[e.u], self.involution[e.v])
            })
            .map(|e| Edge {
                u: index[e.u],
                v: index[e.v],
                weight: e.weight,
            })
            .collect();
        Multigraph { n: m, edges }
    }
}

#[derive(Clone, Copy, PartialEq)]
struct Queued(f64, usize);

impl Eq for Queued {}

impl Ord for Queued {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.total_cmp(&self.0).then_with(|| other.1.cmp(&self.1))
    }
}

impl PartialOrd for Queued {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Multigraph {
    fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.n];
        for (i, e) in self.edges.iter().enumerate() {
            adj[e.u].push((e.v, i));
            if e.u != e.v {
                adj[e.v].push((e.u, i));
            }
        }
        adj
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let adj = self.adjacency();
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &(w, _) in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    fn distance_avoiding(&self, adj: &[Vec<(usize, usize)>], from: usize, to: usize, skip: usize) -> f64 {
        let mut dist = vec![f64::INFINITY; self.n];
        let mut heap = BinaryHeap::new();
        dist[from] = 0.0;
        heap.push(Queued(0.0, from));
        while let Some(Queued(d, v)) = heap.pop() {
            if v == to {
                return d;
            }
            if d > dist[v] {
                continue;
            }
            for &(w, i) in &adj[v] {
                if i == skip {
                    continue;
                }
                let nd = d + self.edges[i].weight;
                if nd < dist[w] {
                    dist[w] = nd;
                    heap.push(Queued(nd, w));
                }
            }
        }
        f64::INFINITY
    }

    /// Length of the shortest cycle; infinite for a forest. Every cycle of
    /// a graph is noncontractible, so this is the graph's systole.
    pub fn weighted_girth(&self) -> f64 {
        let adj = self.adjacency();
        self.edges
            .iter()
            .enumerate()
            .map(|(i, e)| {
                if e.u == e.v {
                    e.weight
                } else {
                    e.weight + self.distance_avoiding(&adj, e.u, e.v, i)
                }
            })
            .fold(f64::INFINITY, f64::min)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CoveringCheck {
    pub cover_sys: f64,
    pub quotient_sys: f64,
    pub holds: bool,
}

pub fn graph_quotient_systole_check(graph: &CoveringGraph) -> Result<CoveringCheck> {
    if !graph.graph.is_connected() {
        return Err(Error::Parameter("covering graph is disconnected".into()));
    }
    let cover_sys = graph.graph.weighted_girth();
    let quotient_sys = graph.quotient().weighted_girth();
    Ok(CoveringCheck {
        cover_sys,
        quotient_sys,
        holds: quotient_sys >= cover_sys / 2.0 - 1e-12 * cover_sys.abs().min(f64::MAX),
    })
}

/// Cycle `C_n` (n even) with unit edges and the antipodal involution.
pub fn antipodal_cycle(n: usize) -> Result<CoveringGraph> {
    if n < 4 || !n.is_multiple_of(2) {
        return Err(Error::Parameter(format!("antipodal cycle needs even n ≥ 4, got {n}")));
    }
    let edges = (0..n)
        .map(|i| Edge {
            u: i,
            v: (i + 1) % n,
            weight: 1.0,
        })
        .collect();
    let involution = (0..n).map(|i| (i + n / 2) % n).collect();
    CoveringGraph::new(n, edges, involution)
}

fn random_cubic_graph<R: Rng>(m: usize, rng: &mut R) -> Vec<(usize, usize)> {
    // configuration model with rejection of loops and parallel edges
    loop {
        let mut stubs: Vec<usize> = (0..m).flat_map(|v| [v, v, v]).collect();
        stubs.shuffle(rng);
        let pairs: Vec<(usize, usize)> = stubs.chunks(2).map(|c| key(c[0], c[1])).collect();
        let mut sorted = pairs.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() == pairs.len() && pairs.iter().all(|&(u, v)| u != v) {
            return pairs;
        }
    }
}

/// Random connected 2-lift of a random simple cubic graph on `m` vertices,
/// with integer weights in `1..=max_weight`. Vertex `(v, sheet)` is
/// `2v + sheet` and the involution swaps sheets.
pub fn random_cubic_double_cover<R: Rng>(m: usize, max_weight: u32, rng: &mut R) -> Result<CoveringGraph> {
    if m < 4 || !m.is_multiple_of(2) || max_weight == 0 {
        return Err(Error::Parameter(format!(
            "cubic base graph needs an even vertex count ≥ 4 and positive weights, got m = {m}"
        )));
    }
    loop {
        let mut edges = Vec::with_capacity(6 * m / 2);
        for (u, v) in random_cubic_graph(m, rng) {
            let w = rng.gen_range(1..=max_weight) as f64;
            let cross = rng.gen_bool(0.5) as usize;
            for sheet in 0..2 {
                edges.push(Edge {
                    u: 2 * u + sheet,
                    v: 2 * v + (sheet ^ cross),
                    weight: w,
                });
            }
        }
        let involution = (0..2 * m).map(|x| x ^ 1).collect();
        let graph = CoveringGraph::new(2 * m, edges, involution)?;
        if graph.graph.is_connected() {
            return Ok(graph);
        }
    }
}
