//! Simple undirected graphs and their hop metric.
//!
//! Vertices are the indices `0..n`. File formats use 1-based ids; the
//! conversion happens in [`crate::io`].

use std::collections::hash_map::DefaultHasher;
use std::collections::VecDeque;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::OnceLock;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

pub type Vertex = usize;

/// Hop distance between two vertices.
///
/// `Finite` sorts before `Unreachable`, so `max` over a set of distances
/// yields `Unreachable` whenever any pair is disconnected.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Distance {
    Finite(u32),
    Unreachable,
}

impl Distance {
    pub fn finite(self) -> Option<u32> {
        match self {
            Distance::Finite(d) => Some(d),
            Distance::Unreachable => None,
        }
    }

    pub fn is_within(self, bound: u32) -> bool {
        matches!(self, Distance::Finite(d) if d <= bound)
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distance::Finite(d) => write!(f, "{d}"),
            Distance::Unreachable => f.write_str("unreachable"),
        }
    }
}

impl Serialize for Distance {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Distance::Finite(d) => s.serialize_u32(*d),
            Distance::Unreachable => s.serialize_str("unreachable"),
        }
    }
}

/// All-pairs hop distances.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceMatrix {
    n: usize,
    table: Vec<Option<u32>>,
}

impl DistanceMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, u: Vertex, v: Vertex) -> Distance {
        match self.table[u * self.n + v] {
            Some(d) => Distance::Finite(d),
            None => Distance::Unreachable,
        }
    }

    pub(crate) fn raw(&self, u: Vertex, v: Vertex) -> Option<u32> {
        self.table[u * self.n + v]
    }

    pub fn row(&self, u: Vertex) -> impl Iterator<Item = Distance> + '_ {
        self.table[u * self.n..(u + 1) * self.n].iter().map(|d| match d {
            Some(d) => Distance::Finite(*d),
            None => Distance::Unreachable,
        })
    }

    /// Largest pairwise distance; `Unreachable` if the graph is disconnected.
    pub fn diameter(&self) -> Distance {
        (0..self.n)
            .flat_map(|u| self.row(u))
            .max()
            .unwrap_or(Distance::Finite(0))
    }
}

/// Stable fingerprint of a graph's vertex count and edge set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GraphId(pub u64);

impl fmt::Display for GraphId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:016x}", self.0)
    }
}

#[derive(Clone, Debug)]
pub struct Graph {
    n: usize,
    edges: Vec<(Vertex, Vertex)>,
    adj: Vec<Vec<Vertex>>,
    dist: OnceLock<DistanceMatrix>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.adj == other.adj
    }
}

impl Eq for Graph {}

impl Graph {
    /// Builds a graph from an edge list, keeping the edges in the given order
    /// and orientation. Self-loops, duplicates and out-of-range ids are errors.
    pub fn new(n: usize, edges: Vec<(Vertex, Vertex)>) -> Result<Self> {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &edges {
            for w in [u, v] {
                if w >= n {
                    return Err(Error::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop at vertex {u}")));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for (v, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::InvalidGraph(format!("duplicate edge {v} {}", w[0])));
            }
        }
        Ok(Graph { n, edges, adj, dist: OnceLock::new() })
    }

    /// Like [`Graph::new`] but silently drops duplicates and normalises
    /// every edge to `(min, max)` in sorted order.
    pub fn from_edge_set(n: usize, edges: impl IntoIterator<Item = (Vertex, Vertex)>) -> Result<Self> {
        let mut list: Vec<_> = edges
            .into_iter()
            .map(|(u, v)| if u < v { (u, v) } else { (v, u) })
            .collect();
        list.sort_unstable();
        list.dedup();
        Graph::new(n, list)
    }

    pub fn edgeless(n: usize) -> Self {
        Graph::new(n, Vec::new()).expect("edgeless graph is valid")
    }

    pub fn path(n: usize) -> Self {
        Graph::new(n, (1..n).map(|i| (i - 1, i)).collect()).expect("path is valid")
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "cycle needs at least 3 vertices");
        let mut edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        edges.push((0, n - 1));
        Graph::new(n, edges).expect("cycle is valid")
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        Graph::new(n, edges).expect("complete graph is valid")
    }

    pub fn star(leaves: usize) -> Self {
        Graph::new(leaves + 1, (1..=leaves).map(|v| (0, v)).collect()).expect("star is valid")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> std::ops::Range<Vertex> {
        0..self.n
    }

    /// Edges in insertion order.
    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    /// Edges as `(min, max)` pairs in lexicographic order.
    pub fn sorted_edges(&self) -> Vec<(Vertex, Vertex)> {
        let mut out = Vec::with_capacity(self.m());
        for u in 0..self.n {
            out.extend(self.adj[u].iter().filter(|&&v| v > u).map(|&v| (u, v)));
        }
        out
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    pub fn id(&self) -> GraphId {
        let mut h = DefaultHasher::new();
        self.n.hash(&mut h);
        self.adj.hash(&mut h);
        GraphId(h.finish())
    }

    /// Single-source hop distances.
    pub fn bfs(&self, source: Vertex) -> Vec<Option<u32>> {
        let mut dist = vec![None; self.n];
        let mut queue = VecDeque::new();
        dist[source] = Some(0);
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap();
            for &w in &self.adj[u] {
                if dist[w].is_none() {
                    dist[w] = Some(du + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// All-pairs distances, computed on first use and cached.
    pub fn distances(&self) -> &DistanceMatrix {
        self.dist.get_or_init(|| all_pairs_distances(self))
    }

    pub fn dist(&self, u: Vertex, v: Vertex) -> Distance {
        self.distances().get(u, v)
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.bfs(0).iter().all(Option::is_some)
    }

    /// Connected components, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<Vertex>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            let mut comp = vec![s];
            seen[s] = true;
            let mut i = 0;
            while i < comp.len() {
                let u = comp[i];
                i += 1;
                for &w in &self.adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Whether `set` induces a connected subgraph. The empty set does not.
    pub fn induces_connected(&self, set: &[Vertex]) -> bool {
        let Some(&start) = set.first() else {
            return false;
        };
        let mut inside = vec![false; self.n];
        for &v in set {
            inside[v] = true;
        }
        let mut seen = vec![false; self.n];
        seen[start] = true;
        let mut stack = vec![start];
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &w in &self.adj[u] {
                if inside[w] && !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == set.len()
    }

    /// Subgraph induced by `set`; vertex `i` of the result is `set[i]`.
    pub fn induced(&self, set: &[Vertex]) -> Graph {
        let mut index = vec![usize::MAX; self.n];
        for (i, &v) in set.iter().enumerate() {
            index[v] = i;
        }
        let mut edges = Vec::new();
        for (i, &v) in set.iter().enumerate() {
            for &w in &self.adj[v] {
                let j = index[w];
                if j != usize::MAX && i < j {
                    edges.push((i, j));
                }
            }
        }
        Graph::new(set.len(), edges).expect("induced subgraph is simple")
    }

    pub fn complement(&self) -> Graph {
        let mut edges = Vec::new();
        for u in 0..self.n {
            for v in u + 1..self.n {
                if !self.has_edge(u, v) {
                    edges.push((u, v));
                }
            }
        }
        Graph::new(self.n, edges).expect("complement is simple")
    }

    /// Disjoint union; vertices of `other` are shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let shift = self.n;
        let mut edges = self.edges.clone();
        edges.extend(other.edges.iter().map(|&(u, v)| (u + shift, v + shift)));
        Graph::new(self.n + other.n, edges).expect("disjoint union is simple")
    }
}

pub fn all_pairs_distances(g: &Graph) -> DistanceMatrix {
    let n = g.n();
    let mut table = Vec::with_capacity(n * n);
    for s in 0..n {
        table.extend(g.bfs(s));
    }
    DistanceMatrix { n, table }
}

/// Maximum distance in `g` between two members of `set`.
pub fn weak_diameter(g: &Graph, set: &[Vertex]) -> Result<Distance> {
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    if let Some(&v) = set.iter().find(|&&v| v >= g.n()) {
        return Err(Error::VertexOutOfRange { vertex: v, n: g.n() });
    }
    let dm = g.distances();
    let mut best = Distance::Finite(0);
    for (i, &u) in set.iter().enumerate() {
        for &v in &set[i + 1..] {
            best = best.max(dm.get(u, v));
        }
    }
    Ok(best)
}

/// Graph on `restrict` (vertex `i` is `restrict[i]`) joining two vertices
/// whenever their distance in `g` is at most `d`.
pub fn power_graph(g: &Graph, d: u32, restrict: &[Vertex]) -> Graph {
    let dm = g.distances();
    let mut edges = Vec::new();
    for (i, &u) in restrict.iter().enumerate() {
        for (j, &v) in restrict.iter().enumerate().skip(i + 1) {
            if dm.get(u, v).is_within(d) {
                edges.push((i, j));
            }
        }
    }
    Graph::new(restrict.len(), edges).expect("power graph is simple")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Bipartition {
    /// Colour (0 or 1) of every vertex.
    Bipartite(Vec<u8>),
    /// Vertices of an odd cycle, in cyclic order.
    OddCycle(Vec<Vertex>),
}

impl Bipartition {
    pub fn is_bipartite(&self) -> bool {
        matches!(self, Bipartition::Bipartite(_))
    }
}

pub fn is_bipartite(g: &Graph) -> Bipartition {
    let n = g.n();
    let mut colour: Vec<Option<u8>> = vec![None; n];
    let mut parent = vec![usize::MAX; n];
    let mut depth = vec![0usize; n];
    for s in 0..n {
        if colour[s].is_some() {
            continue;
        }
        colour[s] = Some(0);
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            let cu = colour[u].unwrap();
            for &w in g.neighbors(u) {
                match colour[w] {
                    None => {
                        colour[w] = Some(1 - cu);
                        parent[w] = u;
                        depth[w] = depth[u] + 1;
                        queue.push_back(w);
                    }
                    Some(cw) if cw == cu => {
                        return Bipartition::OddCycle(odd_cycle(&parent, &depth, u, w));
                    }
                    Some(_) => {}
                }
            }
        }
    }
    Bipartition::Bipartite(colour.into_iter().map(|c| c.unwrap()).collect())
}

fn odd_cycle(parent: &[usize], depth: &[usize], mut a: Vertex, mut b: Vertex) -> Vec<Vertex> {
    let mut left = Vec::new();
    let mut right = Vec::new();
    while depth[a] > depth[b] {
        left.push(a);
        a = parent[a];
    }
    while depth[b] > depth[a] {
        right.push(b);
        b = parent[b];
    }
    while a != b {
        left.push(a);
        right.push(b);
        a = parent[a];
        b = parent[b];
    }
    left.push(a);
    left.extend(right.into_iter().rev());
    left
}
