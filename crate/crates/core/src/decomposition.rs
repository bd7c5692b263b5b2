//! Tree- and path-decompositions, their validation, per-bag metrics and the
//! (k,d)-centred check.

use std::collections::VecDeque;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::error::{Error, Result};
use crate::exact;
use crate::graph::{power_graph, weak_diameter, Distance, Graph, Vertex};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Shape {
    Tree,
    Path,
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Shape::Tree => "tree",
            Shape::Path => "path",
        })
    }
}

/// First violated decomposition condition. Vertex ids are printed 1-based.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Violation {
    #[error("bag {bag} contains vertex {} outside the graph", .vertex + 1)]
    VertexOutOfRange { bag: usize, vertex: Vertex },
    #[error("edge {}-{} is not covered by any bag", .u + 1, .v + 1)]
    EdgeUncovered { u: Vertex, v: Vertex },
    #[error("vertex {} is in no bag", .vertex + 1)]
    VertexMissing { vertex: Vertex },
    #[error("bags containing vertex {} do not induce a connected subtree", .vertex + 1)]
    TraceDisconnected { vertex: Vertex },
}

/// A tree (or path) together with a bag of host vertices at every node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeDecomposition {
    bags: Vec<Vec<Vertex>>,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
    shape: Shape,
}

impl TreeDecomposition {
    /// Checks that `edges` form a tree on `0..bags.len()` (a path when
    /// `shape` is [`Shape::Path`]). Bags are sorted; a repeated vertex inside
    /// one bag is rejected.
    pub fn new(mut bags: Vec<Vec<Vertex>>, edges: Vec<(usize, usize)>, shape: Shape) -> Result<Self> {
        let nodes = bags.len();
        if nodes == 0 {
            return Err(Error::MalformedDecomposition("no nodes".into()));
        }
        for (t, bag) in bags.iter_mut().enumerate() {
            bag.sort_unstable();
            if bag.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::MalformedDecomposition(format!("bag {t} repeats a vertex")));
            }
        }
        let adj = tree_adjacency(nodes, &edges).map_err(Error::MalformedDecomposition)?;
        if shape == Shape::Path && adj.iter().any(|a| a.len() > 2) {
            return Err(Error::MalformedDecomposition("path shape requires maximum degree 2".into()));
        }
        Ok(TreeDecomposition { bags, edges, adj, shape })
    }

    /// Single-bag decomposition.
    pub fn trivial(bag: Vec<Vertex>, shape: Shape) -> Self {
        TreeDecomposition::new(vec![bag], Vec::new(), shape).expect("a single node is a tree")
    }

    /// Path decomposition with the bags in sequence.
    pub fn path(bags: Vec<Vec<Vertex>>) -> Result<Self> {
        let edges = (1..bags.len()).map(|i| (i - 1, i)).collect();
        TreeDecomposition::new(bags, edges, Shape::Path)
    }

    pub fn node_count(&self) -> usize {
        self.bags.len()
    }

    pub fn bags(&self) -> &[Vec<Vertex>] {
        &self.bags
    }

    pub fn bag(&self, t: usize) -> &[Vertex] {
        &self.bags[t]
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, t: usize) -> &[usize] {
        &self.adj[t]
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    /// Reinterprets the decomposition with another shape flag.
    pub fn with_shape(self, shape: Shape) -> Result<Self> {
        TreeDecomposition::new(self.bags, self.edges, shape)
    }

    /// `max |bag| - 1`, saturating at zero when every bag is empty.
    pub fn width(&self) -> usize {
        self.max_bag_size().saturating_sub(1)
    }

    pub fn max_bag_size(&self) -> usize {
        self.bags.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Same tree, new bags.
    pub fn with_bags(&self, bags: Vec<Vec<Vertex>>) -> Result<Self> {
        if bags.len() != self.bags.len() {
            return Err(Error::MalformedDecomposition("bag count does not match the tree".into()));
        }
        TreeDecomposition::new(bags, self.edges.clone(), self.shape)
    }

    /// Nodes of a path-shaped tree from one end to the other.
    pub fn path_order(&self) -> Option<Vec<usize>> {
        if self.adj.iter().any(|a| a.len() > 2) {
            return None;
        }
        let start = (0..self.node_count()).find(|&t| self.adj[t].len() <= 1)?;
        let mut order = vec![start];
        let mut prev = usize::MAX;
        let mut cur = start;
        while let Some(&next) = self.adj[cur].iter().find(|&&x| x != prev) {
            order.push(next);
            prev = cur;
            cur = next;
        }
        Some(order)
    }

    /// For every host vertex, the sorted list of nodes whose bag holds it.
    pub fn traces(&self, n: usize) -> Vec<Vec<usize>> {
        let mut traces = vec![Vec::new(); n];
        for (t, bag) in self.bags.iter().enumerate() {
            for &v in bag {
                if v < n {
                    traces[v].push(t);
                }
            }
        }
        traces
    }

    /// Checks the three decomposition conditions in order and reports the
    /// first failure.
    pub fn validate(&self, g: &Graph) -> std::result::Result<(), Violation> {
        let n = g.n();
        for (bag, vs) in self.bags.iter().enumerate() {
            if let Some(&vertex) = vs.iter().find(|&&v| v >= n) {
                return Err(Violation::VertexOutOfRange { bag, vertex });
            }
        }
        let traces = self.traces(n);
        for (u, v) in g.sorted_edges() {
            if !sorted_intersect(&traces[u], &traces[v]) {
                return Err(Violation::EdgeUncovered { u, v });
            }
        }
        let mut mark = vec![usize::MAX; self.node_count()];
        for (vertex, trace) in traces.iter().enumerate() {
            if trace.is_empty() {
                return Err(Violation::VertexMissing { vertex });
            }
            if !self.nodes_connected(trace, &mut mark, vertex) {
                return Err(Violation::TraceDisconnected { vertex });
            }
        }
        Ok(())
    }

    fn nodes_connected(&self, nodes: &[usize], mark: &mut [usize], stamp: usize) -> bool {
        for &t in nodes {
            mark[t] = stamp;
        }
        let mut seen = vec![nodes[0]];
        let mut reached = 1;
        mark[nodes[0]] = usize::MAX - 1;
        while let Some(t) = seen.pop() {
            for &x in &self.adj[t] {
                if mark[x] == stamp {
                    mark[x] = usize::MAX - 1;
                    reached += 1;
                    seen.push(x);
                }
            }
        }
        for &t in nodes {
            mark[t] = usize::MAX;
        }
        reached == nodes.len()
    }

    /// Restricts every bag to `keep` and renames vertex `keep[i]` to `i`.
    pub fn restrict(&self, keep: &[Vertex], n: usize) -> TreeDecomposition {
        let mut index = vec![usize::MAX; n];
        for (i, &v) in keep.iter().enumerate() {
            index[v] = i;
        }
        let bags = self
            .bags
            .iter()
            .map(|bag| bag.iter().filter_map(|&v| (index[v] != usize::MAX).then_some(index[v])).collect())
            .collect();
        self.with_bags(bags).expect("same tree")
    }

    /// Joins decompositions into one by adding a tree edge between
    /// consecutive parts. Vertices of part `i` are shifted by `offsets[i]`.
    /// Path shapes are chained end to end so the result stays a path.
    pub fn join(parts: &[TreeDecomposition], offsets: &[usize], shape: Shape) -> Result<Self> {
        let mut bags = Vec::new();
        let mut edges = Vec::new();
        let mut prev_tail: Option<usize> = None;
        for (td, &offset) in parts.iter().zip(offsets) {
            let base = bags.len();
            bags.extend(td.bags.iter().map(|b| b.iter().map(|&v| v + offset).collect::<Vec<_>>()));
            edges.extend(td.edges.iter().map(|&(a, b)| (a + base, b + base)));
            let (head, tail) = match shape {
                Shape::Path => {
                    let order = td.path_order().ok_or_else(|| {
                        Error::MalformedDecomposition("path join needs path-shaped parts".into())
                    })?;
                    (order[0], *order.last().unwrap())
                }
                Shape::Tree => (0, 0),
            };
            if let Some(t) = prev_tail {
                edges.push((t, head + base));
            }
            prev_tail = Some(tail + base);
        }
        TreeDecomposition::new(bags, edges, shape)
    }
}

fn sorted_intersect(a: &[usize], b: &[usize]) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return true,
        }
    }
    false
}

/// Adjacency lists for `edges` if they form a tree on `0..nodes`.
pub(crate) fn tree_adjacency(nodes: usize, edges: &[(usize, usize)]) -> std::result::Result<Vec<Vec<usize>>, String> {
    if edges.len() + 1 != nodes {
        return Err(format!("{nodes} nodes need {} tree edges, got {}", nodes.saturating_sub(1), edges.len()));
    }
    let mut adj = vec![Vec::new(); nodes];
    for &(a, b) in edges {
        if a >= nodes || b >= nodes {
            return Err(format!("tree edge {a}-{b} references a missing node"));
        }
        if a == b {
            return Err(format!("tree edge {a}-{b} is a loop"));
        }
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut seen = vec![false; nodes];
    let mut queue = VecDeque::from([0]);
    seen[0] = true;
    let mut count = 1;
    while let Some(t) = queue.pop_front() {
        for &x in &adj[t] {
            if !seen[x] {
                seen[x] = true;
                count += 1;
                queue.push_back(x);
            }
        }
    }
    if count != nodes {
        return Err("tree edges do not connect all nodes".into());
    }
    Ok(adj)
}

// ---------------------------------------------------------------------------
// Bag metrics

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BagStat {
    pub size: usize,
    pub independence: usize,
    pub domination: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BagMetrics {
    pub bags: Vec<BagStat>,
    /// Largest bag independence number.
    pub independence: usize,
    /// Largest bag domination number.
    pub domination: usize,
    pub width: usize,
}

/// Exact independence and domination numbers of every bag's induced
/// subgraph. Empty bags count as zero for both.
pub fn bag_metrics(g: &Graph, td: &TreeDecomposition, cap: usize) -> Result<BagMetrics> {
    let mut bags = Vec::with_capacity(td.node_count());
    for (t, bag) in td.bags().iter().enumerate() {
        let stat = if bag.is_empty() {
            BagStat { size: 0, independence: 0, domination: 0 }
        } else {
            let h = g.induced(bag);
            let independence = exact::exact_independence_number(&h, cap).map_err(|e| e.in_bag(t))?;
            let domination = exact::exact_domination_number(&h, cap).map_err(|e| e.in_bag(t))?;
            BagStat { size: bag.len(), independence, domination }
        };
        bags.push(stat);
    }
    Ok(BagMetrics {
        independence: bags.iter().map(|b| b.independence).max().unwrap_or(0),
        domination: bags.iter().map(|b| b.domination).max().unwrap_or(0),
        width: td.width(),
        bags,
    })
}

// ---------------------------------------------------------------------------
// Centred sets

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CentredMode {
    /// Decides exactly; errors with `TooLarge` past the cap.
    Exact,
    /// Greedy colouring; never answers "no".
    Heuristic,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Centred {
    /// Witness parts, each sorted, in colour order.
    Yes(Vec<Vec<Vertex>>),
    /// Exact mode only: the set needs `min_parts` parts.
    No { min_parts: usize },
    /// Heuristic mode found no witness with at most k parts.
    Unknown { greedy_parts: usize },
}

impl Centred {
    pub fn holds(&self) -> bool {
        matches!(self, Centred::Yes(_))
    }

    pub fn witness(&self) -> Option<&[Vec<Vertex>]> {
        match self {
            Centred::Yes(parts) => Some(parts),
            _ => None,
        }
    }
}

/// Whether `set` splits into at most `k` parts of weak diameter at most `d`.
///
/// Parts of pairwise distance at most `d` are exactly the cliques of the
/// distance-`d` power graph on `set`, so this is k-colourability of that
/// graph's complement. The witness is the lexicographically smallest
/// colouring in vertex order.
pub fn centred_check(g: &Graph, set: &[Vertex], k: usize, d: u32, mode: CentredMode, cap: usize) -> Result<Centred> {
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    let mut set = set.to_vec();
    set.sort_unstable();
    set.dedup();
    if let Some(&v) = set.iter().find(|&&v| v >= g.n()) {
        return Err(Error::VertexOutOfRange { vertex: v, n: g.n() });
    }
    if weak_diameter(g, &set)?.is_within(d) {
        return Ok(if k >= 1 { Centred::Yes(vec![set]) } else { Centred::No { min_parts: 1 } });
    }
    let conflicts = power_graph(g, d, &set).complement();
    let colouring = match mode {
        CentredMode::Exact => {
            let chi = exact::exact_chromatic_number(&conflicts, cap)?;
            if chi > k {
                return Ok(Centred::No { min_parts: chi });
            }
            exact::lex_first_colouring(&conflicts, k, cap)?.expect("k >= chromatic number")
        }
        CentredMode::Heuristic => {
            let colouring = exact::greedy_colouring(&conflicts);
            let used = colouring.iter().max().map_or(0, |&c| c + 1);
            if used > k {
                return Ok(Centred::Unknown { greedy_parts: used });
            }
            colouring
        }
    };
    Ok(Centred::Yes(classes(&set, &colouring)))
}

fn classes(set: &[Vertex], colouring: &[usize]) -> Vec<Vec<Vertex>> {
    let count = colouring.iter().max().map_or(0, |&c| c + 1);
    let mut parts = vec![Vec::new(); count];
    for (i, &c) in colouring.iter().enumerate() {
        parts[c].push(set[i]);
    }
    parts
}

/// Independent re-check of a centred witness: the parts partition `set`,
/// there are at most `k` of them and each has weak diameter at most `d`.
pub fn verify_centred_witness(g: &Graph, set: &[Vertex], parts: &[Vec<Vertex>], k: usize, d: u32) -> bool {
    if parts.len() > k || parts.iter().any(Vec::is_empty) {
        return false;
    }
    let mut all: Vec<Vertex> = parts.iter().flatten().copied().collect();
    all.sort_unstable();
    let mut want = set.to_vec();
    want.sort_unstable();
    want.dedup();
    if all != want {
        return false;
    }
    parts.iter().all(|p| weak_diameter(g, p).is_ok_and(|w| w <= Distance::Finite(d)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CentredDecomposition {
    pub bags: Vec<Centred>,
}

impl CentredDecomposition {
    pub fn holds(&self) -> bool {
        self.bags.iter().all(Centred::holds)
    }

    /// First bag that is not certified, if any.
    pub fn first_failure(&self) -> Option<usize> {
        self.bags.iter().position(|c| !c.holds())
    }

    /// Largest number of witness parts used by any bag.
    pub fn max_parts(&self) -> Option<usize> {
        self.bags.iter().map(|c| c.witness().map(<[_]>::len)).try_fold(0, |m, p| p.map(|p| m.max(p)))
    }
}

/// Applies [`centred_check`] to every bag. Empty bags are trivially centred.
pub fn centred_check_decomposition(
    g: &Graph,
    td: &TreeDecomposition,
    k: usize,
    d: u32,
    mode: CentredMode,
    cap: usize,
) -> Result<CentredDecomposition> {
    let bags = td
        .bags()
        .iter()
        .enumerate()
        .map(|(t, bag)| {
            if bag.is_empty() {
                Ok(Centred::Yes(Vec::new()))
            } else {
                centred_check(g, bag, k, d, mode, cap).map_err(|e| e.in_bag(t))
            }
        })
        .collect::<Result<_>>()?;
    Ok(CentredDecomposition { bags })
}

/// Smallest number of parts of weak diameter at most `d` that cover `set`.
pub fn min_centred_parts(g: &Graph, set: &[Vertex], d: u32, cap: usize) -> Result<usize> {
    if set.is_empty() {
        return Ok(0);
    }
    if weak_diameter(g, set)?.is_within(d) {
        return Ok(1);
    }
    exact::exact_chromatic_number(&power_graph(g, d, set).complement(), cap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{exact_treewidth, DEFAULT_CAP};

    fn p3_td() -> TreeDecomposition {
        TreeDecomposition::path(vec![vec![0, 1], vec![1, 2]]).unwrap()
    }

    #[test]
    fn validate_examples() {
        let p3 = Graph::path(3);
        assert_eq!(p3_td().validate(&p3), Ok(()));
        let tri = Graph::new(3, vec![(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(p3_td().validate(&tri), Err(Violation::EdgeUncovered { u: 0, v: 2 }));
        let gapped = TreeDecomposition::path(vec![vec![0], vec![1], vec![0]]).unwrap();
        assert_eq!(gapped.validate(&Graph::edgeless(2)), Err(Violation::TraceDisconnected { vertex: 0 }));
        let missing = TreeDecomposition::trivial(vec![0], Shape::Tree);
        assert_eq!(missing.validate(&Graph::edgeless(2)), Err(Violation::VertexMissing { vertex: 1 }));
        let outside = TreeDecomposition::trivial(vec![0, 5], Shape::Tree);
        assert_eq!(outside.validate(&Graph::edgeless(2)), Err(Violation::VertexOutOfRange { bag: 0, vertex: 5 }));
    }

    #[test]
    fn malformed_trees() {
        assert!(matches!(
            TreeDecomposition::new(vec![vec![0], vec![1]], vec![], Shape::Tree),
            Err(Error::MalformedDecomposition(_))
        ));
        assert!(TreeDecomposition::new(vec![vec![0], vec![1]], vec![(0, 2)], Shape::Tree).is_err());
        assert!(TreeDecomposition::new(vec![vec![0]; 3], vec![(0, 1), (1, 0)], Shape::Tree).is_err());
        let star = vec![(0, 1), (0, 2), (0, 3)];
        assert!(TreeDecomposition::new(vec![vec![0]; 4], star.clone(), Shape::Tree).is_ok());
        assert!(TreeDecomposition::new(vec![vec![0]; 4], star, Shape::Path).is_err());
    }

    #[test]
    fn width_examples() {
        let singletons = TreeDecomposition::path(vec![vec![0], vec![1], vec![2]]).unwrap();
        assert_eq!(singletons.width(), 0);
        assert_eq!(p3_td().width(), 1);
        let tw = exact_treewidth(&Graph::cycle(6), 16).unwrap();
        assert_eq!(tw.decomposition.width(), 2);
    }

    #[test]
    fn metrics_examples() {
        let k4 = Graph::complete(4);
        let td = TreeDecomposition::trivial(vec![0, 1, 2, 3], Shape::Tree);
        assert_eq!(bag_metrics(&k4, &td, DEFAULT_CAP).unwrap().independence, 1);

        let c6 = Graph::cycle(6);
        let td = TreeDecomposition::trivial((0..6).collect(), Shape::Tree);
        let m = bag_metrics(&c6, &td, DEFAULT_CAP).unwrap();
        assert_eq!((m.bags[0].independence, m.bags[0].domination), (3, 2));

        let p = Graph::edgeless(3);
        let td = TreeDecomposition::path(vec![vec![0], vec![1], vec![2]]).unwrap();
        let m = bag_metrics(&p, &td, DEFAULT_CAP).unwrap();
        assert!(m.bags.iter().all(|b| b.independence == 1 && b.domination == 1));
    }

    #[test]
    fn metrics_reports_bag_on_too_large() {
        let g = Graph::edgeless(5);
        let td = TreeDecomposition::path(vec![vec![0], (0..5).collect()]).unwrap();
        match bag_metrics(&g, &td, 3) {
            Err(Error::Bag { bag: 1, source }) => assert!(matches!(*source, Error::TooLarge { .. })),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn centred_examples() {
        let k4 = Graph::complete(4);
        assert!(centred_check(&k4, &[0, 1, 2, 3], 1, 1, CentredMode::Exact, DEFAULT_CAP).unwrap().holds());

        let c6 = Graph::cycle(6);
        let all: Vec<_> = (0..6).collect();
        assert_eq!(
            centred_check(&c6, &all, 1, 2, CentredMode::Exact, DEFAULT_CAP).unwrap(),
            Centred::No { min_parts: 2 }
        );
        assert_eq!(
            centred_check(&c6, &all, 2, 2, CentredMode::Exact, DEFAULT_CAP).unwrap(),
            Centred::Yes(vec![vec![0, 1, 2], vec![3, 4, 5]])
        );
        assert_eq!(centred_check(&c6, &[], 2, 2, CentredMode::Exact, DEFAULT_CAP), Err(Error::EmptySet));
    }

    #[test]
    fn heuristic_never_says_no() {
        let c6 = Graph::cycle(6);
        let all: Vec<_> = (0..6).collect();
        let r = centred_check(&c6, &all, 1, 2, CentredMode::Heuristic, DEFAULT_CAP).unwrap();
        assert!(matches!(r, Centred::Unknown { .. }));
        let r = centred_check(&c6, &all, 3, 2, CentredMode::Heuristic, DEFAULT_CAP).unwrap();
        let parts = r.witness().unwrap();
        assert!(verify_centred_witness(&c6, &all, parts, 3, 2));
    }

    #[test]
    fn centred_decomposition_examples() {
        let g = Graph::path(5);
        let singles = TreeDecomposition::path((0..5).map(|v| vec![v]).collect()).unwrap();
        assert!(centred_check_decomposition(&g, &singles, 1, 0, CentredMode::Exact, DEFAULT_CAP).unwrap().holds());
        let pairs = TreeDecomposition::path((0..4).map(|v| vec![v, v + 1]).collect()).unwrap();
        let r = centred_check_decomposition(&g, &pairs, 1, 1, CentredMode::Exact, DEFAULT_CAP).unwrap();
        assert!(r.holds());
        assert_eq!(r.max_parts(), Some(1));
        let r = centred_check_decomposition(&g, &pairs, 1, 0, CentredMode::Exact, DEFAULT_CAP).unwrap();
        assert_eq!(r.first_failure(), Some(0));
    }

    #[test]
    fn join_keeps_paths() {
        let a = TreeDecomposition::path(vec![vec![0], vec![0, 1]]).unwrap();
        let b = TreeDecomposition::path(vec![vec![0, 1], vec![1]]).unwrap();
        let j = TreeDecomposition::join(&[a, b], &[0, 2], Shape::Path).unwrap();
        assert_eq!(j.shape(), Shape::Path);
        assert_eq!(j.bags()[2], vec![2, 3]);
        let g = Graph::new(4, vec![(0, 1), (2, 3)]).unwrap();
        assert_eq!(j.validate(&g), Ok(()));
    }
}
