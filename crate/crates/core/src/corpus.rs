//! Seeded instance generators. Every generator takes the random source
//! explicitly; [`rng`] builds the one used by the CLI and the test suites.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

use crate::decomposition::{Shape, TreeDecomposition};
use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};
use crate::simwidth::BranchDecomposition;

pub type CorpusRng = ChaCha8Rng;

pub fn rng(seed: u64) -> CorpusRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParams(msg.into())
}

/// Tree on `n` vertices where vertex `i > 0` hangs off a uniform earlier one.
pub fn random_tree(rng: &mut CorpusRng, n: usize) -> Graph {
    let edges = (1..n).map(|i| (rng.gen_range(0..i), i)).collect();
    Graph::new(n, edges).expect("attachment tree is simple")
}

/// Random tree plus each remaining pair independently with probability `p`.
pub fn random_connected(rng: &mut CorpusRng, n: usize, p: f64) -> Graph {
    let tree = random_tree(rng, n);
    let mut edges = tree.edges().to_vec();
    for u in 0..n {
        for v in u + 1..n {
            if !tree.has_edge(u, v) && rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, edges).expect("distinct pairs")
}

/// Every pair independently with probability `p`.
pub fn random_graph(rng: &mut CorpusRng, n: usize, p: f64) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, edges).expect("distinct pairs")
}

fn k_tree_impl(rng: &mut CorpusRng, k: usize, n: usize, path: bool) -> Result<(Graph, TreeDecomposition)> {
    if k == 0 || n < k + 1 {
        return Err(invalid(format!("k-tree needs k >= 1 and n >= k+1, got k={k}, n={n}")));
    }
    let mut edges = Vec::new();
    for u in 0..=k {
        for v in u + 1..=k {
            edges.push((u, v));
        }
    }
    let mut bags: Vec<Vec<Vertex>> = vec![(0..=k).collect()];
    let mut tree = Vec::new();
    for v in k + 1..n {
        let parent = if path { bags.len() - 1 } else { rng.gen_range(0..bags.len()) };
        let mut bag = bags[parent].clone();
        bag.remove(rng.gen_range(0..bag.len()));
        edges.extend(bag.iter().map(|&u| (u, v)));
        bag.push(v);
        bags.push(bag);
        tree.push((parent, bags.len() - 1));
    }
    let shape = if path { Shape::Path } else { Shape::Tree };
    Ok((Graph::new(n, edges)?, TreeDecomposition::new(bags, tree, shape)?))
}

/// Random k-tree on `n` vertices with its width-k decomposition.
pub fn k_tree(rng: &mut CorpusRng, k: usize, n: usize) -> Result<(Graph, TreeDecomposition)> {
    k_tree_impl(rng, k, n, false)
}

/// k-tree whose natural decomposition is a path.
pub fn k_path(rng: &mut CorpusRng, k: usize, n: usize) -> Result<(Graph, TreeDecomposition)> {
    k_tree_impl(rng, k, n, true)
}

/// A k-tree `host` with every edge subdivided `s` times, and the map sending
/// each subdivision vertex to its nearer branch endpoint (the first endpoint
/// on ties). The map is a `(s+1)`-quasi-isometry.
#[derive(Clone, Debug)]
pub struct Subdivided {
    pub graph: Graph,
    pub host: Graph,
    pub map: Vec<Vertex>,
    pub host_td: TreeDecomposition,
    pub c: u32,
}

pub fn subdivided_k_tree(rng: &mut CorpusRng, k: usize, n: usize, s: usize) -> Result<Subdivided> {
    let (host, host_td) = k_tree(rng, k, n)?;
    let mut edges = Vec::new();
    let mut map: Vec<Vertex> = (0..n).collect();
    for &(u, v) in host.edges() {
        let mut prev = u;
        for i in 1..=s {
            let w = map.len();
            map.push(if i <= s + 1 - i { u } else { v });
            edges.push((prev, w));
            prev = w;
        }
        edges.push((prev, v));
    }
    let graph = Graph::new(map.len(), edges)?;
    Ok(Subdivided { graph, host, map, host_td, c: s as u32 + 1 })
}

/// `rows x cols` grid with the path decomposition whose bags are pairs of
/// consecutive columns. Vertex `(r, c)` is `c * rows + r`.
pub fn grid_slice(rows: usize, cols: usize) -> Result<(Graph, TreeDecomposition)> {
    if rows == 0 || cols == 0 {
        return Err(invalid("grid needs at least one row and column"));
    }
    let at = |r: usize, c: usize| c * rows + r;
    let mut edges = Vec::new();
    for c in 0..cols {
        for r in 0..rows {
            if r + 1 < rows {
                edges.push((at(r, c), at(r + 1, c)));
            }
            if c + 1 < cols {
                edges.push((at(r, c), at(r, c + 1)));
            }
        }
    }
    let bags = if cols == 1 {
        vec![(0..rows).collect()]
    } else {
        (0..cols - 1).map(|c| (c * rows..(c + 2) * rows).collect()).collect()
    };
    Ok((Graph::new(rows * cols, edges)?, TreeDecomposition::path(bags)?))
}

/// Random subcubic tree with `n` leaves, grown by subdividing a uniform
/// tree edge and hanging a new leaf there. Vertices get leaves in random
/// order.
pub fn random_branch_decomposition(rng: &mut CorpusRng, n: usize) -> Result<BranchDecomposition> {
    if n == 0 {
        return Err(invalid("branch decomposition needs at least one vertex"));
    }
    let mut order: Vec<Vertex> = (0..n).collect();
    order.shuffle(rng);
    let mut leaf_of = vec![0; n];
    let (nodes, edges) = match n {
        1 => (1, Vec::new()),
        2 => {
            leaf_of[order[1]] = 1;
            (2, vec![(0, 1)])
        }
        _ => {
            let mut edges = vec![(0, 3), (1, 3), (2, 3)];
            leaf_of[order[1]] = 1;
            leaf_of[order[2]] = 2;
            let mut nodes = 4;
            for &v in &order[3..] {
                let e = rng.gen_range(0..edges.len());
                let (a, b) = edges[e];
                let mid = nodes;
                let leaf = nodes + 1;
                nodes += 2;
                edges[e] = (a, mid);
                edges.push((mid, b));
                edges.push((mid, leaf));
                leaf_of[v] = leaf;
            }
            (nodes, edges)
        }
    };
    leaf_of[order[0]] = 0;
    BranchDecomposition::new(nodes, edges, leaf_of)
}

/// Contracts each tree edge independently with probability `p`, merging
/// bags. Contracting path edges keeps a path.
pub fn coarsen(rng: &mut CorpusRng, td: &TreeDecomposition, p: f64) -> TreeDecomposition {
    let nodes = td.node_count();
    let mut root: Vec<usize> = (0..nodes).collect();
    fn find(root: &mut [usize], mut x: usize) -> usize {
        while root[x] != x {
            root[x] = root[root[x]];
            x = root[x];
        }
        x
    }
    let mut kept = Vec::new();
    for &(a, b) in td.edges() {
        if rng.gen_bool(p) {
            let (ra, rb) = (find(&mut root, a), find(&mut root, b));
            root[ra.max(rb)] = ra.min(rb);
        } else {
            kept.push((a, b));
        }
    }
    let mut index = vec![usize::MAX; nodes];
    let mut bags: Vec<Vec<Vertex>> = Vec::new();
    for t in 0..nodes {
        let r = find(&mut root, t);
        if index[r] == usize::MAX {
            index[r] = bags.len();
            bags.push(Vec::new());
        }
        bags[index[r]].extend_from_slice(td.bag(t));
    }
    for bag in &mut bags {
        bag.sort_unstable();
        bag.dedup();
    }
    let edges = kept.into_iter().map(|(a, b)| (index[find(&mut root, a)], index[find(&mut root, b)])).collect();
    TreeDecomposition::new(bags, edges, td.shape()).expect("contracting tree edges leaves a tree")
}

/// Generator families exposed by the CLI `gen` subcommand.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Path { n: usize },
    Cycle { n: usize },
    RandomTree { n: usize },
    KTree { k: usize, n: usize },
    KPath { k: usize, n: usize },
    SubdividedKTree { k: usize, n: usize, s: usize },
    GridSlice { rows: usize, cols: usize },
    RandomBranchDecomposition { n: usize },
}

/// A generated graph with whatever structure its family provides.
#[derive(Clone, Debug)]
pub struct Instance {
    pub graph: Graph,
    pub td: Option<TreeDecomposition>,
    pub bd: Option<BranchDecomposition>,
    /// Host graph, map into it, and its decomposition.
    pub host: Option<(Graph, Vec<Vertex>, TreeDecomposition)>,
}

impl Instance {
    fn plain(graph: Graph) -> Self {
        Instance { graph, td: None, bd: None, host: None }
    }
}

pub fn generate(family: Family, rng: &mut CorpusRng) -> Result<Instance> {
    let with_td = |(graph, td): (Graph, TreeDecomposition)| Instance { graph, td: Some(td), bd: None, host: None };
    Ok(match family {
        Family::Path { n } => Instance::plain(Graph::path(n)),
        Family::Cycle { n } => {
            if n < 3 {
                return Err(invalid("cycle needs n >= 3"));
            }
            Instance::plain(Graph::cycle(n))
        }
        Family::RandomTree { n } => Instance::plain(random_tree(rng, n)),
        Family::KTree { k, n } => with_td(k_tree(rng, k, n)?),
        Family::KPath { k, n } => with_td(k_path(rng, k, n)?),
        Family::SubdividedKTree { k, n, s } => {
            let sub = subdivided_k_tree(rng, k, n, s)?;
            Instance { graph: sub.graph, td: None, bd: None, host: Some((sub.host, sub.map, sub.host_td)) }
        }
        Family::GridSlice { rows, cols } => with_td(grid_slice(rows, cols)?),
        Family::RandomBranchDecomposition { n } => {
            let graph = random_connected(rng, n, 0.2);
            let bd = random_branch_decomposition(rng, n)?;
            Instance { graph, td: None, bd: Some(bd), host: None }
        }
    })
}
