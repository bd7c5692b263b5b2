//! Sim-width: branch decompositions, the induced-matching cut function, and
//! the conversion of a branch decomposition into a tree-decomposition whose
//! bags have bounded domination number.

use serde::Serialize;

use crate::decomposition::{tree_adjacency, Shape, TreeDecomposition};
use crate::error::{Error, Result, StageExt};
use crate::exact::{self, bit, check_cap, iter_bits, Mask};
use crate::graph::{weak_diameter, Distance, Graph, Vertex};
use crate::pipeline::{run_pipeline, PipelineOptions, PipelineReport};
use crate::report::{Check, Report};

/// Default limit on the number of cut edges [`simval`] will search.
pub const SIMVAL_CAP: usize = exact::MAX_EXACT;

/// A subcubic tree whose leaves are in bijection with the graph's vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchDecomposition {
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
    leaf_of: Vec<usize>,
}

impl BranchDecomposition {
    /// `leaf_of[v]` is the tree node holding vertex `v`.
    pub fn new(nodes: usize, edges: Vec<(usize, usize)>, leaf_of: Vec<usize>) -> Result<Self> {
        let bad = |msg: String| Error::MalformedBranchDecomposition(msg);
        if nodes == 0 {
            return Err(bad("no nodes".into()));
        }
        let adj = tree_adjacency(nodes, &edges).map_err(bad)?;
        let n = leaf_of.len();
        let mut owner = vec![usize::MAX; nodes];
        for (v, &t) in leaf_of.iter().enumerate() {
            if t >= nodes {
                return Err(bad(format!("vertex {v} sits on missing node {t}")));
            }
            if adj[t].len() > 1 {
                return Err(bad(format!("vertex {v} sits on non-leaf node {t}")));
            }
            if owner[t] != usize::MAX {
                return Err(bad(format!("leaf {t} holds vertices {} and {v}", owner[t])));
            }
            owner[t] = v;
        }
        for (t, a) in adj.iter().enumerate() {
            match a.len() {
                0 | 1 if owner[t] == usize::MAX => return Err(bad(format!("leaf {t} holds no vertex"))),
                2 if n > 2 => return Err(bad(format!("internal node {t} has degree 2"))),
                d if d > 3 => return Err(bad(format!("node {t} has degree {d}"))),
                _ => {}
            }
        }
        Ok(BranchDecomposition { edges, adj, leaf_of })
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.leaf_of.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, t: usize) -> &[usize] {
        &self.adj[t]
    }

    pub fn leaf(&self, v: Vertex) -> usize {
        self.leaf_of[v]
    }

    pub fn is_leaf(&self, t: usize) -> bool {
        self.adj[t].len() <= 1
    }

    /// Tree nodes reachable from `start` without stepping onto `blocked`.
    fn side_nodes(&self, start: usize, blocked: usize) -> Vec<bool> {
        let mut inside = vec![false; self.node_count()];
        inside[start] = true;
        let mut stack = vec![start];
        while let Some(t) = stack.pop() {
            for &x in &self.adj[t] {
                if x != blocked && !inside[x] {
                    inside[x] = true;
                    stack.push(x);
                }
            }
        }
        inside
    }

    /// Vertices on the `edges()[e].0` side of tree edge `e`.
    pub fn edge_side(&self, e: usize) -> Vec<Vertex> {
        let (a, b) = self.edges[e];
        let inside = self.side_nodes(a, b);
        (0..self.vertex_count()).filter(|&v| inside[self.leaf_of[v]]).collect()
    }

    /// For an internal node, the vertices whose leaves lie in each component
    /// of the tree minus that node, in neighbour order.
    pub fn direction_sides(&self, t: usize) -> Vec<Vec<Vertex>> {
        self.adj[t]
            .iter()
            .map(|&x| {
                let inside = self.side_nodes(x, t);
                (0..self.vertex_count()).filter(|&v| inside[self.leaf_of[v]]).collect()
            })
            .collect()
    }

    /// Parent and depth arrays with node 0 as root.
    fn rooted(&self) -> (Vec<usize>, Vec<usize>) {
        let nodes = self.node_count();
        let mut parent = vec![usize::MAX; nodes];
        let mut depth = vec![0; nodes];
        let mut order = vec![0];
        parent[0] = 0;
        let mut i = 0;
        while i < order.len() {
            let t = order[i];
            i += 1;
            for &x in &self.adj[t] {
                if parent[x] == usize::MAX {
                    parent[x] = t;
                    depth[x] = depth[t] + 1;
                    order.push(x);
                }
            }
        }
        (parent, depth)
    }
}

fn tree_path(parent: &[usize], depth: &[usize], mut a: usize, mut b: usize) -> Vec<usize> {
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

/// A maximum induced matching whose edges each join `side` to its
/// complement, as `(inside, outside)` pairs.
pub fn max_cut_induced_matching(g: &Graph, side: &[Vertex], cap: usize) -> Result<Vec<(Vertex, Vertex)>> {
    let mut in_side = vec![false; g.n()];
    for &v in side {
        if v >= g.n() {
            return Err(Error::VertexOutOfRange { vertex: v, n: g.n() });
        }
        in_side[v] = true;
    }
    let cut: Vec<(Vertex, Vertex)> = g
        .sorted_edges()
        .into_iter()
        .filter(|&(u, v)| in_side[u] != in_side[v])
        .map(|(u, v)| if in_side[u] { (u, v) } else { (v, u) })
        .collect();
    check_cap(cut.len(), cap)?;
    let touches = |x: Vertex, y: Vertex| x == y || g.has_edge(x, y);
    let mut conflict: Vec<Mask> = vec![0; cut.len()];
    for i in 0..cut.len() {
        for j in i + 1..cut.len() {
            let (a, b) = cut[i];
            let (c, d) = cut[j];
            if touches(a, c) || touches(a, d) || touches(b, c) || touches(b, d) {
                conflict[i] |= bit(j);
                conflict[j] |= bit(i);
            }
        }
    }
    let chosen = exact::mis_mask(&conflict, cut.len());
    Ok(iter_bits(chosen).map(|i| cut[i]).collect())
}

/// Size of a maximum induced matching across the cut `(side, V - side)`.
pub fn simval(g: &Graph, side: &[Vertex], cap: usize) -> Result<usize> {
    Ok(max_cut_induced_matching(g, side, cap)?.len())
}

/// Width of every tree edge, in edge order.
pub fn edge_widths(g: &Graph, bd: &BranchDecomposition, cap: usize) -> Result<Vec<usize>> {
    check_vertices(g, bd)?;
    (0..bd.edges.len()).map(|e| simval(g, &bd.edge_side(e), cap)).collect()
}

/// Largest [`simval`] over the cuts of the branch decomposition.
pub fn branch_width_sim(g: &Graph, bd: &BranchDecomposition, cap: usize) -> Result<usize> {
    Ok(edge_widths(g, bd, cap)?.into_iter().max().unwrap_or(0))
}

fn check_vertices(g: &Graph, bd: &BranchDecomposition) -> Result<()> {
    if bd.vertex_count() != g.n() {
        return Err(Error::MalformedBranchDecomposition(format!(
            "decomposition places {} vertices, graph has {}",
            bd.vertex_count(),
            g.n()
        )));
    }
    Ok(())
}

/// Tree-decomposition on the branch tree: for every edge `uv`, both ends go
/// into every bag on the tree path between their leaves. An isolated vertex
/// gets its own extra node hung off its leaf.
pub fn sim_to_td(g: &Graph, bd: &BranchDecomposition) -> Result<TreeDecomposition> {
    check_vertices(g, bd)?;
    if g.n() <= 1 {
        return Ok(TreeDecomposition::trivial(g.vertices().collect(), Shape::Tree));
    }
    let (parent, depth) = bd.rooted();
    let mut bags: Vec<Vec<Vertex>> = vec![Vec::new(); bd.node_count()];
    for &(u, v) in g.edges() {
        for t in tree_path(&parent, &depth, bd.leaf(u), bd.leaf(v)) {
            bags[t].push(u);
            bags[t].push(v);
        }
    }
    for bag in &mut bags {
        bag.sort_unstable();
        bag.dedup();
    }
    let mut edges = bd.edges.clone();
    for v in g.vertices().filter(|&v| g.degree(v) == 0) {
        edges.push((bd.leaf(v), bags.len()));
        bags.push(vec![v]);
    }
    TreeDecomposition::new(bags, edges, Shape::Tree)
}

/// Splits `set` into one part per vertex of a minimum dominating set of
/// `g[set]`: each other vertex joins its smallest adjacent dominator. Every
/// part has weak diameter at most 2.
pub fn dominating_partition(g: &Graph, set: &[Vertex], cap: usize) -> Result<Vec<Vec<Vertex>>> {
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    let mut set = set.to_vec();
    set.sort_unstable();
    set.dedup();
    let h = g.induced(&set);
    let dominators = exact::minimum_dominating_set(&h, cap)?;
    let mut slot = vec![usize::MAX; h.n()];
    for (i, &d) in dominators.iter().enumerate() {
        slot[d] = i;
    }
    let mut parts: Vec<Vec<Vertex>> = vec![Vec::new(); dominators.len()];
    for v in h.vertices() {
        let owner = if slot[v] != usize::MAX {
            slot[v]
        } else {
            h.neighbors(v).iter().map(|&w| slot[w]).filter(|&s| s != usize::MAX).min().expect("dominated")
        };
        parts[owner].push(set[v]);
    }
    Ok(parts)
}

/// Fewest vertices of `bag` whose closed neighbourhoods in `g[bag]` cover
/// `class`.
pub fn dominators_within(g: &Graph, bag: &[Vertex], class: &[Vertex], cap: usize) -> Result<usize> {
    if class.is_empty() {
        return Ok(0);
    }
    check_cap(bag.len(), cap)?;
    let h = g.induced(bag);
    let closed: Vec<Mask> = h.vertices().map(|v| h.neighbors(v).iter().fold(bit(v), |m, &w| m | bit(w))).collect();
    let target = class.iter().fold(0, |m, v| {
        let i = bag.iter().position(|b| b == v).expect("class lies inside the bag");
        m | bit(i)
    });
    Ok(exact::min_dominating_mask(&closed, target).count_ones() as usize)
}

#[derive(Clone, Debug)]
pub struct SimPipelineReport {
    pub sim_width: usize,
    pub decomposition: TreeDecomposition,
    /// Exact domination number of every bag of `decomposition`.
    pub bag_domination: Vec<usize>,
    pub leaf_domination: usize,
    pub pipeline: PipelineReport,
}

impl SimPipelineReport {
    fn k(&self) -> usize {
        self.sim_width.max(1)
    }

    pub fn checks(&self) -> Vec<Check> {
        let k = self.k() as u64;
        let mut checks = vec![
            Check::at_most(
                "bag_domination",
                "6k",
                self.bag_domination.iter().copied().max().unwrap_or(0) as u64,
                6 * k,
            ),
            Check::at_most("leaf_domination", "1", self.leaf_domination as u64, 1),
            Check::at_most("width_out", "12k-1", self.pipeline.width_out as u64, 12 * k - 1),
        ];
        checks.extend(self.pipeline.checks());
        checks
    }

    pub fn to_report(&self) -> Report {
        let mut r = self.pipeline.to_report();
        r.operation = "sim-pipeline".into();
        r.value("sim_width", self.sim_width)
            .value("td_width", self.decomposition.width())
            .value("max_bag_domination", self.bag_domination.iter().copied().max().unwrap_or(0));
        r.checks.clear();
        r.passed = true;
        for c in self.checks() {
            r.check(c);
        }
        r
    }
}

/// Branch decomposition to tree-decomposition, dominating-set certificate
/// that every bag is (6k,3)-centred, then the forward pipeline with
/// `(6k, 3)`. A zero-width decomposition is treated as width 1.
pub fn simwidth_pipeline(g: &Graph, bd: &BranchDecomposition, opts: &PipelineOptions) -> Result<SimPipelineReport> {
    let sim_width = branch_width_sim(g, bd, SIMVAL_CAP).stage("simval")?;
    let k = sim_width.max(1);
    let td = sim_to_td(g, bd).stage("sim_to_td")?;
    td.validate(g).map_err(Error::from).stage("sim_to_td")?;
    let mut bag_domination = Vec::with_capacity(td.node_count());
    let mut leaf_domination = 0;
    for (t, bag) in td.bags().iter().enumerate() {
        if bag.is_empty() {
            bag_domination.push(0);
            continue;
        }
        let parts = dominating_partition(g, bag, opts.caps.exact).map_err(|e| e.in_bag(t)).stage("certify")?;
        let centred = parts.len() <= 6 * k
            && parts.iter().all(|p| weak_diameter(g, p).is_ok_and(|w| w <= Distance::Finite(2)));
        if !centred {
            return Err(Error::BoundViolated { name: "6k", measured: parts.len() as u64, bound: 6 * k as u64 }
                .in_bag(t)
                .in_stage("certify"));
        }
        if t < bd.node_count() && bd.is_leaf(t) {
            leaf_domination = leaf_domination.max(parts.len());
        }
        bag_domination.push(parts.len());
    }
    let opts = PipelineOptions { waive_centred_check: true, ..*opts };
    let pipeline = run_pipeline(g, &td, 6 * k, 3, &opts).stage("pipeline")?;
    Ok(SimPipelineReport { sim_width, decomposition: td, bag_domination, leaf_domination, pipeline })
}

#[derive(Clone, Debug, Serialize)]
pub struct SimvalResult {
    pub value: usize,
    pub matching: Vec<(Vertex, Vertex)>,
}
