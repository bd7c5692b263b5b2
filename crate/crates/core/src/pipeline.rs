//! From a (k,d)-centred decomposition to a quasi-isometric graph with a
//! decomposition of width at most 2k-1.
//!
//! The forward direction runs in two stages:
//!
//! 1. [`augment`] joins every two vertices that share a bag and are at
//!    distance at most `d`. The same decomposition now has bags that are
//!    unions of at most `k` cliques, i.e. independence number at most `k`,
//!    and the identity is a `d`-quasi-isometry.
//! 2. [`ind_to_tw`] picks a partition into connected parts whose quotient is
//!    bipartite ([`bipartite_partition`]), contracts it ([`quotient`]) and
//!    pushes the decomposition along ([`push_decomposition`]). Bag
//!    independence cannot grow under contraction and a bipartite bag with
//!    independence at most `k` has at most `2k` vertices.
//!
//! [`run_pipeline`] chains the stages and re-measures every map.

use serde::Serialize;

use crate::decomposition::{
    bag_metrics, centred_check_decomposition, CentredMode, Shape, TreeDecomposition,
};
use crate::error::{Error, Result, StageExt};
use crate::exact::Caps;
use crate::graph::{is_bipartite, weak_diameter, Distance, Graph, Vertex};
use crate::quasiiso::{compose, QuasiIsometryMap};
use crate::report::{Check, Report};

/// Largest graph the exhaustive bipartite partition search accepts.
pub const EXACT_PARTITION_CAP: usize = 12;
const EXACT_PARTITION_MAX: usize = 24;

/// Vertex partition into connected parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    parts: Vec<Vec<Vertex>>,
    part_of: Vec<usize>,
}

impl Partition {
    /// Checks that `parts` are non-empty, disjoint, cover `g` and each
    /// induce a connected subgraph. Parts are sorted internally; their
    /// order is kept.
    pub fn new(g: &Graph, mut parts: Vec<Vec<Vertex>>) -> Result<Self> {
        let mut part_of = vec![usize::MAX; g.n()];
        for (i, part) in parts.iter_mut().enumerate() {
            if part.is_empty() {
                return Err(Error::InvalidPartition(format!("part {i} is empty")));
            }
            part.sort_unstable();
            for &v in part.iter() {
                if v >= g.n() {
                    return Err(Error::InvalidPartition(format!("part {i} holds vertex {v} outside the graph")));
                }
                if part_of[v] != usize::MAX {
                    return Err(Error::InvalidPartition(format!("vertex {v} lies in two parts")));
                }
                part_of[v] = i;
            }
        }
        if let Some(v) = part_of.iter().position(|&p| p == usize::MAX) {
            return Err(Error::InvalidPartition(format!("vertex {v} lies in no part")));
        }
        if let Some(i) = parts.iter().position(|p| !g.induces_connected(p)) {
            return Err(Error::InvalidPartition(format!("part {i} is not connected")));
        }
        Ok(Partition { parts, part_of })
    }

    pub fn singletons(n: usize) -> Self {
        Partition { parts: (0..n).map(|v| vec![v]).collect(), part_of: (0..n).collect() }
    }

    pub fn parts(&self) -> &[Vec<Vertex>] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn part_of(&self, v: Vertex) -> usize {
        self.part_of[v]
    }

    pub fn vertex_count(&self) -> usize {
        self.part_of.len()
    }

    /// Largest weak diameter of a part.
    pub fn max_weak_diameter(&self, g: &Graph) -> Distance {
        self.parts
            .iter()
            .map(|p| weak_diameter(g, p).expect("parts are non-empty"))
            .max()
            .unwrap_or(Distance::Finite(0))
    }

    fn check_graph(&self, g: &Graph) -> Result<()> {
        if self.part_of.len() != g.n() {
            return Err(Error::InvalidPartition(format!(
                "partition covers {} vertices, graph has {}",
                self.part_of.len(),
                g.n()
            )));
        }
        Ok(())
    }
}

/// Contracts every part to a single vertex; vertex `i` of the quotient is
/// part `i`.
pub fn quotient(g: &Graph, p: &Partition) -> Result<Graph> {
    p.check_graph(g)?;
    if let Some(i) = p.parts.iter().position(|part| !g.induces_connected(part)) {
        return Err(Error::InvalidPartition(format!("part {i} is not connected")));
    }
    let edges = g
        .sorted_edges()
        .into_iter()
        .map(|(u, v)| (p.part_of[u], p.part_of[v]))
        .filter(|(a, b)| a != b);
    Graph::from_edge_set(p.len(), edges)
}

/// The map `v -> part(v)` into the quotient, measured. Every part must have
/// weak diameter below `d`, and the measured constant is then at most `d`.
pub fn quotient_map(g: &Graph, p: &Partition, d: u32) -> Result<(Graph, QuasiIsometryMap)> {
    for (i, part) in p.parts.iter().enumerate() {
        let w = weak_diameter(g, part)?;
        if !matches!(w, Distance::Finite(x) if x < d) {
            return Err(Error::DiameterExceeded { part: i, diameter: w.to_string(), limit: d });
        }
    }
    let h = quotient(g, p)?;
    let phi = QuasiIsometryMap::new(g, &h, p.part_of.clone())?.measure(g, &h, u32::MAX)?;
    let q = phi.measured().unwrap();
    if q > d {
        return Err(Error::BoundViolated { name: "d", measured: q as u64, bound: d as u64 });
    }
    Ok((h, phi))
}

/// Decomposition of the quotient: each node keeps the parts that meet its
/// original bag.
pub fn push_decomposition(g: &Graph, td: &TreeDecomposition, p: &Partition) -> Result<TreeDecomposition> {
    p.check_graph(g)?;
    td.validate(g)?;
    let bags = td
        .bags()
        .iter()
        .map(|bag| {
            let mut parts: Vec<usize> = bag.iter().map(|&v| p.part_of[v]).collect();
            parts.sort_unstable();
            parts.dedup();
            parts
        })
        .collect();
    td.with_bags(bags)
}

#[derive(Clone, Debug)]
pub struct Augmented {
    pub graph: Graph,
    /// Identity map, measured when the input is connected.
    pub map: QuasiIsometryMap,
    pub added: Vec<(Vertex, Vertex)>,
}

/// Adds an edge between every two vertices that share a bag and are at
/// distance at most `d`. `td` stays a decomposition of the result.
pub fn augment(g: &Graph, td: &TreeDecomposition, d: u32) -> Result<Augmented> {
    td.validate(g)?;
    let dm = g.distances();
    let mut added = Vec::new();
    for bag in td.bags() {
        for (i, &u) in bag.iter().enumerate() {
            for &v in &bag[i + 1..] {
                if !g.has_edge(u, v) && dm.get(u, v).is_within(d) {
                    added.push((u, v));
                }
            }
        }
    }
    added.sort_unstable();
    added.dedup();
    let h = Graph::from_edge_set(g.n(), g.sorted_edges().into_iter().chain(added.iter().copied()))?;
    let mut map = QuasiIsometryMap::identity(g, &h)?;
    if g.n() > 0 && g.is_connected() {
        map = map.measure(g, &h, u32::MAX)?;
    }
    Ok(Augmented { graph: h, map, added })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PartitionStrategy {
    /// Components of BFS layers from the smallest vertex.
    Layering,
    /// Exhaustive minimum-diameter search, small graphs only.
    Exact,
    /// Layering, replaced by the exact optimum when that is smaller and the
    /// graph is within [`EXACT_PARTITION_CAP`].
    Best,
}

#[derive(Clone, Debug)]
pub struct BipartitePartition {
    pub partition: Partition,
    pub max_diameter: u32,
    pub strategy: PartitionStrategy,
    /// Domination number of the supplied decomposition, if within the cap.
    pub domination: Option<usize>,
}

/// BFS layers from vertex 0, split into connected components. Quotient
/// edges only join consecutive layers, so layer parity 2-colours it.
pub fn layering_partition(g: &Graph) -> Result<Partition> {
    if g.n() == 0 {
        return Partition::new(g, Vec::new());
    }
    let dist = g.bfs(0);
    if dist.iter().any(Option::is_none) {
        return Err(Error::Disconnected);
    }
    let depth = dist.iter().map(|d| d.unwrap() as usize).max().unwrap();
    let mut layers = vec![Vec::new(); depth + 1];
    for v in g.vertices() {
        layers[dist[v].unwrap() as usize].push(v);
    }
    let mut parts = Vec::new();
    for layer in &layers {
        let sub = g.induced(layer);
        for comp in sub.components() {
            parts.push(comp.into_iter().map(|i| layer[i]).collect());
        }
    }
    Partition::new(g, parts)
}

/// Minimum possible largest part diameter over all partitions into
/// connected parts with a bipartite quotient.
///
/// Such partitions are exactly the monochromatic components of 2-colourings,
/// so the search walks the colourings with vertex 0 fixed to colour 0 in
/// lexicographic order and keeps the first optimum.
pub fn exact_bipartite_partition(g: &Graph, cap: usize) -> Result<(Partition, u32)> {
    let n = g.n();
    let limit = cap.min(EXACT_PARTITION_MAX);
    if n > limit {
        return Err(Error::TooLarge { size: n, cap: limit });
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    if n == 0 {
        return Ok((Partition::new(g, Vec::new())?, 0));
    }
    let dm = g.distances();
    let mut best: Option<(u32, Vec<u8>)> = None;
    let mut colour = vec![0u8; n];
    for code in 0u32..(1 << (n - 1)) {
        for (v, c) in colour.iter_mut().enumerate().skip(1) {
            *c = ((code >> (n - 1 - v)) & 1) as u8;
        }
        let diam = monochromatic_parts(g, &colour)
            .iter()
            .map(|p| {
                let mut w = 0;
                for (i, &a) in p.iter().enumerate() {
                    for &b in &p[i + 1..] {
                        w = w.max(dm.raw(a, b).expect("connected"));
                    }
                }
                w
            })
            .max()
            .unwrap_or(0);
        if best.as_ref().is_none_or(|(b, _)| diam < *b) {
            best = Some((diam, colour.clone()));
            if diam == 0 {
                break;
            }
        }
    }
    let (diam, colour) = best.expect("at least one colouring");
    Ok((Partition::new(g, monochromatic_parts(g, &colour))?, diam))
}

fn monochromatic_parts(g: &Graph, colour: &[u8]) -> Vec<Vec<Vertex>> {
    let mut seen = vec![false; g.n()];
    let mut parts = Vec::new();
    for s in g.vertices() {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut part = vec![s];
        let mut i = 0;
        while i < part.len() {
            let u = part[i];
            i += 1;
            for &w in g.neighbors(u) {
                if !seen[w] && colour[w] == colour[s] {
                    seen[w] = true;
                    part.push(w);
                }
            }
        }
        part.sort_unstable();
        parts.push(part);
    }
    parts
}

/// A partition into connected parts with a bipartite quotient, with the
/// largest part weak diameter it achieved.
pub fn bipartite_partition(
    g: &Graph,
    td: &TreeDecomposition,
    strategy: PartitionStrategy,
    budget: Option<u32>,
    caps: Caps,
) -> Result<BipartitePartition> {
    td.validate(g)?;
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let domination = match bag_metrics(g, td, caps.exact) {
        Ok(m) => Some(m.domination),
        Err(Error::Bag { .. }) => None,
        Err(e) => return Err(e),
    };
    let diameter = |p: &Partition| p.max_weak_diameter(g).finite().expect("connected");
    let (partition, max_diameter, used) = match strategy {
        PartitionStrategy::Layering => {
            let p = layering_partition(g)?;
            let w = diameter(&p);
            (p, w, PartitionStrategy::Layering)
        }
        PartitionStrategy::Exact => {
            let (p, w) = exact_bipartite_partition(g, EXACT_PARTITION_CAP)?;
            (p, w, PartitionStrategy::Exact)
        }
        PartitionStrategy::Best => {
            let p = layering_partition(g)?;
            let w = diameter(&p);
            if g.n() <= EXACT_PARTITION_CAP {
                let (q, x) = exact_bipartite_partition(g, EXACT_PARTITION_CAP)?;
                if x < w {
                    (q, x, PartitionStrategy::Exact)
                } else {
                    (p, w, PartitionStrategy::Layering)
                }
            } else {
                (p, w, PartitionStrategy::Layering)
            }
        }
    };
    debug_assert!(is_bipartite(&quotient(g, &partition)?).is_bipartite());
    if let Some(budget) = budget {
        if max_diameter > budget {
            return Err(Error::BudgetExceeded { achieved: max_diameter, budget });
        }
    }
    Ok(BipartitePartition { partition, max_diameter, strategy: used, domination })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PipelineOptions {
    pub strategy: PartitionStrategy,
    pub budget: Option<u32>,
    pub caps: Caps,
    /// Skip the up-front (k,d)-centred certification of the input.
    pub waive_centred_check: bool,
    pub centred_mode: CentredMode,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions {
            strategy: PartitionStrategy::Layering,
            budget: None,
            caps: Caps::default(),
            waive_centred_check: false,
            centred_mode: CentredMode::Exact,
        }
    }
}

#[derive(Clone, Debug)]
pub struct IndToTw {
    pub partition: BipartitePartition,
    pub graph: Graph,
    pub map: QuasiIsometryMap,
    pub decomposition: TreeDecomposition,
    pub independence: usize,
}

/// Contracts a bipartite-quotient partition of a graph whose decomposition
/// has bag independence at most `k`. The pushed decomposition has width at
/// most `2k - 1`.
pub fn ind_to_tw(g: &Graph, td: &TreeDecomposition, k: usize, opts: &PipelineOptions) -> Result<IndToTw> {
    let independence = bag_metrics(g, td, opts.caps.exact)?.independence;
    if independence > k {
        return Err(Error::Precondition(format!("decomposition has independence number {independence} > {k}")));
    }
    let partition = bipartite_partition(g, td, opts.strategy, opts.budget, opts.caps)?;
    let (h, map) = quotient_map(g, &partition.partition, partition.max_diameter + 1)?;
    let decomposition = push_decomposition(g, td, &partition.partition)?;
    let bound = (2 * k).saturating_sub(1);
    if decomposition.width() > bound {
        return Err(Error::BoundViolated { name: "2k-1", measured: decomposition.width() as u64, bound: bound as u64 });
    }
    Ok(IndToTw { partition, graph: h, map, decomposition, independence })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct StageConstants {
    /// Identity map into the augmented graph.
    pub augment: u32,
    /// Map onto the quotient.
    pub quotient: u32,
}

/// Everything the forward direction produced, with the measured constants.
///
/// For a disconnected input every component is processed on its own; the
/// stage graphs are disjoint unions, the maps are left unmeasured and the
/// constants are the maxima over components.
#[derive(Clone, Debug)]
pub struct PipelineReport {
    pub k: usize,
    pub d: u32,
    pub shape: Shape,
    pub components: usize,
    pub augmented: Graph,
    pub augmented_independence: usize,
    pub output: Graph,
    pub output_decomposition: TreeDecomposition,
    pub partition: Partition,
    pub partition_diameter: u32,
    pub partition_strategy: PartitionStrategy,
    pub stage1_map: QuasiIsometryMap,
    pub stage2_map: QuasiIsometryMap,
    pub composed_map: QuasiIsometryMap,
    pub stage_constants: StageConstants,
    pub composed_constant: u32,
    /// `(d + 2) * F` with `F` the measured quotient constant.
    pub claimed_bound: u64,
    /// `F * (c + 2)` with `c` the measured augmentation constant.
    pub composition_bound: u64,
    pub width_out: usize,
}

impl PipelineReport {
    pub fn width_bound(&self) -> usize {
        (2 * self.k).saturating_sub(1)
    }

    pub fn checks(&self) -> Vec<Check> {
        vec![
            Check::at_most("width_out", "2k-1", self.width_out as u64, self.width_bound() as u64),
            Check::at_most("augment_constant", "d", self.stage_constants.augment as u64, effective_d(self.d) as u64),
            Check::at_most("composed_constant", "q(c+2)", self.composed_constant as u64, self.composition_bound),
            Check::at_most("composed_constant", "(d+2)F", self.composed_constant as u64, self.claimed_bound),
            Check::at_most(
                "augmented_independence",
                "k",
                self.augmented_independence as u64,
                self.k as u64,
            ),
            Check::holds("shape_preserved", "shape", self.output_decomposition.shape() == self.shape),
        ]
    }

    pub fn to_report(&self) -> Report {
        let mut r = Report::new("pipeline");
        r.value("k", self.k)
            .value("d", self.d)
            .value("shape", self.shape)
            .value("components", self.components)
            .value("width_out", self.width_out)
            .value("stage_constants", self.stage_constants)
            .value("composed_constant", self.composed_constant)
            .value("claimed_bound", self.claimed_bound)
            .value("composition_bound", self.composition_bound)
            .value("partition_diameter", self.partition_diameter)
            .value("partition_strategy", self.partition_strategy)
            .value("augmented_independence", self.augmented_independence)
            .value("n_in", self.stage1_map.as_slice().len())
            .value("n_out", self.output.n());
        for c in self.checks() {
            r.check(c);
        }
        r
    }
}

/// The identity into the augmented graph is a `d`-quasi-isometry for
/// `d >= 1`; constants are positive, so `d = 0` behaves like `d = 1`.
fn effective_d(d: u32) -> u32 {
    d.max(1)
}

struct ComponentRun {
    augmented: Augmented,
    independence: usize,
    stage2: IndToTw,
    composed: QuasiIsometryMap,
}

fn run_component(g: &Graph, td: &TreeDecomposition, k: usize, d: u32, opts: &PipelineOptions) -> Result<ComponentRun> {
    let augmented = augment(g, td, d).stage("augment")?;
    let c1 = augmented.map.measured().expect("component is connected");
    if c1 > effective_d(d) {
        return Err(Error::BoundViolated { name: "d", measured: c1 as u64, bound: d as u64 }.in_stage("augment"));
    }
    let stage2 = ind_to_tw(&augmented.graph, td, k, opts).stage("ind_to_tw")?;
    let (composed, _) = compose(g, &augmented.graph, &stage2.graph, &augmented.map, &stage2.map).stage("compose")?;
    Ok(ComponentRun { independence: stage2.independence, augmented, stage2, composed })
}

/// Runs augmentation and contraction and reports every measured constant.
pub fn run_pipeline(g: &Graph, td: &TreeDecomposition, k: usize, d: u32, opts: &PipelineOptions) -> Result<PipelineReport> {
    if k == 0 {
        return Err(Error::InvalidParams("k must be positive".into()));
    }
    td.validate(g).map_err(Error::from).stage("input")?;
    if !opts.waive_centred_check {
        let verdict = centred_check_decomposition(g, td, k, d, opts.centred_mode, opts.caps.exact).stage("input")?;
        if let Some(bag) = verdict.first_failure() {
            return Err(Error::Precondition(format!("bag {bag} is not ({k},{d})-centred")).in_stage("input"));
        }
    }
    let components = g.components();
    let mut runs = Vec::with_capacity(components.len());
    for comp in &components {
        let gi = g.induced(comp);
        let tdi = td.restrict(comp, g.n());
        runs.push(run_component(&gi, &tdi, k, d, opts)?);
    }

    let mut offsets_out = Vec::new();
    let mut n_out = 0;
    for run in &runs {
        offsets_out.push(n_out);
        n_out += run.stage2.graph.n();
    }
    // Vertex `v` of the input is vertex `owner[v].1` of component `owner[v].0`.
    let mut owner = vec![(0, 0); g.n()];
    for (ci, comp) in components.iter().enumerate() {
        for (i, &v) in comp.iter().enumerate() {
            owner[v] = (ci, i);
        }
    }

    let stage_constants = StageConstants {
        augment: runs.iter().map(|r| r.augmented.map.measured().unwrap()).max().unwrap_or(1),
        quotient: runs.iter().map(|r| r.stage2.map.measured().unwrap()).max().unwrap_or(1),
    };
    let composed_constant = runs.iter().map(|r| r.composed.measured().unwrap()).max().unwrap_or(1);
    let partition_diameter = runs.iter().map(|r| r.stage2.partition.max_diameter).max().unwrap_or(0);
    let partition_strategy = runs.first().map_or(opts.strategy, |r| r.stage2.partition.strategy);
    let augmented_independence = runs.iter().map(|r| r.independence).max().unwrap_or(0);

    let (augmented, output, output_decomposition, partition, stage1_map, stage2_map, composed_map) = if runs.len() == 1 {
        let run = runs.pop().unwrap();
        (
            run.augmented.graph,
            run.stage2.graph,
            run.stage2.decomposition,
            run.stage2.partition.partition,
            run.augmented.map,
            run.stage2.map,
            run.composed,
        )
    } else {
        // Augmentation keeps vertex ids only up to the component relabelling;
        // rebuild it on the original ids.
        let augmented = augment(g, td, d).stage("augment")?.graph;
        let output = runs
            .iter()
            .map(|r| &r.stage2.graph)
            .fold(Graph::edgeless(0), |acc, h| acc.disjoint_union(h));
        let parts_td: Vec<_> = runs.iter().map(|r| r.stage2.decomposition.clone()).collect();
        let output_decomposition = TreeDecomposition::join(&parts_td, &offsets_out, td.shape()).stage("join")?;
        let mut parts = Vec::new();
        for (ci, run) in runs.iter().enumerate() {
            for p in run.stage2.partition.partition.parts() {
                parts.push(p.iter().map(|&i| components[ci][i]).collect());
            }
        }
        let partition = Partition::new(&augmented, parts).stage("join")?;
        let stage2: Vec<usize> = g.vertices().map(|v| partition.part_of(v)).collect();
        let composed: Vec<usize> = g
            .vertices()
            .map(|v| {
                let (ci, i) = owner[v];
                offsets_out[ci] + runs[ci].composed.image(i)
            })
            .collect();
        (
            augmented.clone(),
            output.clone(),
            output_decomposition,
            partition,
            QuasiIsometryMap::identity(g, &augmented)?,
            QuasiIsometryMap::new(&augmented, &output, stage2)?,
            QuasiIsometryMap::new(g, &output, composed)?,
        )
    };

    let f = stage_constants.quotient as u64;
    Ok(PipelineReport {
        k,
        d,
        shape: td.shape(),
        components: components.len(),
        augmented,
        augmented_independence,
        width_out: output_decomposition.width(),
        output,
        output_decomposition,
        partition,
        partition_diameter,
        partition_strategy,
        stage1_map,
        stage2_map,
        composed_map,
        stage_constants,
        composed_constant,
        claimed_bound: (effective_d(d) as u64 + 2) * f,
        composition_bound: f * (stage_constants.augment as u64 + 2),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::DEFAULT_CAP;
    use crate::quasiiso::qi_constant;

    fn p5_bags() -> TreeDecomposition {
        TreeDecomposition::path(vec![vec![0, 1, 2], vec![2, 3, 4]]).unwrap()
    }

    #[test]
    fn augment_d1_changes_nothing() {
        let g = Graph::path(5);
        let a = augment(&g, &p5_bags(), 1).unwrap();
        assert_eq!(a.graph, g);
        assert!(a.added.is_empty());
    }

    #[test]
    fn augment_p5_d2() {
        let g = Graph::path(5);
        let td = p5_bags();
        let a = augment(&g, &td, 2).unwrap();
        assert_eq!(a.added, vec![(0, 2), (2, 4)]);
        assert_eq!(bag_metrics(&a.graph, &td, DEFAULT_CAP).unwrap().independence, 1);
        assert_eq!(a.map.measured(), Some(2));
        td.validate(&a.graph).unwrap();
    }

    #[test]
    fn augment_c6_single_bag() {
        let g = Graph::cycle(6);
        let td = TreeDecomposition::trivial((0..6).collect(), Shape::Tree);
        let a = augment(&g, &td, 3).unwrap();
        assert_eq!(a.graph, Graph::complete(6));
        assert!(a.map.measured().unwrap() <= 3);
    }

    #[test]
    fn quotient_examples() {
        let c6 = Graph::cycle(6);
        assert_eq!(quotient(&c6, &Partition::singletons(6)).unwrap(), c6);
        let pairs = Partition::new(&c6, vec![vec![0, 1], vec![2, 3], vec![4, 5]]).unwrap();
        assert_eq!(quotient(&c6, &pairs).unwrap(), Graph::complete(3));
        let whole = Partition::new(&c6, vec![(0..6).collect()]).unwrap();
        assert_eq!(quotient(&c6, &whole).unwrap(), Graph::edgeless(1));
    }

    #[test]
    fn partition_rejects_bad_parts() {
        let c6 = Graph::cycle(6);
        assert!(matches!(Partition::new(&c6, vec![vec![0, 2], vec![1, 3, 4, 5]]), Err(Error::InvalidPartition(_))));
        assert!(Partition::new(&c6, vec![vec![0, 1]]).is_err());
        assert!(Partition::new(&c6, vec![vec![0, 1], vec![1, 2, 3, 4, 5]]).is_err());
    }

    #[test]
    fn quotient_map_examples() {
        let c6 = Graph::cycle(6);
        let (_, phi) = quotient_map(&c6, &Partition::singletons(6), 1).unwrap();
        assert_eq!(phi.measured(), Some(1));
        let pairs = Partition::new(&c6, vec![vec![0, 1], vec![2, 3], vec![4, 5]]).unwrap();
        assert!(quotient_map(&c6, &pairs, 2).unwrap().1.measured().unwrap() <= 2);
        let whole = Partition::new(&c6, vec![(0..6).collect()]).unwrap();
        assert!(quotient_map(&c6, &whole, 4).unwrap().1.measured().unwrap() <= 4);
        assert!(matches!(quotient_map(&c6, &whole, 3), Err(Error::DiameterExceeded { part: 0, .. })));
    }

    #[test]
    fn push_examples() {
        let g = Graph::path(5);
        let td = p5_bags();
        let pushed = push_decomposition(&g, &td, &Partition::singletons(5)).unwrap();
        assert_eq!(pushed, td);

        let a = augment(&g, &td, 2).unwrap().graph;
        let p = Partition::new(&a, vec![vec![0, 1, 2], vec![3, 4]]).unwrap();
        let pushed = push_decomposition(&a, &td, &p).unwrap();
        let h = quotient(&a, &p).unwrap();
        pushed.validate(&h).unwrap();
        assert!(pushed.bags().iter().all(|b| b.len() <= 2));
        assert_eq!(bag_metrics(&h, &pushed, DEFAULT_CAP).unwrap().independence, 1);

        let whole = Partition::new(&g, vec![(0..5).collect()]).unwrap();
        let pushed = push_decomposition(&g, &td, &whole).unwrap();
        assert!(pushed.bags().iter().all(|b| b == &vec![0]));
    }

    #[test]
    fn layering_on_c6() {
        let c6 = Graph::cycle(6);
        let p = layering_partition(&c6).unwrap();
        assert_eq!(p.parts(), &[vec![0], vec![1], vec![5], vec![2], vec![4], vec![3]]);
    }

    #[test]
    fn bipartite_graph_gets_singletons() {
        let g = Graph::cycle(8);
        let td = TreeDecomposition::trivial((0..8).collect(), Shape::Tree);
        let r = bipartite_partition(&g, &td, PartitionStrategy::Layering, None, Caps::default()).unwrap();
        assert_eq!(r.max_diameter, 0);
        assert_eq!(r.partition.len(), 8);
    }

    #[test]
    fn exact_on_c5() {
        let c5 = Graph::cycle(5);
        let (p, w) = exact_bipartite_partition(&c5, EXACT_PARTITION_CAP).unwrap();
        assert_eq!(w, 1);
        assert_eq!(p.parts(), &[vec![0, 1], vec![2], vec![3], vec![4]]);
        assert_eq!(quotient(&c5, &p).unwrap(), Graph::cycle(4));
    }

    #[test]
    fn budget_is_enforced() {
        let c5 = Graph::cycle(5);
        let td = TreeDecomposition::trivial((0..5).collect(), Shape::Tree);
        let r = bipartite_partition(&c5, &td, PartitionStrategy::Layering, Some(0), Caps::default());
        assert_eq!(r.unwrap_err(), Error::BudgetExceeded { achieved: 1, budget: 0 });
        let disconnected = Graph::edgeless(2);
        let td = TreeDecomposition::trivial(vec![0, 1], Shape::Tree);
        assert_eq!(
            bipartite_partition(&disconnected, &td, PartitionStrategy::Layering, None, Caps::default()).unwrap_err(),
            Error::Disconnected
        );
    }

    #[test]
    fn ind_to_tw_examples() {
        let g = Graph::path(5);
        let td = p5_bags();
        let a = augment(&g, &td, 2).unwrap().graph;
        let r = ind_to_tw(&a, &td, 1, &PipelineOptions::default()).unwrap();
        assert!(r.decomposition.width() <= 1);
        r.decomposition.validate(&r.graph).unwrap();

        let k6 = Graph::complete(6);
        let td = TreeDecomposition::trivial((0..6).collect(), Shape::Tree);
        let r = ind_to_tw(&k6, &td, 1, &PipelineOptions::default()).unwrap();
        assert!(r.decomposition.bags().iter().all(|b| b.len() <= 2));

        let c6 = Graph::cycle(6);
        let td = TreeDecomposition::trivial((0..6).collect(), Shape::Tree);
        assert!(matches!(ind_to_tw(&c6, &td, 2, &PipelineOptions::default()), Err(Error::Precondition(_))));
    }

    #[test]
    fn pipeline_on_path() {
        let g = Graph::path(6);
        let td = TreeDecomposition::path((0..5).map(|i| vec![i, i + 1]).collect()).unwrap();
        let r = run_pipeline(&g, &td, 1, 1, &PipelineOptions::default()).unwrap();
        assert!(r.width_out <= 1);
        assert_eq!(r.output_decomposition.shape(), Shape::Path);
        assert!(r.checks().iter().all(|c| c.passed));
        assert_eq!(qi_constant(&g, &r.output, &r.composed_map, 100).unwrap(), r.composed_constant);
    }

    #[test]
    fn pipeline_on_c6() {
        let g = Graph::cycle(6);
        let td = TreeDecomposition::trivial((0..6).collect(), Shape::Tree);
        let r = run_pipeline(&g, &td, 2, 2, &PipelineOptions::default()).unwrap();
        assert!(r.width_out <= 3);
        assert!(r.checks().iter().all(|c| c.passed), "{:?}", r.checks());
        let err = run_pipeline(&g, &td, 1, 2, &PipelineOptions::default()).unwrap_err();
        assert!(matches!(err, Error::Stage { stage: "input", .. }));
    }

    #[test]
    fn pipeline_on_disconnected_input() {
        let g = Graph::new(7, vec![(0, 1), (1, 2), (2, 0), (3, 4), (4, 5)]).unwrap();
        let td = TreeDecomposition::path(vec![vec![0, 1, 2], vec![3, 4], vec![4, 5], vec![6]]).unwrap();
        let r = run_pipeline(&g, &td, 1, 1, &PipelineOptions::default()).unwrap();
        assert_eq!(r.components, 3);
        assert_eq!(r.output_decomposition.shape(), Shape::Path);
        r.output_decomposition.validate(&r.output).unwrap();
        assert!(r.width_out <= 1);
        assert!(r.checks().iter().all(|c| c.passed));
        assert_eq!(r.composed_map.as_slice().len(), 7);
    }
}
