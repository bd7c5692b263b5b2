//! Quasi-isometries between graphs: measuring the constant of a vertex map,
//! composing maps, and pulling a decomposition of the target back to the
//! source.

use serde::Serialize;

use crate::decomposition::TreeDecomposition;
use crate::error::{Error, Result};
use crate::graph::{Graph, GraphId, Vertex};

/// A total vertex map from a source graph into a target graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasiIsometryMap {
    source: GraphId,
    target: GraphId,
    target_n: usize,
    map: Vec<Vertex>,
    measured: Option<u32>,
}

impl QuasiIsometryMap {
    pub fn new(source: &Graph, target: &Graph, map: Vec<Vertex>) -> Result<Self> {
        if map.len() != source.n() {
            return Err(Error::InvalidMap(format!(
                "map has {} entries for a source graph on {} vertices",
                map.len(),
                source.n()
            )));
        }
        if let Some(&x) = map.iter().find(|&&x| x >= target.n()) {
            return Err(Error::InvalidMap(format!("image {x} outside a target graph on {} vertices", target.n())));
        }
        Ok(QuasiIsometryMap { source: source.id(), target: target.id(), target_n: target.n(), map, measured: None })
    }

    pub fn identity(source: &Graph, target: &Graph) -> Result<Self> {
        QuasiIsometryMap::new(source, target, source.vertices().collect())
    }

    pub fn source(&self) -> GraphId {
        self.source
    }

    pub fn target(&self) -> GraphId {
        self.target
    }

    pub fn image(&self, v: Vertex) -> Vertex {
        self.map[v]
    }

    pub fn as_slice(&self) -> &[Vertex] {
        &self.map
    }

    pub fn measured(&self) -> Option<u32> {
        self.measured
    }

    /// Measures the minimal constant and stores it on the map.
    pub fn measure(mut self, g: &Graph, h: &Graph, qmax: u32) -> Result<Self> {
        self.measured = Some(qi_constant(g, h, &self, qmax)?);
        Ok(self)
    }

    fn check_graphs(&self, g: &Graph, h: &Graph) -> Result<()> {
        if self.source != g.id() || self.target != h.id() || self.target_n != h.n() {
            return Err(Error::InvalidMap(format!(
                "map goes {} -> {}, graphs are {} and {}",
                self.source,
                self.target,
                g.id(),
                h.id()
            )));
        }
        Ok(())
    }
}

/// Smallest `q >= 1` with `dist_g/q - q <= dist_h <= q*dist_g + q` on all
/// pairs and every target vertex within `q` of the image.
fn pair_requirement(dg: u32, dh: u32) -> u32 {
    let (dg, dh) = (dg as u64, dh as u64);
    let upper = dh.div_ceil(dg + 1);
    // dist_g / q - q <= dist_h  <=>  dist_g <= q*q + q*dist_h
    let mut lower = 1;
    while lower * lower + lower * dh < dg {
        lower += 1;
    }
    upper.max(lower).max(1) as u32
}

/// Minimal quasi-isometry constant of `phi`, or `NotWithin(qmax)`.
///
/// Each of the three defining conditions is monotone in `q`, so the minimal
/// constant is the largest per-pair (and per-target-vertex) requirement.
pub fn qi_constant(g: &Graph, h: &Graph, phi: &QuasiIsometryMap, qmax: u32) -> Result<u32> {
    phi.check_graphs(g, h)?;
    if g.n() == 0 || h.n() == 0 {
        return Err(Error::InvalidMap("quasi-isometries need non-empty graphs".into()));
    }
    if !g.is_connected() || !h.is_connected() {
        return Err(Error::Disconnected);
    }
    let dg = g.distances();
    let dh = h.distances();
    let mut q = 1u32;
    for u in g.vertices() {
        for v in u + 1..g.n() {
            let a = dg.raw(u, v).expect("connected");
            let b = dh.raw(phi.map[u], phi.map[v]).expect("connected");
            q = q.max(pair_requirement(a, b));
        }
    }
    let mut in_image = vec![false; h.n()];
    for &x in &phi.map {
        in_image[x] = true;
    }
    let images: Vec<Vertex> = h.vertices().filter(|&x| in_image[x]).collect();
    for x in h.vertices() {
        let cover = images.iter().map(|&y| dh.raw(x, y).expect("connected")).min().unwrap();
        q = q.max(cover);
    }
    if q > qmax {
        Err(Error::NotWithin(qmax))
    } else {
        Ok(q)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompositionBound {
    pub first: u32,
    pub second: u32,
    /// `second * (first + 2)`.
    pub bound: u64,
    pub measured: u32,
}

/// Composes `phi1: g -> g1` with `phi2: g1 -> g2`. Both maps must already be
/// measured; the composite is re-measured and checked against
/// `q * (c + 2)` where `c` and `q` are the two constants.
pub fn compose(
    g: &Graph,
    g1: &Graph,
    g2: &Graph,
    phi1: &QuasiIsometryMap,
    phi2: &QuasiIsometryMap,
) -> Result<(QuasiIsometryMap, CompositionBound)> {
    if phi1.target != phi2.source {
        return Err(Error::CompositionMismatch { left: phi1.target.to_string(), right: phi2.source.to_string() });
    }
    phi1.check_graphs(g, g1)?;
    phi2.check_graphs(g1, g2)?;
    let (Some(c), Some(q)) = (phi1.measured, phi2.measured) else {
        return Err(Error::Precondition("both maps must be measured before composing".into()));
    };
    let map = phi1.map.iter().map(|&x| phi2.map[x]).collect();
    let composed = QuasiIsometryMap::new(g, g2, map)?.measure(g, g2, u32::MAX)?;
    let measured = composed.measured.unwrap();
    let bound = q as u64 * (c as u64 + 2);
    if measured as u64 > bound {
        return Err(Error::BoundViolated { name: "q(c+2)", measured: measured as u64, bound });
    }
    Ok((composed, CompositionBound { first: c, second: q, bound, measured }))
}

/// Source vertices whose image lies within `radius` of `x` in `h`.
pub fn ball_preimage(h: &Graph, phi: &QuasiIsometryMap, x: Vertex, radius: u32) -> Vec<Vertex> {
    let dh = h.distances();
    (0..phi.map.len()).filter(|&v| dh.get(phi.map[v], x).is_within(radius)).collect()
}

/// Vertex number `ceil(len/2)` on the lexicographically smallest shortest
/// path from `a` to `b`.
pub fn middle_vertex(h: &Graph, a: Vertex, b: Vertex) -> Option<Vertex> {
    let dh = h.distances();
    let len = dh.raw(a, b)?;
    let mut cur = a;
    for step in 0..len.div_ceil(2) {
        let remaining = len - step;
        cur = *h
            .neighbors(cur)
            .iter()
            .find(|&&w| dh.raw(w, b) == Some(remaining - 1))
            .expect("a shortest path continues");
    }
    Some(cur)
}

/// Pulls a decomposition of `h` back along a `c`-quasi-isometry
/// `phi: g -> h`: each node gets every source vertex whose image is within
/// `c` of some vertex of the node's bag. If `td_h` has width k the result is
/// (k+1, 3c^2)-centred.
pub fn pullback_decomposition(
    g: &Graph,
    h: &Graph,
    phi: &QuasiIsometryMap,
    td_h: &TreeDecomposition,
    c: u32,
) -> Result<TreeDecomposition> {
    if c == 0 {
        return Err(Error::InvalidParams("the quasi-isometry constant must be positive".into()));
    }
    match qi_constant(g, h, phi, c) {
        Ok(_) => {}
        Err(Error::NotWithin(_)) => {
            return Err(Error::Precondition(format!("map is not a {c}-quasi-isometry")));
        }
        Err(e) => return Err(e),
    }
    td_h.validate(h)?;
    let mut cache: Vec<Option<Vec<Vertex>>> = vec![None; h.n()];
    let mut bags = Vec::with_capacity(td_h.node_count());
    let mut seen = vec![false; g.n()];
    for bag in td_h.bags() {
        let mut out = Vec::new();
        for &x in bag {
            let ball = cache[x].get_or_insert_with(|| ball_preimage(h, phi, x, c));
            for &v in ball.iter() {
                if !seen[v] {
                    seen[v] = true;
                    out.push(v);
                }
            }
        }
        for &v in &out {
            seen[v] = false;
        }
        out.sort_unstable();
        bags.push(out);
    }
    td_h.with_bags(bags)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::{centred_check_decomposition, CentredMode, Shape};

    fn measured(g: &Graph, h: &Graph, map: Vec<Vertex>) -> u32 {
        let phi = QuasiIsometryMap::new(g, h, map).unwrap();
        qi_constant(g, h, &phi, 100).unwrap()
    }

    #[test]
    fn identity_is_one() {
        let g = Graph::cycle(7);
        assert_eq!(measured(&g, &g, g.vertices().collect()), 1);
    }

    #[test]
    fn collapse_c6_to_point() {
        let c6 = Graph::cycle(6);
        let k1 = Graph::edgeless(1);
        assert_eq!(measured(&c6, &k1, vec![0; 6]), 2);
        let phi = QuasiIsometryMap::new(&c6, &k1, vec![0; 6]).unwrap();
        assert_eq!(qi_constant(&c6, &k1, &phi, 1), Err(Error::NotWithin(1)));
    }

    #[test]
    fn chords_halve_distances() {
        let p5 = Graph::path(5);
        let chorded = Graph::new(5, vec![(0, 1), (1, 2), (2, 3), (3, 4), (0, 2), (2, 4)]).unwrap();
        assert_eq!(measured(&p5, &chorded, (0..5).collect()), 2);
    }

    #[test]
    fn disconnected_is_rejected() {
        let g = Graph::edgeless(2);
        let phi = QuasiIsometryMap::identity(&g, &g).unwrap();
        assert_eq!(qi_constant(&g, &g, &phi, 10), Err(Error::Disconnected));
    }

    #[test]
    fn wrong_graphs_are_rejected() {
        let g = Graph::path(3);
        let h = Graph::cycle(3);
        let phi = QuasiIsometryMap::identity(&g, &g).unwrap();
        assert!(matches!(qi_constant(&g, &h, &phi, 10), Err(Error::InvalidMap(_))));
        assert!(QuasiIsometryMap::new(&g, &h, vec![0, 1]).is_err());
        assert!(QuasiIsometryMap::new(&g, &h, vec![0, 1, 3]).is_err());
    }

    #[test]
    fn compose_identities() {
        let g = Graph::path(4);
        let id = QuasiIsometryMap::identity(&g, &g).unwrap().measure(&g, &g, 10).unwrap();
        let (map, b) = compose(&g, &g, &g, &id, &id).unwrap();
        assert_eq!(b.bound, 3);
        assert_eq!(b.measured, 1);
        assert_eq!(map.measured(), Some(1));
    }

    #[test]
    fn compose_bound_formula() {
        let p5 = Graph::path(5);
        let chorded = Graph::new(5, vec![(0, 1), (1, 2), (2, 3), (3, 4), (0, 2), (2, 4)]).unwrap();
        let phi1 = QuasiIsometryMap::identity(&p5, &chorded).unwrap().measure(&p5, &chorded, 10).unwrap();
        let phi2 = QuasiIsometryMap::identity(&chorded, &chorded).unwrap().measure(&chorded, &chorded, 10).unwrap();
        let (_, b) = compose(&p5, &chorded, &chorded, &phi1, &phi2).unwrap();
        assert_eq!((b.first, b.second, b.bound), (2, 1, 4));
        assert!(b.measured <= 4);
    }

    #[test]
    fn compose_mismatch() {
        let g = Graph::path(3);
        let h = Graph::cycle(3);
        let a = QuasiIsometryMap::identity(&g, &g).unwrap().measure(&g, &g, 5).unwrap();
        let b = QuasiIsometryMap::identity(&h, &h).unwrap().measure(&h, &h, 5).unwrap();
        assert!(matches!(compose(&g, &g, &h, &a, &b), Err(Error::CompositionMismatch { .. })));
    }

    #[test]
    fn middle_vertex_is_lexicographic() {
        let c6 = Graph::cycle(6);
        // Shortest paths 0-1-2-3 and 0-5-4-3; the smaller one goes through 1.
        assert_eq!(middle_vertex(&c6, 0, 3), Some(2));
        assert_eq!(middle_vertex(&c6, 0, 2), Some(1));
        assert_eq!(middle_vertex(&c6, 4, 4), Some(4));
    }

    #[test]
    fn pullback_p3_identity() {
        let p3 = Graph::path(3);
        let phi = QuasiIsometryMap::identity(&p3, &p3).unwrap();
        let td = TreeDecomposition::path(vec![vec![0, 1], vec![1, 2]]).unwrap();
        let out = pullback_decomposition(&p3, &p3, &phi, &td, 1).unwrap();
        assert_eq!(out.bags(), &[vec![0, 1, 2], vec![0, 1, 2]]);
        assert_eq!(out.shape(), Shape::Path);
        out.validate(&p3).unwrap();
        assert!(centred_check_decomposition(&p3, &out, 2, 3, CentredMode::Exact, 20).unwrap().holds());
    }

    #[test]
    fn pullback_subdivided_p3() {
        // P5 = P3 with both edges subdivided; 1 -> 0, 3 -> 2 (nearest branch endpoint).
        let p5 = Graph::path(5);
        let p3 = Graph::path(3);
        let phi = QuasiIsometryMap::new(&p5, &p3, vec![0, 0, 1, 1, 2]).unwrap();
        let td = TreeDecomposition::path(vec![vec![0, 1], vec![1, 2]]).unwrap();
        let out = pullback_decomposition(&p5, &p3, &phi, &td, 2).unwrap();
        out.validate(&p5).unwrap();
        assert!(centred_check_decomposition(&p5, &out, 2, 12, CentredMode::Exact, 20).unwrap().holds());
    }

    #[test]
    fn pullback_to_point() {
        let c6 = Graph::cycle(6);
        let k1 = Graph::edgeless(1);
        let phi = QuasiIsometryMap::new(&c6, &k1, vec![0; 6]).unwrap();
        let td = TreeDecomposition::trivial(vec![0], Shape::Tree);
        let out = pullback_decomposition(&c6, &k1, &phi, &td, 2).unwrap();
        assert_eq!(out.bags(), &[(0..6).collect::<Vec<_>>()]);
        let r = centred_check_decomposition(&c6, &out, 2, 12, CentredMode::Exact, 20).unwrap();
        assert_eq!(r.max_parts(), Some(1));
        assert!(matches!(pullback_decomposition(&c6, &k1, &phi, &td, 1), Err(Error::Precondition(_))));
    }
}
