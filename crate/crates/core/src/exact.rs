//! Exact solvers for small graphs: colouring, independence, domination and
//! treewidth. All of them work on `u128` adjacency masks, so no instance may
//! exceed [`MAX_EXACT`] vertices regardless of the configured cap.

use crate::decomposition::{Shape, TreeDecomposition};
use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};

pub(crate) type Mask = u128;

pub const MAX_EXACT: usize = 128;
pub const DEFAULT_CAP: usize = 20;
pub const DEFAULT_TW_CAP: usize = 16;
/// The subset DP keeps one byte per vertex subset, so this is a memory limit.
const MAX_TW: usize = 26;

/// Size limits for the exponential solvers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    pub exact: usize,
    pub treewidth: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { exact: DEFAULT_CAP, treewidth: DEFAULT_TW_CAP }
    }
}

impl Caps {
    pub fn with_exact(exact: usize) -> Self {
        Caps { exact, ..Caps::default() }
    }
}

pub(crate) fn check_cap(size: usize, cap: usize) -> Result<()> {
    let cap = cap.min(MAX_EXACT);
    if size > cap {
        Err(Error::TooLarge { size, cap })
    } else {
        Ok(())
    }
}

#[inline]
pub(crate) fn bit(v: usize) -> Mask {
    1 << v
}

pub(crate) fn iter_bits(mut m: Mask) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let v = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(v)
        }
    })
}

#[inline]
fn full(n: usize) -> Mask {
    if n == MAX_EXACT {
        !0
    } else {
        (1 << n) - 1
    }
}

pub(crate) fn adjacency_masks(g: &Graph) -> Vec<Mask> {
    debug_assert!(g.n() <= MAX_EXACT);
    g.vertices()
        .map(|v| g.neighbors(v).iter().fold(0, |m, &w| m | bit(w)))
        .collect()
}

fn mask_to_vec(m: Mask) -> Vec<Vertex> {
    iter_bits(m).collect()
}

// ---------------------------------------------------------------------------
// Colouring

/// Colour classes as `colour[v]`, numbered from zero.
pub type Colouring = Vec<usize>;

pub fn exact_chromatic_number(g: &Graph, cap: usize) -> Result<usize> {
    Ok(exact_colouring(g, cap)?.iter().max().map_or(0, |&c| c + 1))
}

/// An optimal colouring found by DSATUR branch and bound.
pub fn exact_colouring(g: &Graph, cap: usize) -> Result<Colouring> {
    check_cap(g.n(), cap)?;
    let n = g.n();
    if n == 0 {
        return Ok(Vec::new());
    }
    let adj = adjacency_masks(g);
    let mut search = Dsatur {
        adj: &adj,
        n,
        colour: vec![usize::MAX; n],
        classes: Vec::new(),
        best: greedy_colouring(g),
        best_k: 0,
        lower: greedy_clique(&adj, n),
    };
    search.best_k = search.best.iter().max().unwrap() + 1;
    if search.best_k > search.lower {
        search.run(0);
    }
    Ok(search.best)
}

struct Dsatur<'a> {
    adj: &'a [Mask],
    n: usize,
    colour: Vec<usize>,
    classes: Vec<Mask>,
    best: Colouring,
    best_k: usize,
    lower: usize,
}

impl Dsatur<'_> {
    fn pick(&self) -> Option<usize> {
        let uncoloured = (0..self.n).filter(|&v| self.colour[v] == usize::MAX);
        uncoloured.max_by_key(|&v| {
            let sat = self.classes.iter().filter(|&&c| c & self.adj[v] != 0).count();
            let deg = iter_bits(self.adj[v]).filter(|&w| self.colour[w] == usize::MAX).count();
            (sat, deg, usize::MAX - v)
        })
    }

    fn run(&mut self, coloured: usize) {
        let used = self.classes.len();
        if coloured == self.n {
            if used < self.best_k {
                self.best_k = used;
                self.best = self.colour.clone();
            }
            return;
        }
        if used >= self.best_k {
            return;
        }
        let v = self.pick().expect("an uncoloured vertex remains");
        for c in 0..used {
            if self.classes[c] & self.adj[v] == 0 {
                self.colour[v] = c;
                self.classes[c] |= bit(v);
                self.run(coloured + 1);
                self.classes[c] &= !bit(v);
                self.colour[v] = usize::MAX;
                if self.best_k <= self.lower {
                    return;
                }
            }
        }
        if used + 1 < self.best_k {
            self.colour[v] = used;
            self.classes.push(bit(v));
            self.run(coloured + 1);
            self.classes.pop();
            self.colour[v] = usize::MAX;
        }
    }
}

fn greedy_clique(adj: &[Mask], n: usize) -> usize {
    (0..n)
        .map(|s| {
            let mut clique = bit(s);
            let mut cand = adj[s];
            while cand != 0 {
                let v = iter_bits(cand).max_by_key(|&v| (adj[v] & cand).count_ones()).unwrap();
                clique |= bit(v);
                cand &= adj[v];
            }
            clique.count_ones() as usize
        })
        .max()
        .unwrap_or(0)
}

/// First-fit colouring in vertex order. An upper bound only.
pub fn greedy_colouring(g: &Graph) -> Colouring {
    let mut colour = vec![usize::MAX; g.n()];
    for v in g.vertices() {
        let mut c = 0;
        while g.neighbors(v).iter().any(|&w| colour[w] == c) {
            c += 1;
        }
        colour[v] = c;
    }
    colour
}

/// The lexicographically smallest proper colouring (compared as the sequence
/// `colour[0], colour[1], ...`) using at most `colours` colours, or `None`.
pub fn lex_first_colouring(g: &Graph, colours: usize, cap: usize) -> Result<Option<Colouring>> {
    check_cap(g.n(), cap)?;
    if g.n() == 0 {
        return Ok(Some(Vec::new()));
    }
    if colours == 0 {
        return Ok(None);
    }
    let colours = colours.min(g.n());
    let adj = adjacency_masks(g);
    let mut domains = vec![full(colours); g.n()];
    let mut colour = vec![0; g.n()];
    let found = lex_rec(&adj, 0, 0, &mut domains, &mut colour);
    Ok(found.then_some(colour))
}

fn lex_rec(adj: &[Mask], v: usize, used: usize, domains: &mut [Mask], colour: &mut [usize]) -> bool {
    let n = adj.len();
    if v == n {
        return true;
    }
    // New colours beyond `used` are interchangeable, so only the first is tried.
    let allowed = domains[v] & full(used + 1);
    for c in iter_bits(allowed) {
        let later = adj[v] & !full(v + 1);
        let saved: Vec<(usize, Mask)> = iter_bits(later).map(|w| (w, domains[w])).collect();
        let mut dead = false;
        for &(w, dom) in &saved {
            domains[w] = dom & !bit(c);
            dead |= domains[w] == 0;
        }
        if !dead {
            colour[v] = c;
            if lex_rec(adj, v + 1, used.max(c + 1), domains, colour) {
                return true;
            }
        }
        for (w, dom) in saved {
            domains[w] = dom;
        }
    }
    false
}

// ---------------------------------------------------------------------------
// Independent sets

pub fn exact_independence_number(g: &Graph, cap: usize) -> Result<usize> {
    Ok(maximum_independent_set(g, cap)?.len())
}

pub fn maximum_independent_set(g: &Graph, cap: usize) -> Result<Vec<Vertex>> {
    check_cap(g.n(), cap)?;
    Ok(mask_to_vec(mis_mask(&adjacency_masks(g), g.n())))
}

/// Maximum independent set of the graph given by `adj` on `0..n`.
pub(crate) fn mis_mask(adj: &[Mask], n: usize) -> Mask {
    let mut best = 0;
    mis_rec(adj, full(n), 0, &mut best);
    best
}

fn mis_rec(adj: &[Mask], mut cand: Mask, mut chosen: Mask, best: &mut Mask) {
    // Vertices of degree at most one inside `cand` can always be taken.
    loop {
        let Some(v) = iter_bits(cand).find(|&v| (adj[v] & cand).count_ones() <= 1) else {
            break;
        };
        chosen |= bit(v);
        cand &= !(adj[v] | bit(v));
    }
    if cand == 0 {
        if chosen.count_ones() > best.count_ones() {
            *best = chosen;
        }
        return;
    }
    if chosen.count_ones() + cand.count_ones() <= best.count_ones() {
        return;
    }
    let v = iter_bits(cand).max_by_key(|&v| (adj[v] & cand).count_ones()).unwrap();
    mis_rec(adj, cand & !(adj[v] | bit(v)), chosen | bit(v), best);
    mis_rec(adj, cand & !bit(v), chosen, best);
}

// ---------------------------------------------------------------------------
// Domination

pub fn exact_domination_number(g: &Graph, cap: usize) -> Result<usize> {
    Ok(minimum_dominating_set(g, cap)?.len())
}

pub fn minimum_dominating_set(g: &Graph, cap: usize) -> Result<Vec<Vertex>> {
    if g.n() == 0 {
        return Err(Error::EmptySet);
    }
    check_cap(g.n(), cap)?;
    let adj = adjacency_masks(g);
    let closed: Vec<Mask> = adj.iter().enumerate().map(|(v, &m)| m | bit(v)).collect();
    Ok(mask_to_vec(min_dominating_mask(&closed, full(g.n()))))
}

/// Smallest set of vertices whose closed neighbourhoods cover `target`.
/// Candidates are every vertex with a non-empty `closed` entry.
pub(crate) fn min_dominating_mask(closed: &[Mask], target: Mask) -> Mask {
    let mut best = greedy_cover(closed, target);
    cover_rec(closed, target, 0, &mut best);
    best
}

fn greedy_cover(closed: &[Mask], mut target: Mask) -> Mask {
    let mut chosen = 0;
    while target != 0 {
        let v = (0..closed.len()).max_by_key(|&v| ((closed[v] & target).count_ones(), usize::MAX - v)).unwrap();
        assert!(closed[v] & target != 0, "target contains an uncoverable vertex");
        chosen |= bit(v);
        target &= !closed[v];
    }
    chosen
}

fn cover_rec(closed: &[Mask], uncovered: Mask, chosen: Mask, best: &mut Mask) {
    if uncovered == 0 {
        if chosen.count_ones() < best.count_ones() {
            *best = chosen;
        }
        return;
    }
    let count = chosen.count_ones();
    if count + 1 >= best.count_ones() {
        return;
    }
    let max_cover = closed.iter().map(|&c| (c & uncovered).count_ones()).max().unwrap_or(0);
    if max_cover == 0 {
        return;
    }
    let need = uncovered.count_ones().div_ceil(max_cover);
    if count + need >= best.count_ones() {
        return;
    }
    // Branch on the uncovered vertex with the fewest ways to be covered.
    let candidates_for = |u: usize| -> Mask {
        (0..closed.len()).filter(|&w| closed[w] & bit(u) != 0).fold(0, |m, w| m | bit(w))
    };
    let u = iter_bits(uncovered).min_by_key(|&u| candidates_for(u).count_ones()).unwrap();
    let mut options: Vec<usize> = iter_bits(candidates_for(u)).collect();
    options.sort_by_key(|&w| std::cmp::Reverse((closed[w] & uncovered).count_ones()));
    for w in options {
        cover_rec(closed, uncovered & !closed[w], chosen | bit(w), best);
    }
}

// ---------------------------------------------------------------------------
// Treewidth

#[derive(Clone, Debug)]
pub struct Treewidth {
    pub width: usize,
    pub order: Vec<Vertex>,
    pub decomposition: TreeDecomposition,
}

/// Exact treewidth by dynamic programming over vertex subsets, with an
/// optimal elimination order and the decomposition it induces.
pub fn exact_treewidth(g: &Graph, cap: usize) -> Result<Treewidth> {
    let n = g.n();
    let limit = cap.min(MAX_TW);
    if n > limit {
        return Err(Error::TooLarge { size: n, cap: limit });
    }
    if n == 0 {
        let decomposition = TreeDecomposition::new(vec![Vec::new()], Vec::new(), Shape::Tree)?;
        return Ok(Treewidth { width: 0, order: Vec::new(), decomposition });
    }
    let adj = adjacency_masks(g);
    let size = 1usize << n;
    // tw[S] + 1, so the empty set can hold -1.
    let mut table = vec![u8::MAX; size];
    table[0] = 0;
    for s in 1..size {
        let set = s as Mask;
        let mut best = u8::MAX;
        for v in iter_bits(set) {
            let rest = set & !bit(v);
            let q = q_size(&adj, rest, v) as u8 + 1;
            let cand = table[rest as usize].max(q);
            best = best.min(cand);
        }
        table[s] = best;
    }
    let width = table[size - 1] as usize - 1;

    let mut order = Vec::with_capacity(n);
    let mut set = full(n);
    while set != 0 {
        let v = iter_bits(set)
            .find(|&v| {
                let rest = set & !bit(v);
                table[rest as usize].max(q_size(&adj, rest, v) as u8 + 1) == table[set as usize]
            })
            .expect("dp table is consistent");
        order.push(v);
        set &= !bit(v);
    }
    order.reverse();
    let decomposition = decomposition_from_order(g, &order)?;
    Ok(Treewidth { width, order, decomposition })
}

/// Number of vertices outside `set + v` reachable from `v` through `set`.
fn q_size(adj: &[Mask], set: Mask, v: usize) -> u32 {
    let mut comp = bit(v);
    let mut frontier = bit(v);
    while frontier != 0 {
        let next = iter_bits(frontier).fold(0, |m, u| m | adj[u]) & set & !comp;
        comp |= next;
        frontier = next;
    }
    let reach = iter_bits(comp).fold(0, |m, u| m | adj[u]);
    (reach & !set & !bit(v)).count_ones()
}

/// Tree decomposition induced by an elimination order: node `i` holds the
/// `i`-th eliminated vertex with its later neighbours in the fill graph.
pub fn decomposition_from_order(g: &Graph, order: &[Vertex]) -> Result<TreeDecomposition> {
    let n = g.n();
    if order.len() != n {
        return Err(Error::InvalidParams("elimination order must list every vertex once".into()));
    }
    let mut position = vec![usize::MAX; n];
    for (i, &v) in order.iter().enumerate() {
        if v >= n || position[v] != usize::MAX {
            return Err(Error::InvalidParams("elimination order must list every vertex once".into()));
        }
        position[v] = i;
    }
    let mut fill: Vec<Vec<bool>> = vec![vec![false; n]; n];
    for &(u, v) in g.edges() {
        fill[u][v] = true;
        fill[v][u] = true;
    }
    let mut bags = Vec::with_capacity(n);
    let mut edges = Vec::new();
    let mut roots = Vec::new();
    for (i, &v) in order.iter().enumerate() {
        let later: Vec<Vertex> = (0..n).filter(|&w| fill[v][w] && position[w] > i).collect();
        for (a, &x) in later.iter().enumerate() {
            for &y in &later[a + 1..] {
                fill[x][y] = true;
                fill[y][x] = true;
            }
        }
        match later.iter().map(|&w| position[w]).min() {
            Some(p) => edges.push((i, p)),
            None => roots.push(i),
        }
        let mut bag = later;
        bag.push(v);
        bag.sort_unstable();
        bags.push(bag);
    }
    for pair in roots.windows(2) {
        edges.push((pair[0], pair[1]));
    }
    TreeDecomposition::new(bags, edges, Shape::Tree)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn proper(g: &Graph, c: &[usize]) -> bool {
        g.edges().iter().all(|&(u, v)| c[u] != c[v])
    }

    #[test]
    fn chromatic_examples() {
        assert_eq!(exact_chromatic_number(&Graph::cycle(4), DEFAULT_CAP).unwrap(), 2);
        assert_eq!(exact_chromatic_number(&Graph::cycle(5), DEFAULT_CAP).unwrap(), 3);
        assert_eq!(exact_chromatic_number(&Graph::complete(4), DEFAULT_CAP).unwrap(), 4);
        assert_eq!(exact_chromatic_number(&Graph::edgeless(3), DEFAULT_CAP).unwrap(), 1);
        assert_eq!(exact_chromatic_number(&Graph::edgeless(0), DEFAULT_CAP).unwrap(), 0);
    }

    #[test]
    fn chromatic_too_large() {
        assert_eq!(
            exact_chromatic_number(&Graph::path(21), DEFAULT_CAP),
            Err(Error::TooLarge { size: 21, cap: 20 })
        );
        assert_eq!(exact_chromatic_number(&Graph::path(21), 30).unwrap(), 2);
    }

    #[test]
    fn petersen_needs_three_colours() {
        let outer = (0..5).map(|i| (i, (i + 1) % 5));
        let spokes = (0..5).map(|i| (i, i + 5));
        let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
        let g = Graph::from_edge_set(10, outer.chain(spokes).chain(inner)).unwrap();
        let c = exact_colouring(&g, DEFAULT_CAP).unwrap();
        assert!(proper(&g, &c));
        assert_eq!(c.iter().max().unwrap() + 1, 3);
        assert_eq!(exact_independence_number(&g, DEFAULT_CAP).unwrap(), 4);
        assert_eq!(exact_domination_number(&g, DEFAULT_CAP).unwrap(), 3);
    }

    #[test]
    fn lex_first_is_lexicographic() {
        let c5 = Graph::cycle(5);
        assert_eq!(lex_first_colouring(&c5, 2, DEFAULT_CAP).unwrap(), None);
        assert_eq!(lex_first_colouring(&c5, 3, DEFAULT_CAP).unwrap(), Some(vec![0, 1, 0, 1, 2]));
        let p = Graph::path(4);
        assert_eq!(lex_first_colouring(&p, 5, DEFAULT_CAP).unwrap(), Some(vec![0, 1, 0, 1]));
    }

    #[test]
    fn independence_examples() {
        assert_eq!(exact_independence_number(&Graph::edgeless(5), DEFAULT_CAP).unwrap(), 5);
        assert_eq!(exact_independence_number(&Graph::complete(4), DEFAULT_CAP).unwrap(), 1);
        assert_eq!(exact_independence_number(&Graph::cycle(6), DEFAULT_CAP).unwrap(), 3);
        let set = maximum_independent_set(&Graph::cycle(7), DEFAULT_CAP).unwrap();
        assert_eq!(set.len(), 3);
    }

    #[test]
    fn domination_examples() {
        assert_eq!(exact_domination_number(&Graph::star(3), DEFAULT_CAP).unwrap(), 1);
        assert_eq!(exact_domination_number(&Graph::cycle(6), DEFAULT_CAP).unwrap(), 2);
        assert_eq!(exact_domination_number(&Graph::edgeless(1), DEFAULT_CAP).unwrap(), 1);
        assert_eq!(exact_domination_number(&Graph::edgeless(0), DEFAULT_CAP), Err(Error::EmptySet));
        assert_eq!(exact_domination_number(&Graph::path(10), DEFAULT_CAP).unwrap(), 4);
    }

    #[test]
    fn treewidth_examples() {
        let tree = Graph::new(5, vec![(0, 1), (0, 2), (2, 3), (2, 4)]).unwrap();
        assert_eq!(exact_treewidth(&tree, DEFAULT_TW_CAP).unwrap().width, 1);
        assert_eq!(exact_treewidth(&Graph::cycle(6), DEFAULT_TW_CAP).unwrap().width, 2);
        assert_eq!(exact_treewidth(&Graph::complete(4), DEFAULT_TW_CAP).unwrap().width, 3);
        assert_eq!(exact_treewidth(&Graph::edgeless(3), DEFAULT_TW_CAP).unwrap().width, 0);
        assert!(matches!(exact_treewidth(&Graph::path(17), DEFAULT_TW_CAP), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn treewidth_witness_is_valid() {
        // 3x3 grid has treewidth 3.
        let mut edges = Vec::new();
        for r in 0..3 {
            for c in 0..3 {
                let v = r * 3 + c;
                if c < 2 {
                    edges.push((v, v + 1));
                }
                if r < 2 {
                    edges.push((v, v + 3));
                }
            }
        }
        let g = Graph::new(9, edges).unwrap();
        let tw = exact_treewidth(&g, DEFAULT_TW_CAP).unwrap();
        assert_eq!(tw.width, 3);
        tw.decomposition.validate(&g).unwrap();
        assert_eq!(tw.decomposition.width(), 3);
    }
}
