//! Brute-force reference implementations straight from the definitions.
//! Distances come from Floyd-Warshall, independent of the library's BFS.

#![allow(dead_code)]

use qitw_core::{Graph, Vertex};

pub type Dist = Vec<Vec<Option<u32>>>;

pub fn floyd(g: &Graph) -> Dist {
    let n = g.n();
    let mut d = vec![vec![None; n]; n];
    for (v, row) in d.iter_mut().enumerate() {
        row[v] = Some(0);
    }
    for &(u, v) in g.edges() {
        d[u][v] = Some(1);
        d[v][u] = Some(1);
    }
    for m in 0..n {
        for a in 0..n {
            for b in 0..n {
                if let (Some(x), Some(y)) = (d[a][m], d[m][b]) {
                    if d[a][b].is_none_or(|z| x + y < z) {
                        d[a][b] = Some(x + y);
                    }
                }
            }
        }
    }
    d
}

/// Smallest `q` in `1..=qmax` satisfying the three defining conditions,
/// tested one `q` at a time with integer arithmetic. `None` if no `q` works
/// or a distance is infinite.
pub fn qi_scan(g: &Graph, h: &Graph, map: &[Vertex], qmax: u32) -> Option<u32> {
    let dg = floyd(g);
    let dh = floyd(h);
    let n = g.n();
    'q: for q in 1..=qmax as u64 {
        for u in 0..n {
            for v in 0..n {
                let a = dg[u][v]? as u64;
                let b = dh[map[u]][map[v]]? as u64;
                // a/q - q <= b  <=>  a <= q*b + q*q
                if a > q * b + q * q || b > q * a + q {
                    continue 'q;
                }
            }
        }
        for row in &dh {
            let near = map.iter().filter_map(|&y| row[y]).min()?;
            if near as u64 > q {
                continue 'q;
            }
        }
        return Some(q as u32);
    }
    None
}

/// Every set partition of `items` as restricted growth strings.
pub fn set_partitions(len: usize, mut visit: impl FnMut(&[usize], usize)) {
    fn rec(i: usize, blocks: usize, rgs: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize], usize)) {
        if i == rgs.len() {
            visit(rgs, blocks);
            return;
        }
        for b in 0..=blocks {
            rgs[i] = b;
            rec(i + 1, blocks.max(b + 1), rgs, visit);
        }
    }
    if len == 0 {
        visit(&[], 0);
        return;
    }
    let mut rgs = vec![0; len];
    rec(0, 0, &mut rgs, &mut visit);
}

/// Fewest blocks of weak diameter at most `d` partitioning `set`.
pub fn min_centred_parts(g: &Graph, set: &[Vertex], d: u32) -> usize {
    let dist = floyd(g);
    let mut best = usize::MAX;
    set_partitions(set.len(), |rgs, blocks| {
        if blocks >= best {
            return;
        }
        for i in 0..set.len() {
            for j in i + 1..set.len() {
                if rgs[i] == rgs[j] && !dist[set[i]][set[j]].is_some_and(|x| x <= d) {
                    return;
                }
            }
        }
        best = blocks;
    });
    best
}

/// Largest induced matching among the edges crossing `(side, V - side)`,
/// by checking every subset of the cut.
pub fn simval_brute(g: &Graph, side: &[Vertex]) -> usize {
    let inside: Vec<bool> = (0..g.n()).map(|v| side.contains(&v)).collect();
    let cut: Vec<(Vertex, Vertex)> = g.edges().iter().copied().filter(|&(u, v)| inside[u] != inside[v]).collect();
    assert!(cut.len() <= 20);
    let mut best = 0;
    for mask in 0u32..(1 << cut.len()) {
        let chosen: Vec<_> = (0..cut.len()).filter(|&i| mask >> i & 1 == 1).map(|i| cut[i]).collect();
        if chosen.len() <= best {
            continue;
        }
        let ends: Vec<Vertex> = chosen.iter().flat_map(|&(a, b)| [a, b]).collect();
        let mut distinct = ends.clone();
        distinct.sort_unstable();
        distinct.dedup();
        if distinct.len() != ends.len() {
            continue;
        }
        // induced: the only edges among the endpoints are the chosen ones
        let among = g.edges().iter().filter(|&&(a, b)| ends.contains(&a) && ends.contains(&b)).count();
        if among == chosen.len() {
            best = chosen.len();
        }
    }
    best
}

pub fn cut_size(g: &Graph, side: &[Vertex]) -> usize {
    g.edges().iter().filter(|&&(u, v)| side.contains(&u) != side.contains(&v)).count()
}

fn subsets(n: usize) -> impl Iterator<Item = Vec<Vertex>> {
    (0u32..(1 << n)).map(move |m| (0..n).filter(|&i| m >> i & 1 == 1).collect())
}

pub fn independence_brute(g: &Graph) -> usize {
    subsets(g.n())
        .filter(|s| s.iter().all(|&a| s.iter().all(|&b| !g.has_edge(a, b))))
        .map(|s| s.len())
        .max()
        .unwrap_or(0)
}

pub fn domination_brute(g: &Graph) -> usize {
    subsets(g.n())
        .filter(|s| (0..g.n()).all(|v| s.contains(&v) || g.neighbors(v).iter().any(|w| s.contains(w))))
        .map(|s| s.len())
        .min()
        .unwrap_or(0)
}

pub fn chromatic_brute(g: &Graph) -> usize {
    let n = g.n();
    if n == 0 {
        return 0;
    }
    for k in 1..=n {
        let mut colour = vec![0usize; n];
        loop {
            if g.edges().iter().all(|&(u, v)| colour[u] != colour[v]) {
                return k;
            }
            let mut i = 0;
            while i < n && colour[i] == k - 1 {
                colour[i] = 0;
                i += 1;
            }
            if i == n {
                break;
            }
            colour[i] += 1;
        }
    }
    n
}

pub fn weak_diameter_brute(g: &Graph, set: &[Vertex]) -> Option<u32> {
    let d = floyd(g);
    let mut w = 0;
    for &a in set {
        for &b in set {
            w = w.max(d[a][b]?);
        }
    }
    Some(w)
}
