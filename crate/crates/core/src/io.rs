//! Text formats. All ids in files are 1-based; the parsed values are 0-based.
//!
//! | file    | header                       | body                                   |
//! |---------|------------------------------|----------------------------------------|
//! | `.gr`   | `p tw <n> <m>`               | `m` lines `<u> <v>`                    |
//! | `.td`   | `s td <bags> <maxbag> <n>`   | `b <id> <v>...` then tree edges `<i> <j>` |
//! | `.bd`   | `s bd <nodes> <n>`           | `e <i> <j>` and `l <node> <vertex>`    |
//! | `.part` | `<parts>`                    | one line of vertex ids per part        |
//! | `.map`  | none                         | `<g_vertex> <h_vertex>` per source vertex |
//!
//! Lines starting with `c` and blank lines are ignored everywhere.
//! Emitters write the canonical form, so `emit(parse(emit(x)))` equals
//! `emit(x)` byte for byte.

use std::fmt::Write as _;

use crate::decomposition::{Shape, TreeDecomposition};
use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};
use crate::simwidth::BranchDecomposition;

/// Non-comment lines with their 1-based line numbers, split into tokens.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match tokens.first() {
            None => None,
            Some(&"c") => None,
            Some(_) => Some((i + 1, tokens)),
        }
    })
}

fn number(line: usize, token: &str) -> Result<usize> {
    token.parse().map_err(|_| Error::parse(line, format!("expected a non-negative integer, got {token:?}")))
}

/// A 1-based id in `1..=n`, returned 0-based.
fn id(line: usize, token: &str, n: usize, what: &str) -> Result<usize> {
    let x = number(line, token)?;
    if x == 0 || x > n {
        return Err(Error::parse(line, format!("{what} {x} outside 1..={n}")));
    }
    Ok(x - 1)
}

fn expect_len(line: usize, tokens: &[&str], len: usize, what: &str) -> Result<()> {
    if tokens.len() != len {
        return Err(Error::parse(line, format!("{what} needs {len} fields, got {}", tokens.len())));
    }
    Ok(())
}

pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| Error::parse(0, "missing header"))?;
    if header.len() != 4 || header[0] != "p" || header[1] != "tw" {
        return Err(Error::parse(hl, "header must be \"p tw <n> <m>\""));
    }
    let n = number(hl, header[2])?;
    let m = number(hl, header[3])?;
    let mut edges = Vec::with_capacity(m);
    let mut seen = std::collections::HashSet::with_capacity(m);
    let mut last = hl;
    for (line, tokens) in lines {
        last = line;
        expect_len(line, &tokens, 2, "edge")?;
        let u = id(line, tokens[0], n, "vertex")?;
        let v = id(line, tokens[1], n, "vertex")?;
        if u == v {
            return Err(Error::parse(line, format!("loop at vertex {}", u + 1)));
        }
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(Error::parse(line, format!("duplicate edge {} {}", u + 1, v + 1)));
        }
        edges.push((u, v));
    }
    if edges.len() != m {
        return Err(Error::parse(last, format!("header announces {m} edges, found {}", edges.len())));
    }
    Graph::new(n, edges)
}

pub fn emit_graph(g: &Graph) -> String {
    let mut s = format!("p tw {} {}\n", g.n(), g.m());
    for &(u, v) in g.edges() {
        let _ = writeln!(s, "{} {}", u + 1, v + 1);
    }
    s
}

/// Parses a decomposition of a graph on `n` vertices. With
/// [`Shape::Path`] the tree edges must form a path.
pub fn parse_td(text: &str, n: usize, shape: Shape) -> Result<TreeDecomposition> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| Error::parse(0, "missing header"))?;
    if header.len() != 5 || header[0] != "s" || header[1] != "td" {
        return Err(Error::parse(hl, "header must be \"s td <bags> <max_bag_size> <n>\""));
    }
    let nodes = number(hl, header[2])?;
    let max_bag = number(hl, header[3])?;
    let declared_n = number(hl, header[4])?;
    if declared_n != n {
        return Err(Error::parse(hl, format!("decomposition is for {declared_n} vertices, graph has {n}")));
    }
    let mut bags: Vec<Option<Vec<Vertex>>> = vec![None; nodes];
    let mut edges = Vec::new();
    let mut last = hl;
    for (line, tokens) in lines {
        last = line;
        if tokens[0] == "b" {
            if tokens.len() < 2 {
                return Err(Error::parse(line, "bag line needs an id"));
            }
            let b = id(line, tokens[1], nodes, "bag")?;
            if bags[b].is_some() {
                return Err(Error::parse(line, format!("duplicate bag {}", b + 1)));
            }
            let mut bag = tokens[2..].iter().map(|t| id(line, t, n, "vertex")).collect::<Result<Vec<_>>>()?;
            if bag.len() > max_bag {
                return Err(Error::parse(line, format!("bag has {} vertices, header allows {max_bag}", bag.len())));
            }
            bag.sort_unstable();
            if bag.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::parse(line, "bag repeats a vertex"));
            }
            bags[b] = Some(bag);
        } else {
            expect_len(line, &tokens, 2, "tree edge")?;
            edges.push((id(line, tokens[0], nodes, "bag")?, id(line, tokens[1], nodes, "bag")?));
        }
    }
    let bags = bags
        .into_iter()
        .enumerate()
        .map(|(b, bag)| bag.ok_or_else(|| Error::parse(last, format!("bag {} never defined", b + 1))))
        .collect::<Result<Vec<_>>>()?;
    if bags.iter().map(Vec::len).max().unwrap_or(0) != max_bag && nodes > 0 {
        return Err(Error::parse(hl, format!("header max bag size {max_bag} does not match the bags")));
    }
    TreeDecomposition::new(bags, edges, shape).map_err(|e| Error::parse(last, e.to_string()))
}

pub fn emit_td(td: &TreeDecomposition, n: usize) -> String {
    let mut s = format!("s td {} {} {}\n", td.node_count(), td.max_bag_size(), n);
    for (t, bag) in td.bags().iter().enumerate() {
        let _ = write!(s, "b {}", t + 1);
        for v in bag {
            let _ = write!(s, " {}", v + 1);
        }
        s.push('\n');
    }
    for &(a, b) in td.edges() {
        let _ = writeln!(s, "{} {}", a + 1, b + 1);
    }
    s
}

pub fn parse_bd(text: &str) -> Result<BranchDecomposition> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| Error::parse(0, "missing header"))?;
    if header.len() != 4 || header[0] != "s" || header[1] != "bd" {
        return Err(Error::parse(hl, "header must be \"s bd <tree_nodes> <n>\""));
    }
    let nodes = number(hl, header[2])?;
    let n = number(hl, header[3])?;
    let mut edges = Vec::new();
    let mut leaf_of: Vec<Option<usize>> = vec![None; n];
    let mut last = hl;
    for (line, tokens) in lines {
        last = line;
        expect_len(line, &tokens, 3, "branch decomposition line")?;
        match tokens[0] {
            "e" => edges.push((id(line, tokens[1], nodes, "node")?, id(line, tokens[2], nodes, "node")?)),
            "l" => {
                let t = id(line, tokens[1], nodes, "node")?;
                let v = id(line, tokens[2], n, "vertex")?;
                if leaf_of[v].replace(t).is_some() {
                    return Err(Error::parse(line, format!("vertex {} placed twice", v + 1)));
                }
            }
            other => return Err(Error::parse(line, format!("unknown line type {other:?}"))),
        }
    }
    let leaf_of = leaf_of
        .into_iter()
        .enumerate()
        .map(|(v, t)| t.ok_or_else(|| Error::parse(last, format!("vertex {} has no leaf", v + 1))))
        .collect::<Result<Vec<_>>>()?;
    BranchDecomposition::new(nodes, edges, leaf_of).map_err(|e| Error::parse(last, e.to_string()))
}

pub fn emit_bd(bd: &BranchDecomposition) -> String {
    let mut s = format!("s bd {} {}\n", bd.node_count(), bd.vertex_count());
    for &(a, b) in bd.edges() {
        let _ = writeln!(s, "e {} {}", a + 1, b + 1);
    }
    for v in 0..bd.vertex_count() {
        let _ = writeln!(s, "l {} {}", bd.leaf(v) + 1, v + 1);
    }
    s
}

/// Parts of a partition of a graph on `n` vertices. Coverage and
/// connectivity are checked by [`crate::pipeline::Partition::new`].
pub fn parse_partition(text: &str, n: usize) -> Result<Vec<Vec<Vertex>>> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| Error::parse(0, "missing part count"))?;
    expect_len(hl, &header, 1, "part count")?;
    let count = number(hl, header[0])?;
    let parts = lines
        .map(|(line, tokens)| tokens.iter().map(|t| id(line, t, n, "vertex")).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    if parts.len() != count {
        return Err(Error::parse(hl, format!("announces {count} parts, found {}", parts.len())));
    }
    Ok(parts)
}

pub fn emit_partition(parts: &[Vec<Vertex>]) -> String {
    let mut s = format!("{}\n", parts.len());
    for part in parts {
        let line: Vec<String> = part.iter().map(|v| (v + 1).to_string()).collect();
        s.push_str(&line.join(" "));
        s.push('\n');
    }
    s
}

/// Images of vertices `0..n` of the source graph in a host on `host_n`
/// vertices.
pub fn parse_map(text: &str, n: usize, host_n: usize) -> Result<Vec<Vertex>> {
    let mut map = Vec::with_capacity(n);
    let mut last = 0;
    for (line, tokens) in content_lines(text) {
        last = line;
        expect_len(line, &tokens, 2, "map line")?;
        let g = id(line, tokens[0], n, "source vertex")?;
        if g != map.len() {
            return Err(Error::parse(line, format!("expected source vertex {}, got {}", map.len() + 1, g + 1)));
        }
        map.push(id(line, tokens[1], host_n, "host vertex")?);
    }
    if map.len() != n {
        return Err(Error::parse(last, format!("map covers {} of {n} source vertices", map.len())));
    }
    Ok(map)
}

pub fn emit_map(map: &[Vertex]) -> String {
    let mut s = String::new();
    for (g, h) in map.iter().enumerate() {
        let _ = writeln!(s, "{} {}", g + 1, h + 1);
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k2() {
        let g = parse_graph("c a comment\np tw 2 1\n1 2\n").unwrap();
        assert_eq!(g, Graph::path(2));
        assert_eq!(emit_graph(&g), "p tw 2 1\n1 2\n");
    }

    #[test]
    fn graph_errors() {
        assert!(matches!(parse_graph("p tw 2 2\n1 2\n2 1\n"), Err(Error::Parse { line: 3, .. })));
        assert!(matches!(parse_graph("p tw 2 1\n1 3\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_graph("p tw 2 1\n1 1\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_graph("p tw 3 2\n1 2\n"), Err(Error::Parse { .. })));
        assert!(parse_graph("p td 2 1\n1 2\n").is_err());
    }

    #[test]
    fn td_out_of_range_vertex() {
        let text = "s td 2 2 3\nb 1 1 2\nb 2 2 4\n1 2\n";
        match parse_td(text, 3, Shape::Tree) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn td_errors() {
        assert!(matches!(parse_td("s td 2 2 3\nb 1 1 2\nb 1 2 3\n1 2\n", 3, Shape::Tree), Err(Error::Parse { line: 3, .. })));
        assert!(parse_td("s td 2 2 3\nb 1 1 2\n1 2\n", 3, Shape::Tree).is_err());
        let star = "s td 4 1 4\nb 1 1\nb 2 2\nb 3 3\nb 4 4\n1 2\n1 3\n1 4\n";
        assert!(parse_td(star, 4, Shape::Tree).is_ok());
        assert!(parse_td(star, 4, Shape::Path).is_err());
    }

    #[test]
    fn td_round_trip() {
        let text = "s td 3 2 3\nb 1 1 2\nb 2 2 3\nb 3\n1 2\n2 3\n";
        let td = parse_td(text, 3, Shape::Path).unwrap();
        assert_eq!(emit_td(&td, 3), text);
    }

    #[test]
    fn bd_round_trip() {
        let text = "s bd 4 3\ne 4 1\ne 4 2\ne 4 3\nl 1 1\nl 2 2\nl 3 3\n";
        let bd = parse_bd(text).unwrap();
        assert_eq!(emit_bd(&bd), text);
        assert!(parse_bd("s bd 4 3\ne 4 1\ne 4 2\ne 4 3\nl 1 1\nl 2 2\nl 4 3\n").is_err());
    }

    #[test]
    fn partition_and_map() {
        let text = "2\n1 2\n3\n";
        let parts = parse_partition(text, 3).unwrap();
        assert_eq!(parts, vec![vec![0, 1], vec![2]]);
        assert_eq!(emit_partition(&parts), text);
        let map = parse_map("1 1\n2 1\n3 2\n", 3, 2).unwrap();
        assert_eq!(map, vec![0, 0, 1]);
        assert_eq!(emit_map(&map), "1 1\n2 1\n3 2\n");
        assert!(parse_map("2 1\n1 1\n", 2, 1).is_err());
        assert!(parse_map("1 1\n", 2, 1).is_err());
        assert!(parse_map("1 3\n", 1, 2).is_err());
    }
}
