//! Orthogonality graphs and the combinatorics run on them.

pub mod automorphism;
pub mod independent;

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::rays::{is_orthogonal, Ray};

pub use automorphism::{automorphisms, AutGroupReport, Permutation};
pub use independent::independence_number;

/// Simple undirected graph on `0..n` with bitset adjacency rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<BitSet>,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph { adj: vec![BitSet::new(n); n] }
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut g = Self::new(n);
        for (u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    /// Adds `u–v`; self-loops are ignored.
    pub fn add_edge(&mut self, u: usize, v: usize) {
        if u != v {
            self.adj[u].insert(v);
            self.adj[v].insert(u);
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(BitSet::count).sum::<usize>() / 2
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(v)
    }

    pub fn neighbors(&self, v: usize) -> &BitSet {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, row)| row.iter().filter(move |&v| v > u).map(move |v| (u, v)))
    }

    pub fn complement(&self) -> Graph {
        let n = self.vertex_count();
        let mut g = Graph::new(n);
        for u in 0..n {
            for v in u + 1..n {
                if !self.has_edge(u, v) {
                    g.add_edge(u, v);
                }
            }
        }
        g
    }

    /// All triangles `i < j < k`, in lexicographic order.
    pub fn triangles(&self) -> Vec<[usize; 3]> {
        let mut out = Vec::new();
        for i in 0..self.vertex_count() {
            for j in self.adj[i].iter().filter(|&j| j > i) {
                for k in self.adj[i].intersection(&self.adj[j]).iter().filter(|&k| k > j) {
                    out.push([i, j, k]);
                }
            }
        }
        out
    }

    pub fn is_independent(&self, set: &[usize]) -> bool {
        set.iter().enumerate().all(|(i, &u)| set[i + 1..].iter().all(|&v| u != v && !self.has_edge(u, v)))
    }

    /// DIMACS edge format: `p edge V E` then `e i j` lines, 1-based.
    pub fn to_dimacs(&self) -> String {
        let mut s = String::new();
        writeln!(s, "p edge {} {}", self.vertex_count(), self.edge_count()).unwrap();
        for (u, v) in self.edges() {
            writeln!(s, "e {} {}", u + 1, v + 1).unwrap();
        }
        s
    }

    pub fn from_dimacs(text: &str) -> Result<Graph> {
        let mut graph: Option<Graph> = None;
        let mut declared_edges = 0;
        for (lineno, line) in text.lines().enumerate() {
            let bad = |msg: &str| Error::Parse(format!("DIMACS line {}: {msg}", lineno + 1));
            let fields: Vec<&str> = line.split_whitespace().collect();
            match fields.as_slice() {
                [] | ["c", ..] => {}
                ["p", "edge", v, e] => {
                    let n: usize = v.parse().map_err(|_| bad("bad vertex count"))?;
                    declared_edges = e.parse().map_err(|_| bad("bad edge count"))?;
                    graph = Some(Graph::new(n));
                }
                ["e", a, b] => {
                    let g = graph.as_mut().ok_or_else(|| bad("edge before header"))?;
                    let a: usize = a.parse().map_err(|_| bad("bad vertex"))?;
                    let b: usize = b.parse().map_err(|_| bad("bad vertex"))?;
                    if a == 0 || b == 0 || a > g.vertex_count() || b > g.vertex_count() {
                        return Err(bad("vertex out of range"));
                    }
                    g.add_edge(a - 1, b - 1);
                }
                _ => return Err(bad("unrecognised line")),
            }
        }
        let g = graph.ok_or_else(|| Error::Parse("DIMACS: missing header".into()))?;
        if g.edge_count() != declared_edges {
            return Err(Error::Parse(format!(
                "DIMACS: header declares {declared_edges} edges, found {}",
                g.edge_count()
            )));
        }
        Ok(g)
    }
}

/// Rays in canonical order with exact orthogonality adjacency.
#[derive(Clone, Debug)]
pub struct OrthoGraph {
    rays: Vec<Ray>,
    graph: Graph,
}

impl OrthoGraph {
    pub fn rays(&self) -> &[Ray] {
        &self.rays
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn len(&self) -> usize {
        self.rays.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rays.is_empty()
    }

    pub fn index_of(&self, r: &Ray) -> Option<usize> {
        self.rays.binary_search(r).ok()
    }
}

/// Deduplicates and orders the rays, then joins every orthogonal pair.
pub fn build_graph(rays: impl IntoIterator<Item = Ray>) -> OrthoGraph {
    let rays: Vec<Ray> = rays.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
    let mut graph = Graph::new(rays.len());
    for i in 0..rays.len() {
        for j in i + 1..rays.len() {
            if is_orthogonal(&rays[i], &rays[j]) {
                graph.add_edge(i, j);
            }
        }
    }
    OrthoGraph { rays, graph }
}

/// Complete orthogonal bases inside the set: the 3-cliques of the graph.
pub fn complete_bases(g: &OrthoGraph) -> Vec<[usize; 3]> {
    g.graph.triangles()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rays(list: &[&str]) -> Vec<Ray> {
        list.iter().map(|s| Ray::parse(s).unwrap()).collect()
    }

    #[test]
    fn triangle_graph() {
        let g = build_graph(rays(&["(0,0,1)", "(0,1,0)", "(1,0,0)", "(2,0,0)"]));
        assert_eq!(g.len(), 3);
        assert_eq!(g.graph().edge_count(), 3);
        assert_eq!(complete_bases(&g), vec![[0, 1, 2]]);
    }

    #[test]
    fn dimacs_round_trip() {
        let g = Graph::from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]);
        let text = g.to_dimacs();
        assert!(text.starts_with("p edge 5 5\n"));
        assert_eq!(Graph::from_dimacs(&text).unwrap(), g);
        assert!(Graph::from_dimacs("e 1 2\n").is_err());
        assert!(Graph::from_dimacs("p edge 2 3\ne 1 2\n").is_err());
    }

    #[test]
    fn brute_force_edge_count_matches() {
        let list = rays(&["(1,1,0)", "(1,-1,0)", "(0,0,1)", "(1,ω,ω²)", "(1,1,1)", "(0,1,-1)"]);
        let g = build_graph(list.clone());
        let mut brute = 0;
        for i in 0..list.len() {
            for j in i + 1..list.len() {
                if crate::rays::inner(&list[i], &list[j]).is_zero() {
                    brute += 1;
                }
            }
        }
        assert_eq!(g.graph().edge_count(), brute);
    }
}
