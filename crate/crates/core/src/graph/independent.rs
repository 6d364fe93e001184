//! Exact maximum independent set by branch and bound.
//!
//! Runs a bitset maximum-clique search on the complement graph. Each node
//! greedily colours its candidate set; a colour class of the complement is a
//! clique of the original graph, so `|current| + colour` bounds what any
//! extension can reach.

use crate::bitset::BitSet;
use crate::graph::Graph;

struct Search {
    /// complement adjacency in search order
    comp: Vec<BitSet>,
    best: Vec<usize>,
    nodes: u64,
}

impl Search {
    fn colour_order(&self, candidates: &BitSet) -> Vec<(usize, usize)> {
        let mut uncoloured = candidates.clone();
        let mut out = Vec::with_capacity(candidates.count());
        let mut colour = 0;
        while !uncoloured.is_empty() {
            colour += 1;
            let mut class = uncoloured.clone();
            while let Some(v) = class.first() {
                uncoloured.remove(v);
                class.remove(v);
                class.difference_with(&self.comp[v]);
                out.push((v, colour));
            }
        }
        out
    }

    fn expand(&mut self, current: &mut Vec<usize>, mut candidates: BitSet) {
        self.nodes += 1;
        let order = self.colour_order(&candidates);
        for &(v, colour) in order.iter().rev() {
            if current.len() + colour <= self.best.len() {
                return;
            }
            current.push(v);
            let next = candidates.intersection(&self.comp[v]);
            if next.is_empty() {
                if current.len() > self.best.len() {
                    self.best = current.clone();
                }
            } else {
                self.expand(current, next);
            }
            current.pop();
            candidates.remove(v);
        }
    }
}

/// Result of [`independence_number_with_stats`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndependentSet {
    pub alpha: usize,
    /// Vertices of one maximum independent set, ascending.
    pub witness: Vec<usize>,
    pub nodes: u64,
}

/// Independence number and a maximum independent set (ascending).
///
/// The witness is the first optimum met in the fixed search order, so it is
/// the same on every run.
pub fn independence_number(g: &Graph) -> (usize, Vec<usize>) {
    let r = independence_number_with_stats(g);
    (r.alpha, r.witness)
}

pub fn independence_number_with_stats(g: &Graph) -> IndependentSet {
    let n = g.vertex_count();
    if n == 0 {
        return IndependentSet { alpha: 0, witness: Vec::new(), nodes: 0 };
    }
    // search order: low original degree first (high complement degree)
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (g.degree(v), v));
    let mut position = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        position[v] = i;
    }
    let comp: Vec<BitSet> = order
        .iter()
        .map(|&v| {
            let mut row = BitSet::new(n);
            for u in 0..n {
                if u != v && !g.has_edge(u, v) {
                    row.insert(position[u]);
                }
            }
            row
        })
        .collect();

    let mut search = Search { best: greedy_independent(&comp), comp, nodes: 0 };
    let mut current = Vec::new();
    search.expand(&mut current, BitSet::full(n));

    let mut witness: Vec<usize> = search.best.iter().map(|&i| order[i]).collect();
    witness.sort_unstable();
    debug_assert!(g.is_independent(&witness));
    IndependentSet { alpha: witness.len(), witness, nodes: search.nodes }
}

/// Greedy seed: repeatedly take the first remaining vertex of the search order.
fn greedy_independent(comp: &[BitSet]) -> Vec<usize> {
    let mut remaining = BitSet::full(comp.len());
    let mut picked = Vec::new();
    while let Some(v) = remaining.first() {
        picked.push(v);
        remaining.intersect_with(&comp[v]);
    }
    picked
}
