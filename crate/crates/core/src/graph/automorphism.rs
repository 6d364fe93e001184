//! Automorphism groups by individualization-refinement.
//!
//! The group is built as a stabilizer chain. At each level a vertex `u` of the
//! first smallest non-trivial cell is fixed, and for every other vertex `w` of
//! that cell not already reached we search for an automorphism fixing the
//! earlier base points with `u ↦ w`. The orbit sizes multiply to the group
//! order, and the automorphisms found form a strong generating set.

use std::collections::{HashSet, VecDeque};

use num_bigint::BigUint;
use num_traits::One;

use crate::graph::Graph;

/// `p[v]` is the image of vertex `v`.
pub type Permutation = Vec<usize>;

type Partition = Vec<Vec<usize>>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AutGroupReport {
    pub order: BigUint,
    pub generators: Vec<Permutation>,
    /// Orbit partition; each orbit ascending, orbits ordered by least member.
    pub orbits: Vec<Vec<usize>>,
    /// Base points of the stabilizer chain.
    pub base: Vec<usize>,
}

impl AutGroupReport {
    pub fn orbit_sizes(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self.orbits.iter().map(Vec::len).collect();
        s.sort_unstable();
        s
    }

    /// Orbit index of every vertex.
    pub fn orbit_of(&self) -> Vec<usize> {
        let n = self.orbits.iter().map(Vec::len).sum();
        let mut out = vec![0; n];
        for (i, orbit) in self.orbits.iter().enumerate() {
            for &v in orbit {
                out[v] = i;
            }
        }
        out
    }
}

/// Equitable refinement, plus the quotient data used to compare partitions.
fn refine(g: &Graph, mut cells: Partition) -> (Partition, Vec<(usize, Vec<u32>)>) {
    let n = g.vertex_count();
    let mut cell_of = vec![0usize; n];
    loop {
        for (ci, cell) in cells.iter().enumerate() {
            for &v in cell {
                cell_of[v] = ci;
            }
        }
        let k = cells.len();
        let signature = |v: usize| {
            let mut sig = vec![0u32; k];
            for u in g.neighbors(v).iter() {
                sig[cell_of[u]] += 1;
            }
            sig
        };
        let mut next: Partition = Vec::with_capacity(k);
        for cell in &cells {
            if cell.len() == 1 {
                next.push(cell.clone());
                continue;
            }
            let mut keyed: Vec<(Vec<u32>, usize)> = cell.iter().map(|&v| (signature(v), v)).collect();
            keyed.sort();
            let mut start = 0;
            for i in 1..=keyed.len() {
                if i == keyed.len() || keyed[i].0 != keyed[start].0 {
                    next.push(keyed[start..i].iter().map(|(_, v)| *v).collect());
                    start = i;
                }
            }
        }
        if next.len() == k {
            let quotient = cells.iter().map(|c| (c.len(), signature(c[0]))).collect();
            return (cells, quotient);
        }
        cells = next;
    }
}

fn individualize(p: &Partition, cell: usize, v: usize) -> Partition {
    let mut out = Vec::with_capacity(p.len() + 1);
    out.extend_from_slice(&p[..cell]);
    out.push(vec![v]);
    out.push(p[cell].iter().copied().filter(|&x| x != v).collect());
    out.extend_from_slice(&p[cell + 1..]);
    out
}

fn target_cell(p: &Partition) -> Option<usize> {
    p.iter().enumerate().filter(|(_, c)| c.len() > 1).min_by_key(|(i, c)| (c.len(), *i)).map(|(i, _)| i)
}

pub fn is_automorphism(g: &Graph, p: &[usize]) -> bool {
    let n = g.vertex_count();
    if p.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    for &x in p {
        if x >= n || seen[x] {
            return false;
        }
        seen[x] = true;
    }
    (0..n).all(|u| (u + 1..n).all(|v| g.has_edge(u, v) == g.has_edge(p[u], p[v])))
}

/// Finds an automorphism carrying the ordered partition `left` onto `right`.
fn extend(g: &Graph, left: Partition, right: Partition) -> Option<Permutation> {
    let (left, ql) = refine(g, left);
    let (right, qr) = refine(g, right);
    if ql != qr {
        return None;
    }
    match target_cell(&left) {
        None => {
            let mut perm = vec![0; g.vertex_count()];
            for (l, r) in left.iter().zip(&right) {
                perm[l[0]] = r[0];
            }
            is_automorphism(g, &perm).then_some(perm)
        }
        Some(t) => {
            let u = left[t][0];
            right[t].iter().find_map(|&w| extend(g, individualize(&left, t, u), individualize(&right, t, w)))
        }
    }
}

fn orbit_of_point(u: usize, gens: &[Permutation]) -> HashSet<usize> {
    let mut seen = HashSet::from([u]);
    let mut queue = VecDeque::from([u]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            if seen.insert(g[x]) {
                queue.push_back(g[x]);
            }
        }
    }
    seen
}

pub fn automorphisms(g: &Graph) -> AutGroupReport {
    let n = g.vertex_count();
    let mut order = BigUint::one();
    let mut generators = Vec::new();
    let mut base = Vec::new();
    let mut part: Partition = if n == 0 { Vec::new() } else { vec![(0..n).collect()] };
    loop {
        part = refine(g, part).0;
        let Some(t) = target_cell(&part) else { break };
        let u = part[t][0];
        let mut level_gens: Vec<Permutation> = Vec::new();
        let mut orbit = HashSet::from([u]);
        for &w in &part[t] {
            if orbit.contains(&w) {
                continue;
            }
            if let Some(p) = extend(g, individualize(&part, t, u), individualize(&part, t, w)) {
                level_gens.push(p);
                orbit = orbit_of_point(u, &level_gens);
            }
        }
        order *= BigUint::from(orbit.len());
        generators.extend(level_gens);
        base.push(u);
        part = individualize(&part, t, u);
    }
    let orbits = orbits_from_generators(n, &generators);
    AutGroupReport { order, generators, orbits, base }
}

/// Orbit partition induced by a generating set, via union-find.
pub fn orbits_from_generators(n: usize, gens: &[Permutation]) -> Vec<Vec<usize>> {
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        let mut y = x;
        while parent[y] != r {
            let next = parent[y];
            parent[y] = r;
            y = next;
        }
        r
    }
    let mut parent: Vec<usize> = (0..n).collect();
    for g in gens {
        for (v, &img) in g.iter().enumerate() {
            let (a, b) = (find(&mut parent, v), find(&mut parent, img));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut orbits: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for v in 0..n {
        let r = find(&mut parent, v);
        if slot[r] == usize::MAX {
            slot[r] = orbits.len();
            orbits.push(Vec::new());
        }
        orbits[slot[r]].push(v);
    }
    orbits
}

/// Enumerates the group generated by `gens`, or `None` past `limit` elements.
pub fn group_elements(n: usize, gens: &[Permutation], limit: usize) -> Option<Vec<Permutation>> {
    let identity: Permutation = (0..n).collect();
    let mut seen: HashSet<Permutation> = HashSet::from([identity.clone()]);
    let mut out = vec![identity.clone()];
    let mut queue = VecDeque::from([identity]);
    while let Some(p) = queue.pop_front() {
        for g in gens {
            let q: Permutation = p.iter().map(|&x| g[x]).collect();
            if seen.insert(q.clone()) {
                if seen.len() > limit {
                    return None;
                }
                out.push(q.clone());
                queue.push_back(q);
            }
        }
    }
    out.sort();
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n)))
    }

    #[test]
    fn small_groups() {
        let triangle = cycle(3);
        let r = automorphisms(&triangle);
        assert_eq!(r.order, BigUint::from(6u32));
        assert_eq!(r.orbits.len(), 1);
        assert_eq!(automorphisms(&cycle(5)).order, BigUint::from(10u32));
        assert_eq!(automorphisms(&Graph::new(4)).order, BigUint::from(24u32));
        // path on 3 vertices: swap the ends
        let p3 = Graph::from_edges(3, [(0, 1), (1, 2)]);
        let r = automorphisms(&p3);
        assert_eq!(r.order, BigUint::from(2u32));
        assert_eq!(r.orbits, vec![vec![0, 2], vec![1]]);
    }

    #[test]
    fn petersen_group_order() {
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((i + 5, (i + 2) % 5 + 5));
        }
        let g = Graph::from_edges(10, edges);
        let r = automorphisms(&g);
        assert_eq!(r.order, BigUint::from(120u32));
        for p in &r.generators {
            assert!(is_automorphism(&g, p));
        }
        assert_eq!(group_elements(10, &r.generators, 1000).unwrap().len(), 120);
    }

    #[test]
    fn rigid_graph() {
        // spider with legs of length 1, 2 and 3
        let g = Graph::from_edges(7, [(0, 1), (0, 2), (2, 3), (0, 4), (4, 5), (5, 6)]);
        let r = automorphisms(&g);
        assert_eq!(r.order, BigUint::one());
        assert!(r.generators.is_empty());
        assert_eq!(r.orbits.len(), 7);
    }
}
