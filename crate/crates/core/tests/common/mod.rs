//! Naive exhaustive counterparts of the search algorithms, shared by the
//! oracle and acceptance suites.
#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use kscheck_core::colorability::KSInstance;
use kscheck_core::game::{build_game, Game, Strategy};
use kscheck_core::graph::Graph;
use kscheck_core::rays::Ray;

pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
    let mut g = Graph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                g.add_edge(u, v);
            }
        }
    }
    g
}

/// α by scanning every vertex subset.
pub fn brute_alpha(g: &Graph) -> usize {
    let n = g.vertex_count();
    let adj: Vec<u32> = (0..n).map(|v| g.neighbors(v).iter().fold(0u32, |m, u| m | 1 << u)).collect();
    let mut independent = vec![true; 1 << n];
    let mut best = 0;
    for mask in 1usize..1 << n {
        let low = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        independent[mask] = independent[rest] && adj[low] & rest as u32 == 0;
        if independent[mask] {
            best = best.max(mask.count_ones() as usize);
        }
    }
    best
}

/// Lists every automorphism by extending vertex maps one vertex at a time.
pub fn brute_automorphisms(g: &Graph) -> Vec<Vec<usize>> {
    fn extend(g: &Graph, map: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        let v = map.len();
        if v == g.vertex_count() {
            out.push(map.clone());
            return;
        }
        for w in 0..g.vertex_count() {
            if used[w] || g.degree(w) != g.degree(v) {
                continue;
            }
            if (0..v).all(|u| g.has_edge(u, v) == g.has_edge(map[u], w)) {
                map.push(w);
                used[w] = true;
                extend(g, map, used, out);
                used[w] = false;
                map.pop();
            }
        }
    }
    let mut out = Vec::new();
    extend(g, &mut Vec::new(), &mut vec![false; g.vertex_count()], &mut out);
    out
}

pub fn brute_automorphism_count(g: &Graph) -> u64 {
    brute_automorphisms(g).len() as u64
}

/// Number of valid KS assignments by scanning all 2^n valuations.
pub fn brute_ks_count(inst: &KSInstance) -> usize {
    let n = inst.len();
    let edges: Vec<u32> = inst.graph().graph().edges().map(|(u, v)| 1 << u | 1 << v).collect();
    let bases: Vec<u32> = inst.bases().iter().map(|b| b.iter().fold(0, |m, &r| m | 1 << r)).collect();
    (0u32..1 << n)
        .filter(|&f| edges.iter().all(|&e| f & e != e) && bases.iter().all(|&b| (f & b).count_ones() == 1))
        .count()
}

pub fn random_subinstance(rng: &mut ChaCha8Rng, pool: &[Ray], size: usize) -> KSInstance {
    let mut rays = pool.to_vec();
    rays.shuffle(rng);
    rays.truncate(size);
    KSInstance::new("sub", rays)
}

/// Best number of won contexts over all 3^|X|·3^|Y| deterministic strategies.
pub fn brute_classical(g: &Game) -> usize {
    let (nx, ny) = (g.alice.len(), g.bob.len());
    let total = 3usize.pow((nx + ny) as u32);
    (0..total)
        .map(|mut code| {
            let mut digits = Vec::with_capacity(nx + ny);
            for _ in 0..nx + ny {
                digits.push(code % 3);
                code /= 3;
            }
            let s = Strategy { alice: digits[..nx].to_vec(), bob: digits[nx..].to_vec() };
            g.play(&s)
        })
        .max()
        .unwrap()
}

/// Whether some deterministic strategy wins every context of the subgame on
/// bases `xs` × `ys` of `full` (the game with every basis on both sides), by
/// plain backtracking over Alice's outputs then Bob's.
pub fn perfect_strategy_exists(full: &Game, xs: &[usize], ys: &[usize]) -> bool {
    fn go(full: &Game, xs: &[usize], ys: &[usize], alice: &mut Vec<usize>, bob: &mut Vec<usize>) -> bool {
        if alice.len() < xs.len() {
            for a in 0..3 {
                alice.push(a);
                if go(full, xs, ys, alice, bob) {
                    return true;
                }
                alice.pop();
            }
            return false;
        }
        if bob.len() == ys.len() {
            return true;
        }
        let y = ys[bob.len()];
        for b in 0..3 {
            if xs.iter().zip(alice.iter()).all(|(&x, &a)| full.context(x, y).win[a][b]) {
                bob.push(b);
                if go(full, xs, ys, alice, bob) {
                    return true;
                }
                bob.pop();
            }
        }
        false
    }
    go(full, xs, ys, &mut Vec::new(), &mut Vec::new())
}

/// Least refutable product over every pair of basis subsets.
pub fn brute_minimal_product(inst: &KSInstance) -> Option<usize> {
    let m = inst.bases().len();
    let all: Vec<_> = (0..m).map(|i| inst.basis(i)).collect();
    let full = build_game(all.clone(), all);
    let sel = |mask: u32| (0..m).filter(|i| mask >> i & 1 == 1).collect::<Vec<_>>();
    let mut best: Option<usize> = None;
    for a in 1u32..1 << m {
        for b in 1u32..1 << m {
            let product = (a.count_ones() * b.count_ones()) as usize;
            if best.is_some_and(|p| product >= p) {
                continue;
            }
            if !perfect_strategy_exists(&full, &sel(a), &sel(b)) {
                best = Some(product);
            }
        }
    }
    best
}

pub fn subsets(m: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, m: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            cur.push(i);
            go(i + 1, m, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, m, k, &mut Vec::new(), &mut out);
    out
}
