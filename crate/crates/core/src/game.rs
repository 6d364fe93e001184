//! Bipartite nonlocal games built from basis distributions.
//!
//! Alice receives a basis `x ∈ X`, Bob a basis `y ∈ Y` (uniformly), each
//! outputs one member, and they win iff the two outputs are not orthogonal.

use std::collections::HashSet;
use std::fmt;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::colorability::KSInstance;
use crate::error::Result;
use crate::graph::automorphism::group_elements;
use crate::graph::independent::independence_number_with_stats;
use crate::graph::{automorphisms, Graph};
use crate::numfield::CycNumber;
use crate::rays::{inner, is_orthogonal, Basis};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ContextKind {
    /// The bases share exactly one ray, at these member positions.
    SharedVector { alice: usize, bob: usize },
    /// No shared ray and exactly one orthogonal cross pair.
    OrthogonalPair { alice: usize, bob: usize },
    Other { shared: usize, orthogonal: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Context {
    pub x: usize,
    pub y: usize,
    pub kind: ContextKind,
    /// `win[a][b]`: outputs `a` (of basis x) and `b` (of basis y) are not orthogonal.
    pub win: [[bool; 3]; 3],
}

impl Context {
    pub fn winning_count(&self) -> usize {
        self.win.iter().flatten().filter(|&&w| w).count()
    }
}

/// A winning input-output combination.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Event {
    pub x: usize,
    pub y: usize,
    pub a: usize,
    pub b: usize,
}

#[derive(Clone, Debug)]
pub struct Game {
    pub alice: Vec<Basis>,
    pub bob: Vec<Basis>,
    /// Row-major in `(x, y)`.
    pub contexts: Vec<Context>,
}

impl Game {
    /// π(x, y) = 1 / (|X|·|Y|).
    pub fn input_weight(&self) -> BigRational {
        BigRational::new(BigInt::from(1), BigInt::from(self.contexts.len()))
    }

    pub fn context(&self, x: usize, y: usize) -> &Context {
        &self.contexts[x * self.bob.len() + y]
    }

    pub fn winning_events(&self) -> Vec<Event> {
        let mut out = Vec::new();
        for c in &self.contexts {
            for a in 0..3 {
                for b in 0..3 {
                    if c.win[a][b] {
                        out.push(Event { x: c.x, y: c.y, a, b });
                    }
                }
            }
        }
        out
    }

    /// Contexts won by a deterministic strategy.
    pub fn play(&self, s: &Strategy) -> usize {
        self.contexts.iter().filter(|c| c.win[s.alice[c.x]][s.bob[c.y]]).count()
    }

    pub fn summary(&self) -> GameSummary {
        let mut s = GameSummary { contexts: self.contexts.len(), ..Default::default() };
        for c in &self.contexts {
            let w = c.winning_count();
            s.winning_events += w;
            match c.kind {
                ContextKind::SharedVector { .. } => {
                    s.shared_vector += 1;
                    s.shared_vector_wins.insert(w);
                }
                ContextKind::OrthogonalPair { .. } => {
                    s.orthogonal_pair += 1;
                    s.orthogonal_pair_wins.insert(w);
                }
                ContextKind::Other { .. } => s.other += 1,
            }
        }
        s
    }
}

/// Context classification counts.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GameSummary {
    pub contexts: usize,
    pub shared_vector: usize,
    pub orthogonal_pair: usize,
    pub other: usize,
    /// Distinct winning-event counts seen among shared-vector contexts.
    pub shared_vector_wins: std::collections::BTreeSet<usize>,
    pub orthogonal_pair_wins: std::collections::BTreeSet<usize>,
    pub winning_events: usize,
}

impl fmt::Display for GameSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "contexts: {}", self.contexts)?;
        writeln!(f, "  shared-vector contexts: {} (winning events each: {:?})", self.shared_vector, self.shared_vector_wins)?;
        writeln!(
            f,
            "  orthogonal-pair contexts: {} (winning events each: {:?})",
            self.orthogonal_pair, self.orthogonal_pair_wins
        )?;
        writeln!(f, "  other contexts: {}", self.other)?;
        write!(f, "winning events: {}", self.winning_events)
    }
}

pub fn build_game(alice: Vec<Basis>, bob: Vec<Basis>) -> Game {
    let mut contexts = Vec::with_capacity(alice.len() * bob.len());
    for (x, bx) in alice.iter().enumerate() {
        for (y, by) in bob.iter().enumerate() {
            let mut win = [[false; 3]; 3];
            let mut shared = Vec::new();
            let mut orthogonal = Vec::new();
            for a in 0..3 {
                for b in 0..3 {
                    let (ra, rb) = (&bx.rays()[a], &by.rays()[b]);
                    let orth = is_orthogonal(ra, rb);
                    win[a][b] = !orth;
                    if orth {
                        orthogonal.push((a, b));
                    }
                    if ra == rb {
                        shared.push((a, b));
                    }
                }
            }
            let kind = match (shared.as_slice(), orthogonal.as_slice()) {
                ([(a, b)], _) => ContextKind::SharedVector { alice: *a, bob: *b },
                ([], [(a, b)]) => ContextKind::OrthogonalPair { alice: *a, bob: *b },
                _ => ContextKind::Other { shared: shared.len(), orthogonal: orthogonal.len() },
            };
            contexts.push(Context { x, y, kind, win });
        }
    }
    Game { alice, bob, contexts }
}

/// Output choice per input.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Strategy {
    pub alice: Vec<usize>,
    pub bob: Vec<usize>,
}

/// Exclusivity graph of the winning events: two events are adjacent when they
/// share an input of one party but differ in that party's output.
pub fn exclusivity_graph(g: &Game) -> (Graph, Vec<Event>) {
    let events = g.winning_events();
    let mut graph = Graph::new(events.len());
    for i in 0..events.len() {
        for j in i + 1..events.len() {
            let (e, f) = (&events[i], &events[j]);
            if (e.x == f.x && e.a != f.a) || (e.y == f.y && e.b != f.b) {
                graph.add_edge(i, j);
            }
        }
    }
    (graph, events)
}

#[derive(Clone, Debug)]
pub struct ClassicalValue {
    /// Independence number of the exclusivity graph = contexts won by the best strategy.
    pub won: usize,
    pub contexts: usize,
    pub value: BigRational,
    pub strategy: Strategy,
    /// Event indices of the maximum independent set.
    pub witness: Vec<usize>,
    pub nodes: u64,
}

/// W_C = α(exclusivity graph) / #contexts, with an optimal deterministic strategy.
pub fn classical_value(g: &Game) -> ClassicalValue {
    let (graph, events) = exclusivity_graph(g);
    let mis = independence_number_with_stats(&graph);
    let mut strategy = Strategy { alice: vec![0; g.alice.len()], bob: vec![0; g.bob.len()] };
    for &i in &mis.witness {
        strategy.alice[events[i].x] = events[i].a;
        strategy.bob[events[i].y] = events[i].b;
    }
    debug_assert_eq!(g.play(&strategy), mis.alpha);
    ClassicalValue {
        won: mis.alpha,
        contexts: g.contexts.len(),
        value: BigRational::new(BigInt::from(mis.alpha), BigInt::from(g.contexts.len().max(1))),
        strategy,
        witness: mis.witness,
        nodes: mis.nodes,
    }
}

fn for_each_choice(len: usize, mut f: impl FnMut(&[usize])) {
    let mut choice = vec![0usize; len];
    loop {
        f(&choice);
        let mut i = 0;
        loop {
            if i == len {
                return;
            }
            choice[i] += 1;
            if choice[i] < 3 {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

/// Best deterministic strategy by enumerating Alice's 3^|X| choices; for a fixed
/// Alice strategy Bob's bases decouple and each is optimized on its own.
pub fn classical_value_two_level(g: &Game) -> (usize, Strategy) {
    let nx = g.alice.len();
    let ny = g.bob.len();
    let mut best: Option<(usize, Strategy)> = None;
    for_each_choice(nx, |alice| {
        let mut won = 0;
        let mut bob = vec![0; ny];
        for (y, slot) in bob.iter_mut().enumerate() {
            let (b, w) = (0..3)
                .map(|b| (b, (0..nx).filter(|&x| g.context(x, y).win[alice[x]][b]).count()))
                .max_by_key(|&(b, w)| (w, std::cmp::Reverse(b)))
                .unwrap();
            *slot = b;
            won += w;
        }
        if best.as_ref().map_or(true, |(w, _)| won > *w) {
            best = Some((won, Strategy { alice: alice.to_vec(), bob }));
        }
    });
    best.unwrap_or((0, Strategy { alice: Vec::new(), bob: Vec::new() }))
}

/// Which measurement Bob performs on his half of (1/√3)Σ|jj⟩.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Convention {
    /// Bob projects onto the componentwise conjugate of his basis vector, so
    /// P(a,b) = |⟨a|b⟩|² / (3‖a‖²‖b‖²).
    ConjugateBasis,
    /// Bob projects onto his basis vector as given, so
    /// P(a,b) = |Σ_j a_j b_j|² / (3‖a‖²‖b‖²).
    AsGiven,
}

#[derive(Clone, Debug)]
pub struct QuantumValue {
    pub convention: Convention,
    pub value: CycNumber,
    /// Per context (row-major), `probabilities[c][a][b]`.
    pub probabilities: Vec<[[CycNumber; 3]; 3]>,
}

impl QuantumValue {
    pub fn as_rational(&self) -> Option<BigRational> {
        self.value.as_rational()
    }

    /// Largest probability on a losing event is zero.
    pub fn losing_events_vanish(&self, g: &Game) -> bool {
        g.contexts
            .iter()
            .zip(&self.probabilities)
            .all(|(c, p)| (0..3).all(|a| (0..3).all(|b| c.win[a][b] || p[a][b].is_zero())))
    }

    pub fn contexts_normalized(&self) -> bool {
        self.probabilities.iter().all(|p| p.iter().flatten().cloned().sum::<CycNumber>().is_one())
    }
}

fn quantum_value(g: &Game, convention: Convention) -> QuantumValue {
    let three = CycNumber::from_int(1, 3);
    let mut total = CycNumber::zero(1);
    let mut probabilities = Vec::with_capacity(g.contexts.len());
    for c in &g.contexts {
        let bx = g.alice[c.x].rays();
        let by = g.bob[c.y].rays();
        let mut p: [[CycNumber; 3]; 3] = std::array::from_fn(|_| std::array::from_fn(|_| CycNumber::zero(1)));
        for a in 0..3 {
            for b in 0..3 {
                let amp = match convention {
                    Convention::ConjugateBasis => inner(&bx[a], &by[b]),
                    Convention::AsGiven => inner(&bx[a], &by[b].conj()),
                };
                let den = &(&three * &bx[a].norm_sq()) * &by[b].norm_sq();
                p[a][b] = amp.abs_sq().checked_div(&den).expect("nonzero norms");
                if c.win[a][b] {
                    total = &total + &p[a][b];
                }
            }
        }
        probabilities.push(p);
    }
    let value = total.scale(&g.input_weight()).lower();
    QuantumValue { convention, value, probabilities }
}

/// Winning probability of the maximally entangled strategy with Bob measuring
/// the conjugated basis.
pub fn quantum_value_maxent(g: &Game) -> QuantumValue {
    quantum_value(g, Convention::ConjugateBasis)
}

/// Same strategy with Bob measuring his basis vectors unconjugated.
pub fn quantum_value_as_given(g: &Game) -> QuantumValue {
    quantum_value(g, Convention::AsGiven)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExportSummary {
    pub vertices: usize,
    pub edges: usize,
    pub graph_path: PathBuf,
    pub legend_path: PathBuf,
}

/// Writes the exclusivity graph as DIMACS to `path` and a legend (`index x y a b`,
/// 1-based index) to `path` with `.legend` appended.
pub fn export_exclusivity_graph(g: &Game, path: &Path) -> Result<ExportSummary> {
    let (graph, events) = exclusivity_graph(g);
    std::fs::write(path, graph.to_dimacs())?;
    let mut legend = String::from("c index x y a b\n");
    for (i, e) in events.iter().enumerate() {
        legend.push_str(&format!("{} {} {} {} {}\n", i + 1, e.x, e.y, e.a, e.b));
    }
    let mut legend_path = path.as_os_str().to_owned();
    legend_path.push(".legend");
    let legend_path = PathBuf::from(legend_path);
    std::fs::write(&legend_path, legend)?;
    Ok(ExportSummary {
        vertices: graph.vertex_count(),
        edges: graph.edge_count(),
        graph_path: path.to_path_buf(),
        legend_path,
    })
}

// ---------------------------------------------------------------------------
// Minimal |X|·|Y| search

#[derive(Clone, Debug)]
pub struct SearchOptions {
    pub time_budget: Option<Duration>,
    /// Skip Alice subsets that are not the least image under the automorphism group.
    pub use_symmetry: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { time_budget: None, use_symmetry: true }
    }
}

/// A distribution of complete bases (indices into [`KSInstance::bases`]).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Split {
    pub alice: Vec<usize>,
    pub bob: Vec<usize>,
}

impl Split {
    pub fn product(&self) -> usize {
        self.alice.len() * self.bob.len()
    }
}

#[derive(Clone, Debug)]
pub struct MinimalSearch {
    /// Least-product split with no perfect classical strategy (|alice| ≤ |bob|).
    pub best: Option<Split>,
    /// False when the time budget ran out; `best` is then the best so far.
    pub complete: bool,
    pub alice_sets_examined: usize,
    /// Size of the symmetry group used for pruning (1 without pruning).
    pub symmetry_order: usize,
}

/// Precomputed orthogonality masks for the classical perfect-strategy test.
struct Masks {
    basis_rays: Vec<[usize; 3]>,
    basis_mask: Vec<u128>,
    orth: Vec<u128>,
}

impl Masks {
    fn new(inst: &KSInstance) -> Option<Self> {
        let n = inst.len();
        if n > 128 || inst.bases().len() > 64 {
            return None;
        }
        let g = inst.graph().graph();
        let orth = (0..n).map(|r| g.neighbors(r).iter().fold(0u128, |m, v| m | 1 << v)).collect();
        let basis_mask = inst.bases().iter().map(|b| b.iter().fold(0u128, |m, &r| m | 1 << r)).collect();
        Some(Masks { basis_rays: inst.bases().to_vec(), basis_mask, orth })
    }

    /// Bob bases that lose against every output once Alice's outputs cover `covered`.
    fn killed(&self, covered: u128) -> u64 {
        self.basis_mask
            .iter()
            .enumerate()
            .filter(|(_, &m)| m & !covered == 0)
            .fold(0u64, |acc, (y, _)| acc | 1 << y)
    }

    /// For every Alice strategy on `alice`, the set of Bob bases it cannot be
    /// matched on. `None` when some Alice strategy leaves every basis winnable.
    fn killing_family(&self, alice: &[usize]) -> Option<Vec<u64>> {
        let mut family = HashSet::new();
        let mut stack: Vec<(usize, u128)> = vec![(0, 0)];
        while let Some((depth, covered)) = stack.pop() {
            if depth == alice.len() {
                let k = self.killed(covered);
                if k == 0 {
                    return None;
                }
                family.insert(k);
                continue;
            }
            for &r in &self.basis_rays[alice[depth]] {
                stack.push((depth + 1, covered | self.orth[r]));
            }
        }
        let mut sets: Vec<u64> = family.into_iter().collect();
        sets.sort_by_key(|s| (s.count_ones(), *s));
        let mut minimal: Vec<u64> = Vec::new();
        for s in sets {
            if !minimal.iter().any(|&t| t & s == t) {
                minimal.push(s);
            }
        }
        Some(minimal)
    }
}

/// Least hitting set of `family` with at most `limit` elements (first in DFS order).
fn min_hitting_set(family: &[u64], limit: usize) -> Option<u64> {
    fn dfs(family: &[u64], chosen: u64, left: usize) -> Option<u64> {
        let unhit = family.iter().filter(|&&s| s & chosen == 0).min_by_key(|s| s.count_ones());
        let Some(&s) = unhit else { return Some(chosen) };
        if left == 0 {
            return None;
        }
        let mut bits = s;
        while bits != 0 {
            let b = bits.trailing_zeros();
            bits &= bits - 1;
            if let Some(found) = dfs(family, chosen | 1 << b, left - 1) {
                return Some(found);
            }
        }
        None
    }
    (0..=limit).find_map(|d| dfs(family, 0, d))
}

fn mask_to_indices(mask: u64) -> Vec<usize> {
    (0..64).filter(|i| mask >> i & 1 == 1).collect()
}

/// Whether the classical players can win every context of the game on these
/// basis subsets.
pub fn has_perfect_classical_strategy(inst: &KSInstance, alice: &[usize], bob: &[usize]) -> bool {
    let masks = Masks::new(inst).expect("instance fits the mask representation");
    match masks.killing_family(alice) {
        None => true,
        Some(family) => {
            let bob_mask = bob.iter().fold(0u64, |m, &y| m | 1 << y);
            family.iter().any(|&k| k & bob_mask == 0)
        }
    }
}

/// Permutations of the complete bases induced by the graph automorphisms.
fn basis_symmetries(inst: &KSInstance, limit: usize) -> Option<Vec<Vec<usize>>> {
    let aut = automorphisms(inst.graph().graph());
    let elements = group_elements(inst.len(), &aut.generators, limit)?;
    let index: std::collections::HashMap<[usize; 3], usize> =
        inst.bases().iter().enumerate().map(|(i, b)| (*b, i)).collect();
    Some(
        elements
            .iter()
            .map(|p| {
                inst.bases()
                    .iter()
                    .map(|b| {
                        let mut img = b.map(|r| p[r]);
                        img.sort_unstable();
                        index[&img]
                    })
                    .collect()
            })
            .collect(),
    )
}

fn image(mask: u64, perm: &[usize]) -> u64 {
    let mut out = 0;
    let mut bits = mask;
    while bits != 0 {
        let b = bits.trailing_zeros() as usize;
        bits &= bits - 1;
        out |= 1 << perm[b];
    }
    out
}

/// Minimizes |X|·|Y| over pairs of subsets of the complete bases such that no
/// deterministic classical strategy wins every context.
///
/// For a fixed Alice subset X, each Alice strategy s kills the Bob bases none
/// of whose members is compatible with all of s's outputs; (X, Y) has no
/// perfect classical strategy iff Y meets every killed set, so the best Y is a
/// minimum hitting set. Alice subsets are scanned by size, keeping only the
/// least representative of each automorphism class.
pub fn minimal_distribution_search(inst: &KSInstance, opts: &SearchOptions) -> MinimalSearch {
    let start = Instant::now();
    let m = inst.bases().len();
    let Some(masks) = Masks::new(inst) else {
        return MinimalSearch { best: None, complete: false, alice_sets_examined: 0, symmetry_order: 1 };
    };
    let symmetries = if opts.use_symmetry { basis_symmetries(inst, 100_000) } else { None };
    let symmetry_order = symmetries.as_ref().map_or(1, Vec::len);

    let mut best: Option<(usize, u64, u64)> = None;
    let mut examined = 0;
    for k in 1..=m {
        if let Some((p, _, _)) = best {
            if k * k >= p {
                break;
            }
        }
        // Gosper's hack over k-subsets of 0..m
        let mut mask: u64 = (1u64 << k) - 1;
        let end: u64 = if m == 64 { u64::MAX } else { 1u64 << m };
        while mask < end {
            if let Some(budget) = opts.time_budget {
                if start.elapsed() > budget {
                    return finish(best, false, examined, symmetry_order);
                }
            }
            let canonical = symmetries.as_ref().map_or(true, |g| g.iter().all(|p| image(mask, p) >= mask));
            if canonical {
                examined += 1;
                let alice = mask_to_indices(mask);
                if let Some(family) = masks.killing_family(&alice) {
                    let limit = match best {
                        Some((p, _, _)) => (p - 1) / k,
                        None => m,
                    };
                    if let Some(hs) = min_hitting_set(&family, limit) {
                        let product = k * hs.count_ones() as usize;
                        if best.map_or(true, |(p, _, _)| product < p) {
                            best = Some((product, mask, hs));
                        }
                    }
                }
            }
            let c = mask & mask.wrapping_neg();
            let r = mask + c;
            if r == 0 {
                break;
            }
            mask = (((r ^ mask) >> 2) / c) | r;
        }
    }
    finish(best, true, examined, symmetry_order)
}

fn finish(best: Option<(usize, u64, u64)>, complete: bool, examined: usize, symmetry_order: usize) -> MinimalSearch {
    let best = best.map(|(_, a, b)| {
        let (a, b) = if a.count_ones() <= b.count_ones() { (a, b) } else { (b, a) };
        Split { alice: mask_to_indices(a), bob: mask_to_indices(b) }
    });
    MinimalSearch { best, complete, alice_sets_examined: examined, symmetry_order }
}

/// Whether two basis subsets are related by a graph automorphism.
pub fn equivalent_basis_sets(inst: &KSInstance, a: &[usize], b: &[usize]) -> bool {
    let to_mask = |s: &[usize]| s.iter().fold(0u64, |m, &i| m | 1 << i);
    let (ma, mb) = (to_mask(a), to_mask(b));
    match basis_symmetries(inst, 100_000) {
        Some(g) => g.iter().any(|p| image(ma, p) == mb),
        None => ma == mb,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rays::Ray;

    fn basis(m: [&str; 3]) -> Basis {
        Basis::parse(m).unwrap()
    }

    #[test]
    fn identical_bases_are_perfect() {
        let b = basis(["(0,0,1)", "(0,1,0)", "(1,0,0)"]);
        let g = build_game(vec![b.clone()], vec![b]);
        assert!(matches!(g.contexts[0].kind, ContextKind::Other { shared: 3, .. }));
        let c = classical_value(&g);
        assert_eq!(c.value, BigRational::from_integer(1.into()));
    }

    #[test]
    fn non_orthogonal_bases_always_win() {
        let a = basis(["(0,0,1)", "(0,1,0)", "(1,0,0)"]);
        let b = basis(["(1,1,1)", "(1,ω,ω²)", "(1,ω²,ω)"]);
        let g = build_game(vec![a], vec![b]);
        assert_eq!(g.contexts[0].winning_count(), 9);
        assert_eq!(classical_value(&g).won, 1);
        let q = quantum_value_maxent(&g);
        assert!(q.value.is_one());
        assert!(q.contexts_normalized());
    }

    #[test]
    fn hitting_sets() {
        assert_eq!(min_hitting_set(&[0b011, 0b110], 3), Some(0b010));
        assert_eq!(min_hitting_set(&[0b001, 0b010, 0b100], 2), None);
        assert_eq!(min_hitting_set(&[], 0), Some(0));
    }

    #[test]
    fn single_basis_has_no_refutable_split() {
        let inst = KSInstance::new("one", ["(0,0,1)", "(0,1,0)", "(1,0,0)"].map(|s| Ray::parse(s).unwrap()));
        let r = minimal_distribution_search(&inst, &SearchOptions::default());
        assert!(r.complete);
        assert!(r.best.is_none());
    }
}
