//! KS colorability: 0/1 assignments with at most one 1 per orthogonal pair and
//! exactly one 1 per complete basis.

use std::fmt;
use std::fmt::Write as _;

use crate::graph::{build_graph, complete_bases, OrthoGraph};
use crate::rays::{Basis, Ray};

/// A named ray set with its orthogonality graph and complete bases.
#[derive(Clone, Debug)]
pub struct KSInstance {
    name: String,
    graph: OrthoGraph,
    bases: Vec<[usize; 3]>,
    bases_of: Vec<Vec<usize>>,
    notes: Vec<String>,
}

impl KSInstance {
    pub fn new(name: impl Into<String>, rays: impl IntoIterator<Item = Ray>) -> Self {
        let graph = build_graph(rays);
        let bases = complete_bases(&graph);
        let mut bases_of = vec![Vec::new(); graph.len()];
        for (bi, b) in bases.iter().enumerate() {
            for &r in b {
                bases_of[r].push(bi);
            }
        }
        KSInstance { name: name.into(), graph, bases, bases_of, notes: Vec::new() }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn rays(&self) -> &[Ray] {
        self.graph.rays()
    }

    pub fn len(&self) -> usize {
        self.graph.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graph.is_empty()
    }

    pub fn graph(&self) -> &OrthoGraph {
        &self.graph
    }

    /// Complete bases as ascending index triples into [`Self::rays`].
    pub fn bases(&self) -> &[[usize; 3]] {
        &self.bases
    }

    pub fn basis(&self, i: usize) -> Basis {
        let [a, b, c] = self.bases[i];
        let rays = self.rays();
        Basis::new([rays[a].clone(), rays[b].clone(), rays[c].clone()]).expect("3-clique is a basis")
    }

    /// Index of the complete basis with exactly these members, in any order.
    pub fn basis_index(&self, b: &Basis) -> Option<usize> {
        let mut idx = [0usize; 3];
        for (slot, r) in idx.iter_mut().zip(b.rays()) {
            *slot = self.index_of(r)?;
        }
        idx.sort_unstable();
        self.bases.iter().position(|x| *x == idx)
    }

    pub fn index_of(&self, r: &Ray) -> Option<usize> {
        self.graph.index_of(r)
    }

    pub fn notes(&self) -> &[String] {
        &self.notes
    }

    /// The instance restricted to the rays at `indices`.
    pub fn subset(&self, name: impl Into<String>, indices: &[usize]) -> KSInstance {
        KSInstance::new(name, indices.iter().map(|&i| self.rays()[i].clone()))
    }

    /// Same rays, fresh instance built from the given order (used to check order independence).
    pub fn from_permuted(&self, order: &[usize]) -> KSInstance {
        self.subset(self.name.clone(), order)
    }
}

/// A 0/1 valuation, indexed like [`KSInstance::rays`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Assignment {
    pub values: Vec<bool>,
}

impl Assignment {
    pub fn ones(&self) -> Vec<usize> {
        self.values.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i).collect()
    }

    pub fn value_of(&self, inst: &KSInstance, r: &Ray) -> Option<bool> {
        inst.index_of(r).map(|i| self.values[i])
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AssignmentViolation {
    WrongLength { expected: usize, got: usize },
    /// Two orthogonal rays both valued 1.
    Edge(usize, usize),
    /// A complete basis whose values do not sum to 1.
    Basis { basis: [usize; 3], sum: usize },
}

impl fmt::Display for AssignmentViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AssignmentViolation::WrongLength { expected, got } => {
                write!(f, "assignment covers {got} rays, instance has {expected}")
            }
            AssignmentViolation::Edge(u, v) => write!(f, "orthogonal rays {u} and {v} are both assigned 1"),
            AssignmentViolation::Basis { basis, sum } => {
                write!(f, "basis {:?} sums to {sum}, not 1", basis)
            }
        }
    }
}

pub fn verify_assignment(inst: &KSInstance, f: &Assignment) -> Result<(), AssignmentViolation> {
    if f.values.len() != inst.len() {
        return Err(AssignmentViolation::WrongLength { expected: inst.len(), got: f.values.len() });
    }
    for (u, v) in inst.graph().graph().edges() {
        if f.values[u] && f.values[v] {
            return Err(AssignmentViolation::Edge(u, v));
        }
    }
    for b in inst.bases() {
        let sum = b.iter().filter(|&&r| f.values[r]).count();
        if sum != 1 {
            return Err(AssignmentViolation::Basis { basis: *b, sum });
        }
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KsVerdict {
    Sat(Assignment, SearchStats),
    Unsat(SearchStats),
}

impl KsVerdict {
    pub fn is_sat(&self) -> bool {
        matches!(self, KsVerdict::Sat(..))
    }

    pub fn stats(&self) -> SearchStats {
        match self {
            KsVerdict::Sat(_, s) | KsVerdict::Unsat(s) => *s,
        }
    }
}

const UNSET: i8 = -1;

struct Solver<'a> {
    inst: &'a KSInstance,
    nodes: u64,
}

impl Solver<'_> {
    /// Sets `v := val` and propagates; false on conflict.
    fn assign(&self, vals: &mut [i8], v: usize, val: i8) -> bool {
        let mut queue = vec![(v, val)];
        while let Some((v, val)) = queue.pop() {
            if vals[v] == val {
                continue;
            }
            if vals[v] != UNSET {
                return false;
            }
            vals[v] = val;
            if val == 1 {
                queue.extend(self.inst.graph().graph().neighbors(v).iter().map(|u| (u, 0)));
            } else {
                for &bi in &self.inst.bases_of[v] {
                    let b = self.inst.bases[bi];
                    if b.iter().any(|&r| vals[r] == 1) {
                        continue;
                    }
                    let open: Vec<usize> = b.iter().copied().filter(|&r| vals[r] == UNSET).collect();
                    match open.len() {
                        0 => return false,
                        1 => queue.push((open[0], 1)),
                        _ => {}
                    }
                }
            }
        }
        true
    }

    /// Picks an unsatisfied basis with fewest open members.
    fn branch_basis(&self, vals: &[i8]) -> Option<[usize; 3]> {
        self.inst
            .bases
            .iter()
            .filter(|b| b.iter().all(|&r| vals[r] != 1))
            .min_by_key(|b| b.iter().filter(|&&r| vals[r] == UNSET).count())
            .copied()
    }

    fn search(&mut self, vals: Vec<i8>) -> Option<Vec<i8>> {
        self.nodes += 1;
        let Some(b) = self.branch_basis(&vals) else {
            return Some(vals.into_iter().map(|v| if v == 1 { 1 } else { 0 }).collect());
        };
        for r in b {
            if vals[r] != UNSET {
                continue;
            }
            let mut next = vals.clone();
            if self.assign(&mut next, r, 1) {
                if let Some(found) = self.search(next) {
                    return Some(found);
                }
            }
        }
        None
    }

    fn enumerate(&mut self, vals: Vec<i8>, limit: usize, out: &mut Vec<Assignment>) {
        self.nodes += 1;
        if out.len() >= limit {
            return;
        }
        let Some(v) = vals.iter().position(|&x| x == UNSET) else {
            out.push(Assignment { values: vals.iter().map(|&x| x == 1).collect() });
            return;
        };
        for val in [0, 1] {
            let mut next = vals.clone();
            if self.assign(&mut next, v, val) {
                self.enumerate(next, limit, out);
            }
        }
    }
}

/// Decides KS colorability by backtracking over bases: each branch picks the
/// member of an unsatisfied basis that takes the 1, followed by propagation.
pub fn find_ks_assignment(inst: &KSInstance) -> KsVerdict {
    let mut solver = Solver { inst, nodes: 0 };
    let found = solver.search(vec![UNSET; inst.len()]);
    let stats = SearchStats { nodes: solver.nodes };
    match found {
        Some(vals) => {
            let a = Assignment { values: vals.into_iter().map(|x| x == 1).collect() };
            debug_assert_eq!(verify_assignment(inst, &a), Ok(()));
            KsVerdict::Sat(a, stats)
        }
        None => KsVerdict::Unsat(stats),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Enumeration {
    pub assignments: Vec<Assignment>,
    /// More assignments exist beyond the cap.
    pub truncated: bool,
}

/// All KS assignments, in a fixed order (rays by index, 0 before 1), up to `cap`.
pub fn enumerate_ks_assignments(inst: &KSInstance, cap: usize) -> Enumeration {
    let mut solver = Solver { inst, nodes: 0 };
    let mut out = Vec::new();
    solver.enumerate(vec![UNSET; inst.len()], cap.saturating_add(1), &mut out);
    let truncated = out.len() > cap;
    out.truncate(cap);
    Enumeration { assignments: out, truncated }
}

/// DIMACS CNF of the constraint system; variable `i` means ray `i−1` is assigned 1.
pub fn to_dimacs_cnf(inst: &KSInstance) -> String {
    let edges: Vec<(usize, usize)> = inst.graph().graph().edges().collect();
    let mut s = String::new();
    writeln!(s, "c KS colorability of {} ({} rays, {} complete bases)", inst.name(), inst.len(), inst.bases().len())
        .unwrap();
    writeln!(s, "p cnf {} {}", inst.len(), edges.len() + inst.bases().len()).unwrap();
    for (u, v) in edges {
        writeln!(s, "-{} -{} 0", u + 1, v + 1).unwrap();
    }
    for [a, b, c] in inst.bases() {
        writeln!(s, "{} {} {} 0", a + 1, b + 1, c + 1).unwrap();
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> KSInstance {
        KSInstance::new("triangle", ["(0,0,1)", "(0,1,0)", "(1,0,0)"].iter().map(|s| Ray::parse(s).unwrap()))
    }

    fn assignment(v: &[u8]) -> Assignment {
        Assignment { values: v.iter().map(|&x| x == 1).collect() }
    }

    #[test]
    fn verify_examples() {
        let t = triangle();
        assert_eq!(verify_assignment(&t, &assignment(&[1, 0, 0])), Ok(()));
        assert!(matches!(verify_assignment(&t, &assignment(&[1, 1, 0])), Err(AssignmentViolation::Edge(..))));
        assert!(matches!(
            verify_assignment(&t, &assignment(&[0, 0, 0])),
            Err(AssignmentViolation::Basis { sum: 0, .. })
        ));
        assert!(matches!(verify_assignment(&t, &assignment(&[1])), Err(AssignmentViolation::WrongLength { .. })));
    }

    #[test]
    fn single_basis() {
        let t = triangle();
        assert!(find_ks_assignment(&t).is_sat());
        let e = enumerate_ks_assignments(&t, 10);
        assert_eq!(e.assignments.len(), 3);
        assert!(!e.truncated);
        let e = enumerate_ks_assignments(&t, 2);
        assert_eq!(e.assignments.len(), 2);
        assert!(e.truncated);
    }

    #[test]
    fn cnf_shape() {
        let cnf = to_dimacs_cnf(&triangle());
        assert!(cnf.contains("p cnf 3 4\n"));
        assert!(cnf.contains("1 2 3 0\n"));
    }
}
