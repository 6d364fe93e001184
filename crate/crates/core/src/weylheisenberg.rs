//! Weyl-Heisenberg action on qutrit rays: the shift X, the phase Z, orbit
//! closures, and the SIC-POVM overlap test.

use std::collections::BTreeSet;
use std::fmt;

use crate::numfield::CycNumber;
use crate::rays::{inner, Ray};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GeneratorLabel {
    X,
    Z,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorMatrix {
    pub label: GeneratorLabel,
    pub entries: [[CycNumber; 3]; 3],
}

impl GeneratorMatrix {
    /// Cyclic shift |j⟩ ↦ |j+1⟩.
    pub fn x() -> Self {
        let z = || CycNumber::zero(3);
        let o = || CycNumber::one(3);
        GeneratorMatrix { label: GeneratorLabel::X, entries: [[z(), z(), o()], [o(), z(), z()], [z(), o(), z()]] }
    }

    /// diag(1, ω, ω²).
    pub fn z() -> Self {
        let z = || CycNumber::zero(3);
        GeneratorMatrix {
            label: GeneratorLabel::Z,
            entries: [
                [CycNumber::one(3), z(), z()],
                [z(), CycNumber::root(3, 1), z()],
                [z(), z(), CycNumber::root(3, 2)],
            ],
        }
    }

    pub fn from_label(label: GeneratorLabel) -> Self {
        match label {
            GeneratorLabel::X => Self::x(),
            GeneratorLabel::Z => Self::z(),
        }
    }

    /// Columns are orthogonal with equal norms.
    pub fn is_unitary(&self) -> bool {
        let col = |j: usize| [self.entries[0][j].clone(), self.entries[1][j].clone(), self.entries[2][j].clone()];
        let dot = |a: &[CycNumber; 3], b: &[CycNumber; 3]| -> CycNumber {
            a.iter().zip(b).map(|(x, y)| &x.conj() * y).sum()
        };
        let cols = [col(0), col(1), col(2)];
        let n0 = dot(&cols[0], &cols[0]);
        (0..3).all(|i| (0..3).all(|j| if i == j { dot(&cols[i], &cols[j]) == n0 } else { dot(&cols[i], &cols[j]).is_zero() }))
    }
}

impl fmt::Display for GeneratorLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GeneratorLabel::X => "X",
            GeneratorLabel::Z => "Z",
        })
    }
}

/// Matrix-vector product, canonicalized.
pub fn apply(m: &GeneratorMatrix, r: &Ray) -> Ray {
    let c = r.components();
    let row = |i: usize| -> CycNumber { (0..3).map(|j| &m.entries[i][j] * &c[j]).sum() };
    Ray::new([row(0), row(1), row(2)]).expect("unitary image of a nonzero ray")
}

/// Smallest superset of `seed` closed under every generator.
pub fn orbit_closure(seed: impl IntoIterator<Item = Ray>, gens: &[GeneratorMatrix]) -> BTreeSet<Ray> {
    let mut closed: BTreeSet<Ray> = BTreeSet::new();
    let mut frontier: Vec<Ray> = seed.into_iter().collect();
    while let Some(r) = frontier.pop() {
        if closed.contains(&r) {
            continue;
        }
        for g in gens {
            let img = apply(g, &r);
            if !closed.contains(&img) {
                frontier.push(img);
            }
        }
        closed.insert(r);
    }
    closed
}

/// Overlap data of a candidate SIC-POVM.
#[derive(Clone, Debug)]
pub struct SicReport {
    pub is_sic: bool,
    pub rays: Vec<Ray>,
    /// `(i, j, |⟨u|v⟩|² / (‖u‖²‖v‖²))` for every pair `i < j`.
    pub overlaps: Vec<(usize, usize, CycNumber)>,
}

impl SicReport {
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (i, r) in self.rays.iter().enumerate() {
            out.push_str(&format!("  ray {i}: {r}\n"));
        }
        for (i, j, q) in &self.overlaps {
            out.push_str(&format!("  |<{i}|{j}>|^2 normalized = {q}\n"));
        }
        out
    }
}

/// Nine rays with 4·|⟨u|v⟩|² = ‖u‖²·‖v‖² for every distinct pair.
pub fn is_sic_povm(rays: impl IntoIterator<Item = Ray>) -> SicReport {
    let rays: Vec<Ray> = rays.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
    let four = CycNumber::from_int(1, 4);
    let mut ok = rays.len() == 9;
    let mut overlaps = Vec::new();
    for i in 0..rays.len() {
        for j in i + 1..rays.len() {
            let num = inner(&rays[i], &rays[j]).abs_sq();
            let den = &rays[i].norm_sq() * &rays[j].norm_sq();
            ok &= (&(&four * &num) - &den).is_zero();
            overlaps.push((i, j, num.checked_div(&den).expect("nonzero norms")));
        }
    }
    SicReport { is_sic: ok, rays, overlaps }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Ray {
        Ray::parse(s).unwrap()
    }

    #[test]
    fn generator_images() {
        assert!(GeneratorMatrix::x().is_unitary());
        assert!(GeneratorMatrix::z().is_unitary());
        assert_eq!(apply(&GeneratorMatrix::z(), &r("(1,1,1)")), r("(1,ω,ω²)"));
        assert_eq!(apply(&GeneratorMatrix::x(), &r("(0,0,1)")), r("(1,0,0)"));
        assert_eq!(apply(&GeneratorMatrix::z(), &r("(1,1,0)")), r("(1,ω,0)"));
    }

    #[test]
    fn order_three() {
        for g in [GeneratorMatrix::x(), GeneratorMatrix::z()] {
            let v = r("(1,2,-ω)");
            assert_eq!(apply(&g, &apply(&g, &apply(&g, &v))), v);
        }
    }

    #[test]
    fn computational_basis_closure() {
        let c = orbit_closure([r("(0,0,1)")], &[GeneratorMatrix::x()]);
        let expect: BTreeSet<Ray> = ["(0,0,1)", "(1,0,0)", "(0,1,0)"].iter().map(|s| r(s)).collect();
        assert_eq!(c, expect);
        assert!(!is_sic_povm(c).is_sic);
    }
}
