//! Shipped vector sets, the JSON vector-set file format, and the summary table.
//!
//! `new33` and `yuoh13` are built in code. Other sets come from
//! `<data dir>/<name>.json`; the data directory is `$KSCHECK_DATA_DIR` when
//! set, otherwise the `data/` directory of this crate.
//!
//! A vector-set file looks like
//!
//! ```json
//! {
//!   "name": "example",
//!   "conductor": 3,
//!   "provenance": "where the coordinates come from",
//!   "rays": [[[[0,1,1]], [], []], [[[2,1,1]], [[1,1,1]], [[0,1,1]]]],
//!   "declared_bases": [[0, 1, 2]]
//! }
//! ```
//!
//! Each component is a list of `[power, numerator, denominator]` triples
//! meaning Σ (numerator/denominator)·ζ^power with ζ = e^{2πi/conductor};
//! `[]` is zero. `declared_bases` is optional.

use std::collections::HashMap;
use std::fmt;
use std::path::{Path, PathBuf};

use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::colorability::{find_ks_assignment, KSInstance};
use crate::error::{Error, Result};
use crate::game::{minimal_distribution_search, SearchOptions};
use crate::graph::automorphisms;
use crate::numfield::CycNumber;
use crate::rays::{complete_basis_third, validate_basis, Basis, BasisViolation, Ray};

pub const DATA_DIR_ENV: &str = "KSCHECK_DATA_DIR";

/// Names accepted by [`builtin`].
pub const BUILTIN_NAMES: [&str; 6] = ["new33", "yuoh13", "peres33", "conway31", "schuette33", "penrose33"];

pub fn data_dir() -> PathBuf {
    std::env::var_os(DATA_DIR_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/data")))
}

/// Alice's five bases x = 0..4 of the 5-9 game, with x = 3 as printed.
const ALICE_PRINTED: [[&str; 3]; 5] = [
    ["(0,0,1)", "(0,1,0)", "(1,0,0)"],
    ["(1,ω,ω²)", "(1,1,1)", "(ω²,ω,1)"],
    ["(1,ω,-ω²)", "(1,1,-1)", "(ω²,ω,-1)"],
    ["(1,-ω,ω²)", "(1,-1,1)", "(ω²,ω,1)"],
    ["(-1,ω,ω²)", "(-1,1,1)", "(-ω²,ω,1)"],
];

/// Bob's nine bases y = 0..8.
const BOB: [[&str; 3]; 9] = [
    ["(0,0,1)", "(1,1,0)", "(1,-1,0)"],
    ["(0,0,1)", "(1,ω,0)", "(1,-ω,0)"],
    ["(0,0,1)", "(ω,1,0)", "(ω,-1,0)"],
    ["(0,1,0)", "(1,0,1)", "(1,0,-1)"],
    ["(0,1,0)", "(1,0,ω)", "(1,0,-ω)"],
    ["(0,1,0)", "(ω,0,1)", "(ω,0,-1)"],
    ["(1,0,0)", "(0,1,1)", "(0,1,-1)"],
    ["(1,0,0)", "(0,1,ω)", "(0,1,-ω)"],
    ["(1,0,0)", "(0,ω,1)", "(0,ω,-1)"],
];

const YU_OH: [&str; 13] = [
    "(1,0,0)", "(0,1,0)", "(0,0,1)", "(0,1,1)", "(0,1,-1)", "(1,0,1)", "(1,0,-1)", "(1,1,0)", "(1,-1,0)",
    "(1,1,1)", "(1,1,-1)", "(1,-1,1)", "(-1,1,1)",
];

/// The four Yu-Oh rays that lie in no complete basis of the Yu-Oh set.
pub const YU_OH_H_RAYS: [&str; 4] = ["(1,1,1)", "(1,1,-1)", "(1,-1,1)", "(-1,1,1)"];

fn parse_ray(s: &str) -> Ray {
    Ray::parse(s).expect("builtin ray literal")
}

/// The basis x = 3 exactly as printed; its third member is not orthogonal to the others.
pub fn printed_x3() -> [Ray; 3] {
    ALICE_PRINTED[3].map(parse_ray)
}

/// Correction applied to basis x = 3, with the evidence for it.
#[derive(Clone, Debug)]
pub struct Correction {
    pub printed: Ray,
    pub corrected: Ray,
    pub violation: BasisViolation,
}

impl fmt::Display for Correction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ips: Vec<String> = self.violation.pairs.iter().map(|(_, _, ip)| ip.to_string()).collect();
        write!(
            f,
            "basis x=3: printed third member {} is not orthogonal to the other two (inner products {}); \
             replaced by the unique completion {}",
            self.printed,
            ips.join(", "),
            self.corrected
        )
    }
}

pub fn x3_correction() -> Correction {
    let printed = printed_x3();
    let violation = validate_basis(&printed).expect_err("printed x=3 is inconsistent");
    let cross = complete_basis_third(&printed[0], &printed[1]).expect("first two members are orthogonal");
    // scale so the last component is 1, matching the printed pattern
    let last = cross.components()[2].inverse().expect("nonzero third component");
    let corrected = cross.scaled(&last).expect("nonzero scale");
    Correction { printed: printed[2].clone(), corrected, violation }
}

/// Alice's bases x = 0..4 in the 5-9 game, x = 3 corrected.
pub fn alice_bases() -> Vec<Basis> {
    ALICE_PRINTED
        .iter()
        .enumerate()
        .map(|(x, members)| {
            let mut rays = members.map(parse_ray);
            if x == 3 {
                rays[2] = x3_correction().corrected;
            }
            Basis::new(rays).expect("valid basis")
        })
        .collect()
}

/// Bob's bases y = 0..8 in the 5-9 game.
pub fn bob_bases() -> Vec<Basis> {
    BOB.iter().map(|m| Basis::new(m.map(parse_ray)).expect("valid basis")).collect()
}

pub fn new33() -> KSInstance {
    let rays = alice_bases().into_iter().chain(bob_bases()).flat_map(|b| b.rays().clone());
    KSInstance::new("new33", rays).with_note(x3_correction().to_string())
}

pub fn yuoh13() -> KSInstance {
    KSInstance::new("yuoh13", YU_OH.map(parse_ray))
}

/// Looks up a shipped set by name.
pub fn builtin(name: &str) -> Result<KSInstance> {
    match name {
        "new33" => Ok(new33()),
        "yuoh13" => Ok(yuoh13()),
        "peres33" | "conway31" | "schuette33" | "penrose33" => {
            let path = data_dir().join(format!("{name}.json"));
            if !path.exists() {
                return Err(Error::MissingData { name: name.to_string(), path });
            }
            Ok(load_set(&path)?.into_validated()?)
        }
        _ => Err(Error::UnknownSet(name.to_string())),
    }
}

/// A builtin name or a path to a vector-set file.
pub fn resolve(name_or_path: &str) -> Result<KSInstance> {
    if BUILTIN_NAMES.contains(&name_or_path) {
        builtin(name_or_path)
    } else if Path::new(name_or_path).is_file() {
        load_set(Path::new(name_or_path))?.into_validated()
    } else {
        Err(Error::UnknownSet(name_or_path.to_string()))
    }
}

/// On-disk vector-set file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VectorSetFile {
    pub name: String,
    pub conductor: u32,
    #[serde(default)]
    pub provenance: String,
    pub rays: Vec<[Vec<(i64, i64, i64)>; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub declared_bases: Option<Vec<[usize; 3]>>,
}

#[derive(Clone, Debug)]
pub struct DeclaredBasisViolation {
    /// Position in `declared_bases`.
    pub index: usize,
    /// File indices of the members.
    pub members: [usize; 3],
    pub violation: BasisViolation,
}

impl fmt::Display for DeclaredBasisViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pairs: Vec<String> = self
            .violation
            .pairs
            .iter()
            .map(|(i, j, ip)| format!("rays {} and {} (inner product {ip})", self.members[*i], self.members[*j]))
            .collect();
        write!(f, "declared basis {} {:?}: not orthogonal: {}", self.index, self.members, pairs.join("; "))
    }
}

#[derive(Clone, Debug)]
pub struct LoadedSet {
    pub instance: KSInstance,
    /// Rays in file order.
    pub file_rays: Vec<Ray>,
    pub violations: Vec<DeclaredBasisViolation>,
}

impl LoadedSet {
    /// The instance, or an error naming the first non-orthogonal declared basis.
    pub fn into_validated(self) -> Result<KSInstance> {
        match self.violations.first() {
            None => Ok(self.instance),
            Some(v) => Err(Error::InvalidBasis(v.to_string())),
        }
    }
}

pub fn parse_set(text: &str) -> Result<LoadedSet> {
    let file: VectorSetFile = serde_json::from_str(text)?;
    from_file(file)
}

pub fn load_set(path: &Path) -> Result<LoadedSet> {
    parse_set(&std::fs::read_to_string(path)?)
}

fn from_file(file: VectorSetFile) -> Result<LoadedSet> {
    if file.conductor == 0 {
        return Err(Error::Parse("conductor must be positive".into()));
    }
    if file.rays.is_empty() {
        return Err(Error::Parse(format!("{}: no rays", file.name)));
    }
    let mut rays = Vec::with_capacity(file.rays.len());
    let mut seen: HashMap<Ray, usize> = HashMap::new();
    for (i, comps) in file.rays.iter().enumerate() {
        let mut cyc = Vec::with_capacity(3);
        for c in comps {
            let v = CycNumber::from_triples(file.conductor, c)
                .ok_or_else(|| Error::Parse(format!("ray {i}: zero denominator")))?;
            cyc.push(v);
        }
        let ray = Ray::new([cyc[0].clone(), cyc[1].clone(), cyc[2].clone()])
            .map_err(|e| Error::Parse(format!("ray {i}: {e}")))?;
        if let Some(&first) = seen.get(&ray) {
            return Err(Error::DuplicateRay { first, second: i, ray: ray.to_string() });
        }
        seen.insert(ray.clone(), i);
        rays.push(ray);
    }
    let mut violations = Vec::new();
    for (index, members) in file.declared_bases.iter().flatten().enumerate() {
        if let Some(&bad) = members.iter().find(|&&m| m >= rays.len()) {
            return Err(Error::Parse(format!("declared basis {index}: ray index {bad} out of range")));
        }
        let triple = members.map(|m| rays[m].clone());
        if let Err(violation) = validate_basis(&triple) {
            violations.push(DeclaredBasisViolation { index, members: *members, violation });
        }
    }
    let mut instance = KSInstance::new(file.name.clone(), rays.clone());
    if !file.provenance.is_empty() {
        instance = instance.with_note(file.provenance.clone());
    }
    Ok(LoadedSet { instance, file_rays: rays, violations })
}

/// Writes an instance in the vector-set file format (rays in canonical order).
pub fn serialize(inst: &KSInstance, provenance: &str) -> VectorSetFile {
    let conductor = inst
        .rays()
        .iter()
        .flat_map(|r| r.components().iter().map(CycNumber::conductor))
        .fold(1u32, |acc, n| acc.lcm(&n));
    let rays = inst
        .rays()
        .iter()
        .map(|r| {
            r.components().clone().map(|c| {
                c.coerce(conductor)
                    .to_triples()
                    .into_iter()
                    .map(|(p, a, b)| (p, a.to_i64().expect("small numerator"), b.to_i64().expect("small denominator")))
                    .collect()
            })
        })
        .collect();
    VectorSetFile {
        name: inst.name().to_string(),
        conductor,
        provenance: provenance.to_string(),
        rays,
        declared_bases: Some(inst.bases().to_vec()),
    }
}

/// One line of the comparison table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Table1Row {
    pub name: String,
    pub rays: usize,
    pub bases: usize,
    pub vertex_types: usize,
    pub symmetry: String,
    pub ks_colorable: bool,
    /// `(|X|, |Y|)` of the minimal perfect-strategy split, when computed and found.
    pub minimal_split: Option<(usize, usize)>,
    /// The minimal-split search ran to completion.
    pub minimal_complete: bool,
}

impl fmt::Display for Table1Row {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let split = match (self.minimal_split, self.minimal_complete) {
            (Some((a, b)), true) => format!("{a}-{b}"),
            (Some((a, b)), false) => format!("{a}-{b} (incomplete)"),
            (None, true) => "none".to_string(),
            (None, false) => "not computed".to_string(),
        };
        write!(
            f,
            "{}: {} rays, {} bases, {} orbits, {} automorphisms, {}, {}",
            self.name,
            self.rays,
            self.bases,
            self.vertex_types,
            self.symmetry,
            if self.ks_colorable { "KS-colorable" } else { "KS-uncolorable" },
            split
        )
    }
}

/// Per-instance counts: rays, complete bases, orbits, automorphism order,
/// colorability, and (when `search` is given) the minimal perfect-strategy split.
pub fn table1_report(instances: &[KSInstance], search: Option<&SearchOptions>) -> Vec<Table1Row> {
    instances
        .iter()
        .map(|inst| {
            let aut = automorphisms(inst.graph().graph());
            let (minimal_split, minimal_complete) = match search {
                Some(opts) => {
                    let m = minimal_distribution_search(inst, opts);
                    (m.best.map(|s| (s.alice.len(), s.bob.len())), m.complete)
                }
                None => (None, false),
            };
            Table1Row {
                name: inst.name().to_string(),
                rays: inst.len(),
                bases: inst.bases().len(),
                vertex_types: aut.orbits.len(),
                symmetry: aut.order.to_string(),
                ks_colorable: find_ks_assignment(inst).is_sat(),
                minimal_split,
                minimal_complete,
            }
        })
        .collect()
}
