//! Command-line front end: argument parsing, report rendering and exit codes.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use clap::{Parser, Subcommand};

use crate::catalog::{self, BUILTIN_NAMES};
use crate::colorability::{enumerate_ks_assignments, find_ks_assignment, to_dimacs_cnf, KSInstance, KsVerdict};
use crate::error::Error;
use crate::game::{
    build_game, classical_value, export_exclusivity_graph, minimal_distribution_search, quantum_value_as_given,
    quantum_value_maxent, SearchOptions,
};
use crate::graph::automorphisms;
use crate::majorana::export_majorana;
use crate::numfield::CycNumber;
use crate::rays::{Basis, Ray};
use crate::weylheisenberg::{is_sic_povm, orbit_closure, GeneratorLabel, GeneratorMatrix};

#[derive(Debug, Parser)]
#[command(name = "kscheck", version, about = "Exact verification of qutrit Kochen-Specker sets")]
pub struct Cli {
    /// Compare results with the published values; exit 1 on any mismatch.
    #[arg(long, global = true)]
    pub expect_paper: bool,
    /// Print wall-clock time (excluded by default so reports are reproducible byte for byte).
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide KS colorability.
    Verify {
        set: String,
        /// Also write the DIMACS CNF encoding here.
        #[arg(long)]
        cnf: Option<PathBuf>,
        /// List up to this many KS assignments instead of deciding.
        #[arg(long)]
        enumerate: Option<usize>,
    },
    /// List the complete bases.
    Bases { set: String },
    /// Automorphism group order and orbits.
    Symmetry { set: String },
    /// Build the nonlocal game and compute its classical and quantum values.
    Game {
        #[arg(default_value = "new33")]
        set: String,
        /// Alice's bases, as indices into the `bases` listing.
        #[arg(long, value_delimiter = ',')]
        alice: Option<Vec<usize>>,
        /// Bob's bases, as indices into the `bases` listing.
        #[arg(long, value_delimiter = ',')]
        bob: Option<Vec<usize>>,
        /// Write the exclusivity graph (DIMACS) here, with a `.legend` file beside it.
        #[arg(long)]
        export: Option<PathBuf>,
    },
    /// Search for the least |X|·|Y| split without a perfect classical strategy.
    Minimal {
        set: String,
        /// Give up after this many seconds (exit code 5).
        #[arg(long)]
        budget_secs: Option<u64>,
        #[arg(long)]
        no_symmetry: bool,
    },
    /// Close a seed set under Weyl-Heisenberg generators and compare with a target set.
    Generate {
        #[arg(long, default_value = "yuoh13")]
        seed: String,
        /// Generator labels, e.g. `Z`, `X`, `XZ`.
        #[arg(long, default_value = "Z")]
        gens: String,
        #[arg(long, default_value = "new33")]
        compare: String,
    },
    /// Orbit of one ray under X and Z, with the SIC-POVM overlap check.
    Sic {
        #[arg(long)]
        seed: String,
    },
    /// Export the Majorana points of every ray as CSV.
    Majorana {
        set: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Summary table over every available set.
    Table1 {
        /// Skip the minimal-split search.
        #[arg(long)]
        no_minimal: bool,
        #[arg(long)]
        budget_secs: Option<u64>,
    },
    /// Write a set as a JSON vector-set file.
    Export {
        set: String,
        #[arg(long)]
        out: PathBuf,
    },
}

pub mod exit {
    pub const OK: i32 = 0;
    pub const MISMATCH: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const UNKNOWN_SET: i32 = 3;
    pub const IO: i32 = 4;
    pub const TIMEOUT: i32 = 5;
}

/// Exit code for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::UnknownSet(_) | Error::MissingData { .. } | Error::Json(_) | Error::DuplicateRay { .. } => {
            exit::UNKNOWN_SET
        }
        Error::Io(_) | Error::Csv(_) => exit::IO,
        _ => exit::USAGE,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub expected: String,
    pub actual: String,
}

impl Check {
    pub fn ok(&self) -> bool {
        self.expected == self.actual
    }
}

/// Text report of one command.
#[derive(Clone, Debug, Default)]
pub struct RunReport {
    pub command: String,
    pub inputs: Vec<(String, String)>,
    pub lines: Vec<String>,
    pub notes: Vec<String>,
    pub checks: Vec<Check>,
    pub elapsed: Option<Duration>,
    pub timed_out: bool,
}

impl RunReport {
    fn new(command: &str) -> Self {
        RunReport { command: command.to_string(), ..Default::default() }
    }

    fn input(&mut self, k: &str, v: impl ToString) {
        self.inputs.push((k.to_string(), v.to_string()));
    }

    fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }

    fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    fn expect(&mut self, name: &str, expected: impl ToString, actual: impl ToString) {
        self.checks.push(Check { name: name.to_string(), expected: expected.to_string(), actual: actual.to_string() });
    }

    pub fn all_checks_pass(&self) -> bool {
        self.checks.iter().all(Check::ok)
    }

    pub fn render(&self, expect_paper: bool) -> String {
        let mut s = format!("command: {}\n", self.command);
        for (k, v) in &self.inputs {
            writeln!(s, "{k}: {v}").unwrap();
        }
        for l in &self.lines {
            writeln!(s, "{l}").unwrap();
        }
        for n in &self.notes {
            writeln!(s, "note: {n}").unwrap();
        }
        if expect_paper {
            if self.checks.is_empty() {
                writeln!(s, "expect: no published values for this input").unwrap();
            }
            for c in &self.checks {
                let verdict = if c.ok() { "PASS" } else { "FAIL" };
                writeln!(s, "expect {}: {} (expected {}, got {})", c.name, verdict, c.expected, c.actual).unwrap();
            }
        }
        if let Some(t) = self.elapsed {
            writeln!(s, "time: {:.3} s", t.as_secs_f64()).unwrap();
        }
        s
    }

    pub fn exit_code(&self, expect_paper: bool) -> i32 {
        if self.timed_out {
            exit::TIMEOUT
        } else if expect_paper && !self.all_checks_pass() {
            exit::MISMATCH
        } else {
            exit::OK
        }
    }
}

/// Published counts per set: bases, orbits, automorphism order, KS-colorable, minimal split.
struct Pinned {
    shape: Option<(usize, usize, &'static str)>,
    colorable: bool,
    split: Option<(usize, usize)>,
}

fn pinned(name: &str) -> Option<Pinned> {
    let p = |bases, orbits, order, colorable, split| Some(Pinned { shape: Some((bases, orbits, order)), colorable, split });
    match name {
        "new33" => p(14, 3, "144", false, Some((5, 9))),
        "peres33" => p(16, 4, "48", false, Some((7, 9))),
        "conway31" => p(17, 10, "4", false, None),
        "schuette33" => p(20, 9, "8", false, None),
        "yuoh13" => Some(Pinned { shape: None, colorable: true, split: None }),
        _ => None,
    }
}

fn rational_text(q: &CycNumber) -> String {
    match q.as_rational() {
        Some(r) => {
            let approx = r.numer().to_string().parse::<f64>().unwrap_or(f64::NAN)
                / r.denom().to_string().parse::<f64>().unwrap_or(f64::NAN);
            if r.denom() == &1.into() {
                r.to_string()
            } else {
                format!("{r} (≈ {approx:.4})")
            }
        }
        None => q.to_string(),
    }
}

fn set_notes(report: &mut RunReport, inst: &KSInstance) {
    for n in inst.notes() {
        report.note(n.clone());
    }
}

fn cmd_verify(set: &str, cnf: Option<PathBuf>, enumerate: Option<usize>) -> Result<RunReport, Error> {
    let inst = catalog::resolve(set)?;
    let mut r = RunReport::new("verify");
    r.input("set", inst.name());
    r.line(format!("rays: {}", inst.len()));
    r.line(format!("complete bases: {}", inst.bases().len()));
    set_notes(&mut r, &inst);
    if let Some(cap) = enumerate {
        let e = enumerate_ks_assignments(&inst, cap);
        r.line(format!("assignments listed: {}{}", e.assignments.len(), if e.truncated { " (truncated)" } else { "" }));
        for a in &e.assignments {
            let ones: Vec<String> = a.ones().iter().map(|&i| inst.rays()[i].to_string()).collect();
            r.line(format!("  ones: {}", ones.join(" ")));
        }
    }
    let verdict = find_ks_assignment(&inst);
    match &verdict {
        KsVerdict::Sat(a, stats) => {
            r.line(format!("verdict: SAT (KS-colorable), {} search nodes", stats.nodes));
            r.line("assignment (rays valued 1):");
            for i in a.ones() {
                r.line(format!("  {}", inst.rays()[i]));
            }
        }
        KsVerdict::Unsat(stats) => {
            r.line(format!("verdict: UNSAT (no KS assignment), exhaustive search over {} nodes", stats.nodes));
        }
    }
    if let Some(path) = cnf {
        std::fs::write(&path, to_dimacs_cnf(&inst))?;
        r.line(format!("cnf written: {}", path.display()));
    }
    if let Some(p) = pinned(inst.name()) {
        let show = |sat: bool| if sat { "SAT" } else { "UNSAT" };
        r.expect("verdict", show(p.colorable), show(verdict.is_sat()));
    }
    Ok(r)
}

fn cmd_bases(set: &str) -> Result<RunReport, Error> {
    let inst = catalog::resolve(set)?;
    let mut r = RunReport::new("bases");
    r.input("set", inst.name());
    r.line(format!("complete bases: {}", inst.bases().len()));
    for (i, _) in inst.bases().iter().enumerate() {
        r.line(format!("  {i}: {}", inst.basis(i)));
    }
    if let Some((bases, _, _)) = pinned(inst.name()).and_then(|p| p.shape) {
        r.expect("complete bases", bases, inst.bases().len());
    }
    Ok(r)
}

fn cmd_symmetry(set: &str) -> Result<RunReport, Error> {
    let inst = catalog::resolve(set)?;
    let aut = automorphisms(inst.graph().graph());
    let mut r = RunReport::new("symmetry");
    r.input("set", inst.name());
    r.line(format!("automorphism group order: {}", aut.order));
    r.line(format!("orbits: {}", aut.orbits.len()));
    r.line(format!("orbit sizes: {:?}", aut.orbit_sizes()));
    for (i, o) in aut.orbits.iter().enumerate() {
        let rays: Vec<String> = o.iter().map(|&v| inst.rays()[v].to_string()).collect();
        r.line(format!("  orbit {i} ({}): {}", o.len(), rays.join(" ")));
    }
    r.line(format!("generators: {}", aut.generators.len()));
    if let Some((_, orbits, order)) = pinned(inst.name()).and_then(|p| p.shape) {
        r.expect("automorphism order", order, &aut.order);
        r.expect("orbits", orbits, aut.orbits.len());
        if inst.name() == "new33" {
            r.expect("orbit sizes", "[3, 12, 18]", format!("{:?}", aut.orbit_sizes()));
        }
    }
    Ok(r)
}

fn select_bases(inst: &KSInstance, idx: &[usize]) -> Result<Vec<Basis>, Error> {
    idx.iter()
        .map(|&i| {
            if i < inst.bases().len() {
                Ok(inst.basis(i))
            } else {
                Err(Error::Unsupported(format!("basis index {i} out of range (set has {})", inst.bases().len())))
            }
        })
        .collect()
}

fn cmd_game(
    set: &str,
    alice: Option<Vec<usize>>,
    bob: Option<Vec<usize>>,
    export: Option<PathBuf>,
) -> Result<RunReport, Error> {
    let inst = catalog::resolve(set)?;
    let mut r = RunReport::new("game");
    r.input("set", inst.name());
    let published = inst.name() == "new33" && alice.is_none() && bob.is_none();
    let (xs, ys) = match (alice, bob) {
        (Some(a), Some(b)) => (select_bases(&inst, &a)?, select_bases(&inst, &b)?),
        (None, None) if inst.name() == "new33" => {
            r.note(catalog::x3_correction().to_string());
            (catalog::alice_bases(), catalog::bob_bases())
        }
        _ => return Err(Error::Unsupported("pass both --alice and --bob for this set".into())),
    };
    for (i, b) in xs.iter().enumerate() {
        r.line(format!("alice x={i}: {b}"));
    }
    for (i, b) in ys.iter().enumerate() {
        r.line(format!("bob y={i}: {b}"));
    }
    let g = build_game(xs, ys);
    let summary = g.summary();
    r.line(summary.to_string());
    let c = classical_value(&g);
    r.line(format!("W_C = {} (α = {} of {} contexts)", rational_text(&CycNumber::from_rational(1, c.value.clone())), c.won, c.contexts));
    r.line(format!("optimal classical strategy: alice {:?}, bob {:?}", c.strategy.alice, c.strategy.bob));
    let q = quantum_value_maxent(&g);
    r.line(format!("W_Q = {}", rational_text(&q.value)));
    r.line(format!("losing events all have probability 0: {}", q.losing_events_vanish(&g)));
    r.line(format!("every context's probabilities sum to 1: {}", q.contexts_normalized()));
    r.note("W_Q uses the maximally entangled state with Bob measuring the complex conjugate of his basis");
    let literal = quantum_value_as_given(&g);
    r.note(format!("with Bob measuring his basis vectors unconjugated the same state gives {}", rational_text(&literal.value)));
    if let Some(path) = export {
        let s = export_exclusivity_graph(&g, &path)?;
        r.line(format!(
            "exclusivity graph: {} vertices, {} edges, written to {} (legend {})",
            s.vertices,
            s.edges,
            s.graph_path.display(),
            s.legend_path.display()
        ));
    }
    if published {
        r.expect("contexts", 45, summary.contexts);
        r.expect("shared-vector contexts", 9, summary.shared_vector);
        r.expect("orthogonal-pair contexts", 36, summary.orthogonal_pair);
        r.expect("winning events", 333, summary.winning_events);
        r.expect("W_C", "44/45", &c.value);
        r.expect("W_Q", "1", rational_text(&q.value));
    }
    Ok(r)
}

fn cmd_minimal(set: &str, budget: Option<u64>, no_symmetry: bool) -> Result<RunReport, Error> {
    let inst = catalog::resolve(set)?;
    let mut r = RunReport::new("minimal");
    r.input("set", inst.name());
    let opts = SearchOptions { time_budget: budget.map(Duration::from_secs), use_symmetry: !no_symmetry };
    let m = minimal_distribution_search(&inst, &opts);
    r.line(format!("symmetry group used for pruning: {} elements", m.symmetry_order));
    r.line(format!("canonical Alice subsets examined: {}", m.alice_sets_examined));
    match &m.best {
        Some(s) => {
            r.line(format!("minimal split: {}-{} (|X|·|Y| = {})", s.alice.len(), s.bob.len(), s.product()));
            r.line(format!("alice bases: {:?}", s.alice));
            r.line(format!("bob bases: {:?}", s.bob));
        }
        None => r.line("minimal split: none (every split has a perfect classical strategy)"),
    }
    r.line(format!("search complete: {}", m.complete));
    r.timed_out = !m.complete;
    r.note(
        "minimality is taken over pairs of subsets of the complete bases for which no deterministic \
         classical strategy wins every context",
    );
    if let Some((a, b)) = pinned(inst.name()).and_then(|p| p.split) {
        let got = m.best.as_ref().map_or("none".to_string(), |s| format!("{}-{}", s.alice.len(), s.bob.len()));
        r.expect("minimal split", format!("{a}-{b}"), got);
    }
    Ok(r)
}

fn load_seed(seed: &str) -> Result<Vec<Ray>, Error> {
    if seed.trim_start().starts_with('(') {
        Ok(vec![Ray::parse(seed)?])
    } else {
        Ok(catalog::resolve(seed)?.rays().to_vec())
    }
}

fn parse_gens(gens: &str) -> Result<Vec<GeneratorMatrix>, Error> {
    gens.chars()
        .filter(|c| !matches!(c, ',' | ' '))
        .map(|c| match c.to_ascii_uppercase() {
            'X' => Ok(GeneratorMatrix::from_label(GeneratorLabel::X)),
            'Z' => Ok(GeneratorMatrix::from_label(GeneratorLabel::Z)),
            other => Err(Error::Parse(format!("unknown generator {other:?}, expected X or Z"))),
        })
        .collect()
}

fn cmd_generate(seed: &str, gens: &str, compare: &str) -> Result<RunReport, Error> {
    let seed_rays = load_seed(seed)?;
    let g = parse_gens(gens)?;
    let target = catalog::resolve(compare)?;
    let closure = orbit_closure(seed_rays.iter().cloned(), &g);
    let target_set: std::collections::BTreeSet<Ray> = target.rays().iter().cloned().collect();
    let seed_set: std::collections::BTreeSet<Ray> = seed_rays.iter().cloned().collect();
    let mut r = RunReport::new("generate");
    r.input("seed", seed);
    r.input("generators", g.iter().map(|m| m.label.to_string()).collect::<String>());
    r.input("compare", target.name());
    r.line(format!("seed rays: {}", seed_set.len()));
    r.line(format!("closure rays: {}", closure.len()));
    r.line(format!("closure equals seed: {}", closure == seed_set));
    r.line(format!("closure equals {}: {}", target.name(), closure == target_set));
    let extra: Vec<String> = closure.difference(&target_set).map(|x| x.to_string()).collect();
    let missing: Vec<String> = target_set.difference(&closure).map(|x| x.to_string()).collect();
    if !extra.is_empty() {
        r.line(format!("in closure only: {}", extra.join(" ")));
    }
    if !missing.is_empty() {
        r.line(format!("in {} only: {}", target.name(), missing.join(" ")));
    }
    if seed == "yuoh13" {
        let labels: String = g.iter().map(|m| m.label.to_string()).collect();
        match labels.as_str() {
            "X" => r.expect("X-closure of yuoh13 equals yuoh13", true, closure == seed_set),
            "Z" if target.name() == "new33" => r.expect("Z-closure of yuoh13 equals new33", true, closure == target_set),
            _ => {}
        }
    }
    Ok(r)
}

fn cmd_sic(seed: &str) -> Result<RunReport, Error> {
    let ray = Ray::parse(seed)?;
    let orbit = orbit_closure([ray.clone()], &[GeneratorMatrix::x(), GeneratorMatrix::z()]);
    let rep = is_sic_povm(orbit);
    let mut r = RunReport::new("sic");
    r.input("seed", &ray);
    r.line(format!("orbit size: {}", rep.rays.len()));
    r.line(format!("SIC-POVM: {}", rep.is_sic));
    r.line(rep.render().trim_end().to_string());
    if Ray::parse("(1,1,0)").ok().as_ref() == Some(&ray) || Ray::parse("(1,-1,0)").ok().as_ref() == Some(&ray) {
        r.expect("SIC-POVM", true, rep.is_sic);
        r.expect("orbit size", 9, rep.rays.len());
    }
    Ok(r)
}

fn cmd_majorana(set: &str, out: PathBuf) -> Result<RunReport, Error> {
    let inst = catalog::resolve(set)?;
    let rows = export_majorana(&inst, &out)?;
    let mut r = RunReport::new("majorana");
    r.input("set", inst.name());
    r.line(format!("rows written: {rows} to {}", out.display()));
    r.note(crate::majorana::CONVENTION);
    if inst.name() == "new33" {
        r.expect("rows", 66, rows);
    }
    Ok(r)
}

fn cmd_table1(minimal: bool, budget: Option<u64>) -> Result<RunReport, Error> {
    let mut r = RunReport::new("table1");
    let mut instances = Vec::new();
    for name in BUILTIN_NAMES {
        if name == "yuoh13" {
            continue;
        }
        match catalog::builtin(name) {
            Ok(inst) => instances.push(inst),
            Err(Error::MissingData { path, .. }) => r.note(format!("{name}: skipped, no data file at {}", path.display())),
            Err(e) => return Err(e),
        }
    }
    let opts = SearchOptions { time_budget: budget.map(Duration::from_secs), use_symmetry: true };
    let rows = catalog::table1_report(&instances, minimal.then_some(&opts));
    for row in &rows {
        r.line(row.to_string());
        if let Some(p) = pinned(&row.name) {
            if let Some((bases, orbits, order)) = p.shape {
                r.expect(&format!("{} bases", row.name), bases, row.bases);
                r.expect(&format!("{} orbits", row.name), orbits, row.vertex_types);
                r.expect(&format!("{} automorphisms", row.name), order, &row.symmetry);
            }
            r.expect(&format!("{} KS-colorable", row.name), p.colorable, row.ks_colorable);
            if minimal {
                if let Some((a, b)) = p.split {
                    let got = row.minimal_split.map_or("none".into(), |(x, y)| format!("{x}-{y}"));
                    r.expect(&format!("{} minimal split", row.name), format!("{a}-{b}"), got);
                }
            }
        }
        if minimal && !row.minimal_complete {
            r.timed_out = true;
        }
    }
    Ok(r)
}

fn cmd_export(set: &str, out: PathBuf) -> Result<RunReport, Error> {
    let inst = catalog::resolve(set)?;
    let file = catalog::serialize(&inst, &inst.notes().join("; "));
    std::fs::write(&out, serde_json::to_string_pretty(&file)?)?;
    let mut r = RunReport::new("export");
    r.input("set", inst.name());
    r.line(format!("wrote {} rays to {}", inst.len(), out.display()));
    Ok(r)
}

/// Runs a parsed command line; returns the report text and the exit code.
pub fn run(cli: Cli) -> (String, i32) {
    let start = Instant::now();
    let result = match cli.command {
        Command::Verify { set, cnf, enumerate } => cmd_verify(&set, cnf, enumerate),
        Command::Bases { set } => cmd_bases(&set),
        Command::Symmetry { set } => cmd_symmetry(&set),
        Command::Game { set, alice, bob, export } => cmd_game(&set, alice, bob, export),
        Command::Minimal { set, budget_secs, no_symmetry } => cmd_minimal(&set, budget_secs, no_symmetry),
        Command::Generate { seed, gens, compare } => cmd_generate(&seed, &gens, &compare),
        Command::Sic { seed } => cmd_sic(&seed),
        Command::Majorana { set, out } => cmd_majorana(&set, out),
        Command::Table1 { no_minimal, budget_secs } => cmd_table1(!no_minimal, budget_secs),
        Command::Export { set, out } => cmd_export(&set, out),
    };
    match result {
        Ok(mut report) => {
            if cli.timing {
                report.elapsed = Some(start.elapsed());
            }
            (report.render(cli.expect_paper), report.exit_code(cli.expect_paper))
        }
        Err(e) => (format!("error: {e}\n"), exit_code(&e)),
    }
}

/// Parses `args` (including the program name) and runs; usage errors give exit code 2.
pub fn run_args<I, T>(args: I) -> (String, i32)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(cli),
        Err(e) => {
            let code = if e.use_stderr() { exit::USAGE } else { exit::OK };
            (e.to_string(), code)
        }
    }
}
