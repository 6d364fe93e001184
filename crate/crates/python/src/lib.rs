//! Python bindings: the `kscheck` extension module.

use std::path::Path;

use pyo3::exceptions::{PyIOError, PyKeyError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use kscheck_core::catalog;
use kscheck_core::colorability::{find_ks_assignment, KsVerdict};
use kscheck_core::error::Error;
use kscheck_core::game::{self, SearchOptions};
use kscheck_core::graph::automorphisms;
use kscheck_core::majorana;
use kscheck_core::weylheisenberg::{is_sic_povm, orbit_closure, GeneratorMatrix};

fn to_py(e: Error) -> PyErr {
    match e {
        Error::UnknownSet(_) | Error::MissingData { .. } => PyKeyError::new_err(e.to_string()),
        Error::Io(_) | Error::Csv(_) => PyIOError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

/// A qutrit ray with exact cyclotomic components.
#[pyclass(frozen, eq, hash, ord, str, from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Ray(kscheck_core::Ray);

impl std::fmt::Display for Ray {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

#[pymethods]
impl Ray {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        kscheck_core::Ray::parse(text).map(Ray).map_err(to_py)
    }

    fn __repr__(&self) -> String {
        format!("Ray('{}')", self.0)
    }

    /// Text of the normalized representative (first nonzero component 1).
    fn canonical(&self) -> String {
        self.0.canonical_string()
    }

    fn is_orthogonal(&self, other: &Ray) -> bool {
        kscheck_core::is_orthogonal(&self.0, &other.0)
    }

    /// ⟨self|other⟩ rendered exactly.
    fn inner(&self, other: &Ray) -> String {
        kscheck_core::inner(&self.0, &other.0).to_string()
    }

    /// The two Majorana points as (x, y, z) tuples.
    fn majorana(&self) -> ((f64, f64, f64), (f64, f64, f64)) {
        let (p, q) = majorana::majorana_points(&self.0);
        ((p.x, p.y, p.z), (q.x, q.y, q.z))
    }
}

/// A named ray set with its orthogonality graph and complete bases.
#[pyclass(frozen)]
struct KSInstance(kscheck_core::KSInstance);

fn fraction<'py>(py: Python<'py>, r: &num_rational::BigRational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?.getattr("Fraction")?.call1((r.numer().to_string().parse::<i128>()?, r.denom().to_string().parse::<i128>()?))
}

#[pymethods]
impl KSInstance {
    /// A shipped set (`new33`, `yuoh13`, `peres33`, ...) or a path to a JSON vector-set file.
    #[staticmethod]
    fn load(name_or_path: &str) -> PyResult<Self> {
        catalog::resolve(name_or_path).map(KSInstance).map_err(to_py)
    }

    #[staticmethod]
    fn from_rays(name: &str, rays: Vec<Ray>) -> Self {
        KSInstance(kscheck_core::KSInstance::new(name, rays.into_iter().map(|r| r.0)))
    }

    #[getter]
    fn name(&self) -> String {
        self.0.name().to_string()
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn __repr__(&self) -> String {
        format!("KSInstance('{}', {} rays, {} bases)", self.0.name(), self.0.len(), self.0.bases().len())
    }

    fn rays(&self) -> Vec<Ray> {
        self.0.rays().iter().cloned().map(Ray).collect()
    }

    /// Complete bases as index triples into `rays()`.
    fn bases(&self) -> Vec<(usize, usize, usize)> {
        self.0.bases().iter().map(|&[a, b, c]| (a, b, c)).collect()
    }

    /// Indices of the rays valued 1 in a KS assignment, or None when none exists.
    fn find_assignment(&self) -> Option<Vec<usize>> {
        match find_ks_assignment(&self.0) {
            KsVerdict::Sat(a, _) => Some(a.ones()),
            KsVerdict::Unsat(_) => None,
        }
    }

    fn is_ks_colorable(&self) -> bool {
        find_ks_assignment(&self.0).is_sat()
    }

    /// (group order, orbits) of the orthogonality graph.
    fn automorphisms(&self) -> PyResult<(u128, Vec<Vec<usize>>)> {
        let aut = automorphisms(self.0.graph().graph());
        let order = aut.order.to_string().parse::<u128>()?;
        Ok((order, aut.orbits))
    }

    /// Least |X|·|Y| split with no perfect classical strategy, as basis-index lists.
    #[pyo3(signature = (budget_secs=None))]
    fn minimal_split(&self, budget_secs: Option<f64>) -> PyResult<Option<(Vec<usize>, Vec<usize>)>> {
        let opts = SearchOptions {
            time_budget: budget_secs.map(std::time::Duration::from_secs_f64),
            use_symmetry: true,
        };
        let r = game::minimal_distribution_search(&self.0, &opts);
        if !r.complete {
            return Err(PyValueError::new_err("minimal-split search ran out of time"));
        }
        Ok(r.best.map(|s| (s.alice, s.bob)))
    }

    /// Classical and quantum values of the game on the given bases (indices into `bases()`).
    /// Without arguments on `new33`, uses the published 5-9 distribution.
    #[pyo3(signature = (alice=None, bob=None))]
    fn game<'py>(
        &self,
        py: Python<'py>,
        alice: Option<Vec<usize>>,
        bob: Option<Vec<usize>>,
    ) -> PyResult<Bound<'py, PyDict>> {
        let pick = |idx: Vec<usize>| -> PyResult<Vec<kscheck_core::Basis>> {
            idx.into_iter()
                .map(|i| {
                    if i < self.0.bases().len() {
                        Ok(self.0.basis(i))
                    } else {
                        Err(PyValueError::new_err(format!("basis index {i} out of range")))
                    }
                })
                .collect()
        };
        let (xs, ys) = match (alice, bob) {
            (Some(a), Some(b)) => (pick(a)?, pick(b)?),
            (None, None) if self.0.name() == "new33" => (catalog::alice_bases(), catalog::bob_bases()),
            _ => return Err(PyValueError::new_err("pass both alice and bob")),
        };
        let g = game::build_game(xs, ys);
        let s = g.summary();
        let c = game::classical_value(&g);
        let q = game::quantum_value_maxent(&g);
        let d = PyDict::new(py);
        d.set_item("contexts", s.contexts)?;
        d.set_item("shared_vector", s.shared_vector)?;
        d.set_item("orthogonal_pair", s.orthogonal_pair)?;
        d.set_item("winning_events", s.winning_events)?;
        d.set_item("classical", fraction(py, &c.value)?)?;
        d.set_item("classical_strategy", (c.strategy.alice, c.strategy.bob))?;
        match q.as_rational() {
            Some(v) => d.set_item("quantum", fraction(py, &v)?)?,
            None => d.set_item("quantum", q.value.to_string())?,
        }
        Ok(d)
    }

    /// Writes the Majorana CSV; returns the number of rows.
    fn export_majorana(&self, path: &str) -> PyResult<usize> {
        majorana::export_majorana(&self.0, Path::new(path)).map_err(to_py)
    }
}

/// Closure of `seed` under the named generators (`"X"`, `"Z"`, `"XZ"`).
#[pyfunction]
fn orbit(seed: Vec<Ray>, gens: &str) -> PyResult<Vec<Ray>> {
    let g: Vec<GeneratorMatrix> = gens
        .chars()
        .map(|c| match c {
            'X' | 'x' => Ok(GeneratorMatrix::x()),
            'Z' | 'z' => Ok(GeneratorMatrix::z()),
            _ => Err(PyValueError::new_err(format!("unknown generator {c:?}"))),
        })
        .collect::<PyResult<_>>()?;
    Ok(orbit_closure(seed.into_iter().map(|r| r.0), &g).into_iter().map(Ray).collect())
}

#[pyfunction]
fn is_sic(rays: Vec<Ray>) -> bool {
    is_sic_povm(rays.into_iter().map(|r| r.0)).is_sic
}

/// Runs the command-line tool in-process; returns (report, exit code).
#[pyfunction]
fn run_cli(args: Vec<String>) -> (String, i32) {
    kscheck_core::cli::run_args(std::iter::once("kscheck".to_string()).chain(args))
}

#[pymodule]
fn kscheck(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Ray>()?;
    m.add_class::<KSInstance>()?;
    m.add_function(wrap_pyfunction!(orbit, m)?)?;
    m.add_function(wrap_pyfunction!(is_sic, m)?)?;
    m.add_function(wrap_pyfunction!(run_cli, m)?)?;
    Ok(())
}
