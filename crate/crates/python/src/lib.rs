//! Python bindings. Structured results cross the boundary as plain dicts and
//! lists (built through `json.loads`), pairs stay opaque handles.

use std::sync::Arc;

use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;
use pyo3::types::PyType;
use serde::Serialize;

use ::tfmodlab::exactfield::{FieldTower, BUILTIN_THETA7};
use ::tfmodlab::pairs::{self, PairJson, PairModule};
use ::tfmodlab::semigroup::NumericalSemigroup;
use ::tfmodlab::{cli, ringop};

create_exception!(tfmodlab, TfmodlabError, PyException);

fn err(e: impl std::fmt::Display) -> PyErr {
    TfmodlabError::new_err(e.to_string())
}

fn to_py<'py>(py: Python<'py>, v: &impl Serialize) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(v).map_err(err)?;
    py.import("json")?.call_method1("loads", (text,))
}

fn tower_of(spec: Option<&str>) -> PyResult<Arc<FieldTower>> {
    FieldTower::from_id(spec.unwrap_or(BUILTIN_THETA7))
        .map(Arc::new)
        .map_err(err)
}

#[pyclass(name = "Tower", module = "tfmodlab", frozen)]
struct PyTower(Arc<FieldTower>);

#[pymethods]
impl PyTower {
    /// `"builtin:theta7"` or `"poly:c0,c1,…"` (monic, irreducible).
    #[new]
    #[pyo3(signature = (spec = BUILTIN_THETA7))]
    fn new(spec: &str) -> PyResult<Self> {
        tower_of(Some(spec)).map(PyTower)
    }

    #[getter]
    fn id(&self) -> String {
        self.0.id()
    }

    #[getter]
    fn degree(&self) -> usize {
        self.0.degree()
    }

    fn __repr__(&self) -> String {
        format!("Tower({:?})", self.0.id())
    }
}

#[pyclass(name = "PairModule", module = "tfmodlab", frozen)]
struct PyPair(PairModule);

#[pymethods]
impl PyPair {
    /// Member `Ψ_t` of the rank-`n` family over the given tower.
    #[classmethod]
    #[pyo3(signature = (n, t, tower = None))]
    fn psi(_cls: &Bound<'_, PyType>, n: usize, t: i64, tower: Option<&str>) -> PyResult<Self> {
        pairs::psi_default(tower_of(tower)?, n, t)
            .map(PyPair)
            .map_err(err)
    }

    #[classmethod]
    #[pyo3(signature = (n, tower = None))]
    fn free(_cls: &Bound<'_, PyType>, n: usize, tower: Option<&str>) -> PyResult<Self> {
        PairModule::free(tower_of(tower)?, n)
            .map(PyPair)
            .map_err(err)
    }

    /// Parse the `{"n", "tower", "V"}` wire form.
    #[classmethod]
    fn from_json(_cls: &Bound<'_, PyType>, text: &str) -> PyResult<Self> {
        let j: PairJson = serde_json::from_str(text).map_err(err)?;
        let tower = tower_of(Some(&j.tower))?;
        PairModule::from_json(&j, tower).map(PyPair).map_err(err)
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.0.to_json()).map_err(err)
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    #[getter]
    fn dim_k(&self) -> usize {
        self.0.dim_k()
    }

    fn is_free(&self) -> bool {
        self.0.is_free()
    }

    fn __add__(&self, other: &PyPair) -> PyResult<Self> {
        pairs::direct_sum(&self.0, &other.0)
            .map(PyPair)
            .map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("PairModule(n={}, dim_k={})", self.0.n(), self.0.dim_k())
    }
}

#[pyfunction]
fn hom_dim(p: &PyPair, q: &PyPair) -> PyResult<usize> {
    pairs::hom_thetas(&p.0, &q.0).map(|b| b.len()).map_err(err)
}

/// `None` when the pairs are not isomorphic, else an invertible witness as
/// rows of field elements.
#[pyfunction]
fn iso_witness<'py>(
    py: Python<'py>,
    p: &PyPair,
    q: &PyPair,
) -> PyResult<Option<Bound<'py, PyAny>>> {
    let res = pairs::is_isomorphic(&p.0, &q.0).map_err(err)?;
    res.witness.map(|w| to_py(py, &w.row_vecs())).transpose()
}

#[pyfunction]
fn is_isomorphic(p: &PyPair, q: &PyPair) -> PyResult<bool> {
    pairs::is_isomorphic(&p.0, &q.0)
        .map(|r| r.isomorphic)
        .map_err(err)
}

/// `(verdict, certificate)`, e.g. `("LocalCertified", "complete")`.
#[pyfunction]
#[pyo3(signature = (p, seed = 0))]
fn indecomposable(p: &PyPair, seed: u64) -> PyResult<(&'static str, &'static str)> {
    let v = pairs::is_indecomposable(&p.0, seed).map_err(err)?;
    Ok((v.tag(), pairs::certificate_level(&v)))
}

/// Indecomposable factors, ordered as in the CLI report.
#[pyfunction]
#[pyo3(signature = (p, seed = 0))]
fn decompose(p: &PyPair, seed: u64) -> PyResult<Vec<PyPair>> {
    let rep = pairs::decompose(&p.0, seed).map_err(err)?;
    Ok(rep.factors.into_iter().map(PyPair).collect())
}

#[pyclass(name = "NumericalSemigroup", module = "tfmodlab", frozen)]
struct PySemigroup(NumericalSemigroup);

#[pymethods]
impl PySemigroup {
    #[new]
    fn new(gens: Vec<u64>) -> PyResult<Self> {
        NumericalSemigroup::new(&gens).map(PySemigroup).map_err(err)
    }

    #[getter]
    fn generators(&self) -> Vec<u64> {
        self.0.generators().to_vec()
    }

    #[getter]
    fn multiplicity(&self) -> u64 {
        self.0.multiplicity()
    }

    fn frobenius(&self) -> PyResult<i64> {
        self.0.frobenius().map_err(err)
    }

    fn gaps(&self) -> PyResult<Vec<u64>> {
        self.0.gaps().map_err(err)
    }

    fn __contains__(&self, k: u64) -> bool {
        self.0.contains(k)
    }

    fn dr_check<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &self.0.dr_check().map_err(err)?)
    }
}

#[pyfunction]
fn coprime_obstruction<'py>(py: Python<'py>, r1: u64, r2: u64) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &ringop::coprime_obstruction(r1, r2).map_err(err)?)
}

/// Run a CLI command line (without the program name) on `payload`; returns
/// the exit code and the rendered report.
#[pyfunction]
#[pyo3(signature = (args, payload = ""))]
fn run(py: Python<'_>, args: Vec<String>, payload: &str) -> (i32, String) {
    let argv = std::iter::once("tfmodlab".to_string()).chain(args);
    let out = py.detach(|| cli::run_from_args(argv, &mut payload.as_bytes()));
    (out.code, out.report)
}

#[pymodule]
fn tfmodlab(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("TfmodlabError", m.py().get_type::<TfmodlabError>())?;
    m.add_class::<PyTower>()?;
    m.add_class::<PyPair>()?;
    m.add_class::<PySemigroup>()?;
    m.add_function(wrap_pyfunction!(hom_dim, m)?)?;
    m.add_function(wrap_pyfunction!(is_isomorphic, m)?)?;
    m.add_function(wrap_pyfunction!(iso_witness, m)?)?;
    m.add_function(wrap_pyfunction!(indecomposable, m)?)?;
    m.add_function(wrap_pyfunction!(decompose, m)?)?;
    m.add_function(wrap_pyfunction!(coprime_obstruction, m)?)?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    Ok(())
}
