//! Python bindings. Reports cross the boundary as plain dicts and lists
//! built from the same JSON the CLI prints.

use std::collections::BTreeMap;

use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyModule;

use ternarith::builders::{
    build_compressor, build_miswired_rca, build_multiplier, build_rca, build_subtractor, AdderStyle,
};
use ternarith::sweep::{DEFAULT_BUDGET, DEFAULT_SEED};
use ternarith::trit::{self, BalancedVec, TritVec};
use ternarith::verify;
use ternarith::{CellKind, Oracle, SweepConfig, Trit};

create_exception!(ternarith, TernarithError, PyValueError);

fn err(e: ternarith::Error) -> PyErr {
    TernarithError::new_err(e.to_string())
}

fn to_py(py: Python<'_>, value: &impl serde::Serialize) -> PyResult<Py<PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| TernarithError::new_err(e.to_string()))?;
    Ok(PyModule::import(py, "json")?.call_method1("loads", (text,))?.unbind())
}

fn trits(values: &[u8]) -> PyResult<Vec<Trit>> {
    values
        .iter()
        .map(|&v| Trit::new(v as i64).map_err(err))
        .collect()
}

fn cfg(budget: u64, seed: u64, forbid_complete: bool) -> SweepConfig {
    SweepConfig {
        budget,
        seed,
        forbid_complete,
    }
}

/// Unbalanced literal ("0t..") for a non-negative integer.
#[pyfunction]
#[pyo3(signature = (n, width = None))]
fn to_unbalanced(n: i128, width: Option<usize>) -> PyResult<String> {
    Ok(trit::to_unbalanced(n, width).map_err(err)?.literal())
}

#[pyfunction]
fn from_unbalanced(text: &str) -> PyResult<u128> {
    let v: TritVec = text.parse().map_err(err)?;
    trit::from_unbalanced(&v).map_err(err)
}

/// Balanced digits, most significant first, with 'T' for -1.
#[pyfunction]
fn to_balanced(n: i128) -> String {
    trit::to_balanced(n).to_string()
}

#[pyfunction]
fn from_balanced(text: &str) -> PyResult<i128> {
    let v: BalancedVec = text.parse().map_err(err)?;
    trit::from_balanced(&v).map_err(err)
}

/// Decimal or "0t" integer literal.
#[pyfunction]
fn parse_literal(text: &str) -> PyResult<i128> {
    trit::parse_integer_literal(text).map_err(err)
}

/// Evaluates one cell. Returns `(lo, hi)`; single-output cells report `hi = 0`.
#[pyfunction]
#[pyo3(signature = (kind, inputs, constant = 0))]
fn eval_cell(kind: &str, inputs: Vec<u8>, constant: u8) -> PyResult<(u8, u8)> {
    let kind: CellKind = kind.parse().map_err(err)?;
    let constant = Trit::new(constant as i64).map_err(err)?;
    let [lo, hi] = kind.eval(&trits(&inputs)?, constant).map_err(err)?;
    Ok((lo.value(), hi.value()))
}

#[pyclass(name = "Netlist", module = "ternarith", from_py_object)]
#[derive(Clone)]
struct PyNetlist {
    inner: ternarith::Netlist,
}

impl PyNetlist {
    fn wrap(r: ternarith::Result<ternarith::Netlist>) -> PyResult<Self> {
        r.map(|inner| PyNetlist { inner }).map_err(err)
    }

    fn evaluate(&self, operands: BTreeMap<String, u128>) -> PyResult<Vec<Trit>> {
        let pairs: Vec<(&str, u128)> = operands.iter().map(|(k, v)| (k.as_str(), *v)).collect();
        let stim = self.inner.stimulus_from_values(&pairs).map_err(err)?;
        self.inner.simulate(&stim).map_err(err)
    }
}

#[pymethods]
impl PyNetlist {
    #[staticmethod]
    #[pyo3(signature = (n, style = "partial"))]
    fn rca(n: usize, style: &str) -> PyResult<Self> {
        let style: AdderStyle = style.parse().map_err(err)?;
        Self::wrap(build_rca(n, style))
    }

    #[staticmethod]
    fn subtractor(n: usize) -> PyResult<Self> {
        Self::wrap(build_subtractor(n))
    }

    #[staticmethod]
    fn multiplier(n: usize, m: usize) -> PyResult<Self> {
        Self::wrap(build_multiplier(n, m))
    }

    #[staticmethod]
    fn compressor(m: usize) -> PyResult<Self> {
        Self::wrap(build_compressor(m))
    }

    #[staticmethod]
    fn miswired_rca(n: usize) -> PyResult<Self> {
        Self::wrap(build_miswired_rca(n))
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Self::wrap(ternarith::Netlist::from_json(text))
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    #[getter]
    fn builder(&self) -> String {
        self.inner.meta.builder.clone()
    }

    #[getter]
    fn params(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        to_py(py, &self.inner.meta.params)
    }

    #[getter]
    fn input_operands(&self) -> Vec<String> {
        self.inner.input_operands()
    }

    #[getter]
    fn output_operands(&self) -> Vec<String> {
        self.inner.output_operands()
    }

    #[getter]
    fn cell_count(&self) -> usize {
        self.inner.cells().len()
    }

    #[getter]
    fn wire_count(&self) -> usize {
        self.inner.wires().len()
    }

    /// Cell counts keyed by kind name.
    fn census(&self) -> BTreeMap<String, usize> {
        self.inner
            .census()
            .0
            .iter()
            .map(|(k, v)| (k.name().to_string(), *v))
            .collect()
    }

    /// Output operand values for integer inputs; missing operands are zero.
    fn simulate(&self, operands: BTreeMap<String, u128>) -> PyResult<BTreeMap<String, u128>> {
        let out = self.evaluate(operands)?;
        Ok(self
            .inner
            .read_outputs(&out)
            .into_iter()
            .map(|o| (o.operand, o.value))
            .collect())
    }

    /// Sum of every output trit times three to the power of its weight.
    fn output_total(&self, operands: BTreeMap<String, u128>) -> PyResult<u128> {
        let out = self.evaluate(operands)?;
        Ok(self.inner.output_total(&out))
    }

    #[pyo3(signature = (forbid_complete = true))]
    fn check_partial_safety(&self, py: Python<'_>, forbid_complete: bool) -> PyResult<Py<PyAny>> {
        to_py(py, &self.inner.check_partial_safety(forbid_complete))
    }

    #[pyo3(signature = (oracle = None, budget = DEFAULT_BUDGET, seed = DEFAULT_SEED, forbid_complete = true))]
    fn verify(
        &self,
        py: Python<'_>,
        oracle: Option<&str>,
        budget: u64,
        seed: u64,
        forbid_complete: bool,
    ) -> PyResult<Py<PyAny>> {
        let oracle = match oracle {
            Some(name) => Oracle::parse(name, &self.inner).map_err(err)?,
            None => Oracle::for_netlist(&self.inner),
        };
        let net = &self.inner;
        let config = cfg(budget, seed, forbid_complete);
        let report = py
            .detach(|| verify::verify_against_oracle(net, oracle, &config))
            .map_err(err)?;
        to_py(py, &report)
    }

    fn __repr__(&self) -> String {
        format!("Netlist({}, {})", self.inner.meta, self.inner.census())
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }
}

#[pyfunction]
#[pyo3(signature = (reference, candidate, budget = DEFAULT_BUDGET, seed = DEFAULT_SEED, forbid_complete = false))]
fn verify_equivalence(
    py: Python<'_>,
    reference: &PyNetlist,
    candidate: &PyNetlist,
    budget: u64,
    seed: u64,
    forbid_complete: bool,
) -> PyResult<Py<PyAny>> {
    let config = cfg(budget, seed, forbid_complete);
    let report = py
        .detach(|| verify::verify_equivalence(&reference.inner, &candidate.inner, &config))
        .map_err(err)?;
    to_py(py, &report)
}

/// Runs the built-in claim battery and returns one dict per claim.
#[pyfunction]
#[pyo3(signature = (budget = DEFAULT_BUDGET, seed = DEFAULT_SEED))]
fn claim_suite(py: Python<'_>, budget: u64, seed: u64) -> PyResult<Py<PyAny>> {
    let config = cfg(budget, seed, true);
    let results = py.detach(|| verify::claim_suite(&config));
    to_py(py, &results)
}

#[pymodule]
#[pyo3(name = "ternarith")]
fn ternarith_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("TernarithError", m.py().get_type::<TernarithError>())?;
    m.add_class::<PyNetlist>()?;
    m.add_function(wrap_pyfunction!(to_unbalanced, m)?)?;
    m.add_function(wrap_pyfunction!(from_unbalanced, m)?)?;
    m.add_function(wrap_pyfunction!(to_balanced, m)?)?;
    m.add_function(wrap_pyfunction!(from_balanced, m)?)?;
    m.add_function(wrap_pyfunction!(parse_literal, m)?)?;
    m.add_function(wrap_pyfunction!(eval_cell, m)?)?;
    m.add_function(wrap_pyfunction!(verify_equivalence, m)?)?;
    m.add_function(wrap_pyfunction!(claim_suite, m)?)?;
    m.add("DEFAULT_BUDGET", DEFAULT_BUDGET)?;
    m.add("DEFAULT_SEED", DEFAULT_SEED)?;
    Ok(())
}
