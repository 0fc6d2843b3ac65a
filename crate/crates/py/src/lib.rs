//! Python bindings for `monogen`.
//!
//! Polynomials cross the boundary as coefficient lists, lowest degree first.
//! Report-shaped results come back as dicts with the same layout as the CLI's
//! JSON records, so large integers inside them are decimal strings.

use monogen::arith::{self, Effort};
use monogen::dedekind::{self, Lift};
use monogen::family::{self, FamilyParams};
use monogen::index::{self, AnalysisOptions};
use monogen::poly_int::{self, IntPoly};
use monogen::poly_mod::{self, DEFAULT_SEED};
use monogen::record;
use num_bigint::{BigInt, BigUint};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};
use serde_json::Value;

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_effort(effort: &str) -> PyResult<Effort> {
    effort.parse().map_err(value_error)
}

fn to_py<'py>(py: Python<'py>, v: &Value) -> PyResult<Bound<'py, PyAny>> {
    Ok(match v {
        Value::Null => py.None().into_bound(py),
        Value::Bool(b) => b.into_pyobject(py)?.to_owned().into_any(),
        Value::Number(n) => match (n.as_i64(), n.as_u64()) {
            (Some(i), _) => i.into_pyobject(py)?.into_any(),
            (None, Some(u)) => u.into_pyobject(py)?.into_any(),
            _ => n.as_f64().unwrap_or(f64::NAN).into_pyobject(py)?.into_any(),
        },
        Value::String(s) => s.into_pyobject(py)?.into_any(),
        Value::Array(items) => {
            let list = PyList::empty(py);
            for x in items {
                list.append(to_py(py, x)?)?;
            }
            list.into_any()
        }
        Value::Object(map) => {
            let dict = PyDict::new(py);
            for (k, x) in map {
                dict.set_item(k, to_py(py, x)?)?;
            }
            dict.into_any()
        }
    })
}

/// Parameters `(n, a)` of `(x^2 + 1)^n - a x^n`.
#[pyclass(name = "FamilyParams", frozen)]
struct PyFamilyParams {
    inner: FamilyParams,
}

#[pymethods]
impl PyFamilyParams {
    #[new]
    fn new(n: u32, a: BigInt) -> PyResult<Self> {
        FamilyParams::new(n, a).map(|inner| PyFamilyParams { inner }).map_err(value_error)
    }

    #[getter]
    fn n(&self) -> u32 {
        self.inner.n()
    }

    #[getter]
    fn a(&self) -> BigInt {
        self.inner.a().clone()
    }

    /// Coefficients of `f`, lowest degree first.
    fn build(&self) -> Vec<BigInt> {
        family::build(&self.inner).into_coeffs()
    }

    fn disc(&self) -> BigInt {
        family::disc_closed_form(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!("FamilyParams(n={}, a={})", self.inner.n(), self.inner.a())
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }
}

fn params(n: u32, a: BigInt) -> PyResult<FamilyParams> {
    FamilyParams::new(n, a).map_err(value_error)
}

#[pyfunction]
fn build(n: u32, a: BigInt) -> PyResult<Vec<BigInt>> {
    Ok(family::build(&params(n, a)?).into_coeffs())
}

#[pyfunction]
fn disc_closed_form(n: u32, a: BigInt) -> PyResult<BigInt> {
    Ok(family::disc_closed_form(&params(n, a)?))
}

/// Discriminant of a monic polynomial through the Sylvester resultant.
#[pyfunction]
fn discriminant_via_resultant(coeffs: Vec<BigInt>) -> PyResult<BigInt> {
    poly_int::discriminant_via_resultant(&IntPoly::new(coeffs)).map_err(value_error)
}

/// Generic Dedekind criterion: does `p` divide the index of `Z[theta]`?
#[pyfunction]
#[pyo3(signature = (coeffs, p, lift = "canonical", seed = DEFAULT_SEED))]
fn dedekind_generic(coeffs: Vec<BigInt>, p: u64, lift: &str, seed: u64) -> PyResult<bool> {
    let lift = match lift {
        "canonical" => Lift::Canonical,
        "symmetric" => Lift::Symmetric,
        other => return Err(PyValueError::new_err(format!("unknown lift `{other}`"))),
    };
    dedekind::dedekind_generic_with(&IntPoly::new(coeffs), p, lift, seed)
        .map(|o| o.divides_index)
        .map_err(value_error)
}

#[pyfunction]
fn classify_prime<'py>(py: Python<'py>, n: u32, a: BigInt, p: BigUint) -> PyResult<Bound<'py, PyAny>> {
    let v = dedekind::classify_prime(&params(n, a)?, &p).map_err(value_error)?;
    to_py(py, &record::verdict_json(&v))
}

#[pyfunction]
#[pyo3(signature = (n, a, effort = "default", cross_check = false, seed = DEFAULT_SEED))]
fn analyze<'py>(
    py: Python<'py>,
    n: u32,
    a: BigInt,
    effort: &str,
    cross_check: bool,
    seed: u64,
) -> PyResult<Bound<'py, PyAny>> {
    let opts = AnalysisOptions {
        effort: parse_effort(effort)?,
        seed,
        cross_check,
    };
    let params = params(n, a)?;
    let report = py.detach(|| index::analyze_with(&params, &opts));
    let mut v = record::report_json(&report);
    v["diagnostics"] = Value::from(report.diagnostics.clone());
    to_py(py, &v)
}

/// Rows of the `f_p` table for odd primes `p <= p_max`.
#[pyfunction]
#[pyo3(signature = (p_max, effort = "default"))]
fn fp_table<'py>(py: Python<'py>, p_max: u32, effort: &str) -> PyResult<Bound<'py, PyAny>> {
    let effort = parse_effort(effort)?;
    let rows = py.detach(|| index::fp_table(p_max, effort));
    let list = PyList::empty(py);
    for row in &rows {
        let mut v = record::scan_row_json(row);
        v["notes"] = Value::from(row.notes.clone());
        list.append(to_py(py, &v)?)?;
    }
    Ok(list.into_any())
}

#[pyfunction]
#[pyo3(signature = (m, effort = "default"))]
fn factor<'py>(py: Python<'py>, m: BigInt, effort: &str) -> PyResult<Bound<'py, PyAny>> {
    if m == BigInt::from(0) {
        return Err(PyValueError::new_err("cannot factor zero"));
    }
    let effort = parse_effort(effort)?;
    let fr = py.detach(|| arith::factor(&m, effort));
    to_py(py, &record::factors_json(&fr))
}

#[pyfunction]
fn is_probable_prime(m: BigUint) -> bool {
    arith::is_probable_prime(&m)
}

/// Factorization of `f` modulo `p` as a dict.
#[pyfunction]
fn factor_mod<'py>(py: Python<'py>, n: u32, a: BigInt, p: u64) -> PyResult<Bound<'py, PyAny>> {
    let f = poly_mod::reduce(&family::build(&params(n, a)?), p).map_err(value_error)?;
    let fac = poly_mod::factor_mod(&f).map_err(value_error)?;
    to_py(py, &record::mod_factorization_json(&fac))
}

#[pymodule]
pub fn monogen_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyFamilyParams>()?;
    m.add_function(wrap_pyfunction!(build, m)?)?;
    m.add_function(wrap_pyfunction!(disc_closed_form, m)?)?;
    m.add_function(wrap_pyfunction!(discriminant_via_resultant, m)?)?;
    m.add_function(wrap_pyfunction!(dedekind_generic, m)?)?;
    m.add_function(wrap_pyfunction!(classify_prime, m)?)?;
    m.add_function(wrap_pyfunction!(analyze, m)?)?;
    m.add_function(wrap_pyfunction!(fp_table, m)?)?;
    m.add_function(wrap_pyfunction!(factor, m)?)?;
    m.add_function(wrap_pyfunction!(is_probable_prime, m)?)?;
    m.add_function(wrap_pyfunction!(factor_mod, m)?)?;
    Ok(())
}
