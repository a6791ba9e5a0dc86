use std::path::PathBuf;

use homalg::algebra::{preset, Alg, Preset};
use homalg::exactla::Prime;
use homalg::io::{self, Artifact, EmitOptions, Format};
use homalg::modcat::{indecomposables, module_label};
use homalg::verify::{self, Options};
use homalg::Error;
use pyo3::exceptions::{PyOSError, PyValueError};
use pyo3::prelude::*;

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Io(m) => PyOSError::new_err(m),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn algebra(name: &str, prime: u64) -> PyResult<Alg> {
    let pre: Preset = name.parse().map_err(py_err)?;
    preset(pre, Prime::new(prime).map_err(py_err)?).map_err(py_err)
}

/// Runs an exercise suite (or `all`) and returns the JSON report.
#[pyfunction]
#[pyo3(signature = (id, prime=None, seed=0, window=(-6, 6), cap=12, timing=false))]
fn verify_exercise(
    py: Python<'_>,
    id: &str,
    prime: Option<u64>,
    seed: u64,
    window: (i64, i64),
    cap: usize,
    timing: bool,
) -> PyResult<String> {
    let opts = Options {
        prime,
        seed,
        window,
        cap,
        timing,
    };
    let report = py.detach(|| verify::run_exercise(id, &opts)).map_err(py_err)?;
    Ok(report.to_json())
}

/// The accepted exercise ids, without `all`.
#[pyfunction]
fn exercise_ids() -> Vec<&'static str> {
    verify::exercise_ids()
}

fn emit_options(prime: Option<u64>, window: (i64, i64), cap: usize) -> EmitOptions {
    EmitOptions { prime, window, cap }
}

/// The artifact as text: `what` is ar-quiver, stable-ar-quiver, ext-table
/// or tilting-report; `format` is dot or json.
#[pyfunction]
#[pyo3(signature = (what, algebra_name, format="json", prime=None, window=(-6, 6), cap=12))]
fn render(
    py: Python<'_>,
    what: &str,
    algebra_name: &str,
    format: &str,
    prime: Option<u64>,
    window: (i64, i64),
    cap: usize,
) -> PyResult<String> {
    let what: Artifact = what.parse().map_err(py_err)?;
    let format: Format = format.parse().map_err(py_err)?;
    let a = algebra(algebra_name, prime.unwrap_or(2))?;
    let opts = emit_options(prime, window, cap);
    py.detach(|| io::render(what, &a, format, &opts)).map_err(py_err)
}

/// Writes the artifact to `out`.
#[pyfunction]
#[pyo3(signature = (what, algebra_name, out, format="json", prime=None, window=(-6, 6), cap=12))]
#[allow(clippy::too_many_arguments)]
fn emit(
    py: Python<'_>,
    what: &str,
    algebra_name: &str,
    out: PathBuf,
    format: &str,
    prime: Option<u64>,
    window: (i64, i64),
    cap: usize,
) -> PyResult<()> {
    let what: Artifact = what.parse().map_err(py_err)?;
    let format: Format = format.parse().map_err(py_err)?;
    let opts = emit_options(prime, window, cap);
    py.detach(|| io::emit(what, algebra_name, &out, format, &opts)).map_err(py_err)
}

/// `(label, dim, dim_vector)` for each indecomposable module.
#[pyfunction]
#[pyo3(signature = (algebra_name, prime=2))]
fn indecomposable_modules(algebra_name: &str, prime: u64) -> PyResult<Vec<(String, usize, Vec<usize>)>> {
    let a = algebra(algebra_name, prime)?;
    let mods = indecomposables(&a).map_err(py_err)?;
    Ok(mods.iter().map(|m| (module_label(m), m.dim(), m.dim_vector())).collect())
}

/// `(src, dst, degree, dim)` rows of the Ext table.
#[pyfunction]
#[pyo3(signature = (algebra_name, prime=2, cap=12))]
fn ext_table(algebra_name: &str, prime: u64, cap: usize) -> PyResult<Vec<(String, String, usize, usize)>> {
    let a = algebra(algebra_name, prime)?;
    let t = io::ext_table(&a, cap).map_err(py_err)?;
    Ok(t.rows.into_iter().map(|r| (r.src, r.dst, r.degree, r.dim)).collect())
}

#[pymodule]
fn pyhomalg(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(verify_exercise, m)?)?;
    m.add_function(wrap_pyfunction!(exercise_ids, m)?)?;
    m.add_function(wrap_pyfunction!(render, m)?)?;
    m.add_function(wrap_pyfunction!(emit, m)?)?;
    m.add_function(wrap_pyfunction!(indecomposable_modules, m)?)?;
    m.add_function(wrap_pyfunction!(ext_table, m)?)?;
    m.add("DEFAULT_PRIME", verify::DEFAULT_PRIME)?;
    Ok(())
}
