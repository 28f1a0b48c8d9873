use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

use topodyn::report::{decomposition_report, tracing_report, Report};
use topodyn::shadowing::{perturbed_pseudo_orbit, series_constant, trace_linear_hyperbolic, LinearLift, Perturb};
use topodyn::spectral::{spectral_decompose, SpectralConfig, SpectralFamily};
use topodyn::systems::{FiniteSystem, LinearSystem, Shift, TorusAutomorphism, TransitionMatrix};
use topodyn::{Mat2, Vec2};

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// A report as a dict with `kind`, `header`, `tables`, `verdict`,
/// `detail`, `exit_code` and the rendered `text`.
fn report_dict<'py>(py: Python<'py>, rep: &Report) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("kind", &rep.kind)?;
    let header = PyDict::new(py);
    for (k, v) in &rep.header {
        header.set_item(k, v)?;
    }
    d.set_item("header", header)?;
    let tables = PyDict::new(py);
    for t in &rep.tables {
        let td = PyDict::new(py);
        td.set_item("columns", &t.columns)?;
        td.set_item("rows", &t.rows)?;
        tables.set_item(&t.name, td)?;
    }
    d.set_item("tables", tables)?;
    d.set_item("verdict", rep.verdict.label())?;
    d.set_item("detail", rep.verdict.detail())?;
    d.set_item("exit_code", rep.verdict.exit_code())?;
    d.set_item("text", rep.render())?;
    Ok(d)
}

fn decompose<'py, S: SpectralFamily>(py: Python<'py>, sys: &S, cfg: &SpectralConfig) -> PyResult<Bound<'py, PyDict>> {
    let dec = py.detach(|| spectral_decompose(sys, cfg)).map_err(value_error)?;
    report_dict(py, &decomposition_report(&dec))
}

fn config(resolution: usize, word_length: usize, pairs: usize, seed: u64) -> SpectralConfig {
    SpectralConfig {
        resolution,
        word_length,
        pairs,
        seed,
        ..SpectralConfig::default()
    }
}

/// The system catalog as text.
#[pyfunction]
fn catalog() -> String {
    topodyn::systems::catalog_text()
}

/// Runs a named demonstration: ex22, ex23, sec5 or decomposition.
#[pyfunction]
fn demo<'py>(py: Python<'py>, name: &str) -> PyResult<Bound<'py, PyDict>> {
    let rep = topodyn::demo::run_demo(name).map_err(value_error)?;
    report_dict(py, &rep)
}

/// Spectral decomposition of the subshift given by 0/1 transition rows.
#[pyfunction]
#[pyo3(signature = (rows, word_length = 5, pairs = 50, seed = 0))]
fn decompose_shift<'py>(
    py: Python<'py>,
    rows: Vec<String>,
    word_length: usize,
    pairs: usize,
    seed: u64,
) -> PyResult<Bound<'py, PyDict>> {
    let tm = TransitionMatrix::parse_rows(&rows).map_err(value_error)?;
    decompose(py, &Shift::new(tm), &config(32, word_length, pairs, seed))
}

/// Spectral decomposition of a permutation of `0..n` given by its images.
#[pyfunction]
#[pyo3(signature = (images, pairs = 50, seed = 0))]
fn decompose_permutation<'py>(py: Python<'py>, images: Vec<usize>, pairs: usize, seed: u64) -> PyResult<Bound<'py, PyDict>> {
    let sys = FiniteSystem::new(images).map_err(value_error)?;
    decompose(py, &sys, &config(32, 5, pairs, seed))
}

/// Spectral decomposition of the torus automorphism with integer matrix
/// `matrix` on an `resolution × resolution` grid.
#[pyfunction]
#[pyo3(signature = (matrix, resolution = 32, pairs = 50, seed = 0))]
fn decompose_torus<'py>(
    py: Python<'py>,
    matrix: [[i64; 2]; 2],
    resolution: usize,
    pairs: usize,
    seed: u64,
) -> PyResult<Bound<'py, PyDict>> {
    let sys = TorusAutomorphism::new(matrix).map_err(value_error)?;
    decompose(py, &sys, &config(resolution, 5, pairs, seed))
}

fn trace<'py, S>(py: Python<'py>, sys: &S, x0: Vec2, delta: f64, length: usize, seed: u64) -> PyResult<Bound<'py, PyDict>>
where
    S: LinearLift + Perturb<Point = Vec2>,
{
    if !(delta > 0.0) || length == 0 {
        return Err(PyValueError::new_err("delta and length must be positive"));
    }
    let po = perturbed_pseudo_orbit(sys, x0, length, delta, seed);
    let r = trace_linear_hyperbolic(sys, &po).map_err(value_error)?;
    let bound = series_constant(&sys.lift(), sys.lift_splitting()) * delta;
    let d = report_dict(py, &tracing_report(sys.name(), delta, seed, &po, &r, bound))?;
    d.set_item("pseudo_orbit", PyList::new(py, po.window.iter().map(|p| (p[0], p[1])))?)?;
    d.set_item("orbit", PyList::new(py, r.orbit.iter().map(|p| (p[0], p[1])))?)?;
    d.set_item("gaps", &r.gaps)?;
    Ok(d)
}

/// Traces a seeded δ-pseudo-orbit of a hyperbolic torus automorphism.
#[pyfunction]
#[pyo3(signature = (matrix, start, delta, length, seed = 0))]
fn trace_torus<'py>(
    py: Python<'py>,
    matrix: [[i64; 2]; 2],
    start: (f64, f64),
    delta: f64,
    length: usize,
    seed: u64,
) -> PyResult<Bound<'py, PyDict>> {
    let sys = TorusAutomorphism::new(matrix).map_err(value_error)?;
    trace(py, &sys, [start.0, start.1], delta, length, seed)
}

/// Traces a seeded δ-pseudo-orbit of a hyperbolic linear map of the plane.
#[pyfunction]
#[pyo3(signature = (matrix, start, delta, length, seed = 0))]
fn trace_linear<'py>(
    py: Python<'py>,
    matrix: [[f64; 2]; 2],
    start: (f64, f64),
    delta: f64,
    length: usize,
    seed: u64,
) -> PyResult<Bound<'py, PyDict>> {
    let sys = LinearSystem::new(Mat2(matrix)).map_err(value_error)?;
    trace(py, &sys, [start.0, start.1], delta, length, seed)
}

/// The tracing constant `C` with error at most `C·δ` for a hyperbolic matrix.
#[pyfunction]
fn tracing_constant(matrix: [[f64; 2]; 2]) -> PyResult<f64> {
    let sys = LinearSystem::new(Mat2(matrix)).map_err(value_error)?;
    Ok(series_constant(&sys.lift(), sys.lift_splitting()))
}

/// Parses a rendered report back into a dict.
#[pyfunction]
fn parse_report<'py>(py: Python<'py>, text: &str) -> PyResult<Bound<'py, PyDict>> {
    report_dict(py, &Report::parse(text).map_err(value_error)?)
}

#[pymodule]
fn topodyn_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(catalog, m)?)?;
    m.add_function(wrap_pyfunction!(demo, m)?)?;
    m.add_function(wrap_pyfunction!(decompose_shift, m)?)?;
    m.add_function(wrap_pyfunction!(decompose_permutation, m)?)?;
    m.add_function(wrap_pyfunction!(decompose_torus, m)?)?;
    m.add_function(wrap_pyfunction!(trace_torus, m)?)?;
    m.add_function(wrap_pyfunction!(trace_linear, m)?)?;
    m.add_function(wrap_pyfunction!(tracing_constant, m)?)?;
    m.add_function(wrap_pyfunction!(parse_report, m)?)?;
    Ok(())
}
