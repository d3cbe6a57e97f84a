//! Python bindings for `gchtw-core`.
//!
//! Built as the extension module `gchtw` with
//! `maturin develop --manifest-path crates/py/Cargo.toml`; the default build
//! links against libpython so the Rust tests can embed an interpreter.

use gchtw_core::oracle::auto_saddle;
use gchtw_core::phase::{gstar as core_gstar, hyperbola_intersections, regular_equilibria, singular_equilibria};
use gchtw_core::series::{assemble_with, ForcingSign, Profile};
use gchtw_core::{classify_singular_wave, evaluate_wave, EquationId, HomoclinicSolution, Strategy, WaveParams};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn model(eq: &str, c: f64, g: f64) -> PyResult<(EquationId, WaveParams)> {
    let eq: EquationId = eq.parse().map_err(value_err)?;
    Ok((eq, WaveParams::new(c, g).map_err(value_err)?))
}

fn core_err(e: gchtw_core::Error) -> PyErr {
    match e {
        gchtw_core::Error::NoContinuousAssembly { .. } | gchtw_core::Error::Resonance { .. } => {
            PyRuntimeError::new_err(e.to_string())
        }
        other => value_err(other),
    }
}

/// Regular and singular equilibria as dicts with `phi`, `y`, `kind`,
/// `origin` and `eigenvalues` (two complex numbers).
#[pyfunction]
fn equilibria<'py>(py: Python<'py>, eq: &str, c: f64, g: f64) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let (eq, p) = model(eq, c, g)?;
    regular_equilibria(eq, p)
        .into_iter()
        .chain(singular_equilibria(eq, p))
        .map(|e| {
            let d = PyDict::new(py);
            d.set_item("phi", e.location.0)?;
            d.set_item("y", e.location.1)?;
            d.set_item("kind", format!("{:?}", e.kind).to_lowercase())?;
            d.set_item("origin", format!("{:?}", e.origin).to_lowercase())?;
            d.set_item("eigenvalues", e.eigenvalues.to_vec())?;
            Ok(d)
        })
        .collect()
}

/// `"periodic-cuspon"`, `"solitary-peakon"` or `"none"`.
#[pyfunction]
fn classify(eq: &str, c: f64, g: f64) -> PyResult<&'static str> {
    let (eq, p) = model(eq, c, g)?;
    Ok(classify_singular_wave(eq, p).label.as_str())
}

/// `(g*, phi_s, y_s)` for GCH-III at speed `c`.
#[pyfunction]
#[pyo3(signature = (c, tol = 1e-10))]
fn gstar(c: f64, tol: f64) -> PyResult<(f64, f64, f64)> {
    let gs = core_gstar(c, tol).map_err(core_err)?;
    let hi = hyperbola_intersections(c, gs.g_star).map_err(core_err)?;
    Ok((gs.g_star, hi.phi_s, hi.y_s))
}

#[pyclass(module = "gchtw", frozen)]
struct Solution {
    inner: HomoclinicSolution,
}

#[pymethods]
impl Solution {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        serde_json::from_str(text).map(|inner| Self { inner }).map_err(value_err)
    }

    fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.inner).expect("in-memory serialization")
    }

    /// `phi(z)`.
    fn phi(&self, z: f64) -> f64 {
        self.inner.phi(z)
    }

    /// `u(x, t) = phi(x - c t)`.
    fn wave(&self, x: f64, t: f64) -> f64 {
        evaluate_wave(&self.inner, x, t)
    }

    #[getter]
    fn x0(&self) -> Option<f64> {
        self.inner.x0()
    }

    #[getter]
    fn junction_value(&self) -> f64 {
        self.inner.junction_value
    }

    /// Right then left leading coefficient; empty for exact solutions.
    #[getter]
    fn leading_coefficients(&self) -> Vec<f64> {
        self.inner.branches().map(|(r, l)| vec![r.leading(), l.leading()]).unwrap_or_default()
    }

    #[getter]
    fn verdicts(&self) -> Vec<&'static str> {
        match &self.inner.profile {
            Profile::Series { right_report, left_report, .. } => {
                vec![right_report.verdict.as_str(), left_report.verdict.as_str()]
            }
            Profile::Exact { .. } => Vec::new(),
        }
    }

    fn __repr__(&self) -> String {
        let x0 = self.x0().map_or_else(|| "None".to_string(), |v| v.to_string());
        format!(
            "Solution(eq={}, c={}, g={}, x0={x0}, leading={:?})",
            self.inner.equation,
            self.inner.params.c(),
            self.inner.params.g(),
            self.leading_coefficients()
        )
    }
}

/// Assembles a homoclinic series solution.  `x0=None` picks the saddle with
/// a homoclinic loop.  `strategy` is one of `continuity`, `mirror`, `matched`.
#[pyfunction]
#[pyo3(signature = (eq, c, g, x0 = None, m = 25, strategy = "continuity", a1 = None, target = 0.0, prefer = None, sign = "standard"))]
#[allow(clippy::too_many_arguments)]
fn series(
    eq: &str,
    c: f64,
    g: f64,
    x0: Option<f64>,
    m: usize,
    strategy: &str,
    a1: Option<f64>,
    target: f64,
    prefer: Option<f64>,
    sign: &str,
) -> PyResult<Solution> {
    let (eq, p) = model(eq, c, g)?;
    let need_a1 = || a1.ok_or_else(|| value_err(format!("strategy '{strategy}' needs a1")));
    let strat = match strategy {
        "continuity" => Strategy::ContinuityRoot { target, prefer },
        "mirror" => Strategy::Mirror { a1: need_a1()? },
        "matched" => Strategy::MatchedLeft { a1: need_a1()?, prefer },
        other => return Err(value_err(format!("unknown strategy '{other}'"))),
    };
    let sign = match sign {
        "standard" => ForcingSign::Standard,
        "reversed" => ForcingSign::Reversed,
        other => return Err(value_err(format!("unknown sign '{other}'"))),
    };
    let x0 = match x0 {
        Some(v) => v,
        None => auto_saddle(eq, p, 1e-6, 1e-10)
            .map_err(core_err)?
            .map(|r| r.x0)
            .ok_or_else(|| value_err("no regular saddle with a homoclinic loop"))?,
    };
    let inner = assemble_with(eq, p, x0, m, &strat, sign).map_err(core_err)?;
    Ok(Solution { inner })
}

#[pymodule]
fn gchtw(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(equilibria, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(gstar, m)?)?;
    m.add_function(wrap_pyfunction!(series, m)?)?;
    m.add_class::<Solution>()?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn module_functions_from_embedded_python() {
        Python::initialize();
        Python::attach(|py| {
            let m = PyModule::new(py, "gchtw").unwrap();
            gchtw(&m).unwrap();
            let label: String = m.getattr("classify").unwrap().call1(("gch2", 3.0, 0.1)).unwrap().extract().unwrap();
            assert_eq!(label, "none");

            let sol = m.getattr("series").unwrap().call1(("gch1", 0.5, 0.014)).unwrap();
            let lead: Vec<f64> = sol.getattr("leading_coefficients").unwrap().extract().unwrap();
            assert!((lead[0] - 0.0357).abs() < 5e-5);
            let json: String = sol.call_method0("to_json").unwrap().extract().unwrap();
            let back = m.getattr("Solution").unwrap().call_method1("from_json", (json.clone(),)).unwrap();
            let again: String = back.call_method0("to_json").unwrap().extract().unwrap();
            assert_eq!(json, again);

            let err = m.getattr("series").unwrap().call1(("gch4", 0.5, 0.014)).unwrap_err();
            assert!(err.is_instance_of::<PyValueError>(py));
        });
    }
}
