//! Python bindings: rationals cross the boundary as exact `"p/q"` strings.

use dff_core::rational::{format_rational, parse_rational, Rational};
use dff_core::{compendium, extremality, gjlink, maximality, pwl, search};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn rat(s: &str) -> PyResult<Rational> {
    parse_rational(s).map_err(|e| PyValueError::new_err(e.to_string()))
}

fn val<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// A piecewise-linear function on [0,1] in canonical form.
#[pyclass(name = "PwlFunction")]
#[derive(Clone)]
struct PyPwl {
    inner: pwl::PwlFunction,
}

#[pymethods]
impl PyPwl {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyPwl {
            inner: pwl::from_json(text).map_err(val)?,
        })
    }

    fn to_json(&self) -> String {
        pwl::to_json(&self.inner)
    }

    fn evaluate(&self, x: &str) -> PyResult<String> {
        Ok(format_rational(
            &self.inner.evaluate(&rat(x)?).map_err(val)?,
        ))
    }

    fn limit(&self, x: &str, side: &str) -> PyResult<String> {
        let side = match side {
            "left" => pwl::Side::Left,
            "right" => pwl::Side::Right,
            "at" => pwl::Side::At,
            other => return Err(PyValueError::new_err(format!("unknown side `{other}`"))),
        };
        Ok(format_rational(
            &self.inner.limit(&rat(x)?, side).map_err(val)?,
        ))
    }

    fn slopes(&self) -> Vec<String> {
        self.inner.slopes().iter().map(format_rational).collect()
    }

    fn breakpoints(&self) -> Vec<(String, Option<String>, String, Option<String>)> {
        self.inner
            .breakpoints()
            .iter()
            .map(|b| {
                (
                    format_rational(&b.x),
                    b.limit_left.as_ref().map(format_rational),
                    format_rational(&b.value),
                    b.limit_right.as_ref().map(format_rational),
                )
            })
            .collect()
    }

    fn is_maximal(&self) -> bool {
        maximality::maximality_test(&self.inner).is_maximal
    }

    fn maximality_violations(&self) -> Vec<String> {
        maximality::maximality_test(&self.inner)
            .violations
            .iter()
            .map(|v| format!("{:?} slack {}", v.kind, format_rational(&v.slack)))
            .collect()
    }

    /// "extreme", "not_extreme", or "inconclusive"; raises if not maximal.
    fn extremality(&self) -> PyResult<String> {
        let verdict = extremality::extremality_test(&self.inner).map_err(val)?;
        Ok(match verdict.status {
            extremality::Status::Extreme => "extreme".to_owned(),
            extremality::Status::NotExtreme(_) => "not_extreme".to_owned(),
            extremality::Status::Inconclusive(_) => "inconclusive".to_owned(),
        })
    }

    /// (components, uncovered): intervals as (lo, hi) rational strings.
    #[allow(clippy::type_complexity)]
    fn covered_components(
        &self,
    ) -> (Vec<Vec<(String, String)>>, Vec<(String, String)>) {
        let cover = dff_core::complex2d::covered_components(&self.inner);
        let iv = |t: &(Rational, Rational)| (format_rational(&t.0), format_rational(&t.1));
        (
            cover
                .components
                .iter()
                .map(|c| c.iter().map(iv).collect())
                .collect(),
            cover.uncovered.iter().map(iv).collect(),
        )
    }

    fn __repr__(&self) -> String {
        format!(
            "PwlFunction({} breakpoints)",
            self.inner.breakpoints().len()
        )
    }
}

#[pyfunction]
fn identity() -> PyPwl {
    PyPwl {
        inner: compendium::identity(),
    }
}

#[pyfunction]
fn phi_bj_1(c: &str) -> PyResult<PyPwl> {
    Ok(PyPwl {
        inner: compendium::phi_bj_1(&rat(c)?).map_err(val)?,
    })
}

#[pyfunction]
fn interpolate(q: u32, values: Vec<String>) -> PyResult<PyPwl> {
    let vals: Result<Vec<Rational>, _> = values.iter().map(|s| rat(s)).collect();
    Ok(PyPwl {
        inner: pwl::interpolate_discrete(q, &vals?, None).map_err(val)?,
    })
}

/// Converts the sawtooth with right-hand side b to a general DFF; returns the
/// function file JSON, or the classical restriction when `restrict` is set.
#[pyfunction]
#[pyo3(signature = (b, lam, restrict = false))]
fn convert_sawtooth(b: &str, lam: &str, restrict: bool) -> PyResult<String> {
    let pi = gjlink::sawtooth(&rat(b)?).map_err(val)?;
    let psi = gjlink::gj_to_gdff(&pi, &rat(lam)?).map_err(val)?;
    if restrict {
        Ok(pwl::to_json(&gjlink::restrict_to_unit(&psi).map_err(val)?))
    } else {
        Ok(gjlink::gdff_to_json(&psi))
    }
}

#[pyfunction]
fn lueker_bound(f: &PyPwl, a: &str, b: &str) -> PyResult<String> {
    Ok(format_rational(
        &gjlink::lueker_bound(&f.inner, &rat(a)?, &rat(b)?).map_err(val)?,
    ))
}

/// Runs the grid search; returns (dim, vertices, extreme, inconclusive).
#[pyfunction]
#[pyo3(signature = (q, mode = "continuous"))]
fn search_census(q: u32, mode: &str) -> PyResult<(usize, usize, usize, usize)> {
    let mode = match mode {
        "continuous" => search::Mode::Continuous,
        "discontinuous" => search::Mode::Discontinuous,
        other => return Err(PyValueError::new_err(format!("unknown mode `{other}`"))),
    };
    let report = search::search_extreme(q, mode, None, false).map_err(val)?;
    Ok((
        report.dim,
        report.n_vertices,
        report.n_extreme,
        report.n_inconclusive,
    ))
}

#[pymodule]
fn dff_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPwl>()?;
    m.add_function(wrap_pyfunction!(identity, m)?)?;
    m.add_function(wrap_pyfunction!(phi_bj_1, m)?)?;
    m.add_function(wrap_pyfunction!(interpolate, m)?)?;
    m.add_function(wrap_pyfunction!(convert_sawtooth, m)?)?;
    m.add_function(wrap_pyfunction!(lueker_bound, m)?)?;
    m.add_function(wrap_pyfunction!(search_census, m)?)?;
    Ok(())
}
