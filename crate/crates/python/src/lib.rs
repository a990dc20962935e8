//! Python bindings. Rationals cross the boundary as `fractions.Fraction`;
//! inputs may also be `int` or `"p/q"` strings. Floats are rejected.

use std::cmp::Ordering;

use pyo3::exceptions::{PyRuntimeError, PyTypeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyString};

use kahlerq_core::closed_forms::{self, BatyrevInvariants};
use kahlerq_core::exact::{format_rational, parse_rational, Rational};
use kahlerq_core::identity::{self, ScalarSymbol};
use kahlerq_core::inequality::{self, KahlerClassData, YauMode};
use kahlerq_core::ring::{self, GradedClass};
use kahlerq_core::tensor;

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn rational(obj: &Bound<'_, PyAny>) -> PyResult<Rational> {
    if let Ok(s) = obj.cast::<PyString>() {
        return parse_rational(&s.to_cow()?).map_err(value_err);
    }
    if obj.hasattr("numerator")? && obj.hasattr("denominator")? && !obj.is_instance_of::<pyo3::types::PyFloat>() {
        return obj.extract::<Rational>().map_err(|e| PyTypeError::new_err(e.to_string()));
    }
    Err(PyTypeError::new_err("expected int, fractions.Fraction or a \"p/q\" string"))
}

/// Intersection numbers of `αL + βH`.
#[pyclass(frozen, name = "BatyrevInvariants")]
struct PyInvariants(BatyrevInvariants);

#[pymethods]
impl PyInvariants {
    #[getter]
    fn n(&self) -> u32 {
        self.0.n
    }
    #[getter]
    fn alpha(&self) -> Rational {
        self.0.alpha.clone()
    }
    #[getter]
    fn beta(&self) -> Rational {
        self.0.beta.clone()
    }
    #[getter]
    fn t(&self) -> Rational {
        self.0.t.clone()
    }
    #[getter]
    fn vol(&self) -> Rational {
        self.0.vol.clone()
    }
    #[getter]
    fn deg1(&self) -> Rational {
        self.0.deg1.clone()
    }
    #[getter]
    fn chern11(&self) -> Rational {
        self.0.chern11.clone()
    }
    #[getter]
    fn chern2(&self) -> Rational {
        self.0.chern2.clone()
    }
    /// The obstruction polynomial `f` at these parameters.
    fn f(&self) -> Rational {
        closed_forms::f_definition(&self.0)
    }
    fn class_data(&self) -> PyClassData {
        PyClassData(KahlerClassData::from(&self.0))
    }
    fn __repr__(&self) -> String {
        let r = format_rational;
        format!(
            "BatyrevInvariants(n={}, alpha={}, beta={}, vol={}, deg1={}, chern11={}, chern2={})",
            self.0.n,
            r(&self.0.alpha),
            r(&self.0.beta),
            r(&self.0.vol),
            r(&self.0.deg1),
            r(&self.0.chern11),
            r(&self.0.chern2)
        )
    }
}

#[pyfunction]
fn invariants(n: u32, alpha: &Bound<'_, PyAny>, beta: &Bound<'_, PyAny>) -> PyResult<PyInvariants> {
    closed_forms::invariants_closed_form(n, &rational(alpha)?, &rational(beta)?).map(PyInvariants).map_err(value_err)
}

#[pyfunction]
fn f_definition(n: u32, alpha: &Bound<'_, PyAny>, beta: &Bound<'_, PyAny>) -> PyResult<Rational> {
    invariants(n, alpha, beta).map(|i| i.f())
}

#[pyfunction]
fn f_expanded(n: u32, alpha: &Bound<'_, PyAny>, beta: &Bound<'_, PyAny>) -> PyResult<Rational> {
    closed_forms::f_expanded(n, &rational(alpha)?, &rational(beta)?).map_err(value_err)
}

#[pyfunction]
fn f_normalized(n: u32, alpha: &Bound<'_, PyAny>, beta: &Bound<'_, PyAny>) -> PyResult<Rational> {
    closed_forms::f_normalized(n, &rational(alpha)?, &rational(beta)?).map_err(value_err)
}

#[pyclass(frozen, name = "ScanResult")]
struct PyScan(closed_forms::ScanResult);

#[pymethods]
impl PyScan {
    #[getter]
    fn first_positive(&self) -> Option<u32> {
        self.0.first_positive
    }
    #[getter]
    fn reversals(&self) -> Vec<u32> {
        self.0.reversals.clone()
    }
    /// `(n, t, f)` for every scanned dimension.
    #[getter]
    fn rows(&self) -> Vec<(u32, Rational, Rational)> {
        self.0.rows.iter().map(|r| (r.n, r.t.clone(), r.f.clone())).collect()
    }
    fn summary(&self) -> String {
        self.0.summary()
    }
}

#[pyfunction]
fn scan_min_n(alpha: &Bound<'_, PyAny>, beta: &Bound<'_, PyAny>, n_max: u32) -> PyResult<PyScan> {
    closed_forms::scan_min_n(&rational(alpha)?, &rational(beta)?, n_max).map(PyScan).map_err(value_err)
}

/// A homogeneous class `lh·LH^{d-1} + h·H^d` (or a scalar in degree 0).
#[pyclass(frozen, name = "GradedClass")]
struct PyClass(GradedClass);

#[pymethods]
impl PyClass {
    #[getter]
    fn dim(&self) -> u32 {
        self.0.dim()
    }
    #[getter]
    fn degree(&self) -> u32 {
        self.0.degree()
    }
    #[getter]
    fn scalar(&self) -> Rational {
        self.0.scalar_part().clone()
    }
    #[getter]
    fn lh(&self) -> Rational {
        self.0.coeff_lh().clone()
    }
    #[getter]
    fn h(&self) -> Rational {
        self.0.coeff_h().clone()
    }
    /// The intersection number of a top-degree class.
    fn top(&self) -> PyResult<Rational> {
        ring::top_evaluate(&self.0).map_err(value_err)
    }
    fn __mul__(&self, other: &PyClass) -> PyResult<PyClass> {
        ring::multiply(&self.0, &other.0).map(PyClass).map_err(value_err)
    }
    fn __add__(&self, other: &PyClass) -> PyResult<PyClass> {
        self.0.add(&other.0).map(PyClass).map_err(value_err)
    }
    fn __pow__(&self, k: u32, _modulo: Option<u32>) -> PyResult<PyClass> {
        ring::power(&self.0, k).map(PyClass).map_err(value_err)
    }
    fn __eq__(&self, other: &PyClass) -> bool {
        self.0 == other.0
    }
    fn __str__(&self) -> String {
        self.0.to_string()
    }
    fn __repr__(&self) -> String {
        format!("GradedClass({})", self.0)
    }
}

#[pyfunction]
#[pyo3(signature = (n, expr, alpha = None, beta = None))]
fn ring_eval(
    n: u32,
    expr: &str,
    alpha: Option<&Bound<'_, PyAny>>,
    beta: Option<&Bound<'_, PyAny>>,
) -> PyResult<PyClass> {
    let a = alpha.map(rational).transpose()?.unwrap_or_else(|| Rational::from_integer(1.into()));
    let b = beta.map(rational).transpose()?.unwrap_or_else(|| Rational::from_integer(1.into()));
    let e = ring::parse_class_expr(expr).map_err(value_err)?;
    ring::eval_class_expr(&e, n, &a, &b).map(PyClass).map_err(value_err)
}

/// `(c1, c2)` of the bundle in dimension `n`.
#[pyfunction]
fn chern_classes(n: u32) -> PyResult<(PyClass, PyClass)> {
    let (c1, c2) = ring::chern_classes_x(n).map_err(value_err)?;
    Ok((PyClass(c1), PyClass(c2)))
}

#[pyclass(frozen, name = "InequalityReport")]
struct PyReport(inequality::InequalityReport);

#[pymethods]
impl PyReport {
    #[getter]
    fn name(&self) -> &'static str {
        self.0.name
    }
    #[getter]
    fn lhs(&self) -> Rational {
        self.0.lhs.clone()
    }
    #[getter]
    fn rhs(&self) -> Rational {
        self.0.rhs.clone()
    }
    #[getter]
    fn margin(&self) -> Rational {
        self.0.margin.clone()
    }
    #[getter]
    fn verdict(&self) -> &'static str {
        self.0.verdict.as_str()
    }
    #[getter]
    fn note(&self) -> Option<&'static str> {
        self.0.note
    }
    fn __repr__(&self) -> String {
        format!(
            "InequalityReport(name={:?}, margin={}, verdict={:?})",
            self.0.name,
            format_rational(&self.0.margin),
            self.0.verdict.as_str()
        )
    }
}

/// The four intersection numbers of a Kähler class.
#[pyclass(frozen, name = "KahlerClassData")]
struct PyClassData(KahlerClassData);

#[pymethods]
impl PyClassData {
    #[new]
    fn new(
        n: u32,
        vol: &Bound<'_, PyAny>,
        deg1: &Bound<'_, PyAny>,
        chern11: &Bound<'_, PyAny>,
        chern2: &Bound<'_, PyAny>,
    ) -> PyResult<Self> {
        KahlerClassData::new(n, rational(vol)?, rational(deg1)?, rational(chern11)?, rational(chern2)?)
            .map(PyClassData)
            .map_err(value_err)
    }
    #[getter]
    fn n(&self) -> u32 {
        self.0.n()
    }
    fn rescale(&self, factor: &Bound<'_, PyAny>) -> PyResult<Self> {
        self.0.rescale(&rational(factor)?).map(PyClassData).map_err(value_err)
    }
    fn csck_scalar(&self) -> Rational {
        self.0.csck_scalar()
    }
    fn calabi_trivial_bound(&self) -> Rational {
        inequality::calabi_trivial_bound(&self.0)
    }
    fn bochner_bound(&self) -> Rational {
        inequality::bochner_bound(&self.0)
    }
    /// `1` if the Bochner bound is sharper, `-1` if the trivial one is, `0` on a tie.
    fn compare_lower_bounds(&self) -> i32 {
        match inequality::compare_lower_bounds(&self.0) {
            Ordering::Greater => 1,
            Ordering::Equal => 0,
            Ordering::Less => -1,
        }
    }
    fn csck_obstruction_check(&self) -> PyReport {
        PyReport(inequality::csck_obstruction_check(&self.0))
    }
    #[pyo3(signature = (scalar = None))]
    fn tian_check(&self, scalar: Option<&Bound<'_, PyAny>>) -> PyResult<PyReport> {
        Ok(PyReport(match scalar {
            Some(s) => inequality::tian_check_with_scalar(&self.0, &rational(s)?),
            None => inequality::tian_check_csck(&self.0),
        }))
    }
    /// `mode` is `"c1_negative"` or `"c1_zero"`.
    fn yau_check(&self, mode: &str) -> PyResult<PyReport> {
        let mode = match mode {
            "c1_negative" => YauMode::C1Negative,
            "c1_zero" => YauMode::C1Zero,
            other => return Err(PyValueError::new_err(format!("unknown mode {other:?}"))),
        };
        Ok(PyReport(inequality::yau_check(&self.0, mode)))
    }
    fn bound_difference(&self) -> Rational {
        inequality::bound_difference(&self.0)
    }
}

/// `[(name, reduced form, passed)]` for the norm identities, key
/// sub-contraction and cross terms.
#[pyfunction]
fn verify_tensor() -> Vec<(String, String, bool)> {
    let mut checks = tensor::verify_norm_identities();
    checks.push(tensor::verify_key_subcontraction());
    checks.extend(tensor::verify_cross_terms());
    checks.into_iter().map(|c| (c.name.to_string(), c.reduced.to_string(), c.passed())).collect()
}

/// Derived identities as `{name: {symbol: coefficient}}` plus the Besse audit
/// and an overall `passed` flag. Coefficients are printed rational functions of `n`.
#[pyfunction]
fn verify_identities<'py>(py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
    let prover = identity::Prover::new().map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    let report = identity::verify_identities(&prover);
    let out = PyDict::new(py);
    let ids = PyDict::new(py);
    for id in &report.identities {
        let coeffs = PyDict::new(py);
        for (s, c) in id.combo.iter() {
            coeffs.set_item(s.key(), c.to_string())?;
        }
        ids.set_item(&id.name, coeffs)?;
    }
    out.set_item("identities", ids)?;
    let besse = PyDict::new(py);
    besse.set_item("corrected", report.besse.corrected.to_string())?;
    besse.set_item("erroneous", report.besse.erroneous.to_string())?;
    besse.set_item("difference", report.besse.difference.to_string())?;
    besse.set_item("vanishing_at", report.besse.vanishing_at.clone())?;
    out.set_item("besse", besse)?;
    out.set_item("passed", report.passed())?;
    Ok(out)
}

/// A coefficient of a derived identity evaluated at dimension `n`.
#[pyfunction]
fn identity_coefficient(name: &str, symbol: &str, n: u32) -> PyResult<Rational> {
    let prover = identity::Prover::new().map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    let id = match name {
        "integral1" => prover.integral1(),
        "integral2" => prover.integral2(),
        "integral3" => prover.combination(),
        "tian" => prover.tian_integrand(),
        "bound_difference" => prover.bound_difference(),
        other => return Err(PyValueError::new_err(format!("unknown identity {other:?}"))),
    };
    let sym = ScalarSymbol::ALL
        .into_iter()
        .find(|s| s.key() == symbol)
        .ok_or_else(|| PyValueError::new_err(format!("unknown symbol {symbol:?}")))?;
    if n < 2 {
        return Err(PyValueError::new_err("dimension must be at least 2"));
    }
    Ok(identity::eval_at(&id.coeff(sym), n))
}

/// Runs the command-line program; returns `(exit_code, stdout, stderr)`.
#[pyfunction]
fn cli(args: Vec<String>) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("kahlerq".to_string()).chain(args);
    let code = kahlerq_core::cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8_lossy(&out).into_owned(), String::from_utf8_lossy(&err).into_owned())
}

#[pymodule]
fn kahlerq(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyInvariants>()?;
    m.add_class::<PyScan>()?;
    m.add_class::<PyClass>()?;
    m.add_class::<PyReport>()?;
    m.add_class::<PyClassData>()?;
    m.add_function(wrap_pyfunction!(invariants, m)?)?;
    m.add_function(wrap_pyfunction!(f_definition, m)?)?;
    m.add_function(wrap_pyfunction!(f_expanded, m)?)?;
    m.add_function(wrap_pyfunction!(f_normalized, m)?)?;
    m.add_function(wrap_pyfunction!(scan_min_n, m)?)?;
    m.add_function(wrap_pyfunction!(ring_eval, m)?)?;
    m.add_function(wrap_pyfunction!(chern_classes, m)?)?;
    m.add_function(wrap_pyfunction!(verify_tensor, m)?)?;
    m.add_function(wrap_pyfunction!(verify_identities, m)?)?;
    m.add_function(wrap_pyfunction!(identity_coefficient, m)?)?;
    m.add_function(wrap_pyfunction!(cli, m)?)?;
    Ok(())
}
