//! Python bindings: `import tscalc`.

use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;
use tscalc_core::inequality::{
    cauchy_schwarz, holder, holder_negative, jensen, jensen_affine, jensen_concave, minkowski, minkowski_negative,
    DEFAULT_GRID, DEFAULT_TOLERANCE,
};
use tscalc_core::{dsl, CheckOptions, Error, InequalityKind, Side};

create_exception!(tscalc, TscalcError, PyException);
create_exception!(tscalc, ParseError, TscalcError);
create_exception!(tscalc, PreconditionError, TscalcError);
create_exception!(tscalc, NonConvergenceError, TscalcError);

fn err(e: Error) -> PyErr {
    match e {
        Error::Parse(p) => ParseError::new_err(p.to_string()),
        Error::DomainCoverage(_) | Error::InvalidScale(_) => ParseError::new_err(e.to_string()),
        Error::NonConvergence { .. } => NonConvergenceError::new_err(e.to_string()),
        _ => PreconditionError::new_err(e.to_string()),
    }
}

fn parse_err(e: tscalc_core::ParseError) -> PyErr {
    ParseError::new_err(e.to_string())
}

/// Closed interval `[lo, hi]`.
#[pyclass(name = "Interval", module = "tscalc", frozen, from_py_object)]
#[derive(Clone, Copy)]
struct PyInterval(tscalc_core::Interval);

#[pymethods]
impl PyInterval {
    #[new]
    fn new(lo: f64, hi: f64) -> PyResult<Self> {
        tscalc_core::Interval::try_new(lo, hi).map(Self).map_err(err)
    }

    #[getter]
    fn lo(&self) -> f64 {
        self.0.lo()
    }

    #[getter]
    fn hi(&self) -> f64 {
        self.0.hi()
    }

    fn __add__(&self, other: &Self) -> Self {
        Self(self.0 + other.0)
    }

    fn __sub__(&self, other: &Self) -> Self {
        Self(self.0 - other.0)
    }

    fn __mul__(&self, other: &Self) -> Self {
        Self(self.0 * other.0)
    }

    fn __truediv__(&self, other: &Self) -> PyResult<Self> {
        self.0.checked_div(other.0).map(Self).map_err(err)
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.0 == other.0
    }

    fn scale(&self, factor: f64) -> Self {
        Self(self.0.scale(factor))
    }

    fn pow(&self, p: f64) -> PyResult<Self> {
        self.0.pow(p).map(Self).map_err(err)
    }

    fn hausdorff_dist(&self, other: &Self) -> f64 {
        self.0.hausdorff_dist(&other.0)
    }

    fn subset(&self, other: &Self) -> bool {
        self.0.subset(&other.0)
    }

    fn leq(&self, other: &Self) -> bool {
        self.0.leq(&other.0)
    }

    fn __repr__(&self) -> String {
        format!("Interval({}, {})", self.0.lo(), self.0.hi())
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }
}

/// Time scale parsed from the scale DSL.
#[pyclass(name = "TimeScale", module = "tscalc", frozen)]
struct PyTimeScale(tscalc_core::TimeScale);

fn side(s: Side) -> &'static str {
    match s {
        Side::Scattered => "scattered",
        Side::Dense => "dense",
        Side::Boundary => "boundary",
    }
}

#[pymethods]
impl PyTimeScale {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        dsl::scale(text).map(Self).map_err(parse_err)
    }

    #[getter]
    fn min(&self) -> f64 {
        self.0.min()
    }

    #[getter]
    fn max(&self) -> f64 {
        self.0.max()
    }

    fn __contains__(&self, t: f64) -> bool {
        self.0.contains(t)
    }

    fn sigma(&self, t: f64) -> PyResult<f64> {
        self.0.sigma(t).map_err(err)
    }

    fn rho(&self, t: f64) -> PyResult<f64> {
        self.0.rho(t).map_err(err)
    }

    fn mu(&self, t: f64) -> PyResult<f64> {
        self.0.mu(t).map_err(err)
    }

    fn eta(&self, t: f64) -> PyResult<f64> {
        self.0.eta(t).map_err(err)
    }

    /// `(right, left)` with each side "scattered", "dense" or "boundary".
    fn classify(&self, t: f64) -> PyResult<(&'static str, &'static str)> {
        let c = self.0.classify(t).map_err(err)?;
        Ok((side(c.right), side(c.left)))
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("TimeScale({:?})", self.0.to_string())
    }
}

/// Interval-valued function parsed from the function DSL.
#[pyclass(name = "IntervalFn", module = "tscalc", frozen)]
struct PyIntervalFn(tscalc_core::IntervalFn);

#[pymethods]
impl PyIntervalFn {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        dsl::function(text).map(Self).map_err(parse_err)
    }

    fn __call__(&self, t: f64) -> PyResult<PyInterval> {
        self.0.eval(t).map(PyInterval).map_err(err)
    }

    fn __add__(&self, other: &Self) -> Self {
        Self(self.0.add(&other.0))
    }

    fn scale(&self, factor: f64) -> Self {
        Self(self.0.scale(factor))
    }

    #[getter]
    fn is_continuous(&self) -> bool {
        self.0.is_continuous()
    }
}

#[pyclass(name = "IntegralResult", module = "tscalc", frozen, get_all)]
struct PyIntegralResult {
    value: PyInterval,
    method: &'static str,
    error_estimate: f64,
    cells: usize,
}

#[pymethods]
impl PyIntegralResult {
    fn __repr__(&self) -> String {
        format!(
            "IntegralResult(value={}, method={:?}, error_estimate={:e}, cells={})",
            self.value.0, self.method, self.error_estimate, self.cells
        )
    }
}

fn window(scale: &tscalc_core::TimeScale, a: Option<f64>, b: Option<f64>) -> (f64, f64) {
    (a.unwrap_or(scale.min()), b.unwrap_or(scale.max()))
}

fn integral(r: tscalc_core::IntegralResult) -> PyIntegralResult {
    PyIntegralResult {
        value: PyInterval(r.value),
        method: r.method.name(),
        error_estimate: r.error_estimate,
        cells: r.cells_used,
    }
}

/// Interval Darboux delta integral of `f` over `[a, b]` of `scale`.
#[pyfunction]
#[pyo3(signature = (f, scale, a=None, b=None, tol=DEFAULT_TOLERANCE))]
fn id_integral(f: &PyIntervalFn, scale: &PyTimeScale, a: Option<f64>, b: Option<f64>, tol: f64) -> PyResult<PyIntegralResult> {
    let (a, b) = window(&scale.0, a, b);
    tscalc_core::id_integral(&f.0, &scale.0, a, b, tol).map(integral).map_err(err)
}

/// Interval Riemann delta integral; `f` must be continuous.
#[pyfunction]
#[pyo3(signature = (f, scale, a=None, b=None, tol=DEFAULT_TOLERANCE))]
fn ir_integral(f: &PyIntervalFn, scale: &PyTimeScale, a: Option<f64>, b: Option<f64>, tol: f64) -> PyResult<PyIntegralResult> {
    let (a, b) = window(&scale.0, a, b);
    tscalc_core::ir_integral(&f.0, &scale.0, a, b, tol).map(integral).map_err(err)
}

#[pyclass(name = "InequalityReport", module = "tscalc", frozen, get_all)]
struct PyReport {
    name: &'static str,
    lhs: PyInterval,
    rhs: PyInterval,
    relation: &'static str,
    margin_lo: f64,
    margin_hi: f64,
    holds: bool,
}

#[pymethods]
impl PyReport {
    fn __repr__(&self) -> String {
        format!(
            "InequalityReport(name={:?}, lhs={}, rhs={}, relation={:?}, margin_lo={:e}, margin_hi={:e}, holds={})",
            self.name, self.lhs.0, self.rhs.0, self.relation, self.margin_lo, self.margin_hi, self.holds
        )
    }
}

/// Checks the named inequality. Jensen variants take `g` as a real
/// expression; the others take an interval function.
#[pyfunction]
#[pyo3(signature = (name, scale, f, g, h="1", p=None, q=None, a=None, b=None, tol=DEFAULT_TOLERANCE, grid=DEFAULT_GRID, assume_shape=false))]
#[allow(clippy::too_many_arguments)]
fn check(
    name: &str,
    scale: &PyTimeScale,
    f: &PyIntervalFn,
    g: &str,
    h: &str,
    p: Option<f64>,
    q: Option<f64>,
    a: Option<f64>,
    b: Option<f64>,
    tol: f64,
    grid: usize,
    assume_shape: bool,
) -> PyResult<PyReport> {
    let kind = InequalityKind::from_name(name).ok_or_else(|| PreconditionError::new_err(format!("unknown inequality `{name}`")))?;
    let (a, b) = window(&scale.0, a, b);
    let ts = &scale.0;
    let opts = CheckOptions { tolerance: tol, grid, assume_shape };
    let h = dsl::parse_expr(h).map_err(parse_err)?;
    let need_p = || p.ok_or_else(|| PreconditionError::new_err(format!("{kind} needs p")));
    let r = match kind {
        InequalityKind::Jensen | InequalityKind::JensenConcave | InequalityKind::JensenAffine => {
            let g = dsl::parse_expr(g).map_err(parse_err)?;
            let run = match kind {
                InequalityKind::Jensen => jensen,
                InequalityKind::JensenConcave => jensen_concave,
                _ => jensen_affine,
            };
            run(&f.0, &g, &h, ts, a, b, opts)
        }
        _ => {
            let g = dsl::function(g).map_err(parse_err)?;
            match kind {
                InequalityKind::Holder => holder(&f.0, &g, &h, need_p()?, q, ts, a, b, opts),
                InequalityKind::HolderNegative => holder_negative(&f.0, &g, &h, need_p()?, q, ts, a, b, opts),
                InequalityKind::CauchySchwarz => cauchy_schwarz(&f.0, &g, &h, ts, a, b, opts),
                InequalityKind::Minkowski => minkowski(&f.0, &g, &h, need_p()?, ts, a, b, opts),
                _ => minkowski_negative(&f.0, &g, &h, need_p()?, ts, a, b, opts),
            }
        }
    }
    .map_err(err)?;
    Ok(PyReport {
        name: r.name.name(),
        lhs: PyInterval(r.lhs),
        rhs: PyInterval(r.rhs),
        relation: r.relation.name(),
        margin_lo: r.margin_lo,
        margin_hi: r.margin_hi,
        holds: r.holds,
    })
}

type ConvexityTuple = (&'static str, &'static str, Vec<(f64, f64, f64)>);

/// `(verdict, decomposition_verdict, witnesses)` with witnesses as
/// `(x, y, alpha)` triples.
#[pyfunction]
#[pyo3(signature = (f, scale, a=None, b=None, grid=DEFAULT_GRID))]
fn convexity(
    f: &PyIntervalFn,
    scale: &PyTimeScale,
    a: Option<f64>,
    b: Option<f64>,
    grid: usize,
) -> PyResult<ConvexityTuple> {
    let (a, b) = window(&scale.0, a, b);
    let r = tscalc_core::check_convexity(&f.0, &scale.0, a, b, grid).map_err(err)?;
    Ok((
        r.verdict.name(),
        r.decomposition_verdict.name(),
        r.witnesses.iter().map(|w| (w.x, w.y, w.alpha)).collect(),
    ))
}

#[pymodule]
fn tscalc(m: &Bound<'_, PyModule>) -> PyResult<()> {
    let py = m.py();
    m.add_class::<PyInterval>()?;
    m.add_class::<PyTimeScale>()?;
    m.add_class::<PyIntervalFn>()?;
    m.add_class::<PyIntegralResult>()?;
    m.add_class::<PyReport>()?;
    m.add_function(wrap_pyfunction!(id_integral, m)?)?;
    m.add_function(wrap_pyfunction!(ir_integral, m)?)?;
    m.add_function(wrap_pyfunction!(check, m)?)?;
    m.add_function(wrap_pyfunction!(convexity, m)?)?;
    m.add("TscalcError", py.get_type::<TscalcError>())?;
    m.add("ParseError", py.get_type::<ParseError>())?;
    m.add("PreconditionError", py.get_type::<PreconditionError>())?;
    m.add("NonConvergenceError", py.get_type::<NonConvergenceError>())?;
    Ok(())
}
