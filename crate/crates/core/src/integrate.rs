//! Darboux Δ-sums, the ID and IR Δ-integrals, and the scalar Riemann
//! Δ-integral.
//!
//! Purely discrete ranges are summed exactly. Continuum runs of continuous
//! functions go through adaptive Simpson quadrature, split at piece
//! breakpoints. Functions with discontinuous pieces get Darboux sums over
//! repeatedly refined divisions.

use std::fmt;

use crate::error::{Error, Result};
use crate::function::{Expr, IntervalFn, RealFn};
use crate::interval::Interval;
use crate::partition::{make_lemma1_division, refine, Division};
use crate::time_scale::{Run, TimeScale};

const MAX_DEPTH: u32 = 40;
const MIN_DEPTH: u32 = 3;
const EVAL_BUDGET: usize = 4_000_000;
/// Requested accuracy is capped at this multiple of `∫|f|`; absolute
/// tolerances below the rounding level of the integral are unreachable.
const RELATIVE_FLOOR: f64 = 1e-14;
const MAGNITUDE_SAMPLES: usize = 33;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    ExactDiscrete,
    Quadrature,
    DarbouxRefinement,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::ExactDiscrete => "exact-discrete",
            Method::Quadrature => "quadrature",
            Method::DarbouxRefinement => "darboux-refinement",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntegralResult {
    pub value: Interval,
    pub method: Method,
    pub error_estimate: f64,
    pub cells_used: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DarbouxBounds {
    pub division: Division,
    /// `(m_i, M_i)` per cell.
    pub cells: Vec<(f64, f64)>,
    pub lower: f64,
    pub upper: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdOptions {
    /// Use Darboux refinement even for continuous functions.
    pub force_darboux: bool,
    pub max_rounds: usize,
    pub max_cells: usize,
}

impl Default for IdOptions {
    fn default() -> Self {
        Self { force_darboux: false, max_rounds: 24, max_cells: 1 << 14 }
    }
}

/// Lower and upper Darboux Δ-sums of `f` over `d`.
pub fn darboux_sums(f: &IntervalFn, scale: &TimeScale, d: &Division) -> Result<DarbouxBounds> {
    let mut cells = Vec::with_capacity(d.len());
    let mut lower = 0.0;
    let mut upper = 0.0;
    for (x, y) in d.cells() {
        let (m, big_m) = f.envelope(scale, x, y)?;
        lower += m * (y - x);
        upper += big_m * (y - x);
        cells.push((m, big_m));
    }
    Ok(DarbouxBounds { division: d.clone(), cells, lower, upper })
}

pub fn id_integral(f: &IntervalFn, scale: &TimeScale, a: f64, b: f64, tol: f64) -> Result<IntegralResult> {
    id_integral_with(f, scale, a, b, tol, IdOptions::default())
}

pub fn id_integral_with(
    f: &IntervalFn,
    scale: &TimeScale,
    a: f64,
    b: f64,
    tol: f64,
    opts: IdOptions,
) -> Result<IntegralResult> {
    check_tol(tol)?;
    let (a, b) = scale.window(a, b)?;
    let runs = scale.continuous_runs(a, b)?;
    if runs.iter().all(|r| matches!(r, Run::Scattered { .. })) {
        return exact_discrete(f, &runs);
    }
    if f.is_continuous() && !opts.force_darboux {
        return quadrature(f, &runs, tol);
    }
    darboux_refinement(f, scale, a, b, tol, opts)
}

/// Componentwise Δ-integral of a continuous interval function.
pub fn ir_integral(f: &IntervalFn, scale: &TimeScale, a: f64, b: f64, tol: f64) -> Result<IntegralResult> {
    check_tol(tol)?;
    let (a, b) = scale.window(a, b)?;
    if !f.is_continuous() {
        return Err(Error::NotContinuous);
    }
    let runs = scale.continuous_runs(a, b)?;
    if runs.iter().all(|r| matches!(r, Run::Scattered { .. })) {
        return exact_discrete(f, &runs);
    }
    quadrature(f, &runs, tol)
}

/// Riemann Δ-integral of a real function.
pub fn scalar_delta_integral(g: &RealFn, scale: &TimeScale, a: f64, b: f64, tol: f64) -> Result<f64> {
    Ok(ir_integral(g.as_interval_fn(), scale, a, b, tol)?.value.lo())
}

fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("tolerance must be positive, got {tol}")))
    }
}

fn exact_discrete(f: &IntervalFn, runs: &[Run]) -> Result<IntegralResult> {
    let mut sum = Interval::ZERO;
    for run in runs {
        if let Run::Scattered { t, mu } = *run {
            sum = sum + f.eval(t)?.scale(mu);
        }
    }
    Ok(IntegralResult { value: sum, method: Method::ExactDiscrete, error_estimate: 0.0, cells_used: runs.len() })
}

enum Task<'a> {
    Point { t: f64, mu: f64 },
    Exprs { x: f64, y: f64, lo: &'a Expr, hi: &'a Expr },
    Opaque { x: f64, y: f64 },
}

fn quadrature(f: &IntervalFn, runs: &[Run], tol: f64) -> Result<IntegralResult> {
    let mut tasks = Vec::new();
    for run in runs {
        match *run {
            Run::Scattered { t, mu } => tasks.push(Task::Point { t, mu }),
            Run::Segment { start, end } => match f.sub_segments(start, end)? {
                Some(subs) => {
                    for s in subs {
                        let (lo, hi) = s.piece.pair().ok_or(Error::NotContinuous)?;
                        tasks.push(Task::Exprs { x: s.start, y: s.end, lo, hi });
                    }
                }
                None => tasks.push(Task::Opaque { x: start, y: end }),
            },
        }
    }
    let segments = tasks.iter().filter(|t| !matches!(t, Task::Point { .. })).count().max(1);
    let seg_tol = tol / segments as f64;

    let mut lo_sum = 0.0;
    let mut hi_sum = 0.0;
    let mut err: f64 = 0.0;
    let mut cells = 0;
    for task in &tasks {
        let (lo, hi) = match *task {
            Task::Point { t, mu } => {
                cells += 1;
                let v = f.eval(t)?.scale(mu);
                (v.lo(), v.hi())
            }
            Task::Exprs { x, y, lo, hi } => {
                let ql = simpson(&|t| lo.eval(t).map_err(|message| Error::Eval { t, message }), x, y, seg_tol)?;
                let qh = simpson(&|t| hi.eval(t).map_err(|message| Error::Eval { t, message }), x, y, seg_tol)?;
                err = err.max(ql.error).max(qh.error);
                cells += ql.leaves.max(qh.leaves);
                (ql.value, qh.value)
            }
            Task::Opaque { x, y } => {
                let ql = simpson(&|t| Ok(f.eval(t)?.lo()), x, y, seg_tol)?;
                let qh = simpson(&|t| Ok(f.eval(t)?.hi()), x, y, seg_tol)?;
                err = err.max(ql.error).max(qh.error);
                cells += ql.leaves.max(qh.leaves);
                (ql.value, qh.value)
            }
        };
        lo_sum += lo;
        hi_sum += hi;
    }
    if lo_sum > hi_sum {
        // quadrature noise on (nearly) degenerate functions
        let mid = 0.5 * (lo_sum + hi_sum);
        lo_sum = mid;
        hi_sum = mid;
    }
    Ok(IntegralResult {
        value: Interval::new(lo_sum, hi_sum),
        method: Method::Quadrature,
        error_estimate: err,
        cells_used: cells,
    })
}

fn darboux_refinement(
    f: &IntervalFn,
    scale: &TimeScale,
    a: f64,
    b: f64,
    tol: f64,
    opts: IdOptions,
) -> Result<IntegralResult> {
    let mut d = make_lemma1_division(scale, a, b, (b - a) / 8.0)?;
    let mut bounds = darboux_sums(f, scale, &d)?;
    let mut change = f64::INFINITY;
    for _ in 0..opts.max_rounds {
        let next = refine(scale, &d);
        if next.len() > opts.max_cells {
            break;
        }
        let nb = darboux_sums(f, scale, &next)?;
        change = (nb.lower - bounds.lower).abs().max((nb.upper - bounds.upper).abs());
        d = next;
        bounds = nb;
        if change < tol {
            return Ok(IntegralResult {
                value: Interval::new(bounds.lower, bounds.upper),
                method: Method::DarbouxRefinement,
                error_estimate: change,
                cells_used: d.len(),
            });
        }
    }
    Err(Error::NonConvergence {
        bracket: Interval::new(bounds.lower, bounds.upper),
        message: format!("Darboux sums still moving by {change:e} after {} cells", d.len()),
    })
}

struct QuadResult {
    value: f64,
    error: f64,
    leaves: usize,
}

struct Simpson<'a> {
    f: &'a dyn Fn(f64) -> Result<f64>,
    evals: usize,
    error: f64,
    leaves: usize,
}

/// Adaptive Simpson quadrature with Richardson correction on each leaf.
fn simpson(f: &dyn Fn(f64) -> Result<f64>, a: f64, b: f64, tol: f64) -> Result<QuadResult> {
    let mut mag = 0.0;
    for k in 0..MAGNITUDE_SAMPLES {
        let x = a + (b - a) * (k as f64 + 0.5) / MAGNITUDE_SAMPLES as f64;
        mag += f(x)?.abs();
    }
    let tol = tol.max(RELATIVE_FLOOR * mag * (b - a) / MAGNITUDE_SAMPLES as f64);
    let mut s = Simpson { f, evals: 3 + MAGNITUDE_SAMPLES, error: 0.0, leaves: 0 };
    let fa = f(a)?;
    let fb = f(b)?;
    let m = 0.5 * (a + b);
    let fm = f(m)?;
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    let value = s.step(a, fa, m, fm, b, fb, whole, tol, 0)?;
    if s.error > tol {
        return Err(Error::NonConvergence {
            bracket: Interval::new(value - s.error, value + s.error),
            message: format!("quadrature on [{a}, {b}] reached error estimate {:e} > {tol:e}", s.error),
        });
    }
    Ok(QuadResult { value, error: s.error, leaves: s.leaves })
}

impl Simpson<'_> {
    #[allow(clippy::too_many_arguments)]
    fn step(&mut self, a: f64, fa: f64, m: f64, fm: f64, b: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> Result<f64> {
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = (self.f)(lm)?;
        let frm = (self.f)(rm)?;
        self.evals += 2;
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        let converged = depth >= MIN_DEPTH && delta.abs() <= 15.0 * tol;
        let exhausted = depth >= MAX_DEPTH || self.evals >= EVAL_BUDGET || !(a < lm && lm < m && m < rm && rm < b);
        if converged || exhausted {
            self.error += delta.abs() / 15.0;
            self.leaves += 1;
            return Ok(left + right + delta / 15.0);
        }
        let l = self.step(a, fa, lm, flm, m, fm, left, 0.5 * tol, depth + 1)?;
        let r = self.step(m, fm, rm, frm, b, fb, right, 0.5 * tol, depth + 1)?;
        Ok(l + r)
    }
}
