//! Interval convexity and numerical checks of the Jensen, Hölder,
//! Cauchy–Schwarz and Minkowski inequalities for interval-valued functions,
//! together with their scalar counterparts.

use std::fmt;

use crate::error::{Error, Result};
use crate::function::{Expr, IntervalFn, RealFn, SignClass, VALIDATION_GRID};
use crate::integrate::{ir_integral, scalar_delta_integral};
use crate::interval::Interval;
use crate::time_scale::TimeScale;

pub const DEFAULT_TOLERANCE: f64 = 1e-8;
pub const DEFAULT_GRID: usize = 17;
const EXPONENT_TOL: f64 = 1e-12;
const CONVEXITY_RTOL: f64 = 1e-9;
const MAX_WITNESSES: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InequalityKind {
    Jensen,
    JensenConcave,
    JensenAffine,
    Holder,
    CauchySchwarz,
    Minkowski,
    HolderNegative,
    MinkowskiNegative,
}

impl InequalityKind {
    pub const ALL: [InequalityKind; 8] = [
        InequalityKind::Jensen,
        InequalityKind::JensenConcave,
        InequalityKind::JensenAffine,
        InequalityKind::Holder,
        InequalityKind::CauchySchwarz,
        InequalityKind::Minkowski,
        InequalityKind::HolderNegative,
        InequalityKind::MinkowskiNegative,
    ];

    pub fn name(self) -> &'static str {
        match self {
            InequalityKind::Jensen => "jensen",
            InequalityKind::JensenConcave => "jensen-concave",
            InequalityKind::JensenAffine => "jensen-affine",
            InequalityKind::Holder => "holder",
            InequalityKind::CauchySchwarz => "cauchy-schwarz",
            InequalityKind::Minkowski => "minkowski",
            InequalityKind::HolderNegative => "holder-negative",
            InequalityKind::MinkowskiNegative => "minkowski-negative",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == name)
    }
}

impl fmt::Display for InequalityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Leq,
    Subset,
    Superset,
    Equal,
}

impl Relation {
    pub fn name(self) -> &'static str {
        match self {
            Relation::Leq => "leq",
            Relation::Subset => "subset",
            Relation::Superset => "superset",
            Relation::Equal => "equal",
        }
    }

    /// Endpoint margins; the relation holds exactly when both are `≥ 0`.
    pub fn margins(self, lhs: Interval, rhs: Interval) -> (f64, f64) {
        match self {
            Relation::Leq => (rhs.lo() - lhs.lo(), rhs.hi() - lhs.hi()),
            Relation::Subset => (lhs.lo() - rhs.lo(), rhs.hi() - lhs.hi()),
            Relation::Superset => (rhs.lo() - lhs.lo(), lhs.hi() - rhs.hi()),
            Relation::Equal => (-(lhs.lo() - rhs.lo()).abs(), -(lhs.hi() - rhs.hi()).abs()),
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InequalityReport {
    pub name: InequalityKind,
    pub lhs: Interval,
    pub rhs: Interval,
    pub relation: Relation,
    pub margin_lo: f64,
    pub margin_hi: f64,
    pub holds: bool,
    pub tolerance: f64,
}

impl InequalityReport {
    pub fn new(name: InequalityKind, lhs: Interval, rhs: Interval, relation: Relation, tolerance: f64) -> Self {
        let (margin_lo, margin_hi) = relation.margins(lhs, rhs);
        Self {
            name,
            lhs,
            rhs,
            relation,
            margin_lo,
            margin_hi,
            holds: margin_lo >= -tolerance && margin_hi >= -tolerance,
            tolerance,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckOptions {
    pub tolerance: f64,
    /// Grid size for the convexity check.
    pub grid: usize,
    /// Skip the convexity check in the Jensen variants.
    pub assume_shape: bool,
}

impl Default for CheckOptions {
    fn default() -> Self {
        Self { tolerance: DEFAULT_TOLERANCE, grid: DEFAULT_GRID, assume_shape: false }
    }
}

impl CheckOptions {
    /// Tolerance handed to the quadrature so that integration error stays
    /// well below the verdict tolerance.
    fn quad_tol(&self) -> f64 {
        (self.tolerance * 1e-2).min(1e-10)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shape {
    Convex,
    Concave,
    Affine,
    None,
}

impl Shape {
    pub fn name(self) -> &'static str {
        match self {
            Shape::Convex => "convex",
            Shape::Concave => "concave",
            Shape::Affine => "affine",
            Shape::None => "none",
        }
    }

    fn from_flags(convex: bool, concave: bool) -> Self {
        match (convex, concave) {
            (true, true) => Shape::Affine,
            (true, false) => Shape::Convex,
            (false, true) => Shape::Concave,
            (false, false) => Shape::None,
        }
    }

    pub fn is_convex(self) -> bool {
        matches!(self, Shape::Convex | Shape::Affine)
    }

    pub fn is_concave(self) -> bool {
        matches!(self, Shape::Concave | Shape::Affine)
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Witness {
    pub x: f64,
    pub y: f64,
    pub alpha: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvexityReport {
    pub verdict: Shape,
    /// Triples violating `αf(x) + (1−α)f(y) ⊆ f(αx + (1−α)y)`.
    pub witnesses: Vec<Witness>,
    pub decomposition_verdict: Shape,
}

fn close_le(a: f64, b: f64) -> bool {
    a <= b + CONVEXITY_RTOL * a.abs().max(b.abs()).max(1.0)
}

/// Classifies `f` on `[a, b]_T` by the inclusion definition on a grid, and
/// independently by the convexity of its endpoint functions.
pub fn check_convexity(f: &IntervalFn, scale: &TimeScale, a: f64, b: f64, grid: usize) -> Result<ConvexityReport> {
    if grid < 3 {
        return Err(Error::Domain(format!("convexity grid must be at least 3, got {grid}")));
    }
    let (a, b) = scale.window(a, b)?;
    let n = grid - 1;
    let mut xs: Vec<f64> = (0..=n)
        .map(|k| scale.nearest_member(if k == n { b } else { a + (b - a) * k as f64 / n as f64 }))
        .collect();
    xs.dedup();
    let values = xs.iter().map(|&x| f.eval(x)).collect::<Result<Vec<_>>>()?;

    let (mut convex, mut concave) = (true, true);
    let (mut lo_convex, mut lo_concave, mut hi_convex, mut hi_concave) = (true, true, true, true);
    let mut witnesses = Vec::new();
    for i in 0..xs.len() {
        for j in i + 1..xs.len() {
            for k in 1..n {
                let alpha = k as f64 / n as f64;
                let Some(z) = scale.snap(alpha * xs[i] + (1.0 - alpha) * xs[j]) else {
                    continue;
                };
                let (fx, fy, fz) = (values[i], values[j], f.eval(z)?);
                let comb = fx.scale(alpha) + fy.scale(1.0 - alpha);
                let sub = close_le(fz.lo(), comb.lo()) && close_le(comb.hi(), fz.hi());
                let sup = close_le(comb.lo(), fz.lo()) && close_le(fz.hi(), comb.hi());
                if !sub {
                    convex = false;
                    if witnesses.len() < MAX_WITNESSES {
                        witnesses.push(Witness { x: xs[i], y: xs[j], alpha });
                    }
                }
                concave &= sup;

                let lo_chord = alpha * fx.lo() + (1.0 - alpha) * fy.lo();
                let hi_chord = alpha * fx.hi() + (1.0 - alpha) * fy.hi();
                lo_convex &= close_le(fz.lo(), lo_chord);
                lo_concave &= close_le(lo_chord, fz.lo());
                hi_convex &= close_le(fz.hi(), hi_chord);
                hi_concave &= close_le(hi_chord, fz.hi());
            }
        }
    }
    Ok(ConvexityReport {
        verdict: Shape::from_flags(convex, concave),
        witnesses,
        decomposition_verdict: Shape::from_flags(lo_convex && hi_concave, lo_concave && hi_convex),
    })
}

/// Range of `g` over the validation grid of `[a, b]_T`.
fn expr_range(g: &Expr, scale: &TimeScale, a: f64, b: f64) -> Result<(f64, f64)> {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for t in scale.sample_grid(a, b, VALIDATION_GRID)? {
        let v = g.eval(t).map_err(|message| Error::Eval { t, message })?;
        lo = lo.min(v);
        hi = hi.max(v);
    }
    Ok((lo, hi))
}

fn weight(h: &Expr, scale: &TimeScale, a: f64, b: f64, tol: f64) -> Result<f64> {
    let w = scalar_delta_integral(&RealFn::new(h.clone().abs()), scale, a, b, tol)?;
    if w > 0.0 {
        Ok(w)
    } else {
        Err(Error::WeightDegenerate(w))
    }
}

#[allow(clippy::too_many_arguments)]
fn jensen_impl(
    kind: InequalityKind,
    f: &IntervalFn,
    g: &Expr,
    h: &Expr,
    scale: &TimeScale,
    a: f64,
    b: f64,
    opts: CheckOptions,
) -> Result<InequalityReport> {
    let (a, b) = scale.window(a, b)?;
    let qtol = opts.quad_tol();
    let w = weight(h, scale, a, b, qtol)?;
    let mean = scalar_delta_integral(&RealFn::new(h.clone().abs() * g.clone()), scale, a, b, qtol)? / w;

    let (gmin, gmax) = expr_range(g, scale, a, b)?;
    if gmin < gmax {
        let range = TimeScale::segment(gmin, gmax)?;
        f.check_sign(&range, gmin, gmax, SignClass::Positive)?;
        if !opts.assume_shape {
            let shape = check_convexity(f, &range, gmin, gmax, opts.grid)?.verdict;
            let ok = match kind {
                InequalityKind::Jensen => shape.is_convex(),
                InequalityKind::JensenConcave => shape.is_concave(),
                _ => shape == Shape::Affine,
            };
            if !ok {
                return Err(Error::NotConvex(format!("f is {shape} on [{gmin}, {gmax}]")));
            }
        }
    } else if f.eval(gmin)?.lo() < 0.0 {
        return Err(Error::SignPrecondition(format!("f({gmin}) is not nonnegative")));
    }

    // convex, concave and affine functions are continuous
    let integrand = IntervalFn::weight_compose(h, &f.clone().mark_continuous(), g);
    let lhs = ir_integral(&integrand, scale, a, b, qtol)?.value.scale(1.0 / w);
    let rhs = f.eval(mean)?;
    let relation = match kind {
        InequalityKind::Jensen => Relation::Subset,
        InequalityKind::JensenConcave => Relation::Superset,
        _ => Relation::Equal,
    };
    Ok(InequalityReport::new(kind, lhs, rhs, relation, opts.tolerance))
}

/// `(1/W)∫|h| f(g) Δs ⊆ f((1/W)∫|h| g Δs)` with `W = ∫|h| Δs`, for convex `f`.
pub fn jensen(f: &IntervalFn, g: &Expr, h: &Expr, scale: &TimeScale, a: f64, b: f64, opts: CheckOptions) -> Result<InequalityReport> {
    jensen_impl(InequalityKind::Jensen, f, g, h, scale, a, b, opts)
}

/// Reverse inclusion, for concave `f`.
pub fn jensen_concave(f: &IntervalFn, g: &Expr, h: &Expr, scale: &TimeScale, a: f64, b: f64, opts: CheckOptions) -> Result<InequalityReport> {
    jensen_impl(InequalityKind::JensenConcave, f, g, h, scale, a, b, opts)
}

/// Equality, for affine `f`.
pub fn jensen_affine(f: &IntervalFn, g: &Expr, h: &Expr, scale: &TimeScale, a: f64, b: f64, opts: CheckOptions) -> Result<InequalityReport> {
    jensen_impl(InequalityKind::JensenAffine, f, g, h, scale, a, b, opts)
}

fn conjugate(p: f64, q: Option<f64>) -> Result<f64> {
    if !(p > 1.0) || !p.is_finite() {
        return Err(Error::Exponent(format!("p must be finite and > 1, got {p}")));
    }
    let q = q.unwrap_or(p / (p - 1.0));
    if !(q > 1.0) || (1.0 / p + 1.0 / q - 1.0).abs() > EXPONENT_TOL {
        return Err(Error::Exponent(format!("1/p + 1/q must equal 1 (p = {p}, q = {q})")));
    }
    Ok(q)
}

/// Nonnegative integral that may come back a few ulps below zero.
fn clamp_nonneg(v: Interval, tol: f64) -> Interval {
    if v.lo() < 0.0 && v.lo() >= -tol {
        Interval::new(0.0, v.hi().max(0.0))
    } else {
        v
    }
}

fn root(v: Interval, p: f64, tol: f64) -> Result<Interval> {
    clamp_nonneg(v, tol).pow(1.0 / p)
}

fn check_all_sign(fs: &[&IntervalFn], scale: &TimeScale, a: f64, b: f64, sign: SignClass) -> Result<()> {
    fs.iter().try_for_each(|f| f.check_sign(scale, a, b, sign))
}

#[allow(clippy::too_many_arguments)]
fn holder_impl(
    kind: InequalityKind,
    f: &IntervalFn,
    g: &IntervalFn,
    h: &Expr,
    p: f64,
    q: Option<f64>,
    scale: &TimeScale,
    a: f64,
    b: f64,
    opts: CheckOptions,
) -> Result<InequalityReport> {
    let q = conjugate(p, q)?;
    let (a, b) = scale.window(a, b)?;
    let qtol = opts.quad_tol();
    let hf = IntervalFn::degenerate(h.clone());
    hf.check_sign(scale, a, b, SignClass::Positive)
        .map_err(|_| Error::SignPrecondition("h must be nonnegative".into()))?;
    let negative = kind == InequalityKind::HolderNegative;
    let sign = if negative { SignClass::Negative } else { SignClass::Positive };
    check_all_sign(&[f, g], scale, a, b, sign)?;

    let fg = f.product_signed(g, sign);
    let lhs = ir_integral(&hf.product_signed(&fg, SignClass::Positive), scale, a, b, qtol)?.value;
    let (fp, gq) = if negative {
        (f.scale(-1.0).power_signed(p, SignClass::Positive)?, g.scale(-1.0).power_signed(q, SignClass::Positive)?)
    } else {
        (f.power_signed(p, SignClass::Positive)?, g.power_signed(q, SignClass::Positive)?)
    };
    let big_a = ir_integral(&hf.product_signed(&fp, SignClass::Positive), scale, a, b, qtol)?.value;
    let big_b = ir_integral(&hf.product_signed(&gq, SignClass::Positive), scale, a, b, qtol)?.value;
    let rhs = if kind == InequalityKind::CauchySchwarz {
        root(clamp_nonneg(big_a, qtol) * clamp_nonneg(big_b, qtol), 2.0, qtol)?
    } else {
        root(big_a, p, qtol)? * root(big_b, q, qtol)?
    };
    Ok(InequalityReport::new(kind, lhs, rhs, Relation::Leq, opts.tolerance))
}

/// `∫ h f g Δs ≤ (∫ h f^p Δs)^{1/p} (∫ h g^q Δs)^{1/q}` for nonnegative
/// `h`, `f`, `g`; `q` defaults to `p/(p−1)`.
#[allow(clippy::too_many_arguments)]
pub fn holder(f: &IntervalFn, g: &IntervalFn, h: &Expr, p: f64, q: Option<f64>, scale: &TimeScale, a: f64, b: f64, opts: CheckOptions) -> Result<InequalityReport> {
    holder_impl(InequalityKind::Holder, f, g, h, p, q, scale, a, b, opts)
}

/// Hölder for nonpositive `f`, `g`, with `(−f)^p` and `(−g)^q` on the right.
#[allow(clippy::too_many_arguments)]
pub fn holder_negative(f: &IntervalFn, g: &IntervalFn, h: &Expr, p: f64, q: Option<f64>, scale: &TimeScale, a: f64, b: f64, opts: CheckOptions) -> Result<InequalityReport> {
    holder_impl(InequalityKind::HolderNegative, f, g, h, p, q, scale, a, b, opts)
}

/// `∫ h f g Δs ≤ √((∫ h f² Δs)(∫ h g² Δs))`.
pub fn cauchy_schwarz(f: &IntervalFn, g: &IntervalFn, h: &Expr, scale: &TimeScale, a: f64, b: f64, opts: CheckOptions) -> Result<InequalityReport> {
    holder_impl(InequalityKind::CauchySchwarz, f, g, h, 2.0, Some(2.0), scale, a, b, opts)
}

#[allow(clippy::too_many_arguments)]
fn minkowski_impl(
    kind: InequalityKind,
    f: &IntervalFn,
    g: &IntervalFn,
    h: &Expr,
    p: f64,
    scale: &TimeScale,
    a: f64,
    b: f64,
    opts: CheckOptions,
) -> Result<InequalityReport> {
    if !(p > 1.0) || !p.is_finite() {
        return Err(Error::Exponent(format!("p must be finite and > 1, got {p}")));
    }
    let negative = kind == InequalityKind::MinkowskiNegative;
    if negative && !(p.fract() == 0.0 && p % 2.0 == 0.0) {
        return Err(Error::Exponent(format!("p must be an even integer, got {p}")));
    }
    let (a, b) = scale.window(a, b)?;
    let qtol = opts.quad_tol();
    let sign = if negative { SignClass::Negative } else { SignClass::Positive };
    check_all_sign(&[f, g], scale, a, b, sign)?;
    let w = IntervalFn::degenerate(h.clone().abs());
    let int_pow = |u: &IntervalFn| -> Result<Interval> {
        let up = u.power_signed(p, sign)?;
        let v = ir_integral(&w.product_signed(&up, SignClass::Positive), scale, a, b, qtol)?.value;
        root(v, p, qtol)
    };
    let lhs = int_pow(&f.add(g))?;
    let rhs = int_pow(f)? + int_pow(g)?;
    Ok(InequalityReport::new(kind, lhs, rhs, Relation::Leq, opts.tolerance))
}

/// `(∫|h|(f+g)^p Δs)^{1/p} ≤ (∫|h| f^p Δs)^{1/p} + (∫|h| g^p Δs)^{1/p}` for
/// nonnegative `f`, `g`.
#[allow(clippy::too_many_arguments)]
pub fn minkowski(f: &IntervalFn, g: &IntervalFn, h: &Expr, p: f64, scale: &TimeScale, a: f64, b: f64, opts: CheckOptions) -> Result<InequalityReport> {
    minkowski_impl(InequalityKind::Minkowski, f, g, h, p, scale, a, b, opts)
}

/// Minkowski for nonpositive `f`, `g` and even integer `p`.
#[allow(clippy::too_many_arguments)]
pub fn minkowski_negative(f: &IntervalFn, g: &IntervalFn, h: &Expr, p: f64, scale: &TimeScale, a: f64, b: f64, opts: CheckOptions) -> Result<InequalityReport> {
    minkowski_impl(InequalityKind::MinkowskiNegative, f, g, h, p, scale, a, b, opts)
}

/// Outcome of a scalar inequality `lhs ≤ rhs`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarReport {
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub holds: bool,
}

impl ScalarReport {
    fn leq(lhs: f64, rhs: f64, tol: f64) -> Self {
        Self { lhs, rhs, margin: rhs - lhs, holds: rhs - lhs >= -tol }
    }
}

/// Scalar Jensen: `φ((1/W)∫|h| g) ≤ (1/W)∫|h| φ(g)` for convex `φ`;
/// with `concave` the sides swap.
#[allow(clippy::too_many_arguments)]
pub fn scalar_jensen(phi: &RealFn, g: &Expr, h: &Expr, scale: &TimeScale, a: f64, b: f64, concave: bool, tol: f64) -> Result<ScalarReport> {
    let qtol = (tol * 1e-2).min(1e-10);
    let w = weight(h, scale, a, b, qtol)?;
    let mean = scalar_delta_integral(&RealFn::new(h.clone().abs() * g.clone()), scale, a, b, qtol)? / w;
    let habs = h.clone().abs();
    let avg = scalar_delta_integral(&phi.compose(g).map(|e| habs.clone() * e), scale, a, b, qtol)? / w;
    let at_mean = phi.eval(mean)?;
    Ok(if concave { ScalarReport::leq(avg, at_mean, tol) } else { ScalarReport::leq(at_mean, avg, tol) })
}

/// Scalar Hölder: `∫ h f g ≤ (∫ h |f|^p)^{1/p} (∫ h |g|^q)^{1/q}`.
#[allow(clippy::too_many_arguments)]
pub fn scalar_holder(f: &RealFn, g: &RealFn, h: &Expr, p: f64, q: Option<f64>, scale: &TimeScale, a: f64, b: f64, tol: f64) -> Result<ScalarReport> {
    let q = conjugate(p, q)?;
    let qtol = (tol * 1e-2).min(1e-10);
    let hw = RealFn::new(h.clone());
    let lhs = scalar_delta_integral(&hw.zip(&f.zip(g, |x, y| x * y), |x, y| x * y), scale, a, b, qtol)?;
    let ia = scalar_delta_integral(&hw.zip(&f.map(|e| e.abs().powf(p)), |x, y| x * y), scale, a, b, qtol)?;
    let ib = scalar_delta_integral(&hw.zip(&g.map(|e| e.abs().powf(q)), |x, y| x * y), scale, a, b, qtol)?;
    let rhs = ia.max(0.0).powf(1.0 / p) * ib.max(0.0).powf(1.0 / q);
    Ok(ScalarReport::leq(lhs, rhs, tol))
}

/// Scalar Minkowski: `(∫|h||f+g|^p)^{1/p} ≤ (∫|h||f|^p)^{1/p} + (∫|h||g|^p)^{1/p}`.
#[allow(clippy::too_many_arguments)]
pub fn scalar_minkowski(f: &RealFn, g: &RealFn, h: &Expr, p: f64, scale: &TimeScale, a: f64, b: f64, tol: f64) -> Result<ScalarReport> {
    if !(p >= 1.0) || !p.is_finite() {
        return Err(Error::Exponent(format!("p must be finite and >= 1, got {p}")));
    }
    let qtol = (tol * 1e-2).min(1e-10);
    let hw = RealFn::new(h.clone().abs());
    let norm = |u: &RealFn| -> Result<f64> {
        let v = scalar_delta_integral(&hw.zip(&u.map(|e| e.abs().powf(p)), |x, y| x * y), scale, a, b, qtol)?;
        Ok(v.max(0.0).powf(1.0 / p))
    };
    let lhs = norm(&f.zip(g, |x, y| x + y))?;
    let rhs = norm(f)? + norm(g)?;
    Ok(ScalarReport::leq(lhs, rhs, tol))
}
