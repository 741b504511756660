//! Piecewise interval-valued functions `f(t) = [f_lo(t), f_hi(t)]`.
//!
//! A function is an ordered list of pieces, each guarded by a [`Cond`]. At a
//! point `t` the governing piece is the matching piece with the greatest
//! priority key; for parsed functions the key ranks point conditions
//! (`t == c`, membership predicates) above interval conditions, then later
//! pieces above earlier ones. Binary operations build the cross product of
//! pieces with concatenated keys, so selection on the result agrees with
//! selection on each operand.

mod cond;
mod expr;
mod extrema;

pub use cond::{CmpOp, Cond, COND_TOL};
pub use expr::{build, BinOp, Expr, Func, NamedConst};
pub use extrema::{sampled_extrema, SAMPLES_PER_CELL};

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::time_scale::{CellPart, TimeScale};

/// Points per continuum run used by validation and sign checks.
pub const VALIDATION_GRID: usize = 513;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Monotone {
    Increasing,
    Decreasing,
}

impl Monotone {
    fn flip(self) -> Self {
        match self {
            Monotone::Increasing => Monotone::Decreasing,
            Monotone::Decreasing => Monotone::Increasing,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignClass {
    /// Lower endpoint nonnegative.
    Positive,
    /// Upper endpoint nonpositive.
    Negative,
}

#[derive(Debug, Clone, PartialEq)]
pub enum PieceValue {
    Pair { lo: Expr, hi: Expr },
    /// Takes `rational` on rational arguments and `irrational` elsewhere.
    /// Every binary64 argument is rational, so pointwise evaluation returns
    /// the rational branch; envelopes over non-degenerate real cells cover
    /// both branches.
    Dirichlet { rational: (Expr, Expr), irrational: (Expr, Expr) },
}

impl PieceValue {
    fn map(&self, f: impl Fn(&Expr, &Expr) -> (Expr, Expr)) -> PieceValue {
        match self {
            PieceValue::Pair { lo, hi } => {
                let (lo, hi) = f(lo, hi);
                PieceValue::Pair { lo, hi }
            }
            PieceValue::Dirichlet { rational, irrational } => PieceValue::Dirichlet {
                rational: f(&rational.0, &rational.1),
                irrational: f(&irrational.0, &irrational.1),
            },
        }
    }

    fn zip(&self, other: &PieceValue, f: impl Fn((&Expr, &Expr), (&Expr, &Expr)) -> (Expr, Expr)) -> PieceValue {
        use PieceValue::*;
        match (self, other) {
            (Pair { lo, hi }, Pair { lo: l2, hi: h2 }) => {
                let (lo, hi) = f((lo, hi), (l2, h2));
                Pair { lo, hi }
            }
            (Dirichlet { rational, irrational }, Pair { lo, hi }) => Dirichlet {
                rational: f((&rational.0, &rational.1), (lo, hi)),
                irrational: f((&irrational.0, &irrational.1), (lo, hi)),
            },
            (Pair { lo, hi }, Dirichlet { rational, irrational }) => Dirichlet {
                rational: f((lo, hi), (&rational.0, &rational.1)),
                irrational: f((lo, hi), (&irrational.0, &irrational.1)),
            },
            (Dirichlet { rational: r1, irrational: i1 }, Dirichlet { rational: r2, irrational: i2 }) => {
                Dirichlet {
                    rational: f((&r1.0, &r1.1), (&r2.0, &r2.1)),
                    irrational: f((&i1.0, &i1.1), (&i2.0, &i2.1)),
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Piece {
    cond: Cond,
    value: PieceValue,
    continuous: bool,
    lo_dir: Option<Monotone>,
    hi_dir: Option<Monotone>,
    key: Vec<u32>,
}

impl Piece {
    pub fn new(cond: Cond, lo: Expr, hi: Expr) -> Self {
        Self {
            cond,
            value: PieceValue::Pair { lo, hi },
            continuous: true,
            lo_dir: None,
            hi_dir: None,
            key: Vec::new(),
        }
    }

    pub fn dirichlet(cond: Cond, rational: (Expr, Expr), irrational: (Expr, Expr)) -> Self {
        Self {
            cond,
            value: PieceValue::Dirichlet { rational, irrational },
            continuous: false,
            lo_dir: None,
            hi_dir: None,
            key: Vec::new(),
        }
    }

    /// Declares the endpoint expressions monotone on the piece's domain, so
    /// envelopes use endpoint values instead of sampling.
    pub fn with_monotone(mut self, lo: Option<Monotone>, hi: Option<Monotone>) -> Self {
        self.lo_dir = lo;
        self.hi_dir = hi;
        self
    }

    pub fn with_continuous(mut self, continuous: bool) -> Self {
        self.continuous = continuous;
        self
    }

    pub fn cond(&self) -> &Cond {
        &self.cond
    }

    pub fn value(&self) -> &PieceValue {
        &self.value
    }

    pub fn is_continuous(&self) -> bool {
        self.continuous && matches!(self.value, PieceValue::Pair { .. })
    }

    pub(crate) fn pair(&self) -> Option<(&Expr, &Expr)> {
        match &self.value {
            PieceValue::Pair { lo, hi } => Some((lo, hi)),
            PieceValue::Dirichlet { .. } => None,
        }
    }

    fn endpoints_at(&self, t: f64) -> Result<(f64, f64)> {
        let (lo, hi) = match &self.value {
            PieceValue::Pair { lo, hi } => (lo, hi),
            PieceValue::Dirichlet { rational, .. } => (&rational.0, &rational.1),
        };
        let ev = |e: &Expr| e.eval(t).map_err(|message| Error::Eval { t, message });
        Ok((ev(lo)?, ev(hi)?))
    }

    /// `(inf lo, sup hi)` over the closed interval `[x, y]`, limits included.
    fn range(&self, x: f64, y: f64) -> Result<(f64, f64)> {
        match &self.value {
            PieceValue::Pair { lo, hi } => Ok((
                expr_extremum(lo, self.lo_dir, x, y, false)?,
                expr_extremum(hi, self.hi_dir, x, y, true)?,
            )),
            PieceValue::Dirichlet { rational, irrational } => {
                let m = expr_extremum(&rational.0, None, x, y, false)?
                    .min(expr_extremum(&irrational.0, None, x, y, false)?);
                let mm = expr_extremum(&rational.1, None, x, y, true)?
                    .max(expr_extremum(&irrational.1, None, x, y, true)?);
                Ok((m, mm))
            }
        }
    }
}

fn expr_extremum(e: &Expr, dir: Option<Monotone>, x: f64, y: f64, maximize: bool) -> Result<f64> {
    let ev = |t: f64| e.eval(t).map_err(|message| Error::Eval { t, message });
    if let Some(c) = e.constant_value() {
        return Ok(c);
    }
    if let Some(dir) = dir {
        let at_max = match (dir, maximize) {
            (Monotone::Increasing, true) | (Monotone::Decreasing, false) => y,
            _ => x,
        };
        return ev(at_max);
    }
    let (lo, hi) = sampled_extrema(ev, x, y)?;
    Ok(if maximize { hi } else { lo })
}

/// Piece of a transparent function governing an open sub-interval.
#[derive(Debug, Clone, Copy)]
pub(crate) struct SubSegment<'a> {
    pub start: f64,
    pub end: f64,
    pub piece: &'a Piece,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntervalFn {
    pieces: Vec<Piece>,
}

impl IntervalFn {
    /// Single piece `[lo(t), hi(t)]` valid everywhere.
    pub fn new(lo: Expr, hi: Expr) -> Self {
        Self::piecewise(vec![Piece::new(Cond::Always, lo, hi)])
    }

    pub fn constant(lo: f64, hi: f64) -> Self {
        Self::new(Expr::Num(lo), Expr::Num(hi))
    }

    pub fn degenerate(e: Expr) -> Self {
        Self::new(e.clone(), e)
    }

    /// Dirichlet-type function taking `rational` on rationals and
    /// `irrational` elsewhere, with constant branches.
    pub fn dirichlet(rational: (f64, f64), irrational: (f64, f64)) -> Self {
        Self::piecewise(vec![Piece::dirichlet(
            Cond::Always,
            (Expr::Num(rational.0), Expr::Num(rational.1)),
            (Expr::Num(irrational.0), Expr::Num(irrational.1)),
        )])
    }

    /// Pieces in source order; later pieces win ties, point conditions win
    /// over interval conditions.
    pub fn piecewise(mut pieces: Vec<Piece>) -> Self {
        for (i, p) in pieces.iter_mut().enumerate() {
            p.key = vec![p.cond.is_point() as u32, i as u32];
        }
        Self { pieces }
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    /// Every piece declared continuous and none of Dirichlet type.
    pub fn is_continuous(&self) -> bool {
        self.pieces.iter().all(Piece::is_continuous)
    }

    /// Marks every plain piece continuous (used once continuity has been
    /// established by other means, e.g. interval convexity).
    pub fn mark_continuous(mut self) -> Self {
        for p in &mut self.pieces {
            if matches!(p.value, PieceValue::Pair { .. }) {
                p.continuous = true;
            }
        }
        self
    }

    pub fn is_transparent(&self) -> bool {
        self.pieces.iter().all(|p| p.cond.is_transparent())
    }

    pub fn governing(&self, t: f64) -> Result<&Piece> {
        let mut best: Option<&Piece> = None;
        for p in &self.pieces {
            let hit = p.cond.holds(t).map_err(|message| Error::Eval { t, message })?;
            if hit && best.is_none_or(|b| p.key > b.key) {
                best = Some(p);
            }
        }
        best.ok_or(Error::DomainCoverage(t))
    }

    pub fn eval(&self, t: f64) -> Result<Interval> {
        let (lo, hi) = self.governing(t)?.endpoints_at(t)?;
        if lo > hi {
            return Err(Error::InvertedInterval { t, lo, hi });
        }
        Ok(Interval::new(lo, hi))
    }

    fn interior_piece(&self, x: f64, y: f64) -> Result<&Piece> {
        let m = 0.5 * (x + y);
        let mut best: Option<&Piece> = None;
        for p in self.pieces.iter().filter(|p| !p.cond.is_point()) {
            let hit = p.cond.holds(m).map_err(|message| Error::Eval { t: m, message })?;
            if hit && best.is_none_or(|b| p.key > b.key) {
                best = Some(p);
            }
        }
        best.ok_or(Error::DomainCoverage(m))
    }

    fn breakpoints_in(&self, x: f64, y: f64) -> Vec<f64> {
        let mut bps = Vec::new();
        for p in &self.pieces {
            p.cond.breakpoints(&mut bps);
        }
        bps.retain(|&b| x < b && b < y);
        bps.sort_by(f64::total_cmp);
        bps.dedup();
        bps
    }

    /// Splits `[x, y]` at piece breakpoints and names the piece governing
    /// each open part. `None` for functions whose conditions are not plain
    /// comparisons of the variable.
    pub(crate) fn sub_segments(&self, x: f64, y: f64) -> Result<Option<Vec<SubSegment<'_>>>> {
        if !self.is_transparent() {
            return Ok(None);
        }
        let mut nodes = vec![x];
        nodes.extend(self.breakpoints_in(x, y));
        nodes.push(y);
        let mut out = Vec::with_capacity(nodes.len() - 1);
        for w in nodes.windows(2) {
            out.push(SubSegment { start: w[0], end: w[1], piece: self.interior_piece(w[0], w[1])? });
        }
        Ok(Some(out))
    }

    /// `(inf f_lo, sup f_hi)` over the time-scale cell `[c, d)_T`.
    pub fn envelope(&self, scale: &TimeScale, c: f64, d: f64) -> Result<(f64, f64)> {
        let parts = scale.cell_parts(c, d);
        if parts.is_empty() {
            return Err(Error::EmptyRange { a: c, b: d });
        }
        let mut m = f64::INFINITY;
        let mut big_m = f64::NEG_INFINITY;
        let mut take = |lo: f64, hi: f64| {
            m = m.min(lo);
            big_m = big_m.max(hi);
        };
        for part in parts {
            match part {
                CellPart::Point(p) => {
                    let v = self.eval(p)?;
                    take(v.lo(), v.hi());
                }
                CellPart::Continuum { lo, hi, includes_hi } => {
                    let (a, b) = self.continuum_envelope(lo, hi, includes_hi)?;
                    take(a, b);
                }
            }
        }
        Ok((m, big_m))
    }

    fn continuum_envelope(&self, lo: f64, hi: f64, includes_hi: bool) -> Result<(f64, f64)> {
        let mut m = f64::INFINITY;
        let mut big_m = f64::NEG_INFINITY;
        match self.sub_segments(lo, hi)? {
            Some(subs) => {
                let mut members = vec![lo];
                for s in &subs {
                    let (a, b) = s.piece.range(s.start, s.end)?;
                    m = m.min(a);
                    big_m = big_m.max(b);
                    if s.start > lo {
                        members.push(s.start);
                    }
                }
                if includes_hi {
                    members.push(hi);
                }
                for p in self.pieces.iter().filter(|p| p.cond.is_point()) {
                    p.cond.point_locations(lo, hi, &mut members);
                }
                for t in members {
                    if t == hi && !includes_hi {
                        continue;
                    }
                    let v = self.eval(t)?;
                    m = m.min(v.lo());
                    big_m = big_m.max(v.hi());
                }
            }
            None => {
                let (a, _) = sampled_extrema(|t| Ok(self.eval(t)?.lo()), lo, hi)?;
                let (_, b) = sampled_extrema(|t| Ok(self.eval(t)?.hi()), lo, hi)?;
                m = a;
                big_m = b;
            }
        }
        Ok((m, big_m))
    }

    /// Checks coverage and `lo ≤ hi` on the validation grid of `[a, b]_T`.
    pub fn validate(&self, scale: &TimeScale, a: f64, b: f64) -> Result<()> {
        for t in scale.sample_grid(a, b, VALIDATION_GRID)? {
            self.eval(t)?;
        }
        Ok(())
    }

    /// Checks the sign class on the validation grid of `[a, b]_T`
    /// (closure of the class: `lo ≥ 0` or `hi ≤ 0`).
    pub fn check_sign(&self, scale: &TimeScale, a: f64, b: f64, sign: SignClass) -> Result<()> {
        for t in scale.sample_grid(a, b, VALIDATION_GRID)? {
            let v = self.eval(t)?;
            let ok = match sign {
                SignClass::Positive => v.lo() >= 0.0,
                SignClass::Negative => v.hi() <= 0.0,
            };
            if !ok {
                return Err(Error::SignPrecondition(format!(
                    "f({t}) = {v} is not {}",
                    match sign {
                        SignClass::Positive => "nonnegative",
                        SignClass::Negative => "nonpositive",
                    }
                )));
            }
        }
        Ok(())
    }

    fn map_pieces(&self, f: impl Fn(&Piece) -> Piece) -> Self {
        Self { pieces: self.pieces.iter().map(f).collect() }
    }

    fn zip_pieces(&self, other: &IntervalFn, f: impl Fn(&Piece, &Piece) -> Piece) -> Self {
        let mut pieces = Vec::with_capacity(self.pieces.len() * other.pieces.len());
        for p in &self.pieces {
            for q in &other.pieces {
                let mut r = f(p, q);
                r.cond = p.cond.clone().and(q.cond.clone());
                r.continuous = p.continuous && q.continuous;
                r.key = p.key.iter().chain(&q.key).copied().collect();
                pieces.push(r);
            }
        }
        Self { pieces }
    }

    /// `λ · f` with the sign rule applied pointwise.
    pub fn scale(&self, lambda: f64) -> Self {
        self.map_pieces(|p| {
            let mut q = p.clone();
            if lambda > 0.0 {
                q.value = p.value.map(|lo, hi| (lambda * lo.clone(), lambda * hi.clone()));
            } else if lambda == 0.0 {
                q.value = p.value.map(|_, _| (Expr::Num(0.0), Expr::Num(0.0)));
                q.lo_dir = None;
                q.hi_dir = None;
            } else {
                q.value = p.value.map(|lo, hi| (lambda * hi.clone(), lambda * lo.clone()));
                q.lo_dir = p.hi_dir.map(Monotone::flip);
                q.hi_dir = p.lo_dir.map(Monotone::flip);
            }
            q
        })
    }

    pub fn add(&self, other: &IntervalFn) -> Self {
        self.zip_pieces(other, |p, q| {
            let mut r = p.clone();
            r.value = p.value.zip(&q.value, |(l1, h1), (l2, h2)| {
                (l1.clone() + l2.clone(), h1.clone() + h2.clone())
            });
            r.lo_dir = if p.lo_dir == q.lo_dir { p.lo_dir } else { None };
            r.hi_dir = if p.hi_dir == q.hi_dir { p.hi_dir } else { None };
            r
        })
    }

    /// Pointwise interval product `[min of the four endpoint products, max …]`.
    pub fn product(&self, other: &IntervalFn) -> Self {
        self.zip_pieces(other, |p, q| {
            let mut r = p.clone();
            r.value = p.value.zip(&q.value, |(l1, h1), (l2, h2)| {
                let prods = [
                    l1.clone() * l2.clone(),
                    l1.clone() * h2.clone(),
                    h1.clone() * l2.clone(),
                    h1.clone() * h2.clone(),
                ];
                let lo = prods.iter().cloned().reduce(Expr::min).unwrap();
                let hi = prods.into_iter().reduce(Expr::max).unwrap();
                (lo, hi)
            });
            r.lo_dir = None;
            r.hi_dir = None;
            r
        })
    }

    /// Product for operands of a known common sign class (see
    /// [`IntervalFn::check_sign`]); avoids the four-way min/max.
    pub fn product_signed(&self, other: &IntervalFn, sign: SignClass) -> Self {
        self.zip_pieces(other, |p, q| {
            let mut r = p.clone();
            r.value = p.value.zip(&q.value, |(l1, h1), (l2, h2)| match sign {
                SignClass::Positive => (l1.clone() * l2.clone(), h1.clone() * h2.clone()),
                SignClass::Negative => (h1.clone() * h2.clone(), l1.clone() * l2.clone()),
            });
            r.lo_dir = None;
            r.hi_dir = None;
            r
        })
    }

    /// Pointwise `f^p` for `p > 0`: monotone for odd integers and for
    /// fractional powers (which need `lo ≥ 0` at evaluation time), by cases
    /// for even integers.
    pub fn power(&self, p: f64) -> Result<Self> {
        if !(p > 0.0) || !p.is_finite() {
            return Err(Error::Exponent(format!("power needs a finite p > 0, got {p}")));
        }
        let even = p.fract() == 0.0 && (p as i64) % 2 == 0;
        Ok(self.map_pieces(|piece| {
            let mut q = piece.clone();
            q.value = piece.value.map(|lo, hi| {
                if even {
                    let inner = Expr::num(0.0).max(lo.clone()).max(-hi.clone());
                    let outer = lo.clone().abs().max(hi.clone().abs());
                    (inner.powf(p), outer.powf(p))
                } else {
                    (lo.clone().powf(p), hi.clone().powf(p))
                }
            });
            q.lo_dir = None;
            q.hi_dir = None;
            q
        }))
    }

    /// `f^p` for a function of known sign class; for [`SignClass::Negative`]
    /// `p` must be an even integer.
    pub fn power_signed(&self, p: f64, sign: SignClass) -> Result<Self> {
        if !(p > 0.0) || !p.is_finite() {
            return Err(Error::Exponent(format!("power needs a finite p > 0, got {p}")));
        }
        if sign == SignClass::Negative && !(p.fract() == 0.0 && (p as i64) % 2 == 0) {
            return Err(Error::Exponent(format!("power of a negative function needs an even integer p, got {p}")));
        }
        Ok(self.map_pieces(|piece| {
            let mut q = piece.clone();
            q.value = piece.value.map(|lo, hi| match sign {
                SignClass::Positive => (lo.clone().powf(p), hi.clone().powf(p)),
                SignClass::Negative => (hi.clone().powf(p), lo.clone().powf(p)),
            });
            q.lo_dir = None;
            q.hi_dir = None;
            q
        }))
    }

    /// `s ↦ f(g(s))`.
    pub fn compose(&self, g: &Expr) -> Self {
        self.map_pieces(|p| {
            let mut q = p.clone();
            q.cond = p.cond.substitute(g);
            q.value = p.value.map(|lo, hi| (lo.substitute(g), hi.substitute(g)));
            q.lo_dir = None;
            q.hi_dir = None;
            q
        })
    }

    /// `s ↦ |h(s)| · f(g(s))`.
    pub fn weight_compose(h: &Expr, f: &IntervalFn, g: &Expr) -> Self {
        let w = h.clone().abs();
        f.compose(g).map_pieces(|p| {
            let mut q = p.clone();
            q.value = p.value.map(|lo, hi| (w.clone() * lo.clone(), w.clone() * hi.clone()));
            q
        })
    }

    /// `s ↦ |h(s)| · f(s)`.
    pub fn weighted(&self, h: &Expr) -> Self {
        Self::weight_compose(h, self, &Expr::Var)
    }

    /// The lower endpoint function as a degenerate interval function.
    pub fn lower(&self) -> RealFn {
        RealFn(self.map_pieces(|p| {
            let mut q = p.clone();
            q.value = p.value.map(|lo, _| (lo.clone(), lo.clone()));
            q.hi_dir = p.lo_dir;
            q
        }))
    }

    pub fn upper(&self) -> RealFn {
        RealFn(self.map_pieces(|p| {
            let mut q = p.clone();
            q.value = p.value.map(|_, hi| (hi.clone(), hi.clone()));
            q.lo_dir = p.hi_dir;
            q
        }))
    }
}

/// A real-valued function, stored as a degenerate [`IntervalFn`].
#[derive(Debug, Clone, PartialEq)]
pub struct RealFn(IntervalFn);

impl RealFn {
    pub fn new(e: Expr) -> Self {
        RealFn(IntervalFn::degenerate(e))
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        Ok(self.0.eval(t)?.lo())
    }

    pub fn as_interval_fn(&self) -> &IntervalFn {
        &self.0
    }

    pub fn compose(&self, g: &Expr) -> Self {
        RealFn(self.0.compose(g))
    }

    pub fn neg(&self) -> Self {
        RealFn(self.0.scale(-1.0))
    }

    /// Applies `op` to the expression of every piece.
    pub fn map(&self, op: impl Fn(Expr) -> Expr) -> Self {
        RealFn(self.0.map_pieces(|p| {
            let mut q = p.clone();
            q.value = p.value.map(|lo, hi| (op(lo.clone()), op(hi.clone())));
            q.lo_dir = None;
            q.hi_dir = None;
            q
        }))
    }

    /// Pointwise combination of two real functions.
    pub fn zip(&self, other: &RealFn, op: impl Fn(Expr, Expr) -> Expr) -> Self {
        RealFn(self.0.zip_pieces(&other.0, |p, q| {
            let mut r = p.clone();
            r.value = p.value.zip(&q.value, |(l1, h1), (l2, h2)| {
                (op(l1.clone(), l2.clone()), op(h1.clone(), h2.clone()))
            });
            r.lo_dir = None;
            r.hi_dir = None;
            r
        }))
    }
}

impl From<Expr> for RealFn {
    fn from(e: Expr) -> Self {
        RealFn::new(e)
    }
}

#[cfg(test)]
mod tests {
    use super::build::*;
    use super::*;
    use crate::time_scale::{Component, TimeScale};

    fn ex4_fn() -> IntervalFn {
        IntervalFn::piecewise(vec![
            Piece::new(
                Cond::cmp(c(-1.0), CmpOp::Le, t()).and(Cond::cmp(t(), CmpOp::Lt, c(0.0))),
                t(),
                t() + 1.0,
            ),
            Piece::new(Cond::cmp(t(), CmpOp::Eq, c(0.0)), c(1.0), c(2.0)),
            Piece::new(Cond::InGeom { arg: t(), q: 3.0 }, t(), t().powf(2.0) + 1.0),
        ])
    }

    #[test]
    fn eval_examples() {
        let f = ex4_fn();
        assert_eq!(f.eval(1.0).unwrap(), Interval::new(1.0, 2.0));
        assert_eq!(f.eval(0.0).unwrap(), Interval::new(1.0, 2.0));
        assert_eq!(f.eval(-0.5).unwrap(), Interval::new(-0.5, 0.5));
        assert!(matches!(f.eval(2.0), Err(Error::DomainCoverage(_))));
        let g = IntervalFn::new(t().powf(2.0), c(4.0) * sqrt(t()));
        assert_eq!(g.eval(1.0).unwrap(), Interval::new(1.0, 4.0));
        assert_eq!(IntervalFn::degenerate(t()).eval(7.0).unwrap(), Interval::point(7.0));
        assert!(matches!(g.eval(-1.0), Err(Error::Eval { .. })));
        let inverted = IntervalFn::new(t(), c(0.0));
        assert!(matches!(inverted.eval(1.0), Err(Error::InvertedInterval { .. })));
    }

    #[test]
    fn equality_piece_wins_regardless_of_order() {
        let f = IntervalFn::piecewise(vec![
            Piece::new(Cond::cmp(t(), CmpOp::Eq, c(0.0)), c(1.0), c(2.0)),
            Piece::new(Cond::cmp(t(), CmpOp::Le, c(0.0)), t(), t() + 1.0),
        ]);
        assert_eq!(f.eval(0.0).unwrap(), Interval::new(1.0, 2.0));
        assert_eq!(f.eval(-1.0).unwrap(), Interval::new(-1.0, 0.0));
    }

    #[test]
    fn envelope_examples() {
        let unit = TimeScale::segment(0.0, 1.0).unwrap();
        let d = IntervalFn::dirichlet((-1.0, 0.0), (1.0, 2.0));
        assert_eq!(d.envelope(&unit, 0.0, 1.0).unwrap(), (-1.0, 2.0));
        assert_eq!(d.envelope(&unit, 0.25, 0.5).unwrap(), (-1.0, 2.0));
        let k = IntervalFn::constant(0.5, 3.0);
        assert_eq!(k.envelope(&unit, 0.1, 0.7).unwrap(), (0.5, 3.0));
        let lin = IntervalFn::new(t(), t() + 1.0);
        assert_eq!(lin.envelope(&unit, 0.0, 1.0).unwrap(), (0.0, 2.0));
    }

    #[test]
    fn envelope_on_scattered_cell_is_point_value() {
        let ts = TimeScale::points(&[0.0, 1.0 / 3.0, 0.5, 1.0]).unwrap();
        let f = IntervalFn::new(-t(), t());
        assert_eq!(f.envelope(&ts, 1.0 / 3.0, 0.5).unwrap(), (-1.0 / 3.0, 1.0 / 3.0));
    }

    #[test]
    fn envelope_sees_isolated_point_pieces() {
        let unit = TimeScale::segment(0.0, 1.0).unwrap();
        let f = IntervalFn::piecewise(vec![
            Piece::new(Cond::Always, c(0.0), c(1.0)),
            Piece::new(Cond::cmp(t(), CmpOp::Eq, c(0.3)), c(-5.0), c(9.0)),
        ]);
        assert_eq!(f.envelope(&unit, 0.0, 0.5).unwrap(), (-5.0, 9.0));
        assert_eq!(f.envelope(&unit, 0.5, 1.0).unwrap(), (0.0, 1.0));
    }

    #[test]
    fn envelope_uses_left_limit_at_jump() {
        // [-1,0] u {1, 3}; the piece at t == 0 is a point of the cell [-0.5, 0.5)
        let ts = TimeScale::new(vec![Component::segment(-1.0, 0.0), Component::points(&[1.0, 3.0])]).unwrap();
        let f = ex4_fn();
        let (m, big_m) = f.envelope(&ts, -0.5, 1.0).unwrap();
        assert_eq!(m, -0.5);
        assert_eq!(big_m, 2.0);
        let (m, big_m) = f.envelope(&ts, -1.0, -0.5).unwrap();
        assert_eq!((m, big_m), (-1.0, 0.5));
    }

    #[test]
    fn monotone_declared_envelope_is_exact() {
        let unit = TimeScale::segment(0.0, 1.0).unwrap();
        let f = IntervalFn::piecewise(vec![Piece::new(Cond::Always, exp(t()), exp(t()) + 1.0)
            .with_monotone(Some(Monotone::Increasing), Some(Monotone::Increasing))]);
        let (m, big_m) = f.envelope(&unit, 0.25, 0.75).unwrap();
        assert_eq!(m, 0.25f64.exp());
        assert_eq!(big_m, 0.75f64.exp() + 1.0);
    }

    #[test]
    fn algebra_matches_interval_arithmetic() {
        let f = IntervalFn::new(t(), t() + 1.0);
        let g = IntervalFn::new(sin(t()), t());
        let fg = f.product(&g);
        for &s in &[0.1, 0.5, 1.0, 1.5] {
            assert_eq!(fg.eval(s).unwrap(), Interval::new(s * s.sin(), s * s + s));
            assert_eq!(fg.eval(s).unwrap(), f.eval(s).unwrap() * g.eval(s).unwrap());
        }
        let zero = IntervalFn::constant(0.0, 0.0);
        assert_eq!(f.add(&zero).eval(0.7).unwrap(), f.eval(0.7).unwrap());
        let sq = IntervalFn::new(t(), c(2.0) * t()).power(2.0).unwrap();
        assert_eq!(sq.eval(1.0).unwrap(), Interval::new(1.0, 4.0));
        let neg = IntervalFn::new(-t() - 1.0, -t());
        assert_eq!(neg.power(2.0).unwrap().eval(1.0).unwrap(), Interval::new(1.0, 4.0));
        assert_eq!(neg.scale(-2.0).eval(1.0).unwrap(), Interval::new(2.0, 4.0));
        assert!(f.power(0.0).is_err());
    }

    #[test]
    fn weight_compose_example5() {
        let f = IntervalFn::new(t().powf(2.0), c(4.0) * sqrt(t()));
        let w = IntervalFn::weight_compose(&exp(t()), &f, &t().powf(2.0));
        for &s in &[0.0, 0.3, 1.0, 1.5] {
            let v = w.eval(s).unwrap();
            assert!((v.lo() - s.powi(4) * s.exp()).abs() < 1e-12);
            assert!((v.hi() - 4.0 * s * s.exp()).abs() < 1e-12);
        }
    }

    #[test]
    fn sum_of_dirichlet_functions() {
        let f = IntervalFn::dirichlet((-1.0, 0.0), (1.0, 2.0));
        let g = IntervalFn::dirichlet((0.0, 1.0), (-2.0, -1.0));
        let unit = TimeScale::segment(0.0, 1.0).unwrap();
        assert_eq!(f.add(&g).envelope(&unit, 0.0, 1.0).unwrap(), (-1.0, 1.0));
        assert!(!f.is_continuous());
    }

    #[test]
    fn piecewise_sum_selects_per_operand() {
        let f = ex4_fn();
        let g = IntervalFn::piecewise(vec![
            Piece::new(Cond::Always, c(10.0), c(10.0)),
            Piece::new(Cond::cmp(t(), CmpOp::Ge, c(1.0)), c(100.0), c(100.0)),
        ]);
        let s = f.add(&g);
        for &x in &[-1.0, -0.5, 0.0, 1.0, 3.0] {
            assert_eq!(s.eval(x).unwrap(), f.eval(x).unwrap() + g.eval(x).unwrap());
        }
    }

    #[test]
    fn sign_checks() {
        let ts = TimeScale::segment(0.0, 2.0).unwrap();
        assert!(IntervalFn::new(t(), t() + 1.0).check_sign(&ts, 0.0, 2.0, SignClass::Positive).is_ok());
        assert!(matches!(
            IntervalFn::new(t() - 1.0, t()).check_sign(&ts, 0.0, 2.0, SignClass::Positive),
            Err(Error::SignPrecondition(_))
        ));
        assert!(IntervalFn::new(-t() - 1.0, -t()).check_sign(&ts, 0.0, 2.0, SignClass::Negative).is_ok());
    }
}
