//! Compact time scales: finite unions of closed real segments and isolated
//! points, with the forward/backward jump operators and graininess.
//!
//! Queries snap their argument to the nearest stored member when it lies
//! within the membership tolerance, so `1/3` typed as a decimal still finds
//! the stored point.

use std::fmt;

use crate::error::{Error, Result};

/// Default absolute membership tolerance (scaled by `max(1, |t|)`).
pub const DEFAULT_MEMBERSHIP_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub enum Component {
    Segment { start: f64, end: f64 },
    Points(Vec<f64>),
}

impl Component {
    pub fn segment(start: f64, end: f64) -> Self {
        Component::Segment { start, end }
    }

    pub fn points(points: &[f64]) -> Self {
        Component::Points(points.to_vec())
    }

    /// `{from, from + h, …}` up to `to`, expanded eagerly.
    pub fn hgrid(h: f64, from: f64, to: f64) -> Result<Self> {
        if !(h > 0.0) || !from.is_finite() || !to.is_finite() || to < from {
            return Err(Error::InvalidScale(format!("bad hgrid({h}, {from}, {to})")));
        }
        let n = ((to - from) / h + 1e-9).floor();
        if n > 1e7 {
            return Err(Error::InvalidScale(format!("hgrid({h}, {from}, {to}) too large")));
        }
        let pts = (0..=n as u64).map(|k| from + k as f64 * h).collect();
        Ok(Component::Points(pts))
    }

    /// `{q^k : k ∈ ℤ} ∩ [from, to]`, expanded eagerly.
    pub fn geom(q: f64, from: f64, to: f64) -> Result<Self> {
        if !(q > 1.0) || !(from > 0.0) || !to.is_finite() || to < from {
            return Err(Error::InvalidScale(format!("bad geom({q}, {from}, {to})")));
        }
        let tol = |x: f64| DEFAULT_MEMBERSHIP_TOL * x.abs().max(1.0);
        let mut k = (from.ln() / q.ln()).floor() as i32 - 1;
        let mut pts = Vec::new();
        loop {
            let x = q.powi(k);
            if x > to + tol(to) {
                break;
            }
            if x >= from - tol(from) {
                pts.push(x);
            }
            k += 1;
            if pts.len() > 10_000_000 {
                return Err(Error::InvalidScale("geom expansion too large".into()));
            }
        }
        Ok(Component::Points(pts))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Atom {
    Segment(f64, f64),
    Point(f64),
}

impl Atom {
    fn start(&self) -> f64 {
        match *self {
            Atom::Segment(s, _) => s,
            Atom::Point(p) => p,
        }
    }

    fn end(&self) -> f64 {
        match *self {
            Atom::Segment(_, e) => e,
            Atom::Point(p) => p,
        }
    }
}

/// Right or left character of a point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Scattered,
    Dense,
    /// The point is the maximum (right side) or minimum (left side) of the scale.
    Boundary,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PointClass {
    pub right: Side,
    pub left: Side,
}

/// One element of the decomposition of `[a, b)_T`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Run {
    Segment { start: f64, end: f64 },
    Scattered { t: f64, mu: f64 },
}

impl Run {
    pub fn length(&self) -> f64 {
        match *self {
            Run::Segment { start, end } => end - start,
            Run::Scattered { mu, .. } => mu,
        }
    }
}

/// Members of `T ∩ [c, d)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CellPart {
    /// Continuum part `[lo, hi]`; `hi` itself belongs to the cell only when
    /// `includes_hi`.
    Continuum { lo: f64, hi: f64, includes_hi: bool },
    Point(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimeScale {
    atoms: Vec<Atom>,
    tol: f64,
}

impl TimeScale {
    pub fn new(components: Vec<Component>) -> Result<Self> {
        Self::with_tolerance(components, DEFAULT_MEMBERSHIP_TOL)
    }

    /// Normalizes the components: segments are sorted and touching segments
    /// merged; points on a segment's boundary are dropped; overlapping
    /// segments or points strictly inside a segment are rejected.
    pub fn with_tolerance(components: Vec<Component>, tol: f64) -> Result<Self> {
        let mut segments = Vec::new();
        let mut points = Vec::new();
        for c in components {
            match c {
                Component::Segment { start, end } => {
                    if !start.is_finite() || !end.is_finite() || start >= end {
                        return Err(Error::InvalidScale(format!(
                            "segment [{start}, {end}] must have finite start < end"
                        )));
                    }
                    segments.push((start, end));
                }
                Component::Points(ps) => {
                    for p in ps {
                        if !p.is_finite() {
                            return Err(Error::InvalidScale(format!("non-finite point {p}")));
                        }
                        points.push(p);
                    }
                }
            }
        }
        let near = |x: f64, y: f64| (x - y).abs() <= tol * x.abs().max(y.abs()).max(1.0);

        segments.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut merged: Vec<(f64, f64)> = Vec::new();
        for (s, e) in segments {
            if let Some(last) = merged.last_mut() {
                if near(s, last.1) {
                    last.1 = last.1.max(e);
                    continue;
                }
                if s < last.1 {
                    return Err(Error::InvalidScale(format!(
                        "overlapping segments [{}, {}] and [{s}, {e}]",
                        last.0, last.1
                    )));
                }
            }
            merged.push((s, e));
        }

        points.sort_by(f64::total_cmp);
        points.dedup_by(|a, b| near(*a, *b));

        let mut atoms: Vec<Atom> = merged.iter().map(|&(s, e)| Atom::Segment(s, e)).collect();
        for p in points {
            let mut keep = true;
            for &(s, e) in &merged {
                if near(p, s) || near(p, e) {
                    keep = false;
                    break;
                }
                if s < p && p < e {
                    return Err(Error::InvalidScale(format!(
                        "point {p} lies inside segment [{s}, {e}]"
                    )));
                }
            }
            if keep {
                atoms.push(Atom::Point(p));
            }
        }
        atoms.sort_by(|a, b| a.start().total_cmp(&b.start()));
        if atoms.is_empty() {
            return Err(Error::InvalidScale("time scale is empty".into()));
        }
        Ok(Self { atoms, tol })
    }

    pub fn segment(start: f64, end: f64) -> Result<Self> {
        Self::new(vec![Component::segment(start, end)])
    }

    pub fn points(points: &[f64]) -> Result<Self> {
        Self::new(vec![Component::points(points)])
    }

    pub fn tolerance(&self) -> f64 {
        self.tol
    }

    /// Normalized components; runs of consecutive isolated points are grouped.
    pub fn components(&self) -> Vec<Component> {
        let mut out: Vec<Component> = Vec::new();
        for atom in &self.atoms {
            match *atom {
                Atom::Segment(s, e) => out.push(Component::segment(s, e)),
                Atom::Point(p) => match out.last_mut() {
                    Some(Component::Points(ps)) => ps.push(p),
                    _ => out.push(Component::Points(vec![p])),
                },
            }
        }
        out
    }

    pub fn min(&self) -> f64 {
        self.atoms[0].start()
    }

    pub fn max(&self) -> f64 {
        self.atoms[self.atoms.len() - 1].end()
    }

    /// True when the scale has no continuum part.
    pub fn is_discrete(&self) -> bool {
        self.atoms.iter().all(|a| matches!(a, Atom::Point(_)))
    }

    fn tol_at(&self, t: f64) -> f64 {
        self.tol * t.abs().max(1.0)
    }

    /// Index of the atom containing `t` and the snapped value.
    fn locate(&self, t: f64) -> Option<(usize, f64)> {
        if !t.is_finite() {
            return None;
        }
        let tol = self.tol_at(t);
        // first atom whose end is >= t - tol
        let i = self.atoms.partition_point(|a| a.end() < t - tol);
        for j in i..self.atoms.len().min(i + 2) {
            match self.atoms[j] {
                Atom::Segment(s, e) => {
                    if (t - s).abs() <= tol {
                        return Some((j, s));
                    }
                    if (t - e).abs() <= tol {
                        return Some((j, e));
                    }
                    if s < t && t < e {
                        return Some((j, t));
                    }
                }
                Atom::Point(p) => {
                    if (t - p).abs() <= tol {
                        return Some((j, p));
                    }
                }
            }
        }
        None
    }

    pub fn contains(&self, t: f64) -> bool {
        self.locate(t).is_some()
    }

    /// The stored member within tolerance of `t`, if any.
    pub fn snap(&self, t: f64) -> Option<f64> {
        self.locate(t).map(|(_, s)| s)
    }

    pub fn require(&self, t: f64) -> Result<f64> {
        self.snap(t).ok_or(Error::PointNotInScale(t))
    }

    pub fn sigma(&self, t: f64) -> Result<f64> {
        let (i, t) = self.locate(t).ok_or(Error::PointNotInScale(t))?;
        Ok(self.sigma_at(i, t))
    }

    fn sigma_at(&self, i: usize, t: f64) -> f64 {
        if let Atom::Segment(_, e) = self.atoms[i] {
            if t < e {
                return t;
            }
        }
        self.atoms.get(i + 1).map_or(t, Atom::start)
    }

    pub fn rho(&self, t: f64) -> Result<f64> {
        let (i, t) = self.locate(t).ok_or(Error::PointNotInScale(t))?;
        if let Atom::Segment(s, _) = self.atoms[i] {
            if t > s {
                return Ok(t);
            }
        }
        Ok(if i == 0 { t } else { self.atoms[i - 1].end() })
    }

    pub fn mu(&self, t: f64) -> Result<f64> {
        let (i, t) = self.locate(t).ok_or(Error::PointNotInScale(t))?;
        Ok(self.sigma_at(i, t) - t)
    }

    pub fn eta(&self, t: f64) -> Result<f64> {
        let s = self.require(t)?;
        Ok(s - self.rho(s)?)
    }

    pub fn classify(&self, t: f64) -> Result<PointClass> {
        let s = self.require(t)?;
        let sigma = self.sigma(s)?;
        let rho = self.rho(s)?;
        let right = if sigma > s {
            Side::Scattered
        } else if s < self.max() {
            Side::Dense
        } else {
            Side::Boundary
        };
        let left = if rho < s {
            Side::Scattered
        } else if s > self.min() {
            Side::Dense
        } else {
            Side::Boundary
        };
        Ok(PointClass { right, left })
    }

    /// Snaps both ends and checks `a < b`.
    pub fn window(&self, a: f64, b: f64) -> Result<(f64, f64)> {
        let a = self.require(a)?;
        let b = self.require(b)?;
        if !(a < b) {
            return Err(Error::EmptyRange { a, b });
        }
        Ok((a, b))
    }

    /// Ordered decomposition of `[a, b)_T` into maximal continuum segments
    /// and right-scattered points weighted by their graininess.
    pub fn continuous_runs(&self, a: f64, b: f64) -> Result<Vec<Run>> {
        let (a, b) = self.window(a, b)?;
        let (ia, _) = self.locate(a).expect("snapped");
        let (ib, _) = self.locate(b).expect("snapped");
        let mut runs = Vec::new();
        for i in ia..=ib {
            match self.atoms[i] {
                Atom::Segment(s, e) => {
                    let lo = s.max(a);
                    let hi = e.min(b);
                    if lo < hi {
                        runs.push(Run::Segment { start: lo, end: hi });
                    }
                    if e < b && e >= a {
                        let next = self.atoms[i + 1].start();
                        runs.push(Run::Scattered { t: e, mu: next - e });
                    }
                }
                Atom::Point(p) => {
                    if a <= p && p < b {
                        let next = self.atoms[i + 1].start();
                        runs.push(Run::Scattered { t: p, mu: next - p });
                    }
                }
            }
        }
        Ok(runs)
    }

    /// Members of `[c, d)`; `c` and `d` need not be members.
    pub fn cell_parts(&self, c: f64, d: f64) -> Vec<CellPart> {
        let mut out = Vec::new();
        let i = self.atoms.partition_point(|a| a.end() < c);
        for atom in &self.atoms[i..] {
            if atom.start() >= d {
                break;
            }
            match *atom {
                Atom::Segment(s, e) => {
                    let lo = s.max(c);
                    let hi = e.min(d);
                    if lo < hi {
                        out.push(CellPart::Continuum { lo, hi, includes_hi: hi < d });
                    } else if lo == hi && lo < d {
                        out.push(CellPart::Point(lo));
                    }
                }
                Atom::Point(p) => {
                    if c <= p && p < d {
                        out.push(CellPart::Point(p));
                    }
                }
            }
        }
        out
    }

    /// The member nearest to `t` (ties go left).
    pub fn nearest_member(&self, t: f64) -> f64 {
        let mut best = self.atoms[0].start();
        let mut best_d = f64::INFINITY;
        let i = self.atoms.partition_point(|a| a.end() < t);
        let lo = i.saturating_sub(1);
        for atom in &self.atoms[lo..(i + 1).min(self.atoms.len())] {
            let cand = t.clamp(atom.start(), atom.end());
            let d = (cand - t).abs();
            if d < best_d {
                best = cand;
                best_d = d;
            }
        }
        best
    }

    /// The member of the open interval `(x, y)` nearest to `m`, if any.
    pub fn nearest_in_open(&self, x: f64, y: f64, m: f64) -> Option<f64> {
        let mut best: Option<f64> = None;
        let i = self.atoms.partition_point(|a| a.end() <= x);
        for atom in &self.atoms[i..] {
            if atom.start() >= y {
                break;
            }
            let cand = match *atom {
                Atom::Segment(s, e) => {
                    let lo = s.max(x);
                    let hi = e.min(y);
                    if lo >= hi {
                        continue;
                    }
                    let c = m.clamp(lo, hi);
                    if c <= x || c >= y {
                        continue;
                    }
                    c
                }
                Atom::Point(p) => {
                    if p <= x || p >= y {
                        continue;
                    }
                    p
                }
            };
            match best {
                Some(b) if (b - m).abs() <= (cand - m).abs() => {}
                _ => best = Some(cand),
            }
        }
        best
    }

    /// Isolated points and segment ends in `[a, b]`, plus `per_segment`
    /// evenly spaced samples on each continuum run. Used for validation grids.
    pub fn sample_grid(&self, a: f64, b: f64, per_segment: usize) -> Result<Vec<f64>> {
        let (a, b) = self.window(a, b)?;
        let mut out = Vec::new();
        for run in self.continuous_runs(a, b)? {
            match run {
                Run::Segment { start, end } => {
                    let n = per_segment.max(2) - 1;
                    for k in 0..=n {
                        out.push(if k == n { end } else { start + (end - start) * k as f64 / n as f64 });
                    }
                }
                Run::Scattered { t, .. } => out.push(t),
            }
        }
        out.push(b);
        out.dedup();
        Ok(out)
    }
}

impl fmt::Display for TimeScale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.components().iter().enumerate() {
            if i > 0 {
                f.write_str(" u ")?;
            }
            match c {
                Component::Segment { start, end } => write!(f, "interval({start}, {end})")?,
                Component::Points(ps) => {
                    f.write_str("points(")?;
                    for (j, p) in ps.iter().enumerate() {
                        if j > 0 {
                            f.write_str(", ")?;
                        }
                        write!(f, "{p}")?;
                    }
                    f.write_str(")")?;
                }
            }
        }
        Ok(())
    }
}
