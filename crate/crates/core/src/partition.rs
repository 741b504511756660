//! Divisions of `[a, b]_T`, δ-fine divisions (cells at most δ wide or a single
//! scattered gap), and tagged Riemann Δ-sums.

use crate::error::{Error, Result};
use crate::function::IntervalFn;
use crate::interval::Interval;
use crate::time_scale::{Run, TimeScale};

/// Relative slack allowed when comparing a cell width against `δ`.
const WIDTH_SLACK: f64 = 1e-12;

/// Ordered division points `a = t_0 < t_1 < … < t_n = b`, all in `T`.
#[derive(Debug, Clone, PartialEq)]
pub struct Division {
    points: Vec<f64>,
}

impl Division {
    /// Snaps every point to `T` and checks strict monotonicity.
    pub fn new(scale: &TimeScale, points: &[f64]) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidDivision("a division needs at least two points".into()));
        }
        let mut snapped = Vec::with_capacity(points.len());
        for &p in points {
            snapped.push(scale.require(p)?);
        }
        if let Some(w) = snapped.windows(2).find(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidDivision(format!("points not strictly increasing at {} , {}", w[0], w[1])));
        }
        Ok(Self { points: snapped })
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn start(&self) -> f64 {
        self.points[0]
    }

    pub fn end(&self) -> f64 {
        *self.points.last().unwrap()
    }

    /// Number of cells `n`.
    pub fn len(&self) -> usize {
        self.points.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Cells `(t_{i-1}, t_i)` in order.
    pub fn cells(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.points.windows(2).map(|w| (w[0], w[1]))
    }

    /// Largest cell width.
    pub fn mesh(&self) -> f64 {
        self.cells().map(|(x, y)| y - x).fold(0.0, f64::max)
    }

    /// True when every point of `self` is a point of `other`.
    pub fn is_subset_of(&self, other: &Division) -> bool {
        let mut j = 0;
        for &p in &self.points {
            while j < other.points.len() && other.points[j] < p {
                j += 1;
            }
            if j == other.points.len() || other.points[j] != p {
                return false;
            }
        }
        true
    }
}

/// Builds a division of `[a, b]_T` in which every cell is at most `δ` wide
/// or spans a single scattered gap.
pub fn make_lemma1_division(scale: &TimeScale, a: f64, b: f64, delta: f64) -> Result<Division> {
    if !(delta > 0.0) || !delta.is_finite() {
        return Err(Error::InvalidDivision(format!("δ must be positive and finite, got {delta}")));
    }
    let (a, b) = scale.window(a, b)?;
    let mut points = vec![a];
    for run in scale.continuous_runs(a, b)? {
        match run {
            Run::Segment { start, end } => {
                let len = end - start;
                let mut n = (len / delta).ceil().max(1.0) as usize;
                while len / n as f64 > delta {
                    n += 1;
                }
                for k in 1..n {
                    points.push(start + len * k as f64 / n as f64);
                }
                points.push(end);
            }
            Run::Scattered { t, .. } => points.push(scale.sigma(t)?),
        }
    }
    points.dedup();
    Ok(Division { points })
}

/// True iff `d` is a δ-fine division of `[a, b]_T`: every cell at most `δ`
/// wide or a single scattered gap.
pub fn validate_division(scale: &TimeScale, a: f64, b: f64, d: &Division, delta: f64) -> bool {
    let (Some(a), Some(b)) = (scale.snap(a), scale.snap(b)) else {
        return false;
    };
    let pts = d.points();
    if pts.len() < 2 || pts[0] != a || *pts.last().unwrap() != b {
        return false;
    }
    if pts.iter().any(|&p| scale.snap(p) != Some(p)) {
        return false;
    }
    d.cells().all(|(x, y)| {
        x < y && (y - x <= delta * (1.0 + WIDTH_SLACK) || scale.rho(y).is_ok_and(|r| r == x))
    })
}

/// Splits every cell at its midpoint when the midpoint is in `T`, otherwise
/// at the member of the open cell nearest the midpoint. Cells without
/// interior members are kept.
pub fn refine(scale: &TimeScale, d: &Division) -> Division {
    let mut points = Vec::with_capacity(2 * d.points.len());
    points.push(d.start());
    for (x, y) in d.cells() {
        let m = 0.5 * (x + y);
        let split = match scale.snap(m) {
            Some(s) if x < s && s < y => Some(s),
            _ => scale.nearest_in_open(x, y, m),
        };
        if let Some(s) = split {
            points.push(s);
        }
        points.push(y);
    }
    Division { points }
}

/// A division with one tag per cell, `ξ_i ∈ [t_{i-1}, t_i)_T`.
#[derive(Debug, Clone, PartialEq)]
pub struct TaggedDivision {
    division: Division,
    tags: Vec<f64>,
}

impl TaggedDivision {
    pub fn new(scale: &TimeScale, division: Division, tags: &[f64]) -> Result<Self> {
        if tags.len() != division.len() {
            return Err(Error::InvalidDivision(format!(
                "{} tags for {} cells",
                tags.len(),
                division.len()
            )));
        }
        let mut snapped = Vec::with_capacity(tags.len());
        for ((x, y), &tag) in division.cells().zip(tags) {
            let s = scale.require(tag)?;
            if !(x <= s && s < y) {
                return Err(Error::InvalidDivision(format!("tag {tag} outside cell [{x}, {y})")));
            }
            snapped.push(s);
        }
        Ok(Self { division, tags: snapped })
    }

    /// Left-endpoint tags.
    pub fn left(division: Division) -> Self {
        let tags = division.points[..division.points.len() - 1].to_vec();
        Self { division, tags }
    }

    pub fn division(&self) -> &Division {
        &self.division
    }

    pub fn tags(&self) -> &[f64] {
        &self.tags
    }
}

/// `Σ (t_i − t_{i-1}) · f(ξ_i)`, summed left to right.
pub fn riemann_sum(f: &IntervalFn, td: &TaggedDivision) -> Result<Interval> {
    let mut sum = Interval::ZERO;
    for ((x, y), &xi) in td.division.cells().zip(&td.tags) {
        sum = sum + f.eval(xi)?.scale(y - x);
    }
    Ok(sum)
}
