//! Closed bounded real intervals `[lo, hi]` with endpoint arithmetic, the
//! componentwise order, inclusion, and the Hausdorff–Pompeiu distance.
//!
//! Arithmetic is plain binary64 without directed rounding. Degenerate
//! intervals `[x, x]` are ordinary values; `{0}` is `[0, 0]`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub const ZERO: Interval = Interval { lo: 0.0, hi: 0.0 };

    /// Panics if `lo > hi` or either endpoint is not finite.
    pub fn new(lo: f64, hi: f64) -> Self {
        Self::try_new(lo, hi).unwrap_or_else(|e| panic!("{e}"))
    }

    pub fn try_new(lo: f64, hi: f64) -> Result<Self> {
        if !lo.is_finite() || !hi.is_finite() {
            return Err(Error::Domain(format!("non-finite endpoint in [{lo}, {hi}]")));
        }
        if lo > hi {
            return Err(Error::Domain(format!("inverted interval [{lo}, {hi}]")));
        }
        Ok(Self { lo, hi })
    }

    pub fn point(x: f64) -> Self {
        Self::new(x, x)
    }

    #[inline]
    pub fn lo(&self) -> f64 {
        self.lo
    }

    #[inline]
    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn is_degenerate(&self) -> bool {
        self.lo == self.hi
    }

    pub fn is_positive(&self) -> bool {
        self.lo > 0.0
    }

    pub fn is_negative(&self) -> bool {
        self.hi < 0.0
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    /// Scalar multiple with the three-case sign rule; `0 · a = [0, 0]`.
    pub fn scale(&self, lambda: f64) -> Self {
        if lambda > 0.0 {
            Self { lo: lambda * self.lo, hi: lambda * self.hi }
        } else if lambda == 0.0 {
            Self::ZERO
        } else {
            Self { lo: lambda * self.hi, hi: lambda * self.lo }
        }
    }

    pub fn checked_div(&self, rhs: Interval) -> Result<Self> {
        if rhs.lo <= 0.0 && 0.0 <= rhs.hi {
            return Err(Error::DivisionByIntervalContainingZero(rhs));
        }
        let q = [
            self.lo / rhs.lo,
            self.lo / rhs.hi,
            self.hi / rhs.lo,
            self.hi / rhs.hi,
        ];
        Ok(Self::hull_of(&q))
    }

    /// Range of `x ↦ x^p` over the interval.
    ///
    /// Integer exponents accept any sign (exact by monotone cases); a
    /// fractional exponent needs `lo ≥ 0`, and a negative exponent needs
    /// zero outside the interval.
    pub fn pow(&self, p: f64) -> Result<Self> {
        if !p.is_finite() {
            return Err(Error::Domain(format!("non-finite exponent {p}")));
        }
        if p == 0.0 {
            return Ok(Self::point(1.0));
        }
        if p < 0.0 {
            if self.contains(0.0) {
                return Err(Error::Domain(format!(
                    "negative exponent {p} on interval {self} containing zero"
                )));
            }
            return Self::point(1.0).checked_div(self.pow(-p)?);
        }
        if p.fract() == 0.0 && p <= i32::MAX as f64 {
            let n = p as i32;
            let (l, h) = (self.lo.powi(n), self.hi.powi(n));
            let r = if n % 2 == 1 || self.lo >= 0.0 {
                Self { lo: l, hi: h }
            } else if self.hi <= 0.0 {
                Self { lo: h, hi: l }
            } else {
                Self { lo: 0.0, hi: l.max(h) }
            };
            return Ok(r);
        }
        if self.lo < 0.0 {
            return Err(Error::Domain(format!(
                "fractional exponent {p} on interval {self} with negative values"
            )));
        }
        if p == 0.5 {
            return Ok(Self { lo: self.lo.sqrt(), hi: self.hi.sqrt() });
        }
        Ok(Self { lo: self.lo.powf(p), hi: self.hi.powf(p) })
    }

    /// Componentwise order: `lo ≤ lo'` and `hi ≤ hi'`.
    pub fn leq(&self, other: &Interval) -> bool {
        self.lo <= other.lo && self.hi <= other.hi
    }

    pub fn subset(&self, other: &Interval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn hausdorff_dist(&self, other: &Interval) -> f64 {
        (self.lo - other.lo).abs().max((self.hi - other.hi).abs())
    }

    pub fn hull(&self, other: &Interval) -> Self {
        Self { lo: self.lo.min(other.lo), hi: self.hi.max(other.hi) }
    }

    fn hull_of(xs: &[f64; 4]) -> Self {
        let lo = xs.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Self { lo, hi }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

impl Add for Interval {
    type Output = Interval;
    fn add(self, rhs: Interval) -> Interval {
        Interval { lo: self.lo + rhs.lo, hi: self.hi + rhs.hi }
    }
}

impl Sub for Interval {
    type Output = Interval;
    fn sub(self, rhs: Interval) -> Interval {
        Interval { lo: self.lo - rhs.hi, hi: self.hi - rhs.lo }
    }
}

impl Mul for Interval {
    type Output = Interval;
    fn mul(self, rhs: Interval) -> Interval {
        Interval::hull_of(&[
            self.lo * rhs.lo,
            self.lo * rhs.hi,
            self.hi * rhs.lo,
            self.hi * rhs.hi,
        ])
    }
}

impl Mul<Interval> for f64 {
    type Output = Interval;
    fn mul(self, rhs: Interval) -> Interval {
        rhs.scale(self)
    }
}

impl Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval { lo: -self.hi, hi: -self.lo }
    }
}
