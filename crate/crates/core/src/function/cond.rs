//! Piece conditions: comparisons of the variable with constants, joined by
//! `and`, plus lattice-membership predicates.

use std::fmt;

use super::expr::Expr;

/// Tolerance for `==` and membership predicates (scaled by `max(1, |x|)`).
pub const COND_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CmpOp {
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
}

impl CmpOp {
    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
            CmpOp::Eq => "==",
        }
    }

    fn apply(self, x: f64, y: f64) -> bool {
        match self {
            CmpOp::Lt => x < y,
            CmpOp::Le => x <= y,
            CmpOp::Gt => x > y,
            CmpOp::Ge => x >= y,
            CmpOp::Eq => (x - y).abs() <= COND_TOL * x.abs().max(y.abs()).max(1.0),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cond {
    Always,
    Cmp { lhs: Expr, op: CmpOp, rhs: Expr },
    /// `arg ∈ {q^k : k = 0, 1, 2, …}`.
    InGeom { arg: Expr, q: f64 },
    /// `arg ∈ hℤ`.
    InGrid { arg: Expr, h: f64 },
    And(Vec<Cond>),
}

impl Cond {
    pub fn cmp(lhs: Expr, op: CmpOp, rhs: Expr) -> Self {
        Cond::Cmp { lhs, op, rhs }
    }

    pub fn holds(&self, t: f64) -> Result<bool, String> {
        Ok(match self {
            Cond::Always => true,
            Cond::Cmp { lhs, op, rhs } => op.apply(lhs.eval(t)?, rhs.eval(t)?),
            Cond::InGeom { arg, q } => {
                let x = arg.eval(t)?;
                if x <= 0.0 {
                    false
                } else {
                    let k = (x.ln() / q.ln()).round();
                    k >= 0.0 && (x - q.powi(k as i32)).abs() <= COND_TOL * x.max(1.0)
                }
            }
            Cond::InGrid { arg, h } => {
                let x = arg.eval(t)?;
                (x - h * (x / h).round()).abs() <= COND_TOL * x.abs().max(1.0)
            }
            Cond::And(cs) => {
                for c in cs {
                    if !c.holds(t)? {
                        return Ok(false);
                    }
                }
                true
            }
        })
    }

    /// True for conditions that can only hold on isolated points.
    pub fn is_point(&self) -> bool {
        match self {
            Cond::Always => false,
            Cond::Cmp { op, .. } => *op == CmpOp::Eq,
            Cond::InGeom { .. } | Cond::InGrid { .. } => true,
            Cond::And(cs) => cs.iter().any(Cond::is_point),
        }
    }

    /// True when every atom compares the bare variable (or nothing at all),
    /// so breakpoints and point locations can be read off directly.
    pub fn is_transparent(&self) -> bool {
        match self {
            Cond::Always => true,
            Cond::Cmp { lhs, rhs, .. } => {
                (matches!(lhs, Expr::Var) && !rhs.has_var())
                    || (matches!(rhs, Expr::Var) && !lhs.has_var())
            }
            Cond::InGeom { arg, .. } | Cond::InGrid { arg, .. } => matches!(arg, Expr::Var),
            Cond::And(cs) => cs.iter().all(Cond::is_transparent),
        }
    }

    /// Constants the variable is compared against with an order relation.
    pub fn breakpoints(&self, out: &mut Vec<f64>) {
        match self {
            Cond::Cmp { lhs, op, rhs } if *op != CmpOp::Eq => {
                if let (Expr::Var, Some(c)) = (lhs, rhs.constant_value()) {
                    out.push(c);
                } else if let (Some(c), Expr::Var) = (lhs.constant_value(), rhs) {
                    out.push(c);
                }
            }
            Cond::And(cs) => cs.iter().for_each(|c| c.breakpoints(out)),
            _ => {}
        }
    }

    /// Candidate locations in `[x, y]` where a point condition may hold.
    pub fn point_locations(&self, x: f64, y: f64, out: &mut Vec<f64>) {
        const MAX_POINTS: f64 = 100_000.0;
        match self {
            Cond::Cmp { lhs, op: CmpOp::Eq, rhs } => {
                let c = match (lhs, rhs) {
                    (Expr::Var, r) => r.constant_value(),
                    (l, Expr::Var) => l.constant_value(),
                    _ => None,
                };
                if let Some(c) = c {
                    if x <= c && c <= y {
                        out.push(c);
                    }
                }
            }
            Cond::InGeom { arg: Expr::Var, q } => {
                if y > 0.0 {
                    let lo = x.max(1.0);
                    let mut k = (lo.ln() / q.ln()).floor().max(0.0) as i32;
                    loop {
                        let p = q.powi(k);
                        if p > y || !p.is_finite() {
                            break;
                        }
                        if p >= x {
                            out.push(p);
                        }
                        k += 1;
                    }
                }
            }
            Cond::InGrid { arg: Expr::Var, h } => {
                let k0 = (x / h).ceil();
                let k1 = (y / h).floor();
                if k1 - k0 < MAX_POINTS {
                    let mut k = k0;
                    while k <= k1 {
                        out.push(k * h);
                        k += 1.0;
                    }
                }
            }
            Cond::And(cs) => {
                // locations of the first point atom; the rest filters via `holds`
                if let Some(c) = cs.iter().find(|c| c.is_point()) {
                    c.point_locations(x, y, out);
                }
            }
            _ => {}
        }
    }

    pub fn substitute(&self, arg: &Expr) -> Cond {
        match self {
            Cond::Always => Cond::Always,
            Cond::Cmp { lhs, op, rhs } => Cond::Cmp {
                lhs: lhs.substitute(arg),
                op: *op,
                rhs: rhs.substitute(arg),
            },
            Cond::InGeom { arg: a, q } => Cond::InGeom { arg: a.substitute(arg), q: *q },
            Cond::InGrid { arg: a, h } => Cond::InGrid { arg: a.substitute(arg), h: *h },
            Cond::And(cs) => Cond::And(cs.iter().map(|c| c.substitute(arg)).collect()),
        }
    }

    pub fn and(self, other: Cond) -> Cond {
        match (self, other) {
            (Cond::Always, c) | (c, Cond::Always) => c,
            (Cond::And(mut a), Cond::And(b)) => {
                a.extend(b);
                Cond::And(a)
            }
            (Cond::And(mut a), c) => {
                a.push(c);
                Cond::And(a)
            }
            (c, Cond::And(mut b)) => {
                b.insert(0, c);
                Cond::And(b)
            }
            (a, b) => Cond::And(vec![a, b]),
        }
    }
}

impl fmt::Display for Cond {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cond::Always => f.write_str("true"),
            Cond::Cmp { lhs, op, rhs } => write!(f, "{lhs} {} {rhs}", op.symbol()),
            Cond::InGeom { q, .. } => write!(f, "in_geom({q})"),
            Cond::InGrid { h, .. } => write!(f, "in_grid({h})"),
            Cond::And(cs) => {
                for (i, c) in cs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" and ")?;
                    }
                    write!(f, "{c}")?;
                }
                Ok(())
            }
        }
    }
}
