//! Real-valued expression trees in one variable.

use std::fmt;
use std::ops;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NamedConst {
    E,
    Pi,
}

impl NamedConst {
    pub fn value(self) -> f64 {
        match self {
            NamedConst::E => std::f64::consts::E,
            NamedConst::Pi => std::f64::consts::PI,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Log,
    Sqrt,
    Abs,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
            Func::Abs => "abs",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "exp" => Func::Exp,
            "log" => Func::Log,
            "sqrt" => Func::Sqrt,
            "abs" => Func::Abs,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
    Min,
    Max,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Const(NamedConst),
    Var,
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

impl Expr {
    pub fn var() -> Self {
        Expr::Var
    }

    pub fn num(x: f64) -> Self {
        Expr::Num(x)
    }

    pub fn bin(op: BinOp, a: Expr, b: Expr) -> Self {
        Expr::Bin(op, Box::new(a), Box::new(b))
    }

    pub fn call(f: Func, a: Expr) -> Self {
        Expr::Call(f, Box::new(a))
    }

    pub fn powf(self, p: f64) -> Self {
        Expr::bin(BinOp::Pow, self, Expr::Num(p))
    }

    pub fn abs(self) -> Self {
        Expr::call(Func::Abs, self)
    }

    pub fn min(self, other: Expr) -> Self {
        Expr::bin(BinOp::Min, self, other)
    }

    pub fn max(self, other: Expr) -> Self {
        Expr::bin(BinOp::Max, self, other)
    }

    pub fn eval(&self, t: f64) -> Result<f64, String> {
        let v = match self {
            Expr::Num(x) => *x,
            Expr::Const(c) => c.value(),
            Expr::Var => t,
            Expr::Neg(a) => -a.eval(t)?,
            Expr::Bin(op, a, b) => {
                let x = a.eval(t)?;
                let y = b.eval(t)?;
                match op {
                    BinOp::Add => x + y,
                    BinOp::Sub => x - y,
                    BinOp::Mul => x * y,
                    BinOp::Div => {
                        if y == 0.0 {
                            return Err("division by zero".into());
                        }
                        x / y
                    }
                    BinOp::Pow => pow_real(x, y)?,
                    BinOp::Min => x.min(y),
                    BinOp::Max => x.max(y),
                }
            }
            Expr::Call(f, a) => {
                let x = a.eval(t)?;
                match f {
                    Func::Sin => x.sin(),
                    Func::Cos => x.cos(),
                    Func::Exp => x.exp(),
                    Func::Log => {
                        if x <= 0.0 {
                            return Err(format!("log of non-positive value {x}"));
                        }
                        x.ln()
                    }
                    Func::Sqrt => {
                        if x < 0.0 {
                            return Err(format!("sqrt of negative value {x}"));
                        }
                        x.sqrt()
                    }
                    Func::Abs => x.abs(),
                }
            }
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(format!("non-finite value {v}"))
        }
    }

    /// Value of a variable-free expression.
    pub fn constant_value(&self) -> Option<f64> {
        if self.has_var() {
            None
        } else {
            self.eval(0.0).ok()
        }
    }

    pub fn has_var(&self) -> bool {
        match self {
            Expr::Num(_) | Expr::Const(_) => false,
            Expr::Var => true,
            Expr::Neg(a) | Expr::Call(_, a) => a.has_var(),
            Expr::Bin(_, a, b) => a.has_var() || b.has_var(),
        }
    }

    /// Replaces every occurrence of the variable by `arg`.
    pub fn substitute(&self, arg: &Expr) -> Expr {
        match self {
            Expr::Var => arg.clone(),
            Expr::Num(_) | Expr::Const(_) => self.clone(),
            Expr::Neg(a) => Expr::Neg(Box::new(a.substitute(arg))),
            Expr::Call(f, a) => Expr::call(*f, a.substitute(arg)),
            Expr::Bin(op, a, b) => Expr::bin(*op, a.substitute(arg), b.substitute(arg)),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Bin(BinOp::Add | BinOp::Sub, ..) => 1,
            Expr::Bin(BinOp::Mul | BinOp::Div, ..) => 2,
            Expr::Neg(_) => 3,
            Expr::Bin(BinOp::Pow, ..) => 4,
            Expr::Num(x) if *x < 0.0 => 3,
            _ => 5,
        }
    }

    fn fmt_child(&self, f: &mut fmt::Formatter<'_>, min_prec: u8) -> fmt::Result {
        if self.precedence() < min_prec {
            write!(f, "({self})")
        } else {
            write!(f, "{self}")
        }
    }
}

fn pow_real(x: f64, y: f64) -> Result<f64, String> {
    if y.fract() == 0.0 && y.abs() <= i32::MAX as f64 {
        if x == 0.0 && y < 0.0 {
            return Err("zero to a negative power".into());
        }
        return Ok(x.powi(y as i32));
    }
    if x < 0.0 {
        return Err(format!("negative base {x} with fractional exponent {y}"));
    }
    if y == 0.5 {
        return Ok(x.sqrt());
    }
    Ok(x.powf(y))
}

/// Emits DSL syntax with minimal parentheses.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(x) => write!(f, "{x}"),
            Expr::Const(NamedConst::E) => f.write_str("e"),
            Expr::Const(NamedConst::Pi) => f.write_str("pi"),
            Expr::Var => f.write_str("t"),
            Expr::Neg(a) => {
                f.write_str("-")?;
                a.fmt_child(f, 4)
            }
            Expr::Call(func, a) => write!(f, "{}({a})", func.name()),
            Expr::Bin(BinOp::Min, a, b) => write!(f, "min({a}, {b})"),
            Expr::Bin(BinOp::Max, a, b) => write!(f, "max({a}, {b})"),
            Expr::Bin(op, a, b) => {
                let (sym, p) = match op {
                    BinOp::Add => (" + ", 1),
                    BinOp::Sub => (" - ", 1),
                    BinOp::Mul => ("*", 2),
                    BinOp::Div => ("/", 2),
                    BinOp::Pow => ("^", 4),
                    BinOp::Min | BinOp::Max => unreachable!(),
                };
                match op {
                    // right-associative
                    BinOp::Pow => {
                        a.fmt_child(f, p + 1)?;
                        f.write_str(sym)?;
                        b.fmt_child(f, p)
                    }
                    _ => {
                        a.fmt_child(f, p)?;
                        f.write_str(sym)?;
                        b.fmt_child(f, p + 1)
                    }
                }
            }
        }
    }
}

macro_rules! impl_binop {
    ($tr:ident, $m:ident, $op:expr) => {
        impl ops::$tr for Expr {
            type Output = Expr;
            fn $m(self, rhs: Expr) -> Expr {
                Expr::bin($op, self, rhs)
            }
        }
        impl ops::$tr<f64> for Expr {
            type Output = Expr;
            fn $m(self, rhs: f64) -> Expr {
                Expr::bin($op, self, Expr::Num(rhs))
            }
        }
        impl ops::$tr<Expr> for f64 {
            type Output = Expr;
            fn $m(self, rhs: Expr) -> Expr {
                Expr::bin($op, Expr::Num(self), rhs)
            }
        }
    };
}

impl_binop!(Add, add, BinOp::Add);
impl_binop!(Sub, sub, BinOp::Sub);
impl_binop!(Mul, mul, BinOp::Mul);
impl_binop!(Div, div, BinOp::Div);

impl ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::Neg(Box::new(self))
    }
}

/// Shorthands for building expressions in code and tests.
pub mod build {
    use super::*;

    pub fn t() -> Expr {
        Expr::Var
    }
    pub fn c(x: f64) -> Expr {
        Expr::Num(x)
    }
    pub fn e() -> Expr {
        Expr::Const(NamedConst::E)
    }
    pub fn pi() -> Expr {
        Expr::Const(NamedConst::Pi)
    }
    pub fn sin(a: Expr) -> Expr {
        Expr::call(Func::Sin, a)
    }
    pub fn cos(a: Expr) -> Expr {
        Expr::call(Func::Cos, a)
    }
    pub fn exp(a: Expr) -> Expr {
        Expr::call(Func::Exp, a)
    }
    pub fn log(a: Expr) -> Expr {
        Expr::call(Func::Log, a)
    }
    pub fn sqrt(a: Expr) -> Expr {
        Expr::call(Func::Sqrt, a)
    }
}
