//! Text syntax for time scales and interval-valued functions.
//!
//! ```text
//! scale := term { ("u" | "∪") term }
//! term  := interval(a, b) | points(x, ...) | hgrid(h, from, to) | geom(q, from, to)
//! fn    := pair | piece { ";" piece }
//! piece := piece(cond: pair)
//! pair  := [expr, expr] | dirichlet([expr, expr], [expr, expr])
//! cond  := atom { and atom }
//! atom  := expr cmp expr { cmp expr } | in_geom(q) | in_grid(h) | true
//! ```
//!
//! Expressions use `t` (or `s`), numbers, `e`, `pi`, `+ - * / ^`, and
//! `sin cos exp log sqrt abs min max`. Numbers in scale terms and
//! predicate arguments are constant expressions such as `1/3` or `pi/2`.

use std::fmt;

use crate::error::ParseError;
use crate::function::{BinOp, CmpOp, Cond, Expr, Func, IntervalFn, NamedConst, Piece};
use crate::time_scale::{Component, TimeScale};

/// 1-based source position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Span {
    pub line: usize,
    pub column: usize,
}

/// A node with its source position. Equality ignores the position.
#[derive(Debug, Clone)]
pub struct Spanned<T> {
    pub node: T,
    pub span: Span,
}

impl<T: PartialEq> PartialEq for Spanned<T> {
    fn eq(&self, other: &Self) -> bool {
        self.node == other.node
    }
}

impl<T: fmt::Display> fmt::Display for Spanned<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.node.fmt(f)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ScaleTerm {
    Interval(Spanned<Expr>, Spanned<Expr>),
    Points(Vec<Spanned<Expr>>),
    Hgrid(Spanned<Expr>, Spanned<Expr>, Spanned<Expr>),
    Geom(Spanned<Expr>, Spanned<Expr>, Spanned<Expr>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScaleSpec {
    pub terms: Vec<Spanned<ScaleTerm>>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum PairSpec {
    Pair(Spanned<Expr>, Spanned<Expr>),
    Dirichlet(Box<PairSpec>, Box<PairSpec>),
}

#[derive(Debug, Clone, PartialEq)]
pub enum CondAtom {
    Chain { first: Spanned<Expr>, rest: Vec<(CmpOp, Spanned<Expr>)> },
    InGeom(Spanned<Expr>),
    InGrid(Spanned<Expr>),
    True,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PieceSpec {
    pub cond: Vec<Spanned<CondAtom>>,
    pub value: PairSpec,
}

#[derive(Debug, Clone, PartialEq)]
pub enum FnSpec {
    Single(PairSpec),
    Pieces(Vec<Spanned<PieceSpec>>),
}

/// Parses and validates a time-scale description.
pub fn parse_scale(text: &str) -> Result<ScaleSpec, ParseError> {
    let mut p = Parser::new(text)?;
    let mut terms = vec![p.scale_term()?];
    while p.eat_ident("u") || p.eat_sym("∪") {
        terms.push(p.scale_term()?);
    }
    p.expect_eof()?;
    let spec = ScaleSpec { terms };
    spec.elaborate()?;
    Ok(spec)
}

pub fn parse_fn(text: &str) -> Result<FnSpec, ParseError> {
    let mut p = Parser::new(text)?;
    let spec = if p.peek_ident("piece") {
        let mut pieces = vec![p.piece()?];
        while p.eat_sym(";") {
            pieces.push(p.piece()?);
        }
        FnSpec::Pieces(pieces)
    } else {
        FnSpec::Single(p.pair(true)?)
    };
    p.expect_eof()?;
    spec.elaborate()?;
    Ok(spec)
}

pub fn parse_expr(text: &str) -> Result<Expr, ParseError> {
    let mut p = Parser::new(text)?;
    let e = p.expr()?;
    p.expect_eof()?;
    Ok(e.node)
}

/// Parses a variable-free expression and evaluates it.
pub fn parse_const(text: &str) -> Result<f64, ParseError> {
    let mut p = Parser::new(text)?;
    let e = p.expr()?;
    p.expect_eof()?;
    constant(&e)
}

/// [`parse_scale`] followed by elaboration.
pub fn scale(text: &str) -> Result<TimeScale, ParseError> {
    parse_scale(text)?.elaborate()
}

/// [`parse_fn`] followed by elaboration.
pub fn function(text: &str) -> Result<IntervalFn, ParseError> {
    parse_fn(text)?.elaborate()
}

fn error_at(span: Span, token: impl Into<String>, message: impl Into<String>) -> ParseError {
    ParseError { line: span.line, column: span.column, token: token.into(), message: message.into() }
}

fn constant(e: &Spanned<Expr>) -> Result<f64, ParseError> {
    if e.node.has_var() {
        return Err(error_at(e.span, e.node.to_string(), "expected a constant"));
    }
    e.node.eval(0.0).map_err(|m| error_at(e.span, e.node.to_string(), m))
}

impl ScaleSpec {
    pub fn elaborate(&self) -> Result<TimeScale, ParseError> {
        let mut comps = Vec::with_capacity(self.terms.len());
        let mut last = None;
        for term in &self.terms {
            let here = |m: String| error_at(term.span, term.node.to_string(), m);
            let comp = match &term.node {
                ScaleTerm::Interval(a, b) => {
                    let (a, b) = (constant(a)?, constant(b)?);
                    if !(a < b) {
                        return Err(here(format!("interval needs start < end, got {a} and {b}")));
                    }
                    Component::segment(a, b)
                }
                ScaleTerm::Points(xs) => {
                    Component::points(&xs.iter().map(constant).collect::<Result<Vec<_>, _>>()?)
                }
                ScaleTerm::Hgrid(h, from, to) => {
                    Component::hgrid(constant(h)?, constant(from)?, constant(to)?).map_err(|e| here(e.to_string()))?
                }
                ScaleTerm::Geom(q, from, to) => {
                    Component::geom(constant(q)?, constant(from)?, constant(to)?).map_err(|e| here(e.to_string()))?
                }
            };
            comps.push(comp);
            last = Some(TimeScale::new(comps.clone()).map_err(|e| here(e.to_string()))?);
        }
        Ok(last.expect("at least one term"))
    }
}

impl PairSpec {
    fn exprs(&self) -> (Expr, Expr) {
        match self {
            PairSpec::Pair(lo, hi) => (lo.node.clone(), hi.node.clone()),
            PairSpec::Dirichlet(..) => unreachable!("nested dirichlet rejected by the parser"),
        }
    }

    fn piece(&self, cond: Cond) -> Piece {
        match self {
            PairSpec::Pair(lo, hi) => Piece::new(cond, lo.node.clone(), hi.node.clone()),
            PairSpec::Dirichlet(r, i) => Piece::dirichlet(cond, r.exprs(), i.exprs()),
        }
    }
}

impl CondAtom {
    fn elaborate(&self, span: Span) -> Result<Cond, ParseError> {
        Ok(match self {
            CondAtom::True => Cond::Always,
            CondAtom::Chain { first, rest } => {
                let mut cond = Cond::Always;
                let mut prev = first;
                for (op, next) in rest {
                    cond = cond.and(Cond::cmp(prev.node.clone(), *op, next.node.clone()));
                    prev = next;
                }
                cond
            }
            CondAtom::InGeom(q) => {
                let v = constant(q)?;
                if !(v > 0.0) || v == 1.0 {
                    return Err(error_at(span, self.to_string(), "in_geom needs q > 0, q != 1"));
                }
                Cond::InGeom { arg: Expr::Var, q: v }
            }
            CondAtom::InGrid(h) => {
                let v = constant(h)?;
                if !(v > 0.0) {
                    return Err(error_at(span, self.to_string(), "in_grid needs h > 0"));
                }
                Cond::InGrid { arg: Expr::Var, h: v }
            }
        })
    }
}

impl FnSpec {
    pub fn elaborate(&self) -> Result<IntervalFn, ParseError> {
        match self {
            FnSpec::Single(pair) => Ok(IntervalFn::piecewise(vec![pair.piece(Cond::Always)])),
            FnSpec::Pieces(pieces) => {
                let mut out = Vec::with_capacity(pieces.len());
                for p in pieces {
                    let mut cond = Cond::Always;
                    for atom in &p.node.cond {
                        cond = cond.and(atom.node.elaborate(atom.span)?);
                    }
                    out.push(p.node.value.piece(cond));
                }
                Ok(IntervalFn::piecewise(out))
            }
        }
    }
}

fn join<T: fmt::Display>(f: &mut fmt::Formatter<'_>, items: &[T], sep: &str) -> fmt::Result {
    for (i, x) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(sep)?;
        }
        write!(f, "{x}")?;
    }
    Ok(())
}

impl fmt::Display for ScaleTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScaleTerm::Interval(a, b) => write!(f, "interval({a}, {b})"),
            ScaleTerm::Points(xs) => {
                f.write_str("points(")?;
                join(f, xs, ", ")?;
                f.write_str(")")
            }
            ScaleTerm::Hgrid(h, a, b) => write!(f, "hgrid({h}, {a}, {b})"),
            ScaleTerm::Geom(q, a, b) => write!(f, "geom({q}, {a}, {b})"),
        }
    }
}

impl fmt::Display for ScaleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        join(f, &self.terms, " u ")
    }
}

impl fmt::Display for PairSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PairSpec::Pair(lo, hi) => write!(f, "[{lo}, {hi}]"),
            PairSpec::Dirichlet(r, i) => write!(f, "dirichlet({r}, {i})"),
        }
    }
}

impl fmt::Display for CondAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CondAtom::True => f.write_str("true"),
            CondAtom::Chain { first, rest } => {
                write!(f, "{first}")?;
                for (op, e) in rest {
                    write!(f, " {} {e}", op.symbol())?;
                }
                Ok(())
            }
            CondAtom::InGeom(q) => write!(f, "in_geom({q})"),
            CondAtom::InGrid(h) => write!(f, "in_grid({h})"),
        }
    }
}

impl fmt::Display for PieceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("piece(")?;
        join(f, &self.cond, " and ")?;
        write!(f, ": {})", self.value)
    }
}

impl fmt::Display for FnSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FnSpec::Single(p) => write!(f, "{p}"),
            FnSpec::Pieces(ps) => join(f, ps, "; "),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Sym(&'static str),
    Eof,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    text: String,
    span: Span,
}

const SYMBOLS: [&str; 18] = ["<=", ">=", "==", "(", ")", "[", "]", ",", ";", ":", "+", "-", "*", "/", "^", "<", ">", "∪"];

fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut toks = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let span = Span { line, column: col };
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        let start = i;
        let tok = if c.is_ascii_digit() || (c == '.' && chars.get(i + 1).is_some_and(char::is_ascii_digit)) {
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    i = j;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let s: String = chars[start..i].iter().collect();
            match s.parse::<f64>() {
                Ok(v) if v.is_finite() => Tok::Num(v),
                _ => return Err(error_at(span, s, "malformed number")),
            }
        } else if c.is_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            Tok::Ident(chars[start..i].iter().collect())
        } else {
            let rest: String = chars[i..chars.len().min(i + 2)].iter().collect();
            match SYMBOLS.iter().find(|s| rest.starts_with(**s)) {
                Some(s) => {
                    i += s.chars().count();
                    Tok::Sym(s)
                }
                None => return Err(error_at(span, c.to_string(), "unexpected character")),
            }
        };
        col += i - start;
        toks.push(Token { tok, text: chars[start..i].iter().collect(), span });
    }
    toks.push(Token { tok: Tok::Eof, text: "end of input".into(), span: Span { line, column: col } });
    Ok(toks)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn new(text: &str) -> Result<Self, ParseError> {
        Ok(Self { toks: lex(text)?, pos: 0 })
    }

    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, expected: &str) -> ParseError {
        let t = self.peek();
        error_at(t.span, t.text.clone(), format!("expected {expected}"))
    }

    fn peek_sym(&self, s: &str) -> bool {
        matches!(self.peek().tok, Tok::Sym(x) if x == s)
    }

    fn peek_ident(&self, name: &str) -> bool {
        matches!(&self.peek().tok, Tok::Ident(x) if x == name)
    }

    fn eat_sym(&mut self, s: &str) -> bool {
        let hit = self.peek_sym(s);
        if hit {
            self.pos += 1;
        }
        hit
    }

    fn eat_ident(&mut self, name: &str) -> bool {
        let hit = self.peek_ident(name);
        if hit {
            self.pos += 1;
        }
        hit
    }

    fn expect_sym(&mut self, s: &str) -> Result<(), ParseError> {
        if self.eat_sym(s) {
            Ok(())
        } else {
            Err(self.unexpected(&format!("`{s}`")))
        }
    }

    fn expect_eof(&self) -> Result<(), ParseError> {
        if self.peek().tok == Tok::Eof {
            Ok(())
        } else {
            Err(self.unexpected("end of input"))
        }
    }

    fn args(&mut self) -> Result<Vec<Spanned<Expr>>, ParseError> {
        self.expect_sym("(")?;
        let mut out = vec![self.expr()?];
        while self.eat_sym(",") {
            out.push(self.expr()?);
        }
        self.expect_sym(")")?;
        Ok(out)
    }

    fn scale_term(&mut self) -> Result<Spanned<ScaleTerm>, ParseError> {
        let head = self.peek().clone();
        let Tok::Ident(name) = &head.tok else {
            return Err(self.unexpected("interval, points, hgrid or geom"));
        };
        let arity = match name.as_str() {
            "interval" => 2,
            "hgrid" | "geom" => 3,
            "points" => 0,
            _ => return Err(self.unexpected("interval, points, hgrid or geom")),
        };
        self.bump();
        let mut args = self.args()?;
        if arity != 0 && args.len() != arity {
            return Err(error_at(head.span, head.text, format!("{name} takes {arity} arguments, got {}", args.len())));
        }
        let node = match name.as_str() {
            "interval" => {
                let b = args.pop().unwrap();
                ScaleTerm::Interval(args.pop().unwrap(), b)
            }
            "points" => ScaleTerm::Points(args),
            _ => {
                let c = args.pop().unwrap();
                let b = args.pop().unwrap();
                let a = args.pop().unwrap();
                if name == "hgrid" {
                    ScaleTerm::Hgrid(a, b, c)
                } else {
                    ScaleTerm::Geom(a, b, c)
                }
            }
        };
        Ok(Spanned { node, span: head.span })
    }

    fn piece(&mut self) -> Result<Spanned<PieceSpec>, ParseError> {
        let span = self.peek().span;
        if !self.eat_ident("piece") {
            return Err(self.unexpected("`piece`"));
        }
        self.expect_sym("(")?;
        let mut cond = vec![self.cond_atom()?];
        while self.eat_ident("and") {
            cond.push(self.cond_atom()?);
        }
        self.expect_sym(":")?;
        let value = self.pair(true)?;
        self.expect_sym(")")?;
        Ok(Spanned { node: PieceSpec { cond, value }, span })
    }

    fn cond_atom(&mut self) -> Result<Spanned<CondAtom>, ParseError> {
        let span = self.peek().span;
        let node = if self.eat_ident("true") {
            CondAtom::True
        } else if self.eat_ident("in_geom") {
            self.expect_sym("(")?;
            let q = self.expr()?;
            self.expect_sym(")")?;
            CondAtom::InGeom(q)
        } else if self.eat_ident("in_grid") {
            self.expect_sym("(")?;
            let h = self.expr()?;
            self.expect_sym(")")?;
            CondAtom::InGrid(h)
        } else {
            let first = self.expr()?;
            let mut rest = Vec::new();
            while let Some(op) = self.cmp_op() {
                rest.push((op, self.expr()?));
            }
            if rest.is_empty() {
                return Err(self.unexpected("a comparison"));
            }
            CondAtom::Chain { first, rest }
        };
        Ok(Spanned { node, span })
    }

    fn cmp_op(&mut self) -> Option<CmpOp> {
        let op = match self.peek().tok {
            Tok::Sym("<") => CmpOp::Lt,
            Tok::Sym("<=") => CmpOp::Le,
            Tok::Sym(">") => CmpOp::Gt,
            Tok::Sym(">=") => CmpOp::Ge,
            Tok::Sym("==") => CmpOp::Eq,
            _ => return None,
        };
        self.pos += 1;
        Some(op)
    }

    fn pair(&mut self, allow_dirichlet: bool) -> Result<PairSpec, ParseError> {
        if self.eat_sym("[") {
            let lo = self.expr()?;
            self.expect_sym(",")?;
            let hi = self.expr()?;
            self.expect_sym("]")?;
            Ok(PairSpec::Pair(lo, hi))
        } else if allow_dirichlet && self.eat_ident("dirichlet") {
            self.expect_sym("(")?;
            let r = self.pair(false)?;
            self.expect_sym(",")?;
            let i = self.pair(false)?;
            self.expect_sym(")")?;
            Ok(PairSpec::Dirichlet(Box::new(r), Box::new(i)))
        } else if allow_dirichlet {
            Err(self.unexpected("`[` or `dirichlet`"))
        } else {
            Err(self.unexpected("`[`"))
        }
    }

    fn expr(&mut self) -> Result<Spanned<Expr>, ParseError> {
        let span = self.peek().span;
        let mut e = self.term()?;
        loop {
            let op = if self.eat_sym("+") {
                BinOp::Add
            } else if self.eat_sym("-") {
                BinOp::Sub
            } else {
                break;
            };
            e = Expr::bin(op, e, self.term()?);
        }
        Ok(Spanned { node: e, span })
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut e = self.unary()?;
        loop {
            let op = if self.eat_sym("*") {
                BinOp::Mul
            } else if self.eat_sym("/") {
                BinOp::Div
            } else {
                break;
            };
            e = Expr::bin(op, e, self.unary()?);
        }
        Ok(e)
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.eat_sym("-") {
            return Ok(match self.unary()? {
                Expr::Num(x) => Expr::Num(-x),
                e => -e,
            });
        }
        let base = self.atom()?;
        if self.eat_sym("^") {
            // right-associative
            return Ok(Expr::bin(BinOp::Pow, base, self.unary()?));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let tok = self.peek().clone();
        match &tok.tok {
            Tok::Num(x) => {
                self.bump();
                Ok(Expr::Num(*x))
            }
            Tok::Sym("(") => {
                self.bump();
                let e = self.expr()?;
                self.expect_sym(")")?;
                Ok(e.node)
            }
            Tok::Ident(name) => {
                self.bump();
                match name.as_str() {
                    "t" | "s" => Ok(Expr::Var),
                    "e" => Ok(Expr::Const(NamedConst::E)),
                    "pi" => Ok(Expr::Const(NamedConst::Pi)),
                    "min" | "max" => {
                        let mut args = self.args()?;
                        if args.len() != 2 {
                            return Err(error_at(tok.span, tok.text, format!("{name} takes 2 arguments")));
                        }
                        let b = args.pop().unwrap().node;
                        let a = args.pop().unwrap().node;
                        Ok(if name == "min" { a.min(b) } else { a.max(b) })
                    }
                    _ => match Func::from_name(name) {
                        Some(f) => {
                            self.expect_sym("(")?;
                            let a = self.expr()?;
                            self.expect_sym(")")?;
                            Ok(Expr::call(f, a.node))
                        }
                        None => Err(error_at(tok.span, tok.text, "unknown identifier")),
                    },
                }
            }
            _ => Err(self.unexpected("an expression")),
        }
    }
}
