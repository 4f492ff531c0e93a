//! Curve expression language.
//!
//! A small closed grammar for univariate curves: numbers, `pi`, one free
//! variable, named parameters, `sin`/`cos`/`arccos`/`sqrt`, the four
//! arithmetic operators and `^` with a constant exponent.
//!
//! ```text
//! expr   := term (("+"|"-") term)*
//! term   := factor (("*"|"/") factor)*
//! factor := "-" factor | base ("^" factor)?
//! base   := number | ident | "(" expr ")" | func "(" expr ")"
//! ```
//!
//! `^` binds tighter than unary minus, so `-x^2` is `-(x^2)`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExprError {
    #[error("syntax error at offset {offset}: expected {}", expected.join(", "))]
    Syntax {
        offset: usize,
        expected: Vec<&'static str>,
    },
    #[error("unknown identifier `{name}` at offset {offset}")]
    UnknownIdentifier { name: String, offset: usize },
    #[error("exponent at offset {offset} must be a constant")]
    NonConstantExponent { offset: usize },
    #[error("identifier `{0}` is not bound")]
    UnboundIdentifier(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid identifier `{0}`")]
    InvalidName(String),
}

/// Built-in unary functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Sin,
    Cos,
    Arccos,
    Sqrt,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Arccos => "arccos",
            Func::Sqrt => "sqrt",
        }
    }

    fn from_name(name: &str) -> Option<Func> {
        match name {
            "sin" => Some(Func::Sin),
            "cos" => Some(Func::Cos),
            "arccos" => Some(Func::Arccos),
            "sqrt" => Some(Func::Sqrt),
            _ => None,
        }
    }

    fn apply(self, v: f64) -> Result<f64, ExprError> {
        match self {
            Func::Sin => Ok(v.sin()),
            Func::Cos => Ok(v.cos()),
            Func::Arccos if (-1.0..=1.0).contains(&v) => Ok(v.acos()),
            Func::Arccos => Err(ExprError::Domain(format!("arccos({v}) is undefined"))),
            Func::Sqrt if v >= 0.0 => Ok(v.sqrt()),
            Func::Sqrt => Err(ExprError::Domain(format!("sqrt({v}) is undefined"))),
        }
    }
}

/// Abstract syntax tree of a curve expression.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Pi,
    Param(String),
    Var(String),
    Neg(Box<Expr>),
    Call(Func, Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    /// Power with a constant exponent.
    Pow(Box<Expr>, f64),
}

/// Identifiers the parser accepts besides `pi` and the function names.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Scope {
    variable: Option<String>,
    parameters: BTreeSet<String>,
}

impl Scope {
    /// Scope for variable-free input such as `2*pi`.
    pub fn constant() -> Self {
        Self::default()
    }

    pub fn variable(name: &str) -> Self {
        Scope {
            variable: Some(name.to_string()),
            parameters: BTreeSet::new(),
        }
    }

    pub fn with_parameter(mut self, name: &str) -> Self {
        self.parameters.insert(name.to_string());
        self
    }

    pub fn variable_name(&self) -> Option<&str> {
        self.variable.as_deref()
    }
}

/// Values for the free variable and parameters.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Bindings(BTreeMap<String, f64>);

impl Bindings {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, name: &str, value: f64) -> Self {
        self.set(name, value);
        self
    }

    pub fn set(&mut self, name: &str, value: f64) {
        self.0.insert(name.to_string(), value);
    }

    pub fn get(&self, name: &str) -> Result<f64, ExprError> {
        self.0
            .get(name)
            .copied()
            .ok_or_else(|| ExprError::UnboundIdentifier(name.to_string()))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.0.iter().map(|(k, v)| (k.as_str(), *v))
    }
}

pub fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn is_reserved(name: &str) -> bool {
    name == "pi" || Func::from_name(name).is_some()
}

// ---------------------------------------------------------------------------
// Lexer

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, ExprError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => out.push((Tok::Plus, start)),
            b'-' => out.push((Tok::Minus, start)),
            b'*' => out.push((Tok::Star, start)),
            b'/' => out.push((Tok::Slash, start)),
            b'^' => out.push((Tok::Caret, start)),
            b'(' => out.push((Tok::LParen, start)),
            b')' => out.push((Tok::RParen, start)),
            b'0'..=b'9' => {
                i = scan_number(bytes, i)?;
                // the scanned slice is ASCII digits, '.', 'e' and signs only
                let value: f64 = src[start..i]
                    .parse()
                    .ok()
                    .filter(|v: &f64| v.is_finite())
                    .ok_or_else(|| syntax(start, &["finite number"]))?;
                out.push((Tok::Num(value), start));
                continue;
            }
            c if c.is_ascii_alphabetic() => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((Tok::Ident(src[start..i].to_string()), start));
                continue;
            }
            _ => {
                return Err(syntax(
                    start,
                    &["number", "identifier", "operator", "(", ")"],
                ))
            }
        }
        i += 1;
    }
    out.push((Tok::End, src.len()));
    Ok(out)
}

fn scan_number(bytes: &[u8], mut i: usize) -> Result<usize, ExprError> {
    let digits = |i: &mut usize| {
        let s = *i;
        while *i < bytes.len() && bytes[*i].is_ascii_digit() {
            *i += 1;
        }
        *i > s
    };
    digits(&mut i);
    if i < bytes.len() && bytes[i] == b'.' {
        i += 1;
        if !digits(&mut i) {
            return Err(syntax(i, &["digit"]));
        }
    }
    if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
        i += 1;
        if i < bytes.len() && (bytes[i] == b'+' || bytes[i] == b'-') {
            i += 1;
        }
        if !digits(&mut i) {
            return Err(syntax(i, &["digit"]));
        }
    }
    Ok(i)
}

fn syntax(offset: usize, expected: &[&'static str]) -> ExprError {
    ExprError::Syntax {
        offset,
        expected: expected.to_vec(),
    }
}

// ---------------------------------------------------------------------------
// Parser

const OPERAND: &[&str] = &["number", "identifier", "(", "-"];

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    scope: &'a Scope,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, tok: Tok, name: &'static str) -> Result<(), ExprError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(syntax(self.offset(), &[name]))
        }
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Minus => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
                }
                Tok::Slash => {
                    self.bump();
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.factor()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> Result<Expr, ExprError> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.factor()?)));
        }
        let base = self.base()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let at = self.offset();
        let exponent = self.factor()?;
        if !exponent.is_constant() {
            return Err(ExprError::NonConstantExponent { offset: at });
        }
        let value = exponent.evaluate(&Bindings::new())?;
        if !value.is_finite() {
            return Err(ExprError::Domain(format!("exponent {value} is not finite")));
        }
        Ok(Expr::Pow(Box::new(base), value))
    }

    fn base(&mut self) -> Result<Expr, ExprError> {
        let (tok, at) = self.bump();
        match tok {
            Tok::Num(v) => Ok(Expr::Num(v)),
            Tok::LParen => {
                let inner = self.expr()?;
                self.expect(Tok::RParen, ")")?;
                Ok(inner)
            }
            Tok::Ident(name) => {
                if let Some(func) = Func::from_name(&name) {
                    self.expect(Tok::LParen, "(")?;
                    let arg = self.expr()?;
                    self.expect(Tok::RParen, ")")?;
                    Ok(Expr::Call(func, Box::new(arg)))
                } else if name == "pi" {
                    Ok(Expr::Pi)
                } else if self.scope.variable.as_deref() == Some(name.as_str()) {
                    Ok(Expr::Var(name))
                } else if self.scope.parameters.contains(&name) {
                    Ok(Expr::Param(name))
                } else {
                    Err(ExprError::UnknownIdentifier { name, offset: at })
                }
            }
            _ => Err(syntax(at, OPERAND)),
        }
    }
}

/// Parses `source` under `scope`.
pub fn parse(source: &str, scope: &Scope) -> Result<Expr, ExprError> {
    for name in scope.variable.iter().chain(scope.parameters.iter()) {
        if !is_identifier(name) || is_reserved(name) {
            return Err(ExprError::InvalidName(name.clone()));
        }
    }
    let toks = lex(source)?;
    let mut p = Parser {
        toks,
        pos: 0,
        scope,
    };
    let e = p.expr()?;
    match p.peek() {
        Tok::End => Ok(e),
        _ => Err(syntax(p.offset(), &["operator", "end of input"])),
    }
}

/// Parses and evaluates variable-free input such as `3*pi/2`.
pub fn parse_constant(source: &str) -> Result<f64, ExprError> {
    parse(source, &Scope::constant())?.evaluate(&Bindings::new())
}

// ---------------------------------------------------------------------------
// Evaluation

impl Expr {
    /// True when no variable or parameter occurs.
    pub fn is_constant(&self) -> bool {
        match self {
            Expr::Num(_) | Expr::Pi => true,
            Expr::Param(_) | Expr::Var(_) => false,
            Expr::Neg(a) | Expr::Call(_, a) | Expr::Pow(a, _) => a.is_constant(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.is_constant() && b.is_constant()
            }
        }
    }

    pub fn evaluate(&self, bindings: &Bindings) -> Result<f64, ExprError> {
        self.eval_with(&|name| bindings.get(name))
    }

    fn eval_with(&self, lookup: &dyn Fn(&str) -> Result<f64, ExprError>) -> Result<f64, ExprError> {
        Ok(match self {
            Expr::Num(v) => *v,
            Expr::Pi => std::f64::consts::PI,
            Expr::Param(n) | Expr::Var(n) => lookup(n)?,
            Expr::Neg(a) => -a.eval_with(lookup)?,
            Expr::Call(f, a) => f.apply(a.eval_with(lookup)?)?,
            Expr::Add(a, b) => a.eval_with(lookup)? + b.eval_with(lookup)?,
            Expr::Sub(a, b) => a.eval_with(lookup)? - b.eval_with(lookup)?,
            Expr::Mul(a, b) => a.eval_with(lookup)? * b.eval_with(lookup)?,
            Expr::Div(a, b) => {
                let num = a.eval_with(lookup)?;
                let den = b.eval_with(lookup)?;
                if den == 0.0 {
                    return Err(ExprError::Domain(format!("division of {num} by zero")));
                }
                num / den
            }
            Expr::Pow(a, n) => {
                let base = a.eval_with(lookup)?;
                let v = base.powf(*n);
                if v.is_nan() || (v.is_infinite() && base.is_finite()) {
                    return Err(ExprError::Domain(format!("{base}^{n} is undefined")));
                }
                v
            }
        })
    }

    /// Replaces every parameter by its bound value.
    pub fn substitute(&self, bindings: &Bindings) -> Result<Expr, ExprError> {
        Ok(match self {
            Expr::Param(n) => Expr::Num(bindings.get(n)?),
            Expr::Num(_) | Expr::Pi | Expr::Var(_) => self.clone(),
            Expr::Neg(a) => Expr::Neg(Box::new(a.substitute(bindings)?)),
            Expr::Call(f, a) => Expr::Call(*f, Box::new(a.substitute(bindings)?)),
            Expr::Pow(a, n) => Expr::Pow(Box::new(a.substitute(bindings)?), *n),
            Expr::Add(a, b) => Expr::Add(bx(a.substitute(bindings)?), bx(b.substitute(bindings)?)),
            Expr::Sub(a, b) => Expr::Sub(bx(a.substitute(bindings)?), bx(b.substitute(bindings)?)),
            Expr::Mul(a, b) => Expr::Mul(bx(a.substitute(bindings)?), bx(b.substitute(bindings)?)),
            Expr::Div(a, b) => Expr::Div(bx(a.substitute(bindings)?), bx(b.substitute(bindings)?)),
        })
    }

    /// Parameter names referenced by the expression.
    pub fn parameters(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |e| {
            if let Expr::Param(n) = e {
                out.insert(n.clone());
            }
        });
        out
    }

    fn visit(&self, f: &mut dyn FnMut(&Expr)) {
        f(self);
        match self {
            Expr::Num(_) | Expr::Pi | Expr::Param(_) | Expr::Var(_) => {}
            Expr::Neg(a) | Expr::Call(_, a) | Expr::Pow(a, _) => a.visit(f),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.visit(f);
                b.visit(f);
            }
        }
    }
}

fn bx(e: Expr) -> Box<Expr> {
    Box::new(e)
}

// ---------------------------------------------------------------------------
// Differentiation

fn num(v: f64) -> Expr {
    Expr::Num(v)
}

fn is_num(e: &Expr, v: f64) -> bool {
    matches!(e, Expr::Num(x) if *x == v)
}

fn add(a: Expr, b: Expr) -> Expr {
    match (&a, &b) {
        (Expr::Num(x), Expr::Num(y)) => num(x + y),
        _ if is_num(&a, 0.0) => b,
        _ if is_num(&b, 0.0) => a,
        _ => Expr::Add(bx(a), bx(b)),
    }
}

fn sub(a: Expr, b: Expr) -> Expr {
    match (&a, &b) {
        (Expr::Num(x), Expr::Num(y)) => num(x - y),
        _ if is_num(&b, 0.0) => a,
        _ if is_num(&a, 0.0) => neg(b),
        _ => Expr::Sub(bx(a), bx(b)),
    }
}

fn mul(a: Expr, b: Expr) -> Expr {
    match (&a, &b) {
        (Expr::Num(x), Expr::Num(y)) => num(x * y),
        _ if is_num(&a, 0.0) || is_num(&b, 0.0) => num(0.0),
        _ if is_num(&a, 1.0) => b,
        _ if is_num(&b, 1.0) => a,
        _ => Expr::Mul(bx(a), bx(b)),
    }
}

fn div(a: Expr, b: Expr) -> Expr {
    match (&a, &b) {
        (Expr::Num(x), Expr::Num(y)) if *y != 0.0 => num(x / y),
        _ if is_num(&a, 0.0) => num(0.0),
        _ if is_num(&b, 1.0) => a,
        _ => Expr::Div(bx(a), bx(b)),
    }
}

fn neg(a: Expr) -> Expr {
    match a {
        Expr::Num(x) => num(-x),
        Expr::Neg(inner) => *inner,
        other => Expr::Neg(bx(other)),
    }
}

fn pow(a: Expr, n: f64) -> Expr {
    if n == 0.0 {
        num(1.0)
    } else if n == 1.0 {
        a
    } else {
        Expr::Pow(bx(a), n)
    }
}

impl Expr {
    /// Symbolic derivative with respect to `var`, lightly simplified.
    pub fn differentiate(&self, var: &str) -> Expr {
        match self {
            Expr::Num(_) | Expr::Pi | Expr::Param(_) => num(0.0),
            Expr::Var(n) => num(if n == var { 1.0 } else { 0.0 }),
            Expr::Neg(a) => neg(a.differentiate(var)),
            Expr::Add(a, b) => add(a.differentiate(var), b.differentiate(var)),
            Expr::Sub(a, b) => sub(a.differentiate(var), b.differentiate(var)),
            Expr::Mul(a, b) => add(
                mul(a.differentiate(var), (**b).clone()),
                mul((**a).clone(), b.differentiate(var)),
            ),
            Expr::Div(a, b) => {
                let da = a.differentiate(var);
                let db = b.differentiate(var);
                if is_num(&db, 0.0) {
                    div(da, (**b).clone())
                } else {
                    div(
                        sub(mul(da, (**b).clone()), mul((**a).clone(), db)),
                        pow((**b).clone(), 2.0),
                    )
                }
            }
            Expr::Pow(a, n) => mul(
                mul(num(*n), pow((**a).clone(), n - 1.0)),
                a.differentiate(var),
            ),
            Expr::Call(f, a) => {
                let inner = (**a).clone();
                let da = a.differentiate(var);
                match f {
                    Func::Sin => mul(Expr::Call(Func::Cos, bx(inner)), da),
                    Func::Cos => mul(neg(Expr::Call(Func::Sin, bx(inner))), da),
                    Func::Arccos => neg(div(
                        da,
                        Expr::Call(Func::Sqrt, bx(sub(num(1.0), pow(inner, 2.0)))),
                    )),
                    Func::Sqrt => div(da, mul(num(2.0), Expr::Call(Func::Sqrt, bx(inner)))),
                }
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Printing

impl Expr {
    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Neg(_) => 3,
            Expr::Pow(..) => 4,
            Expr::Num(v) if *v < 0.0 || v.is_sign_negative() => 3,
            _ => 5,
        }
    }
}

fn fmt_child(f: &mut fmt::Formatter<'_>, e: &Expr, min: u8) -> fmt::Result {
    if e.precedence() < min {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

fn fmt_number(f: &mut fmt::Formatter<'_>, v: f64) -> fmt::Result {
    // `Display` for f64 never uses exponent notation and round-trips exactly.
    write!(f, "{v}")
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(v) => fmt_number(f, *v),
            Expr::Pi => f.write_str("pi"),
            Expr::Param(n) | Expr::Var(n) => f.write_str(n),
            Expr::Neg(a) => {
                f.write_str("-")?;
                fmt_child(f, a, 3)
            }
            Expr::Call(func, a) => write!(f, "{}({a})", func.name()),
            Expr::Add(a, b) => {
                fmt_child(f, a, 1)?;
                f.write_str(" + ")?;
                fmt_child(f, b, 2)
            }
            Expr::Sub(a, b) => {
                fmt_child(f, a, 1)?;
                f.write_str(" - ")?;
                fmt_child(f, b, 2)
            }
            Expr::Mul(a, b) => {
                fmt_child(f, a, 2)?;
                f.write_str("*")?;
                fmt_child(f, b, 3)
            }
            Expr::Div(a, b) => {
                fmt_child(f, a, 2)?;
                f.write_str("/")?;
                fmt_child(f, b, 3)
            }
            Expr::Pow(a, n) => {
                fmt_child(f, a, 5)?;
                f.write_str("^")?;
                if *n < 0.0 {
                    f.write_str("(")?;
                    fmt_number(f, *n)?;
                    f.write_str(")")
                } else {
                    fmt_number(f, *n)
                }
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Curves

/// A parsed curve with its parameters bound and its derivative prepared.
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    source: Expr,
    variable: String,
    bound: Expr,
    derivative: Expr,
}

impl Curve {
    pub fn new(expr: Expr, variable: &str, parameters: &Bindings) -> Result<Self, ExprError> {
        let bound = expr.substitute(parameters)?;
        let derivative = bound.differentiate(variable);
        Ok(Curve {
            source: expr,
            variable: variable.to_string(),
            bound,
            derivative,
        })
    }

    /// Parses `source` with `variable` free and every name in `parameters` declared.
    pub fn parse(source: &str, variable: &str, parameters: &Bindings) -> Result<Self, ExprError> {
        let scope = parameters
            .iter()
            .fold(Scope::variable(variable), |s, (name, _)| {
                s.with_parameter(name)
            });
        Curve::new(parse(source, &scope)?, variable, parameters)
    }

    pub fn expr(&self) -> &Expr {
        &self.source
    }

    pub fn variable(&self) -> &str {
        &self.variable
    }

    pub fn derivative_expr(&self) -> &Expr {
        &self.derivative
    }

    pub fn eval(&self, t: f64) -> Result<f64, ExprError> {
        self.bound.eval_with(&|_| Ok(t))
    }

    pub fn eval_derivative(&self, t: f64) -> Result<f64, ExprError> {
        self.derivative.eval_with(&|_| Ok(t))
    }
}
