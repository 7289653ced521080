//! Arithmetic expressions shared by the map DSL and user-defined metrics.
//!
//! Grammar:
//!
//! ```text
//! expr  := term (("+" | "-") term)*
//! term  := unary (("*" | "/") unary)*
//! unary := "-" unary | atom
//! atom  := number | var | func "(" expr ")" | "(" expr ")"
//! func  := "abs" | "exp" | "ln"
//! ```
//!
//! Variables are a letter (`x` for maps, `x`/`y`/`z` for metrics) followed by
//! a 1-based coordinate index. In dimension 1 the bare letter is accepted.
//! A minus sign directly in front of a number literal folds into the literal.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::error::{EvalError, ParseError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Abs,
    Exp,
    Ln,
}

impl Func {
    fn name(self) -> &'static str {
        match self {
            Func::Abs => "abs",
            Func::Exp => "exp",
            Func::Ln => "ln",
        }
    }

    fn from_name(name: &str) -> Option<Func> {
        match name {
            "abs" => Some(Func::Abs),
            "exp" => Some(Func::Exp),
            "ln" => Some(Func::Ln),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl BinOp {
    fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
        }
    }

    fn precedence(self) -> u8 {
        match self {
            BinOp::Add | BinOp::Sub => 1,
            BinOp::Mul | BinOp::Div => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    /// Coordinate `index` (0-based) of argument `arg` (0 = x, 1 = y, 2 = z).
    Var {
        arg: usize,
        index: usize,
    },
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

/// Variable letters and dimension an expression is parsed against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Vars {
    pub letters: &'static [char],
    pub dim: usize,
}

impl Vars {
    pub const fn map(dim: usize) -> Self {
        Vars { letters: &['x'], dim }
    }

    pub const fn metric(dim: usize) -> Self {
        Vars { letters: &['x', 'y', 'z'], dim }
    }
}

impl Expr {
    pub fn parse(src: &str, vars: Vars) -> Result<Expr, ParseError> {
        let mut p = Parser::new(src)?;
        let e = p.expr(vars)?;
        p.expect_eof()?;
        Ok(e)
    }

    pub fn constant(v: f64) -> Expr {
        Expr::Num(v)
    }

    pub fn var(index: usize) -> Expr {
        Expr::Var { arg: 0, index }
    }

    /// `args[a][i]` binds coordinate `i` of argument `a`.
    pub fn eval(&self, args: &[&[f64]]) -> Result<f64, EvalError> {
        let v = match self {
            Expr::Num(v) => *v,
            Expr::Var { arg, index } => *args
                .get(*arg)
                .and_then(|a| a.get(*index))
                .ok_or(EvalError::UnboundVariable { arg: *arg, index: *index })?,
            Expr::Neg(e) => -e.eval(args)?,
            Expr::Bin(op, l, r) => {
                let a = l.eval(args)?;
                let b = r.eval(args)?;
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => {
                        if b == 0.0 {
                            return Err(EvalError::DivisionByZero);
                        }
                        a / b
                    }
                }
            }
            Expr::Call(func, e) => {
                let a = e.eval(args)?;
                match func {
                    Func::Abs => libm::fabs(a),
                    Func::Exp => libm::exp(a),
                    Func::Ln => {
                        if a <= 0.0 {
                            return Err(EvalError::LogOfNonPositive(a));
                        }
                        libm::log(a)
                    }
                }
            }
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(EvalError::NonFinite)
        }
    }

    /// Largest coordinate index referenced for argument `arg`, plus one.
    pub fn arity(&self, arg: usize) -> usize {
        match self {
            Expr::Num(_) => 0,
            Expr::Var { arg: a, index } => {
                if *a == arg {
                    index + 1
                } else {
                    0
                }
            }
            Expr::Neg(e) | Expr::Call(_, e) => e.arity(arg),
            Expr::Bin(_, l, r) => l.arity(arg).max(r.arity(arg)),
        }
    }

    pub fn display(&self, vars: Vars) -> ExprDisplay<'_> {
        ExprDisplay { expr: self, vars }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Bin(op, _, _) => op.precedence(),
            Expr::Neg(_) => 3,
            Expr::Num(v) if v.is_sign_negative() => 3,
            _ => 4,
        }
    }
}

/// Prints an expression in a form that parses back to the identical tree.
pub struct ExprDisplay<'a> {
    expr: &'a Expr,
    vars: Vars,
}

impl ExprDisplay<'_> {
    fn sub<'b>(&self, e: &'b Expr) -> ExprDisplay<'b> {
        ExprDisplay { expr: e, vars: self.vars }
    }

    fn write_paren(&self, f: &mut fmt::Formatter<'_>, e: &Expr, paren: bool) -> fmt::Result {
        if paren {
            write!(f, "({})", self.sub(e))
        } else {
            write!(f, "{}", self.sub(e))
        }
    }
}

impl fmt::Display for ExprDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.expr {
            Expr::Num(v) => write_number(f, *v),
            Expr::Var { arg, index } => {
                let letter = self.vars.letters.get(*arg).copied().unwrap_or('?');
                if self.vars.dim == 1 && *index == 0 {
                    write!(f, "{letter}")
                } else {
                    write!(f, "{letter}{}", index + 1)
                }
            }
            Expr::Neg(e) => {
                f.write_str("-")?;
                let paren = matches!(**e, Expr::Num(_) | Expr::Neg(_) | Expr::Bin(..));
                self.write_paren(f, e, paren)
            }
            Expr::Bin(op, l, r) => {
                let p = op.precedence();
                self.write_paren(f, l, l.precedence() < p)?;
                write!(f, " {} ", op.symbol())?;
                self.write_paren(f, r, r.precedence() <= p)
            }
            Expr::Call(func, e) => write!(f, "{}({})", func.name(), self.sub(e)),
        }
    }
}

pub(crate) fn write_number(f: &mut fmt::Formatter<'_>, v: f64) -> fmt::Result {
    // `-0` would parse back as the literal 0 negated; keep the sign explicit.
    if v == 0.0 && v.is_sign_negative() {
        return f.write_str("-0");
    }
    write!(f, "{v}")
}

// ---------------------------------------------------------------------------
// Lexer

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Tok {
    Num(f64),
    Ident(String),
    Sym(&'static str),
    Eof,
}

#[derive(Debug, Clone)]
pub(crate) struct Token {
    pub tok: Tok,
    pub line: usize,
    pub column: usize,
}

const SYMBOLS: &[&str] = &["->", ">=", "<=", "==", "+", "-", "*", "/", "(", ")", ",", ";", "{", "}", "<", ">", "="];

pub(crate) fn tokenize(src: &str) -> Result<Vec<Token>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let (mut i, mut line, mut line_start) = (0usize, 1usize, 0usize);
    while i < bytes.len() {
        let c = bytes[i];
        let column = i - line_start + 1;
        if c == b'\n' {
            i += 1;
            line += 1;
            line_start = i;
            continue;
        }
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() || (c == b'.' && bytes.get(i + 1).is_some_and(u8::is_ascii_digit)) {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            if i < bytes.len() && bytes[i] == b'.' {
                i += 1;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
            }
            if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                let mut j = i + 1;
                if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                    j += 1;
                }
                if j < bytes.len() && bytes[j].is_ascii_digit() {
                    while j < bytes.len() && bytes[j].is_ascii_digit() {
                        j += 1;
                    }
                    i = j;
                }
            }
            let text = &src[start..i];
            let v: f64 =
                text.parse().map_err(|_| ParseError { line, column, message: format!("malformed number `{text}`") })?;
            out.push(Token { tok: Tok::Num(v), line, column });
            continue;
        }
        if c.is_ascii_alphabetic() || c == b'_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push(Token { tok: Tok::Ident(src[start..i].to_string()), line, column });
            continue;
        }
        match SYMBOLS.iter().find(|s| src[i..].starts_with(**s)) {
            Some(s) => {
                out.push(Token { tok: Tok::Sym(s), line, column });
                i += s.len();
            }
            None => {
                let ch = src[i..].chars().next().unwrap_or('?');
                return Err(ParseError { line, column, message: format!("unexpected character `{ch}`") });
            }
        }
    }
    out.push(Token { tok: Tok::Eof, line, column: i - line_start + 1 });
    Ok(out)
}

// ---------------------------------------------------------------------------
// Parser

pub(crate) struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    pub fn new(src: &str) -> Result<Self, ParseError> {
        Ok(Parser { toks: tokenize(src)?, pos: 0 })
    }

    pub fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    pub fn peek_at(&self, ahead: usize) -> &Tok {
        let i = (self.pos + ahead).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    pub fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    pub fn error<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        let t = &self.toks[self.pos];
        Err(ParseError { line: t.line, column: t.column, message: message.into() })
    }

    pub fn is_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Sym(x) if *x == s)
    }

    pub fn eat_sym(&mut self, s: &str) -> bool {
        if self.is_sym(s) {
            self.bump();
            true
        } else {
            false
        }
    }

    pub fn expect_sym(&mut self, s: &str) -> Result<(), ParseError> {
        if self.eat_sym(s) {
            Ok(())
        } else {
            self.error(format!("expected `{s}`, found {}", describe(self.peek())))
        }
    }

    pub fn expect_eof(&self) -> Result<(), ParseError> {
        match self.peek() {
            Tok::Eof => Ok(()),
            t => self.error(format!("unexpected {}", describe(t))),
        }
    }

    /// A signed number literal, optionally written as a fraction `p/q`.
    pub fn number(&mut self) -> Result<f64, ParseError> {
        let neg = self.eat_sym("-");
        let mut v = match self.peek() {
            Tok::Num(v) => *v,
            t => return self.error(format!("expected a number, found {}", describe(t))),
        };
        self.bump();
        if self.is_sym("/") && matches!(self.peek_at(1), Tok::Num(_)) {
            self.bump();
            let Tok::Num(q) = self.bump() else { unreachable!() };
            if q == 0.0 {
                return self.error("zero denominator in fraction");
            }
            v /= q;
        }
        Ok(if neg { -v } else { v })
    }

    pub fn expr(&mut self, vars: Vars) -> Result<Expr, ParseError> {
        let mut lhs = self.term(vars)?;
        loop {
            let op = if self.eat_sym("+") {
                BinOp::Add
            } else if self.eat_sym("-") {
                BinOp::Sub
            } else {
                return Ok(lhs);
            };
            let rhs = self.term(vars)?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn term(&mut self, vars: Vars) -> Result<Expr, ParseError> {
        let mut lhs = self.unary(vars)?;
        loop {
            let op = if self.eat_sym("*") {
                BinOp::Mul
            } else if self.eat_sym("/") {
                BinOp::Div
            } else {
                return Ok(lhs);
            };
            let rhs = self.unary(vars)?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn unary(&mut self, vars: Vars) -> Result<Expr, ParseError> {
        if self.eat_sym("-") {
            if let Tok::Num(v) = *self.peek() {
                self.bump();
                return Ok(Expr::Num(-v));
            }
            return Ok(Expr::Neg(Box::new(self.unary(vars)?)));
        }
        self.atom(vars)
    }

    fn atom(&mut self, vars: Vars) -> Result<Expr, ParseError> {
        match self.peek().clone() {
            Tok::Num(v) => {
                self.bump();
                Ok(Expr::Num(v))
            }
            Tok::Sym("(") => {
                self.bump();
                let e = self.expr(vars)?;
                self.expect_sym(")")?;
                Ok(e)
            }
            Tok::Ident(name) => {
                if let Some(func) = Func::from_name(&name) {
                    self.bump();
                    self.expect_sym("(")?;
                    let e = self.expr(vars)?;
                    self.expect_sym(")")?;
                    return Ok(Expr::Call(func, Box::new(e)));
                }
                let (arg, index) = self.variable(&name, vars)?;
                self.bump();
                Ok(Expr::Var { arg, index })
            }
            t => self.error(format!("expected an expression, found {}", describe(&t))),
        }
    }

    /// Resolves `x`, `x2`, `y1`, ... against `vars` without consuming.
    pub fn variable(&self, name: &str, vars: Vars) -> Result<(usize, usize), ParseError> {
        let mut chars = name.chars();
        let letter = chars.next().unwrap_or(' ');
        let Some(arg) = vars.letters.iter().position(|l| *l == letter) else {
            return self.error(format!("unknown identifier `{name}`"));
        };
        let digits = chars.as_str();
        if digits.is_empty() {
            if vars.dim == 1 {
                return Ok((arg, 0));
            }
            return self.error(format!(
                "bare `{letter}` is only valid in dimension 1; use `{letter}1`..`{letter}{}`",
                vars.dim
            ));
        }
        let k: usize = match digits.parse() {
            Ok(k) if digits.bytes().all(|b| b.is_ascii_digit()) => k,
            _ => return self.error(format!("unknown identifier `{name}`")),
        };
        if k == 0 || k > vars.dim {
            return self.error(format!("dimension mismatch: `{name}` in dimension {}", vars.dim));
        }
        Ok((arg, k - 1))
    }
}

pub(crate) fn describe(t: &Tok) -> String {
    match t {
        Tok::Num(v) => format!("number `{v}`"),
        Tok::Ident(s) => format!("`{s}`"),
        Tok::Sym(s) => format!("`{s}`"),
        Tok::Eof => "end of input".into(),
    }
}
