//! A small exact-rational expression language for scenario data.
//!
//! Grammar: numbers (`3`, `2/3` is division), identifiers, `+ - * /`,
//! parentheses, unary minus and the functions `floor`, `ceil`, `abs`,
//! `min`, `max` and `part(q, e)` (the index `n` with `n*e <= q < (n+1)*e`).

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::rational::Rational;

pub type Env = BTreeMap<String, Rational>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error("cannot parse `{text}`: {message}")]
    Parse { text: String, message: String },
    #[error("unknown name `{0}`")]
    Unknown(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("part() needs a positive step")]
    NonPositiveStep,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Floor,
    Ceil,
    Abs,
    Min,
    Max,
    Part,
}

impl Func {
    fn named(name: &str) -> Option<(Func, usize)> {
        Some(match name {
            "floor" => (Func::Floor, 1),
            "ceil" => (Func::Ceil, 1),
            "abs" => (Func::Abs, 1),
            "min" => (Func::Min, 2),
            "max" => (Func::Max, 2),
            "part" => (Func::Part, 2),
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Num(Rational),
    Var(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Call(Func, Vec<Expr>),
}

/// The `n` with `n*step <= q < (n+1)*step`.
pub fn epsilon_partition(q: Rational, step: Rational) -> Result<Rational, ExprError> {
    if !step.is_positive() {
        return Err(ExprError::NonPositiveStep);
    }
    Ok((q / step).floor())
}

impl Expr {
    pub fn eval(&self, env: &Env) -> Result<Rational, ExprError> {
        Ok(match self {
            Expr::Num(v) => *v,
            Expr::Var(name) => *env.get(name).ok_or_else(|| ExprError::Unknown(name.clone()))?,
            Expr::Neg(e) => -e.eval(env)?,
            Expr::Add(a, b) => a.eval(env)? + b.eval(env)?,
            Expr::Sub(a, b) => a.eval(env)? - b.eval(env)?,
            Expr::Mul(a, b) => a.eval(env)? * b.eval(env)?,
            Expr::Div(a, b) => {
                let d = b.eval(env)?;
                if d.is_zero() {
                    return Err(ExprError::DivisionByZero);
                }
                a.eval(env)? / d
            }
            Expr::Call(f, args) => {
                let v = args.iter().map(|a| a.eval(env)).collect::<Result<Vec<_>, _>>()?;
                match f {
                    Func::Floor => v[0].floor(),
                    Func::Ceil => v[0].ceil(),
                    Func::Abs => v[0].abs(),
                    Func::Min => v[0].min(v[1]),
                    Func::Max => v[0].max(v[1]),
                    Func::Part => epsilon_partition(v[0], v[1])?,
                }
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Num(i128),
    Ident(String),
    Op(char),
}

fn tokenize(text: &str) -> Result<Vec<Token>, String> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push(Token::Num(s.parse().map_err(|_| format!("number `{s}` too large"))?));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Token::Ident(chars[start..i].iter().collect()));
        } else if "+-*/(),".contains(c) {
            out.push(Token::Op(c));
            i += 1;
        } else {
            return Err(format!("unexpected character `{c}`"));
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Token::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr, String> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, String> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat('/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, String> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Expr, String> {
        match self.peek().cloned() {
            Some(Token::Num(n)) => {
                self.pos += 1;
                Ok(Expr::Num(Rational::from_integer(n)))
            }
            Some(Token::Ident(name)) => {
                self.pos += 1;
                if self.eat('(') {
                    let (f, arity) = Func::named(&name).ok_or_else(|| format!("unknown function `{name}`"))?;
                    let mut args = vec![self.expr()?];
                    while self.eat(',') {
                        args.push(self.expr()?);
                    }
                    if !self.eat(')') {
                        return Err("missing `)`".into());
                    }
                    if args.len() != arity {
                        return Err(format!("`{name}` takes {arity} argument(s)"));
                    }
                    Ok(Expr::Call(f, args))
                } else {
                    Ok(Expr::Var(name))
                }
            }
            Some(Token::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err("missing `)`".into());
                }
                Ok(e)
            }
            Some(t) => Err(format!("unexpected {t:?}")),
            None => Err("unexpected end".into()),
        }
    }
}

pub fn parse_expr(text: &str) -> Result<Expr, ExprError> {
    let err = |message: String| ExprError::Parse { text: text.trim().to_string(), message };
    let tokens = tokenize(text).map_err(err)?;
    let mut p = Parser { tokens, pos: 0 };
    let e = p.expr().map_err(err)?;
    if p.pos != p.tokens.len() {
        return Err(err("trailing input".into()));
    }
    Ok(e)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
}

impl Relation {
    pub fn holds(self, lhs: Rational, rhs: Rational) -> bool {
        match self {
            Relation::Lt => lhs < rhs,
            Relation::Le => lhs <= rhs,
            Relation::Gt => lhs > rhs,
            Relation::Ge => lhs >= rhs,
            Relation::Eq => lhs == rhs,
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            Relation::Lt => "<",
            Relation::Le => "<=",
            Relation::Gt => ">",
            Relation::Ge => ">=",
            Relation::Eq => "=",
        }
    }
}

/// `lhs <rel> rhs`, remembered with its source text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Condition {
    pub lhs: Expr,
    pub rel: Relation,
    pub rhs: Expr,
    pub text: String,
}

impl Condition {
    pub fn eval(&self, env: &Env) -> Result<(bool, Rational, Rational), ExprError> {
        let l = self.lhs.eval(env)?;
        let r = self.rhs.eval(env)?;
        Ok((self.rel.holds(l, r), l, r))
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.text)
    }
}

/// Parses `lhs <rel> rhs` with a single top-level relation.
pub fn parse_condition(text: &str) -> Result<Condition, ExprError> {
    let err = |message: &str| ExprError::Parse { text: text.trim().to_string(), message: message.to_string() };
    let bytes = text.as_bytes();
    let mut depth = 0i32;
    let mut found: Option<(usize, usize, Relation)> = None;
    let mut i = 0;
    while i < bytes.len() {
        match bytes[i] {
            b'(' => depth += 1,
            b')' => depth -= 1,
            b'<' | b'>' | b'=' if depth == 0 => {
                let two = bytes.get(i + 1) == Some(&b'=');
                let (rel, width) = match (bytes[i], two) {
                    (b'<', true) => (Relation::Le, 2),
                    (b'>', true) => (Relation::Ge, 2),
                    (b'<', false) => (Relation::Lt, 1),
                    (b'>', false) => (Relation::Gt, 1),
                    _ => (Relation::Eq, 1),
                };
                if found.is_some() {
                    return Err(err("more than one relation"));
                }
                found = Some((i, width, rel));
                i += width;
                continue;
            }
            _ => {}
        }
        i += 1;
    }
    let (at, width, rel) = found.ok_or_else(|| err("missing relation"))?;
    let lhs = parse_expr(&text[..at])?;
    let rhs = parse_expr(&text[at + width..])?;
    let text = format!("{} {} {}", text[..at].trim(), rel.symbol(), text[at + width..].trim());
    Ok(Condition { lhs, rel, rhs, text })
}
