//! Expressions in the single variable `t` for user-supplied coefficient fields.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := '-' unary | power
//! power := atom ('^' unary)?
//! atom  := NUMBER | 't' | 'pi' | IDENT '(' expr ')' | '(' expr ')'
//! ```
//!
//! `^` binds tighter than unary minus and associates to the right, so
//! `-2^2 = -4` and `2^3^2 = 512`.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::fracops::{erfc, gamma_fn};
use crate::scalar::Real;
use crate::solver::Field;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
            BinOp::Pow => '^',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Ln,
    Sqrt,
    Abs,
    Erfc,
    Gamma,
}

impl Func {
    pub const ALL: [Func; 8] = [
        Func::Sin,
        Func::Cos,
        Func::Exp,
        Func::Ln,
        Func::Sqrt,
        Func::Abs,
        Func::Erfc,
        Func::Gamma,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Sqrt => "sqrt",
            Func::Abs => "abs",
            Func::Erfc => "erfc",
            Func::Gamma => "gamma",
        }
    }

    fn lookup(name: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == name)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Var,
    Pi,
    Neg(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("syntax error at byte {offset}: expected {}, found {found}", expected.join(" or "))]
    Syntax {
        offset: usize,
        expected: Vec<&'static str>,
        found: String,
    },
    #[error("unknown identifier `{name}` at byte {offset}")]
    UnknownIdentifier { name: String, offset: usize },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("{function} is undefined at {argument}")]
    Domain { function: &'static str, argument: f64 },
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(char),
    LParen,
    RParen,
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Num(v) => write!(f, "number {v}"),
            Tok::Ident(s) => write!(f, "identifier `{s}`"),
            Tok::Op(c) => write!(f, "`{c}`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::End => f.write_str("end of input"),
        }
    }
}

fn tokenize(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    let digits_from = |mut j: usize| {
        while j < bytes.len() && bytes[j].is_ascii_digit() {
            j += 1;
        }
        j
    };
    while i < bytes.len() {
        let c = bytes[i];
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => i += 1,
            b'0'..=b'9' | b'.' => {
                let start = i;
                let mut j = digits_from(i);
                let int_digits = j - start;
                let mut frac_digits = 0;
                if j < bytes.len() && bytes[j] == b'.' {
                    let k = digits_from(j + 1);
                    frac_digits = k - j - 1;
                    j = k;
                }
                if int_digits + frac_digits == 0 {
                    return Err(ParseError::Syntax {
                        offset: start,
                        expected: vec!["digit"],
                        found: "`.`".into(),
                    });
                }
                if j < bytes.len() && (bytes[j] == b'e' || bytes[j] == b'E') {
                    let mut k = j + 1;
                    if k < bytes.len() && (bytes[k] == b'+' || bytes[k] == b'-') {
                        k += 1;
                    }
                    let end = digits_from(k);
                    if end > k {
                        j = end;
                    }
                }
                let value = src[start..j].parse::<f64>().map_err(|_| ParseError::Syntax {
                    offset: start,
                    expected: vec!["number"],
                    found: src[start..j].to_string(),
                })?;
                out.push((Tok::Num(value), start));
                i = j;
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((Tok::Ident(src[start..i].to_string()), start));
            }
            b'+' | b'-' | b'*' | b'/' | b'^' => {
                out.push((Tok::Op(c as char), i));
                i += 1;
            }
            b'(' => {
                out.push((Tok::LParen, i));
                i += 1;
            }
            b')' => {
                out.push((Tok::RParen, i));
                i += 1;
            }
            _ => {
                let ch = src[i..].chars().next().unwrap_or('?');
                return Err(ParseError::Syntax {
                    offset: i,
                    expected: vec!["number", "identifier", "operator", "parenthesis"],
                    found: format!("`{ch}`"),
                });
            }
        }
    }
    out.push((Tok::End, src.len()));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &[&'static str]) -> ParseError {
        ParseError::Syntax {
            offset: self.offset(),
            expected: expected.to_vec(),
            found: self.peek().to_string(),
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Tok::Op('+') => BinOp::Add,
                Tok::Op('-') => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Tok::Op('*') => BinOp::Mul,
                Tok::Op('/') => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.unary()?;
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if *self.peek() == Tok::Op('-') {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if *self.peek() == Tok::Op('^') {
            self.bump();
            let exponent = self.unary()?;
            return Ok(Expr::Binary(BinOp::Pow, Box::new(base), Box::new(exponent)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        const ATOM: &[&str] = &["number", "`t`", "`pi`", "function call", "`(`", "`-`"];
        let offset = self.offset();
        match self.peek().clone() {
            Tok::Num(v) => {
                self.bump();
                Ok(Expr::Num(v))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                self.expect_rparen()?;
                Ok(inner)
            }
            Tok::Ident(name) => {
                self.bump();
                match name.as_str() {
                    "t" => Ok(Expr::Var),
                    "pi" => Ok(Expr::Pi),
                    _ => {
                        let Some(func) = Func::lookup(&name) else {
                            return Err(ParseError::UnknownIdentifier { name, offset });
                        };
                        if *self.peek() != Tok::LParen {
                            return Err(self.error(&["`(`"]));
                        }
                        self.bump();
                        let arg = self.expr()?;
                        self.expect_rparen()?;
                        Ok(Expr::Call(func, Box::new(arg)))
                    }
                }
            }
            _ => Err(self.error(ATOM)),
        }
    }

    fn expect_rparen(&mut self) -> Result<(), ParseError> {
        if *self.peek() == Tok::RParen {
            self.bump();
            Ok(())
        } else {
            Err(self.error(&["`)`", "operator"]))
        }
    }
}

pub fn parse_expr(src: &str) -> Result<Expr, ParseError> {
    let mut parser = Parser {
        toks: tokenize(src)?,
        pos: 0,
    };
    if *parser.peek() == Tok::End {
        return Err(parser.error(&["expression"]));
    }
    let expr = parser.expr()?;
    if *parser.peek() != Tok::End {
        return Err(parser.error(&["operator", "end of input"]));
    }
    Ok(expr)
}

impl FromStr for Expr {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_expr(s)
    }
}

impl Expr {
    pub fn eval<T: Real>(&self, t: T) -> Result<T, EvalError> {
        let domain = |function: &'static str, argument: T| EvalError::Domain {
            function,
            argument: argument.as_f64(),
        };
        Ok(match self {
            Expr::Num(v) => T::lit(*v),
            Expr::Var => t,
            Expr::Pi => T::PI(),
            Expr::Neg(e) => -e.eval(t)?,
            Expr::Binary(op, l, r) => {
                let (a, b) = (l.eval(t)?, r.eval(t)?);
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => {
                        if b == T::zero() {
                            return Err(EvalError::DivisionByZero);
                        }
                        a / b
                    }
                    BinOp::Pow => {
                        let v = a.powf(b);
                        if v.is_nan() && !a.is_nan() && !b.is_nan() {
                            return Err(domain("^", a));
                        }
                        v
                    }
                }
            }
            Expr::Call(func, arg) => {
                let x = arg.eval(t)?;
                match func {
                    Func::Sin => x.sin(),
                    Func::Cos => x.cos(),
                    Func::Exp => x.exp(),
                    Func::Abs => x.abs(),
                    Func::Erfc => erfc(x),
                    Func::Ln => {
                        if !(x > T::zero()) {
                            return Err(domain("ln", x));
                        }
                        x.ln()
                    }
                    Func::Sqrt => {
                        if x < T::zero() {
                            return Err(domain("sqrt", x));
                        }
                        x.sqrt()
                    }
                    Func::Gamma => gamma_fn(x).map_err(|_| domain("gamma", x))?,
                }
            }
        })
    }

    /// Wraps the expression as a coefficient field; evaluation failures become NaN.
    pub fn to_field<T: Real>(&self) -> Field<T> {
        let expr = self.clone();
        std::sync::Arc::new(move |t| expr.eval(t).unwrap_or(T::nan()))
    }
}

/// Fully parenthesized form that reparses to the same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(v) => write!(f, "{v:?}"),
            Expr::Var => f.write_str("t"),
            Expr::Pi => f.write_str("pi"),
            Expr::Neg(e) => write!(f, "(-{e})"),
            Expr::Binary(op, l, r) => write!(f, "({l} {} {r})", op.symbol()),
            Expr::Call(func, arg) => write!(f, "{}({arg})", func.name()),
        }
    }
}
