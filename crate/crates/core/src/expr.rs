//! Scalar expressions in chart coordinates.
//!
//! Grammar (whitespace-insensitive):
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := primary ('^' unary)?          right-associative
//! primary := number | coordinate | func '(' expr ')' | '(' expr ')'
//! func    := exp | log | sin | cos | sinh | cosh | sqrt
//! number  := digits ['.' digits] | '.' digits
//! ```
//!
//! There is no implicit multiplication and no named constants: `2z` and `e`
//! are both rejected. Expressions evaluate over [`Jet`]s, so every parsed
//! metric or field component carries exact derivatives.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
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

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Func {
    Exp,
    Log,
    Sin,
    Cos,
    Sinh,
    Cosh,
    Sqrt,
}

impl Func {
    pub const ALL: [Func; 7] = [
        Func::Exp,
        Func::Log,
        Func::Sin,
        Func::Cos,
        Func::Sinh,
        Func::Cosh,
        Func::Sqrt,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Sqrt => "sqrt",
        }
    }

    fn from_name(name: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == name)
    }

    fn apply<T: Scalar>(self, arg: &Jet<T>) -> Result<Jet<T>> {
        match self {
            Func::Exp => arg.exp(),
            Func::Log => arg.ln(),
            Func::Sin => arg.sin(),
            Func::Cos => arg.cos(),
            Func::Sinh => arg.sinh(),
            Func::Cosh => arg.cosh(),
            Func::Sqrt => arg.sqrt(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Number(f64),
    /// Coordinate reference; `index` is the position in the chart's
    /// coordinate list.
    Var {
        index: usize,
        name: String,
    },
    Neg(Box<Expr>),
    Binary {
        op: BinOp,
        lhs: Box<Expr>,
        rhs: Box<Expr>,
    },
    Call {
        func: Func,
        arg: Box<Expr>,
    },
}

pub fn parse<S: AsRef<str>>(text: &str, coordinates: &[S]) -> Result<Expr> {
    Expr::parse(text, coordinates)
}

impl Expr {
    pub fn parse<S: AsRef<str>>(text: &str, coordinates: &[S]) -> Result<Expr> {
        let tokens = lex(text)?;
        let coordinates: Vec<&str> = coordinates.iter().map(|c| c.as_ref()).collect();
        let mut parser = Parser {
            tokens,
            pos: 0,
            coordinates,
        };
        let expr = parser.expr()?;
        let tok = parser.peek();
        if tok.kind != TokenKind::End {
            return Err(Error::Syntax {
                offset: tok.offset,
                message: format!("unexpected {}", tok.kind.describe()),
            });
        }
        Ok(expr)
    }

    pub fn number(value: f64) -> Expr {
        Expr::Number(value)
    }

    pub fn free_variables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Expr::Number(_) => {}
            Expr::Var { name, .. } => {
                out.insert(name.clone());
            }
            Expr::Neg(e) | Expr::Call { arg: e, .. } => e.collect_vars(out),
            Expr::Binary { lhs, rhs, .. } => {
                lhs.collect_vars(out);
                rhs.collect_vars(out);
            }
        }
    }

    /// Value of a variable-free expression.
    pub fn constant_value(&self) -> Option<f64> {
        if !self.free_variables().is_empty() {
            return None;
        }
        self.evaluate::<f64>(&[Jet::zero(1, 0)]).ok().map(|j| j.value())
    }

    /// Largest coordinate index referenced, if any.
    pub fn max_var_index(&self) -> Option<usize> {
        match self {
            Expr::Number(_) => None,
            Expr::Var { index, .. } => Some(*index),
            Expr::Neg(e) | Expr::Call { arg: e, .. } => e.max_var_index(),
            Expr::Binary { lhs, rhs, .. } => lhs.max_var_index().max(rhs.max_var_index()),
        }
    }

    /// Evaluates over jets; `vars[i]` is bound to coordinate `i`.
    pub fn evaluate<T: Scalar>(&self, vars: &[Jet<T>]) -> Result<Jet<T>> {
        let proto = vars
            .first()
            .ok_or_else(|| Error::Invalid("no coordinate jets supplied".into()))?;
        if let Some(max) = self.max_var_index() {
            if max >= vars.len() {
                return Err(Error::Invalid(format!(
                    "expression references coordinate {max} but only {} are bound",
                    vars.len()
                )));
            }
        }
        self.eval_node(vars, proto)
    }

    fn eval_node<T: Scalar>(&self, vars: &[Jet<T>], proto: &Jet<T>) -> Result<Jet<T>> {
        let annotate = |e: Error| match e {
            Error::Domain(msg) => Error::Domain(format!("{msg} in `{self}`")),
            other => other,
        };
        let out = match self {
            Expr::Number(v) => proto.lift(T::lit(*v)),
            Expr::Var { index, .. } => vars[*index].clone(),
            Expr::Neg(e) => -e.eval_node(vars, proto)?,
            Expr::Call { func, arg } => {
                let a = arg.eval_node(vars, proto)?;
                func.apply(&a).map_err(annotate)?
            }
            Expr::Binary { op, lhs, rhs } => {
                let l = lhs.eval_node(vars, proto)?;
                match op {
                    BinOp::Add => l + rhs.eval_node(vars, proto)?,
                    BinOp::Sub => l - rhs.eval_node(vars, proto)?,
                    BinOp::Mul => l * rhs.eval_node(vars, proto)?,
                    BinOp::Div => l.checked_div(&rhs.eval_node(vars, proto)?).map_err(annotate)?,
                    BinOp::Pow => match rhs.constant_value() {
                        Some(p) if p.fract() == 0.0 && p.abs() <= 1024.0 => l.powi(p as i32).map_err(annotate)?,
                        Some(p) => l.powf(T::lit(p)).map_err(annotate)?,
                        None => l.pow(&rhs.eval_node(vars, proto)?).map_err(annotate)?,
                    },
                }
            }
        };
        if out.is_finite() {
            Ok(out)
        } else {
            Err(Error::Domain(format!("non-finite value in `{self}`")))
        }
    }
}

impl fmt::Display for Expr {
    /// Fully parenthesised form; re-parsing yields an identical tree.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Number(v) => write!(f, "{v}"),
            Expr::Var { name, .. } => f.write_str(name),
            Expr::Neg(e) => match **e {
                Expr::Number(_) | Expr::Var { .. } | Expr::Call { .. } => write!(f, "-{e}"),
                _ => write!(f, "-({e})"),
            },
            Expr::Binary { op, lhs, rhs } => write!(f, "({lhs} {} {rhs})", op.symbol()),
            Expr::Call { func, arg } => write!(f, "{}({arg})", func.name()),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum TokenKind {
    Number(f64),
    Ident(String),
    Op(char),
    LParen,
    RParen,
    End,
}

impl TokenKind {
    fn describe(&self) -> String {
        match self {
            TokenKind::Number(v) => format!("number {v}"),
            TokenKind::Ident(s) => format!("identifier `{s}`"),
            TokenKind::Op(c) => format!("`{c}`"),
            TokenKind::LParen => "`(`".into(),
            TokenKind::RParen => "`)`".into(),
            TokenKind::End => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
struct Token {
    kind: TokenKind,
    offset: usize,
}

fn lex(text: &str) -> Result<Vec<Token>> {
    let bytes = text.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'0'..=b'9' | b'.' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if i < bytes.len() && bytes[i] == b'.' {
                    i += 1;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                }
                let lexeme = &text[start..i];
                let value: f64 = lexeme.parse().map_err(|_| Error::Syntax {
                    offset: start,
                    message: format!("malformed number `{lexeme}`"),
                })?;
                tokens.push(Token {
                    kind: TokenKind::Number(value),
                    offset: start,
                });
                continue;
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                tokens.push(Token {
                    kind: TokenKind::Ident(text[start..i].to_string()),
                    offset: start,
                });
                continue;
            }
            b'+' | b'-' | b'*' | b'/' | b'^' => tokens.push(Token {
                kind: TokenKind::Op(c as char),
                offset: start,
            }),
            b'(' => tokens.push(Token {
                kind: TokenKind::LParen,
                offset: start,
            }),
            b')' => tokens.push(Token {
                kind: TokenKind::RParen,
                offset: start,
            }),
            _ => {
                let ch = text[start..].chars().next().unwrap_or('?');
                return Err(Error::Syntax {
                    offset: start,
                    message: format!("unexpected character `{ch}`"),
                });
            }
        }
        i += 1;
    }
    if tokens.is_empty() {
        return Err(Error::Syntax {
            offset: 0,
            message: "empty expression".into(),
        });
    }
    tokens.push(Token {
        kind: TokenKind::End,
        offset: text.len(),
    });
    Ok(tokens)
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    coordinates: Vec<&'a str>,
}

impl Parser<'_> {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn next(&mut self) -> Token {
        let tok = self.tokens[self.pos].clone();
        if tok.kind != TokenKind::End {
            self.pos += 1;
        }
        tok
    }

    fn eat_op(&mut self, ops: &[char]) -> Option<char> {
        match self.peek().kind {
            TokenKind::Op(c) if ops.contains(&c) => {
                self.pos += 1;
                Some(c)
            }
            _ => None,
        }
    }

    fn unexpected(tok: &Token) -> Error {
        Error::Syntax {
            offset: tok.offset,
            message: format!("unexpected {}", tok.kind.describe()),
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        while let Some(c) = self.eat_op(&['+', '-']) {
            let rhs = self.term()?;
            let op = if c == '+' { BinOp::Add } else { BinOp::Sub };
            lhs = Expr::Binary {
                op,
                lhs: Box::new(lhs),
                rhs: Box::new(rhs),
            };
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        while let Some(c) = self.eat_op(&['*', '/']) {
            let rhs = self.unary()?;
            let op = if c == '*' { BinOp::Mul } else { BinOp::Div };
            lhs = Expr::Binary {
                op,
                lhs: Box::new(lhs),
                rhs: Box::new(rhs),
            };
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat_op(&['-']).is_some() {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.primary()?;
        if self.eat_op(&['^']).is_some() {
            let exponent = self.unary()?;
            return Ok(Expr::Binary {
                op: BinOp::Pow,
                lhs: Box::new(base),
                rhs: Box::new(exponent),
            });
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr> {
        let tok = self.next();
        match tok.kind {
            TokenKind::Number(v) => Ok(Expr::Number(v)),
            TokenKind::LParen => {
                let inner = self.expr()?;
                let close = self.next();
                if close.kind != TokenKind::RParen {
                    return Err(Self::unexpected(&close));
                }
                Ok(inner)
            }
            TokenKind::Ident(ref name) => {
                let followed_by_paren = self.peek().kind == TokenKind::LParen;
                if let (Some(func), true) = (Func::from_name(name), followed_by_paren) {
                    self.next();
                    let arg = self.expr()?;
                    let close = self.next();
                    if close.kind != TokenKind::RParen {
                        return Err(Self::unexpected(&close));
                    }
                    return Ok(Expr::Call {
                        func,
                        arg: Box::new(arg),
                    });
                }
                if let Some(index) = self.coordinates.iter().position(|c| c == name) {
                    return Ok(Expr::Var {
                        index,
                        name: name.clone(),
                    });
                }
                if Func::from_name(name).is_some() {
                    let after = self.peek().clone();
                    return Err(Error::Syntax {
                        offset: after.offset,
                        message: format!("expected `(` after `{name}`"),
                    });
                }
                Err(Error::UnknownIdentifier {
                    name: name.clone(),
                    offset: tok.offset,
                })
            }
            _ => Err(Self::unexpected(&tok)),
        }
    }
}
