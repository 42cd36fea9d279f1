//! Expression language for pre-potentials and metric components.
//!
//! Grammar (authoritative):
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := factor (('*' | '/') factor)*
//! factor  := unary ('^' uint)?
//! unary   := '-' unary | primary
//! primary := number | 'i' | identifier | func '(' expr ')' | '(' expr ')'
//! ```
//!
//! Identifiers resolve at parse time against the chart's coordinate names and
//! the declared parameter names; `i` is always the imaginary unit. Numbers are
//! double-precision reals; complex values arise only through `i`.

use crate::jet::{AnalyticFn, Jet, JetError};
use num_complex::Complex64;
use std::collections::{BTreeSet, HashMap};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ParseError {
    #[error("syntax error at line {line}, column {col}: {msg}")]
    Syntax { line: u32, col: u32, msg: String },
    #[error("unknown identifier `{name}` at line {line}, column {col}")]
    UnknownIdentifier { name: String, line: u32, col: u32 },
    #[error("exponent must be a non-negative integer literal at line {line}, column {col}")]
    BadExponent { line: u32, col: u32 },
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EvalError {
    #[error("parameter `{0}` is not bound")]
    UnboundParameter(String),
    #[error(transparent)]
    Jet(#[from] JetError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FuncTag {
    Sin,
    Cos,
    Sinh,
    Cosh,
    Exp,
    Ln,
    Sqrt,
    Re,
    Im,
    Conj,
}

impl FuncTag {
    fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "sin" => Self::Sin,
            "cos" => Self::Cos,
            "sinh" => Self::Sinh,
            "cosh" => Self::Cosh,
            "exp" => Self::Exp,
            "ln" => Self::Ln,
            "sqrt" => Self::Sqrt,
            "re" => Self::Re,
            "im" => Self::Im,
            "conj" => Self::Conj,
            _ => return None,
        })
    }

    fn name(&self) -> &'static str {
        match self {
            Self::Sin => "sin",
            Self::Cos => "cos",
            Self::Sinh => "sinh",
            Self::Cosh => "cosh",
            Self::Exp => "exp",
            Self::Ln => "ln",
            Self::Sqrt => "sqrt",
            Self::Re => "re",
            Self::Im => "im",
            Self::Conj => "conj",
        }
    }
}

/// A parsed expression over one chart's coordinates and a parameter set.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    ImagUnit,
    /// Coordinate by axis index into the owning chart's coordinate list.
    Coord(usize),
    Param(String),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    Func(FuncTag, Box<Expr>),
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num { text: String, is_int: bool },
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
    line: u32,
    col: u32,
}

type Spanned = (Tok, u32, u32);

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Self {
            src: src.as_bytes(),
            pos: 0,
            line: 1,
            col: 1,
        }
    }

    fn bump(&mut self) -> u8 {
        let b = self.src[self.pos];
        self.pos += 1;
        if b == b'\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        b
    }

    fn tokens(mut self) -> Result<Vec<Spanned>, ParseError> {
        let mut out = Vec::new();
        while self.pos < self.src.len() {
            let (line, col) = (self.line, self.col);
            let b = self.src[self.pos];
            match b {
                b' ' | b'\t' | b'\r' | b'\n' => {
                    self.bump();
                }
                b'+' => {
                    self.bump();
                    out.push((Tok::Plus, line, col));
                }
                b'-' => {
                    self.bump();
                    out.push((Tok::Minus, line, col));
                }
                b'*' => {
                    self.bump();
                    out.push((Tok::Star, line, col));
                }
                b'/' => {
                    self.bump();
                    out.push((Tok::Slash, line, col));
                }
                b'^' => {
                    self.bump();
                    out.push((Tok::Caret, line, col));
                }
                b'(' => {
                    self.bump();
                    out.push((Tok::LParen, line, col));
                }
                b')' => {
                    self.bump();
                    out.push((Tok::RParen, line, col));
                }
                b'0'..=b'9' | b'.' => {
                    let mut text = String::new();
                    let mut is_int = true;
                    while self.pos < self.src.len() {
                        match self.src[self.pos] {
                            b'0'..=b'9' => text.push(self.bump() as char),
                            b'.' => {
                                is_int = false;
                                text.push(self.bump() as char);
                            }
                            b'e' | b'E' => {
                                // exponent part must be followed by digits or sign
                                let next = self.src.get(self.pos + 1);
                                if matches!(next, Some(b'0'..=b'9') | Some(b'+') | Some(b'-')) {
                                    is_int = false;
                                    text.push(self.bump() as char);
                                    if matches!(self.src.get(self.pos), Some(b'+') | Some(b'-')) {
                                        text.push(self.bump() as char);
                                    }
                                } else {
                                    break;
                                }
                            }
                            _ => break,
                        }
                    }
                    if text.parse::<f64>().is_err() {
                        return Err(ParseError::Syntax {
                            line,
                            col,
                            msg: format!("malformed number `{text}`"),
                        });
                    }
                    out.push((Tok::Num { text, is_int }, line, col));
                }
                b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                    let mut name = String::new();
                    while self.pos < self.src.len()
                        && matches!(self.src[self.pos], b'a'..=b'z' | b'A'..=b'Z' | b'0'..=b'9' | b'_')
                    {
                        name.push(self.bump() as char);
                    }
                    out.push((Tok::Ident(name), line, col));
                }
                other => {
                    return Err(ParseError::Syntax {
                        line,
                        col,
                        msg: format!("unexpected character `{}`", other as char),
                    })
                }
            }
        }
        Ok(out)
    }
}

struct Parser<'a> {
    toks: Vec<Spanned>,
    pos: usize,
    coords: &'a [String],
    params: &'a [String],
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _, _)| t)
    }

    fn here(&self) -> (u32, u32) {
        self.toks
            .get(self.pos)
            .or_else(|| self.toks.last())
            .map(|&(_, l, c)| (l, c))
            .unwrap_or((1, 1))
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _, _)| t.clone());
        self.pos += 1;
        t
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        let (line, col) = self.here();
        match self.bump() {
            Some(t) if t == tok => Ok(()),
            other => Err(ParseError::Syntax {
                line,
                col,
                msg: format!("expected {what}, found {other:?}"),
            }),
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    lhs = Expr::Bin(BinOp::Add, Box::new(lhs), Box::new(self.term()?));
                }
                Some(Tok::Minus) => {
                    self.bump();
                    lhs = Expr::Bin(BinOp::Sub, Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    lhs = Expr::Bin(BinOp::Mul, Box::new(lhs), Box::new(self.factor()?));
                }
                Some(Tok::Slash) => {
                    self.bump();
                    lhs = Expr::Bin(BinOp::Div, Box::new(lhs), Box::new(self.factor()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        let base = self.unary()?;
        if self.peek() == Some(&Tok::Caret) {
            self.bump();
            let (line, col) = self.here();
            match self.bump() {
                Some(Tok::Num { text, is_int: true }) => {
                    let n: u32 = text
                        .parse()
                        .map_err(|_| ParseError::BadExponent { line, col })?;
                    Ok(Expr::Pow(Box::new(base), n))
                }
                _ => Err(ParseError::BadExponent { line, col }),
            }
        } else {
            Ok(base)
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.peek() == Some(&Tok::Minus) {
            self.bump();
            Ok(Expr::Neg(Box::new(self.unary()?)))
        } else {
            self.primary()
        }
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        let (line, col) = self.here();
        match self.bump() {
            Some(Tok::Num { text, .. }) => Ok(Expr::Num(text.parse().unwrap())),
            Some(Tok::Ident(name)) => {
                if name == "i" {
                    return Ok(Expr::ImagUnit);
                }
                if let Some(tag) = FuncTag::from_name(&name) {
                    self.expect(Tok::LParen, "`(` after function name")?;
                    let arg = self.expr()?;
                    self.expect(Tok::RParen, "closing `)`")?;
                    return Ok(Expr::Func(tag, Box::new(arg)));
                }
                if let Some(axis) = self.coords.iter().position(|c| *c == name) {
                    return Ok(Expr::Coord(axis));
                }
                if self.params.contains(&name) {
                    return Ok(Expr::Param(name));
                }
                Err(ParseError::UnknownIdentifier { name, line, col })
            }
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                self.expect(Tok::RParen, "closing `)`")?;
                Ok(inner)
            }
            other => Err(ParseError::Syntax {
                line,
                col,
                msg: format!("expected a value, found {other:?}"),
            }),
        }
    }
}

impl Expr {
    /// Parse `text` against a chart's coordinate names and declared parameters.
    pub fn parse(text: &str, coords: &[String], params: &[String]) -> Result<Self, ParseError> {
        let toks = Lexer::new(text).tokens()?;
        if toks.is_empty() {
            return Err(ParseError::Syntax {
                line: 1,
                col: 1,
                msg: "empty expression".into(),
            });
        }
        let mut p = Parser {
            toks,
            pos: 0,
            coords,
            params,
        };
        let e = p.expr()?;
        if p.pos != p.toks.len() {
            let (line, col) = p.here();
            return Err(ParseError::Syntax {
                line,
                col,
                msg: "trailing input after expression".into(),
            });
        }
        Ok(e)
    }

    /// Evaluate to a full degree-3 jet at `point`.
    pub fn eval_jet(
        &self,
        point: [f64; 4],
        params: &HashMap<String, f64>,
    ) -> Result<Jet, EvalError> {
        Ok(match self {
            Expr::Num(v) => Jet::constant_re(*v),
            Expr::ImagUnit => Jet::constant(Complex64::new(0.0, 1.0)),
            Expr::Coord(axis) => Jet::coordinate(*axis, point)?,
            Expr::Param(name) => Jet::constant_re(
                *params
                    .get(name)
                    .ok_or_else(|| EvalError::UnboundParameter(name.clone()))?,
            ),
            Expr::Neg(e) => -e.eval_jet(point, params)?,
            Expr::Bin(op, a, b) => {
                let a = a.eval_jet(point, params)?;
                let b = b.eval_jet(point, params)?;
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => a * b.recip()?,
                }
            }
            Expr::Pow(b, n) => b.eval_jet(point, params)?.pow_int(*n),
            Expr::Func(tag, a) => {
                let a = a.eval_jet(point, params)?;
                match tag {
                    FuncTag::Sin => a.compose_analytic(AnalyticFn::Sin)?,
                    FuncTag::Cos => a.compose_analytic(AnalyticFn::Cos)?,
                    FuncTag::Sinh => a.compose_analytic(AnalyticFn::Sinh)?,
                    FuncTag::Cosh => a.compose_analytic(AnalyticFn::Cosh)?,
                    FuncTag::Exp => a.compose_analytic(AnalyticFn::Exp)?,
                    FuncTag::Ln => a.compose_analytic(AnalyticFn::Ln)?,
                    FuncTag::Sqrt => a.compose_analytic(AnalyticFn::Sqrt)?,
                    FuncTag::Re => a.re(),
                    FuncTag::Im => a.im(),
                    FuncTag::Conj => a.conj(),
                }
            }
        })
    }

    /// Value-only evaluation (used by the finite-difference oracle and by
    /// sampling-exclusion predicates, where jets would be wasted work).
    pub fn eval_value(
        &self,
        point: [f64; 4],
        params: &HashMap<String, f64>,
    ) -> Result<Complex64, EvalError> {
        Ok(match self {
            Expr::Num(v) => Complex64::new(*v, 0.0),
            Expr::ImagUnit => Complex64::new(0.0, 1.0),
            Expr::Coord(axis) => {
                if *axis >= 4 {
                    return Err(JetError::AxisOutOfRange(*axis).into());
                }
                Complex64::new(point[*axis], 0.0)
            }
            Expr::Param(name) => Complex64::new(
                *params
                    .get(name)
                    .ok_or_else(|| EvalError::UnboundParameter(name.clone()))?,
                0.0,
            ),
            Expr::Neg(e) => -e.eval_value(point, params)?,
            Expr::Bin(op, a, b) => {
                let a = a.eval_value(point, params)?;
                let b = b.eval_value(point, params)?;
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => {
                        if b.norm() == 0.0 {
                            return Err(JetError::Singular("division").into());
                        }
                        a / b
                    }
                }
            }
            Expr::Pow(b, n) => b.eval_value(point, params)?.powu(*n),
            Expr::Func(tag, a) => {
                let a = a.eval_value(point, params)?;
                match tag {
                    FuncTag::Sin => a.sin(),
                    FuncTag::Cos => a.cos(),
                    FuncTag::Sinh => a.sinh(),
                    FuncTag::Cosh => a.cosh(),
                    FuncTag::Exp => a.exp(),
                    FuncTag::Ln => {
                        if a.norm() == 0.0 {
                            return Err(JetError::Domain { func: "ln" }.into());
                        }
                        a.ln()
                    }
                    FuncTag::Sqrt => {
                        if a.norm() == 0.0 {
                            return Err(JetError::Domain { func: "sqrt" }.into());
                        }
                        a.sqrt()
                    }
                    FuncTag::Re => Complex64::new(a.re, 0.0),
                    FuncTag::Im => Complex64::new(a.im, 0.0),
                    FuncTag::Conj => a.conj(),
                }
            }
        })
    }

    /// Axis indices of coordinates syntactically present in the tree.
    pub fn free_coordinates(&self) -> BTreeSet<usize> {
        let mut set = BTreeSet::new();
        self.collect_coords(&mut set);
        set
    }

    fn collect_coords(&self, set: &mut BTreeSet<usize>) {
        match self {
            Expr::Coord(axis) => {
                set.insert(*axis);
            }
            Expr::Neg(e) | Expr::Pow(e, _) | Expr::Func(_, e) => e.collect_coords(set),
            Expr::Bin(_, a, b) => {
                a.collect_coords(set);
                b.collect_coords(set);
            }
            Expr::Num(_) | Expr::ImagUnit | Expr::Param(_) => {}
        }
    }

    /// Parameter names referenced by the tree.
    pub fn referenced_params(&self) -> BTreeSet<String> {
        let mut set = BTreeSet::new();
        self.collect_params(&mut set);
        set
    }

    fn collect_params(&self, set: &mut BTreeSet<String>) {
        match self {
            Expr::Param(name) => {
                set.insert(name.clone());
            }
            Expr::Neg(e) | Expr::Pow(e, _) | Expr::Func(_, e) => e.collect_params(set),
            Expr::Bin(_, a, b) => {
                a.collect_params(set);
                b.collect_params(set);
            }
            Expr::Num(_) | Expr::ImagUnit | Expr::Coord(_) => {}
        }
    }

    /// Render with explicit parentheses; reparsing yields a structurally
    /// identical tree. Coordinate names are taken from `coords`.
    pub fn pretty(&self, coords: &[String]) -> String {
        match self {
            Expr::Num(v) => format!("{v}"),
            Expr::ImagUnit => "i".into(),
            Expr::Coord(axis) => coords[*axis].clone(),
            Expr::Param(name) => name.clone(),
            Expr::Neg(e) => format!("-({})", e.pretty(coords)),
            Expr::Bin(op, a, b) => {
                let sym = match op {
                    BinOp::Add => "+",
                    BinOp::Sub => "-",
                    BinOp::Mul => "*",
                    BinOp::Div => "/",
                };
                format!("({} {} {})", a.pretty(coords), sym, b.pretty(coords))
            }
            Expr::Pow(b, n) => format!("({})^{}", b.pretty(coords), n),
            Expr::Func(tag, a) => format!("{}({})", tag.name(), a.pretty(coords)),
        }
    }
}
