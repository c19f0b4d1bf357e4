//! Metric and warping-function expressions.
//!
//! Expressions are parsed from a small infix grammar over named coordinates
//! and symbolic parameters, and evaluated either as plain `f64` or as a
//! second-order [`Jet2`] carrying exact first and second partials.

mod eval;
mod jet;
mod parse;

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

pub use jet::{Jet2, Scalar};

/// Built-in unary functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Sin,
    Cos,
    Sinh,
    Cosh,
    Tanh,
    Exp,
    Log,
    Sqrt,
}

impl Func {
    pub const ALL: [Func; 8] = [
        Func::Sin,
        Func::Cos,
        Func::Sinh,
        Func::Cosh,
        Func::Tanh,
        Func::Exp,
        Func::Log,
        Func::Sqrt,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Tanh => "tanh",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == name)
    }
}

/// Exponent `num/den` in lowest terms with `den > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rational {
    num: i64,
    den: i64,
}

impl Rational {
    pub fn new(num: i64, den: i64) -> Option<Rational> {
        if den == 0 {
            return None;
        }
        let g = gcd(num.unsigned_abs(), den.unsigned_abs()) as i64;
        let sign = if den < 0 { -1 } else { 1 };
        Some(Rational {
            num: sign * num / g.max(1),
            den: sign * den / g.max(1),
        })
    }

    pub fn integer(n: i64) -> Rational {
        Rational { num: n, den: 1 }
    }

    pub fn num(self) -> i64 {
        self.num
    }

    pub fn den(self) -> i64 {
        self.den
    }

    pub fn is_integer(self) -> bool {
        self.den == 1
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}/{})", self.num, self.den)
        }
    }
}

/// Expression tree. Variables refer to coordinates by position.
#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Const(f64),
    Var(usize),
    Param(String),
    Neg(Box<Node>),
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
    Div(Box<Node>, Box<Node>),
    Pow(Box<Node>, Rational),
    Call(Func, Box<Node>),
}

impl Node {
    fn map_vars(&self, f: &impl Fn(usize) -> usize) -> Node {
        use Node::*;
        match self {
            Const(c) => Const(*c),
            Var(i) => Var(f(*i)),
            Param(p) => Param(p.clone()),
            Neg(a) => Neg(Box::new(a.map_vars(f))),
            Add(a, b) => Add(Box::new(a.map_vars(f)), Box::new(b.map_vars(f))),
            Sub(a, b) => Sub(Box::new(a.map_vars(f)), Box::new(b.map_vars(f))),
            Mul(a, b) => Mul(Box::new(a.map_vars(f)), Box::new(b.map_vars(f))),
            Div(a, b) => Div(Box::new(a.map_vars(f)), Box::new(b.map_vars(f))),
            Pow(a, r) => Pow(Box::new(a.map_vars(f)), *r),
            Call(g, a) => Call(*g, Box::new(a.map_vars(f))),
        }
    }

    fn bind(&self, values: &HashMap<String, f64>) -> Node {
        use Node::*;
        let rec = |n: &Node| Box::new(n.bind(values));
        match self {
            Param(p) => match values.get(p) {
                Some(&v) if v < 0.0 => Neg(Box::new(Const(-v))),
                Some(&v) => Const(v),
                None => Param(p.clone()),
            },
            Const(_) | Var(_) => self.clone(),
            Neg(a) => Neg(rec(a)),
            Add(a, b) => Add(rec(a), rec(b)),
            Sub(a, b) => Sub(rec(a), rec(b)),
            Mul(a, b) => Mul(rec(a), rec(b)),
            Div(a, b) => Div(rec(a), rec(b)),
            Pow(a, r) => Pow(rec(a), *r),
            Call(g, a) => Call(*g, rec(a)),
        }
    }

    fn collect_params<'a>(&'a self, out: &mut Vec<&'a str>) {
        use Node::*;
        match self {
            Param(p) => {
                if !out.contains(&p.as_str()) {
                    out.push(p);
                }
            }
            Const(_) | Var(_) => {}
            Neg(a) | Pow(a, _) | Call(_, a) => a.collect_params(out),
            Add(a, b) | Sub(a, b) | Mul(a, b) | Div(a, b) => {
                a.collect_params(out);
                b.collect_params(out);
            }
        }
    }

    fn write(&self, coords: &[String], f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Node::*;
        match self {
            Const(c) if *c < 0.0 || c.is_sign_negative() => write!(f, "(-{:?})", -c),
            Const(c) => write!(f, "{c:?}"),
            Var(i) => f.write_str(&coords[*i]),
            Param(p) => f.write_str(p),
            Neg(a) => {
                f.write_str("(-")?;
                a.write(coords, f)?;
                f.write_str(")")
            }
            Add(a, b) => binary(coords, f, a, " + ", b),
            Sub(a, b) => binary(coords, f, a, " - ", b),
            Mul(a, b) => binary(coords, f, a, " * ", b),
            Div(a, b) => binary(coords, f, a, " / ", b),
            Pow(a, r) => {
                if matches!(**a, Pow(..)) {
                    f.write_str("(")?;
                    a.write(coords, f)?;
                    f.write_str(")")?;
                } else {
                    a.write(coords, f)?;
                }
                write!(f, "^{r}")
            }
            Call(g, a) => {
                write!(f, "{}(", g.name())?;
                a.write(coords, f)?;
                f.write_str(")")
            }
        }
    }
}

fn binary(
    coords: &[String],
    f: &mut fmt::Formatter<'_>,
    a: &Node,
    op: &str,
    b: &Node,
) -> fmt::Result {
    f.write_str("(")?;
    a.write(coords, f)?;
    f.write_str(op)?;
    b.write(coords, f)?;
    f.write_str(")")
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParseError {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown identifier `{name}` at offset {offset}")]
    UnknownIdentifier { name: String, offset: usize },
    #[error("`{name}` at offset {offset} takes {expected} argument(s), found {found}")]
    Arity {
        name: String,
        offset: usize,
        expected: usize,
        found: usize,
    },
    #[error("invalid coordinate list: {0}")]
    Coordinates(String),
}

impl ParseError {
    pub fn offset(&self) -> Option<usize> {
        match self {
            ParseError::Syntax { offset, .. }
            | ParseError::UnknownIdentifier { offset, .. }
            | ParseError::Arity { offset, .. } => Some(*offset),
            ParseError::Coordinates(_) => None,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EvalError {
    #[error("{op} is undefined at `{subexpr}` (argument {value})")]
    Domain {
        op: &'static str,
        subexpr: String,
        value: f64,
    },
    #[error("symbol `{0}` has no bound value")]
    Unbound(String),
    #[error("expected a point with {expected} coordinates, got {found}")]
    PointDimension { expected: usize, found: usize },
}

/// A parsed expression together with the ordered coordinate names its
/// variables refer to.
#[derive(Debug, Clone, PartialEq)]
pub struct Expression {
    root: Node,
    coords: Arc<[String]>,
}

impl Expression {
    /// Parse `source` over the given coordinates. Any identifier that is not a
    /// coordinate, function, or `pi` is rejected.
    pub fn parse(source: &str, coords: &[&str]) -> Result<Expression, ParseError> {
        Self::parse_with_params(source, coords, &[])
    }

    /// Parse allowing the listed symbolic parameters, to be bound later with
    /// [`Expression::bind`].
    pub fn parse_with_params(
        source: &str,
        coords: &[&str],
        params: &[&str],
    ) -> Result<Expression, ParseError> {
        let coords = validate_coords(coords)?;
        let root = parse::Parser::new(source, &coords, params).parse()?;
        Ok(Expression { root, coords })
    }

    /// Parse and substitute every parameter in one step.
    pub fn parse_bound(
        source: &str,
        coords: &[&str],
        params: &[(&str, f64)],
    ) -> Result<Expression, ParseError> {
        let names: Vec<&str> = params.iter().map(|(n, _)| *n).collect();
        let expr = Self::parse_with_params(source, coords, &names)?;
        let values = params.iter().map(|(n, v)| (n.to_string(), *v)).collect();
        Ok(expr.bind(&values))
    }

    pub fn constant(value: f64, coords: &[String]) -> Expression {
        let root = if value < 0.0 {
            Node::Neg(Box::new(Node::Const(-value)))
        } else {
            Node::Const(value)
        };
        Expression {
            root,
            coords: coords.into(),
        }
    }

    pub fn from_node(root: Node, coords: &[String]) -> Expression {
        Expression {
            root,
            coords: coords.into(),
        }
    }

    pub fn root(&self) -> &Node {
        &self.root
    }

    pub fn coords(&self) -> &[String] {
        &self.coords
    }

    pub fn nvars(&self) -> usize {
        self.coords.len()
    }

    /// True for the literal constant zero; used to skip structurally zero
    /// metric entries.
    pub fn is_zero(&self) -> bool {
        matches!(self.root, Node::Const(c) if c == 0.0)
    }

    pub fn bind(&self, values: &HashMap<String, f64>) -> Expression {
        Expression {
            root: self.root.bind(values),
            coords: self.coords.clone(),
        }
    }

    /// Parameters still awaiting a value.
    pub fn unbound_params(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.root.collect_params(&mut out);
        out
    }

    /// Re-express over a new coordinate list; `map` sends each old variable
    /// index to its new index.
    pub fn embed(&self, coords: &[String], map: impl Fn(usize) -> usize) -> Expression {
        Expression {
            root: self.root.map_vars(&map),
            coords: coords.into(),
        }
    }

    /// `self * rhs`; both must share a coordinate list.
    pub fn times(&self, rhs: &Expression) -> Expression {
        debug_assert_eq!(self.coords, rhs.coords);
        Expression {
            root: Node::Mul(Box::new(self.root.clone()), Box::new(rhs.root.clone())),
            coords: self.coords.clone(),
        }
    }

    pub fn powi(&self, n: i64) -> Expression {
        Expression {
            root: Node::Pow(Box::new(self.root.clone()), Rational::integer(n)),
            coords: self.coords.clone(),
        }
    }

    pub fn eval(&self, point: &[f64]) -> Result<f64, EvalError> {
        self.eval_as::<f64>(point)
    }

    /// Value, gradient and Hessian at `point`.
    pub fn eval_jet2(&self, point: &[f64]) -> Result<Jet2, EvalError> {
        self.eval_as::<Jet2>(point)
    }

    pub fn eval_as<T: Scalar>(&self, point: &[f64]) -> Result<T, EvalError> {
        if point.len() != self.coords.len() {
            return Err(EvalError::PointDimension {
                expected: self.coords.len(),
                found: point.len(),
            });
        }
        eval::Evaluator::new(&self.coords, point).eval(&self.root)
    }
}

impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.root.write(&self.coords, f)
    }
}

fn validate_coords(coords: &[&str]) -> Result<Arc<[String]>, ParseError> {
    if coords.is_empty() {
        return Err(ParseError::Coordinates("no coordinates given".into()));
    }
    for (i, c) in coords.iter().enumerate() {
        if !parse::is_identifier(c) {
            return Err(ParseError::Coordinates(format!(
                "`{c}` is not an identifier"
            )));
        }
        if Func::from_name(c).is_some() || *c == "pi" {
            return Err(ParseError::Coordinates(format!("`{c}` is reserved")));
        }
        if coords[..i].contains(c) {
            return Err(ParseError::Coordinates(format!("`{c}` appears twice")));
        }
    }
    Ok(coords.iter().map(|c| c.to_string()).collect())
}
