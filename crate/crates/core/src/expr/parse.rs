//! Recursive-descent parser.
//!
//! ```text
//! expr     := term (('+' | '-') term)*
//! term     := factor (('*' | '/') factor)*
//! factor   := '-' factor | base ('^' exponent)?
//! base     := number | ident | ident '(' args ')' | '(' expr ')'
//! exponent := ['-'] int | '(' ['-'] int ['/' int] ')'
//! ```
//!
//! Unary minus sits above `^`, so `-x^2` is `-(x^2)`.

use std::f64::consts::PI;

use super::{Func, Node, ParseError, Rational};

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Int(i64),
    Ident(String),
    Sym(char),
    End,
}

pub(crate) struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    coords: &'a [String],
    params: &'a [&'a str],
    lex_error: Option<ParseError>,
}

impl<'a> Parser<'a> {
    pub(crate) fn new(src: &str, coords: &'a [String], params: &'a [&'a str]) -> Self {
        let (toks, lex_error) = match lex(src) {
            Ok(t) => (t, None),
            Err(e) => (Vec::new(), Some(e)),
        };
        Parser {
            toks,
            pos: 0,
            coords,
            params,
            lex_error,
        }
    }

    pub(crate) fn parse(mut self) -> Result<Node, ParseError> {
        if let Some(e) = self.lex_error.take() {
            return Err(e);
        }
        let node = self.expr()?;
        match self.peek() {
            Tok::End => Ok(node),
            tok => Err(self.syntax(format!("unexpected {}", describe(tok)))),
        }
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.pos].clone();
        if t.0 != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, c: char) -> bool {
        if *self.peek() == Tok::Sym(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            let found = describe(self.peek());
            Err(self.syntax(format!("expected `{c}`, found {found}")))
        }
    }

    fn syntax(&self, message: String) -> ParseError {
        ParseError::Syntax {
            offset: self.offset(),
            message,
        }
    }

    fn expr(&mut self) -> Result<Node, ParseError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Node::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Node::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Node, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            if self.eat('*') {
                lhs = Node::Mul(Box::new(lhs), Box::new(self.factor()?));
            } else if self.eat('/') {
                lhs = Node::Div(Box::new(lhs), Box::new(self.factor()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn factor(&mut self) -> Result<Node, ParseError> {
        if self.eat('-') {
            return Ok(Node::Neg(Box::new(self.factor()?)));
        }
        let base = self.base()?;
        if self.eat('^') {
            let r = self.exponent()?;
            Ok(Node::Pow(Box::new(base), r))
        } else {
            Ok(base)
        }
    }

    fn exponent(&mut self) -> Result<Rational, ParseError> {
        let paren = self.eat('(');
        let negative = self.eat('-');
        let num = self.int()?;
        let den = if paren && self.eat('/') {
            self.int()?
        } else {
            1
        };
        if paren {
            self.expect(')')?;
        }
        let num = if negative { -num } else { num };
        Rational::new(num, den).ok_or_else(|| self.syntax("zero denominator in exponent".into()))
    }

    fn int(&mut self) -> Result<i64, ParseError> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(n)
            }
            tok => Err(self.syntax(format!(
                "expected an integer exponent, found {}",
                describe(&tok)
            ))),
        }
    }

    fn base(&mut self) -> Result<Node, ParseError> {
        let (tok, offset) = self.bump();
        match tok {
            Tok::Num(v) => Ok(Node::Const(v)),
            Tok::Int(n) => Ok(Node::Const(n as f64)),
            Tok::Sym('(') => {
                let inner = self.expr()?;
                self.expect(')')?;
                Ok(inner)
            }
            Tok::Ident(name) => self.identifier(name, offset),
            tok => {
                self.pos -= usize::from(tok != Tok::End);
                Err(self.syntax(format!("expected an operand, found {}", describe(&tok))))
            }
        }
    }

    fn identifier(&mut self, name: String, offset: usize) -> Result<Node, ParseError> {
        if let Some(func) = Func::from_name(&name) {
            let args = if self.eat('(') {
                self.args()?
            } else {
                Vec::new()
            };
            if args.len() != 1 {
                return Err(ParseError::Arity {
                    name,
                    offset,
                    expected: 1,
                    found: args.len(),
                });
            }
            let arg = args.into_iter().next().expect("one argument");
            return Ok(Node::Call(func, Box::new(arg)));
        }
        if *self.peek() == Tok::Sym('(') {
            return Err(ParseError::UnknownIdentifier { name, offset });
        }
        if let Some(i) = self.coords.iter().position(|c| *c == name) {
            Ok(Node::Var(i))
        } else if self.params.contains(&name.as_str()) {
            Ok(Node::Param(name))
        } else if name == "pi" {
            Ok(Node::Const(PI))
        } else {
            Err(ParseError::UnknownIdentifier { name, offset })
        }
    }

    fn args(&mut self) -> Result<Vec<Node>, ParseError> {
        let mut args = Vec::new();
        if self.eat(')') {
            return Ok(args);
        }
        loop {
            args.push(self.expr()?);
            if self.eat(',') {
                continue;
            }
            self.expect(')')?;
            return Ok(args);
        }
    }
}

fn describe(tok: &Tok) -> String {
    match tok {
        Tok::Num(v) => format!("number {v}"),
        Tok::Int(n) => format!("number {n}"),
        Tok::Ident(s) => format!("identifier `{s}`"),
        Tok::Sym(c) => format!("`{c}`"),
        Tok::End => "end of input".into(),
    }
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = src.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit()
            || (c == '.' && bytes.get(i + 1).is_some_and(u8::is_ascii_digit))
        {
            let start = i;
            let mut integral = true;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            if i < bytes.len() && bytes[i] == b'.' {
                integral = false;
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
                    integral = false;
                    i = j;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let text = &src[start..i];
            let tok = match integral.then(|| text.parse::<i64>().ok()).flatten() {
                Some(n) => Tok::Int(n),
                None => Tok::Num(text.parse().map_err(|_| ParseError::Syntax {
                    offset: start,
                    message: format!("malformed number `{text}`"),
                })?),
            };
            toks.push((tok, start));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            toks.push((Tok::Ident(src[start..i].to_string()), start));
        } else if "+-*/^(),".contains(c) {
            toks.push((Tok::Sym(c), i));
            i += 1;
        } else {
            let ch = src[i..].chars().next().expect("in bounds");
            return Err(ParseError::Syntax {
                offset: i,
                message: format!("unexpected character `{ch}`"),
            });
        }
    }
    toks.push((Tok::End, src.len()));
    Ok(toks)
}
