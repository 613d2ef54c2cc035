//! The expression surface language: a recursive descent parser producing
//! scalars, differential forms or vector fields over a fixed manifold.
//!
//! Grammar, loosest to tightest binding:
//!
//! ```text
//! sum     := product (('+' | '-') product)*
//! product := unary ('*' unary)*
//! unary   := '-' unary | power
//! power   := atom ('^' power)?
//! atom    := rational | 'z<j>' | 't' | 's'
//!          | 'sin' '(' freq ')' | 'cos' '(' freq ')'
//!          | 'dtheta<i>' | 'dz<j>' | 'par_theta<i>' | 'par_z<j>'
//!          | '(' sum ')'
//! freq    := ['-'] fterm (('+' | '-') fterm)*
//! fterm   := integer '*' 'theta<i>' | 'theta<i>'
//! ```
//!
//! `^` is exponentiation on scalars (the right operand must be a
//! non-negative integer constant) and the wedge product as soon as a form is
//! involved. Bare `theta<i>` is not a function and is only legal inside
//! `sin`/`cos`.

use std::fmt;

use plectic::form::{DifferentialForm, VectorField};
use plectic::manifold::{ModelManifold, Param};
use plectic::scalar::{Rational, ScalarFn};
use thiserror::Error;

#[derive(Error, Debug, PartialEq)]
#[error("{line}:{col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

/// A parsed expression value.
#[derive(Clone, PartialEq, Debug)]
pub enum Value {
    Scalar(ScalarFn),
    Form(DifferentialForm),
    Field(VectorField),
}

impl Value {
    pub fn kind(&self) -> &'static str {
        match self {
            Value::Scalar(_) => "scalar",
            Value::Form(_) => "form",
            Value::Field(_) => "vector field",
        }
    }

    /// View as a form; scalars become 0-forms.
    pub fn into_form(self, manifold: &ModelManifold) -> Option<DifferentialForm> {
        match self {
            Value::Scalar(f) => Some(DifferentialForm::from_scalar(f)),
            Value::Form(a) => Some(a),
            Value::Field(v) if v.is_zero() => Some(DifferentialForm::zero(manifold, 0)),
            Value::Field(_) => None,
        }
    }

    /// View as a vector field; the zero scalar becomes the zero field.
    pub fn into_field(self, manifold: &ModelManifold) -> Option<VectorField> {
        match self {
            Value::Field(v) => Some(v),
            Value::Scalar(f) if f.is_zero() => Some(VectorField::zero(manifold)),
            Value::Form(a) if a.is_zero() => Some(VectorField::zero(manifold)),
            _ => None,
        }
    }

    pub fn into_scalar(self) -> Option<ScalarFn> {
        match self {
            Value::Scalar(f) => Some(f),
            Value::Form(a) if a.degree() == 0 => Some(a.to_scalar()),
            Value::Form(a) if a.is_zero() => {
                Some(ScalarFn::zero(a.manifold()))
            }
            _ => None,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Scalar(x) => write!(f, "{x}"),
            Value::Form(x) => write!(f, "{x}"),
            Value::Field(x) => write!(f, "{x}"),
        }
    }
}

#[derive(Clone, PartialEq, Debug)]
enum Tok {
    Int(i64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
    Eof,
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(input: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let mut chars = input.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (tline, tcol) = (line, col);
        let bump = |chars: &mut std::iter::Peekable<std::str::Chars>,
                        line: &mut usize,
                        col: &mut usize| {
            let c = chars.next().unwrap();
            if c == '\n' {
                *line += 1;
                *col = 1;
            } else {
                *col += 1;
            }
            c
        };
        match c {
            ' ' | '\t' | '\n' | '\r' => {
                bump(&mut chars, &mut line, &mut col);
            }
            '+' => {
                bump(&mut chars, &mut line, &mut col);
                out.push(Spanned { tok: Tok::Plus, line: tline, col: tcol });
            }
            '-' => {
                bump(&mut chars, &mut line, &mut col);
                out.push(Spanned { tok: Tok::Minus, line: tline, col: tcol });
            }
            '*' => {
                bump(&mut chars, &mut line, &mut col);
                out.push(Spanned { tok: Tok::Star, line: tline, col: tcol });
            }
            '^' => {
                bump(&mut chars, &mut line, &mut col);
                out.push(Spanned { tok: Tok::Caret, line: tline, col: tcol });
            }
            '/' => {
                bump(&mut chars, &mut line, &mut col);
                out.push(Spanned { tok: Tok::Slash, line: tline, col: tcol });
            }
            '(' => {
                bump(&mut chars, &mut line, &mut col);
                out.push(Spanned { tok: Tok::LParen, line: tline, col: tcol });
            }
            ')' => {
                bump(&mut chars, &mut line, &mut col);
                out.push(Spanned { tok: Tok::RParen, line: tline, col: tcol });
            }
            '0'..='9' => {
                let mut digits = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_digit() {
                        digits.push(bump(&mut chars, &mut line, &mut col));
                    } else {
                        break;
                    }
                }
                let value: i64 = digits.parse().map_err(|_| ParseError {
                    line: tline,
                    col: tcol,
                    message: format!("integer literal `{digits}` is too large"),
                })?;
                out.push(Spanned { tok: Tok::Int(value), line: tline, col: tcol });
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut ident = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_alphanumeric() || d == '_' {
                        ident.push(bump(&mut chars, &mut line, &mut col));
                    } else {
                        break;
                    }
                }
                out.push(Spanned { tok: Tok::Ident(ident), line: tline, col: tcol });
            }
            other => {
                return Err(ParseError {
                    line: tline,
                    col: tcol,
                    message: format!("unexpected character `{other}`"),
                })
            }
        }
    }
    out.push(Spanned { tok: Tok::Eof, line, col });
    Ok(out)
}

struct Parser<'m> {
    manifold: &'m ModelManifold,
    tokens: Vec<Spanned>,
    pos: usize,
}

/// Parse one expression over the given manifold.
pub fn parse_expression(input: &str, manifold: &ModelManifold) -> Result<Value, ParseError> {
    let tokens = lex(input)?;
    let mut p = Parser {
        manifold,
        tokens,
        pos: 0,
    };
    let value = p.sum()?;
    let end = p.peek().clone();
    if end.tok != Tok::Eof {
        return Err(p.error(&end, "unexpected trailing input"));
    }
    Ok(value)
}

/// Split an identifier such as `theta2` into its stem and 1-based index.
fn split_indexed(ident: &str, stem: &str) -> Option<usize> {
    let rest = ident.strip_prefix(stem)?;
    if rest.is_empty() {
        return None;
    }
    rest.parse::<usize>().ok().filter(|&i| i >= 1)
}

impl<'m> Parser<'m> {
    fn peek(&self) -> &Spanned {
        &self.tokens[self.pos]
    }

    fn next(&mut self) -> Spanned {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, at: &Spanned, message: impl Into<String>) -> ParseError {
        ParseError {
            line: at.line,
            col: at.col,
            message: message.into(),
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        let t = self.next();
        if t.tok == tok {
            Ok(())
        } else {
            Err(self.error(&t, format!("expected {what}")))
        }
    }

    fn sum(&mut self) -> Result<Value, ParseError> {
        let mut acc = self.product()?;
        loop {
            let op = self.peek().clone();
            match op.tok {
                Tok::Plus => {
                    self.pos += 1;
                    let rhs = self.product()?;
                    acc = self.add(acc, rhs, &op)?;
                }
                Tok::Minus => {
                    self.pos += 1;
                    let rhs = self.product()?;
                    let rhs = self.negate(rhs);
                    acc = self.add(acc, rhs, &op)?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn product(&mut self) -> Result<Value, ParseError> {
        let mut acc = self.unary()?;
        loop {
            let op = self.peek().clone();
            if op.tok != Tok::Star {
                break;
            }
            self.pos += 1;
            let rhs = self.unary()?;
            acc = self.multiply(acc, rhs, &op)?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Value, ParseError> {
        if self.peek().tok == Tok::Minus {
            self.pos += 1;
            let inner = self.unary()?;
            return Ok(self.negate(inner));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Value, ParseError> {
        let base = self.atom()?;
        let op = self.peek().clone();
        if op.tok != Tok::Caret {
            return Ok(base);
        }
        self.pos += 1;
        let exp = self.power()?;
        self.exponentiate(base, exp, &op)
    }

    fn negate(&self, v: Value) -> Value {
        match v {
            Value::Scalar(f) => Value::Scalar(-&f),
            Value::Form(a) => Value::Form(-&a),
            Value::Field(x) => Value::Field(-&x),
        }
    }

    fn add(&self, lhs: Value, rhs: Value, at: &Spanned) -> Result<Value, ParseError> {
        match (lhs, rhs) {
            (Value::Scalar(a), Value::Scalar(b)) => Ok(Value::Scalar(&a + &b)),
            (Value::Field(a), Value::Field(b)) => Ok(Value::Field(&a + &b)),
            (Value::Field(a), b) | (b, Value::Field(a)) => {
                if a.is_zero() {
                    return Ok(b);
                }
                if let Some(bf) = b.clone().into_field(self.manifold) {
                    return Ok(Value::Field(&a + &bf));
                }
                Err(self.error(at, format!("cannot add a vector field and a {}", b.kind())))
            }
            (a, b) => {
                let fa = a.into_form(self.manifold).expect("fields handled above");
                let fb = b.into_form(self.manifold).expect("fields handled above");
                if !fa.is_zero() && !fb.is_zero() && fa.degree() != fb.degree() {
                    return Err(self.error(
                        at,
                        format!(
                            "cannot add forms of degree {} and {}",
                            fa.degree(),
                            fb.degree()
                        ),
                    ));
                }
                Ok(Value::Form(&fa + &fb))
            }
        }
    }

    fn multiply(&self, lhs: Value, rhs: Value, at: &Spanned) -> Result<Value, ParseError> {
        match (lhs, rhs) {
            (Value::Scalar(a), Value::Scalar(b)) => Ok(Value::Scalar(&a * &b)),
            (Value::Scalar(a), Value::Form(b)) | (Value::Form(b), Value::Scalar(a)) => {
                Ok(Value::Form(b.scalar_mul(&a)))
            }
            (Value::Scalar(a), Value::Field(b)) | (Value::Field(b), Value::Scalar(a)) => {
                Ok(Value::Field(b.scalar_mul(&a)))
            }
            (Value::Form(_), Value::Form(_)) => Err(self.error(
                at,
                "use `^` for the exterior product of forms".to_string(),
            )),
            (a, b) => Err(self.error(
                at,
                format!("cannot multiply a {} and a {}", a.kind(), b.kind()),
            )),
        }
    }

    fn exponentiate(&self, base: Value, exp: Value, at: &Spanned) -> Result<Value, ParseError> {
        // a form on either side makes `^` the exterior product
        let form_involved =
            matches!(base, Value::Form(_)) || matches!(exp, Value::Form(_));
        if form_involved {
            let a = base
                .into_form(self.manifold)
                .ok_or_else(|| self.error(at, "cannot wedge a vector field"))?;
            let b = exp
                .into_form(self.manifold)
                .ok_or_else(|| self.error(at, "cannot wedge a vector field"))?;
            return Ok(Value::Form(a.wedge(&b)));
        }
        match (base, exp) {
            (Value::Scalar(a), Value::Scalar(b)) => {
                let c = b.as_constant().ok_or_else(|| {
                    self.error(at, "the exponent must be a constant integer")
                })?;
                if !c.is_integer() || c < Rational::from_integer(0.into()) {
                    return Err(
                        self.error(at, "the exponent must be a non-negative integer")
                    );
                }
                let e: u32 = c.to_integer().try_into().map_err(|_| {
                    self.error(at, "exponent too large")
                })?;
                Ok(Value::Scalar(a.pow(e)))
            }
            (a, b) => Err(self.error(
                at,
                format!("cannot exponentiate a {} by a {}", a.kind(), b.kind()),
            )),
        }
    }

    fn atom(&mut self) -> Result<Value, ParseError> {
        let t = self.next();
        match &t.tok {
            Tok::Int(n) => {
                // optional `/ q` makes a rational literal
                if self.peek().tok == Tok::Slash {
                    self.pos += 1;
                    let d = self.next();
                    let Tok::Int(q) = d.tok else {
                        return Err(self.error(&d, "expected a denominator"));
                    };
                    if q == 0 {
                        return Err(self.error(&d, "zero denominator"));
                    }
                    return Ok(Value::Scalar(ScalarFn::constant(
                        self.manifold,
                        Rational::new((*n).into(), q.into()),
                    )));
                }
                Ok(Value::Scalar(ScalarFn::int(self.manifold, *n)))
            }
            Tok::LParen => {
                let inner = self.sum()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            Tok::Ident(name) => self.ident_atom(name, &t),
            _ => Err(self.error(&t, "expected a value")),
        }
    }

    fn ident_atom(&mut self, name: &str, at: &Spanned) -> Result<Value, ParseError> {
        if name == "sin" || name == "cos" {
            self.expect(Tok::LParen, "`(` after sin/cos")?;
            let freq = self.freq_combination()?;
            self.expect(Tok::RParen, "`)` closing sin/cos")?;
            let f = if name == "sin" {
                ScalarFn::sin(self.manifold, &freq)
            } else {
                ScalarFn::cos(self.manifold, &freq)
            };
            return Ok(Value::Scalar(f));
        }
        if name == "t" || name == "s" {
            let p = if name == "t" { Param::T } else { Param::S };
            if !self.manifold.has_param(p) {
                return Err(self.error(
                    at,
                    format!("the manifold does not declare the parameter `{name}`"),
                ));
            }
            return Ok(Value::Scalar(ScalarFn::param(self.manifold, p)));
        }
        if let Some(i) = split_indexed(name, "theta") {
            let _ = i;
            return Err(self.error(
                at,
                "bare theta coordinates are not functions; use sin(..) or cos(..)",
            ));
        }
        if let Some(j) = split_indexed(name, "z") {
            if j > self.manifold.affine_dim() {
                return Err(self.error(at, format!("unknown coordinate `{name}`")));
            }
            return Ok(Value::Scalar(ScalarFn::z(self.manifold, j - 1)));
        }
        if let Some(i) = split_indexed(name, "dtheta") {
            if i > self.manifold.torus_dim() {
                return Err(self.error(at, format!("unknown coframe element `{name}`")));
            }
            return Ok(Value::Form(DifferentialForm::coframe(self.manifold, i - 1)));
        }
        if let Some(j) = split_indexed(name, "dz") {
            if j > self.manifold.affine_dim() {
                return Err(self.error(at, format!("unknown coframe element `{name}`")));
            }
            return Ok(Value::Form(DifferentialForm::coframe(
                self.manifold,
                self.manifold.torus_dim() + j - 1,
            )));
        }
        if let Some(i) = split_indexed(name, "par_theta") {
            if i > self.manifold.torus_dim() {
                return Err(self.error(at, format!("unknown frame element `{name}`")));
            }
            return Ok(Value::Field(VectorField::frame(self.manifold, i - 1)));
        }
        if let Some(j) = split_indexed(name, "par_z") {
            if j > self.manifold.affine_dim() {
                return Err(self.error(at, format!("unknown frame element `{name}`")));
            }
            return Ok(Value::Field(VectorField::frame(
                self.manifold,
                self.manifold.torus_dim() + j - 1,
            )));
        }
        Err(self.error(at, format!("unknown identifier `{name}`")))
    }

    /// Integer-linear combinations of theta coordinates, e.g.
    /// `theta1 + 2*theta2 - theta3`.
    fn freq_combination(&mut self) -> Result<Vec<i64>, ParseError> {
        let mut freq = vec![0i64; self.manifold.torus_dim()];
        let mut first = true;
        loop {
            let mut sign = 1i64;
            let t = self.peek().clone();
            match t.tok {
                Tok::Minus => {
                    self.pos += 1;
                    sign = -1;
                }
                Tok::Plus => {
                    if first {
                        return Err(self.error(&t, "expected a theta term"));
                    }
                    self.pos += 1;
                }
                _ if first => {}
                _ => break,
            }
            let term = self.next();
            let (coeff, theta_tok) = match &term.tok {
                Tok::Int(n) => {
                    self.expect(Tok::Star, "`*` between coefficient and theta")?;
                    (*n, self.next())
                }
                Tok::Ident(_) => (1, term.clone()),
                _ => return Err(self.error(&term, "expected a theta term")),
            };
            let Tok::Ident(name) = &theta_tok.tok else {
                return Err(self.error(&theta_tok, "expected a theta coordinate"));
            };
            let Some(i) = split_indexed(name, "theta") else {
                return Err(self.error(
                    &theta_tok,
                    "sin/cos arguments are integer combinations of theta coordinates",
                ));
            };
            if i > self.manifold.torus_dim() {
                return Err(self.error(&theta_tok, format!("unknown coordinate `{name}`")));
            }
            freq[i - 1] += sign * coeff;
            first = false;
            match self.peek().tok {
                Tok::Plus | Tok::Minus => continue,
                _ => break,
            }
        }
        Ok(freq)
    }
}
