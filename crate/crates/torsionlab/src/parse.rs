//! Parser and printer for the coefficient-expression grammar used by the
//! catalog and the CLI reports.
//!
//! ```text
//! expr   := ['-'] term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := base ('^' ['-'] int)?
//! base   := int | 't' | 'sqrt' '(' expr ')' | '(' expr ')' | monomial
//! ```
//!
//! Form monomials are written `e^{ijk}` with ascending single digits ≤ 8.
//! Printed output round-trips through the parser.

use crate::form::Form;
use crate::scalar::{Expr, Jet, Radical, Scalar};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum ParseError {
    #[error("syntax error at byte {0}: {1}")]
    Syntax(usize, String),
    #[error("expected a scalar expression but found a form")]
    ExpectedScalar,
    #[error("expected a form of grade {expected} in dimension {dim}, found grade {found}")]
    WrongGrade { expected: u8, found: u8, dim: u8 },
    #[error("form monomial index out of range for dimension {0}")]
    MonomialOutOfRange(u8),
    #[error("unknown symbol at byte {0}")]
    UnknownSymbol(usize),
    #[error("arithmetic error in expression: {0}")]
    Arithmetic(String),
}

#[derive(Clone)]
enum Value {
    S(Scalar),
    F(Form),
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    dim: u8,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str, dim: u8) -> Self {
        Parser {
            src: src.as_bytes(),
            pos: 0,
            dim,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek()?;
        self.pos += 1;
        Some(c)
    }

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        match self.bump() {
            Some(x) if x == c => Ok(()),
            _ => Err(ParseError::Syntax(
                self.pos,
                format!("expected '{}'", c as char),
            )),
        }
    }

    fn parse_int(&mut self) -> Result<i64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let mut neg = false;
        if self.src.get(self.pos) == Some(&b'-') {
            neg = true;
            self.pos += 1;
        }
        let digits_start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == digits_start {
            return Err(ParseError::Syntax(start, "expected integer".into()));
        }
        let text = std::str::from_utf8(&self.src[digits_start..self.pos]).unwrap();
        let v: i64 = text
            .parse()
            .map_err(|_| ParseError::Syntax(start, "integer overflow".into()))?;
        Ok(if neg { -v } else { v })
    }

    fn parse_expr(&mut self) -> Result<Value, ParseError> {
        let mut acc = if self.peek() == Some(b'-') {
            self.bump();
            neg_value(self.parse_term()?)
        } else {
            self.parse_term()?
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.bump();
                    let rhs = self.parse_term()?;
                    acc = add_values(acc, rhs, self.pos)?;
                }
                Some(b'-') => {
                    self.bump();
                    let rhs = self.parse_term()?;
                    acc = add_values(acc, neg_value(rhs), self.pos)?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn parse_term(&mut self) -> Result<Value, ParseError> {
        let mut acc = self.parse_factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.bump();
                    let rhs = self.parse_factor()?;
                    acc = mul_values(acc, rhs, self.pos)?;
                }
                Some(b'/') => {
                    self.bump();
                    let rhs = self.parse_factor()?;
                    acc = div_values(acc, rhs, self.pos)?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn parse_factor(&mut self) -> Result<Value, ParseError> {
        let base = self.parse_base()?;
        if self.peek() == Some(b'^') {
            // monomials consume their own '^{..}'; reaching here means scalar power
            self.bump();
            let n = self.parse_int()? as i32;
            match base {
                Value::S(s) => {
                    return Ok(Value::S(s.powi(n).map_err(|e| {
                        ParseError::Arithmetic(e.to_string())
                    })?))
                }
                Value::F(_) => {
                    return Err(ParseError::Syntax(self.pos, "cannot raise a form".into()))
                }
            }
        }
        Ok(base)
    }

    fn parse_base(&mut self) -> Result<Value, ParseError> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let n = self.parse_int()?;
                Ok(Value::S(Scalar::int(n)))
            }
            Some(b't') => {
                self.pos += 1;
                Ok(Value::S(Scalar::param()))
            }
            Some(b's') => {
                // sqrt(
                let rest = &self.src[self.pos..];
                if rest.starts_with(b"sqrt") {
                    self.pos += 4;
                    self.expect(b'(')?;
                    let inner = self.parse_expr()?;
                    self.expect(b')')?;
                    match inner {
                        Value::S(s) => Ok(Value::S(
                            s.sqrt().map_err(|e| ParseError::Arithmetic(e.to_string()))?,
                        )),
                        Value::F(_) => Err(ParseError::ExpectedScalar),
                    }
                } else {
                    Err(ParseError::UnknownSymbol(self.pos))
                }
            }
            Some(b'(') => {
                self.bump();
                let inner = self.parse_expr()?;
                self.expect(b')')?;
                Ok(inner)
            }
            Some(b'e') => {
                self.pos += 1;
                self.expect(b'^')?;
                self.expect(b'{')?;
                let mut indices = Vec::new();
                loop {
                    match self.bump() {
                        Some(b'}') => break,
                        Some(c) if c.is_ascii_digit() => indices.push(c - b'0'),
                        _ => {
                            return Err(ParseError::Syntax(
                                self.pos,
                                "expected digit or '}' in monomial".into(),
                            ))
                        }
                    }
                }
                if indices.iter().any(|&i| i == 0 || i > self.dim) {
                    return Err(ParseError::MonomialOutOfRange(self.dim));
                }
                if indices.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(ParseError::Syntax(
                        self.pos,
                        "monomial indices must be strictly ascending".into(),
                    ));
                }
                let f = Form::monomial(self.dim, &indices, Scalar::one())
                    .map_err(|e| ParseError::Arithmetic(e.to_string()))?;
                Ok(Value::F(f))
            }
            Some(c) => Err(ParseError::Syntax(
                self.pos,
                format!("unexpected character '{}'", c as char),
            )),
            None => Err(ParseError::Syntax(self.pos, "unexpected end of input".into())),
        }
    }
}

fn neg_value(v: Value) -> Value {
    match v {
        Value::S(s) => Value::S(s.neg()),
        Value::F(f) => Value::F(f.neg()),
    }
}

fn add_values(a: Value, b: Value, pos: usize) -> Result<Value, ParseError> {
    match (a, b) {
        (Value::S(x), Value::S(y)) => Ok(Value::S(x.add(&y))),
        (Value::F(x), Value::F(y)) => {
            if x.is_zero() {
                return Ok(Value::F(y));
            }
            if y.is_zero() {
                return Ok(Value::F(x));
            }
            Ok(Value::F(x.add(&y).map_err(|e| {
                ParseError::Syntax(pos, e.to_string())
            })?))
        }
        (Value::S(x), Value::F(y)) if x.is_zero() => Ok(Value::F(y)),
        (Value::F(x), Value::S(y)) if y.is_zero() => Ok(Value::F(x)),
        _ => Err(ParseError::Syntax(
            pos,
            "cannot add a scalar and a form".into(),
        )),
    }
}

fn mul_values(a: Value, b: Value, pos: usize) -> Result<Value, ParseError> {
    match (a, b) {
        (Value::S(x), Value::S(y)) => Ok(Value::S(x.mul(&y))),
        (Value::S(x), Value::F(y)) => Ok(Value::F(y.scale(&x))),
        (Value::F(x), Value::S(y)) => Ok(Value::F(x.scale(&y))),
        (Value::F(_), Value::F(_)) => Err(ParseError::Syntax(
            pos,
            "wedge products are not part of the expression grammar".into(),
        )),
    }
}

fn div_values(a: Value, b: Value, pos: usize) -> Result<Value, ParseError> {
    match (a, b) {
        (Value::S(x), Value::S(y)) => Ok(Value::S(
            x.div(&y).map_err(|e| ParseError::Arithmetic(e.to_string()))?,
        )),
        (Value::F(x), Value::S(y)) => {
            let inv = Scalar::one()
                .div(&y)
                .map_err(|e| ParseError::Arithmetic(e.to_string()))?;
            Ok(Value::F(x.scale(&inv)))
        }
        _ => Err(ParseError::Syntax(pos, "cannot divide by a form".into())),
    }
}

/// Parse a scalar expression.
pub fn parse_scalar(src: &str) -> Result<Scalar, ParseError> {
    let mut p = Parser::new(src, 8);
    let v = p.parse_expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(ParseError::Syntax(p.pos, "trailing input".into()));
    }
    match v {
        Value::S(s) => Ok(s),
        Value::F(_) => Err(ParseError::ExpectedScalar),
    }
}

/// Parse a form expression of the given dimension and grade. A literal zero
/// scalar parses as the zero form of the requested grade.
pub fn parse_form(src: &str, dim: u8, grade: u8) -> Result<Form, ParseError> {
    let mut p = Parser::new(src, dim);
    let v = p.parse_expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(ParseError::Syntax(p.pos, "trailing input".into()));
    }
    match v {
        Value::F(f) => {
            if f.grade() != grade {
                return Err(ParseError::WrongGrade {
                    expected: grade,
                    found: f.grade(),
                    dim,
                });
            }
            Ok(f)
        }
        Value::S(s) => {
            if s.is_zero() {
                Ok(Form::zero(dim, grade))
            } else if grade == 0 {
                Ok(Form::scalar(dim, s))
            } else {
                Err(ParseError::WrongGrade {
                    expected: grade,
                    found: 0,
                    dim,
                })
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Printing
// ---------------------------------------------------------------------------

fn prec(e: &Expr) -> u8 {
    match e {
        Expr::Add(..) | Expr::Sub(..) => 1,
        Expr::Mul(..) | Expr::Div(..) => 2,
        Expr::Pow(..) => 3,
        Expr::Param => 4,
        Expr::Sqrt(..) => 4,
    }
}

fn render_sym(e: &Expr) -> String {
    match e {
        Expr::Param => "t".to_string(),
        Expr::Add(a, b) => format!("{}+{}", render_at(a, 1), render_at(b, 1)),
        Expr::Sub(a, b) => format!("{}-{}", render_at(a, 1), render_at(b, 2)),
        Expr::Mul(a, b) => format!("{}*{}", render_at(a, 2), render_at(b, 2)),
        Expr::Div(a, b) => format!("{}/{}", render_at(a, 2), render_at(b, 3)),
        Expr::Pow(a, n) => format!("{}^{}", render_at(a, 4), n),
        Expr::Sqrt(a) => format!("sqrt({})", render_scalar(a)),
    }
}

fn render_at(s: &Scalar, min_prec: u8) -> String {
    match s {
        Scalar::Sym(e) => {
            let body = render_sym(e);
            if prec(e) < min_prec {
                format!("({})", body)
            } else {
                body
            }
        }
        _ => {
            let body = render_scalar(s);
            if body.contains(['+', '-', '*', '/']) && !body.starts_with('(') {
                format!("({})", body)
            } else {
                body
            }
        }
    }
}

fn render_jet(j: &Jet) -> String {
    // jets print as their exact dyadic value so reports stay re-parseable
    let v = j.value();
    if v == v.trunc() && v.abs() < 1e15 {
        format!("{}", v as i64)
    } else {
        let r = BigRational::from_float(v).unwrap_or_else(BigRational::one);
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Render a scalar in the expression grammar.
pub fn render_scalar(s: &Scalar) -> String {
    match s {
        Scalar::Const(r) => crate::scalar::render_radical(r),
        Scalar::Jet(j) => render_jet(j),
        Scalar::Sym(e) => render_sym(e),
    }
}

/// Render a form in the expression grammar.
pub fn render_form(f: &Form) -> String {
    if f.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (mask, c) in f.terms() {
        let idx: String = Form::mask_indices(mask)
            .iter()
            .map(|i| char::from(b'0' + i))
            .collect();
        let mono = if f.grade() == 0 {
            String::new()
        } else {
            format!("e^{{{}}}", idx)
        };
        let cs = render_scalar(c);
        let piece = if mono.is_empty() {
            cs
        } else if cs == "1" {
            mono
        } else if cs == "-1" {
            format!("-{}", mono)
        } else if cs.starts_with('(')
            || !cs.contains(['+', '-'])
            || (cs.starts_with('-') && !cs[1..].contains(['+', '-']))
        {
            format!("{}*{}", cs, mono)
        } else {
            format!("({})*{}", cs, mono)
        };
        if out.is_empty() {
            out = piece;
        } else if let Some(stripped) = piece.strip_prefix('-') {
            out.push('-');
            out.push_str(stripped);
        } else {
            out.push('+');
            out.push_str(&piece);
        }
    }
    out
}

/// Scalar constant from a radical, exposed for catalog construction.
pub fn scalar_sqrt(q_num: i64, q_den: i64, s: u64) -> Scalar {
    Scalar::Const(Radical::sqrt_term(
        BigRational::new(BigInt::from(q_num), BigInt::from(q_den)),
        s,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_catalog_expressions() {
        let s = parse_scalar("3/(16*t)").unwrap();
        assert!((s.eval(2.0) - 3.0 / 32.0).abs() < 1e-15);
        let s = parse_scalar("2*sqrt(2)").unwrap();
        assert_eq!(s, scalar_sqrt(2, 1, 2));
        let s = parse_scalar("t^-1").unwrap();
        assert!((s.eval(4.0) - 0.25).abs() < 1e-15);
        let s = parse_scalar("sqrt(4-t^2)/t^3").unwrap();
        assert!((s.eval(1.0) - 3f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn parses_forms() {
        let f = parse_form("e^{247}+e^{256}+e^{346}", 7, 3).unwrap();
        assert_eq!(f.terms().count(), 3);
        let f = parse_form("-2*e^{45}+2*e^{67}", 7, 2).unwrap();
        assert_eq!(f.coeff_at(&[4, 5]), Scalar::int(-2));
        let f = parse_form("0", 7, 3).unwrap();
        assert!(f.is_zero());
        assert!(parse_form("e^{21}", 7, 2).is_err());
        assert!(parse_form("e^{12}", 7, 3).is_err());
    }

    #[test]
    fn syntax_error_carries_position() {
        let err = parse_scalar("3/(16*t").unwrap_err();
        assert!(matches!(err, ParseError::Syntax(_, _)));
    }

    #[test]
    fn round_trip() {
        for src in [
            "3/(16*t)",
            "2*sqrt(2)",
            "-1/2*e^{12}+e^{34}",
            "sqrt(4-t^2)/t^3*e^{1}",
            "t^2-1/2",
            "e^{135}-e^{146}-e^{236}-e^{245}",
        ] {
            let dim = 7;
            if let Ok(f) = parse_form(src, dim, guess_grade(src)) {
                let printed = render_form(&f);
                let reparsed = parse_form(&printed, dim, f.grade()).unwrap();
                assert_eq!(f, reparsed, "round trip failed for {}", src);
            } else {
                let s = parse_scalar(src).unwrap();
                let printed = render_scalar(&s);
                let reparsed = parse_scalar(&printed).unwrap();
                for &t in &[0.7, 1.3, 2.9] {
                    assert!((s.eval(t) - reparsed.eval(t)).abs() < 1e-12);
                }
            }
        }
    }

    fn guess_grade(src: &str) -> u8 {
        src.split("e^{")
            .nth(1)
            .map(|rest| rest.bytes().take_while(|b| b.is_ascii_digit()).count() as u8)
            .unwrap_or(0)
    }
}
