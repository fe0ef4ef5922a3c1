//! Coefficient ring for all exterior-calculus computations.
//!
//! A [`Scalar`] is one of three things:
//!
//! * an exact constant in the field Q(√2, √3, ...) ([`Radical`]),
//! * a truncated Taylor expansion in the frame parameter around a fixed
//!   point ([`Jet`]), used for fast numeric evaluation of parametric frames,
//! * a symbolic expression tree in the parameter `t` with exact
//!   differentiation, used for catalog data and printed output.
//!
//! Arithmetic on constants stays exact; identity checks on constant-coefficient
//! frames therefore hold with zero tolerance. Parametric frames are either
//! differentiated symbolically or "jetified" at a sample point.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::rc::Rc;

/// Number of Taylor coefficients carried by a [`Jet`] (degree 4).
pub const JET_LEN: usize = 5;

// ---------------------------------------------------------------------------
// Radical: exact elements of Q(sqrt(s1), sqrt(s2), ...)
// ---------------------------------------------------------------------------

/// Exact element of the field generated over Q by square roots of integers,
/// stored as a canonical Q-linear combination of √s over distinct squarefree
/// s ≥ 1. The key 1 holds the rational part.
#[derive(Clone, PartialEq, Eq)]
pub struct Radical {
    terms: BTreeMap<u64, BigRational>,
}

fn squarefree_split(n: u64) -> (u64, u64) {
    // n = square * free, free squarefree
    let mut square = 1u64;
    let mut free = 1u64;
    let mut m = n;
    let mut p = 2u64;
    #[allow(unused_mut)]
    while p * p <= m {
        let mut e = 0;
        while m % p == 0 {
            m /= p;
            e += 1;
        }
        square *= p.pow(e / 2);
        if e % 2 == 1 {
            free *= p;
        }
        p += 1;
    }
    free *= m; // leftover prime
    (square, free)
}

impl Radical {
    pub fn zero() -> Self {
        Radical {
            terms: BTreeMap::new(),
        }
    }

    pub fn from_rational(q: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !q.is_zero() {
            terms.insert(1, q);
        }
        Radical { terms }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_frac(num: i64, den: i64) -> Self {
        Self::from_rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// q·√s with s not necessarily squarefree.
    pub fn sqrt_term(q: BigRational, s: u64) -> Self {
        if q.is_zero() || s == 0 {
            return Self::zero();
        }
        let (sq, free) = squarefree_split(s);
        let mut terms = BTreeMap::new();
        terms.insert(free, q * BigRational::from_integer(BigInt::from(sq)));
        Radical { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_rational(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms.contains_key(&1))
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        if self.terms.is_empty() {
            None
        } else {
            self.terms.get(&1)
        }
    }

    pub fn rational_part(&self) -> BigRational {
        self.terms.get(&1).cloned().unwrap_or_else(BigRational::zero)
    }

    fn insert(&mut self, s: u64, q: BigRational) {
        if q.is_zero() {
            return;
        }
        let entry = self.terms.entry(s).or_insert_with(BigRational::zero);
        *entry += q;
        if entry.is_zero() {
            self.terms.remove(&s);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (s, q) in &other.terms {
            out.insert(*s, q.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        Radical {
            terms: self
                .terms
                .iter()
                .map(|(s, q)| (*s, -q.clone()))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (s1, q1) in &self.terms {
            for (s2, q2) in &other.terms {
                let prod = s1 * s2;
                let (sq, free) = squarefree_split(prod);
                out.insert(free, q1 * q2 * BigRational::from_integer(BigInt::from(sq)));
            }
        }
        out
    }

    /// Multiplicative inverse via conjugation over each prime radical in turn.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if let Some(q) = self.as_rational() {
            if self.terms.len() == 1 {
                return Some(Self::from_rational(q.recip()));
            }
        }
        // pick a prime dividing some key > 1
        let p = self
            .terms
            .keys()
            .find(|s| **s > 1)
            .map(|s| {
                let m = *s;
                let mut p = 2;
                while m % p != 0 {
                    p += 1;
                }
                p
            })
            .expect("non-rational radical has a key > 1");
        let conj = Radical {
            terms: self
                .terms
                .iter()
                .map(|(s, q)| (*s, if s % p == 0 { -q.clone() } else { q.clone() }))
                .collect(),
        };
        let reduced = self.mul(&conj); // invariant under conj_p: no √p left
        let inv_reduced = reduced.inv()?;
        Some(conj.mul(&inv_reduced))
    }

    pub fn div(&self, other: &Self) -> Option<Self> {
        Some(self.mul(&other.inv()?))
    }

    /// Exact square root when the result stays in the ring: argument must be
    /// a non-negative rational.
    pub fn sqrt(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(Self::zero());
        }
        let q = self.as_rational()?;
        if q.is_negative() {
            return None;
        }
        // sqrt(a/b) = sqrt(a*b)/b
        let a = q.numer().to_u64()?;
        let b = q.denom().to_u64()?;
        Some(Self::sqrt_term(
            BigRational::new(BigInt::one(), BigInt::from(b)),
            a.checked_mul(b)?,
        ))
    }

    pub fn pow(&self, n: i32) -> Option<Self> {
        if n == 0 {
            return Some(Self::from_int(1));
        }
        let base = if n < 0 { self.inv()? } else { self.clone() };
        let mut out = Self::from_int(1);
        for _ in 0..n.unsigned_abs() {
            out = out.mul(&base);
        }
        Some(out)
    }

    pub fn to_f64(&self) -> f64 {
        self.terms
            .iter()
            .map(|(s, q)| q.to_f64().unwrap_or(f64::NAN) * (*s as f64).sqrt())
            .sum()
    }
}

impl fmt::Debug for Radical {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", render_radical(self))
    }
}

fn render_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        format!("{}", q.numer())
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub(crate) fn render_radical(r: &Radical) -> String {
    if r.is_zero() {
        return "0".to_string();
    }
    let mut parts = Vec::new();
    for (s, q) in &r.terms {
        let body = if *s == 1 {
            render_rational(q)
        } else if q.is_one() {
            format!("sqrt({})", s)
        } else if *q == -BigRational::one() {
            format!("-sqrt({})", s)
        } else {
            format!("{}*sqrt({})", render_rational(q), s)
        };
        if parts.is_empty() {
            parts.push(body);
        } else if body.starts_with('-') {
            parts.push(format!("-{}", &body[1..]));
        } else {
            parts.push(format!("+{}", body));
        }
    }
    let joined = parts.join("");
    if r.terms.len() > 1 {
        format!("({})", joined)
    } else {
        joined
    }
}

// ---------------------------------------------------------------------------
// Jet: truncated Taylor expansion at a sample point
// ---------------------------------------------------------------------------

/// Truncated Taylor expansion c0 + c1·(t−t0) + ... of a coefficient function
/// at a sample point. Degree 4 is enough for every identity in the crate
/// (at most two exterior derivatives are ever stacked on frame data).
#[derive(Clone, Copy)]
pub struct Jet {
    pub c: [f64; JET_LEN],
    /// Highest Taylor degree still trustworthy (truncation loses one degree
    /// per differentiation).
    pub valid: u8,
}

impl PartialEq for Jet {
    fn eq(&self, other: &Self) -> bool {
        self.c == other.c
    }
}

impl Jet {
    pub fn constant(v: f64) -> Self {
        let mut c = [0.0; JET_LEN];
        c[0] = v;
        Jet { c, valid: (JET_LEN - 1) as u8 }
    }

    /// The variable itself: t = t0 + (t−t0).
    pub fn var(t0: f64) -> Self {
        let mut c = [0.0; JET_LEN];
        c[0] = t0;
        c[1] = 1.0;
        Jet { c, valid: (JET_LEN - 1) as u8 }
    }

    pub fn value(&self) -> f64 {
        self.c[0]
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|x| *x == 0.0)
    }

    pub fn add(&self, o: &Jet) -> Jet {
        let mut c = [0.0; JET_LEN];
        for i in 0..JET_LEN {
            c[i] = self.c[i] + o.c[i];
        }
        Jet { c, valid: self.valid.min(o.valid) }
    }

    pub fn neg(&self) -> Jet {
        let mut c = [0.0; JET_LEN];
        for i in 0..JET_LEN {
            c[i] = -self.c[i];
        }
        Jet { c, valid: self.valid }
    }

    pub fn sub(&self, o: &Jet) -> Jet {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Jet) -> Jet {
        let mut c = [0.0; JET_LEN];
        for i in 0..JET_LEN {
            for j in 0..JET_LEN - i {
                c[i + j] += self.c[i] * o.c[j];
            }
        }
        Jet { c, valid: self.valid.min(o.valid) }
    }

    pub fn div(&self, o: &Jet) -> Option<Jet> {
        if o.c[0] == 0.0 {
            return None;
        }
        // power-series division
        let mut c = [0.0; JET_LEN];
        for i in 0..JET_LEN {
            let mut acc = self.c[i];
            for j in 0..i {
                acc -= c[j] * o.c[i - j];
            }
            c[i] = acc / o.c[0];
        }
        Some(Jet { c, valid: self.valid.min(o.valid) })
    }

    pub fn sqrt(&self) -> Option<Jet> {
        if self.c[0] <= 0.0 {
            return if self.is_zero() {
                Some(Jet { c: [0.0; JET_LEN], valid: self.valid })
            } else {
                None
            };
        }
        let mut c = [0.0; JET_LEN];
        c[0] = self.c[0].sqrt();
        for i in 1..JET_LEN {
            let mut acc = self.c[i];
            for j in 1..i {
                acc -= c[j] * c[i - j];
            }
            c[i] = acc / (2.0 * c[0]);
        }
        Some(Jet { c, valid: self.valid })
    }

    pub fn powi(&self, n: i32) -> Option<Jet> {
        if n == 0 {
            return Some(Jet::constant(1.0));
        }
        let base = if n < 0 {
            Jet::constant(1.0).div(self)?
        } else {
            *self
        };
        let mut out = Jet::constant(1.0);
        for _ in 0..n.unsigned_abs() {
            out = out.mul(&base);
        }
        Some(out)
    }

    /// d/dt of the truncated expansion (one trusted degree is lost).
    pub fn derivative(&self) -> Jet {
        debug_assert!(self.valid > 0, "jet differentiated past its valid order");
        let mut c = [0.0; JET_LEN];
        for i in 1..JET_LEN {
            c[i - 1] = self.c[i] * i as f64;
        }
        Jet { c, valid: self.valid.saturating_sub(1) }
    }

    /// Largest |coefficient| among the trusted Taylor degrees.
    pub fn max_abs_valid(&self) -> f64 {
        self.c[..=self.valid as usize]
            .iter()
            .fold(0.0f64, |m, x| m.max(x.abs()))
    }
}

impl fmt::Debug for Jet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "jet{:?}", self.c)
    }
}

// ---------------------------------------------------------------------------
// Scalar: the user-facing coefficient type
// ---------------------------------------------------------------------------

/// Symbolic expression node over the parameter `t`.
#[derive(Clone, PartialEq)]
pub enum Expr {
    Param,
    Add(Scalar, Scalar),
    Sub(Scalar, Scalar),
    Mul(Scalar, Scalar),
    Div(Scalar, Scalar),
    Pow(Scalar, i32),
    Sqrt(Scalar),
}

/// Element of the differential coefficient ring.
#[derive(Clone, PartialEq)]
pub enum Scalar {
    Const(Radical),
    Jet(Jet),
    Sym(Rc<Expr>),
}

#[derive(Debug, thiserror::Error)]
pub enum ScalarError {
    #[error("division by zero scalar")]
    DivisionByZero,
    #[error("square root of a negative or non-representable constant")]
    BadSqrt,
    #[error("cannot mix jet-valued and symbolic scalars")]
    MixedModes,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Const(Radical::zero())
    }

    pub fn one() -> Self {
        Scalar::Const(Radical::from_int(1))
    }

    pub fn int(n: i64) -> Self {
        Scalar::Const(Radical::from_int(n))
    }

    pub fn frac(num: i64, den: i64) -> Self {
        Scalar::Const(Radical::from_frac(num, den))
    }

    /// q·√s
    pub fn sqrt_int(s: u64) -> Self {
        Scalar::Const(Radical::sqrt_term(BigRational::one(), s))
    }

    pub fn param() -> Self {
        Scalar::Sym(Rc::new(Expr::Param))
    }

    pub fn jet(j: Jet) -> Self {
        Scalar::Jet(j)
    }

    pub fn float(v: f64) -> Self {
        Scalar::Jet(Jet::constant(v))
    }

    pub fn is_const(&self) -> bool {
        matches!(self, Scalar::Const(_))
    }

    pub fn is_symbolic(&self) -> bool {
        matches!(self, Scalar::Sym(_))
    }

    pub fn as_const(&self) -> Option<&Radical> {
        match self {
            Scalar::Const(r) => Some(r),
            _ => None,
        }
    }

    /// Exact zero test for constants and jets; structural zero for symbolic
    /// expressions (sound but not complete — symbolic identity checks are
    /// done by sampling).
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Const(r) => r.is_zero(),
            Scalar::Jet(j) => j.is_zero(),
            Scalar::Sym(_) => false,
        }
    }

    pub fn add(&self, o: &Scalar) -> Scalar {
        match (self, o) {
            (Scalar::Const(a), Scalar::Const(b)) => Scalar::Const(a.add(b)),
            (Scalar::Jet(a), Scalar::Jet(b)) => Scalar::Jet(a.add(b)),
            (Scalar::Const(a), Scalar::Jet(b)) => Scalar::Jet(Jet::constant(a.to_f64()).add(b)),
            (Scalar::Jet(a), Scalar::Const(b)) => Scalar::Jet(a.add(&Jet::constant(b.to_f64()))),
            _ => {
                if self.is_zero() {
                    return o.clone();
                }
                if o.is_zero() {
                    return self.clone();
                }
                Scalar::Sym(Rc::new(Expr::Add(self.clone(), o.clone())))
            }
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Const(a) => Scalar::Const(a.neg()),
            Scalar::Jet(a) => Scalar::Jet(a.neg()),
            _ => Scalar::int(-1).mul(self),
        }
    }

    pub fn sub(&self, o: &Scalar) -> Scalar {
        match (self, o) {
            (Scalar::Const(a), Scalar::Const(b)) => Scalar::Const(a.sub(b)),
            (Scalar::Jet(a), Scalar::Jet(b)) => Scalar::Jet(a.sub(b)),
            (Scalar::Const(a), Scalar::Jet(b)) => Scalar::Jet(Jet::constant(a.to_f64()).sub(b)),
            (Scalar::Jet(a), Scalar::Const(b)) => Scalar::Jet(a.sub(&Jet::constant(b.to_f64()))),
            _ => {
                if o.is_zero() {
                    return self.clone();
                }
                if self == o {
                    return Scalar::zero();
                }
                if self.is_zero() {
                    return o.neg();
                }
                Scalar::Sym(Rc::new(Expr::Sub(self.clone(), o.clone())))
            }
        }
    }

    pub fn mul(&self, o: &Scalar) -> Scalar {
        match (self, o) {
            (Scalar::Const(a), Scalar::Const(b)) => Scalar::Const(a.mul(b)),
            (Scalar::Jet(a), Scalar::Jet(b)) => Scalar::Jet(a.mul(b)),
            (Scalar::Const(a), Scalar::Jet(b)) => Scalar::Jet(Jet::constant(a.to_f64()).mul(b)),
            (Scalar::Jet(a), Scalar::Const(b)) => Scalar::Jet(a.mul(&Jet::constant(b.to_f64()))),
            _ => {
                if self.is_zero() || o.is_zero() {
                    return Scalar::zero();
                }
                if let Scalar::Const(c) = self {
                    if c.is_rational() && c.rational_part().is_one() {
                        return o.clone();
                    }
                }
                if let Scalar::Const(c) = o {
                    if c.is_rational() && c.rational_part().is_one() {
                        return self.clone();
                    }
                }
                Scalar::Sym(Rc::new(Expr::Mul(self.clone(), o.clone())))
            }
        }
    }

    pub fn div(&self, o: &Scalar) -> Result<Scalar, ScalarError> {
        match (self, o) {
            (Scalar::Const(a), Scalar::Const(b)) => Ok(Scalar::Const(
                a.div(b).ok_or(ScalarError::DivisionByZero)?,
            )),
            (Scalar::Jet(a), Scalar::Jet(b)) => {
                Ok(Scalar::Jet(a.div(b).ok_or(ScalarError::DivisionByZero)?))
            }
            (Scalar::Const(a), Scalar::Jet(b)) => Ok(Scalar::Jet(
                Jet::constant(a.to_f64())
                    .div(b)
                    .ok_or(ScalarError::DivisionByZero)?,
            )),
            (Scalar::Jet(a), Scalar::Const(b)) => {
                if b.is_zero() {
                    return Err(ScalarError::DivisionByZero);
                }
                Ok(Scalar::Jet(
                    a.div(&Jet::constant(b.to_f64()))
                        .ok_or(ScalarError::DivisionByZero)?,
                ))
            }
            _ => {
                if o.is_zero() {
                    return Err(ScalarError::DivisionByZero);
                }
                if self.is_zero() {
                    return Ok(Scalar::zero());
                }
                if let Scalar::Const(c) = o {
                    // fold division by an exact constant into multiplication
                    let inv = c.inv().ok_or(ScalarError::DivisionByZero)?;
                    return Ok(Scalar::Const(inv).mul(self));
                }
                Ok(Scalar::Sym(Rc::new(Expr::Div(self.clone(), o.clone()))))
            }
        }
    }

    pub fn powi(&self, n: i32) -> Result<Scalar, ScalarError> {
        match self {
            Scalar::Const(r) => Ok(Scalar::Const(r.pow(n).ok_or(ScalarError::DivisionByZero)?)),
            Scalar::Jet(j) => Ok(Scalar::Jet(j.powi(n).ok_or(ScalarError::DivisionByZero)?)),
            _ => {
                if n == 0 {
                    return Ok(Scalar::one());
                }
                if n == 1 {
                    return Ok(self.clone());
                }
                Ok(Scalar::Sym(Rc::new(Expr::Pow(self.clone(), n))))
            }
        }
    }

    pub fn sqrt(&self) -> Result<Scalar, ScalarError> {
        match self {
            Scalar::Const(r) => match r.sqrt() {
                Some(s) => Ok(Scalar::Const(s)),
                None => {
                    if r.to_f64() < 0.0 {
                        Err(ScalarError::BadSqrt)
                    } else {
                        // constant but not representable in the radical ring;
                        // keep a symbolic node (still t-free)
                        Ok(Scalar::Sym(Rc::new(Expr::Sqrt(self.clone()))))
                    }
                }
            },
            Scalar::Jet(j) => Ok(Scalar::Jet(j.sqrt().ok_or(ScalarError::BadSqrt)?)),
            _ => Ok(Scalar::Sym(Rc::new(Expr::Sqrt(self.clone())))),
        }
    }

    pub fn depends_on_t(&self) -> bool {
        match self {
            Scalar::Const(_) => false,
            Scalar::Jet(j) => j.c[1..].iter().any(|c| *c != 0.0),
            Scalar::Sym(e) => match &**e {
                Expr::Param => true,
                Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                    a.depends_on_t() || b.depends_on_t()
                }
                Expr::Pow(a, _) | Expr::Sqrt(a) => a.depends_on_t(),
            },
        }
    }

    /// Exact derivative with respect to t. Closed on the grammar.
    pub fn derivative(&self) -> Scalar {
        match self {
            Scalar::Const(_) => Scalar::zero(),
            Scalar::Jet(j) => Scalar::Jet(j.derivative()),
            Scalar::Sym(e) => match &**e {
                Expr::Param => Scalar::one(),
                Expr::Add(a, b) => a.derivative().add(&b.derivative()),
                Expr::Sub(a, b) => a.derivative().sub(&b.derivative()),
                Expr::Mul(a, b) => a.derivative().mul(b).add(&a.mul(&b.derivative())),
                Expr::Div(a, b) => {
                    // (a/b)' = (a'b - ab') / b^2
                    let num = a.derivative().mul(b).sub(&a.mul(&b.derivative()));
                    let den = b.mul(b);
                    num.div(&den).expect("nonzero denominator")
                }
                Expr::Pow(a, n) => {
                    // n a^(n-1) a'
                    Scalar::int(*n as i64)
                        .mul(&a.powi(n - 1).expect("pow"))
                        .mul(&a.derivative())
                }
                Expr::Sqrt(a) => {
                    // a' / (2 sqrt a)
                    let two_sqrt = Scalar::int(2).mul(&a.sqrt().expect("sqrt"));
                    a.derivative().div(&two_sqrt).expect("nonzero sqrt")
                }
            },
        }
    }

    /// Numeric evaluation. For jets this returns the value at the anchor
    /// point; for constants the argument is ignored.
    pub fn eval(&self, t: f64) -> f64 {
        match self {
            Scalar::Const(r) => r.to_f64(),
            Scalar::Jet(j) => j.value(),
            Scalar::Sym(e) => match &**e {
                Expr::Param => t,
                Expr::Add(a, b) => a.eval(t) + b.eval(t),
                Expr::Sub(a, b) => a.eval(t) - b.eval(t),
                Expr::Mul(a, b) => a.eval(t) * b.eval(t),
                Expr::Div(a, b) => a.eval(t) / b.eval(t),
                Expr::Pow(a, n) => a.eval(t).powi(*n),
                Expr::Sqrt(a) => a.eval(t).sqrt(),
            },
        }
    }

    /// Re-evaluate the expression in jet arithmetic at anchor t0.
    pub fn to_jet(&self, t0: f64) -> Jet {
        match self {
            Scalar::Const(r) => Jet::constant(r.to_f64()),
            Scalar::Jet(j) => *j,
            Scalar::Sym(e) => match &**e {
                Expr::Param => Jet::var(t0),
                Expr::Add(a, b) => a.to_jet(t0).add(&b.to_jet(t0)),
                Expr::Sub(a, b) => a.to_jet(t0).sub(&b.to_jet(t0)),
                Expr::Mul(a, b) => a.to_jet(t0).mul(&b.to_jet(t0)),
                Expr::Div(a, b) => a
                    .to_jet(t0)
                    .div(&b.to_jet(t0))
                    .expect("nonzero denominator at sample point"),
                Expr::Pow(a, n) => a.to_jet(t0).powi(*n).expect("jet pow"),
                Expr::Sqrt(a) => a.to_jet(t0).sqrt().expect("jet sqrt"),
            },
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::parse::render_scalar(self))
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::int(n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radical_field_ops() {
        // (2√2)·(1/√2) = 2
        let a = Radical::sqrt_term(BigRational::from_integer(2.into()), 2);
        let b = Radical::sqrt_term(BigRational::one(), 2)
            .inv()
            .unwrap();
        assert_eq!(a.mul(&b), Radical::from_int(2));
        // 1/(1+√2) = √2 - 1
        let x = Radical::from_int(1).add(&Radical::sqrt_term(BigRational::one(), 2));
        let inv = x.inv().unwrap();
        let expect = Radical::sqrt_term(BigRational::one(), 2).sub(&Radical::from_int(1));
        assert_eq!(inv, expect);
        // multi-radical inverse: x * x^-1 = 1
        let y = Radical::sqrt_term(BigRational::one(), 6)
            .add(&Radical::sqrt_term(BigRational::from_integer(3.into()), 2))
            .add(&Radical::from_frac(1, 7));
        assert_eq!(y.mul(&y.inv().unwrap()), Radical::from_int(1));
    }

    #[test]
    fn radical_sqrt() {
        assert_eq!(
            Radical::from_int(8).sqrt().unwrap(),
            Radical::sqrt_term(BigRational::from_integer(2.into()), 2)
        );
        assert_eq!(
            Radical::from_frac(1, 2).sqrt().unwrap(),
            Radical::sqrt_term(BigRational::new(1.into(), 2.into()), 2)
        );
        assert!(Radical::from_int(-1).sqrt().is_none());
    }

    #[test]
    fn jet_series() {
        // 1/t at t0=2: value 0.5, derivative -0.25
        let t = Jet::var(2.0);
        let inv = Jet::constant(1.0).div(&t).unwrap();
        assert!((inv.value() - 0.5).abs() < 1e-15);
        assert!((inv.derivative().value() + 0.25).abs() < 1e-15);
        // sqrt(t)^2 = t
        let s = t.sqrt().unwrap();
        let sq = s.mul(&s);
        for i in 0..JET_LEN {
            assert!((sq.c[i] - t.c[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn scalar_derivative_closed() {
        // d/dt [ t^2 / sqrt(t) ] = 3/2 t^(1/2)
        let t = Scalar::param();
        let x = t.powi(2).unwrap().div(&t.sqrt().unwrap()).unwrap();
        let d = x.derivative();
        for &t0 in &[0.5f64, 1.0, 2.0, 5.0] {
            let expect = 1.5 * t0.sqrt();
            assert!((d.eval(t0) - expect).abs() < 1e-12 * expect.abs().max(1.0));
        }
    }

    #[test]
    fn scalar_jetify_matches_eval() {
        let t = Scalar::param();
        // 3/(16 t) style coefficient
        let x = Scalar::frac(3, 16).div(&t).unwrap();
        let j = x.to_jet(2.0);
        assert!((j.value() - 3.0 / 32.0).abs() < 1e-15);
        assert!((j.derivative().value() - (-3.0 / 64.0)).abs() < 1e-15);
    }
}
