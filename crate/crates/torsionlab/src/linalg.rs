//! Small exact linear algebra layer: Gaussian elimination over the radical
//! constant field (or over jets in numeric mode), least-squares solves in a
//! span of forms, and nullspace bases used to materialize module complements.

use crate::form::{Form, FormError, Mask};
use crate::scalar::{Jet, Radical, Scalar};

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("singular linear system")]
    Singular,
    #[error("span contains non-constant coefficients")]
    NonConstantSpan,
    #[error("shape mismatch in linear solve")]
    Shape,
    #[error(transparent)]
    Form(#[from] FormError),
}

/// Field operations needed by the elimination routines.
pub trait FieldElem: Clone {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Option<Self>;
    fn is_zero(&self) -> bool;
    /// Magnitude used for pivot selection (exact fields may return 1 for any
    /// nonzero element).
    fn pivot_size(&self) -> f64;
}

impl FieldElem for Radical {
    fn zero() -> Self {
        Radical::zero()
    }
    fn one() -> Self {
        Radical::from_int(1)
    }
    fn add(&self, o: &Self) -> Self {
        Radical::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        Radical::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        Radical::mul(self, o)
    }
    fn div(&self, o: &Self) -> Option<Self> {
        Radical::div(self, o)
    }
    fn is_zero(&self) -> bool {
        Radical::is_zero(self)
    }
    fn pivot_size(&self) -> f64 {
        if self.is_zero() {
            0.0
        } else {
            1.0
        }
    }
}

impl FieldElem for Jet {
    fn zero() -> Self {
        Jet::constant(0.0)
    }
    fn one() -> Self {
        Jet::constant(1.0)
    }
    fn add(&self, o: &Self) -> Self {
        Jet::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        Jet::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        Jet::mul(self, o)
    }
    fn div(&self, o: &Self) -> Option<Self> {
        Jet::div(self, o)
    }
    fn is_zero(&self) -> bool {
        self.value().abs() < 1e-12
    }
    fn pivot_size(&self) -> f64 {
        self.value().abs()
    }
}

/// Solve A X = B for X by Gauss–Jordan with partial pivoting. `b` holds the
/// right-hand sides as columns; the solution replaces them.
pub fn solve<F: FieldElem>(
    a: &[Vec<F>],
    b: &[Vec<F>],
) -> Result<Vec<Vec<F>>, LinalgError> {
    let n = a.len();
    if a.iter().any(|r| r.len() != n) || b.iter().any(|c| c.len() != n) {
        return Err(LinalgError::Shape);
    }
    let mut m: Vec<Vec<F>> = a.to_vec();
    let mut rhs: Vec<Vec<F>> = b.to_vec();
    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&i, &j| {
                m[i][col]
                    .pivot_size()
                    .partial_cmp(&m[j][col].pivot_size())
                    .unwrap()
            })
            .ok_or(LinalgError::Singular)?;
        if m[pivot_row][col].is_zero() {
            return Err(LinalgError::Singular);
        }
        m.swap(col, pivot_row);
        for c in rhs.iter_mut() {
            c.swap(col, pivot_row);
        }
        let pivot = m[col][col].clone();
        for j in 0..n {
            m[col][j] = m[col][j].div(&pivot).ok_or(LinalgError::Singular)?;
        }
        for c in rhs.iter_mut() {
            c[col] = c[col].div(&pivot).ok_or(LinalgError::Singular)?;
        }
        for row in 0..n {
            if row == col || m[row][col].is_zero() {
                continue;
            }
            let factor = m[row][col].clone();
            for j in 0..n {
                let t = factor.mul(&m[col][j]);
                m[row][j] = m[row][j].sub(&t);
            }
            for c in rhs.iter_mut() {
                let t = factor.mul(&c[col]);
                c[row] = c[row].sub(&t);
            }
        }
    }
    Ok(rhs)
}

pub fn invert<F: FieldElem>(a: &[Vec<F>]) -> Result<Vec<Vec<F>>, LinalgError> {
    let n = a.len();
    let mut cols = Vec::with_capacity(n);
    for j in 0..n {
        let mut e = vec![F::zero(); n];
        e[j] = F::one();
        cols.push(e);
    }
    let sol = solve(a, &cols)?;
    // sol holds columns of A^{-1}; transpose to rows
    let mut inv = vec![vec![F::zero(); n]; n];
    for (j, col) in sol.iter().enumerate() {
        for i in 0..n {
            inv[i][j] = col[i].clone();
        }
    }
    Ok(inv)
}

/// Row-reduce in place; returns pivot column list (rank = its length).
pub fn row_reduce<F: FieldElem>(m: &mut [Vec<F>]) -> Vec<usize> {
    let rows = m.len();
    if rows == 0 {
        return vec![];
    }
    let cols = m[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let pivot_row = (r..rows).max_by(|&i, &j| {
            m[i][c]
                .pivot_size()
                .partial_cmp(&m[j][c].pivot_size())
                .unwrap()
        });
        let Some(pr) = pivot_row else { break };
        if m[pr][c].is_zero() {
            continue;
        }
        m.swap(r, pr);
        let pivot = m[r][c].clone();
        for j in 0..cols {
            m[r][j] = m[r][j].div(&pivot).unwrap();
        }
        for i in 0..rows {
            if i == r || m[i][c].is_zero() {
                continue;
            }
            let f = m[i][c].clone();
            for j in 0..cols {
                let t = f.mul(&m[r][j]);
                m[i][j] = m[i][j].sub(&t);
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    pivots
}

pub fn rank<F: FieldElem>(m: &[Vec<F>]) -> usize {
    let mut copy = m.to_vec();
    row_reduce(&mut copy).len()
}

/// Basis of the nullspace of `m` (right kernel).
pub fn nullspace<F: FieldElem>(m: &[Vec<F>]) -> Vec<Vec<F>> {
    if m.is_empty() {
        return vec![];
    }
    let cols = m[0].len();
    let mut red = m.to_vec();
    let pivots = row_reduce(&mut red);
    let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
    let mut basis = Vec::new();
    for free in 0..cols {
        if pivot_set.contains(&free) {
            continue;
        }
        let mut v = vec![F::zero(); cols];
        v[free] = F::one();
        for (row, &pc) in pivots.iter().enumerate() {
            // pivot variable = -coefficient of free column in that row
            v[pc] = F::zero().sub(&red[row][free]);
        }
        basis.push(v);
    }
    basis
}

// ---------------------------------------------------------------------------
// Span of forms with cached Gram inverse
// ---------------------------------------------------------------------------

/// A finite span of exact-coefficient forms with a cached inverse Gram
/// matrix, supporting orthogonal projection and coordinate solves for both
/// exact and jet-valued targets.
#[derive(Clone)]
pub struct Span {
    forms: Vec<Form>,
    gram_inv: Vec<Vec<Radical>>,
}

fn scalar_to_radical(s: &Scalar) -> Result<Radical, LinalgError> {
    s.as_const().cloned().ok_or(LinalgError::NonConstantSpan)
}

impl Span {
    /// Build a span from generators, discarding linear dependencies.
    pub fn new(mut forms: Vec<Form>) -> Result<Self, LinalgError> {
        forms.retain(|f| !f.is_zero());
        // drop dependent generators by row reduction on coefficient vectors
        if !forms.is_empty() {
            let masks: Vec<Mask> = monomial_masks(&forms);
            let mut rows: Vec<Vec<Radical>> = Vec::new();
            let mut kept: Vec<Form> = Vec::new();
            for f in forms.into_iter() {
                let row = form_to_row(&f, &masks)?;
                let mut trial = rows.clone();
                trial.push(row.clone());
                if rank(&trial) > rows.len() {
                    rows.push(row);
                    kept.push(f);
                }
            }
            forms = kept;
        }
        let k = forms.len();
        let mut gram = vec![vec![Radical::zero(); k]; k];
        for i in 0..k {
            for j in 0..k {
                gram[i][j] = scalar_to_radical(&forms[i].inner(&forms[j])?)?;
            }
        }
        let gram_inv = if k == 0 { vec![] } else { invert(&gram)? };
        Ok(Span { forms, gram_inv })
    }

    pub fn forms(&self) -> &[Form] {
        &self.forms
    }

    pub fn dim(&self) -> usize {
        self.forms.len()
    }

    /// Coordinates of the orthogonal projection of `f` onto the span.
    pub fn coords(&self, f: &Form) -> Result<Vec<Scalar>, LinalgError> {
        let rhs: Vec<Scalar> = self
            .forms
            .iter()
            .map(|b| b.inner(f))
            .collect::<Result<_, _>>()?;
        let mut out = Vec::with_capacity(self.forms.len());
        for row in &self.gram_inv {
            let mut acc = Scalar::zero();
            for (g, r) in row.iter().zip(rhs.iter()) {
                acc = acc.add(&Scalar::Const(g.clone()).mul(r));
            }
            out.push(acc);
        }
        Ok(out)
    }

    /// Orthogonal projection of `f` onto the span.
    pub fn project(&self, f: &Form) -> Result<Form, LinalgError> {
        let mut out = Form::zero(f.dim(), f.grade());
        for (x, b) in self.coords(f)?.iter().zip(self.forms.iter()) {
            out = out.add(&b.scale(x))?;
        }
        Ok(out)
    }
}

pub fn monomial_masks(forms: &[Form]) -> Vec<Mask> {
    let dim = forms[0].dim();
    let grade = forms[0].grade();
    let mut masks = Vec::new();
    for m in 0..(1u32 << dim) as Mask {
        if m.count_ones() as u8 == grade {
            masks.push(m);
        }
    }
    masks
}

pub fn form_to_row(f: &Form, masks: &[Mask]) -> Result<Vec<Radical>, LinalgError> {
    masks
        .iter()
        .map(|m| scalar_to_radical(&f.coeff(*m)))
        .collect()
}

/// Exact basis of the orthogonal complement of the given spans inside the
/// full space of (dim, grade) forms. Requires exact coefficients.
pub fn complement_basis(
    dim: u8,
    grade: u8,
    spans: &[&Span],
) -> Result<Vec<Form>, LinalgError> {
    let probe = Form::zero(dim, grade);
    let all_masks = {
        let mut masks = Vec::new();
        for m in 0..(1u32 << dim) as Mask {
            if m.count_ones() as u8 == grade {
                masks.push(m);
            }
        }
        masks
    };
    let _ = probe;
    let mut rows: Vec<Vec<Radical>> = Vec::new();
    for span in spans {
        for f in span.forms() {
            rows.push(form_to_row(f, &all_masks)?);
        }
    }
    if rows.is_empty() {
        // complement of nothing: the whole space
        let mut out = Vec::new();
        for m in &all_masks {
            let mut f = Form::zero(dim, grade);
            f.add_term(*m, Scalar::one());
            out.push(f);
        }
        return Ok(out);
    }
    let kernel = nullspace(&rows);
    let mut out = Vec::new();
    for v in kernel {
        let mut f = Form::zero(dim, grade);
        for (x, m) in v.iter().zip(all_masks.iter()) {
            f.add_term(*m, Scalar::Const(x.clone()));
        }
        out.push(f);
    }
    Ok(out)
}

/// Least-squares solve for `target ≈ Σ x_i span_i` over arbitrary (possibly
/// jet-valued) coefficients. Returns the coordinates and the residual form.
pub fn solve_in_span(span: &Span, target: &Form) -> Result<(Vec<Scalar>, Form), LinalgError> {
    let coords = span.coords(target)?;
    let mut residual = target.clone();
    for (x, b) in coords.iter().zip(span.forms().iter()) {
        residual = residual.sub(&b.scale(x))?;
    }
    Ok((coords, residual))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Scalar;

    #[test]
    fn exact_solve_with_radicals() {
        // [[1, √2],[√2, 3]] x = [1, 0]
        let r2 = || Radical::sqrt_term(num_rational::BigRational::from_integer(1.into()), 2);
        let a = vec![
            vec![Radical::from_int(1), r2()],
            vec![r2(), Radical::from_int(3)],
        ];
        let b = vec![vec![Radical::from_int(1), Radical::from_int(0)]];
        let x = solve(&a, &b).unwrap();
        // check A x = b exactly
        let ax0 = a[0][0].mul(&x[0][0]).add(&a[0][1].mul(&x[0][1]));
        let ax1 = a[1][0].mul(&x[0][0]).add(&a[1][1].mul(&x[0][1]));
        assert_eq!(ax0, Radical::from_int(1));
        assert!(ax1.is_zero());
    }

    #[test]
    fn span_projection_is_idempotent() {
        let e12 = Form::monomial(4, &[1, 2], Scalar::one()).unwrap();
        let e34 = Form::monomial(4, &[3, 4], Scalar::one()).unwrap();
        let omega = e12.add(&e34).unwrap();
        let span = Span::new(vec![omega.clone()]).unwrap();
        let p = span.project(&e12).unwrap();
        assert_eq!(p, omega.scale(&Scalar::frac(1, 2)));
        assert_eq!(span.project(&p).unwrap(), p);
    }

    #[test]
    fn complement_of_span() {
        let e1 = Form::monomial(3, &[1], Scalar::one()).unwrap();
        let span = Span::new(vec![e1]).unwrap();
        let comp = complement_basis(3, 1, &[&span]).unwrap();
        assert_eq!(comp.len(), 2);
        for f in comp {
            assert!(f.coeff_at(&[1]).is_zero());
        }
    }

    #[test]
    fn nullspace_dimension() {
        let rows = vec![vec![
            Radical::from_int(1),
            Radical::from_int(1),
            Radical::from_int(0),
        ]];
        let ns = nullspace(&rows);
        assert_eq!(ns.len(), 2);
    }
}
