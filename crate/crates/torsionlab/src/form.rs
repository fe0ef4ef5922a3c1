//! Exterior algebra over an orthonormal coframe: grade-homogeneous forms
//! with [`Scalar`] coefficients stored on strictly increasing multi-indices.
//!
//! Multi-indices are bitmasks over frame indices 1..=n (bit i-1 set means
//! e^i occurs). The inner product makes the increasing-multi-index monomials
//! orthonormal, so ⟨φ,φ⟩ = 7 for the standard G2 form.

use crate::scalar::Scalar;
use std::collections::BTreeMap;
use std::fmt;

pub type Mask = u16;

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum FormError {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(u8, u8),
    #[error("grade mismatch: {0} vs {1}")]
    GradeMismatch(u8, u8),
    #[error("grade overflow: {0} + {1} exceeds dimension {2}")]
    GradeOverflow(u8, u8, u8),
    #[error("contraction of a 0-form")]
    ContractZeroForm,
    #[error("frame index {0} out of range 1..={1}")]
    IndexOutOfRange(u8, u8),
    #[error("monomial index set has wrong cardinality for grade {0}")]
    BadMonomial(u8),
}

/// Grade-homogeneous exterior form on an n-dimensional orthonormal coframe.
#[derive(Clone, PartialEq)]
pub struct Form {
    dim: u8,
    grade: u8,
    coeffs: BTreeMap<Mask, Scalar>,
}

/// Sign of the permutation sorting the concatenation (a, b) of two disjoint
/// increasing index sets: (-1)^inversions.
pub fn merge_sign(a: Mask, b: Mask) -> i8 {
    debug_assert_eq!(a & b, 0);
    let mut inversions = 0u32;
    let mut bb = b;
    while bb != 0 {
        let low = bb & bb.wrapping_neg();
        let pos = low.trailing_zeros();
        // elements of a greater than this element of b
        inversions += (a >> (pos + 1)).count_ones();
        bb ^= low;
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Position (0-based) of index bit within mask, assuming the bit is set.
fn position_in(mask: Mask, bit: Mask) -> u32 {
    (mask & (bit - 1)).count_ones()
}

impl Form {
    pub fn zero(dim: u8, grade: u8) -> Self {
        assert!(dim <= 8 && grade <= dim);
        Form {
            dim,
            grade,
            coeffs: BTreeMap::new(),
        }
    }

    /// Basis monomial e^{i1...ik} from 1-based indices (must be strictly
    /// increasing).
    pub fn monomial(dim: u8, indices: &[u8], coeff: Scalar) -> Result<Self, FormError> {
        let mut mask: Mask = 0;
        for &i in indices {
            if i == 0 || i > dim {
                return Err(FormError::IndexOutOfRange(i, dim));
            }
            mask |= 1 << (i - 1);
        }
        if mask.count_ones() as usize != indices.len() {
            return Err(FormError::BadMonomial(indices.len() as u8));
        }
        let mut f = Form::zero(dim, indices.len() as u8);
        f.add_term(mask, coeff);
        Ok(f)
    }

    pub fn scalar(dim: u8, value: Scalar) -> Self {
        let mut f = Form::zero(dim, 0);
        f.add_term(0, value);
        f
    }

    pub fn one_form(dim: u8, i: u8, coeff: Scalar) -> Self {
        Form::monomial(dim, &[i], coeff).expect("valid index")
    }

    /// Volume form e^{1...n}.
    pub fn volume(dim: u8) -> Self {
        let mask = ((1u32 << dim) - 1) as Mask;
        let mut f = Form::zero(dim, dim);
        f.add_term(mask, Scalar::one());
        f
    }

    pub fn dim(&self) -> u8 {
        self.dim
    }

    pub fn grade(&self) -> u8 {
        self.grade
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (Mask, &Scalar)> {
        self.coeffs.iter().map(|(m, c)| (*m, c))
    }

    pub fn coeff(&self, mask: Mask) -> Scalar {
        self.coeffs.get(&mask).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Coefficient on 1-based strictly increasing indices.
    pub fn coeff_at(&self, indices: &[u8]) -> Scalar {
        let mut mask: Mask = 0;
        for &i in indices {
            mask |= 1 << (i - 1);
        }
        self.coeff(mask)
    }

    pub fn add_term(&mut self, mask: Mask, coeff: Scalar) {
        debug_assert_eq!(mask.count_ones() as u8, self.grade);
        if coeff.is_zero() {
            return;
        }
        let entry = self
            .coeffs
            .entry(mask)
            .or_insert_with(Scalar::zero);
        *entry = entry.add(&coeff);
        if entry.is_zero() {
            self.coeffs.remove(&mask);
        }
    }

    pub fn add(&self, o: &Form) -> Result<Form, FormError> {
        if self.dim != o.dim {
            return Err(FormError::DimensionMismatch(self.dim, o.dim));
        }
        if self.grade != o.grade {
            return Err(FormError::GradeMismatch(self.grade, o.grade));
        }
        let mut out = self.clone();
        for (m, c) in o.terms() {
            out.add_term(m, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, o: &Form) -> Result<Form, FormError> {
        self.add(&o.scale(&Scalar::int(-1)))
    }

    pub fn scale(&self, s: &Scalar) -> Form {
        let mut out = Form::zero(self.dim, self.grade);
        for (m, c) in self.terms() {
            out.add_term(m, c.mul(s));
        }
        out
    }

    pub fn neg(&self) -> Form {
        self.scale(&Scalar::int(-1))
    }

    /// Exterior product. Bilinear, graded-anticommutative.
    pub fn wedge(&self, o: &Form) -> Result<Form, FormError> {
        if self.dim != o.dim {
            return Err(FormError::DimensionMismatch(self.dim, o.dim));
        }
        let g = self.grade + o.grade;
        if g > self.dim {
            return Err(FormError::GradeOverflow(self.grade, o.grade, self.dim));
        }
        let mut out = Form::zero(self.dim, g);
        for (ma, ca) in self.terms() {
            for (mb, cb) in o.terms() {
                if ma & mb != 0 {
                    continue;
                }
                let sign = merge_sign(ma, mb);
                let c = ca.mul(cb);
                out.add_term(ma | mb, if sign > 0 { c } else { c.neg() });
            }
        }
        Ok(out)
    }

    /// Interior product e_i ⌟ a (metric dual of e^i; the frame metric is the
    /// identity). Antiderivation of degree -1.
    pub fn contract(&self, i: u8) -> Result<Form, FormError> {
        if self.grade == 0 {
            return Err(FormError::ContractZeroForm);
        }
        if i == 0 || i > self.dim {
            return Err(FormError::IndexOutOfRange(i, self.dim));
        }
        let bit: Mask = 1 << (i - 1);
        let mut out = Form::zero(self.dim, self.grade - 1);
        for (m, c) in self.terms() {
            if m & bit == 0 {
                continue;
            }
            let pos = position_in(m, bit);
            let coeff = if pos % 2 == 0 { c.clone() } else { c.neg() };
            out.add_term(m & !bit, coeff);
        }
        Ok(out)
    }

    /// Contraction with a vector field X = Σ X^i e_i given by its components.
    pub fn contract_vector(&self, comps: &[Scalar]) -> Result<Form, FormError> {
        let mut out = Form::zero(self.dim, self.grade.saturating_sub(1));
        if self.grade == 0 {
            return Ok(out);
        }
        for (i, x) in comps.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            out = out.add(&self.contract(i as u8 + 1)?.scale(x))?;
        }
        Ok(out)
    }

    /// Hodge star for the orthonormal frame with orientation e^{1...n}.
    pub fn hodge(&self) -> Form {
        let full = ((1u32 << self.dim) - 1) as Mask;
        let mut out = Form::zero(self.dim, self.dim - self.grade);
        for (m, c) in self.terms() {
            let comp = full & !m;
            let sign = merge_sign(m, comp);
            out.add_term(comp, if sign > 0 { c.clone() } else { c.neg() });
        }
        out
    }

    /// Pointwise inner product Σ_I a_I b_I making increasing monomials
    /// orthonormal; a ∧ ⋆b = ⟨a,b⟩ vol holds identically.
    pub fn inner(&self, o: &Form) -> Result<Scalar, FormError> {
        if self.dim != o.dim {
            return Err(FormError::DimensionMismatch(self.dim, o.dim));
        }
        if self.grade != o.grade {
            return Err(FormError::GradeMismatch(self.grade, o.grade));
        }
        let mut acc = Scalar::zero();
        for (m, c) in self.terms() {
            let oc = o.coeffs.get(&m);
            if let Some(oc) = oc {
                acc = acc.add(&c.mul(oc));
            }
        }
        Ok(acc)
    }

    pub fn norm2(&self) -> Scalar {
        self.inner(self).expect("same shape")
    }

    /// Evaluate a k-form on k frame vectors (1-based indices, any order).
    pub fn eval_frame(&self, indices: &[u8]) -> Scalar {
        assert_eq!(indices.len(), self.grade as usize);
        let mut f = self.clone();
        // a(e_{i1},...,e_{ik}) = (e_{ik} ⌟ ... ⌟ e_{i1} ⌟ a) read right to left
        for &i in indices {
            if f.grade == 0 {
                return Scalar::zero();
            }
            f = match f.contract(i) {
                Ok(g) => g,
                Err(_) => return Scalar::zero(),
            };
        }
        f.coeff(0)
    }

    /// Substitute e^j ↦ Σ_k A[j][k] f^k (0-based matrix over 1-based frame
    /// indices). Used for coframe changes and for the action of endomorphisms
    /// on forms.
    pub fn substitute(&self, a: &[Vec<Scalar>]) -> Form {
        let n = self.dim as usize;
        assert_eq!(a.len(), n);
        let mut out = Form::zero(self.dim, self.grade);
        for (m, c) in self.terms() {
            // product over indices in m of the image 1-forms
            let mut acc: Vec<(Mask, Scalar)> = vec![(0, c.clone())];
            let mut mm = m;
            while mm != 0 {
                let low = mm & mm.wrapping_neg();
                let j = low.trailing_zeros() as usize; // 0-based index
                let mut next: Vec<(Mask, Scalar)> = Vec::new();
                for (mask, coeff) in &acc {
                    for (k, ajk) in a[j].iter().enumerate() {
                        if ajk.is_zero() {
                            continue;
                        }
                        let bit: Mask = 1 << k;
                        if mask & bit != 0 {
                            continue;
                        }
                        let sign = merge_sign(*mask, bit);
                        let c2 = coeff.mul(ajk);
                        next.push((mask | bit, if sign > 0 { c2 } else { c2.neg() }));
                    }
                }
                acc = next;
                mm ^= low;
            }
            for (mask, coeff) in acc {
                out.add_term(mask, coeff);
            }
        }
        out
    }

    /// Largest |coefficient| when evaluated at parameter t.
    pub fn max_abs_eval(&self, t: f64) -> f64 {
        self.terms()
            .map(|(_, c)| c.eval(t).abs())
            .fold(0.0, f64::max)
    }

    /// Convert all coefficients to jets anchored at t0.
    pub fn to_jet(&self, t0: f64) -> Form {
        let mut out = Form::zero(self.dim, self.grade);
        for (m, c) in self.terms() {
            out.add_term(m, Scalar::jet(c.to_jet(t0)));
        }
        out
    }

    /// True when every coefficient is an exact constant.
    pub fn is_exact(&self) -> bool {
        self.terms().all(|(_, c)| c.is_const())
    }

    pub fn mask_indices(mask: Mask) -> Vec<u8> {
        let mut v = Vec::new();
        for i in 0..16 {
            if mask & (1 << i) != 0 {
                v.push(i + 1);
            }
        }
        v
    }
}

impl fmt::Debug for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::parse::render_form(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(dim: u8, idx: &[u8]) -> Form {
        Form::monomial(dim, idx, Scalar::one()).unwrap()
    }

    #[test]
    fn wedge_basics() {
        let e1 = e(7, &[1]);
        let e2 = e(7, &[2]);
        assert_eq!(e1.wedge(&e2).unwrap(), e(7, &[1, 2]));
        assert!(e1.wedge(&e1).unwrap().is_zero());
        // (e1+e2) ∧ (e1−e2) = −2 e12
        let a = e1.add(&e2).unwrap();
        let b = e1.sub(&e2).unwrap();
        let w = a.wedge(&b).unwrap();
        assert_eq!(w, e(7, &[1, 2]).scale(&Scalar::int(-2)));
    }

    #[test]
    fn wedge_grade_overflow_rejected() {
        let a = e(6, &[1, 2, 3, 4]);
        let c = e(6, &[3, 4, 5]);
        assert!(matches!(
            a.wedge(&c),
            Err(FormError::GradeOverflow(4, 3, 6))
        ));
    }

    #[test]
    fn contract_basics() {
        assert_eq!(e(7, &[1, 2]).contract(1).unwrap(), e(7, &[2]));
        assert!(e(7, &[1, 3]).contract(2).unwrap().is_zero());
        assert!(matches!(
            Form::scalar(7, Scalar::one()).contract(1),
            Err(FormError::ContractZeroForm)
        ));
    }

    #[test]
    fn hodge_orientation() {
        // ⋆e1 = e234567 in n=7
        assert_eq!(e(7, &[1]).hodge(), e(7, &[2, 3, 4, 5, 6, 7]));
        // ⋆⋆ = id on 2-forms in n=6
        let a = e(6, &[1, 2]);
        assert_eq!(a.hodge().hodge(), a);
        // ⋆⋆ = (−1)^{k(n−k)}: n=6, k=3 → −1
        let b = e(6, &[1, 3, 5]);
        assert_eq!(b.hodge().hodge(), b.neg());
    }

    #[test]
    fn inner_and_volume_identity() {
        let a = e(7, &[1, 2]);
        let b = e(7, &[3, 4]);
        assert!(a.inner(&b).unwrap().is_zero());
        // a ∧ ⋆a = |a|^2 vol
        let w = a.wedge(&a.hodge()).unwrap();
        assert_eq!(w, Form::volume(7));
    }

    #[test]
    fn substitute_permutation() {
        // swap e1 <-> e2
        let n = 3usize;
        let mut mat = vec![vec![Scalar::zero(); n]; n];
        mat[0][1] = Scalar::one();
        mat[1][0] = Scalar::one();
        mat[2][2] = Scalar::one();
        let a = e(3, &[1, 3]);
        assert_eq!(a.substitute(&mat), e(3, &[2, 3]));
        let b = e(3, &[1, 2]);
        assert_eq!(b.substitute(&mat), e(3, &[1, 2]).neg());
    }
}
