//! Dense 2-tensors (and a thin 3-tensor used for the Nijenhuis tensor) in an
//! orthonormal frame, with the symmetric/skew splits and the ⋄ action on
//! forms that identify tensors with differential forms.

use crate::form::{Form, FormError};
use crate::scalar::Scalar;

/// 2-tensor A = A_ij e^i ⊗ e^j in an orthonormal frame.
#[derive(Clone, PartialEq)]
pub struct Tensor2 {
    dim: u8,
    entries: Vec<Scalar>, // row-major n×n
}

impl Tensor2 {
    pub fn zero(dim: u8) -> Self {
        Tensor2 {
            dim,
            entries: vec![Scalar::zero(); dim as usize * dim as usize],
        }
    }

    pub fn identity(dim: u8) -> Self {
        let mut t = Self::zero(dim);
        for i in 1..=dim {
            t.set(i, i, Scalar::one());
        }
        t
    }

    pub fn dim(&self) -> u8 {
        self.dim
    }

    pub fn get(&self, i: u8, j: u8) -> &Scalar {
        &self.entries[(i as usize - 1) * self.dim as usize + (j as usize - 1)]
    }

    pub fn set(&mut self, i: u8, j: u8, v: Scalar) {
        self.entries[(i as usize - 1) * self.dim as usize + (j as usize - 1)] = v;
    }

    pub fn add(&self, o: &Tensor2) -> Tensor2 {
        let mut out = self.clone();
        for (a, b) in out.entries.iter_mut().zip(o.entries.iter()) {
            *a = a.add(b);
        }
        out
    }

    pub fn sub(&self, o: &Tensor2) -> Tensor2 {
        let mut out = self.clone();
        for (a, b) in out.entries.iter_mut().zip(o.entries.iter()) {
            *a = a.sub(b);
        }
        out
    }

    pub fn scale(&self, s: &Scalar) -> Tensor2 {
        let mut out = self.clone();
        for a in out.entries.iter_mut() {
            *a = a.mul(s);
        }
        out
    }

    pub fn trace(&self) -> Scalar {
        let mut acc = Scalar::zero();
        for i in 1..=self.dim {
            acc = acc.add(self.get(i, i));
        }
        acc
    }

    pub fn transpose(&self) -> Tensor2 {
        let mut out = Tensor2::zero(self.dim);
        for i in 1..=self.dim {
            for j in 1..=self.dim {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn symmetric_part(&self) -> Tensor2 {
        self.add(&self.transpose()).scale(&Scalar::frac(1, 2))
    }

    /// Skew part as a 2-form: Σ_{i<j} (A_ij − A_ji)/2 · e^{ij}.
    pub fn skew_form(&self) -> Form {
        let mut f = Form::zero(self.dim, 2);
        for i in 1..=self.dim {
            for j in (i + 1)..=self.dim {
                let c = self.get(i, j).sub(self.get(j, i)).mul(&Scalar::frac(1, 2));
                if !c.is_zero() {
                    f = f
                        .add(&Form::monomial(self.dim, &[i, j], c).expect("valid"))
                        .expect("grade 2");
                }
            }
        }
        f
    }

    /// View a 2-form as the corresponding antisymmetric tensor.
    pub fn from_two_form(f: &Form) -> Tensor2 {
        assert_eq!(f.grade(), 2);
        let mut t = Tensor2::zero(f.dim());
        for i in 1..=f.dim() {
            for j in 1..=f.dim() {
                if i == j {
                    continue;
                }
                let c = if i < j {
                    f.coeff_at(&[i, j])
                } else {
                    f.coeff_at(&[j, i]).neg()
                };
                t.set(i, j, c);
            }
        }
        t
    }

    /// The ⋄ action on a form: A ⋄ γ = Σ_ij A_ij e^i ∧ (e_j ⌟ γ).
    pub fn diamond(&self, gamma: &Form) -> Result<Form, FormError> {
        let mut out = Form::zero(self.dim, gamma.grade());
        if gamma.grade() == 0 {
            return Ok(out);
        }
        for i in 1..=self.dim {
            let ei = Form::one_form(self.dim, i, Scalar::one());
            for j in 1..=self.dim {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                let term = ei.wedge(&gamma.contract(j)?)?;
                out = out.add(&term.scale(a))?;
            }
        }
        Ok(out)
    }

    /// Frobenius-style max |entry| at parameter t.
    pub fn max_abs_eval(&self, t: f64) -> f64 {
        self.entries
            .iter()
            .map(|c| c.eval(t).abs())
            .fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|c| c.is_zero())
    }

    pub fn norm2(&self) -> Scalar {
        let mut acc = Scalar::zero();
        for c in &self.entries {
            acc = acc.add(&c.mul(c));
        }
        acc
    }
}

impl std::fmt::Debug for Tensor2 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "Tensor2[{}x{}]", self.dim, self.dim)?;
        for i in 1..=self.dim {
            let row: Vec<String> = (1..=self.dim)
                .map(|j| crate::parse::render_scalar(self.get(i, j)))
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Dense 3-tensor N_ijk used for the Nijenhuis tensor before skewness is
/// established.
#[derive(Clone)]
pub struct Tensor3 {
    dim: u8,
    entries: Vec<Scalar>,
}

impl Tensor3 {
    pub fn zero(dim: u8) -> Self {
        let n = dim as usize;
        Tensor3 {
            dim,
            entries: vec![Scalar::zero(); n * n * n],
        }
    }

    pub fn dim(&self) -> u8 {
        self.dim
    }

    fn idx(&self, i: u8, j: u8, k: u8) -> usize {
        let n = self.dim as usize;
        (i as usize - 1) * n * n + (j as usize - 1) * n + (k as usize - 1)
    }

    pub fn get(&self, i: u8, j: u8, k: u8) -> &Scalar {
        &self.entries[self.idx(i, j, k)]
    }

    pub fn set(&mut self, i: u8, j: u8, k: u8, v: Scalar) {
        let ix = self.idx(i, j, k);
        self.entries[ix] = v;
    }

    pub fn add_to(&mut self, i: u8, j: u8, k: u8, v: &Scalar) {
        let ix = self.idx(i, j, k);
        self.entries[ix] = self.entries[ix].add(v);
    }

    pub fn sub(&self, o: &Tensor3) -> Tensor3 {
        let mut out = self.clone();
        for (a, b) in out.entries.iter_mut().zip(o.entries.iter()) {
            *a = a.sub(b);
        }
        out
    }

    /// Total antisymmetrization residual: max |N_ijk − Alt(N)_ijk| at t.
    pub fn skewness_residual(&self, t: f64) -> f64 {
        let alt = self.alternation();
        let mut max = 0.0f64;
        for i in 1..=self.dim {
            for j in 1..=self.dim {
                for k in 1..=self.dim {
                    let d = self.get(i, j, k).sub(alt.get(i, j, k));
                    max = max.max(d.eval(t).abs());
                }
            }
        }
        max
    }

    pub fn is_skew_exact(&self) -> bool {
        let alt = self.alternation();
        for i in 1..=self.dim {
            for j in 1..=self.dim {
                for k in 1..=self.dim {
                    if !self.get(i, j, k).sub(alt.get(i, j, k)).is_zero() {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn alternation(&self) -> Tensor3 {
        let mut out = Tensor3::zero(self.dim);
        let perms: [([usize; 3], i64); 6] = [
            ([0, 1, 2], 1),
            ([1, 2, 0], 1),
            ([2, 0, 1], 1),
            ([0, 2, 1], -1),
            ([2, 1, 0], -1),
            ([1, 0, 2], -1),
        ];
        for i in 1..=self.dim {
            for j in 1..=self.dim {
                for k in 1..=self.dim {
                    let v = [i, j, k];
                    let mut acc = Scalar::zero();
                    for (p, s) in &perms {
                        let term = self.get(v[p[0]], v[p[1]], v[p[2]]);
                        acc = acc.add(&term.mul(&Scalar::int(*s)));
                    }
                    out.set(i, j, k, acc.mul(&Scalar::frac(1, 6)));
                }
            }
        }
        out
    }

    /// Convert to a 3-form assuming total skewness.
    pub fn to_form(&self) -> Form {
        let mut f = Form::zero(self.dim, 3);
        for i in 1..=self.dim {
            for j in (i + 1)..=self.dim {
                for k in (j + 1)..=self.dim {
                    let c = self.get(i, j, k).clone();
                    if !c.is_zero() {
                        f = f
                            .add(&Form::monomial(self.dim, &[i, j, k], c).expect("valid"))
                            .expect("grade 3");
                    }
                }
            }
        }
        f
    }

    /// View a 3-form as a fully antisymmetric tensor.
    pub fn from_form(f: &Form) -> Tensor3 {
        let mut t = Tensor3::zero(f.dim());
        for (mask, _) in f.terms() {
            let idx = Form::mask_indices(mask);
            let (a, b, c) = (idx[0], idx[1], idx[2]);
            let perms: [([u8; 3], i64); 6] = [
                ([a, b, c], 1),
                ([b, c, a], 1),
                ([c, a, b], 1),
                ([a, c, b], -1),
                ([c, b, a], -1),
                ([b, a, c], -1),
            ];
            let coeff = f.coeff(mask);
            for (p, s) in &perms {
                t.set(p[0], p[1], p[2], coeff.mul(&Scalar::int(*s)));
            }
        }
        t
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_form;

    #[test]
    fn diamond_of_identity_counts_grade() {
        // g ⋄ γ = k·γ for a k-form
        let g = Tensor2::identity(6);
        let gamma = parse_form("e^{135}-2*e^{246}", 6, 3).unwrap();
        let d = g.diamond(&gamma).unwrap();
        assert_eq!(d, gamma.scale(&Scalar::int(3)));
    }

    #[test]
    fn skew_round_trip() {
        let f = parse_form("3*e^{12}-e^{34}", 4, 2).unwrap();
        let t = Tensor2::from_two_form(&f);
        assert_eq!(t.skew_form(), f);
        assert!(t.symmetric_part().is_zero());
    }

    #[test]
    fn tensor3_form_round_trip() {
        let f = parse_form("e^{123}+2*e^{134}", 4, 3).unwrap();
        let t = Tensor3::from_form(&f);
        assert!(t.is_skew_exact());
        assert_eq!(t.to_form(), f);
    }
}
