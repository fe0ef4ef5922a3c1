//! Orthonormal coframes with declared structure equations d(e^i), the
//! induced exterior derivative, and coframe changes.
//!
//! A frame is always declared orthonormal; different metrics on the same
//! underlying algebra are obtained by changing the coframe. One-parameter
//! frames carry a spec (p, λ) with dt = λ·e^p, so warped coframes stay
//! inside the same mechanism.

use crate::form::{Form, FormError};
use crate::linalg::{invert, LinalgError};
use crate::scalar::{Radical, Scalar};

#[derive(Debug, thiserror::Error)]
pub enum FrameError {
    #[error(transparent)]
    Form(#[from] FormError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("t-dependent coefficient on a frame with no parameter spec")]
    TDependentWithoutParam,
    #[error("structure table entry {0} has wrong dimension or grade")]
    BadTableEntry(u8),
    #[error("coframe change matrix is singular")]
    SingularMatrix,
    #[error("coframe change must fix the parameter direction")]
    ParamDirectionMixed,
    #[error("form is defined over a different frame dimension")]
    WrongDimension,
}

/// Parameter direction of a one-parameter frame: dt = λ·e^p on the declared
/// validity interval for t.
#[derive(Clone)]
pub struct ParamSpec {
    pub direction: u8,
    pub lambda: Scalar,
    pub interval: (f64, f64),
}

/// Orthonormal coframe with structure equations.
#[derive(Clone)]
pub struct FrameAlgebra {
    dim: u8,
    d_table: Vec<Form>,
    param: Option<ParamSpec>,
}

/// Result of evaluating d(d e^i) over the frame.
pub struct DSquaredReport {
    pub residuals: Vec<Form>,
    pub exact_zero: bool,
    pub max_abs: f64,
}

impl FrameAlgebra {
    pub fn new(dim: u8, d_table: Vec<Form>, param: Option<ParamSpec>) -> Result<Self, FrameError> {
        if d_table.len() != dim as usize {
            return Err(FrameError::BadTableEntry(d_table.len() as u8));
        }
        for (i, f) in d_table.iter().enumerate() {
            if f.dim() != dim || f.grade() != 2 {
                return Err(FrameError::BadTableEntry(i as u8 + 1));
            }
        }
        if param.is_none() {
            for f in &d_table {
                if f.terms().any(|(_, c)| c.depends_on_t()) {
                    return Err(FrameError::TDependentWithoutParam);
                }
            }
        }
        Ok(FrameAlgebra {
            dim,
            d_table,
            param,
        })
    }

    /// Abelian frame: all structure equations vanish.
    pub fn flat(dim: u8) -> Self {
        FrameAlgebra {
            dim,
            d_table: (0..dim).map(|_| Form::zero(dim, 2)).collect(),
            param: None,
        }
    }

    pub fn dim(&self) -> u8 {
        self.dim
    }

    pub fn d_of_generator(&self, i: u8) -> &Form {
        &self.d_table[i as usize - 1]
    }

    pub fn param(&self) -> Option<&ParamSpec> {
        self.param.as_ref()
    }

    pub fn is_constant(&self) -> bool {
        self.param.is_none()
            && self
                .d_table
                .iter()
                .all(|f| f.terms().all(|(_, c)| c.is_const()))
    }

    /// Five deterministic sample points in the interior of the validity
    /// interval (a single dummy point for constant frames).
    pub fn sample_points(&self) -> Vec<f64> {
        match &self.param {
            None => vec![1.0],
            Some(p) => {
                let (lo, hi) = p.interval;
                (1..=5).map(|i| lo + (hi - lo) * i as f64 / 6.0).collect()
            }
        }
    }

    /// Exterior derivative induced by the structure table: linear, Leibniz,
    /// agrees with the table on generators, and df = f′·λ·e^p on functions.
    pub fn d(&self, a: &Form) -> Result<Form, FrameError> {
        if a.dim() != self.dim {
            return Err(FrameError::WrongDimension);
        }
        if a.grade() == self.dim {
            return Ok(Form::zero(self.dim, self.dim));
        }
        let mut out = Form::zero(self.dim, a.grade() + 1);
        for (mask, c) in a.terms() {
            // d(coefficient) ∧ e^I
            if c.depends_on_t() {
                let p = self.param.as_ref().ok_or(FrameError::TDependentWithoutParam)?;
                let dc = c.derivative().mul(&p.lambda);
                let df = Form::one_form(self.dim, p.direction, dc);
                let mut mono = Form::zero(self.dim, a.grade());
                mono.add_term(mask, Scalar::one());
                out = out.add(&df.wedge(&mono)?)?;
            }
            // Leibniz over the monomial indices
            let mut pos = 0u32;
            let mut mm = mask;
            while mm != 0 {
                let low = mm & mm.wrapping_neg();
                let idx = low.trailing_zeros() as u8 + 1;
                let rest = mask & !low;
                let de = self.d_table[idx as usize - 1].clone();
                if !de.is_zero() {
                    let mut rest_form = Form::zero(self.dim, a.grade() - 1);
                    rest_form.add_term(rest, Scalar::one());
                    let term = de.wedge(&rest_form)?;
                    let signed = if pos % 2 == 0 {
                        term.scale(c)
                    } else {
                        term.scale(&c.neg())
                    };
                    out = out.add(&signed)?;
                }
                pos += 1;
                mm ^= low;
            }
        }
        Ok(out)
    }

    /// Evaluate d(d e^i) for every generator. The residual must vanish
    /// exactly for constant frames and at sampled t otherwise.
    pub fn check_d_squared(&self) -> DSquaredReport {
        let mut residuals = Vec::new();
        let mut exact = true;
        let mut max_abs: f64 = 0.0;
        for i in 1..=self.dim {
            let dd = self.d(&self.d_table[i as usize - 1]).unwrap_or_else(|_| {
                exact = false;
                Form::zero(self.dim, 3)
            });
            if !dd.is_zero() {
                exact = false;
            }
            for t in self.sample_points() {
                max_abs = max_abs.max(dd.max_abs_eval(t));
            }
            residuals.push(dd);
        }
        DSquaredReport {
            residuals,
            exact_zero: exact,
            max_abs,
        }
    }

    /// Declare a new orthonormal coframe ẽ = M·e on the same underlying
    /// algebra (exact constant entries). This changes the metric.
    pub fn change_coframe(&self, m: &[Vec<Radical>]) -> Result<FrameAlgebra, FrameError> {
        let n = self.dim as usize;
        if m.len() != n || m.iter().any(|r| r.len() != n) {
            return Err(FrameError::SingularMatrix);
        }
        if let Some(p) = &self.param {
            let pi = p.direction as usize - 1;
            for j in 0..n {
                let expect_row = if j == pi { Radical::from_int(1) } else { Radical::zero() };
                if m[pi][j] != expect_row || (j != pi && !m[j][pi].is_zero()) {
                    return Err(FrameError::ParamDirectionMixed);
                }
            }
        }
        let minv = invert(m).map_err(|_| FrameError::SingularMatrix)?;
        // substitution e^k = Σ_l (M^{-1})[k][l] ẽ^l
        let subst: Vec<Vec<Scalar>> = minv
            .iter()
            .map(|row| row.iter().map(|x| Scalar::Const(x.clone())).collect())
            .collect();
        let mut table = Vec::with_capacity(n);
        for i in 0..n {
            // d ẽ^i = Σ_j M[i][j] d e^j, rewritten in the new coframe
            let mut acc = Form::zero(self.dim, 2);
            for (j, mij) in m[i].iter().enumerate() {
                if mij.is_zero() {
                    continue;
                }
                acc = acc.add(&self.d_table[j].scale(&Scalar::Const(mij.clone())))?;
            }
            table.push(acc.substitute(&subst));
        }
        FrameAlgebra::new(self.dim, table, self.param.clone())
    }

    /// Rewrite a form given in the old coframe in the new coframe ẽ = M·e.
    pub fn rewrite_form(&self, m: &[Vec<Radical>], f: &Form) -> Result<Form, FrameError> {
        let minv = invert(m).map_err(|_| FrameError::SingularMatrix)?;
        let subst: Vec<Vec<Scalar>> = minv
            .iter()
            .map(|row| row.iter().map(|x| Scalar::Const(x.clone())).collect())
            .collect();
        Ok(f.substitute(&subst))
    }

    /// Structure coefficient c_{i,jk}: the coefficient of e^{jk} in d e^i,
    /// extended antisymmetrically in (j,k). 1-based indices.
    pub fn structure_coeff(&self, i: u8, j: u8, k: u8) -> Scalar {
        if j == k {
            return Scalar::zero();
        }
        let c = self.d_table[i as usize - 1].coeff_at(&[j.min(k), j.max(k)]);
        if j < k {
            c
        } else {
            c.neg()
        }
    }

    /// Lie bracket [e_i, e_j] = −Σ_k de^k(e_i, e_j) e_k as component vector.
    pub fn bracket(&self, i: u8, j: u8) -> Vec<Scalar> {
        (1..=self.dim)
            .map(|k| self.structure_coeff(k, i, j).neg())
            .collect()
    }

    /// Jetify the whole frame at parameter value t0: coefficients become
    /// truncated Taylor expansions and λ is expanded alongside.
    pub fn at_t(&self, t0: f64) -> FrameAlgebra {
        let table = self.d_table.iter().map(|f| f.to_jet(t0)).collect();
        let param = self.param.as_ref().map(|p| ParamSpec {
            direction: p.direction,
            lambda: Scalar::jet(p.lambda.to_jet(t0)),
            interval: p.interval,
        });
        FrameAlgebra {
            dim: self.dim,
            d_table: table,
            param,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_form;

    fn cyt_nilmanifold() -> FrameAlgebra {
        // de1 = e36, de4 = e26, de5 = e23
        let mk = |s: &str| parse_form(s, 6, 2).unwrap();
        FrameAlgebra::new(
            6,
            vec![mk("e^{36}"), mk("0"), mk("0"), mk("e^{26}"), mk("e^{23}"), mk("0")],
            None,
        )
        .unwrap()
    }

    #[test]
    fn d_on_generators_matches_table() {
        let f = cyt_nilmanifold();
        let e1 = Form::one_form(6, 1, Scalar::one());
        assert_eq!(f.d(&e1).unwrap(), parse_form("e^{36}", 6, 2).unwrap());
    }

    #[test]
    fn d_squared_zero_on_nilmanifold() {
        let f = cyt_nilmanifold();
        let rep = f.check_d_squared();
        assert!(rep.exact_zero);
    }

    #[test]
    fn d_squared_detects_violation() {
        // de1 = e23, de2 = e12 violates Jacobi: d²e1 = de2∧e3 = e123 ≠ 0
        let mk = |s: &str| parse_form(s, 3, 2).unwrap();
        let f = FrameAlgebra::new(3, vec![mk("e^{23}"), mk("e^{12}"), mk("0")], None).unwrap();
        let rep = f.check_d_squared();
        assert!(!rep.exact_zero);
        assert!(rep.max_abs > 0.5);
    }

    #[test]
    fn leibniz_on_random_products() {
        let f = cyt_nilmanifold();
        let a = parse_form("e^{12}-3*e^{36}", 6, 2).unwrap();
        let b = parse_form("2*e^{4}+e^{6}", 6, 1).unwrap();
        let lhs = f.d(&a.wedge(&b).unwrap()).unwrap();
        let rhs = f
            .d(&a)
            .unwrap()
            .wedge(&b)
            .unwrap()
            .add(&a.wedge(&f.d(&b).unwrap()).unwrap())
            .unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn warped_frame_with_param() {
        // E1 = dt, E2 = 2 t^{1/2} e2 on a flat base: dE2 = (1/(2t)) E12
        let t = Scalar::param();
        let lam = Scalar::one();
        let half_over_t = Scalar::frac(1, 2).div(&t).unwrap();
        let mut de2 = Form::zero(2, 2);
        de2.add_term(0b11, half_over_t);
        let f = FrameAlgebra::new(
            2,
            vec![Form::zero(2, 2), de2],
            Some(ParamSpec {
                direction: 1,
                lambda: lam,
                interval: (0.5, 5.0),
            }),
        )
        .unwrap();
        let rep = f.check_d_squared();
        assert!(rep.max_abs < 1e-12);
        // d of the 0-form t: dt = e^1
        let t_form = Form::scalar(2, Scalar::param());
        let dt = f.d(&t_form).unwrap();
        assert_eq!(dt, Form::one_form(2, 1, Scalar::one()));
        // d(t·E2) = dt∧E2 + t dE2 (Leibniz through the coefficient)
        let te2 = Form::one_form(2, 2, Scalar::param());
        let d_te2 = f.d(&te2).unwrap();
        let expect = dt
            .wedge(&Form::one_form(2, 2, Scalar::one()))
            .unwrap()
            .add(&f.d(&Form::one_form(2, 2, Scalar::one())).unwrap().scale(&Scalar::param()))
            .unwrap();
        for tt in f.sample_points() {
            let diff = d_te2.sub(&expect).unwrap();
            assert!(diff.max_abs_eval(tt) < 1e-12);
        }
    }

    #[test]
    fn t_dependent_coefficient_without_param_is_an_error() {
        let f = FrameAlgebra::flat(3);
        let a = Form::one_form(3, 1, Scalar::param());
        assert!(matches!(
            f.d(&a),
            Err(FrameError::TDependentWithoutParam)
        ));
        // and the constructor rejects t-dependent tables without a spec
        let mut de = Form::zero(3, 2);
        de.add_term(0b11, Scalar::param());
        assert!(matches!(
            FrameAlgebra::new(3, vec![de, Form::zero(3, 2), Form::zero(3, 2)], None),
            Err(FrameError::TDependentWithoutParam)
        ));
    }

    #[test]
    fn coframe_change_permutation_and_roundtrip() {
        let f = cyt_nilmanifold();
        // swap e1 and e2
        let mut m: Vec<Vec<Radical>> = (0..6)
            .map(|i| {
                (0..6)
                    .map(|j| {
                        if i == j {
                            Radical::from_int(1)
                        } else {
                            Radical::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        m[0][0] = Radical::zero();
        m[1][1] = Radical::zero();
        m[0][1] = Radical::from_int(1);
        m[1][0] = Radical::from_int(1);
        let g = f.change_coframe(&m).unwrap();
        assert!(g.check_d_squared().exact_zero);
        // d ẽ^2 = d e^1 = e36 (unchanged by the relabeling of 1,2)
        assert_eq!(
            g.d_of_generator(2),
            &parse_form("e^{36}", 6, 2).unwrap()
        );
        // round trip: applying M twice (an involution) returns the table
        let h = g.change_coframe(&m).unwrap();
        for i in 1..=6 {
            assert_eq!(h.d_of_generator(i), f.d_of_generator(i));
        }
    }
}
