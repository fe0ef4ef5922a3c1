//! SU(3)-structures on 6-dimensional coframes: validation, the almost
//! complex structure J, irreducible module projections, intrinsic torsion
//! forms, the Nijenhuis tensor, the Bismut torsion 3-form T_ω and the
//! closed-form identities for dT_ω, dd^cω and the Bismut Ricci form.

use crate::form::{Form, FormError};
use crate::frame::{FrameAlgebra, FrameError};
use crate::g2::{form_vanishes, ZERO_TOL};
use crate::linalg::{complement_basis, LinalgError, Span};
use crate::scalar::Scalar;
use crate::tensor::{Tensor2, Tensor3};

#[derive(Debug, thiserror::Error)]
pub enum SU3Error {
    #[error(transparent)]
    Form(#[from] FormError),
    #[error(transparent)]
    Frame(#[from] FrameError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("an SU(3)-structure needs a 6-dimensional frame")]
    WrongShape,
    #[error("structure forms must have constant coefficients")]
    NonConstant,
    #[error("invariant violated: {0}")]
    Invalid(&'static str),
    #[error("inconsistent recovery of {0} across the torsion equations (residual {1:.3e})")]
    InconsistentTorsion(&'static str, f64),
    #[error("operation requires a totally skew Nijenhuis tensor (π₂ = σ₂ = 0)")]
    NotSkew,
    #[error("operation requires an almost SKT structure (dT_ω = 0)")]
    NotAlmostSkt,
    #[error("grade of form does not match projection label")]
    GradeMismatch,
}

/// Irreducible SU(3)-module labels for projections.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Module6 {
    TwoOne,
    TwoSix,
    TwoEight,
    ThreeRe,
    ThreeIm,
    ThreeSix,
    ThreeTwelve,
    FourOne,
    FourSix,
    FourEight,
}

impl Module6 {
    pub fn grade(self) -> u8 {
        match self {
            Module6::TwoOne | Module6::TwoSix | Module6::TwoEight => 2,
            Module6::ThreeRe | Module6::ThreeIm | Module6::ThreeSix | Module6::ThreeTwelve => 3,
            Module6::FourOne | Module6::FourSix | Module6::FourEight => 4,
        }
    }

    pub fn parse(label: &str) -> Option<Module6> {
        Some(match label {
            "2_1" => Module6::TwoOne,
            "2_6" => Module6::TwoSix,
            "2_8" => Module6::TwoEight,
            "3_re" => Module6::ThreeRe,
            "3_im" => Module6::ThreeIm,
            "3_6" => Module6::ThreeSix,
            "3_12" => Module6::ThreeTwelve,
            "4_1" => Module6::FourOne,
            "4_6" => Module6::FourSix,
            "4_8" => Module6::FourEight,
            _ => return None,
        })
    }
}

/// Intrinsic torsion forms:
/// dω  = −(3/2)σ₀ Ω⁺ + (3/2)π₀ Ω⁻ + ν₁∧ω + ν₃,
/// dΩ⁺ = π₀ ω² + π₁∧Ω⁺ − π₂∧ω,
/// dΩ⁻ = σ₀ ω² + Jπ₁∧Ω⁺ − σ₂∧ω.
#[derive(Clone)]
pub struct SU3Torsion {
    pub sigma0: Scalar,
    pub pi0: Scalar,
    pub nu1: Form,
    pub pi1: Form,
    pub pi2: Form,
    pub sigma2: Form,
    pub nu3: Form,
}

impl SU3Torsion {
    pub fn skew_nijenhuis(&self) -> bool {
        form_vanishes(&self.pi2) && form_vanishes(&self.sigma2)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SU3Flags {
    pub hermitian: bool,
    pub nearly_kahler: bool,
    pub half_flat: bool,
    pub cocoupled: bool,
    pub almost_skt: bool,
    pub almost_cyt: bool,
}

pub struct SU3Structure {
    frame: FrameAlgebra,
    omega: Form,
    omega_plus: Form,
    omega_minus: Form,
    j: Vec<Vec<Scalar>>,
    span_2_1: Span,
    span_2_6: Span,
    span_3_re: Span,
    span_3_im: Span,
    span_3_6: Span,
    basis_2_8: Span,
    span_omega2: Span,
    span_4_6: Span,
}

/// Standard flat-model forms ω = e12+e34+e56 and Ω = (e1+ie2)(e3+ie4)(e5+ie6).
pub fn standard_su3_forms() -> (Form, Form, Form) {
    let omega = crate::parse::parse_form("e^{12}+e^{34}+e^{56}", 6, 2).unwrap();
    let plus = crate::parse::parse_form("e^{135}-e^{146}-e^{236}-e^{245}", 6, 3).unwrap();
    let minus = crate::parse::parse_form("e^{136}+e^{145}+e^{235}-e^{246}", 6, 3).unwrap();
    (omega, plus, minus)
}

impl SU3Structure {
    pub fn new(
        frame: FrameAlgebra,
        omega: Form,
        omega_plus: Form,
        omega_minus: Form,
    ) -> Result<Self, SU3Error> {
        if frame.dim() != 6
            || omega.dim() != 6
            || omega.grade() != 2
            || omega_plus.grade() != 3
            || omega_minus.grade() != 3
        {
            return Err(SU3Error::WrongShape);
        }
        if !omega.is_exact() || !omega_plus.is_exact() || !omega_minus.is_exact() {
            return Err(SU3Error::NonConstant);
        }
        // structure invariants
        if !omega.wedge(&omega_plus)?.is_zero() || !omega.wedge(&omega_minus)?.is_zero() {
            return Err(SU3Error::Invalid("ω ∧ Ω± must vanish"));
        }
        let omega3 = omega.wedge(&omega)?.wedge(&omega)?;
        let pp = omega_plus.wedge(&omega_minus)?;
        if pp != omega3.scale(&Scalar::frac(2, 3)) {
            return Err(SU3Error::Invalid("Ω⁺ ∧ Ω⁻ = (2/3) ω³ normalization"));
        }
        // J from ω(X,Y) = g(JX,Y): J[b][a] = ω(e_a, e_b)
        let mut j = vec![vec![Scalar::zero(); 6]; 6];
        for a in 1..=6u8 {
            for b in 1..=6u8 {
                if a == b {
                    continue;
                }
                let c = if a < b {
                    omega.coeff_at(&[a, b])
                } else {
                    omega.coeff_at(&[b, a]).neg()
                };
                j[b as usize - 1][a as usize - 1] = c;
            }
        }
        // J² = −id
        for a in 0..6 {
            for b in 0..6 {
                let mut acc = Scalar::zero();
                for c in 0..6 {
                    acc = acc.add(&j[b][c].mul(&j[c][a]));
                }
                let expect = if a == b { Scalar::int(-1) } else { Scalar::zero() };
                if !acc.sub(&expect).is_zero() {
                    return Err(SU3Error::Invalid("J² = −id"));
                }
            }
        }
        // compatibility X⌟Ω⁺ = JX⌟Ω⁻
        for a in 1..=6u8 {
            let lhs = omega_plus.contract(a)?;
            let mut rhs = Form::zero(6, 2);
            for c in 1..=6u8 {
                let coeff = j[c as usize - 1][a as usize - 1].clone();
                if coeff.is_zero() {
                    continue;
                }
                rhs = rhs.add(&omega_minus.contract(c)?.scale(&coeff))?;
            }
            if lhs != rhs {
                return Err(SU3Error::Invalid("X⌟Ω⁺ = JX⌟Ω⁻"));
            }
        }
        let units: Vec<Form> = (1..=6).map(|i| Form::one_form(6, i, Scalar::one())).collect();
        let span_2_1 = Span::new(vec![omega.clone()])?;
        let span_2_6 = Span::new(
            (1..=6)
                .map(|i| omega_plus.contract(i))
                .collect::<Result<Vec<_>, _>>()?,
        )?;
        let basis_2_8 = Span::new(complement_basis(6, 2, &[&span_2_1, &span_2_6])?)?;
        let span_3_re = Span::new(vec![omega_plus.clone()])?;
        let span_3_im = Span::new(vec![omega_minus.clone()])?;
        let span_3_6 = Span::new(
            units
                .iter()
                .map(|e| e.wedge(&omega))
                .collect::<Result<Vec<_>, _>>()?,
        )?;
        let span_omega2 = Span::new(vec![omega.wedge(&omega)?])?;
        let span_4_6 = Span::new(
            units
                .iter()
                .map(|e| e.wedge(&omega_plus))
                .collect::<Result<Vec<_>, _>>()?,
        )?;
        Ok(SU3Structure {
            frame,
            omega,
            omega_plus,
            omega_minus,
            j,
            span_2_1,
            span_2_6,
            span_3_re,
            span_3_im,
            span_3_6,
            basis_2_8,
            span_omega2,
            span_4_6,
        })
    }

    pub fn standard(frame: FrameAlgebra) -> Result<Self, SU3Error> {
        let (o, p, m) = standard_su3_forms();
        Self::new(frame, o, p, m)
    }

    pub fn frame(&self) -> &FrameAlgebra {
        &self.frame
    }
    pub fn omega(&self) -> &Form {
        &self.omega
    }
    pub fn omega_plus(&self) -> &Form {
        &self.omega_plus
    }
    pub fn omega_minus(&self) -> &Form {
        &self.omega_minus
    }
    pub fn j_matrix(&self) -> &Vec<Vec<Scalar>> {
        &self.j
    }
    pub fn basis_2_8(&self) -> &[Form] {
        self.basis_2_8.forms()
    }
    pub fn basis_2_6(&self) -> &[Form] {
        self.span_2_6.forms()
    }

    pub fn d(&self, f: &Form) -> Result<Form, SU3Error> {
        Ok(self.frame.d(f)?)
    }

    /// δ = −⋆d⋆ (all grades, n = 6).
    pub fn codiff(&self, f: &Form) -> Result<Form, SU3Error> {
        Ok(self.frame.d(&f.hodge())?.hodge().neg())
    }

    pub fn laplacian(&self, f: &Form) -> Result<Form, SU3Error> {
        Ok(self.codiff(&self.d(f)?)?.add(&self.d(&self.codiff(f)?)?)?)
    }

    /// Action of J on k-forms: (Jβ)(X₁,…,X_k) = β(JX₁,…,JX_k).
    pub fn apply_j(&self, f: &Form) -> Form {
        if f.grade() == 0 {
            return f.clone();
        }
        f.substitute(&self.j)
    }

    /// d^cω = J(dω).
    pub fn dc_omega(&self) -> Result<Form, SU3Error> {
        Ok(self.apply_j(&self.d(&self.omega)?))
    }

    pub fn project(&self, f: &Form, label: Module6) -> Result<Form, SU3Error> {
        if f.grade() != label.grade() {
            return Err(SU3Error::GradeMismatch);
        }
        let p = match label {
            Module6::TwoOne => self.span_2_1.project(f)?,
            Module6::TwoSix => self.span_2_6.project(f)?,
            Module6::TwoEight => f
                .sub(&self.span_2_1.project(f)?)?
                .sub(&self.span_2_6.project(f)?)?,
            Module6::ThreeRe => self.span_3_re.project(f)?,
            Module6::ThreeIm => self.span_3_im.project(f)?,
            Module6::ThreeSix => self.span_3_6.project(f)?,
            Module6::ThreeTwelve => f
                .sub(&self.span_3_re.project(f)?)?
                .sub(&self.span_3_im.project(f)?)?
                .sub(&self.span_3_6.project(f)?)?,
            Module6::FourOne => self.span_omega2.project(f)?,
            Module6::FourSix => self.span_4_6.project(f)?,
            Module6::FourEight => f
                .sub(&self.span_omega2.project(f)?)?
                .sub(&self.span_4_6.project(f)?)?,
        };
        Ok(p)
    }

    // -- torsion -------------------------------------------------------------

    /// Extract the torsion forms from dω, dΩ⁺, dΩ⁻, cross-checking σ₀, π₀
    /// and Jπ₁ across the three equations.
    pub fn torsion(&self) -> Result<SU3Torsion, SU3Error> {
        let domega = self.d(&self.omega)?;
        let dplus = self.d(&self.omega_plus)?;
        let dminus = self.d(&self.omega_minus)?;
        // dω over {Ω⁺, Ω⁻, e^i∧ω}; the residual is ν₃ ∈ Λ³₁₂
        let a = self.span_3_re.coords(&domega)?[0].clone();
        let b = self.span_3_im.coords(&domega)?[0].clone();
        let sigma0 = a.mul(&Scalar::frac(-2, 3));
        let pi0 = b.mul(&Scalar::frac(2, 3));
        let nu1_coords = self.span_3_6.coords(&domega)?;
        let mut nu1 = Form::zero(6, 1);
        for (i, c) in nu1_coords.iter().enumerate() {
            nu1 = nu1.add(&Form::one_form(6, i as u8 + 1, c.clone()))?;
        }
        let nu3 = domega
            .sub(&self.omega_plus.scale(&a))?
            .sub(&self.omega_minus.scale(&b))?
            .sub(&nu1.wedge(&self.omega)?)?;
        if !form_vanishes(&nu3.wedge(&self.omega)?)
            || !form_vanishes(&nu3.wedge(&self.omega_plus)?.add(&Form::zero(6, 6))?)
        {
            return Err(SU3Error::Invalid("ν₃ must lie in Λ³₁₂"));
        }
        // dΩ⁺ = π₀ ω² + π₁∧Ω⁺ − π₂∧ω
        let (pi0_alt, pi1, pi2) = self.split_four_form(&dplus)?;
        let d = pi0.sub(&pi0_alt);
        if !scalar_vanishes(&d) {
            return Err(SU3Error::InconsistentTorsion("π₀", d.eval(1.0).abs()));
        }
        // dΩ⁻ = σ₀ ω² + Jπ₁∧Ω⁺ − σ₂∧ω
        let (sigma0_alt, jpi1, sigma2) = self.split_four_form(&dminus)?;
        let d = sigma0.sub(&sigma0_alt);
        if !scalar_vanishes(&d) {
            return Err(SU3Error::InconsistentTorsion("σ₀", d.eval(1.0).abs()));
        }
        let jdiff = jpi1.sub(&self.apply_j(&pi1))?;
        if !form_vanishes(&jdiff) {
            return Err(SU3Error::InconsistentTorsion(
                "Jπ₁",
                jdiff.max_abs_coeff(),
            ));
        }
        Ok(SU3Torsion {
            sigma0,
            pi0,
            nu1,
            pi1,
            pi2,
            sigma2,
            nu3,
        })
    }

    /// Split a 4-form as c·ω² + α∧Ω⁺ − β∧ω with α ∈ Λ¹, β ∈ Λ²₈.
    fn split_four_form(&self, f: &Form) -> Result<(Scalar, Form, Form), SU3Error> {
        let c = self.span_omega2.coords(f)?[0].clone();
        let alpha_coords = self.span_4_6.coords(f)?;
        let mut alpha = Form::zero(6, 1);
        for (i, x) in alpha_coords.iter().enumerate() {
            alpha = alpha.add(&Form::one_form(6, i as u8 + 1, x.clone()))?;
        }
        let rest = f
            .sub(&self.omega.wedge(&self.omega)?.scale(&c))?
            .sub(&alpha.wedge(&self.omega_plus)?)?;
        // rest = −β∧ω with β ∈ Λ²₈
        let wedge_span = Span::new(
            self.basis_2_8
                .forms()
                .iter()
                .map(|b| b.wedge(&self.omega))
                .collect::<Result<Vec<_>, _>>()?,
        )?;
        let (coords, residual) = crate::linalg::solve_in_span(&wedge_span, &rest)?;
        if !form_vanishes(&residual) {
            return Err(SU3Error::Invalid("4-form split residual"));
        }
        let mut beta = Form::zero(6, 2);
        for (x, b) in coords.iter().zip(self.basis_2_8.forms()) {
            beta = beta.add(&b.scale(&x.neg()))?;
        }
        Ok((c, alpha, beta))
    }

    // -- Nijenhuis tensor ------------------------------------------------------

    /// N̂ from the torsion forms: N̂ = −2π₀Ω⁺ − 2σ₀Ω⁻ + π̃₂ − σ̃₂ with
    /// π̃₂ = Σ (e_i⌟Ω⁻) ⊗ (e_i⌟π₂) and σ̃₂ = Σ (e_i⌟Ω⁺) ⊗ (e_i⌟σ₂).
    pub fn nijenhuis(&self, t: &SU3Torsion) -> Result<Tensor3, SU3Error> {
        let mut n = Tensor3::zero(6);
        let skew_part = self
            .omega_plus
            .scale(&t.pi0.mul(&Scalar::int(-2)))
            .add(&self.omega_minus.scale(&t.sigma0.mul(&Scalar::int(-2))))?;
        let skew_t = Tensor3::from_form(&skew_part);
        for a in 1..=6 {
            for b in 1..=6 {
                for c in 1..=6 {
                    n.set(a, b, c, skew_t.get(a, b, c).clone());
                }
            }
        }
        for i in 1..=6u8 {
            let om = self.omega_minus.contract(i)?;
            let op = self.omega_plus.contract(i)?;
            let pc = t.pi2.contract(i)?;
            let sc = t.sigma2.contract(i)?;
            for a in 1..=6u8 {
                for b in 1..=6u8 {
                    if a == b {
                        continue;
                    }
                    let om_ab = two_form_entry(&om, a, b);
                    let op_ab = two_form_entry(&op, a, b);
                    for c in 1..=6u8 {
                        let p_c = pc.coeff_at(&[c]);
                        let s_c = sc.coeff_at(&[c]);
                        let add = om_ab.mul(&p_c).sub(&op_ab.mul(&s_c));
                        if !add.is_zero() {
                            n.add_to(a, b, c, &add);
                        }
                    }
                }
            }
        }
        Ok(n)
    }

    /// N̂ as a 3-form; requires π₂ = σ₂ = 0.
    pub fn nijenhuis_form(&self, t: &SU3Torsion) -> Result<Form, SU3Error> {
        if !t.skew_nijenhuis() {
            return Err(SU3Error::NotSkew);
        }
        Ok(self
            .omega_plus
            .scale(&t.pi0.mul(&Scalar::int(-2)))
            .add(&self.omega_minus.scale(&t.sigma0.mul(&Scalar::int(-2))))?)
    }

    /// Direct Nijenhuis tensor from the Lie brackets (constant-coefficient
    /// frames only): N̂(X,Y,Z) = g([X,Y] + J[JX,Y] + J[X,JY] − [JX,JY], Z).
    pub fn nijenhuis_direct(&self) -> Result<Tensor3, SU3Error> {
        if !self.frame.is_constant() {
            return Err(SU3Error::Invalid(
                "direct Nijenhuis computation needs a constant-coefficient frame",
            ));
        }
        let n = 6u8;
        // brackets[a][b] = components of [e_a, e_b]
        let mut brackets = vec![vec![vec![Scalar::zero(); 6]; 6]; 6];
        #[allow(clippy::needless_range_loop)]
        for a in 0..6 {
            for b in 0..6 {
                brackets[a][b] = self.frame.bracket(a as u8 + 1, b as u8 + 1);
            }
        }
        let j = &self.j;
        // bilinear extension: [Ju, v] etc. with constant J
        let bracket_vec = |u: &Vec<Scalar>, v: &Vec<Scalar>| -> Vec<Scalar> {
            let mut out = vec![Scalar::zero(); 6];
            for (a, ua) in u.iter().enumerate() {
                if ua.is_zero() {
                    continue;
                }
                for (b, vb) in v.iter().enumerate() {
                    if vb.is_zero() {
                        continue;
                    }
                    let coeff = ua.mul(vb);
                    for (k, out_k) in out.iter_mut().enumerate() {
                        let c = &brackets[a][b][k];
                        if !c.is_zero() {
                            *out_k = out_k.add(&coeff.mul(c));
                        }
                    }
                }
            }
            out
        };
        let apply_j_vec = |u: &Vec<Scalar>| -> Vec<Scalar> {
            (0..6)
                .map(|c| {
                    let mut acc = Scalar::zero();
                    for (a, ua) in u.iter().enumerate() {
                        acc = acc.add(&j[c][a].mul(ua));
                    }
                    acc
                })
                .collect()
        };
        let unit = |a: u8| -> Vec<Scalar> {
            (0..6)
                .map(|k| {
                    if k == a as usize - 1 {
                        Scalar::one()
                    } else {
                        Scalar::zero()
                    }
                })
                .collect()
        };
        let mut out = Tensor3::zero(6);
        for a in 1..=n {
            let ea = unit(a);
            let jea = apply_j_vec(&ea);
            for b in 1..=n {
                let eb = unit(b);
                let jeb = apply_j_vec(&eb);
                let term1 = bracket_vec(&ea, &eb);
                let term2 = apply_j_vec(&bracket_vec(&jea, &eb));
                let term3 = apply_j_vec(&bracket_vec(&ea, &jeb));
                let term4 = bracket_vec(&jea, &jeb);
                for c in 1..=n {
                    let v = term1[c as usize - 1]
                        .add(&term2[c as usize - 1])
                        .add(&term3[c as usize - 1])
                        .sub(&term4[c as usize - 1]);
                    out.set(a, b, c, v);
                }
            }
        }
        Ok(out)
    }

    // -- Bismut torsion and its derivative -----------------------------------

    /// T_ω = d^cω − N̂ (requires skew N̂).
    pub fn torsion_t(&self, t: &SU3Torsion) -> Result<Form, SU3Error> {
        let nhat = self.nijenhuis_form(t)?;
        Ok(self.dc_omega()?.sub(&nhat)?)
    }

    /// Predicted dT_ω (skew N̂):
    /// dT = ((1/3)δν₁ + (1/3)|ν₁|² − (1/6)|ν₃|² + (1/2)π₀² + (1/2)σ₀²) ω²
    ///    + (−J dσ₀ − dπ₀ + 2π₀ν₁ − π₀π₁ + 2σ₀Jν₁ − σ₀Jπ₁) ∧ Ω⁺
    ///    + π²₈(δν₃ − δ(ν₁∧ω)) ∧ ω.
    pub fn dt_predicted(&self, t: &SU3Torsion) -> Result<Form, SU3Error> {
        if !t.skew_nijenhuis() {
            return Err(SU3Error::NotSkew);
        }
        let omega2 = self.omega.wedge(&self.omega)?;
        let c0 = self
            .codiff(&t.nu1)?
            .coeff(0)
            .mul(&Scalar::frac(1, 3))
            .add(&t.nu1.norm2().mul(&Scalar::frac(1, 3)))
            .sub(&t.nu3.norm2().mul(&Scalar::frac(1, 6)))
            .add(&t.pi0.mul(&t.pi0).mul(&Scalar::frac(1, 2)))
            .add(&t.sigma0.mul(&t.sigma0).mul(&Scalar::frac(1, 2)));
        let dsigma0 = self.d(&Form::scalar(6, t.sigma0.clone()))?;
        let dpi0 = self.d(&Form::scalar(6, t.pi0.clone()))?;
        let one_form = self
            .apply_j(&dsigma0)
            .neg()
            .sub(&dpi0)?
            .add(&t.nu1.scale(&t.pi0.mul(&Scalar::int(2))))?
            .sub(&t.pi1.scale(&t.pi0))?
            .add(&self.apply_j(&t.nu1).scale(&t.sigma0.mul(&Scalar::int(2))))?
            .sub(&self.apply_j(&t.pi1).scale(&t.sigma0))?;
        let mid = one_form.wedge(&self.omega_plus)?;
        let p8 = self.project(
            &self
                .codiff(&t.nu3)?
                .sub(&self.codiff(&t.nu1.wedge(&self.omega)?)?)?,
            Module6::TwoEight,
        )?;
        Ok(omega2
            .scale(&c0)
            .add(&mid)?
            .add(&p8.wedge(&self.omega)?)?)
    }

    /// Predicted dd^cω for a completely general SU(3)-structure, returned as
    /// the assembled 4-form.
    pub fn ddc_predicted(&self, t: &SU3Torsion) -> Result<Form, SU3Error> {
        let omega2 = self.omega.wedge(&self.omega)?;
        let star = |f: &Form| f.hodge();
        let c0 = self
            .codiff(&t.nu1)?
            .coeff(0)
            .mul(&Scalar::frac(1, 3))
            .add(&t.nu1.norm2().mul(&Scalar::frac(1, 3)))
            .sub(&t.nu3.norm2().mul(&Scalar::frac(1, 6)))
            .sub(&t.pi0.mul(&t.pi0).mul(&Scalar::frac(3, 2)))
            .sub(&t.sigma0.mul(&t.sigma0).mul(&Scalar::frac(3, 2)));
        let dsigma0 = self.d(&Form::scalar(6, t.sigma0.clone()))?;
        let dpi0 = self.d(&Form::scalar(6, t.pi0.clone()))?;
        let jnu1 = self.apply_j(&t.nu1);
        let one_form = self
            .apply_j(&dsigma0)
            .scale(&Scalar::int(-3))
            .sub(&dpi0.scale(&Scalar::int(3)))?
            .add(&t.nu1.scale(&t.pi0.mul(&Scalar::int(2))))?
            .sub(&t.pi1.scale(&t.pi0.mul(&Scalar::int(3))))?
            .add(&jnu1.scale(&t.sigma0.mul(&Scalar::int(2))))?
            .sub(&self.apply_j(&t.pi1).scale(&t.sigma0.mul(&Scalar::int(3))))?
            .sub(&self.apply_j(&star(&t.pi2.wedge(&t.nu3)?)).scale(&Scalar::frac(1, 2)))?
            .add(&star(&t.sigma2.wedge(&t.nu3)?).scale(&Scalar::frac(1, 2)))?
            .add(
                &star(&t.pi2.wedge(&jnu1)?.wedge(&self.omega)?).scale(&Scalar::frac(1, 2)),
            )?
            .sub(
                &star(&t.sigma2.wedge(&t.nu1)?.wedge(&self.omega)?)
                    .scale(&Scalar::frac(1, 2)),
            )?;
        let p8 = self.project(
            &self
                .codiff(&t.nu3)?
                .sub(&self.codiff(&t.nu1.wedge(&self.omega)?)?)?
                .add(&t.pi2.scale(&t.pi0.mul(&Scalar::frac(3, 2))))?
                .add(&t.sigma2.scale(&t.sigma0.mul(&Scalar::frac(3, 2))))?,
            Module6::TwoEight,
        )?;
        Ok(omega2
            .scale(&c0)
            .add(&one_form.wedge(&self.omega_plus)?)?
            .add(&p8.wedge(&self.omega)?)?)
    }

    /// Predicted dN̂ for skew N̂:
    /// dN̂ = −2(π₀²+σ₀²) ω² − 2(dπ₀ + J dσ₀ + π₀π₁ + σ₀Jπ₁) ∧ Ω⁺.
    pub fn dn_predicted(&self, t: &SU3Torsion) -> Result<Form, SU3Error> {
        if !t.skew_nijenhuis() {
            return Err(SU3Error::NotSkew);
        }
        let omega2 = self.omega.wedge(&self.omega)?;
        let c0 = t
            .pi0
            .mul(&t.pi0)
            .add(&t.sigma0.mul(&t.sigma0))
            .mul(&Scalar::int(-2));
        let dsigma0 = self.d(&Form::scalar(6, t.sigma0.clone()))?;
        let dpi0 = self.d(&Form::scalar(6, t.pi0.clone()))?;
        let one_form = dpi0
            .add(&self.apply_j(&dsigma0))?
            .add(&t.pi1.scale(&t.pi0))?
            .add(&self.apply_j(&t.pi1).scale(&t.sigma0))?
            .scale(&Scalar::int(-2));
        Ok(omega2.scale(&c0).add(&one_form.wedge(&self.omega_plus)?)?)
    }

    /// Predicted Bismut Ricci form ρ^B = (ρ^B)₀ ω + (ρ^B)²₆ + (ρ^B)²₈ for
    /// skew N̂.
    pub fn rho_b_predicted(&self, t: &SU3Torsion) -> Result<Form, SU3Error> {
        if !t.skew_nijenhuis() {
            return Err(SU3Error::NotSkew);
        }
        let c0 = self
            .codiff(&t.nu1)?
            .coeff(0)
            .mul(&Scalar::frac(-2, 3))
            .add(&self.codiff(&t.pi1)?.coeff(0).mul(&Scalar::frac(1, 3)))
            .sub(&t.nu1.norm2().mul(&Scalar::frac(4, 3)))
            .add(&t.pi1.inner(&t.nu1)?.mul(&Scalar::frac(2, 3)));
        // (ρ^B)²₆ from (ρ^B)²₆ ∧ Ω⁺ = (−⋆(dν₁∧Ω⁺) + J dπ₀ + 2σ₀ν₁ − σ₀π₁) ∧ ω²
        let dnu1 = self.d(&t.nu1)?;
        let dpi0 = self.d(&Form::scalar(6, t.pi0.clone()))?;
        let rhs1 = dnu1
            .wedge(&self.omega_plus)?
            .hodge()
            .neg()
            .add(&self.apply_j(&dpi0))?
            .add(&t.nu1.scale(&t.sigma0.mul(&Scalar::int(2))))?
            .sub(&t.pi1.scale(&t.sigma0))?;
        let target = rhs1.wedge(&self.omega)?.wedge(&self.omega)?;
        let p6 = self.solve_2_6_against_omega_plus(&target)?;
        let p8 = self.project(
            &self
                .codiff(&t.nu1.wedge(&self.omega)?)?
                .scale(&Scalar::int(2))
                .add(&self.d(&self.apply_j(&t.pi1))?)?
                .sub(
                    &t.nu1
                        .wedge(&self.apply_j(&t.nu3))?
                        .hodge()
                        .scale(&Scalar::int(2)),
                )?
                .add(&t.nu1.wedge(&self.apply_j(&t.nu1))?.scale(&Scalar::int(2)))?,
            Module6::TwoEight,
        )?;
        Ok(self.omega.scale(&c0).add(&p6)?.add(&p8)?)
    }

    /// Solve β ∈ Λ²₆ from β∧Ω⁺ = target (a 5-form).
    pub fn solve_2_6_against_omega_plus(&self, target: &Form) -> Result<Form, SU3Error> {
        let span = Span::new(
            self.span_2_6
                .forms()
                .iter()
                .map(|b| b.wedge(&self.omega_plus))
                .collect::<Result<Vec<_>, _>>()?,
        )?;
        let (coords, residual) = crate::linalg::solve_in_span(&span, target)?;
        if !form_vanishes(&residual) {
            return Err(SU3Error::Invalid("Λ²₆ wedge solve residual"));
        }
        let mut out = Form::zero(6, 2);
        for (x, b) in coords.iter().zip(self.span_2_6.forms()) {
            out = out.add(&b.scale(x))?;
        }
        Ok(out)
    }

    /// Chern–Ricci form ρ^C = d(Jπ₁).
    pub fn chern_ricci(&self, t: &SU3Torsion) -> Result<Form, SU3Error> {
        self.d(&self.apply_j(&t.pi1))
    }

    /// Scalar curvature of an almost SKT structure:
    /// Scal = (9/2)π₀² + (9/2)σ₀² + 2δπ₁ − 3|ν₁|² + (1/2)|ν₃|² + 4 g(ν₁,π₁).
    pub fn scal_askt_predicted(&self, t: &SU3Torsion) -> Result<Scalar, SU3Error> {
        Ok(t.pi0
            .mul(&t.pi0)
            .mul(&Scalar::frac(9, 2))
            .add(&t.sigma0.mul(&t.sigma0).mul(&Scalar::frac(9, 2)))
            .add(&self.codiff(&t.pi1)?.coeff(0).mul(&Scalar::int(2)))
            .sub(&t.nu1.norm2().mul(&Scalar::int(3)))
            .add(&t.nu3.norm2().mul(&Scalar::frac(1, 2)))
            .add(&t.nu1.inner(&t.pi1)?.mul(&Scalar::int(4))))
    }

    /// (Ric₀)²₈ of an almost SKT structure, in both displayed versions
    /// (returned as a pair for cross-checking).
    pub fn ric08_askt_predicted(&self, t: &SU3Torsion) -> Result<(Form, Form), SU3Error> {
        let common = self
            .d(&self.apply_j(&t.pi1))?
            .sub(&t.nu1.wedge(&self.apply_j(&t.nu3))?.hodge())?;
        let v1 = self.project(
            &self.codiff(&t.nu1.wedge(&self.omega)?)?.add(&common)?,
            Module6::TwoEight,
        )?;
        let v2 = self.project(
            &self.codiff(&t.nu3)?.add(&common)?,
            Module6::TwoEight,
        )?;
        Ok((v1, v2))
    }

    /// Residuals of the three differential identities obtained from
    /// d² = 0 applied to the torsion equations; all must vanish for every
    /// SU(3)-structure (used as a self-test of the extraction).
    pub fn differential_identity_residuals(
        &self,
        t: &SU3Torsion,
    ) -> Result<Vec<Form>, SU3Error> {
        let omega = &self.omega;
        let plus = &self.omega_plus;
        let dsigma0 = self.d(&Form::scalar(6, t.sigma0.clone()))?;
        let dpi0 = self.d(&Form::scalar(6, t.pi0.clone()))?;
        let star = |f: &Form| f.hodge();
        // d(dω) = 0 rewritten through the torsion forms
        let r1 = self
            .d(&t.nu3)?
            .add(&self.d(&t.nu1)?.wedge(omega)?)?
            .add(
                &dsigma0
                    .neg()
                    .add(&self.apply_j(&dpi0))?
                    .sub(&t.pi1.scale(&t.sigma0))?
                    .add(&self.apply_j(&t.pi1).scale(&t.pi0))?
                    .add(&t.nu1.scale(&t.sigma0))?
                    .sub(&self.apply_j(&t.nu1).scale(&t.pi0))?
                    .scale(&Scalar::frac(3, 2))
                    .wedge(plus)?,
            )?
            .add(
                &t.pi2
                    .scale(&t.sigma0)
                    .sub(&t.sigma2.scale(&t.pi0))?
                    .scale(&Scalar::frac(3, 2))
                    .wedge(omega)?,
            )?
            .sub(&t.nu1.wedge(&t.nu3)?)?;
        // d(dΩ⁺) = 0
        let r2 = self
            .codiff(&t.pi2)?
            .add(&self.apply_j(&dpi0).scale(&Scalar::int(2)))?
            .add(&self.apply_j(&t.nu1).scale(&t.pi0.mul(&Scalar::int(4))))?
            .sub(&self.apply_j(&t.pi1).scale(&t.pi0.mul(&Scalar::int(2))))?
            .sub(&star(&t.pi1.wedge(&t.pi2)?.wedge(omega)?))?
            .sub(&star(&self.d(&t.pi1)?.wedge(plus)?))?;
        // d(dΩ⁻) = 0
        let r3 = self
            .codiff(&t.sigma2)?
            .add(&self.apply_j(&self.codiff(&t.pi2)?))?
            .add(&self.apply_j(&dsigma0).scale(&Scalar::int(2)))?
            .sub(&dpi0.scale(&Scalar::int(2)))?
            .sub(&t.nu1.scale(&t.pi0.mul(&Scalar::int(4))))?
            .add(&t.pi1.scale(&t.pi0.mul(&Scalar::int(2))))?
            .add(&self.apply_j(&t.nu1).scale(&t.sigma0.mul(&Scalar::int(4))))?
            .sub(&self.apply_j(&t.pi1).scale(&t.sigma0.mul(&Scalar::int(2))))?
            .sub(&star(&t.pi2.wedge(&self.apply_j(&t.pi1))?.wedge(omega)?))?
            .sub(&star(&t.sigma2.wedge(&t.pi1)?.wedge(omega)?))?;
        Ok(vec![r1, r2, r3])
    }

    // -- tensor component identification --------------------------------------

    /// Trace component of a symmetric 2-tensor: (h)₀ = tr(h)/6, normalized
    /// so (g)₀ = 1.
    pub fn tensor_comp0(&self, h: &Tensor2) -> Scalar {
        h.trace().mul(&Scalar::frac(1, 6))
    }

    /// Λ²₈ component of h under h ↦ h⋄ω.
    pub fn tensor_comp_2_8(&self, h: &Tensor2) -> Result<Form, SU3Error> {
        let d = h.diamond(&self.omega)?;
        self.project(&d, Module6::TwoEight)
    }

    /// Λ³₁₂ component of h under h ↦ h⋄Ω⁺.
    pub fn tensor_comp_3_12(&self, h: &Tensor2) -> Result<Form, SU3Error> {
        let d = h.diamond(&self.omega_plus)?;
        self.project(&d, Module6::ThreeTwelve)
    }

    /// 2-form component of a 2-form: (β)₀ = ⟨β,ω⟩/3 so that (ω)₀ = 1.
    pub fn form_comp0(&self, beta: &Form) -> Result<Scalar, SU3Error> {
        Ok(beta.inner(&self.omega)?.mul(&Scalar::frac(1, 3)))
    }

    /// Lie derivative of a form along a vector with the given components.
    pub fn lie_form(&self, comps: &[Scalar], f: &Form) -> Result<Form, SU3Error> {
        let a = self.d(&f.contract_vector(comps)?)?;
        let b = self.d(f)?.contract_vector(comps)?;
        Ok(a.add(&b)?)
    }

    // -- classification --------------------------------------------------------

    pub fn classify(&self) -> Result<SU3Flags, SU3Error> {
        let t = self.torsion()?;
        let z = form_vanishes;
        let s0_zero = scalar_vanishes(&t.sigma0);
        let p0_zero = scalar_vanishes(&t.pi0);
        let mut flags = SU3Flags {
            hermitian: s0_zero && p0_zero && z(&t.pi2) && z(&t.sigma2),
            nearly_kahler: scalar_vanishes(&t.sigma0.add(&Scalar::int(2)))
                && p0_zero
                && z(&t.nu1)
                && z(&t.pi1)
                && z(&t.pi2)
                && z(&t.sigma2)
                && z(&t.nu3),
            half_flat: p0_zero && z(&t.nu1) && z(&t.pi1) && z(&t.pi2),
            cocoupled: false,
            almost_skt: false,
            almost_cyt: false,
        };
        flags.cocoupled = flags.half_flat && z(&t.sigma2);
        if t.skew_nijenhuis() {
            let big_t = self.torsion_t(&t)?;
            flags.almost_skt = z(&self.d(&big_t)?);
            flags.almost_cyt = z(&self.rho_b_predicted(&t)?);
        }
        Ok(flags)
    }
}

fn two_form_entry(f: &Form, a: u8, b: u8) -> Scalar {
    if a == b {
        return Scalar::zero();
    }
    if a < b {
        f.coeff_at(&[a, b])
    } else {
        f.coeff_at(&[b, a]).neg()
    }
}

pub fn scalar_vanishes(s: &Scalar) -> bool {
    match s {
        Scalar::Const(r) => r.is_zero(),
        Scalar::Jet(j) => j.c[..=j.valid as usize].iter().all(|x| x.abs() < ZERO_TOL),
        Scalar::Sym(_) => s.eval(1.0).abs() < ZERO_TOL,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_torus_structure_valid_and_torsion_free() {
        let s = SU3Structure::standard(FrameAlgebra::flat(6)).unwrap();
        let t = s.torsion().unwrap();
        assert!(t.sigma0.is_zero() && t.pi0.is_zero());
        assert!(t.nu1.is_zero() && t.pi1.is_zero());
        assert!(t.pi2.is_zero() && t.sigma2.is_zero() && t.nu3.is_zero());
        // J on ω is ω, J(Ω⁺) = Ω⁻ on the standard model
        assert_eq!(s.apply_j(s.omega()), s.omega().clone());
        assert_eq!(s.apply_j(s.omega_plus()), s.omega_minus().clone());
        assert_eq!(s.apply_j(s.omega_minus()), s.omega_plus().neg());
    }

    #[test]
    fn module_projections_complete() {
        let s = SU3Structure::standard(FrameAlgebra::flat(6)).unwrap();
        let a = crate::parse::parse_form("e^{12}-2*e^{36}+e^{45}", 6, 2).unwrap();
        let p1 = s.project(&a, Module6::TwoOne).unwrap();
        let p6 = s.project(&a, Module6::TwoSix).unwrap();
        let p8 = s.project(&a, Module6::TwoEight).unwrap();
        assert_eq!(p1.add(&p6).unwrap().add(&p8).unwrap(), a);
        // eigen characterisation: ⋆(π²₆(a)∧ω) = +π²₆(a), ⋆(π²₈(a)∧ω) = −π²₈(a)
        assert_eq!(p6.wedge(s.omega()).unwrap().hodge(), p6);
        assert_eq!(p8.wedge(s.omega()).unwrap().hodge(), p8.neg());
        // dimensions of cached bases
        assert_eq!(s.basis_2_6().len(), 6);
        assert_eq!(s.basis_2_8().len(), 8);
    }

    #[test]
    fn nijenhuis_vanishes_on_torus() {
        let s = SU3Structure::standard(FrameAlgebra::flat(6)).unwrap();
        let t = s.torsion().unwrap();
        let n = s.nijenhuis(&t).unwrap();
        let direct = s.nijenhuis_direct().unwrap();
        assert!(n.sub(&direct).skewness_residual(1.0) < 1e-14);
        assert!(n.to_form().is_zero());
    }
}
