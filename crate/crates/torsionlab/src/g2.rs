//! G2-structures on 7-dimensional coframes: validation, irreducible module
//! projections, intrinsic torsion forms, the characteristic torsion 3-form
//! T, and the closed-form identities for dT, curvature components and
//! derived quantities.

use crate::form::{Form, FormError};
use crate::frame::{FrameAlgebra, FrameError};
use crate::linalg::{complement_basis, LinalgError, Span};
use crate::scalar::{Radical, Scalar};

#[derive(Debug, thiserror::Error)]
pub enum G2Error {
    #[error(transparent)]
    Form(#[from] FormError),
    #[error(transparent)]
    Frame(#[from] FrameError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("a G2-structure needs a 7-dimensional frame and 3-form")]
    WrongShape,
    #[error("the 3-form does not induce the frame metric (failed at pair {0},{1})")]
    MetricIncompatible(u8, u8),
    #[error("the 3-form must have constant coefficients in its adapted frame")]
    NonConstantPhi,
    #[error("inconsistent recovery of tau_1 from dφ and d⋆φ (residual {0:.3e})")]
    InconsistentTau1(f64),
    #[error("operation requires tau_2 = 0 but |tau_2| = {0:.3e}")]
    NotG2T(f64),
    #[error("grade of form does not match projection label")]
    GradeMismatch,
    #[error("torsion reconstruction residual {0:.3e} exceeds tolerance")]
    Reconstruction(f64),
}

/// Irreducible G2-module labels for projections of k-forms.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Module {
    TwoSeven,
    TwoFourteen,
    ThreeOne,
    ThreeSeven,
    ThreeTwentySeven,
    FourOne,
    FourSeven,
    FourTwentySeven,
    FiveSeven,
    FiveFourteen,
}

impl Module {
    pub fn grade(self) -> u8 {
        match self {
            Module::TwoSeven | Module::TwoFourteen => 2,
            Module::ThreeOne | Module::ThreeSeven | Module::ThreeTwentySeven => 3,
            Module::FourOne | Module::FourSeven | Module::FourTwentySeven => 4,
            Module::FiveSeven | Module::FiveFourteen => 5,
        }
    }

    pub fn parse(label: &str) -> Option<Module> {
        Some(match label {
            "2_7" => Module::TwoSeven,
            "2_14" => Module::TwoFourteen,
            "3_1" => Module::ThreeOne,
            "3_7" => Module::ThreeSeven,
            "3_27" => Module::ThreeTwentySeven,
            "4_1" => Module::FourOne,
            "4_7" => Module::FourSeven,
            "4_27" => Module::FourTwentySeven,
            "5_7" => Module::FiveSeven,
            "5_14" => Module::FiveFourteen,
            _ => return None,
        })
    }
}

/// Intrinsic torsion forms of a G2-structure:
/// dφ = τ₀ ⋆φ + 3 τ₁ ∧ φ + ⋆τ₃ and d⋆φ = 4 τ₁ ∧ ⋆φ + τ₂ ∧ φ.
#[derive(Clone)]
pub struct G2Torsion {
    pub tau0: Scalar,
    pub tau1: Form,
    pub tau2: Form,
    pub tau3: Form,
}

/// Classification flags derived from the torsion forms.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct G2Flags {
    pub torsion_free: bool,
    pub coclosed: bool,
    pub closed: bool,
    pub g2t: bool,
    pub strong_g2t: bool,
    pub harmonic_t: bool,
    pub lee_closed: bool,
    pub constant_type: bool,
}

/// A 7-dimensional frame together with a compatible positive 3-form and the
/// cached module spans used for projections and torsion recovery.
pub struct G2Structure {
    frame: FrameAlgebra,
    phi: Form,
    star_phi: Form,
    vol: Form,
    span_2_7: Span,
    span_3_1: Span,
    span_3_7: Span,
    span_4_1: Span,
    span_4_7: Span,
    span_5_7: Span,
    basis_2_14: Span,
    wedge_2_14: Span,
}

pub const ZERO_TOL: f64 = 1e-10;

/// The standard positive 3-form in an adapted coframe.
pub fn standard_phi_form() -> Form {
    crate::parse::parse_form(
        "e^{123}+e^{145}+e^{167}+e^{246}-e^{257}-e^{347}-e^{356}",
        7,
        3,
    )
    .expect("standard phi parses")
}

impl G2Structure {
    /// Validate φ against the frame and cache module spans. Metric
    /// compatibility 6 g(X,Y) vol = (X⌟φ)∧(Y⌟φ)∧φ is checked exactly.
    pub fn new(frame: FrameAlgebra, phi: Form) -> Result<Self, G2Error> {
        if frame.dim() != 7 || phi.dim() != 7 || phi.grade() != 3 {
            return Err(G2Error::WrongShape);
        }
        if !phi.is_exact() {
            return Err(G2Error::NonConstantPhi);
        }
        let vol = Form::volume(7);
        for i in 1..=7u8 {
            for j in i..=7u8 {
                let lhs = phi
                    .contract(i)?
                    .wedge(&phi.contract(j)?)?
                    .wedge(&phi)?;
                let expect = if i == j {
                    vol.scale(&Scalar::int(6))
                } else {
                    Form::zero(7, 7)
                };
                if lhs != expect {
                    return Err(G2Error::MetricIncompatible(i, j));
                }
            }
        }
        let star_phi = phi.hodge();
        let units: Vec<Form> = (1..=7).map(|i| Form::one_form(7, i, Scalar::one())).collect();
        let span_2_7 = Span::new(
            (1..=7)
                .map(|i| phi.contract(i))
                .collect::<Result<Vec<_>, _>>()?,
        )?;
        let span_3_1 = Span::new(vec![phi.clone()])?;
        let span_3_7 = Span::new(
            units
                .iter()
                .map(|e| Ok::<_, G2Error>(e.wedge(&phi)?.hodge()))
                .collect::<Result<Vec<_>, _>>()?,
        )?;
        let span_4_1 = Span::new(vec![star_phi.clone()])?;
        let span_4_7 = Span::new(
            units
                .iter()
                .map(|e| e.wedge(&phi))
                .collect::<Result<Vec<_>, _>>()?,
        )?;
        let span_5_7 = Span::new(
            units
                .iter()
                .map(|e| e.wedge(&star_phi))
                .collect::<Result<Vec<_>, _>>()?,
        )?;
        let basis_2_14 = Span::new(complement_basis(7, 2, &[&span_2_7])?)?;
        let wedge_2_14 = Span::new(
            basis_2_14
                .forms()
                .iter()
                .map(|b| b.wedge(&phi))
                .collect::<Result<Vec<_>, _>>()?,
        )?;
        Ok(G2Structure {
            frame,
            phi,
            star_phi,
            vol,
            span_2_7,
            span_3_1,
            span_3_7,
            span_4_1,
            span_4_7,
            span_5_7,
            basis_2_14,
            wedge_2_14,
        })
    }

    /// The standard φ on the given frame.
    pub fn standard(frame: FrameAlgebra) -> Result<Self, G2Error> {
        Self::new(frame, standard_phi_form())
    }

    /// Same φ on a different frame, reusing the cached module spans (they
    /// depend only on φ). The caller must supply a frame of the same
    /// dimension.
    pub fn with_frame(&self, frame: FrameAlgebra) -> G2Structure {
        assert_eq!(frame.dim(), 7);
        G2Structure {
            frame,
            phi: self.phi.clone(),
            star_phi: self.star_phi.clone(),
            vol: self.vol.clone(),
            span_2_7: self.span_2_7.clone(),
            span_3_1: self.span_3_1.clone(),
            span_3_7: self.span_3_7.clone(),
            span_4_1: self.span_4_1.clone(),
            span_4_7: self.span_4_7.clone(),
            span_5_7: self.span_5_7.clone(),
            basis_2_14: self.basis_2_14.clone(),
            wedge_2_14: self.wedge_2_14.clone(),
        }
    }

    pub fn frame(&self) -> &FrameAlgebra {
        &self.frame
    }

    pub fn phi(&self) -> &Form {
        &self.phi
    }

    pub fn star_phi(&self) -> &Form {
        &self.star_phi
    }

    pub fn vol(&self) -> &Form {
        &self.vol
    }

    pub fn basis_2_14(&self) -> &[Form] {
        self.basis_2_14.forms()
    }

    pub fn d(&self, f: &Form) -> Result<Form, G2Error> {
        Ok(self.frame.d(f)?)
    }

    /// Codifferential δ = −⋆d⋆ (the convention used throughout in
    /// dimension 7).
    pub fn codiff(&self, f: &Form) -> Result<Form, G2Error> {
        Ok(self.frame.d(&f.hodge())?.hodge().neg())
    }

    /// Hodge Laplacian δd + dδ.
    pub fn laplacian(&self, f: &Form) -> Result<Form, G2Error> {
        let a = self.codiff(&self.d(f)?)?;
        let b = self.d(&self.codiff(f)?)?;
        Ok(a.add(&b)?)
    }

    /// Orthogonal projection onto an irreducible module.
    pub fn project(&self, f: &Form, label: Module) -> Result<Form, G2Error> {
        if f.grade() != label.grade() {
            return Err(G2Error::GradeMismatch);
        }
        let p = match label {
            Module::TwoSeven => self.span_2_7.project(f)?,
            Module::TwoFourteen => f.sub(&self.span_2_7.project(f)?)?,
            Module::ThreeOne => self.span_3_1.project(f)?,
            Module::ThreeSeven => self.span_3_7.project(f)?,
            Module::ThreeTwentySeven => f
                .sub(&self.span_3_1.project(f)?)?
                .sub(&self.span_3_7.project(f)?)?,
            Module::FourOne => self.span_4_1.project(f)?,
            Module::FourSeven => self.span_4_7.project(f)?,
            Module::FourTwentySeven => f
                .sub(&self.span_4_1.project(f)?)?
                .sub(&self.span_4_7.project(f)?)?,
            Module::FiveSeven => self.span_5_7.project(f)?,
            Module::FiveFourteen => f.sub(&self.span_5_7.project(f)?)?,
        };
        Ok(p)
    }

    /// True when the form vanishes: exactly for constant coefficients,
    /// to ZERO_TOL through all jet orders otherwise.
    pub fn vanishes(&self, f: &Form) -> bool {
        form_vanishes(f)
    }

    // -- torsion ----------------------------------------------------------

    /// Extract the intrinsic torsion forms. τ₁ is recovered twice (from dφ
    /// and from d⋆φ) and the two recoveries must agree; the reconstruction
    /// of dφ and d⋆φ from the result is verified.
    pub fn torsion(&self) -> Result<G2Torsion, G2Error> {
        let dphi = self.d(&self.phi)?;
        let dstar = self.d(&self.star_phi)?;
        let tau0 = dphi.inner(&self.star_phi)?.mul(&Scalar::frac(1, 7));
        // 3 τ₁ ∧ φ = π⁴₇ dφ
        let coords = self.span_4_7.coords(&dphi)?;
        let mut tau1 = Form::zero(7, 1);
        for (i, c) in coords.iter().enumerate() {
            tau1 = tau1.add(&Form::one_form(7, i as u8 + 1, c.mul(&Scalar::frac(1, 3))))?;
        }
        // cross-check: 4 τ₁ ∧ ⋆φ = π⁵₇ d⋆φ
        let coords5 = self.span_5_7.coords(&dstar)?;
        let mut tau1_alt = Form::zero(7, 1);
        for (i, c) in coords5.iter().enumerate() {
            tau1_alt = tau1_alt.add(&Form::one_form(7, i as u8 + 1, c.mul(&Scalar::frac(1, 4))))?;
        }
        let diff = tau1.sub(&tau1_alt)?;
        if !form_vanishes(&diff) {
            return Err(G2Error::InconsistentTau1(diff.max_abs_coeff()));
        }
        // τ₃ = ⋆ π⁴₂₇ dφ
        let p27 = dphi
            .sub(&self.star_phi.scale(&tau0))?
            .sub(&tau1.wedge(&self.phi)?.scale(&Scalar::int(3)))?;
        let tau3 = p27.hodge();
        // τ₂ ∧ φ = d⋆φ − 4 τ₁ ∧ ⋆φ, inverted over the Λ²₁₄ basis
        let rest = dstar.sub(&tau1.wedge(&self.star_phi)?.scale(&Scalar::int(4)))?;
        let (coeffs, residual) = crate::linalg::solve_in_span(&self.wedge_2_14, &rest)?;
        if !form_vanishes(&residual) {
            return Err(G2Error::Reconstruction(residual.max_abs_coeff()));
        }
        let mut tau2 = Form::zero(7, 2);
        for (c, b) in coeffs.iter().zip(self.basis_2_14.forms().iter()) {
            tau2 = tau2.add(&b.scale(c))?;
        }
        let torsion = G2Torsion {
            tau0,
            tau1,
            tau2,
            tau3,
        };
        let (r1, r2) = self.reconstruction_residuals(&torsion)?;
        if !form_vanishes(&r1) || !form_vanishes(&r2) {
            return Err(G2Error::Reconstruction(
                r1.max_abs_coeff().max(r2.max_abs_coeff()),
            ));
        }
        Ok(torsion)
    }

    /// Residuals of dφ − (τ₀⋆φ + 3τ₁∧φ + ⋆τ₃) and d⋆φ − (4τ₁∧⋆φ + τ₂∧φ).
    pub fn reconstruction_residuals(&self, t: &G2Torsion) -> Result<(Form, Form), G2Error> {
        let dphi = self.d(&self.phi)?;
        let dstar = self.d(&self.star_phi)?;
        let r1 = dphi
            .sub(&self.star_phi.scale(&t.tau0))?
            .sub(&t.tau1.wedge(&self.phi)?.scale(&Scalar::int(3)))?
            .sub(&t.tau3.hodge())?;
        let r2 = dstar
            .sub(&t.tau1.wedge(&self.star_phi)?.scale(&Scalar::int(4)))?
            .sub(&t.tau2.wedge(&self.phi)?)?;
        Ok((r1, r2))
    }

    /// Characteristic torsion 3-form T = (1/6)τ₀ φ + ⋆(τ₁∧φ) − τ₃ of a
    /// G2T-structure (τ₂ must vanish). Both displayed expressions for T are
    /// computed and must agree.
    pub fn torsion_t(&self) -> Result<Form, G2Error> {
        let t = self.torsion()?;
        self.torsion_t_from(&t)
    }

    pub fn torsion_t_from(&self, t: &G2Torsion) -> Result<Form, G2Error> {
        if !form_vanishes(&t.tau2) {
            return Err(G2Error::NotG2T(t.tau2.max_abs_coeff()));
        }
        let a = self
            .phi
            .scale(&t.tau0.mul(&Scalar::frac(1, 6)))
            .add(&t.tau1.wedge(&self.phi)?.hodge())?
            .sub(&t.tau3)?;
        // second displayed expression: (1/6)⋆(dφ∧φ)φ − ⋆dφ + ⋆(4τ₁∧φ)
        let dphi = self.d(&self.phi)?;
        let s = dphi.wedge(&self.phi)?.hodge().coeff(0);
        let b = self
            .phi
            .scale(&s.mul(&Scalar::frac(1, 6)))
            .sub(&dphi.hodge())?
            .add(&t.tau1.wedge(&self.phi)?.scale(&Scalar::int(4)).hodge())?;
        let diff = a.sub(&b)?;
        if !form_vanishes(&diff) {
            return Err(G2Error::Reconstruction(diff.max_abs_coeff()));
        }
        Ok(a)
    }

    /// T for a general structure (the 3-form built from τ₀, τ₁, τ₃ even if
    /// τ₂ ≠ 0), used by the dT identity which holds unconditionally.
    pub fn torsion_t_general(&self, t: &G2Torsion) -> Result<Form, G2Error> {
        Ok(self
            .phi
            .scale(&t.tau0.mul(&Scalar::frac(1, 6)))
            .add(&t.tau1.wedge(&self.phi)?.hodge())?
            .sub(&t.tau3)?)
    }

    // -- bilinear pairings --------------------------------------------------

    /// Q(α,β) = ⋆( (⋆φ)_{ijkl} (e_j⌟e_i⌟⋆α) ∧ (e_l⌟e_k⌟⋆β) ) on 3-forms.
    pub fn q_pairing(&self, alpha: &Form, beta: &Form) -> Result<Form, G2Error> {
        let sa = alpha.hodge();
        let sb = beta.hodge();
        let pair = |f: &Form, i: u8, j: u8| -> Result<Form, G2Error> {
            Ok(f.contract(i)?.contract(j)?)
        };
        let mut acc = Form::zero(7, 4);
        for (mask, q) in self.star_phi.terms() {
            let idx = Form::mask_indices(mask);
            for perm in permutations4() {
                let (i, j, k, l) = (
                    idx[perm.0[0]],
                    idx[perm.0[1]],
                    idx[perm.0[2]],
                    idx[perm.0[3]],
                );
                // (e_j ⌟ e_i ⌟ ⋆α): contract by i first, then j
                let a2 = pair(&sa, i, j)?;
                if a2.is_zero() {
                    continue;
                }
                let b2 = pair(&sb, k, l)?;
                if b2.is_zero() {
                    continue;
                }
                let term = a2.wedge(&b2)?.scale(&q.mul(&Scalar::int(perm.1)));
                acc = acc.add(&term)?;
            }
        }
        Ok(acc.hodge())
    }

    /// Q̂(α,β) = ⋆( Σ_i (e_i⌟α) ∧ (e_i⌟β) ).
    pub fn qhat_pairing(&self, alpha: &Form, beta: &Form) -> Result<Form, G2Error> {
        let mut acc: Option<Form> = None;
        for i in 1..=7u8 {
            let term = alpha.contract(i)?.wedge(&beta.contract(i)?)?;
            acc = Some(match acc {
                None => term,
                Some(a) => a.add(&term)?,
            });
        }
        Ok(acc.expect("seven terms").hodge())
    }

    // -- closed-form identities ---------------------------------------------

    /// The three irreducible components of dT for an arbitrary G2-structure:
    /// scalar (coefficient of ⋆φ), Λ⁴₇ as a 1-form (dT)₁ with (dT)₁∧φ, and
    /// the Λ⁴₂₇ part.
    pub fn dt_predicted(&self, t: &G2Torsion) -> Result<(Scalar, Form, Form), G2Error> {
        let star = &self.star_phi;
        let phi = &self.phi;
        let dt0 = self
            .codiff(&t.tau1)?
            .coeff(0)
            .mul(&Scalar::frac(4, 7))
            .add(&t.tau0.mul(&t.tau0).mul(&Scalar::frac(1, 6)))
            .add(&t.tau1.norm2().mul(&Scalar::frac(12, 7)))
            .sub(&t.tau3.norm2().mul(&Scalar::frac(1, 7)));
        let dtau0 = self.d(&Form::scalar(7, t.tau0.clone()))?;
        let dtau1 = self.d(&t.tau1)?;
        let dt1 = dtau0
            .scale(&Scalar::frac(-7, 12))
            .sub(&dtau1.wedge(star)?.hodge())?
            .sub(
                &t.tau1
                    .wedge(&t.tau2)?
                    .wedge(phi)?
                    .hodge()
                    .scale(&Scalar::frac(1, 4)),
            )?
            .sub(
                &t.tau2
                    .wedge(&t.tau3)?
                    .hodge()
                    .wedge(star)?
                    .hodge()
                    .scale(&Scalar::frac(1, 4)),
            )?;
        let inner27 = self
            .d(&t.tau1.wedge(star)?.hodge())?
            .hodge()
            .sub(&self.d(&t.tau3)?)?
            .add(&t.tau1.wedge(&t.tau1.wedge(star)?.hodge())?.hodge())?
            .add(&t.tau3.hodge().scale(&t.tau0.mul(&Scalar::frac(1, 6))))?
            .sub(&t.tau1.wedge(&t.tau2)?.hodge())?
            .sub(&t.tau1.wedge(&t.tau3)?)?;
        let dt4 = self.project(&inner27, Module::FourTwentySeven)?;
        Ok((dt0, dt1, dt4))
    }

    /// Assemble the predicted dT as a 4-form.
    pub fn dt_predicted_form(&self, t: &G2Torsion) -> Result<Form, G2Error> {
        let (dt0, dt1, dt4) = self.dt_predicted(t)?;
        Ok(self
            .star_phi
            .scale(&dt0)
            .add(&dt1.wedge(&self.phi)?)?
            .add(&dt4)?)
    }

    /// Scalar curvature of g_φ from the torsion forms (valid for any
    /// G2-structure).
    pub fn scal_predicted(&self, t: &G2Torsion) -> Result<Scalar, G2Error> {
        let delta_tau1 = self.codiff(&t.tau1)?.coeff(0);
        Ok(delta_tau1
            .mul(&Scalar::int(12))
            .add(&t.tau0.mul(&t.tau0).mul(&Scalar::frac(21, 8)))
            .add(&t.tau1.norm2().mul(&Scalar::int(30)))
            .sub(&t.tau2.norm2().mul(&Scalar::frac(1, 2)))
            .sub(&t.tau3.norm2().mul(&Scalar::frac(1, 2))))
    }

    /// Traceless Ricci tensor of g_φ viewed as a 4-form in Λ⁴₂₇ (valid for
    /// any G2-structure).
    pub fn ric0_predicted(&self, t: &G2Torsion) -> Result<Form, G2Error> {
        let star = &self.star_phi;
        let inner = self
            .d(&t.tau1.wedge(star)?.hodge())?
            .hodge()
            .scale(&Scalar::frac(-5, 4))
            .sub(&self.d(&t.tau2)?.hodge().scale(&Scalar::frac(1, 4)))?
            .add(&self.d(&t.tau3)?.scale(&Scalar::frac(1, 4)))?
            .add(
                &t.tau1
                    .wedge(&t.tau1.wedge(star)?.hodge())?
                    .hodge()
                    .scale(&Scalar::frac(5, 2)),
            )?
            .sub(&t.tau3.hodge().scale(&t.tau0.mul(&Scalar::frac(1, 8))))?
            .add(&t.tau1.wedge(&t.tau2)?.hodge().scale(&Scalar::frac(1, 4)))?
            .add(&t.tau1.wedge(&t.tau3)?.scale(&Scalar::frac(3, 4)))?
            .add(&t.tau2.wedge(&t.tau2)?.scale(&Scalar::frac(1, 8)))?
            .add(
                &self
                    .q_pairing(&t.tau3, &t.tau3)?
                    .hodge()
                    .scale(&Scalar::frac(1, 64)),
            )?;
        Ok(self
            .project(&inner, Module::FourTwentySeven)?
            .scale(&Scalar::int(-4)))
    }

    /// Λ⁴₂₇-component of the Weyl curvature (valid for any G2-structure).
    pub fn w27_predicted(&self, t: &G2Torsion) -> Result<Form, G2Error> {
        let inner = self
            .d(&t.tau2)?
            .hodge()
            .scale(&Scalar::frac(-6, 5))
            .sub(&self.d(&t.tau3)?.scale(&Scalar::frac(4, 5)))?
            .sub(&t.tau3.hodge().scale(&t.tau0.mul(&Scalar::frac(3, 5))))?
            .add(&t.tau1.wedge(&t.tau2)?.hodge().scale(&Scalar::frac(6, 5)))?
            .add(&t.tau1.wedge(&t.tau3)?.scale(&Scalar::frac(8, 5)))?
            .sub(&t.tau2.wedge(&t.tau2)?.scale(&Scalar::frac(3, 20)))?
            .add(
                &self
                    .q_pairing(&t.tau3, &t.tau3)?
                    .hodge()
                    .scale(&Scalar::frac(1, 80)),
            )?
            .sub(&self.qhat_pairing(&t.tau2, &t.tau3)?.scale(&Scalar::frac(1, 2)))?
            .sub(
                &self
                    .qhat_pairing(&t.tau3, &t.tau3)?
                    .hodge()
                    .scale(&Scalar::frac(1, 4)),
            )?;
        self.project(&inner, Module::FourTwentySeven)
    }

    /// S²₀(Ricᵀ) as a 4-form for a G2T-structure (not necessarily strong).
    pub fn s20_rict_predicted(&self, t: &G2Torsion) -> Result<Form, G2Error> {
        self.require_g2t(t)?;
        let star = &self.star_phi;
        let inner = self
            .d(&t.tau1.wedge(star)?.hodge())?
            .hodge()
            .scale(&Scalar::frac(-5, 4))
            .add(&self.d(&t.tau3)?.scale(&Scalar::frac(1, 4)))?
            .add(
                &t.tau1
                    .wedge(&t.tau1.wedge(star)?.hodge())?
                    .hodge()
                    .scale(&Scalar::frac(11, 4)),
            )?
            .sub(&t.tau3.hodge().scale(&t.tau0.mul(&Scalar::frac(1, 24))))?
            .add(&t.tau1.wedge(&t.tau3)?.scale(&Scalar::frac(5, 4)))?;
        Ok(self
            .project(&inner, Module::FourTwentySeven)?
            .scale(&Scalar::int(-4)))
    }

    /// Scalᵀ for a G2T-structure.
    pub fn scalt_predicted(&self, t: &G2Torsion) -> Result<Scalar, G2Error> {
        self.require_g2t(t)?;
        Ok(self
            .codiff(&t.tau1)?
            .coeff(0)
            .mul(&Scalar::int(12))
            .add(&t.tau0.mul(&t.tau0).mul(&Scalar::frac(7, 3)))
            .add(&t.tau1.norm2().mul(&Scalar::int(24)))
            .sub(&t.tau3.norm2().mul(&Scalar::int(2))))
    }

    /// (δT)²₇ and (δT)²₁₄ from the torsion forms (G2T only):
    /// (δT)²₇ = π²₇(−(7/6)⋆(dτ₀∧⋆φ) − (2/3)τ₀⋆(τ₁∧⋆φ) + 4⋆(τ₁∧⋆τ₃)),
    /// (δT)²₁₄ = π²₁₄(4dτ₁ + 4⋆(τ₁∧⋆τ₃)).
    pub fn delta_t_predicted(&self, t: &G2Torsion) -> Result<(Form, Form), G2Error> {
        self.require_g2t(t)?;
        let star = &self.star_phi;
        let dtau0 = self.d(&Form::scalar(7, t.tau0.clone()))?;
        let a = dtau0
            .wedge(star)?
            .hodge()
            .scale(&Scalar::frac(-7, 6))
            .sub(
                &t.tau1
                    .wedge(star)?
                    .hodge()
                    .scale(&t.tau0.mul(&Scalar::frac(2, 3))),
            )?
            .add(
                &t.tau1
                    .wedge(&t.tau3.hodge())?
                    .hodge()
                    .scale(&Scalar::int(4)),
            )?;
        let p7 = self.project(&a, Module::TwoSeven)?;
        let b = self
            .d(&t.tau1)?
            .scale(&Scalar::int(4))
            .add(
                &t.tau1
                    .wedge(&t.tau3.hodge())?
                    .hodge()
                    .scale(&Scalar::int(4)),
            )?;
        let p14 = self.project(&b, Module::TwoFourteen)?;
        Ok((p7, p14))
    }

    /// Components of ∇ᵀτ₁ (G2T only): the Λ²₇ and Λ²₁₄ parts as 2-forms.
    pub fn nabla_t_tau1_predicted(&self, t: &G2Torsion) -> Result<(Form, Form), G2Error> {
        self.require_g2t(t)?;
        let star = &self.star_phi;
        let a = t
            .tau1
            .wedge(&t.tau3.hodge())?
            .hodge()
            .scale(&Scalar::frac(1, 2))
            .sub(
                &t.tau1
                    .wedge(star)?
                    .hodge()
                    .scale(&t.tau0.mul(&Scalar::frac(1, 12))),
            )?;
        let p7 = self.project(&a, Module::TwoSeven)?;
        let b = self
            .d(&t.tau1)?
            .scale(&Scalar::frac(1, 2))
            .add(
                &t.tau1
                    .wedge(&t.tau3.hodge())?
                    .hodge()
                    .scale(&Scalar::frac(1, 2)),
            )?;
        let p14 = self.project(&b, Module::TwoFourteen)?;
        Ok((p7, p14))
    }

    /// Lie derivative of ⋆φ along τ₁♯, computed by the Cartan formula.
    pub fn lie_star_phi(&self, t: &G2Torsion) -> Result<Form, G2Error> {
        let comps: Vec<Scalar> = (1..=7).map(|i| t.tau1.coeff_at(&[i])).collect();
        let inner = self.star_phi.contract_vector(&comps)?;
        let a = self.d(&inner)?;
        let b = self.d(&self.star_phi)?.contract_vector(&comps)?;
        Ok(a.add(&b)?)
    }

    /// Predicted irreducible components of L_{τ₁♯}(⋆φ) for an arbitrary
    /// G2-structure: the ⟨⋆φ⟩ coefficient, the Λ⁴₂₇ part and the Λ⁴₇ part.
    pub fn lie_star_phi_predicted(&self, t: &G2Torsion) -> Result<(Scalar, Form, Form), G2Error> {
        let star = &self.star_phi;
        let phi = &self.phi;
        let part1 = self
            .codiff(&t.tau1)?
            .coeff(0)
            .mul(&Scalar::frac(-4, 7));
        let inner27 = self
            .d(&t.tau1.wedge(star)?.hodge())?
            .hodge()
            .neg()
            .add(&t.tau1.wedge(&t.tau3)?)?
            .add(
                &t.tau1
                    .wedge(&t.tau1.wedge(star)?.hodge())?
                    .hodge()
                    .scale(&Scalar::int(3)),
            )?;
        let p27 = self.project(&inner27, Module::FourTwentySeven)?;
        let dtau1 = self.d(&t.tau1)?;
        let inner7 = dtau1
            .wedge(star)?
            .hodge()
            .scale(&Scalar::frac(-1, 2))
            .wedge(phi)?
            .sub(&t.tau1.wedge(phi)?.scale(&t.tau0.mul(&Scalar::frac(1, 4))))?
            .sub(&t.tau1.wedge(&t.tau3)?.scale(&Scalar::int(2)))?
            .add(
                &t.tau1
                    .wedge(&t.tau2)?
                    .wedge(phi)?
                    .hodge()
                    .scale(&Scalar::frac(1, 2))
                    .wedge(phi)?,
            )?;
        let p7 = self.project(&inner7, Module::FourSeven)?;
        Ok((part1, p27, p7))
    }

    /// Λ⁴₇- and ⟨⋆φ⟩-level identities for dτ₃ (valid for any G2-structure):
    /// returns the pair (lhs − rhs) for
    /// ⋆(dτ₃)∧φ = −3⋆dτ₀ − 6 dτ₁∧⋆φ − 3τ₀⋆τ₁ + 2⋆(τ₁∧τ₃)∧φ + τ₂∧⋆τ₃
    /// and (dτ₃)∧φ = |τ₃|² vol.
    pub fn key_lemma_residuals(&self, t: &G2Torsion) -> Result<(Form, Form), G2Error> {
        let star = &self.star_phi;
        let phi = &self.phi;
        let dtau3 = self.d(&t.tau3)?;
        let lhs = dtau3.hodge().wedge(phi)?;
        let dtau0 = self.d(&Form::scalar(7, t.tau0.clone()))?;
        let rhs = dtau0
            .hodge()
            .scale(&Scalar::int(-3))
            .sub(&self.d(&t.tau1)?.wedge(star)?.scale(&Scalar::int(6)))?
            .sub(&t.tau1.hodge().scale(&t.tau0.mul(&Scalar::int(3))))?
            .add(
                &t.tau1
                    .wedge(&t.tau3)?
                    .hodge()
                    .wedge(phi)?
                    .scale(&Scalar::int(2)),
            )?
            .add(&t.tau2.wedge(&t.tau3.hodge())?)?;
        let first = lhs.sub(&rhs)?;
        let second = dtau3
            .wedge(phi)?
            .sub(&self.vol.scale(&t.tau3.norm2()))?;
        Ok((first, second))
    }

    fn require_g2t(&self, t: &G2Torsion) -> Result<(), G2Error> {
        if form_vanishes(&t.tau2) {
            Ok(())
        } else {
            Err(G2Error::NotG2T(t.tau2.max_abs_coeff()))
        }
    }

    // -- classification -----------------------------------------------------

    pub fn classify(&self) -> Result<G2Flags, G2Error> {
        let t = self.torsion()?;
        let z = |f: &Form| form_vanishes(f);
        let tau0_zero = t.tau0.is_zero() || t.tau0.eval(1.0).abs() < ZERO_TOL;
        let dtau0 = self.d(&Form::scalar(7, t.tau0.clone()))?;
        let mut flags = G2Flags {
            torsion_free: tau0_zero && z(&t.tau1) && z(&t.tau2) && z(&t.tau3),
            coclosed: z(&t.tau1) && z(&t.tau2),
            closed: tau0_zero && z(&t.tau1) && z(&t.tau3),
            g2t: z(&t.tau2),
            strong_g2t: false,
            harmonic_t: false,
            lee_closed: z(&self.d(&t.tau1)?),
            constant_type: z(&dtau0),
        };
        if flags.g2t {
            let big_t = self.torsion_t_from(&t)?;
            let dt = self.d(&big_t)?;
            let delta_t = self.codiff(&big_t)?;
            flags.strong_g2t = z(&dt);
            flags.harmonic_t = z(&dt) && z(&delta_t);
        }
        Ok(flags)
    }
}

/// Exact zero for constant coefficients, ZERO_TOL across all jet orders
/// otherwise.
pub fn form_vanishes(f: &Form) -> bool {
    if f.is_zero() {
        return true;
    }
    if f.is_exact() {
        return false;
    }
    f.max_abs_coeff() < ZERO_TOL
}

impl Form {
    /// Max |coefficient| through all jet orders (value for constants).
    pub fn max_abs_coeff(&self) -> f64 {
        self.terms()
            .map(|(_, c)| match c {
                Scalar::Const(r) => r.to_f64().abs(),
                Scalar::Jet(j) => j.max_abs_valid(),
                Scalar::Sym(_) => c.eval(1.0).abs(),
            })
            .fold(0.0, f64::max)
    }
}

fn permutations4() -> Vec<([usize; 4], i64)> {
    let mut out = Vec::with_capacity(24);
    let mut idx = [0usize, 1, 2, 3];
    permute(&mut idx, 0, &mut out);
    out
}

fn permute(idx: &mut [usize; 4], k: usize, out: &mut Vec<([usize; 4], i64)>) {
    if k == 4 {
        let mut inv = 0;
        for i in 0..4 {
            for j in (i + 1)..4 {
                if idx[i] > idx[j] {
                    inv += 1;
                }
            }
        }
        out.push((*idx, if inv % 2 == 0 { 1 } else { -1 }));
        return;
    }
    for i in k..4 {
        idx.swap(k, i);
        permute(idx, k + 1, out);
        idx.swap(k, i);
    }
}

/// A named invariant generator: a scalar or a form of fixed module type.
pub enum Invariant {
    Scalar(String, Scalar),
    Form(String, Form),
}

impl Invariant {
    pub fn name(&self) -> &str {
        match self {
            Invariant::Scalar(n, _) => n,
            Invariant::Form(n, _) => n,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum InvariantOrder {
    Second,
    Quadratic,
}

impl G2Structure {
    /// The generators of the second-order invariants (order = Second) and
    /// of the quadratic first-order invariants (order = Quadratic), grouped
    /// by module type. 27-type generators are materialized as 4-forms.
    pub fn invariant_basis(
        &self,
        t: &G2Torsion,
        order: InvariantOrder,
    ) -> Result<Vec<Invariant>, G2Error> {
        let star = &self.star_phi;
        let phi = &self.phi;
        let mut out = Vec::new();
        match order {
            InvariantOrder::Second => {
                let dtau0 = self.d(&Form::scalar(7, t.tau0.clone()))?;
                let dtau1 = self.d(&t.tau1)?;
                out.push(Invariant::Scalar(
                    "delta_tau1".into(),
                    self.codiff(&t.tau1)?.coeff(0),
                ));
                out.push(Invariant::Form("d_tau0".into(), dtau0.clone()));
                out.push(Invariant::Form(
                    "star(d_tau1^starphi)".into(),
                    dtau1.wedge(star)?.hodge(),
                ));
                out.push(Invariant::Form(
                    "(d_tau1)_14".into(),
                    self.project(&dtau1, Module::TwoFourteen)?,
                ));
                out.push(Invariant::Form(
                    "(d star(tau1^starphi))_27".into(),
                    self.project(
                        &self.d(&t.tau1.wedge(star)?.hodge())?.hodge(),
                        Module::FourTwentySeven,
                    )?,
                ));
                out.push(Invariant::Form(
                    "(d_tau2)_27".into(),
                    self.project(&self.d(&t.tau2)?.hodge(), Module::FourTwentySeven)?,
                ));
                out.push(Invariant::Form(
                    "(d_tau3)_27".into(),
                    self.project(&self.d(&t.tau3)?, Module::FourTwentySeven)?,
                ));
            }
            InvariantOrder::Quadratic => {
                out.push(Invariant::Scalar("tau0^2".into(), t.tau0.mul(&t.tau0)));
                out.push(Invariant::Scalar("|tau1|^2".into(), t.tau1.norm2()));
                out.push(Invariant::Scalar("|tau2|^2".into(), t.tau2.norm2()));
                out.push(Invariant::Scalar("|tau3|^2".into(), t.tau3.norm2()));
                out.push(Invariant::Form(
                    "tau0 tau1".into(),
                    t.tau1.scale(&t.tau0),
                ));
                out.push(Invariant::Form(
                    "star(tau1^tau2^phi)".into(),
                    t.tau1.wedge(&t.tau2)?.wedge(phi)?.hodge(),
                ));
                out.push(Invariant::Form(
                    "star(star(tau1^tau3)^phi)".into(),
                    t.tau1.wedge(&t.tau3)?.hodge().wedge(phi)?.hodge(),
                ));
                out.push(Invariant::Form(
                    "star(star(tau2^tau3)^starphi)".into(),
                    t.tau2.wedge(&t.tau3)?.hodge().wedge(star)?.hodge(),
                ));
                out.push(Invariant::Form(
                    "tau0 tau2".into(),
                    t.tau2.scale(&t.tau0),
                ));
                out.push(Invariant::Form(
                    "(star(tau2^tau3))_14".into(),
                    self.project(&t.tau2.wedge(&t.tau3)?.hodge(), Module::TwoFourteen)?,
                ));
                out.push(Invariant::Form(
                    "(star(tau1^star_tau3))_14".into(),
                    self.project(
                        &t.tau1.wedge(&t.tau3.hodge())?.hodge(),
                        Module::TwoFourteen,
                    )?,
                ));
                out.push(Invariant::Form(
                    "tau0 tau3".into(),
                    t.tau3.hodge().scale(&t.tau0),
                ));
                out.push(Invariant::Form(
                    "(tau1^tau3)_27".into(),
                    self.project(&t.tau1.wedge(&t.tau3)?, Module::FourTwentySeven)?,
                ));
                out.push(Invariant::Form(
                    "(tau1^tau2)_27".into(),
                    self.project(&t.tau1.wedge(&t.tau2)?.hodge(), Module::FourTwentySeven)?,
                ));
                out.push(Invariant::Form(
                    "(tau1^star(tau1^starphi))_27".into(),
                    self.project(
                        &t.tau1.wedge(&t.tau1.wedge(star)?.hodge())?.hodge(),
                        Module::FourTwentySeven,
                    )?,
                ));
                out.push(Invariant::Form(
                    "(tau2^tau2)_27".into(),
                    self.project(&t.tau2.wedge(&t.tau2)?, Module::FourTwentySeven)?,
                ));
                out.push(Invariant::Form(
                    "Q(tau3,tau3)".into(),
                    self.q_pairing(&t.tau3, &t.tau3)?.hodge(),
                ));
                out.push(Invariant::Form(
                    "Qhat(tau2,tau3)".into(),
                    self.qhat_pairing(&t.tau2, &t.tau3)?,
                ));
                out.push(Invariant::Form(
                    "Qhat(tau3,tau3)".into(),
                    self.qhat_pairing(&t.tau3, &t.tau3)?.hodge(),
                ));
            }
        }
        Ok(out)
    }
}

/// Whether 2 + (16/7)μ − (1/4)(1 + (16/7)μ)² > 0, evaluated exactly for
/// radical constants. The boundary values are excluded.
pub fn parabolic_range(mu: &Scalar) -> bool {
    let sixteen_sevenths_mu = Scalar::frac(16, 7).mul(mu);
    let one_plus = Scalar::one().add(&sixteen_sevenths_mu);
    let expr = Scalar::int(2)
        .add(&sixteen_sevenths_mu)
        .sub(&one_plus.mul(&one_plus).mul(&Scalar::frac(1, 4)));
    match expr.as_const() {
        Some(r) => !r.is_zero() && r.to_f64() > 0.0,
        None => expr.eval(1.0) > 0.0,
    }
}

/// Exact least squares: minimize |A x − y|² over the radical field. Returns
/// the coefficients and the exact residual |Ax−y|².
pub fn fit_exact(
    rows: &[Vec<Radical>],
    target: &[Radical],
) -> Result<(Vec<Radical>, Radical), LinalgError> {
    let m = rows.len();
    if m == 0 || target.len() != m {
        return Err(LinalgError::Shape);
    }
    let n = rows[0].len();
    let mut ata = vec![vec![Radical::zero(); n]; n];
    let mut aty = vec![Radical::zero(); n];
    for (row, y) in rows.iter().zip(target.iter()) {
        for i in 0..n {
            for j in 0..n {
                ata[i][j] = ata[i][j].add(&row[i].mul(&row[j]));
            }
            aty[i] = aty[i].add(&row[i].mul(y));
        }
    }
    let sol = crate::linalg::solve(&ata, &[aty])?;
    let x = sol[0].clone();
    let mut residual = Radical::zero();
    for (row, y) in rows.iter().zip(target.iter()) {
        let mut pred = Radical::zero();
        for i in 0..n {
            pred = pred.add(&row[i].mul(&x[i]));
        }
        let d = pred.sub(y);
        residual = residual.add(&d.mul(&d));
    }
    Ok((x, residual))
}

/// Rank of the sample matrix (exact), for checking that fitted generators
/// are linearly independent on the sample set.
pub fn sample_rank(rows: &[Vec<Radical>]) -> usize {
    crate::linalg::rank(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_form;
    use crate::tensor::Tensor2;

    fn flat7() -> G2Structure {
        G2Structure::standard(FrameAlgebra::flat(7)).unwrap()
    }

    #[test]
    fn standard_phi_is_compatible_and_unit() {
        let s = flat7();
        assert_eq!(s.phi().norm2(), Scalar::int(7));
        assert_eq!(s.star_phi().norm2(), Scalar::int(7));
        let expect = parse_form(
            "e^{4567}+e^{2367}+e^{2345}+e^{1357}-e^{1346}-e^{1256}-e^{1247}",
            7,
            4,
        )
        .unwrap();
        assert_eq!(s.star_phi(), &expect);
    }

    #[test]
    fn projections_complete_and_idempotent() {
        let s = flat7();
        let a = parse_form("e^{23}-5*e^{17}+e^{45}", 7, 2).unwrap();
        let p7 = s.project(&a, Module::TwoSeven).unwrap();
        let p14 = s.project(&a, Module::TwoFourteen).unwrap();
        assert_eq!(p7.add(&p14).unwrap(), a);
        assert_eq!(s.project(&p7, Module::TwoSeven).unwrap(), p7);
        assert!(s.project(&p14, Module::TwoSeven).unwrap().is_zero());
        assert!(p7.inner(&p14).unwrap().is_zero());
        // eigen-characterisations: ⋆(π²₇(a)∧φ) = 2π²₇(a), ⋆(π²₁₄(a)∧φ) = −π²₁₄(a)
        assert_eq!(
            p7.wedge(s.phi()).unwrap().hodge(),
            p7.scale(&Scalar::int(2))
        );
        assert_eq!(p14.wedge(s.phi()).unwrap().hodge(), p14.neg());
    }

    #[test]
    fn spec_projection_examples() {
        let s = flat7();
        // π²₇(X⌟φ) = X⌟φ
        let x = s.phi().contract(3).unwrap();
        assert_eq!(s.project(&x, Module::TwoSeven).unwrap(), x);
        // π³₂₇(φ) = 0
        assert!(s
            .project(s.phi(), Module::ThreeTwentySeven)
            .unwrap()
            .is_zero());
        // π²₁₄(e²³) = e²³ − (1/3)(e²³+e⁴⁵+e⁶⁷)
        let e23 = parse_form("e^{23}", 7, 2).unwrap();
        let p14 = s.project(&e23, Module::TwoFourteen).unwrap();
        let expect = parse_form("2/3*e^{23}-1/3*e^{45}-1/3*e^{67}", 7, 2).unwrap();
        assert_eq!(p14, expect);
    }

    #[test]
    fn contract_phi_example() {
        let s = flat7();
        let c = s.phi().contract(1).unwrap();
        assert_eq!(c, parse_form("e^{23}+e^{45}+e^{67}", 7, 2).unwrap());
    }

    #[test]
    fn flat_torus_torsion_free() {
        let s = flat7();
        let t = s.torsion().unwrap();
        assert!(t.tau0.is_zero());
        assert!(t.tau1.is_zero());
        assert!(t.tau2.is_zero());
        assert!(t.tau3.is_zero());
        let flags = s.classify().unwrap();
        assert!(flags.torsion_free);
        assert!(flags.strong_g2t);
    }

    #[test]
    fn diamond_identities() {
        let s = flat7();
        let g = Tensor2::identity(7);
        assert_eq!(
            g.diamond(s.star_phi()).unwrap(),
            s.star_phi().scale(&Scalar::int(4))
        );
        // Λ²₁₄ is the kernel of ·⋄⋆φ
        let a = parse_form("e^{23}", 7, 2).unwrap();
        let p14 = s.project(&a, Module::TwoFourteen).unwrap();
        let t = Tensor2::from_two_form(&p14);
        assert!(t.diamond(s.star_phi()).unwrap().is_zero());
        // (e¹⊗e¹) ⋄ φ = e¹∧(e₁⌟φ)
        let mut e11 = Tensor2::zero(7);
        e11.set(1, 1, Scalar::one());
        assert_eq!(
            e11.diamond(s.phi()).unwrap(),
            parse_form("e^{123}+e^{145}+e^{167}", 7, 3).unwrap()
        );
    }

    #[test]
    fn qhat_small_example() {
        let s = flat7();
        // Q̂(e¹², e¹²) = ⋆(Σ (e_i⌟e¹²)∧(e_i⌟e¹²)) = 0 (each summand squares a 1-form)
        let a = parse_form("e^{12}", 7, 2).unwrap();
        assert!(s.qhat_pairing(&a, &a).unwrap().is_zero());
        // Q(0,β) = 0 and symmetry of Q on 3-forms
        let zero = Form::zero(7, 3);
        let beta = parse_form("e^{123}+2*e^{456}", 7, 3).unwrap();
        assert!(s.q_pairing(&zero, &beta).unwrap().is_zero());
        let alpha = parse_form("e^{135}-e^{246}", 7, 3).unwrap();
        assert_eq!(
            s.q_pairing(&alpha, &beta).unwrap(),
            s.q_pairing(&beta, &alpha).unwrap()
        );
    }

    #[test]
    fn torsion_t_requires_g2t() {
        // a generic solvable frame has τ₂ ≠ 0
        let mk = |s: &str| parse_form(s, 7, 2).unwrap();
        let mut table = vec![Form::zero(7, 2); 7];
        table[0] = mk("e^{12}");
        let frame = FrameAlgebra::new(7, table, None).unwrap();
        let s = G2Structure::standard(frame).unwrap();
        let t = s.torsion().unwrap();
        assert!(!t.tau2.is_zero());
        assert!(matches!(s.torsion_t(), Err(G2Error::NotG2T(_))));
    }

    #[test]
    fn nearly_parallel_type_dt0() {
        // with τ₁ = τ₂ = τ₃ = 0 and constant τ₀ the scalar part of the dT
        // identity reduces to τ₀²/6
        let s = flat7();
        let synthetic = G2Torsion {
            tau0: Scalar::frac(3, 2),
            tau1: Form::zero(7, 1),
            tau2: Form::zero(7, 2),
            tau3: Form::zero(7, 3),
        };
        let (dt0, dt1, dt4) = s.dt_predicted(&synthetic).unwrap();
        assert_eq!(dt0, Scalar::frac(3, 8)); // (3/2)²/6
        assert!(dt1.is_zero() && dt4.is_zero());
    }

    #[test]
    fn invariant_basis_counts() {
        let s = flat7();
        let t = s.torsion().unwrap();
        let second = s.invariant_basis(&t, InvariantOrder::Second).unwrap();
        assert_eq!(second.len(), 7); // 1 + 2 + 1 + 3 generators
        let quad = s.invariant_basis(&t, InvariantOrder::Quadratic).unwrap();
        assert_eq!(quad.len(), 19); // 4 + 4 + 3 + 8 generators
        let names: Vec<&str> = quad.iter().map(|i| i.name()).collect();
        assert!(names.contains(&"Q(tau3,tau3)"));
        assert!(names.contains(&"Qhat(tau3,tau3)"));
    }

    #[test]
    fn parabolic_range_examples() {
        assert!(parabolic_range(&Scalar::int(0)));
        assert!(!parabolic_range(&Scalar::int(2)));
        // boundary: μ = (7/16)(1 + 2√2) gives exactly zero → excluded
        let mu = Scalar::frac(7, 16).mul(&Scalar::one().add(&Scalar::int(2).mul(&Scalar::sqrt_int(2))));
        assert!(!parabolic_range(&mu));
        let mu2 = Scalar::frac(7, 16).mul(&Scalar::one().sub(&Scalar::int(2).mul(&Scalar::sqrt_int(2))));
        assert!(!parabolic_range(&mu2));
    }
}
