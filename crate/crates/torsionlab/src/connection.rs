//! Metric connections in orthonormal frames via Cartan structure equations:
//! the Levi-Civita connection, connections with prescribed totally
//! skew-symmetric torsion (characteristic and Bismut connections), their
//! curvature and Ricci traces, covariant and Lie derivatives, and the
//! T̂ / div T̂ quantities.

use crate::form::{Form, FormError};
use crate::frame::{FrameAlgebra, FrameError};
use crate::scalar::Scalar;
use crate::tensor::Tensor2;

#[derive(Debug, thiserror::Error)]
pub enum ConnectionError {
    #[error(transparent)]
    Form(#[from] FormError),
    #[error(transparent)]
    Frame(#[from] FrameError),
    #[error("declared torsion must be a 3-form over the frame")]
    BadTorsion,
    #[error("operation requires dT = 0 but |dT| = {0:.3e}")]
    TorsionNotClosed(f64),
}

/// Antisymmetric matrix of connection 1-forms ω^i_j of a metric connection,
/// with the declared skew torsion 3-form (zero for Levi-Civita).
pub struct ConnectionForms {
    frame: FrameAlgebra,
    omega: Vec<Vec<Form>>,
    torsion: Form,
}

/// Curvature 2-forms Ω^i_j = dω^i_j + ω^i_k ∧ ω^k_j with Ricci traces.
pub struct CurvatureData {
    dim: u8,
    curvature: Vec<Vec<Form>>,
}

impl ConnectionForms {
    /// The unique torsion-free metric connection: solves
    /// de^i = −ω^i_j ∧ e^j with ω^i_j = −ω^j_i via
    /// A_{ijk} = (1/2)(c_{ijk} + c_{jki} − c_{kij}).
    pub fn levi_civita(frame: &FrameAlgebra) -> Self {
        let n = frame.dim();
        let mut omega = vec![vec![Form::zero(n, 1); n as usize]; n as usize];
        for i in 1..=n {
            for j in 1..=n {
                if i == j {
                    continue;
                }
                let mut w = Form::zero(n, 1);
                for k in 1..=n {
                    let a = frame
                        .structure_coeff(i, j, k)
                        .add(&frame.structure_coeff(j, k, i))
                        .sub(&frame.structure_coeff(k, i, j))
                        .mul(&Scalar::frac(1, 2));
                    if !a.is_zero() {
                        w = w.add(&Form::one_form(n, k, a)).expect("grade 1");
                    }
                }
                omega[i as usize - 1][j as usize - 1] = w;
            }
        }
        ConnectionForms {
            frame: frame.clone(),
            omega,
            torsion: Form::zero(n, 3),
        }
    }

    /// Metric connection with the given totally skew torsion:
    /// ω^T = ω_LC − (1/2) T_{ijk} e^k, so that de^i + ω^i_j ∧ e^j = e_i ⌟ T.
    pub fn with_skew_torsion(frame: &FrameAlgebra, t: &Form) -> Result<Self, ConnectionError> {
        if t.grade() != 3 || t.dim() != frame.dim() {
            return Err(ConnectionError::BadTorsion);
        }
        let lc = Self::levi_civita(frame);
        let n = frame.dim();
        let mut omega = lc.omega;
        for i in 1..=n {
            let ti = t.contract(i)?; // Σ_{j<k} T_{ijk} e^{jk}
            for j in 1..=n {
                if i == j {
                    continue;
                }
                // subtract (1/2) T_{ijk} e^k
                let tij = ti.contract(j)?; // Σ_k T_{ijk} e^k with sign bookkeeping
                let corr = tij.scale(&Scalar::frac(-1, 2));
                omega[i as usize - 1][j as usize - 1] = omega[i as usize - 1][j as usize - 1]
                    .add(&corr)
                    .expect("grade 1");
            }
        }
        Ok(ConnectionForms {
            frame: frame.clone(),
            omega,
            torsion: t.clone(),
        })
    }

    pub fn frame(&self) -> &FrameAlgebra {
        &self.frame
    }

    pub fn torsion(&self) -> &Form {
        &self.torsion
    }

    pub fn omega(&self, i: u8, j: u8) -> &Form {
        &self.omega[i as usize - 1][j as usize - 1]
    }

    /// Residuals of the first structure equation
    /// de^i + ω^i_j ∧ e^j − e_i⌟T (one 2-form per generator).
    pub fn structure_residuals(&self) -> Result<Vec<Form>, ConnectionError> {
        let n = self.frame.dim();
        let mut out = Vec::new();
        for i in 1..=n {
            let mut acc = self.frame.d_of_generator(i).clone();
            for j in 1..=n {
                if i == j {
                    continue;
                }
                let ej = Form::one_form(n, j, Scalar::one());
                acc = acc.add(&self.omega(i, j).wedge(&ej)?)?;
            }
            acc = acc.sub(&self.torsion.contract(i)?)?;
            out.push(acc);
        }
        Ok(out)
    }

    /// Second structure equation: Ω^i_j = dω^i_j + ω^i_k ∧ ω^k_j.
    pub fn curvature(&self) -> Result<CurvatureData, ConnectionError> {
        let n = self.frame.dim();
        let mut curv = vec![vec![Form::zero(n, 2); n as usize]; n as usize];
        for i in 1..=n {
            for j in 1..=n {
                if i == j {
                    continue;
                }
                let mut acc = self.frame.d(self.omega(i, j))?;
                for k in 1..=n {
                    if k == i || k == j {
                        continue;
                    }
                    acc = acc.add(&self.omega(i, k).wedge(self.omega(k, j))?)?;
                }
                curv[i as usize - 1][j as usize - 1] = acc;
            }
        }
        Ok(CurvatureData {
            dim: n,
            curvature: curv,
        })
    }

    /// Derivative of a scalar function along the frame vector e_k.
    pub fn vector_apply(&self, k: u8, f: &Scalar) -> Scalar {
        match self.frame.param() {
            Some(p) if p.direction == k => f.derivative().mul(&p.lambda),
            _ => {
                if f.depends_on_t() {
                    // invariant function of t differentiates only along e^p
                    Scalar::zero()
                } else {
                    Scalar::zero()
                }
            }
        }
    }

    /// Covariant derivative ∇_{e_k} a of a form.
    pub fn covariant_derivative(&self, a: &Form, k: u8) -> Result<Form, ConnectionError> {
        let n = self.frame.dim();
        let mut out = Form::zero(n, a.grade());
        for (mask, c) in a.terms() {
            // derivative of the coefficient along e_k
            let dc = self.vector_apply(k, c);
            if !dc.is_zero() {
                out.add_term(mask, dc);
            }
            // connection action on each index: e^m ↦ −Σ_l ω^m_l(e_k) e^l
            let indices = Form::mask_indices(mask);
            for (pos, &m) in indices.iter().enumerate() {
                for l in 1..=n {
                    if l == m {
                        continue;
                    }
                    let w = self.omega(m, l).coeff_at(&[k]);
                    if w.is_zero() {
                        continue;
                    }
                    // replace e^m by −w e^l in the monomial
                    let rest_mask = mask & !(1 << (m - 1));
                    if rest_mask & (1 << (l - 1)) != 0 {
                        continue;
                    }
                    let mut rest = Form::zero(n, a.grade() - 1);
                    rest.add_term(rest_mask, Scalar::one());
                    let el = Form::one_form(n, l, Scalar::one());
                    // sign to reinsert e^l at the removed position
                    let sign = if pos % 2 == 0 { 1 } else { -1 };
                    let term = el.wedge(&rest)?.scale(&c.mul(&w).mul(&Scalar::int(-sign as i64)));
                    out = out.add(&term)?;
                }
            }
        }
        Ok(out)
    }

    /// ∇a of a 1-form a as the 2-tensor (∇a)(X,Y) = (∇_X a)(Y).
    pub fn covariant_derivative_one_form(&self, a: &Form) -> Result<Tensor2, ConnectionError> {
        let n = self.frame.dim();
        let mut out = Tensor2::zero(n);
        for k in 1..=n {
            let da = self.covariant_derivative(a, k)?;
            for j in 1..=n {
                out.set(k, j, da.coeff_at(&[j]));
            }
        }
        Ok(out)
    }

    /// Covariant derivative of a 2-tensor: (∇_k A)(e_a,e_b).
    pub fn covariant_derivative_tensor(
        &self,
        a: &Tensor2,
        k: u8,
    ) -> Result<Tensor2, ConnectionError> {
        let n = self.frame.dim();
        let mut out = Tensor2::zero(n);
        for x in 1..=n {
            for y in 1..=n {
                let mut acc = self.vector_apply(k, a.get(x, y));
                for c in 1..=n {
                    if c != x {
                        let w = self.omega(c, x).coeff_at(&[k]);
                        if !w.is_zero() {
                            acc = acc.sub(&w.mul(a.get(c, y)));
                        }
                    }
                    if c != y {
                        let w = self.omega(c, y).coeff_at(&[k]);
                        if !w.is_zero() {
                            acc = acc.sub(&w.mul(a.get(x, c)));
                        }
                    }
                }
                out.set(x, y, acc);
            }
        }
        Ok(out)
    }

    /// Lie derivative of the metric along X = Σ X^c e_c:
    /// (L_X g)(e_a, e_b) = g(∇_a X, e_b) + g(∇_b X, e_a) with the
    /// Levi-Civita connection of the frame.
    pub fn lie_derivative_metric(&self, comps: &[Scalar]) -> Result<Tensor2, ConnectionError> {
        let n = self.frame.dim();
        // ∇_a X as component matrix: (∇_a X)^b = e_a(X^b) + Σ_c X^c ω^b_c(e_a)
        let mut nabla_x = Tensor2::zero(n);
        for a in 1..=n {
            for b in 1..=n {
                let mut acc = self.vector_apply(a, &comps[b as usize - 1]);
                for c in 1..=n {
                    if c == b {
                        continue;
                    }
                    let w = self.omega(b, c).coeff_at(&[a]);
                    if !w.is_zero() {
                        acc = acc.add(&comps[c as usize - 1].mul(&w));
                    }
                }
                nabla_x.set(a, b, acc);
            }
        }
        Ok(nabla_x.add(&nabla_x.transpose()))
    }
}

impl CurvatureData {
    pub fn form(&self, i: u8, j: u8) -> &Form {
        &self.curvature[i as usize - 1][j as usize - 1]
    }

    pub fn is_flat(&self) -> bool {
        self.curvature
            .iter()
            .flatten()
            .all(crate::g2::form_vanishes)
    }

    /// Ricci trace Ric_ab = Σ_i Ω^i_a(e_i, e_b). No symmetrization is
    /// applied; for connections with torsion the result is not symmetric.
    /// The slot pairing is pinned so that δT = 2 Skew(Ric) holds literally
    /// for the characteristic connection (verified exactly on constant
    /// frames); the symmetric part is independent of this choice.
    pub fn ricci(&self) -> Tensor2 {
        let n = self.dim;
        let mut out = Tensor2::zero(n);
        for a in 1..=n {
            for b in 1..=n {
                let mut acc = Scalar::zero();
                for i in 1..=n {
                    if i == a {
                        continue;
                    }
                    acc = acc.add(&self.curvature[i as usize - 1][a as usize - 1].eval_frame(&[i, b]));
                }
                out.set(a, b, acc);
            }
        }
        out
    }

    pub fn scal(&self) -> Scalar {
        self.ricci().trace()
    }

    /// Bismut-type Ricci form ρ(X,Y) = (1/2) Σ_i g(Rm(X,Y) Je_i, e_i) for a
    /// complex structure given by its matrix (Je_a = Σ_c J[c][a] e_c).
    pub fn rho_form(&self, j: &[Vec<Scalar>]) -> Result<Form, FormError> {
        let n = self.dim;
        let mut acc = Form::zero(n, 2);
        for i in 1..=n as usize {
            for c in 1..=n as usize {
                let jci = &j[c - 1][i - 1];
                if jci.is_zero() {
                    continue;
                }
                // g(Rm(X,Y) Je_i, e_i) = Σ_c J[c][i] Ω^i_c(X,Y)
                let term = self.curvature[i - 1][c - 1].scale(jci);
                acc = acc.add(&term)?;
            }
        }
        Ok(acc.scale(&Scalar::frac(1, 2)))
    }
}

/// The squared-torsion 2-tensor H²_{ab} = Σ_{i,j} H_{ija} H_{ijb}.
pub fn h_squared(h: &Form) -> Result<Tensor2, ConnectionError> {
    let n = h.dim();
    let mut out = Tensor2::zero(n);
    for i in 1..=n {
        for j in 1..=n {
            if i == j {
                continue;
            }
            let u = h.contract(i)?.contract(j)?.neg(); // e_j⌟e_i⌟H
            for a in 1..=n {
                let ua = u.coeff_at(&[a]);
                if ua.is_zero() {
                    continue;
                }
                for b in 1..=n {
                    let ub = u.coeff_at(&[b]);
                    if ub.is_zero() {
                        continue;
                    }
                    let prev = out.get(a, b).clone();
                    out.set(a, b, prev.add(&ua.mul(&ub)));
                }
            }
        }
    }
    Ok(out)
}

/// Residual of Ric(∇^H) = Ric(g) − (1/4)H² + (1/2)δH for a metric
/// connection with closed skew torsion H.
pub fn ricci_h_identity_residual(
    frame: &FrameAlgebra,
    h: &Form,
) -> Result<Tensor2, ConnectionError> {
    let dh = frame.d(h)?;
    if !crate::g2::form_vanishes(&dh) {
        return Err(ConnectionError::TorsionNotClosed(dh.max_abs_coeff()));
    }
    let lc = ConnectionForms::levi_civita(frame);
    let conn_h = ConnectionForms::with_skew_torsion(frame, h)?;
    let ric_h = conn_h.curvature()?.ricci();
    let ric_g = lc.curvature()?.ricci();
    let h2 = h_squared(h)?;
    let delta_h = frame.d(&h.hodge())?.hodge().neg(); // −⋆d⋆ in dim 7; sign checked by tests
    let delta_h = if frame.dim() == 7 {
        delta_h
    } else {
        // general k-form codifferential sign for even n is also −⋆d⋆
        delta_h
    };
    let delta_tensor = Tensor2::from_two_form(&delta_h);
    let rhs = ric_g
        .sub(&h2.scale(&Scalar::frac(1, 4)))
        .add(&delta_tensor.scale(&Scalar::frac(1, 2)));
    Ok(ric_h.sub(&rhs))
}

/// T̂_{pq} = (1/24) ∇_p φ_{jkl} (⋆φ)_{qjkl} = (1/4)⟨∇_p φ, e_q⌟⋆φ⟩,
/// computed with the Levi-Civita connection. The overall sign belongs to
/// the orientation convention; it is pinned by V T̂ = 6 τ₁, which holds
/// exactly with this choice.
pub fn t_hat(g2: &crate::g2::G2Structure) -> Result<Tensor2, ConnectionError> {
    let lc = ConnectionForms::levi_civita(g2.frame());
    let mut out = Tensor2::zero(7);
    for p in 1..=7u8 {
        let nabla_phi = lc.covariant_derivative(g2.phi(), p)?;
        for q in 1..=7u8 {
            let v = nabla_phi
                .inner(&g2.star_phi().contract(q)?)?
                .mul(&Scalar::frac(1, 4));
            out.set(p, q, v);
        }
    }
    Ok(out)
}

/// (V T̂)_j = T̂_{pq} φ_{pqj} as a 1-form.
pub fn v_t_hat(g2: &crate::g2::G2Structure, that: &Tensor2) -> Result<Form, ConnectionError> {
    let mut acc = Form::zero(7, 1);
    for p in 1..=7u8 {
        for q in 1..=7u8 {
            if p == q {
                continue;
            }
            let c = that.get(p, q);
            if c.is_zero() {
                continue;
            }
            let one = g2.phi().contract(p)?.contract(q)?.neg(); // components φ_{pq·}
            acc = acc.add(&one.scale(c))?;
        }
    }
    Ok(acc)
}

/// div(T̂)_j = ∇_i T̂_{ij} and div(T̂ᵗ)_j = ∇_i T̂_{ji} as 1-forms.
pub fn div_t_hat(
    g2: &crate::g2::G2Structure,
    that: &Tensor2,
) -> Result<(Form, Form), ConnectionError> {
    let lc = ConnectionForms::levi_civita(g2.frame());
    let mut div = Form::zero(7, 1);
    let mut div_t = Form::zero(7, 1);
    for i in 1..=7u8 {
        let grad = lc.covariant_derivative_tensor(that, i)?;
        for j in 1..=7u8 {
            div = div.add(&Form::one_form(7, j, grad.get(i, j).clone()))?;
            div_t = div_t.add(&Form::one_form(7, j, grad.get(j, i).clone()))?;
        }
    }
    Ok((div, div_t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{find, load_catalog_str, DEFAULT_CATALOG};
    use crate::g2::form_vanishes;
    use crate::tensor::Tensor2;

    #[test]
    fn flat_frame_has_zero_connection() {
        let f = FrameAlgebra::flat(7);
        let lc = ConnectionForms::levi_civita(&f);
        for i in 1..=7 {
            for j in 1..=7 {
                if i != j {
                    assert!(lc.omega(i, j).is_zero());
                }
            }
        }
        assert!(lc.curvature().unwrap().is_flat());
    }

    #[test]
    fn structure_equation_holds_on_catalog() {
        let entries = load_catalog_str(DEFAULT_CATALOG).unwrap();
        for e in &entries {
            let frame = if e.is_parametric() {
                e.frame.at_t(e.frame.sample_points()[2])
            } else {
                e.frame.clone()
            };
            let lc = ConnectionForms::levi_civita(&frame);
            for r in lc.structure_residuals().unwrap() {
                assert!(form_vanishes(&r), "{}: LC structure equation", e.name);
            }
            // antisymmetry
            for i in 1..=frame.dim() {
                for j in 1..=frame.dim() {
                    if i != j {
                        let s = lc.omega(i, j).add(lc.omega(j, i)).unwrap();
                        assert!(s.is_zero(), "{}: antisymmetry", e.name);
                    }
                }
            }
        }
    }

    #[test]
    fn bi_invariant_s3_koszul() {
        // de^i = e^{jk} cyclic: ω^i_j = (1/2) ε_{ijk} e^k, Ric = (1/2) g
        let mk = |s: &str| crate::parse::parse_form(s, 3, 2).unwrap();
        let f = FrameAlgebra::new(3, vec![mk("e^{23}"), mk("-e^{13}"), mk("e^{12}")], None)
            .unwrap();
        assert!(f.check_d_squared().exact_zero);
        let lc = ConnectionForms::levi_civita(&f);
        assert_eq!(
            lc.omega(1, 2),
            &Form::one_form(3, 3, Scalar::frac(1, 2))
        );
        let ric = lc.curvature().unwrap().ricci();
        let expect = Tensor2::identity(3).scale(&Scalar::frac(1, 2));
        assert!(ric.sub(&expect).is_zero());
    }

    #[test]
    fn curvature_is_antisymmetric() {
        let entries = load_catalog_str(DEFAULT_CATALOG).unwrap();
        for name in ["s3s3s1_c", "nil61_strong"] {
            let e = find(&entries, name).unwrap();
            let frame = if e.is_parametric() {
                e.frame.at_t(1.0)
            } else {
                e.frame.clone()
            };
            let s = e.g2().ok().or_else(|| e.g2_at(1.0).ok()).unwrap();
            let t = s.torsion_t().unwrap();
            let conn = ConnectionForms::with_skew_torsion(&frame, &t).unwrap();
            let curv = conn.curvature().unwrap();
            for i in 1..=7 {
                for j in (i + 1)..=7 {
                    let sum = curv.form(i, j).add(curv.form(j, i)).unwrap();
                    assert!(form_vanishes(&sum), "{}: Ω^{}_{} antisymmetry", name, i, j);
                }
            }
        }
    }

    #[test]
    fn torsion_connection_structure_equation() {
        let entries = load_catalog_str(DEFAULT_CATALOG).unwrap();
        let e = find(&entries, "s3t4").unwrap();
        let s = e.g2().unwrap();
        let t = s.torsion_t().unwrap();
        let conn = ConnectionForms::with_skew_torsion(s.frame(), &t).unwrap();
        for r in conn.structure_residuals().unwrap() {
            assert!(r.is_zero());
        }
    }

    #[test]
    fn characteristic_connection_flat_and_ricci_flat_examples() {
        let entries = load_catalog_str(DEFAULT_CATALOG).unwrap();
        // s3s3s1_c: Rm^T = 0 (and hence Ric^T = 0), ∇ᵀT = 0
        let e = find(&entries, "s3s3s1_c").unwrap();
        let s = e.g2().unwrap();
        let t = s.torsion_t().unwrap();
        let conn = ConnectionForms::with_skew_torsion(s.frame(), &t).unwrap();
        let curv = conn.curvature().unwrap();
        assert!(curv.is_flat(), "Rm^T = 0 on s3s3s1_c");
        for k in 1..=7 {
            let nabla = conn.covariant_derivative(&t, k).unwrap();
            assert!(nabla.is_zero(), "∇ᵀT = 0 on s3s3s1_c");
        }
        // s3t4: Ric^T = 0 but Rm^T ≠ 0 would need a curved N⁴; here N⁴ = T⁴
        // so in fact Rm^T of the product with flat T⁴ vanishes too on the
        // S³ block trace; check Ric^T = 0 directly.
        let e = find(&entries, "s3t4").unwrap();
        let s = e.g2().unwrap();
        let t = s.torsion_t().unwrap();
        let conn = ConnectionForms::with_skew_torsion(s.frame(), &t).unwrap();
        assert!(conn.curvature().unwrap().ricci().is_zero(), "Ric^T = 0 on s3t4");
    }

    #[test]
    fn ricci_h_identity_on_examples() {
        let entries = load_catalog_str(DEFAULT_CATALOG).unwrap();
        for name in ["s3t4", "s3s3s1_c", "s3s3s1_askt"] {
            let e = find(&entries, name).unwrap();
            let s = e.g2().unwrap();
            let t = s.torsion_t().unwrap();
            let res = ricci_h_identity_residual(s.frame(), &t).unwrap();
            assert!(res.is_zero(), "ricciH identity on {}", name);
        }
        // trivially with T = 0 on the flat torus
        let e = find(&entries, "flat_t7").unwrap();
        let res = ricci_h_identity_residual(&e.frame, &Form::zero(7, 3)).unwrap();
        assert!(res.is_zero());
    }

    #[test]
    fn killing_field_on_s3s3s1() {
        let entries = load_catalog_str(DEFAULT_CATALOG).unwrap();
        let e = find(&entries, "s3s3s1_c").unwrap();
        let s = e.g2().unwrap();
        let tor = s.torsion().unwrap();
        let comps: Vec<Scalar> = (1..=7).map(|i| tor.tau1.coeff_at(&[i])).collect();
        let lc = ConnectionForms::levi_civita(s.frame());
        let lie = lc.lie_derivative_metric(&comps).unwrap();
        assert!(lie.is_zero(), "τ₁♯ is Killing on s3s3s1_c");
        // coordinate field on the torus
        let e = find(&entries, "flat_t7").unwrap();
        let lc = ConnectionForms::levi_civita(&e.frame);
        let mut comps = vec![Scalar::zero(); 7];
        comps[3] = Scalar::one();
        assert!(lc.lie_derivative_metric(&comps).unwrap().is_zero());
    }
}
