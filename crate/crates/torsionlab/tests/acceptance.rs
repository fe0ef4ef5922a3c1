//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line
//! with its runtime. Tolerances are pinned in code; constant-coefficient
//! checks are exact (zero tolerance).

use std::time::Instant;
use torsionlab::catalog::{find, load_catalog_str, CatalogEntry, DEFAULT_CATALOG};
use torsionlab::coh1::{self, AnsatzFamily, Coh1State, StopReason};
use torsionlab::connection::ConnectionForms;
use torsionlab::form::Form;
use torsionlab::g2::parabolic_range;
use torsionlab::parse::parse_form;
use torsionlab::reduction::{self, QuotientView, ReductionData};
use torsionlab::scalar::Scalar;
use torsionlab::su3::scalar_vanishes;
use torsionlab::tensor::Tensor2;
use torsionlab::verify;

fn entries() -> Vec<CatalogEntry> {
    load_catalog_str(DEFAULT_CATALOG).unwrap()
}

fn finish(criterion: &str, start: Instant, budget_s: f64) {
    let elapsed = start.elapsed().as_secs_f64();
    println!("PASS {} ({:.2}s, budget {}s)", criterion, elapsed, budget_s);
    assert!(
        elapsed < budget_s,
        "{} exceeded its runtime budget: {:.2}s",
        criterion,
        elapsed
    );
}

#[test]
fn criterion_1_exact_torsion_data() {
    let start = Instant::now();
    let entries = entries();

    // CYT nilmanifold: σ₀ = 1/2, ν₃, T_ω, dT_ω = −ω², ρ^B = 0 — all exact
    let e = find(&entries, "nilmanifold_cyt").unwrap();
    let s = e.su3().unwrap();
    let t = s.torsion().unwrap();
    assert_eq!(t.sigma0, Scalar::frac(1, 2));
    assert_eq!(t.nu3, e.expected_form("nu3", 3).unwrap());
    let t_omega = s.torsion_t(&t).unwrap();
    assert_eq!(t_omega, e.expected_form("T_omega", 3).unwrap());
    let omega2 = s.omega().wedge(s.omega()).unwrap();
    assert_eq!(s.d(&t_omega).unwrap(), omega2.neg());
    assert!(s.rho_b_predicted(&t).unwrap().is_zero());

    // almost SKT S³×S³: σ₀ = −2, ν₃, T_ω, dT_ω = 0, ρ^B = 0, Rm^B = 0
    let e = find(&entries, "s3s3_askt").unwrap();
    let s = e.su3().unwrap();
    let t = s.torsion().unwrap();
    assert_eq!(t.sigma0, Scalar::int(-2));
    assert_eq!(t.nu3, e.expected_form("nu3", 3).unwrap());
    let t_omega = s.torsion_t(&t).unwrap();
    assert_eq!(t_omega, e.expected_form("T_omega", 3).unwrap());
    assert!(s.d(&t_omega).unwrap().is_zero());
    assert!(s.rho_b_predicted(&t).unwrap().is_zero());
    let bismut = ConnectionForms::with_skew_torsion(s.frame(), &t_omega).unwrap();
    assert!(bismut.curvature().unwrap().is_flat(), "Rm^B = 0");

    // S³×S³×S¹: τ₁, T = 2√2(E²⁴⁵+E³⁶⁷), dτ₁, Ric^T = 0, Rm^T = 0, ∇ᵀT = 0
    let e = find(&entries, "s3s3s1_c").unwrap();
    let s = e.g2().unwrap();
    let tor = s.torsion().unwrap();
    assert!(tor.tau0.is_zero() && tor.tau2.is_zero());
    assert_eq!(tor.tau1, e.expected_form("tau1", 1).unwrap());
    assert_eq!(tor.tau3, e.expected_form("tau3", 3).unwrap());
    let big_t = s.torsion_t().unwrap();
    assert_eq!(big_t, e.expected_form("T", 3).unwrap());
    assert_eq!(s.d(&tor.tau1).unwrap(), e.expected_form("dtau1", 2).unwrap());
    let conn = ConnectionForms::with_skew_torsion(s.frame(), &big_t).unwrap();
    let curv = conn.curvature().unwrap();
    assert!(curv.is_flat(), "Rm^T = 0");
    assert!(curv.ricci().is_zero(), "Ric^T = 0");
    for k in 1..=7 {
        assert!(conn.covariant_derivative(&big_t, k).unwrap().is_zero());
    }

    // S³×T⁴: τ₀ = 6/7, T = −e¹²³, dT = δT = 0, Ric^T = 0
    let e = find(&entries, "s3t4").unwrap();
    let s = e.g2().unwrap();
    let tor = s.torsion().unwrap();
    assert_eq!(tor.tau0, Scalar::frac(6, 7));
    assert!(tor.tau1.is_zero() && tor.tau2.is_zero());
    let big_t = s.torsion_t().unwrap();
    assert_eq!(big_t, parse_form("-e^{123}", 7, 3).unwrap());
    assert!(s.d(&big_t).unwrap().is_zero());
    assert!(s.codiff(&big_t).unwrap().is_zero());
    let conn = ConnectionForms::with_skew_torsion(s.frame(), &big_t).unwrap();
    assert!(conn.curvature().unwrap().ricci().is_zero(), "Ric^T = 0");

    finish("criterion 1 (exact torsion data)", start, 1.0);
}

#[test]
fn criterion_2_parametric_examples() {
    let start = Instant::now();
    let entries = entries();
    let tol = 1e-10;

    let e = find(&entries, "nil61_strong").unwrap();
    for &t0 in &[0.5f64, 1.0, 2.0, 5.0] {
        let s = e.g2_at(t0).unwrap();
        let tor = s.torsion().unwrap();
        let check = |got: &Form, key: &str, grade: u8| {
            let want = e.expected_form(key, grade).unwrap().to_jet(t0);
            let res = got.sub(&want).unwrap().max_abs_coeff();
            assert!(res <= tol, "nil61_strong {} at t={} residual {:.3e}", key, t0, res);
        };
        check(&tor.tau1, "tau1", 1);
        check(&tor.tau3, "tau3", 3);
        let big_t = s.torsion_t().unwrap();
        check(&big_t, "T", 3);
        assert!(s.d(&big_t).unwrap().max_abs_coeff() <= tol, "dT = 0");
        assert!(s.codiff(&big_t).unwrap().max_abs_coeff() <= tol, "δT = 0");
        // L_{τ₁♯}g = −(3/16t²)(2(E¹)² − (E²)² − (E⁴)² − (E⁶)²), Ric^T = −2L
        let comps: Vec<Scalar> = (1..=7).map(|i| tor.tau1.coeff_at(&[i])).collect();
        let lie = ConnectionForms::levi_civita(s.frame())
            .lie_derivative_metric(&comps)
            .unwrap();
        let mut expect = Tensor2::zero(7);
        let c = -3.0 / (16.0 * t0 * t0);
        expect.set(1, 1, Scalar::float(2.0 * c));
        for i in [2u8, 4, 6] {
            expect.set(i, i, Scalar::float(-c));
        }
        assert!(lie.sub(&expect).max_abs_eval(t0) <= tol, "L_{{τ₁}}g at t={}", t0);
        let big_t = s.torsion_t().unwrap();
        let ric = ConnectionForms::with_skew_torsion(s.frame(), &big_t)
            .unwrap()
            .curvature()
            .unwrap()
            .ricci();
        assert!(
            ric.add(&lie.scale(&Scalar::int(2))).max_abs_eval(t0) <= tol,
            "Ric^T = −2L at t={}",
            t0
        );
    }

    // §6.2 frame with C = 2 on its validity interval
    let e = find(&entries, "nil62_nonharmonic").unwrap();
    for &t0 in &[0.5f64, 1.0, 1.5] {
        let s = e.g2_at(t0).unwrap();
        let big_t = s.torsion_t().unwrap();
        assert!(s.d(&big_t).unwrap().max_abs_coeff() <= tol, "dT = 0");
        let want = e.expected_form("deltaT", 2).unwrap().to_jet(t0);
        let res = s.codiff(&big_t).unwrap().sub(&want).unwrap().max_abs_coeff();
        assert!(res <= tol, "nil62 δT at t={} residual {:.3e}", t0, res);
    }

    // Bryant–Salamon coframe is torsion-free
    let e = find(&entries, "nil61_torsionfree").unwrap();
    for &t0 in &[0.5f64, 1.0, 2.0, 5.0] {
        let s = e.g2_at(t0).unwrap();
        let tor = s.torsion().unwrap();
        assert!(scalar_vanishes(&tor.tau0));
        assert!(tor.tau1.max_abs_coeff() <= tol);
        assert!(tor.tau2.max_abs_coeff() <= tol);
        assert!(tor.tau3.max_abs_coeff() <= tol);
    }

    finish("criterion 2 (parametric examples)", start, 2.0);
}

#[test]
fn criterion_3_g2_formula_vs_direct() {
    let start = Instant::now();
    for name in [
        "dT_thm",
        "scal_general",
        "ric0_general",
        "w27_general",
        "lie_derivative",
        "key_lemma_mlcf",
        "divT",
        "traceless_ricT",
        "scalT",
        "skew_ricT",
        "nablaT_tau1",
        "rict_lie",
        "a_tensor",
        "main_without_strong",
    ] {
        let o = verify::run_identity(name, 20, 7).unwrap();
        assert!(
            o.pass,
            "{} failed: max residual {:.3e}, notes {:?}",
            name, o.max_residual, o.notes
        );
        assert!(o.max_residual <= 1e-9, "{}: {:.3e}", name, o.max_residual);
    }
    finish("criterion 3 (G2 formula vs direct, ≥20 frames)", start, 30.0);
}

#[test]
fn criterion_4_su3_suite() {
    let start = Instant::now();
    for name in [
        "dTom",
        "ddcom",
        "nhat_prop",
        "rhoB",
        "scal_askt",
        "scary_one",
        "nijenhuis_formula",
        "nijenhuis_identities",
        "dnu1_type11",
        "chern",
        "star_dictionary",
    ] {
        let o = verify::run_identity(name, 10, 11).unwrap();
        assert!(
            o.pass,
            "{} failed: max residual {:.3e}, notes {:?}",
            name, o.max_residual, o.notes
        );
        assert!(o.max_residual <= 1e-9, "{}: {:.3e}", name, o.max_residual);
    }
    // nearly Kähler: T_ω = −Ω⁻ and dT_ω = 2ω² exactly
    let entries = entries();
    let e = find(&entries, "s3s3_nk").unwrap();
    let s = e.su3().unwrap();
    let t = s.torsion().unwrap();
    let big_t = s.torsion_t(&t).unwrap();
    assert_eq!(big_t, s.omega_minus().neg());
    let omega2 = s.omega().wedge(s.omega()).unwrap();
    assert_eq!(s.d(&big_t).unwrap(), omega2.scale(&Scalar::int(2)));
    finish("criterion 4 (SU(3) suite)", start, 30.0);
}

#[test]
fn criterion_5_appendix_fit() {
    let start = Instant::now();
    let (coeffs, residual, rank_ok) = verify::scal_fit(7).unwrap();
    let want = [12.0, 21.0 / 8.0, 30.0, -0.5, -0.5];
    for (got, expect) in coeffs.iter().zip(want.iter()) {
        assert!(
            (got - expect).abs() <= 1e-8,
            "Scal coefficient {} vs {}",
            got,
            expect
        );
    }
    assert!(residual <= 1e-8, "Scal fit residual {:.3e}", residual);
    assert!(rank_ok, "Scal sample matrix must have full rank");

    let (coeffs, residual, rank_ok) = verify::dt0_fit().unwrap();
    let want = [4.0 / 7.0, 1.0 / 6.0, 12.0 / 7.0, -1.0 / 7.0];
    for (got, expect) in coeffs.iter().zip(want.iter()) {
        assert!(
            (got - expect).abs() <= 1e-8,
            "(dT)₀ coefficient {} vs {}",
            got,
            expect
        );
    }
    assert!(residual <= 1e-8, "(dT)₀ fit residual {:.3e}", residual);
    assert!(rank_ok, "(dT)₀ sample matrix must have full rank");
    finish("criterion 5 (appendix coefficient fits)", start, 30.0);
}

#[test]
fn criterion_6_reduction_suite() {
    let start = Instant::now();
    let entries = entries();

    // construction 1: trivial bundle over the Hermitian SKT base
    let base = find(&entries, "s3s3_skt").unwrap().su3().unwrap();
    let r = ReductionData::product(base).unwrap();
    assert!(r.gibbons_hawking_check().unwrap().is_zero());
    assert!(r.heterotic_residual().unwrap().is_zero());
    let base = find(&entries, "s3s3_skt").unwrap().su3().unwrap();
    let checks = reduction::product_strong_check(base).unwrap();
    assert!(checks.strong && checks.pi1_is_2nu1 && checks.t_phi_equals_t_omega);

    // construction 2: quotient of φ_C by its unit Lee-form dual
    let g2 = find(&entries, "s3s3s1_c").unwrap().g2().unwrap();
    let q = QuotientView::new(&g2).unwrap();
    let rep = q.report().unwrap();
    assert!(rep.exact, "quotient checks run in exact arithmetic");
    assert_eq!(rep.half_flat_residual, 0.0, "Gibbons–Hawking / half-flat");
    assert_eq!(rep.coupled_residual, 0.0);
    assert_eq!(rep.eigenform_residual, 0.0, "eigenform PDE");
    assert_eq!(rep.heterotic_residual, 0.0, "heterotic identity");
    assert_eq!(rep.nu3_norm_residual, 0.0, "|dτ₁|² + |ν₃|² = 12 exactly");
    assert!(rep.half_flat && rep.cocoupled && rep.almost_cyt);

    // the almost SKT product reduces with dτ₁ = 0 (Riemannian product case)
    let g2 = find(&entries, "s3s3s1_askt").unwrap().g2().unwrap();
    let q = QuotientView::new(&g2).unwrap();
    assert!(q.f_eta.is_zero());
    let rep = q.report().unwrap();
    assert_eq!(rep.heterotic_residual, 0.0);
    assert!(rep.half_flat && rep.cocoupled && rep.almost_cyt);

    finish("criterion 6 (reduction suite)", start, 10.0);
}

#[test]
fn criterion_7_ode_suite() {
    let start = Instant::now();

    // Bryant–Salamon: exact solution oracle with dt = (1−s⁻³)^{−1/2} ds.
    // t(s) by Simpson quadrature (independent of the integrator), inverted
    // by bisection at every trajectory sample.
    let s_lo = 1.1f64;
    let integrand = |s: f64| (1.0 - s.powi(-3)).powf(-0.5);
    let t_of_s = |s: f64| -> f64 {
        let n = 4000;
        let h = (s - s_lo) / n as f64;
        let mut acc = integrand(s_lo) + integrand(s);
        for i in 1..n {
            let x = s_lo + i as f64 * h;
            acc += if i % 2 == 1 { 4.0 } else { 2.0 } * integrand(x);
        }
        acc * h / 3.0
    };
    let s_of_t = |t: f64| -> f64 {
        let (mut lo, mut hi) = (s_lo, 6.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if t_of_s(mid) < t {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    };
    let h0 = 2.0 * s_lo / 3.0f64.sqrt();
    let f0 = 2.0 / 3.0 * s_lo * (1.0 - s_lo.powi(-3)).sqrt();
    let st = Coh1State::new(0.0, h0, f0, 0.0);
    let t_end = t_of_s(5.0);
    let traj = coh1::integrate(&st, t_end, 1e-3).unwrap();
    assert_eq!(traj.stop, StopReason::Completed);
    let mut max_err = 0.0f64;
    let mut max_drift = 0.0f64;
    for row in traj.rows.iter().step_by(25) {
        let s = s_of_t(row.t);
        let h_exact = 2.0 * s / 3.0f64.sqrt();
        let f_exact = 2.0 / 3.0 * s * (1.0 - s.powi(-3)).sqrt();
        max_err = max_err.max((row.h - h_exact).abs()).max((row.f - f_exact).abs());
        max_drift = max_drift.max(row.conserved_residual.abs());
    }
    assert!(max_err <= 1e-6, "Bryant–Salamon track error {:.3e}", max_err);
    let drift_rate = max_drift / t_end;
    assert!(drift_rate <= 1e-8, "conserved drift rate {:.3e}", drift_rate);

    // fourth-order drift scaling: doubling the step scales drift ~16×
    let short_end = 1.0;
    let drift_at = |step: f64| -> f64 {
        let traj = coh1::integrate(&st, short_end, step).unwrap();
        traj.rows
            .iter()
            .map(|r| r.conserved_residual.abs())
            .fold(0.0f64, f64::max)
    };
    let d1 = drift_at(4e-2);
    let d2 = drift_at(2e-2);
    let ratio = d1 / d2;
    assert!(
        (8.0..40.0).contains(&ratio),
        "drift scaling ratio {:.2} not ~16",
        ratio
    );

    // C = +2 explicit solution: f ≡ 1, h = √(8t − c₀)
    let (t0, h0) = (1.0, 2.0);
    let c0 = 8.0 * t0 - h0 * h0;
    let st2 = Coh1State::new(t0, h0, 1.0, 2.0);
    let traj = coh1::integrate(&st2, 3.0, 1e-3).unwrap();
    for row in traj.rows.iter().step_by(50) {
        let h_exact = (8.0 * row.t - c0).sqrt();
        assert!((row.h - h_exact).abs() <= 1e-6, "C=+2 h error");
        assert!((row.f - 1.0).abs() <= 1e-6, "C=+2 f stays at √(C/2)");
    }

    // phase portrait: the Bryant–Salamon branch approaches f/h = 1/√3
    let branches = coh1::phase_portrait(0.0, &[(h0_bs(), f0_bs())], 25.0, 1e-3);
    let slope = branches[0].final_slope;
    let target = 1.0 / 3.0f64.sqrt();
    assert!(
        (slope - target).abs() / target <= 0.02,
        "asymptotic slope {:.5} vs 1/√3",
        slope
    );

    // C = −2 fixed point at (1,1) is stationary
    let fp = Coh1State::new(0.0, 1.0, 1.0, -2.0);
    let traj = coh1::integrate(&fp, 1.0, 1e-2).unwrap();
    for row in &traj.rows {
        assert!((row.h - 1.0).abs() <= 1e-10 && (row.f - 1.0).abs() <= 1e-10);
    }

    finish("criterion 7 (ODE suite)", start, 10.0);
}

fn h0_bs() -> f64 {
    2.0 * 1.1 / 3.0f64.sqrt()
}

fn f0_bs() -> f64 {
    2.0 / 3.0 * 1.1 * (1.0 - 1.1f64.powi(-3)).sqrt()
}

#[test]
fn criterion_8_flow_suite() {
    let start = Instant::now();
    let fam = AnsatzFamily::s3t4().unwrap();

    // flow ∂ₜ(⋆φ) = −dT (λ = 0, C = 0) at the strong point: ṗ = 0
    let (pdot, residual) = fam.flow_reduce(&[1.0, 1.0], 0.0, 0.0).unwrap();
    assert!(pdot.iter().all(|x| x.abs() <= 1e-10), "ṗ = {:?}", pdot);
    assert!(residual <= 1e-10);

    // critical-point conditions at (λ, C) = (7/6, 1)
    let s = fam.structure_at(&[1.0, 1.0]).unwrap();
    let (c1, c2, c3) =
        coh1::critical_point_check(&s, &Scalar::frac(7, 6), &Scalar::one()).unwrap();
    assert!(c1 <= 1e-10 && c2 <= 1e-10 && c3 <= 1e-10, "{} {} {}", c1, c2, c3);

    // τ₀ evolution along the reduced flow
    let (_, _, res) = fam
        .tau0_evolution_check(&[1.0, 1.0], 7.0 / 6.0, 1.0, 1e-4)
        .unwrap();
    assert!(res <= 1e-6, "critical point evolution residual {:.3e}", res);
    let (_, _, res) = fam
        .tau0_evolution_check(&[1.2, 0.9], 0.0, 0.0, 1e-4)
        .unwrap();
    assert!(res <= 1e-6, "generic evolution residual {:.3e}", res);

    // parabolic range of the short-time-existence inequality
    assert!(parabolic_range(&Scalar::int(0)));
    assert!(!parabolic_range(&Scalar::int(2)));

    finish("criterion 8 (flow suite)", start, 10.0);
}
