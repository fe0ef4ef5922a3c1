//! Exact reproduction of the catalog's expected torsion data: constant
//! frames with zero tolerance, parametric frames at sampled t ≤ 1e-10.

use torsionlab::catalog::{find, load_catalog_str, CatalogEntry, DEFAULT_CATALOG};
use torsionlab::form::Form;
use torsionlab::g2::form_vanishes;
use torsionlab::scalar::Scalar;
use torsionlab::su3::scalar_vanishes;

fn entries() -> Vec<CatalogEntry> {
    load_catalog_str(DEFAULT_CATALOG).unwrap()
}

fn assert_form_eq_exact(name: &str, what: &str, got: &Form, want: &Form) {
    let diff = got.sub(want).unwrap();
    assert!(
        diff.is_zero(),
        "{}: {} mismatch\n got: {:?}\nwant: {:?}",
        name,
        what,
        got,
        want
    );
}

fn assert_form_eq_tol(name: &str, what: &str, got: &Form, want: &Form, tol: f64) {
    let diff = got.sub(want).unwrap();
    let m = diff.max_abs_coeff();
    assert!(
        m <= tol,
        "{}: {} residual {:.3e}\n got: {:?}\nwant: {:?}",
        name,
        what,
        m,
        got,
        want
    );
}

#[test]
fn s3s3s1_c_torsion_exact() {
    let entries = entries();
    let e = find(&entries, "s3s3s1_c").unwrap();
    let s = e.g2().unwrap();
    let t = s.torsion().unwrap();
    assert!(t.tau0.is_zero(), "tau0 = {:?}", t.tau0);
    assert!(t.tau2.is_zero(), "tau2 = {:?}", t.tau2);
    assert_form_eq_exact("s3s3s1_c", "tau1", &t.tau1, &e.expected_form("tau1", 1).unwrap());
    assert_form_eq_exact("s3s3s1_c", "tau3", &t.tau3, &e.expected_form("tau3", 3).unwrap());
    let big_t = s.torsion_t().unwrap();
    assert_form_eq_exact("s3s3s1_c", "T", &big_t, &e.expected_form("T", 3).unwrap());
    let dtau1 = s.d(&t.tau1).unwrap();
    assert_form_eq_exact("s3s3s1_c", "dtau1", &dtau1, &e.expected_form("dtau1", 2).unwrap());
    assert!(s.d(&big_t).unwrap().is_zero(), "dT must vanish");
    assert!(s.codiff(&big_t).unwrap().is_zero(), "deltaT must vanish");
    // |tau1| = 1 and |tau3|^2 = 12 (constant-norm relations)
    assert_eq!(t.tau1.norm2(), Scalar::one());
    assert_eq!(t.tau3.norm2(), Scalar::int(12));
    let flags = s.classify().unwrap();
    assert!(flags.g2t && flags.strong_g2t && flags.harmonic_t);
}

#[test]
fn s3t4_torsion_exact() {
    let entries = entries();
    let e = find(&entries, "s3t4").unwrap();
    let s = e.g2().unwrap();
    let t = s.torsion().unwrap();
    assert_eq!(t.tau0, Scalar::frac(6, 7));
    assert!(t.tau1.is_zero());
    assert!(t.tau2.is_zero());
    assert_form_eq_exact("s3t4", "tau3", &t.tau3, &e.expected_form("tau3", 3).unwrap());
    assert_eq!(t.tau3.norm2(), Scalar::frac(6, 7));
    let big_t = s.torsion_t().unwrap();
    assert_form_eq_exact("s3t4", "T", &big_t, &e.expected_form("T", 3).unwrap());
    assert!(s.d(&big_t).unwrap().is_zero());
    assert!(s.codiff(&big_t).unwrap().is_zero());
    let flags = s.classify().unwrap();
    assert!(flags.coclosed && flags.strong_g2t && flags.harmonic_t);
    assert!(!flags.torsion_free);
}

#[test]
fn s3s3s1_askt_product_strong() {
    let entries = entries();
    let e = find(&entries, "s3s3s1_askt").unwrap();
    let s = e.g2().unwrap();
    let t = s.torsion().unwrap();
    assert!(t.tau0.is_zero());
    assert!(t.tau2.is_zero());
    assert!(s.d(&t.tau1).unwrap().is_zero(), "dtau1 = 0 for this structure");
    let big_t = s.torsion_t().unwrap();
    assert!(s.d(&big_t).unwrap().is_zero());
    assert!(s.codiff(&big_t).unwrap().is_zero());
}

#[test]
fn nil7_gh_is_g2t_not_strong() {
    let entries = entries();
    let e = find(&entries, "nil7_gh").unwrap();
    let s = e.g2().unwrap();
    let t = s.torsion().unwrap();
    assert!(t.tau0.is_zero());
    assert!(t.tau1.is_zero());
    assert!(t.tau2.is_zero());
    let big_t = s.torsion_t().unwrap();
    assert_form_eq_exact("nil7_gh", "T", &big_t, &e.expected_form("T", 3).unwrap());
    let flags = s.classify().unwrap();
    assert!(flags.g2t && !flags.strong_g2t);
}

#[test]
fn nil61_strong_parametric_values() {
    let entries = entries();
    let e = find(&entries, "nil61_strong").unwrap();
    for &t0 in &[0.5f64, 1.0, 2.0, 5.0] {
        let s = e.g2_at(t0).unwrap();
        let tor = s.torsion().unwrap();
        assert!(scalar_vanishes(&tor.tau0), "tau0 at t={}", t0);
        assert!(form_vanishes(&tor.tau2));
        let want_tau1 = e.expected_form("tau1", 1).unwrap().to_jet(t0);
        assert_form_eq_tol("nil61_strong", "tau1", &tor.tau1, &want_tau1, 1e-10);
        let want_tau3 = e.expected_form("tau3", 3).unwrap().to_jet(t0);
        assert_form_eq_tol("nil61_strong", "tau3", &tor.tau3, &want_tau3, 1e-10);
        let big_t = s.torsion_t().unwrap();
        let want_t = e.expected_form("T", 3).unwrap().to_jet(t0);
        assert_form_eq_tol("nil61_strong", "T", &big_t, &want_t, 1e-10);
        assert!(form_vanishes(&s.d(&big_t).unwrap()), "dT at t={}", t0);
        assert!(form_vanishes(&s.codiff(&big_t).unwrap()), "deltaT at t={}", t0);
        // spec example: tau1 coefficient at t=2 is 3/32
        if t0 == 2.0 {
            assert!((tor.tau1.coeff_at(&[1]).eval(t0) - 3.0 / 32.0).abs() < 1e-12);
        }
    }
}

#[test]
fn nil61_torsionfree_parametric() {
    let entries = entries();
    let e = find(&entries, "nil61_torsionfree").unwrap();
    for &t0 in &[0.5f64, 1.0, 2.0, 5.0] {
        let s = e.g2_at(t0).unwrap();
        let tor = s.torsion().unwrap();
        assert!(scalar_vanishes(&tor.tau0), "tau0 at t={}", t0);
        assert!(form_vanishes(&tor.tau1), "tau1 at t={}", t0);
        assert!(form_vanishes(&tor.tau2), "tau2 at t={}", t0);
        assert!(form_vanishes(&tor.tau3), "tau3 at t={}", t0);
    }
}

#[test]
fn nil62_parametric_values() {
    let entries = entries();
    let e = find(&entries, "nil62_nonharmonic").unwrap();
    for &t0 in &[0.5f64, 1.0, 1.5] {
        let s = e.g2_at(t0).unwrap();
        let tor = s.torsion().unwrap();
        assert!(scalar_vanishes(&tor.tau0));
        assert!(form_vanishes(&tor.tau2));
        let want_tau1 = e.expected_form("tau1", 1).unwrap().to_jet(t0);
        assert_form_eq_tol("nil62", "tau1", &tor.tau1, &want_tau1, 1e-10);
        let want_tau3 = e.expected_form("tau3", 3).unwrap().to_jet(t0);
        assert_form_eq_tol("nil62", "tau3", &tor.tau3, &want_tau3, 1e-10);
        let big_t = s.torsion_t().unwrap();
        assert!(form_vanishes(&s.d(&big_t).unwrap()), "dT at t={}", t0);
        let want_delta = e.expected_form("deltaT", 2).unwrap().to_jet(t0);
        assert_form_eq_tol(
            "nil62",
            "deltaT",
            &s.codiff(&big_t).unwrap(),
            &want_delta,
            1e-10,
        );
    }
}

#[test]
fn cyt_nilmanifold_su3_exact() {
    let entries = entries();
    let e = find(&entries, "nilmanifold_cyt").unwrap();
    let s = e.su3().unwrap();
    let t = s.torsion().unwrap();
    assert_eq!(t.sigma0, Scalar::frac(1, 2));
    assert!(t.pi0.is_zero());
    assert!(t.nu1.is_zero() && t.pi1.is_zero());
    assert!(t.pi2.is_zero() && t.sigma2.is_zero());
    assert_form_eq_exact(
        "nilmanifold_cyt",
        "nu3",
        &t.nu3,
        &e.expected_form("nu3", 3).unwrap(),
    );
    let big_t = s.torsion_t(&t).unwrap();
    assert_form_eq_exact(
        "nilmanifold_cyt",
        "T_omega",
        &big_t,
        &e.expected_form("T_omega", 3).unwrap(),
    );
    let dt = s.d(&big_t).unwrap();
    assert_form_eq_exact(
        "nilmanifold_cyt",
        "dT_omega",
        &dt,
        &e.expected_form("dT_omega", 4).unwrap(),
    );
    // Nijenhuis: formula equals the direct bracket computation, skew, nonzero
    let n = s.nijenhuis(&t).unwrap();
    let direct = s.nijenhuis_direct().unwrap();
    assert!(n.sub(&direct).is_skew_exact() && n.sub(&direct).to_form().is_zero());
    assert!(n.is_skew_exact());
    assert!(!n.to_form().is_zero());
}

#[test]
fn askt_s3s3_su3_exact() {
    let entries = entries();
    let e = find(&entries, "s3s3_askt").unwrap();
    let s = e.su3().unwrap();
    let t = s.torsion().unwrap();
    assert_eq!(t.sigma0, Scalar::int(-2));
    assert!(t.pi0.is_zero());
    assert!(t.nu1.is_zero() && t.pi1.is_zero());
    assert!(t.skew_nijenhuis());
    assert_form_eq_exact("s3s3_askt", "nu3", &t.nu3, &e.expected_form("nu3", 3).unwrap());
    let big_t = s.torsion_t(&t).unwrap();
    assert_form_eq_exact(
        "s3s3_askt",
        "T_omega",
        &big_t,
        &e.expected_form("T_omega", 3).unwrap(),
    );
    assert!(s.d(&big_t).unwrap().is_zero(), "dT_omega = 0 (almost SKT)");
    // N̂ = 4Ω⁻ from σ₀ = −2, π₀ = 0
    let nhat = s.nijenhuis_form(&t).unwrap();
    assert_form_eq_exact(
        "s3s3_askt",
        "nhat",
        &nhat,
        &s.omega_minus().scale(&Scalar::int(4)),
    );
    let flags = s.classify().unwrap();
    assert!(flags.almost_skt);
}

#[test]
fn skt_s3s3_su3_exact() {
    let entries = entries();
    let e = find(&entries, "s3s3_skt").unwrap();
    let s = e.su3().unwrap();
    let t = s.torsion().unwrap();
    assert!(t.skew_nijenhuis());
    // integrable: N̂ = 0
    let n = s.nijenhuis(&t).unwrap();
    assert!(n.to_form().is_zero() && n.is_skew_exact());
    assert_form_eq_exact("s3s3_skt", "nu1", &t.nu1, &e.expected_form("nu1", 1).unwrap());
    assert_form_eq_exact("s3s3_skt", "pi1", &t.pi1, &e.expected_form("pi1", 1).unwrap());
    // π₁ = 2ν₁
    assert_form_eq_exact(
        "s3s3_skt",
        "pi1 = 2 nu1",
        &t.pi1,
        &t.nu1.scale(&Scalar::int(2)),
    );
    let big_t = s.torsion_t(&t).unwrap();
    assert!(s.d(&big_t).unwrap().is_zero(), "SKT: dT_omega = 0");
    let flags = s.classify().unwrap();
    assert!(flags.hermitian && flags.almost_skt);
}

#[test]
fn nearly_kahler_s3s3() {
    let entries = entries();
    let e = find(&entries, "s3s3_nk").unwrap();
    let s = e.su3().unwrap();
    let t = s.torsion().unwrap();
    assert_eq!(t.sigma0, Scalar::int(-2));
    assert!(t.pi0.is_zero() && t.nu1.is_zero() && t.pi1.is_zero());
    assert!(t.nu3.is_zero());
    assert!(t.skew_nijenhuis());
    let big_t = s.torsion_t(&t).unwrap();
    // T_ω = −Ω⁻ and dT_ω = 2ω²
    assert_form_eq_exact("s3s3_nk", "T_omega", &big_t, &s.omega_minus().neg());
    let omega2 = s.omega().wedge(s.omega()).unwrap();
    assert_form_eq_exact(
        "s3s3_nk",
        "dT_omega",
        &s.d(&big_t).unwrap(),
        &omega2.scale(&Scalar::int(2)),
    );
    let flags = s.classify().unwrap();
    assert!(flags.nearly_kahler);
}

#[test]
fn strong_entries_have_constant_tau0() {
    // strong structures have dτ₀ = 0: exactly on constant frames, and the
    // symbolic derivative of the expected τ₀ vanishes on warped ones
    let entries = entries();
    for name in ["s3s3s1_c", "s3s3s1_askt", "s3t4"] {
        let e = find(&entries, name).unwrap();
        let s = e.g2().unwrap();
        let t = s.torsion().unwrap();
        let dtau0 = s
            .d(&torsionlab::form::Form::scalar(7, t.tau0.clone()))
            .unwrap();
        assert!(dtau0.is_zero(), "{}: dtau0", name);
    }
    for name in ["nil61_strong", "nil62_nonharmonic"] {
        let e = find(&entries, name).unwrap();
        for t0 in e.frame.sample_points() {
            let s = e.g2_at(t0).unwrap();
            let t = s.torsion().unwrap();
            let dtau0 = s
                .d(&torsionlab::form::Form::scalar(7, t.tau0.clone()))
                .unwrap();
            assert!(form_vanishes(&dtau0), "{} at t={}", name, t0);
        }
        // the expected τ₀ is the literal constant 0 here
        let expected = e.expected_scalar("tau0").unwrap();
        assert!(expected.derivative().is_zero());
    }
}

#[test]
fn g2_projection_completeness_all_grades() {
    use torsionlab::g2::Module;
    let entries = entries();
    let s = find(&entries, "s3s3s1_c").unwrap().g2().unwrap();
    let a3 = torsionlab::parse::parse_form("e^{123}-2*e^{456}+e^{145}", 7, 3).unwrap();
    let parts: Vec<_> = [Module::ThreeOne, Module::ThreeSeven, Module::ThreeTwentySeven]
        .iter()
        .map(|m| s.project(&a3, *m).unwrap())
        .collect();
    let sum = parts[0].add(&parts[1]).unwrap().add(&parts[2]).unwrap();
    assert_eq!(sum, a3);
    for i in 0..3 {
        for j in (i + 1)..3 {
            assert!(parts[i].inner(&parts[j]).unwrap().is_zero());
        }
    }
    let a4 = a3.hodge();
    let parts: Vec<_> = [Module::FourOne, Module::FourSeven, Module::FourTwentySeven]
        .iter()
        .map(|m| s.project(&a4, *m).unwrap())
        .collect();
    let sum = parts[0].add(&parts[1]).unwrap().add(&parts[2]).unwrap();
    assert_eq!(sum, a4);
    let a5 = torsionlab::parse::parse_form("e^{12345}-3*e^{13457}", 7, 5).unwrap();
    let p7 = s.project(&a5, Module::FiveSeven).unwrap();
    let p14 = s.project(&a5, Module::FiveFourteen).unwrap();
    assert_eq!(p7.add(&p14).unwrap(), a5);
    assert!(p7.inner(&p14).unwrap().is_zero());
}

#[test]
fn closed_lee_form_sigma0_formula() {
    // on product reductions with closed Lee form, σ₀ = (1/6)⋆(dΩ⁻ ∧ ω)
    let entries = entries();
    for name in ["s3s3_skt", "s3s3_askt", "nilmanifold_cyt", "flat_t6"] {
        let s = find(&entries, name).unwrap().su3().unwrap();
        let t = s.torsion().unwrap();
        let dminus = s.d(s.omega_minus()).unwrap();
        let value = dminus
            .wedge(s.omega())
            .unwrap()
            .hodge()
            .coeff(0)
            .mul(&Scalar::frac(1, 6));
        assert!(t.sigma0.sub(&value).is_zero(), "{}", name);
    }
}

/// Every `expected` key declared in the catalog is checked mechanically
/// against the computed quantity: exactly on constant frames, at the five
/// sample points otherwise.
#[test]
fn all_catalog_expectations_hold() {
    let entries = entries();
    for e in &entries {
        let keys: Vec<String> = e.expected.keys().cloned().collect();
        if keys.is_empty() {
            continue;
        }
        let samples: Vec<Option<f64>> = if e.is_parametric() {
            e.frame.sample_points().into_iter().map(Some).collect()
        } else {
            vec![None]
        };
        for t0 in samples {
            check_expectations(e, t0, &keys);
        }
    }
}

fn check_expectations(e: &CatalogEntry, t0: Option<f64>, keys: &[String]) {
    let tol = 1e-10;
    let compare_form = |name: &str, got: &Form, grade: u8| {
        let want = match (e.expected_form(name, grade), t0) {
            (Some(w), Some(t)) => w.to_jet(t),
            (Some(w), None) => w,
            (None, _) => panic!("{}: expected {} does not parse", e.name, name),
        };
        let diff = got.sub(&want).unwrap();
        if t0.is_none() {
            assert!(diff.is_zero(), "{}: {} mismatch (exact)", e.name, name);
        } else {
            assert!(
                diff.max_abs_coeff() <= tol,
                "{}: {} residual {:.3e} at t={:?}",
                e.name,
                name,
                diff.max_abs_coeff(),
                t0
            );
        }
    };
    let compare_scalar = |name: &str, got: &Scalar| {
        let want = e.expected_scalar(name).unwrap();
        let diff = got.sub(&want);
        if t0.is_none() {
            assert!(diff.is_zero(), "{}: {} mismatch", e.name, name);
        } else {
            assert!(
                diff.eval(t0.unwrap()).abs() <= tol,
                "{}: {} at t={:?}",
                e.name,
                name,
                t0
            );
        }
    };
    if e.g2_form.is_some() {
        let s = match t0 {
            Some(t) => e.g2_at(t).unwrap(),
            None => e.g2().unwrap(),
        };
        let tor = s.torsion().unwrap();
        for key in keys {
            match key.as_str() {
                "tau0" => compare_scalar("tau0", &tor.tau0),
                "tau1" => compare_form("tau1", &tor.tau1, 1),
                "tau2" => compare_form("tau2", &tor.tau2, 2),
                "tau3" => compare_form("tau3", &tor.tau3, 3),
                "dtau1" => compare_form("dtau1", &s.d(&tor.tau1).unwrap(), 2),
                "T" => compare_form("T", &s.torsion_t().unwrap(), 3),
                "dT" => {
                    let t_form = s.torsion_t().unwrap();
                    compare_form("dT", &s.d(&t_form).unwrap(), 4)
                }
                "deltaT" => {
                    let t_form = s.torsion_t().unwrap();
                    compare_form("deltaT", &s.codiff(&t_form).unwrap(), 2)
                }
                other => panic!("{}: unhandled expectation '{}'", e.name, other),
            }
        }
    } else if e.su3_forms.is_some() {
        let s = e.su3().unwrap();
        let tor = s.torsion().unwrap();
        for key in keys {
            match key.as_str() {
                "sigma0" => compare_scalar("sigma0", &tor.sigma0),
                "pi0" => compare_scalar("pi0", &tor.pi0),
                "nu1" => compare_form("nu1", &tor.nu1, 1),
                "pi1" => compare_form("pi1", &tor.pi1, 1),
                "nu3" => compare_form("nu3", &tor.nu3, 3),
                "T_omega" => compare_form("T_omega", &s.torsion_t(&tor).unwrap(), 3),
                "dT_omega" => {
                    let t_form = s.torsion_t(&tor).unwrap();
                    compare_form("dT_omega", &s.d(&t_form).unwrap(), 4)
                }
                "rhoB" => compare_form("rhoB", &s.rho_b_predicted(&tor).unwrap(), 2),
                other => panic!("{}: unhandled expectation '{}'", e.name, other),
            }
        }
    }
}

#[test]
fn invalid_structures_are_rejected() {
    use torsionlab::frame::FrameAlgebra;
    use torsionlab::g2::{G2Error, G2Structure};
    use torsionlab::su3::{standard_su3_forms, SU3Error, SU3Structure};
    // a sign flip breaks metric compatibility of the G2 form
    let phi = torsionlab::parse::parse_form(
        "e^{123}+e^{145}+e^{167}+e^{246}-e^{257}-e^{347}+e^{356}",
        7,
        3,
    )
    .unwrap();
    assert!(matches!(
        G2Structure::new(FrameAlgebra::flat(7), phi),
        Err(G2Error::MetricIncompatible(_, _))
    ));
    // a rescaled Ω breaks the volume normalization
    let (omega, plus, minus) = standard_su3_forms();
    assert!(matches!(
        SU3Structure::new(
            FrameAlgebra::flat(6),
            omega.clone(),
            plus.scale(&Scalar::int(2)),
            minus.clone()
        ),
        Err(SU3Error::Invalid(_))
    ));
    // ω ∧ Ω⁺ ≠ 0 is rejected
    let bad_plus = plus
        .add(&torsionlab::parse::parse_form("e^{345}", 6, 3).unwrap())
        .unwrap();
    assert!(matches!(
        SU3Structure::new(FrameAlgebra::flat(6), omega, bad_plus, minus),
        Err(SU3Error::Invalid(_))
    ));
}
