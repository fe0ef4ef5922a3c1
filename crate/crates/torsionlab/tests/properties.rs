//! Property tests for the exterior kernel: antiderivation, the wedge/star
//! pairing identity, star isometry, exact scalar differentiation, parser
//! round trips, Leibniz on frame derivatives, and coframe-change inverses.

use proptest::prelude::*;
use torsionlab::catalog::{find, load_catalog_str, DEFAULT_CATALOG};
use torsionlab::form::Form;
use torsionlab::linalg::invert;
use torsionlab::parse::{parse_scalar, render_form, render_scalar};
use torsionlab::scalar::{Radical, Scalar};

/// Random rational-coefficient form of the given shape.
fn arb_form(dim: u8, grade: u8) -> impl Strategy<Value = Form> {
    let masks: Vec<u16> = (0..(1u32 << dim) as u16)
        .filter(|m| m.count_ones() as u8 == grade)
        .collect();
    let n = masks.len();
    proptest::collection::vec((-6i64..=6, 1i64..=4), n).prop_map(move |coeffs| {
        let mut f = Form::zero(dim, grade);
        for (mask, (num, den)) in masks.iter().zip(coeffs) {
            f.add_term(*mask, Scalar::frac(num, den));
        }
        f
    })
}

/// A pair of forms with a common random shape, n ∈ {6, 7}.
fn form_pair() -> impl Strategy<Value = (Form, Form)> {
    prop_oneof![Just(6u8), Just(7u8)]
        .prop_flat_map(|d| (Just(d), 0..=d))
        .prop_flat_map(|(d, g)| (arb_form(d, g), arb_form(d, g)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    /// a ∧ ⋆b = ⟨a,b⟩ vol, exactly, for every grade and n ∈ {6,7}.
    #[test]
    fn wedge_star_pairing((a, b) in form_pair()) {
        let lhs = a.wedge(&b.hodge()).unwrap();
        let rhs = Form::volume(a.dim()).scale(&a.inner(&b).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    /// ⟨⋆a, ⋆b⟩ = ⟨a, b⟩ exactly.
    #[test]
    fn star_is_isometry((a, b) in form_pair()) {
        prop_assert_eq!(
            a.hodge().inner(&b.hodge()).unwrap(),
            a.inner(&b).unwrap()
        );
    }

    /// contract(i, a∧b) = contract(i,a)∧b + (−1)^|a| a∧contract(i,b), exact.
    #[test]
    fn contraction_is_antiderivation(
        (ga, a) in (1u8..=3).prop_flat_map(|g| (Just(g), arb_form(7, g))),
        b in (1u8..=3).prop_flat_map(|g| arb_form(7, g)),
        i in 1u8..=7,
    ) {
        let w = a.wedge(&b).unwrap();
        let lhs = w.contract(i).unwrap();
        let term1 = a.contract(i).unwrap().wedge(&b).unwrap();
        let term2 = a.wedge(&b.contract(i).unwrap()).unwrap();
        let rhs = if ga % 2 == 0 {
            term1.add(&term2).unwrap()
        } else {
            term1.sub(&term2).unwrap()
        };
        prop_assert_eq!(lhs, rhs);
    }

    /// Exact differentiation matches centered finite differences.
    #[test]
    fn derivative_matches_finite_differences(num in -5i64..=5, den in 1i64..=3,
                                             pow in 1i32..=3) {
        let t = Scalar::param();
        // q·t^pow + sqrt(t)/(1 + t^2), a representative of the grammar
        let x = Scalar::frac(num, den)
            .mul(&t.powi(pow).unwrap())
            .add(&t.sqrt().unwrap().div(&Scalar::one().add(&t.powi(2).unwrap())).unwrap());
        let dx = x.derivative();
        let h = 1e-6;
        for k in 1..=10 {
            let t0 = 0.5 + 0.45 * k as f64;
            let fd = (x.eval(t0 + h) - x.eval(t0 - h)) / (2.0 * h);
            let exact = dx.eval(t0);
            let scale = exact.abs().max(1.0);
            prop_assert!((fd - exact).abs() / scale < 1e-8,
                "at t={}: fd={} exact={}", t0, fd, exact);
        }
    }

    /// print ∘ parse is the identity on rendered forms.
    #[test]
    fn form_print_parse_round_trip(a in (1u8..=4).prop_flat_map(|g| arb_form(7, g))) {
        let printed = render_form(&a);
        let reparsed = torsionlab::parse::parse_form(&printed, 7, a.grade()).unwrap();
        prop_assert_eq!(a, reparsed);
    }

    /// d is a graded derivation on catalog frames (exact).
    #[test]
    fn exterior_derivative_leibniz(
        (ga, a) in (1u8..=2).prop_flat_map(|g| (Just(g), arb_form(7, g))),
        b in (1u8..=2).prop_flat_map(|g| arb_form(7, g)),
        which in 0usize..3,
    ) {
        let entries = load_catalog_str(DEFAULT_CATALOG).unwrap();
        let names = ["s3s3s1_c", "s3t4", "nilcyt_s1"];
        let frame = &find(&entries, names[which]).unwrap().frame;
        let lhs = frame.d(&a.wedge(&b).unwrap()).unwrap();
        let da_b = frame.d(&a).unwrap().wedge(&b).unwrap();
        let a_db = a.wedge(&frame.d(&b).unwrap()).unwrap();
        let rhs = if ga % 2 == 0 {
            da_b.add(&a_db).unwrap()
        } else {
            da_b.sub(&a_db).unwrap()
        };
        prop_assert_eq!(lhs, rhs);
    }

    /// Changing coframe and changing back is the identity on the structure
    /// table and on forms.
    #[test]
    fn coframe_change_round_trip(seed in 0u64..500, a in arb_form(7, 3)) {
        use rand::SeedableRng;
        let entries = load_catalog_str(DEFAULT_CATALOG).unwrap();
        let frame = &find(&entries, "nilcyt_s1").unwrap().frame;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let m = torsionlab::verify::random_coframe_matrix(&mut rng, 7);
        let minv = invert(&m).unwrap();
        let changed = frame.change_coframe(&m).unwrap();
        prop_assert!(changed.check_d_squared().exact_zero);
        let back = changed.change_coframe(&minv).unwrap();
        for i in 1..=7 {
            prop_assert_eq!(back.d_of_generator(i), frame.d_of_generator(i));
        }
        let there = frame.rewrite_form(&m, &a).unwrap();
        let and_back = changed.rewrite_form(&minv, &there).unwrap();
        prop_assert_eq!(and_back, a);
    }
}

#[test]
fn scalar_round_trip_on_radicals() {
    for scalar in [
        Scalar::frac(-3, 7),
        Scalar::Const(Radical::sqrt_term(
            num_rational::BigRational::new(2.into(), 3.into()),
            12,
        )),
        parse_scalar("1/2+sqrt(2)").unwrap(),
        parse_scalar("sqrt(4-t^2)/t^3").unwrap(),
    ] {
        let printed = render_scalar(&scalar);
        let reparsed = parse_scalar(&printed).unwrap();
        for t in [0.7, 1.3, 1.9] {
            assert!(
                (scalar.eval(t) - reparsed.eval(t)).abs() < 1e-13,
                "round trip of {}",
                printed
            );
        }
    }
}
