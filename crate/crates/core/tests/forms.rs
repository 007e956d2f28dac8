mod common;

use dqm_core::algebra::{bracket, lprod, GaloisField, KElem};
use dqm_core::expr::parse_form;
use dqm_core::forms::*;
use dqm_core::Context;

fn kc(p: dqm_core::algebra::ThetaPoly) -> KElem {
    KElem::from_poly(p)
}

#[test]
fn x_is_minus_e_g_minus_h() {
    for q in [2, 3] {
        let fam = Families::new(GaloisField::prime(q));
        let f = fam.field();
        for k in 0..=5 {
            let x = fam.get(SeqName::X, k).unwrap();
            let g = fam.get(SeqName::G, k).unwrap();
            let h = fam.get(SeqName::H, k).unwrap();
            let rhs = QMForm::gen_e(f).mul(&g).add(&h).neg();
            assert_eq!(*x, rhs, "q={q} k={k}");
        }
    }
}

#[test]
fn x_and_y_recursions() {
    for q in [2, 3, 5] {
        let fam = Families::new(GaloisField::prime(q));
        let f = fam.field();
        for k in 1..=3 {
            let x = fam.get(SeqName::X, k).unwrap();
            let y = fam.get(SeqName::Y, k).unwrap();
            let xn = fam.get(SeqName::X, k + 1).unwrap();
            let yn = fam.get(SeqName::Y, k + 1).unwrap();
            let g = QMForm::gen_g(f).frobenius(k);
            assert_eq!(*xn, x.mul(&g).sub(&y.scale(&kc(bracket(f, k)))), "x recursion q={q} k={k}");
            assert_eq!(*yn, QMForm::delta(f).frobenius(k).mul(&x), "y recursion q={q} k={k}");
        }
    }
}

#[test]
fn xi_quadratic_identity() {
    for q in [2, 3, 5] {
        let fam = Families::new(GaloisField::prime(q));
        let f = fam.field();
        let kmax = if q == 5 { 1 } else { 2 };
        for k in 0..=kmax {
            let xi = fam.get(SeqName::Xi, k).unwrap();
            let x0 = fam.get(SeqName::X, k).unwrap();
            let x1 = fam.get(SeqName::X, k + 1).unwrap();
            let x2 = fam.get(SeqName::X, k + 2).unwrap();
            let lhs = QMForm::delta(f).frobenius(k).mul(&xi).neg();
            let rhs = x1.pow(q as u64 + 1).sub(&x0.frobenius(1).mul(&x2));
            assert_eq!(lhs, rhs, "q={q} k={k}");
        }
    }
}

#[test]
fn gradings_of_families() {
    for q in [2, 3, 5] {
        let fam = Families::new(GaloisField::prime(q));
        let qi = q as i64;
        for k in 0..3u32 {
            let qk = qi.pow(k);
            let x = grading_of(&fam.get(SeqName::X, k).unwrap()).unwrap().unwrap();
            assert_eq!((x.w, x.m, x.l), (qk + 1, 1 % (qi - 1).max(1), 1));
            let xi = grading_of(&fam.get(SeqName::Xi, k).unwrap()).unwrap().unwrap();
            assert_eq!((xi.w, xi.l), ((qk + 1) * (qi + 1), qi + 1));
            assert_eq!(xi.m, 2 % (qi - 1).max(1));
            let eta = grading_of(&fam.get(SeqName::Eta, k).unwrap()).unwrap().unwrap();
            assert_eq!((eta.w, eta.l), (qi * (qk + 1), qi));
        }
    }
    let f = GaloisField::prime(3);
    let mixed = QMForm::gen_e(f).add(&QMForm::gen_h(f));
    assert_eq!(grading_of(&mixed).unwrap(), None);
    assert!(grading_of(&QMForm::zero(f)).is_err());
}

#[test]
fn x2_over_f3_matches_hand_expansion() {
    let f = GaloisField::prime(3);
    let fam = Families::new(f);
    let expect = parse_form(&fam, "-E*g^4+(-T^3+T)*E*h^2-g^3*h").unwrap();
    assert_eq!(*fam.get(SeqName::X, 2).unwrap(), expect);
    let xi0 = parse_form(&fam, "(-T^3+T)*E^4+E*g*h+h^2").unwrap();
    assert_eq!(*fam.get(SeqName::Xi, 0).unwrap(), xi0);
}

#[test]
fn vanishing_orders_of_x() {
    for (q, kmax) in [(2u32, 3u32), (3, 3), (5, 2)] {
        let ctx = Context::new(GaloisField::prime(q));
        let f = ctx.field();
        for k in 0..=kmax {
            let x = ctx.family(SeqName::X, k).unwrap();
            let (nu, c) = nu_infty(&ctx, &x, NuPolicy::for_form(&x, 1 << 12)).unwrap();
            assert_eq!(nu, q.pow(k) as usize, "q={q} k={k}");
            let mut lead = kc(lprod(f, k));
            if k % 2 == 0 {
                lead = lead.neg();
            }
            assert_eq!(c, lead, "leading coefficient q={q} k={k}");
        }
    }
}

#[test]
fn vanishing_orders_of_xi_and_eta() {
    for (q, kmax) in [(2u32, 2u32), (3, 2), (5, 1)] {
        let ctx = Context::new(GaloisField::prime(q));
        for k in 0..=kmax {
            let xi = ctx.family(SeqName::Xi, k).unwrap();
            let nu = nu_infty(&ctx, &xi, NuPolicy::for_form(&xi, 1 << 12)).unwrap().0;
            assert_eq!(nu, (q.pow(k + 2) + q.pow(k)) as usize, "xi q={q} k={k}");
            let eta = ctx.family(SeqName::Eta, k).unwrap();
            let nu = nu_infty(&ctx, &eta, NuPolicy::for_form(&eta, 1 << 12)).unwrap().0;
            assert_eq!(nu, (q.pow(k + 1) + q - 1) as usize, "eta q={q} k={k}");
        }
    }
}

#[test]
fn resultant_of_consecutive_x() {
    for q in [2, 3] {
        let fam = Families::new(GaloisField::prime(q));
        let f = fam.field();
        for k in 0..=3u32 {
            let g0 = fam.get(SeqName::G, k).unwrap();
            let h0 = fam.get(SeqName::H, k).unwrap();
            let g1 = fam.get(SeqName::G, k + 1).unwrap();
            let h1 = fam.get(SeqName::H, k + 1).unwrap();
            let rho = g0.mul(&h1).sub(&h0.mul(&g1));
            let mut c = kc(lprod(f, k));
            if k % 2 == 1 {
                c = c.neg();
            }
            let expect = QMForm::gen_h(f).frobenius(k).scale(&c);
            assert_eq!(rho, expect, "q={q} k={k}");
            let x0 = fam.get(SeqName::X, k).unwrap();
            let x1 = fam.get(SeqName::X, k + 1).unwrap();
            assert_eq!(resultant_in_e(&x0, &x1).unwrap(), expect);
        }
    }
}

#[test]
fn bareiss_matches_cofactor_expansion() {
    let f = GaloisField::prime(3);
    let mut r = common::rng(7);
    let m: Vec<Vec<QMForm>> = (0..3).map(|_| (0..3).map(|_| common::rand_form(f, &mut r, 2, 1)).collect()).collect();
    let cof = m[0][0].mul(&m[1][1].mul(&m[2][2]).sub(&m[1][2].mul(&m[2][1])))
        .sub(&m[0][1].mul(&m[1][0].mul(&m[2][2]).sub(&m[1][2].mul(&m[2][0]))))
        .add(&m[0][2].mul(&m[1][0].mul(&m[2][1]).sub(&m[1][1].mul(&m[2][0]))));
    assert_eq!(bareiss_det(m).unwrap(), cof);
}

#[test]
fn exact_division() {
    for q in [2, 3, 5] {
        let f = GaloisField::prime(q);
        let mut r = common::rng(q as u64);
        for _ in 0..30 {
            let a = common::rand_form(f, &mut r, 4, 2);
            let b = common::rand_form(f, &mut r, 4, 2);
            assert_eq!(divides(&b, &a.mul(&b)).unwrap(), Some(a.clone()));
            let c = a.mul(&b).add(&QMForm::gen_e(f).pow(7));
            if let Some(qt) = divides(&b, &c).unwrap() {
                assert_eq!(qt.mul(&b), c);
            }
        }
        let e = QMForm::gen_e(f);
        assert_eq!(divides(&e, &QMForm::gen_g(f)).unwrap(), None);
        assert!(divides(&QMForm::zero(f), &e).is_err());
    }
}

#[test]
fn serialization_round_trips() {
    let f = GaloisField::prime(5);
    let mut r = common::rng(11);
    for _ in 0..20 {
        let a = common::rand_form(f, &mut r, 5, 3).mul_h_pow(-2);
        let json = serde_json::to_string(&a).unwrap();
        let back: QMForm = serde_json::from_str(&json).unwrap();
        assert_eq!(back, a);
        assert_eq!(QMForm::from_raw(f, &a.to_raw()).unwrap(), a);
    }
    let x = QMForm::gen_e(f).add(&QMForm::gen_h(f).scale(&KElem::theta(f)));
    let v = x.to_json();
    assert_eq!(v["terms"].as_array().unwrap().len(), 2);
    assert_eq!(v["q"]["p"], 5);
}

mod homomorphism {
    use super::common;
    use dqm_core::algebra::GaloisField;
    use dqm_core::forms::evaluate;
    use dqm_core::Context;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]
        #[test]
        fn evaluation_respects_ring_operations(seed in any::<u64>(), qi in 0usize..3) {
            let q = [2u32, 3, 5][qi];
            let ctx = Context::new(GaloisField::prime(q));
            let f = ctx.field();
            let mut r = common::rng(seed);
            let a = common::rand_form(f, &mut r, 4, 2);
            let b = common::rand_form(f, &mut r, 4, 2);
            let n = 3 * q as usize * q as usize;
            let (sa, sb) = (evaluate(&ctx, &a, n).unwrap(), evaluate(&ctx, &b, n).unwrap());
            prop_assert_eq!(evaluate(&ctx, &a.add(&b), n).unwrap(), sa.add(&sb).truncate(n));
            prop_assert_eq!(evaluate(&ctx, &a.mul(&b), n).unwrap(), sa.mul_trunc(&sb, n));
            prop_assert_eq!(evaluate(&ctx, &a.frobenius(1), n).unwrap(), sa.frobenius(1, n));
        }
    }
}
