mod common;

use dqm_core::algebra::{binom_char_p, bracket, GaloisField, KElem};
use dqm_core::expr::parse_form;
use dqm_core::forms::*;
use dqm_core::hyperderive::*;
use dqm_core::Context;

fn ctx(q: u32) -> Context {
    Context::new(GaloisField::prime(q))
}

fn form(c: &Context, s: &str) -> QMForm {
    parse_form(c.families(), s).unwrap()
}

/// Polynomial in `X` from its coefficients, modulo `X^n`.
fn poly(c: &Context, coeffs: Vec<QMForm>, n: usize) -> TaylorPoly {
    TaylorPoly::from_coeffs(c.field(), coeffs, n)
}

/// `1/(1 − a X^k)` modulo `X^n`.
fn geometric(c: &Context, a: &QMForm, k: usize, n: usize) -> TaylorPoly {
    let mut v = vec![QMForm::zero(c.field()); n];
    let mut i = 0;
    while i * k < n {
        v[i * k] = a.pow(i as u64);
        i += 1;
    }
    poly(c, v, n)
}

#[test]
fn first_approximation() {
    for q in [2u32, 3] {
        let c = ctx(q);
        let f = c.field();
        let qs = q as usize;
        let delta = QMForm::delta(f);
        let t1 = taylor_of(&c, &delta, qs).unwrap();
        let e = QMForm::gen_e(f);
        assert_eq!(t1, poly(&c, vec![delta.clone(), delta.mul(&e).neg()], qs), "T_X,1(Δ), q={q}");
        for s in 1..=3u32 {
            let gs = c.family(SeqName::G, s).unwrap();
            let xs = c.family(SeqName::X, s).unwrap();
            let n = qs.pow(s);
            assert_eq!(taylor_of(&c, &gs, n).unwrap(), poly(&c, vec![gs.clone(), xs.clone()], n), "q={q} s={s}");
            // T_{X,s+1}(g_s) = (g_s + x_s X)/(1 − E^{q^s} X^{q^s})
            let n1 = n * qs;
            let rhs = poly(&c, vec![gs.clone(), xs.clone()], n1).mul(&geometric(&c, &e.pow(n as u64), n, n1));
            assert_eq!(taylor_of(&c, &gs, n1).unwrap(), rhs, "q={q} s={s} second");
        }
    }
}

#[test]
fn second_approximation_of_delta() {
    for q in [2u32, 3, 5] {
        let c = ctx(q);
        let f = c.field();
        let qs = q as usize;
        let n = qs * qs;
        let b1 = KElem::from_poly(bracket(f, 1)).inv().unwrap();
        let e = QMForm::gen_e(f);
        let mut v = vec![QMForm::zero(f); n];
        v[0] = QMForm::one(f);
        v[1] = e.neg();
        v[qs] = form(&c, "g*h").scale(&b1).sub(&e.pow(q as u64));
        if qs + 1 < n {
            v[qs + 1] = e.pow(q as u64 + 1).sub(&form(&c, "E*g*h+h^2").scale(&b1));
        }
        let rhs = poly(&c, v, n).mul(&geometric(&c, &e.pow(q as u64), qs, n)).mul_form(&QMForm::delta(f));
        assert_eq!(taylor_of(&c, &QMForm::delta(f), n).unwrap(), rhs, "q={q}");
        // inverse modulo X^{q+1}
        let m = qs + 1;
        let mut w: Vec<QMForm> = (0..qs).map(|i| e.pow(i as u64)).collect();
        w.push(e.pow(q as u64).sub(&form(&c, "g*h").scale(&b1)));
        let rhs = poly(&c, w, m).mul_form(&QMForm::delta(f).inverse_unit().unwrap());
        let lhs = taylor_of(&c, &QMForm::delta(f), m).unwrap().inverse().unwrap();
        assert_eq!(lhs, rhs, "T_X,2(Δ^-1), q={q}");
    }
}

#[test]
fn formulas_for_g_s_and_x_s() {
    for (q, smax) in [(2u32, 2u32), (3, 2)] {
        let c = ctx(q);
        let f = c.field();
        let e = QMForm::gen_e(f);
        for s in 1..=smax {
            let qs = q.pow(s) as usize;
            let top = qs * q as usize;
            let n = top + 2;
            let gs = c.family(SeqName::G, s).unwrap();
            let xs = c.family(SeqName::X, s).unwrap();
            let g1 = c.family(SeqName::G, s + 1).unwrap();
            let x1 = c.family(SeqName::X, s + 1).unwrap();
            let hq = QMForm::gen_h(f).frobenius(s);
            let gq = QMForm::gen_g(f).frobenius(s);
            let bs = KElem::from_poly(bracket(f, s + 1)).inv().unwrap();
            let b1 = KElem::from_poly(bracket(f, 1).frobenius(s)).inv().unwrap();
            let corr = |a: &QMForm, b: &QMForm| hq.mul(&a.scale(&bs).neg().add(&gq.mul(b).scale(&b1)));
            let geo = geometric(&c, &e.pow(qs as u64), qs, n);
            let mut v = vec![QMForm::zero(f); n];
            v[top] = corr(&g1, &gs).neg();
            v[top + 1] = corr(&x1, &xs).neg();
            let rhs = poly(&c, vec![gs.clone(), xs.clone()], n).mul(&geo).add(&poly(&c, v, n));
            assert_eq!(taylor_of(&c, &gs, n).unwrap(), rhs, "T_X(g_{s}) q={q}");
            let m = top + 1;
            let mut w = vec![QMForm::zero(f); m];
            w[top] = corr(&x1, &xs).neg();
            let rhs = geometric(&c, &e.pow(qs as u64), qs, m).mul_form(&xs).add(&poly(&c, w, m));
            assert_eq!(taylor_of(&c, &xs, m).unwrap(), rhs, "T_X(x_{s}) q={q}");
        }
    }
}

#[test]
fn stage_advance_matches_closed_form() {
    for q in [2u32, 3] {
        let c = ctx(q);
        let f = c.field();
        let st0 = StageState::initial(c.families(), 3, 1 << 10).unwrap();
        for s in 1..=3 {
            let gs = c.family(SeqName::G, s).unwrap();
            let xs = c.family(SeqName::X, s).unwrap();
            let n = (q as usize).pow(s);
            assert_eq!(*st0.ladder(s).unwrap(), poly(&c, vec![gs, xs], n));
        }
        let st1 = st0.advance().unwrap();
        let e = QMForm::gen_e(f);
        for s in 1..=2u32 {
            let n = (q as usize).pow(s + 1);
            let gs = c.family(SeqName::G, s).unwrap();
            let xs = c.family(SeqName::X, s).unwrap();
            let k = n / q as usize;
            let rhs = poly(&c, vec![gs, xs], n).mul(&geometric(&c, &e.pow(k as u64), k, n));
            assert_eq!(*st1.ladder(s).unwrap(), rhs, "q={q} s={s}");
        }
    }
}

#[test]
fn delta_inverse_by_products_matches_series_inverse() {
    for q in [2u32, 3] {
        let c = ctx(q);
        let mut st = StageState::initial(c.families(), 4, 1 << 10).unwrap();
        for _ in 0..3 {
            let by_products = st.delta_inverse().unwrap();
            let direct = st.delta().inverse().unwrap();
            assert_eq!(by_products, direct, "q={q} stage {}", st.r());
            st = st.advance().unwrap();
        }
    }
}

#[test]
fn known_first_derivatives() {
    for q in [2u32, 3, 5] {
        let c = ctx(q);
        let f = c.field();
        let (e, h) = (QMForm::gen_e(f), QMForm::gen_h(f));
        assert_eq!(dn(&c, &e, 1).unwrap(), e.pow(2));
        assert_eq!(dn(&c, &h, 1).unwrap(), e.mul(&h));
        let delta = QMForm::delta(f);
        assert_eq!(dn(&c, &delta, 1).unwrap(), e.mul(&delta).neg());
        for k in 1..=2u32 {
            let x = c.family(SeqName::X, k).unwrap();
            for n in 1..(q as usize).pow(k) {
                assert!(dn(&c, &x, n).unwrap().is_zero(), "D_{n} x_{k}, q={q}");
            }
            let g = c.family(SeqName::G, k).unwrap();
            if q != 2 || k >= 2 {
                for n in 2..(q as usize).pow(k) {
                    assert!(dn(&c, &g, n).unwrap().is_zero(), "D_{n} g_{k}, q={q}");
                }
            }
        }
        // D_{iq^k−1}E = E^{iq^k}
        for k in 0..=1u32 {
            for i in 1..q {
                let n = (i * q.pow(k)) as usize;
                assert_eq!(dn(&c, &e, n - 1).unwrap(), e.pow(n as u64), "q={q} i={i} k={k}");
            }
        }
    }
}

#[test]
fn iterativity_and_leibniz() {
    for q in [2u32, 3] {
        let c = ctx(q);
        let f = c.field();
        let p = f.p();
        let mut r = common::rng(100 + q as u64);
        let nmax = (q * q) as usize;
        for _ in 0..4 {
            let a = common::rand_form(f, &mut r, 3, 2);
            let b = common::rand_form(f, &mut r, 3, 2);
            let ta = taylor_of(&c, &a, nmax + 1).unwrap();
            let tb = taylor_of(&c, &b, nmax + 1).unwrap();
            let tab = taylor_of(&c, &a.mul(&b), nmax + 1).unwrap();
            assert_eq!(tab, ta.mul(&tb));
            for i in 1..=3usize {
                for j in 1..=nmax - i {
                    let lhs = dn(&c, &dn(&c, &a, j).unwrap(), i).unwrap();
                    let bin = binom_char_p((i + j) as i64, i as u64, p) as i64;
                    let rhs = ta.coeff(i + j).unwrap().scale(&KElem::from_int(f, bin));
                    assert_eq!(lhs, rhs, "D_{i} D_{j}, q={q}");
                }
            }
        }
    }
}

#[test]
fn symbolic_derivatives_match_series_oracle() {
    for q in [2u32, 3] {
        let c = ctx(q);
        let f = c.field();
        let prec = (q * q * q) as usize;
        let goss = c.goss(prec + 1);
        let mut r = common::rng(7 * q as u64);
        for _ in 0..5 {
            let a = common::rand_form(f, &mut r, 3, 2);
            let s = evaluate(&c, &a, prec).unwrap();
            for n in [1, q as usize, (q * q) as usize - 1, (q * q) as usize] {
                let sym = evaluate(&c, &dn(&c, &a, n).unwrap(), prec).unwrap();
                assert_eq!(sym, dn_on_useries(&goss, &s, n).unwrap(), "{a}, n={n}, q={q}");
            }
        }
    }
}

#[test]
fn serre_operators_preserve_depth() {
    for q in [2u32, 3] {
        let c = ctx(q);
        let f = c.field();
        let qi = q as i64;
        let mut r = common::rng(31 * q as u64);
        for (w, m, l) in [(2 * qi + 2, 0, 1), (qi * qi + 1, 1, 2), (2 * qi + 2, 0, 2)] {
            if dqm_core::extremal::basis(q, w, m, l).is_empty() {
                continue;
            }
            let a = common::rand_graded(f, &mut r, w, m, l);
            let d = w - grading_of(&a).unwrap().unwrap().l;
            for n in 1..=(q * q) as usize {
                let s = serre_partial(&c, &a, n, d).unwrap();
                if !s.is_zero() {
                    assert!(s.e_degree() as i64 <= l, "depth grew: n={n} ({w},{m},{l}) q={q}");
                    let g = grading_of(&s).unwrap().unwrap();
                    assert_eq!(g.w, w + 2 * n as i64);
                }
            }
        }
    }
}

#[test]
fn x_k_is_killed_by_serre_operators() {
    for q in [2u32, 3] {
        let c = ctx(q);
        for k in 0..=1u32 {
            let x = c.family(SeqName::X, k).unwrap();
            let d = q.pow(k) as i64;
            for n in 1..(q.pow(k + 1) as usize) {
                assert!(serre_partial(&c, &x, n, d).unwrap().is_zero(), "q={q} k={k} n={n}");
            }
        }
    }
}

#[test]
fn h_k_from_serre_on_g_k() {
    for q in [2u32, 3] {
        let c = ctx(q);
        for k in 1..=3u32 {
            let g = c.family(SeqName::G, k).unwrap();
            let h = c.family(SeqName::H, k).unwrap();
            let d = q.pow(k) as i64 - 1;
            assert_eq!(serre_partial(&c, &g, 1, d).unwrap(), h.neg(), "q={q} k={k}");
        }
    }
}

#[test]
fn e_derivation_commutes_as_stated() {
    let q = 3u32;
    let c = ctx(q);
    let f = c.field();
    let p = f.p();
    let mut r = common::rng(5);
    let a = common::rand_graded(f, &mut r, 8, 0, 3);
    let w = grading_of(&a).unwrap().unwrap().w;
    for n in 0..=4usize {
        let dna = dn(&c, &a, n).unwrap();
        for j in 0..=3u32 {
            let lhs = partial_e(&dna, j);
            let mut rhs = QMForm::zero(f);
            for rr in 0..=n.min(j as usize) {
                let top = w + n as i64 - j as i64 + rr as i64 - 1;
                let b = binom_char_p(top, rr as u64, p) as i64;
                if b != 0 {
                    let t = dn(&c, &partial_e(&a, j - rr as u32), n - rr).unwrap();
                    rhs = rhs.add(&t.scale(&KElem::from_int(f, b)));
                }
            }
            assert_eq!(lhs, rhs, "n={n} j={j}");
        }
    }
}

#[test]
fn e_derivation_detects_depth() {
    let f = GaloisField::prime(3);
    let fam = Families::new(f);
    let xi = fam.get(SeqName::Xi, 1).unwrap();
    assert!(!partial_e(&xi, 4).is_zero());
    assert!(partial_e(&xi, 5).is_zero());
    let e = QMForm::gen_e(f);
    assert_eq!(partial_e(&e.pow(3), 1), e.pow(2).scale(&KElem::from_int(f, 3)));
}

#[test]
fn quotients_by_powers_of_h() {
    // D_n f / f = D_n(h^ν)/h^ν below p^{ε_D(f)}
    for q in [2u32, 3] {
        let c = ctx(q);
        let f = c.field();
        for k in 0..=1u32 {
            let x = c.family(SeqName::X, k).unwrap();
            let nu = q.pow(k) as u64;
            let hn = QMForm::gen_h(f).pow(nu);
            for n in 0..(q.pow(k + 1) as usize) {
                let lhs = dn(&c, &x, n).unwrap().mul(&hn);
                let rhs = dn(&c, &hn, n).unwrap().mul(&x);
                assert_eq!(lhs, rhs, "q={q} k={k} n={n}");
            }
        }
    }
}

#[test]
fn differential_exponents() {
    for q in [2u32, 3] {
        let c = ctx(q);
        let f = c.field();
        for k in 0..=1u32 {
            let x = c.family(SeqName::X, k).unwrap();
            assert_eq!(differential_exponent(&c, &x, 6).unwrap(), EpsilonReport::Exact(k + 1));
            let xp = x.pow(f.p() as u64);
            assert_eq!(differential_exponent(&c, &xp, 6).unwrap(), EpsilonReport::Exact(k + 2));
            let eta = c.family(SeqName::Eta, k).unwrap();
            assert_eq!(differential_exponent(&c, &eta, 4).unwrap(), EpsilonReport::Exact(0));
        }
        let h3 = QMForm::gen_h(f).pow(3).scale(&KElem::theta(f));
        assert_eq!(differential_exponent(&c, &h3, 4).unwrap(), EpsilonReport::Infinite);
        let e = QMForm::gen_e(f).pow(f.p() as u64);
        assert_eq!(differential_exponent(&c, &e, 1).unwrap(), EpsilonReport::AtLeast(1));
        assert!(differential_exponent(&c, &QMForm::zero(f), 3).is_err());
    }
}

#[test]
fn hecke_eigenform_candidates() {
    for q in [2u32, 3, 5] {
        let c = ctx(q);
        let f = c.field();
        let h = QMForm::gen_h(f);
        let n = (q * q - q) as usize;
        let dh = dn(&c, &h, n).unwrap();
        let b1 = KElem::from_poly(bracket(f, 1)).pow(-(q as i64 - 1)).unwrap();
        let expect = QMForm::gen_g(f).pow(q as u64 - 1).mul(&h.pow(q as u64)).scale(&b1);
        assert_eq!(dh, expect, "q={q}");
        assert_eq!(dh.e_degree(), 0);
        let delta = QMForm::delta(f);
        let dd = dn(&c, &delta, q as usize).unwrap();
        assert_eq!(dd.e_degree(), 0);
        let cands = hecke_candidates(&c, q as i64 + 1, 1, Some(&h)).unwrap();
        assert!(!cands.is_empty());
        for cand in cands {
            assert!(cand.binomials_vanish, "n={} q={q}", cand.n);
            assert_eq!(cand.serre_agrees, Some(true));
            assert_eq!(cand.dn.unwrap().e_degree(), 0);
        }
    }
    let c = ctx(3);
    assert!(hecke_candidates(&c, 1, 2, None).is_err());
    assert!(hecke_candidates(&c, 4, 2, Some(&QMForm::gen_e(c.field()))).is_err());
}

#[test]
fn tables_cache_round_trip_and_recovery() {
    let dir = std::env::temp_dir().join(format!("dqm-cache-test-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    let f = GaloisField::prime(3);
    let first = Context::new(f).with_cache_dir(&dir);
    let t = first.taylor(10).unwrap();
    let path = dqm_core::hyperderive::tables::cache_path(&dir, f, t.xprec());
    assert!(path.exists());
    let second = Context::new(f).with_cache_dir(&dir);
    let u = second.taylor(10).unwrap();
    assert_eq!(u.e, t.e);
    assert_eq!(u.h, t.h);
    std::fs::write(&path, b"{ not json").unwrap();
    let third = Context::new(f).with_cache_dir(&dir);
    let v = third.taylor(10).unwrap();
    assert_eq!(v.delta, t.delta);
    let reread: serde_json::Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    assert!(reread.is_object());
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn budget_errors_name_the_stage() {
    let c = Context::new(GaloisField::prime(3)).with_taylor_budget(20);
    let err = dn(&c, &QMForm::gen_e(c.field()), 30).unwrap_err();
    let msg = err.to_string();
    assert!(msg.contains("stage 3"), "{msg}");
}
