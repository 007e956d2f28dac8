#![allow(dead_code)]

use dqm_core::algebra::{Fq, KElem, ThetaPoly};
use dqm_core::forms::{Mono, QMForm};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Nonzero θ-polynomial of degree below `deg`.
pub fn rand_poly(f: Fq, rng: &mut StdRng, deg: usize) -> ThetaPoly {
    loop {
        let c: Vec<u16> = (0..deg.max(1)).map(|_| rng.gen_range(0..f.q() as u16)).collect();
        let p = ThetaPoly::from_coeffs(f, c);
        if !p.is_zero() {
            return p;
        }
    }
}

pub fn rand_kelem(f: Fq, rng: &mut StdRng) -> KElem {
    let num = rand_poly(f, rng, 3);
    if rng.gen_bool(0.3) {
        KElem::new(num, rand_poly(f, rng, 2)).unwrap()
    } else {
        KElem::from_poly(num)
    }
}

/// Random polynomial form with up to `terms` monomials of degree ≤ `deg` in each generator.
pub fn rand_form(f: Fq, rng: &mut StdRng, terms: usize, deg: u32) -> QMForm {
    loop {
        let t: Vec<(Mono, KElem)> = (0..rng.gen_range(1..=terms))
            .map(|_| {
                let m = Mono::new(rng.gen_range(0..=deg), rng.gen_range(0..=deg), rng.gen_range(0..=deg) as i32);
                (m, rand_kelem(f, rng))
            })
            .collect();
        let v = QMForm::from_terms(f, t);
        if !v.is_zero() {
            return v;
        }
    }
}

/// Random homogeneous form of weight `w`, type `m` and depth ≤ `l`.
pub fn rand_graded(f: Fq, rng: &mut StdRng, w: i64, m: i64, l: i64) -> QMForm {
    let b = dqm_core::extremal::basis(f.q(), w, m, l);
    assert!(!b.is_empty(), "empty space ({w},{m},{l})");
    loop {
        let mut t: Vec<(Mono, KElem)> = Vec::new();
        for mo in &b.monomials {
            if rng.gen_bool(0.6) {
                t.push((*mo, rand_kelem(f, rng)));
            }
        }
        let v = QMForm::from_terms(f, t);
        if !v.is_zero() {
            return v;
        }
    }
}
