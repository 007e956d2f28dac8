//! `D_n`, Serre operators, differential exponents and Hecke candidates.

use std::collections::{BTreeSet, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::tables::TaylorTables;
use super::taylor::TaylorPoly;
use crate::algebra::{binom_char_p, KElem};
use crate::context::Context;
use crate::error::{Error, Result};
use crate::forms::{divides, grading_of, QMForm};

/// Image `f(T_X(E), T_X(g), T_X(h))` modulo `X^xprec`.
pub fn taylor_with(t: &TaylorTables, f: &QMForm, xprec: usize) -> Result<TaylorPoly> {
    let field = f.field();
    if t.xprec() < xprec {
        return Err(Error::Precision(format!("tables known modulo X^{}, need X^{xprec}", t.xprec())));
    }
    let gens = [t.e.truncate(xprec), t.g.truncate(xprec), t.h.truncate(xprec)];
    let hinv = if f.monomials().any(|m| m.h < 0) { Some(gens[2].inverse()?) } else { None };
    let mut wanted: [BTreeSet<u32>; 4] = Default::default();
    for m in f.monomials() {
        wanted[0].insert(m.e);
        wanted[1].insert(m.g);
        if m.h >= 0 {
            wanted[2].insert(m.h as u32);
        } else {
            wanted[3].insert(m.h.unsigned_abs());
        }
    }
    let bases = [Some(&gens[0]), Some(&gens[1]), Some(&gens[2]), hinv.as_ref()];
    let powers: Vec<HashMap<u32, TaylorPoly>> = (0..4)
        .into_par_iter()
        .map(|i| {
            let mut out = HashMap::new();
            if let Some(b) = bases[i] {
                for &k in &wanted[i] {
                    out.insert(k, b.pow(k as u64));
                }
            }
            out
        })
        .collect();
    let terms: Vec<_> = f.terms().collect();
    let one = TaylorPoly::constant(QMForm::one(field), xprec);
    let sum = terms
        .par_iter()
        .map(|(m, c)| {
            let ph = if m.h >= 0 { &powers[2][&(m.h as u32)] } else { &powers[3][&m.h.unsigned_abs()] };
            let mut t = powers[0][&m.e].mul(&powers[1][&m.g]);
            if *ph != one {
                t = t.mul(ph);
            }
            t.scale(c)
        })
        .reduce(|| TaylorPoly::zero(field, xprec), |a, b| a.add(&b));
    Ok(sum)
}

/// `T_X(f)` modulo `X^xprec`.
pub fn taylor_of(ctx: &Context, f: &QMForm, xprec: usize) -> Result<TaylorPoly> {
    let t = ctx.taylor(xprec)?;
    taylor_with(&t, f, xprec)
}

/// The hyperderivative `D_n f`.
pub fn dn(ctx: &Context, f: &QMForm, n: usize) -> Result<QMForm> {
    Ok(taylor_of(ctx, f, n + 1)?.coeff(n)?.clone())
}

/// `∂_n^{(d)} f = D_n f + Σ_{i=1}^n (−1)^i binom(d+n−1, i) D_{n−i}f · D_{i−1}E`.
pub fn serre_partial(ctx: &Context, f: &QMForm, n: usize, d: i64) -> Result<QMForm> {
    let field = f.field();
    let tf = taylor_of(ctx, f, n + 1)?;
    let te = ctx.taylor(n + 1)?;
    let p = field.p();
    let mut acc = tf.coeff(n)?.clone();
    for i in 1..=n {
        let b = binom_char_p(d + n as i64 - 1, i as u64, p);
        if b == 0 {
            continue;
        }
        let sign = if i % 2 == 0 { 1 } else { -1 };
        let c = KElem::from_int(field, sign * b as i64);
        acc = acc.add(&tf.coeff(n - i)?.mul(te.e.coeff(i - 1)?).scale(&c));
    }
    Ok(acc)
}

/// `∂^{(E)}_j f`: coefficient of `X^j` in `f(E+X, g, h)`.
pub fn partial_e(f: &QMForm, j: u32) -> QMForm {
    f.partial_e(j)
}

/// Differential exponent `ε_D(f)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum EpsilonReport {
    /// `D_{p^j} f` is divisible by `f` for `j < k` but not for `j = k`.
    Exact(u32),
    /// Divisible for every `j < cap`.
    AtLeast(u32),
    /// `f ∈ C^× h^Z`.
    Infinite,
}

impl std::fmt::Display for EpsilonReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            EpsilonReport::Exact(k) => write!(f, "{k}"),
            EpsilonReport::AtLeast(k) => write!(f, ">={k}"),
            EpsilonReport::Infinite => write!(f, "inf"),
        }
    }
}

/// Smallest `k` with `D_{p^k} f / f ∉ C[E, g, h]`, searched below `cap`.
pub fn differential_exponent(ctx: &Context, f: &QMForm, cap: u32) -> Result<EpsilonReport> {
    if f.is_zero() {
        return Err(Error::InvalidArgument("ε_D of the zero form".into()));
    }
    if f.len() == 1 && f.monomials().all(|m| m.e == 0 && m.g == 0) {
        return Ok(EpsilonReport::Infinite);
    }
    let p = f.field().p() as usize;
    for j in 0..cap {
        let n = p
            .checked_pow(j)
            .ok_or_else(|| Error::Precision(format!("D_{{p^{j}}} is out of reach")))?;
        if divides(f, &dn(ctx, f, n)?)?.is_none() {
            return Ok(EpsilonReport::Exact(j));
        }
    }
    Ok(EpsilonReport::AtLeast(cap))
}

/// An index `n = 1 − d + p^{k+1}` with `∂_n^{(d)} = D_n`.
#[derive(Clone, Debug)]
pub struct HeckeCandidate {
    pub k: u32,
    pub n: usize,
    /// `binom(d+n−1, i) ≡ 0 (mod p)` for `1 ≤ i ≤ n`.
    pub binomials_vanish: bool,
    /// `D_n f` when a form was supplied.
    pub dn: Option<QMForm>,
    /// `∂_n^{(d)} f = D_n f` when a form was supplied.
    pub serre_agrees: Option<bool>,
}

/// The admissible `n` for weight `d` and `k ≤ kmax`, optionally applied to `f`.
pub fn hecke_candidates(ctx: &Context, d: i64, kmax: u32, f: Option<&QMForm>) -> Result<Vec<HeckeCandidate>> {
    if d < 2 {
        return Err(Error::InvalidArgument("Hecke candidates need d ≥ 2".into()));
    }
    let field = ctx.field();
    let p = field.p() as i64;
    if let Some(f) = f {
        match grading_of(f)? {
            Some(g) if g.l == 0 && g.w == d => {}
            _ => return Err(Error::InvalidArgument(format!("form is not modular of weight {d}"))),
        }
    }
    let mut out = Vec::new();
    for k in 0..=kmax {
        let pk = p.pow(k);
        if pk * (p - 1) < d - 1 {
            continue;
        }
        let n = (1 - d + pk * p) as usize;
        let binomials_vanish = (1..=n).all(|i| binom_char_p(d + n as i64 - 1, i as u64, field.p()) == 0);
        let (dn_f, serre_agrees) = match f {
            Some(f) => {
                let x = dn(ctx, f, n)?;
                if x.e_degree() != 0 {
                    return Err(Error::Consistency(format!("D_{n} of a modular form has positive depth")));
                }
                let s = serre_partial(ctx, f, n, d)?;
                let agrees = s == x;
                (Some(x), Some(agrees))
            }
            None => (None, None),
        };
        out.push(HeckeCandidate { k, n, binomials_vanish, dn: dn_f, serre_agrees });
    }
    Ok(out)
}
