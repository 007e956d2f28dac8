//! Exact division and resultants in `K[E, g, h]`.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use super::form::{Mono, QMForm};
use crate::algebra::KElem;
use crate::error::{Error, Result};

/// Monomial key sorted by graded-lex order with `E > g > h`.
#[derive(Clone, Copy, PartialEq, Eq)]
struct GrLex(Mono);

impl Ord for GrLex {
    fn cmp(&self, o: &Self) -> Ordering {
        self.0.cmp_grlex(o.0)
    }
}
impl PartialOrd for GrLex {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

fn min_h(f: &QMForm) -> i32 {
    f.monomials().map(|m| m.h).min().unwrap_or(0)
}

/// Returns `g / f` when `f` divides `g` in `K[E, g, h]`, else `None`.
///
/// Both inputs may carry negative powers of `h`; they are shifted into the
/// polynomial ring first, and the quotient must be a polynomial.
pub fn divides(f: &QMForm, g: &QMForm) -> Result<Option<QMForm>> {
    if f.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let field = f.field();
    if g.is_zero() {
        return Ok(Some(QMForm::zero(field)));
    }
    let (sf, sg) = (min_h(f).min(0), min_h(g).min(0));
    let fp = f.mul_h_pow(-sf);
    let gp = g.mul_h_pow(-sg);
    let fterms: Vec<(Mono, KElem)> = fp.terms().collect();
    let (lead_m, lead_c) = fterms.iter().max_by(|a, b| a.0.cmp_grlex(b.0)).cloned().expect("nonzero");
    let lead_inv = lead_c.inv()?;
    let mut rem: BTreeMap<GrLex, KElem> = gp.terms().map(|(m, c)| (GrLex(m), c)).collect();
    let mut quot: Vec<(Mono, KElem)> = Vec::new();
    while let Some((&GrLex(m), c)) = rem.iter().next_back() {
        if !lead_m.divides(m) {
            return Ok(None);
        }
        let tm = Mono::new(m.e - lead_m.e, m.g - lead_m.g, m.h - lead_m.h);
        let tc = c.mul(&lead_inv);
        for (fm, fc) in &fterms {
            let key = GrLex(*fm * tm);
            let sub = tc.mul(fc);
            let v = match rem.get(&key) {
                Some(x) => x.sub(&sub),
                None => sub.neg(),
            };
            if v.is_zero() {
                rem.remove(&key);
            } else {
                rem.insert(key, v);
            }
        }
        quot.push((tm, tc));
    }
    // undo the shifts: g/f = (gp/fp)·h^{sg−sf}
    let q = QMForm::from_terms(field, quot).mul_h_pow(sg - sf);
    Ok(if q.is_polynomial() { Some(q) } else { None })
}

/// Coefficients of `f` as a polynomial in `E`, index = power of `E`.
pub fn e_coefficients(f: &QMForm) -> Vec<QMForm> {
    let field = f.field();
    let deg = f.e_degree() as usize;
    let mut buckets: Vec<Vec<(Mono, KElem)>> = vec![Vec::new(); deg + 1];
    for (m, c) in f.terms() {
        buckets[m.e as usize].push((Mono::new(0, m.g, m.h), c));
    }
    buckets.into_iter().map(|b| QMForm::from_terms(field, b)).collect()
}

/// Resultant of `f` and `g` with respect to `E`, via the Sylvester matrix.
///
/// The determinant is taken by Bareiss elimination over `K[g, h]`, so every
/// intermediate division is exact.
pub fn resultant_in_e(f: &QMForm, g: &QMForm) -> Result<QMForm> {
    if f.is_zero() || g.is_zero() {
        return Err(Error::InvalidArgument("resultant of a zero form".into()));
    }
    let (m, n) = (f.e_degree() as usize, g.e_degree() as usize);
    if m == 0 && n == 0 {
        return Err(Error::InvalidArgument("both forms have degree 0 in E".into()));
    }
    let field = f.field();
    let (a, b) = (e_coefficients(f), e_coefficients(g));
    let size = m + n;
    if size == 0 {
        return Ok(QMForm::one(field));
    }
    // rows 0..n: shifted copies of f (descending E powers); rows n..n+m: g
    let mut mat = vec![vec![QMForm::zero(field); size]; size];
    for i in 0..n {
        for k in 0..=m {
            mat[i][i + k] = a[m - k].clone();
        }
    }
    for i in 0..m {
        for k in 0..=n {
            mat[n + i][i + k] = b[n - k].clone();
        }
    }
    bareiss_det(mat)
}

/// Determinant of a square matrix of forms by fraction-free elimination.
pub fn bareiss_det(mut mat: Vec<Vec<QMForm>>) -> Result<QMForm> {
    let size = mat.len();
    let field = mat[0][0].field();
    let mut sign = false;
    let mut prev = QMForm::one(field);
    for k in 0..size {
        let Some(p) = (k..size).find(|&i| !mat[i][k].is_zero()) else {
            return Ok(QMForm::zero(field));
        };
        if p != k {
            mat.swap(p, k);
            sign = !sign;
        }
        for i in k + 1..size {
            for j in k + 1..size {
                let x = mat[k][k].mul(&mat[i][j]).sub(&mat[i][k].mul(&mat[k][j]));
                mat[i][j] = if k == 0 {
                    x
                } else {
                    divides(&prev, &x)?.ok_or_else(|| Error::Consistency("inexact Bareiss step".into()))?
                };
            }
            mat[i][k] = QMForm::zero(field);
        }
        prev = mat[k][k].clone();
    }
    let d = mat[size - 1][size - 1].clone();
    Ok(if sign { d.neg() } else { d })
}
