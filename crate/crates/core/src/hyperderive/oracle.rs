//! `D_n` acting directly on u-expansions, independent of the symbolic engine.
//!
//! The Taylor image of the uniformizer is `T_X(u) = Σ_{m≥0} G_{m+1}(u) X^m`,
//! extended multiplicatively; `D_n s` is the coefficient of `X^n` in
//! `Σ_m c_m T_X(u)^m`.

use crate::algebra::KElem;
use crate::error::{Error, Result};
use crate::useries::{GossTable, USeries};

type SeriesPoly = Vec<USeries>;

fn mul(a: &SeriesPoly, b: &SeriesPoly, prec: usize) -> SeriesPoly {
    let n = a.len().min(b.len());
    (0..n)
        .map(|k| {
            let mut acc = USeries::zero(a[0].field(), prec);
            for i in 0..=k {
                if !a[i].is_zero() && !b[k - i].is_zero() {
                    acc = acc.add(&a[i].mul_trunc(&b[k - i], prec));
                }
            }
            acc.truncate(prec)
        })
        .collect()
}

/// `X ↦ X^q` together with the coefficientwise Frobenius.
fn frob(a: &SeriesPoly, prec: usize) -> SeriesPoly {
    let q = a[0].field().q() as usize;
    let n = a.len();
    let mut out = vec![USeries::zero(a[0].field(), prec); n];
    for (i, s) in a.iter().enumerate() {
        if i * q >= n {
            break;
        }
        out[i * q] = s.frobenius(1, prec);
    }
    out
}

/// `D_n s`, known to the precision of `s`.
pub fn dn_on_useries(goss: &GossTable, s: &USeries, n: usize) -> Result<USeries> {
    if goss.nmax() < n + 1 {
        return Err(Error::Precision(format!("Goss table reaches G_{}, need G_{}", goss.nmax(), n + 1)));
    }
    let f = s.field();
    let prec = s.prec();
    let u = USeries::monomial(f, KElem::one(f), 1, prec);
    let tu: SeriesPoly = (0..=n).map(|m| goss.eval_series(m + 1, &u, prec).truncate(prec)).collect();
    let q = f.q() as usize;
    // powers[m] = T_X(u)^m; contributions from u^m with m ≥ prec vanish mod u^prec
    let mut powers: Vec<SeriesPoly> = Vec::with_capacity(prec);
    let mut one = vec![USeries::zero(f, prec); n + 1];
    one[0] = USeries::one(f, prec);
    powers.push(one);
    let mut acc = USeries::zero(f, prec);
    for m in 1..prec {
        let pm = if m % q == 0 { frob(&powers[m / q], prec) } else { mul(&powers[m - 1], &tu, prec) };
        powers.push(pm);
        let c = s.coeff(m);
        if !c.is_zero() {
            acc = acc.add(&powers[m][n].scale(&c));
        }
    }
    if n == 0 {
        acc = acc.add(&USeries::monomial(f, s.coeff(0), 0, prec));
    }
    Ok(acc.truncate(prec))
}
