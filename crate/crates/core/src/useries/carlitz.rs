//! The Carlitz module and the series `u(az)`.

use crate::algebra::{Fq, KElem, ThetaPoly};
use crate::error::{Error, Result};

use super::series::USeries;

/// `Σ c_i x^{q^i}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdditivePoly {
    pub coeffs: Vec<KElem>,
}

impl AdditivePoly {
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Evaluation at an element of `K`.
    pub fn eval(&self, x: &KElem) -> KElem {
        let f = x.field();
        let mut acc = KElem::zero(f);
        for (i, c) in self.coeffs.iter().enumerate() {
            acc = acc.add(&c.mul(&x.frobenius(i as u32)));
        }
        acc
    }

    /// Composition `self ∘ other`.
    pub fn compose(&self, other: &AdditivePoly) -> AdditivePoly {
        let f = self.coeffs[0].field();
        let n = self.coeffs.len() + other.coeffs.len() - 1;
        let mut out = vec![KElem::zero(f); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(&b.frobenius(i as u32)));
            }
        }
        AdditivePoly { coeffs: out }
    }
}

/// `C_a` from `C_θ(x) = θx + x^q`, extended additively and multiplicatively.
pub fn carlitz_action(a: &ThetaPoly) -> Result<AdditivePoly> {
    if a.is_zero() {
        return Err(Error::InvalidArgument("Carlitz action of 0".into()));
    }
    let f = a.field();
    let deg = a.degree().unwrap();
    let theta = ThetaPoly::theta(f);
    // cur = coefficients of C_{θ^k}
    let mut cur: Vec<ThetaPoly> = vec![ThetaPoly::one(f)];
    let mut out: Vec<ThetaPoly> = vec![ThetaPoly::zero(f); deg + 1];
    for k in 0..=deg {
        let ak = a.coeff(k);
        if ak != 0 {
            for (i, c) in cur.iter().enumerate() {
                out[i] = out[i].add(&c.scale(ak));
            }
        }
        if k < deg {
            // C_θ ∘ φ = θφ + φ^q
            let mut next = vec![ThetaPoly::zero(f); cur.len() + 1];
            for (i, c) in cur.iter().enumerate() {
                next[i] = next[i].add(&theta.mul(c));
                next[i + 1] = next[i + 1].add(&c.frobenius(1));
            }
            cur = next;
        }
    }
    Ok(AdditivePoly { coeffs: out.into_iter().map(KElem::from_poly).collect() })
}

/// `u_a = 1/C_a(1/u)` to precision `prec`, for monic `a`.
pub fn u_of_az(a: &ThetaPoly, prec: usize) -> Result<USeries> {
    if a.is_zero() || !a.is_monic() {
        return Err(Error::InvalidArgument("u_of_az expects a monic polynomial".into()));
    }
    let f = a.field();
    let ca = carlitz_action(a)?;
    let d = ca.degree();
    let qd = (f.q() as usize).pow(d as u32);
    if qd >= prec {
        return Ok(USeries::zero(f, prec));
    }
    // u_a = u^{q^d} / Σ_i c_i u^{q^d − q^i}
    let inner = prec - qd;
    let mut c = vec![ThetaPoly::zero(f); qd];
    for (i, ci) in ca.coeffs.iter().enumerate() {
        let e = qd - (f.q() as usize).pow(i as u32);
        c[e] = ci.num().clone();
    }
    let s = USeries::from_polys(f, c, inner);
    Ok(s.inverse()?.shift(qd))
}

/// Monic polynomials of degree `d`, in lexicographic order of coefficients.
pub fn monics_of_degree(f: Fq, d: usize) -> Vec<ThetaPoly> {
    let q = f.q() as u64;
    let count = q.pow(d as u32);
    (0..count)
        .map(|mut v| {
            let mut c = Vec::with_capacity(d + 1);
            for _ in 0..d {
                c.push((v % q) as u16);
                v /= q;
            }
            c.push(1);
            ThetaPoly::from_coeffs(f, c)
        })
        .collect()
}
