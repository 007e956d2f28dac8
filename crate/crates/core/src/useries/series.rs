//! Truncated power series in `u` over `K`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::poly::{content_gcd, PolyAcc};
use crate::algebra::{Fq, KElem, ThetaPoly};
use crate::error::{Error, Result};

/// `Σ_{n < prec} c_n u^n + O(u^prec)`.
///
/// Stored as a common monic denominator over dense numerators in `A`, with
/// `gcd(den, numerators) = 1`, so equal series have identical storage.
#[derive(Clone, PartialEq, Eq)]
pub struct USeries {
    f: Fq,
    prec: usize,
    den: ThetaPoly,
    c: Vec<ThetaPoly>,
}

impl USeries {
    pub fn zero(f: Fq, prec: usize) -> Self {
        USeries { f, prec, den: ThetaPoly::one(f), c: Vec::new() }
    }

    pub fn one(f: Fq, prec: usize) -> Self {
        Self::monomial(f, KElem::one(f), 0, prec)
    }

    /// `a·u^n + O(u^prec)`.
    pub fn monomial(f: Fq, a: KElem, n: usize, prec: usize) -> Self {
        let mut s = Self::zero(f, prec);
        if n < prec && !a.is_zero() {
            let (num, den) = a.into_parts();
            s.c = vec![ThetaPoly::zero(f); n + 1];
            s.c[n] = num;
            s.den = den;
        }
        s
    }

    /// From integral coefficients `c_0, c_1, ..`.
    pub fn from_polys(f: Fq, c: Vec<ThetaPoly>, prec: usize) -> Self {
        Self::from_parts(f, prec, ThetaPoly::one(f), c)
    }

    /// From `(exponent, coefficient)` pairs.
    pub fn from_terms(f: Fq, terms: impl IntoIterator<Item = (usize, KElem)>, prec: usize) -> Self {
        let mut s = Self::zero(f, prec);
        for (n, a) in terms {
            s = s.add(&Self::monomial(f, a, n, prec));
        }
        s
    }

    pub(crate) fn from_parts(f: Fq, prec: usize, den: ThetaPoly, mut c: Vec<ThetaPoly>) -> Self {
        c.truncate(prec);
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        if c.is_empty() {
            return Self::zero(f, prec);
        }
        if den.is_one() {
            return USeries { f, prec, den, c };
        }
        let g = content_gcd(&den, c.iter());
        let (den, c) = if g.is_one() {
            (den, c)
        } else {
            (den.divrem(&g).0, c.into_iter().map(|x| x.divrem(&g).0).collect())
        };
        let l = den.lead();
        if l == 1 {
            USeries { f, prec, den, c }
        } else {
            let inv = f.inv(l);
            USeries { f, prec, den: den.scale(inv), c: c.into_iter().map(|x| x.scale(inv)).collect() }
        }
    }

    pub fn field(&self) -> Fq {
        self.f
    }
    pub fn prec(&self) -> usize {
        self.prec
    }
    /// Common denominator of the coefficients.
    pub fn den(&self) -> &ThetaPoly {
        &self.den
    }
    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }
    /// True if all coefficients lie in `A`.
    pub fn is_integral(&self) -> bool {
        self.den.is_one()
    }

    /// Coefficient of `u^n` (`n < prec`).
    pub fn coeff(&self, n: usize) -> KElem {
        assert!(n < self.prec, "coefficient {n} beyond precision {}", self.prec);
        match self.c.get(n) {
            Some(x) if !x.is_zero() => KElem::new(x.clone(), self.den.clone()).expect("nonzero den"),
            _ => KElem::zero(self.f),
        }
    }

    /// Numerator of the coefficient of `u^n` over [`USeries::den`].
    pub fn num_coeff(&self, n: usize) -> Option<&ThetaPoly> {
        self.c.get(n).filter(|x| !x.is_zero())
    }

    /// Nonzero terms in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (usize, KElem)> + '_ {
        self.c
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(n, x)| (n, KElem::new(x.clone(), self.den.clone()).expect("nonzero den")))
    }

    /// First exponent with a nonzero coefficient, `None` if zero to precision.
    pub fn valuation(&self) -> Option<usize> {
        self.c.iter().position(|x| !x.is_zero())
    }

    /// Smallest exponent that could be nonzero (the precision if zero so far).
    fn val_or_prec(&self) -> usize {
        self.valuation().unwrap_or(self.prec)
    }

    pub fn truncate(&self, prec: usize) -> Self {
        if prec >= self.prec {
            return self.clone();
        }
        Self::from_parts(self.f, prec, self.den.clone(), self.c.clone())
    }

    pub fn neg(&self) -> Self {
        USeries { f: self.f, prec: self.prec, den: self.den.clone(), c: self.c.iter().map(|x| x.neg()).collect() }
    }

    pub fn add(&self, o: &Self) -> Self {
        self.lin(o, false)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.lin(o, true)
    }

    fn lin(&self, o: &Self, negate: bool) -> Self {
        let f = self.f;
        let prec = self.prec.min(o.prec);
        let (a_mul, b_mul, den) = if self.den == o.den {
            (ThetaPoly::one(f), ThetaPoly::one(f), self.den.clone())
        } else {
            let g = self.den.gcd(&o.den);
            let a = o.den.divrem(&g).0;
            let b = self.den.divrem(&g).0;
            let den = self.den.mul(&a);
            (a, b, den)
        };
        let n = self.c.len().max(o.c.len()).min(prec);
        let mut c = Vec::with_capacity(n);
        for i in 0..n {
            let x = self.c.get(i).map(|x| x.mul(&a_mul)).unwrap_or_else(|| ThetaPoly::zero(f));
            let y = o.c.get(i).map(|y| y.mul(&b_mul)).unwrap_or_else(|| ThetaPoly::zero(f));
            c.push(if negate { x.sub(&y) } else { x.add(&y) });
        }
        Self::from_parts(f, prec, den, c)
    }

    /// Product with precision `min(N₁+v₂, N₂+v₁)`.
    pub fn mul(&self, o: &Self) -> Self {
        self.mul_trunc(o, usize::MAX)
    }

    /// Product truncated to at most `limit` terms.
    pub fn mul_trunc(&self, o: &Self, limit: usize) -> Self {
        let f = self.f;
        let (v1, v2) = (self.val_or_prec(), o.val_or_prec());
        let prec = (self.prec.saturating_add(v2)).min(o.prec.saturating_add(v1)).min(limit);
        if self.is_zero() || o.is_zero() {
            return Self::zero(f, prec);
        }
        let n = (self.c.len() + o.c.len() - 1).min(prec);
        let mut c = Vec::with_capacity(n);
        for k in 0..n {
            let mut acc = PolyAcc::new();
            let lo = k.saturating_sub(o.c.len() - 1);
            let hi = k.min(self.c.len() - 1);
            for i in lo..=hi {
                let (a, b) = (&self.c[i], &o.c[k - i]);
                if !a.is_zero() && !b.is_zero() {
                    acc.add_mul(f, a.coeffs(), b.coeffs());
                }
            }
            c.push(acc.finish(f));
        }
        Self::from_parts(f, prec, self.den.mul(&o.den), c)
    }

    /// Scalar multiple.
    pub fn scale(&self, a: &KElem) -> Self {
        if a.is_zero() {
            return Self::zero(self.f, self.prec);
        }
        let c = self.c.iter().map(|x| x.mul(a.num())).collect();
        Self::from_parts(self.f, self.prec, self.den.mul(a.den()), c)
    }

    /// Multiplication by `u^k`.
    pub fn shift(&self, k: usize) -> Self {
        let mut c = vec![ThetaPoly::zero(self.f); k];
        c.extend(self.c.iter().cloned());
        USeries { f: self.f, prec: self.prec + k, den: self.den.clone(), c }
    }

    /// Division by `u^k`; requires valuation at least `k`.
    pub fn unshift(&self, k: usize) -> Result<Self> {
        if self.val_or_prec() < k {
            return Err(Error::InvalidArgument(format!("series not divisible by u^{k}")));
        }
        let c = self.c.iter().skip(k).cloned().collect();
        Ok(USeries { f: self.f, prec: self.prec.saturating_sub(k), den: self.den.clone(), c })
    }

    /// `self^{q^s}`: exponents scale by `q^s`, coefficients by `θ ↦ θ^{q^s}`;
    /// the result is truncated to `limit`.
    pub fn frobenius(&self, s: u32, limit: usize) -> Self {
        if s == 0 {
            return self.truncate(limit);
        }
        let f = self.f;
        let step = (f.q() as usize).pow(s);
        let prec = self.prec.saturating_mul(step).min(limit);
        let mut c = vec![ThetaPoly::zero(f); ((self.c.len().saturating_sub(1)) * step + 1).min(prec)];
        for (n, x) in self.c.iter().enumerate() {
            if n * step >= prec {
                break;
            }
            if !x.is_zero() {
                c[n * step] = x.frobenius(s);
            }
        }
        Self::from_parts(f, prec, self.den.frobenius(s), c)
    }

    /// Nonnegative power via base-`q` digits and Frobenius, truncated to `limit`.
    pub fn pow_trunc(&self, k: u64, limit: usize) -> Self {
        let f = self.f;
        let q = f.q() as u64;
        let mut r = Self::one(f, limit.min(self.prec.max(1)).max(1));
        if k == 0 {
            return Self::one(f, limit);
        }
        let mut k = k;
        let mut s = 0u32;
        let mut first = true;
        while k > 0 {
            let d = k % q;
            if d > 0 {
                let b = self.frobenius(s, limit);
                for _ in 0..d {
                    r = if first { b.clone() } else { r.mul_trunc(&b, limit) };
                    first = false;
                }
            }
            k /= q;
            s += 1;
        }
        r
    }

    pub fn pow(&self, k: u64) -> Self {
        self.pow_trunc(k, usize::MAX)
    }

    /// Inverse of a series with nonzero constant term.
    pub fn inverse(&self) -> Result<Self> {
        let a0 = self.c.first().filter(|x| !x.is_zero()).ok_or_else(|| {
            Error::InvalidArgument("series inverse requires a unit constant term".into())
        })?;
        let f = self.f;
        let n = self.prec;
        let a: Vec<KElem> = (0..n).map(|i| self.coeff(i)).collect();
        let inv0 = KElem::new(self.den.clone(), a0.clone())?;
        let mut b: Vec<KElem> = Vec::with_capacity(n);
        b.push(inv0.clone());
        for k in 1..n {
            let mut s = KElem::zero(f);
            for i in 1..=k.min(self.c.len().saturating_sub(1)) {
                if !a[i].is_zero() && !b[k - i].is_zero() {
                    s = s.add(&a[i].mul(&b[k - i]));
                }
            }
            b.push(s.mul(&inv0).neg());
        }
        Ok(Self::from_terms(f, b.into_iter().enumerate(), n))
    }

    /// The unique `n`-th root with constant term 1 of a series with constant
    /// term 1, by Newton iteration. Requires `p ∤ n`.
    pub fn root_1unit(&self, n: u64) -> Result<Self> {
        let f = self.f;
        if n == 0 || n.is_multiple_of(f.p() as u64) {
            return Err(Error::InvalidArgument(format!("root index {n} divisible by p")));
        }
        if self.coeff(0) != KElem::one(f) {
            return Err(Error::InvalidArgument("root_1unit needs constant term 1".into()));
        }
        let target = self.prec;
        let inv_n = KElem::from_int(f, n as i64).inv()?;
        let mut w = Self::one(f, 1.min(target));
        let mut p = 1usize;
        while p < target {
            p = (2 * p).min(target);
            let w_p = Self::from_parts(f, p, w.den.clone(), w.c.clone());
            // w ← w − (w^n − s)/(n w^{n−1})
            let wn1 = w_p.pow_trunc(n - 1, p);
            let wn = wn1.mul_trunc(&w_p, p);
            let err = wn.sub(&self.truncate(p));
            let corr = err.mul_trunc(&wn1.inverse()?, p).scale(&inv_n);
            w = w_p.sub(&corr);
        }
        Ok(w.truncate(target))
    }

    /// Coefficients as `(exponent, text)` pairs.
    pub fn to_json(&self) -> serde_json::Value {
        let coeffs: Vec<serde_json::Value> =
            self.terms().map(|(n, a)| serde_json::json!([n, a.to_text()])).collect();
        serde_json::json!({ "prec": self.prec, "coeffs": coeffs })
    }

    /// Text form `c0 + c1*u + ... + O(u^prec)`.
    pub fn to_text(&self) -> String {
        let mut parts = Vec::new();
        for (n, a) in self.terms() {
            let cs = a.to_text();
            let mono = match n {
                0 => String::new(),
                1 => "u".to_string(),
                _ => format!("u^{n}"),
            };
            let t = if mono.is_empty() {
                cs
            } else if cs == "1" {
                mono
            } else if cs == "-1" {
                format!("-{mono}")
            } else if crate::algebra::poly::is_sum(&cs) || cs.contains('/') {
                format!("({cs})*{mono}")
            } else {
                format!("{cs}*{mono}")
            };
            parts.push(t);
        }
        parts.push(format!("O(u^{})", self.prec));
        crate::algebra::poly::join_signed(&parts)
    }
}

impl fmt::Debug for USeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

/// Serialized form: `{"prec": N, "coeffs": [[n, "KElem"], ...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SeriesJson {
    pub prec: usize,
    pub coeffs: Vec<(usize, String)>,
}
