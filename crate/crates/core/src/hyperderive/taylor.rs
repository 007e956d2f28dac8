//! Truncated polynomials in `X` with form coefficients.

use rayon::prelude::*;

use crate::algebra::{binom_char_p, Fq, KElem};
use crate::error::{Error, Result};
use crate::forms::QMForm;

/// `Σ_{n < xprec} c_n X^n`, known modulo `X^xprec`.
#[derive(Clone, PartialEq, Eq)]
pub struct TaylorPoly {
    f: Fq,
    c: Vec<QMForm>,
}

impl TaylorPoly {
    pub fn zero(f: Fq, xprec: usize) -> Self {
        TaylorPoly { f, c: vec![QMForm::zero(f); xprec] }
    }

    /// The constant `a` modulo `X^xprec`.
    pub fn constant(a: QMForm, xprec: usize) -> Self {
        let mut t = Self::zero(a.field(), xprec);
        if xprec > 0 {
            t.c[0] = a;
        }
        t
    }

    /// Builds from coefficients, truncating or padding to `xprec`.
    pub fn from_coeffs(f: Fq, mut c: Vec<QMForm>, xprec: usize) -> Self {
        c.resize(xprec, QMForm::zero(f));
        TaylorPoly { f, c }
    }

    pub fn field(&self) -> Fq {
        self.f
    }
    pub fn xprec(&self) -> usize {
        self.c.len()
    }
    pub fn coeffs(&self) -> &[QMForm] {
        &self.c
    }

    /// Coefficient of `X^n`; errors beyond the known precision.
    pub fn coeff(&self, n: usize) -> Result<&QMForm> {
        self.c
            .get(n)
            .ok_or_else(|| Error::Precision(format!("coefficient X^{n} requested, known modulo X^{}", self.c.len())))
    }

    pub fn truncate(&self, xprec: usize) -> Self {
        Self::from_coeffs(self.f, self.c[..xprec.min(self.c.len())].to_vec(), xprec.min(self.c.len()))
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.xprec().min(o.xprec());
        TaylorPoly { f: self.f, c: (0..n).map(|i| self.c[i].add(&o.c[i])).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.xprec().min(o.xprec());
        TaylorPoly { f: self.f, c: (0..n).map(|i| self.c[i].sub(&o.c[i])).collect() }
    }

    pub fn scale(&self, a: &KElem) -> Self {
        TaylorPoly { f: self.f, c: self.c.iter().map(|x| x.scale(a)).collect() }
    }

    /// Coefficientwise product with a form.
    pub fn mul_form(&self, a: &QMForm) -> Self {
        TaylorPoly { f: self.f, c: self.c.par_iter().map(|x| x.mul(a)).collect() }
    }

    /// Truncated product, known modulo the smaller precision.
    pub fn mul(&self, o: &Self) -> Self {
        self.mul_trunc(o, self.xprec().min(o.xprec()))
    }

    pub fn mul_trunc(&self, o: &Self, limit: usize) -> Self {
        let n = limit.min(self.xprec()).min(o.xprec());
        let a: Vec<usize> = (0..n).filter(|&i| !self.c[i].is_zero()).collect();
        let b: Vec<usize> = (0..n).filter(|&j| !o.c[j].is_zero()).collect();
        let c = (0..n)
            .into_par_iter()
            .map(|k| {
                let mut acc = QMForm::zero(self.f);
                for &i in a.iter().take_while(|&&i| i <= k) {
                    let j = k - i;
                    if b.binary_search(&j).is_ok() {
                        acc = acc.add(&self.c[i].mul(&o.c[j]));
                    }
                }
                acc
            })
            .collect();
        TaylorPoly { f: self.f, c }
    }

    /// `self^{q^s}`: coefficient `c_n` moves to `X^{n q^s}` as `c_n^{q^s}`.
    ///
    /// Known modulo `X^{xprec·q^s}`, truncated to `limit`.
    pub fn frobenius(&self, s: u32, limit: usize) -> Self {
        let step = (self.f.q() as usize).pow(s);
        let n = limit.min(self.xprec().saturating_mul(step));
        let mut c = vec![QMForm::zero(self.f); n];
        for (i, x) in self.c.iter().enumerate() {
            let k = i * step;
            if k >= n {
                break;
            }
            if !x.is_zero() {
                c[k] = x.frobenius(s);
            }
        }
        TaylorPoly { f: self.f, c }
    }

    /// `self^k` through base-`q` digits and Frobenius.
    pub fn pow(&self, k: u64) -> Self {
        let q = self.f.q() as u64;
        let n = self.xprec();
        let mut r = Self::constant(QMForm::one(self.f), n);
        let (mut k, mut s) = (k, 0u32);
        while k > 0 {
            let d = k % q;
            if d > 0 {
                let b = self.frobenius(s, n);
                for _ in 0..d {
                    r = r.mul(&b);
                }
            }
            k /= q;
            s += 1;
        }
        r
    }

    /// `∂/∂X`, known modulo `X^{xprec−1}` (or `X^{xprec}` when `p | xprec`).
    pub fn deriv_x(&self) -> Self {
        let n = self.xprec();
        let p = self.f.p() as usize;
        let out = if n > 0 && n.is_multiple_of(p) { n } else { n.saturating_sub(1) };
        let c = (0..out)
            .map(|i| {
                let nxt = self.c.get(i + 1).cloned().unwrap_or_else(|| QMForm::zero(self.f));
                nxt.scale(&KElem::from_int(self.f, (i + 1) as i64))
            })
            .collect();
        TaylorPoly { f: self.f, c }
    }

    /// `δ'_j`: coefficient of `Y^j` in `self(X + Y)`, i.e. `Σ binom(i, j) c_i X^{i−j}`.
    pub fn divided_deriv(&self, j: usize) -> Self {
        let n = self.xprec().saturating_sub(j);
        let p = self.f.p();
        let c = (0..n)
            .map(|k| {
                let b = binom_char_p((k + j) as i64, j as u64, p);
                self.c[k + j].scale(&KElem::from_int(self.f, b as i64))
            })
            .collect();
        TaylorPoly { f: self.f, c }
    }

    /// Inverse, for a constant term `c·h^k`.
    pub fn inverse(&self) -> Result<Self> {
        let n = self.xprec();
        if n == 0 {
            return Ok(self.clone());
        }
        let b0 = self.c[0].inverse_unit()?;
        let mut b = vec![b0.clone()];
        for k in 1..n {
            let mut acc = QMForm::zero(self.f);
            for i in 1..=k {
                if !self.c[i].is_zero() && !b[k - i].is_zero() {
                    acc = acc.add(&self.c[i].mul(&b[k - i]));
                }
            }
            b.push(acc.mul(&b0).neg());
        }
        Ok(TaylorPoly { f: self.f, c: b })
    }

    /// Text `c0 + c1*X + ... + O(X^n)`, parenthesizing sums.
    pub fn to_text(&self) -> String {
        use crate::algebra::poly::{is_sum, join_signed};
        let mut parts = Vec::new();
        for (i, c) in self.c.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let x = match i {
                0 => String::new(),
                1 => "X".to_string(),
                _ => format!("X^{i}"),
            };
            let t = c.to_text();
            parts.push(if i == 0 {
                t
            } else if t == "1" {
                x
            } else if t == "-1" {
                format!("-{x}")
            } else if is_sum(&t) {
                format!("({t})*{x}")
            } else {
                format!("{t}*{x}")
            });
        }
        parts.push(format!("O(X^{})", self.c.len()));
        join_signed(&parts)
    }

    /// `{"xprec": n, "coeffs": [form, ...]}` with forms in their JSON schema.
    pub fn to_json(&self) -> serde_json::Value {
        let coeffs: Vec<serde_json::Value> = self.c.iter().map(|c| c.to_json()).collect();
        serde_json::json!({ "xprec": self.c.len(), "coeffs": coeffs })
    }
}

impl std::fmt::Debug for TaylorPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl std::fmt::Display for TaylorPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.to_text())
    }
}
