//! Sparse polynomials in `E`, `g`, `h` over `K`.
//!
//! Negative powers of `h` are allowed internally (`h` is a unit in the
//! Laurent ring used by the Taylor algorithm, since `Δ = −h^{q−1}`).

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::poly::{content_gcd, join_signed, PolyAcc};
use crate::algebra::{binom_char_p, FieldDesc, Fq, GaloisField, KElem, ThetaPoly};
use crate::error::{Error, Result};

/// The monomial `E^e g^g h^h`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Mono {
    pub e: u32,
    pub g: u32,
    pub h: i32,
}

impl Mono {
    pub const ONE: Mono = Mono { e: 0, g: 0, h: 0 };

    pub fn new(e: u32, g: u32, h: i32) -> Self {
        Mono { e, g, h }
    }


    /// Weight `2e + (q−1)g + (q+1)h`.
    pub fn weight(self, q: u32) -> i64 {
        2 * self.e as i64 + (q as i64 - 1) * self.g as i64 + (q as i64 + 1) * self.h as i64
    }

    /// Type `e + h mod (q−1)`.
    pub fn ty(self, q: u32) -> i64 {
        (self.e as i64 + self.h as i64).rem_euclid((q as i64 - 1).max(1))
    }

    pub fn divides(self, o: Mono) -> bool {
        self.e <= o.e && self.g <= o.g && self.h <= o.h
    }

    fn total_degree(self) -> i64 {
        self.e as i64 + self.g as i64 + self.h as i64
    }

    /// Graded-lex comparison with `E > g > h`.
    pub fn cmp_grlex(self, o: Mono) -> std::cmp::Ordering {
        self.total_degree().cmp(&o.total_degree()).then(self.cmp(&o))
    }

    fn frobenius(self, step: u32) -> Mono {
        Mono { e: self.e * step, g: self.g * step, h: self.h * step as i32 }
    }

    pub fn to_text(self) -> String {
        let mut parts = Vec::new();
        for (name, k) in [("E", self.e as i64), ("g", self.g as i64), ("h", self.h as i64)] {
            match k {
                0 => {}
                1 => parts.push(name.to_string()),
                k if k < 0 => parts.push(format!("{name}^({k})")),
                k => parts.push(format!("{name}^{k}")),
            }
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

/// Element of `K[E, g, h, h^{-1}]`, canonical: sorted distinct monomials,
/// nonzero numerators over a common monic denominator coprime to them.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "FormJson", try_from = "FormJson")]
pub struct QMForm {
    f: Fq,
    den: ThetaPoly,
    terms: Vec<(Mono, ThetaPoly)>,
}

impl QMForm {
    pub fn zero(f: Fq) -> Self {
        QMForm { f, den: ThetaPoly::one(f), terms: Vec::new() }
    }
    pub fn one(f: Fq) -> Self {
        Self::constant(KElem::one(f))
    }
    pub fn constant(c: KElem) -> Self {
        Self::monomial(Mono::ONE, c)
    }
    pub fn monomial(m: Mono, c: KElem) -> Self {
        let f = c.field();
        if c.is_zero() {
            return Self::zero(f);
        }
        let (num, den) = c.into_parts();
        QMForm { f, den, terms: vec![(m, num)] }
    }
    pub fn from_int(f: Fq, n: i64) -> Self {
        Self::constant(KElem::from_int(f, n))
    }
    pub fn gen_e(f: Fq) -> Self {
        Self::monomial(Mono::new(1, 0, 0), KElem::one(f))
    }
    pub fn gen_g(f: Fq) -> Self {
        Self::monomial(Mono::new(0, 1, 0), KElem::one(f))
    }
    pub fn gen_h(f: Fq) -> Self {
        Self::monomial(Mono::new(0, 0, 1), KElem::one(f))
    }
    /// `Δ = −h^{q−1}`.
    pub fn delta(f: Fq) -> Self {
        Self::monomial(Mono::new(0, 0, f.q() as i32 - 1), KElem::from_int(f, -1))
    }

    /// Sum of `(monomial, coefficient)` pairs.
    pub fn from_terms(f: Fq, terms: impl IntoIterator<Item = (Mono, KElem)>) -> Self {
        let terms: Vec<(Mono, KElem)> = terms.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        let mut den = ThetaPoly::one(f);
        for (_, c) in &terms {
            if !c.den().is_one() {
                let g = den.gcd(c.den());
                den = den.mul(&c.den().divrem(&g).0);
            }
        }
        let nums = terms
            .into_iter()
            .map(|(m, c)| {
                let scale = den.divrem(c.den()).0;
                (m, c.num().mul(&scale))
            })
            .collect();
        Self::from_parts(f, den, nums)
    }

    /// Canonicalizes `Σ nums_m m / den` (monomials may repeat).
    pub(crate) fn from_parts(f: Fq, den: ThetaPoly, nums: Vec<(Mono, ThetaPoly)>) -> Self {
        let mut nums = nums;
        nums.sort_by_key(|a| a.0);
        let mut merged: Vec<(Mono, ThetaPoly)> = Vec::with_capacity(nums.len());
        for (m, p) in nums {
            match merged.last_mut() {
                Some((lm, lp)) if *lm == m => lp.add_assign(&p),
                _ => merged.push((m, p)),
            }
        }
        merged.retain(|(_, p)| !p.is_zero());
        Self::reduce(f, den, merged)
    }

    fn reduce(f: Fq, den: ThetaPoly, terms: Vec<(Mono, ThetaPoly)>) -> Self {
        if terms.is_empty() {
            return Self::zero(f);
        }
        if den.is_one() {
            return QMForm { f, den, terms };
        }
        let g = content_gcd(&den, terms.iter().map(|(_, p)| p));
        let (den, terms) = if g.is_one() {
            (den, terms)
        } else {
            (den.divrem(&g).0, terms.into_iter().map(|(m, p)| (m, p.divrem(&g).0)).collect())
        };
        let l = den.lead();
        if l == 1 {
            QMForm { f, den, terms }
        } else {
            let inv = f.inv(l);
            QMForm { f, den: den.scale(inv), terms: terms.into_iter().map(|(m, p)| (m, p.scale(inv))).collect() }
        }
    }

    pub fn field(&self) -> Fq {
        self.f
    }
    pub fn q(&self) -> u32 {
        self.f.q()
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn len(&self) -> usize {
        self.terms.len()
    }
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
    /// Common denominator of the coefficients.
    pub fn den(&self) -> &ThetaPoly {
        &self.den
    }
    /// Monomials with numerators over [`QMForm::den`], ascending.
    pub fn raw_terms(&self) -> &[(Mono, ThetaPoly)] {
        &self.terms
    }

    /// Monomials with their coefficients, ascending.
    pub fn terms(&self) -> impl Iterator<Item = (Mono, KElem)> + '_ {
        self.terms.iter().map(|(m, p)| (*m, KElem::new(p.clone(), self.den.clone()).expect("nonzero den")))
    }

    pub fn monomials(&self) -> impl Iterator<Item = Mono> + '_ {
        self.terms.iter().map(|(m, _)| *m)
    }

    pub fn coeff(&self, m: Mono) -> KElem {
        match self.terms.binary_search_by(|(x, _)| x.cmp(&m)) {
            Ok(i) => KElem::new(self.terms[i].1.clone(), self.den.clone()).expect("nonzero den"),
            Err(_) => KElem::zero(self.f),
        }
    }

    /// The value if the form is a constant.
    pub fn as_constant(&self) -> Option<KElem> {
        match self.terms.as_slice() {
            [] => Some(KElem::zero(self.f)),
            [(m, _)] if *m == Mono::ONE => Some(self.coeff(Mono::ONE)),
            _ => None,
        }
    }

    /// Degree in `E` (the depth), 0 for the zero form.
    pub fn e_degree(&self) -> u32 {
        self.terms.iter().map(|(m, _)| m.e).max().unwrap_or(0)
    }

    /// True if no negative power of `h` occurs.
    pub fn is_polynomial(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.h >= 0)
    }

    pub fn neg(&self) -> Self {
        QMForm { f: self.f, den: self.den.clone(), terms: self.terms.iter().map(|(m, p)| (*m, p.neg())).collect() }
    }

    pub fn add(&self, o: &Self) -> Self {
        self.lin(o, false)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.lin(o, true)
    }

    fn lin(&self, o: &Self, negate: bool) -> Self {
        if o.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return if negate { o.neg() } else { o.clone() };
        }
        let f = self.f;
        let (a, b, den) = if self.den == o.den {
            (None, None, self.den.clone())
        } else {
            let g = self.den.gcd(&o.den);
            let a = o.den.divrem(&g).0;
            let b = self.den.divrem(&g).0;
            let den = self.den.mul(&a);
            (Some(a), Some(b), den)
        };
        let scale = |p: &ThetaPoly, s: &Option<ThetaPoly>| match s {
            Some(s) => p.mul(s),
            None => p.clone(),
        };
        let mut out = Vec::with_capacity(self.terms.len() + o.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < o.terms.len() {
            let take_left = j == o.terms.len() || (i < self.terms.len() && self.terms[i].0 <= o.terms[j].0);
            let take_right = i == self.terms.len() || (j < o.terms.len() && o.terms[j].0 <= self.terms[i].0);
            if take_left && take_right {
                let x = scale(&self.terms[i].1, &a);
                let y = scale(&o.terms[j].1, &b);
                let s = if negate { x.sub(&y) } else { x.add(&y) };
                if !s.is_zero() {
                    out.push((self.terms[i].0, s));
                }
                i += 1;
                j += 1;
            } else if take_left {
                out.push((self.terms[i].0, scale(&self.terms[i].1, &a)));
                i += 1;
            } else {
                let y = scale(&o.terms[j].1, &b);
                out.push((o.terms[j].0, if negate { y.neg() } else { y }));
                j += 1;
            }
        }
        Self::reduce(f, den, out)
    }

    pub fn mul(&self, o: &Self) -> Self {
        let f = self.f;
        if self.is_zero() || o.is_zero() {
            return Self::zero(f);
        }
        if self.terms.len() == 1 || o.terms.len() == 1 {
            let (single, other) = if self.terms.len() == 1 { (self, o) } else { (o, self) };
            let (m, c) = &single.terms[0];
            let terms = other.terms.iter().map(|(x, p)| (*x * *m, p.mul(c))).collect();
            return Self::reduce(f, self.den.mul(&o.den), terms);
        }
        let mut acc: HashMap<Mono, PolyAcc> = HashMap::with_capacity(self.terms.len() * o.terms.len());
        for (m1, p1) in &self.terms {
            for (m2, p2) in &o.terms {
                acc.entry(*m1 * *m2).or_default().add_mul(f, p1.coeffs(), p2.coeffs());
            }
        }
        let mut terms: Vec<(Mono, ThetaPoly)> =
            acc.into_iter().map(|(m, a)| (m, a.finish(f))).filter(|(_, p)| !p.is_zero()).collect();
        terms.sort_by_key(|a| a.0);
        Self::reduce(f, self.den.mul(&o.den), terms)
    }

    pub fn scale(&self, c: &KElem) -> Self {
        if c.is_zero() {
            return Self::zero(self.f);
        }
        let terms = self.terms.iter().map(|(m, p)| (*m, p.mul(c.num()))).collect();
        Self::reduce(self.f, self.den.mul(c.den()), terms)
    }

    /// Multiplication by a monomial (negative `h` powers allowed).
    pub fn mul_mono(&self, m: Mono) -> Self {
        QMForm { f: self.f, den: self.den.clone(), terms: self.terms.iter().map(|(x, p)| (*x * m, p.clone())).collect() }
    }

    /// Multiplication by `h^k`, `k ∈ Z`.
    pub fn mul_h_pow(&self, k: i32) -> Self {
        self.mul_mono(Mono::new(0, 0, k))
    }

    /// `self^{q^s}`.
    pub fn frobenius(&self, s: u32) -> Self {
        if s == 0 {
            return self.clone();
        }
        let step = self.f.q().pow(s);
        let terms = self.terms.iter().map(|(m, p)| (m.frobenius(step), p.frobenius(s))).collect();
        QMForm { f: self.f, den: self.den.frobenius(s), terms }
    }

    /// Nonnegative power via base-`q` digits and Frobenius.
    pub fn pow(&self, k: u64) -> Self {
        let q = self.f.q() as u64;
        let mut r = Self::one(self.f);
        let mut k = k;
        let mut s = 0u32;
        while k > 0 {
            let d = k % q;
            if d > 0 {
                let b = self.frobenius(s);
                for _ in 0..d {
                    r = r.mul(&b);
                }
            }
            k /= q;
            s += 1;
        }
        r
    }

    /// Inverse of a Laurent unit `c·h^k`.
    pub fn inverse_unit(&self) -> Result<Self> {
        match self.terms.as_slice() {
            [(m, _)] if m.e == 0 && m.g == 0 => {
                let c = self.coeff(*m).inv()?;
                Ok(Self::monomial(Mono::new(0, 0, -m.h), c))
            }
            _ => Err(Error::InvalidArgument("form is not a unit c·h^k".into())),
        }
    }

    /// Coefficient of `X^j` in `f(E + X, g, h)`.
    pub fn partial_e(&self, j: u32) -> Self {
        let f = self.f;
        let mut out = Vec::new();
        for (m, p) in &self.terms {
            if m.e < j {
                continue;
            }
            let b = binom_char_p(m.e as i64, j as u64, f.p());
            if b != 0 {
                out.push((Mono::new(m.e - j, m.g, m.h), p.scale(b as u16)));
            }
        }
        Self::from_parts(f, self.den.clone(), out)
    }

    /// Substitutes `E`, `g`, `h` by forms (`h` must appear with
    /// nonnegative exponents).
    pub fn substitute(&self, e: &QMForm, g: &QMForm, h: &QMForm) -> Result<Self> {
        let f = self.f;
        let mut cache: HashMap<(u8, u32), QMForm> = HashMap::new();
        let mut pw = |which: u8, k: u32, base: &QMForm| -> QMForm {
            cache.entry((which, k)).or_insert_with(|| base.pow(k as u64)).clone()
        };
        let mut acc = Self::zero(f);
        for (m, c) in self.terms() {
            if m.h < 0 {
                return Err(Error::InvalidArgument("substitution into a Laurent form".into()));
            }
            let t = pw(0, m.e, e).mul(&pw(1, m.g, g)).mul(&pw(2, m.h as u32, h));
            acc = acc.add(&t.scale(&c));
        }
        Ok(acc)
    }

    /// Canonical text, e.g. `-E*g-h` or `g*h^3/(T^3-T)`.
    pub fn to_text(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (m, c) in self.terms().collect::<Vec<_>>().into_iter().rev() {
            parts.push(term_text(m, &c));
        }
        join_signed(&parts)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let terms: Vec<serde_json::Value> = self
            .terms()
            .map(|(m, c)| serde_json::json!([m.e, m.g, m.h, c.to_text()]))
            .collect();
        serde_json::json!({ "q": self.f.desc(), "terms": terms })
    }

    pub fn to_record(&self) -> FormJson {
        FormJson {
            q: self.f.desc().clone(),
            terms: self.terms().map(|(m, c)| (m.e, m.g, m.h, c.to_text())).collect(),
        }
    }

    /// Inverse of [`QMForm::to_record`].
    pub fn from_record(rec: &FormJson) -> Result<Self> {
        let f = GaloisField::get(&rec.q)?;
        let mut terms = Vec::with_capacity(rec.terms.len());
        for (e, g, h, s) in &rec.terms {
            terms.push((Mono::new(*e, *g, *h), crate::expr::parse_kelem(f, s)?));
        }
        Ok(Self::from_terms(f, terms))
    }
}

fn term_text(m: Mono, c: &KElem) -> String {
    use crate::algebra::poly::is_atomic;
    let num = c.num().to_text();
    let mono = m.to_text();
    let mut s = if m == Mono::ONE {
        if crate::algebra::poly::is_sum(&num) && !c.den().is_one() {
            format!("({num})")
        } else {
            num
        }
    } else if num == "1" {
        mono
    } else if num == "-1" {
        format!("-{mono}")
    } else if crate::algebra::poly::is_sum(&num) {
        format!("({num})*{mono}")
    } else {
        format!("{num}*{mono}")
    };
    if !c.den().is_one() {
        let d = c.den().to_text();
        let d = if is_atomic(&d) { d } else { format!("({d})") };
        s = format!("{s}/{d}");
    }
    s
}

/// Serialized form: `{"q": desc, "terms": [[i, j, k, "KElem"], ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormJson {
    pub q: FieldDesc,
    pub terms: Vec<(u32, u32, i32, String)>,
}

impl From<QMForm> for FormJson {
    fn from(f: QMForm) -> Self {
        f.to_record()
    }
}

impl TryFrom<FormJson> for QMForm {
    type Error = Error;
    fn try_from(rec: FormJson) -> Result<Self> {
        QMForm::from_record(&rec)
    }
}

impl fmt::Debug for QMForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

impl fmt::Display for QMForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

macro_rules! form_binop {
    ($tr:ident, $m:ident) => {
        impl std::ops::$tr<&QMForm> for &QMForm {
            type Output = QMForm;
            fn $m(self, rhs: &QMForm) -> QMForm {
                QMForm::$m(self, rhs)
            }
        }
        impl std::ops::$tr for QMForm {
            type Output = QMForm;
            fn $m(self, rhs: QMForm) -> QMForm {
                QMForm::$m(&self, &rhs)
            }
        }
    };
}
form_binop!(Add, add);
form_binop!(Sub, sub);
form_binop!(Mul, mul);

impl std::ops::Neg for &QMForm {
    type Output = QMForm;
    fn neg(self) -> QMForm {
        QMForm::neg(self)
    }
}
impl std::ops::Neg for QMForm {
    type Output = QMForm;
    fn neg(self) -> QMForm {
        QMForm::neg(&self)
    }
}

/// Lossless compact encoding: coefficient vectors of the numerators over a
/// shared denominator (field elements as their internal indices).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawForm {
    pub den: Vec<u16>,
    pub terms: Vec<(u32, u32, i32, Vec<u16>)>,
}

impl QMForm {
    pub fn to_raw(&self) -> RawForm {
        RawForm {
            den: self.den.coeffs().to_vec(),
            terms: self.terms.iter().map(|(m, p)| (m.e, m.g, m.h, p.coeffs().to_vec())).collect(),
        }
    }

    pub fn from_raw(f: Fq, r: &RawForm) -> Result<Self> {
        let q = f.q() as u16;
        let ok = |v: &[u16]| v.iter().all(|&x| x < q);
        if !ok(&r.den) || r.terms.iter().any(|t| !ok(&t.3)) {
            return Err(Error::Consistency("field element out of range".into()));
        }
        let den = ThetaPoly::from_coeffs(f, r.den.clone());
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let terms = r
            .terms
            .iter()
            .map(|(e, g, h, c)| (Mono::new(*e, *g, *h), ThetaPoly::from_coeffs(f, c.clone())))
            .collect();
        Ok(Self::from_parts(f, den, terms))
    }
}

impl std::ops::Mul for Mono {
    type Output = Mono;
    fn mul(self, o: Mono) -> Mono {
        Mono { e: self.e + o.e, g: self.g + o.g, h: self.h + o.h }
    }
}
