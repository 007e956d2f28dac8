//! Dense polynomials in θ over `F_q`.

use std::fmt;

use super::field::{signed_digit, Fq};

/// Element of `A = F_q[θ]`, coefficients low to high, no trailing zeros.
#[derive(Clone)]
pub struct ThetaPoly {
    f: Fq,
    c: Vec<u16>,
}

const KARATSUBA_CUTOFF: usize = 40;

impl ThetaPoly {
    pub fn zero(f: Fq) -> Self {
        ThetaPoly { f, c: Vec::new() }
    }
    pub fn one(f: Fq) -> Self {
        ThetaPoly { f, c: vec![1] }
    }
    pub fn constant(f: Fq, a: u16) -> Self {
        Self::from_coeffs(f, vec![a])
    }
    pub fn theta(f: Fq) -> Self {
        ThetaPoly { f, c: vec![0, 1] }
    }
    /// `a·θ^d`.
    pub fn monomial(f: Fq, a: u16, d: usize) -> Self {
        if a == 0 {
            return Self::zero(f);
        }
        let mut c = vec![0u16; d + 1];
        c[d] = a;
        ThetaPoly { f, c }
    }
    pub fn from_coeffs(f: Fq, mut c: Vec<u16>) -> Self {
        while c.last() == Some(&0) {
            c.pop();
        }
        ThetaPoly { f, c }
    }
    pub fn from_int(f: Fq, n: i64) -> Self {
        Self::constant(f, f.from_int(n))
    }

    #[inline]
    pub fn field(&self) -> Fq {
        self.f
    }
    #[inline]
    pub fn coeffs(&self) -> &[u16] {
        &self.c
    }
    pub fn into_coeffs(self) -> Vec<u16> {
        self.c
    }
    #[inline]
    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }
    #[inline]
    pub fn is_one(&self) -> bool {
        self.c.len() == 1 && self.c[0] == 1
    }
    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }
    /// Degree, `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }
    pub fn lead(&self) -> u16 {
        self.c.last().copied().unwrap_or(0)
    }
    pub fn is_monic(&self) -> bool {
        self.lead() == 1
    }
    pub fn coeff(&self, i: usize) -> u16 {
        self.c.get(i).copied().unwrap_or(0)
    }
    /// Number of nonzero coefficients.
    pub fn weight(&self) -> usize {
        self.c.iter().filter(|&&x| x != 0).count()
    }

    pub fn neg(&self) -> Self {
        let f = self.f;
        ThetaPoly { f, c: self.c.iter().map(|&x| f.neg(x)).collect() }
    }

    pub fn scale(&self, a: u16) -> Self {
        if a == 0 {
            return Self::zero(self.f);
        }
        if a == 1 {
            return self.clone();
        }
        let f = self.f;
        ThetaPoly { f, c: self.c.iter().map(|&x| f.mul(x, a)).collect() }
    }

    pub fn add(&self, o: &Self) -> Self {
        let f = self.f;
        let n = self.c.len().max(o.c.len());
        let mut c = Vec::with_capacity(n);
        for i in 0..n {
            c.push(f.add(self.coeff(i), o.coeff(i)));
        }
        Self::from_coeffs(f, c)
    }

    pub fn sub(&self, o: &Self) -> Self {
        let f = self.f;
        let n = self.c.len().max(o.c.len());
        let mut c = Vec::with_capacity(n);
        for i in 0..n {
            c.push(f.sub(self.coeff(i), o.coeff(i)));
        }
        Self::from_coeffs(f, c)
    }

    pub fn add_assign(&mut self, o: &Self) {
        let f = self.f;
        if self.c.len() < o.c.len() {
            self.c.resize(o.c.len(), 0);
        }
        for (a, &b) in self.c.iter_mut().zip(o.c.iter()) {
            *a = f.add(*a, b);
        }
        while self.c.last() == Some(&0) {
            self.c.pop();
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero(self.f);
        }
        Self::from_coeffs(self.f, mul_slices(self.f, &self.c, &o.c))
    }

    pub fn pow(&self, mut k: u64) -> Self {
        let mut base = self.clone();
        let mut r = Self::one(self.f);
        while k > 0 {
            if k & 1 == 1 {
                r = r.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        r
    }

    /// Image under `θ ↦ θ^{q^s}`; equals `self^{q^s}` because coefficients lie in `F_q`.
    pub fn frobenius(&self, s: u32) -> Self {
        if s == 0 || self.c.len() <= 1 {
            return self.clone();
        }
        let step = (self.f.q() as usize).pow(s);
        let mut c = vec![0u16; (self.c.len() - 1) * step + 1];
        for (i, &x) in self.c.iter().enumerate() {
            c[i * step] = x;
        }
        ThetaPoly { f: self.f, c }
    }

    /// Euclidean division.
    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let f = self.f;
        if self.c.len() < d.c.len() {
            return (Self::zero(f), self.clone());
        }
        let mut r = self.c.clone();
        let dl = d.c.len();
        let inv = f.inv(d.lead());
        let mut q = vec![0u16; r.len() - dl + 1];
        for k in (0..q.len()).rev() {
            let t = r[k + dl - 1];
            if t == 0 {
                continue;
            }
            let a = f.mul(t, inv);
            q[k] = a;
            for (j, &dj) in d.c.iter().enumerate() {
                if dj != 0 {
                    r[k + j] = f.sub(r[k + j], f.mul(a, dj));
                }
            }
        }
        r.truncate(dl - 1);
        (Self::from_coeffs(f, q), Self::from_coeffs(f, r))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.divrem(d).1
    }

    /// Exact quotient, `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        if d.is_one() {
            return Some(self.clone());
        }
        let (q, r) = self.divrem(d);
        r.is_zero().then_some(q)
    }

    /// Returns `(monic, lead)` with `self = lead · monic`.
    pub fn make_monic(&self) -> (Self, u16) {
        let l = self.lead();
        if l == 0 || l == 1 {
            return (self.clone(), l);
        }
        (self.scale(self.f.inv(l)), l)
    }

    /// Monic gcd (zero iff both inputs are zero).
    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        if a.c.len() < b.c.len() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            if b.c.len() == 1 {
                return Self::one(self.f);
            }
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.make_monic().0
    }

    /// Evaluation at a point of `F_q`.
    pub fn eval(&self, x: u16) -> u16 {
        let f = self.f;
        self.c.iter().rev().fold(0u16, |acc, &c| f.add(f.mul(acc, x), c))
    }

    /// Text form with `T` for θ, e.g. `T^3-T`.
    pub fn to_text(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let f = self.f;
        let mut parts = Vec::new();
        for d in (0..self.c.len()).rev() {
            let a = self.c[d];
            if a == 0 {
                continue;
            }
            let cs = if f.is_prime_field() { signed_digit(a as u32, f.p()) } else { f.fmt_elem(a) };
            let mono = match d {
                0 => String::new(),
                1 => "T".to_string(),
                _ => format!("T^{d}"),
            };
            let term = if mono.is_empty() {
                if is_sum(&cs) && !parts.is_empty() {
                    format!("({cs})")
                } else {
                    cs
                }
            } else if cs == "1" {
                mono
            } else if cs == "-1" {
                format!("-{mono}")
            } else if is_sum(&cs) {
                format!("({cs})*{mono}")
            } else {
                format!("{cs}*{mono}")
            };
            parts.push(term);
        }
        join_signed(&parts)
    }
}

/// Joins signed summands with `+`, leaving a leading `-` as the operator.
pub(crate) fn join_signed(parts: &[String]) -> String {
    let mut out = String::new();
    for (i, s) in parts.iter().enumerate() {
        if i > 0 && !s.starts_with('-') {
            out.push('+');
        }
        out.push_str(s);
    }
    out
}

/// True if `s` has a top-level `+` or binary `-`.
pub(crate) fn is_sum(s: &str) -> bool {
    let mut depth = 0i32;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            '+' | '-' if depth == 0 && i > 0 => return true,
            _ => {}
        }
    }
    false
}

/// True if `s` is a single atom or power, safe as the right operand of `/`.
pub(crate) fn is_atomic(s: &str) -> bool {
    !is_sum(s) && !s.contains('*') && !s.contains('/') && !s.starts_with('-')
}

impl PartialEq for ThetaPoly {
    fn eq(&self, o: &Self) -> bool {
        std::ptr::eq(self.f, o.f) && self.c == o.c
    }
}
impl Eq for ThetaPoly {}

impl std::hash::Hash for ThetaPoly {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.c.hash(state);
    }
}

impl fmt::Debug for ThetaPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

impl fmt::Display for ThetaPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

macro_rules! poly_binop {
    ($tr:ident, $m:ident) => {
        impl std::ops::$tr<&ThetaPoly> for &ThetaPoly {
            type Output = ThetaPoly;
            fn $m(self, rhs: &ThetaPoly) -> ThetaPoly {
                ThetaPoly::$m(self, rhs)
            }
        }
        impl std::ops::$tr for ThetaPoly {
            type Output = ThetaPoly;
            fn $m(self, rhs: ThetaPoly) -> ThetaPoly {
                ThetaPoly::$m(&self, &rhs)
            }
        }
    };
}
poly_binop!(Add, add);
poly_binop!(Sub, sub);
poly_binop!(Mul, mul);

impl std::ops::Neg for &ThetaPoly {
    type Output = ThetaPoly;
    fn neg(self) -> ThetaPoly {
        ThetaPoly::neg(self)
    }
}

// ---------------------------------------------------------------------------
// Slice kernels shared with the sparse containers.

/// Product of two nonempty coefficient slices.
pub(crate) fn mul_slices(f: Fq, a: &[u16], b: &[u16]) -> Vec<u16> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    if f.is_prime_field() {
        let mut acc = vec![0u64; a.len() + b.len() - 1];
        acc_mul_prime(&mut acc, a, b);
        let p = f.p() as u64;
        acc.into_iter().map(|x| (x % p) as u16).collect()
    } else {
        let mut out = vec![0u16; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                if y != 0 {
                    out[i + j] = f.add(out[i + j], f.mul(x, y));
                }
            }
        }
        out
    }
}

/// `acc += a·b` with unreduced integer accumulation (prime fields only).
fn acc_mul_prime(acc: &mut [u64], a: &[u16], b: &[u16]) {
    if a.len() >= KARATSUBA_CUTOFF && b.len() >= KARATSUBA_CUTOFF {
        karatsuba_acc(acc, a, b);
        return;
    }
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        let x = x as u64;
        for (dst, &y) in acc[i..].iter_mut().zip(b.iter()) {
            *dst += x * y as u64;
        }
    }
}

/// Karatsuba over the integers on the residue representatives, so the
/// result is exact before the final reduction mod `p`.
fn karatsuba_acc(acc: &mut [u64], a: &[u16], b: &[u16]) {
    let ai: Vec<u64> = a.iter().map(|&x| x as u64).collect();
    let bi: Vec<u64> = b.iter().map(|&x| x as u64).collect();
    let prod = kara_u64(&ai, &bi);
    for (d, x) in acc.iter_mut().zip(prod) {
        *d += x;
    }
}

fn kara_u64(a: &[u64], b: &[u64]) -> Vec<u64> {
    let n = a.len().min(b.len());
    if n < KARATSUBA_CUTOFF {
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        return out;
    }
    let m = n / 2;
    let (a0, a1) = a.split_at(m);
    let (b0, b1) = b.split_at(m);
    let z0 = kara_u64(a0, b0);
    let z2 = kara_u64(a1, b1);
    let mut sa = a1.to_vec();
    for (i, &x) in a0.iter().enumerate() {
        sa[i] += x;
    }
    let mut sb = b1.to_vec();
    for (i, &x) in b0.iter().enumerate() {
        sb[i] += x;
    }
    let z1 = kara_u64(&sa, &sb);
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in z0.iter().enumerate() {
        out[i] += x;
    }
    for (i, &x) in z2.iter().enumerate() {
        out[i + 2 * m] += x;
    }
    for (i, &x) in z1.iter().enumerate() {
        let mid = x - z0.get(i).copied().unwrap_or(0) - z2.get(i).copied().unwrap_or(0);
        out[i + m] += mid;
    }
    out
}

/// Accumulator for sums of products of θ-polynomials, reducing once at the end.
#[derive(Clone, Debug, Default)]
pub(crate) struct PolyAcc {
    v: Vec<u64>,
}

impl PolyAcc {
    pub fn new() -> Self {
        PolyAcc { v: Vec::new() }
    }

    fn grow(&mut self, n: usize) {
        if self.v.len() < n {
            self.v.resize(n, 0);
        }
    }

    /// `self += a·b`.
    pub fn add_mul(&mut self, f: Fq, a: &[u16], b: &[u16]) {
        if a.is_empty() || b.is_empty() {
            return;
        }
        self.grow(a.len() + b.len() - 1);
        if f.is_prime_field() {
            acc_mul_prime(&mut self.v, a, b);
            // keep headroom: values stay below 2^63 for any realistic sum,
            // but fold when the accumulator gets large in coefficient count
            if a.len().min(b.len()) > 1 << 16 {
                self.fold(f);
            }
        } else {
            for (i, &x) in a.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                for (j, &y) in b.iter().enumerate() {
                    if y != 0 {
                        let d = &mut self.v[i + j];
                        *d = f.add(*d as u16, f.mul(x, y)) as u64;
                    }
                }
            }
        }
    }

    fn fold(&mut self, f: Fq) {
        let p = f.p() as u64;
        for x in self.v.iter_mut() {
            *x %= p;
        }
    }

    pub fn finish(self, f: Fq) -> ThetaPoly {
        if f.is_prime_field() {
            let p = f.p() as u64;
            ThetaPoly::from_coeffs(f, self.v.into_iter().map(|x| (x % p) as u16).collect())
        } else {
            ThetaPoly::from_coeffs(f, self.v.into_iter().map(|x| x as u16).collect())
        }
    }
}

/// Monic gcd of a denominator with a family of numerators, stopping early at 1.
pub(crate) fn content_gcd<'a>(den: &ThetaPoly, nums: impl IntoIterator<Item = &'a ThetaPoly>) -> ThetaPoly {
    let mut g = den.make_monic().0;
    for n in nums {
        if g.is_one() {
            break;
        }
        if n.is_zero() {
            continue;
        }
        g = g.gcd(n);
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::{FieldDesc, GaloisField};
    use rand::{Rng, SeedableRng};

    fn rand_poly(f: Fq, rng: &mut impl Rng, deg: usize) -> ThetaPoly {
        ThetaPoly::from_coeffs(f, (0..=deg).map(|_| rng.gen_range(0..f.q() as u16)).collect())
    }

    #[test]
    fn divrem_reconstructs() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(1);
        for f in [GaloisField::prime(3), GaloisField::get(&FieldDesc::new(2, 2).unwrap()).unwrap()] {
            for _ in 0..200 {
                let (da, db) = (rng.gen_range(0..20), rng.gen_range(0..8));
                let a = rand_poly(f, &mut rng, da);
                let mut b = rand_poly(f, &mut rng, db);
                if b.is_zero() {
                    b = ThetaPoly::one(f);
                }
                let (q, r) = a.divrem(&b);
                assert_eq!(&(&q * &b) + &r, a);
                assert!(r.degree().is_none_or(|d| d < b.degree().unwrap()));
            }
        }
    }

    #[test]
    fn karatsuba_matches_schoolbook() {
        let f = GaloisField::prime(5);
        let mut rng = rand::rngs::StdRng::seed_from_u64(2);
        for _ in 0..20 {
            let (da, db) = (rng.gen_range(40..300), rng.gen_range(40..300));
            let a = rand_poly(f, &mut rng, da);
            let b = rand_poly(f, &mut rng, db);
            let fast = a.mul(&b);
            let mut slow = vec![0u64; a.coeffs().len() + b.coeffs().len() - 1];
            for (i, &x) in a.coeffs().iter().enumerate() {
                for (j, &y) in b.coeffs().iter().enumerate() {
                    slow[i + j] += x as u64 * y as u64;
                }
            }
            let slow = ThetaPoly::from_coeffs(f, slow.into_iter().map(|x| (x % 5) as u16).collect());
            assert_eq!(fast, slow);
        }
    }

    #[test]
    fn gcd_divides_both() {
        let f = GaloisField::prime(3);
        let mut rng = rand::rngs::StdRng::seed_from_u64(3);
        for _ in 0..100 {
            let c = rand_poly(f, &mut rng, 3);
            let a = &rand_poly(f, &mut rng, 5) * &c;
            let b = &rand_poly(f, &mut rng, 4) * &c;
            let g = a.gcd(&b);
            if a.is_zero() && b.is_zero() {
                continue;
            }
            assert!(g.is_monic());
            assert!(a.div_exact(&g).is_some());
            assert!(b.div_exact(&g).is_some());
            if !c.is_zero() {
                assert!(g.div_exact(&c.make_monic().0).is_some());
            }
        }
    }

    #[test]
    fn frobenius_is_qth_power() {
        let f = GaloisField::prime(3);
        let a = ThetaPoly::from_coeffs(f, vec![1, 2, 0, 1]);
        assert_eq!(a.frobenius(1), a.pow(3));
        assert_eq!(a.frobenius(2), a.pow(9));
    }

    #[test]
    fn text_form() {
        let f = GaloisField::prime(3);
        let t = ThetaPoly::theta(f);
        assert_eq!((&t.pow(3) - &t).to_text(), "T^3-T");
        assert_eq!(ThetaPoly::from_coeffs(f, vec![1, 0, 2]).to_text(), "-T^2+1");
        let f4 = GaloisField::get(&FieldDesc::new(2, 2).unwrap()).unwrap();
        assert_eq!(ThetaPoly::from_coeffs(f4, vec![3, 2]).to_text(), "w*T+(1+w)");
    }
}
