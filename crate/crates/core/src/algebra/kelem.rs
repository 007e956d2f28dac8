//! Rational functions `K = F_q(θ)` in canonical form.

use std::fmt;

use super::field::Fq;
use super::poly::{is_atomic, is_sum, ThetaPoly};
use crate::error::{Error, Result};

/// `num/den` with `den` monic and `gcd(num, den) = 1`; zero is `0/1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct KElem {
    num: ThetaPoly,
    den: ThetaPoly,
}

impl KElem {
    /// Canonicalizes `num/den`.
    pub fn new(num: ThetaPoly, den: ThetaPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalize(num, den))
    }

    fn normalize(num: ThetaPoly, den: ThetaPoly) -> Self {
        let f = num.field();
        if num.is_zero() {
            return Self::zero(f);
        }
        if den.is_one() {
            return KElem { num, den };
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.divrem(&g).0, den.divrem(&g).0)
        };
        let l = den.lead();
        if l == 1 {
            KElem { num, den }
        } else {
            let inv = f.inv(l);
            KElem { num: num.scale(inv), den: den.scale(inv) }
        }
    }

    pub fn zero(f: Fq) -> Self {
        KElem { num: ThetaPoly::zero(f), den: ThetaPoly::one(f) }
    }
    pub fn one(f: Fq) -> Self {
        KElem { num: ThetaPoly::one(f), den: ThetaPoly::one(f) }
    }
    pub fn from_int(f: Fq, n: i64) -> Self {
        Self::from_poly(ThetaPoly::from_int(f, n))
    }
    pub fn from_fq(f: Fq, a: u16) -> Self {
        Self::from_poly(ThetaPoly::constant(f, a))
    }
    pub fn theta(f: Fq) -> Self {
        Self::from_poly(ThetaPoly::theta(f))
    }
    pub fn from_poly(p: ThetaPoly) -> Self {
        let f = p.field();
        KElem { num: p, den: ThetaPoly::one(f) }
    }

    pub fn field(&self) -> Fq {
        self.num.field()
    }
    pub fn num(&self) -> &ThetaPoly {
        &self.num
    }
    pub fn den(&self) -> &ThetaPoly {
        &self.den
    }
    pub fn into_parts(self) -> (ThetaPoly, ThetaPoly) {
        (self.num, self.den)
    }
    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }
    /// True if the element lies in `A = F_q[θ]`.
    pub fn is_integral(&self) -> bool {
        self.den.is_one()
    }
    /// The element as an `F_q` constant, if it is one.
    pub fn as_fq(&self) -> Option<u16> {
        (self.den.is_one() && self.num.is_constant()).then(|| self.num.coeff(0))
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.den.is_one() && o.den.is_one() {
            return Self::from_poly(self.num.add(&o.num));
        }
        if self.den == o.den {
            return Self::normalize(self.num.add(&o.num), self.den.clone());
        }
        let g = self.den.gcd(&o.den);
        let a = self.den.divrem(&g).0;
        let b = o.den.divrem(&g).0;
        let num = self.num.mul(&b).add(&o.num.mul(&a));
        Self::normalize(num, a.mul(&o.den))
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        KElem { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero(self.field());
        }
        if self.den.is_one() && o.den.is_one() {
            return Self::from_poly(self.num.mul(&o.num));
        }
        // cross-cancel before multiplying to keep degrees small
        let g1 = self.num.gcd(&o.den);
        let g2 = o.num.gcd(&self.den);
        let n1 = self.num.divrem(&g1).0;
        let d2 = o.den.divrem(&g1).0;
        let n2 = o.num.divrem(&g2).0;
        let d1 = self.den.divrem(&g2).0;
        let num = n1.mul(&n2);
        let den = d1.mul(&d2);
        let l = den.lead();
        if l == 1 {
            KElem { num, den }
        } else {
            let inv = self.field().inv(l);
            KElem { num: num.scale(inv), den: den.scale(inv) }
        }
    }

    /// Product with a polynomial.
    pub fn mul_poly(&self, p: &ThetaPoly) -> Self {
        self.mul(&Self::from_poly(p.clone()))
    }

    pub fn scale_fq(&self, a: u16) -> Self {
        if a == 0 {
            return Self::zero(self.field());
        }
        KElem { num: self.num.scale(a), den: self.den.clone() }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (num, den) = (self.den.clone(), self.num.clone());
        let l = den.lead();
        let inv = self.field().inv(l);
        Ok(KElem { num: num.scale(inv), den: den.scale(inv) })
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn pow(&self, k: i64) -> Result<Self> {
        if k < 0 {
            return self.inv()?.pow(-k);
        }
        let f = self.field();
        let q = f.q() as u64;
        let mut k = k as u64;
        // base-q digits with Frobenius for the q-power steps
        let mut r = Self::one(f);
        let mut s = 0u32;
        while k > 0 {
            let d = k % q;
            if d > 0 {
                let b = self.frobenius(s);
                r = r.mul(&KElem { num: b.num.pow(d), den: b.den.pow(d) });
            }
            k /= q;
            s += 1;
        }
        Ok(r)
    }

    /// `self^{q^s}`.
    pub fn frobenius(&self, s: u32) -> Self {
        KElem { num: self.num.frobenius(s), den: self.den.frobenius(s) }
    }

    /// Canonical text, e.g. `(T^3-T)/(T^2+1)`.
    pub fn to_text(&self) -> String {
        let n = self.num.to_text();
        if self.den.is_one() {
            return n;
        }
        let d = self.den.to_text();
        let n = if is_sum(&n) { format!("({n})") } else { n };
        let d = if is_atomic(&d) { d } else { format!("({d})") };
        format!("{n}/{d}")
    }
}

impl fmt::Debug for KElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

impl fmt::Display for KElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

macro_rules! k_binop {
    ($tr:ident, $m:ident) => {
        impl std::ops::$tr<&KElem> for &KElem {
            type Output = KElem;
            fn $m(self, rhs: &KElem) -> KElem {
                KElem::$m(self, rhs)
            }
        }
        impl std::ops::$tr for KElem {
            type Output = KElem;
            fn $m(self, rhs: KElem) -> KElem {
                KElem::$m(&self, &rhs)
            }
        }
    };
}
k_binop!(Add, add);
k_binop!(Sub, sub);
k_binop!(Mul, mul);

impl std::ops::Neg for &KElem {
    type Output = KElem;
    fn neg(self) -> KElem {
        KElem::neg(self)
    }
}
impl std::ops::Neg for KElem {
    type Output = KElem;
    fn neg(self) -> KElem {
        KElem::neg(&self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::GaloisField;

    #[test]
    fn canonical_from_unreduced() {
        let f = GaloisField::prime(3);
        let t = ThetaPoly::theta(f);
        let one = ThetaPoly::one(f);
        // (2T^2+2T)/(2T) = T+1
        let a = KElem::new(t.mul(&t.add(&one)).scale(2), t.scale(2)).unwrap();
        let b = KElem::new(t.add(&one), one.clone()).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.num().coeffs(), b.num().coeffs());
        let c = KElem::new(t.clone(), t.mul(&t).scale(2)).unwrap();
        assert!(c.den().is_monic());
        assert_eq!(c.to_text(), "-1/T");
    }

    #[test]
    fn field_ops() {
        let f = GaloisField::prime(5);
        let t = KElem::theta(f);
        let x = t.add(&KElem::from_int(f, 2)).inv().unwrap();
        let y = t.pow(3).unwrap().sub(&t);
        let z = x.mul(&y).div(&y).unwrap();
        assert_eq!(z, x);
        assert_eq!(x.add(&x.neg()), KElem::zero(f));
        assert_eq!(y.frobenius(1), y.pow(5).unwrap());
    }

    #[test]
    fn text() {
        let f = GaloisField::prime(3);
        let t = ThetaPoly::theta(f);
        let num = t.pow(3).sub(&t);
        let den = t.pow(2).add(&ThetaPoly::one(f));
        assert_eq!(KElem::new(num, den).unwrap().to_text(), "(T^3-T)/(T^2+1)");
    }
}
