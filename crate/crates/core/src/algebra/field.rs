//! Finite fields `F_q`, `q = p^e`, with table-driven arithmetic.
//!
//! Fields are interned: [`GaloisField::get`] returns a `&'static` handle, so
//! elements and polynomials can carry their field by pointer without
//! reference counting. Two handles denote the same field iff they are the
//! same pointer.

use std::fmt;
use std::sync::{Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported field size; elements are stored as `u16`.
pub const MAX_Q: u32 = 1 << 15;

/// Parameters of a finite field `F_{p^e}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldDesc {
    pub p: u32,
    pub e: u32,
    /// Monic irreducible modulus over `F_p`, coefficients low to high
    /// (length `e + 1`). Empty for `e = 1`.
    #[serde(default)]
    pub modulus: Vec<u32>,
}

impl FieldDesc {
    /// Prime field `F_p`.
    pub fn prime(p: u32) -> Self {
        FieldDesc { p, e: 1, modulus: Vec::new() }
    }

    /// `F_{p^e}` with the default modulus (first monic irreducible of
    /// degree `e` in the enumeration order of [`default_modulus`]).
    pub fn new(p: u32, e: u32) -> Result<Self> {
        validate_pe(p, e)?;
        if e == 1 {
            return Ok(Self::prime(p));
        }
        Ok(FieldDesc { p, e, modulus: default_modulus(p, e) })
    }

    /// `F_{p^e}` with an explicit modulus (low-to-high coefficients, monic).
    pub fn with_modulus(p: u32, e: u32, modulus: Vec<u32>) -> Result<Self> {
        validate_pe(p, e)?;
        if e == 1 {
            return Ok(Self::prime(p));
        }
        if modulus.len() != e as usize + 1 || modulus[e as usize] != 1 {
            return Err(Error::InvalidField(format!(
                "modulus must be monic of degree {e}"
            )));
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(Error::InvalidField("modulus coefficient out of range".into()));
        }
        if !is_irreducible_fp(&modulus, p) {
            return Err(Error::InvalidField("modulus is reducible over F_p".into()));
        }
        Ok(FieldDesc { p, e, modulus })
    }

    pub fn q(&self) -> u32 {
        self.p.pow(self.e)
    }

    /// Short identifier used in cache keys, e.g. `q3` or `q4_p2_m111`.
    pub fn key(&self) -> String {
        if self.e == 1 {
            format!("q{}", self.p)
        } else {
            let m: Vec<String> = self.modulus.iter().map(|c| c.to_string()).collect();
            format!("q{}_p{}_m{}", self.q(), self.p, m.join("-"))
        }
    }
}

fn validate_pe(p: u32, e: u32) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::InvalidField(format!("{p} is not prime")));
    }
    if e == 0 {
        return Err(Error::InvalidField("extension degree must be >= 1".into()));
    }
    match p.checked_pow(e) {
        Some(q) if q <= MAX_Q => Ok(()),
        _ => Err(Error::InvalidField(format!("q = {p}^{e} exceeds {MAX_Q}"))),
    }
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

// Dense polynomial helpers over F_p (low-to-high), used only for modulus checks.
fn fp_trim(a: &mut Vec<u32>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn fp_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    fp_trim(&mut r);
    let db = b.len() - 1;
    let inv_lb = fp_inv(b[db], p);
    while r.len() > db {
        let shift = r.len() - 1 - db;
        let c = (r[r.len() - 1] as u64 * inv_lb as u64 % p as u64) as u32;
        for (i, &bi) in b.iter().enumerate() {
            let t = (c as u64 * bi as u64 % p as u64) as u32;
            r[shift + i] = (r[shift + i] + p - t) % p;
        }
        fp_trim(&mut r);
    }
    r
}

fn fp_inv(a: u32, p: u32) -> u32 {
    let mut r = 1u64;
    let mut b = a as u64;
    let mut k = p - 2;
    while k > 0 {
        if k & 1 == 1 {
            r = r * b % p as u64;
        }
        b = b * b % p as u64;
        k >>= 1;
    }
    r as u32
}

/// Irreducibility by trial division against every monic polynomial of
/// degree `1..=deg/2`.
fn is_irreducible_fp(m: &[u32], p: u32) -> bool {
    let deg = m.len() - 1;
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for v in 0..count {
            let mut cand = Vec::with_capacity(d + 1);
            let mut x = v;
            for _ in 0..d {
                cand.push((x % p as u64) as u32);
                x /= p as u64;
            }
            cand.push(1);
            if fp_rem(m, &cand, p).is_empty() {
                return false;
            }
        }
    }
    true
}

/// First monic irreducible of degree `e`, enumerating the lower
/// coefficients `(a_0, .., a_{e-1})` as base-`p` digits of `0, 1, 2, ..`.
pub fn default_modulus(p: u32, e: u32) -> Vec<u32> {
    let count = (p as u64).pow(e);
    for v in 0..count {
        let mut cand = Vec::with_capacity(e as usize + 1);
        let mut x = v;
        for _ in 0..e {
            cand.push((x % p as u64) as u32);
            x /= p as u64;
        }
        cand.push(1);
        if is_irreducible_fp(&cand, p) {
            return cand;
        }
    }
    unreachable!("irreducible polynomials of every degree exist")
}

/// Arithmetic tables for one finite field.
pub struct GaloisField {
    desc: FieldDesc,
    p: u32,
    e: u32,
    q: u32,
    /// `exp[i] = gen^i`, length `2(q-1)` so sums of logs need no reduction.
    exp: Vec<u16>,
    /// `log[a]` for `a != 0`.
    log: Vec<u32>,
    /// Full addition table for small non-prime fields.
    add_tab: Option<Vec<u16>>,
    neg_tab: Vec<u16>,
}

/// Interned field handle.
pub type Fq = &'static GaloisField;

static REGISTRY: OnceLock<Mutex<Vec<Fq>>> = OnceLock::new();

impl GaloisField {
    /// Returns the interned field for `desc`, building its tables on first use.
    pub fn get(desc: &FieldDesc) -> Result<Fq> {
        let desc = if desc.e == 1 {
            FieldDesc::prime(desc.p)
        } else if desc.modulus.is_empty() {
            FieldDesc::new(desc.p, desc.e)?
        } else {
            FieldDesc::with_modulus(desc.p, desc.e, desc.modulus.clone())?
        };
        validate_pe(desc.p, desc.e)?;
        let reg = REGISTRY.get_or_init(|| Mutex::new(Vec::new()));
        let mut guard = reg.lock().expect("field registry poisoned");
        if let Some(f) = guard.iter().find(|f| f.desc == desc) {
            return Ok(f);
        }
        let f: Fq = Box::leak(Box::new(Self::build(desc)));
        guard.push(f);
        Ok(f)
    }

    /// Convenience for prime fields; panics on a non-prime argument.
    pub fn prime(p: u32) -> Fq {
        Self::get(&FieldDesc::prime(p)).expect("prime field")
    }

    fn build(desc: FieldDesc) -> Self {
        let p = desc.p;
        let e = desc.e;
        let q = desc.q();
        let add_digits = |a: u32, b: u32| -> u32 {
            if e == 1 {
                return (a + b) % p;
            }
            let (mut x, mut y, mut r, mut base) = (a, b, 0u32, 1u32);
            for _ in 0..e {
                r += ((x % p + y % p) % p) * base;
                x /= p;
                y /= p;
                base *= p;
            }
            r
        };
        // multiplication of coordinate vectors modulo the modulus, used to
        // find a generator and fill the log tables
        let mul_slow = |a: u32, b: u32| -> u32 {
            if e == 1 {
                return ((a as u64 * b as u64) % p as u64) as u32;
            }
            let digits = |mut x: u32| {
                let mut v = vec![0u32; e as usize];
                for d in v.iter_mut() {
                    *d = x % p;
                    x /= p;
                }
                v
            };
            let (da, db) = (digits(a), digits(b));
            let mut prod = vec![0u32; 2 * e as usize - 1];
            for (i, &x) in da.iter().enumerate() {
                for (j, &y) in db.iter().enumerate() {
                    prod[i + j] = (prod[i + j] + x * y) % p;
                }
            }
            let r = fp_rem(&prod, &desc.modulus, p);
            let mut out = 0u32;
            for (i, &c) in r.iter().enumerate() {
                out += c * p.pow(i as u32);
            }
            out
        };
        let order = q - 1;
        let mut gen = 0u32;
        'search: for cand in 1..q {
            let mut x = 1u32;
            for k in 1..=order {
                x = mul_slow(x, cand);
                if x == 1 {
                    if k == order {
                        gen = cand;
                        break 'search;
                    }
                    continue 'search;
                }
            }
        }
        assert!(gen != 0 || q == 2, "no generator found");
        if q == 2 {
            gen = 1;
        }
        let mut exp = vec![0u16; 2 * order as usize];
        let mut log = vec![0u32; q as usize];
        let mut x = 1u32;
        for i in 0..order as usize {
            exp[i] = x as u16;
            exp[i + order as usize] = x as u16;
            log[x as usize] = i as u32;
            x = mul_slow(x, gen);
        }
        let add_tab = if e > 1 && q <= 256 {
            let mut t = vec![0u16; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    t[(a * q + b) as usize] = add_digits(a, b) as u16;
                }
            }
            Some(t)
        } else {
            None
        };
        let mut neg_tab = vec![0u16; q as usize];
        for a in 0..q {
            let n = if e == 1 {
                (p - a) % p
            } else {
                let (mut x, mut r, mut base) = (a, 0u32, 1u32);
                for _ in 0..e {
                    r += ((p - x % p) % p) * base;
                    x /= p;
                    base *= p;
                }
                r
            };
            neg_tab[a as usize] = n as u16;
        }
        GaloisField { desc, p, e, q, exp, log, add_tab, neg_tab }
    }

    pub fn desc(&self) -> &FieldDesc {
        &self.desc
    }
    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }
    #[inline]
    pub fn e(&self) -> u32 {
        self.e
    }
    #[inline]
    pub fn q(&self) -> u32 {
        self.q
    }
    #[inline]
    pub fn is_prime_field(&self) -> bool {
        self.e == 1
    }

    #[inline]
    pub fn add(&self, a: u16, b: u16) -> u16 {
        if self.e == 1 {
            let s = a as u32 + b as u32;
            (if s >= self.p { s - self.p } else { s }) as u16
        } else if let Some(t) = &self.add_tab {
            t[a as usize * self.q as usize + b as usize]
        } else {
            let (mut x, mut y, mut r, mut base) = (a as u32, b as u32, 0u32, 1u32);
            for _ in 0..self.e {
                r += ((x % self.p + y % self.p) % self.p) * base;
                x /= self.p;
                y /= self.p;
                base *= self.p;
            }
            r as u16
        }
    }

    #[inline]
    pub fn neg(&self, a: u16) -> u16 {
        self.neg_tab[a as usize]
    }

    #[inline]
    pub fn sub(&self, a: u16, b: u16) -> u16 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u16, b: u16) -> u16 {
        if a == 0 || b == 0 {
            return 0;
        }
        if self.e == 1 {
            return ((a as u32 * b as u32) % self.p) as u16;
        }
        self.exp[(self.log[a as usize] + self.log[b as usize]) as usize]
    }

    #[inline]
    pub fn inv(&self, a: u16) -> u16 {
        assert!(a != 0, "inverse of zero in F_q");
        let order = self.q - 1;
        self.exp[((order - self.log[a as usize]) % order) as usize]
    }

    pub fn pow(&self, a: u16, k: u64) -> u16 {
        if k == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let order = (self.q - 1) as u64;
        self.exp[((self.log[a as usize] as u64 * (k % order)) % order) as usize]
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> u16 {
        n.rem_euclid(self.p as i64) as u16
    }

    /// Coordinates of `a` in the modulus basis `1, w, .., w^{e-1}`.
    pub fn coords(&self, a: u16) -> Vec<u32> {
        let mut x = a as u32;
        (0..self.e)
            .map(|_| {
                let d = x % self.p;
                x /= self.p;
                d
            })
            .collect()
    }

    /// Element with the given coordinates (reduced mod `p`).
    pub fn from_coords(&self, c: &[i64]) -> u16 {
        let mut r = 0u32;
        let mut base = 1u32;
        for &d in c.iter().take(self.e as usize) {
            r += d.rem_euclid(self.p as i64) as u32 * base;
            base *= self.p;
        }
        r as u16
    }

    /// The class of the modulus root `w` (equals `0` in a prime field is
    /// never requested; callers check `e > 1`).
    pub fn w(&self) -> u16 {
        debug_assert!(self.e > 1);
        self.p as u16
    }

    /// All elements, `0` first.
    pub fn elements(&self) -> impl Iterator<Item = u16> {
        0..self.q as u16
    }

    /// Text form of a single element: signed integer for prime fields,
    /// `a0+a1*w+..` otherwise.
    pub fn fmt_elem(&self, a: u16) -> String {
        if self.e == 1 {
            return signed_digit(a as u32, self.p);
        }
        let mut parts = Vec::new();
        for (i, d) in self.coords(a).into_iter().enumerate() {
            if d == 0 {
                continue;
            }
            let s = signed_digit(d, self.p);
            let mono = match i {
                0 => s,
                1 if s == "1" => "w".to_string(),
                1 if s == "-1" => "-w".to_string(),
                1 => format!("{s}*w"),
                _ if s == "1" => format!("w^{i}"),
                _ if s == "-1" => format!("-w^{i}"),
                _ => format!("{s}*w^{i}"),
            };
            parts.push(mono);
        }
        if parts.is_empty() {
            return "0".into();
        }
        let mut out = parts[0].clone();
        for s in &parts[1..] {
            if let Some(rest) = s.strip_prefix('-') {
                out.push('-');
                out.push_str(rest);
            } else {
                out.push('+');
                out.push_str(s);
            }
        }
        out
    }
}

/// Residue printed in the symmetric range (`p - 1` prints as `-1`).
pub fn signed_digit(d: u32, p: u32) -> String {
    if p > 2 && d > p / 2 {
        format!("-{}", p - d)
    } else {
        d.to_string()
    }
}

impl PartialEq for GaloisField {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self, other) || self.desc == other.desc
    }
}
impl Eq for GaloisField {}

impl fmt::Debug for GaloisField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.q)
    }
}

/// A standalone element of `F_q`.
#[derive(Clone, Copy)]
pub struct FqElem {
    pub field: Fq,
    pub v: u16,
}

impl FqElem {
    pub fn new(field: Fq, v: u16) -> Self {
        debug_assert!((v as u32) < field.q());
        FqElem { field, v }
    }
    pub fn zero(field: Fq) -> Self {
        FqElem { field, v: 0 }
    }
    pub fn one(field: Fq) -> Self {
        FqElem { field, v: 1 }
    }
    pub fn is_zero(&self) -> bool {
        self.v == 0
    }
    pub fn inv(self) -> Self {
        FqElem::new(self.field, self.field.inv(self.v))
    }
    pub fn pow(self, k: u64) -> Self {
        FqElem::new(self.field, self.field.pow(self.v, k))
    }
}

impl PartialEq for FqElem {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.field, other.field) && self.v == other.v
    }
}
impl Eq for FqElem {}

impl fmt::Debug for FqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.field.fmt_elem(self.v))
    }
}

impl fmt::Display for FqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.field.fmt_elem(self.v))
    }
}

macro_rules! fq_binop {
    ($tr:ident, $m:ident, $op:ident) => {
        impl std::ops::$tr for FqElem {
            type Output = FqElem;
            fn $m(self, rhs: FqElem) -> FqElem {
                debug_assert!(std::ptr::eq(self.field, rhs.field));
                FqElem::new(self.field, self.field.$op(self.v, rhs.v))
            }
        }
    };
}
fq_binop!(Add, add, add);
fq_binop!(Sub, sub, sub);
fq_binop!(Mul, mul, mul);

impl std::ops::Neg for FqElem {
    type Output = FqElem;
    fn neg(self) -> FqElem {
        FqElem::new(self.field, self.field.neg(self.v))
    }
}
