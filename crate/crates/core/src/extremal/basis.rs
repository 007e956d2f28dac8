use serde::{Deserialize, Serialize};

use crate::forms::Mono;

/// Monomial basis `E^i g^j h^k` of the forms of weight `w`, type `m` and
/// depth at most `l`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedBasis {
    pub q: u32,
    pub w: i64,
    pub m: i64,
    pub l: i64,
    pub monomials: Vec<Mono>,
}

impl GradedBasis {
    pub fn dim(&self) -> usize {
        self.monomials.len()
    }
    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }
}

/// Enumerates `2i + (q−1)j + (q+1)k = w`, `i + k ≡ m (mod q−1)`, `i ≤ l`,
/// ordered by increasing depth, then increasing power of `h`.
pub fn basis(q: u32, w: i64, m: i64, l: i64) -> GradedBasis {
    let qi = q as i64;
    let modulus = (qi - 1).max(1);
    let m = m.rem_euclid(modulus);
    let mut monomials = Vec::new();
    if w >= 0 && l >= 0 {
        for i in 0..=l.min(w / 2) {
            let rest = w - 2 * i;
            for k in 0..=rest / (qi + 1) {
                let r = rest - (qi + 1) * k;
                if r % (qi - 1) != 0 || (i + k - m).rem_euclid(modulus) != 0 {
                    continue;
                }
                monomials.push(Mono::new(i as u32, (r / (qi - 1)) as u32, k as i32));
            }
        }
    }
    GradedBasis { q, w, m, l, monomials }
}
