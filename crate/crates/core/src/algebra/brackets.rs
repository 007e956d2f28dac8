//! The constants `[k]`, `L_k` and the Carlitz factorials `D_i`.

use super::field::Fq;
use super::poly::ThetaPoly;

/// `[k] = θ^{q^k} − θ` for `k ≥ 1`, and `[0] = 1`.
pub fn bracket(f: Fq, k: u32) -> ThetaPoly {
    if k == 0 {
        return ThetaPoly::one(f);
    }
    let d = (f.q() as usize).pow(k);
    ThetaPoly::monomial(f, 1, d).sub(&ThetaPoly::theta(f))
}

/// `L_k = [k][k-1]⋯[1]`, `L_0 = 1`.
pub fn lprod(f: Fq, k: u32) -> ThetaPoly {
    (1..=k).fold(ThetaPoly::one(f), |acc, i| acc.mul(&bracket(f, i)))
}

/// `D_0 = 1`, `D_i = [i]·D_{i-1}^q`.
pub fn carlitz_factorial(f: Fq, i: u32) -> ThetaPoly {
    (1..=i).fold(ThetaPoly::one(f), |acc, j| bracket(f, j).mul(&acc.frobenius(1)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::GaloisField;

    #[test]
    fn small_values() {
        let f3 = GaloisField::prime(3);
        assert!(bracket(f3, 0).is_one());
        assert_eq!(bracket(f3, 1).to_text(), "T^3-T");
        assert_eq!(lprod(f3, 1), bracket(f3, 1));
        assert_eq!(carlitz_factorial(f3, 1), bracket(f3, 1));
        let f2 = GaloisField::prime(2);
        assert_eq!(bracket(f2, 2).to_text(), "T^4+T");
        assert_eq!(lprod(f2, 2), bracket(f2, 2).mul(&bracket(f2, 1)));
        assert_eq!(carlitz_factorial(f2, 2), bracket(f2, 2).mul(&bracket(f2, 1).pow(2)));
    }

    #[test]
    fn degrees() {
        for p in [2u32, 3, 5] {
            let f = GaloisField::prime(p);
            let q = p as usize;
            for k in 0..4u32 {
                let qk = q.pow(k);
                assert_eq!(bracket(f, k).degree(), Some(if k == 0 { 0 } else { qk }));
                let lk: usize = (1..=k).map(|i| q.pow(i)).sum();
                assert_eq!(lprod(f, k).degree(), Some(lk));
                assert_eq!(carlitz_factorial(f, k).degree(), Some(k as usize * qk));
            }
        }
    }
}
