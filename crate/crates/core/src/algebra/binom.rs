//! Binomial coefficients reduced modulo `p`.

/// `binom(n, i) mod p`.
///
/// For `n ≥ 0` this uses Lucas' theorem. For `n < 0` it uses the product
/// convention `n(n-1)⋯(n-i+1)/i!`, which equals `(-1)^i binom(i-n-1, i)`.
pub fn binom_char_p(n: i64, i: u64, p: u32) -> u32 {
    if n >= 0 {
        return lucas(n as u64, i, p);
    }
    let m = (i as i64 - n - 1) as u64;
    let b = lucas(m, i, p);
    if i % 2 == 1 && b != 0 {
        p - b
    } else {
        b
    }
}

fn lucas(mut n: u64, mut k: u64, p: u32) -> u32 {
    let pp = p as u64;
    let mut r = 1u64;
    while k > 0 || n > 0 {
        let (nd, kd) = (n % pp, k % pp);
        if kd > nd {
            return 0;
        }
        r = r * small_binom(nd, kd, pp) % pp;
        n /= pp;
        k /= pp;
    }
    r as u32
}

fn small_binom(n: u64, k: u64, p: u64) -> u64 {
    let mut num = 1u64;
    let mut den = 1u64;
    for j in 0..k {
        num = num * ((n - j) % p) % p;
        den = den * ((j + 1) % p) % p;
    }
    num * inv_mod(den, p) % p
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let mut r = 1u64;
    let mut b = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exact(n: u64, k: u64) -> u128 {
        if k > n {
            return 0;
        }
        let mut r = 1u128;
        for j in 0..k {
            r = r * (n - j) as u128 / (j + 1) as u128;
        }
        r
    }

    #[test]
    fn lucas_matches_integer_binomials() {
        for p in [2u32, 3, 5, 7] {
            let lim = (p as u64).pow(4).min(120);
            for n in 0..lim {
                for k in 0..=n {
                    assert_eq!(binom_char_p(n as i64, k, p) as u128, exact(n, k) % p as u128, "p={p} n={n} k={k}");
                }
            }
        }
    }

    #[test]
    fn examples() {
        assert_eq!(binom_char_p(3, 2, 3), 0);
        assert_eq!(binom_char_p(5, 2, 3), 1);
        assert_eq!(binom_char_p(17, 0, 3), 1);
        assert_eq!(binom_char_p(-4, 0, 3), 1);
    }

    #[test]
    fn negative_upper_index_product_convention() {
        for p in [2u32, 3, 5] {
            for n in -30i64..0 {
                for i in 0..8u64 {
                    let mut num: i128 = 1;
                    let mut fact: i128 = 1;
                    for k in 1..=i as i128 {
                        num *= n as i128 - k + 1;
                        fact *= k;
                    }
                    let v = (num / fact).rem_euclid(p as i128) as u32;
                    assert_eq!(binom_char_p(n, i, p), v, "p={p} n={n} i={i}");
                }
            }
        }
    }
}
