//! Goss polynomials of the Carlitz lattice.

use crate::algebra::{carlitz_factorial, Fq, KElem};

use super::series::USeries;

/// `G_1, .., G_nmax` as coefficient vectors in `X` (index = degree).
#[derive(Clone, Debug)]
pub struct GossTable {
    polys: Vec<Vec<KElem>>,
}

impl GossTable {
    /// `G_n = X·(G_{n−1} + Σ_{i≥1, q^i<n} D_i^{−1} G_{n−q^i})`, `G_1 = X`.
    pub fn new(f: Fq, nmax: usize) -> Self {
        let q = f.q() as usize;
        let mut inv_d: Vec<KElem> = Vec::new();
        let mut i = 1u32;
        while q.pow(i) < nmax {
            inv_d.push(KElem::from_poly(carlitz_factorial(f, i)).inv().expect("D_i nonzero"));
            i += 1;
        }
        let mut polys: Vec<Vec<KElem>> = vec![Vec::new(), vec![KElem::zero(f), KElem::one(f)]];
        for n in 2..=nmax {
            let mut inner = polys[n - 1].clone();
            for (idx, dinv) in inv_d.iter().enumerate() {
                let qi = q.pow(idx as u32 + 1);
                if qi >= n {
                    break;
                }
                let g = &polys[n - qi];
                if inner.len() < g.len() {
                    inner.resize(g.len(), KElem::zero(f));
                }
                for (k, c) in g.iter().enumerate() {
                    if !c.is_zero() {
                        inner[k] = inner[k].add(&c.mul(dinv));
                    }
                }
            }
            let mut p = vec![KElem::zero(f)];
            p.extend(inner);
            while p.last().is_some_and(|c| c.is_zero()) {
                p.pop();
            }
            polys.push(p);
        }
        GossTable { polys }
    }

    pub fn nmax(&self) -> usize {
        self.polys.len() - 1
    }

    /// Coefficients of `G_n` (empty for `n = 0`).
    pub fn get(&self, n: usize) -> &[KElem] {
        &self.polys[n]
    }

    /// `G_n(s)` for a series `s`, truncated to `limit`.
    pub fn eval_series(&self, n: usize, s: &USeries, limit: usize) -> USeries {
        let f = s.field();
        let g = &self.polys[n];
        let prec = s.prec().min(limit);
        let mut acc = USeries::zero(f, prec);
        let mut pw = USeries::one(f, prec);
        for (k, c) in g.iter().enumerate() {
            if k > 0 {
                pw = pw.mul_trunc(s, prec);
                if pw.valuation().is_none() {
                    break;
                }
            }
            if !c.is_zero() {
                acc = acc.add(&pw.scale(c));
            }
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{bracket, GaloisField};

    #[test]
    fn base_cases_and_zero_constant() {
        for p in [2u32, 3, 5] {
            let f = GaloisField::prime(p);
            let t = GossTable::new(f, 40);
            for n in 1..=p as usize {
                let mut expect = vec![KElem::zero(f); n + 1];
                expect[n] = KElem::one(f);
                assert_eq!(t.get(n), &expect[..]);
            }
            for n in 1..=40 {
                let g = t.get(n);
                assert!(g[0].is_zero());
                assert!(g.len() <= n + 1);
            }
        }
    }

    #[test]
    fn q2_g3() {
        let f = GaloisField::prime(2);
        let t = GossTable::new(f, 3);
        let inv1 = KElem::from_poly(bracket(f, 1)).inv().unwrap();
        assert_eq!(t.get(3), &[KElem::zero(f), KElem::zero(f), inv1, KElem::one(f)][..]);
    }

    #[test]
    fn homogeneity_under_scalars() {
        // G_n(cX) = c^n G_n(X) for c in F_q^*
        for p in [3u32, 5] {
            let f = GaloisField::prime(p);
            let t = GossTable::new(f, 60);
            for n in 1..=60 {
                for (k, c) in t.get(n).iter().enumerate() {
                    if !c.is_zero() {
                        assert_eq!((n - k) % (p as usize - 1), 0, "n={n} k={k}");
                    }
                }
            }
        }
    }
}
