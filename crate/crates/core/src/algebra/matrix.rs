//! Dense matrices over `K` and fraction-free elimination.

use super::field::Fq;
use super::kelem::KElem;
use super::poly::ThetaPoly;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KMatrix {
    f: Fq,
    rows: usize,
    cols: usize,
    data: Vec<KElem>,
}

/// Result of [`KMatrix::row_reduce_fraction_free`].
#[derive(Clone, Debug)]
pub struct FfEchelon {
    pub echelon: KMatrix,
    pub transform: KMatrix,
    pub pivots: Vec<usize>,
}

impl KMatrix {
    pub fn zeros(f: Fq, rows: usize, cols: usize) -> Self {
        KMatrix { f, rows, cols, data: vec![KElem::zero(f); rows * cols] }
    }

    pub fn identity(f: Fq, n: usize) -> Self {
        let mut m = Self::zeros(f, n, n);
        for i in 0..n {
            m.set(i, i, KElem::one(f));
        }
        m
    }

    /// Builds a matrix from rows of equal length.
    pub fn from_rows(f: Fq, rows: Vec<Vec<KElem>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        KMatrix { f, rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn field(&self) -> Fq {
        self.f
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn get(&self, i: usize, j: usize) -> &KElem {
        &self.data[i * self.cols + j]
    }
    pub fn set(&mut self, i: usize, j: usize, v: KElem) {
        self.data[i * self.cols + j] = v;
    }
    pub fn row(&self, i: usize) -> &[KElem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul(&self, o: &KMatrix) -> KMatrix {
        assert_eq!(self.cols, o.rows);
        let mut out = KMatrix::zeros(self.f, self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j).add(&a.mul(b));
                        out.set(i, j, v);
                    }
                }
            }
        }
        out
    }

    /// Reduced row echelon form by textbook Gaussian elimination over `K`.
    pub fn rref(&self) -> (KMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else { continue };
            m.swap_rows(p, r);
            let inv = m.get(r, c).inv().expect("nonzero pivot");
            for j in 0..m.cols {
                let v = m.get(r, j).mul(&inv);
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let factor = m.get(i, c).clone();
                for j in 0..m.cols {
                    let v = m.get(i, j).sub(&factor.mul(m.get(r, j)));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Fraction-free (Bareiss) row echelon form with transform.
    ///
    /// Each row is first scaled by the lcm of its denominators, then the
    /// augmented matrix `[m | I]` is eliminated over `A = F_q[θ]` with exact
    /// division by the previous pivot. Zero rows are placed last.
    pub fn row_reduce_fraction_free(&self) -> FfEchelon {
        let f = self.f;
        let (n, c) = (self.rows, self.cols);
        let w = c + n;
        let mut a: Vec<Vec<ThetaPoly>> = Vec::with_capacity(n);
        for i in 0..n {
            let mut l = ThetaPoly::one(f);
            for x in self.row(i) {
                if !x.den().is_one() {
                    let g = l.gcd(x.den());
                    l = l.mul(&x.den().divrem(&g).0);
                }
            }
            let mut row = Vec::with_capacity(w);
            for x in self.row(i) {
                row.push(x.num().mul(&l.divrem(x.den()).0));
            }
            for j in 0..n {
                row.push(if j == i { l.clone() } else { ThetaPoly::zero(f) });
            }
            a.push(row);
        }
        let mut prev = ThetaPoly::one(f);
        let mut pivots = Vec::new();
        let mut r = 0usize;
        for col in 0..c {
            if r == n {
                break;
            }
            // smallest-degree nonzero pivot limits coefficient growth
            let p = (r..n)
                .filter(|&i| !a[i][col].is_zero())
                .min_by_key(|&i| a[i][col].degree().unwrap_or(0));
            let Some(p) = p else { continue };
            a.swap(p, r);
            let (top, bottom) = a.split_at_mut(r + 1);
            let pr = &top[r];
            let piv = pr[col].clone();
            for row in bottom.iter_mut() {
                let lead = row[col].clone();
                for j in 0..w {
                    let x = piv.mul(&row[j]).sub(&lead.mul(&pr[j]));
                    row[j] = if prev.is_one() {
                        x
                    } else {
                        x.div_exact(&prev).expect("Bareiss division is exact")
                    };
                }
            }
            prev = piv;
            pivots.push(col);
            r += 1;
        }
        let mut ech = KMatrix::zeros(f, n, c);
        let mut tr = KMatrix::zeros(f, n, n);
        for (i, row) in a.into_iter().enumerate() {
            for (j, x) in row.into_iter().enumerate() {
                let v = KElem::from_poly(x);
                if j < c {
                    ech.set(i, j, v);
                } else {
                    tr.set(i, j - c, v);
                }
            }
        }
        FfEchelon { echelon: ech, transform: tr, pivots }
    }

    /// Determinant by fraction-free elimination.
    pub fn det(&self) -> KElem {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        if n == 0 {
            return KElem::one(self.f);
        }
        let e = self.row_reduce_fraction_free();
        if e.pivots.len() < n {
            return KElem::zero(self.f);
        }
        // det(transform)·det(m) = det(echelon); both are triangular up to the
        // row permutation, which cancels because it is shared.
        let de = (0..n).fold(KElem::one(self.f), |acc, i| acc.mul(e.echelon.get(i, i)));
        let dt = e.transform.rref_det();
        de.div(&dt).expect("invertible transform")
    }

    fn rref_det(&self) -> KElem {
        let mut m = self.clone();
        let n = m.rows;
        let mut d = KElem::one(self.f);
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m.get(i, c).is_zero()) else {
                return KElem::zero(self.f);
            };
            if p != c {
                m.swap_rows(p, c);
                d = d.neg();
            }
            let piv = m.get(c, c).clone();
            d = d.mul(&piv);
            let inv = piv.inv().expect("nonzero");
            for i in c + 1..n {
                if m.get(i, c).is_zero() {
                    continue;
                }
                let factor = m.get(i, c).mul(&inv);
                for j in c..n {
                    let v = m.get(i, j).sub(&factor.mul(m.get(c, j)));
                    m.set(i, j, v);
                }
            }
        }
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::GaloisField;
    use rand::{Rng, SeedableRng};

    fn rand_k(f: Fq, rng: &mut impl Rng) -> KElem {
        let mut p = |d: usize| ThetaPoly::from_coeffs(f, (0..=d).map(|_| rng.gen_range(0..f.q() as u16)).collect());
        let num = p(2);
        let mut den = p(1);
        if den.is_zero() {
            den = ThetaPoly::one(f);
        }
        KElem::new(num, den).unwrap()
    }

    #[test]
    fn identity_is_echelon() {
        let f = GaloisField::prime(3);
        let e = KMatrix::identity(f, 2).row_reduce_fraction_free();
        assert_eq!(e.pivots, vec![0, 1]);
        assert_eq!(e.echelon, KMatrix::identity(f, 2));
    }

    #[test]
    fn duplicate_rows_have_rank_one() {
        let f = GaloisField::prime(3);
        let t = KElem::theta(f);
        let m = KMatrix::from_rows(f, vec![vec![t.clone(), KElem::one(f)], vec![t, KElem::one(f)]]);
        let e = m.row_reduce_fraction_free();
        assert_eq!(e.pivots, vec![0]);
        assert!(e.echelon.row(1).iter().all(|x| x.is_zero()));
    }

    #[test]
    fn random_matches_naive_elimination() {
        let f = GaloisField::prime(3);
        let mut rng = rand::rngs::StdRng::seed_from_u64(11);
        for trial in 0..20 {
            let rows: Vec<Vec<KElem>> = (0..5)
                .map(|_| {
                    (0..8)
                        .map(|_| if rng.gen_bool(0.3) { KElem::zero(f) } else { rand_k(f, &mut rng) })
                        .collect()
                })
                .collect();
            let mut m = KMatrix::from_rows(f, rows);
            if trial % 4 == 0 {
                // force a dependency
                for j in 0..8 {
                    let v = m.get(0, j).add(m.get(1, j));
                    m.set(4, j, v);
                }
            }
            let e = m.row_reduce_fraction_free();
            assert_eq!(e.transform.mul(&m), e.echelon);
            assert!(e.pivots.windows(2).all(|w| w[0] < w[1]));
            assert_eq!(e.echelon.rref(), m.rref());
            assert_ne!(e.transform.rref_det(), KElem::zero(f));
        }
    }

    #[test]
    fn rank_invariant_under_row_scaling() {
        let f = GaloisField::prime(5);
        let mut rng = rand::rngs::StdRng::seed_from_u64(5);
        let rows: Vec<Vec<KElem>> = (0..4).map(|_| (0..6).map(|_| rand_k(f, &mut rng)).collect()).collect();
        let m = KMatrix::from_rows(f, rows.clone());
        let scaled: Vec<Vec<KElem>> = rows
            .into_iter()
            .map(|r| {
                let mut s = rand_k(f, &mut rng);
                if s.is_zero() {
                    s = KElem::theta(f);
                }
                r.into_iter().map(|x| x.mul(&s)).collect()
            })
            .collect();
        let m2 = KMatrix::from_rows(f, scaled);
        assert_eq!(m.row_reduce_fraction_free().pivots.len(), m2.row_reduce_fraction_free().pivots.len());
    }

    #[test]
    fn det_of_small_matrix() {
        let f = GaloisField::prime(5);
        let t = KElem::theta(f);
        let one = KElem::one(f);
        let m = KMatrix::from_rows(f, vec![vec![t.clone(), one.clone()], vec![one.clone(), t.clone()]]);
        assert_eq!(m.det(), t.mul(&t).sub(&one));
    }
}
