//! The u-expansions of `E`, `g`, `h` and `Δ`.

use crate::algebra::{bracket, Fq, KElem};
use crate::error::{Error, Result};

use super::eisenstein::{eisenstein_gk, false_eisenstein};
use super::goss::GossTable;
use super::series::USeries;

#[derive(Clone, Debug)]
pub struct BaseExpansions {
    pub prec: usize,
    pub e: USeries,
    pub g: USeries,
    pub h: USeries,
    pub delta: USeries,
}

impl BaseExpansions {
    pub fn truncate(&self, prec: usize) -> Self {
        BaseExpansions {
            prec: prec.min(self.prec),
            e: self.e.truncate(prec),
            g: self.g.truncate(prec),
            h: self.h.truncate(prec),
            delta: self.delta.truncate(prec),
        }
    }
}

fn check(cond: bool, what: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Consistency(what.to_string()))
    }
}

/// Base expansions to precision `prec`, with internal consistency checks.
pub fn base_expansions(f: Fq, prec: usize) -> Result<BaseExpansions> {
    let q = f.q() as usize;
    let prec = prec.max(q * q);
    // the root extraction for h loses q−2 terms
    let work = prec + q;
    let goss = GossTable::new(f, q * q - 1);
    let g = eisenstein_gk(f, 1, work, &goss)?;
    let g2 = eisenstein_gk(f, 2, work, &goss)?;
    let b1 = KElem::from_poly(bracket(f, 1));
    let delta = g.pow_trunc(q as u64 + 1, work).sub(&g2).scale(&b1.inv()?);
    check(delta.is_integral(), "Δ has integral coefficients")?;
    let unit = delta.neg().unshift(q - 1)?;
    let w = unit.root_1unit(q as u64 - 1)?;
    check(w.pow_trunc(q as u64 - 1, unit.prec()) == unit, "(q−1)-th root of −Δ/u^{q−1} converged")?;
    let h = w.shift(1).neg();
    let e = false_eisenstein(f, work)?;
    let out = BaseExpansions {
        prec,
        e: e.truncate(prec),
        g: g.truncate(prec),
        h: h.truncate(prec),
        delta: delta.truncate(prec),
    };
    cross_checks(f, &out)?;
    Ok(out)
}

fn cross_checks(f: Fq, b: &BaseExpansions) -> Result<()> {
    let q = f.q() as usize;
    let b1 = KElem::from_poly(bracket(f, 1));
    // A: −Eg − h = [1]u^q + ⋯
    let x1 = b.e.mul(&b.g).add(&b.h).neg();
    check(x1.valuation() == Some(q) && x1.coeff(q) == b1, "−Eg−h = [1]u^q + ⋯")?;
    // B: Δ = −h^{q−1}
    let hq1 = b.h.pow_trunc(q as u64 - 1, b.prec).neg();
    check(hq1 == b.delta.truncate(hq1.prec()), "Δ = −h^{q−1}")?;
    // C: valuation and leading coefficient of Δ
    let lead = if q % 2 == 1 { KElem::from_int(f, -1) } else { KElem::one(f) };
    check(b.delta.valuation() == Some(q - 1) && b.delta.coeff(q - 1) == lead, "Δ = −(−1)^{q−1}u^{q−1} + ⋯")?;
    check(
        b.e.is_integral() && b.g.is_integral() && b.h.is_integral(),
        "E, g, h have integral coefficients",
    )?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{FieldDesc, GaloisField};

    #[test]
    fn leading_terms() {
        for p in [2u32, 3, 5] {
            let f = GaloisField::prime(p);
            let q = p as usize;
            let b = base_expansions(f, q * q * q).unwrap();
            let one = KElem::one(f);
            let second = 1 + (q - 1) * (q - 1);
            // E = u(1 + u^{(q−1)²} + ⋯)
            assert_eq!(b.e.valuation(), Some(1));
            assert_eq!(b.e.coeff(1), one);
            assert_eq!((2..b.prec).find(|&n| !b.e.coeff(n).is_zero()), Some(second));
            assert_eq!(b.e.coeff(second), one);
            // h = −u(1 + u^{(q−1)²} + ⋯)
            assert_eq!(b.h.coeff(1), one.neg());
            assert_eq!((2..b.prec).find(|&n| !b.h.coeff(n).is_zero()), Some(second));
            assert_eq!(b.h.coeff(second), one.neg());
            // g = 1 − [1]u^{q−1} + ⋯
            assert_eq!(b.g.coeff(0), one);
            assert_eq!((1..b.prec).find(|&n| !b.g.coeff(n).is_zero()), Some(q - 1));
            assert_eq!(b.g.coeff(q - 1), KElem::from_poly(bracket(f, 1)).neg());
        }
    }

    #[test]
    fn precision_soundness() {
        let f = GaloisField::prime(3);
        let a = base_expansions(f, 20).unwrap();
        let b = base_expansions(f, 45).unwrap().truncate(a.prec);
        assert_eq!(a.e, b.e);
        assert_eq!(a.g, b.g);
        assert_eq!(a.h, b.h);
        assert_eq!(a.delta, b.delta);
    }

    #[test]
    fn eisenstein_integral_and_g2_relation() {
        for p in [2u32, 3] {
            let f = GaloisField::prime(p);
            let q = p as usize;
            let prec = q * q * q;
            let goss = GossTable::new(f, q.pow(3) - 1);
            for k in 1..=3 {
                let gk = eisenstein_gk(f, k, prec, &goss).unwrap();
                assert!(gk.is_integral());
                assert_eq!(gk.coeff(0), KElem::one(f));
            }
            let b = base_expansions(f, prec).unwrap();
            let g2 = eisenstein_gk(f, 2, prec, &goss).unwrap();
            let rhs = b
                .h
                .pow(q as u64 - 1)
                .scale(&KElem::from_poly(bracket(f, 1)))
                .add(&b.g.pow(q as u64 + 1));
            assert_eq!(g2, rhs.truncate(prec));
        }
    }

    #[test]
    fn extension_field_q4() {
        let f = GaloisField::get(&FieldDesc::new(2, 2).unwrap()).unwrap();
        let b = base_expansions(f, 64).unwrap();
        assert_eq!(b.e.coeff(1), KElem::one(f));
        assert_eq!((2..b.prec).find(|&n| !b.e.coeff(n).is_zero()), Some(10));
    }

    #[test]
    fn fixed_point_root_agrees() {
        // w^{q−1} = c  ⇔  w = w^q / c: iterate the contraction from w = 1
        let f = GaloisField::prime(5);
        let b = base_expansions(f, 60).unwrap();
        let c = b.delta.neg().unshift(4).unwrap();
        let cinv = c.inverse().unwrap();
        let mut w = USeries::one(f, c.prec());
        for _ in 0..6 {
            w = w.frobenius(1, c.prec()).mul_trunc(&cinv, c.prec());
        }
        assert_eq!(w.shift(1).neg().truncate(b.prec), b.h.truncate(w.prec() + 1));
    }
}
