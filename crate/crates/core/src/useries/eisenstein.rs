//! Normalized Eisenstein series `g_k` and the false Eisenstein series `E`.

use rayon::prelude::*;

use crate::algebra::{lprod, Fq, KElem};
use crate::error::Result;

use super::carlitz::{monics_of_degree, u_of_az};
use super::goss::GossTable;
use super::series::USeries;

/// Monic `a` with `q^{deg a} < prec`, by degree then coefficients.
fn contributing_monics(f: Fq, prec: usize) -> Vec<crate::algebra::ThetaPoly> {
    let q = f.q() as usize;
    let mut out = Vec::new();
    let mut d = 0u32;
    while q.pow(d) < prec {
        out.extend(monics_of_degree(f, d as usize));
        d += 1;
    }
    out
}

fn sum_series(f: Fq, prec: usize, parts: Vec<USeries>) -> USeries {
    parts.into_iter().fold(USeries::zero(f, prec), |acc, s| acc.add(&s))
}

/// `g_k = 1 + (−1)^k L_k Σ_{a monic} G_{q^k−1}(u_a)` to precision `prec`.
pub fn eisenstein_gk(f: Fq, k: u32, prec: usize, goss: &GossTable) -> Result<USeries> {
    let w = (f.q() as usize).pow(k) - 1;
    assert!(goss.nmax() >= w, "Goss table too short");
    let monics = contributing_monics(f, prec);
    let parts: Vec<USeries> = monics
        .par_iter()
        .map(|a| -> Result<USeries> {
            let ua = u_of_az(a, prec)?;
            Ok(goss.eval_series(w, &ua, prec))
        })
        .collect::<Result<_>>()?;
    let s = sum_series(f, prec, parts);
    let mut c = KElem::from_poly(lprod(f, k));
    if k % 2 == 1 {
        c = c.neg();
    }
    Ok(USeries::one(f, prec).add(&s.scale(&c)))
}

/// `E = Σ_{a monic} a·u_a` to precision `prec`.
pub fn false_eisenstein(f: Fq, prec: usize) -> Result<USeries> {
    let monics = contributing_monics(f, prec);
    let parts: Vec<USeries> = monics
        .par_iter()
        .map(|a| -> Result<USeries> { Ok(u_of_az(a, prec)?.scale(&KElem::from_poly(a.clone()))) })
        .collect::<Result<_>>()?;
    Ok(sum_series(f, prec, parts))
}
