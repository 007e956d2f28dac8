use serde::{Deserialize, Serialize};

use super::basis::{basis, GradedBasis};
use crate::algebra::{KElem, KMatrix};
use crate::context::Context;
use crate::error::{Error, Result};
use crate::forms::{Evaluator, QMForm};

/// Precision schedule for the extremal search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchPolicy {
    /// Starting number of u-coefficients; `None` means `2l(w−l) + w`.
    pub start: Option<usize>,
    pub cap: usize,
}

impl Default for SearchPolicy {
    fn default() -> Self {
        SearchPolicy { start: None, cap: 1 << 14 }
    }
}

impl SearchPolicy {
    fn start_for(&self, b: &GradedBasis) -> usize {
        let guess = (2 * b.l.max(0) * (b.w - b.l).max(0) + b.w).max(1) as usize;
        self.start.unwrap_or(guess).clamp(1, self.cap.max(1))
    }
}

/// Outcome of an extremal search in one graded space.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub q: u32,
    pub w: i64,
    pub m: i64,
    pub l: i64,
    pub dim: usize,
    /// The normalised extremal form.
    pub extremal_form: QMForm,
    pub nu_max: usize,
    /// Orders of vanishing attained in the space, increasing.
    pub spectrum: Vec<usize>,
    /// `spectrum` is a run of consecutive integers.
    pub is_interval: bool,
    pub precision_used: usize,
}

/// Extremal form of `M̃^{≤l}_{w,m}` and its vanishing spectrum.
pub fn extremal_form(ctx: &Context, w: i64, m: i64, l: i64, policy: SearchPolicy) -> Result<SpectrumReport> {
    extremal_in(ctx, &basis(ctx.q(), w, m, l), policy)
}

/// As [`extremal_form`], over an explicitly ordered basis.
pub fn extremal_in(ctx: &Context, b: &GradedBasis, policy: SearchPolicy) -> Result<SpectrumReport> {
    let f = ctx.field();
    if b.is_empty() {
        return Err(Error::InvalidArgument(format!("M̃^(<={})_({},{}) is zero", b.l, b.w, b.m)));
    }
    let dim = b.dim();
    let mut n = policy.start_for(b);
    loop {
        let base = ctx.base(n)?;
        let mut ev = Evaluator::new(&base, n)?;
        let rows: Vec<Vec<KElem>> = b
            .monomials
            .iter()
            .map(|mo| {
                let s = ev.monomial(mo.e, mo.g, mo.h as u32);
                (0..n).map(|i| s.coeff(i)).collect()
            })
            .collect();
        let ff = KMatrix::from_rows(f, rows).row_reduce_fraction_free();
        if ff.pivots.len() == dim {
            let last = dim - 1;
            let nu_max = ff.pivots[last];
            let lead = ff.echelon.get(last, nu_max).clone();
            let inv = lead.inv()?;
            let form = QMForm::from_terms(
                f,
                b.monomials.iter().enumerate().map(|(i, mo)| (*mo, ff.transform.get(last, i).mul(&inv))),
            );
            let spectrum = ff.pivots.clone();
            let is_interval = spectrum.windows(2).all(|p| p[1] == p[0] + 1);
            return Ok(SpectrumReport {
                q: ctx.q(),
                w: b.w,
                m: b.m,
                l: b.l,
                dim,
                extremal_form: form,
                nu_max,
                spectrum,
                is_interval,
                precision_used: n,
            });
        }
        // distinct monomials have independent expansions, so a rank drop
        // only means the staircase runs past u^n
        if n >= policy.cap {
            return Err(Error::Unresolved { cap: policy.cap });
        }
        n = (2 * n).min(policy.cap);
    }
}

/// `a = c·b` for some nonzero constant `c`.
pub fn proportional(a: &QMForm, b: &QMForm) -> bool {
    if a.is_zero() || b.is_zero() {
        return a.is_zero() && b.is_zero();
    }
    let Some((mono, ca)) = a.terms().next() else { return false };
    let cb = b.coeff(mono);
    !cb.is_zero() && a.scale(&cb) == b.scale(&ca)
}
