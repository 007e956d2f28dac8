//! u-expansions of symbolic forms and orders of vanishing.

use std::collections::HashMap;

use super::form::QMForm;
use super::grading::max_weight;
use crate::context::Context;
use crate::error::{Error, Result};
use crate::useries::{BaseExpansions, USeries};

/// Evaluates forms against fixed base expansions, caching generator powers.
pub struct Evaluator<'a> {
    base: &'a BaseExpansions,
    prec: usize,
    powers: HashMap<(u8, u32), USeries>,
}

impl<'a> Evaluator<'a> {
    pub fn new(base: &'a BaseExpansions, prec: usize) -> Result<Self> {
        if base.prec < prec {
            return Err(Error::Precision(format!("base expansions known to u^{}, need u^{prec}", base.prec)));
        }
        Ok(Evaluator { base, prec, powers: HashMap::new() })
    }

    fn power(&mut self, which: u8, k: u32) -> USeries {
        if let Some(s) = self.powers.get(&(which, k)) {
            return s.clone();
        }
        let gen = match which {
            0 => &self.base.e,
            1 => &self.base.g,
            _ => &self.base.h,
        };
        let s = if k == 0 {
            USeries::one(gen.field(), self.prec)
        } else if let Some(prev) = self.powers.get(&(which, k - 1)) {
            prev.mul_trunc(gen, self.prec)
        } else {
            gen.pow_trunc(k as u64, self.prec)
        };
        self.powers.insert((which, k), s.clone());
        s
    }

    /// Series of the monomial `E^i g^j h^k`.
    pub fn monomial(&mut self, e: u32, g: u32, h: u32) -> USeries {
        let a = self.power(0, e);
        let b = self.power(1, g);
        let c = self.power(2, h);
        a.mul_trunc(&b, self.prec).mul_trunc(&c, self.prec)
    }

    pub fn eval(&mut self, f: &QMForm) -> Result<USeries> {
        let field = f.field();
        if !f.is_polynomial() {
            return Err(Error::InvalidArgument("cannot expand a form with negative powers of h".into()));
        }
        let mut acc = USeries::zero(field, self.prec);
        for (m, c) in f.terms() {
            let s = self.monomial(m.e, m.g, m.h as u32);
            acc = acc.add(&s.scale(&c));
        }
        Ok(acc.truncate(self.prec))
    }
}

/// u-expansion of `f` to precision `prec`.
pub fn evaluate(ctx: &Context, f: &QMForm, prec: usize) -> Result<USeries> {
    let base = ctx.base(prec)?;
    Evaluator::new(&base, prec)?.eval(f)
}

/// Precision schedule for [`nu_infty`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NuPolicy {
    pub start: usize,
    pub cap: usize,
}

impl NuPolicy {
    pub const DEFAULT_CAP: usize = 1 << 14;

    /// Starts at four times the weight of `f`.
    pub fn for_form(f: &QMForm, cap: usize) -> Self {
        let w = max_weight(f).max(1) as usize;
        NuPolicy { start: (4 * w).min(cap).max(f.q() as usize * f.q() as usize), cap }
    }
}

/// Order of vanishing at infinity with its leading coefficient.
///
/// Precision doubles from `policy.start` until a nonzero coefficient is
/// seen; past `policy.cap` the answer is [`Error::Unresolved`].
pub fn nu_infty(ctx: &Context, f: &QMForm, policy: NuPolicy) -> Result<(usize, crate::algebra::KElem)> {
    if f.is_zero() {
        return Err(Error::InvalidArgument("the zero form has infinite order".into()));
    }
    let mut n = policy.start.max(1);
    loop {
        let s = evaluate(ctx, f, n)?;
        if let Some(v) = s.valuation() {
            return Ok((v, s.coeff(v)));
        }
        if n >= policy.cap {
            return Err(Error::Unresolved { cap: policy.cap });
        }
        n = (2 * n).min(policy.cap);
    }
}
