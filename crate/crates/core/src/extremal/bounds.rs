use serde::{Deserialize, Serialize};

use crate::context::Context;
use crate::error::{Error, Result};
use crate::forms::{grading_of, nu_infty, Grading, NuPolicy, QMForm};

/// One upper bound `ν_∞(f) ≤ num/den`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundCheck {
    pub name: String,
    pub num: i128,
    pub den: i128,
    pub holds: bool,
    /// `num/den − ν_∞(f)` as `(numerator, denominator)`.
    pub slack: (i128, i128),
}

impl BoundCheck {
    fn new(name: &str, nu: usize, num: i128, den: i128) -> Self {
        let lhs = nu as i128 * den;
        BoundCheck { name: name.into(), num, den, holds: lhs <= num, slack: (num - lhs, den) }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MultiplicityReport {
    pub nu: usize,
    pub grading: Grading,
    /// The bounds that apply to the depth of `f`.
    pub bounds: Vec<BoundCheck>,
    /// `ν_∞ / (l(w−l))`, for information only.
    pub conjecture_ratio: Option<f64>,
}

impl MultiplicityReport {
    pub fn all_hold(&self) -> bool {
        self.bounds.iter().all(|b| b.holds)
    }
}

/// Evaluates the multiplicity estimates applicable to a graded form.
pub fn verify_multiplicity(ctx: &Context, f: &QMForm) -> Result<MultiplicityReport> {
    let g = grading_of(f)?.ok_or_else(|| Error::InvalidArgument("form is not homogeneous".into()))?;
    let (nu, _) = nu_infty(ctx, f, NuPolicy::for_form(f, NuPolicy::DEFAULT_CAP))?;
    let q = ctx.q() as i128;
    let (w, l, d) = (g.w as i128, g.l as i128, g.d as i128);
    let mut bounds = Vec::new();
    if l == 0 {
        bounds.push(BoundCheck::new("modular: nu <= w/(q+1)", nu, w, q + 1));
    }
    if l <= q {
        bounds.push(BoundCheck::new("depth <= q: nu <= (q^2+1)/(q+1) d", nu, (q * q + 1) * d, q + 1));
    }
    if l <= q * q {
        bounds.push(BoundCheck::new("depth <= q^2: nu <= (q^3+1)(w-l)", nu, (q * q * q + 1) * (w - l), 1));
    }
    let denom = l * (w - l);
    let conjecture_ratio = (denom > 0).then(|| nu as f64 / denom as f64);
    Ok(MultiplicityReport { nu, grading: g, bounds, conjecture_ratio })
}
