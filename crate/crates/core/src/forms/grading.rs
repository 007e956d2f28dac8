use serde::{Deserialize, Serialize};

use super::form::QMForm;
use crate::error::{Error, Result};

/// Weight, type, depth and degree `d = w − l` of a homogeneous form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Grading {
    pub w: i64,
    pub m: i64,
    pub l: i64,
    pub d: i64,
}

impl Grading {
    pub fn new(q: u32, w: i64, m: i64, l: i64) -> Self {
        Grading { w, m: m.rem_euclid((q as i64 - 1).max(1)), l, d: w - l }
    }
}

/// Grading of `f`, or `None` when its monomials mix weights or types.
///
/// The zero form has no grading and is rejected.
pub fn grading_of(f: &QMForm) -> Result<Option<Grading>> {
    let q = f.q();
    let mut it = f.monomials();
    let Some(first) = it.next() else {
        return Err(Error::InvalidArgument("the zero form has no grading".into()));
    };
    let (w, m) = (first.weight(q), first.ty(q));
    let mut l = first.e as i64;
    for mono in it {
        if mono.weight(q) != w || mono.ty(q) != m {
            return Ok(None);
        }
        l = l.max(mono.e as i64);
    }
    Ok(Some(Grading { w, m, l, d: w - l }))
}

/// Largest monomial weight, used to size precision for inhomogeneous input.
pub fn max_weight(f: &QMForm) -> i64 {
    let q = f.q();
    f.monomials().map(|m| m.weight(q)).max().unwrap_or(0)
}
