//! The sequences `g_k`, `h_k`, `x_k`, `y_k`, `ξ_k`, `η_k`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, RwLock};

use serde::{Deserialize, Serialize};

use super::form::QMForm;
use crate::algebra::{bracket, lprod, Fq, KElem};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SeqName {
    G,
    H,
    X,
    Y,
    Xi,
    Eta,
}

impl SeqName {
    pub const ALL: [SeqName; 6] = [SeqName::G, SeqName::H, SeqName::X, SeqName::Y, SeqName::Xi, SeqName::Eta];

    pub fn as_str(self) -> &'static str {
        match self {
            SeqName::G => "g",
            SeqName::H => "h",
            SeqName::X => "x",
            SeqName::Y => "y",
            SeqName::Xi => "xi",
            SeqName::Eta => "eta",
        }
    }

    /// Smallest valid index.
    pub fn first_index(self) -> u32 {
        match self {
            SeqName::Y => 1,
            _ => 0,
        }
    }
}

impl fmt::Display for SeqName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SeqName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        SeqName::ALL
            .into_iter()
            .find(|n| n.as_str() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown sequence `{s}`")))
    }
}

/// Memoized constructors for the families over one field.
pub struct Families {
    f: Fq,
    cache: RwLock<HashMap<(SeqName, u32), Arc<QMForm>>>,
}

impl Families {
    pub fn new(f: Fq) -> Self {
        Families { f, cache: RwLock::new(HashMap::new()) }
    }

    pub fn field(&self) -> Fq {
        self.f
    }

    pub fn get(&self, name: SeqName, k: u32) -> Result<Arc<QMForm>> {
        if k < name.first_index() {
            return Err(Error::InvalidArgument(format!("{name}[{k}] is not defined")));
        }
        if let Some(v) = self.cache.read().expect("cache lock").get(&(name, k)) {
            return Ok(v.clone());
        }
        let v = Arc::new(self.build(name, k)?);
        self.cache.write().expect("cache lock").insert((name, k), v.clone());
        Ok(v)
    }

    fn k_const(&self, p: crate::algebra::ThetaPoly) -> KElem {
        KElem::from_poly(p)
    }

    /// Shared three-term recursion `z_k = z_{k−1} g^{q^{k−1}} − [k−1] z_{k−2} Δ^{q^{k−2}}`.
    fn recur(&self, name: SeqName, k: u32) -> Result<QMForm> {
        let f = self.f;
        let a = self.get(name, k - 1)?;
        let b = self.get(name, k - 2)?;
        let g = QMForm::gen_g(f).frobenius(k - 1);
        let delta = QMForm::delta(f).frobenius(k - 2);
        let c = self.k_const(bracket(f, k - 1));
        Ok(a.mul(&g).sub(&b.mul(&delta).scale(&c)))
    }

    fn build(&self, name: SeqName, k: u32) -> Result<QMForm> {
        let f = self.f;
        let q = f.q();
        match (name, k) {
            (SeqName::G, 0) => Ok(QMForm::one(f)),
            (SeqName::G, 1) => Ok(QMForm::gen_g(f)),
            (SeqName::H, 0) => Ok(QMForm::zero(f)),
            (SeqName::H, 1) => Ok(QMForm::gen_h(f)),
            (SeqName::X, 0) => Ok(QMForm::gen_e(f).neg()),
            (SeqName::X, 1) => Ok(QMForm::gen_e(f).mul(&QMForm::gen_g(f)).add(&QMForm::gen_h(f)).neg()),
            (SeqName::G | SeqName::H | SeqName::X, _) => self.recur(name, k),
            (SeqName::Y, _) => {
                let x = self.get(SeqName::X, k - 1)?;
                Ok(QMForm::delta(f).frobenius(k - 1).mul(&x))
            }
            (SeqName::Xi, 0) => {
                // x_{−1}^q = −h
                let x1 = self.get(SeqName::X, 1)?;
                let x0 = self.get(SeqName::X, 0)?;
                let b1 = self.k_const(bracket(f, 1));
                Ok(x1.mul(&QMForm::gen_h(f)).neg().sub(&x0.pow(q as u64 + 1).scale(&b1)))
            }
            (SeqName::Xi, _) => {
                let xp = self.get(SeqName::X, k + 1)?;
                let xm = self.get(SeqName::X, k - 1)?;
                let x = self.get(SeqName::X, k)?;
                let bk = self.k_const(bracket(f, k).frobenius(1));
                let bk1 = self.k_const(bracket(f, k + 1));
                Ok(xp.mul(&xm.frobenius(1)).scale(&bk).sub(&x.frobenius(1).mul(&x).scale(&bk1)))
            }
            (SeqName::Eta, _) => {
                let x = self.get(SeqName::X, k)?;
                let xp = self.get(SeqName::X, k + 1)?;
                let a = self.k_const(lprod(f, k + 1));
                let b = self.k_const(lprod(f, k).frobenius(1));
                Ok(x.frobenius(1).scale(&a).add(&QMForm::gen_g(f).mul(&xp).scale(&b)))
            }
        }
    }
}
