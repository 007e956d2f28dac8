//! The staged computation of `T_X(g_s)` and `T_X(Δ)`.
//!
//! Stage `r` holds `T_{X,r+s}(g_s)` for `1 ≤ s ≤ s_max`, the previous stage's
//! ladder, and `T_{X,j+1}(Δ)` for `j ≤ r`. Everything is additionally
//! truncated modulo `X^cap`, which commutes with all ring operations used.
//!
//! Advancing uses
//! `T_{X,r+s+1}(g_s) = [s+1]^{-1} T_{X,r+1}(Δ^{-1})^{q^s}
//!   (T_{X,r}(g)^{q^{s+1}} T_{X,r+s+1}(g_{s+1}) − T_{X,r+s+1}(g_{s+2}))`,
//! where the last factor is the previous stage's entry `s+2`, so `s_max`
//! drops by one per advance.

use super::taylor::TaylorPoly;
use crate::algebra::{bracket, Fq, KElem};
use crate::error::{Error, Result};
use crate::forms::{Families, QMForm, SeqName};

#[derive(Clone, Debug)]
pub struct StageState {
    f: Fq,
    r: u32,
    cap: usize,
    ladder: Vec<TaylorPoly>,
    prev: Vec<TaylorPoly>,
    deltas: Vec<TaylorPoly>,
}

/// `min(q^k, cap)`.
fn natural(q: u32, k: u32, cap: usize) -> usize {
    (q as usize).checked_pow(k).map_or(cap, |v| v.min(cap))
}

fn bracket_inv(f: Fq, k: u32) -> Result<KElem> {
    KElem::from_poly(bracket(f, k)).inv()
}

impl StageState {
    /// Stage 0: `T_{X,s}(g_s) = g_s + x_s X` for `s ≤ s_max`.
    pub fn initial(fam: &Families, s_max: u32, cap: usize) -> Result<Self> {
        if s_max < 1 || cap < 1 {
            return Err(Error::InvalidArgument("stage ladder needs s_max ≥ 1 and cap ≥ 1".into()));
        }
        let f = fam.field();
        let q = f.q();
        let entry = |s: u32, k: u32| -> Result<TaylorPoly> {
            let g = (*fam.get(SeqName::G, s)?).clone();
            let x = (*fam.get(SeqName::X, s)?).clone();
            Ok(TaylorPoly::from_coeffs(f, vec![g, x], natural(q, k, cap)))
        };
        let ladder = (1..=s_max).map(|s| entry(s, s)).collect::<Result<Vec<_>>>()?;
        let prev = (1..=s_max + 1).map(|s| entry(s, s - 1)).collect::<Result<Vec<_>>>()?;
        let mut st = StageState { f, r: 0, cap, ladder, prev, deltas: Vec::new() };
        let d = st.delta_from_ladder()?;
        st.deltas.push(d);
        Ok(st)
    }

    pub fn r(&self) -> u32 {
        self.r
    }
    pub fn s_max(&self) -> u32 {
        self.ladder.len() as u32
    }
    pub fn cap(&self) -> usize {
        self.cap
    }

    /// `T_{X,r+s}(g_s)` (truncated to the cap).
    pub fn ladder(&self, s: u32) -> Result<&TaylorPoly> {
        self.ladder
            .get(s as usize - 1)
            .ok_or_else(|| Error::InvalidArgument(format!("ladder entry {s} not held at stage {}", self.r)))
    }

    /// `T_{X,r+1}(Δ)`.
    pub fn delta(&self) -> &TaylorPoly {
        self.deltas.last().expect("delta is always present")
    }

    /// `T_{X,j+1}(Δ)` for `j ≤ r`.
    pub fn delta_history(&self) -> &[TaylorPoly] {
        &self.deltas
    }

    /// `[1]^{-1}(T(g)^{q+1} − T(g_2))` modulo `X^{min(q^{r+1}, cap)}`.
    fn delta_from_ladder(&self) -> Result<TaylorPoly> {
        let n = natural(self.f.q(), self.r + 1, self.cap);
        let g = &self.ladder[0];
        let g2 = &self.prev[1];
        let t = g.frobenius(1, n).mul_trunc(g, n).sub(g2);
        Ok(t.truncate(n).scale(&bracket_inv(self.f, 1)?))
    }

    /// `T_{X,r+1}(Δ^{-1}) = Δ^{-q^{r+1}} ∏_{i ≤ r} T_{X,r+1−i}(Δ^{q−1})^{q^i}`.
    pub fn delta_inverse(&self) -> Result<TaylorPoly> {
        let f = self.f;
        let q = f.q();
        let n = natural(q, self.r + 1, self.cap);
        let mut acc = TaylorPoly::constant(QMForm::delta(f).frobenius(self.r + 1).inverse_unit()?, n);
        for i in 0..=self.r {
            let d = &self.deltas[(self.r - i) as usize];
            acc = acc.mul(&d.pow(q as u64 - 1).frobenius(i, n));
        }
        Ok(acc)
    }

    /// Moves to stage `r + 1`.
    pub fn advance(&self) -> Result<Self> {
        if self.ladder.len() < 2 {
            return Err(Error::Precision(format!(
                "stage ladder exhausted at stage {}; initialise with a larger s_max",
                self.r
            )));
        }
        let f = self.f;
        let q = f.q();
        let r = self.r;
        let dinv = self.delta_inverse()?;
        let mut next = Vec::with_capacity(self.ladder.len() - 1);
        for s in 1..self.ladder.len() as u32 {
            let lim = natural(q, r + s + 1, self.cap);
            let cur = &self.ladder[s as usize - 1];
            if cur.xprec() == lim {
                // already known to the cap
                next.push(cur.clone());
                continue;
            }
            let t1 = self.prev[0].frobenius(s + 1, lim);
            let inner = t1.mul_trunc(&self.ladder[s as usize], lim).sub(&self.prev[s as usize + 1]);
            let a = dinv.frobenius(s, lim).mul_trunc(&inner, lim).scale(&bracket_inv(f, s + 1)?);
            if a.xprec() != lim {
                return Err(Error::Consistency(format!("stage {} entry {s} has precision {}", r + 1, a.xprec())));
            }
            next.push(a);
        }
        let mut st = StageState {
            f,
            r: r + 1,
            cap: self.cap,
            prev: self.ladder.clone(),
            ladder: next,
            deltas: self.deltas.clone(),
        };
        let d = st.delta_from_ladder()?;
        st.deltas.push(d);
        Ok(st)
    }
}

/// Smallest stage `R` with `q^{R+1} ≥ cap`.
pub fn stages_needed(q: u32, cap: usize) -> u32 {
    let mut r = 0;
    while natural(q, r + 1, usize::MAX) < cap {
        r += 1;
    }
    r
}

/// Runs stages `0..=R` for the cap, returning the last state.
pub fn run_stages(fam: &Families, cap: usize, mut progress: impl FnMut(&StageState)) -> Result<StageState> {
    let big_r = stages_needed(fam.field().q(), cap);
    let mut st = StageState::initial(fam, big_r + 1, cap)?;
    progress(&st);
    while st.r() < big_r {
        st = st.advance()?;
        progress(&st);
    }
    Ok(st)
}
