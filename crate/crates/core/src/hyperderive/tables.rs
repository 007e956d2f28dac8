//! `T_X(E)`, `T_X(g)`, `T_X(h)`, `T_X(Δ)` to a fixed `X`-precision.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::stages::{run_stages, stages_needed, StageState};
use super::taylor::TaylorPoly;
use crate::algebra::{FieldDesc, Fq, GaloisField};
use crate::error::{Error, Result};
use crate::forms::{Families, QMForm, RawForm};

/// Taylor images of the generators modulo `X^xprec`.
#[derive(Clone, Debug)]
pub struct TaylorTables {
    pub stage: u32,
    pub e: TaylorPoly,
    pub g: TaylorPoly,
    pub h: TaylorPoly,
    pub delta: TaylorPoly,
}

impl TaylorTables {
    pub fn xprec(&self) -> usize {
        self.e.xprec()
    }
    pub fn field(&self) -> Fq {
        self.e.field()
    }
}

/// `f_h` with `f_h^{q−1} = f_Δ` and constant term 1, coefficient by coefficient.
pub fn root_f_h(f_delta: &TaylorPoly) -> Result<TaylorPoly> {
    let f = f_delta.field();
    let q = f.q() as usize;
    let d = f_delta.coeffs();
    if !d.first().is_some_and(|c| c.as_constant().is_some_and(|k| k.is_one())) {
        return Err(Error::Consistency("f_Δ must start with 1".into()));
    }
    let mut c: Vec<QMForm> = vec![QMForm::one(f)];
    for n in 1..d.len() {
        let mut v = if n % q == 0 { c[n / q].frobenius(1) } else { QMForm::zero(f) };
        for i in 0..n {
            if !c[i].is_zero() && !d[n - i].is_zero() {
                v = v.sub(&c[i].mul(&d[n - i]));
            }
        }
        c.push(v);
    }
    Ok(TaylorPoly::from_coeffs(f, c, d.len()))
}

/// Completes the stage data into the generator tables, checking that both
/// routes to `T_X(E)` agree.
pub fn tables_from_stage(st: &StageState, xprec: usize) -> Result<TaylorTables> {
    let f = st.ladder(1)?.field();
    let g = st.ladder(1)?.clone();
    let delta = st.delta().clone();
    if g.xprec() < xprec || delta.xprec() < xprec {
        return Err(Error::Precision(format!("stage {} does not reach X^{xprec}", st.r())));
    }
    let dinv = QMForm::delta(f).inverse_unit()?;
    let f_delta = delta.mul_form(&dinv);
    let f_h = root_f_h(&f_delta)?;
    let h = f_h.mul_form(&QMForm::gen_h(f));
    // D_1Δ = −EΔ gives T(E) = −∂_X T(Δ) / T(Δ); D_1h = Eh gives the other route.
    let e_from_delta = f_delta.deriv_x().mul(&f_delta.inverse()?).scale(&crate::algebra::KElem::from_int(f, -1));
    let e_from_h = f_h.deriv_x().mul(&f_h.inverse()?);
    let n = e_from_delta.xprec().min(e_from_h.xprec());
    if e_from_delta.truncate(n) != e_from_h.truncate(n) {
        return Err(Error::Consistency("the two routes to T_X(E) disagree".into()));
    }
    let e = if e_from_delta.xprec() >= e_from_h.xprec() { e_from_delta } else { e_from_h };
    if e.xprec() < xprec {
        return Err(Error::Precision(format!("T_X(E) known modulo X^{}, need X^{xprec}", e.xprec())));
    }
    Ok(TaylorTables {
        stage: st.r(),
        e: e.truncate(xprec),
        g: g.truncate(xprec),
        h: h.truncate(xprec),
        delta: delta.truncate(xprec),
    })
}

/// Builds the tables modulo `X^xprec` from scratch.
pub fn build_tables(fam: &Families, xprec: usize, progress: impl FnMut(&StageState)) -> Result<TaylorTables> {
    let p = fam.field().p() as usize;
    // a multiple of p keeps ∂/∂X exact at the top coefficient
    let cap = xprec.max(2).div_ceil(p) * p;
    let st = run_stages(fam, cap, progress)?;
    tables_from_stage(&st, xprec)
}

#[derive(Serialize, Deserialize)]
struct TablesFile {
    q: FieldDesc,
    stage: u32,
    xprec: usize,
    e: Vec<(usize, RawForm)>,
    g: Vec<(usize, RawForm)>,
    h: Vec<(usize, RawForm)>,
    delta: Vec<(usize, RawForm)>,
}

fn dump(t: &TaylorPoly) -> Vec<(usize, RawForm)> {
    t.coeffs().iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (i, c.to_raw())).collect()
}

fn undump(f: Fq, v: Vec<(usize, RawForm)>, xprec: usize) -> Result<TaylorPoly> {
    let mut c = vec![QMForm::zero(f); xprec];
    for (i, r) in v {
        if i >= xprec {
            return Err(Error::Consistency("coefficient beyond stored precision".into()));
        }
        c[i] = QMForm::from_raw(f, &r)?;
    }
    Ok(TaylorPoly::from_coeffs(f, c, xprec))
}

/// Path of the stage cache file for a field and precision.
pub fn cache_path(dir: &Path, f: Fq, xprec: usize) -> PathBuf {
    let r = stages_needed(f.q(), xprec);
    dir.join(f.desc().key()).join(format!("taylor-r{r}-x{xprec}.json"))
}

pub fn save_tables(dir: &Path, t: &TaylorTables) -> Result<()> {
    let f = t.field();
    let path = cache_path(dir, f, t.xprec());
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    let file = TablesFile {
        q: f.desc().clone(),
        stage: t.stage,
        xprec: t.xprec(),
        e: dump(&t.e),
        g: dump(&t.g),
        h: dump(&t.h),
        delta: dump(&t.delta),
    };
    // write then rename so readers never see a partial file
    let tmp = path.with_extension("json.tmp");
    fs::write(&tmp, serde_json::to_vec(&file)?)?;
    fs::rename(&tmp, &path)?;
    Ok(())
}

fn read_tables(path: &Path) -> Result<TaylorTables> {
    let file: TablesFile = serde_json::from_slice(&fs::read(path)?)?;
    let f = GaloisField::get(&file.q)?;
    let n = file.xprec;
    Ok(TaylorTables {
        stage: file.stage,
        e: undump(f, file.e, n)?,
        g: undump(f, file.g, n)?,
        h: undump(f, file.h, n)?,
        delta: undump(f, file.delta, n)?,
    })
}

/// Loads the smallest cached table with precision at least `xprec`.
///
/// Unreadable files are deleted so that the caller recomputes them.
pub fn load_tables(dir: &Path, f: Fq, xprec: usize) -> Option<TaylorTables> {
    let sub = dir.join(f.desc().key());
    let mut found: Vec<(usize, PathBuf)> = fs::read_dir(&sub)
        .ok()?
        .filter_map(|e| e.ok())
        .filter_map(|e| {
            let name = e.file_name().into_string().ok()?;
            let x = name.strip_prefix("taylor-")?.strip_suffix(".json")?.split_once("-x")?.1.parse().ok()?;
            (x >= xprec).then_some((x, e.path()))
        })
        .collect();
    found.sort();
    for (_, path) in found {
        match read_tables(&path) {
            Ok(t) if t.field() == f => {
                let n = xprec;
                return Some(TaylorTables {
                    stage: t.stage,
                    e: t.e.truncate(n),
                    g: t.g.truncate(n),
                    h: t.h.truncate(n),
                    delta: t.delta.truncate(n),
                });
            }
            _ => {
                let _ = fs::remove_file(&path);
            }
        }
    }
    None
}
