use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::spectrum::{extremal_form, proportional, SearchPolicy};
use crate::context::Context;
use crate::error::{Error, Result};
use crate::forms::{QMForm, SeqName};
use crate::hyperderive::{differential_exponent, EpsilonReport};

/// What the experiments table predicts for a cell.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Expected {
    /// Expression for the predicted extremal form, e.g. `x[1]^2`.
    pub form: String,
    pub nu: usize,
    /// Alternative value stated elsewhere for the same quantity, if any.
    pub nu_alt: Option<usize>,
    pub epsilon: u32,
    /// Predicted differentially extremal form.
    pub diff_extremal: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CellStatus {
    Ok,
    /// Computation agrees with one of two conflicting published values.
    PaperDiscrepancy,
    Mismatch,
    Unresolved,
}

impl std::fmt::Display for CellStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            CellStatus::Ok => "ok",
            CellStatus::PaperDiscrepancy => "paper-discrepancy",
            CellStatus::Mismatch => "mismatch",
            CellStatus::Unresolved => "unresolved",
        })
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TableRow {
    pub q: u32,
    pub k: u32,
    pub l: i64,
    pub w: i64,
    pub m: i64,
    pub dim: Option<usize>,
    pub nu_max: Option<usize>,
    pub form_id: Option<String>,
    pub epsilon_d: Option<EpsilonReport>,
    pub expected: Expected,
    /// The computed form is a multiple of the predicted one.
    pub matches_form: Option<bool>,
    pub status: CellStatus,
    pub note: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExperimentsTable {
    pub rows: Vec<TableRow>,
    /// Extremal forms referenced by `form_id`.
    pub forms: BTreeMap<String, QMForm>,
}

impl ExperimentsTable {
    pub fn all_resolved(&self) -> bool {
        self.rows.iter().all(|r| r.status != CellStatus::Unresolved)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct TableOptions {
    pub kmax: u32,
    pub lmax: i64,
    /// Compute `ε_D` of each extremal form.
    pub epsilon: bool,
    pub search: SearchPolicy,
}

fn expected(ctx: &Context, k: u32, l: i64) -> Expected {
    let q = ctx.q() as usize;
    let e = ctx.field().e();
    let qk = q.pow(k);
    let ql = q as i64;
    if l < ql {
        Expected {
            form: format!("x[{k}]^{l}"),
            nu: l as usize * qk,
            nu_alt: None,
            epsilon: (k + 1) * e,
            diff_extremal: format!("x[{k}]^{l}"),
        }
    } else if l == ql {
        Expected {
            form: format!("eta[{k}]"),
            nu: qk + q - 1,
            nu_alt: Some(qk * q + q - 1),
            epsilon: 0,
            diff_extremal: format!("x[{k}]^q"),
        }
    } else {
        Expected {
            form: format!("xi[{k}]"),
            nu: qk * q * q + qk,
            nu_alt: None,
            epsilon: (k + 2) * e,
            diff_extremal: format!("xi[{k}]"),
        }
    }
}

fn candidate(ctx: &Context, k: u32, l: i64) -> Result<QMForm> {
    let q = ctx.q() as i64;
    Ok(if l < q {
        ctx.family(SeqName::X, k)?.pow(l as u64)
    } else if l == q {
        ctx.family(SeqName::Eta, k)?
    } else {
        ctx.family(SeqName::Xi, k)?
    })
}

fn cell(ctx: &Context, k: u32, l: i64, opts: &TableOptions) -> (TableRow, Option<(String, QMForm)>) {
    let q = ctx.q();
    let w = l * (q.pow(k) as i64 + 1);
    let m = l.rem_euclid((q as i64 - 1).max(1));
    let exp = expected(ctx, k, l);
    let mut row = TableRow {
        q,
        k,
        l,
        w,
        m,
        dim: None,
        nu_max: None,
        form_id: None,
        epsilon_d: None,
        expected: exp.clone(),
        matches_form: None,
        status: CellStatus::Unresolved,
        note: None,
    };
    let rep = match extremal_form(ctx, w, m, l, opts.search) {
        Ok(r) => r,
        Err(e) => {
            row.note = Some(e.to_string());
            return (row, None);
        }
    };
    row.dim = Some(rep.dim);
    row.nu_max = Some(rep.nu_max);
    let id = format!("q{q}-w{w}-m{m}-l{l}");
    row.form_id = Some(id.clone());
    let matches = candidate(ctx, k, l).map(|c| proportional(&rep.extremal_form, &c));
    row.matches_form = matches.as_ref().ok().copied();
    let mut eps_ok = true;
    if opts.epsilon {
        match differential_exponent(ctx, &rep.extremal_form, exp.epsilon + 2) {
            Ok(eps) => {
                eps_ok = eps == EpsilonReport::Exact(exp.epsilon);
                row.epsilon_d = Some(eps);
            }
            Err(e @ (Error::Precision(_) | Error::Unresolved { .. })) => {
                row.note = Some(format!("epsilon_D skipped: {e}"));
            }
            Err(e) => {
                row.note = Some(e.to_string());
                eps_ok = false;
            }
        }
    }
    let form_ok = row.matches_form == Some(true);
    row.status = if form_ok && eps_ok && rep.nu_max == exp.nu {
        CellStatus::Ok
    } else if form_ok && eps_ok && exp.nu_alt == Some(rep.nu_max) {
        row.note.get_or_insert_with(|| format!("nu = {} agrees with the alternative value, not {}", rep.nu_max, exp.nu));
        CellStatus::PaperDiscrepancy
    } else {
        CellStatus::Mismatch
    };
    (row, Some((id, rep.extremal_form)))
}

/// The cells `M̃^{≤l}_{l(q^k+1), l}` for `1 ≤ l ≤ min(lmax, q+1)`, `k ≤ kmax`,
/// compared against the predicted extremal forms.
pub fn experiments_table(ctx: &Context, opts: TableOptions) -> ExperimentsTable {
    let lmax = opts.lmax.min(ctx.q() as i64 + 1);
    let cells: Vec<(i64, u32)> = (1..=lmax).flat_map(|l| (0..=opts.kmax).map(move |k| (l, k))).collect();
    let results: Vec<_> = cells.par_iter().map(|&(l, k)| cell(ctx, k, l, &opts)).collect();
    let mut rows = Vec::new();
    let mut forms = BTreeMap::new();
    for (row, form) in results {
        rows.push(row);
        if let Some((id, f)) = form {
            forms.insert(id, f);
        }
    }
    ExperimentsTable { rows, forms }
}

