use std::sync::Arc;

use dqm_core::algebra::Fq;
use dqm_core::expr::{parse_form, parse_int};
use dqm_core::extremal::{
    experiments_table, extremal_form, proportional, verify_multiplicity, SearchPolicy, SpectrumReport, TableOptions,
};
use dqm_core::forms::{divides, evaluate, grading_of, nu_infty, NuPolicy, QMForm, SeqName};
use dqm_core::hyperderive::{differential_exponent, dn, serre_partial, taylor_of, EpsilonReport, TaylorPoly};
use dqm_core::verify::{Status, Suite, Verifier};
use dqm_core::{Context, Error, Result};
use rayon::prelude::*;
use serde_json::json;

use crate::config::{Format, JobConfig};
use crate::output::{opt, print_csv, print_json, form_rows, FORM_HEADER};
use crate::{exit, Command, SuiteArg};

pub fn dispatch(cmd: &Command, cfg: &JobConfig) -> Result<i32> {
    let f = cfg.field()?;
    let ctx = Arc::new(context(f, cfg));
    match cmd {
        Command::Expand { expr, prec, nu } => expand(&ctx, cfg, expr, prec, *nu),
        Command::Derive { expr, n, serre } => derive(&ctx, cfg, expr, n, serre.as_deref()),
        Command::Taylor { target, stage, xprec } => taylor(&ctx, cfg, target, *stage, *xprec),
        Command::Seq { name, from, kmax, nu, epsilon } => seq(&ctx, cfg, name, *from, *kmax, *nu, *epsilon),
        Command::Nu { expr } => nu(&ctx, cfg, expr),
        Command::Extremal { w, m, l } => extremal(&ctx, cfg, w, m, l, false),
        Command::Spectrum { w, m, l } => extremal(&ctx, cfg, w, m, l, true),
        Command::Table { kmax, lmax, no_epsilon } => table(&ctx, cfg, *kmax, lmax, !*no_epsilon),
        Command::Verify { suite, only } => verify(ctx, cfg, *suite, only),
    }
}

fn context(f: Fq, cfg: &JobConfig) -> Context {
    let c = Context::new(f).with_progress(cfg.progress);
    match &cfg.cache_dir {
        Some(d) => c.with_cache_dir(d),
        None => c,
    }
}

fn int(s: &str, ctx: &Context) -> Result<i64> {
    parse_int(s, ctx.q())
}

fn nonneg(s: &str, ctx: &Context, what: &str) -> Result<usize> {
    let v = int(s, ctx)?;
    usize::try_from(v).map_err(|_| Error::InvalidArgument(format!("{what} must be nonnegative, got {v}")))
}

fn nu_policy(f: &QMForm, cfg: &JobConfig) -> NuPolicy {
    NuPolicy::for_form(f, cfg.precision_cap)
}

fn expand(ctx: &Context, cfg: &JobConfig, expr: &str, prec: &str, want_nu: bool) -> Result<i32> {
    let f = parse_form(ctx.families(), expr)?;
    if want_nu {
        let (v, lead) = nu_infty(ctx, &f, nu_policy(&f, cfg))?;
        match cfg.format {
            Format::Text => println!("nu = {v}\nleading coefficient = {lead}"),
            Format::Json => print_json(&json!({ "nu": v, "leading": lead.to_text() }))?,
            Format::Csv => print_csv(&["nu", "leading"], [[v.to_string(), lead.to_text()]])?,
        }
        return Ok(exit::OK);
    }
    let prec = nonneg(prec, ctx, "--prec")?;
    let s = evaluate(ctx, &f, prec)?;
    match cfg.format {
        Format::Text => println!("{}", s.to_text()),
        Format::Json => print_json(&s.to_json())?,
        Format::Csv => print_csv(&["n", "coefficient"], s.terms().map(|(n, c)| [n.to_string(), c.to_text()]))?,
    }
    Ok(exit::OK)
}

fn emit_form(cfg: &JobConfig, f: &QMForm, extra: serde_json::Value) -> Result<()> {
    match cfg.format {
        Format::Text => println!("{f}"),
        Format::Json => {
            let mut v = extra;
            v["form"] = f.to_json();
            v["text"] = json!(f.to_text());
            print_json(&v)?;
        }
        Format::Csv => print_csv(&FORM_HEADER, form_rows(f))?,
    }
    Ok(())
}

fn derive(ctx: &Context, cfg: &JobConfig, expr: &str, n: &str, serre: Option<&str>) -> Result<i32> {
    let f = parse_form(ctx.families(), expr)?;
    let n = nonneg(n, ctx, "--n")?;
    let (r, d) = match serre {
        Some(d) => {
            let d = int(d, ctx)?;
            (serre_partial(ctx, &f, n, d)?, Some(d))
        }
        None => (dn(ctx, &f, n)?, None),
    };
    emit_form(cfg, &r, json!({ "n": n, "d": d }))?;
    Ok(exit::OK)
}

fn taylor(ctx: &Context, cfg: &JobConfig, target: &str, stage: u32, xprec: Option<usize>) -> Result<i32> {
    let f = parse_form(ctx.families(), target)?;
    let n = match xprec {
        Some(n) => n,
        None => (ctx.q() as usize)
            .checked_pow(stage)
            .ok_or_else(|| Error::InvalidArgument(format!("stage {stage} is too large")))?,
    };
    let t = taylor_of(ctx, &f, n)?;
    match cfg.format {
        Format::Text => match factor_out(&t, &f)? {
            Some(quot) => {
                let name = target.trim();
                let simple = name.chars().all(|c| c.is_alphanumeric() || "[]_".contains(c));
                if simple {
                    println!("{name}*({quot})");
                } else {
                    println!("({name})*({quot})");
                }
            }
            None => println!("{t}"),
        },
        Format::Json => print_json(&t.to_json())?,
        Format::Csv => {
            let mut rows = Vec::new();
            for i in 0..t.xprec() {
                for mut r in form_rows(t.coeff(i)?) {
                    r.insert(0, i.to_string());
                    rows.push(r);
                }
            }
            print_csv(&["x", "e", "g", "h", "coefficient"], rows)?;
        }
    }
    Ok(exit::OK)
}

/// `T_X(f)/f` when every coefficient is a multiple of `f`.
fn factor_out(t: &TaylorPoly, f: &QMForm) -> Result<Option<TaylorPoly>> {
    if f.is_zero() || f.as_constant().is_some() {
        return Ok(None);
    }
    let mut q = Vec::with_capacity(t.xprec());
    for c in t.coeffs() {
        match divides(f, c)? {
            Some(v) => q.push(v),
            None => return Ok(None),
        }
    }
    Ok(Some(TaylorPoly::from_coeffs(f.field(), q, t.xprec())))
}

struct SeqRow {
    k: u32,
    form: QMForm,
    grading: Option<(i64, i64, i64)>,
    nu: Option<usize>,
    epsilon: Option<EpsilonReport>,
}

fn seq(ctx: &Context, cfg: &JobConfig, name: &str, from: u32, kmax: u32, want_nu: bool, want_eps: bool) -> Result<i32> {
    let s: SeqName = name.parse()?;
    let from = from.max(s.first_index());
    let e = ctx.field().e();
    let rows: Vec<SeqRow> = (from..=kmax)
        .into_par_iter()
        .map(|k| {
            let form = ctx.family(s, k)?;
            let grading = if form.is_zero() { None } else { grading_of(&form)?.map(|g| (g.w, g.m, g.l)) };
            let nu = if want_nu && !form.is_zero() { Some(nu_infty(ctx, &form, nu_policy(&form, cfg))?.0) } else { None };
            let epsilon = if want_eps && !form.is_zero() {
                Some(differential_exponent(ctx, &form, (k + 3) * e)?)
            } else {
                None
            };
            Ok(SeqRow { k, form, grading, nu, epsilon })
        })
        .collect::<Result<_>>()?;
    match cfg.format {
        Format::Text => {
            for r in &rows {
                let mut line = format!("{s}[{}]", r.k);
                if let Some((w, m, l)) = r.grading {
                    line.push_str(&format!("  w={w} m={m} l={l}"));
                }
                if let Some(v) = r.nu {
                    line.push_str(&format!("  nu={v}"));
                }
                if let Some(v) = r.epsilon {
                    line.push_str(&format!("  eps={v}"));
                }
                println!("{line}\n    {}", r.form);
            }
        }
        Format::Json => {
            let v: Vec<_> = rows
                .iter()
                .map(|r| {
                    json!({
                        "name": s, "k": r.k, "grading": r.grading, "nu": r.nu,
                        "epsilon": r.epsilon.map(|e| e.to_string()), "form": r.form.to_json(), "text": r.form.to_text(),
                    })
                })
                .collect();
            print_json(&v)?;
        }
        Format::Csv => {
            let grade = |r: &SeqRow, i: usize| r.grading.map(|g| [g.0, g.1, g.2][i].to_string()).unwrap_or_default();
            print_csv(
                &["name", "k", "w", "m", "l", "nu", "epsilon", "form"],
                rows.iter().map(|r| {
                    [s.to_string(), r.k.to_string(), grade(r, 0), grade(r, 1), grade(r, 2), opt(&r.nu), opt(&r.epsilon), r.form.to_text()]
                }),
            )?;
        }
    }
    Ok(exit::OK)
}

fn nu(ctx: &Context, cfg: &JobConfig, expr: &str) -> Result<i32> {
    let f = parse_form(ctx.families(), expr)?;
    let (v, lead) = nu_infty(ctx, &f, nu_policy(&f, cfg))?;
    let report = match grading_of(&f)? {
        Some(_) => Some(verify_multiplicity(ctx, &f)?),
        None => None,
    };
    match cfg.format {
        Format::Text => {
            println!("nu = {v}\nleading coefficient = {lead}");
            if let Some(r) = &report {
                let g = r.grading;
                println!("weight {} type {} depth {}", g.w, g.m, g.l);
                for b in &r.bounds {
                    println!("{}: {} ({}/{})", b.name, if b.holds { "holds" } else { "VIOLATED" }, b.num, b.den);
                }
                if let Some(x) = r.conjecture_ratio {
                    println!("nu/(l(w-l)) = {x:.4}");
                }
            }
        }
        Format::Json => print_json(&json!({ "nu": v, "leading": lead.to_text(), "multiplicity": report }))?,
        Format::Csv => print_csv(&["nu", "leading"], [[v.to_string(), lead.to_text()]])?,
    }
    Ok(exit::OK)
}

/// Family members proportional to `f`, searched over small indices.
fn identify(ctx: &Context, f: &QMForm) -> Result<Vec<String>> {
    let Some(g) = grading_of(f)? else { return Ok(Vec::new()) };
    let mut out = Vec::new();
    for s in SeqName::ALL {
        for k in s.first_index()..=4 {
            let c = ctx.family(s, k)?;
            if c.is_zero() {
                continue;
            }
            let w = grading_of(&c)?.map(|h| h.w);
            if w == Some(g.w) && proportional(f, &c) {
                out.push(format!("{s}[{k}]"));
            }
        }
    }
    Ok(out)
}

fn extremal(ctx: &Context, cfg: &JobConfig, w: &str, m: &str, l: &str, spectrum_only: bool) -> Result<i32> {
    let (w, m, l) = (int(w, ctx)?, int(m, ctx)?, int(l, ctx)?);
    let policy = SearchPolicy { start: None, cap: cfg.precision_cap };
    let r: SpectrumReport = extremal_form(ctx, w, m, l, policy)?;
    let spectrum: Vec<String> = r.spectrum.iter().map(|v| v.to_string()).collect();
    if spectrum_only {
        match cfg.format {
            Format::Text => {
                println!("space w={} m={} l<={} dim {}", r.w, r.m, r.l, r.dim);
                println!("spectrum {}", spectrum.join(" "));
                println!("interval {}", r.is_interval);
            }
            Format::Json => print_json(&json!({
                "q": r.q, "w": r.w, "m": r.m, "l": r.l, "dim": r.dim,
                "spectrum": r.spectrum, "is_interval": r.is_interval,
            }))?,
            Format::Csv => print_csv(&["nu"], r.spectrum.iter().map(|v| [v.to_string()]))?,
        }
        return Ok(exit::OK);
    }
    let ids = identify(ctx, &r.extremal_form)?;
    match cfg.format {
        Format::Text => {
            println!("space w={} m={} l<={} dim {}", r.w, r.m, r.l, r.dim);
            println!("nu = {}", r.nu_max);
            println!("form = {}", r.extremal_form);
            if !ids.is_empty() {
                println!("proportional to {}", ids.join(", "));
            }
            println!("spectrum {}", spectrum.join(" "));
        }
        Format::Json => {
            let mut v = serde_json::to_value(&r)?;
            v["proportional_to"] = json!(ids);
            v["text"] = json!(r.extremal_form.to_text());
            print_json(&v)?;
        }
        Format::Csv => print_csv(&FORM_HEADER, form_rows(&r.extremal_form))?,
    }
    Ok(exit::OK)
}

fn table(ctx: &Context, cfg: &JobConfig, kmax: u32, lmax: &str, epsilon: bool) -> Result<i32> {
    let lmax = int(lmax, ctx)?;
    let opts = TableOptions { kmax, lmax, epsilon, search: SearchPolicy { start: None, cap: cfg.precision_cap } };
    let t = experiments_table(ctx, opts);
    match cfg.format {
        Format::Text => {
            println!("{:>2} {:>2} {:>4} {:>2} {:>4} {:>6}  {:<14} {:>6} {:>5}  status", "k", "l", "w", "m", "dim", "nu", "expected", "nu_exp", "eps");
            for r in &t.rows {
                println!(
                    "{:>2} {:>2} {:>4} {:>2} {:>4} {:>6}  {:<14} {:>6} {:>5}  {}{}",
                    r.k,
                    r.l,
                    r.w,
                    r.m,
                    opt(&r.dim),
                    opt(&r.nu_max),
                    r.expected.form,
                    r.expected.nu,
                    opt(&r.epsilon_d),
                    r.status,
                    r.note.as_ref().map_or_else(String::new, |n| format!(" ({n})")),
                );
            }
        }
        Format::Json => print_json(&t)?,
        Format::Csv => print_csv(
            &["q", "k", "l", "w", "m", "dim", "nu_max", "expected_form", "expected_nu", "expected_nu_alt", "epsilon_d", "expected_epsilon", "matches_form", "status", "note"],
            t.rows.iter().map(|r| {
                [
                    r.q.to_string(),
                    r.k.to_string(),
                    r.l.to_string(),
                    r.w.to_string(),
                    r.m.to_string(),
                    opt(&r.dim),
                    opt(&r.nu_max),
                    r.expected.form.clone(),
                    r.expected.nu.to_string(),
                    opt(&r.expected.nu_alt),
                    opt(&r.epsilon_d),
                    r.expected.epsilon.to_string(),
                    opt(&r.matches_form),
                    r.status.to_string(),
                    opt(&r.note),
                ]
            }),
        )?,
    }
    Ok(if t.all_resolved() { exit::OK } else { exit::UNRESOLVED })
}

fn verify(ctx: Arc<Context>, cfg: &JobConfig, suite: SuiteArg, only: &[String]) -> Result<i32> {
    let suite = match suite {
        SuiteArg::Fast => Suite::Fast(ctx.field()),
        SuiteArg::Full => Suite::Full,
        SuiteArg::Paper => Suite::Paper,
    };
    let mut v = Verifier::new().with_progress(cfg.progress).with_context(ctx);
    if let Some(d) = &cfg.cache_dir {
        v = v.with_cache_dir(d);
    }
    let ids: Vec<String> = if only.is_empty() {
        suite.ids().into_iter().map(String::from).collect()
    } else {
        only.to_vec()
    };
    let mut results = Vec::new();
    for id in &ids {
        if cfg.progress {
            eprintln!("verify: criterion {id}");
        }
        let r = v.run_one(id, &suite);
        if cfg.format == Format::Text {
            println!("{} ({:.2}s)", r.summary(), r.seconds);
            for d in r.details.iter().skip(1) {
                println!("    {d}");
            }
        }
        results.push(r);
    }
    match cfg.format {
        Format::Text => {
            let count = |s: Status| results.iter().filter(|r| r.status == s).count();
            println!(
                "{} passed, {} failed, {} unresolved, {} discrepancies",
                count(Status::Pass),
                count(Status::Fail),
                count(Status::Unresolved),
                count(Status::PaperDiscrepancy)
            );
        }
        Format::Json => print_json(&results)?,
        Format::Csv => print_csv(
            &["id", "status", "seconds", "title", "detail"],
            results.iter().map(|r| {
                [r.id.clone(), r.status.to_string(), format!("{:.3}", r.seconds), r.title.clone(), r.details.join("; ")]
            }),
        )?,
    }
    let worst = results.iter().map(|r| r.status).max().unwrap_or(Status::Pass);
    Ok(match worst {
        Status::Fail => exit::VERIFY_FAILED,
        Status::Unresolved => exit::UNRESOLVED,
        _ => exit::OK,
    })
}
