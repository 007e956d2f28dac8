use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use dqm_cli::{Format, JobConfig};

fn dqm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dqm"))
        .arg("--quiet")
        .arg("--no-cache")
        .args(args)
        .output()
        .expect("run dqm")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn ok(args: &[&str]) -> String {
    let o = dqm(args);
    assert_eq!(o.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    stdout(&o)
}

fn temp_dir(tag: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("dqm-cli-{tag}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&d);
    d
}

#[test]
fn expand_and_orders() {
    let s = ok(&["expand", "--expr", "x[1]", "--prec", "30"]);
    assert!(s.starts_with("(T^3-T)*u^3+"), "{s}");
    assert!(s.trim_end().ends_with("O(u^30)"));
    let s = ok(&["expand", "--expr", "Delta", "--nu"]);
    assert!(s.starts_with("nu = 2\n"), "{s}");
    let s = ok(&["--p", "5", "expand", "--expr", "Delta", "--nu"]);
    assert!(s.starts_with("nu = 4\n"), "{s}");
    let s = ok(&["expand", "--expr", "E*g + h", "--nu"]);
    assert!(s.starts_with("nu = 3\n"), "{s}");
    let v: serde_json::Value = serde_json::from_str(&ok(&["--format", "json", "expand", "--expr", "g", "--prec", "q^2"])).unwrap();
    assert_eq!(v["prec"], 9);
    assert_eq!(v["coeffs"][0], serde_json::json!([0, "1"]));
    let csv = ok(&["--format", "csv", "expand", "--expr", "h", "--prec", "6"]);
    assert_eq!(csv.lines().next(), Some("n,coefficient"));
}

#[test]
fn derivatives() {
    assert_eq!(ok(&["derive", "--expr", "x[1]", "--n", "1"]).trim(), "0");
    assert_eq!(ok(&["--p", "2", "derive", "--expr", "Delta", "--n", "q"]).trim(), "g*h^2/(T^2+T)");
    // the command prints exactly what the library computes
    let s = ok(&["derive", "--expr", "Delta", "--n", "q"]);
    let ctx = dqm_core::Context::new(dqm_core::algebra::GaloisField::prime(3));
    let want = dqm_core::hyperderive::dn(&ctx, &dqm_core::forms::QMForm::delta(ctx.field()), 3).unwrap();
    assert_eq!(s.trim(), want.to_text());
    assert_eq!(ok(&["derive", "--expr", "g[1]", "--n", "1", "--serre", "q-1"]).trim(), "-h");
    let v: serde_json::Value = serde_json::from_str(&ok(&["--format", "json", "derive", "--expr", "E", "--n", "1"])).unwrap();
    assert_eq!(v["text"], "E^2");
    assert_eq!(v["n"], 1);
}

#[test]
fn taylor_expansions() {
    assert_eq!(ok(&["taylor", "--target", "Delta", "--stage", "1"]).trim(), "Delta*(1-E*X+O(X^3))");
    assert_eq!(ok(&["taylor", "--target", "g[1]", "--stage", "1"]).trim(), "g+(-E*g-h)*X+O(X^3)");
    let v: serde_json::Value = serde_json::from_str(&ok(&["--format", "json", "taylor", "--target", "E", "--xprec", "4"])).unwrap();
    assert_eq!(v["xprec"], 4);
    assert_eq!(v["coeffs"].as_array().unwrap().len(), 4);
}

#[test]
fn budget_errors_explain_the_stage() {
    let o = dqm(&["derive", "--expr", "E", "--n", "10000"]);
    assert_eq!(o.status.code(), Some(3));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("stage"), "{err}");
}

#[test]
fn extremal_and_spectrum() {
    let s = ok(&["extremal", "--w", "10", "--m", "1", "--l", "1"]);
    assert!(s.contains("nu = 9\n"), "{s}");
    assert!(s.contains("proportional to x[2]"), "{s}");
    let s = ok(&["extremal", "--w", "2", "--m", "1", "--l", "1"]);
    assert!(s.contains("dim 1") && s.contains("form = E\n"), "{s}");
    let v: serde_json::Value = serde_json::from_str(&ok(&["--format", "json", "extremal", "--w", "q^2+1", "--m", "1", "--l", "1"])).unwrap();
    assert_eq!(v["nu_max"], 9);
    assert_eq!(v["proportional_to"][0], "x[2]");
    let v: serde_json::Value = serde_json::from_str(&ok(&["--format", "json", "spectrum", "--w", "8", "--m", "0", "--l", "4"])).unwrap();
    assert_eq!(v["spectrum"].as_array().unwrap().last().unwrap(), 10);
}

#[test]
fn table_rows_for_q3() {
    let v: serde_json::Value = serde_json::from_str(&ok(&["--format", "json", "table", "--kmax", "1", "--lmax", "q+1"])).unwrap();
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 8);
    let nus: Vec<u64> = rows.iter().map(|r| r["nu_max"].as_u64().unwrap()).collect();
    assert_eq!(nus, [1, 3, 2, 6, 5, 11, 10, 30]);
    for r in rows {
        assert_eq!(r["matches_form"], true, "{r}");
        assert_ne!(r["status"], "mismatch");
    }
    let csv = ok(&["--format", "csv", "table", "--kmax", "0", "--lmax", "2", "--no-epsilon"]);
    assert!(csv.starts_with("q,k,l,w,m,dim,nu_max,"));
    assert_eq!(csv.lines().count(), 3);
}

#[test]
fn output_does_not_depend_on_thread_count() {
    let a = ok(&["--jobs", "1", "--format", "json", "table", "--kmax", "1", "--lmax", "3"]);
    let b = ok(&["--jobs", "4", "--format", "json", "table", "--kmax", "1", "--lmax", "3"]);
    assert_eq!(a, b);
    let a = ok(&["--jobs", "1", "seq", "xi", "--kmax", "2", "--nu"]);
    let b = ok(&["--jobs", "3", "seq", "xi", "--kmax", "2", "--nu"]);
    assert_eq!(a, b);
}

#[test]
fn sequences() {
    let s = ok(&["seq", "x", "--kmax", "2", "--nu", "--epsilon"]);
    assert!(s.contains("x[2]  w=10 m=1 l=1  nu=9  eps=3"), "{s}");
    let s = ok(&["seq", "y", "--kmax", "1"]);
    assert!(s.starts_with("y[1]"), "{s}");
    let csv = ok(&["--p", "2", "--e", "2", "--modulus", "1,1,1", "--format", "csv", "seq", "x", "--kmax", "1"]);
    assert_eq!(csv.lines().nth(2), Some("x,1,5,1,1,,,E*g+h"));
}

#[test]
fn exit_codes() {
    assert_eq!(dqm(&["expand", "--expr", "E+"]).status.code(), Some(2));
    assert_eq!(dqm(&["--p", "4", "expand", "--expr", "E"]).status.code(), Some(2));
    assert_eq!(dqm(&["--p", "2", "--e", "2", "--modulus", "1,0,1", "expand", "--expr", "E"]).status.code(), Some(2));
    assert_eq!(dqm(&["seq", "z"]).status.code(), Some(2));
    assert_eq!(dqm(&["bogus"]).status.code(), Some(2));
    assert_eq!(dqm(&["--precision-cap", "8", "extremal", "--w", "28", "--m", "1", "--l", "1"]).status.code(), Some(3));
    assert_eq!(dqm(&["verify", "--only", "no-such-check"]).status.code(), Some(4));
    assert_eq!(dqm(&["--version"]).status.code(), Some(0));
}

#[test]
fn verify_reports_each_check() {
    let o = dqm(&["verify", "--suite", "fast", "--only", "1,2,4,5,eta"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    for id in ["1", "2", "4", "5", "eta"] {
        assert!(s.contains(&format!("criterion {id}: PASS")), "{s}");
    }
    let v: serde_json::Value = serde_json::from_str(&stdout(&dqm(&["--format", "json", "verify", "--only", "3"]))).unwrap();
    assert_eq!(v[0]["status"], "pass");
}

/// Files one level below `dir`, where tables are stored per field.
fn cache_files(dir: &Path) -> Vec<PathBuf> {
    let mut out = Vec::new();
    for sub in std::fs::read_dir(dir).unwrap() {
        for f in std::fs::read_dir(sub.unwrap().path()).unwrap() {
            out.push(f.unwrap().path());
        }
    }
    out
}

#[test]
fn verify_recovers_from_a_corrupted_cache() {
    let dir = temp_dir("cache");
    let run = |args: &[&str]| {
        Command::new(env!("CARGO_BIN_EXE_dqm"))
            .arg("--quiet")
            .env("DQM_CACHE_DIR", &dir)
            .args(args)
            .output()
            .unwrap()
    };
    assert_eq!(run(&["taylor", "--target", "g[2]", "--stage", "3"]).status.code(), Some(0));
    let files = cache_files(&dir);
    assert!(!files.is_empty());
    for f in &files {
        std::fs::write(f, b"\x00 truncated").unwrap();
    }
    let o = run(&["verify", "--suite", "fast", "--only", "5,6"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("criterion 5: PASS"));
    let rewritten = cache_files(&dir)
        .into_iter()
        .filter(|p| serde_json::from_slice::<serde_json::Value>(&std::fs::read(p).unwrap()).is_ok())
        .count();
    assert!(rewritten >= 1);
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn job_config_round_trips() {
    let cfg = JobConfig {
        p: 2,
        e: 2,
        modulus: Some(vec![1, 1, 1]),
        cache_dir: Some("/tmp/x".into()),
        precision_cap: 512,
        format: Format::Csv,
        jobs: Some(2),
        progress: true,
    };
    let s = serde_json::to_string(&cfg).unwrap();
    assert_eq!(serde_json::from_str::<JobConfig>(&s).unwrap(), cfg);
    assert_eq!(cfg.field().unwrap().q(), 4);
    let d = JobConfig::default();
    assert_eq!(serde_json::from_str::<JobConfig>(&serde_json::to_string(&d).unwrap()).unwrap(), d);
    let bad = JobConfig { p: 6, ..JobConfig::default() };
    assert!(bad.validate().is_err());
}
