//! Emission in the three output formats.

use std::io::{self, Write};

use dqm_core::forms::QMForm;
use dqm_core::{Error, Result};
use serde::Serialize;

pub fn print_json<T: Serialize + ?Sized>(v: &T) -> Result<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, v)?;
    writeln!(out)?;
    Ok(())
}

pub fn print_csv<R, I>(header: &[&str], rows: R) -> Result<()>
where
    R: IntoIterator<Item = I>,
    I: IntoIterator<Item = String>,
{
    let mut w = csv::Writer::from_writer(io::stdout().lock());
    w.write_record(header).map_err(csv_err)?;
    for r in rows {
        w.write_record(r).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(io::Error::other(e))
}

/// One row per monomial: `e, g, h, coefficient`.
pub fn form_rows(f: &QMForm) -> Vec<Vec<String>> {
    f.terms()
        .map(|(m, c)| vec![m.e.to_string(), m.g.to_string(), m.h.to_string(), c.to_text()])
        .collect()
}

pub const FORM_HEADER: [&str; 4] = ["e", "g", "h", "coefficient"];

pub fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map_or_else(String::new, |x| x.to_string())
}
