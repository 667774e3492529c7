//! Result rows and their CSV form.

use std::fs::File;
use std::io::{self, Read, Write};
use std::path::Path;

use crate::CliError;

pub const CSV_HEADER: [&str; 9] = [
    "method",
    "k",
    "estimate",
    "stderr",
    "ci_low",
    "ci_high",
    "n_samples",
    "seconds",
    "flags",
];

/// One estimate. For `genz` the `stderr` column carries the 99% error.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub method: String,
    pub k: usize,
    pub estimate: f64,
    pub stderr: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub n_samples: u64,
    pub seconds: f64,
    pub flags: Vec<String>,
}

impl ResultRow {
    pub fn has_flag(&self, flag: &str) -> bool {
        self.flags.iter().any(|f| f == flag)
    }
}

fn real(x: f64) -> String {
    format!("{x:.9e}")
}

pub fn write_csv<W: Write>(rows: &[ResultRow], w: W) -> Result<(), CliError> {
    if rows.is_empty() {
        return Err(CliError::Usage("no result rows to write".into()));
    }
    let mut out = csv::Writer::from_writer(w);
    out.write_record(CSV_HEADER)?;
    for r in rows {
        out.write_record([
            r.method.clone(),
            r.k.to_string(),
            real(r.estimate),
            real(r.stderr),
            real(r.ci_low),
            real(r.ci_high),
            r.n_samples.to_string(),
            real(r.seconds),
            r.flags.join(";"),
        ])?;
    }
    out.flush()?;
    Ok(())
}

/// Writes `rows` to `path`, or to stdout when `path` is `None`.
pub fn emit_csv(rows: &[ResultRow], path: Option<&Path>) -> Result<(), CliError> {
    match path {
        Some(p) => write_csv(rows, File::create(p)?),
        None => write_csv(rows, io::stdout().lock()),
    }
}

pub fn parse_csv<R: Read>(r: R) -> Result<Vec<ResultRow>, CliError> {
    let mut reader = csv::Reader::from_reader(r);
    if reader.headers()?.iter().ne(CSV_HEADER) {
        return Err(CliError::Format("unexpected CSV header".into()));
    }
    let num = |field: &str| -> Result<f64, CliError> {
        field
            .parse()
            .map_err(|_| CliError::Format(format!("bad number {field:?}")))
    };
    let int = |field: &str| -> Result<u64, CliError> {
        field
            .parse()
            .map_err(|_| CliError::Format(format!("bad count {field:?}")))
    };
    reader
        .records()
        .map(|rec| {
            let rec = rec?;
            Ok(ResultRow {
                method: rec[0].to_string(),
                k: int(&rec[1])? as usize,
                estimate: num(&rec[2])?,
                stderr: num(&rec[3])?,
                ci_low: num(&rec[4])?,
                ci_high: num(&rec[5])?,
                n_samples: int(&rec[6])?,
                seconds: num(&rec[7])?,
                flags: rec[8]
                    .split(';')
                    .filter(|f| !f.is_empty())
                    .map(String::from)
                    .collect(),
            })
        })
        .collect()
}
