use std::io::Write;

use anyhow::Context;
use serde_json::Value;

use crate::{Format, Global};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
  Pass,
  Fail,
}

impl Outcome {
  pub fn from_bool(ok: bool) -> Self { if ok { Outcome::Pass } else { Outcome::Fail } }
}

/// A command result: a JSON document and the table used for `--format csv`.
pub struct Report {
  pub json: Value,
  pub header: Vec<&'static str>,
  pub rows: Vec<Vec<String>>,
  pub outcome: Outcome,
}

impl Report {
  pub fn new(json: Value, header: Vec<&'static str>, rows: Vec<Vec<String>>, outcome: Outcome) -> Self { Self { json, header, rows, outcome } }
}

fn render(report: &Report, format: Format) -> anyhow::Result<Vec<u8>> {
  match format {
    Format::Json => {
      let mut out = serde_json::to_vec_pretty(&report.json)?;
      out.push(b'\n');
      Ok(out)
    }
    Format::Csv => {
      let mut w = csv::Writer::from_writer(Vec::new());
      w.write_record(&report.header)?;
      for row in &report.rows {
        w.write_record(row)?;
      }
      Ok(w.into_inner().context("flushing CSV")?)
    }
  }
}

pub fn emit(report: &Report, g: &Global) -> anyhow::Result<()> {
  let bytes = render(report, g.format)?;
  match &g.out {
    Some(path) => std::fs::write(path, bytes).with_context(|| format!("writing {}", path.display())),
    None => {
      let mut stdout = std::io::stdout().lock();
      stdout.write_all(&bytes)?;
      Ok(stdout.flush()?)
    }
  }
}

/// Shortest round-trip decimal, in exponent form outside `[1e-4, 1e15)`.
pub fn num(x: f64) -> String {
  let a = x.abs();
  if a != 0.0 && a.is_finite() && !(1e-4..1e15).contains(&a) { format!("{x:e}") } else { format!("{x}") }
}
