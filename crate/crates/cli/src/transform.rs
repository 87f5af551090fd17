use std::path::PathBuf;

use clap::Args;
use novikov_core::counting::{laplace_instanton, laplace_orbits, Transform};
use novikov_core::error::Error;
use novikov_core::io;
use novikov_core::scalar::{gq_to_c64, rat_from_f64, rat_to_f64, Gq, Rat};
use serde_json::json;

use crate::input;
use crate::output::{num, Outcome, Report};
use crate::Global;

#[derive(Args, Debug)]
pub struct TransformArgs {
  /// Counting file.
  counts: PathBuf,
  /// Weight file; defaults to the zero weight.
  #[arg(long)]
  weight: Option<PathBuf>,
  /// Ray direction as comma-separated rationals. Defaults to the weight's
  /// ray, then to −ω (the dt-ray of a suspension).
  #[arg(long, allow_hyphen_values = true)]
  ray: Option<String>,
  /// Evaluation point `re` or `re,im`; repeatable.
  #[arg(long = "z", allow_hyphen_values = true)]
  z: Vec<String>,
  /// Real grid `start:stop:n`, inclusive.
  #[arg(long, allow_hyphen_values = true)]
  grid: Option<String>,
  /// Transform the instantons from FROM to TO instead of the orbits.
  #[arg(long)]
  pair: Option<String>,
}

fn grid(spec: &str) -> Result<Vec<Gq>, Error> {
  let bad = || Error::Schema(format!("grid `{spec}` must be start:stop:n"));
  let parts: Vec<&str> = spec.split(':').collect();
  let [a, b, n] = parts[..] else { return Err(bad()) };
  let (a, b) = (rat_to_f64(&input::rational(a)?), rat_to_f64(&input::rational(b)?));
  let n: usize = n.trim().parse().map_err(|_| bad())?;
  (0..n)
    .map(|i| {
      let x = if n == 1 { a } else { a + (b - a) * i as f64 / (n - 1) as f64 };
      rat_from_f64(x).map(|r| Gq::new(r, Rat::default())).ok_or_else(bad)
    })
    .collect()
}

pub fn run(a: &TransformArgs, g: &Global) -> anyhow::Result<Report> {
  let file = io::parse_counting(&input::read_json(&a.counts)?)?;
  let inst = &file.instantons;
  let ids: Vec<&str> = inst.zeros().iter().map(|z| z.id.as_str()).collect();
  let base = input::weight(a.weight.as_deref(), inst.rank(), ids)?;
  let direction: Vec<Rat> = match (&a.ray, base.ray()) {
    (Some(s), _) => input::rational_list(s)?,
    (None, Some(r)) => r.to_vec(),
    (None, None) => inst.omega().iter().map(|x| -x).collect(),
  };
  let pair = a.pair.as_deref().map(input::pair).transpose()?;

  let mut points = a.z.iter().map(|s| input::complex(s)).collect::<Result<Vec<_>, _>>()?;
  if let Some(spec) = &a.grid {
    points.extend(grid(spec)?);
  }
  if points.is_empty() {
    return Err(Error::Schema("no evaluation points; pass --z or --grid".into()).into());
  }
  points.sort_by(|x, y| (&x.re, &x.im).cmp(&(&y.re, &y.im)));
  points.dedup();

  let mut rows = Vec::new();
  let mut table = Vec::new();
  for z in &points {
    let w = base.ray_weight(&direction, z)?;
    let t: Transform = match &pair {
      Some((from, to)) => laplace_instanton(inst, &w, from, to, g.tolerance)?,
      None => laplace_orbits(&file.orbits, &w, g.tolerance)?,
    };
    let zc = gq_to_c64(z);
    rows.push(json!({
      "z": io::c64_json(&zc),
      "value": io::c64_json(&t.value),
      "verdict": t.verdict.label(),
      "tail_bound": io::finite_json(t.verdict.tail_bound()),
      "ratio": t.verdict.ratio().map(io::finite_json),
    }));
    table.push(vec![num(zc.re), num(zc.im), num(t.value.re), num(t.value.im), t.verdict.label().to_string(), num(t.verdict.tail_bound())]);
  }
  let json = json!({
    "source": match &pair { Some(_) => "instantons", None => "orbits" },
    "pair": pair.as_ref().map(|(f, t)| [f, t]),
    "base": io::weight_json(&base),
    "direction": direction.iter().map(io::rat_json).collect::<Vec<_>>(),
    "tolerance": g.tolerance,
    "rows": rows,
  });
  let header = vec!["z_re", "z_im", "value_re", "value_im", "verdict", "tail_bound"];
  Ok(Report::new(json, header, table, Outcome::Pass))
}
