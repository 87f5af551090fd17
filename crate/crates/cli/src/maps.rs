use std::path::PathBuf;

use clap::Args;
use novikov_core::error::Error;
use novikov_core::io::{self, MapSpec};
use novikov_core::novikov::NovikovSeries;
use novikov_core::scalar::{fmt_rat, gq_int, Gq, Rat};
use novikov_core::suspension::{fixed_point_count, homology_chain_map, lefschetz_numbers, lefschetz_zeta, orbit_counts_from_map, verify_theorem_tor, LefschetzData, Zeta};
use novikov_core::tolerances::ABSCISSA_MIN_LEVELS;
use novikov_core::weights::WeightSystem;
use num::traits::Zero;
use serde_json::{json, Value};

use crate::input::{self, Kind};
use crate::output::{num, Outcome, Report};
use crate::Global;

#[derive(Args, Debug)]
pub struct ZetaArgs {
  /// Map spec file.
  map: PathBuf,
  /// Number of Lefschetz numbers to tabulate.
  #[arg(long, default_value_t = 10)]
  kmax: usize,
  /// Iterates used for the abscissa estimate.
  #[arg(long, default_value_t = 60)]
  levels: usize,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
  /// Map spec file (torus automorphism, homology maps, or complex with phi).
  map: PathBuf,
}

#[derive(Args, Debug)]
pub struct AbscissaArgs {
  /// Counting file or map spec.
  input: PathBuf,
  /// Weight file giving the base point; defaults to the zero weight.
  #[arg(long)]
  weight: Option<PathBuf>,
  /// Use the instantons from FROM to TO instead of the orbits.
  #[arg(long)]
  pair: Option<String>,
  /// Direction of the line of weights; defaults to ω.
  #[arg(long, allow_hyphen_values = true)]
  direction: Option<String>,
  /// Iterates used when the input is a map spec.
  #[arg(long, default_value_t = 60)]
  levels: usize,
}

fn map_spec(path: &std::path::Path) -> anyhow::Result<MapSpec> {
  let v = input::read_json(path)?;
  if input::kind(&v) != Kind::MapSpec {
    return Err(Error::Schema(format!("{} is not a map spec", path.display())).into());
  }
  Ok(io::parse_map_spec(&v)?)
}

fn rats(v: &[Rat]) -> Vec<Value> { v.iter().map(io::rat_json).collect() }

/// Abscissa of the suspension orbit counts through `levels` iterates; `None`
/// when the counts are too sparse to fit.
fn orbit_abscissa(data: &LefschetzData, levels: usize) -> anyhow::Result<Option<f64>> {
  let levels = match data {
    LefschetzData::List(l) => l.len().min(levels),
    LefschetzData::Maps(_) => levels,
  };
  let orbits = orbit_counts_from_map(data, levels)?;
  let series = orbits.to_series(Rat::from_integer(levels.into()))?;
  match series.abscissa_estimate(&WeightSystem::new(1), orbits.omega(), ABSCISSA_MIN_LEVELS) {
    Ok(rho) => Ok(Some(rho)),
    Err(Error::InsufficientData { .. }) => Ok(None),
    Err(e) => Err(e.into()),
  }
}

pub fn zeta(a: &ZetaArgs, _g: &Global) -> anyhow::Result<Report> {
  let spec = map_spec(&a.map)?;
  let data = spec.lefschetz_data();
  let l = lefschetz_numbers(&data, a.kmax)?;
  let z = lefschetz_zeta(&data)?;
  let taylor = match &z {
    Zeta::Rational(f) => f.taylor(a.kmax + 1),
    Zeta::Series { coefficients } => coefficients.clone(),
  };
  let fixed: Vec<Option<u128>> = (1..=a.kmax)
    .map(|k| match &spec {
      MapSpec::Torus(t) => u32::try_from(k).ok().and_then(|k| fixed_point_count(t, k).ok()),
      _ => None,
    })
    .collect();
  let mut table = Vec::new();
  let mut rows = Vec::new();
  for k in 1..=a.kmax {
    let coeff = taylor.get(k).map(fmt_rat).unwrap_or_default();
    let fix = fixed[k - 1];
    table.push(json!({"k": k, "lefschetz": l[k - 1].to_string(), "fixed_points": fix.map(|n| n.to_string()), "zeta_coefficient": coeff}));
    rows.push(vec![k.to_string(), l[k - 1].to_string(), fix.map(|n| n.to_string()).unwrap_or_default(), coeff]);
  }
  let mut zeta = serde_json::to_value(&z)?;
  if let Zeta::Rational(f) = &z {
    zeta["display"] = json!(f.to_string());
  }
  let exact = match &spec {
    MapSpec::Torus(t) => Some(t.dominant_eigenvalue().ln()),
    _ => None,
  };
  let json = json!({
    "kmax": a.kmax,
    "table": table,
    "zeta": zeta,
    "abscissa": {"estimate": orbit_abscissa(&data, a.levels)?, "log_dominant_eigenvalue": exact, "levels": a.levels},
  });
  Ok(Report::new(json, vec!["k", "lefschetz", "fixed_points", "zeta_coefficient"], rows, Outcome::Pass))
}

/// Coefficients of `s²` through `s.len() − 1`.
fn square(s: &[Rat]) -> Vec<Rat> { (0..s.len()).map(|n| (0..=n).map(|i| &s[i] * &s[n - i]).sum()).collect() }

pub fn verify(a: &VerifyArgs, g: &Global) -> anyhow::Result<Report> {
  let k = input::integer_truncation(&g.truncation)?;
  let phi = match map_spec(&a.map)? {
    MapSpec::Chain(f) => f,
    spec => match spec.lefschetz_data() {
      LefschetzData::Maps(phis) => homology_chain_map(&phis)?,
      LefschetzData::List(_) => return Err(Error::Precondition("a list of Lefschetz numbers has no mapping torus; give homology maps".into()).into()),
    },
  };
  let report = verify_theorem_tor(&phi, k)?;
  let (s1, s2) = (square(&report.torsion), square(&report.zeta));
  let diff: Vec<Value> = (0..=k).filter(|&j| s1[j] != s2[j]).map(|j| json!({"level": j, "torsion_squared": fmt_rat(&s1[j]), "zeta_squared": fmt_rat(&s2[j])})).collect();
  let mut json = serde_json::to_value(&report)?;
  json["squared_difference"] = Value::Array(diff);
  let rows = (0..=k)
    .map(|j| {
      let l = if j == 0 { String::new() } else { fmt_rat(&report.lefschetz[j - 1]) };
      vec![j.to_string(), l, fmt_rat(&report.torsion[j]), fmt_rat(&report.zeta[j]), (s1[j] == s2[j]).to_string()]
    })
    .collect();
  Ok(Report::new(json, vec!["level", "lefschetz", "torsion", "zeta", "squares_agree"], rows, Outcome::from_bool(report.passed)))
}

fn level_of(omega: &[Rat], g: &novikov_core::weights::Gamma) -> Rat { -g.pair_rat(omega) }

pub fn abscissa(a: &AbscissaArgs, _g: &Global) -> anyhow::Result<Report> {
  let v = input::read_json(&a.input)?;
  let (series, zeros): (NovikovSeries<Gq>, Vec<String>) = if input::kind(&v) == Kind::MapSpec {
    let orbits = orbit_counts_from_map(&io::parse_map_spec(&v)?.lefschetz_data(), a.levels)?;
    (orbits.to_series(Rat::from_integer(a.levels.into()))?, Vec::new())
  } else {
    let file = io::parse_counting(&v)?;
    let inst = &file.instantons;
    let zeros = inst.zeros().iter().map(|z| z.id.clone()).collect();
    let omega = inst.omega();
    let series = match a.pair.as_deref().map(input::pair).transpose()? {
      Some((from, to)) => {
        inst.index_of(&from)?;
        inst.index_of(&to)?;
        let terms: Vec<_> = inst.counts(&from, &to).map(|m| m.iter().map(|(g, &c)| (g.clone(), gq_int(c))).collect()).unwrap_or_default();
        let cap = terms.iter().map(|(g, _)| level_of(omega, g)).max().unwrap_or_else(Rat::zero);
        NovikovSeries::scalar_from(inst.rank(), omega.to_vec(), cap, terms)?
      }
      None => {
        let cap = file.orbits.values().keys().map(|g| level_of(omega, g)).max().unwrap_or_else(Rat::zero);
        file.orbits.to_series(cap)?
      }
    };
    (series, zeros)
  };
  let base = input::weight(a.weight.as_deref(), series.rank(), zeros.iter().map(String::as_str))?;
  let direction = match &a.direction {
    Some(s) => input::rational_list(s)?,
    None => series.omega().to_vec(),
  };
  let rho = series.abscissa_estimate(&base, &direction, ABSCISSA_MIN_LEVELS)?;
  let json = json!({"abscissa": rho, "direction": rats(&direction), "terms": series.len(), "cap": io::rat_json(series.cap())});
  Ok(Report::new(json, vec!["abscissa", "terms"], vec![vec![num(rho), series.len().to_string()]], Outcome::Pass))
}
