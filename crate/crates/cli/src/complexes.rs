use std::path::PathBuf;

use clap::Args;
use novikov_core::complexes::{build_morse_differential, build_novikov_complex, gauge_conjugate, specialization_commutes, BasedComplex, DSquaredReport};
use novikov_core::counting::check_gauge_laws;
use novikov_core::error::Error;
use novikov_core::io::{self, CountingFile};
use novikov_core::sampling::{random_gauge, seeded_rng};
use novikov_core::scalar::{fmt_gq, fmt_rat, Gq, Rat};
use novikov_core::torsion::{milnor_torsion, novikov_torsion, relative_torsion, torsion_via_laplacian, Convention, TorsionValue};
use serde_json::{json, Value};

use crate::input::{self, Kind};
use crate::output::{num, Outcome, Report};
use crate::Global;

#[derive(Args, Debug)]
pub struct CheckArgs {
  /// Complex file or counting file.
  input: PathBuf,
  /// Weight file for counting input; defaults to the zero weight.
  #[arg(long)]
  weight: Option<PathBuf>,
  /// Number of random gauges for the conjugacy check.
  #[arg(long, default_value_t = 8)]
  gauges: usize,
}

#[derive(Args, Debug)]
pub struct TorsionArgs {
  /// Complex file, chain-map file (torsion of the cone) or counting file.
  input: PathBuf,
  /// Weight file for counting input; potentials must be real constants.
  #[arg(long)]
  weight: Option<PathBuf>,
}

/// Real rationals print as a single number, others as `[re, im]`.
fn scalar_json(z: &Gq) -> Value {
  match io::real_part_exact(z) {
    Some(r) => io::rat_json(&r),
    None => io::gq_json(z),
  }
}

fn d_squared_rows(r: &DSquaredReport, betti: &[usize]) -> Vec<Vec<String>> {
  let mut rows: Vec<Vec<String>> = (0..betti.len())
    .map(|q| {
      let check = r.degrees.iter().find(|d| d.degree == q);
      vec![q.to_string(), check.map_or(String::new(), |d| num(d.residual)), check.map_or(String::new(), |d| d.zero.to_string()), betti[q].to_string()]
    })
    .collect();
  rows.sort();
  rows
}

fn betti_of(c: &BasedComplex<novikov_core::expoly::ExpPoly>) -> Vec<usize> {
  match c.exact_constants() {
    Some(exact) => exact.betti(),
    None => c.evaluate().betti(),
  }
}

fn check_counting(file: &CountingFile, a: &CheckArgs, g: &Global) -> anyhow::Result<Report> {
  let inst = &file.instantons;
  let ids: Vec<&str> = inst.zeros().iter().map(|z| z.id.as_str()).collect();
  let w = input::weight(a.weight.as_deref(), inst.rank(), ids.iter().copied())?;
  let k = input::truncation(&g.truncation)?;
  let morse = build_morse_differential(inst, &w, g.tolerance, true)?;
  let d2 = morse.check_d_squared();
  let betti = if d2.holds() { Some(betti_of(&morse)) } else { None };
  let novikov = build_novikov_complex(inst, &w, k.clone())?.check_d_squared()?;
  let commutes = specialization_commutes(inst, &w, k.clone())?;

  let mut rng = seeded_rng(g.seed);
  let (mut laws, mut conjugate) = (true, true);
  for _ in 0..a.gauges {
    let h = random_gauge(&mut rng, ids.iter().copied());
    laws &= check_gauge_laws(inst, Some(&file.orbits), &w, &h)?.holds();
    let shifted = build_morse_differential(inst, &w.gauge_shift(&h)?, g.tolerance, true)?;
    conjugate &= gauge_conjugate(&morse, &h)? == shifted;
  }

  let pass = d2.holds() && novikov.holds() && commutes && laws && conjugate;
  let json = json!({
    "source": "counting",
    "dims": morse.dims(),
    "d_squared": d2,
    "betti": betti,
    "novikov": {"truncation": io::rat_json(&k), "d_squared": novikov},
    "specialization_commutes": commutes,
    "gauge": {"samples": a.gauges, "seed": g.seed, "laws_hold": laws, "conjugacy_holds": conjugate},
    "passed": pass,
  });
  let rows = d_squared_rows(&d2, &betti.clone().unwrap_or_else(|| vec![0; morse.degrees()]));
  Ok(Report::new(json, vec!["degree", "residual", "zero", "betti"], rows, Outcome::from_bool(pass)))
}

pub fn check(a: &CheckArgs, g: &Global) -> anyhow::Result<Report> {
  let v = input::read_json(&a.input)?;
  match input::kind(&v) {
    Kind::Counting => check_counting(&io::parse_counting(&v)?, a, g),
    Kind::Complex => {
      let c = io::parse_complex(&v)?;
      let d2 = c.check_d_squared();
      let betti = if d2.holds() { Some(c.betti()) } else { None };
      let json = json!({"source": "complex", "dims": c.dims(), "d_squared": d2, "betti": betti, "passed": d2.holds()});
      let rows = d_squared_rows(&d2, &betti.clone().unwrap_or_else(|| vec![0; c.degrees()]));
      Ok(Report::new(json, vec!["degree", "residual", "zero", "betti"], rows, Outcome::from_bool(d2.holds())))
    }
    _ => Err(Error::Schema("check-complex takes a complex or a counting file".into()).into()),
  }
}

fn finite_report(t: &TorsionValue<Gq>, laplacian: Option<&Gq>) -> Report {
  let agrees = laplacian.map(|l| *l == t.squared);
  let json = json!({
    "squared": scalar_json(&t.squared),
    "representative": t.representative.as_ref().map(scalar_json),
    "convention": t.convention.id(),
    "truncation": Value::Null,
    "laplacian": laplacian.map(scalar_json),
    "laplacian_agrees": agrees,
  });
  let row = vec![fmt_gq(&t.squared), t.representative.as_ref().map(fmt_gq).unwrap_or_default(), t.convention.id().to_string()];
  Report::new(json, vec!["squared", "representative", "convention"], vec![row], Outcome::from_bool(agrees != Some(false)))
}

fn novikov_report(file: &CountingFile, a: &TorsionArgs, g: &Global) -> anyhow::Result<Report> {
  let inst = &file.instantons;
  let w = input::weight(a.weight.as_deref(), inst.rank(), inst.zeros().iter().map(|z| z.id.as_str()))?;
  let k: Rat = input::truncation(&g.truncation)?;
  let c = build_novikov_complex(inst, &w, k.clone())?
    .exact_constants()
    .ok_or_else(|| Error::Precondition("torsion over the Novikov ring needs potentials with exact constant factors; use zero potentials".into()))?;
  let convention = Convention::MilnorDet;
  let rep = novikov_torsion(&c, &k, convention)?;
  let squared = rep.convolve(&rep, &k)?;
  let rows = rep
    .terms()
    .iter()
    .map(|(gamma, coeff)| {
      let label = gamma.0.iter().map(i64::to_string).collect::<Vec<_>>().join(" ");
      vec![label, fmt_rat(&rep.level(gamma)), fmt_gq(coeff.get(0, 0))]
    })
    .collect();
  let json = json!({
    "squared": io::series_json(&squared),
    "representative": io::series_json(&rep),
    "convention": convention.id(),
    "truncation": io::rat_json(&k),
  });
  Ok(Report::new(json, vec!["gamma", "level", "coefficient"], rows, Outcome::Pass))
}

pub fn torsion(a: &TorsionArgs, g: &Global) -> anyhow::Result<Report> {
  let v = input::read_json(&a.input)?;
  match input::kind(&v) {
    Kind::Complex => {
      let c = io::parse_complex(&v)?;
      let t = milnor_torsion(&c)?;
      let lap = if c.form().is_some() { Some(torsion_via_laplacian(&c)?) } else { None };
      Ok(finite_report(&t, lap.as_ref()))
    }
    Kind::ChainMap => {
      let t = relative_torsion(&io::parse_chain_map(&v)?)?;
      Ok(finite_report(&t, None))
    }
    Kind::Counting => novikov_report(&io::parse_counting(&v)?, a, g),
    Kind::MapSpec => Err(Error::Schema("torsion takes a complex, a chain map or a counting file; use verify-tor for map specs".into()).into()),
  }
}
