//! JSON encodings of weights, series, counting data, complexes, map specs and skeletons.
//!
//! Scalars. A rational is a JSON number, a `"p/q"` string, or a `[num, den]`
//! pair. A complex scalar is a rational (real) or a `[re, im]` pair whose parts
//! are rationals. Where both readings are possible the slot decides: complex
//! slots read two-element arrays as `[re, im]`.

use std::collections::BTreeMap;

use num::traits::Zero;
use num::BigInt;
use serde_json::{json, Map, Value};

use crate::complexes::{BasedComplex, ChainMap};
use crate::counting::{InstantonCounts, OrbitCounts};
use crate::error::{Error, Result};
use crate::euler::{Chain, Edge, SkeletonGraph};
use crate::matrix::Matrix;
use crate::novikov::NovikovSeries;
use crate::scalar::{fmt_rat, gq, gq_real, rat_from_f64, Gq, Rat, C64};
use crate::suspension::{LefschetzData, TorusAutomorphism};
use crate::weights::{Gamma, WeightSystem};

fn schema(msg: impl Into<String>) -> Error { Error::Schema(msg.into()) }

pub fn parse_str(text: &str) -> Result<Value> { serde_json::from_str(text).map_err(|e| schema(format!("malformed JSON: {e}"))) }

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> { v.get(key).ok_or_else(|| schema(format!("missing field `{key}`"))) }

fn array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> { v.as_array().ok_or_else(|| schema(format!("{what} must be an array"))) }

fn usize_of(v: &Value, what: &str) -> Result<usize> {
  v.as_u64().map(|n| n as usize).ok_or_else(|| schema(format!("{what} must be a non-negative integer")))
}

fn int_of(v: &Value, what: &str) -> Result<BigInt> {
  if let Some(i) = v.as_i64() {
    return Ok(BigInt::from(i));
  }
  if let Some(s) = v.as_str() {
    return s.trim().parse::<BigInt>().map_err(|_| schema(format!("{what}: `{s}` is not an integer")));
  }
  Err(schema(format!("{what} must be an integer")))
}

pub fn parse_rat(v: &Value) -> Result<Rat> {
  match v {
    Value::Number(n) => {
      if let Some(i) = n.as_i64() {
        Ok(Rat::from_integer(i.into()))
      } else {
        n.as_f64().and_then(rat_from_f64).ok_or_else(|| schema(format!("number {n} is not finite")))
      }
    }
    Value::String(s) => {
      let (p, q) = s.split_once('/').unwrap_or((s.as_str(), "1"));
      let num: BigInt = p.trim().parse().map_err(|_| schema(format!("`{s}` is not a rational")))?;
      let den: BigInt = q.trim().parse().map_err(|_| schema(format!("`{s}` is not a rational")))?;
      if den.is_zero() {
        return Err(schema(format!("`{s}` has zero denominator")));
      }
      Ok(Rat::new(num, den))
    }
    Value::Array(a) if a.len() == 2 => {
      let num = int_of(&a[0], "numerator")?;
      let den = int_of(&a[1], "denominator")?;
      if den.is_zero() {
        return Err(schema("zero denominator"));
      }
      Ok(Rat::new(num, den))
    }
    other => Err(schema(format!("expected a rational, found {other}"))),
  }
}

pub fn parse_gq(v: &Value) -> Result<Gq> {
  match v {
    Value::Array(a) if a.len() == 2 => Ok(gq(parse_rat(&a[0])?, parse_rat(&a[1])?)),
    _ => parse_rat(v).map(gq_real),
  }
}

fn rat_vec(v: &Value, what: &str) -> Result<Vec<Rat>> { array(v, what)?.iter().map(parse_rat).collect() }

pub fn parse_gamma(v: &Value, rank: usize) -> Result<Gamma> {
  let g = array(v, "gamma")?.iter().map(|x| x.as_i64().ok_or_else(|| schema("gamma entries must be integers"))).collect::<Result<Vec<_>>>()?;
  let g = Gamma(g);
  g.check_rank(rank)?;
  Ok(g)
}

/// Matrix given as nested rows; `cols` is needed when there are no rows.
pub fn parse_matrix(v: &Value, rows: usize, cols: usize) -> Result<Matrix<Gq>> {
  let r = array(v, "matrix")?;
  if r.len() != rows {
    return Err(Error::ShapeMismatch(format!("expected {rows} rows, found {}", r.len())));
  }
  let mut data = Vec::with_capacity(rows * cols);
  for row in r {
    let row = array(row, "matrix row")?;
    if row.len() != cols {
      return Err(Error::ShapeMismatch(format!("expected {cols} columns, found {}", row.len())));
    }
    for x in row {
      data.push(parse_gq(x)?);
    }
  }
  Ok(Matrix::from_vec(rows, cols, data))
}

fn matrix_dims(v: &Value) -> Result<(usize, usize)> {
  let r = array(v, "matrix")?;
  let cols = match r.first() {
    Some(row) => array(row, "matrix row")?.len(),
    None => 0,
  };
  Ok((r.len(), cols))
}

pub fn rat_json(r: &Rat) -> Value {
  if r.is_integer() {
    if let Ok(i) = i64::try_from(r.to_integer()) {
      return json!(i);
    }
  }
  Value::String(fmt_rat(r))
}

pub fn gq_json(z: &Gq) -> Value { json!([rat_json(&z.re), rat_json(&z.im)]) }

pub fn c64_json(z: &C64) -> Value { json!([finite_json(z.re), finite_json(z.im)]) }

/// Floats as JSON numbers; non-finite values as strings.
pub fn finite_json(x: f64) -> Value {
  if x.is_finite() { json!(x) } else { Value::String(if x.is_nan() { "nan".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() }) }
}

pub fn matrix_json<R: crate::scalar::Ring>(m: &Matrix<R>, f: impl Fn(&R) -> Value) -> Value {
  Value::Array((0..m.rows()).map(|i| Value::Array((0..m.cols()).map(|j| f(m.get(i, j))).collect())).collect())
}

pub fn parse_weight(v: &Value) -> Result<WeightSystem> {
  let class = array(field(v, "class")?, "class")?.iter().map(parse_gq).collect::<Result<Vec<_>>>()?;
  if let Some(r) = v.get("rank") {
    let r = usize_of(r, "rank")?;
    if r != class.len() {
      return Err(Error::RankMismatch { expected: r, found: class.len() });
    }
  }
  let mut w = WeightSystem::from_class(class);
  if let Some(p) = v.get("potentials") {
    let p = p.as_object().ok_or_else(|| schema("potentials must be an object"))?;
    for (id, val) in p {
      w = w.with_potential(id, parse_gq(val)?);
    }
  }
  if let Some(ray) = v.get("ray") {
    let ray = rat_vec(ray, "ray")?;
    if ray.len() != w.rank() {
      return Err(Error::RankMismatch { expected: w.rank(), found: ray.len() });
    }
    w = w.with_ray(ray);
  }
  Ok(w)
}

pub fn weight_json(w: &WeightSystem) -> Value {
  let mut out = Map::new();
  out.insert("rank".into(), json!(w.rank()));
  out.insert("class".into(), Value::Array(w.class().iter().map(gq_json).collect()));
  out.insert("potentials".into(), Value::Object(w.potentials().iter().map(|(k, p)| (k.clone(), gq_json(p))).collect()));
  if let Some(r) = w.ray() {
    out.insert("ray".into(), Value::Array(r.iter().map(rat_json).collect()));
  }
  Value::Object(out)
}

/// Counting data file: instanton counts (possibly with no zeros) and orbit counts.
#[derive(Clone, Debug)]
pub struct CountingFile {
  pub instantons: InstantonCounts,
  pub orbits: OrbitCounts,
}

pub fn parse_counting(v: &Value) -> Result<CountingFile> {
  let rank = usize_of(field(v, "rank")?, "rank")?;
  let omega = rat_vec(field(v, "omega")?, "omega")?;
  let mut zeros = Vec::new();
  if let Some(z) = v.get("zeros") {
    for e in array(z, "zeros")? {
      let id = field(e, "id")?.as_str().ok_or_else(|| schema("zero id must be a string"))?;
      zeros.push((id.to_string(), usize_of(field(e, "index")?, "index")?));
    }
  }
  let mut instantons = InstantonCounts::new(rank, omega.clone(), zeros)?;
  if let Some(list) = v.get("instantons") {
    for e in array(list, "instantons")? {
      let from = field(e, "from")?.as_str().ok_or_else(|| schema("`from` must be a string"))?;
      let to = field(e, "to")?.as_str().ok_or_else(|| schema("`to` must be a string"))?;
      let count = field(e, "count")?.as_i64().ok_or_else(|| schema("`count` must be an integer"))?;
      instantons.add(from, to, parse_gamma(field(e, "gamma")?, rank)?, count)?;
    }
  }
  let mut orbits = OrbitCounts::new(rank, omega)?;
  if let Some(list) = v.get("orbits") {
    for e in array(list, "orbits")? {
      orbits.add(parse_gamma(field(e, "gamma")?, rank)?, parse_rat(field(e, "value")?)?)?;
    }
  }
  Ok(CountingFile { instantons, orbits })
}

pub fn counting_json(c: &CountingFile) -> Value {
  let i = &c.instantons;
  let zeros: Vec<Value> = i.zeros().iter().map(|z| json!({"id": z.id, "index": z.index})).collect();
  let mut inst = Vec::new();
  for ((from, to), per) in i.pairs() {
    for (g, k) in per {
      inst.push(json!({"from": from, "to": to, "gamma": g, "count": k}));
    }
  }
  let orbits: Vec<Value> = c.orbits.values().iter().map(|(g, v)| json!({"gamma": g, "value": [rat_json(&Rat::from_integer(v.numer().clone())), rat_json(&Rat::from_integer(v.denom().clone()))]})).collect();
  json!({
    "rank": i.rank(),
    "omega": i.omega().iter().map(rat_json).collect::<Vec<_>>(),
    "zeros": zeros,
    "instantons": inst,
    "orbits": orbits,
  })
}

fn parse_shape(v: Option<&Value>) -> Result<(usize, usize)> {
  match v {
    None => Ok((1, 1)),
    Some(Value::Array(a)) if a.len() == 2 => Ok((usize_of(&a[0], "shape")?, usize_of(&a[1], "shape")?)),
    Some(n) => {
      let n = usize_of(n, "shape")?;
      Ok((n, n))
    }
  }
}

fn parse_coeff(v: &Value, shape: (usize, usize)) -> Result<Matrix<Gq>> {
  if shape == (1, 1) {
    let inner = match v {
      Value::Array(a) if a.len() == 1 => match &a[0] {
        Value::Array(b) if b.len() == 1 => &b[0],
        x => x,
      },
      x => x,
    };
    return Ok(Matrix::scalar(parse_gq(inner)?));
  }
  let a = array(v, "coeff")?;
  if a.len() == shape.0 * shape.1 && a.first().is_some_and(|x| !matches!(x, Value::Array(r) if r.len() == shape.1 && r.iter().all(Value::is_array))) && shape.0 != a.len() {
    let data = a.iter().map(parse_gq).collect::<Result<Vec<_>>>()?;
    return Ok(Matrix::from_vec(shape.0, shape.1, data));
  }
  parse_matrix(v, shape.0, shape.1)
}

pub fn parse_series(v: &Value) -> Result<NovikovSeries<Gq>> {
  let rank = usize_of(field(v, "rank")?, "rank")?;
  let omega = rat_vec(field(v, "omega")?, "omega")?;
  let cap = parse_rat(field(v, "K")?)?;
  let shape = parse_shape(v.get("shape"))?;
  let mut terms = Vec::new();
  for t in array(field(v, "terms")?, "terms")? {
    terms.push((parse_gamma(field(t, "gamma")?, rank)?, parse_coeff(field(t, "coeff")?, shape)?));
  }
  NovikovSeries::from_terms(rank, omega, cap, shape, terms)
}

pub fn series_json(s: &NovikovSeries<Gq>) -> Value {
  let scalar = s.shape() == (1, 1);
  let terms: Vec<Value> = s
    .terms()
    .iter()
    .map(|(g, c)| {
      let coeff = if scalar { gq_json(c.get(0, 0)) } else { matrix_json(c, gq_json) };
      json!({"gamma": g, "level": rat_json(&s.level(g)), "coeff": coeff})
    })
    .collect();
  let report = s.report();
  json!({
    "rank": s.rank(),
    "omega": s.omega().iter().map(rat_json).collect::<Vec<_>>(),
    "K": rat_json(s.cap()),
    "shape": if scalar { json!(1) } else { json!([s.shape().0, s.shape().1]) },
    "terms": terms,
    "truncation": {"level": finite_json(report.level), "discarded_terms": report.discarded_terms},
  })
}

/// `{"degrees": [{"dim", "basis"?, "b"?}], "differentials": [matrix, ...]}`.
pub fn parse_complex(v: &Value) -> Result<BasedComplex<Gq>> {
  let degrees = array(field(v, "degrees")?, "degrees")?;
  let dims = degrees.iter().map(|d| usize_of(field(d, "dim")?, "dim")).collect::<Result<Vec<_>>>()?;
  let diffs_json = match v.get("differentials") {
    Some(d) => array(d, "differentials")?.clone(),
    None => Vec::new(),
  };
  if diffs_json.len() != dims.len().saturating_sub(1) {
    return Err(Error::ShapeMismatch(format!("{} degrees need {} differentials", dims.len(), dims.len().saturating_sub(1))));
  }
  let diffs = diffs_json.iter().enumerate().map(|(q, d)| parse_matrix(d, dims[q + 1], dims[q])).collect::<Result<Vec<_>>>()?;
  let mut c = BasedComplex::new(dims.clone(), diffs)?;
  if degrees.iter().any(|d| d.get("basis").is_some()) {
    let basis = degrees
      .iter()
      .enumerate()
      .map(|(q, d)| match d.get("basis") {
        Some(b) => array(b, "basis")?.iter().map(|x| x.as_str().map(String::from).ok_or_else(|| schema("basis labels must be strings"))).collect(),
        None => Ok((0..dims[q]).map(|i| format!("e{q}.{i}")).collect()),
      })
      .collect::<Result<Vec<Vec<String>>>>()?;
    c = c.with_basis(basis)?;
  }
  let forms: Vec<Option<&Value>> = degrees.iter().map(|d| d.get("b")).collect();
  if forms.iter().any(Option::is_some) {
    if forms.iter().any(Option::is_none) {
      return Err(schema("a bilinear form must be given in every degree or none"));
    }
    let b = forms.iter().zip(&dims).map(|(m, &n)| parse_matrix(m.expect("checked above"), n, n)).collect::<Result<Vec<_>>>()?;
    c = c.with_form(b)?;
  }
  Ok(c)
}

pub fn complex_json<R>(c: &BasedComplex<R>, f: impl Fn(&R) -> Value + Copy) -> Value
where
  R: crate::scalar::Ring,
{
  let degrees: Vec<Value> = (0..c.degrees())
    .map(|q| {
      let mut d = Map::new();
      d.insert("dim".into(), json!(c.dims()[q]));
      d.insert("basis".into(), json!(c.basis()[q]));
      if let Some(b) = c.form() {
        d.insert("b".into(), matrix_json(&b[q], f));
      }
      Value::Object(d)
    })
    .collect();
  json!({"degrees": degrees, "differentials": c.diffs().iter().map(|d| matrix_json(d, f)).collect::<Vec<_>>()})
}

/// `{"source": complex, "target": complex?, "maps": [matrix per degree]}`; the
/// target defaults to the source.
pub fn parse_chain_map(v: &Value) -> Result<ChainMap<Gq>> {
  let source = parse_complex(field(v, "source")?)?;
  let target = match v.get("target") {
    Some(t) => parse_complex(t)?,
    None => source.clone(),
  };
  let maps_json = array(field(v, "maps")?, "maps")?;
  if maps_json.len() != source.degrees() {
    return Err(Error::ShapeMismatch("one map per degree".into()));
  }
  let maps = maps_json.iter().enumerate().map(|(q, m)| parse_matrix(m, target.dims()[q], source.dims()[q])).collect::<Result<Vec<_>>>()?;
  ChainMap::new(source, target, maps)
}

/// Real rational form of a complex-valued object, if every entry is real.
pub fn real_part_exact(z: &Gq) -> Option<Rat> { if z.im.is_zero() { Some(z.re.clone()) } else { None } }

#[derive(Clone, Debug)]
pub enum MapSpec {
  Torus(TorusAutomorphism),
  Data(LefschetzData),
  /// An explicit chain self-map on a based complex.
  Chain(ChainMap<Rat>),
}

impl MapSpec {
  pub fn lefschetz_data(&self) -> LefschetzData {
    match self {
      MapSpec::Torus(a) => a.homology_maps(),
      MapSpec::Data(d) => d.clone(),
      MapSpec::Chain(f) => LefschetzData::Maps(f.maps().to_vec()),
    }
  }
}

fn int_matrix(v: &Value) -> Result<Matrix<Rat>> {
  let (r, c) = matrix_dims(v)?;
  let m = parse_matrix(v, r, c)?;
  let data = m.entries().iter().map(|z| real_part_exact(z).filter(Rat::is_integer).ok_or_else(|| schema("map entries must be integers"))).collect::<Result<Vec<_>>>()?;
  Ok(Matrix::from_vec(r, c, data))
}

pub fn parse_map_spec(v: &Value) -> Result<MapSpec> {
  let kind = v.get("type").and_then(Value::as_str);
  match kind {
    Some("torus_automorphism") => {
      let m = int_matrix(field(v, "matrix")?)?;
      if m.shape() != (2, 2) {
        return Err(Error::ShapeMismatch("torus automorphism must be 2×2".into()));
      }
      let a = |i, j| -> Result<i64> { i64::try_from(m.get(i, j).to_integer()).map_err(|_| schema("entry out of range")) };
      Ok(MapSpec::Torus(TorusAutomorphism::new([[a(0, 0)?, a(0, 1)?], [a(1, 0)?, a(1, 1)?]])?))
    }
    Some("homology_maps") => {
      let phis = array(field(v, "phi")?, "phi")?.iter().map(int_matrix).collect::<Result<Vec<_>>>()?;
      if phis.iter().any(|m| !m.is_square()) {
        return Err(Error::ShapeMismatch("homology maps must be square".into()));
      }
      Ok(MapSpec::Data(LefschetzData::Maps(phis)))
    }
    Some("lefschetz_list") => {
      let l = array(field(v, "L")?, "L")?.iter().map(|x| int_of(x, "L")).collect::<Result<Vec<_>>>()?;
      Ok(MapSpec::Data(LefschetzData::List(l)))
    }
    Some("chain_map") | None if v.get("complex").is_some() => {
      let complex = parse_complex(field(v, "complex")?)?;
      let real = complex.try_map(real_part_exact).ok_or_else(|| schema("mapping-torus complexes must be real"))?;
      let phis = array(field(v, "phi")?, "phi")?.iter().map(int_matrix).collect::<Result<Vec<_>>>()?;
      Ok(MapSpec::Chain(ChainMap::new(real.clone(), real, phis)?))
    }
    Some(other) => Err(schema(format!("unknown map type `{other}`"))),
    None => Err(schema("map spec needs a `type`")),
  }
}

/// A 1-skeleton with named Euler chains and Chern–Simons chains between them.
#[derive(Clone, Debug)]
pub struct EulerFixture {
  pub graph: SkeletonGraph,
  pub euler: BTreeMap<String, Chain>,
  /// `(from, to, chain)`: the chain `cs(from, to)`.
  pub cs: Vec<(String, String, Chain)>,
}

fn parse_chain(v: &Value) -> Result<Chain> {
  let obj = v.as_object().ok_or_else(|| schema("a chain is an object of integer coefficients"))?;
  let mut c = Chain::new();
  for (k, x) in obj {
    c.add_to(k, x.as_i64().ok_or_else(|| schema("chain coefficients must be integers"))?);
  }
  Ok(c)
}

pub fn parse_skeleton(v: &Value) -> Result<EulerFixture> {
  let vertices = array(field(v, "vertices")?, "vertices")?.iter().map(|x| x.as_str().map(String::from).ok_or_else(|| schema("vertices must be strings"))).collect::<Result<Vec<_>>>()?;
  let mut edges = Vec::new();
  for (i, e) in array(field(v, "edges")?, "edges")?.iter().enumerate() {
    let s = |k: &str| -> Result<String> { field(e, k)?.as_str().map(String::from).ok_or_else(|| schema(format!("edge `{k}` must be a string"))) };
    let gamma = match e.get("gamma") {
      Some(g) => {
        let g = array(g, "gamma")?.iter().map(|x| x.as_i64().ok_or_else(|| schema("gamma entries must be integers"))).collect::<Result<Vec<_>>>()?;
        Some(Gamma(g))
      }
      None => None,
    };
    let id = match e.get("id") {
      Some(_) => s("id")?,
      None => format!("e{i}"),
    };
    edges.push(Edge { id, from: s("from")?, to: s("to")?, gamma });
  }
  let graph = SkeletonGraph::new(vertices, edges)?;
  let chains = v.get("chains").cloned().unwrap_or(json!({}));
  let mut euler = BTreeMap::new();
  if let Some(ec) = chains.get("euler") {
    for (name, c) in ec.as_object().ok_or_else(|| schema("`euler` must be an object"))? {
      euler.insert(name.clone(), parse_chain(c)?);
    }
  }
  let mut cs = Vec::new();
  if let Some(list) = chains.get("cs") {
    for e in array(list, "cs")? {
      let s = |k: &str| -> Result<String> { field(e, k)?.as_str().map(String::from).ok_or_else(|| schema(format!("cs `{k}` must be a string"))) };
      cs.push((s("from")?, s("to")?, parse_chain(field(e, "chain")?)?));
    }
  }
  Ok(EulerFixture { graph, euler, cs })
}

#[cfg(test)]
mod tests {
  use super::*;
  use crate::scalar::{gq_int, rat, rat_int};

  #[test]
  fn scalar_encodings() {
    assert_eq!(parse_rat(&json!(3)).unwrap(), rat_int(3));
    assert_eq!(parse_rat(&json!("-2/6")).unwrap(), rat(-1, 3));
    assert_eq!(parse_rat(&json!([1, 4])).unwrap(), rat(1, 4));
    assert_eq!(parse_rat(&json!(0.5)).unwrap(), rat(1, 2));
    assert!(parse_rat(&json!([1, 0])).is_err());
    assert_eq!(parse_gq(&json!([1, 2])).unwrap(), gq(rat_int(1), rat_int(2)));
    assert_eq!(parse_gq(&json!([[1, 2], "3/4"])).unwrap(), gq(rat(1, 2), rat(3, 4)));
    assert_eq!(parse_gq(&json!("5")).unwrap(), gq_int(5));
    assert_eq!(gq_json(&gq(rat(1, 2), rat_int(-3))), json!(["1/2", -3]));
  }

  #[test]
  fn weight_round_trip() {
    let v = json!({"rank": 2, "class": [[2, 1], -1], "potentials": {"x": [0, 1]}, "ray": [[1, 2], 0]});
    let w = parse_weight(&v).unwrap();
    assert_eq!(parse_weight(&weight_json(&w)).unwrap(), w);
    assert!(matches!(parse_weight(&json!({"rank": 3, "class": [1]})), Err(Error::RankMismatch { .. })));
  }

  #[test]
  fn series_round_trip() {
    let v = json!({"rank": 1, "omega": [-1], "K": 4, "shape": 1, "terms": [{"gamma": [0], "coeff": 1}, {"gamma": [1], "coeff": [[-1, 0]]}]});
    let s = parse_series(&v).unwrap();
    assert_eq!(s.len(), 2);
    assert_eq!(parse_series(&series_json(&s)).unwrap(), s);
    let m = json!({"rank": 1, "omega": [-1], "K": 2, "shape": 2, "terms": [{"gamma": [0], "coeff": [[1, 0], [0, 1]]}]});
    assert!(parse_series(&m).unwrap().is_one());
  }

  #[test]
  fn complex_round_trip() {
    let v = json!({"degrees": [{"dim": 1, "basis": ["y"]}, {"dim": 1, "basis": ["x"]}], "differentials": [[[5]]]});
    let c = parse_complex(&v).unwrap();
    assert_eq!(c.diffs()[0], Matrix::scalar(gq_int(5)));
    assert_eq!(parse_complex(&complex_json(&c, gq_json)).unwrap(), c);
    assert!(parse_complex(&json!({"degrees": [{"dim": 1}, {"dim": 2}], "differentials": [[[1]]]})).is_err());
  }

  #[test]
  fn map_specs() {
    assert!(matches!(parse_map_spec(&json!({"type": "torus_automorphism", "matrix": [[2, 1], [1, 1]]})).unwrap(), MapSpec::Torus(_)));
    assert!(parse_map_spec(&json!({"type": "torus_automorphism", "matrix": [[1, 0], [0, 1]]})).is_err());
    assert!(matches!(parse_map_spec(&json!({"type": "lefschetz_list", "L": [0, 0, 3]})).unwrap(), MapSpec::Data(LefschetzData::List(_))));
    assert!(parse_map_spec(&json!({"type": "mystery"})).is_err());
  }

  #[test]
  fn malformed_json_is_a_schema_error() {
    assert!(matches!(parse_str("{\"rank\": "), Err(Error::Schema(_))));
  }
}
