use std::path::Path;

use anyhow::Context;
use novikov_core::error::Error;
use novikov_core::io;
use novikov_core::novikov::level_cap;
use novikov_core::scalar::{gq, Gq, Rat};
use novikov_core::weights::WeightSystem;
use num::traits::Zero;
use serde_json::Value;

pub fn read_json(path: &Path) -> anyhow::Result<Value> {
  let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
  io::parse_str(&text).with_context(|| format!("parsing {}", path.display()))
}

/// What a JSON input file holds, judged by its top-level keys.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
  Counting,
  Complex,
  ChainMap,
  MapSpec,
}

pub fn kind(v: &Value) -> Kind {
  if v.get("type").is_some() {
    Kind::MapSpec
  } else if v.get("maps").is_some() {
    Kind::ChainMap
  } else if v.get("degrees").is_some() {
    Kind::Complex
  } else if v.get("complex").is_some() {
    Kind::MapSpec
  } else {
    Kind::Counting
  }
}

/// `3`, `-1/2` or a decimal such as `-0.75`, taken exactly.
pub fn rational(s: &str) -> Result<Rat, Error> {
  let s = s.trim();
  if let Ok(r) = io::parse_rat(&Value::String(s.to_string())) {
    return Ok(r);
  }
  let x: f64 = s.parse().map_err(|_| Error::Schema(format!("`{s}` is not a number")))?;
  level_cap(x)
}

/// `re` or `re,im`.
pub fn complex(s: &str) -> Result<Gq, Error> {
  match s.split_once(',') {
    Some((re, im)) => Ok(gq(rational(re)?, rational(im)?)),
    None => Ok(gq(rational(s)?, Rat::zero())),
  }
}

pub fn rational_list(s: &str) -> Result<Vec<Rat>, Error> { s.split(',').map(rational).collect() }

pub fn truncation(s: &str) -> Result<Rat, Error> {
  let k = rational(s)?;
  if k < Rat::zero() {
    return Err(Error::Schema(format!("truncation level {s} is negative")));
  }
  Ok(k)
}

pub fn integer_truncation(s: &str) -> Result<usize, Error> {
  let k = truncation(s)?;
  if !k.is_integer() {
    return Err(Error::Schema(format!("truncation level {s} must be an integer here")));
  }
  usize::try_from(k.to_integer()).map_err(|_| Error::Schema(format!("truncation level {s} is too large")))
}

/// The weight in `path`, or the zero weight; zeros without a potential get 0.
pub fn weight<'a>(path: Option<&Path>, rank: usize, zeros: impl IntoIterator<Item = &'a str>) -> anyhow::Result<WeightSystem> {
  let w = match path {
    Some(p) => io::parse_weight(&read_json(p)?).with_context(|| format!("reading weight {}", p.display()))?,
    None => WeightSystem::new(rank),
  };
  if w.rank() != rank {
    return Err(Error::RankMismatch { expected: rank, found: w.rank() }.into());
  }
  Ok(w.with_zeros(zeros))
}

pub fn pair(s: &str) -> Result<(String, String), Error> {
  s.split_once(',')
    .map(|(a, b)| (a.trim().to_string(), b.trim().to_string()))
    .ok_or_else(|| Error::Schema(format!("pair `{s}` must be FROM,TO")))
}
