//! Acceptance checks: one PASS/FAIL line per criterion, exit status 1 on any failure.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use num::traits::{Signed, Zero};
use num::BigInt;

use novikov_core::complexes::{build_morse_differential, build_novikov_complex, gauge_conjugate, BasedComplex};
use novikov_core::counting::check_gauge_laws;
use novikov_core::euler::morse_euler_chain;
use novikov_core::io::{self, CountingFile, EulerFixture};
use novikov_core::numeric;
use novikov_core::sampling::{random_acyclic_complex, random_acyclic_complex_c64, random_complex_with_form, random_gauge, random_unit_series, random_weight, seeded_rng};
use novikov_core::scalar::{rat_int, Rat, C64};
use novikov_core::suspension::{
  enumerate_fixed_points, fixed_point_count, fixed_point_index_sum, homology_chain_map, lefschetz_zeta, random_chain_self_map, verify_theorem_tor, TorusAutomorphism, Zeta,
};
use novikov_core::torsion::{milnor_torsion, torsion_via_laplacian};
use novikov_core::weights::WeightSystem;

const SEED: u64 = 20240611;

struct Outcome {
  passed: bool,
  detail: String,
}

fn pass(detail: impl Into<String>) -> Outcome { Outcome { passed: true, detail: detail.into() } }

fn fail(detail: impl Into<String>) -> Outcome { Outcome { passed: false, detail: detail.into() } }

fn fixture(name: &str) -> serde_json::Value {
  let path = format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
  io::parse_str(&std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"))).expect("bundled fixture parses")
}

fn counting(name: &str) -> CountingFile { io::parse_counting(&fixture(name)).expect("bundled counting fixture") }

const MODELS: [&str; 3] = ["circle.json", "sphere_like.json", "torus_novikov.json"];

fn ids(c: &CountingFile) -> Vec<&str> { c.instantons.zeros().iter().map(|z| z.id.as_str()).collect() }

fn d_squared() -> Outcome {
  let mut rng = seeded_rng(SEED);
  let corrupted = counting("sphere_like_corrupted.json");
  for name in MODELS {
    let c = counting(name);
    for trial in 0..50 {
      let w = random_weight(&mut rng, c.instantons.rank(), ids(&c));
      let Ok(d) = build_morse_differential(&c.instantons, &w, f64::INFINITY, true) else { return fail(format!("{name}: build failed")) };
      if !d.check_d_squared().holds() {
        return fail(format!("{name}: δ² ≠ 0 for weight #{trial}"));
      }
      let nc = build_novikov_complex(&c.instantons, &w, rat_int(6)).expect("novikov complex");
      if !nc.check_d_squared().expect("same lattice").holds() {
        return fail(format!("{name}: Novikov δ² ≠ 0 for weight #{trial}"));
      }
    }
  }
  let mut flagged = 0;
  for _ in 0..50 {
    let w = random_weight(&mut rng, 1, ids(&corrupted));
    let d = build_morse_differential(&corrupted.instantons, &w, f64::INFINITY, true).expect("corrupted fixture builds");
    let nontrivial = !w.class()[0].re.is_zero() || !w.class()[0].im.is_zero();
    if d.check_d_squared().holds() == nontrivial {
      return fail("corrupted fixture not flagged");
    }
    flagged += usize::from(nontrivial);
  }
  pass(format!("3 models × 50 weights exact; corrupted flagged {flagged}/50"))
}

fn cat_fixed_points() -> Outcome {
  let cat = TorusAutomorphism::cat_map();
  let expected = [1u128, 5, 16, 45, 121, 320];
  for (k, &e) in (1..=6u32).zip(&expected) {
    let count = fixed_point_count(&cat, k).expect("hyperbolic");
    let grid = enumerate_fixed_points(&cat, k).expect("small grid").len() as u128;
    let index = fixed_point_index_sum(&cat, k).expect("hyperbolic").abs();
    if count != e || grid != e || index != BigInt::from(e) {
      return fail(format!("k={k}: count {count}, grid {grid}, index sum {index}, expected {e}"));
    }
  }
  pass("1, 5, 16, 45, 121, 320 by divisors, grid enumeration and index sums")
}

fn zeta_log_coefficients() -> Outcome {
  let cat = TorusAutomorphism::cat_map();
  let Ok(Zeta::Rational(z)) = lefschetz_zeta(&cat.homology_maps()) else { return fail("no rational zeta") };
  let logs = z.log_taylor(20);
  for k in 1..=20u32 {
    let l = fixed_point_index_sum(&cat, k).expect("hyperbolic");
    if logs[k as usize - 1] != Rat::new(l.clone(), BigInt::from(k)) {
      return fail(format!("coefficient {k}: {} vs L_k/k = {l}/{k}", logs[k as usize - 1]));
    }
  }
  pass(format!("ζ = {z}, 20 coefficients exact"))
}

fn torsion_equals_zeta() -> Outcome {
  let cat = TorusAutomorphism::cat_map();
  let novikov_core::suspension::LefschetzData::Maps(phis) = cat.homology_maps() else { unreachable!() };
  let phi = homology_chain_map(&phis).expect("homology chain map");
  match verify_theorem_tor(&phi, 16) {
    Ok(r) if r.passed => {}
    Ok(r) => return fail(format!("cat map: first mismatch at level {:?}", r.first_mismatch)),
    Err(e) => return fail(format!("cat map: {e}")),
  }
  let mut rng = seeded_rng(SEED + 4);
  let mut agree = 0;
  for i in 0..100 {
    let phi = random_chain_self_map(&mut rng, 4, 3);
    match verify_theorem_tor(&phi, 16) {
      Ok(r) if r.passed => agree += usize::from(r.representatives_agree),
      Ok(r) => return fail(format!("random map #{i}: first mismatch at level {:?}", r.first_mismatch)),
      Err(e) => return fail(format!("random map #{i}: {e}")),
    }
  }
  pass(format!("cat map and 100 random maps exact through 16; representatives agree in {agree}/100"))
}

fn rel_err(a: C64, b: C64) -> f64 { (a - b).norm() / b.norm().max(f64::MIN_POSITIVE) }

fn laplacian_torsion() -> Outcome {
  let mut rng = seeded_rng(SEED + 5);
  let mut worst: f64 = 0.0;
  for i in 0..200 {
    let c = random_acyclic_complex_c64(&mut rng, 6, 1e4);
    let (Ok(m), Ok(l)) = (milnor_torsion(&c), torsion_via_laplacian(&c)) else { return fail(format!("complex #{i}: torsion failed")) };
    worst = worst.max(rel_err(l, m.squared));
  }
  if worst > 1e-9 {
    return fail(format!("max relative error {worst:.2e}"));
  }
  for i in 0..50 {
    let c = random_acyclic_complex(&mut rng, 6, 2);
    if torsion_via_laplacian(&c).ok() != milnor_torsion(&c).ok().map(|t| t.squared) {
      return fail(format!("rational complex #{i}: not exact"));
    }
  }
  pass(format!("200 float complexes, max rel error {worst:.1e}; 50 rational complexes exact"))
}

fn abscissa() -> Outcome {
  let orbits = counting("cat_map_orbits.json").orbits;
  let series = orbits.to_series(rat_int(60)).expect("orbit series");
  match series.abscissa_estimate(&WeightSystem::new(1), &[rat_int(-1)], 8) {
    Ok(rho) if (rho - 0.962424).abs() <= 1e-3 => pass(format!("ρ = {rho:.6}")),
    Ok(rho) => fail(format!("ρ = {rho:.6}, expected 0.962424")),
    Err(e) => fail(e.to_string()),
  }
}

fn gauge_laws() -> Outcome {
  let mut rng = seeded_rng(SEED + 7);
  let orbits = counting("cat_map_orbits.json").orbits;
  for name in MODELS {
    let c = counting(name);
    for i in 0..50 {
      let w = random_weight(&mut rng, c.instantons.rank(), ids(&c));
      let h = random_gauge(&mut rng, ids(&c));
      let orb = (c.instantons.rank() == 1).then_some(&orbits);
      if !check_gauge_laws(&c.instantons, orb, &w, &h).is_ok_and(|r| r.holds()) {
        return fail(format!("{name}: transform law fails for gauge #{i}"));
      }
      let d = build_morse_differential(&c.instantons, &w, f64::INFINITY, true).expect("builds");
      let shifted = build_morse_differential(&c.instantons, &w.gauge_shift(&h).expect("gauge"), f64::INFINITY, true).expect("builds");
      if gauge_conjugate(&d, &h).ok() != Some(shifted) {
        return fail(format!("{name}: conjugacy fails for gauge #{i}"));
      }
    }
  }
  pass("3 models × 50 gauges: scaling, orbit invariance and conjugacy exact")
}

/// A radius enclosing exactly the (numerically) zero eigenvalues of every
/// Laplacian: half the smallest nonzero modulus, or 1 when all vanish.
fn zero_split_radius(c: &BasedComplex<C64>) -> f64 {
  let lap = c.b_laplacian().expect("random forms are nondegenerate");
  let mags: Vec<f64> = lap.iter().flat_map(numeric::eigenvalues).map(|l| l.norm()).collect();
  let top = mags.iter().copied().fold(0.0, f64::max);
  mags.into_iter().filter(|&m| m > 1e-8 * top).min_by(f64::total_cmp).map_or(1.0, |m| m / 2.0)
}

fn spectral_split() -> Outcome {
  let mut rng = seeded_rng(SEED + 8);
  let (mut worst_cross, mut worst_inv): (f64, f64) = (0.0, 0.0);
  for i in 0..50 {
    let c = random_complex_with_form(&mut rng, 6, 1e4);
    let split = match c.spectral_split(zero_split_radius(&c)) {
      Ok(s) => s,
      Err(e) => return fail(format!("complex #{i}: {e}")),
    };
    if split.cross_pairing > 1e-9 || !split.outside_acyclic() {
      return fail(format!("complex #{i}: cross pairing {:.2e}, outside acyclic {}", split.cross_pairing, split.outside_acyclic()));
    }
    if split.inside.dims() != c.betti().as_slice() {
      return fail(format!("complex #{i}: inside dims {:?}, Betti numbers {:?}", split.inside.dims(), c.betti()));
    }
    worst_cross = worst_cross.max(split.cross_pairing);
    worst_inv = worst_inv.max(split.invariance_residual);
  }
  pass(format!("50 complexes: max cross pairing {worst_cross:.1e}, max invariance residual {worst_inv:.1e}, inside dims = Betti numbers"))
}

fn euler_identities() -> Outcome {
  let f: EulerFixture = io::parse_skeleton(&fixture("euler_skeleton.json")).expect("skeleton fixture");
  let cs: BTreeMap<(String, String), _> = f.cs.iter().map(|(a, b, c)| ((a.clone(), b.clone()), c.clone())).collect();
  for ((a, b), c) in &cs {
    if !f.graph.cs_boundary_check(c, &f.euler[a], &f.euler[b]).unwrap_or(false) {
      return fail(format!("∂cs({a},{b}) ≠ ec({b}) − ec({a})"));
    }
    if a == b && !c.is_zero() {
      return fail(format!("cs({a},{a}) ≠ 0"));
    }
    if let Some(back) = cs.get(&(b.clone(), a.clone())) {
      if back != &-c {
        return fail(format!("cs({b},{a}) ≠ −cs({a},{b})"));
      }
    }
    for ((b2, c2), second) in &cs {
      if b2 == b {
        if let Some(direct) = cs.get(&(a.clone(), c2.clone())) {
          if &(c + second) != direct {
            return fail(format!("cs({a},{b}) + cs({b},{c2}) ≠ cs({a},{c2})"));
          }
        }
      }
    }
  }
  let circle = counting("circle.json");
  let ec = morse_euler_chain(1, circle.instantons.zeros().iter().map(|z| (z.id.as_str(), z.index))).expect("indices in range");
  if ec != novikov_core::euler::Chain::from_pairs([("x", 1), ("y", -1)]) {
    return fail("circle Euler chain is not x − y");
  }
  let mut rng = seeded_rng(SEED + 9);
  let vertices: Vec<&str> = f.graph.vertices().iter().map(String::as_str).collect();
  for (_, _, c) in &f.cs {
    let w = random_weight(&mut rng, 1, vertices.iter().copied());
    let h = random_gauge(&mut rng, vertices.iter().copied());
    let delta = f.graph.eval_weight_on_chain(&w.gauge_shift(&h).expect("gauge"), c).expect("labelled") - f.graph.eval_weight_on_chain(&w, c).expect("labelled");
    if delta != f.graph.gauge_delta(c, &h).expect("known edges") {
      return fail("gauge shift of a chain evaluation");
    }
  }
  pass(format!("{} cs chains: boundary, antisymmetry, additivity, gauge shift exact", cs.len()))
}

fn series_round_trips() -> Outcome {
  let mut rng = seeded_rng(SEED + 10);
  let k = rat_int(12);
  for i in 0..100 {
    let rank = 1 + i % 2;
    let a = random_unit_series(&mut rng, rank, &k, 3);
    let Ok(inv) = a.invert(&k) else { return fail(format!("series #{i}: not invertible")) };
    if !a.convolve(&inv, &k).is_ok_and(|p| p.is_one()) || !inv.invert(&k).is_ok_and(|b| b.agrees_through(&a, &k)) {
      return fail(format!("series #{i}: inverse round trip"));
    }
    let Ok(log) = a.log_series(&k) else { return fail(format!("series #{i}: log failed")) };
    if !log.exp_series(&k).is_ok_and(|e| e.agrees_through(&a, &k)) {
      return fail(format!("series #{i}: exp∘log"));
    }
    let b = log;
    if !b.exp_series(&k).and_then(|e| e.log_series(&k)).is_ok_and(|l| l.agrees_through(&b, &k)) {
      return fail(format!("series #{i}: log∘exp"));
    }
  }
  pass("100 series: inverse, exp∘log and log∘exp exact through level 12")
}

type Criterion = (&'static str, fn() -> Outcome, Option<Duration>);

fn main() {
  let criteria: [Criterion; 10] = [
    ("d-squared", d_squared, Some(Duration::from_secs(1))),
    ("cat-map fixed points", cat_fixed_points, Some(Duration::from_secs(1))),
    ("zeta log coefficients", zeta_log_coefficients, Some(Duration::from_secs(1))),
    ("torsion equals zeta", torsion_equals_zeta, Some(Duration::from_secs(30))),
    ("laplacian torsion", laplacian_torsion, Some(Duration::from_secs(30))),
    ("abscissa", abscissa, Some(Duration::from_secs(5))),
    ("gauge laws", gauge_laws, None),
    ("spectral split", spectral_split, None),
    ("euler/cs identities", euler_identities, None),
    ("series round trips", series_round_trips, None),
  ];
  let mut failures = 0;
  for (i, (name, check, budget)) in criteria.into_iter().enumerate() {
    let start = Instant::now();
    let mut outcome = check();
    let elapsed = start.elapsed();
    if let Some(b) = budget {
      if elapsed > b {
        outcome = fail(format!("{} (took {:.2}s, budget {}s)", outcome.detail, elapsed.as_secs_f64(), b.as_secs()));
      }
    }
    let tag = if outcome.passed { "PASS" } else { "FAIL" };
    failures += usize::from(!outcome.passed);
    println!("{tag} {:>2} {name}: {} [{:.3}s]", i + 1, outcome.detail, elapsed.as_secs_f64());
  }
  println!("seed {SEED}; {} of 10 criteria passed", 10 - failures);
  if failures > 0 {
    std::process::exit(1);
  }
}
