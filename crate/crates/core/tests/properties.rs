use novikov_core::complexes::{build_morse_differential, build_novikov_complex, gauge_conjugate, specialization_commutes};
use novikov_core::counting::check_gauge_laws;
use novikov_core::euler::Chain;
use novikov_core::io::{self, CountingFile};
use novikov_core::matrix::Matrix;
use novikov_core::poly::{det_one_minus_z, Poly};
use novikov_core::sampling::{random_acyclic_complex, random_gauge, random_invertible, random_unit_series, random_weight, seeded_rng};
use novikov_core::scalar::{rat_int, Rat};
use novikov_core::suspension::{fixed_point_count, elementary_divisors, enumerate_fixed_points, fixed_point_index_sum, lefschetz_numbers, lefschetz_zeta, random_chain_self_map, verify_theorem_tor, LefschetzData, TorusAutomorphism, Zeta};
use novikov_core::torsion::{milnor_torsion, torsion_via_laplacian};
use num::traits::Signed;
use num::BigInt;
use proptest::prelude::*;
use rand::Rng;

fn counting(name: &str) -> CountingFile {
  let path = format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
  io::parse_counting(&io::parse_str(&std::fs::read_to_string(path).unwrap()).unwrap()).unwrap()
}

const MODELS: [&str; 3] = ["circle.json", "sphere_like.json", "torus_novikov.json"];

proptest! {
  #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::with_cases(48) })]

  #[test]
  fn inverse_round_trip(seed in any::<u64>(), rank in 1usize..=2) {
    let mut rng = seeded_rng(seed);
    let k = rat_int(6);
    let a = random_unit_series(&mut rng, rank, &k, 5);
    let inv = a.invert(&k).unwrap();
    prop_assert!(a.convolve(&inv, &k).unwrap().is_one());
    prop_assert!(inv.invert(&k).unwrap().agrees_through(&a, &k));
  }

  #[test]
  fn exp_log_round_trip(seed in any::<u64>(), rank in 1usize..=2) {
    let mut rng = seeded_rng(seed);
    let k = rat_int(5);
    let a = random_unit_series(&mut rng, rank, &k, 4);
    let log = a.log_series(&k).unwrap();
    prop_assert!(log.is_positive());
    prop_assert!(log.exp_series(&k).unwrap().agrees_through(&a, &k));
  }

  #[test]
  fn convolution_is_associative_and_respects_the_cap(seed in any::<u64>()) {
    let mut rng = seeded_rng(seed);
    let k = rat_int(5);
    let [a, b, c] = [0; 3].map(|_| random_unit_series(&mut rng, 2, &k, 4));
    let left = a.convolve(&b, &k).unwrap().convolve(&c, &k).unwrap();
    let right = a.convolve(&b.convolve(&c, &k).unwrap(), &k).unwrap();
    prop_assert!(left.agrees_through(&right, &k));
    prop_assert!(left.terms().keys().all(|g| left.level(g) <= k));
  }

  #[test]
  fn models_square_to_zero_under_random_weights(seed in any::<u64>()) {
    let mut rng = seeded_rng(seed);
    for name in MODELS {
      let c = counting(name);
      let ids: Vec<&str> = c.instantons.zeros().iter().map(|z| z.id.as_str()).collect();
      let w = random_weight(&mut rng, c.instantons.rank(), ids.iter().copied());
      let d = build_morse_differential(&c.instantons, &w, f64::INFINITY, true).unwrap();
      prop_assert!(d.check_d_squared().holds());
      prop_assert!(build_novikov_complex(&c.instantons, &w, rat_int(4)).unwrap().check_d_squared().unwrap().holds());
      prop_assert!(specialization_commutes(&c.instantons, &w, rat_int(4)).unwrap());
    }
  }

  #[test]
  fn gauge_shift_conjugates_the_differential(seed in any::<u64>()) {
    let mut rng = seeded_rng(seed);
    for name in MODELS {
      let c = counting(name);
      let ids: Vec<&str> = c.instantons.zeros().iter().map(|z| z.id.as_str()).collect();
      let w = random_weight(&mut rng, c.instantons.rank(), ids.iter().copied());
      let h = random_gauge(&mut rng, ids.iter().copied());
      prop_assert!(check_gauge_laws(&c.instantons, None, &w, &h).unwrap().holds());
      let d = build_morse_differential(&c.instantons, &w, f64::INFINITY, true).unwrap();
      let shifted = build_morse_differential(&c.instantons, &w.gauge_shift(&h).unwrap(), f64::INFINITY, true).unwrap();
      prop_assert_eq!(gauge_conjugate(&d, &h).unwrap(), shifted);
    }
  }

  #[test]
  fn laplacian_torsion_is_squared_torsion(seed in any::<u64>()) {
    let mut rng = seeded_rng(seed);
    let c = random_acyclic_complex(&mut rng, 4, 2);
    let tau = milnor_torsion(&c).unwrap();
    prop_assert_eq!(torsion_via_laplacian(&c).unwrap(), tau.squared);
  }

  #[test]
  fn basis_change_scales_torsion_by_a_determinant(seed in any::<u64>()) {
    let mut rng = seeded_rng(seed);
    let c = random_acyclic_complex(&mut rng, 4, 2);
    let q = rng.gen_range(0..c.degrees());
    let (t, t_inv) = random_invertible(&mut rng, c.dims()[q], 2);
    let before = milnor_torsion(&c).unwrap().representative.unwrap();
    let after = milnor_torsion(&c.without_form().change_basis(q, &t, &t_inv)).unwrap().representative.unwrap();
    let det = t.det();
    let expected = if q % 2 == 0 { before * det } else { before / det };
    prop_assert_eq!(after, expected);
  }

  #[test]
  fn fixed_point_count_matches_enumeration(a in -3i64..=3, b in -3i64..=3, c in -3i64..=3, d in -3i64..=3, k in 1u32..=2) {
    let Ok(map) = TorusAutomorphism::new([[a, b], [c, d]]) else { return Ok(()) };
    let (d1, d2) = elementary_divisors(&map, k).unwrap();
    prop_assume!(d1 * d2 <= 4096);
    prop_assert_eq!(fixed_point_count(&map, k).unwrap(), d1 * d2);
    prop_assert_eq!(enumerate_fixed_points(&map, k).unwrap().len() as u128, d1 * d2);
    prop_assert_eq!(fixed_point_index_sum(&map, k).unwrap().abs(), BigInt::from(d1 * d2));
  }

  #[test]
  fn zeta_log_coefficients_are_lefschetz_over_k(seed in any::<u64>()) {
    let mut rng = seeded_rng(seed);
    let degrees = rng.gen_range(1..=3usize);
    let phis: Vec<Matrix<Rat>> = (0..degrees).map(|_| {
      let n = rng.gen_range(0..=3usize);
      Matrix::from_fn(n, n, |_, _| rat_int(rng.gen_range(-2..=2)))
    }).collect();
    let data = LefschetzData::Maps(phis.clone());
    let Zeta::Rational(z) = lefschetz_zeta(&data).unwrap() else { unreachable!() };
    let l = lefschetz_numbers(&data, 10).unwrap();
    let logs = z.log_taylor(10);
    for (i, (c, lk)) in logs.iter().zip(&l).enumerate() {
      prop_assert_eq!(c.clone(), Rat::new(lk.clone(), BigInt::from(i + 1)));
    }
    // the unreduced product has the same Taylor series
    let (mut num, mut den) = (Poly::one(), Poly::one());
    for (q, p) in phis.iter().enumerate() {
      if q % 2 == 1 { num = num.mul(&det_one_minus_z(p)) } else { den = den.mul(&det_one_minus_z(p)) }
    }
    prop_assert_eq!(num.series_div(&den, 10), z.taylor(10));
  }

  #[test]
  fn json_round_trips(seed in any::<u64>(), rank in 1usize..=2) {
    let mut rng = seeded_rng(seed);
    let s = random_unit_series(&mut rng, rank, &rat_int(4), 6);
    prop_assert_eq!(io::parse_series(&io::series_json(&s)).unwrap(), s);
    let w = random_weight(&mut rng, rank, ["x", "y"]);
    prop_assert_eq!(io::parse_weight(&io::weight_json(&w)).unwrap(), w);
  }

  #[test]
  fn boundary_is_linear_and_gauge_delta_matches(seed in any::<u64>()) {
    let path = format!("{}/fixtures/euler_skeleton.json", env!("CARGO_MANIFEST_DIR"));
    let f = io::parse_skeleton(&io::parse_str(&std::fs::read_to_string(path).unwrap()).unwrap()).unwrap();
    let mut rng = seeded_rng(seed);
    let mut chain = || Chain::from_pairs(["a", "b", "c"].map(|e| (e, rng.gen_range(-3..=3i64))));
    let (x, y) = (chain(), chain());
    let g = &f.graph;
    prop_assert_eq!(g.boundary(&(&x + &y)).unwrap(), &g.boundary(&x).unwrap() + &g.boundary(&y).unwrap());
    let ids: Vec<&str> = g.vertices().iter().map(String::as_str).collect();
    let w = random_weight(&mut rng, 1, ids.iter().copied());
    let h = random_gauge(&mut rng, ids.iter().copied());
    let delta = g.eval_weight_on_chain(&w.gauge_shift(&h).unwrap(), &x).unwrap() - g.eval_weight_on_chain(&w, &x).unwrap();
    prop_assert_eq!(delta, g.gauge_delta(&x, &h).unwrap());
  }
}

proptest! {
  #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::with_cases(12) })]

  #[test]
  fn torsion_of_mapping_torus_is_zeta(seed in any::<u64>()) {
    let mut rng = seeded_rng(seed);
    let phi = random_chain_self_map(&mut rng, 3, 3);
    let report = verify_theorem_tor(&phi, 8).unwrap();
    prop_assert!(report.passed, "{:?}", report);
    prop_assert!(report.representatives_agree);
  }
}
