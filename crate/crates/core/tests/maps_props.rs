mod common;

use common::bisection_gauge;
use conegauge::classify::{classify, fit_linear};
use conegauge::gauge::{gauge, thompson};
use conegauge::maps::{vinberg_star, ConeMap, Primitive};
use conegauge::suite::{congruence, lorentz_boost};
use conegauge::{rng, ConeSpec};
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use rand::Rng;

fn symmetric(k: u8, seed: u64) -> ConeSpec {
    match k % 4 {
        0 => ConeSpec::orthant(2 + (seed % 5) as usize).unwrap(),
        1 => ConeSpec::lorentz(3 + (seed % 4) as usize).unwrap(),
        2 => ConeSpec::psd(2 + (seed % 3) as usize).unwrap(),
        _ => ConeSpec::product(vec![ConeSpec::psd(2).unwrap(), ConeSpec::lorentz(3).unwrap(), ConeSpec::orthant(1).unwrap()]).unwrap(),
    }
}

/// A random linear automorphism of a symmetric catalog cone.
fn automorphism(c: &ConeSpec, seed: u64) -> DMatrix<f64> {
    let mut r = rng(seed);
    let mut block = |f: &ConeSpec| -> DMatrix<f64> {
        match f.desc() {
            conegauge::ConeDesc::Orthant { dim } => DMatrix::from_diagonal(&DVector::from_fn(*dim, |_, _| r.random_range(0.2..5.0))),
            conegauge::ConeDesc::Lorentz { dim } => lorentz_boost(*dim, r.random_range(-1.0..1.0), r.random_range(0.5..2.0)),
            conegauge::ConeDesc::Psd { n } => {
                let a = DMatrix::identity(*n, *n) + DMatrix::from_fn(*n, *n, |_, _| r.random_range(-0.4..0.4));
                congruence(&a)
            }
            _ => unreachable!(),
        }
    };
    let blocks = c.blocks();
    if blocks.len() == 1 && blocks[0].0 == 0 && blocks[0].1.dim() == c.dim() && !matches!(c.desc(), conegauge::ConeDesc::Product { .. }) {
        return block(c);
    }
    let mut m = DMatrix::zeros(c.dim(), c.dim());
    for (o, f) in blocks {
        m.view_mut((o, o), (f.dim(), f.dim())).copy_from(&block(f));
    }
    m
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn star_reverses_gauges(k in 0u8..4, seed in any::<u64>()) {
        let c = symmetric(k, seed);
        let s = vinberg_star(&c).unwrap();
        let mut r = rng(seed);
        for _ in 0..200 {
            let (x, y) = (c.sample_interior(&mut r), c.sample_interior(&mut r));
            let m = bisection_gauge(&c, &x, &y);
            let rev = gauge(&c, &s.apply(&y), &s.apply(&x)).unwrap();
            prop_assert!((rev - m).abs() <= 1e-9 * m);
            let dt = thompson(&c, &s.apply(&x), &s.apply(&y)).unwrap() - thompson(&c, &x, &y).unwrap();
            prop_assert!(dt.abs() <= 1e-9);
        }
    }

    #[test]
    fn star_is_an_involution(k in 0u8..4, seed in any::<u64>()) {
        let c = symmetric(k, seed);
        let s = vinberg_star(&c).unwrap();
        let fit = fit_linear(&s.then(&s).unwrap(), 0, seed).unwrap();
        prop_assert!(fit.residual <= 1e-9);
        prop_assert!((fit.to_matrix() - DMatrix::identity(c.dim(), c.dim())).amax() <= 1e-9);
    }

    #[test]
    fn composition_parity(k in 0u8..4, seed in any::<u64>()) {
        let c = symmetric(k, seed);
        let s = vinberg_star(&c).unwrap();
        let g = ConeMap::new(c.clone(), c.clone(), vec![Primitive::Linear(automorphism(&c, seed))]).unwrap();
        let rp = s.then(&g).unwrap();
        let rep = classify(&rp, 200, seed, 1e-7).unwrap();
        prop_assert!(rep.gauge_reversing.pass && !rep.gauge_preserving.pass);
        prop_assert!(rep.thompson_isometry.pass);
        let rr = rp.then(&s).unwrap();
        let rep = classify(&rr, 200, seed, 1e-7).unwrap();
        prop_assert!(rep.gauge_preserving.pass && !rep.gauge_reversing.pass);
        prop_assert!(fit_linear(&rr, 0, seed).unwrap().residual <= 1e-8);
    }

    #[test]
    fn fixed_between_identity(k in 0u8..4, seed in any::<u64>()) {
        let c = symmetric(k, seed);
        let s = vinberg_star(&c).unwrap();
        let b = c.base_point();
        let mut r = rng(seed ^ 2);
        for _ in 0..200 {
            let z = c.sample_interior(&mut r);
            let pz = s.apply(&z);
            let rhs = gauge(&c, &z, &pz).unwrap();
            let lhs = gauge(&c, &z, &b).unwrap() * gauge(&c, &b, &pz).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-9 * rhs);
        }
    }

    #[test]
    fn json_round_trip_preserves_action(k in 0u8..4, seed in any::<u64>()) {
        let c = symmetric(k, seed);
        let s = vinberg_star(&c).unwrap();
        let m = s.then(&ConeMap::new(c.clone(), c.clone(), vec![Primitive::Linear(automorphism(&c, seed))]).unwrap()).unwrap();
        let back = ConeMap::from_json(&m.to_json(), None).unwrap();
        let mut r = rng(seed);
        let x = c.sample_interior(&mut r);
        prop_assert!((m.apply(&x) - back.apply(&x)).amax() <= 1e-12 * m.apply(&x).amax());
        let inv = m.invert().unwrap();
        prop_assert!((inv.apply(&m.apply(&x)) - &x).amax() <= 1e-9 * x.amax());
    }
}
