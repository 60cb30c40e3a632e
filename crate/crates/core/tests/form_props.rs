use conegauge::cone::Extremals;
use conegauge::form::build_form;
use conegauge::maps::{vinberg_star, ConeMap, Primitive};
use conegauge::suite::lorentz_boost;
use conegauge::{rng, ConeSpec, Error};
use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

fn symmetric(k: u8) -> ConeSpec {
    match k % 6 {
        0 => ConeSpec::orthant(3).unwrap(),
        1 => ConeSpec::orthant(5).unwrap(),
        2 => ConeSpec::lorentz(4).unwrap(),
        3 => ConeSpec::psd(2).unwrap(),
        4 => ConeSpec::psd(3).unwrap(),
        _ => ConeSpec::product(vec![ConeSpec::orthant(1).unwrap(), ConeSpec::lorentz(3).unwrap()]).unwrap(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn form_certificate_holds(k in 0u8..6, seed in any::<u64>()) {
        let c = symmetric(k);
        let cert = build_form(&c, &vinberg_star(&c).unwrap(), None, seed).unwrap();
        prop_assert!(cert.symmetry_error <= 1e-9);
        prop_assert!(cert.min_eigenvalue > 0.0 && cert.positive_definite);
        prop_assert!(cert.extremal_diag_error <= 1e-8);
        prop_assert!(cert.basis_drift <= 1e-8);
        prop_assert!(cert.self_duality.pass);
    }

    /// Rebuilding from a different extremal basis leaves B unchanged.
    #[test]
    fn form_basis_independent(k in 0u8..6, seed in any::<u64>()) {
        let c = symmetric(k);
        let star = vinberg_star(&c).unwrap();
        let first = build_form(&c, &star, None, seed).unwrap().matrix();
        let mut r = rng(seed);
        let basis = match c.extremal_generators().unwrap() {
            Extremals::Finite(mut g) => {
                g.shuffle(&mut r);
                g.into_iter().map(|v| v * r.random_range(0.3..3.0)).collect()
            }
            Extremals::Sampler(s) => {
                let mut picked: Vec<conegauge::Point> = Vec::new();
                for g in s.take(40 * c.dim(), &mut r) {
                    let mut trial = picked.clone();
                    trial.push(g);
                    if DMatrix::from_columns(&trial).rank(1e-6) == trial.len() {
                        picked = trial;
                    }
                    if picked.len() == c.dim() {
                        break;
                    }
                }
                picked
            }
        };
        let second = build_form(&c, &star, Some(basis), seed.wrapping_add(1)).unwrap().matrix();
        prop_assert!((&first - &second).amax() <= 1e-8 * first.amax());
    }

    #[test]
    fn orthant_form_is_identity(n in 1usize..7, seed in any::<u64>()) {
        let c = ConeSpec::orthant(n).unwrap();
        let b = build_form(&c, &vinberg_star(&c).unwrap(), None, seed).unwrap().matrix();
        prop_assert!((b - DMatrix::identity(n, n)).amax() <= 1e-10);
    }

    #[test]
    fn automorphism_rejected_at_gate(seed in any::<u64>(), rap in 0.2f64..1.5) {
        let c = ConeSpec::lorentz(3).unwrap();
        let g = ConeMap::new(c.clone(), c.clone(), vec![Primitive::Linear(lorentz_boost(3, rap, 1.0))]).unwrap();
        prop_assert!(matches!(build_form(&c, &g, None, seed), Err(Error::NotReversing(_))));
    }
}
