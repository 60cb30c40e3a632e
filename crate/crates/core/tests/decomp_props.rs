use conegauge::decomp::{alpha_grid, decompose, partition_singletons, projections};
use conegauge::gauge::thompson;
use conegauge::maps::{vinberg_star, ConeMap, Primitive};
use conegauge::suite::{lorentz_boost, mixed_isometries};
use conegauge::{rng, ConeSpec, Point};
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use rand::Rng;

/// (x, y) ↦ (A x, star(B y)) on orthant(2) × lorentz(3): A positive diagonal, B a boost.
fn mixed(seed: u64) -> ConeMap {
    let mut r = rng(seed);
    let o2 = ConeSpec::orthant(2).unwrap();
    let l3 = ConeSpec::lorentz(3).unwrap();
    let c = ConeSpec::product(vec![o2.clone(), l3.clone()]).unwrap();
    let a = DMatrix::from_diagonal(&DVector::from_fn(2, |_, _| r.random_range(0.3..3.0)));
    let boost = ConeMap::new(l3.clone(), l3.clone(), vec![Primitive::Linear(lorentz_boost(3, r.random_range(-0.8..0.8), 1.0))]).unwrap();
    let second = boost.then(&vinberg_star(&l3).unwrap()).unwrap();
    let first = ConeMap::new(o2.clone(), o2, vec![Primitive::Linear(a)]).unwrap();
    ConeMap::new(c.clone(), c, vec![Primitive::Product(vec![first, second])]).unwrap()
}

fn block(z: &Point, idx: &[usize]) -> Point {
    let mut out = Point::zeros(z.len());
    for &i in idx {
        out[i] = z[i];
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn split_invariants(seed in any::<u64>()) {
        let m = mixed(seed);
        let r = decompose(&m.source, &m.target, &m, 200, seed).unwrap();
        prop_assert!(r.verified, "{:?}", r.failures);
        prop_assert_eq!(r.dims, (2, 3));
        prop_assert!(r.coord_error <= 1e-8);
        prop_assert!(r.sum_error <= 1e-8);
        prop_assert!(r.thompson_law_error <= 1e-9);
        prop_assert!(r.residual <= 1e-7);
        let d2 = r.phi2_report.as_ref().unwrap().homogeneity_degree.degree;
        prop_assert!((d2 + 1.0).abs() <= 0.01);
        prop_assert!(r.phi1_report.as_ref().unwrap().gauge_preserving.pass);
        prop_assert!(r.phi2_report.as_ref().unwrap().gauge_reversing.pass);
    }

    /// Projections are the coordinate blocks, and functionals see them as the split predicts.
    #[test]
    fn projections_match_blocks(seed in any::<u64>()) {
        let m = mixed(seed);
        let part = partition_singletons(&m.source, &m, seed).unwrap();
        let mut rr = rng(seed);
        let z = m.source.sample_interior(&mut rr);
        let p = projections(&m, &z, &alpha_grid()).unwrap();
        let (p1, p2) = (Point::from_vec(p.p1.clone()), Point::from_vec(p.p2.clone()));
        prop_assert!((&p1 + &p2 - &z).amax() <= 1e-8 * z.amax());
        prop_assert!((&p1 - block(&z, &[0, 1])).amax() <= 1e-8 * z.amax());
        for &i in &part.f1 {
            let f = Point::from_vec(part.functionals[i].clone());
            prop_assert!((f.dot(&p1) - f.dot(&z)).abs() <= 1e-8 * f.norm() * z.norm());
            prop_assert!(f.dot(&p2).abs() <= 1e-8 * f.norm() * z.norm());
        }
        for &i in &part.f2 {
            let f = Point::from_vec(part.functionals[i].clone());
            prop_assert!(f.dot(&p1).abs() <= 1e-8 * f.norm() * z.norm());
        }
    }

    /// thomp(x₁+x₂, y₁+y₂) = thomp¹(x₁,y₁) ∨ thomp²(x₂,y₂) on the split.
    #[test]
    fn product_thompson_law(seed in any::<u64>()) {
        let c = ConeSpec::product(vec![ConeSpec::orthant(2).unwrap(), ConeSpec::lorentz(3).unwrap()]).unwrap();
        let mut r = rng(seed);
        let (x, y) = (c.sample_interior(&mut r), c.sample_interior(&mut r));
        let parts = c.blocks().into_iter()
            .map(|(o, f)| thompson(f, &x.rows(o, f.dim()).into_owned(), &y.rows(o, f.dim()).into_owned()).unwrap())
            .fold(0.0, f64::max);
        prop_assert!((thompson(&c, &x, &y).unwrap() - parts).abs() <= 1e-12);
    }
}

#[test]
fn constructed_isometries_recovered() {
    for (name, m, dims) in mixed_isometries().unwrap() {
        let r = decompose(&m.source, &m.target, &m, 300, 7).unwrap();
        assert!(r.verified, "{name}: {:?}", r.failures);
        assert_eq!(r.dims, dims, "{name}");
        assert!(r.residual <= 1e-7, "{name}");
    }
}
