mod common;

use common::{member, pt};
use conegauge::suite::{random_poly_h, random_poly_v};
use conegauge::{rng, ConeSpec, Extremals, Point};
use nalgebra::DMatrix;
use proptest::prelude::*;
use rand_distr::{Distribution, StandardNormal};

fn gaussian(dim: usize, r: &mut conegauge::Rng64) -> Point {
    Point::from_fn(dim, |_, _| StandardNormal.sample(r))
}

fn cone_from(k: u8, seed: u64) -> ConeSpec {
    let mut r = rng(seed);
    match k % 6 {
        0 => ConeSpec::orthant(2 + (seed % 4) as usize).unwrap(),
        1 => ConeSpec::lorentz(3 + (seed % 3) as usize).unwrap(),
        2 => ConeSpec::psd(2 + (seed % 2) as usize).unwrap(),
        3 => random_poly_h(3 + (seed % 2) as usize, 8, &mut r),
        4 => random_poly_v(3 + (seed % 2) as usize, 7, &mut r),
        _ => ConeSpec::product(vec![ConeSpec::lorentz(3).unwrap(), random_poly_h(3, 6, &mut r)]).unwrap(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn double_dual_same_membership(k in 0u8..6, seed in any::<u64>()) {
        let c = cone_from(k, seed);
        let dd = c.dual().dual();
        let mut r = rng(seed ^ 1);
        for _ in 0..1000 {
            let p = gaussian(c.dim(), &mut r) + c.base_point() * 0.5;
            if c.margin(&p).unwrap().abs() < 1e-6 {
                continue;
            }
            prop_assert_eq!(c.contains(&p, false, 1e-9).unwrap(), dd.contains(&p, false, 1e-9).unwrap());
        }
    }

    #[test]
    fn base_point_strictly_interior(k in 0u8..6, seed in any::<u64>()) {
        let c = cone_from(k, seed);
        prop_assert!(c.contains(&c.base_point(), true, 1e-12).unwrap());
    }

    #[test]
    fn product_membership_is_conjunction(seed in any::<u64>()) {
        let mut r = rng(seed);
        let f1 = random_poly_h(3, 6, &mut r);
        let f2 = ConeSpec::lorentz(3).unwrap();
        let f3 = ConeSpec::psd(2).unwrap();
        let p = ConeSpec::product(vec![f1.clone(), f2.clone(), f3.clone()]).unwrap();
        for _ in 0..500 {
            let x = gaussian(p.dim(), &mut r) + p.base_point();
            let parts = p.blocks().into_iter().all(|(o, f)| f.contains(&x.rows(o, f.dim()).into_owned(), false, 1e-9).unwrap());
            prop_assert_eq!(p.contains(&x, false, 1e-9).unwrap(), parts);
            if p.margin(&x).unwrap().abs() > 1e-6 {
                prop_assert_eq!(parts, member(&p, &x));
            }
        }
    }

    /// Polyhedral generators lie in the closed cone and are extreme: the
    /// facets active at g have rank dim − 1.
    #[test]
    fn polyhedral_generators_extreme(seed in any::<u64>(), dim in 3usize..5) {
        let mut r = rng(seed);
        let c = random_poly_h(dim, 9, &mut r);
        let Extremals::Finite(gens) = c.extremal_generators().unwrap() else { panic!("finite cone") };
        let a: Vec<Point> = match c.desc() {
            conegauge::ConeDesc::PolyH { normals } => normals.iter().map(|n| pt(n)).collect(),
            _ => unreachable!(),
        };
        for g in &gens {
            prop_assert!(c.contains(g, false, 1e-9).unwrap());
            let active: Vec<&Point> = a.iter().filter(|n| (n.dot(g) / n.norm()).abs() <= 1e-9 * g.norm()).collect();
            let m = DMatrix::from_fn(active.len(), dim, |i, j| active[i][j]);
            prop_assert_eq!(m.rank(1e-9), dim - 1);
        }
    }
}
