use conegauge::gauge::{distance, Metric};
use conegauge::horo::{detour_empirical, detour_grid, detour_thompson, eval, payload_points, Horofunction};
use conegauge::suite::random_poly_h;
use conegauge::{rng, ConeSpec, Point, Rng64};
use proptest::prelude::*;
use rand::Rng;

fn cone_from(k: u8, seed: u64) -> ConeSpec {
    let mut r = rng(seed);
    match k % 4 {
        0 => ConeSpec::orthant(3).unwrap(),
        1 => ConeSpec::lorentz(3 + (seed % 2) as usize).unwrap(),
        2 => ConeSpec::psd(2).unwrap(),
        _ => random_poly_h(3, 7, &mut r),
    }
}

/// Unit vector u and the pair x = (1, u) on the boundary, a = (1, −u) in the dual boundary.
fn lorentz_pair(dim: usize, r: &mut Rng64) -> (Point, Point) {
    let u = Point::from_fn(dim - 1, |_, _| r.random_range(-1.0..1.0));
    let u = &u / u.norm();
    let mut x = Point::zeros(dim);
    x[0] = 1.0;
    x.rows_mut(1, dim - 1).copy_from(&u);
    let mut a = x.clone();
    a.rows_mut(1, dim - 1).copy_from(&(-u));
    (x, a)
}

fn payloads(c: &ConeSpec, seed: u64) -> Vec<Horofunction> {
    let mut r = rng(seed);
    let x = c.sample_interior(&mut r);
    let g = c.sample_extremal(&mut r);
    let (f, _) = c.dual_extremals(4, &mut r).unwrap()[0].clone();
    let mut out = vec![
        Horofunction::interior_r(&x),
        Horofunction::interior_f(&x),
        Horofunction::reverse_funk(&g),
        Horofunction::funk_singleton(&f),
    ];
    if let conegauge::ConeDesc::Lorentz { dim } = c.desc() {
        let (bx, a) = lorentz_pair(*dim, &mut r);
        let cc = r.random_range(-3.0..3.0);
        out.push(Horofunction::combined(Horofunction::reverse_funk(&bx), Horofunction::funk_singleton(&a), cc));
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn vanishes_at_base_point(k in 0u8..4, seed in any::<u64>()) {
        let c = cone_from(k, seed);
        for h in payloads(&c, seed) {
            prop_assert_eq!(eval(&c, &h, &c.base_point()).unwrap(), 0.0);
        }
    }

    #[test]
    fn one_lipschitz(k in 0u8..4, seed in any::<u64>()) {
        let c = cone_from(k, seed);
        let mut r = rng(seed ^ 4);
        for h in payloads(&c, seed) {
            for _ in 0..20 {
                let (x, y) = (c.sample_interior(&mut r), c.sample_interior(&mut r));
                let d = distance(&c, h.metric(), &x, &y).unwrap();
                prop_assert!(eval(&c, &h, &x).unwrap() - eval(&c, &h, &y).unwrap() <= d + 1e-9);
            }
        }
    }

    #[test]
    fn unbounded_below(k in 0u8..4, seed in any::<u64>()) {
        let c = cone_from(k, seed);
        let b = c.base_point();
        for h in payloads(&c, seed) {
            let along = |n: f64| -> Point {
                let l = n.exp();
                match &h {
                    Horofunction::ThompsonInteriorR { x } | Horofunction::ReverseFunk { x } => Point::from_column_slice(x) * l + &b,
                    Horofunction::Combined { first, .. } => match first.as_ref() {
                        Horofunction::ReverseFunk { x } => Point::from_column_slice(x) * l + &b / l,
                        _ => unreachable!(),
                    },
                    _ => &b / l,
                }
            };
            // the combined path pinches toward the boundary at rate e^{-2n};
            // past n = 13 its points fall inside the interior tolerance
            let (ns, floor): (&[f64], f64) = match &h {
                Horofunction::Combined { c, .. } => (&[4.0, 8.0, 13.0], -13.0 + c.abs() + 1.0),
                _ => (&[5.0, 10.0, 20.0, 25.0], -20.0),
            };
            let mut last = f64::INFINITY;
            for &n in ns {
                let v = eval(&c, &h, &along(n)).unwrap();
                prop_assert!(v < last);
                last = v;
            }
            prop_assert!(last < floor, "{:?} {}", h, last);
        }
    }

    #[test]
    fn combinator_limits_are_exact(seed in any::<u64>(), dim in 3usize..6) {
        let c = ConeSpec::lorentz(dim).unwrap();
        let mut r = rng(seed);
        let (x, a) = lorentz_pair(dim, &mut r);
        let (rf, fs) = (Horofunction::reverse_funk(&x), Horofunction::funk_singleton(&a));
        let up = Horofunction::combined(rf.clone(), fs.clone(), f64::INFINITY);
        let down = Horofunction::combined(rf.clone(), fs.clone(), f64::NEG_INFINITY);
        for _ in 0..50 {
            let y = c.sample_interior(&mut r);
            prop_assert_eq!(eval(&c, &up, &y).unwrap(), eval(&c, &rf, &y).unwrap());
            prop_assert_eq!(eval(&c, &down, &y).unwrap(), eval(&c, &fs, &y).unwrap());
        }
    }

    #[test]
    fn homogeneity_degrees(k in 0u8..4, seed in any::<u64>(), ll in -5.0f64..5.0) {
        let c = cone_from(k, seed);
        let mut r = rng(seed ^ 16);
        let g = c.sample_extremal(&mut r);
        let (f, _) = c.dual_extremals(4, &mut r).unwrap()[0].clone();
        let y = c.sample_interior(&mut r);
        let yl = &y * ll.exp();
        let rf = Horofunction::reverse_funk(&g);
        let fs = Horofunction::funk_singleton(&f);
        prop_assert!((eval(&c, &rf, &yl).unwrap() - eval(&c, &rf, &y).unwrap() + ll).abs() <= 1e-12);
        prop_assert!((eval(&c, &fs, &yl).unwrap() - eval(&c, &fs, &y).unwrap() - ll).abs() <= 1e-12);
    }

    #[test]
    fn detour_formula_dominates_grid(seed in any::<u64>()) {
        let c = ConeSpec::orthant(2).unwrap();
        let mut r = rng(seed);
        let (x, y) = (c.sample_interior(&mut r), c.sample_interior(&mut r));
        let kinds: [fn(&Point) -> Horofunction; 2] = [Horofunction::interior_r, Horofunction::interior_f];
        for mk in kinds {
            let (xi, eta) = (mk(&x), mk(&y));
            let f = detour_thompson(&c, &xi, &eta).unwrap().h;
            let mut anchors = payload_points(&c, &xi);
            anchors.extend(payload_points(&c, &eta));
            let grid = detour_grid(&c, 10_000, &anchors, seed);
            let e = detour_empirical(&c, &xi, &eta, &grid).unwrap();
            prop_assert!(e <= f + 1e-9);
            prop_assert!(f - e <= 0.05, "formula {} grid {}", f, e);
        }
    }

    #[test]
    fn dual_extremal_singletons_have_funk_metric(seed in any::<u64>()) {
        let c = ConeSpec::orthant(3).unwrap();
        let mut r = rng(seed);
        let (f, _) = c.dual_extremals(3, &mut r).unwrap()[0].clone();
        prop_assert_eq!(Horofunction::funk_singleton(&f).metric(), Metric::Funk);
    }
}
