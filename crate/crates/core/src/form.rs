//! The bilinear form B(y,x) = M(x/φ(y)) of a gauge-reversing involution φ.

use nalgebra::{DMatrix, DVector};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::classify::classify;
use crate::cone::ConeSpec;
use crate::error::{Error, Result};
use crate::gauge::gauge_raw;
use crate::linalg::{self, Point};
use crate::maps::ConeMap;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SelfDuality {
    pub pass: bool,
    /// Sampled y in C paired with closure samples z where B(y,z) ≤ 0.
    pub positivity_failures: usize,
    /// Ambient samples where membership in C and B-positivity disagree.
    pub membership_mismatches: usize,
    pub checked: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BilinearFormCertificate {
    pub cone: ConeSpec,
    pub matrix: Vec<Vec<f64>>,
    pub base_point: Vec<f64>,
    pub generator_basis: Vec<Vec<f64>>,
    pub symmetry_error: f64,
    pub symmetry_pairs: usize,
    pub min_eigenvalue: f64,
    pub positive_definite: bool,
    pub positivity_samples: f64,
    pub extremal_diag_error: f64,
    /// Worst relative misfit of the generator functionals y ↦ M(x/φ(y)) by linear ones.
    pub linearity_error: f64,
    /// Relative change of the matrix when rebuilt from a different basis.
    pub basis_drift: f64,
    pub self_duality: SelfDuality,
}

impl BilinearFormCertificate {
    pub fn matrix(&self) -> DMatrix<f64> {
        let n = self.matrix.len();
        DMatrix::from_row_iterator(n, n, self.matrix.iter().flatten().cloned())
    }

    pub fn eval(&self, y: &Point, x: &Point) -> f64 {
        (y.transpose() * self.matrix() * x)[(0, 0)]
    }
}

/// Linear functional ℓ with ℓ(y) ≈ M(x/φ(y)), least squares over interior points.
fn generator_functional(cone: &ConeSpec, phi: &ConeMap, x: &Point, ys: &[Point], phys: &[Point]) -> (Point, f64) {
    let n = cone.dim();
    let a = DMatrix::from_fn(ys.len(), n, |i, j| ys[i][j]);
    let vals = DVector::from_fn(ys.len(), |i, _| gauge_raw(&phi.target, x, &phys[i]));
    let l = linalg::lstsq(&a, &vals).unwrap_or_else(|| DVector::zeros(n));
    let fit = &a * &l;
    let resid = (0..ys.len()).map(|i| linalg::rel_err(fit[i], vals[i])).fold(0.0, f64::max);
    (l, resid)
}

struct Assembled {
    b: DMatrix<f64>,
    basis: Vec<Point>,
    linearity: f64,
}

fn assemble(cone: &ConeSpec, phi: &ConeMap, basis: &[Point], ys: &[Point], phys: &[Point]) -> Result<Assembled> {
    let n = cone.dim();
    if basis.len() != n || linalg::rank(&linalg::columns(basis, n), 1e-9) < n {
        return Err(Error::Singular("extremal basis is rank-deficient".into()));
    }
    let mut l = DMatrix::zeros(n, n);
    let mut linearity = 0.0f64;
    for (j, x) in basis.iter().enumerate() {
        let (lj, r) = generator_functional(cone, phi, x, ys, phys);
        l.set_column(j, &lj);
        linearity = linearity.max(r);
    }
    let xinv = linalg::columns(basis, n)
        .try_inverse()
        .ok_or_else(|| Error::Singular("extremal basis".into()))?;
    Ok(Assembled { b: l * xinv, basis: basis.to_vec(), linearity })
}

/// Builds the form and evaluates every certificate check.
pub fn build_form(cone: &ConeSpec, phi: &ConeMap, basis: Option<Vec<Point>>, seed: u64) -> Result<BilinearFormCertificate> {
    let n = cone.dim();
    if phi.source != *cone || phi.target != *cone {
        return Err(Error::InvalidArgument("map must send the cone to itself".into()));
    }
    let report = classify(phi, 200, seed, 1e-7)?;
    if !report.gauge_reversing.pass {
        return Err(Error::NotReversing(format!("worst relative gauge error {:.3e}", report.gauge_reversing.worst)));
    }
    let b = cone.base_point();
    let fb = phi.apply(&b);
    if (&fb - &b).norm() > 1e-8 * b.norm() {
        return Err(Error::InvalidArgument("map does not fix the base point; normalize it first".into()));
    }
    let mut rng = crate::rng(seed);
    let ys: Vec<Point> = (0..3 * n).map(|_| cone.sample_interior(&mut rng)).collect();
    let phys: Vec<Point> = ys.iter().map(|y| phi.apply(y)).collect();

    let extremals = cone.extremal_generators()?;
    let finite = matches!(extremals, crate::cone::Extremals::Finite(_));
    let pool = extremals.take(4 * n, &mut rng);
    let chosen = match basis {
        Some(bs) => bs,
        None => linalg::greedy_basis(&pool, n, 1e-6).into_iter().map(|i| pool[i].clone()).collect(),
    };
    let main = assemble(cone, phi, &chosen, &ys, &phys)?;
    let bm = &main.b;

    // alternate basis: shuffled and positively rescaled generators
    let mut alt_pool: Vec<Point> = if finite { pool.clone() } else { extremals.take(4 * n, &mut rng) };
    alt_pool.shuffle(&mut rng);
    let alt: Vec<Point> = linalg::greedy_basis(&alt_pool, n, 1e-6)
        .into_iter()
        .map(|i| &alt_pool[i] * rng.random_range(0.5..2.0))
        .collect();
    let other = assemble(cone, phi, &alt, &ys, &phys)?;
    let scale = bm.amax().max(1e-300);
    let basis_drift = (&other.b - bm).amax() / scale;

    // symmetry on generator pairs, every functional built from gauges directly
    let gens: Vec<Point> = if finite { pool.clone() } else { extremals.take(2 * n + 2, &mut rng) };
    let funcs: Vec<Point> = gens.iter().map(|g| generator_functional(cone, phi, g, &ys, &phys).0).collect();
    let mut symmetry_error = (bm - bm.transpose()).amax();
    let mut symmetry_pairs = 0;
    for i in 0..gens.len() {
        for j in 0..gens.len() {
            if i != j {
                symmetry_error = symmetry_error.max((funcs[i].dot(&gens[j]) - funcs[j].dot(&gens[i])).abs());
                symmetry_pairs += 1;
            }
        }
    }

    let sym = (bm + bm.transpose()) * 0.5;
    let min_eigenvalue = linalg::min_eigenvalue(&sym);
    let positive_definite = min_eigenvalue > 1e-10 * bm.norm();

    let mut positivity_samples = f64::INFINITY;
    for _ in 0..1000 {
        let y = cone.sample_interior(&mut rng);
        let z = cone.sample_interior(&mut rng);
        positivity_samples = positivity_samples.min((y.transpose() * bm * &z)[(0, 0)]);
    }

    let mut extremal_diag_error = 0.0f64;
    for g in &gens {
        let lhs = (g.transpose() * bm * g)[(0, 0)];
        let m = gauge_raw(cone, g, &b);
        extremal_diag_error = extremal_diag_error.max((lhs - m * m).abs());
    }

    let self_duality = self_duality_check(cone, bm, &gens, &mut rng)?;

    Ok(BilinearFormCertificate {
        cone: cone.clone(),
        matrix: bm.row_iter().map(|r| r.iter().cloned().collect()).collect(),
        base_point: b.iter().cloned().collect(),
        generator_basis: main.basis.iter().map(|g| g.iter().cloned().collect()).collect(),
        symmetry_error,
        symmetry_pairs,
        min_eigenvalue,
        positive_definite,
        positivity_samples,
        extremal_diag_error,
        linearity_error: main.linearity,
        basis_drift,
        self_duality,
    })
}

/// The B-dual {y : B(y,z) > 0 for all z in the closed cone} compared with C
/// from both sides, by sampling.
fn self_duality_check(cone: &ConeSpec, bm: &DMatrix<f64>, gens: &[Point], rng: &mut crate::Rng64) -> Result<SelfDuality> {
    let n = cone.dim();
    let mut closure: Vec<Point> = gens.to_vec();
    for _ in 0..64 {
        closure.push(cone.sample_extremal(rng));
    }
    let mut positivity_failures = 0;
    for _ in 0..500 {
        let y = cone.sample_interior(rng);
        for z in &closure {
            if (y.transpose() * bm * z)[(0, 0)] <= 0.0 {
                positivity_failures += 1;
            }
        }
    }
    let dual = cone.dual();
    let mut membership_mismatches = 0;
    let mut checked = 0;
    for _ in 0..2000 {
        let y: Point = DVector::from_fn(n, |_, _| StandardNormal.sample(rng));
        let c_margin = cone.margin(&y)?;
        let by = bm.transpose() * &y;
        let d_margin = dual.margin(&by)?;
        // skip samples within numerical reach of either boundary
        if c_margin.abs() < 1e-6 * y.norm() || d_margin.abs() < 1e-6 * by.norm() {
            continue;
        }
        checked += 1;
        if (c_margin > 0.0) != (d_margin > 0.0) {
            membership_mismatches += 1;
        }
    }
    Ok(SelfDuality {
        pass: positivity_failures == 0 && membership_mismatches == 0,
        positivity_failures,
        membership_mismatches,
        checked,
    })
}

/// Whether "B(x,y) ≥ −tol for sampled y in C" agrees with closure membership of x.
pub fn koecher_closure_test(cert: &BilinearFormCertificate, x: &Point, samples: usize, seed: u64) -> Result<bool> {
    let cone = &cert.cone;
    crate::error::check_dim(cone.dim(), x.len())?;
    let bm = cert.matrix();
    let b = cone.base_point();
    let mut rng = crate::rng(seed);
    let mut lo = f64::INFINITY;
    for k in 0..samples.max(1) {
        // alternate generic interior points with points hugging the boundary
        let y = if k % 2 == 0 {
            cone.sample_interior(&mut rng)
        } else {
            cone.sample_extremal(&mut rng) + &b * 1e-9
        };
        let v = (x.transpose() * &bm * &y)[(0, 0)] / y.norm();
        lo = lo.min(v);
    }
    let tol = 1e-9 * x.norm().max(1.0);
    let positive = lo >= -tol;
    Ok(positive == cone.contains(x, false, tol)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::{vinberg_star, Primitive};

    #[test]
    fn orthant_form_is_identity() {
        let o = ConeSpec::orthant(4).unwrap();
        let c = build_form(&o, &vinberg_star(&o).unwrap(), None, 1).unwrap();
        assert!((c.matrix() - DMatrix::identity(4, 4)).amax() < 1e-10);
        assert!(c.self_duality.pass && c.positive_definite);
        assert!(c.extremal_diag_error < 1e-10);
    }

    #[test]
    fn lorentz_form() {
        let l = ConeSpec::lorentz(3).unwrap();
        let c = build_form(&l, &vinberg_star(&l).unwrap(), None, 2).unwrap();
        assert!(c.symmetry_error <= 1e-9, "{}", c.symmetry_error);
        assert!(c.min_eigenvalue > 0.0);
        // B(y,x) = 2(t s + w·u)
        assert!((c.matrix() - DMatrix::identity(3, 3) * 2.0).amax() < 1e-9);
        assert!(c.extremal_diag_error < 1e-8);
    }

    #[test]
    fn not_reversing_rejected() {
        let o = ConeSpec::orthant(2).unwrap();
        let a = DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 1.0]);
        let m = ConeMap::new(o.clone(), o.clone(), vec![Primitive::Linear(a)]).unwrap();
        assert!(matches!(build_form(&o, &m, None, 3), Err(Error::NotReversing(_))));
    }

    #[test]
    fn koecher_examples() {
        let o = ConeSpec::orthant(3).unwrap();
        let c = build_form(&o, &vinberg_star(&o).unwrap(), None, 4).unwrap();
        let b = o.base_point();
        assert!(koecher_closure_test(&c, &b, 200, 5).unwrap());
        assert!(koecher_closure_test(&c, &(-&b), 200, 5).unwrap());
        assert!(koecher_closure_test(&c, &crate::cone::unit(3, 1), 200, 5).unwrap());
    }
}
