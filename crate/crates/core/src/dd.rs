//! Double description for the extreme rays of {x : A x ≥ 0}.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::linalg::{greedy_basis, Point};

pub const MAX_DD_DIM: usize = 6;
const MAX_RAYS: usize = 20_000;

struct Ray {
    v: Point,
    zeros: Vec<bool>,
}

fn zero_set(a: &DMatrix<f64>, v: &Point, upto: &[bool], tol: f64) -> Vec<bool> {
    let vn = v.norm();
    (0..a.nrows())
        .map(|i| upto[i] && a.row(i).dot(&v.transpose()).abs() <= tol * vn * a.row(i).norm())
        .collect()
}

/// Extreme rays (unit length) of the pointed cone {x : A x ≥ 0}; rows of `a`
/// are the normals and must span the space.
pub fn extreme_rays(a: &DMatrix<f64>, tol: f64) -> Result<Vec<Point>> {
    let n = a.ncols();
    let m = a.nrows();
    if n > MAX_DD_DIM {
        return Err(Error::Overflow(format!("double description capped at dimension {MAX_DD_DIM}, got {n}")));
    }
    let rows: Vec<Point> = (0..m).map(|i| a.row(i).transpose()).collect();
    let basis = greedy_basis(&rows, n, 1e-10);
    if basis.len() < n {
        return Err(Error::InvalidCone("normals do not span the space".into()));
    }
    let mut ab = DMatrix::zeros(n, n);
    for (k, &i) in basis.iter().enumerate() {
        ab.set_row(k, &a.row(i));
    }
    let inv = ab.try_inverse().ok_or_else(|| Error::Singular("initial facet basis".into()))?;
    let mut done = vec![false; m];
    for &i in &basis {
        done[i] = true;
    }
    let mut rays: Vec<Ray> = (0..n)
        .map(|k| {
            let v = inv.column(k).normalize();
            let zeros = zero_set(a, &v, &done, tol);
            Ray { v, zeros }
        })
        .collect();

    for i in 0..m {
        if done[i] {
            continue;
        }
        let ai = a.row(i).transpose();
        let an = ai.norm();
        let vals: Vec<f64> = rays.iter().map(|r| ai.dot(&r.v) / an).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&k| vals[k] > tol).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&k| vals[k] < -tol).collect();
        done[i] = true;
        let mut next: Vec<Ray> = Vec::new();
        for &p in &pos {
            for &q in &neg {
                if !adjacent(&rays, p, q, n) {
                    continue;
                }
                let v = (&rays[q].v * vals[p] - &rays[p].v * vals[q]).normalize();
                let zeros = zero_set(a, &v, &done, tol);
                next.push(Ray { v, zeros });
            }
        }
        for (k, r) in rays.into_iter().enumerate() {
            if vals[k] >= -tol {
                let zeros = zero_set(a, &r.v, &done, tol);
                next.push(Ray { v: r.v, zeros });
            }
        }
        if next.len() > MAX_RAYS {
            return Err(Error::Overflow(format!("more than {MAX_RAYS} intermediate rays")));
        }
        rays = next;
    }
    let mut out: Vec<Point> = Vec::new();
    for r in rays {
        if !out.iter().any(|o| (o - &r.v).norm() < 1e-9) {
            out.push(r.v);
        }
    }
    Ok(out)
}

fn adjacent(rays: &[Ray], p: usize, q: usize, n: usize) -> bool {
    let common: Vec<bool> = rays[p].zeros.iter().zip(&rays[q].zeros).map(|(&a, &b)| a && b).collect();
    let count = common.iter().filter(|&&c| c).count();
    if count + 2 < n {
        return false;
    }
    // no third ray whose zero set contains the common one
    !rays.iter().enumerate().any(|(k, r)| {
        k != p && k != q && common.iter().zip(&r.zeros).all(|(&c, &z)| !c || z)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(a: &DMatrix<f64>) -> Vec<Point> {
        let n = a.ncols();
        let m = a.nrows();
        let mut out: Vec<Point> = Vec::new();
        let mut idx: Vec<usize> = (0..n - 1).collect();
        loop {
            let mut sub = DMatrix::zeros(n - 1, n);
            for (k, &i) in idx.iter().enumerate() {
                sub.set_row(k, &a.row(i));
            }
            let ns = crate::linalg::null_space(&sub, n, 1e-10);
            if ns.ncols() == 1 {
                for sgn in [1.0, -1.0] {
                    let v: Point = ns.column(0) * sgn;
                    if (0..m).all(|i| a.row(i).dot(&v.transpose()) >= -1e-10) && !out.iter().any(|o| (o - &v).norm() < 1e-8) {
                        out.push(v.normalize());
                    }
                }
            }
            // next combination
            let mut k = n - 1;
            loop {
                if k == 0 {
                    return out;
                }
                k -= 1;
                if idx[k] < m - (n - 1 - k) {
                    idx[k] += 1;
                    for j in k + 1..n - 1 {
                        idx[j] = idx[j - 1] + 1;
                    }
                    break;
                }
            }
        }
    }

    fn same_set(a: &[Point], b: &[Point]) -> bool {
        a.len() == b.len() && a.iter().all(|x| b.iter().any(|y| (x - y).norm() < 1e-8))
    }

    #[test]
    fn square_cone() {
        let a = DMatrix::from_row_slice(4, 3, &[1.0, 0.0, 1.0, -1.0, 0.0, 1.0, 0.0, 1.0, 1.0, 0.0, -1.0, 1.0]);
        let rays = extreme_rays(&a, 1e-10).unwrap();
        assert_eq!(rays.len(), 4);
        assert!(same_set(&rays, &brute(&a)), "{:?} {:?}", rays, brute(&a));
    }

    #[test]
    fn random_polygons_match_brute_force() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for n in 3..=4 {
            for _ in 0..10 {
                let m = rng.random_range(n + 1..=9);
                let data: Vec<f64> = (0..m)
                    .flat_map(|_| {
                        let mut r: Vec<f64> = (0..n - 1).map(|_| rng.random_range(-1.0..1.0)).collect();
                        r.insert(0, 1.0);
                        r
                    })
                    .collect();
                let a = DMatrix::from_row_slice(m, n, &data);
                let rays = extreme_rays(&a, 1e-10).unwrap();
                assert!(same_set(&rays, &brute(&a)), "n={n} m={m}");
            }
        }
    }

    #[test]
    fn dimension_cap() {
        let a = DMatrix::identity(7, 7);
        assert!(matches!(extreme_rays(&a, 1e-10), Err(Error::Overflow(_))));
    }
}
