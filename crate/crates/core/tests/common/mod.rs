//! Test-side reference implementations, written against the definitions only.
#![allow(dead_code)]

use conegauge::cone::Kind;
use conegauge::{ConeSpec, Point};
use nalgebra::DMatrix;

/// Closed-cone membership without tolerance. V-cones are not supported here.
pub fn member(cone: &ConeSpec, p: &Point) -> bool {
    match cone.kind() {
        Kind::Orthant => p.iter().all(|v| *v >= 0.0),
        Kind::Lorentz => {
            let s: f64 = p.iter().skip(1).map(|v| v * v).sum();
            p[0] >= 0.0 && p[0] * p[0] >= s
        }
        Kind::Psd { n } => unvec(p.as_slice(), *n).symmetric_eigen().eigenvalues.iter().all(|v| *v >= 0.0),
        Kind::PolyH { a } => a.row_iter().all(|r| r.iter().zip(p.iter()).map(|(x, y)| x * y).sum::<f64>() >= 0.0),
        Kind::PolyV { .. } => panic!("no test oracle for V-cones"),
        Kind::Product { .. } => cone.blocks().into_iter().all(|(o, f)| member(f, &p.rows(o, f.dim()).into_owned())),
    }
}

/// Inverse of the library's svec: diagonal first, then the scaled upper triangle.
pub fn unvec(v: &[f64], n: usize) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = v[i];
    }
    let mut k = n;
    for i in 0..n {
        for j in (i + 1)..n {
            m[(i, j)] = v[k] / std::f64::consts::SQRT_2;
            m[(j, i)] = m[(i, j)];
            k += 1;
        }
    }
    m
}

/// inf{λ ≥ 0 : λy − x ∈ cl C} by bracketing and bisection on the membership test.
pub fn bisection_gauge(cone: &ConeSpec, x: &Point, y: &Point) -> f64 {
    let inside = |l: f64| member(cone, &(y * l - x));
    if inside(0.0) {
        return 0.0;
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    while !inside(hi) {
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if inside(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

pub fn pt(v: &[f64]) -> Point {
    Point::from_column_slice(v)
}

pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}
