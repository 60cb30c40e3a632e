//! The gauge M(x/y) and the Funk, reverse-Funk, Hilbert and Thompson metrics.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::cone::{ConeSpec, CrossSection, Kind};
use crate::error::{check_dim, Error, Result};
use crate::linalg::{self, smat, Point};
use crate::lp;

/// M(x/y) for interior y and any x (clamped at 0 when −x is in the cone).
pub(crate) fn gauge_raw(cone: &ConeSpec, x: &Point, y: &Point) -> f64 {
    match cone.kind() {
        Kind::Orthant => ratio_max(x.iter().zip(y.iter()).map(|(a, b)| a / b)),
        Kind::PolyH { a } => {
            let ax = a * x;
            let ay = a * y;
            ratio_max(ax.iter().zip(ay.iter()).map(|(p, q)| p / q))
        }
        Kind::PolyV { g } => lp::min_shift(g, y, x).map(|s| s.max(0.0)).unwrap_or(f64::NAN),
        Kind::Lorentz => lorentz_gauge(x, y),
        Kind::Psd { n } => psd_gauge(&smat(x.as_slice(), *n), &smat(y.as_slice(), *n)),
        Kind::Product { factors, offsets } => factors
            .iter()
            .zip(offsets)
            .map(|(f, &o)| gauge_raw(f, &x.rows(o, f.dim()).into_owned(), &y.rows(o, f.dim()).into_owned()))
            .fold(0.0, f64::max),
    }
}

fn ratio_max(it: impl Iterator<Item = f64>) -> f64 {
    it.fold(0.0, f64::max)
}

/// Larger root of q(λy − x) = 0, clamped at 0. Evaluated after boosting y to
/// its rest frame (s, 0), where the root is (x₀′ + ‖x′ᵥ‖)/s; the direct
/// quadratic formula is inaccurate near a double root (x parallel to y).
fn lorentz_gauge(x: &Point, y: &Point) -> f64 {
    let k = x.len() - 1;
    let (t, v) = (y[0], y.rows(1, k));
    let xv = x.rows(1, k);
    let vn = v.norm();
    let s = ((t - vn) * (t + vn)).sqrt();
    let a = x[0] * t - xv.dot(&v);
    let (par, perp) = if vn > 0.0 {
        let n = v / vn;
        let c = xv.dot(&n);
        ((t * c - vn * x[0]) / s, (xv - n * c).norm())
    } else {
        (0.0, xv.norm())
    };
    let lam = (a / s + par.hypot(perp)) / s;
    if lam.is_nan() { f64::NAN } else { lam.max(0.0) }
}

fn psd_gauge(x: &DMatrix<f64>, y: &DMatrix<f64>) -> f64 {
    let Some(ch) = y.clone().cholesky() else { return f64::NAN };
    let l = ch.l();
    let Some(t) = l.solve_lower_triangular(x) else { return f64::NAN };
    let Some(z) = l.solve_lower_triangular(&t.transpose()) else { return f64::NAN };
    linalg::max_eigenvalue(&z).max(0.0)
}

/// M(x/y) with y interior; x may lie on the boundary.
pub fn gauge(cone: &ConeSpec, x: &Point, y: &Point) -> Result<f64> {
    check_dim(cone.dim(), x.len())?;
    check_dim(cone.dim(), y.len())?;
    if !cone.is_interior(y) {
        return Err(Error::NotInterior("second gauge argument".into()));
    }
    if !x.iter().all(|v| v.is_finite()) {
        return Err(Error::InvalidArgument("non-finite coordinates".into()));
    }
    let m = gauge_raw(cone, x, y);
    if m.is_nan() {
        return Err(Error::Lp("gauge computation failed".into()));
    }
    Ok(m)
}

/// Gauge with the value's witness: the maximizing facet, coordinate,
/// eigenvector or factor.
pub fn gauge_witness(cone: &ConeSpec, x: &Point, y: &Point) -> Result<(f64, serde_json::Value)> {
    let m = gauge(cone, x, y)?;
    let w = match cone.kind() {
        Kind::Orthant => json!({"coordinate": argmax(x.iter().zip(y.iter()).map(|(a, b)| a / b))}),
        Kind::PolyH { a } => {
            let ax = a * x;
            let ay = a * y;
            json!({"facet": argmax(ax.iter().zip(ay.iter()).map(|(p, q)| p / q))})
        }
        Kind::PolyV { .. } => json!({"method": "lp"}),
        Kind::Lorentz => json!({"method": "quadratic"}),
        Kind::Psd { n } => {
            let xm = smat(x.as_slice(), *n);
            let ym = smat(y.as_slice(), *n);
            let l = ym.cholesky().ok_or_else(|| Error::NotInterior("psd y".into()))?.l();
            let t = l.solve_lower_triangular(&xm).ok_or_else(|| Error::Singular("cholesky factor".into()))?;
            let z = l.solve_lower_triangular(&t.transpose()).ok_or_else(|| Error::Singular("cholesky factor".into()))?;
            let eig = linalg::sym_eigen(&z);
            let k = argmax(eig.eigenvalues.iter().cloned());
            // map back: v = L^{-T} u
            let u = eig.eigenvectors.column(k).into_owned();
            let v = l.transpose().solve_upper_triangular(&u).unwrap_or(u);
            json!({"eigenvector": v.iter().cloned().collect::<Vec<_>>()})
        }
        Kind::Product { factors, offsets } => {
            let vals: Vec<f64> = factors
                .iter()
                .zip(offsets)
                .map(|(f, &o)| gauge_raw(f, &x.rows(o, f.dim()).into_owned(), &y.rows(o, f.dim()).into_owned()))
                .collect();
            json!({"factor": argmax(vals.into_iter())})
        }
    };
    Ok((m, w))
}

fn argmax(it: impl Iterator<Item = f64>) -> usize {
    let mut best = (0, f64::NEG_INFINITY);
    for (i, v) in it.enumerate() {
        if v > best.1 {
            best = (i, v);
        }
    }
    best.0
}

/// M(x/y) for y in the closed cone. Returns +∞ when x is not in the linear
/// span of y's face from the positive side. Quantities below `tol` relative
/// to the inputs count as zero.
pub fn face_gauge(cone: &ConeSpec, x: &Point, y: &Point, tol: f64) -> Result<f64> {
    check_dim(cone.dim(), x.len())?;
    check_dim(cone.dim(), y.len())?;
    Ok(face_gauge_raw(cone, x, y, tol))
}

pub(crate) fn face_gauge_raw(cone: &ConeSpec, x: &Point, y: &Point, tol: f64) -> f64 {
    let xn = x.norm();
    let yn = y.norm();
    if xn <= tol * yn.max(1.0) || xn == 0.0 {
        return 0.0;
    }
    if yn <= tol * xn {
        return f64::INFINITY;
    }
    let rule = |num: f64, den: f64, nscale: f64, dscale: f64| -> Option<f64> {
        if den > tol * dscale {
            Some(num / den)
        } else if num > tol * nscale {
            None
        } else {
            Some(0.0)
        }
    };
    match cone.kind() {
        Kind::Orthant => {
            let mut m = 0.0f64;
            for i in 0..x.len() {
                match rule(x[i], y[i], xn, yn) {
                    Some(r) => m = m.max(r),
                    None => return f64::INFINITY,
                }
            }
            m
        }
        Kind::PolyH { a } => {
            let ax = a * x;
            let ay = a * y;
            let mut m = 0.0f64;
            for i in 0..ax.len() {
                match rule(ax[i], ay[i], xn, yn) {
                    Some(r) => m = m.max(r),
                    None => return f64::INFINITY,
                }
            }
            m
        }
        Kind::PolyV { g } => lp::min_shift(g, y, x).map(|s| s.max(0.0)).unwrap_or(f64::NAN),
        Kind::Lorentz => {
            if cone.margin_raw(y) > tol * yn {
                return lorentz_gauge(x, y);
            }
            let k = x[0] / y[0];
            if (x - y * k).norm() <= tol * (xn + yn) * 10.0 {
                k.max(0.0)
            } else {
                f64::INFINITY
            }
        }
        Kind::Psd { n } => {
            let xm = smat(x.as_slice(), *n);
            let ym = smat(y.as_slice(), *n);
            let eig = linalg::sym_eigen(&ym);
            let top = eig.eigenvalues.iter().cloned().fold(0.0, f64::max);
            let range: Vec<usize> = (0..*n).filter(|&i| eig.eigenvalues[i] > tol * top).collect();
            let null: Vec<usize> = (0..*n).filter(|&i| eig.eigenvalues[i] <= tol * top).collect();
            let xs = xm.norm();
            for &j in &null {
                let u = eig.eigenvectors.column(j);
                if (&xm * u).norm() > tol * xs * 10.0 {
                    return f64::INFINITY;
                }
            }
            let r = range.len();
            let mut z = DMatrix::zeros(r, r);
            for (a, &i) in range.iter().enumerate() {
                for (b, &j) in range.iter().enumerate() {
                    let ui = eig.eigenvectors.column(i);
                    let uj = eig.eigenvectors.column(j);
                    z[(a, b)] = (ui.transpose() * &xm * uj)[(0, 0)]
                        / (eig.eigenvalues[i] * eig.eigenvalues[j]).sqrt();
                }
            }
            linalg::max_eigenvalue(&z).max(0.0)
        }
        Kind::Product { factors, offsets } => {
            let mut m = 0.0f64;
            for (f, &o) in factors.iter().zip(offsets) {
                let xb = x.rows(o, f.dim()).into_owned();
                let yb = y.rows(o, f.dim()).into_owned();
                let v = if xb.norm() <= tol * xn {
                    0.0
                } else if yb.norm() <= tol * yn {
                    f64::INFINITY
                } else {
                    face_gauge_raw(f, &xb, &yb, tol)
                };
                m = m.max(v);
            }
            m
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    Funk,
    Rfunk,
    Hilbert,
    Thompson,
}

impl FromStr for Metric {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "funk" => Ok(Metric::Funk),
            "rfunk" => Ok(Metric::Rfunk),
            "hilbert" => Ok(Metric::Hilbert),
            "thompson" => Ok(Metric::Thompson),
            _ => Err(Error::InvalidArgument(format!("unknown metric {s}"))),
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Metric::Funk => "funk",
            Metric::Rfunk => "rfunk",
            Metric::Hilbert => "hilbert",
            Metric::Thompson => "thompson",
        };
        f.write_str(s)
    }
}

/// F(x,y) = log M(x/y). x may be a boundary point.
pub fn funk(cone: &ConeSpec, x: &Point, y: &Point) -> Result<f64> {
    Ok(gauge(cone, x, y)?.ln())
}

/// R(x,y) = F(y,x).
pub fn rfunk(cone: &ConeSpec, x: &Point, y: &Point) -> Result<f64> {
    funk(cone, y, x)
}

pub fn hilbert(cone: &ConeSpec, x: &Point, y: &Point) -> Result<f64> {
    let a = gauge(cone, x, y)?;
    let b = gauge(cone, y, x)?;
    Ok((a.ln() + b.ln()).max(0.0))
}

pub fn thompson(cone: &ConeSpec, x: &Point, y: &Point) -> Result<f64> {
    let a = gauge(cone, x, y)?;
    let b = gauge(cone, y, x)?;
    Ok(a.ln().max(b.ln()))
}

pub fn distance(cone: &ConeSpec, metric: Metric, x: &Point, y: &Point) -> Result<f64> {
    match metric {
        Metric::Funk => funk(cone, x, y),
        Metric::Rfunk => rfunk(cone, x, y),
        Metric::Hilbert => hilbert(cone, x, y),
        Metric::Thompson => thompson(cone, x, y),
    }
}

const BISECT_TOL: f64 = 1e-12;
const BISECT_CAP: usize = 200;

/// The two points where the line through x and y leaves the section, ordered
/// w, x, y, z along the line.
pub fn boundary_intersections(cone: &ConeSpec, section: &CrossSection, x: &Point, y: &Point) -> Result<(Point, Point)> {
    check_dim(cone.dim(), x.len())?;
    check_dim(cone.dim(), y.len())?;
    if !section.contains(x, 1e-9) || !section.contains(y, 1e-9) {
        return Err(Error::InvalidArgument("points must lie on the cross-section".into()));
    }
    if !cone.is_interior(x) || !cone.is_interior(y) {
        return Err(Error::NotInterior("boundary_intersections endpoints".into()));
    }
    let d: Point = y - x;
    if d.norm() <= 1e-14 * x.norm() {
        return Err(Error::InvalidArgument("x and y coincide".into()));
    }
    let exit = |dir: &Point| -> Result<Point> {
        // x + s·dir stays in the closed cone for s ≤ 1/M(−dir/x)
        let m = gauge_raw(cone, &(-dir), x);
        if !(m > 0.0) {
            return Err(Error::Verification("line does not exit the section".into()));
        }
        let s = 1.0 / m;
        Ok(refine(cone, x, dir, s))
    };
    let z = exit(&d)?;
    let w = exit(&(-&d))?;
    Ok((w, z))
}

/// Bisection on membership around the closed-form exit parameter, used only
/// when the closed form misses the boundary by more than the tolerance.
fn refine(cone: &ConeSpec, x: &Point, dir: &Point, s: f64) -> Point {
    let p = x + dir * s;
    let scale = p.norm().max(1.0);
    if cone.margin_raw(&p).abs() <= BISECT_TOL * scale {
        return p;
    }
    let inside = |t: f64| cone.margin_raw(&(x + dir * t)) >= 0.0;
    let (mut lo, mut hi) = (s * (1.0 - 1e-6), s * (1.0 + 1e-6));
    let mut k = 0;
    while !inside(lo) && k < 60 {
        lo *= 0.5;
        k += 1;
    }
    k = 0;
    while inside(hi) && k < 60 {
        hi *= 2.0;
        k += 1;
    }
    for _ in 0..BISECT_CAP {
        if hi - lo <= BISECT_TOL * s.max(1e-300) {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if inside(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    x + dir * lo
}

/// Hilbert distance from the cross ratio of four collinear points w, x, y, z.
pub fn cross_ratio_distance(w: &Point, x: &Point, y: &Point, z: &Point) -> f64 {
    let zx = (z - x).norm();
    let wy = (w - y).norm();
    let zy = (z - y).norm();
    let wx = (w - x).norm();
    (zx * wy / (zy * wx)).ln()
}

/// Point p on the segment [x,y] with d_H(x,p) = t.
pub fn hilbert_geodesic_point(cone: &ConeSpec, section: &CrossSection, x: &Point, y: &Point, t: f64) -> Result<Point> {
    check_dim(cone.dim(), x.len())?;
    check_dim(cone.dim(), y.len())?;
    if !section.contains(x, 1e-9) || !section.contains(y, 1e-9) {
        return Err(Error::InvalidArgument("points must lie on the cross-section".into()));
    }
    let total = hilbert(cone, x, y)?;
    if !(0.0..=total * (1.0 + 1e-12) + 1e-15).contains(&t) {
        return Err(Error::InvalidArgument(format!("t = {t} outside [0, {total}]")));
    }
    if t == 0.0 {
        return Ok(x.clone());
    }
    if t >= total {
        return Ok(y.clone());
    }
    let at = |s: f64| x + (y - x) * s;
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..BISECT_CAP {
        if hi - lo <= BISECT_TOL * 1e-3 {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if hilbert(cone, x, &at(mid))? < t {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(at(0.5 * (lo + hi)))
}

/// Whether the open chord (w,z) of the section is the unique geodesic line
/// through its endpoints: false exactly when boundary segments through w and
/// z span a 2-dimensional affine plane together with the chord.
pub fn is_unique_geodesic_line(cone: &ConeSpec, section: &CrossSection, w: &Point, z: &Point) -> Result<bool> {
    check_dim(cone.dim(), w.len())?;
    check_dim(cone.dim(), z.len())?;
    let tol = 1e-9;
    for p in [w, z] {
        if !section.contains(p, tol) {
            return Err(Error::InvalidArgument("endpoints must lie on the cross-section".into()));
        }
        if cone.margin_raw(p).abs() > tol * p.norm().max(1.0) {
            return Err(Error::InvalidArgument("endpoints must lie on the boundary".into()));
        }
    }
    let mid: Point = (w + z) * 0.5;
    if !cone.is_interior(&mid) || cone.margin_raw(&mid) <= tol * mid.norm() {
        return Err(Error::InvalidArgument("open chord (w,z) is not interior".into()));
    }
    let has_curved = cone.blocks().iter().any(|(_, f)| matches!(f.kind(), Kind::Psd { n } if *n > 1) || matches!(f.kind(), Kind::Lorentz if f.dim() > 2));
    match cone.kind() {
        Kind::Lorentz => return Ok(true),
        Kind::Psd { .. } => return Err(Error::Unsupported("unique-geodesic decision for psd sections".into())),
        Kind::Product { .. } if has_curved => {
            return Err(Error::Unsupported("unique-geodesic decision for products with curved factors".into()))
        }
        _ => {}
    }
    let n = cone.dim();
    let f = DMatrix::from_row_slice(1, n, section.functional.as_slice());
    let kerf = linalg::null_space(&f, n, 1e-12);
    let restrict = |span: DMatrix<f64>| -> DMatrix<f64> {
        // span ∩ ker f, via null space of f restricted to span
        if span.ncols() == 0 {
            return span;
        }
        let fs = &f * &span;
        let ns = linalg::null_space(&fs, span.ncols(), 1e-10);
        &span * ns
    };
    let _ = kerf;
    let vw = restrict(cone.face_span(w, tol)?);
    let vz = restrict(cone.face_span(z, tol)?);
    let d: Point = z - w;
    let dw = linalg::hcat(&DMatrix::from_column_slice(n, 1, d.as_slice()), &vw);
    Ok(linalg::intersection_dim(&vz, &dw, 1e-9) == 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cone::ConeSpec;
    use nalgebra::DVector;

    fn v(x: &[f64]) -> Point {
        DVector::from_vec(x.to_vec())
    }

    /// Bisection on λ with closure membership of λy − x.
    fn oracle(cone: &ConeSpec, x: &Point, y: &Point) -> f64 {
        let inside = |l: f64| cone.contains(&(y * l - x), false, 0.0).unwrap();
        let mut hi = 1.0;
        while !inside(hi) {
            hi *= 2.0;
        }
        let mut lo = 0.0;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if inside(mid) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    }

    #[test]
    fn gauge_examples() {
        let o = ConeSpec::orthant(2).unwrap();
        let x = v(&[2.0, 1.0]);
        let y = v(&[1.0, 1.0]);
        assert_eq!(gauge(&o, &x, &y).unwrap(), 2.0);
        assert!((oracle(&o, &x, &y) - 2.0).abs() < 1e-12);
        let l = ConeSpec::lorentz(3).unwrap();
        let (x, y) = (v(&[2.0, 1.0, 0.0]), v(&[1.0, 0.0, 0.0]));
        assert!((gauge(&l, &x, &y).unwrap() - 3.0).abs() < 1e-15);
        assert!((oracle(&l, &x, &y) - 3.0).abs() < 1e-12);
        let p = ConeSpec::product(vec![ConeSpec::orthant(1).unwrap(), ConeSpec::orthant(1).unwrap()]).unwrap();
        assert_eq!(gauge(&p, &v(&[2.0, 1.0]), &v(&[1.0, 1.0])).unwrap(), 2.0);
        let d = ConeSpec::psd(2).unwrap();
        let b = d.base_point();
        assert!((gauge(&d, &b, &b).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_boundary_second_argument() {
        let o = ConeSpec::orthant(2).unwrap();
        assert!(matches!(gauge(&o, &v(&[1.0, 1.0]), &v(&[1.0, 0.0])), Err(Error::NotInterior(_))));
        assert!(gauge(&o, &v(&[1.0, 0.0]), &v(&[1.0, 1.0])).is_ok());
    }

    #[test]
    fn thompson_example() {
        let o = ConeSpec::orthant(2).unwrap();
        let d = thompson(&o, &v(&[2.0, 1.0]), &v(&[1.0, 1.0])).unwrap();
        assert!((d - 2f64.ln()).abs() < 1e-15);
        let x = v(&[0.3, 2.0]);
        assert!(hilbert(&o, &x, &(&x * 3.0)).unwrap() < 1e-12);
    }

    #[test]
    fn face_gauge_cases() {
        let o = ConeSpec::orthant(3).unwrap();
        let y = v(&[0.0, 1.0, 2.0]);
        assert_eq!(face_gauge(&o, &v(&[0.0, 3.0, 1.0]), &y, 1e-12).unwrap(), 3.0);
        assert!(face_gauge(&o, &v(&[1.0, 3.0, 1.0]), &y, 1e-12).unwrap().is_infinite());
        let l = ConeSpec::lorentz(3).unwrap();
        let r = v(&[1.0, 1.0, 0.0]);
        assert!((face_gauge(&l, &(&r * 2.5), &r, 1e-12).unwrap() - 2.5).abs() < 1e-14);
        assert!(face_gauge(&l, &v(&[1.0, 0.0, 1.0]), &r, 1e-12).unwrap().is_infinite());
        let d = ConeSpec::psd(2).unwrap();
        // y = e1 e1^T, x = 3 e1 e1^T
        assert!((face_gauge(&d, &v(&[3.0, 0.0, 0.0]), &v(&[1.0, 0.0, 0.0]), 1e-12).unwrap() - 3.0).abs() < 1e-14);
        assert!(face_gauge(&d, &v(&[1.0, 1.0, 0.0]), &v(&[1.0, 0.0, 0.0]), 1e-12).unwrap().is_infinite());
    }

    #[test]
    fn simplex_intersections() {
        let o = ConeSpec::orthant(2).unwrap();
        let s = CrossSection::new(&o, v(&[1.0, 1.0])).unwrap();
        let x = v(&[0.6, 0.4]);
        let y = v(&[0.4, 0.6]);
        let (w, z) = boundary_intersections(&o, &s, &x, &y).unwrap();
        assert!((&w - v(&[1.0, 0.0])).norm() < 1e-15);
        assert!((&z - v(&[0.0, 1.0])).norm() < 1e-15);
        let h = hilbert(&o, &x, &y).unwrap();
        assert!((cross_ratio_distance(&w, &x, &y, &z) - h).abs() < 1e-12);
    }

    #[test]
    fn disk_intersections() {
        let l = ConeSpec::lorentz(3).unwrap();
        let s = l.section();
        let (w, z) = boundary_intersections(&l, &s, &v(&[1.0, 0.1, 0.0]), &v(&[1.0, 0.0, -0.05])).unwrap();
        for p in [&w, &z] {
            assert!((p.rows(1, 2).norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn geodesic_midpoint() {
        let o = ConeSpec::orthant(3).unwrap();
        let s = o.section();
        let x = s.project(&v(&[1.0, 2.0, 3.0]));
        let y = s.project(&v(&[3.0, 1.0, 0.5]));
        let d = hilbert(&o, &x, &y).unwrap();
        let p = hilbert_geodesic_point(&o, &s, &x, &y, d / 2.0).unwrap();
        let a = hilbert(&o, &x, &p).unwrap();
        let b = hilbert(&o, &p, &y).unwrap();
        assert!((a - b).abs() < 1e-9 && (a + b - d).abs() < 1e-9);
        assert_eq!(hilbert_geodesic_point(&o, &s, &x, &y, 0.0).unwrap(), x);
        assert!((hilbert_geodesic_point(&o, &s, &x, &y, d).unwrap() - &y).norm() < 1e-9);
        assert!(hilbert_geodesic_point(&o, &s, &x, &y, d + 1.0).is_err());
    }

    #[test]
    fn square_chords() {
        let sq = ConeSpec::poly_h(&[v(&[1.0, 0.0, 1.0]), v(&[-1.0, 0.0, 1.0]), v(&[0.0, 1.0, 1.0]), v(&[0.0, -1.0, 1.0])]).unwrap();
        let s = CrossSection::new(&sq, v(&[0.0, 0.0, 1.0])).unwrap();
        let edges = is_unique_geodesic_line(&sq, &s, &v(&[-1.0, 0.3, 1.0]), &v(&[1.0, -0.2, 1.0])).unwrap();
        assert!(!edges);
        let verts = is_unique_geodesic_line(&sq, &s, &v(&[-1.0, -1.0, 1.0]), &v(&[1.0, 1.0, 1.0])).unwrap();
        assert!(verts);
        // vertex to the interior of a non-adjacent edge
        let mixed = is_unique_geodesic_line(&sq, &s, &v(&[-1.0, -1.0, 1.0]), &v(&[1.0, 0.5, 1.0])).unwrap();
        assert!(mixed);
        let l = ConeSpec::lorentz(3).unwrap();
        assert!(is_unique_geodesic_line(&l, &l.section(), &v(&[1.0, 1.0, 0.0]), &v(&[1.0, -0.6, 0.8])).unwrap());
    }
}
