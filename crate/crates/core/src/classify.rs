//! Sampled classification of maps: order, homogeneity, gauge and Thompson behaviour.

use nalgebra::DMatrix;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::cone::ConeSpec;
use crate::error::{Error, Result};
use crate::gauge::gauge_raw;
use crate::linalg::{self, Point};
use crate::maps::ConeMap;
use crate::Rng64;

/// What the classifier needs to know about a domain: a cone, or a face of one.
pub trait Geometry {
    fn ambient_dim(&self) -> usize;
    /// Dimension of the linear span the samples fill.
    fn intrinsic_dim(&self) -> usize {
        self.ambient_dim()
    }
    /// M(x/y) with y in the relative interior.
    fn gauge(&self, x: &Point, y: &Point) -> f64;
    fn sample_interior(&self, rng: &mut Rng64) -> Point;
    fn sample_extremal(&self, rng: &mut Rng64) -> Point;
    /// Positive linear functionals, used to probe homogeneity.
    fn probes(&self, count: usize, rng: &mut Rng64) -> Vec<Point>;
}

impl Geometry for ConeSpec {
    fn ambient_dim(&self) -> usize {
        self.dim()
    }

    fn gauge(&self, x: &Point, y: &Point) -> f64 {
        gauge_raw(self, x, y)
    }

    fn sample_interior(&self, rng: &mut Rng64) -> Point {
        ConeSpec::sample_interior(self, rng)
    }

    fn sample_extremal(&self, rng: &mut Rng64) -> Point {
        ConeSpec::sample_extremal(self, rng)
    }

    fn probes(&self, count: usize, rng: &mut Rng64) -> Vec<Point> {
        let all = self.dual_extremals(count, rng).unwrap_or_default();
        spread(all.into_iter().map(|(f, _)| f).collect(), count)
    }
}

/// Up to `count` entries spread evenly over the list.
pub(crate) fn spread(all: Vec<Point>, count: usize) -> Vec<Point> {
    if all.len() <= count {
        return all;
    }
    (0..count).map(|k| all[k * all.len() / count].clone()).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub pass: bool,
    pub worst: f64,
}

impl Verdict {
    fn new(worst: f64, tol: f64) -> Self {
        Verdict { pass: worst <= tol, worst }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Degree {
    pub degree: f64,
    /// Spread of per-probe slopes plus the worst deviation from a line.
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearFit {
    pub matrix: Vec<Vec<f64>>,
    pub residual: f64,
}

impl LinearFit {
    pub fn to_matrix(&self) -> DMatrix<f64> {
        let r = self.matrix.len();
        let c = self.matrix.first().map_or(0, |v| v.len());
        DMatrix::from_row_iterator(r, c, self.matrix.iter().flatten().cloned())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub isotone: Verdict,
    pub antitone: Verdict,
    pub homogeneity_degree: Degree,
    pub thompson_isometry: Verdict,
    pub gauge_preserving: Verdict,
    pub gauge_reversing: Verdict,
    pub linear_fit: Option<LinearFit>,
    pub sample_count: usize,
    pub seed: u64,
    pub tol: f64,
}

pub fn classify(map: &ConeMap, samples: usize, seed: u64, tol: f64) -> Result<ClassificationReport> {
    classify_with(&map.source, &map.target, &|x| map.apply(x), samples, seed, tol)
}

/// Classification of an arbitrary map between two geometries.
pub fn classify_with(
    src: &dyn Geometry,
    tgt: &dyn Geometry,
    f: &dyn Fn(&Point) -> Point,
    samples: usize,
    seed: u64,
    tol: f64,
) -> Result<ClassificationReport> {
    if samples == 0 {
        return Err(Error::InvalidArgument("classification needs at least one sample".into()));
    }
    let mut rng = crate::rng(seed);
    let mut thompson = 0.0f64;
    let mut preserving = 0.0f64;
    let mut reversing = 0.0f64;
    let mut iso = 0.0f64;
    let mut anti = 0.0f64;
    for _ in 0..samples {
        let x = src.sample_interior(&mut rng);
        let y = src.sample_interior(&mut rng);
        let (fx, fy) = (f(&x), f(&y));
        let mxy = src.gauge(&x, &y);
        let myx = src.gauge(&y, &x);
        let nxy = tgt.gauge(&fx, &fy);
        let nyx = tgt.gauge(&fy, &fx);
        let dt = mxy.ln().max(myx.ln());
        let dt2 = nxy.ln().max(nyx.ln());
        thompson = worst(thompson, (dt2 - dt).abs());
        preserving = worst(preserving, linalg::rel_err(nxy, mxy).max(linalg::rel_err(nyx, myx)));
        reversing = worst(reversing, linalg::rel_err(nxy, myx).max(linalg::rel_err(nyx, mxy)));

        // comparable pair x ≤ x + μg
        let g = src.sample_extremal(&mut rng);
        let mu = rng.random_range(-3.0..0.0f64).exp() * x.norm() / g.norm();
        let z = &x + &g * mu;
        let fz = f(&z);
        iso = worst(iso, (tgt.gauge(&fx, &fz) - 1.0).max(0.0));
        anti = worst(anti, (tgt.gauge(&fz, &fx) - 1.0).max(0.0));
    }
    let homogeneity_degree = homogeneity(src, tgt, f, &mut rng);
    let linear_fit = fit_linear_with(src, f, &mut rng).ok();
    Ok(ClassificationReport {
        isotone: Verdict::new(iso, tol),
        antitone: Verdict::new(anti, tol),
        homogeneity_degree,
        thompson_isometry: Verdict::new(thompson, tol),
        gauge_preserving: Verdict::new(preserving, tol),
        gauge_reversing: Verdict::new(reversing, tol),
        linear_fit,
        sample_count: samples,
        seed,
        tol,
    })
}

/// NaN counts as the worst possible value.
fn worst(acc: f64, v: f64) -> f64 {
    if v.is_nan() {
        f64::INFINITY
    } else {
        acc.max(v)
    }
}

const LAMBDA_EXPONENTS: std::ops::RangeInclusive<i32> = -4..=4;

/// Slope of log f(φ(λx)) against log λ, over probe functionals of the target.
fn homogeneity(src: &dyn Geometry, tgt: &dyn Geometry, f: &dyn Fn(&Point) -> Point, rng: &mut Rng64) -> Degree {
    let probes = tgt.probes(8, rng);
    let bases: Vec<Point> = (0..4).map(|_| src.sample_interior(rng)).collect();
    let mut slopes = Vec::new();
    let mut fit_resid = 0.0f64;
    for x in &bases {
        let lx: Vec<f64> = LAMBDA_EXPONENTS.map(|k| (k as f64) * std::f64::consts::LN_2).collect();
        let images: Vec<Point> = LAMBDA_EXPONENTS.map(|k| f(&(x * 2f64.powi(k)))).collect();
        for p in &probes {
            let ly: Vec<f64> = images.iter().map(|im| p.dot(im).ln()).collect();
            let (slope, resid) = line_fit(&lx, &ly);
            slopes.push(slope);
            fit_resid = worst(fit_resid, resid);
        }
    }
    if slopes.is_empty() {
        return Degree { degree: f64::NAN, residual: f64::INFINITY };
    }
    let mean = slopes.iter().sum::<f64>() / slopes.len() as f64;
    let spread = slopes.iter().fold(0.0f64, |a, s| worst(a, (s - mean).abs()));
    Degree { degree: mean, residual: spread.max(fit_resid) }
}

/// Least squares slope and the worst absolute residual.
pub(crate) fn line_fit(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let slope = sxy / sxx;
    let resid = x.iter().zip(y).map(|(a, b)| (b - my - slope * (a - mx)).abs()).fold(0.0, worst);
    (slope, resid)
}

pub fn fit_linear(map: &ConeMap, samples: usize, seed: u64) -> Result<LinearFit> {
    let mut rng = crate::rng(seed);
    fit_linear_n(&map.source, &|x| map.apply(x), samples, &mut rng)
}

fn fit_linear_with(src: &dyn Geometry, f: &dyn Fn(&Point) -> Point, rng: &mut Rng64) -> Result<LinearFit> {
    let d = src.ambient_dim();
    fit_linear_n(src, f, 2 * d * d + d, rng)
}

/// Least-squares linear fit on the span of the samples; at least 2·dim² samples.
pub fn fit_linear_n(src: &dyn Geometry, f: &dyn Fn(&Point) -> Point, samples: usize, rng: &mut Rng64) -> Result<LinearFit> {
    let d = src.ambient_dim();
    let n = samples.max(2 * d * d).max(d + 1);
    let xs: Vec<Point> = (0..n).map(|_| src.sample_interior(rng)).collect();
    let ys: Vec<Point> = xs.iter().map(|x| f(x)).collect();
    let xm = linalg::columns(&xs, d);
    let span = linalg::col_span(&xm, 1e-10);
    if span.ncols() < src.intrinsic_dim() {
        return Err(Error::Singular("rank-deficient sample matrix".into()));
    }
    let m = ys[0].len();
    let coords = span.transpose() * &xm; // r × n
    let ym = linalg::columns(&ys, m); // m × n
    let svd = coords.transpose().svd(true, true);
    let top = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let bt = svd
        .solve(&ym.transpose(), 1e-13 * top)
        .map_err(|e| Error::Singular(e.to_string()))?; // r × m
    let a = bt.transpose() * span.transpose(); // m × d
    let residual = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - &a * x).norm() / y.norm())
        .fold(0.0, worst);
    Ok(LinearFit { matrix: a.row_iter().map(|r| r.iter().cloned().collect()).collect(), residual })
}

pub fn is_gauge_reversing(map: &ConeMap, samples: usize, seed: u64, tol: f64) -> Result<bool> {
    Ok(classify(map, samples, seed, tol)?.gauge_reversing.pass)
}
