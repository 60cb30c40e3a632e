//! Splitting a Thompson isometry into a gauge-preserving and a
//! gauge-reversing factor.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::classify::{classify, classify_with, line_fit, ClassificationReport, Geometry};
use crate::cone::ConeSpec;
use crate::error::{Error, Result};
use crate::gauge::face_gauge_raw;
use crate::linalg::{self, Point};
use crate::maps::ConeMap;
use crate::Rng64;

pub const DEGREE_TOL: f64 = 0.05;
pub const CAUCHY_TOL: f64 = 1e-8;
const FACE_TOL: f64 = 1e-9;
const DUAL_SAMPLES: usize = 64;

/// Default α grid 2⁰..2²⁰.
pub fn alpha_grid() -> Vec<f64> {
    (0..=20).map(|k| 2f64.powi(k)).collect()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Partition {
    /// Dual extremal functionals f with f(b) = 1.
    pub functionals: Vec<Vec<f64>>,
    /// Factor of the ambient product each functional comes from.
    pub factors: Vec<usize>,
    pub degrees: Vec<f64>,
    pub f1: Vec<usize>,
    pub f2: Vec<usize>,
}

impl Partition {
    fn functional(&self, i: usize) -> Point {
        Point::from_column_slice(&self.functionals[i])
    }
}

/// Homogeneity degree of y ↦ f(ψ(y)) on the cone, by regression over λ = 2⁻⁴..2⁴.
fn push_forward_degree(cone: &ConeSpec, psi: &ConeMap, f: &Point, rng: &mut Rng64) -> f64 {
    let lams: Vec<f64> = (-4..=4).map(|k| 2f64.powi(k)).collect();
    let logs: Vec<f64> = lams.iter().map(|l| l.ln()).collect();
    let mut total = 0.0;
    let reps = 4;
    for _ in 0..reps {
        let y = cone.sample_interior(rng);
        let vals: Vec<f64> = lams.iter().map(|l| f.dot(&psi.apply(&(&y * *l))).ln()).collect();
        let (slope, _) = line_fit(&logs, &vals);
        total += slope;
    }
    total / reps as f64
}

/// Sorts dual extremals of the source by whether their push-forward through
/// φ is homogeneous (+1) or anti-homogeneous (−1).
pub fn partition_singletons(cone: &ConeSpec, phi: &ConeMap, seed: u64) -> Result<Partition> {
    let inv = phi.invert()?;
    let mut rng = crate::rng(seed);
    let duals = cone.dual_extremals(DUAL_SAMPLES, &mut rng)?;
    let mut out = Partition { functionals: vec![], factors: vec![], degrees: vec![], f1: vec![], f2: vec![] };
    for (i, (f, k)) in duals.iter().enumerate() {
        let d = push_forward_degree(&phi.target, &inv, f, &mut rng);
        if (d - 1.0).abs() <= DEGREE_TOL {
            out.f1.push(i);
        } else if (d + 1.0).abs() <= DEGREE_TOL {
            out.f2.push(i);
        } else {
            return Err(Error::Verification(format!("ambiguous homogeneity degree {d:.4} for dual extremal {i}")));
        }
        out.functionals.push(f.iter().cloned().collect());
        out.factors.push(*k);
        out.degrees.push(d);
    }
    // sampled factors are indecomposable, so a split inside one means the numerics failed
    for (k, (_, f)) in cone.blocks().into_iter().enumerate() {
        if f.finite_extremals()?.is_some() {
            continue;
        }
        let in1 = out.f1.iter().any(|&i| out.factors[i] == k);
        let in2 = out.f2.iter().any(|&i| out.factors[i] == k);
        if in1 && in2 {
            return Err(Error::Verification(format!("mixed degrees inside indecomposable factor {k}")));
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Projections {
    pub p1: Vec<f64>,
    pub p2: Vec<f64>,
    /// Last successive differences, relative to ‖z‖.
    pub defect1: f64,
    pub defect2: f64,
    pub converged: bool,
}

fn alpha_limits(phi: &ConeMap, inv: &ConeMap, z: &Point, grid: &[f64]) -> Result<(Point, Point, f64, f64)> {
    if grid.len() < 2 || grid.windows(2).any(|w| !(w[1] > w[0])) || grid[0] <= 0.0 {
        return Err(Error::InvalidArgument("α grid must be positive and increasing".into()));
    }
    let fz = phi.apply(z);
    let p1 = |a: f64| inv.apply(&(&fz * a)) / a;
    let p2 = |a: f64| inv.apply(&(&fz / a)) / a;
    let scale = z.norm().max(1e-300);
    let n = grid.len();
    let (a, b) = (grid[n - 2], grid[n - 1]);
    let (q1, r1) = (p1(a), p1(b));
    let (q2, r2) = (p2(a), p2(b));
    let d1 = (&r1 - &q1).norm() / scale;
    let d2 = (&r2 - &q2).norm() / scale;
    Ok((r1, r2, d1, d2))
}

/// P₁(z) = lim (1/α)φ⁻¹(αφ(z)) and P₂(z) = lim (1/α)φ⁻¹(φ(z)/α) along the grid.
pub fn projections(phi: &ConeMap, z: &Point, grid: &[f64]) -> Result<Projections> {
    crate::error::check_dim(phi.source.dim(), z.len())?;
    if !phi.source.is_interior(z) {
        return Err(Error::NotInterior("projection argument".into()));
    }
    let inv = phi.invert()?;
    let (p1, p2, d1, d2) = alpha_limits(phi, &inv, z, grid)?;
    let converged = d1 <= CAUCHY_TOL && d2 <= CAUCHY_TOL;
    if !converged {
        return Err(Error::Verification(format!("α-limits not Cauchy: defects {d1:.3e}, {d2:.3e}")));
    }
    Ok(Projections { p1: p1.iter().cloned().collect(), p2: p2.iter().cloned().collect(), defect1: d1, defect2: d2, converged })
}

/// Relatively open face of a cone, seen through a linear projection onto it.
pub struct FaceGeometry {
    pub cone: ConeSpec,
    pub projection: DMatrix<f64>,
    pub rank: usize,
    pub probes: Vec<Point>,
}

impl FaceGeometry {
    fn on_face(&self, g: &Point) -> bool {
        (&self.projection * g - g).norm() <= 1e-8 * g.norm()
    }
}

impl Geometry for FaceGeometry {
    fn ambient_dim(&self) -> usize {
        self.cone.dim()
    }

    fn intrinsic_dim(&self) -> usize {
        self.rank
    }

    fn gauge(&self, x: &Point, y: &Point) -> f64 {
        face_gauge_raw(&self.cone, x, y, FACE_TOL)
    }

    fn sample_interior(&self, rng: &mut Rng64) -> Point {
        &self.projection * self.cone.sample_interior(rng)
    }

    fn sample_extremal(&self, rng: &mut Rng64) -> Point {
        // extremals of a direct summand are extremals of the cone
        for _ in 0..10_000 {
            let g = self.cone.sample_extremal(rng);
            if self.on_face(&g) {
                return g;
            }
        }
        let g = &self.projection * self.cone.sample_extremal(rng);
        let n = g.norm();
        g / n
    }

    fn probes(&self, count: usize, _rng: &mut Rng64) -> Vec<Point> {
        crate::classify::spread(self.probes.clone(), count)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProjectionFit {
    pub matrix: Vec<Vec<f64>>,
    pub fit_residual: f64,
    pub worst_defect: f64,
    pub converged: bool,
}

impl ProjectionFit {
    pub fn to_matrix(&self) -> DMatrix<f64> {
        let n = self.matrix.len();
        DMatrix::from_row_iterator(n, n, self.matrix.iter().flatten().cloned())
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DecompositionResult {
    pub partition: Partition,
    pub target_partition: Partition,
    pub f1_indices: Vec<usize>,
    pub f2_indices: Vec<usize>,
    pub dims: (usize, usize),
    pub target_dims: (usize, usize),
    /// Columns spanning lin C₁ and lin C₂.
    pub c1_basis: Vec<Vec<f64>>,
    pub c2_basis: Vec<Vec<f64>>,
    pub p1: ProjectionFit,
    pub p2: ProjectionFit,
    pub target_p1: ProjectionFit,
    pub target_p2: ProjectionFit,
    pub base_image: Vec<f64>,
    pub phi1_report: Option<ClassificationReport>,
    pub phi2_report: Option<ClassificationReport>,
    /// Worst error in f(P₁z) = f(z) on F₁ and f(P₁z) = 0 on F₂ (and the mirror for P₂), relative to f(z).
    pub coord_error: f64,
    /// Worst ‖P₁z + P₂z − z‖/‖z‖.
    pub sum_error: f64,
    /// Worst |d_T(x₁+x₂, y₁+y₂) − max(d_T¹, d_T²)|.
    pub thompson_law_error: f64,
    /// Worst ‖φ(x₁+x₂) − φ₁(x₁) − φ₂(x₂)‖/‖φ(x₁+x₂)‖.
    pub residual: f64,
    pub verified: bool,
    pub failures: Vec<String>,
}

fn to_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().cloned().collect()).collect()
}

fn to_cols(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    m.column_iter().map(|c| c.iter().cloned().collect()).collect()
}

/// Linear fits of both projection maps from sampled α-limits.
fn fit_projections(phi: &ConeMap, inv: &ConeMap, rng: &mut Rng64) -> Result<(ProjectionFit, ProjectionFit)> {
    let cone = &phi.source;
    let n = cone.dim();
    let grid = alpha_grid();
    let count = 2 * n * n + n;
    let mut zs = Vec::with_capacity(count);
    let mut y1 = Vec::with_capacity(count);
    let mut y2 = Vec::with_capacity(count);
    let mut worst: f64 = 0.0;
    for _ in 0..count {
        let z = cone.sample_interior(rng);
        let (a, b, d1, d2) = alpha_limits(phi, inv, &z, &grid)?;
        worst = worst.max(d1).max(d2);
        zs.push(z);
        y1.push(a);
        y2.push(b);
    }
    let zm = linalg::columns(&zs, n);
    let fit = |ys: &[Point]| -> Result<ProjectionFit> {
        let ym = linalg::columns(ys, n);
        let svd = zm.transpose().svd(true, true);
        let top = svd.singular_values.max();
        let pt = svd.solve(&ym.transpose(), 1e-13 * top).map_err(|e| Error::Singular(e.to_string()))?;
        let p = pt.transpose();
        let resid = zs
            .iter()
            .zip(ys)
            .map(|(z, y)| (&p * z - y).norm() / z.norm())
            .fold(0.0, f64::max);
        // entries at rounding level are exact zeros of the projection
        let p = p.map(|v| if v.abs() < 1e-12 { 0.0 } else { v });
        Ok(ProjectionFit { matrix: to_rows(&p), fit_residual: resid, worst_defect: worst, converged: worst <= CAUCHY_TOL })
    };
    Ok((fit(&y1)?, fit(&y2)?))
}

fn thompson_face(cone: &ConeSpec, x: &Point, y: &Point) -> f64 {
    if x.norm() == 0.0 && y.norm() == 0.0 {
        return 0.0;
    }
    face_gauge_raw(cone, x, y, FACE_TOL).ln().max(face_gauge_raw(cone, y, x, FACE_TOL).ln())
}

/// Recovers C = C₁ ⊕ C₂, C′ = C′₁ ⊕ C′₂ and the factor maps, and checks every
/// identity the splitting must satisfy.
pub fn decompose(cone: &ConeSpec, cone_prime: &ConeSpec, phi: &ConeMap, samples: usize, seed: u64) -> Result<DecompositionResult> {
    if phi.source != *cone || phi.target != *cone_prime {
        return Err(Error::InvalidArgument("map cones do not match the given cones".into()));
    }
    let report = classify(phi, 200, seed, 1e-8)?;
    if !report.thompson_isometry.pass {
        return Err(Error::Verification(format!(
            "not a Thompson isometry (worst {:.3e})",
            report.thompson_isometry.worst
        )));
    }
    let inv = phi.invert()?;
    let partition = partition_singletons(cone, phi, seed)?;
    let target_partition = partition_singletons(cone_prime, &inv, seed.wrapping_add(1))?;

    let mut rng = crate::rng(seed.wrapping_add(2));
    let (p1, p2) = fit_projections(phi, &inv, &mut rng)?;
    let (q1, q2) = fit_projections(&inv, phi, &mut rng)?;
    let (pm1, pm2) = (p1.to_matrix(), p2.to_matrix());
    let (qm1, qm2) = (q1.to_matrix(), q2.to_matrix());

    let b1 = linalg::col_span(&pm1, 1e-8);
    let b2 = linalg::col_span(&pm2, 1e-8);
    let dims = (b1.ncols(), b2.ncols());
    let target_dims = (linalg::col_span(&qm1, 1e-8).ncols(), linalg::col_span(&qm2, 1e-8).ncols());

    let mut failures = Vec::new();
    if !p1.converged || !p2.converged || !q1.converged || !q2.converged {
        failures.push("α-limits did not converge".to_string());
    }
    if dims.0 + dims.1 != cone.dim() || linalg::rank(&linalg::hcat(&b1, &b2), 1e-8) != cone.dim() {
        failures.push(format!("lin C₁ and lin C₂ do not form a direct sum: dims {dims:?}"));
    }
    if target_dims.0 + target_dims.1 != cone_prime.dim() {
        failures.push(format!("target summands do not form a direct sum: dims {target_dims:?}"));
    }
    if (dims.0 == 0) != partition.f1.is_empty() || (dims.1 == 0) != partition.f2.is_empty() {
        failures.push("projection ranks disagree with the singleton partition".to_string());
    }

    let b = cone.base_point();
    let base_image = phi.apply(&b);
    let b1p = &pm1 * &b;
    let b2p = &pm2 * &b;
    let phi1 = |x1: &Point| -> Point { &qm1 * phi.apply(&(x1 + &b2p)) };
    let phi2 = |x2: &Point| -> Point { &qm2 * phi.apply(&(&b1p + x2)) };

    let mut coord_error: f64 = 0.0;
    let mut sum_error: f64 = 0.0;
    let mut thompson_law_error: f64 = 0.0;
    let mut residual: f64 = 0.0;
    let count = samples.max(1);
    let (mut prev1, mut prev2) = (None::<Point>, None::<Point>);
    for _ in 0..count {
        let z = cone.sample_interior(&mut rng);
        let (x1, x2) = (&pm1 * &z, &pm2 * &z);
        sum_error = sum_error.max((&x1 + &x2 - &z).norm() / z.norm());
        for i in 0..partition.functionals.len() {
            let f = partition.functional(i);
            let fz = f.dot(&z);
            let (want1, want2) = if partition.f1.contains(&i) { (fz, 0.0) } else { (0.0, fz) };
            coord_error = coord_error.max((f.dot(&x1) - want1).abs() / fz).max((f.dot(&x2) - want2).abs() / fz);
        }
        let fz = phi.apply(&z);
        let mut re = fz.clone();
        if dims.0 > 0 {
            re -= phi1(&x1);
        }
        if dims.1 > 0 {
            re -= phi2(&x2);
        }
        residual = residual.max(re.norm() / fz.norm());
        if let (Some(y1), Some(y2)) = (&prev1, &prev2) {
            let whole = thompson_face(cone, &z, &(y1 + y2));
            let parts = thompson_face(cone, &x1, y1).max(thompson_face(cone, &x2, y2));
            thompson_law_error = thompson_law_error.max((whole - parts).abs());
        }
        prev1 = Some(x1);
        prev2 = Some(x2);
    }
    if coord_error > 1e-8 {
        failures.push(format!("projection coordinates off by {coord_error:.3e}"));
    }
    if sum_error > 1e-8 {
        failures.push(format!("P₁ + P₂ ≠ id by {sum_error:.3e}"));
    }
    if thompson_law_error > 1e-9 {
        failures.push(format!("product Thompson law off by {thompson_law_error:.3e}"));
    }
    if residual > 1e-7 {
        failures.push(format!("reassembly residual {residual:.3e}"));
    }

    let probes = |part: &Partition, idx: &[usize]| -> Vec<Point> { idx.iter().map(|&i| part.functional(i)).collect() };
    let face = |c: &ConeSpec, p: &DMatrix<f64>, r: usize, pr: Vec<Point>| FaceGeometry {
        cone: c.clone(),
        projection: p.clone(),
        rank: r,
        probes: pr,
    };
    let phi1_report = if dims.0 > 0 {
        let src = face(cone, &pm1, dims.0, probes(&partition, &partition.f1));
        let tgt = face(cone_prime, &qm1, target_dims.0, probes(&target_partition, &target_partition.f1));
        let r = classify_with(&src, &tgt, &|x| phi1(x), 200, seed, 1e-8)?;
        if !r.gauge_preserving.pass {
            failures.push(format!("φ₁ not gauge-preserving (worst {:.3e})", r.gauge_preserving.worst));
        }
        Some(r)
    } else {
        None
    };
    let phi2_report = if dims.1 > 0 {
        let src = face(cone, &pm2, dims.1, probes(&partition, &partition.f2));
        let tgt = face(cone_prime, &qm2, target_dims.1, probes(&target_partition, &target_partition.f2));
        let r = classify_with(&src, &tgt, &|x| phi2(x), 200, seed, 1e-8)?;
        if !r.gauge_reversing.pass {
            failures.push(format!("φ₂ not gauge-reversing (worst {:.3e})", r.gauge_reversing.worst));
        }
        if (r.homogeneity_degree.degree + 1.0).abs() > 0.01 {
            failures.push(format!("φ₂ degree {:.4}", r.homogeneity_degree.degree));
        }
        Some(r)
    } else {
        None
    };

    Ok(DecompositionResult {
        f1_indices: partition.f1.clone(),
        f2_indices: partition.f2.clone(),
        partition,
        target_partition,
        dims,
        target_dims,
        c1_basis: to_cols(&b1),
        c2_basis: to_cols(&b2),
        p1,
        p2,
        target_p1: q1,
        target_p2: q2,
        base_image: base_image.iter().cloned().collect(),
        phi1_report,
        phi2_report,
        coord_error,
        sum_error,
        thompson_law_error,
        residual,
        verified: failures.is_empty(),
        failures,
    })
}
