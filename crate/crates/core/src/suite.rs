//! The acceptance battery: catalogs, oracles, and one check per criterion.

use std::time::Instant;

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;
use serde_json::{json, Value};

use crate::classify::{classify, fit_linear};
use crate::cone::{ConeSpec, Kind};
use crate::dd;
use crate::decomp::decompose;
use crate::form::build_form;
use crate::gauge::{boundary_intersections, funk, gauge_raw, hilbert, thompson, Metric};
use crate::horo::{
    detour_empirical, detour_grid, detour_product, detour_product_thompson, detour_thompson,
    distance_from_busemann_sup, eval, horofunction_from_sequence, is_singleton, payload_points, Horofunction,
};
use crate::linalg::{self, smat, svec, Point};
use crate::maps::{vinberg_star, ConeMap, Primitive};
use crate::{rng, Rng64};

/// Tolerances and budgets of the acceptance criteria.
pub mod tol {
    pub const GAUGE_ORACLE: f64 = 1e-9;
    pub const GAUGE_SECONDS: f64 = 5.0;
    pub const TRIANGLE_SLACK: f64 = 1e-9;
    pub const SYMMETRY: f64 = 1e-12;
    pub const RAY: f64 = 1e-12;
    pub const STAR_REVERSAL: f64 = 1e-9;
    pub const STAR_INVOLUTION: f64 = 1e-9;
    pub const FIXED_BETWEEN: f64 = 1e-9;
    pub const FORM_SYMMETRY: f64 = 1e-9;
    pub const FORM_DIAG: f64 = 1e-8;
    pub const FORM_DRIFT: f64 = 1e-8;
    pub const FORM_IDENTITY: f64 = 1e-10;
    pub const COMPOSITION_LINEAR: f64 = 1e-8;
    pub const PRODUCT_AGREEMENT: f64 = 0.05;
    pub const PRODUCT_SECONDS: f64 = 60.0;
    pub const THOMPSON_DETOUR: f64 = 1e-9;
    pub const SEQUENCE: f64 = 1e-6;
    pub const DECOMP_CLASSIFY: f64 = 1e-8;
    pub const DECOMP_RESIDUAL: f64 = 1e-7;
    pub const BUSEMANN: f64 = 1e-12;
    pub const NEGATIVE_CLASSIFY: f64 = 1e-7;
}

#[derive(Clone, Copy, Debug)]
pub struct SuiteConfig {
    pub quick: bool,
    pub seed: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { quick: false, seed: 0 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: u32,
    pub name: String,
    pub pass: bool,
    pub detail: String,
    pub metrics: Value,
    pub seconds: f64,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!(
            "{} [{:>2}] {}: {} ({:.2}s)",
            if self.pass { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.detail,
            self.seconds
        )
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub schema: u32,
    pub quick: bool,
    pub seed: u64,
    pub pass: bool,
    pub criteria: Vec<CriterionResult>,
}

pub const CRITERIA: [(u32, &str); 12] = [
    (1, "gauge oracle equivalence"),
    (2, "metric axioms"),
    (3, "star-map reversal"),
    (4, "fixed-between identity"),
    (5, "bilinear form certificate"),
    (6, "composition parity and linearity"),
    (7, "product horoboundary"),
    (8, "thompson horoboundary"),
    (9, "sequence convergence"),
    (10, "thompson isometry decomposition"),
    (11, "dual-path funk distance"),
    (12, "negative controls"),
];

pub fn run_suite(cfg: SuiteConfig) -> SuiteReport {
    let criteria: Vec<CriterionResult> = CRITERIA.iter().map(|(id, _)| run_criterion(*id, cfg)).collect();
    SuiteReport { schema: 1, quick: cfg.quick, seed: cfg.seed, pass: criteria.iter().all(|c| c.pass), criteria }
}

pub fn run_criterion(id: u32, cfg: SuiteConfig) -> CriterionResult {
    let name = CRITERIA.iter().find(|(i, _)| *i == id).map_or("unknown", |(_, n)| n).to_string();
    let start = Instant::now();
    let outcome = match id {
        1 => gauge_oracle(cfg),
        2 => metric_axioms(cfg),
        3 => star_reversal(cfg),
        4 => fixed_between(cfg),
        5 => form_certificate(cfg),
        6 => composition(cfg),
        7 => product_horoboundary(cfg),
        8 => thompson_horoboundary(cfg),
        9 => sequence_convergence(cfg),
        10 => decomposition(cfg),
        11 => busemann_funk(cfg),
        12 => negative_controls(cfg),
        _ => Err(crate::Error::InvalidArgument(format!("no criterion {id}"))),
    };
    let seconds = start.elapsed().as_secs_f64();
    match outcome {
        Ok(mut o) => {
            if id == 1 && seconds > tol::GAUGE_SECONDS {
                o.pass = false;
                o.detail.push_str(&format!("; over the {}s budget", tol::GAUGE_SECONDS));
            }
            if id == 7 && seconds > tol::PRODUCT_SECONDS {
                o.pass = false;
                o.detail.push_str(&format!("; over the {}s budget", tol::PRODUCT_SECONDS));
            }
            CriterionResult { id, name, pass: o.pass, detail: o.detail, metrics: o.metrics, seconds }
        }
        Err(e) => CriterionResult { id, name, pass: false, detail: format!("error: {e}"), metrics: Value::Null, seconds },
    }
}

struct Outcome {
    pass: bool,
    detail: String,
    metrics: Value,
}

type Check = crate::Result<Outcome>;

// ---------------------------------------------------------------- catalogs

fn random_rotation(n: usize, rng: &mut Rng64) -> DMatrix<f64> {
    let g = DMatrix::from_fn(n, n, |_, _| StandardNormal.sample(rng));
    g.qr().q()
}

/// H-cone whose section x₀ = 1 is a randomly rotated, perturbed cross-polytope
/// cut by extra random facets.
pub fn random_poly_h(dim: usize, facets: usize, rng: &mut Rng64) -> ConeSpec {
    let k = dim - 1;
    let rot = random_rotation(k, rng);
    let mut normals = Vec::new();
    for j in 0..k {
        for s in [1.0, -1.0] {
            let w: Point = rot.column(j) * (s * rng.random_range(0.8..1.25));
            normals.push(w);
        }
    }
    while normals.len() < facets.max(2 * k) {
        let u: Point = DVector::from_fn(k, |_, _| StandardNormal.sample(rng));
        let n = u.norm();
        normals.push(u * (rng.random_range(1.0..1.6) / n));
    }
    let rows: Vec<Point> = normals
        .iter()
        .map(|w| {
            let mut a = DVector::zeros(dim);
            a[0] = 1.0;
            a.rows_mut(1, k).copy_from(w);
            a
        })
        .collect();
    ConeSpec::poly_h(&rows).expect("random H-cone is valid")
}

/// V-cone over a random polytope in the section x₀ = 1.
pub fn random_poly_v(dim: usize, rays: usize, rng: &mut Rng64) -> ConeSpec {
    let k = dim - 1;
    let cols: Vec<Point> = (0..rays.max(dim))
        .map(|_| {
            let u: Point = DVector::from_fn(k, |_, _| StandardNormal.sample(rng));
            let n = u.norm();
            let mut g = DVector::zeros(dim);
            g[0] = 1.0;
            g.rows_mut(1, k).copy_from(&(u * (rng.random_range(0.5..1.0) / n)));
            g
        })
        .collect();
    ConeSpec::poly_v(&cols).expect("random V-cone is valid")
}

/// Simplicial H-cone with a random, well-conditioned facet matrix.
pub fn random_simplicial(dim: usize, rng: &mut Rng64) -> ConeSpec {
    let a = DMatrix::identity(dim, dim) + DMatrix::from_fn(dim, dim, |_, _| rng.random_range(-0.3..0.3));
    let rows: Vec<Point> = a.row_iter().map(|r| r.transpose().into_owned()).collect();
    ConeSpec::poly_h(&rows).expect("simplicial cone is valid")
}

pub fn gauge_catalog(seed: u64) -> Vec<(String, ConeSpec)> {
    let mut r = rng(seed ^ 0x9e37);
    let mut out: Vec<(String, ConeSpec)> = Vec::new();
    for n in 2..=6 {
        out.push((format!("orthant({n})"), ConeSpec::orthant(n).unwrap()));
    }
    for n in 3..=6 {
        out.push((format!("lorentz({n})"), ConeSpec::lorentz(n).unwrap()));
    }
    for n in 2..=4 {
        out.push((format!("psd({n})"), ConeSpec::psd(n).unwrap()));
    }
    for (d, m) in [(3, 5), (4, 9), (4, 12)] {
        out.push((format!("poly_h(dim {d}, {m} facets)"), random_poly_h(d, m, &mut r)));
    }
    for (d, m) in [(3, 6), (4, 8), (4, 12)] {
        out.push((format!("poly_v(dim {d}, {m} rays)"), random_poly_v(d, m, &mut r)));
    }
    out.push((
        "orthant(2) x lorentz(3)".into(),
        ConeSpec::product(vec![ConeSpec::orthant(2).unwrap(), ConeSpec::lorentz(3).unwrap()]).unwrap(),
    ));
    out.push((
        "psd(2) x poly_h(dim 3)".into(),
        ConeSpec::product(vec![ConeSpec::psd(2).unwrap(), random_poly_h(3, 6, &mut r)]).unwrap(),
    ));
    out
}

pub fn symmetric_catalog(seed: u64) -> Vec<(String, ConeSpec)> {
    let mut r = rng(seed ^ 0x51d);
    let mut out: Vec<(String, ConeSpec)> = Vec::new();
    for n in 2..=6 {
        out.push((format!("orthant({n})"), ConeSpec::orthant(n).unwrap()));
    }
    for n in 3..=6 {
        out.push((format!("lorentz({n})"), ConeSpec::lorentz(n).unwrap()));
    }
    for n in 2..=4 {
        out.push((format!("psd({n})"), ConeSpec::psd(n).unwrap()));
    }
    out.push(("simplicial(3)".into(), random_simplicial(3, &mut r)));
    out.push((
        "orthant(2) x lorentz(3)".into(),
        ConeSpec::product(vec![ConeSpec::orthant(2).unwrap(), ConeSpec::lorentz(3).unwrap()]).unwrap(),
    ));
    out.push((
        "lorentz(3) x psd(2)".into(),
        ConeSpec::product(vec![ConeSpec::lorentz(3).unwrap(), ConeSpec::psd(2).unwrap()]).unwrap(),
    ));
    out
}

// ----------------------------------------------------------------- oracles

/// Closed-cone membership from first principles, with no tolerance.
/// V-cones are tested against facet normals from vertex enumeration of the dual.
pub struct MembershipOracle {
    cone: ConeSpec,
    facets: Option<DMatrix<f64>>,
    parts: Vec<(usize, MembershipOracle)>,
}

impl MembershipOracle {
    pub fn new(cone: &ConeSpec) -> crate::Result<Self> {
        let facets = match cone.kind() {
            Kind::PolyV { g } => {
                let normals = dd::extreme_rays(&g.transpose(), 1e-12)?;
                Some(DMatrix::from_fn(normals.len(), cone.dim(), |i, j| normals[i][j]))
            }
            _ => None,
        };
        let parts = match cone.kind() {
            Kind::Product { .. } => cone
                .blocks()
                .into_iter()
                .map(|(o, f)| Ok((o, MembershipOracle::new(f)?)))
                .collect::<crate::Result<_>>()?,
            _ => vec![],
        };
        Ok(MembershipOracle { cone: cone.clone(), facets, parts })
    }

    pub fn contains(&self, p: &Point) -> bool {
        match self.cone.kind() {
            Kind::Orthant => p.iter().all(|v| *v >= 0.0),
            Kind::Lorentz => p[0] >= p.rows(1, p.len() - 1).norm(),
            Kind::Psd { n } => {
                let m = smat(p.as_slice(), *n);
                m.symmetric_eigenvalues().iter().all(|v| *v >= 0.0)
            }
            Kind::PolyH { a } => (a * p).iter().all(|v| *v >= 0.0),
            Kind::PolyV { .. } => (self.facets.as_ref().unwrap() * p).iter().all(|v| *v >= 0.0),
            Kind::Product { .. } => self.parts.iter().all(|(o, m)| m.contains(&p.rows(*o, m.cone.dim()).into_owned())),
        }
    }

    /// inf{λ ≥ 0 : λy − x in the closed cone} by bracketing and bisection.
    pub fn gauge(&self, x: &Point, y: &Point) -> f64 {
        let inside = |l: f64| self.contains(&(y * l - x));
        if inside(0.0) {
            return 0.0;
        }
        let mut hi = 1.0;
        let mut k = 0;
        while !inside(hi) && k < 200 {
            hi *= 2.0;
            k += 1;
        }
        if hi <= 1.0 {
            while inside(hi / 2.0) && k < 400 {
                hi /= 2.0;
                k += 1;
            }
        }
        let mut lo = hi / 2.0;
        for _ in 0..200 {
            if hi - lo <= 1e-15 * hi {
                break;
            }
            let mid = 0.5 * (lo + hi);
            if inside(mid) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    }
}

// -------------------------------------------------------------- criteria

fn gauge_oracle(cfg: SuiteConfig) -> Check {
    let pairs = 1000;
    let mut worst: f64 = 0.0;
    let mut worst_cone = String::new();
    let mut per: Vec<Value> = Vec::new();
    for (name, cone) in gauge_catalog(cfg.seed) {
        let oracle = MembershipOracle::new(&cone)?;
        let mut r = rng(cfg.seed.wrapping_add(11));
        let mut w: f64 = 0.0;
        for k in 0..pairs {
            let x = if k % 10 == 0 { cone.sample_extremal(&mut r) } else { cone.sample_interior(&mut r) };
            let y = cone.sample_interior(&mut r);
            let m = gauge_raw(&cone, &x, &y);
            let o = oracle.gauge(&x, &y);
            w = w.max(linalg::rel_err(m, o));
        }
        per.push(json!({ "cone": name, "worst_rel_err": w }));
        if w > worst {
            worst = w;
            worst_cone = name;
        }
    }
    Ok(Outcome {
        pass: worst <= tol::GAUGE_ORACLE,
        detail: format!("worst relative error {worst:.2e} ({worst_cone}) vs {:.0e}", tol::GAUGE_ORACLE),
        metrics: json!({ "per_cone": per, "worst": worst }),
    })
}

fn metric_axioms(cfg: SuiteConfig) -> Check {
    let triples = 1000;
    let (mut tri, mut sym, mut ray): (f64, f64, f64) = (f64::INFINITY, 0.0, 0.0);
    for (_, cone) in gauge_catalog(cfg.seed) {
        let mut r = rng(cfg.seed.wrapping_add(12));
        for _ in 0..triples {
            let x = cone.sample_interior(&mut r);
            let y = cone.sample_interior(&mut r);
            let z = cone.sample_interior(&mut r);
            for d in [thompson, hilbert] {
                let (xy, yz, xz) = (d(&cone, &x, &y)?, d(&cone, &y, &z)?, d(&cone, &x, &z)?);
                tri = tri.min(xy + yz - xz);
                sym = sym.max((xy - d(&cone, &y, &x)?).abs());
            }
            let lam = r.random_range(-3.0..3.0f64).exp();
            let xl = &x * lam;
            ray = ray.max(hilbert(&cone, &x, &xl)?.abs());
            ray = ray.max((thompson(&cone, &x, &xl)? - lam.ln().abs()).abs());
        }
    }
    let pass = tri >= -tol::TRIANGLE_SLACK && sym <= tol::SYMMETRY && ray <= tol::RAY;
    Ok(Outcome {
        pass,
        detail: format!("triangle slack min {tri:.2e}, symmetry {sym:.2e}, ray identities {ray:.2e}"),
        metrics: json!({ "triangle_min_slack": tri, "symmetry": sym, "ray": ray }),
    })
}

fn star_reversal(cfg: SuiteConfig) -> Check {
    let (mut rev, mut inv_fit): (f64, f64) = (0.0, 0.0);
    let mut per = Vec::new();
    for (name, cone) in symmetric_catalog(cfg.seed) {
        let star = vinberg_star(&cone)?;
        let mut r = rng(cfg.seed.wrapping_add(13));
        let mut w: f64 = 0.0;
        for _ in 0..1000 {
            let x = cone.sample_interior(&mut r);
            let y = cone.sample_interior(&mut r);
            let m = gauge_raw(&cone, &x, &y);
            let s = gauge_raw(&cone, &star.apply(&y), &star.apply(&x));
            w = w.max((s - m).abs() / m);
        }
        let twice = star.then(&star)?;
        let fit = fit_linear(&twice, 0, cfg.seed)?;
        let id_err = (fit.to_matrix() - DMatrix::identity(cone.dim(), cone.dim())).amax();
        let f = fit.residual.max(id_err);
        per.push(json!({ "cone": name, "reversal": w, "involution": f }));
        rev = rev.max(w);
        inv_fit = inv_fit.max(f);
    }
    Ok(Outcome {
        pass: rev <= tol::STAR_REVERSAL && inv_fit <= tol::STAR_INVOLUTION,
        detail: format!("reversal error {rev:.2e}, star∘star vs identity {inv_fit:.2e}"),
        metrics: json!({ "per_cone": per }),
    })
}

fn fixed_between(cfg: SuiteConfig) -> Check {
    let mut worst: f64 = 0.0;
    for (_, cone) in symmetric_catalog(cfg.seed) {
        let star = vinberg_star(&cone)?;
        let b = cone.base_point();
        let mut r = rng(cfg.seed.wrapping_add(14));
        for _ in 0..1000 {
            let z = cone.sample_interior(&mut r);
            let pz = star.apply(&z);
            let lhs = gauge_raw(&cone, &z, &b) * gauge_raw(&cone, &b, &pz);
            let rhs = gauge_raw(&cone, &z, &pz);
            worst = worst.max((lhs - rhs).abs() / rhs);
        }
    }
    Ok(Outcome {
        pass: worst <= tol::FIXED_BETWEEN,
        detail: format!("worst relative defect {worst:.2e}"),
        metrics: json!({ "worst": worst }),
    })
}

fn form_certificate(cfg: SuiteConfig) -> Check {
    let mut per = Vec::new();
    let mut fails = Vec::new();
    for (name, cone) in symmetric_catalog(cfg.seed) {
        let cert = build_form(&cone, &vinberg_star(&cone)?, None, cfg.seed)?;
        let mut ok = cert.symmetry_error <= tol::FORM_SYMMETRY
            && cert.min_eigenvalue > 0.0
            && cert.positive_definite
            && cert.extremal_diag_error <= tol::FORM_DIAG
            && cert.basis_drift <= tol::FORM_DRIFT
            && cert.self_duality.pass;
        let mut id_err = Value::Null;
        if matches!(cone.kind(), Kind::Orthant) {
            let e = (cert.matrix() - DMatrix::identity(cone.dim(), cone.dim())).amax();
            ok &= e <= tol::FORM_IDENTITY;
            id_err = json!(e);
        }
        if !ok {
            fails.push(name.clone());
        }
        per.push(json!({
            "cone": name,
            "symmetry_error": cert.symmetry_error,
            "min_eigenvalue": cert.min_eigenvalue,
            "extremal_diag_error": cert.extremal_diag_error,
            "basis_drift": cert.basis_drift,
            "self_duality": cert.self_duality.pass,
            "identity_error": id_err,
        }));
    }
    let worst = |key: &str| per.iter().map(|v| v[key].as_f64().unwrap_or(0.0)).fold(0.0, f64::max);
    let detail = format!(
        "symmetry {:.2e}, diag {:.2e}, drift {:.2e}{}",
        worst("symmetry_error"),
        worst("extremal_diag_error"),
        worst("basis_drift"),
        if fails.is_empty() { String::new() } else { format!("; failing: {}", fails.join(", ")) }
    );
    Ok(Outcome { pass: fails.is_empty(), detail, metrics: json!({ "per_cone": per }) })
}

/// Linear map X ↦ A X Aᵀ in svec coordinates.
pub fn congruence(a: &DMatrix<f64>) -> DMatrix<f64> {
    let n = a.nrows();
    let d = n * (n + 1) / 2;
    let mut m = DMatrix::zeros(d, d);
    for k in 0..d {
        let mut e = vec![0.0; d];
        e[k] = 1.0;
        let x = smat(&e, n);
        m.set_column(k, &svec(&(a * x * a.transpose())));
    }
    m
}

/// Lorentz automorphism: boost of rapidity `r` in the (t, x₁) plane, scaled by `s`.
pub fn lorentz_boost(dim: usize, r: f64, s: f64) -> DMatrix<f64> {
    let mut m = DMatrix::identity(dim, dim);
    m[(0, 0)] = r.cosh();
    m[(1, 1)] = r.cosh();
    m[(0, 1)] = r.sinh();
    m[(1, 0)] = r.sinh();
    m * s
}

fn conjugated_star_pair(cone: &ConeSpec, g: DMatrix<f64>) -> crate::Result<ConeMap> {
    let ginv = g.clone().try_inverse().ok_or_else(|| crate::Error::Singular("automorphism".into()))?;
    let star = vinberg_star(cone)?.pipeline;
    let mut pipeline = vec![Primitive::Linear(ginv)];
    pipeline.extend(star.iter().cloned());
    pipeline.push(Primitive::Linear(g));
    pipeline.extend(star);
    ConeMap::new(cone.clone(), cone.clone(), pipeline)
}

fn composition(cfg: SuiteConfig) -> Check {
    let mut r = rng(cfg.seed.wrapping_add(16));
    let a = DMatrix::identity(2, 2) + DMatrix::from_fn(2, 2, |_, _| r.random_range(-0.4..0.4));
    let psd = ConeSpec::psd(2)?;
    let lor = ConeSpec::lorentz(4)?;
    let cases = [
        ("psd(2)", conjugated_star_pair(&psd, congruence(&a))?),
        ("lorentz(4)", conjugated_star_pair(&lor, lorentz_boost(4, 0.7, 1.3))?),
    ];
    let mut worst: f64 = 0.0;
    let mut per = Vec::new();
    for (name, m) in cases {
        let fit = fit_linear(&m, 0, cfg.seed)?;
        per.push(json!({ "cone": name, "linear_residual": fit.residual }));
        worst = worst.max(fit.residual);
    }
    Ok(Outcome {
        pass: worst <= tol::COMPOSITION_LINEAR,
        detail: format!("worst linear-fit residual {worst:.2e}"),
        metrics: json!({ "per_case": per }),
    })
}

fn random_interior_payload(cone: &ConeSpec, r_type: bool, r: &mut Rng64) -> Horofunction {
    let x = cone.sample_interior(r);
    if r_type {
        Horofunction::interior_r(&x)
    } else {
        Horofunction::interior_f(&x)
    }
}

fn product_horoboundary(cfg: SuiteConfig) -> Check {
    let o1 = ConeSpec::orthant(2)?;
    let pc = ConeSpec::product(vec![o1.clone(), o1.clone()])?;
    let mut r = rng(cfg.seed.wrapping_add(17));

    // exact shift law
    let mut shift_exact = true;
    for k in 0..4 {
        let x1 = random_interior_payload(&o1, k % 2 == 0, &mut r);
        let x2 = random_interior_payload(&o1, k / 2 == 0, &mut r);
        let xi = Horofunction::product(x1.clone(), x2.clone(), 0.0);
        for eps in [-1.0, -0.25, 0.25, 1.0] {
            let eta = Horofunction::product(x1.clone(), x2.clone(), eps);
            let by_parts = detour_product(&xi, &eta, (0.0, 0.0), (0.0, 0.0))?;
            let full = detour_product_thompson(&pc, &xi, &eta)?;
            shift_exact &= by_parts.delta == f64::abs(eps) && full.delta == f64::abs(eps);
        }
    }

    let points = 100_000;
    let mut above = 0usize;
    let mut gap: f64 = 0.0;
    let mut per = Vec::new();
    for i in 0..10 {
        let t1 = r.random_bool(0.5);
        let t2 = r.random_bool(0.5);
        let xi = Horofunction::product(
            random_interior_payload(&o1, t1, &mut r),
            random_interior_payload(&o1, t2, &mut r),
            r.random_range(-2.0..2.0),
        );
        let eta = Horofunction::product(
            random_interior_payload(&o1, t1, &mut r),
            random_interior_payload(&o1, t2, &mut r),
            r.random_range(-2.0..2.0),
        );
        let formula = detour_product_thompson(&pc, &xi, &eta)?.h;
        let mut anchors = payload_points(&pc, &xi);
        anchors.extend(payload_points(&pc, &eta));
        let grid = detour_grid(&pc, points, &anchors, cfg.seed.wrapping_add(i));
        let emp = detour_empirical(&pc, &xi, &eta, &grid)?;
        if emp > formula + 1e-9 {
            above += 1;
        }
        gap = gap.max(formula - emp);
        per.push(json!({ "formula": formula, "empirical": emp, "grid": grid.len() }));
    }
    let pass = shift_exact && above == 0 && gap <= tol::PRODUCT_AGREEMENT;
    Ok(Outcome {
        pass,
        detail: format!(
            "shift law exact: {shift_exact}; bounds above formula: {above}; worst gap {gap:.3e} at {points} points"
        ),
        metrics: json!({ "instances": per }),
    })
}

/// Payloads on orthant(3) with their singleton status.
pub fn orthant3_singleton_cases() -> Vec<(Horofunction, bool)> {
    let e = |i: usize| {
        let mut v = DVector::zeros(3);
        v[i] = 1.0;
        v
    };
    let face = DVector::from_vec(vec![1.0, 1.0, 0.0]);
    let b = DVector::from_element(3, 1.0);
    let mut out = Vec::new();
    for i in 0..3 {
        out.push((Horofunction::reverse_funk(&e(i)), true));
        out.push((Horofunction::funk_singleton(&e(i)), true));
    }
    out.push((Horofunction::reverse_funk(&face), false));
    out.push((Horofunction::interior_r(&b), false));
    out.push((Horofunction::interior_f(&b), false));
    let rf = Horofunction::reverse_funk(&e(0));
    let fs = Horofunction::funk_singleton(&e(1));
    out.push((Horofunction::combined(rf.clone(), fs.clone(), 0.5), false));
    out.push((Horofunction::combined(rf.clone(), fs.clone(), -2.0), false));
    out.push((Horofunction::combined(rf, fs.clone(), f64::INFINITY), true));
    let rface = Horofunction::reverse_funk(&face);
    let f3 = Horofunction::funk_singleton(&e(2));
    out.push((Horofunction::combined(rface.clone(), f3.clone(), f64::INFINITY), false));
    out.push((Horofunction::combined(rface, f3, f64::NEG_INFINITY), true));
    out
}

fn thompson_horoboundary(cfg: SuiteConfig) -> Check {
    let mut cr = rng(cfg.seed.wrapping_add(18));
    let cones = [
        ConeSpec::orthant(3)?,
        ConeSpec::lorentz(4)?,
        ConeSpec::psd(3)?,
        random_poly_h(3, 6, &mut cr),
    ];
    let mut worst: f64 = 0.0;
    let mut cross_ok = true;
    for cone in &cones {
        let mut r = rng(cfg.seed.wrapping_add(19));
        for _ in 0..100 {
            let x = cone.sample_interior(&mut r);
            let y = cone.sample_interior(&mut r);
            let h = hilbert(cone, &x, &y)?;
            let dr = detour_thompson(cone, &Horofunction::interior_r(&x), &Horofunction::interior_r(&y))?;
            let df = detour_thompson(cone, &Horofunction::interior_f(&x), &Horofunction::interior_f(&y))?;
            worst = worst.max((dr.delta - h).abs()).max((df.delta - h).abs());
            let cross = detour_thompson(cone, &Horofunction::interior_r(&x), &Horofunction::interior_f(&y))?;
            cross_ok &= cross.delta == f64::INFINITY;
        }
    }
    let o = ConeSpec::orthant(3)?;
    let mut singleton_miss = 0;
    for (h, want) in orthant3_singleton_cases() {
        if is_singleton(&o, &h)? != want {
            singleton_miss += 1;
        }
    }
    Ok(Outcome {
        pass: worst <= tol::THOMPSON_DETOUR && cross_ok && singleton_miss == 0,
        detail: format!("δ vs Hilbert {worst:.2e}; cross-type infinite: {cross_ok}; singleton mismatches: {singleton_miss}"),
        metrics: json!({ "worst": worst, "cross_type_infinite": cross_ok, "singleton_mismatches": singleton_miss }),
    })
}

fn sequence_convergence(cfg: SuiteConfig) -> Check {
    let mut cr = rng(cfg.seed.wrapping_add(20));
    let cones = [ConeSpec::orthant(3)?, ConeSpec::lorentz(3)?, ConeSpec::psd(2)?, random_poly_h(3, 6, &mut cr)];
    let mut worst: f64 = 0.0;
    for cone in &cones {
        let mut r = rng(cfg.seed.wrapping_add(21));
        let probes: Vec<Point> = (0..20).map(|_| cone.sample_interior(&mut r)).collect();
        let x = cone.sample_interior(&mut r);
        let b = cone.base_point();
        let section = cone.section();
        let p = section.project(&cone.sample_section(&mut r));
        let (_, edge) = boundary_intersections(cone, &section, &b, &p)?;
        let lams: Vec<f64> = (0..=20).map(|n| (n as f64).exp()).collect();
        let cases: [(Metric, Vec<Point>, Horofunction); 3] = [
            (Metric::Thompson, lams.iter().map(|l| &x * *l).collect(), Horofunction::interior_r(&x)),
            (Metric::Thompson, lams.iter().map(|l| &x / *l).collect(), Horofunction::interior_f(&x)),
            (
                Metric::Rfunk,
                lams.iter().map(|l| &edge + (&b - &edge) / *l).collect(),
                Horofunction::reverse_funk(&edge),
            ),
        ];
        for (metric, seq, h) in cases {
            let table = horofunction_from_sequence(cone, metric, &seq, &probes, tol::SEQUENCE)?;
            let last = table.values.last().unwrap();
            for (v, q) in last.iter().zip(&probes) {
                worst = worst.max((v - eval(cone, &h, q)?).abs());
            }
        }
    }
    Ok(Outcome {
        pass: worst <= tol::SEQUENCE,
        detail: format!("worst pointwise error at λ = e²⁰: {worst:.2e}"),
        metrics: json!({ "worst": worst }),
    })
}

fn product_map(cone: &ConeSpec, parts: Vec<ConeMap>) -> crate::Result<ConeMap> {
    ConeMap::new(cone.clone(), cone.clone(), vec![Primitive::Product(parts)])
}

fn linear_on(cone: &ConeSpec, a: DMatrix<f64>) -> crate::Result<ConeMap> {
    ConeMap::new(cone.clone(), cone.clone(), vec![Primitive::Linear(a)])
}

/// Constructed mixed isometries with the dimensions of their summands.
pub fn mixed_isometries() -> crate::Result<Vec<(String, ConeMap, (usize, usize))>> {
    let o1 = ConeSpec::orthant(1)?;
    let o2 = ConeSpec::orthant(2)?;
    let l3 = ConeSpec::lorentz(3)?;
    let p2 = ConeSpec::psd(2)?;
    let mut out = Vec::new();

    let c = ConeSpec::product(vec![o2.clone(), l3.clone()])?;
    let a = DMatrix::from_diagonal(&DVector::from_vec(vec![2.0, 0.5]));
    out.push(("orthant(2) x lorentz(3)".into(), product_map(&c, vec![linear_on(&o2, a)?, vinberg_star(&l3)?])?, (2, 3)));

    let c = ConeSpec::product(vec![o1.clone(), o1.clone()])?;
    out.push(("orthant(1) x orthant(1)".into(), product_map(&c, vec![ConeMap::identity(&o1), vinberg_star(&o1)?])?, (1, 1)));

    let c = ConeSpec::product(vec![l3.clone(), p2.clone()])?;
    out.push((
        "lorentz(3) x psd(2)".into(),
        product_map(&c, vec![linear_on(&l3, lorentz_boost(3, 0.4, 1.5))?, vinberg_star(&p2)?])?,
        (3, 3),
    ));

    let o3 = ConeSpec::orthant(3)?;
    let scale = |s: f64| ConeMap::new(o1.clone(), o1.clone(), vec![Primitive::Scale(s)]);
    let m = ConeMap::new(o3.clone(), o3.clone(), vec![Primitive::Product(vec![scale(2.0)?, vinberg_star(&o1)?, scale(3.0)?])])?;
    out.push(("orthant(3) as (2x₁, 1/x₂, 3x₃)".into(), m, (2, 1)));

    let c = ConeSpec::product(vec![p2.clone(), o2.clone()])?;
    let d = DMatrix::from_row_slice(2, 2, &[0.0, 3.0, 0.7, 0.0]);
    out.push(("psd(2) x orthant(2)".into(), product_map(&c, vec![vinberg_star(&p2)?, linear_on(&o2, d)?])?, (2, 3)));
    Ok(out)
}

fn decomposition(cfg: SuiteConfig) -> Check {
    let samples = if cfg.quick { 100 } else { 500 };
    let mut cases = mixed_isometries()?;
    let p2 = ConeSpec::psd(2)?;
    cases.push(("psd(2) pure star".into(), vinberg_star(&p2)?, (0, 3)));
    let l4 = ConeSpec::lorentz(4)?;
    cases.push(("lorentz(4) pure linear".into(), linear_on(&l4, lorentz_boost(4, 0.3, 2.0))?, (4, 0)));
    let mut fails = Vec::new();
    let mut per = Vec::new();
    let mut worst_res: f64 = 0.0;
    for (name, m, dims) in cases {
        let r = decompose(&m.source, &m.target, &m, samples, cfg.seed)?;
        let pres = r.phi1_report.as_ref().map(|p| p.gauge_preserving.pass).unwrap_or(true);
        let revs = r.phi2_report.as_ref().map(|p| p.gauge_reversing.pass).unwrap_or(true);
        let tol_ok = r.phi1_report.as_ref().map_or(true, |p| p.tol <= tol::DECOMP_CLASSIFY)
            && r.phi2_report.as_ref().map_or(true, |p| p.tol <= tol::DECOMP_CLASSIFY);
        let ok = r.verified && r.dims == dims && pres && revs && tol_ok && r.residual <= tol::DECOMP_RESIDUAL;
        if !ok {
            fails.push(format!("{name} {:?} {:?}", r.dims, r.failures));
        }
        worst_res = worst_res.max(r.residual);
        per.push(json!({ "case": name, "dims": r.dims, "expected": dims, "residual": r.residual, "verified": r.verified }));
    }
    Ok(Outcome {
        pass: fails.is_empty(),
        detail: if fails.is_empty() {
            format!("7 cases recovered; worst reassembly residual {worst_res:.2e}")
        } else {
            format!("failing: {}", fails.join("; "))
        },
        metrics: json!({ "cases": per }),
    })
}

fn busemann_funk(cfg: SuiteConfig) -> Check {
    let mut r = rng(cfg.seed.wrapping_add(22));
    let cones = [random_poly_h(3, 7, &mut r), random_poly_h(4, 10, &mut r), random_poly_h(4, 12, &mut r)];
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for k in 0..100 {
        let cone = &cones[k % cones.len()];
        let x = cone.sample_interior(&mut r);
        let y = cone.sample_interior(&mut r);
        let a = distance_from_busemann_sup(cone, &x, &y)?;
        let b = funk(cone, &x, &y)?;
        worst = worst.max((a - b).abs());
        count += 1;
    }
    Ok(Outcome {
        pass: worst <= tol::BUSEMANN,
        detail: format!("worst difference {worst:.2e} on {count} pairs"),
        metrics: json!({ "worst": worst }),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Expect {
    /// Must fail the Thompson isometry test.
    NotIsometry,
    /// Must fail the gauge-reversing test.
    NotReversing,
}

/// Twenty maps the classifier has to reject.
pub fn negative_controls_maps() -> crate::Result<Vec<(String, ConeMap, Expect)>> {
    let mut out = Vec::new();
    for n in [2, 3, 4] {
        let o = ConeSpec::orthant(n)?;
        for p in [0.5, 0.8] {
            out.push((format!("orthant({n}) power {p}"), ConeMap::new(o.clone(), o.clone(), vec![Primitive::Power(p)])?, Expect::NotIsometry));
        }
    }
    let o2 = ConeSpec::orthant(2)?;
    for p in [-0.5, -2.0] {
        out.push((format!("orthant(2) power {p}"), ConeMap::new(o2.clone(), o2.clone(), vec![Primitive::Power(p)])?, Expect::NotIsometry));
    }
    let l3 = ConeSpec::lorentz(3)?;
    let l4 = ConeSpec::lorentz(4)?;
    let p2 = ConeSpec::psd(2)?;
    let o3 = ConeSpec::orthant(3)?;
    for c in [&o3, &l3, &p2] {
        let v = c.base_point() * 0.3;
        out.push((format!("{:?} translate", c.desc()), ConeMap::new(c.clone(), c.clone(), vec![Primitive::Translate(v)])?, Expect::NotIsometry));
    }
    for c in [&o3, &l3, &p2, &l4] {
        let f = c.section().functional;
        let a = DMatrix::identity(c.dim(), c.dim()) + c.base_point() * f.transpose();
        out.push((format!("{:?} squeeze", c.desc()), linear_on(c, a)?, Expect::NotIsometry));
    }
    for c in [&o2, &l3] {
        let mut pipe = vinberg_star(c)?.pipeline;
        pipe.push(Primitive::Translate(c.base_point() * 0.2));
        out.push((format!("{:?} star then translate", c.desc()), ConeMap::new(c.clone(), c.clone(), pipe)?, Expect::NotIsometry));
    }
    let perm = DMatrix::from_row_slice(3, 3, &[0.0, 2.0, 0.0, 0.0, 0.0, 3.0, 1.0, 0.0, 0.0]);
    out.push(("orthant(3) scaled permutation".into(), linear_on(&o3, perm)?, Expect::NotReversing));
    out.push(("lorentz(3) boost".into(), linear_on(&l3, lorentz_boost(3, 0.5, 1.0))?, Expect::NotReversing));
    let a = DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.0, 2.0]);
    out.push(("psd(2) congruence".into(), linear_on(&p2, congruence(&a))?, Expect::NotReversing));
    Ok(out)
}

fn negative_controls(cfg: SuiteConfig) -> Check {
    let maps = negative_controls_maps()?;
    let mut missed = Vec::new();
    for (name, m, expect) in &maps {
        let r = classify(m, 200, cfg.seed, tol::NEGATIVE_CLASSIFY)?;
        let rejected = match expect {
            Expect::NotIsometry => !r.thompson_isometry.pass && !r.gauge_reversing.pass,
            Expect::NotReversing => !r.gauge_reversing.pass,
        };
        if !rejected {
            missed.push(name.clone());
        }
    }
    Ok(Outcome {
        pass: missed.is_empty() && maps.len() == 20,
        detail: format!("{} of {} maps rejected", maps.len() - missed.len(), maps.len()),
        metrics: json!({ "missed": missed }),
    })
}
