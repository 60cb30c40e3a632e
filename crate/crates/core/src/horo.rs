//! Horofunctions of the Funk, reverse-Funk, Thompson and product geometries,
//! detour costs by formula and by grid search.

use nalgebra::DVector;
use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::cone::{ConeSpec, Kind};
use crate::error::{check_dim, Error, Result};
use crate::gauge::{distance, face_gauge_raw, gauge_raw, Metric};
use crate::linalg::Point;

/// Extended reals in JSON: finite numbers, or the strings "inf", "+inf", "-inf".
pub mod ext_real {
    use super::*;

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Num(f64),
        Str(String),
    }

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else if v.is_nan() {
            s.serialize_str("nan")
        } else if *v > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_str("-inf")
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(v),
            Raw::Str(s) => match s.trim().to_ascii_lowercase().as_str() {
                "inf" | "+inf" | "infinity" | "+infinity" => Ok(f64::INFINITY),
                "-inf" | "-infinity" => Ok(f64::NEG_INFINITY),
                other => Err(serde::de::Error::custom(format!("not an extended real: {other}"))),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "tag", rename_all = "snake_case")]
pub enum Horofunction {
    /// y ↦ log(M(x/y)/M(x/b)), x on the boundary.
    ReverseFunk { x: Vec<f64> },
    /// y ↦ log(⟨y*,y⟩/⟨y*,b⟩), y* a dual extremal generator.
    FunkSingleton {
        #[serde(alias = "functional")]
        y: Vec<f64>,
    },
    /// r_x for interior x.
    ThompsonInteriorR { x: Vec<f64> },
    /// f_x(y) = log(M(y/x)/M(b/x)) for interior x.
    ThompsonInteriorF { x: Vec<f64> },
    /// (ξ₁ + c⁻) ∨ (ξ₂ − c⁺).
    Combined {
        first: Box<Horofunction>,
        second: Box<Horofunction>,
        #[serde(with = "ext_real")]
        c: f64,
    },
    /// [ξ₁, ξ₂, c] on a product of two cones, ξᵢ living on factor i.
    ProductHoro {
        first: Box<Horofunction>,
        second: Box<Horofunction>,
        #[serde(with = "ext_real")]
        c: f64,
    },
}

impl Horofunction {
    pub fn reverse_funk(x: &Point) -> Self {
        Horofunction::ReverseFunk { x: x.iter().cloned().collect() }
    }

    pub fn funk_singleton(y: &Point) -> Self {
        Horofunction::FunkSingleton { y: y.iter().cloned().collect() }
    }

    pub fn interior_r(x: &Point) -> Self {
        Horofunction::ThompsonInteriorR { x: x.iter().cloned().collect() }
    }

    pub fn interior_f(x: &Point) -> Self {
        Horofunction::ThompsonInteriorF { x: x.iter().cloned().collect() }
    }

    pub fn combined(first: Horofunction, second: Horofunction, c: f64) -> Self {
        Horofunction::Combined { first: Box::new(first), second: Box::new(second), c }
    }

    pub fn product(first: Horofunction, second: Horofunction, c: f64) -> Self {
        Horofunction::ProductHoro { first: Box::new(first), second: Box::new(second), c }
    }

    /// The metric for which this horofunction is 1-Lipschitz.
    pub fn metric(&self) -> Metric {
        match self {
            Horofunction::ReverseFunk { .. } => Metric::Rfunk,
            Horofunction::FunkSingleton { .. } => Metric::Funk,
            _ => Metric::Thompson,
        }
    }
}

const PAYLOAD_TOL: f64 = 1e-9;

fn vec_of(v: &[f64]) -> Point {
    DVector::from_column_slice(v)
}

fn neg_part(c: f64) -> f64 {
    c.min(0.0)
}

fn pos_part(c: f64) -> f64 {
    c.max(0.0)
}

/// Extended sum with −∞ absorbing.
fn ext_sum(terms: &[f64]) -> f64 {
    if terms.iter().any(|t| *t == f64::NEG_INFINITY) {
        f64::NEG_INFINITY
    } else if terms.iter().any(|t| *t == f64::INFINITY) {
        f64::INFINITY
    } else {
        terms.iter().sum()
    }
}

fn two_factors(cone: &ConeSpec) -> Result<(&ConeSpec, &ConeSpec)> {
    match cone.kind() {
        Kind::Product { factors, .. } if factors.len() == 2 => Ok((&factors[0], &factors[1])),
        _ => Err(Error::InvalidPayload("product horofunction needs a product of two cones".into())),
    }
}

fn split(cone: &ConeSpec, y: &Point) -> (Point, Point) {
    let blocks = cone.blocks();
    let (o2, f2) = blocks[1];
    (y.rows(0, o2).into_owned(), y.rows(o2, f2.dim()).into_owned())
}

/// Checks payload dimensions and membership conditions.
pub fn validate(cone: &ConeSpec, h: &Horofunction) -> Result<()> {
    match h {
        Horofunction::ReverseFunk { x } => {
            check_dim(cone.dim(), x.len())?;
            let x = vec_of(x);
            let n = x.norm();
            if n == 0.0 || !x.iter().all(|v| v.is_finite()) {
                return Err(Error::InvalidPayload("reverse-Funk payload must be nonzero".into()));
            }
            let m = cone.margin(&x)?;
            if m < -PAYLOAD_TOL * n {
                return Err(Error::InvalidPayload("reverse-Funk payload is outside the closed cone".into()));
            }
            if m > PAYLOAD_TOL * n {
                return Err(Error::InvalidPayload("reverse-Funk payload must lie on the boundary".into()));
            }
            Ok(())
        }
        Horofunction::FunkSingleton { y } => {
            check_dim(cone.dim(), y.len())?;
            let y = vec_of(y);
            if !cone.dual().is_extremal(&y, PAYLOAD_TOL)? {
                return Err(Error::InvalidPayload("Funk singleton needs an extremal generator of the dual".into()));
            }
            Ok(())
        }
        Horofunction::ThompsonInteriorR { x } | Horofunction::ThompsonInteriorF { x } => {
            check_dim(cone.dim(), x.len())?;
            if !cone.is_interior(&vec_of(x)) {
                return Err(Error::InvalidPayload("interior Thompson payload must be interior".into()));
            }
            Ok(())
        }
        Horofunction::Combined { first, second, c } => {
            if c.is_nan() {
                return Err(Error::InvalidPayload("c is NaN".into()));
            }
            validate(cone, first)?;
            validate(cone, second)
        }
        Horofunction::ProductHoro { first, second, c } => {
            if c.is_nan() {
                return Err(Error::InvalidPayload("c is NaN".into()));
            }
            let (c1, c2) = two_factors(cone)?;
            validate(c1, first)?;
            validate(c2, second)
        }
    }
}

/// Value of the horofunction at an interior point.
pub fn eval(cone: &ConeSpec, h: &Horofunction, y: &Point) -> Result<f64> {
    check_dim(cone.dim(), y.len())?;
    validate(cone, h)?;
    if !cone.is_interior(y) {
        return Err(Error::NotInterior("horofunction argument".into()));
    }
    Ok(eval_raw(cone, h, y))
}

/// Evaluation without validation.
pub fn eval_raw(cone: &ConeSpec, h: &Horofunction, y: &Point) -> f64 {
    let b = cone.base_point();
    match h {
        Horofunction::ReverseFunk { x } | Horofunction::ThompsonInteriorR { x } => {
            let x = vec_of(x);
            gauge_raw(cone, &x, y).ln() - gauge_raw(cone, &x, &b).ln()
        }
        Horofunction::FunkSingleton { y: a } => {
            let a = vec_of(a);
            a.dot(y).ln() - a.dot(&b).ln()
        }
        Horofunction::ThompsonInteriorF { x } => {
            let x = vec_of(x);
            gauge_raw(cone, y, &x).ln() - gauge_raw(cone, &b, &x).ln()
        }
        Horofunction::Combined { first, second, c } => {
            if *c == f64::INFINITY {
                return eval_raw(cone, first, y);
            }
            if *c == f64::NEG_INFINITY {
                return eval_raw(cone, second, y);
            }
            (eval_raw(cone, first, y) + neg_part(*c)).max(eval_raw(cone, second, y) - pos_part(*c))
        }
        Horofunction::ProductHoro { first, second, c } => {
            let Ok((c1, c2)) = two_factors(cone) else { return f64::NAN };
            let (y1, y2) = split(cone, y);
            if *c == f64::INFINITY {
                return eval_raw(c1, first, &y1);
            }
            if *c == f64::NEG_INFINITY {
                return eval_raw(c2, second, &y2);
            }
            (eval_raw(c1, first, &y1) + neg_part(*c)).max(eval_raw(c2, second, &y2) - pos_part(*c))
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SequenceTable {
    /// values[n][p] = d(probe_p, z_n) − d(b, z_n).
    pub values: Vec<Vec<f64>>,
    pub converged: bool,
    /// Largest change between the last two rows.
    pub tail_defect: f64,
}

/// Normalized distance functions ψ_z(p) = d(p,z) − d(b,z) along a sequence.
pub fn horofunction_from_sequence(
    cone: &ConeSpec,
    metric: Metric,
    seq: &[Point],
    probes: &[Point],
    tol: f64,
) -> Result<SequenceTable> {
    let b = cone.base_point();
    let mut values = Vec::with_capacity(seq.len());
    for z in seq {
        let db = distance(cone, metric, &b, z)?;
        let mut row = Vec::with_capacity(probes.len());
        for p in probes {
            row.push(distance(cone, metric, p, z)? - db);
        }
        values.push(row);
    }
    let tail_defect = if values.len() >= 2 {
        let last = &values[values.len() - 1];
        let prev = &values[values.len() - 2];
        last.iter().zip(prev).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    } else {
        f64::INFINITY
    };
    Ok(SequenceTable { values, converged: tail_defect <= tol, tail_defect })
}

/// Both almost-geodesic conditions on every sampled pair s ≤ t past the
/// first quarter of the grid. Bounded grids are allowed.
pub fn is_almost_geodesic(cone: &ConeSpec, metric: Metric, ts: &[f64], path: &[Point], eps: f64) -> Result<bool> {
    if ts.len() != path.len() || ts.len() < 2 {
        return Err(Error::InvalidArgument("need matching grid and path with at least two samples".into()));
    }
    if ts.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidArgument("grid not increasing".into()));
    }
    let burn = ts.len() / 4;
    let g0 = &path[0];
    for i in burn.max(1)..ts.len() {
        let s = ts[i] - ts[0];
        if (distance(cone, metric, g0, &path[i])? - s).abs() >= eps {
            return Ok(false);
        }
        for j in i..ts.len() {
            let gap = ts[j] - ts[i];
            if (distance(cone, metric, &path[i], &path[j])? - gap).abs() >= eps {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DetourValue {
    #[serde(with = "ext_real")]
    pub h: f64,
    #[serde(with = "ext_real")]
    pub delta: f64,
}

/// H(ξ,η) = max(H₁ − u⁻ + v⁻, H₂ + u⁺ − v⁺) for ξ = [ξ₁,ξ₂,u], η = [η₁,η₂,v].
pub fn product_cost(h1: f64, h2: f64, u: f64, v: f64) -> f64 {
    let a = ext_sum(&[h1, -neg_part(u), neg_part(v)]);
    let b = ext_sum(&[h2, pos_part(u), -pos_part(v)]);
    a.max(b)
}

/// Product detour from component costs: `forward` = (H(ξ₁,η₁), H(ξ₂,η₂)),
/// `backward` = (H(η₁,ξ₁), H(η₂,ξ₂)).
pub fn detour_product(xi: &Horofunction, eta: &Horofunction, forward: (f64, f64), backward: (f64, f64)) -> Result<DetourValue> {
    let (Horofunction::ProductHoro { c: u, .. }, Horofunction::ProductHoro { c: v, .. }) = (xi, eta) else {
        return Err(Error::InvalidPayload("detour_product needs two product horofunctions".into()));
    };
    let h = product_cost(forward.0, forward.1, *u, *v);
    let back = product_cost(backward.0, backward.1, *v, *u);
    Ok(DetourValue { h, delta: ext_sum(&[h, back]) })
}

/// Product detour with component costs from the Thompson formulas on each factor.
pub fn detour_product_thompson(cone: &ConeSpec, xi: &Horofunction, eta: &Horofunction) -> Result<DetourValue> {
    let (c1, c2) = two_factors(cone)?;
    let (
        Horofunction::ProductHoro { first: x1, second: x2, .. },
        Horofunction::ProductHoro { first: y1, second: y2, .. },
    ) = (xi, eta)
    else {
        return Err(Error::InvalidPayload("detour_product needs two product horofunctions".into()));
    };
    let f = (thompson_cost(c1, x1, y1)?, thompson_cost(c2, x2, y2)?);
    let b = (thompson_cost(c1, y1, x1)?, thompson_cost(c2, y2, x2)?);
    detour_product(xi, eta, f, b)
}

enum FPart {
    Interior(Point),
    Singleton(Point),
}

/// A Thompson Busemann point written as [r, f, c]; missing parts are absent.
struct Normal {
    r: Option<Point>,
    f: Option<FPart>,
    c: f64,
}

fn has_psd(cone: &ConeSpec) -> bool {
    cone.blocks().iter().any(|(_, f)| matches!(f.kind(), Kind::Psd { n } if *n > 1))
}

fn normal_form(cone: &ConeSpec, h: &Horofunction) -> Result<Normal> {
    validate(cone, h)?;
    let boundary_r = |x: &[f64]| -> Result<Point> {
        if has_psd(cone) {
            return Err(Error::Unsupported("face computation for boundary payloads of psd cones".into()));
        }
        Ok(vec_of(x))
    };
    let singleton = |y: &[f64]| -> Point {
        let y = vec_of(y);
        let s = y.dot(&cone.base_point());
        y / s
    };
    Ok(match h {
        Horofunction::ThompsonInteriorR { x } => Normal { r: Some(vec_of(x)), f: None, c: f64::INFINITY },
        Horofunction::ThompsonInteriorF { x } => {
            Normal { r: None, f: Some(FPart::Interior(vec_of(x))), c: f64::NEG_INFINITY }
        }
        Horofunction::ReverseFunk { x } => Normal { r: Some(boundary_r(x)?), f: None, c: f64::INFINITY },
        Horofunction::FunkSingleton { y } => {
            Normal { r: None, f: Some(FPart::Singleton(singleton(y))), c: f64::NEG_INFINITY }
        }
        Horofunction::Combined { first, second, c } => {
            let (Horofunction::ReverseFunk { x }, Horofunction::FunkSingleton { y }) = (&**first, &**second) else {
                return Err(Error::InvalidPayload(
                    "combined payload must pair a reverse-Funk point with a Funk singleton".into(),
                ));
            };
            let xv = vec_of(x);
            let yv = singleton(y);
            // the Funk part must be reachable from sequences converging to x
            if yv.dot(&xv).abs() > PAYLOAD_TOL * yv.norm() * xv.norm() {
                return Err(Error::InvalidPayload("Funk singleton does not vanish at the reverse-Funk point".into()));
            }
            Normal { r: Some(boundary_r(x)?), f: Some(FPart::Singleton(yv)), c: *c }
        }
        Horofunction::ProductHoro { .. } => {
            return Err(Error::InvalidPayload("use the product detour for product horofunctions".into()))
        }
    })
}

fn ln_face(cone: &ConeSpec, x: &Point, y: &Point) -> f64 {
    face_gauge_raw(cone, x, y, PAYLOAD_TOL).ln()
}

fn cost_r(cone: &ConeSpec, x: &Point, y: &Point) -> f64 {
    let b = cone.base_point();
    let across = ln_face(cone, y, x);
    if across == f64::INFINITY {
        return f64::INFINITY;
    }
    across + gauge_raw(cone, x, &b).ln() - gauge_raw(cone, y, &b).ln()
}

fn cost_f(cone: &ConeSpec, p: &FPart, q: &FPart) -> f64 {
    let b = cone.base_point();
    match (p, q) {
        (FPart::Interior(x), FPart::Interior(y)) => {
            gauge_raw(cone, x, y).ln() - gauge_raw(cone, &b, y).ln() + gauge_raw(cone, &b, x).ln()
        }
        (FPart::Interior(x), FPart::Singleton(a)) => a.dot(x).ln() - a.dot(&b).ln() + gauge_raw(cone, &b, x).ln(),
        (FPart::Singleton(_), FPart::Interior(_)) => f64::INFINITY,
        (FPart::Singleton(a), FPart::Singleton(a2)) => {
            if (a - a2).norm() <= PAYLOAD_TOL * a.norm().max(1.0) {
                0.0
            } else {
                f64::INFINITY
            }
        }
    }
}

fn thompson_cost(cone: &ConeSpec, xi: &Horofunction, eta: &Horofunction) -> Result<f64> {
    let p = normal_form(cone, xi)?;
    let q = normal_form(cone, eta)?;
    let hr = match (&p.r, &q.r) {
        (Some(x), Some(y)) => cost_r(cone, x, y),
        _ => f64::INFINITY,
    };
    let hf = match (&p.f, &q.f) {
        (Some(a), Some(b)) => cost_f(cone, a, b),
        _ => f64::INFINITY,
    };
    Ok(product_cost(hr, hf, p.c, q.c))
}

/// Detour cost and metric between Thompson Busemann points.
pub fn detour_thompson(cone: &ConeSpec, xi: &Horofunction, eta: &Horofunction) -> Result<DetourValue> {
    let h = thompson_cost(cone, xi, eta)?;
    let back = thompson_cost(cone, eta, xi)?;
    Ok(DetourValue { h, delta: ext_sum(&[h, back]) })
}

/// Lower bound sup over the grid of η − ξ.
pub fn detour_empirical(cone: &ConeSpec, xi: &Horofunction, eta: &Horofunction, grid: &[Point]) -> Result<f64> {
    validate(cone, xi)?;
    validate(cone, eta)?;
    let mut best = f64::NEG_INFINITY;
    for z in grid {
        if !cone.is_interior(z) {
            continue;
        }
        let d = eval_raw(cone, eta, z) - eval_raw(cone, xi, z);
        if d.is_finite() || d == f64::INFINITY {
            best = best.max(d);
        }
    }
    Ok(best)
}

/// Points of the closed cone named by the payload, placed in ambient coordinates.
pub fn payload_points(cone: &ConeSpec, h: &Horofunction) -> Vec<Point> {
    match h {
        Horofunction::ReverseFunk { x } | Horofunction::ThompsonInteriorR { x } | Horofunction::ThompsonInteriorF { x } => {
            vec![vec_of(x)]
        }
        Horofunction::FunkSingleton { .. } => vec![],
        Horofunction::Combined { first, second, .. } => {
            let mut v = payload_points(cone, first);
            v.extend(payload_points(cone, second));
            v
        }
        Horofunction::ProductHoro { first, second, .. } => {
            let Ok((c1, c2)) = two_factors(cone) else { return vec![] };
            let o2 = cone.blocks()[1].0;
            let mut v: Vec<Point> = payload_points(c1, first).iter().map(|p| cone.embed(0, p)).collect();
            v.extend(payload_points(c2, second).iter().map(|p| cone.embed(o2, p)));
            v
        }
    }
}

const GRID_LOG_RANGE: f64 = 10.0;

/// Log-radial search grid of about `points` interior points. Orthants use a
/// log-lattice; other classes use seeded section samples. Anchors (points of
/// the closed cone) are added along their rays and pulled in from the
/// boundary. Products are Cartesian products of factor grids.
pub fn detour_grid(cone: &ConeSpec, points: usize, anchors: &[Point], seed: u64) -> Vec<Point> {
    let blocks = cone.blocks();
    if blocks.len() > 1 {
        let k = blocks.len() as f64;
        let per = (points as f64).powf(1.0 / k).floor().max(2.0) as usize;
        let mut acc: Vec<Point> = vec![DVector::zeros(0)];
        for (i, (o, f)) in blocks.iter().enumerate() {
            let local: Vec<Point> = anchors
                .iter()
                .map(|a| a.rows(*o, f.dim()).into_owned())
                .filter(|a| a.norm() > 1e-12 * a.len() as f64)
                .collect();
            let g = detour_grid(f, per, &local, seed.wrapping_add(i as u64));
            let mut next = Vec::with_capacity(acc.len() * g.len());
            for a in &acc {
                for p in &g {
                    let mut v = DVector::zeros(a.len() + p.len());
                    v.rows_mut(0, a.len()).copy_from(a);
                    v.rows_mut(a.len(), p.len()).copy_from(p);
                    next.push(v);
                }
            }
            acc = next;
        }
        return acc;
    }
    let b = cone.base_point();
    let n = cone.dim();
    let radial: Vec<f64> = (0..=40).map(|k| (-GRID_LOG_RANGE + k as f64 * 0.5).exp()).collect();
    let mut out = Vec::new();
    for a in anchors {
        for j in 0..=8 {
            let p: Point = a + &b * (10f64.powi(-j) * a.norm() / b.norm());
            if cone.is_interior(&p) {
                out.extend(radial.iter().map(|r| &p * *r));
            }
        }
    }
    let budget = points.saturating_sub(out.len()).max(points / 2);
    match cone.kind() {
        Kind::Orthant => {
            let m = (budget as f64).powf(1.0 / n as f64).floor().max(2.0) as usize;
            let step = 2.0 * GRID_LOG_RANGE / (m - 1) as f64;
            let total = m.pow(n as u32);
            for idx in 0..total {
                let mut r = idx;
                let v = DVector::from_fn(n, |_, _| {
                    let k = r % m;
                    r /= m;
                    (-GRID_LOG_RANGE + step * k as f64).exp()
                });
                out.push(v);
            }
        }
        _ => {
            let mut rng = crate::rng(seed);
            let per_ray = 21;
            let rays = (budget / per_ray).max(1);
            let f = cone.section();
            for i in 0..rays {
                let u = cone.sample_section(&mut rng);
                // every other ray is pushed toward the boundary
                let exit = {
                    let d = &u - &b;
                    let m = gauge_raw(cone, &(-&d), &b);
                    if m > 0.0 { 1.0 / m } else { 1.0 }
                };
                let t: f64 = if i % 2 == 0 { 1.0 } else { (1.0 - 10f64.powf(-rng.random_range(1.0..8.0))) * exit };
                let p = f.project(&(&b + (&u - &b) * t));
                if !cone.is_interior(&p) {
                    continue;
                }
                for k in 0..per_ray {
                    let s = -GRID_LOG_RANGE + k as f64 * (2.0 * GRID_LOG_RANGE / (per_ray - 1) as f64);
                    out.push(&p * s.exp());
                }
            }
        }
    }
    out
}

/// Whether the Busemann point forms a part by itself.
pub fn is_singleton(cone: &ConeSpec, h: &Horofunction) -> Result<bool> {
    validate(cone, h)?;
    match h {
        Horofunction::ReverseFunk { x } => cone.is_extremal(&vec_of(x), PAYLOAD_TOL),
        Horofunction::FunkSingleton { .. } => Ok(true),
        Horofunction::ThompsonInteriorR { .. } | Horofunction::ThompsonInteriorF { .. } => Ok(false),
        Horofunction::Combined { first, second, c } => {
            if *c == f64::INFINITY {
                is_singleton(cone, first)
            } else if *c == f64::NEG_INFINITY {
                is_singleton(cone, second)
            } else {
                Ok(false)
            }
        }
        Horofunction::ProductHoro { first, second, c } => {
            let (c1, c2) = two_factors(cone)?;
            if *c == f64::INFINITY {
                is_singleton(c1, first)
            } else if *c == f64::NEG_INFINITY {
                is_singleton(c2, second)
            } else {
                Ok(false)
            }
        }
    }
}

/// Funk distance as the sup over facet singletons of ξ(x) − ξ(y).
pub fn distance_from_busemann_sup(cone: &ConeSpec, x: &Point, y: &Point) -> Result<f64> {
    if !cone.is_polyhedral() {
        return Err(Error::Unsupported("Busemann sup needs a polyhedral cone".into()));
    }
    check_dim(cone.dim(), x.len())?;
    check_dim(cone.dim(), y.len())?;
    if !cone.is_interior(x) || !cone.is_interior(y) {
        return Err(Error::NotInterior("Busemann sup arguments".into()));
    }
    let mut rng = crate::rng(0);
    let mut best = f64::NEG_INFINITY;
    for (a, _) in cone.dual_extremals(0, &mut rng)? {
        let h = Horofunction::funk_singleton(&a);
        best = best.max(eval_raw(cone, &h, x) - eval_raw(cone, &h, y));
    }
    Ok(best)
}
