//! Maps between cones as pipelines of primitives.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::cone::{ConeSpec, Kind};
use crate::error::{check_dim, Error, Result};
use crate::linalg::{self, smat, svec, Point};

#[derive(Clone, Debug)]
pub enum Primitive {
    Linear(DMatrix<f64>),
    Scale(f64),
    OrthantInverse,
    LorentzStar,
    PsdInverse,
    /// Componentwise x ↦ x^p on an orthant.
    Power(f64),
    /// x ↦ x + v with v in the closed cone.
    Translate(Point),
    /// Factor-wise maps on a product; each factor map carries its own cones.
    Product(Vec<ConeMap>),
    /// Keep the coordinate block [offset, offset+len).
    Restrict { offset: usize, len: usize },
    /// Place the input at `offset` inside a copy of `fill`.
    Embed { offset: usize, fill: Point },
}

impl Primitive {
    fn apply(&self, x: &Point) -> Point {
        match self {
            Primitive::Linear(a) => a * x,
            Primitive::Scale(s) => x * *s,
            Primitive::OrthantInverse => x.map(|v| 1.0 / v),
            Primitive::LorentzStar => {
                let q = x[0] * x[0] - x.rows(1, x.len() - 1).norm_squared();
                let mut out = -x / q;
                out[0] = x[0] / q;
                out
            }
            Primitive::PsdInverse => {
                let n = linalg::psd_side(x.len()).unwrap_or(1);
                match smat(x.as_slice(), n).try_inverse() {
                    Some(inv) => svec(&inv),
                    None => DVector::from_element(x.len(), f64::NAN),
                }
            }
            Primitive::Power(p) => x.map(|v| v.powf(*p)),
            Primitive::Translate(v) => x + v,
            Primitive::Product(maps) => {
                let mut out = Vec::new();
                let mut o = 0;
                for m in maps {
                    let d = m.source.dim();
                    out.extend(m.apply(&x.rows(o, d).into_owned()).iter().cloned());
                    o += d;
                }
                DVector::from_vec(out)
            }
            Primitive::Restrict { offset, len } => x.rows(*offset, *len).into_owned(),
            Primitive::Embed { offset, fill } => {
                let mut v = fill.clone();
                v.rows_mut(*offset, x.len()).copy_from(x);
                v
            }
        }
    }

    fn inverse(&self) -> Result<Primitive> {
        Ok(match self {
            Primitive::Linear(a) => {
                let inv = a.clone().try_inverse().ok_or_else(|| Error::Singular("linear primitive".into()))?;
                if !inv.iter().all(|v| v.is_finite()) || linalg::condition(a) > 1e14 {
                    return Err(Error::Singular("linear primitive".into()));
                }
                Primitive::Linear(inv)
            }
            Primitive::Scale(s) => Primitive::Scale(1.0 / s),
            Primitive::OrthantInverse => Primitive::OrthantInverse,
            Primitive::LorentzStar => Primitive::LorentzStar,
            Primitive::PsdInverse => Primitive::PsdInverse,
            Primitive::Power(p) => Primitive::Power(1.0 / p),
            Primitive::Product(maps) => Primitive::Product(maps.iter().map(|m| m.invert()).collect::<Result<_>>()?),
            Primitive::Translate(_) | Primitive::Restrict { .. } | Primitive::Embed { .. } => {
                return Err(Error::Unsupported("primitive is not invertible".into()))
            }
        })
    }

    fn out_dim(&self, d: usize) -> Result<usize> {
        match self {
            Primitive::Linear(a) => {
                check_dim(a.ncols(), d)?;
                Ok(a.nrows())
            }
            Primitive::Translate(v) => {
                check_dim(v.len(), d)?;
                Ok(d)
            }
            Primitive::PsdInverse => linalg::psd_side(d).map(|_| d).ok_or(Error::DimensionMismatch { expected: 3, got: d }),
            Primitive::Product(maps) => {
                check_dim(maps.iter().map(|m| m.source.dim()).sum(), d)?;
                Ok(maps.iter().map(|m| m.target.dim()).sum())
            }
            Primitive::Restrict { offset, len } => {
                if offset + len > d {
                    return Err(Error::DimensionMismatch { expected: offset + len, got: d });
                }
                Ok(*len)
            }
            Primitive::Embed { offset, fill } => {
                if offset + d > fill.len() {
                    return Err(Error::DimensionMismatch { expected: fill.len(), got: offset + d });
                }
                Ok(fill.len())
            }
            _ => Ok(d),
        }
    }
}

/// A map between cones: primitives applied in order.
#[derive(Clone, Debug)]
pub struct ConeMap {
    pub pipeline: Vec<Primitive>,
    pub source: ConeSpec,
    pub target: ConeSpec,
}

impl ConeMap {
    /// Builds the map and spot-checks that source samples land in the target.
    pub fn new(source: ConeSpec, target: ConeSpec, pipeline: Vec<Primitive>) -> Result<Self> {
        let mut d = source.dim();
        for p in &pipeline {
            d = p.out_dim(d)?;
        }
        check_dim(target.dim(), d)?;
        let m = ConeMap { pipeline, source, target };
        let mut rng = crate::rng(0);
        for _ in 0..8 {
            let x = m.source.sample_interior(&mut rng);
            let y = m.apply(&x);
            if !m.target.is_interior(&y) {
                return Err(Error::InvalidArgument("map sends a source sample outside the target cone".into()));
            }
        }
        Ok(m)
    }

    pub fn identity(cone: &ConeSpec) -> Self {
        ConeMap { pipeline: vec![], source: cone.clone(), target: cone.clone() }
    }

    /// Evaluation without the membership check.
    pub fn apply(&self, x: &Point) -> Point {
        let mut v = x.clone();
        for p in &self.pipeline {
            v = p.apply(&v);
        }
        v
    }

    pub fn evaluate(&self, x: &Point) -> Result<Point> {
        check_dim(self.source.dim(), x.len())?;
        if !self.source.is_interior(x) {
            return Err(Error::NotInterior("map argument".into()));
        }
        Ok(self.apply(x))
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &ConeMap) -> Result<ConeMap> {
        check_dim(self.target.dim(), next.source.dim())?;
        let mut pipeline = self.pipeline.clone();
        pipeline.extend(next.pipeline.iter().cloned());
        Ok(ConeMap { pipeline, source: self.source.clone(), target: next.target.clone() })
    }

    pub fn invert(&self) -> Result<ConeMap> {
        let pipeline = self.pipeline.iter().rev().map(|p| p.inverse()).collect::<Result<Vec<_>>>()?;
        Ok(ConeMap { pipeline, source: self.target.clone(), target: self.source.clone() })
    }

    /// Central-difference Jacobian with step h·‖x‖ per coordinate.
    pub fn derivative(&self, x: &Point, h: f64) -> Result<DMatrix<f64>> {
        check_dim(self.source.dim(), x.len())?;
        let step = h * x.norm();
        let n = x.len();
        let m = self.target.dim();
        let mut d = DMatrix::zeros(m, n);
        for j in 0..n {
            let mut xp = x.clone();
            let mut xm = x.clone();
            xp[j] += step;
            xm[j] -= step;
            let col = (self.apply(&xp) - self.apply(&xm)) / (2.0 * step);
            d.set_column(j, &col);
        }
        Ok(d)
    }

    pub fn from_json(v: &Value, default_source: Option<&ConeSpec>) -> Result<ConeMap> {
        let mj: MapJson = serde_json::from_value(v.clone())?;
        mj.build(default_source)
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(MapJson::from_map(self)).expect("map serializes")
    }
}

#[derive(Serialize, Deserialize)]
struct MapJson {
    pipeline: Vec<OpJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    source: Option<ConeSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    target: Option<ConeSpec>,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
enum OpJson {
    Star,
    Linear {
        matrix: Vec<Vec<f64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        target: Option<ConeSpec>,
    },
    Scale { alpha: f64 },
    OrthantInverse,
    LorentzStar,
    PsdInverse,
    Power { p: f64 },
    Translate { v: Vec<f64> },
    Product { factors: Vec<MapJson> },
    Restrict { factor: usize },
    Embed { target: ConeSpec, factor: usize, fill: Vec<f64> },
    /// Raw coordinate block; the stage cone is left to the explicit map target.
    Block { offset: usize, len: usize },
    Place { offset: usize, fill: Vec<f64> },
}

impl MapJson {
    fn build(self, default_source: Option<&ConeSpec>) -> Result<ConeMap> {
        let source = match (self.source, default_source) {
            (Some(s), _) => s,
            (None, Some(s)) => s.clone(),
            (None, None) => return Err(Error::InvalidArgument("map has no source cone".into())),
        };
        let mut cur = source.clone();
        let mut pipeline = Vec::new();
        for op in self.pipeline {
            match op {
                OpJson::Star => pipeline.extend(vinberg_star(&cur)?.pipeline),
                OpJson::Linear { matrix, target } => {
                    let rows = matrix.len();
                    let cols = matrix.first().map_or(0, |r| r.len());
                    if matrix.iter().any(|r| r.len() != cols) {
                        return Err(Error::InvalidArgument("ragged matrix".into()));
                    }
                    let flat: Vec<f64> = matrix.into_iter().flatten().collect();
                    pipeline.push(Primitive::Linear(DMatrix::from_row_slice(rows, cols, &flat)));
                    if let Some(t) = target {
                        cur = t;
                    }
                }
                OpJson::Scale { alpha } => {
                    if !(alpha > 0.0) {
                        return Err(Error::InvalidArgument("scale must be positive".into()));
                    }
                    pipeline.push(Primitive::Scale(alpha));
                }
                OpJson::OrthantInverse => pipeline.push(Primitive::OrthantInverse),
                OpJson::LorentzStar => pipeline.push(Primitive::LorentzStar),
                OpJson::PsdInverse => pipeline.push(Primitive::PsdInverse),
                OpJson::Power { p } => pipeline.push(Primitive::Power(p)),
                OpJson::Translate { v } => pipeline.push(Primitive::Translate(DVector::from_vec(v))),
                OpJson::Product { factors } => {
                    let blocks: Vec<ConeSpec> = cur.blocks().into_iter().map(|(_, f)| f.clone()).collect();
                    if blocks.len() != factors.len() {
                        return Err(Error::InvalidArgument("product map factor count differs from the cone".into()));
                    }
                    let maps = factors
                        .into_iter()
                        .zip(&blocks)
                        .map(|(f, c)| f.build(Some(c)))
                        .collect::<Result<Vec<_>>>()?;
                    let targets: Vec<ConeSpec> = maps.iter().map(|m| m.target.clone()).collect();
                    cur = if targets.len() == 1 { targets[0].clone() } else { ConeSpec::product(targets)? };
                    pipeline.push(Primitive::Product(maps));
                }
                OpJson::Restrict { factor } => {
                    let blocks = cur.blocks();
                    let (offset, f) = blocks
                        .get(factor)
                        .ok_or_else(|| Error::InvalidArgument(format!("no factor {factor}")))?;
                    pipeline.push(Primitive::Restrict { offset: *offset, len: f.dim() });
                    cur = (*f).clone();
                }
                OpJson::Embed { target, factor, fill } => {
                    let offset = target
                        .blocks()
                        .get(factor)
                        .map(|(o, _)| *o)
                        .ok_or_else(|| Error::InvalidArgument(format!("no factor {factor}")))?;
                    pipeline.push(Primitive::Embed { offset, fill: DVector::from_vec(fill) });
                    cur = target;
                }
                OpJson::Block { offset, len } => pipeline.push(Primitive::Restrict { offset, len }),
                OpJson::Place { offset, fill } => pipeline.push(Primitive::Embed { offset, fill: DVector::from_vec(fill) }),
            }
        }
        let target = self.target.unwrap_or(cur);
        ConeMap::new(source, target, pipeline)
    }

    fn from_map(m: &ConeMap) -> MapJson {
        let pipeline = m
            .pipeline
            .iter()
            .map(|p| match p {
                Primitive::Linear(a) => OpJson::Linear {
                    matrix: a.row_iter().map(|r| r.iter().cloned().collect()).collect(),
                    target: None,
                },
                Primitive::Scale(s) => OpJson::Scale { alpha: *s },
                Primitive::OrthantInverse => OpJson::OrthantInverse,
                Primitive::LorentzStar => OpJson::LorentzStar,
                Primitive::PsdInverse => OpJson::PsdInverse,
                Primitive::Power(p) => OpJson::Power { p: *p },
                Primitive::Translate(v) => OpJson::Translate { v: v.iter().cloned().collect() },
                Primitive::Product(maps) => OpJson::Product { factors: maps.iter().map(MapJson::from_map).collect() },
                Primitive::Restrict { offset, len } => OpJson::Block { offset: *offset, len: *len },
                Primitive::Embed { offset, fill } => OpJson::Place { offset: *offset, fill: fill.iter().cloned().collect() },
            })
            .collect();
        MapJson { pipeline, source: Some(m.source.clone()), target: Some(m.target.clone()) }
    }
}

/// Closed-form star map, normalized so that the base point is fixed.
pub fn vinberg_star(cone: &ConeSpec) -> Result<ConeMap> {
    let pipeline = match cone.kind() {
        Kind::Orthant => vec![Primitive::OrthantInverse],
        Kind::Lorentz => vec![Primitive::LorentzStar],
        Kind::Psd { .. } => vec![Primitive::PsdInverse],
        Kind::Product { factors, .. } => {
            vec![Primitive::Product(factors.iter().map(vinberg_star).collect::<Result<_>>()?)]
        }
        Kind::PolyH { a } if a.nrows() == a.ncols() => simplicial_star(a.clone().try_inverse(), cone)?,
        Kind::PolyV { g } if g.nrows() == g.ncols() => simplicial_star(Some(g.clone()), cone)?,
        _ => return Err(Error::Unsupported("star map needs a symmetric cone (orthant, lorentz, psd, simplicial, or products)".into())),
    };
    Ok(ConeMap { pipeline, source: cone.clone(), target: cone.clone() })
}

/// C = G(orthant): x ↦ G·diag(s²)·(G⁻¹x)⁻¹ with s = G⁻¹b fixes b.
fn simplicial_star(g: Option<DMatrix<f64>>, cone: &ConeSpec) -> Result<Vec<Primitive>> {
    let g = g.ok_or_else(|| Error::Singular("simplicial generator matrix".into()))?;
    let ginv = g.clone().try_inverse().ok_or_else(|| Error::Singular("simplicial generator matrix".into()))?;
    let s = &ginv * cone.base_point();
    let d = DMatrix::from_diagonal(&s.map(|v| v * v));
    Ok(vec![Primitive::Linear(ginv), Primitive::OrthantInverse, Primitive::Linear(g * d)])
}

/// φ_x = (−D_xφ)⁻¹ ∘ φ; fixes x up to finite-difference error, derivative −Id there.
pub fn make_involution(map: &ConeMap, x: &Point, h: f64) -> Result<ConeMap> {
    check_dim(map.source.dim(), x.len())?;
    if !map.source.is_interior(x) {
        return Err(Error::NotInterior("involution base point".into()));
    }
    let d = map.derivative(x, h)?;
    let neg = -d;
    if linalg::condition(&neg) > 1e8 {
        return Err(Error::Singular("derivative condition number exceeds 1e8".into()));
    }
    let inv = neg.try_inverse().ok_or_else(|| Error::Singular("derivative".into()))?;
    let mut pipeline = map.pipeline.clone();
    pipeline.push(Primitive::Linear(inv));
    ConeMap::new(map.source.clone(), map.source.clone(), pipeline)
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn v(x: &[f64]) -> Point {
        DVector::from_vec(x.to_vec())
    }

    #[test]
    fn orthant_inverse_examples() {
        let o = ConeSpec::orthant(2).unwrap();
        let m = ConeMap::new(o.clone(), o.clone(), vec![Primitive::OrthantInverse]).unwrap();
        assert_eq!(m.evaluate(&v(&[2.0, 4.0])).unwrap().as_slice(), &[0.5, 0.25]);
        let inv = m.invert().unwrap();
        assert!(matches!(inv.pipeline[..], [Primitive::OrthantInverse]));
        let p = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        let m2 = ConeMap::new(o.clone(), o.clone(), vec![Primitive::OrthantInverse, Primitive::Linear(p)]).unwrap();
        let x = v(&[0.7, 3.0]);
        let back = m2.invert().unwrap().apply(&m2.apply(&x));
        assert!((back - x).norm() < 1e-12);
    }

    #[test]
    fn star_examples() {
        let o3 = ConeSpec::orthant(3).unwrap();
        let s = vinberg_star(&o3).unwrap();
        assert_eq!(s.apply(&o3.base_point()), o3.base_point());
        let o2 = ConeSpec::orthant(2).unwrap();
        assert_eq!(vinberg_star(&o2).unwrap().apply(&v(&[2.0, 1.0])).as_slice(), &[0.5, 1.0]);
        let l = ConeSpec::lorentz(3).unwrap();
        let y = vinberg_star(&l).unwrap().apply(&v(&[2.0, 1.0, 0.0]));
        assert!((y - v(&[2.0 / 3.0, -1.0 / 3.0, 0.0])).norm() < 1e-15);
        let sq = ConeSpec::poly_h(&[v(&[1.0, 0.0, 1.0]), v(&[-1.0, 0.0, 1.0]), v(&[0.0, 1.0, 1.0]), v(&[0.0, -1.0, 1.0])]).unwrap();
        assert!(matches!(vinberg_star(&sq), Err(Error::Unsupported(_))));
    }

    #[test]
    fn simplicial_star_fixes_base() {
        let c = ConeSpec::poly_v(&[v(&[1.0, 0.0]), v(&[1.0, 2.0])]).unwrap();
        let s = vinberg_star(&c).unwrap();
        let b = c.base_point();
        assert!((s.apply(&b) - &b).norm() < 1e-12);
        let x = v(&[1.0, 0.5]);
        assert!((s.apply(&s.apply(&x)) - &x).norm() < 1e-12);
    }

    #[test]
    fn involution_examples() {
        let o1 = ConeSpec::orthant(1).unwrap();
        let m = ConeMap::new(o1.clone(), o1.clone(), vec![Primitive::OrthantInverse, Primitive::Scale(4.0)]).unwrap();
        let phi = make_involution(&m, &v(&[1.0]), 1e-5).unwrap();
        assert!((phi.apply(&v(&[1.0]))[0] - 1.0).abs() < 1e-8);
        assert!((phi.apply(&v(&[2.0]))[0] - 0.5).abs() < 1e-8);

        let o3 = ConeSpec::orthant(3).unwrap();
        let star = vinberg_star(&o3).unwrap();
        let phi = make_involution(&star, &o3.base_point(), 1e-5).unwrap();
        assert!((phi.apply(&o3.base_point()) - o3.base_point()).norm() < 1e-8);

        let l = ConeSpec::lorentz(3).unwrap();
        let x = v(&[2.0, 1.0, 0.0]);
        let phi = make_involution(&vinberg_star(&l).unwrap(), &x, 1e-5).unwrap();
        assert!((phi.apply(&x) - &x).norm() < 1e-6);
    }

    #[test]
    fn json_round_trip() {
        let spec = json!({"source": {"kind": "product", "factors": [{"kind": "orthant", "dim": 1}, {"kind": "lorentz", "dim": 3}]},
            "pipeline": [{"op": "product", "factors": [{"pipeline": [{"op": "scale", "alpha": 2.0}]}, {"pipeline": [{"op": "star"}]}]}]});
        let m = ConeMap::from_json(&spec, None).unwrap();
        let x = v(&[3.0, 2.0, 1.0, 0.0]);
        let y = m.apply(&x);
        assert!((y - v(&[6.0, 2.0 / 3.0, -1.0 / 3.0, 0.0])).norm() < 1e-15);
        let again = ConeMap::from_json(&m.to_json(), None).unwrap();
        assert!((again.apply(&x) - m.apply(&x)).norm() < 1e-15);
    }

    #[test]
    fn rejects_maps_leaving_the_cone() {
        let o = ConeSpec::orthant(2).unwrap();
        let a = DMatrix::from_row_slice(2, 2, &[1.0, -2.0, 0.0, 1.0]);
        assert!(ConeMap::new(o.clone(), o, vec![Primitive::Linear(a)]).is_err());
    }
}
