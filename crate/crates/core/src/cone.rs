//! Cone descriptions: membership, base points, duals, generators, faces.

use std::sync::{Arc, OnceLock};

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::dd;
use crate::error::{check_dim, Error, Result};
use crate::linalg::{self, columns, null_space, rank, smat, svec, Point};
use crate::lp::{self, Cmp, LpOutcome};

pub const MEMBERSHIP_TOL: f64 = 1e-9;
pub const INTERIOR_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConeDesc {
    Orthant { dim: usize },
    Lorentz { dim: usize },
    Psd { n: usize },
    PolyH { normals: Vec<Vec<f64>> },
    PolyV { rays: Vec<Vec<f64>> },
    Product { factors: Vec<ConeDesc> },
}

#[derive(Clone, Debug)]
pub enum Kind {
    Orthant,
    Lorentz,
    Psd { n: usize },
    /// Rows are unit normals.
    PolyH { a: DMatrix<f64> },
    /// Columns are unit rays.
    PolyV { g: DMatrix<f64> },
    Product { factors: Vec<ConeSpec>, offsets: Vec<usize> },
}

/// A validated proper open convex cone.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "ConeDesc", into = "ConeDesc")]
pub struct ConeSpec {
    desc: ConeDesc,
    kind: Kind,
    dim: usize,
    base: Point,
    extremals: Arc<OnceLock<Vec<Point>>>,
}

impl PartialEq for ConeSpec {
    fn eq(&self, other: &Self) -> bool {
        self.desc == other.desc
    }
}

impl From<ConeSpec> for ConeDesc {
    fn from(c: ConeSpec) -> Self {
        c.desc
    }
}

impl TryFrom<ConeDesc> for ConeSpec {
    type Error = Error;
    fn try_from(d: ConeDesc) -> Result<Self> {
        ConeSpec::new(d)
    }
}

/// Affine slice D = {x : f(x) = 1} of the cone.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CrossSection {
    pub functional: Point,
    pub level: f64,
}

impl CrossSection {
    /// `f` must be strictly positive on the closed cone minus the origin.
    pub fn new(cone: &ConeSpec, functional: Point) -> Result<Self> {
        check_dim(cone.dim(), functional.len())?;
        if !cone.dual().contains(&functional, true, 0.0)? {
            return Err(Error::InvalidArgument("section functional is not positive on the cone".into()));
        }
        Ok(CrossSection { functional, level: 1.0 })
    }

    pub fn eval(&self, x: &Point) -> f64 {
        self.functional.dot(x)
    }

    /// Radial projection onto the section.
    pub fn project(&self, x: &Point) -> Point {
        x / self.eval(x)
    }

    pub fn contains(&self, x: &Point, tol: f64) -> bool {
        (self.eval(x) - self.level).abs() <= tol * (1.0 + x.norm())
    }
}

/// Extremal generators: a finite list for polyhedral cones, else a sampler.
#[derive(Clone, Debug)]
pub enum Extremals {
    Finite(Vec<Point>),
    Sampler(ExtremalSampler),
}

#[derive(Clone, Debug)]
pub struct ExtremalSampler {
    cone: ConeSpec,
}

impl ExtremalSampler {
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Point {
        self.cone.sample_extremal(rng)
    }

    pub fn take<R: Rng + ?Sized>(&self, count: usize, rng: &mut R) -> Vec<Point> {
        (0..count).map(|_| self.sample(rng)).collect()
    }
}

impl Extremals {
    pub fn take<R: Rng + ?Sized>(&self, count: usize, rng: &mut R) -> Vec<Point> {
        match self {
            Extremals::Finite(v) => v.clone(),
            Extremals::Sampler(s) => s.take(count, rng),
        }
    }
}

/// Minimal face containing a closure point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Face {
    /// Orthant zero coordinates or poly_h active facets.
    Active { indices: Vec<usize> },
    /// poly_v rays lying in the face.
    Support { indices: Vec<usize> },
    Interior,
    /// Lorentz boundary ray, normalized to t = 1.
    Ray { direction: Vec<f64> },
    Apex,
    Product { factors: Vec<Face> },
}

impl Face {
    /// Whether two descriptors name the same part (ray directions matched to `tol`).
    pub fn same(&self, other: &Face, tol: f64) -> bool {
        match (self, other) {
            (Face::Ray { direction: a }, Face::Ray { direction: b }) => {
                a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
            }
            (Face::Product { factors: a }, Face::Product { factors: b }) => {
                a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.same(y, tol))
            }
            _ => self == other,
        }
    }
}

impl ConeSpec {
    pub fn new(desc: ConeDesc) -> Result<Self> {
        let (kind, dim) = match &desc {
            ConeDesc::Orthant { dim } => {
                if *dim == 0 {
                    return Err(Error::InvalidCone("orthant of dimension 0".into()));
                }
                (Kind::Orthant, *dim)
            }
            ConeDesc::Lorentz { dim } => {
                if *dim < 2 {
                    return Err(Error::InvalidCone("lorentz cone needs dimension at least 2".into()));
                }
                (Kind::Lorentz, *dim)
            }
            ConeDesc::Psd { n } => {
                if *n == 0 {
                    return Err(Error::InvalidCone("psd cone of size 0".into()));
                }
                (Kind::Psd { n: *n }, n * (n + 1) / 2)
            }
            ConeDesc::PolyH { normals } => {
                let a = unit_rows(normals)?;
                (Kind::PolyH { a: a.clone() }, a.ncols())
            }
            ConeDesc::PolyV { rays } => {
                let g = unit_rows(rays)?.transpose();
                (Kind::PolyV { g: g.clone() }, g.nrows())
            }
            ConeDesc::Product { factors } => {
                if factors.is_empty() {
                    return Err(Error::InvalidCone("product with no factors".into()));
                }
                let specs = factors.iter().cloned().map(ConeSpec::new).collect::<Result<Vec<_>>>()?;
                let mut offsets = Vec::with_capacity(specs.len());
                let mut acc = 0;
                for s in &specs {
                    offsets.push(acc);
                    acc += s.dim;
                }
                (Kind::Product { factors: specs, offsets }, acc)
            }
        };
        let base = match &kind {
            Kind::Orthant => DVector::from_element(dim, 1.0),
            Kind::Lorentz => {
                let mut b = DVector::zeros(dim);
                b[0] = 1.0;
                b
            }
            Kind::Psd { n } => svec(&DMatrix::identity(*n, *n)),
            Kind::PolyH { a } => chebyshev_center(a)?,
            Kind::PolyV { g } => {
                validate_rays(g)?;
                let s: Point = g.column_sum();
                &s / s.norm()
            }
            Kind::Product { factors, .. } => {
                let parts: Vec<f64> = factors.iter().flat_map(|f| f.base.iter().cloned().collect::<Vec<_>>()).collect();
                DVector::from_vec(parts)
            }
        };
        Ok(ConeSpec { desc, kind, dim, base, extremals: Arc::new(OnceLock::new()) })
    }

    pub fn orthant(dim: usize) -> Result<Self> {
        Self::new(ConeDesc::Orthant { dim })
    }

    pub fn lorentz(dim: usize) -> Result<Self> {
        Self::new(ConeDesc::Lorentz { dim })
    }

    pub fn psd(n: usize) -> Result<Self> {
        Self::new(ConeDesc::Psd { n })
    }

    pub fn poly_h(normals: &[Point]) -> Result<Self> {
        Self::new(ConeDesc::PolyH { normals: normals.iter().map(|v| v.iter().cloned().collect()).collect() })
    }

    pub fn poly_v(rays: &[Point]) -> Result<Self> {
        Self::new(ConeDesc::PolyV { rays: rays.iter().map(|v| v.iter().cloned().collect()).collect() })
    }

    pub fn product(factors: Vec<ConeSpec>) -> Result<Self> {
        Self::new(ConeDesc::Product { factors: factors.into_iter().map(|f| f.desc).collect() })
    }

    pub fn desc(&self) -> &ConeDesc {
        &self.desc
    }

    pub fn kind(&self) -> &Kind {
        &self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Factor cones and their coordinate offsets; a non-product is its own single factor.
    pub fn blocks(&self) -> Vec<(usize, &ConeSpec)> {
        match &self.kind {
            Kind::Product { factors, offsets } => offsets.iter().cloned().zip(factors.iter()).collect(),
            _ => vec![(0, self)],
        }
    }

    pub fn base_point(&self) -> Point {
        self.base.clone()
    }

    pub fn is_polyhedral(&self) -> bool {
        match &self.kind {
            Kind::Orthant | Kind::PolyH { .. } | Kind::PolyV { .. } => true,
            Kind::Lorentz => self.dim == 2,
            Kind::Psd { n } => *n == 1,
            Kind::Product { factors, .. } => factors.iter().all(|f| f.is_polyhedral()),
        }
    }

    /// Signed interiority margin: positive inside, zero on the boundary.
    pub fn margin(&self, x: &Point) -> Result<f64> {
        check_dim(self.dim, x.len())?;
        Ok(self.margin_raw(x))
    }

    pub(crate) fn margin_raw(&self, x: &Point) -> f64 {
        match &self.kind {
            Kind::Orthant => x.iter().cloned().fold(f64::INFINITY, f64::min),
            Kind::Lorentz => x[0] - x.rows(1, self.dim - 1).norm(),
            Kind::Psd { n } => linalg::min_eigenvalue(&smat(x.as_slice(), *n)),
            Kind::PolyH { a } => (a * x).iter().cloned().fold(f64::INFINITY, f64::min),
            Kind::PolyV { g } => {
                // min t with x + t b in the closed cone
                match lp::min_shift(g, &self.base, &(-x)) {
                    Ok(t) => -t,
                    Err(_) => f64::NAN,
                }
            }
            Kind::Product { factors, offsets } => factors
                .iter()
                .zip(offsets)
                .map(|(f, &o)| f.margin_raw(&x.rows(o, f.dim).into_owned()))
                .fold(f64::INFINITY, f64::min),
        }
    }

    /// Open-cone test with margin `tol` (strict) or closure test with slack `tol`.
    pub fn contains(&self, x: &Point, strict: bool, tol: f64) -> Result<bool> {
        let m = self.margin(x)?;
        if m.is_nan() {
            return Err(Error::Lp("membership program failed".into()));
        }
        Ok(if strict { m > tol } else { m >= -tol })
    }

    pub fn is_interior(&self, x: &Point) -> bool {
        x.len() == self.dim && x.iter().all(|v| v.is_finite()) && self.margin_raw(x) > 0.0
    }

    /// Closed dual under the ambient inner product.
    pub fn dual(&self) -> ConeSpec {
        let desc = match &self.desc {
            ConeDesc::PolyH { normals } => ConeDesc::PolyV { rays: normals.clone() },
            ConeDesc::PolyV { rays } => ConeDesc::PolyH { normals: rays.clone() },
            ConeDesc::Product { .. } => {
                let f = self.blocks().iter().map(|(_, f)| f.dual().desc).collect();
                ConeDesc::Product { factors: f }
            }
            d => d.clone(),
        };
        ConeSpec::new(desc).expect("dual of a valid cone is valid")
    }

    /// Canonical section: the dual base point scaled so that f(b) = 1.
    pub fn section(&self) -> CrossSection {
        let f = self.dual().base_point();
        let s = f.dot(&self.base);
        CrossSection { functional: f / s, level: 1.0 }
    }

    pub fn extremal_generators(&self) -> Result<Extremals> {
        if let Some(list) = self.finite_extremals()? {
            return Ok(Extremals::Finite(list));
        }
        Ok(Extremals::Sampler(ExtremalSampler { cone: self.clone() }))
    }

    /// Finite list when every factor is polyhedral, else `None`.
    pub fn finite_extremals(&self) -> Result<Option<Vec<Point>>> {
        if let Some(v) = self.extremals.get() {
            return Ok(Some(v.clone()));
        }
        let list = match &self.kind {
            Kind::Orthant => (0..self.dim).map(|i| unit(self.dim, i)).collect(),
            Kind::Lorentz if self.dim == 2 => {
                vec![DVector::from_vec(vec![1.0, 1.0]), DVector::from_vec(vec![1.0, -1.0])]
            }
            Kind::Psd { n: 1 } => vec![DVector::from_vec(vec![1.0])],
            Kind::Lorentz | Kind::Psd { .. } => return Ok(None),
            Kind::PolyH { a } => dd::extreme_rays(a, 1e-10)?,
            Kind::PolyV { g } => irredundant_rays(g)?,
            Kind::Product { factors, offsets } => {
                let mut out = Vec::new();
                for (f, &o) in factors.iter().zip(offsets) {
                    match f.finite_extremals()? {
                        Some(list) => out.extend(list.iter().map(|g| self.embed(o, g))),
                        None => return Ok(None),
                    }
                }
                out
            }
        };
        let _ = self.extremals.set(list.clone());
        Ok(Some(list))
    }

    /// Places a factor block into the ambient space, zeros elsewhere.
    pub fn embed(&self, offset: usize, block: &Point) -> Point {
        let mut v = DVector::zeros(self.dim);
        v.rows_mut(offset, block.len()).copy_from(block);
        v
    }

    pub fn sample_extremal<R: Rng + ?Sized>(&self, rng: &mut R) -> Point {
        match &self.kind {
            Kind::Lorentz if self.dim > 2 => {
                let u = unit_gaussian(self.dim - 1, rng);
                let mut v = DVector::zeros(self.dim);
                v[0] = 1.0;
                v.rows_mut(1, self.dim - 1).copy_from(&u);
                v
            }
            Kind::Psd { n } if *n > 1 => {
                let u = unit_gaussian(*n, rng);
                svec(&(&u * u.transpose()))
            }
            Kind::Product { factors, offsets } => {
                let k = rng.random_range(0..factors.len());
                self.embed(offsets[k], &factors[k].sample_extremal(rng))
            }
            _ => {
                let list = self.finite_extremals().ok().flatten().unwrap_or_default();
                list[rng.random_range(0..list.len())].clone()
            }
        }
    }

    /// Interior sample: roughly uniform on the canonical section, shrunk slightly
    /// toward the base point, times a log-uniform radial factor.
    pub fn sample_interior<R: Rng + ?Sized>(&self, rng: &mut R) -> Point {
        let radial = (rng.random_range(-1.0..1.0f64)).exp();
        self.sample_section(rng) * radial
    }

    /// Point of the canonical section.
    pub fn sample_section<R: Rng + ?Sized>(&self, rng: &mut R) -> Point {
        let f = self.section();
        let u = match &self.kind {
            Kind::Orthant => {
                let w: Point = DVector::from_fn(self.dim, |_, _| Exp1.sample(rng));
                let s = w.sum();
                w / s * self.dim as f64
            }
            Kind::Lorentz => {
                let d = self.dim - 1;
                let r: f64 = rng.random_range(0.0..1.0f64).powf(1.0 / d as f64);
                let mut v = DVector::zeros(self.dim);
                v[0] = 1.0;
                v.rows_mut(1, d).copy_from(&(unit_gaussian(d, rng) * r));
                v
            }
            Kind::Psd { n } => {
                let g: DMatrix<f64> = DMatrix::from_fn(*n, n + 1, |_, _| StandardNormal.sample(rng));
                let x = &g * g.transpose();
                let t = x.trace();
                svec(&(x * (*n as f64 / t)))
            }
            Kind::PolyH { a } => hit_and_run(a, &self.base, &f, rng),
            Kind::PolyV { g } => {
                let w: Point = DVector::from_fn(g.ncols(), |_, _| Exp1.sample(rng));
                g * w
            }
            Kind::Product { factors, .. } => {
                let parts: Vec<f64> = factors
                    .iter()
                    .flat_map(|c| c.sample_interior(rng).iter().cloned().collect::<Vec<_>>())
                    .collect();
                DVector::from_vec(parts)
            }
        };
        let u = f.project(&u);
        let b = f.project(&self.base);
        &b + (u - &b) * 0.98
    }

    /// Positive functionals on the cone: dual extremal generators scaled to
    /// ⟨f, b⟩ = 1, with the factor each belongs to. Continuous factors
    /// contribute `per_factor` seeded samples.
    pub fn dual_extremals<R: Rng + ?Sized>(&self, per_factor: usize, rng: &mut R) -> Result<Vec<(Point, usize)>> {
        let mut out = Vec::new();
        for (k, (o, f)) in self.blocks().into_iter().enumerate() {
            let dual = f.dual();
            let list = match dual.finite_extremals()? {
                Some(l) => l,
                None => (0..per_factor).map(|_| dual.sample_extremal(rng)).collect(),
            };
            for g in list {
                let e = self.embed(o, &g);
                let s = e.dot(&self.base);
                out.push((e / s, k));
            }
        }
        Ok(out)
    }

    pub fn minimal_face(&self, x: &Point, tol: f64) -> Result<Face> {
        check_dim(self.dim, x.len())?;
        if !self.contains(x, false, tol)? {
            return Err(Error::OutsideClosure("minimal face of a point outside the closed cone".into()));
        }
        let scale = x.norm().max(1e-300);
        match &self.kind {
            Kind::Orthant => Ok(Face::Active { indices: (0..self.dim).filter(|&i| x[i] <= tol * scale).collect() }),
            Kind::PolyH { a } => {
                let ax = a * x;
                Ok(Face::Active { indices: (0..ax.len()).filter(|&i| ax[i] <= tol * scale).collect() })
            }
            Kind::PolyV { g } => {
                let mut idx = Vec::new();
                for j in 0..g.ncols() {
                    let gj: Point = g.column(j).into_owned();
                    if lp::min_shift(g, x, &gj)?.is_finite() {
                        idx.push(j);
                    }
                }
                Ok(Face::Support { indices: idx })
            }
            Kind::Lorentz => {
                if x.norm() <= tol {
                    Ok(Face::Apex)
                } else if self.margin_raw(x) > tol * scale {
                    Ok(Face::Interior)
                } else {
                    Ok(Face::Ray { direction: (x / x[0]).iter().cloned().collect() })
                }
            }
            Kind::Psd { .. } => Err(Error::Unsupported("psd face lattice".into())),
            Kind::Product { factors, offsets } => {
                let mut fs = Vec::new();
                for (f, &o) in factors.iter().zip(offsets) {
                    fs.push(f.minimal_face(&x.rows(o, f.dim).into_owned(), tol)?);
                }
                Ok(Face::Product { factors: fs })
            }
        }
    }

    /// Orthonormal basis (columns) of the linear span of the minimal face at x.
    pub fn face_span(&self, x: &Point, tol: f64) -> Result<DMatrix<f64>> {
        let face = self.minimal_face(x, tol)?;
        self.span_of(&face, x)
    }

    fn span_of(&self, face: &Face, x: &Point) -> Result<DMatrix<f64>> {
        let n = self.dim;
        match (&self.kind, face) {
            (Kind::Orthant, Face::Active { indices }) => {
                let cols: Vec<Point> = (0..n).filter(|i| !indices.contains(i)).map(|i| unit(n, i)).collect();
                Ok(columns(&cols, n))
            }
            (Kind::PolyH { a }, Face::Active { indices }) => {
                let mut rows = DMatrix::zeros(indices.len(), n);
                for (k, &i) in indices.iter().enumerate() {
                    rows.set_row(k, &a.row(i));
                }
                Ok(null_space(&rows, n, 1e-9))
            }
            (Kind::PolyV { g }, Face::Support { indices }) => {
                let cols: Vec<Point> = indices.iter().map(|&j| g.column(j).into_owned()).collect();
                Ok(linalg::col_span(&columns(&cols, n), 1e-9))
            }
            (Kind::Lorentz, Face::Interior) => Ok(DMatrix::identity(n, n)),
            (Kind::Lorentz, Face::Apex) => Ok(DMatrix::zeros(n, 0)),
            (Kind::Lorentz, Face::Ray { .. }) => Ok(columns(&[x.normalize()], n)),
            (Kind::Product { factors, offsets }, Face::Product { factors: fs }) => {
                let mut cols = Vec::new();
                for ((f, &o), face) in factors.iter().zip(offsets).zip(fs) {
                    let sub = f.span_of(face, &x.rows(o, f.dim).into_owned())?;
                    for c in sub.column_iter() {
                        cols.push(self.embed(o, &c.into_owned()));
                    }
                }
                Ok(columns(&cols, n))
            }
            _ => Err(Error::Unsupported("face span for this cone class".into())),
        }
    }

    /// Whether x spans an extreme ray of the closed cone.
    pub fn is_extremal(&self, x: &Point, tol: f64) -> Result<bool> {
        check_dim(self.dim, x.len())?;
        if x.norm() <= tol || !self.contains(x, false, tol * x.norm())? {
            return Ok(false);
        }
        match &self.kind {
            Kind::Psd { n } => {
                let eig = linalg::sym_eigen(&smat(x.as_slice(), *n));
                let mut ev: Vec<f64> = eig.eigenvalues.iter().cloned().collect();
                ev.sort_by(|a, b| b.partial_cmp(a).unwrap());
                Ok(ev.len() == 1 || ev[1] <= tol * ev[0])
            }
            Kind::Product { factors, offsets } => {
                let nonzero: Vec<usize> = (0..factors.len())
                    .filter(|&k| x.rows(offsets[k], factors[k].dim).norm() > tol * x.norm())
                    .collect();
                if nonzero.len() != 1 {
                    return Ok(false);
                }
                let k = nonzero[0];
                factors[k].is_extremal(&x.rows(offsets[k], factors[k].dim).into_owned(), tol)
            }
            _ => Ok(self.face_span(x, tol)?.ncols() == 1),
        }
    }
}

pub(crate) fn unit(n: usize, i: usize) -> Point {
    let mut v = DVector::zeros(n);
    v[i] = 1.0;
    v
}

fn unit_gaussian<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Point {
    loop {
        let v: Point = DVector::from_fn(d, |_, _| StandardNormal.sample(rng));
        let n = v.norm();
        if n > 1e-8 {
            return v / n;
        }
    }
}

fn unit_rows(rows: &[Vec<f64>]) -> Result<DMatrix<f64>> {
    if rows.is_empty() {
        return Err(Error::InvalidCone("empty generator list".into()));
    }
    let n = rows[0].len();
    if n == 0 || rows.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidCone("generator vectors of unequal or zero length".into()));
    }
    let mut m = DMatrix::zeros(rows.len(), n);
    for (i, r) in rows.iter().enumerate() {
        let v = DVector::from_vec(r.clone());
        let norm = v.norm();
        if !norm.is_finite() || norm == 0.0 {
            return Err(Error::InvalidCone("zero or non-finite generator".into()));
        }
        m.set_row(i, &(v / norm).transpose());
    }
    if rank(&m, 1e-10) < n {
        return Err(Error::InvalidCone("generators do not span the space".into()));
    }
    Ok(m)
}

/// Max s with â_i·x ≥ s in the box [−1,1]^n; the maximizer is interior iff s > 0.
fn chebyshev_center(a: &DMatrix<f64>) -> Result<Point> {
    let n = a.ncols();
    let mut c = vec![0.0; n + 1];
    c[n] = -1.0;
    let mut bounds = vec![(-1.0, 1.0); n + 1];
    bounds[n] = (f64::NEG_INFINITY, 1.0);
    let rows: Vec<_> = (0..a.nrows())
        .map(|i| {
            let mut r: Vec<f64> = a.row(i).iter().cloned().collect();
            r.push(-1.0);
            (r, Cmp::Ge, 0.0)
        })
        .collect();
    match lp::minimize(&c, &bounds, &rows)? {
        LpOutcome::Optimal { x, .. } if x[n] > 1e-9 => {
            let p = DVector::from_vec(x[..n].to_vec());
            Ok(&p / p.norm())
        }
        _ => Err(Error::InvalidCone("normals define a cone with empty interior".into())),
    }
}

/// Rejects ray sets whose cone contains a line (a nonnegative combination summing to 0).
fn validate_rays(g: &DMatrix<f64>) -> Result<()> {
    let m = g.ncols();
    let c = vec![0.0; m];
    let bounds = vec![(0.0, f64::INFINITY); m];
    let mut rows: Vec<_> = (0..g.nrows()).map(|i| (g.row(i).iter().cloned().collect::<Vec<_>>(), Cmp::Eq, 0.0)).collect();
    rows.push((vec![1.0; m], Cmp::Eq, 1.0));
    match lp::minimize(&c, &bounds, &rows)? {
        LpOutcome::Infeasible => Ok(()),
        _ => Err(Error::InvalidCone("rays do not span a pointed cone".into())),
    }
}

/// Drops rays that are nonnegative combinations of the others, and parallel duplicates.
fn irredundant_rays(g: &DMatrix<f64>) -> Result<Vec<Point>> {
    let mut keep: Vec<Point> = Vec::new();
    let cols: Vec<Point> = g.column_iter().map(|c| c.into_owned()).collect();
    for (j, gj) in cols.iter().enumerate() {
        if keep.iter().any(|k| (k - gj).norm() < 1e-9) {
            continue;
        }
        let others: Vec<Point> = cols
            .iter()
            .enumerate()
            .filter(|(i, c)| *i != j && (*c - gj).norm() >= 1e-9)
            .map(|(_, c)| c.clone())
            .collect();
        if others.is_empty() {
            keep.push(gj.clone());
            continue;
        }
        let om = columns(&others, g.nrows());
        let c = vec![0.0; others.len()];
        let bounds = vec![(0.0, f64::INFINITY); others.len()];
        let rows: Vec<_> = (0..g.nrows())
            .map(|i| (om.row(i).iter().cloned().collect::<Vec<_>>(), Cmp::Eq, gj[i]))
            .collect();
        if matches!(lp::minimize(&c, &bounds, &rows)?, LpOutcome::Infeasible) {
            keep.push(gj.clone());
        }
    }
    Ok(keep)
}

fn hit_and_run<R: Rng + ?Sized>(a: &DMatrix<f64>, start: &Point, f: &CrossSection, rng: &mut R) -> Point {
    let n = a.ncols();
    let fdir = f.functional.normalize();
    let mut x = f.project(start);
    for _ in 0..(n + 10) {
        let mut d = unit_gaussian(n, rng);
        d -= &fdir * fdir.dot(&d);
        if d.norm() < 1e-12 {
            continue;
        }
        let ax = a * &x;
        let ad = a * &d;
        let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
        for i in 0..ax.len() {
            if ad[i] > 0.0 {
                lo = lo.max(-ax[i] / ad[i]);
            } else if ad[i] < 0.0 {
                hi = hi.min(-ax[i] / ad[i]);
            }
        }
        if lo.is_finite() && hi.is_finite() && hi > lo {
            x += d * rng.random_range(lo..hi);
        }
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn v(x: &[f64]) -> Point {
        DVector::from_vec(x.to_vec())
    }

    #[test]
    fn membership_examples() {
        let o = ConeSpec::orthant(2).unwrap();
        assert!(o.contains(&v(&[1.0, 1.0]), true, 0.0).unwrap());
        let l = ConeSpec::lorentz(3).unwrap();
        assert!(!l.contains(&v(&[1.0, 1.0, 0.0]), true, 1e-12).unwrap());
        assert!(l.contains(&v(&[1.0, 1.0, 0.0]), false, 1e-12).unwrap());
        let p = ConeSpec::poly_h(&[v(&[1.0, 0.0]), v(&[0.0, 1.0])]).unwrap();
        assert!(!p.contains(&v(&[-1.0, 2.0]), false, 1e-9).unwrap());
        assert!(matches!(o.contains(&v(&[1.0]), true, 0.0), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn base_points() {
        assert_eq!(ConeSpec::orthant(3).unwrap().base_point().as_slice(), &[1.0, 1.0, 1.0]);
        assert_eq!(ConeSpec::psd(2).unwrap().base_point().as_slice(), &[1.0, 1.0, 0.0]);
        let p = ConeSpec::product(vec![ConeSpec::orthant(1).unwrap(), ConeSpec::lorentz(3).unwrap()]).unwrap();
        assert_eq!(p.base_point().as_slice(), &[1.0, 1.0, 0.0, 0.0]);
        let q = ConeSpec::poly_h(&[v(&[1.0, 0.0]), v(&[1.0, 2.0]), v(&[0.0, 1.0])]).unwrap();
        assert!(q.contains(&q.base_point(), true, INTERIOR_TOL).unwrap());
    }

    #[test]
    fn degenerate_specs_rejected() {
        assert!(ConeSpec::poly_v(&[v(&[1.0, 0.0]), v(&[-1.0, 0.0]), v(&[0.0, 1.0])]).is_err());
        assert!(ConeSpec::poly_v(&[v(&[1.0, 0.0]), v(&[2.0, 0.0])]).is_err());
        assert!(ConeSpec::poly_h(&[v(&[1.0, 0.0]), v(&[-1.0, 0.0]), v(&[0.0, 1.0])]).is_err());
        assert!(ConeSpec::orthant(0).is_err());
    }

    #[test]
    fn dual_swaps_representation() {
        let p = ConeSpec::poly_v(&[v(&[1.0, 0.0]), v(&[1.0, 2.0])]).unwrap();
        let d = p.dual();
        assert_eq!(d.desc(), &ConeDesc::PolyH { normals: vec![vec![1.0, 0.0], vec![1.0, 2.0]] });
        assert_eq!(ConeSpec::psd(2).unwrap().dual(), ConeSpec::psd(2).unwrap());
    }

    #[test]
    fn poly_v_redundant_ray_dropped() {
        let p = ConeSpec::poly_v(&[v(&[1.0, 0.0]), v(&[1.0, 1.0]), v(&[1.0, 2.0])]).unwrap();
        let Extremals::Finite(list) = p.extremal_generators().unwrap() else { panic!() };
        assert_eq!(list.len(), 2);
        let s5 = 5f64.sqrt();
        assert!(list.iter().any(|g| (g - v(&[1.0, 0.0])).norm() < 1e-12));
        assert!(list.iter().any(|g| (g - v(&[1.0 / s5, 2.0 / s5])).norm() < 1e-12));
    }

    #[test]
    fn faces() {
        let o = ConeSpec::orthant(3).unwrap();
        assert_eq!(o.minimal_face(&v(&[0.0, 2.0, 3.0]), 1e-12).unwrap(), Face::Active { indices: vec![0] });
        let l = ConeSpec::lorentz(3).unwrap();
        assert_eq!(l.minimal_face(&v(&[1.0, 1.0, 0.0]), 1e-12).unwrap(), Face::Ray { direction: vec![1.0, 1.0, 0.0] });
        let sq = square_cone();
        let Face::Active { indices } = sq.minimal_face(&v(&[0.0, 0.0, 0.0]), 1e-12).unwrap() else { panic!() };
        assert_eq!(indices, vec![0, 1, 2, 3]);
    }

    pub(crate) fn square_cone() -> ConeSpec {
        ConeSpec::poly_h(&[v(&[1.0, 0.0, 1.0]), v(&[-1.0, 0.0, 1.0]), v(&[0.0, 1.0, 1.0]), v(&[0.0, -1.0, 1.0])]).unwrap()
    }

    #[test]
    fn samples_are_interior_and_on_request_extremal() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let cones = [
            ConeSpec::orthant(4).unwrap(),
            ConeSpec::lorentz(4).unwrap(),
            ConeSpec::psd(3).unwrap(),
            square_cone(),
            ConeSpec::poly_v(&[v(&[1.0, 0.0, 0.0]), v(&[1.0, 1.0, 0.0]), v(&[1.0, 0.0, 1.0]), v(&[1.0, 1.0, 1.0])]).unwrap(),
            ConeSpec::product(vec![ConeSpec::orthant(2).unwrap(), ConeSpec::psd(2).unwrap()]).unwrap(),
        ];
        for c in &cones {
            for _ in 0..50 {
                let x = c.sample_interior(&mut rng);
                assert!(c.contains(&x, true, 0.0).unwrap(), "{:?}", c.desc());
                let g = c.sample_extremal(&mut rng);
                assert!(c.is_extremal(&g, 1e-9).unwrap(), "{:?} {}", c.desc(), g);
            }
        }
    }

    #[test]
    fn section_normalized() {
        for c in [ConeSpec::orthant(3).unwrap(), ConeSpec::psd(3).unwrap(), square_cone()] {
            let s = c.section();
            assert!((s.eval(&c.base_point()) - 1.0).abs() < 1e-14);
        }
    }
}
