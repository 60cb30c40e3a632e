//! SVG figures of 2D cross-sections: boundary, Hilbert balls, chords.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::cone::ConeSpec;
use crate::error::{Error, Result};
use crate::gauge::{boundary_intersections, gauge_raw, hilbert};
use crate::linalg::{self, Point};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PlotSpec {
    pub cone: ConeSpec,
    #[serde(default)]
    pub centers: Vec<Vec<f64>>,
    #[serde(default)]
    pub radii: Vec<f64>,
    /// Pairs of section points joined by straight chords.
    #[serde(default)]
    pub geodesics: Vec<(Vec<f64>, Vec<f64>)>,
    #[serde(default = "default_size")]
    pub size: f64,
    #[serde(default = "default_resolution")]
    pub resolution: usize,
}

fn default_size() -> f64 {
    480.0
}

fn default_resolution() -> usize {
    360
}

/// Affine chart of the canonical section: b + u·e₁ + v·e₂.
struct Chart {
    b: Point,
    e1: Point,
    e2: Point,
}

impl Chart {
    fn new(cone: &ConeSpec) -> Result<Self> {
        if cone.dim() != 3 {
            return Err(Error::InvalidArgument("plots need a 3-dimensional cone (2D section)".into()));
        }
        let f = cone.section().functional;
        let basis = linalg::null_space(&nalgebra::DMatrix::from_row_slice(1, 3, f.as_slice()), 3, 1e-12);
        Ok(Chart { b: cone.base_point(), e1: basis.column(0).into_owned(), e2: basis.column(1).into_owned() })
    }

    fn to_plane(&self, x: &Point) -> (f64, f64) {
        let d = x - &self.b;
        (d.dot(&self.e1), d.dot(&self.e2))
    }

    fn dir(&self, theta: f64) -> Point {
        &self.e1 * theta.cos() + &self.e2 * theta.sin()
    }
}

/// Distance from `c` to the boundary along `u` (section directions).
fn exit_length(cone: &ConeSpec, c: &Point, u: &Point) -> f64 {
    let m = gauge_raw(cone, &(-u), c);
    if m > 0.0 { 1.0 / m } else { f64::INFINITY }
}

/// Boundary of the section as a closed polyline in chart coordinates.
fn boundary_curve(cone: &ConeSpec, chart: &Chart, res: usize) -> Vec<(f64, f64)> {
    (0..res)
        .filter_map(|k| {
            let u = chart.dir(std::f64::consts::TAU * k as f64 / res as f64);
            let t = exit_length(cone, &chart.b, &u);
            t.is_finite().then(|| chart.to_plane(&(&chart.b + &u * t)))
        })
        .collect()
}

/// Points at Hilbert distance r from c, one per direction.
pub fn hilbert_ball(cone: &ConeSpec, c: &Point, r: f64, res: usize) -> Result<Vec<Point>> {
    let chart = Chart::new(cone)?;
    if !cone.is_interior(c) {
        return Err(Error::NotInterior("ball center".into()));
    }
    let c = cone.section().project(c);
    let mut out = Vec::with_capacity(res);
    for k in 0..res {
        let u = chart.dir(std::f64::consts::TAU * k as f64 / res as f64);
        let t_max = exit_length(cone, &c, &u);
        let (mut lo, mut hi) = (0.0, t_max);
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if hilbert(cone, &c, &(&c + &u * mid))? < r {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        out.push(&c + &u * (0.5 * (lo + hi)));
    }
    Ok(out)
}

fn polyline(points: &[(f64, f64)], map: &dyn Fn((f64, f64)) -> (f64, f64)) -> String {
    let mut s = String::new();
    for (i, p) in points.iter().enumerate() {
        let (x, y) = map(*p);
        if i > 0 {
            s.push(' ');
        }
        let _ = write!(s, "{x:.3},{y:.3}");
    }
    s
}

/// Renders the figure as a standalone SVG document.
pub fn render(spec: &PlotSpec) -> Result<String> {
    let cone = &spec.cone;
    let chart = Chart::new(cone)?;
    if spec.radii.len() != spec.centers.len() && !spec.radii.is_empty() && spec.radii.len() != 1 {
        return Err(Error::InvalidArgument("give one radius, or one radius per center".into()));
    }
    let res = spec.resolution.max(8);
    let outline = boundary_curve(cone, &chart, res);
    let extent = outline.iter().map(|(x, y)| x.abs().max(y.abs())).fold(0.0, f64::max).max(1e-9);
    let size = spec.size;
    let scale = 0.45 * size / extent;
    let map = |(x, y): (f64, f64)| (size / 2.0 + x * scale, size / 2.0 - y * scale);

    let mut svg = String::new();
    let _ = writeln!(svg, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#);
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(svg, r#"<polygon class="boundary" points="{}" fill="none" stroke="black" stroke-width="1.5"/>"#, polyline(&outline, &map));

    for (i, c) in spec.centers.iter().enumerate() {
        let c = Point::from_column_slice(c);
        let radii: Vec<f64> = match spec.radii.len() {
            0 => vec![0.5, 1.0, 1.5],
            1 => vec![spec.radii[0]],
            _ => vec![spec.radii[i]],
        };
        for r in radii {
            let ball: Vec<(f64, f64)> = hilbert_ball(cone, &c, r, res)?.iter().map(|p| chart.to_plane(p)).collect();
            let _ = writeln!(svg, r#"<polygon class="ball" points="{}" fill="none" stroke="steelblue" stroke-width="1"/>"#, polyline(&ball, &map));
        }
        let (x, y) = map(chart.to_plane(&cone.section().project(&c)));
        let _ = writeln!(svg, r#"<circle class="center" cx="{x:.3}" cy="{y:.3}" r="2.5" fill="steelblue"/>"#);
    }

    let section = cone.section();
    for (a, b) in &spec.geodesics {
        let a = section.project(&Point::from_column_slice(a));
        let b = section.project(&Point::from_column_slice(b));
        let (w, z) = boundary_intersections(cone, &section, &a, &b)?;
        let chord = [chart.to_plane(&w), chart.to_plane(&z)];
        let _ = writeln!(svg, r#"<polyline class="chord" points="{}" fill="none" stroke="gray" stroke-dasharray="4 3"/>"#, polyline(&chord, &map));
        let seg = [chart.to_plane(&a), chart.to_plane(&b)];
        let _ = writeln!(svg, r#"<polyline class="geodesic" points="{}" fill="none" stroke="firebrick" stroke-width="2"/>"#, polyline(&seg, &map));
        for p in [&w, &z] {
            let (x, y) = map(chart.to_plane(p));
            let _ = writeln!(svg, r#"<circle class="hit" cx="{x:.3}" cy="{y:.3}" r="3" fill="firebrick"/>"#);
        }
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

/// Number of corners of a closed polyline: vertices where the heading turns by more than `angle`.
pub fn corner_count(points: &[Point], angle: f64) -> usize {
    let n = points.len();
    let mut corners = 0;
    let mut k = 0;
    while k < n {
        let prev = &points[(k + n - 1) % n];
        let here = &points[k];
        let next = &points[(k + 1) % n];
        let a: Point = here - prev;
        let b: Point = next - here;
        let cos = a.dot(&b) / (a.norm() * b.norm());
        if cos.clamp(-1.0, 1.0).acos() > angle {
            corners += 1;
            k += 2;
        } else {
            k += 1;
        }
    }
    corners
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simplex_balls_are_hexagons() {
        let o = ConeSpec::orthant(3).unwrap();
        let ball = hilbert_ball(&o, &o.base_point(), 1.0, 720).unwrap();
        assert_eq!(corner_count(&ball, 0.3), 6);
        for p in &ball {
            assert!((hilbert(&o, &o.base_point(), p).unwrap() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn disk_balls_are_smooth() {
        let l = ConeSpec::lorentz(3).unwrap();
        let ball = hilbert_ball(&l, &l.base_point(), 1.0, 360).unwrap();
        assert_eq!(corner_count(&ball, 0.3), 0);
    }

    #[test]
    fn svg_document() {
        let o = ConeSpec::orthant(3).unwrap();
        let spec = PlotSpec {
            cone: o,
            centers: vec![vec![1.0, 1.0, 1.0]],
            radii: vec![],
            geodesics: vec![(vec![2.0, 0.5, 0.5], vec![0.5, 0.5, 2.0])],
            size: 300.0,
            resolution: 120,
        };
        let svg = render(&spec).unwrap();
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches("class=\"ball\"").count(), 3);
        assert_eq!(svg.matches("class=\"hit\"").count(), 2);
        assert!(render(&PlotSpec { cone: ConeSpec::orthant(2).unwrap(), ..spec }).is_err());
    }
}
