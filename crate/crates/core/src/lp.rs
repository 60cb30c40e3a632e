//! Thin wrapper over microlp for the few small LPs the cone code needs.

use microlp::{ComparisonOp, OptimizationDirection, Problem};
use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::linalg::{lstsq, Point};

#[derive(Debug, Clone)]
pub enum LpOutcome {
    Optimal { x: Vec<f64>, value: f64 },
    Infeasible,
    Unbounded,
}

pub enum Cmp {
    Eq,
    Le,
    Ge,
}

/// Minimize `c·x` subject to bounds and dense rows.
pub fn minimize(c: &[f64], bounds: &[(f64, f64)], rows: &[(Vec<f64>, Cmp, f64)]) -> Result<LpOutcome> {
    let mut p = Problem::new(OptimizationDirection::Minimize);
    let vars: Vec<_> = c.iter().zip(bounds).map(|(&ci, &b)| p.add_var(ci, b)).collect();
    for (row, cmp, rhs) in rows {
        let terms: Vec<_> = row
            .iter()
            .enumerate()
            .filter(|(_, &a)| a != 0.0)
            .map(|(j, &a)| (vars[j], a))
            .collect();
        let op = match cmp {
            Cmp::Eq => ComparisonOp::Eq,
            Cmp::Le => ComparisonOp::Le,
            Cmp::Ge => ComparisonOp::Ge,
        };
        p.add_constraint(terms.as_slice(), op, *rhs);
    }
    match p.solve() {
        Ok(out) => {
            let sol = out
                .into_solution()
                .map_err(|_| Error::Lp("solver interrupted".into()))?;
            let x = vars.iter().map(|&v| sol.var_value_raw(v)).collect();
            Ok(LpOutcome::Optimal { x, value: sol.objective() })
        }
        Err(microlp::Error::Infeasible) => Ok(LpOutcome::Infeasible),
        Err(microlp::Error::Unbounded) => Ok(LpOutcome::Unbounded),
        Err(e) => Err(Error::Lp(e.to_string())),
    }
}

/// min s subject to s·dir − G μ = rhs, μ ≥ 0, s free. Columns of `g` are the
/// generators. Returns +∞ when infeasible.
///
/// The LP answer is polished by re-solving the equality system on the
/// support of μ, which recovers nearly full double precision.
pub fn min_shift(g: &DMatrix<f64>, dir: &Point, rhs: &Point) -> Result<f64> {
    let n = g.nrows();
    let m = g.ncols();
    let scale = g.column_iter().map(|c| c.norm()).fold(0.0, f64::max).max(1.0);
    let mut c = vec![0.0; m + 1];
    c[0] = 1.0;
    let mut bounds = vec![(0.0, f64::INFINITY); m + 1];
    bounds[0] = (f64::NEG_INFINITY, f64::INFINITY);
    let rows: Vec<_> = (0..n)
        .map(|i| {
            let mut r = vec![0.0; m + 1];
            r[0] = dir[i];
            for j in 0..m {
                r[j + 1] = -g[(i, j)] / scale;
            }
            (r, Cmp::Eq, rhs[i])
        })
        .collect();
    match minimize(&c, &bounds, &rows)? {
        LpOutcome::Infeasible => Ok(f64::INFINITY),
        LpOutcome::Unbounded => Ok(f64::NEG_INFINITY),
        LpOutcome::Optimal { x, value } => Ok(polish(g, dir, rhs, &x, scale).unwrap_or(value)),
    }
}

fn polish(g: &DMatrix<f64>, dir: &Point, rhs: &Point, x: &[f64], scale: f64) -> Option<f64> {
    let n = g.nrows();
    let top = x[1..].iter().cloned().fold(0.0, f64::max);
    let support: Vec<usize> = (0..g.ncols()).filter(|&j| x[j + 1] > 1e-9 * top.max(1e-12)).collect();
    if support.len() + 1 > n {
        return None;
    }
    let mut a = DMatrix::zeros(n, support.len() + 1);
    a.set_column(0, dir);
    for (k, &j) in support.iter().enumerate() {
        a.set_column(k + 1, &(-g.column(j) / scale));
    }
    let sol = lstsq(&a, rhs)?;
    let resid = (&a * &sol - rhs).norm();
    let ok = resid <= 1e-11 * (1.0 + rhs.norm()) && sol.iter().skip(1).all(|&v| v >= -1e-12);
    let s = sol[0];
    // the polished value must stay close to the LP optimum
    (ok && (s - x[0]).abs() <= 1e-6 * (1.0 + s.abs())).then_some(s)
}
