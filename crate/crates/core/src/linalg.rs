//! Small dense helpers on top of nalgebra.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

pub type Point = DVector<f64>;

/// Side length n of a symmetric matrix stored in a vector of length n(n+1)/2.
pub fn psd_side(len: usize) -> Option<usize> {
    let n = (((8 * len + 1) as f64).sqrt() as usize).saturating_sub(1) / 2;
    (n * (n + 1) / 2 == len).then_some(n)
}

/// Diagonal first, then the strict upper triangle row by row scaled by √2,
/// so the dot product of two vectors is tr(XY).
pub fn svec(m: &DMatrix<f64>) -> Point {
    let n = m.nrows();
    let mut out = Vec::with_capacity(n * (n + 1) / 2);
    for i in 0..n {
        out.push(m[(i, i)]);
    }
    for i in 0..n {
        for j in (i + 1)..n {
            out.push(std::f64::consts::SQRT_2 * 0.5 * (m[(i, j)] + m[(j, i)]));
        }
    }
    DVector::from_vec(out)
}

pub fn smat(v: &[f64], n: usize) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = v[i];
    }
    let mut k = n;
    for i in 0..n {
        for j in (i + 1)..n {
            let val = v[k] / std::f64::consts::SQRT_2;
            m[(i, j)] = val;
            m[(j, i)] = val;
            k += 1;
        }
    }
    m
}

pub fn sym_eigen(m: &DMatrix<f64>) -> SymmetricEigen<f64, nalgebra::Dyn> {
    let s = 0.5 * (m + m.transpose());
    SymmetricEigen::new(s)
}

pub fn min_eigenvalue(m: &DMatrix<f64>) -> f64 {
    sym_eigen(m).eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min)
}

pub fn max_eigenvalue(m: &DMatrix<f64>) -> f64 {
    sym_eigen(m).eigenvalues.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
}

/// Numerical rank with threshold relative to the largest singular value.
pub fn rank(m: &DMatrix<f64>, rel_tol: f64) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    let sv = m.clone().svd(false, false).singular_values;
    let top = sv.iter().cloned().fold(0.0, f64::max);
    if top == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > rel_tol * top).count()
}

/// Orthonormal basis (as columns) of the null space of `m`, which has `n` columns.
pub fn null_space(m: &DMatrix<f64>, n: usize, rel_tol: f64) -> DMatrix<f64> {
    if m.nrows() == 0 {
        return DMatrix::identity(n, n);
    }
    // pad to at least n rows so the SVD returns a full right factor
    let rows = m.nrows().max(n);
    let mut p = DMatrix::zeros(rows, n);
    p.rows_mut(0, m.nrows()).copy_from(m);
    let svd = p.svd(false, true);
    let vt = svd.v_t.expect("requested V^T");
    let top = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let cols: Vec<Point> = (0..n)
        .filter(|&i| svd.singular_values[i] <= rel_tol * top.max(1e-300))
        .map(|i| vt.row(i).transpose())
        .collect();
    columns(&cols, n)
}

/// Orthonormal basis of the column span of `m`.
pub fn col_span(m: &DMatrix<f64>, rel_tol: f64) -> DMatrix<f64> {
    let n = m.nrows();
    if m.ncols() == 0 {
        return DMatrix::zeros(n, 0);
    }
    let svd = m.clone().svd(true, false);
    let u = svd.u.expect("requested U");
    let top = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let cols: Vec<Point> = (0..svd.singular_values.len())
        .filter(|&i| top > 0.0 && svd.singular_values[i] > rel_tol * top)
        .map(|i| u.column(i).into_owned())
        .collect();
    columns(&cols, n)
}

/// Dimension of the intersection of two column spans.
pub fn intersection_dim(a: &DMatrix<f64>, b: &DMatrix<f64>, rel_tol: f64) -> usize {
    let ra = rank(a, rel_tol);
    let rb = rank(b, rel_tol);
    let joined = hcat(a, b);
    let rj = rank(&joined, rel_tol);
    (ra + rb).saturating_sub(rj)
}

pub fn hcat(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    let mut out = DMatrix::zeros(a.nrows(), a.ncols() + b.ncols());
    out.columns_mut(0, a.ncols()).copy_from(a);
    out.columns_mut(a.ncols(), b.ncols()).copy_from(b);
    out
}

pub fn columns(cols: &[Point], nrows: usize) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(nrows, cols.len());
    for (j, c) in cols.iter().enumerate() {
        m.set_column(j, c);
    }
    m
}

/// 2-norm condition number.
pub fn condition(m: &DMatrix<f64>) -> f64 {
    let sv = m.clone().svd(false, false).singular_values;
    let hi = sv.iter().cloned().fold(0.0, f64::max);
    let lo = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    if lo == 0.0 {
        f64::INFINITY
    } else {
        hi / lo
    }
}

/// Least squares solution of `a x = b` through SVD.
pub fn lstsq(a: &DMatrix<f64>, b: &Point) -> Option<Point> {
    let svd = a.clone().svd(true, true);
    let top = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    svd.solve(b, 1e-13 * top.max(1e-300)).ok()
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
}

/// Greedily picks vectors that raise the rank, until `n` are chosen.
pub fn greedy_basis(cands: &[Point], n: usize, rel_tol: f64) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::new();
    let mut cols: Vec<Point> = Vec::new();
    for (i, c) in cands.iter().enumerate() {
        if chosen.len() == n {
            break;
        }
        if c.norm() == 0.0 {
            continue;
        }
        cols.push(c.normalize());
        let m = columns(&cols, c.len());
        if rank(&m, rel_tol) == cols.len() {
            chosen.push(i);
        } else {
            cols.pop();
        }
    }
    chosen
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn svec_round_trip() {
        let m = DMatrix::from_row_slice(3, 3, &[2.0, 0.5, -1.0, 0.5, 3.0, 0.25, -1.0, 0.25, 1.0]);
        let v = svec(&m);
        assert_eq!(v.len(), 6);
        let back = smat(v.as_slice(), 3);
        assert!((back - &m).norm() < 1e-15);
        // trace inner product
        let tr = (&m * &m).trace();
        assert!((v.dot(&v) - tr).abs() < 1e-12);
    }

    #[test]
    fn identity_vectorization() {
        let v = svec(&DMatrix::identity(2, 2));
        assert_eq!(v.as_slice(), &[1.0, 1.0, 0.0]);
    }

    #[test]
    fn side_from_length() {
        assert_eq!(psd_side(1), Some(1));
        assert_eq!(psd_side(3), Some(2));
        assert_eq!(psd_side(10), Some(4));
        assert_eq!(psd_side(4), None);
    }

    #[test]
    fn null_space_of_row() {
        let m = DMatrix::from_row_slice(1, 3, &[1.0, 1.0, 0.0]);
        let ns = null_space(&m, 3, 1e-10);
        assert_eq!(ns.ncols(), 2);
        assert!((&m * &ns).norm() < 1e-12);
    }
}
