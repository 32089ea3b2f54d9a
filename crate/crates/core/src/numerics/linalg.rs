//! Small dense linear algebra: symmetric eigensolver, Gram-Schmidt,
//! inverse/determinant/trace with explicit singularity reporting.

use nalgebra::{DMatrix, DVector};

use crate::error::{GeomError, Result};

pub type Mat = DMatrix<f64>;
pub type Vector = DVector<f64>;

const JACOBI_MAX_SWEEPS: usize = 100;

/// Largest absolute entry.
pub fn max_abs(m: &Mat) -> f64 {
    m.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()))
}

pub fn asymmetry(m: &Mat) -> f64 {
    let mut worst = 0.0_f64;
    for i in 0..m.nrows() {
        for j in (i + 1)..m.ncols() {
            worst = worst.max((m[(i, j)] - m[(j, i)]).abs());
        }
    }
    worst
}

/// Builds a symmetric matrix from its upper triangle (mirror storage).
pub fn symmetric_from_upper(m: &Mat) -> Mat {
    let mut out = m.clone();
    for i in 0..m.nrows() {
        for j in 0..i {
            out[(i, j)] = m[(j, i)];
        }
    }
    out
}

/// Symmetric eigendecomposition by cyclic Jacobi rotations.
///
/// Returns eigenvalues in descending order and the matching orthonormal
/// eigenvectors as columns.
pub fn sym_eig(s: &Mat) -> Result<(Vec<f64>, Mat)> {
    let n = s.nrows();
    if s.ncols() != n {
        return Err(GeomError::DimensionMismatch(format!(
            "sym_eig needs a square matrix, got {}x{}",
            n,
            s.ncols()
        )));
    }
    if s.iter().any(|v| !v.is_finite()) {
        return Err(GeomError::contract("sym_eig input has non-finite entries"));
    }
    let scale = max_abs(s).max(1.0);
    let asym = asymmetry(s);
    if asym > 1e-9 * scale {
        return Err(GeomError::NotSymmetric { asymmetry: asym });
    }
    let mut a = symmetric_from_upper(s);
    let mut v = Mat::identity(n, n);

    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[(p, q)] * a[(p, q)];
            }
        }
        if off.sqrt() <= 1e-14 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq.abs() < f64::MIN_POSITIVE {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - sn * akq;
                    a[(k, q)] = sn * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - sn * aqk;
                    a[(q, k)] = sn * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - sn * vkq;
                    v[(k, q)] = sn * vkp + c * vkq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].total_cmp(&a[(i, i)]));
    let values = order.iter().map(|&i| a[(i, i)]).collect();
    let mut vectors = Mat::zeros(n, n);
    for (col, &i) in order.iter().enumerate() {
        vectors.set_column(col, &v.column(i));
    }
    Ok((values, vectors))
}

/// Modified Gram-Schmidt with re-orthogonalisation. Vectors whose residual
/// norm falls below `tol` are dropped.
pub fn gram_schmidt(vectors: &[Vector], tol: f64) -> Vec<Vector> {
    let mut out: Vec<Vector> = Vec::with_capacity(vectors.len());
    for v in vectors {
        let mut w = v.clone();
        for _ in 0..2 {
            for q in &out {
                let c = q.dot(&w);
                w.axpy(-c, q, 1.0);
            }
        }
        let norm = w.norm();
        if norm >= tol {
            out.push(w / norm);
        }
    }
    out
}

pub fn trace(m: &Mat) -> f64 {
    m.diagonal().sum()
}

pub fn det(m: &Mat) -> f64 {
    if m.nrows() == 0 {
        return 1.0;
    }
    m.clone().lu().determinant()
}

/// Inverse with a determinant guard relative to the matrix scale.
pub fn inv(m: &Mat) -> Result<Mat> {
    let n = m.nrows();
    if m.ncols() != n {
        return Err(GeomError::DimensionMismatch(format!(
            "inverse of non-square {}x{} matrix",
            n,
            m.ncols()
        )));
    }
    if n == 0 {
        return Ok(Mat::zeros(0, 0));
    }
    let d = det(m);
    let scale = max_abs(m).max(f64::MIN_POSITIVE).powi(n as i32);
    if !d.is_finite() || d.abs() <= 1e-12 * scale.max(1e-300) {
        return Err(GeomError::SingularMatrix { det: d });
    }
    m.clone()
        .lu()
        .try_inverse()
        .ok_or(GeomError::SingularMatrix { det: d })
}

/// Random symmetric matrix with entries uniform in `[-scale, scale]`.
pub fn random_symmetric<R: rand::Rng>(rng: &mut R, n: usize, scale: f64) -> Mat {
    let mut m = Mat::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = rng.random_range(-scale..=scale);
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    m
}

/// Random rotation (orthogonal, det +1) from Gram-Schmidt of a uniform
/// random matrix.
pub fn random_rotation<R: rand::Rng>(rng: &mut R, n: usize) -> Mat {
    loop {
        let cols: Vec<Vector> = (0..n)
            .map(|_| Vector::from_fn(n, |_, _| rng.random_range(-1.0..=1.0)))
            .collect();
        let q = gram_schmidt(&cols, 1e-3);
        if q.len() == n {
            let mut m = columns(&q, n);
            if det(&m) < 0.0 {
                let c0 = -m.column(0).clone_owned();
                m.set_column(0, &c0);
            }
            return m;
        }
    }
}

/// Matrix whose columns are the given vectors.
pub fn columns(vectors: &[Vector], rows: usize) -> Mat {
    let mut m = Mat::zeros(rows, vectors.len());
    for (j, v) in vectors.iter().enumerate() {
        m.set_column(j, v);
    }
    m
}

/// Number of singular values above `rel_cutoff * sigma_max` of the
/// centered point cloud, i.e. the dimension of its affine hull.
pub fn affine_rank(points: &[Vector], rel_cutoff: f64) -> usize {
    if points.len() < 2 {
        return 0;
    }
    let n = points[0].len();
    let count = points.len() as f64;
    let mut centroid = Vector::zeros(n);
    for p in points {
        centroid += p;
    }
    centroid /= count;
    let mut m = Mat::zeros(n, points.len());
    for (j, p) in points.iter().enumerate() {
        m.set_column(j, &(p - &centroid));
    }
    let sv = m.singular_values();
    let smax = sv.iter().cloned().fold(0.0_f64, f64::max);
    if smax == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > rel_cutoff * smax).count()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_eigenvalues() {
        let (vals, vecs) = sym_eig(&Mat::identity(3, 3)).unwrap();
        assert_eq!(vals, vec![1.0, 1.0, 1.0]);
        assert!((vecs.transpose() * &vecs - Mat::identity(3, 3)).norm() < 1e-14);
    }

    #[test]
    fn diagonal_eigenvalues_descending() {
        let s = Mat::from_row_slice(2, 2, &[-1.0, 0.0, 0.0, 2.0]);
        let (vals, vecs) = sym_eig(&s).unwrap();
        assert_eq!(vals, vec![2.0, -1.0]);
        assert!((vecs[(1, 0)].abs() - 1.0).abs() < 1e-15);
        assert!((vecs[(0, 1)].abs() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn non_symmetric_rejected() {
        let s = Mat::from_row_slice(2, 2, &[1.0, 2.0, 0.0, 1.0]);
        assert!(matches!(sym_eig(&s), Err(GeomError::NotSymmetric { .. })));
    }

    #[test]
    fn gram_schmidt_basic() {
        let e: Vec<Vector> = (0..3)
            .map(|i| Vector::from_fn(3, |r, _| if r == i { 1.0 } else { 0.0 }))
            .collect();
        let out = gram_schmidt(&e, 1e-12);
        for (a, b) in out.iter().zip(&e) {
            assert!((a - b).norm() < 1e-15);
        }
        let pair = [
            Vector::from_vec(vec![1.0, 1.0, 0.0]),
            Vector::from_vec(vec![1.0, 0.0, 0.0]),
        ];
        let out = gram_schmidt(&pair, 1e-12);
        assert_eq!(out.len(), 2);
        assert!(out[0].dot(&out[1]).abs() < 1e-15);
        assert!(out.iter().all(|v| v[2] == 0.0));
    }

    #[test]
    fn inverse_and_trace() {
        let i = Mat::identity(4, 4);
        assert_eq!(inv(&i).unwrap(), i);
        assert_eq!(trace(&i), 4.0);
        let d = Mat::from_diagonal(&Vector::from_vec(vec![2.0, 4.0]));
        let di = inv(&d).unwrap();
        assert!((di[(0, 0)] - 0.5).abs() < 1e-15);
        assert!((di[(1, 1)] - 0.25).abs() < 1e-15);
    }

    #[test]
    fn singular_reports_det() {
        let s = Mat::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 4.0]);
        match inv(&s) {
            Err(GeomError::SingularMatrix { det }) => assert!(det.abs() < 1e-12),
            other => panic!("expected singular, got {other:?}"),
        }
    }

    #[test]
    fn affine_rank_of_plane() {
        let pts: Vec<Vector> = (0..20)
            .map(|i| {
                let a = i as f64 * 0.37;
                let b = (i * i) as f64 * 0.11;
                Vector::from_vec(vec![a, b, 2.0 * a - b + 1.0])
            })
            .collect();
        assert_eq!(affine_rank(&pts, 1e-8), 2);
    }
}
