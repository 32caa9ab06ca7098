//! Thin dense complex linear algebra layer over `nalgebra`.

use nalgebra::{DMatrix, DVector};

use crate::C64;

pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

/// `<x, y>`, linear in the first argument.
pub fn inner(x: &CVector, y: &CVector) -> C64 {
    y.dotc(x)
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Largest entry modulus of a complex matrix.
pub trait MaxModulus {
    fn max_modulus(&self) -> f64;
}

impl MaxModulus for CMatrix {
    fn max_modulus(&self) -> f64 {
        max_abs(self)
    }
}

pub fn max_abs_slice(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Largest entry of `m - m^*` in absolute value.
pub fn hermitian_residual(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

pub fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()) * C64::new(0.5, 0.0)
}

/// Eigen-decomposition of the Hermitian part of `m`, eigenvalues ascending
/// with eigenvectors as the matching columns.
pub fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let n = m.nrows();
    if n == 0 {
        return (Vec::new(), CMatrix::zeros(0, 0));
    }
    let eig = hermitian_part(m).symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

pub fn min_eigenvalue(m: &CMatrix) -> f64 {
    hermitian_eigen(m).0.first().copied().unwrap_or(0.0)
}

/// Singular values in descending order.
pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut sv: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

pub fn operator_norm(m: &CMatrix) -> f64 {
    singular_values(m).first().copied().unwrap_or(0.0)
}

pub fn trace_norm(m: &CMatrix) -> f64 {
    singular_values(m).iter().sum()
}

/// Numerical rank with singular values below `rel * largest` treated as zero.
pub fn rank(m: &CMatrix, rel: f64) -> usize {
    let sv = singular_values(m);
    match sv.first() {
        Some(&top) if top > 0.0 => sv.iter().filter(|&&s| s > rel * top).count(),
        _ => 0,
    }
}

/// Orthonormal basis of the column space, by modified Gram-Schmidt over the
/// columns in their given order; columns whose residual falls below `tol` are
/// dropped. Deterministic for a given input.
pub fn orthonormal_columns(m: &CMatrix, tol: f64) -> CMatrix {
    let mut basis: Vec<CVector> = Vec::new();
    for j in 0..m.ncols() {
        let mut v = m.column(j).into_owned();
        for _ in 0..2 {
            for q in &basis {
                let proj = q.dotc(&v);
                v -= q * proj;
            }
        }
        let norm = v.norm();
        if norm > tol {
            basis.push(v / C64::new(norm, 0.0));
        }
    }
    if basis.is_empty() {
        return CMatrix::zeros(m.nrows(), 0);
    }
    CMatrix::from_columns(&basis)
}

/// Least-squares solution of `a x = b` through the SVD pseudo-inverse.
pub fn least_squares(a: &CMatrix, b: &CVector, rel: f64) -> CVector {
    if a.ncols() == 0 {
        return CVector::zeros(0);
    }
    let svd = a.clone().svd(true, true);
    let top = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let eps = (rel * top).max(f64::MIN_POSITIVE);
    svd.solve(b, eps).unwrap_or_else(|_| CVector::zeros(a.ncols()))
}

pub fn block_diagonal(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let mut out = CMatrix::zeros(a.nrows() + b.nrows(), a.ncols() + b.ncols());
    out.view_mut((0, 0), (a.nrows(), a.ncols())).copy_from(a);
    out.view_mut((a.nrows(), a.ncols()), (b.nrows(), b.ncols()))
        .copy_from(b);
    out
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

pub fn vector(values: &[C64]) -> CVector {
    CVector::from_column_slice(values)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn swap_plus_identity_has_norm_two() {
        let m = CMatrix::from_row_slice(2, 2, &[c(1.0), c(1.0), c(1.0), c(1.0)]);
        assert!((operator_norm(&m) - 2.0).abs() < 1e-12);
        assert!((trace_norm(&m) - 2.0).abs() < 1e-12);
        let (vals, _) = hermitian_eigen(&m);
        assert!(vals[0].abs() < 1e-12 && (vals[1] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn gram_schmidt_drops_dependent_columns() {
        let m = CMatrix::from_row_slice(
            3,
            3,
            &[c(1.0), c(2.0), c(0.0), c(0.0), c(0.0), c(1.0), c(0.0), c(0.0), c(0.0)],
        );
        let q = orthonormal_columns(&m, 1e-12);
        assert_eq!(q.ncols(), 2);
        let gram = q.adjoint() * &q;
        assert!((gram - CMatrix::identity(2, 2)).norm() < 1e-12);
    }

    #[test]
    fn empty_matrices_have_zero_norm() {
        assert_eq!(operator_norm(&CMatrix::zeros(0, 0)), 0.0);
        assert_eq!(rank(&CMatrix::zeros(3, 3), 1e-10), 0);
    }
}
