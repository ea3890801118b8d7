//! Small dense complex helpers: eigenvalues, spectral norm, determinant.

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;

/// Eigenvalues of a square complex matrix.
pub fn eigenvalues(m: &CMatrix) -> Vec<Complex64> {
    let n = m.nrows();
    match n {
        0 => vec![],
        1 => vec![m[(0, 0)]],
        2 => {
            let (a, b, c, d) = (m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]);
            let half_tr = (a + d) * 0.5;
            let disc = (((a - d) * 0.5).powi(2) + b * c).sqrt();
            vec![half_tr + disc, half_tr - disc]
        }
        _ => {
            if is_diagonal(m) {
                return m.diagonal().iter().copied().collect();
            }
            let schur = nalgebra::Schur::new(m.clone());
            let (_, t) = schur.unpack();
            t.diagonal().iter().copied().collect()
        }
    }
}

pub fn is_diagonal(m: &CMatrix) -> bool {
    let n = m.nrows();
    (0..n).all(|i| (0..n).all(|j| i == j || m[(i, j)] == Complex64::new(0.0, 0.0)))
}

/// Largest singular value.
pub fn spectral_norm(m: &CMatrix) -> f64 {
    if m.nrows() == 1 {
        return m[(0, 0)].norm();
    }
    if is_diagonal(m) {
        return m.diagonal().iter().map(|z| z.norm()).fold(0.0, f64::max);
    }
    m.clone()
        .svd(false, false)
        .singular_values
        .iter()
        .copied()
        .fold(0.0, f64::max)
}

/// `det(λ I − M)`.
pub fn char_det(lambda: Complex64, m: &CMatrix) -> Complex64 {
    let n = m.nrows();
    let shifted = CMatrix::identity(n, n) * lambda - m;
    shifted.determinant()
}
