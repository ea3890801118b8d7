//! Simultaneous diagonalization of a commuting family of symmetric matrices.
//!
//! The family is seeded with the eigenbasis of a randomly weighted sum
//! `Σ w_k A(k)` and then polished by Jacobi sweeps that minimise the total
//! off-diagonal mass of all matrices at once. Each plane rotation is the
//! closed-form minimiser for the pair `(p, q)`: with
//! `h_k = (b_pp − b_qq, 2 b_pq)` the rotated off-diagonal entry is
//! `½ (−sin 2θ, cos 2θ)·h_k`, so the optimal angle comes from the minor
//! eigenvector of `Σ h_k h_kᵀ`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::spec::{OperatorSpec, TAU_DIAG, TAU_ORTH};
use super::ModelError;

const MAX_SWEEPS: usize = 60;
const MAX_RESTARTS: u64 = 6;
/// Relative tie width used when ordering columns.
const TIE: f64 = 1e-9;

/// Orthogonal `C` with `Cᵀ A(k) C = diag(a(k))` for every entry.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalizedFamily {
    diagonalizer: DMatrix<f64>,
    eigen_tuples: Vec<DVector<f64>>,
    sign_patterns: Vec<Vec<i8>>,
    residual: f64,
}

impl DiagonalizedFamily {
    pub fn diagonalizer(&self) -> &DMatrix<f64> {
        &self.diagonalizer
    }

    /// `a(k)` per entry, in the entry order of the spec.
    pub fn eigen_tuples(&self) -> &[DVector<f64>] {
        &self.eigen_tuples
    }

    pub fn sign_patterns(&self) -> &[Vec<i8>] {
        &self.sign_patterns
    }

    /// Largest off-diagonal entry of any `Cᵀ A(k) C`.
    pub fn residual(&self) -> f64 {
        self.residual
    }

    pub fn dimension(&self) -> usize {
        self.diagonalizer.nrows()
    }

    /// `log |a_ν(k)|` for each entry.
    pub fn log_abs(&self) -> Vec<Vec<f64>> {
        self.eigen_tuples
            .iter()
            .map(|a| a.iter().map(|v| v.abs().ln()).collect())
            .collect()
    }

    /// `C · diag(a(k)) · Cᵀ`.
    pub fn reconstruct(&self, entry: usize) -> DMatrix<f64> {
        let c = &self.diagonalizer;
        c * DMatrix::from_diagonal(&self.eigen_tuples[entry]) * c.transpose()
    }
}

/// Jointly diagonalizes the (validated, commuting) family.
pub fn simultaneous_diagonalize(spec: &OperatorSpec) -> Result<DiagonalizedFamily, ModelError> {
    let mats: Vec<DMatrix<f64>> = spec
        .entries()
        .iter()
        .map(|e| (&e.matrix + e.matrix.transpose()) * 0.5)
        .collect();
    let d = spec.dimension();

    let mut best = f64::INFINITY;
    for attempt in 0..MAX_RESTARTS {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0000 + attempt);
        let weights: Vec<f64> = mats.iter().map(|_| rng.gen_range(0.5..1.5)).collect();
        let (c, residual) = joint_jacobi(&mats, &weights, d);
        best = best.min(residual);
        if residual <= TAU_DIAG && orthogonality_defect(&c) <= TAU_ORTH {
            return Ok(finish(c, &mats));
        }
    }
    Err(ModelError::DegenerateFamily { residual: best })
}

fn orthogonality_defect(c: &DMatrix<f64>) -> f64 {
    let n = c.ncols();
    (c.transpose() * c - DMatrix::identity(n, n)).amax()
}

fn off_diagonal_max(m: &DMatrix<f64>) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                worst = worst.max(m[(i, j)].abs());
            }
        }
    }
    worst
}

fn joint_jacobi(mats: &[DMatrix<f64>], weights: &[f64], d: usize) -> (DMatrix<f64>, f64) {
    let mut seed = DMatrix::zeros(d, d);
    for (m, w) in mats.iter().zip(weights) {
        seed += m * *w;
    }
    let mut c = SymmetricEigen::new(seed).eigenvectors;
    let mut work: Vec<DMatrix<f64>> = mats.iter().map(|m| c.transpose() * m * &c).collect();

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..d {
            for q in p + 1..d {
                let (mut g11, mut g12, mut g22) = (0.0, 0.0, 0.0);
                for b in &work {
                    let h0 = b[(p, p)] - b[(q, q)];
                    let h1 = 2.0 * b[(p, q)];
                    g11 += h0 * h0;
                    g12 += h0 * h1;
                    g22 += h1 * h1;
                }
                let phi = 0.5 * (2.0 * g12).atan2(g11 - g22);
                // minor eigenvector of G is (−sin 2θ, cos 2θ)
                let (mut x, mut y) = (-phi.sin(), phi.cos());
                if y < 0.0 {
                    x = -x;
                    y = -y;
                }
                let theta = 0.5 * (-x).atan2(y);
                let (s, cs) = theta.sin_cos();
                if s.abs() < 1e-16 {
                    continue;
                }
                rotated = true;
                for b in work.iter_mut() {
                    rotate(b, p, q, cs, s);
                }
                for i in 0..d {
                    let cp = c[(i, p)];
                    let cq = c[(i, q)];
                    c[(i, p)] = cs * cp + s * cq;
                    c[(i, q)] = -s * cp + cs * cq;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let residual = mats
        .iter()
        .map(|m| off_diagonal_max(&(c.transpose() * m * &c)))
        .fold(0.0, f64::max);
    (c, residual)
}

/// `B ← Rᵀ B R` for the plane rotation with `R_pp = R_qq = c`, `R_qp = s`, `R_pq = −s`.
fn rotate(b: &mut DMatrix<f64>, p: usize, q: usize, c: f64, s: f64) {
    let n = b.nrows();
    for i in 0..n {
        let bp = b[(i, p)];
        let bq = b[(i, q)];
        b[(i, p)] = c * bp + s * bq;
        b[(i, q)] = -s * bp + c * bq;
    }
    for j in 0..n {
        let bp = b[(p, j)];
        let bq = b[(q, j)];
        b[(p, j)] = c * bp + s * bq;
        b[(q, j)] = -s * bp + c * bq;
    }
}

/// Canonical column order and signs, then eigen tuples from the final basis.
///
/// Columns are ordered by the row of their dominant component (so a family of
/// diagonal matrices yields `C = I`), ties by ascending eigenvalue sequence
/// over the entries in ascending `k`. Each column's dominant component is made
/// positive.
fn finish(mut c: DMatrix<f64>, mats: &[DMatrix<f64>]) -> DiagonalizedFamily {
    let d = c.ncols();
    for j in 0..d {
        let col = c.column(j);
        let top = col.amax();
        let lead = (0..d).find(|&i| col[i].abs() >= top * (1.0 - TIE)).unwrap_or(0);
        if col[lead] < 0.0 {
            c.column_mut(j).neg_mut();
        }
    }
    let diag_of = |c: &DMatrix<f64>, j: usize| -> Vec<f64> {
        let v = c.column(j);
        mats.iter().map(|m| (v.transpose() * m * v)[(0, 0)]).collect()
    };
    let mut keys: Vec<(usize, Vec<f64>, usize)> = (0..d)
        .map(|j| {
            let col = c.column(j);
            let top = col.amax();
            let lead = (0..d).find(|&i| col[i].abs() >= top * (1.0 - TIE)).unwrap_or(0);
            (lead, diag_of(&c, j), j)
        })
        .collect();
    keys.sort_by(|a, b| {
        a.0.cmp(&b.0).then_with(|| {
            for (x, y) in a.1.iter().zip(&b.1) {
                let scale = 1.0 + x.abs().max(y.abs());
                if (x - y).abs() > TIE * scale {
                    return x.total_cmp(y);
                }
            }
            a.2.cmp(&b.2)
        })
    });
    let order: Vec<usize> = keys.iter().map(|k| k.2).collect();
    let c = DMatrix::from_fn(d, d, |i, j| c[(i, order[j])]);

    let mut residual = 0.0_f64;
    let mut eigen_tuples = Vec::with_capacity(mats.len());
    for m in mats {
        let b = c.transpose() * m * &c;
        residual = residual.max(off_diagonal_max(&b));
        eigen_tuples.push(b.diagonal());
    }
    let sign_patterns = eigen_tuples
        .iter()
        .map(|a| a.iter().map(|v| if *v < 0.0 { -1 } else { 1 }).collect())
        .collect();
    DiagonalizedFamily {
        diagonalizer: c,
        eigen_tuples,
        sign_patterns,
        residual,
    }
}
