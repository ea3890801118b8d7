//! Operator data: scale entries, validation and the cached `N₂` constant.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::ModelError;

/// Threshold below which `|det A(k)|` counts as singular.
pub const DET_THRESHOLD: f64 = 1e-12;
/// Joint-diagonalization residual tolerance.
pub const TAU_DIAG: f64 = 1e-8;
/// Orthogonality tolerance for the diagonalizer.
pub const TAU_ORTH: f64 = 1e-10;

/// An eigenvalue given exactly as `sign · base^(num/den)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExactPower {
    pub sign: i8,
    pub base: u64,
    pub num: i64,
    pub den: u64,
}

impl ExactPower {
    pub fn new(sign: i8, base: u64, num: i64, den: u64) -> Self {
        Self {
            sign,
            base,
            num,
            den,
        }
    }

    /// `base^1` with a positive sign.
    pub fn integer(base: u64) -> Self {
        Self::new(1, base, 1, 1)
    }

    /// `log |value|`.
    pub fn log_abs(&self) -> f64 {
        self.num as f64 / self.den as f64 * (self.base as f64).ln()
    }

    pub fn value(&self) -> f64 {
        f64::from(self.sign.signum()) * self.log_abs().exp()
    }

    pub fn is_well_formed(&self) -> bool {
        (self.sign == 1 || self.sign == -1) && self.base >= 2 && self.den >= 1
    }
}

/// One term `c(k) f(A(k) x)` of a discrete Hausdorff operator.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaleEntry {
    pub index: i64,
    pub coefficient: Complex64,
    pub matrix: DMatrix<f64>,
    pub exact_eigenvalues: Option<Vec<ExactPower>>,
}

impl ScaleEntry {
    pub fn new(index: i64, coefficient: Complex64, matrix: DMatrix<f64>) -> Self {
        Self {
            index,
            coefficient,
            matrix,
            exact_eigenvalues: None,
        }
    }

    /// Entry `c · f(a x)` in dimension `d`, i.e. `A(k) = a·I_d`.
    pub fn scalar(index: i64, coefficient: Complex64, a: f64, d: usize) -> Self {
        Self::new(index, coefficient, DMatrix::identity(d, d) * a)
    }

    /// Entry with a diagonal matrix.
    pub fn diagonal(index: i64, coefficient: Complex64, diag: &[f64]) -> Self {
        Self::new(
            index,
            coefficient,
            DMatrix::from_diagonal(&nalgebra::DVector::from_row_slice(diag)),
        )
    }

    pub fn with_exact(mut self, exact: Vec<ExactPower>) -> Self {
        self.exact_eigenvalues = Some(exact);
        self
    }

    pub fn abs_det(&self) -> f64 {
        self.matrix.determinant().abs()
    }

    /// `c(k) / sqrt|det A(k)|`, the weight carried into every symbol.
    pub fn symbol_weight(&self) -> Complex64 {
        self.coefficient / self.abs_det().sqrt()
    }
}

/// A validated finite family `{(k, c(k), A(k))}` of commuting symmetric matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorSpec {
    dimension: usize,
    entries: Vec<ScaleEntry>,
    n2: f64,
}

impl OperatorSpec {
    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// Entries sorted by ascending index `k`.
    pub fn entries(&self) -> &[ScaleEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Cached `N₂(c, A) = Σ |c(k)| |det A(k)|^{-1/2}`.
    pub fn n2(&self) -> f64 {
        self.n2
    }

    /// `Σ |c(k)| |det A(k)|^{-1/p}`; `p = ∞` drops the determinant factor.
    pub fn n_p(&self, p: f64) -> f64 {
        let exponent = if p.is_infinite() { 0.0 } else { -1.0 / p };
        self.entries
            .iter()
            .map(|e| e.coefficient.norm() * e.abs_det().powf(exponent))
            .sum()
    }

    pub fn weights(&self) -> Vec<Complex64> {
        self.entries.iter().map(ScaleEntry::symbol_weight).collect()
    }

    /// Largest absolute matrix entry over the family.
    pub fn max_abs_entry(&self) -> f64 {
        self.entries
            .iter()
            .flat_map(|e| e.matrix.iter())
            .fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    /// Symmetry and commutation tolerance `1e-10 · (1 + max ‖A‖_max)`.
    pub fn structure_tolerance(&self) -> f64 {
        structure_tolerance(&self.entries)
    }

    /// True when every `A(k)` is a multiple of the identity.
    pub fn is_scalar_dilation(&self) -> bool {
        let tol = self.structure_tolerance();
        self.entries.iter().all(|e| scalar_factor(&e.matrix, tol).is_some())
    }

    /// The scalar `a(k)` of each entry when the family is of scalar-dilation form.
    pub fn scalar_factors(&self) -> Option<Vec<f64>> {
        let tol = self.structure_tolerance();
        self.entries
            .iter()
            .map(|e| scalar_factor(&e.matrix, tol))
            .collect()
    }

    /// The truncation `H^{(n)}`: entries with `|k| ≤ n`.
    pub fn truncate(&self, n: u64) -> Result<OperatorSpec, ModelError> {
        let kept: Vec<ScaleEntry> = self
            .entries
            .iter()
            .filter(|e| e.index.unsigned_abs() <= n)
            .cloned()
            .collect();
        validate_spec(self.dimension, kept)
    }

    /// Copy with entries of zero coefficient removed; `None` if nothing remains.
    pub fn without_zero_terms(&self) -> Option<OperatorSpec> {
        let kept: Vec<ScaleEntry> = self
            .entries
            .iter()
            .filter(|e| e.coefficient.norm() > 0.0)
            .cloned()
            .collect();
        validate_spec(self.dimension, kept).ok()
    }

    pub fn max_abs_index(&self) -> u64 {
        self.entries
            .iter()
            .map(|e| e.index.unsigned_abs())
            .max()
            .unwrap_or(0)
    }
}

fn structure_tolerance(entries: &[ScaleEntry]) -> f64 {
    let max = entries
        .iter()
        .flat_map(|e| e.matrix.iter())
        .fold(0.0_f64, |m, v| m.max(v.abs()));
    1e-10 * (1.0 + max)
}

pub(crate) fn scalar_factor(m: &DMatrix<f64>, tol: f64) -> Option<f64> {
    let d = m.nrows();
    let a = m.trace() / d as f64;
    let dev = (m - DMatrix::identity(d, d) * a).amax();
    (dev <= tol).then_some(a)
}

fn max_abs_diff(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    (a - b).amax()
}

/// Validates raw operator data and caches `N₂`.
pub fn validate_spec(dimension: usize, entries: Vec<ScaleEntry>) -> Result<OperatorSpec, ModelError> {
    if dimension == 0 {
        return Err(ModelError::ZeroDimension);
    }
    if entries.is_empty() {
        return Err(ModelError::EmptySpec);
    }
    let mut entries = entries;
    entries.sort_by_key(|e| e.index);

    for w in entries.windows(2) {
        if w[0].index == w[1].index {
            return Err(ModelError::DuplicateIndex(w[0].index));
        }
    }
    for e in &entries {
        if e.matrix.nrows() != dimension || e.matrix.ncols() != dimension {
            return Err(ModelError::ShapeMismatch {
                index: e.index,
                rows: e.matrix.nrows(),
                cols: e.matrix.ncols(),
                dimension,
            });
        }
        if !e.coefficient.re.is_finite()
            || !e.coefficient.im.is_finite()
            || e.matrix.iter().any(|v| !v.is_finite())
        {
            return Err(ModelError::NonFinite(e.index));
        }
    }

    let tol = structure_tolerance(&entries);
    for e in &entries {
        let det = e.matrix.determinant();
        if det.abs() <= DET_THRESHOLD {
            return Err(ModelError::NonInvertible { index: e.index, det });
        }
        let asym = max_abs_diff(&e.matrix, &e.matrix.transpose());
        if asym > tol {
            return Err(ModelError::NonSymmetric {
                index: e.index,
                asymmetry: asym,
            });
        }
    }
    for (i, a) in entries.iter().enumerate() {
        for b in &entries[i + 1..] {
            let comm = (&a.matrix * &b.matrix - &b.matrix * &a.matrix).amax();
            if comm > tol {
                return Err(ModelError::NonCommuting {
                    first: a.index,
                    second: b.index,
                    norm: comm,
                });
            }
            if max_abs_diff(&a.matrix, &b.matrix) <= tol {
                return Err(ModelError::DuplicateMatrix {
                    first: a.index,
                    second: b.index,
                });
            }
        }
    }
    for e in &entries {
        if let Some(exact) = &e.exact_eigenvalues {
            check_exact(e, exact, dimension)?;
        }
    }

    let n2 = entries
        .iter()
        .map(|e| e.coefficient.norm() / e.abs_det().sqrt())
        .sum();
    Ok(OperatorSpec {
        dimension,
        entries,
        n2,
    })
}

fn check_exact(e: &ScaleEntry, exact: &[ExactPower], d: usize) -> Result<(), ModelError> {
    if exact.len() != d || exact.iter().any(|x| !x.is_well_formed()) {
        return Err(ModelError::ExactMismatch { index: e.index });
    }
    let sym = (&e.matrix + e.matrix.transpose()) * 0.5;
    let mut numeric: Vec<f64> = SymmetricEigen::new(sym).eigenvalues.iter().copied().collect();
    let mut given: Vec<f64> = exact.iter().map(ExactPower::value).collect();
    numeric.sort_by(f64::total_cmp);
    given.sort_by(f64::total_cmp);
    let scale = 1.0 + e.matrix.amax();
    let tau_eig = 1e-9 * scale;
    if numeric
        .iter()
        .zip(&given)
        .any(|(a, b)| (a - b).abs() > tau_eig)
    {
        return Err(ModelError::ExactMismatch { index: e.index });
    }
    Ok(())
}
