//! Scalar, conjugate scalar and matrix symbols of a discrete Hausdorff operator.
//!
//! Every symbol is a finite exponential sum over the entries with weights
//! `w_k = c(k)/√|det A(k)|` and phases `e^{−i s·log|a(k)|}`. The torus
//! substitution used by the spectral sampler replaces each phase by a free
//! unimodular variable `t_k`, so all evaluators here take phases, and the
//! frequency-domain entry points just compute the phases first.

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::linalg::{spectral_norm, CMatrix};
use crate::model::{
    build_omega, simultaneous_diagonalize, DiagonalizedFamily, EntryFamily, ModelError, OctantScheme, Omega,
    OperatorSpec,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SymbolError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("operator is not of scalar-dilation form A(k) = a(k) I")]
    NotScalarDilation,
    #[error("frequency has {got} coordinates, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },
}

/// Precomputed per-entry data from which every symbol is evaluated.
#[derive(Debug, Clone)]
pub struct SymbolData {
    dimension: usize,
    octants: OctantScheme,
    omega: Omega,
    indices: Vec<i64>,
    weights: Vec<Complex64>,
    log_abs: Vec<Vec<f64>>,
    eigen: Vec<Vec<f64>>,
    scalar_signs: Option<Vec<f64>>,
    n2: f64,
}

impl SymbolData {
    pub fn new(spec: &OperatorSpec, diag: &DiagonalizedFamily, octants: OctantScheme) -> Self {
        let omega = build_omega(diag, &octants);
        let scalar_signs = spec
            .scalar_factors()
            .map(|a| a.iter().map(|v| v.signum()).collect());
        Self {
            dimension: spec.dimension(),
            octants,
            omega,
            indices: spec.entries().iter().map(|e| e.index).collect(),
            weights: spec.weights(),
            log_abs: diag.log_abs(),
            eigen: diag
                .eigen_tuples()
                .iter()
                .map(|a| a.iter().copied().collect())
                .collect(),
            scalar_signs,
            n2: spec.n2(),
        }
    }

    /// Diagonalizes the family and uses the standard octant enumeration.
    pub fn from_spec(spec: &OperatorSpec) -> Result<Self, ModelError> {
        let diag = simultaneous_diagonalize(spec)?;
        Ok(Self::new(spec, &diag, OctantScheme::standard(spec.dimension())))
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// Matrix size `2ᵈ`.
    pub fn size(&self) -> usize {
        self.omega.size()
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn n2(&self) -> f64 {
        self.n2
    }

    pub fn octants(&self) -> &OctantScheme {
        &self.octants
    }

    pub fn omega(&self) -> &Omega {
        &self.omega
    }

    pub fn indices(&self) -> &[i64] {
        &self.indices
    }

    /// `w_k = c(k)/√|det A(k)|`.
    pub fn weights(&self) -> &[Complex64] {
        &self.weights
    }

    /// `log|a(k)|` per entry (one value per eigen coordinate).
    pub fn log_abs(&self) -> &[Vec<f64>] {
        &self.log_abs
    }

    /// `a(k)` per entry.
    pub fn eigen_tuples(&self) -> &[Vec<f64>] {
        &self.eigen
    }

    pub fn is_scalar_dilation(&self) -> bool {
        self.scalar_signs.is_some()
    }

    /// True when no entry has a negative eigenvalue.
    pub fn is_positive_definite(&self) -> bool {
        self.eigen.iter().all(|a| a.iter().all(|v| *v > 0.0))
    }

    pub fn is_negative_definite(&self) -> bool {
        self.eigen.iter().all(|a| a.iter().all(|v| *v < 0.0))
    }

    /// Every `|a_ν(k)| = 1`: the symbol does not depend on `s`.
    pub fn has_constant_symbol(&self) -> bool {
        self.log_abs
            .iter()
            .zip(&self.weights)
            .all(|(l, w)| *w == Complex64::new(0.0, 0.0) || l.iter().all(|v| v.abs() < 1e-12))
    }

    /// Same data under another octant enumeration.
    pub fn with_octants(&self, octants: OctantScheme) -> Self {
        let patterns: Vec<Vec<i8>> = self
            .eigen
            .iter()
            .map(|a| a.iter().map(|v| if *v < 0.0 { -1 } else { 1 }).collect())
            .collect();
        let omega = crate::model::build_omega_from_patterns(&patterns, &octants);
        Self {
            octants,
            omega,
            ..self.clone()
        }
    }

    /// `Λ(s)_k = e^{−i s·log|a(k)|}`.
    pub fn phases(&self, s: &[f64]) -> Vec<Complex64> {
        self.log_abs
            .iter()
            .map(|l| {
                let theta: f64 = l.iter().zip(s).map(|(a, b)| a * b).sum();
                Complex64::from_polar(1.0, -theta)
            })
            .collect()
    }

    /// `Ξ(t)_{ij} = Σ_{k∈Ω_ij} w_k t_k`.
    pub fn matrix_from_phases(&self, t: &[Complex64]) -> CMatrix {
        let n = self.size();
        CMatrix::from_fn(n, n, |i, j| {
            self.omega
                .cell(i, j)
                .iter()
                .map(|&k| self.weights[k] * t[k])
                .sum()
        })
    }

    /// `Σ_k w_k t_k`.
    pub fn scalar_from_phases(&self, t: &[Complex64]) -> Complex64 {
        self.weights.iter().zip(t).map(|(w, z)| w * z).sum()
    }

    /// `Σ_k sgn(a(k)) w_k t_k` for scalar dilations.
    pub fn conjugate_from_phases(&self, t: &[Complex64]) -> Option<Complex64> {
        let signs = self.scalar_signs.as_ref()?;
        Some(
            self.weights
                .iter()
                .zip(t)
                .zip(signs)
                .map(|((w, z), sg)| w * z * *sg)
                .sum(),
        )
    }

    /// `(φ₊, φ₋)`: the parts of `φ` from entries with positive/negative `a(k)`.
    pub fn split_from_phases(&self, t: &[Complex64]) -> Option<(Complex64, Complex64)> {
        let signs = self.scalar_signs.as_ref()?;
        let mut plus = Complex64::new(0.0, 0.0);
        let mut minus = Complex64::new(0.0, 0.0);
        for ((w, z), sg) in self.weights.iter().zip(t).zip(signs) {
            if *sg > 0.0 {
                plus += w * z;
            } else {
                minus += w * z;
            }
        }
        Some((plus, minus))
    }

    fn check_frequency(&self, s: &[f64]) -> Result<(), SymbolError> {
        if s.len() != self.dimension {
            return Err(SymbolError::DimensionMismatch {
                expected: self.dimension,
                got: s.len(),
            });
        }
        Ok(())
    }
}

/// `Φ(s)` together with `φ(s)` and, for scalar dilations, `φ*(s)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SymbolEvaluation {
    pub frequency: Vec<f64>,
    #[serde(serialize_with = "serialize_matrix")]
    pub matrix: CMatrix,
    pub scalar: Option<Complex64>,
    pub conjugate_scalar: Option<Complex64>,
}

impl SymbolEvaluation {
    /// Spectral norm `‖Φ(s)‖`.
    pub fn norm(&self) -> f64 {
        spectral_norm(&self.matrix)
    }
}

fn serialize_matrix<S: serde::Serializer>(m: &CMatrix, ser: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = ser.serialize_seq(Some(m.nrows()))?;
    for i in 0..m.nrows() {
        let row: Vec<[f64; 2]> = (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect();
        seq.serialize_element(&row)?;
    }
    seq.end()
}

/// `‖R_n‖` upper bound for the truncation of order `n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TruncationBound {
    pub order: u64,
    pub bound: f64,
}

/// `N_p(c, A) = Σ |c(k)| |det A(k)|^{−1/p}`; pass `f64::INFINITY` for `p = ∞`.
pub fn norm_bound(spec: &OperatorSpec, p: f64) -> f64 {
    spec.n_p(p)
}

/// `φ(s) = Σ c(k)|det A(k)|^{−1/2} e^{−i s·log|a(k)|}`.
pub fn scalar_symbol(data: &SymbolData, s: &[f64]) -> Result<Complex64, SymbolError> {
    data.check_frequency(s)?;
    Ok(data.scalar_from_phases(&data.phases(s)))
}

/// `φ*(s)`, the scalar symbol with an extra `sgn(a(k))` per term.
pub fn conjugate_scalar_symbol(data: &SymbolData, s: &[f64]) -> Result<Complex64, SymbolError> {
    data.check_frequency(s)?;
    data.conjugate_from_phases(&data.phases(s))
        .ok_or(SymbolError::NotScalarDilation)
}

/// `Φ(s) = (φ_ij(s))`, the `2ᵈ × 2ᵈ` matrix symbol.
pub fn matrix_symbol(data: &SymbolData, s: &[f64]) -> Result<SymbolEvaluation, SymbolError> {
    data.check_frequency(s)?;
    let t = data.phases(s);
    Ok(SymbolEvaluation {
        frequency: s.to_vec(),
        matrix: data.matrix_from_phases(&t),
        scalar: Some(data.scalar_from_phases(&t)),
        conjugate_scalar: data.conjugate_from_phases(&t),
    })
}

/// Symbol of the truncation `H^{(n)}` (entries with `|k| ≤ n`).
pub fn truncated_symbol(family: &dyn EntryFamily, n: u64, s: &[f64]) -> Result<SymbolEvaluation, SymbolError> {
    let spec = family.truncation(n)?;
    let data = SymbolData::from_spec(&spec)?;
    matrix_symbol(&data, s)
}

/// `Σ_{|k|>n} |c(k)|/√|det A(k)|` from the family's tail formula.
pub fn tail_bound(family: &dyn EntryFamily, n: u64) -> Result<TruncationBound, SymbolError> {
    Ok(TruncationBound {
        order: n,
        bound: family.tail_bound(n)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::char_det;
    use crate::model::{validate_spec, GeometricPrimeFamily, ScaleEntry};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn re(v: f64) -> Complex64 {
        Complex64::new(v, 0.0)
    }

    fn scalar_spec(d: usize, terms: &[(f64, f64)]) -> OperatorSpec {
        validate_spec(
            d,
            terms
                .iter()
                .enumerate()
                .map(|(k, (c, a))| ScaleEntry::scalar(k as i64, re(*c), *a, d))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn norm_bound_examples() {
        let remark = scalar_spec(1, &[(1.0, 1.0), (1.0, 2.0)]);
        assert!((norm_bound(&remark, 2.0) - 1.707_106_781_186_547_5).abs() < 1e-15);
        assert_eq!(norm_bound(&remark, f64::INFINITY), 2.0);
        let single = scalar_spec(2, &[(3.0, 2.0)]);
        assert!((norm_bound(&single, 1.0) - 0.75).abs() < 1e-15);
    }

    #[test]
    fn remark_scalar_symbol() {
        let data = SymbolData::from_spec(&scalar_spec(1, &[(1.0, 1.0), (1.0, 2.0)])).unwrap();
        let phi0 = scalar_symbol(&data, &[0.0]).unwrap();
        assert!((phi0 - re(1.0 + 0.5f64.sqrt())).norm() < 1e-15);
        for s in [0.3, -2.0, 17.5] {
            let expected = re(1.0) + Complex64::from_polar(0.5f64.sqrt(), -s * 2f64.ln());
            assert!((scalar_symbol(&data, &[s]).unwrap() - expected).norm() < 1e-14);
        }
    }

    #[test]
    fn identity_dilation_is_constant() {
        let lambda = Complex64::new(0.7, -1.3);
        let spec = validate_spec(2, vec![ScaleEntry::scalar(0, lambda, 1.0, 2)]).unwrap();
        let data = SymbolData::from_spec(&spec).unwrap();
        for s in [[0.0, 0.0], [3.0, -1.0], [100.0, 2.5]] {
            assert!((scalar_symbol(&data, &s).unwrap() - lambda).norm() < 1e-15);
        }
    }

    #[test]
    fn conjugate_symbol_examples() {
        let pos = SymbolData::from_spec(&scalar_spec(1, &[(1.0, 2.0), (0.5, 3.0)])).unwrap();
        for s in [0.0, 1.3, -4.0] {
            let a = scalar_symbol(&pos, &[s]).unwrap();
            let b = conjugate_scalar_symbol(&pos, &[s]).unwrap();
            assert!((a - b).norm() < 1e-15);
        }

        let refl = SymbolData::from_spec(&scalar_spec(1, &[(1.0, -1.0)])).unwrap();
        assert!((conjugate_scalar_symbol(&refl, &[2.0]).unwrap() - re(-1.0)).norm() < 1e-15);
        assert!((scalar_symbol(&refl, &[2.0]).unwrap() - re(1.0)).norm() < 1e-15);

        let mixed = SymbolData::from_spec(&scalar_spec(1, &[(1.0, 2.0), (1.0, -3.0)])).unwrap();
        let phi = scalar_symbol(&mixed, &[0.0]).unwrap();
        let phis = conjugate_scalar_symbol(&mixed, &[0.0]).unwrap();
        assert!((phi.re - (0.5f64.sqrt() + (1.0f64 / 3.0).sqrt())).abs() < 1e-15);
        assert!((phis.re - (0.5f64.sqrt() - (1.0f64 / 3.0).sqrt())).abs() < 1e-15);
    }

    #[test]
    fn non_scalar_family_has_no_conjugate_symbol() {
        let spec = validate_spec(2, vec![ScaleEntry::diagonal(0, re(1.0), &[2.0, 1.0])]).unwrap();
        let data = SymbolData::from_spec(&spec).unwrap();
        assert_eq!(
            conjugate_scalar_symbol(&data, &[0.0, 0.0]),
            Err(SymbolError::NotScalarDilation)
        );
    }

    #[test]
    fn reflection_matrix_symbol_is_swap() {
        let data = SymbolData::from_spec(&scalar_spec(1, &[(1.0, -1.0)])).unwrap();
        for s in [0.0, 5.0, -9.1] {
            let ev = matrix_symbol(&data, &[s]).unwrap();
            let expected = CMatrix::from_row_slice(2, 2, &[re(0.0), re(1.0), re(1.0), re(0.0)]);
            assert!((&ev.matrix - expected).camax() < 1e-15);
        }
    }

    #[test]
    fn mixed_scalar_dilation_block_form() {
        let data = SymbolData::from_spec(&scalar_spec(2, &[(1.0, 2.0), (0.5, -3.0), (0.25, 5.0)])).unwrap();
        let s = [0.4, -1.1];
        let ev = matrix_symbol(&data, &s).unwrap();
        let (plus, minus) = data.split_from_phases(&data.phases(&s)).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let expected = if i == j {
                    plus
                } else if (i as i32 - j as i32).abs() == 2 {
                    minus
                } else {
                    re(0.0)
                };
                assert!((ev.matrix[(i, j)] - expected).norm() < 1e-15);
            }
        }
        assert!((ev.scalar.unwrap() - (plus + minus)).norm() < 1e-14);
        assert!((ev.conjugate_scalar.unwrap() - (plus - minus)).norm() < 1e-14);
    }

    #[test]
    fn positive_family_matrix_symbol_is_scalar_multiple() {
        let spec = validate_spec(
            2,
            vec![
                ScaleEntry::diagonal(0, re(1.0), &[1.0, 1.0]),
                ScaleEntry::diagonal(1, Complex64::new(0.3, 0.4), &[2.0, 1.0]),
                ScaleEntry::diagonal(2, re(-0.2), &[0.5, 3.0]),
            ],
        )
        .unwrap();
        let data = SymbolData::from_spec(&spec).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let s = [rng.gen_range(-50.0..50.0), rng.gen_range(-50.0..50.0)];
            let ev = matrix_symbol(&data, &s).unwrap();
            let phi = ev.scalar.unwrap();
            let diff = &ev.matrix - CMatrix::identity(4, 4) * phi;
            assert!(diff.camax() <= 1e-12);
            assert!(phi.norm() <= spec.n2() + 1e-12);
            assert!(ev.norm() <= spec.n2() + 1e-12);
        }
    }

    #[test]
    fn ross_symbol_is_polynomial_on_circle() {
        // A(k) = q^{-k}, c = (1, 1, 1): φ(s) = r(√q e^{i s log q}) with r(z) = 1 + z + z²
        let q: f64 = 2.0;
        let spec = validate_spec(
            1,
            (0..3).map(|k| ScaleEntry::scalar(k, re(1.0), q.powi(-(k as i32)), 1)).collect(),
        )
        .unwrap();
        let data = SymbolData::from_spec(&spec).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let s: f64 = rng.gen_range(-100.0..100.0);
            let z = Complex64::from_polar(q.sqrt(), s * q.ln());
            let r = re(1.0) + z + z * z;
            assert!((scalar_symbol(&data, &[s]).unwrap() - r).norm() < 1e-12);
        }
    }

    #[test]
    fn schur_factorization_for_scalar_dilations() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for d in 1..=3 {
            let spec = scalar_spec(d, &[(1.0, 2.0), (0.7, -3.0), (-0.4, 0.5), (0.3, -1.5)]);
            let data = SymbolData::from_spec(&spec).unwrap();
            for _ in 0..20 {
                let s: Vec<f64> = (0..d).map(|_| rng.gen_range(-10.0..10.0)).collect();
                let lambda = Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
                let ev = matrix_symbol(&data, &s).unwrap();
                let lhs = char_det(lambda, &ev.matrix);
                let phi = ev.scalar.unwrap();
                let phis = ev.conjugate_scalar.unwrap();
                let rhs = ((lambda - phi) * (lambda - phis)).powi(1 << (d - 1));
                assert!((lhs - rhs).norm() <= 1e-8 * rhs.norm(), "d={d}");
            }
        }
    }

    #[test]
    fn truncation_of_finite_spec() {
        let spec = scalar_spec(1, &[(1.0, 2.0), (0.5, 3.0), (0.25, -5.0)]);
        let data = SymbolData::from_spec(&spec).unwrap();
        let full = matrix_symbol(&data, &[0.7]).unwrap();
        let trunc = truncated_symbol(&spec, 2, &[0.7]).unwrap();
        assert!((&full.matrix - &trunc.matrix).camax() < 1e-15);
        assert_eq!(tail_bound(&spec, 2).unwrap().bound, 0.0);
    }

    #[test]
    fn prime_family_tail_monotone() {
        let fam = GeometricPrimeFamily::new(0.5, 1).unwrap();
        let b: Vec<f64> = (1..=20).map(|n| tail_bound(&fam, n).unwrap().bound).collect();
        assert!(b.windows(2).all(|w| w[1] <= w[0]));
        for (n, v) in (1..=20).zip(&b) {
            assert!(*v <= 0.5f64.powi(n));
        }
    }
}
