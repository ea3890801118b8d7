//! Rotational invariance, point spectrum and Weyl classification.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::hausdorff::PointIndex;
use super::{SpectraError, SpectrumApprox};
use crate::arithmetic::RelationReport;
use crate::linalg::{char_det, eigenvalues};
use crate::symbols::SymbolData;

/// Determinant threshold for common eigenvalues, scaled by `(1 + N₂)^{2ᵈ}`.
pub const TAU_DET: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvarianceReport {
    pub passed: bool,
    pub tolerance: f64,
    /// `(θ, dist_H(e^{iθ}·cloud, cloud))` per tested angle.
    pub distances: Vec<(f64, f64)>,
}

/// Passes iff `dist_H(e^{iθ}·P, P) ≤ tol` at every angle; `tol` defaults to `3·resolution`.
pub fn rotational_invariance_check(
    approx: &SpectrumApprox,
    angles: &[f64],
    tol: Option<f64>,
) -> Result<InvarianceReport, SpectraError> {
    if approx.points.is_empty() {
        return Err(SpectraError::EmptySet);
    }
    let tolerance = tol.unwrap_or(3.0 * approx.resolution);
    let index = PointIndex::new(&approx.points);
    let rotated = |theta: f64| -> Vec<Complex64> {
        let w = Complex64::from_polar(1.0, theta);
        approx.points.iter().map(|z| z * w).collect()
    };
    // h(P, e^{iθ}P) equals h(e^{−iθ}P, P), so one index serves both directions
    let distances: Vec<(f64, f64)> = angles
        .iter()
        .map(|&theta| {
            let forward = index.directed_from(&rotated(theta));
            let backward = index.directed_from(&rotated(-theta));
            (theta, forward.max(backward))
        })
        .collect();
    Ok(InvarianceReport {
        passed: distances.iter().all(|(_, d)| *d <= tolerance),
        tolerance,
        distances,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointSpectrum {
    pub values: Vec<Complex64>,
    /// True when the sign-definite shortcut decided the answer.
    pub fast_path: bool,
}

/// Seeded probe frequencies in `[−50, 50]ᵈ`.
pub fn default_probes(dimension: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| (0..dimension).map(|_| rng.gen_range(-50.0..50.0)).collect())
        .collect()
}

fn nonzero_entries(data: &SymbolData) -> Vec<usize> {
    (0..data.len())
        .filter(|&k| data.weights()[k] != Complex64::new(0.0, 0.0))
        .collect()
}

/// Common eigenvalues of `Φ(s)` over the probes, seeded by the eigenvalues of `Φ(0)`.
pub fn point_spectrum(data: &SymbolData, probes: &[Vec<f64>]) -> PointSpectrum {
    let active = nonzero_entries(data);
    if active.is_empty() {
        return PointSpectrum {
            values: vec![Complex64::new(0.0, 0.0)],
            fast_path: true,
        };
    }
    if data.is_positive_definite() {
        let identity = |k: usize| data.eigen_tuples()[k].iter().all(|a| (a - 1.0).abs() < 1e-12);
        let values = if active.len() == 1 && identity(active[0]) {
            vec![data.weights()[active[0]]]
        } else {
            Vec::new()
        };
        return PointSpectrum {
            values,
            fast_path: true,
        };
    }

    let n2 = data.n2();
    let size = data.size();
    let zero = vec![0.0; data.dimension()];
    let phi0 = data.matrix_from_phases(&data.phases(&zero));
    let mut candidates: Vec<Complex64> = Vec::new();
    for lambda in eigenvalues(&phi0) {
        if candidates.iter().all(|c| (c - lambda).norm() > 1e-9 * (1.0 + n2)) {
            candidates.push(lambda);
        }
    }
    let threshold = TAU_DET * (1.0 + n2).powi(size as i32);
    let matrices: Vec<_> = probes
        .iter()
        .map(|s| data.matrix_from_phases(&data.phases(s)))
        .collect();
    let values = candidates
        .into_iter()
        .filter(|lambda| matrices.iter().all(|m| char_det(*lambda, m).norm() <= threshold))
        .collect();
    PointSpectrum {
        values,
        fast_path: false,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RotationVerdict {
    Proven,
    FailedNumerically,
    NotApplicable,
}

/// Isolated eigenvalues of finite multiplicity: a subset of `{0}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Pi00 {
    Empty,
    Zero,
    /// `0` is an isolated eigenvalue but its multiplicity is not determined.
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumClassification {
    pub point_spectrum: Vec<Complex64>,
    pub weyl_equals_spectrum: bool,
    pub pi00: Pi00,
    pub rotation_invariant: RotationVerdict,
    pub caveat: Option<String>,
}

/// Weyl classification `σ_ew = σ ∖ π₀₀`.
///
/// Constant symbols (every `|a(k)| = 1`) are decided analytically: the
/// operator is unitarily a constant matrix multiplier, so every eigenvalue
/// has infinite multiplicity and `π₀₀ = ∅`. Otherwise the independence
/// hypothesis is required.
pub fn weyl_classify(
    data: &SymbolData,
    approx: &SpectrumApprox,
    point_spec: &PointSpectrum,
    relation: &RelationReport,
) -> Result<SpectrumClassification, SpectraError> {
    let small = 1e-9 * (1.0 + data.n2());
    if data.has_constant_symbol() {
        let zero = vec![0.0; data.dimension()];
        let sigma = eigenvalues(&data.matrix_from_phases(&data.phases(&zero)));
        let rotation_invariant = if sigma.iter().all(|z| z.norm() <= small) {
            RotationVerdict::Proven
        } else {
            RotationVerdict::FailedNumerically
        };
        return Ok(SpectrumClassification {
            point_spectrum: point_spec.values.clone(),
            weyl_equals_spectrum: true,
            pi00: Pi00::Empty,
            rotation_invariant,
            caveat: None,
        });
    }
    if !relation.is_independent() {
        return Err(SpectraError::HypothesisNotMet(
            "Weyl classification needs independent logarithms along some coordinate".into(),
        ));
    }
    let zero_is_eigenvalue = point_spec.values.iter().any(|z| z.norm() <= small);
    let isolated = approx
        .points
        .iter()
        .all(|z| z.norm() <= small || z.norm() > 5.0 * approx.resolution);
    let (pi00, caveat) = if zero_is_eigenvalue && isolated {
        (
            Pi00::Unknown,
            Some("0 is an isolated eigenvalue; its multiplicity is not determined numerically".to_string()),
        )
    } else {
        (Pi00::Empty, None)
    };
    Ok(SpectrumClassification {
        point_spectrum: point_spec.values.clone(),
        weyl_equals_spectrum: pi00 == Pi00::Empty,
        pi00,
        rotation_invariant: RotationVerdict::Proven,
        caveat,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arithmetic::{check_log_independence, DEFAULT_BOUND, DEFAULT_TOLERANCE};
    use crate::model::{validate_spec, ScaleEntry};
    use crate::spectra::{analytic_curve, annulus_analytic, SpectrumMethod};
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn data(entries: Vec<ScaleEntry>, d: usize) -> SymbolData {
        SymbolData::from_spec(&validate_spec(d, entries).unwrap()).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_multiple() {
        let lambda = c(0.5, 2.0);
        let d = data(vec![ScaleEntry::scalar(0, lambda, 1.0, 2)], 2);
        let ps = point_spectrum(&d, &default_probes(2, 8, 0));
        assert_eq!(ps.values, vec![lambda]);
        let cloud = SpectrumApprox {
            points: vec![lambda],
            method: SpectrumMethod::FrequencyGrid,
            annulus: None,
            sample_count: 1,
            resolution: 0.0,
        };
        let rel = check_log_independence(&[1.0], DEFAULT_BOUND, DEFAULT_TOLERANCE).unwrap();
        let cl = weyl_classify(&d, &cloud, &ps, &rel).unwrap();
        assert_eq!(cl.pi00, Pi00::Empty);
        assert!(cl.weyl_equals_spectrum);
    }

    #[test]
    fn two_dilations_have_no_eigenvalues() {
        let d = data(
            vec![ScaleEntry::scalar(0, c(1.0, 0.0), 1.0, 1), ScaleEntry::scalar(1, c(1.0, 0.0), 2.0, 1)],
            1,
        );
        assert!(point_spectrum(&d, &default_probes(1, 8, 0)).values.is_empty());
    }

    #[test]
    fn reflection_multiple() {
        let lambda = c(1.5, -0.5);
        let d = data(vec![ScaleEntry::scalar(0, lambda, -1.0, 1)], 1);
        let ps = point_spectrum(&d, &default_probes(1, 16, 3));
        assert!(!ps.fast_path);
        assert_eq!(ps.values.len(), 2);
        assert!(ps.values.iter().any(|z| (z - lambda).norm() < 1e-12));
        assert!(ps.values.iter().any(|z| (z + lambda).norm() < 1e-12));
    }

    #[test]
    fn mixed_sign_family_has_no_eigenvalues() {
        let d = data(
            vec![ScaleEntry::scalar(0, c(1.0, 0.0), 2.0, 1), ScaleEntry::scalar(1, c(1.0, 0.0), -3.0, 1)],
            1,
        );
        assert!(point_spectrum(&d, &default_probes(1, 16, 0)).values.is_empty());
    }

    #[test]
    fn invariance_verdicts() {
        let circle = analytic_curve(|t| c(1.0, 0.0) + Complex64::from_polar(FRAC_1_SQRT_2, t), 4000);
        let r = rotational_invariance_check(&circle, &[PI], None).unwrap();
        assert!(!r.passed);
        assert!(r.distances[0].1 >= 1.0);

        let origin = SpectrumApprox {
            points: vec![c(0.0, 0.0)],
            method: SpectrumMethod::AnalyticCurve,
            annulus: None,
            sample_count: 1,
            resolution: 0.0,
        };
        assert!(rotational_invariance_check(&origin, &[0.3, 1.0, 3.0], None).unwrap().passed);

        let d = data(
            vec![ScaleEntry::scalar(0, c(1.0, 0.0), 2.0, 1), ScaleEntry::scalar(1, c(1.0, 0.0), 3.0, 1)],
            1,
        );
        let rel = check_log_independence(&[2.0, 3.0], DEFAULT_BOUND, DEFAULT_TOLERANCE).unwrap();
        let ann = annulus_analytic(&d, &rel).unwrap();
        assert!(rotational_invariance_check(&ann, &[0.1, 1.0, 2.5], None).unwrap().passed);
    }

    #[test]
    fn annulus_away_from_zero_has_full_weyl_spectrum() {
        let d = data(
            vec![ScaleEntry::scalar(0, c(1.0, 0.0), 2.0, 1), ScaleEntry::scalar(1, c(1.0, 0.0), 3.0, 1)],
            1,
        );
        let rel = check_log_independence(&[2.0, 3.0], DEFAULT_BOUND, DEFAULT_TOLERANCE).unwrap();
        let ann = annulus_analytic(&d, &rel).unwrap();
        let ps = point_spectrum(&d, &default_probes(1, 8, 0));
        let cl = weyl_classify(&d, &ann, &ps, &rel).unwrap();
        assert!(cl.weyl_equals_spectrum);
        assert_eq!(cl.rotation_invariant, RotationVerdict::Proven);
    }

    #[test]
    fn dependent_nonconstant_family_is_rejected() {
        let d = data(
            vec![ScaleEntry::scalar(0, c(1.0, 0.0), 1.0, 1), ScaleEntry::scalar(1, c(1.0, 0.0), 2.0, 1)],
            1,
        );
        let rel = check_log_independence(&[1.0, 2.0], DEFAULT_BOUND, DEFAULT_TOLERANCE).unwrap();
        let cloud = analytic_curve(|t| c(1.0, 0.0) + Complex64::from_polar(FRAC_1_SQRT_2, t), 100);
        let ps = point_spectrum(&d, &default_probes(1, 8, 0));
        assert!(matches!(
            weyl_classify(&d, &cloud, &ps, &rel),
            Err(SpectraError::HypothesisNotMet(_))
        ));
    }
}
