//! Closed-form spectra: annuli from the per-entry radii, and parametrised curves.

use num_complex::Complex64;

use super::{Annulus, SpectraError, SpectrumApprox, SpectrumMethod};
use crate::arithmetic::RelationReport;
use crate::symbols::SymbolData;

const ANGULAR_SAMPLES: usize = 720;

/// `r_out = Σ r_k`, `r_in = max(0, 2·max r_k − Σ r_k)` with `r_k = |c(k)|/√|det A(k)|`.
pub fn annulus_radii(data: &SymbolData) -> Annulus {
    let radii: Vec<f64> = data.weights().iter().map(|w| w.norm()).collect();
    let sum: f64 = radii.iter().sum();
    let max = radii.iter().copied().fold(0.0, f64::max);
    Annulus {
        r_in: (2.0 * max - sum).max(0.0),
        r_out: sum,
    }
}

/// Polar-grid cloud filling the annulus predicted for independent families.
pub fn annulus_analytic(data: &SymbolData, relation: &RelationReport) -> Result<SpectrumApprox, SpectraError> {
    if !(data.is_scalar_dilation() || data.is_positive_definite() || data.is_negative_definite()) {
        return Err(SpectraError::HypothesisNotMet(
            "annulus form needs a scalar-dilation or sign-definite family".into(),
        ));
    }
    if !relation.is_independent() {
        return Err(SpectraError::HypothesisNotMet(
            "annulus form needs independent logarithms".into(),
        ));
    }
    let ann = annulus_radii(data);
    if ann.r_out == 0.0 {
        return Ok(SpectrumApprox {
            points: vec![Complex64::new(0.0, 0.0)],
            method: SpectrumMethod::AnalyticAnnulus,
            annulus: Some(ann),
            sample_count: 1,
            resolution: 0.0,
        });
    }
    let dtheta = std::f64::consts::TAU / ANGULAR_SAMPLES as f64;
    let width = ann.r_out - ann.r_in;
    let rings = ((width / (ann.r_out * dtheta)).ceil() as usize + 1).max(1);
    let dr = if rings > 1 { width / (rings - 1) as f64 } else { 0.0 };
    let mut points = Vec::with_capacity(rings * ANGULAR_SAMPLES);
    for i in 0..rings {
        let r = if rings > 1 { ann.r_in + i as f64 * dr } else { ann.r_out };
        if r == 0.0 {
            points.push(Complex64::new(0.0, 0.0));
            continue;
        }
        for j in 0..ANGULAR_SAMPLES {
            points.push(Complex64::from_polar(r, j as f64 * dtheta));
        }
    }
    let resolution = ((dr / 2.0).powi(2) + (ann.r_out * dtheta / 2.0).powi(2)).sqrt();
    Ok(SpectrumApprox {
        sample_count: points.len(),
        points,
        method: SpectrumMethod::AnalyticAnnulus,
        annulus: Some(ann),
        resolution,
    })
}

/// Samples a closed curve `θ ↦ f(θ)` at `n` equally spaced `θ ∈ [0, 2π)`.
///
/// Resolution is twice the largest gap between consecutive samples.
pub fn analytic_curve(f: impl Fn(f64) -> Complex64, n: usize) -> SpectrumApprox {
    let n = n.max(1);
    let points: Vec<Complex64> = (0..n)
        .map(|j| f(std::f64::consts::TAU * j as f64 / n as f64))
        .collect();
    let gap = (0..n)
        .map(|j| (points[(j + 1) % n] - points[j]).norm())
        .fold(0.0, f64::max);
    SpectrumApprox {
        points,
        method: SpectrumMethod::AnalyticCurve,
        annulus: None,
        sample_count: n,
        resolution: 2.0 * gap,
    }
}
