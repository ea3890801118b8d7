//! Spectrum approximation and classification.
//!
//! The spectrum of `H` is the closure of the eigenvalue field of its matrix
//! symbol. Two samplers produce point clouds from it: a frequency grid over
//! `s`, and (under the independence hypothesis) a torus sampler that replaces
//! every phase by a free unimodular variable. Clouds carry an estimated
//! covering radius (`resolution`), which is an estimate and not a certificate.

mod analytic;
mod classify;
mod grid;
mod hausdorff;
mod torus;
mod truncation;

pub use analytic::{analytic_curve, annulus_analytic, annulus_radii};
pub use classify::{
    default_probes, point_spectrum, rotational_invariance_check, weyl_classify, InvarianceReport, Pi00,
    PointSpectrum, RotationVerdict, SpectrumClassification,
};
pub use grid::{
    operator_norm_grid, resolve_grid, scalar_ranges_grid, spectrum_frequency_grid, Extent, GridPlan, NormEstimate,
    ResolvedGrid, AUTO_PERIODS, AUTO_PHASE_STEP, DEFAULT_MAX_POINTS,
};
pub use hausdorff::{directed_hausdorff, hausdorff_distance, PointIndex};
pub use torus::{spectrum_torus, TorusSampler};
pub use truncation::{truncation_convergence, TruncationStep};

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::arithmetic::ArithmeticError;
use crate::model::ModelError;
use crate::symbols::SymbolError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectraError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Symbol(#[from] SymbolError),
    #[error(transparent)]
    Arithmetic(#[from] ArithmeticError),
    #[error("hypothesis not met: {0}")]
    HypothesisNotMet(String),
    #[error("point set is empty")]
    EmptySet,
    #[error("invalid sampling plan: {0}")]
    InvalidPlan(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SpectrumMethod {
    FrequencyGrid,
    TorusSampling,
    AnalyticAnnulus,
    AnalyticCurve,
}

/// Inner and outer radius of an annulus `{r_in ≤ |z| ≤ r_out}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Annulus {
    pub r_in: f64,
    pub r_out: f64,
}

/// A finite point cloud approximating a spectrum.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumApprox {
    pub points: Vec<Complex64>,
    pub method: SpectrumMethod,
    pub annulus: Option<Annulus>,
    /// Number of frequency or torus samples evaluated.
    pub sample_count: usize,
    /// Estimated covering radius of the cloud within the true spectrum.
    pub resolution: f64,
}

impl SpectrumApprox {
    pub fn max_modulus(&self) -> f64 {
        self.points.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn min_modulus(&self) -> f64 {
        self.points.iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min)
    }
}

/// Appends the distinct values of `vals` to `out` (exact equality).
pub(crate) fn push_distinct(out: &mut Vec<Complex64>, vals: &[Complex64]) {
    let start = out.len();
    for v in vals {
        if !out[start..].contains(v) {
            out.push(*v);
        }
    }
}

/// Distinct eigenvalues of `Ξ(t)`, appended to `out`.
pub(crate) fn eigen_of_phases(data: &crate::symbols::SymbolData, t: &[Complex64], out: &mut Vec<Complex64>) {
    if data.omega().is_diagonal() {
        let n = data.size();
        let mut diag = Vec::with_capacity(n);
        for i in 0..n {
            diag.push(
                data.omega()
                    .cell(i, i)
                    .iter()
                    .map(|&k| data.weights()[k] * t[k])
                    .sum::<Complex64>(),
            );
        }
        push_distinct(out, &diag);
    } else {
        let m = data.matrix_from_phases(t);
        push_distinct(out, &crate::linalg::eigenvalues(&m));
    }
}
