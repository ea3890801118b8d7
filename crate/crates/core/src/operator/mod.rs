//! Direct application of `H f(x) = Σ c(k) f(A(k) x)` to closed-form functions,
//! `L²` norms by quadrature, and the norm-sharpness constructions.

mod experiments;
mod quadrature;

pub use experiments::{
    endpoint_ratio, h_t_closed, h_t_numeric, near_extremizer, norm_ratio_experiment, random_gaussians,
    sharpness_experiment, single_ratio, NormRatioReport, SharpnessReport,
};
pub use quadrature::{gauss_legendre, integrate, QuadratureEstimate, QuadraturePlan, NODES_PER_PANEL};

use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::model::{ModelError, OperatorSpec};
use crate::spectra::SpectraError;
use crate::symbols::SymbolError;

/// Relative size of boundary values, compared with the peak, that counts as
/// "numerically zero" for functions without compact support.
pub const BOUNDARY_THRESHOLD: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OperatorError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Symbol(#[from] SymbolError),
    #[error(transparent)]
    Spectra(#[from] SpectraError),
    #[error("integration box too small: boundary value {boundary:e} exceeds {threshold:e}")]
    BoxTooSmall { boundary: f64, threshold: f64 },
    #[error("exponent p = {0} outside the admissible range")]
    BadExponent(f64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("function has dimension {got}, operator has dimension {expected}")]
    DimensionMismatch { expected: usize, got: usize },
}

type Evaluator = Arc<dyn Fn(&[f64]) -> Complex64 + Send + Sync>;

/// A user-supplied closed-form function.
#[derive(Clone)]
pub struct CustomFunction {
    pub name: String,
    pub dimension: usize,
    evaluator: Evaluator,
}

impl CustomFunction {
    pub fn new(name: impl Into<String>, dimension: usize, f: impl Fn(&[f64]) -> Complex64 + Send + Sync + 'static) -> Self {
        Self {
            name: name.into(),
            dimension,
            evaluator: Arc::new(f),
        }
    }
}

impl fmt::Debug for CustomFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomFunction")
            .field("name", &self.name)
            .field("dimension", &self.dimension)
            .finish_non_exhaustive()
    }
}

/// Test functions with closed-form evaluators.
#[derive(Debug, Clone)]
pub enum TestFunction {
    /// `exp(−Σ ((x_j − center_j)/width)²)`.
    Gaussian { center: Vec<f64>, width: f64 },
    /// Indicator of the box `Π [lower_j, upper_j)`.
    Indicator { lower: Vec<f64>, upper: Vec<f64> },
    /// `x^{−exponent}` on `(t, 1/t)`, zero elsewhere (one dimension).
    PowerCutoff { exponent: f64, t: f64 },
    Custom(CustomFunction),
}

/// Where a function can be nonzero.
#[derive(Debug, Clone, PartialEq)]
pub enum Support {
    Compact { lower: Vec<f64>, upper: Vec<f64> },
    /// Decays but never vanishes; `box` holds the numerically significant part.
    Decaying { lower: Vec<f64>, upper: Vec<f64> },
    Unknown,
}

impl TestFunction {
    pub fn gaussian(center: Vec<f64>, width: f64) -> Self {
        Self::Gaussian { center, width }
    }

    pub fn dimension(&self) -> usize {
        match self {
            Self::Gaussian { center, .. } => center.len(),
            Self::Indicator { lower, .. } => lower.len(),
            Self::PowerCutoff { .. } => 1,
            Self::Custom(c) => c.dimension,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Self::Gaussian { .. } => "gaussian",
            Self::Indicator { .. } => "indicator",
            Self::PowerCutoff { .. } => "power-cutoff",
            Self::Custom(_) => "custom",
        }
    }

    pub fn eval(&self, x: &[f64]) -> Complex64 {
        match self {
            Self::Gaussian { center, width } => {
                let r2: f64 = x.iter().zip(center).map(|(a, c)| ((a - c) / width).powi(2)).sum();
                Complex64::new((-r2).exp(), 0.0)
            }
            Self::Indicator { lower, upper } => {
                let inside = x.iter().zip(lower.iter().zip(upper)).all(|(v, (l, u))| *v >= *l && *v < *u);
                Complex64::new(if inside { 1.0 } else { 0.0 }, 0.0)
            }
            Self::PowerCutoff { exponent, t } => {
                let v = x[0];
                if v > *t && v < 1.0 / t {
                    Complex64::new(v.powf(-exponent), 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }
            Self::Custom(c) => (c.evaluator)(x),
        }
    }

    /// `‖f‖_p` where a closed form exists (`p = ∞` allowed).
    pub fn exact_lp_norm(&self, p: f64) -> Option<f64> {
        match self {
            Self::Gaussian { center, width } => {
                let d = center.len() as f64;
                if p.is_infinite() {
                    Some(1.0)
                } else {
                    // ∫ e^{−p|y|²/w²} dy = (π/p)^{d/2} w^d
                    Some(((std::f64::consts::PI / p).powf(d / 2.0) * width.powf(d)).powf(1.0 / p))
                }
            }
            Self::Indicator { lower, upper } => {
                let vol: f64 = lower.iter().zip(upper).map(|(l, u)| (u - l).max(0.0)).product();
                if p.is_infinite() {
                    Some(if vol > 0.0 { 1.0 } else { 0.0 })
                } else {
                    Some(vol.powf(1.0 / p))
                }
            }
            Self::PowerCutoff { exponent, t } => {
                let (a, b) = (*t, 1.0 / t);
                if p.is_infinite() {
                    return Some(a.powf(-exponent).max(b.powf(-exponent)));
                }
                let e = 1.0 - p * exponent;
                let integral = if e.abs() < 1e-14 {
                    (b / a).ln()
                } else {
                    (b.powf(e) - a.powf(e)) / e
                };
                Some(integral.powf(1.0 / p))
            }
            Self::Custom(_) => None,
        }
    }

    pub fn exact_l2_norm(&self) -> Option<f64> {
        self.exact_lp_norm(2.0)
    }

    pub fn support(&self) -> Support {
        match self {
            Self::Gaussian { center, width } => Support::Decaying {
                lower: center.iter().map(|c| c - 10.0 * width).collect(),
                upper: center.iter().map(|c| c + 10.0 * width).collect(),
            },
            Self::Indicator { lower, upper } => Support::Compact {
                lower: lower.clone(),
                upper: upper.clone(),
            },
            Self::PowerCutoff { t, .. } => Support::Compact {
                lower: vec![*t],
                upper: vec![1.0 / t],
            },
            Self::Custom(_) => Support::Unknown,
        }
    }

    fn uses_log_panels(&self) -> bool {
        matches!(self, Self::PowerCutoff { .. })
    }
}

/// `H f(x) = Σ_k c(k) f(A(k) x)`.
pub fn apply(spec: &OperatorSpec, f: &TestFunction, x: &[f64]) -> Complex64 {
    let v = DVector::from_column_slice(x);
    spec.entries()
        .iter()
        .map(|e| {
            let y = &e.matrix * &v;
            e.coefficient * f.eval(y.as_slice())
        })
        .sum()
}

pub fn apply_batch(spec: &OperatorSpec, f: &TestFunction, xs: &[Vec<f64>]) -> Vec<Complex64> {
    xs.par_iter().map(|x| apply(spec, f, x)).collect()
}

fn check_dimension(spec: &OperatorSpec, f: &TestFunction) -> Result<(), OperatorError> {
    if spec.dimension() != f.dimension() {
        return Err(OperatorError::DimensionMismatch {
            expected: spec.dimension(),
            got: f.dimension(),
        });
    }
    Ok(())
}

/// Bounding box of `A⁻¹ · box`.
fn preimage_box(a: &DMatrix<f64>, lower: &[f64], upper: &[f64]) -> Option<(Vec<f64>, Vec<f64>)> {
    let inv = a.clone().try_inverse()?;
    let d = lower.len();
    let mut lo = vec![f64::INFINITY; d];
    let mut hi = vec![f64::NEG_INFINITY; d];
    for corner in 0..(1usize << d) {
        let v = DVector::from_fn(d, |j, _| if corner >> j & 1 == 1 { upper[j] } else { lower[j] });
        let w = &inv * v;
        for j in 0..d {
            lo[j] = lo[j].min(w[j]);
            hi[j] = hi[j].max(w[j]);
        }
    }
    Some((lo, hi))
}

/// A box covering `f` and every `f(A(k)·)`, with their support faces as cuts.
///
/// Returns `None` for functions of unknown support.
pub fn default_plan(spec: Option<&OperatorSpec>, f: &TestFunction) -> Option<QuadraturePlan> {
    let (lower, upper, compact) = match f.support() {
        Support::Compact { lower, upper } => (lower, upper, true),
        Support::Decaying { lower, upper } => (lower, upper, false),
        Support::Unknown => return None,
    };
    let d = lower.len();
    let mut boxes = vec![(lower.clone(), upper.clone())];
    if let Some(spec) = spec {
        for e in spec.entries() {
            boxes.push(preimage_box(&e.matrix, &lower, &upper)?);
        }
    }
    let lo: Vec<f64> = (0..d).map(|j| boxes.iter().map(|b| b.0[j]).fold(f64::INFINITY, f64::min)).collect();
    let hi: Vec<f64> = (0..d).map(|j| boxes.iter().map(|b| b.1[j]).fold(f64::NEG_INFINITY, f64::max)).collect();
    let mut plan = QuadraturePlan::on_box(lo, hi);
    if compact {
        plan.breakpoints = (0..d)
            .map(|j| boxes.iter().flat_map(|b| [b.0[j], b.1[j]]).collect())
            .collect();
    }
    plan.log_panels = f.uses_log_panels();
    Some(plan)
}

/// `‖g‖₂` by quadrature, with the error propagated from the squared integral.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormEstimate {
    pub value: f64,
    pub error: f64,
    pub converged: bool,
}

fn boundary_max(g: &(dyn Fn(&[f64]) -> f64 + Sync), plan: &QuadraturePlan) -> f64 {
    let d = plan.dimension();
    let per = 9usize;
    let total = per.pow(d as u32);
    let mut worst: f64 = 0.0;
    let mut x = vec![0.0; d];
    for face_axis in 0..d {
        for side in [plan.lower[face_axis], plan.upper[face_axis]] {
            for flat in 0..total / per {
                let mut rest = flat;
                for j in 0..d {
                    if j == face_axis {
                        x[j] = side;
                    } else {
                        let i = rest % per;
                        rest /= per;
                        x[j] = plan.lower[j] + (plan.upper[j] - plan.lower[j]) * i as f64 / (per - 1) as f64;
                    }
                }
                worst = worst.max(g(&x));
            }
        }
    }
    worst
}

fn l2_of(
    modulus: &(dyn Fn(&[f64]) -> f64 + Sync),
    plan: &QuadraturePlan,
    check_boundary: bool,
) -> Result<NormEstimate, OperatorError> {
    let sq = |x: &[f64]| modulus(x).powi(2);
    let est = integrate(&sq, plan);
    if check_boundary {
        let boundary = boundary_max(modulus, plan);
        // root-mean-square amplitude over the box
        let typical = est.value.sqrt() / plan
            .lower
            .iter()
            .zip(&plan.upper)
            .map(|(l, u)| (u - l).sqrt())
            .product::<f64>();
        let threshold = BOUNDARY_THRESHOLD * typical.max(1e-300);
        if boundary > threshold {
            return Err(OperatorError::BoxTooSmall { boundary, threshold });
        }
    }
    let value = est.value.max(0.0).sqrt();
    let error = if value > 0.0 { est.error / (2.0 * value) } else { est.error.sqrt() };
    Ok(NormEstimate {
        value,
        error,
        converged: est.converged,
    })
}

fn compact_within(f: &TestFunction, spec: Option<&OperatorSpec>, plan: &QuadraturePlan) -> Result<(), OperatorError> {
    if let Support::Compact { lower, upper } = f.support() {
        let mut boxes = vec![(lower.clone(), upper.clone())];
        if let Some(spec) = spec {
            for e in spec.entries() {
                if let Some(b) = preimage_box(&e.matrix, &lower, &upper) {
                    boxes.push(b);
                }
            }
        }
        let slack = 1e-12;
        for (lo, hi) in boxes {
            for j in 0..lo.len() {
                let scale = slack * (1.0 + lo[j].abs().max(hi[j].abs()));
                if lo[j] < plan.lower[j] - scale || hi[j] > plan.upper[j] + scale {
                    return Err(OperatorError::BoxTooSmall {
                        boundary: f64::INFINITY,
                        threshold: 0.0,
                    });
                }
            }
        }
    }
    Ok(())
}

/// `‖f‖₂` by tensor quadrature over `plan`'s box.
pub fn l2_norm(f: &TestFunction, plan: &QuadraturePlan) -> Result<NormEstimate, OperatorError> {
    if plan.dimension() != f.dimension() {
        return Err(OperatorError::DimensionMismatch {
            expected: plan.dimension(),
            got: f.dimension(),
        });
    }
    compact_within(f, None, plan)?;
    let decaying = !matches!(f.support(), Support::Compact { .. });
    l2_of(&|x: &[f64]| f.eval(x).norm(), plan, decaying)
}

/// `‖H f‖₂` by tensor quadrature over `plan`'s box.
pub fn apply_l2_norm(spec: &OperatorSpec, f: &TestFunction, plan: &QuadraturePlan) -> Result<NormEstimate, OperatorError> {
    check_dimension(spec, f)?;
    compact_within(f, Some(spec), plan)?;
    let decaying = !matches!(f.support(), Support::Compact { .. });
    l2_of(&|x: &[f64]| apply(spec, f, x).norm(), plan, decaying)
}
