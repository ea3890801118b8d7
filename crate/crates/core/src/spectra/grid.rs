//! Frequency-grid sampling of the matrix symbol.
//!
//! The symbol depends on `s` only through the inner products `s·log|a(k)|`,
//! so the grid lives on the span of the vectors `log|a(k)|` (an orthonormal
//! basis of rank `r ≤ d`). For scalar dilations `r = 1` and the single grid
//! coordinate is `Σ_j s_j` up to normalisation.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::hausdorff::small_hausdorff;
use super::{eigen_of_phases, push_distinct, SpectraError, SpectrumApprox, SpectrumMethod};
use crate::linalg::spectral_norm;
use crate::symbols::{SymbolData, SymbolError};

/// Target number of full periods swept by the slowest phase.
pub const AUTO_PERIODS: f64 = 30.0;
/// Largest phase advance (radians) per grid step for the fastest phase.
pub const AUTO_PHASE_STEP: f64 = 0.05;
/// Default cap on the number of grid points.
pub const DEFAULT_MAX_POINTS: usize = 2_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Extent {
    Auto,
    Fixed(f64),
}

/// Requested grid: half-width `S` of the box `[−S, S]ʳ` and step `h`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridPlan {
    pub span: Extent,
    pub step: Extent,
    pub max_points: usize,
}

impl Default for GridPlan {
    fn default() -> Self {
        Self {
            span: Extent::Auto,
            step: Extent::Auto,
            max_points: DEFAULT_MAX_POINTS,
        }
    }
}

impl GridPlan {
    pub fn fixed(span: f64, step: f64) -> Self {
        Self {
            span: Extent::Fixed(span),
            step: Extent::Fixed(step),
            ..Self::default()
        }
    }
}

/// A concrete grid after resolving `auto` values and the point cap.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResolvedGrid {
    /// Orthonormal basis of the phase subspace, one `d`-vector per axis.
    pub basis: Vec<Vec<f64>>,
    pub span: f64,
    pub step: f64,
    pub per_axis: usize,
}

impl ResolvedGrid {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn len(&self) -> usize {
        self.per_axis.pow(self.rank() as u32)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Frequency `s ∈ ℝᵈ` of the grid point with linear index `idx`.
    pub fn frequency(&self, idx: usize, dimension: usize) -> Vec<f64> {
        let mut s = vec![0.0; dimension];
        let mut rest = idx;
        for axis in &self.basis {
            let i = rest % self.per_axis;
            rest /= self.per_axis;
            let u = -self.span + i as f64 * self.step;
            for (sv, b) in s.iter_mut().zip(axis) {
                *sv += u * b;
            }
        }
        s
    }

    fn strides(&self) -> Vec<usize> {
        (0..self.rank()).map(|a| self.per_axis.pow(a as u32)).collect()
    }
}

fn orthonormal_basis(vectors: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let scale = vectors
        .iter()
        .map(|v| v.iter().map(|x| x * x).sum::<f64>().sqrt())
        .fold(0.0, f64::max);
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for v in vectors {
        let mut w = v.clone();
        for _ in 0..2 {
            for b in &basis {
                let dot: f64 = w.iter().zip(b).map(|(x, y)| x * y).sum();
                for (wi, bi) in w.iter_mut().zip(b) {
                    *wi -= dot * bi;
                }
            }
        }
        let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-10 * scale.max(1e-300) && norm > 1e-14 {
            basis.push(w.iter().map(|x| x / norm).collect());
        }
    }
    basis
}

/// Resolves `auto` span/step from the phase speeds and applies the point cap.
pub fn resolve_grid(data: &SymbolData, plan: &GridPlan) -> Result<ResolvedGrid, SpectraError> {
    let zero = Complex64::new(0.0, 0.0);
    let active: Vec<Vec<f64>> = data
        .log_abs()
        .iter()
        .zip(data.weights())
        .filter(|(_, w)| **w != zero)
        .map(|(l, _)| l.clone())
        .collect();
    let basis = orthonormal_basis(&active);
    if basis.is_empty() {
        return Ok(ResolvedGrid {
            basis,
            span: 0.0,
            step: 0.0,
            per_axis: 1,
        });
    }
    // per-entry speeds in basis coordinates
    let speeds: Vec<Vec<f64>> = active
        .iter()
        .map(|v| basis.iter().map(|b| b.iter().zip(v).map(|(x, y)| x * y).sum()).collect())
        .collect();
    let norms: Vec<f64> = speeds
        .iter()
        .map(|w| w.iter().map(|x| x * x).sum::<f64>().sqrt())
        .filter(|n| *n > 1e-14)
        .collect();
    let slowest = norms.iter().copied().fold(f64::INFINITY, f64::min);
    let fastest = speeds
        .iter()
        .flat_map(|w| w.iter().map(|x| x.abs()))
        .fold(0.0, f64::max);

    let span = match plan.span {
        Extent::Auto => AUTO_PERIODS * std::f64::consts::PI / slowest,
        Extent::Fixed(v) => v,
    };
    let mut step = match plan.step {
        Extent::Auto => AUTO_PHASE_STEP / fastest,
        Extent::Fixed(v) => v,
    };
    if !(span.is_finite() && span > 0.0 && step.is_finite() && step > 0.0) {
        return Err(SpectraError::InvalidPlan(format!("span {span} and step {step} must be positive")));
    }
    if plan.max_points < 2 {
        return Err(SpectraError::InvalidPlan("max_points must be at least 2".into()));
    }
    let rank = basis.len() as i32;
    let mut per_axis = (2.0 * span / step).floor() as usize + 1;
    let cap = (plan.max_points as f64).powf(1.0 / rank as f64).floor() as usize;
    if per_axis > cap {
        per_axis = cap.max(2);
        step = 2.0 * span / (per_axis - 1) as f64;
    }
    Ok(ResolvedGrid {
        basis,
        span,
        step,
        per_axis,
    })
}

fn eigen_sets(data: &SymbolData, grid: &ResolvedGrid) -> Vec<Vec<Complex64>> {
    let d = data.dimension();
    (0..grid.len())
        .into_par_iter()
        .map(|idx| {
            let t = data.phases(&grid.frequency(idx, d));
            let mut out = Vec::with_capacity(data.size());
            eigen_of_phases(data, &t, &mut out);
            out
        })
        .collect()
}

/// Twice the largest set displacement between grid neighbours.
fn grid_resolution(grid: &ResolvedGrid, sets: &[Vec<Complex64>]) -> f64 {
    let strides = grid.strides();
    let n = grid.per_axis;
    2.0 * (0..sets.len())
        .into_par_iter()
        .map(|idx| {
            let mut worst: f64 = 0.0;
            for &stride in &strides {
                if (idx / stride) % n + 1 < n {
                    worst = worst.max(small_hausdorff(&sets[idx], &sets[idx + stride]));
                }
            }
            worst
        })
        .reduce(|| 0.0, f64::max)
}

/// Eigenvalues of `Φ(s)` over every grid point.
pub fn spectrum_frequency_grid(data: &SymbolData, grid: &ResolvedGrid) -> SpectrumApprox {
    let sets = eigen_sets(data, grid);
    let resolution = grid_resolution(grid, &sets);
    SpectrumApprox {
        points: sets.into_iter().flatten().collect(),
        method: SpectrumMethod::FrequencyGrid,
        annulus: None,
        sample_count: grid.len(),
        resolution,
    }
}

/// Samples of `φ(ℝᵈ) ∪ φ*(ℝᵈ)` on the grid (scalar dilations only).
pub fn scalar_ranges_grid(data: &SymbolData, grid: &ResolvedGrid) -> Result<SpectrumApprox, SpectraError> {
    if !data.is_scalar_dilation() {
        return Err(SymbolError::NotScalarDilation.into());
    }
    let d = data.dimension();
    let sets: Vec<Vec<Complex64>> = (0..grid.len())
        .into_par_iter()
        .map(|idx| {
            let t = data.phases(&grid.frequency(idx, d));
            let phi = data.scalar_from_phases(&t);
            let conj = data.conjugate_from_phases(&t).unwrap_or(phi);
            let mut out = Vec::with_capacity(2);
            push_distinct(&mut out, &[phi, conj]);
            out
        })
        .collect();
    let resolution = grid_resolution(grid, &sets);
    Ok(SpectrumApprox {
        points: sets.into_iter().flatten().collect(),
        method: SpectrumMethod::FrequencyGrid,
        annulus: None,
        sample_count: grid.len(),
        resolution,
    })
}

/// Largest `‖Φ(s)‖` found on a grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormEstimate {
    pub sup: f64,
    pub argmax: Vec<f64>,
    pub sample_count: usize,
}

pub fn operator_norm_grid(data: &SymbolData, grid: &ResolvedGrid) -> NormEstimate {
    let d = data.dimension();
    let (sup, idx) = (0..grid.len())
        .into_par_iter()
        .map(|idx| {
            let t = data.phases(&grid.frequency(idx, d));
            (spectral_norm(&data.matrix_from_phases(&t)), idx)
        })
        .reduce(
            || (f64::NEG_INFINITY, usize::MAX),
            |a, b| if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a },
        );
    NormEstimate {
        sup,
        argmax: grid.frequency(idx, d),
        sample_count: grid.len(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{validate_spec, ScaleEntry};
    use std::f64::consts::{FRAC_1_SQRT_2, LN_2};

    fn re(v: f64) -> Complex64 {
        Complex64::new(v, 0.0)
    }

    fn remark() -> SymbolData {
        let spec = validate_spec(1, vec![ScaleEntry::scalar(0, re(1.0), 1.0, 1), ScaleEntry::scalar(1, re(1.0), 2.0, 1)])
            .unwrap();
        SymbolData::from_spec(&spec).unwrap()
    }

    #[test]
    fn auto_plan_follows_phase_speeds() {
        let g = resolve_grid(&remark(), &GridPlan::default()).unwrap();
        assert_eq!(g.rank(), 1);
        assert!((g.span - 30.0 * std::f64::consts::PI / LN_2).abs() < 1e-9);
        assert!((g.step - 0.05 / LN_2).abs() < 1e-12);
    }

    #[test]
    fn remark_points_on_circle() {
        let data = remark();
        let g = resolve_grid(&data, &GridPlan::fixed(200.0 / LN_2, 0.01)).unwrap();
        let cloud = spectrum_frequency_grid(&data, &g);
        for z in &cloud.points {
            assert!(((z - re(1.0)).norm() - FRAC_1_SQRT_2).abs() < 1e-9);
        }
        assert!(cloud.resolution < 0.02);
    }

    #[test]
    fn constant_symbols() {
        let spec = validate_spec(1, vec![ScaleEntry::scalar(0, Complex64::new(0.3, -2.0), 1.0, 1)]).unwrap();
        let data = SymbolData::from_spec(&spec).unwrap();
        let g = resolve_grid(&data, &GridPlan::default()).unwrap();
        let cloud = spectrum_frequency_grid(&data, &g);
        assert!(cloud.points.iter().all(|z| *z == Complex64::new(0.3, -2.0)));
        assert_eq!(cloud.resolution, 0.0);

        let spec = validate_spec(1, vec![ScaleEntry::scalar(0, re(1.0), -1.0, 1)]).unwrap();
        let data = SymbolData::from_spec(&spec).unwrap();
        let cloud = spectrum_frequency_grid(&data, &resolve_grid(&data, &GridPlan::default()).unwrap());
        let mut re_parts: Vec<f64> = cloud.points.iter().map(|z| z.re).collect();
        re_parts.sort_by(f64::total_cmp);
        assert!((re_parts[0] + 1.0).abs() < 1e-15 && (re_parts[1] - 1.0).abs() < 1e-15);
        assert!(cloud.points.iter().all(|z| z.im.abs() < 1e-15));
    }

    #[test]
    fn point_cap_enlarges_step() {
        let plan = GridPlan {
            max_points: 1000,
            ..GridPlan::fixed(100.0, 0.001)
        };
        let g = resolve_grid(&remark(), &plan).unwrap();
        assert_eq!(g.per_axis, 1000);
        assert!((g.step - 200.0 / 999.0).abs() < 1e-12);
    }

    #[test]
    fn norm_of_remark_symbol() {
        let data = remark();
        let est = operator_norm_grid(&data, &resolve_grid(&data, &GridPlan::default()).unwrap());
        assert!((est.sup - (1.0 + FRAC_1_SQRT_2)).abs() < 1e-9);
    }

    #[test]
    fn two_dimensional_phase_subspace() {
        let spec = validate_spec(
            2,
            vec![
                ScaleEntry::diagonal(0, re(1.0), &[2.0, 1.0]),
                ScaleEntry::diagonal(1, re(1.0), &[1.0, 3.0]),
            ],
        )
        .unwrap();
        let data = SymbolData::from_spec(&spec).unwrap();
        let plan = GridPlan {
            max_points: 10_000,
            ..GridPlan::default()
        };
        let g = resolve_grid(&data, &plan).unwrap();
        assert_eq!(g.rank(), 2);
        assert!(g.len() <= 10_000);
        let cloud = spectrum_frequency_grid(&data, &g);
        let n2 = spec.n2();
        assert!(cloud.points.iter().all(|z| z.norm() <= n2 + 1e-12));
    }
}
