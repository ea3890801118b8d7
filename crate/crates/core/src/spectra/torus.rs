//! Torus sampling of `Ξ(t)`, valid when the phases are jointly dense.
//!
//! Samples come from a Kronecker sequence with the generalised golden-ratio
//! shifts `α_j = φ_m^{−j}` (`φ_m` the positive root of `x^{m+1} = x + 1`)
//! plus a block of seeded uniform points. The uniform block doubles as a
//! coverage probe: the resolution is twice the largest distance from a
//! uniform-sample eigenvalue to the lattice cloud.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::hausdorff::PointIndex;
use super::{eigen_of_phases, SpectraError, SpectrumApprox, SpectrumMethod};
use crate::arithmetic::RelationReport;
use crate::symbols::SymbolData;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TorusSampler {
    pub lattice_points: usize,
    pub random_points: usize,
    pub seed: u64,
}

impl Default for TorusSampler {
    /// One million samples in total.
    fn default() -> Self {
        Self {
            lattice_points: 990_000,
            random_points: 10_000,
            seed: 0,
        }
    }
}

impl TorusSampler {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    pub fn total(&self) -> usize {
        self.lattice_points + self.random_points
    }

    fn validate(&self) -> Result<(), SpectraError> {
        if self.lattice_points == 0 || self.random_points == 0 {
            return Err(SpectraError::InvalidPlan(
                "torus sampler needs lattice and random points".into(),
            ));
        }
        Ok(())
    }
}

/// Shifts `α_1..α_m` of the `m`-dimensional Kronecker sequence.
pub(crate) fn kronecker_shifts(m: usize) -> Vec<f64> {
    let mut x: f64 = 2.0;
    for _ in 0..100 {
        let f = x.powi(m as i32 + 1) - x - 1.0;
        let df = (m as f64 + 1.0) * x.powi(m as i32) - 1.0;
        let next = x - f / df;
        if (next - x).abs() < 1e-16 {
            break;
        }
        x = next;
    }
    (1..=m).map(|j| x.powi(-(j as i32)).fract()).collect()
}

fn phases_from_unit(u: &[f64], keep: &[bool]) -> Vec<Complex64> {
    u.iter()
        .zip(keep)
        .map(|(x, k)| {
            if *k {
                Complex64::from_polar(1.0, std::f64::consts::TAU * x)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .collect()
}

/// Lattice and uniform clouds; entries with `keep[k] = false` get `t_k = 0`.
pub(crate) struct TorusClouds {
    pub lattice: Vec<Complex64>,
    pub random: Vec<Complex64>,
}

pub(crate) fn sample_clouds(data: &SymbolData, keep: &[bool], sampler: &TorusSampler) -> TorusClouds {
    let m = data.len();
    let alpha = kronecker_shifts(m);
    let lattice = (1..=sampler.lattice_points)
        .into_par_iter()
        .flat_map_iter(|n| {
            let u: Vec<f64> = alpha.iter().map(|a| (0.5 + n as f64 * a).fract()).collect();
            let mut out = Vec::with_capacity(data.size());
            eigen_of_phases(data, &phases_from_unit(&u, keep), &mut out);
            out
        })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(sampler.seed);
    let draws: Vec<Vec<f64>> = (0..sampler.random_points)
        .map(|_| (0..m).map(|_| rng.gen::<f64>()).collect())
        .collect();
    let random = draws
        .par_iter()
        .flat_map_iter(|u| {
            let mut out = Vec::with_capacity(data.size());
            eigen_of_phases(data, &phases_from_unit(u, keep), &mut out);
            out
        })
        .collect();
    TorusClouds { lattice, random }
}

impl TorusClouds {
    pub fn resolution(&self) -> f64 {
        2.0 * PointIndex::new(&self.lattice).directed_from(&self.random)
    }

    pub fn into_approx(self, sample_count: usize) -> SpectrumApprox {
        let resolution = self.resolution();
        let mut points = self.lattice;
        points.extend(self.random);
        SpectrumApprox {
            points,
            method: SpectrumMethod::TorusSampling,
            annulus: None,
            sample_count,
            resolution,
        }
    }
}

/// Eigenvalues of `Ξ(t)` over torus samples.
pub fn spectrum_torus(
    data: &SymbolData,
    relation: &RelationReport,
    sampler: &TorusSampler,
) -> Result<SpectrumApprox, SpectraError> {
    if !relation.is_independent() {
        return Err(SpectraError::HypothesisNotMet(
            "torus sampling needs independent logarithms along some coordinate".into(),
        ));
    }
    sampler.validate()?;
    let keep = vec![true; data.len()];
    Ok(sample_clouds(data, &keep, sampler).into_approx(sampler.total()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arithmetic::{check_log_independence, DEFAULT_BOUND, DEFAULT_TOLERANCE};
    use crate::model::{validate_spec, ScaleEntry};

    fn re(v: f64) -> Complex64 {
        Complex64::new(v, 0.0)
    }

    #[test]
    fn golden_ratio_in_one_dimension() {
        let a = kronecker_shifts(1);
        assert!((a[0] - (5f64.sqrt() - 1.0) / 2.0).abs() < 1e-15);
        // plastic number for m = 2
        let a = kronecker_shifts(2);
        assert!((1.0 / a[0] - 1.324_717_957_244_746).abs() < 1e-12);
    }

    #[test]
    fn single_entry_gives_circle() {
        let spec = validate_spec(1, vec![ScaleEntry::scalar(0, re(1.0), 2.0, 1)]).unwrap();
        let data = SymbolData::from_spec(&spec).unwrap();
        let rel = check_log_independence(&[2.0], DEFAULT_BOUND, DEFAULT_TOLERANCE).unwrap();
        let sampler = TorusSampler {
            lattice_points: 5000,
            random_points: 500,
            seed: 1,
        };
        let cloud = spectrum_torus(&data, &rel, &sampler).unwrap();
        let r = 2f64.powf(-0.5);
        assert!(cloud.points.iter().all(|z| (z.norm() - r).abs() < 1e-12));
        assert!(cloud.resolution < 0.01);
    }

    #[test]
    fn dependent_relation_is_rejected() {
        let spec = validate_spec(1, vec![ScaleEntry::scalar(0, re(1.0), 2.0, 1), ScaleEntry::scalar(1, re(1.0), 4.0, 1)])
            .unwrap();
        let data = SymbolData::from_spec(&spec).unwrap();
        let rel = check_log_independence(&[2.0, 4.0], DEFAULT_BOUND, DEFAULT_TOLERANCE).unwrap();
        assert!(matches!(
            spectrum_torus(&data, &rel, &TorusSampler::default()),
            Err(SpectraError::HypothesisNotMet(_))
        ));
    }

    #[test]
    fn sampling_is_deterministic() {
        let spec = validate_spec(1, vec![ScaleEntry::scalar(0, re(1.0), 2.0, 1), ScaleEntry::scalar(1, re(1.0), 3.0, 1)])
            .unwrap();
        let data = SymbolData::from_spec(&spec).unwrap();
        let rel = check_log_independence(&[2.0, 3.0], DEFAULT_BOUND, DEFAULT_TOLERANCE).unwrap();
        let sampler = TorusSampler {
            lattice_points: 2000,
            random_points: 200,
            seed: 7,
        };
        let a = spectrum_torus(&data, &rel, &sampler).unwrap();
        let b = spectrum_torus(&data, &rel, &sampler).unwrap();
        assert_eq!(a, b);
    }
}
