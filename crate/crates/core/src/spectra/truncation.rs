//! Convergence of truncated spectra `σ(H⁽ⁿ⁾) → σ(H)` against the tail bound.
//!
//! All truncations are sampled on one torus: the sample for `H⁽ⁿ⁾` is the
//! sample for the largest truncation with the omitted variables set to zero.
//! Coupling the clouds this way makes their distance reflect the operators
//! rather than two unrelated sampling patterns.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::Serialize;

use super::hausdorff::hausdorff_distance;
use super::torus::{sample_clouds, TorusSampler};
use super::SpectraError;
use crate::arithmetic::strongest_coordinate;
use crate::model::{simultaneous_diagonalize, EntryFamily};
use crate::symbols::SymbolData;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TruncationStep {
    pub order: u64,
    /// `dist_H(σ̂⁽ⁿ⁾, σ̂⁽ⁿ⁺¹⁾)` between the sampled clouds.
    pub distance: f64,
    /// `Σ_{|k|>n} |c(k)|/√|det A(k)|`.
    pub bound: f64,
    /// Larger of the two cloud resolutions.
    pub resolution: f64,
    pub within_bound: bool,
}

struct Cloud {
    points: Vec<Complex64>,
    resolution: f64,
}

/// One step per order `n`, comparing `H⁽ⁿ⁾` with `H⁽ⁿ⁺¹⁾`.
///
/// Every truncation involved must pass the independence check at the given
/// search bound and tolerance.
pub fn truncation_convergence(
    family: &dyn EntryFamily,
    orders: &[u64],
    sampler: &TorusSampler,
    bound: u32,
    tol: f64,
) -> Result<Vec<TruncationStep>, SpectraError> {
    let mut orders = orders.to_vec();
    orders.sort_unstable();
    orders.dedup();
    let Some(&last) = orders.last() else {
        return Ok(Vec::new());
    };
    let full = family.truncation(last + 1)?;
    let data = SymbolData::from_spec(&full)?;

    let mut cache: BTreeMap<u64, Cloud> = BTreeMap::new();
    let cloud_for = |m: u64, cache: &mut BTreeMap<u64, Cloud>| -> Result<(), SpectraError> {
        if cache.contains_key(&m) {
            return Ok(());
        }
        let trunc = family.truncation(m)?;
        let diag = simultaneous_diagonalize(&trunc)?;
        let (_, report) = strongest_coordinate(&trunc, &diag, bound, tol)?;
        if !report.is_independent() {
            return Err(SpectraError::HypothesisNotMet(format!(
                "truncation n={m} has dependent logarithms"
            )));
        }
        let keep: Vec<bool> = data.indices().iter().map(|k| k.unsigned_abs() <= m).collect();
        let clouds = sample_clouds(&data, &keep, sampler);
        let resolution = clouds.resolution();
        let mut points = clouds.lattice;
        points.extend(clouds.random);
        cache.insert(m, Cloud { points, resolution });
        Ok(())
    };

    let mut steps = Vec::with_capacity(orders.len());
    for &n in &orders {
        cloud_for(n, &mut cache)?;
        cloud_for(n + 1, &mut cache)?;
        let (a, b) = (&cache[&n], &cache[&(n + 1)]);
        let distance = hausdorff_distance(&a.points, &b.points)?;
        let resolution = a.resolution.max(b.resolution);
        let tail = family.tail_bound(n)?;
        steps.push(TruncationStep {
            order: n,
            distance,
            bound: tail,
            resolution,
            within_bound: distance <= tail + 2.0 * resolution,
        });
        cache.retain(|&m, _| m > n);
    }
    Ok(steps)
}
