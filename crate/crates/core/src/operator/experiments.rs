//! Norm-ratio experiments and the norm-sharpness construction.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::quadrature::{integrate, QuadratureEstimate, QuadraturePlan};
use super::{apply_l2_norm, default_plan, l2_norm, OperatorError, TestFunction};
use crate::model::OperatorSpec;
use crate::spectra::{operator_norm_grid, resolve_grid, GridPlan};
use crate::symbols::SymbolData;

/// Seeded Gaussians with centers in `[−2, 2]ᵈ` and widths in `[0.3, 2]`.
pub fn random_gaussians(dimension: usize, count: usize, seed: u64) -> Vec<TestFunction> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let center = (0..dimension).map(|_| rng.gen_range(-2.0..2.0)).collect();
            TestFunction::gaussian(center, rng.gen_range(0.3..2.0))
        })
        .collect()
}

/// `f_t(x) = x^{−1/p} χ_(t,1/t)(x)`, the near-extremal family for `‖H‖_p`.
pub fn near_extremizer(p: f64, t: f64) -> TestFunction {
    TestFunction::PowerCutoff { exponent: 1.0 / p, t }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormRatioReport {
    /// `‖Hf‖₂ / ‖f‖₂` per function.
    pub ratios: Vec<f64>,
    pub max_ratio: f64,
    pub best: usize,
    /// `sup ‖Φ(s)‖` over the automatic frequency grid.
    pub symbol_sup: f64,
    pub n2: f64,
    pub tolerance: f64,
    /// Every ratio is at most `min(symbol_sup, N₂) + tolerance + quadrature error`.
    pub within_bounds: bool,
    pub max_quadrature_error: f64,
}

/// Ratios `‖Hf‖₂/‖f‖₂` checked against the symbol supremum and `N₂`.
pub fn norm_ratio_experiment(
    spec: &OperatorSpec,
    functions: &[TestFunction],
    tolerance: f64,
) -> Result<NormRatioReport, OperatorError> {
    if functions.is_empty() {
        return Err(OperatorError::InvalidArgument("no test functions".into()));
    }
    let data = SymbolData::from_spec(spec)?;
    let grid = resolve_grid(&data, &GridPlan::default())?;
    let symbol_sup = operator_norm_grid(&data, &grid).sup;
    let n2 = spec.n2();

    let mut ratios = Vec::with_capacity(functions.len());
    let mut max_err: f64 = 0.0;
    let mut within = true;
    for f in functions {
        let plan = default_plan(Some(spec), f)
            .ok_or_else(|| OperatorError::InvalidArgument(format!("no integration box for {} function", f.kind())))?;
        let hf = apply_l2_norm(spec, f, &plan)?;
        let (fnorm, ferr) = match f.exact_l2_norm() {
            Some(v) => (v, 0.0),
            None => {
                let e = l2_norm(f, &plan)?;
                (e.value, e.error)
            }
        };
        if fnorm == 0.0 {
            return Err(OperatorError::InvalidArgument("test function has zero norm".into()));
        }
        let ratio = hf.value / fnorm;
        let err = (hf.error + ratio * ferr) / fnorm;
        max_err = max_err.max(err);
        within &= ratio <= symbol_sup.min(n2) + tolerance + err;
        ratios.push(ratio);
    }
    let (best, max_ratio) = ratios
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (i, r)| if r > acc.1 { (i, r) } else { acc });
    Ok(NormRatioReport {
        ratios,
        max_ratio,
        best,
        symbol_sup,
        n2,
        tolerance,
        within_bounds: within,
        max_quadrature_error: max_err,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SharpnessReport {
    pub p: f64,
    pub t: f64,
    /// `J_t / (2 log(1/t))`.
    pub ratio: f64,
    /// `N_p = Σ c(k) k^{1/p}` over the support.
    pub limit: f64,
    pub h_values: BTreeMap<u64, f64>,
}

fn check_sharpness_args(p: f64, t: f64, coefficients: &[(u64, f64)]) -> Result<(), OperatorError> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(OperatorError::BadExponent(p));
    }
    if !(t > 0.0 && t < 1.0) {
        return Err(OperatorError::InvalidArgument(format!("t = {t} must lie in (0, 1)")));
    }
    for &(k, c) in coefficients {
        if k == 0 || !(c >= 0.0 && c.is_finite()) {
            return Err(OperatorError::InvalidArgument(format!(
                "coefficients must be finite and nonnegative on k >= 1 (got c({k}) = {c})"
            )));
        }
    }
    Ok(())
}

/// `h_t(k) = ∫₀^∞ g_t(kx) f_t(x) dx` in closed form.
pub fn h_t_closed(p: f64, t: f64, k: u64) -> f64 {
    let q_inv = 1.0 - 1.0 / p;
    let log_inv_t = 2.0 * (1.0 / t).ln();
    let kf = k as f64;
    if k == 1 {
        log_inv_t
    } else if kf <= 1.0 / (t * t) {
        kf.powf(-q_inv) * (log_inv_t - kf.ln())
    } else {
        0.0
    }
}

/// `h_t(k)` by quadrature of `g_t(kx) f_t(x)` in logarithmic panels.
pub fn h_t_numeric(p: f64, t: f64, k: u64) -> QuadratureEstimate {
    let q_inv = 1.0 - 1.0 / p;
    let kf = k as f64;
    let cut = |x: f64| x > t && x < 1.0 / t;
    let integrand = |x: &[f64]| {
        let x = x[0];
        let g = if cut(kf * x) { (kf * x).powf(-q_inv) } else { 0.0 };
        let f = if cut(x) { x.powf(-1.0 / p) } else { 0.0 };
        g * f
    };
    let lo = (t / kf).min(t);
    let mut plan = QuadraturePlan::on_box(vec![lo], vec![1.0 / t]);
    plan.breakpoints = vec![vec![t, 1.0 / (kf * t), t / kf]];
    plan.log_panels = true;
    plan.initial_panels = 2;
    integrate(&integrand, &plan)
}

/// Lower-bound construction for `‖H‖_p` with `a(k) = 1/k`, from closed forms.
pub fn sharpness_experiment(p: f64, coefficients: &[(u64, f64)], t: f64) -> Result<SharpnessReport, OperatorError> {
    check_sharpness_args(p, t, coefficients)?;
    let mut h_values = BTreeMap::new();
    let mut j_t = 0.0;
    let mut limit = 0.0;
    for &(k, c) in coefficients {
        let h = h_t_closed(p, t, k);
        h_values.insert(k, h);
        j_t += c * k as f64 * h;
        limit += c * (k as f64).powf(1.0 / p);
    }
    Ok(SharpnessReport {
        p,
        t,
        ratio: j_t / (2.0 * (1.0 / t).ln()),
        limit,
        h_values,
    })
}

/// `‖Hf‖_p / ‖f‖_p` for `p ∈ {1, ∞}` with `a(k) = 1/k` and nonnegative `c`.
///
/// `p = 1` uses `f(x) = e^{−x}` on `x > 0`; `p = ∞` uses `f ≡ 1`. Both
/// attain `N_p` because the dilated copies of a nonnegative function add
/// without cancellation.
pub fn endpoint_ratio(p: f64, coefficients: &[(u64, f64)]) -> Result<f64, OperatorError> {
    for &(k, c) in coefficients {
        if k == 0 || !(c >= 0.0 && c.is_finite()) {
            return Err(OperatorError::InvalidArgument(format!(
                "coefficients must be finite and nonnegative on k >= 1 (got c({k}) = {c})"
            )));
        }
    }
    let hf = |x: f64, f: &dyn Fn(f64) -> f64| -> f64 {
        coefficients.iter().map(|&(k, c)| c * f(x / k as f64)).sum()
    };
    if p == 1.0 {
        let f = |x: f64| if x > 0.0 { (-x).exp() } else { 0.0 };
        let kmax = coefficients.iter().map(|(k, _)| *k).max().unwrap_or(1) as f64;
        let mut plan = QuadraturePlan::on_box(vec![0.0], vec![60.0 * kmax]);
        plan.breakpoints = vec![coefficients.iter().map(|(k, _)| *k as f64).collect()];
        let num = integrate(&|x: &[f64]| hf(x[0], &f).abs(), &plan).value;
        let den = integrate(&|x: &[f64]| f(x[0]).abs(), &plan).value;
        Ok(num / den)
    } else if p.is_infinite() {
        let f = |_: f64| 1.0;
        let sup = (0..1000)
            .map(|i| hf(-50.0 + 0.1 * i as f64, &f).abs())
            .fold(0.0, f64::max);
        Ok(sup)
    } else {
        Err(OperatorError::BadExponent(p))
    }
}

/// `‖Hf‖₂/‖f‖₂` for a single function, by quadrature with the default plan.
pub fn single_ratio(spec: &OperatorSpec, f: &TestFunction) -> Result<f64, OperatorError> {
    let plan = default_plan(Some(spec), f)
        .ok_or_else(|| OperatorError::InvalidArgument("function has unknown support".into()))?;
    let num = apply_l2_norm(spec, f, &plan)?.value;
    let den = match f.exact_l2_norm() {
        Some(v) => v,
        None => l2_norm(f, &plan)?.value,
    };
    Ok(num / den)
}
