//! Tensor-product Gauss–Legendre quadrature on boxes with panel refinement.
//!
//! Each axis is cut at the given breakpoints, every interval is split into
//! equal panels (equal in `log|x|` when log spacing is requested and the
//! interval avoids 0), and the panel count is doubled until two successive
//! estimates agree to the requested relative tolerance.

use std::sync::OnceLock;

use rayon::prelude::*;
use serde::Serialize;

/// Gauss–Legendre points per panel.
pub const NODES_PER_PANEL: usize = 16;
const MAX_EVALUATIONS: usize = 60_000_000;

/// Nodes and weights on `[−1, 1]`, from Newton iteration on `P_n`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for j in 2..=n {
                let p2 = ((2 * j - 1) as f64 * x * p1 - (j - 1) as f64 * p0) / j as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn rule() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(NODES_PER_PANEL))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuadraturePlan {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    /// Interior cut points per axis (values outside the box are ignored).
    pub breakpoints: Vec<Vec<f64>>,
    pub log_panels: bool,
    pub initial_panels: usize,
    pub max_refinements: usize,
    pub rel_tol: f64,
}

impl QuadraturePlan {
    pub fn on_box(lower: Vec<f64>, upper: Vec<f64>) -> Self {
        let d = lower.len();
        Self {
            lower,
            upper,
            breakpoints: vec![Vec::new(); d],
            log_panels: false,
            initial_panels: 4,
            max_refinements: 10,
            rel_tol: 1e-8,
        }
    }

    pub fn dimension(&self) -> usize {
        self.lower.len()
    }

    fn axis_nodes(&self, axis: usize, panels: usize) -> Vec<(f64, f64)> {
        let (lo, hi) = (self.lower[axis], self.upper[axis]);
        let mut cuts = vec![lo, hi];
        cuts.extend(self.breakpoints[axis].iter().copied().filter(|b| *b > lo && *b < hi));
        if self.log_panels && lo < 0.0 && hi > 0.0 {
            cuts.push(0.0);
        }
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        let (xs, ws) = rule();
        let mut out = Vec::with_capacity((cuts.len() - 1) * panels * NODES_PER_PANEL);
        for pair in cuts.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            let logarithmic = self.log_panels && a * b > 0.0;
            for j in 0..panels {
                let f0 = j as f64 / panels as f64;
                let f1 = (j + 1) as f64 / panels as f64;
                if logarithmic {
                    let sign = a.signum();
                    let (la, lb) = (a.abs().ln(), b.abs().ln());
                    let (u0, u1) = (la + (lb - la) * f0, la + (lb - la) * f1);
                    let (mid, half) = ((u0 + u1) / 2.0, (u1 - u0) / 2.0);
                    for (x, w) in xs.iter().zip(ws) {
                        let e = (mid + half * x).exp();
                        // dx = |x| du, and the orientation follows the sign
                        out.push((sign * e, w * half.abs() * e));
                    }
                } else {
                    let (p0, p1) = (a + (b - a) * f0, a + (b - a) * f1);
                    let (mid, half) = ((p0 + p1) / 2.0, (p1 - p0) / 2.0);
                    for (x, w) in xs.iter().zip(ws) {
                        out.push((mid + half * x, w * half));
                    }
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureEstimate {
    pub value: f64,
    /// Difference between the last two refinements.
    pub error: f64,
    pub evaluations: usize,
    pub converged: bool,
}

fn tensor_sum(g: &(dyn Fn(&[f64]) -> f64 + Sync), axes: &[Vec<(f64, f64)>]) -> f64 {
    let d = axes.len();
    if d == 0 {
        return g(&[]);
    }
    // parallel over the first axis, sequential inner sums, fixed-order reduction
    let partial: Vec<f64> = axes[0]
        .par_iter()
        .map(|&(x0, w0)| {
            let mut point = vec![0.0; d];
            point[0] = x0;
            let inner_len: usize = axes[1..].iter().map(Vec::len).product();
            let mut sum = 0.0;
            for flat in 0..inner_len {
                let mut rest = flat;
                let mut w = w0;
                for a in 1..d {
                    let (x, wa) = axes[a][rest % axes[a].len()];
                    rest /= axes[a].len();
                    point[a] = x;
                    w *= wa;
                }
                sum += w * g(&point);
            }
            sum
        })
        .collect();
    partial.iter().sum()
}

/// `∫_box g` with doubling refinement until successive estimates agree.
pub fn integrate(g: &(dyn Fn(&[f64]) -> f64 + Sync), plan: &QuadraturePlan) -> QuadratureEstimate {
    let d = plan.dimension();
    let mut panels = plan.initial_panels.max(1);
    let mut previous: Option<f64> = None;
    let mut evaluations = 0usize;
    let mut last = 0.0;
    let mut error = f64::INFINITY;
    for _ in 0..=plan.max_refinements {
        let axes: Vec<Vec<(f64, f64)>> = (0..d).map(|a| plan.axis_nodes(a, panels)).collect();
        let count: usize = axes.iter().map(Vec::len).product();
        if previous.is_some() && evaluations + count > MAX_EVALUATIONS {
            break;
        }
        evaluations += count;
        let value = tensor_sum(g, &axes);
        if let Some(prev) = previous {
            error = (value - prev).abs();
            last = value;
            if error <= plan.rel_tol * value.abs() || (value == 0.0 && prev == 0.0) {
                return QuadratureEstimate {
                    value,
                    error,
                    evaluations,
                    converged: true,
                };
            }
        } else {
            last = value;
        }
        previous = Some(value);
        panels *= 2;
    }
    QuadratureEstimate {
        value: last,
        error,
        evaluations,
        converged: false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rule_integrates_polynomials_exactly() {
        let (x, w) = gauss_legendre(NODES_PER_PANEL);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
        // degree 30 is within 2n − 1 = 31
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(30)).sum();
        assert!((s - 2.0 / 31.0).abs() < 1e-14);
    }

    #[test]
    fn gaussian_integral() {
        let plan = QuadraturePlan::on_box(vec![-10.0], vec![10.0]);
        let est = integrate(&|x: &[f64]| (-x[0] * x[0]).exp(), &plan);
        assert!(est.converged);
        assert!((est.value - std::f64::consts::PI.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn log_panels_handle_reciprocal() {
        let mut plan = QuadraturePlan::on_box(vec![1e-6], vec![1e6]);
        plan.log_panels = true;
        let est = integrate(&|x: &[f64]| 1.0 / x[0], &plan);
        assert!((est.value - 12.0 * 10f64.ln()).abs() < 1e-10);
        let mut neg = QuadraturePlan::on_box(vec![-1e3], vec![-1e-3]);
        neg.log_panels = true;
        let est = integrate(&|x: &[f64]| 1.0 / x[0].abs(), &neg);
        assert!((est.value - 6.0 * 10f64.ln()).abs() < 1e-10);
    }

    #[test]
    fn breakpoints_make_step_functions_exact() {
        let mut plan = QuadraturePlan::on_box(vec![-1.0], vec![2.0]);
        plan.breakpoints = vec![vec![0.0, 1.0]];
        let est = integrate(&|x: &[f64]| if (0.0..1.0).contains(&x[0]) { 1.0 } else { 0.0 }, &plan);
        assert!((est.value - 1.0).abs() < 1e-15);
    }

    #[test]
    fn two_dimensional_gaussian() {
        let plan = QuadraturePlan::on_box(vec![-8.0, -8.0], vec![8.0, 8.0]);
        let est = integrate(&|x: &[f64]| (-(x[0] * x[0] + x[1] * x[1])).exp(), &plan);
        assert!((est.value - std::f64::consts::PI).abs() < 1e-10);
    }
}
