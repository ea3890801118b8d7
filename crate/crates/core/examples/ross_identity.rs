//! `Σ c(k) f(q^{−k} x)` is a polynomial r in the dilation by q; its spectrum
//! is the image of the circle |z| = q^{d/2} under r, and its norm is the
//! maximum of |r| there.

use std::f64::consts::TAU;

use hausdorff_spectra::model::{validate_spec, ScaleEntry};
use hausdorff_spectra::spectra::{
    analytic_curve, hausdorff_distance, operator_norm_grid, resolve_grid, spectrum_frequency_grid, GridPlan,
};
use hausdorff_spectra::symbols::SymbolData;
use num_complex::Complex64;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let q: f64 = 2.0;
    let coeffs = [1.0, -0.5, 0.25, 1.0];
    for d in 1..=2 {
        let entries = coeffs
            .iter()
            .enumerate()
            .map(|(k, &c)| ScaleEntry::scalar(k as i64, Complex64::new(c, 0.0), q.powi(-(k as i32)), d))
            .collect();
        let spec = validate_spec(d, entries)?;
        let data = SymbolData::from_spec(&spec)?;

        let radius = q.powf(d as f64 / 2.0);
        let r = |z: Complex64| -> Complex64 { coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c) };
        let image = analytic_curve(|t| r(Complex64::from_polar(radius, t)), 10_000);
        let max_r = (0..100_000)
            .map(|j| r(Complex64::from_polar(radius, TAU * j as f64 / 1e5)).norm())
            .fold(0.0, f64::max);

        let auto = resolve_grid(&data, &GridPlan::default())?;
        // ten times finer than the automatic step
        let grid = resolve_grid(&data, &GridPlan::fixed(auto.span, auto.step / 10.0))?;
        let cloud = spectrum_frequency_grid(&data, &grid);
        let norm = operator_norm_grid(&data, &grid);
        println!("d = {d}: circle radius {radius:.4}");
        println!("  dist_H(grid cloud, r(circle)) = {:.3e}", hausdorff_distance(&cloud.points, &image.points)?);
        println!("  ‖R‖ from symbol = {:.9}, max |r| = {max_r:.9}", norm.sup);
    }
    Ok(())
}
