//! A two-dimensional operator `c0·f(x) + c1·f(αx₁, x₂)` whose spectrum is a
//! circle of radius |c1|/√α around c0.

use hausdorff_spectra::model::{validate_spec, ScaleEntry};
use hausdorff_spectra::spectra::{analytic_curve, hausdorff_distance, resolve_grid, spectrum_frequency_grid, GridPlan};
use hausdorff_spectra::symbols::SymbolData;
use num_complex::Complex64;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (alpha, c0, c1) in [(2.0, 1.0, 1.0), (3.0, 0.5, -2.0), (0.25, 0.0, 1.0)] {
        let spec = validate_spec(
            2,
            vec![
                ScaleEntry::diagonal(0, Complex64::new(c0, 0.0), &[1.0, 1.0]),
                ScaleEntry::diagonal(1, Complex64::new(c1, 0.0), &[alpha, 1.0]),
            ],
        )?;
        let data = SymbolData::from_spec(&spec)?;
        let auto = resolve_grid(&data, &GridPlan::default())?;
        // ten times finer than the automatic step
        let grid = resolve_grid(&data, &GridPlan::fixed(auto.span, auto.step / 10.0))?;
        let cloud = spectrum_frequency_grid(&data, &grid);
        let radius = f64::abs(c1) / f64::sqrt(alpha);
        let circle = analytic_curve(|t| Complex64::new(c0, 0.0) + Complex64::from_polar(radius, t), 10_000);
        println!(
            "α = {alpha:<5} c = ({c0}, {c1}): radius {radius:.6}, dist_H = {:.3e}, grid rank {}",
            hausdorff_distance(&cloud.points, &circle.points)?,
            grid.rank()
        );
    }
    Ok(())
}
