//! `f(x) + f(2x)` on the line: its spectrum is the circle |z − 1| = 1/√2,
//! which is not invariant under rotation about the origin.

use std::f64::consts::{LN_2, PI};

use hausdorff_spectra::model::{validate_spec, ScaleEntry};
use hausdorff_spectra::spectra::{
    analytic_curve, hausdorff_distance, resolve_grid, rotational_invariance_check, spectrum_frequency_grid, GridPlan,
};
use hausdorff_spectra::symbols::SymbolData;
use num_complex::Complex64;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let one = Complex64::new(1.0, 0.0);
    let spec = validate_spec(1, vec![ScaleEntry::scalar(0, one, 1.0, 1), ScaleEntry::scalar(1, one, 2.0, 1)])?;
    let data = SymbolData::from_spec(&spec)?;

    // φ(s) = 1 + 2^{−1/2 − is} has period 2π/ln 2 in s
    let grid = resolve_grid(&data, &GridPlan::fixed(200.0 / LN_2, 0.01))?;
    let cloud = spectrum_frequency_grid(&data, &grid);
    let circle = analytic_curve(|t| one + Complex64::from_polar(0.5f64.sqrt(), t), 10_000);

    println!("grid points         {}", cloud.sample_count);
    println!("dist_H to circle    {:.3e}", hausdorff_distance(&cloud.points, &circle.points)?);
    let inv = rotational_invariance_check(&cloud, &[PI / 2.0, PI], None)?;
    for (angle, dist) in &inv.distances {
        println!("rotate by {angle:.4}     dist_H = {dist:.4} (tol {:.2e})", inv.tolerance);
    }
    println!("rotation invariant  {}", inv.passed);
    Ok(())
}
