//! ‖Hf‖₂ / ‖f‖₂ for random Gaussians stays below sup‖Φ‖, and a slowly
//! decaying power function nearly attains it.

use hausdorff_spectra::model::{validate_spec, ScaleEntry};
use hausdorff_spectra::operator::{near_extremizer, norm_ratio_experiment, random_gaussians, single_ratio};
use num_complex::Complex64;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let one = Complex64::new(1.0, 0.0);
    let spec = validate_spec(1, vec![ScaleEntry::scalar(0, one, 1.0, 1), ScaleEntry::scalar(1, one, 2.0, 1)])?;

    let report = norm_ratio_experiment(&spec, &random_gaussians(1, 20, 3), 1e-4)?;
    println!("symbol sup {:.6}   N₂ {:.6}", report.symbol_sup, report.n2);
    println!("20 Gaussians: max ratio {:.6} (function #{})", report.max_ratio, report.best);
    for t in [1e-2, 1e-4, 1e-6] {
        let ratio = single_ratio(&spec, &near_extremizer(2.0, t))?;
        println!("near extremizer t = {t:e}: ratio {ratio:.6} ({:.2}% of sup)", 100.0 * ratio / report.symbol_sup);
    }
    Ok(())
}
