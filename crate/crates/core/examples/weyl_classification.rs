//! Point spectrum and Weyl classification: a multiple of the identity, a
//! reflection, and a two-term operator with an annular spectrum.

use hausdorff_spectra::arithmetic::{check_log_independence, DEFAULT_BOUND, DEFAULT_TOLERANCE};
use hausdorff_spectra::model::{validate_spec, ScaleEntry};
use hausdorff_spectra::spectra::{
    default_probes, point_spectrum, resolve_grid, spectrum_frequency_grid, spectrum_torus, weyl_classify, GridPlan,
    TorusSampler,
};
use hausdorff_spectra::symbols::SymbolData;
use num_complex::Complex64;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let lambda = Complex64::new(1.5, -0.5);
    let one = Complex64::new(1.0, 0.0);
    let cases = [
        ("λI", vec![ScaleEntry::scalar(0, lambda, 1.0, 1)]),
        ("λJ", vec![ScaleEntry::scalar(0, lambda, -1.0, 1)]),
        ("f(2x) + f(3x)", vec![ScaleEntry::scalar(0, one, 2.0, 1), ScaleEntry::scalar(1, one, 3.0, 1)]),
    ];
    for (name, entries) in cases {
        let spec = validate_spec(1, entries)?;
        let data = SymbolData::from_spec(&spec)?;
        let moduli: Vec<f64> = spec.entries().iter().map(|e| e.abs_det()).collect();
        let relation = check_log_independence(&moduli, DEFAULT_BOUND, DEFAULT_TOLERANCE)?;
        let cloud = if relation.is_independent() {
            spectrum_torus(&data, &relation, &TorusSampler::default())?
        } else {
            spectrum_frequency_grid(&data, &resolve_grid(&data, &GridPlan::default())?)
        };
        let points = point_spectrum(&data, &default_probes(1, 24, 0));
        let class = weyl_classify(&data, &cloud, &points, &relation)?;
        println!("{name}");
        println!("  point spectrum     {:?}", points.values);
        println!("  |σ| range          [{:.6}, {:.6}]", cloud.min_modulus(), cloud.max_modulus());
        println!("  π₀₀ {:?}, σ_ew = σ: {}, rotation {:?}", class.pi00, class.weyl_equals_spectrum, class.rotation_invariant);
    }
    Ok(())
}
