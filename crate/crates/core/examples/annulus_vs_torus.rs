//! Compares the analytic annulus with a torus-sampled cloud for two
//! independent families: a two-term annulus and a three-term disc.

use hausdorff_spectra::arithmetic::check_exact_independence;
use hausdorff_spectra::model::{validate_spec, ExactPower, ScaleEntry};
use hausdorff_spectra::spectra::{annulus_analytic, rotational_invariance_check, spectrum_torus, TorusSampler};
use hausdorff_spectra::symbols::SymbolData;
use num_complex::Complex64;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for bases in [vec![2u64, 3], vec![2, 3, 5]] {
        let entries = bases
            .iter()
            .enumerate()
            .map(|(k, &b)| {
                ScaleEntry::scalar(k as i64, Complex64::new(1.0, 0.0), b as f64, 1)
                    .with_exact(vec![ExactPower::integer(b)])
            })
            .collect();
        let spec = validate_spec(1, entries)?;
        let data = SymbolData::from_spec(&spec)?;
        let exact: Vec<ExactPower> = bases.iter().map(|&b| ExactPower::integer(b)).collect();
        let relation = check_exact_independence(&exact)?;

        let analytic = annulus_analytic(&data, &relation)?;
        let ann = analytic.annulus.expect("annulus radii");
        let cloud = spectrum_torus(&data, &relation, &TorusSampler::default())?;
        let angles = [0.37, 0.9, 1.4, 2.2, 2.9, 3.6, 4.4, 5.8];
        let inv = rotational_invariance_check(&cloud, &angles, None)?;

        println!("a(k) = {bases:?} ({:?})", relation.verdict);
        println!("  analytic  r_in = {:.6}  r_out = {:.6}", ann.r_in, ann.r_out);
        println!(
            "  torus     min  = {:.6}  max   = {:.6}  ({} samples, resolution {:.2e})",
            cloud.min_modulus(),
            cloud.max_modulus(),
            cloud.sample_count,
            cloud.resolution
        );
        println!(
            "  rotation invariance: {} (tol {:.2e}, worst {:.2e})",
            if inv.passed { "pass" } else { "fail" },
            inv.tolerance,
            inv.distances.iter().map(|d| d.1).fold(0.0, f64::max)
        );
    }
    Ok(())
}
