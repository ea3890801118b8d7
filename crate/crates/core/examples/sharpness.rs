//! The ratio ‖H f_t‖_p / ‖f_t‖_p for `f_t(x) = |x|^{−1/p − t}` near the
//! origin approaches N_p = Σ |c(k)| k^{−1/p} as t → 0.

use hausdorff_spectra::operator::{endpoint_ratio, sharpness_experiment};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let coeffs = [(1, 1.0), (2, 1.0)];
    for p in [1.5, 2.0, 4.0] {
        println!("p = {p}");
        for t in [1e-2, 1e-4, 1e-6, 1e-8] {
            let r = sharpness_experiment(p, &coeffs, t)?;
            println!("  t = {t:e}: ratio {:.6}, limit {:.6}", r.ratio, r.limit);
        }
    }
    for p in [1.0, f64::INFINITY] {
        println!("p = {p}: ratio {:.6}", endpoint_ratio(p, &coeffs)?);
    }
    Ok(())
}
