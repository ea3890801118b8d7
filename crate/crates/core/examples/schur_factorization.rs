//! For scalar dilations with mixed signs the 2^d × 2^d matrix symbol has
//! characteristic polynomial ((λ − φ)(λ − φ*))^{2^{d−1}}.

use hausdorff_spectra::linalg::char_det;
use hausdorff_spectra::model::{validate_spec, ScaleEntry};
use hausdorff_spectra::symbols::{conjugate_scalar_symbol, matrix_symbol, scalar_symbol, SymbolData};
use num_complex::Complex64;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for d in 1..=3 {
        let spec = validate_spec(
            d,
            vec![
                ScaleEntry::scalar(0, Complex64::new(1.0, 0.5), 2.0, d),
                ScaleEntry::scalar(1, Complex64::new(-0.7, 0.2), -3.0, d),
            ],
        )?;
        let data = SymbolData::from_spec(&spec)?;
        let s: Vec<f64> = (0..d).map(|j| 0.3 + 0.7 * j as f64).collect();
        let eval = matrix_symbol(&data, &s)?;
        let phi = scalar_symbol(&data, &s)?;
        let phi_star = conjugate_scalar_symbol(&data, &s)?;
        println!("d = {d}: Φ(s) is {0}×{0}, φ = {phi:.5}, φ* = {phi_star:.5}", eval.matrix.nrows());
        for lambda in [Complex64::new(0.0, 0.0), Complex64::new(1.0, -1.0), phi] {
            let lhs = char_det(lambda, &eval.matrix);
            let rhs = ((lambda - phi) * (lambda - phi_star)).powu(1 << (d - 1));
            println!("  λ = {lambda:.3}: det(λ − Φ) = {lhs:.6e}, factored = {rhs:.6e}");
        }
    }
    Ok(())
}
