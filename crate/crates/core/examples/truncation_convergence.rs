//! Spectra of truncations `H^(n)` of the generator `c(k) = 2^{−k}`,
//! `a(k) = p_k` (k-th prime) approach each other within the tail bound.

use hausdorff_spectra::arithmetic::{DEFAULT_BOUND, DEFAULT_TOLERANCE};
use hausdorff_spectra::model::GeometricPrimeFamily;
use hausdorff_spectra::spectra::{truncation_convergence, TorusSampler};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let family = GeometricPrimeFamily::new(0.5, 1)?;
    let sampler = TorusSampler {
        lattice_points: 200_000,
        random_points: 2_000,
        seed: 1,
    };
    let orders: Vec<u64> = (3..=8).collect();
    let steps = truncation_convergence(&family, &orders, &sampler, DEFAULT_BOUND, DEFAULT_TOLERANCE)?;
    println!("{:>5} {:>12} {:>12} {:>12} {:>7}", "n", "dist_H", "tail bound", "resolution", "within");
    for s in &steps {
        println!(
            "{:>5} {:>12.4e} {:>12.4e} {:>12.4e} {:>7}",
            s.order, s.distance, s.bound, s.resolution, s.within_bound
        );
    }
    Ok(())
}
