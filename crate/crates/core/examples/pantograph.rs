//! Decides whether `du/dt = (H + K)u` must have unbounded solutions, using
//! the named case study on the default two-term operator.

use hausdorff_spectra::cli::{run_case_study, CaseParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let params = CaseParams {
        samples: 100_000,
        ..CaseParams::default()
    };
    let (doc, passed) = run_case_study("pantograph-classify", &params, None, 0)?;
    println!("verdict: {}", doc.outputs["verdict"]);
    println!("reason:  {}", doc.outputs["reason"]);
    println!("checks passed: {passed}");
    Ok(())
}
