//! Reads an operator from the JSON spec format and writes a result document.

use std::path::Path;

use hausdorff_spectra::cli::document::{digest_hex, parse_spec, ResultDocument};
use hausdorff_spectra::symbols::{norm_bound, SymbolData};
use hausdorff_spectra::spectra::{operator_norm_grid, resolve_grid, GridPlan};

const SPEC: &str = r#"{
  "schema_version": "1",
  "dimension": 2,
  "entries": [
    {"k": 0, "c": [1, 0], "matrix": [1, 0, 0, 1]},
    {"k": 1, "c": [0, 0.5], "matrix": [2, 1, 1, 2]}
  ]
}"#;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let loaded = parse_spec(SPEC.as_bytes(), Path::new("inline.json"))?;
    let spec = loaded.operator(10)?;
    let data = SymbolData::from_spec(&spec)?;
    let est = operator_norm_grid(&data, &resolve_grid(&data, &GridPlan::default())?);

    let mut doc = ResultDocument::new("norm", digest_hex(SPEC.as_bytes()), 0);
    doc.param("p", 2.0).output("n_p", norm_bound(&spec, 2.0)).output("symbol_sup", est.sup);
    print!("{}", doc.to_json());

    let broken = SPEC.replace("\"k\": 1,", "\"k\": 1, \"weight\": 3,");
    match parse_spec(broken.as_bytes(), Path::new("broken.json")) {
        Err(e) => println!("rejected: {e}"),
        Ok(_) => println!("unexpectedly accepted"),
    }
    Ok(())
}
