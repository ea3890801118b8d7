//! Integer relations among log|a(k)|: a bounded numeric search for floats
//! and an exact certificate for rational powers of integers.

use hausdorff_spectra::arithmetic::{
    check_exact_independence, check_log_independence, DEFAULT_BOUND, DEFAULT_TOLERANCE,
};
use hausdorff_spectra::model::ExactPower;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let numeric: [&[f64]; 4] = [&[2.0, 3.0], &[2.0, 4.0], &[2.0, 3.0, 6.0], &[2.0, std::f64::consts::PI]];
    for values in numeric {
        let r = check_log_independence(values, DEFAULT_BOUND, DEFAULT_TOLERANCE)?;
        println!("numeric {values:?}: {:?} relation {:?} residual {:.1e}", r.verdict, r.relation, r.residual);
    }

    let exact = [
        vec![ExactPower::integer(2), ExactPower::integer(3), ExactPower::integer(5)],
        vec![ExactPower::integer(4), ExactPower::new(1, 2, 3, 2)],
        vec![ExactPower::new(1, 12, 1, 3), ExactPower::integer(2), ExactPower::integer(3)],
        vec![ExactPower::new(1, 7, 0, 1), ExactPower::integer(7)],
    ];
    for values in &exact {
        let forms: Vec<String> = values.iter().map(|v| format!("{}^({}/{})", v.base, v.num, v.den)).collect();
        let r = check_exact_independence(values)?;
        println!("exact {forms:?}: {:?} relation {:?}", r.verdict, r.relation);
    }
    Ok(())
}
