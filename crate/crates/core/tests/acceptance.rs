//! Acceptance criteria 1 to 11. All criteria run in one test so their
//! timings do not compete; each prints a PASS/FAIL line and the test fails
//! if any criterion does.

use std::f64::consts::{FRAC_1_SQRT_2, LN_2, PI, SQRT_2};
use std::time::Instant;

use hausdorff_spectra::arithmetic::{
    check_exact_independence, check_log_independence, Verdict, DEFAULT_BOUND, DEFAULT_TOLERANCE,
};
use hausdorff_spectra::linalg::char_det;
use hausdorff_spectra::model::{validate_spec, EntryFamily, ExactPower, GeometricPrimeFamily, OperatorSpec, ScaleEntry};
use hausdorff_spectra::operator::{near_extremizer, norm_ratio_experiment, random_gaussians, sharpness_experiment, single_ratio};
use hausdorff_spectra::spectra::{
    analytic_curve, annulus_analytic, default_probes, hausdorff_distance, operator_norm_grid, point_spectrum,
    resolve_grid, rotational_invariance_check, scalar_ranges_grid, spectrum_frequency_grid, spectrum_torus,
    truncation_convergence, weyl_classify, GridPlan, SpectrumApprox, TorusSampler,
};
use hausdorff_spectra::symbols::{conjugate_scalar_symbol, matrix_symbol, scalar_symbol, SymbolData};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn scalar_spec(d: usize, terms: &[(Complex64, f64)]) -> OperatorSpec {
    let entries = terms
        .iter()
        .enumerate()
        .map(|(k, &(coef, a))| ScaleEntry::scalar(k as i64, coef, a, d))
        .collect();
    validate_spec(d, entries).unwrap()
}

fn integer_dilations(bases: &[u64]) -> OperatorSpec {
    let entries = bases
        .iter()
        .enumerate()
        .map(|(k, &b)| ScaleEntry::scalar(k as i64, c(1.0, 0.0), b as f64, 1).with_exact(vec![ExactPower::integer(b)]))
        .collect();
    validate_spec(1, entries).unwrap()
}

fn remark_spec() -> OperatorSpec {
    scalar_spec(1, &[(c(1.0, 0.0), 1.0), (c(1.0, 0.0), 2.0)])
}

fn cell_growth_spec() -> OperatorSpec {
    validate_spec(
        2,
        vec![
            ScaleEntry::diagonal(0, c(1.0, 0.0), &[1.0, 1.0]),
            ScaleEntry::diagonal(1, c(1.0, 0.0), &[2.0, 1.0]),
        ],
    )
    .unwrap()
}

fn ross_spec() -> OperatorSpec {
    scalar_spec(1, &[(c(1.0, 0.0), 1.0), (c(1.0, 0.0), 0.5), (c(1.0, 0.0), 0.25)])
}

fn circle(center: Complex64, radius: f64) -> SpectrumApprox {
    analytic_curve(|t| center + Complex64::from_polar(radius, t), 10_000)
}

fn ensure(ok: bool, detail: String) -> Check {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn criterion_1() -> Check {
    let data = SymbolData::from_spec(&remark_spec()).unwrap();
    let grid = resolve_grid(&data, &GridPlan::fixed(200.0 / LN_2, 0.01)).unwrap();
    let cloud = spectrum_frequency_grid(&data, &grid);
    let dist = hausdorff_distance(&cloud.points, &circle(c(1.0, 0.0), FRAC_1_SQRT_2).points).unwrap();
    let inv = rotational_invariance_check(&cloud, &[PI], None).unwrap();
    ensure(
        dist <= 1e-2 && !inv.passed,
        format!(
            "dist_H = {dist:.3e} (≤ 1e-2), rotation at π: distance {:.3} vs tol {:.2e} → {}",
            inv.distances[0].1,
            inv.tolerance,
            if inv.passed { "Pass" } else { "Fail" }
        ),
    )
}

fn criterion_2() -> Check {
    let data = SymbolData::from_spec(&cell_growth_spec()).unwrap();
    // the phase advances 0.005 rad per step, a tenth of the automatic step
    let grid = resolve_grid(&data, &GridPlan::fixed(30.0 * PI / LN_2, 0.005 / LN_2)).unwrap();
    let cloud = spectrum_frequency_grid(&data, &grid);
    let dist = hausdorff_distance(&cloud.points, &circle(c(1.0, 0.0), FRAC_1_SQRT_2).points).unwrap();
    ensure(dist <= 1e-2, format!("dist_H = {dist:.3e} (≤ 1e-2), {} grid points", grid.len()))
}

fn criterion_3() -> Check {
    let r = |z: Complex64| 1.0 + z + z * z;
    let curve = analytic_curve(|t| r(Complex64::from_polar(SQRT_2, t)), 10_000);
    let oracle_max = (0..1_000_000)
        .map(|j| r(Complex64::from_polar(SQRT_2, 2.0 * PI * j as f64 / 1e6)).norm())
        .fold(0.0, f64::max);
    let data = SymbolData::from_spec(&ross_spec()).unwrap();
    let grid = resolve_grid(&data, &GridPlan::fixed(30.0 * PI / LN_2, 0.0025 / LN_2)).unwrap();
    let cloud = spectrum_frequency_grid(&data, &grid);
    let dist = hausdorff_distance(&cloud.points, &curve.points).unwrap();
    let norm = operator_norm_grid(&data, &grid).sup;
    ensure(
        dist <= 1e-2 && (norm - oracle_max).abs() <= 1e-3,
        format!("dist_H = {dist:.3e} (≤ 1e-2), ‖R‖ = {norm:.9} vs max|r| = {oracle_max:.9} (≤ 1e-3)"),
    )
}

fn criterion_4() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let angles: Vec<f64> = (0..8).map(|_| rng.gen_range(0.0..2.0 * PI)).collect();
    let mut ok = true;
    let mut lines = Vec::new();
    for bases in [vec![2u64, 3], vec![2, 3, 5]] {
        let spec = integer_dilations(&bases);
        let data = SymbolData::from_spec(&spec).unwrap();
        let exact: Vec<ExactPower> = bases.iter().map(|&b| ExactPower::integer(b)).collect();
        let relation = check_exact_independence(&exact).unwrap();
        let ann = annulus_analytic(&data, &relation).unwrap().annulus.unwrap();
        let cloud = spectrum_torus(&data, &relation, &TorusSampler::default()).unwrap();
        let inv = rotational_invariance_check(&cloud, &angles, None).unwrap();
        let (e_in, e_out) = ((cloud.min_modulus() - ann.r_in).abs(), (cloud.max_modulus() - ann.r_out).abs());
        ok &= e_in <= 1e-3 && e_out <= 1e-3 && inv.passed;
        lines.push(format!(
            "a = {bases:?}: |min − r_in| = {e_in:.2e}, |max − r_out| = {e_out:.2e} (≤ 1e-3), rotation {} (tol {:.1e})",
            if inv.passed { "Pass" } else { "Fail" },
            inv.tolerance
        ));
    }
    ensure(ok, lines.join("; "))
}

fn criterion_5() -> Check {
    let family = GeometricPrimeFamily::new(0.5, 1).unwrap();
    let orders: Vec<u64> = (5..=10).collect();
    let steps =
        truncation_convergence(&family, &orders, &TorusSampler::default(), DEFAULT_BOUND, DEFAULT_TOLERANCE).unwrap();
    let worst = steps
        .iter()
        .map(|s| s.distance - (s.bound + 2.0 * s.resolution))
        .fold(f64::NEG_INFINITY, f64::max);
    let decreasing = steps.windows(2).all(|w| w[1].bound < w[0].bound);
    ensure(
        steps.iter().all(|s| s.within_bound) && decreasing,
        format!(
            "n = 5..10: max(distance − bound − 2·res) = {worst:.2e} (≤ 0), bounds decreasing: {decreasing}, tail(5) = {:.3e}",
            family.tail_bound(5).unwrap()
        ),
    )
}

fn criterion_6() -> Check {
    let spec = scalar_spec(1, &[(c(1.0, 0.0), 2.0), (c(1.0, 0.0), -3.0)]);
    let data = SymbolData::from_spec(&spec).unwrap();
    let grid = resolve_grid(&data, &GridPlan::default()).unwrap();
    let matrix = spectrum_frequency_grid(&data, &grid);
    let ranges = scalar_ranges_grid(&data, &grid).unwrap();
    let dist = hausdorff_distance(&matrix.points, &ranges.points).unwrap();
    let combined = matrix.resolution + ranges.resolution;
    ensure(dist <= combined, format!("dist_H = {dist:.3e} vs combined resolution {combined:.3e}"))
}

fn criterion_7() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst: f64 = 0.0;
    for d in 1..=3 {
        let spec = scalar_spec(d, &[(c(1.0, 0.5), 2.0), (c(-0.7, 0.2), -3.0), (c(0.4, -1.1), -0.6)]);
        let data = SymbolData::from_spec(&spec).unwrap();
        for _ in 0..20 {
            let s: Vec<f64> = (0..d).map(|_| rng.gen_range(-20.0..20.0)).collect();
            let lambda = c(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
            let det = char_det(lambda, &matrix_symbol(&data, &s).unwrap().matrix);
            let phi = scalar_symbol(&data, &s).unwrap();
            let phi_star = conjugate_scalar_symbol(&data, &s).unwrap();
            let expected = ((lambda - phi) * (lambda - phi_star)).powu(1 << (d - 1));
            worst = worst.max((det - expected).norm() / expected.norm().max(f64::MIN_POSITIVE));
        }
    }
    ensure(worst <= 1e-8, format!("max relative error {worst:.2e} over 60 pairs (≤ 1e-8)"))
}

fn criterion_8() -> Check {
    let family = GeometricPrimeFamily::new(0.5, 1).unwrap();
    let specs = [
        ("remark-circle", remark_spec()),
        ("cell-growth", cell_growth_spec()),
        ("ross-circle", ross_spec()),
        ("prime-annulus", family.truncation(4).unwrap()),
        ("two-term-annulus", integer_dilations(&[2, 3])),
        ("three-term-disc", integer_dilations(&[2, 3, 5])),
    ];
    let mut ok = true;
    let mut worst_margin = f64::INFINITY;
    for (name, spec) in &specs {
        let fns = random_gaussians(spec.dimension(), 20, 8);
        let report = norm_ratio_experiment(spec, &fns, 1e-4).unwrap();
        let margin = report.symbol_sup + 1e-4 - report.max_ratio;
        worst_margin = worst_margin.min(margin);
        if margin < 0.0 {
            ok = false;
            eprintln!("  {name}: max ratio {} exceeds sup {}", report.max_ratio, report.symbol_sup);
        }
    }
    let spec = remark_spec();
    let data = SymbolData::from_spec(&spec).unwrap();
    let sup = operator_norm_grid(&data, &resolve_grid(&data, &GridPlan::default()).unwrap()).sup;
    let ratio = single_ratio(&spec, &near_extremizer(2.0, 1e-6)).unwrap();
    ok &= ratio >= 0.98 * sup;
    ensure(
        ok,
        format!(
            "6 specs × 20 Gaussians: min(sup + 1e-4 − ratio) = {worst_margin:.3e}; near-extremizer {ratio:.6} vs 0.98·sup = {:.6}",
            0.98 * sup
        ),
    )
}

fn criterion_9() -> Check {
    let coeffs = [(1u64, 1.0), (2, 1.0)];
    let closed = 1.0 + SQRT_2 * (1.0 - LN_2 / (12.0 * 10f64.ln()));
    let at_6 = sharpness_experiment(2.0, &coeffs, 1e-6).unwrap().ratio;
    let ratios: Vec<f64> = [1e-2, 1e-4, 1e-6, 1e-8]
        .iter()
        .map(|&t| sharpness_experiment(2.0, &coeffs, t).unwrap().ratio)
        .collect();
    let limit = 1.0 + SQRT_2;
    let monotone = ratios.windows(2).all(|w| w[1] > w[0]) && ratios.iter().all(|&r| r < limit);
    let gap = (limit - ratios[3]) / limit;
    ensure(
        (at_6 - closed).abs() <= 1e-9 && monotone && gap <= 0.01,
        format!(
            "ratio(1e-6) − closed form = {:.2e} (≤ 1e-9); ratios {:?}; monotone: {monotone}; final gap {:.3}% (≤ 1%)",
            at_6 - closed,
            ratios.iter().map(|r| format!("{r:.6}")).collect::<Vec<_>>(),
            100.0 * gap
        ),
    )
}

fn criterion_10() -> Check {
    let lambda = c(1.5, -0.5);
    let probes = default_probes(1, 24, 0);
    let classify = |spec: &OperatorSpec, logs: &[f64]| {
        let data = SymbolData::from_spec(spec).unwrap();
        let relation = check_log_independence(logs, DEFAULT_BOUND, DEFAULT_TOLERANCE).unwrap();
        let cloud = spectrum_frequency_grid(&data, &resolve_grid(&data, &GridPlan::default()).unwrap());
        let points = point_spectrum(&data, &probes);
        (cloud, points.values.clone(), weyl_classify(&data, &spectrum_frequency_grid(&data, &resolve_grid(&data, &GridPlan::default()).unwrap()), &points, &relation))
    };
    let near = |a: &[Complex64], b: &[Complex64]| {
        a.len() == b.len() && a.iter().all(|x| b.iter().any(|y| (x - y).norm() < 1e-9))
    };
    let mut notes = Vec::new();
    let mut ok = true;

    let (cloud, sp, class) = classify(&scalar_spec(1, &[(lambda, 1.0)]), &[1.0]);
    let class = class.unwrap();
    let identity_ok =
        near(&sp, &[lambda]) && class.weyl_equals_spectrum && cloud.points.iter().all(|z| (z - lambda).norm() < 1e-12);
    ok &= identity_ok;
    notes.push(format!("λI: σ_p = {sp:?}, σ_ew = σ = {{λ}}: {identity_ok}"));

    let (_, sp, _) = classify(&integer_dilations(&[2, 3]), &[2.0, 3.0]);
    ok &= sp.is_empty();
    notes.push(format!("two-term positive-definite: σ_p = {sp:?}"));

    let (_, sp, _) = classify(&scalar_spec(1, &[(lambda, -1.0)]), &[1.0]);
    let refl_ok = near(&sp, &[lambda, -lambda]);
    ok &= refl_ok;
    notes.push(format!("λJ: σ_p = {{±λ}}: {refl_ok}"));

    let spec = integer_dilations(&[2, 3]);
    let data = SymbolData::from_spec(&spec).unwrap();
    let relation = check_exact_independence(&[ExactPower::integer(2), ExactPower::integer(3)]).unwrap();
    let sampler = TorusSampler {
        lattice_points: 200_000,
        random_points: 10_000,
        seed: 0,
    };
    let cloud = spectrum_torus(&data, &relation, &sampler).unwrap();
    let class = weyl_classify(&data, &cloud, &point_spectrum(&data, &probes), &relation).unwrap();
    ok &= class.weyl_equals_spectrum;
    notes.push(format!("annulus r_in > 0: weyl_equals_spectrum = {}", class.weyl_equals_spectrum));
    ensure(ok, notes.join("; "))
}

/// Exponent vector of `base^(num/den)` over the primes below 30, scaled by 6
/// so that every entry is an integer for `den ∈ {1, 2, 3}`.
fn scaled_exponents(v: &ExactPower) -> Vec<i64> {
    const PRIMES: [u64; 10] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29];
    let mut n = v.base;
    PRIMES
        .iter()
        .map(|&p| {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            6 * e * v.num / v.den as i64
        })
        .collect()
}

/// Brute force over `[−L, L]^m` in exact integer arithmetic.
fn has_small_relation(values: &[ExactPower], bound: i64) -> bool {
    let vecs: Vec<Vec<i64>> = values.iter().map(scaled_exponents).collect();
    let m = vecs.len();
    let width = (2 * bound + 1) as usize;
    (1..width.pow(m as u32)).any(|code| {
        let mut rest = code;
        let mut l = vec![0i64; m];
        for x in l.iter_mut() {
            *x = (rest % width) as i64 - bound;
            rest /= width;
        }
        l.iter().any(|&x| x != 0) && (0..vecs[0].len()).all(|row| (0..m).map(|k| l[k] * vecs[k][row]).sum::<i64>() == 0)
    })
}

fn criterion_11() -> Check {
    let mut notes = Vec::new();
    let r = check_exact_independence(&[2, 3, 5].map(ExactPower::integer)).unwrap();
    let mut ok = r.verdict == Verdict::ExactlyIndependent;
    notes.push(format!("{{2,3,5}}: {:?}", r.verdict));

    let r = check_exact_independence(&[2, 4].map(ExactPower::integer)).unwrap();
    let rel = r.relation.clone().unwrap_or_default();
    let two_four = r.verdict == Verdict::Dependent && (rel == vec![2, -1] || rel == vec![-2, 1]);
    ok &= two_four;
    notes.push(format!("{{2,4}}: {:?} {rel:?}", r.verdict));

    let exact_one = check_exact_independence(&[ExactPower::new(1, 2, 0, 1), ExactPower::integer(2)]).unwrap();
    let numeric_one = check_log_independence(&[1.0, 2.0], DEFAULT_BOUND, DEFAULT_TOLERANCE).unwrap();
    ok &= exact_one.verdict == Verdict::Dependent && numeric_one.verdict == Verdict::Dependent;
    notes.push(format!("{{1,2}}: exact {:?}, numeric {:?}", exact_one.verdict, numeric_one.verdict));

    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut disagreements = 0;
    let mut dependent = 0;
    for _ in 0..100 {
        let m = rng.gen_range(2..=4);
        let forms: Vec<ExactPower> = (0..m)
            .map(|_| ExactPower::new(1, rng.gen_range(2..=30), rng.gen_range(1..=3), rng.gen_range(1..=3)))
            .collect();
        let exact = check_exact_independence(&forms).unwrap();
        let logs: Vec<f64> = forms.iter().map(|f| f.value()).collect();
        let numeric = check_log_independence(&logs, DEFAULT_BOUND, DEFAULT_TOLERANCE).unwrap();
        let small = has_small_relation(&forms, DEFAULT_BOUND as i64);
        let expected_numeric = if small { Verdict::Dependent } else { Verdict::IndependentUpToBound };
        let consistent = numeric.verdict == expected_numeric
            && (exact.verdict == Verdict::Dependent) == (small || exact.verdict == Verdict::Dependent)
            && (!small || exact.verdict == Verdict::Dependent);
        if !consistent {
            disagreements += 1;
            eprintln!("  disagreement on {forms:?}: exact {:?}, numeric {:?}", exact.verdict, numeric.verdict);
        }
        dependent += usize::from(exact.verdict == Verdict::Dependent);
    }
    ok &= disagreements == 0;
    notes.push(format!("100 random forms: {disagreements} disagreements ({dependent} dependent)"));
    ensure(ok, notes.join("; "))
}

struct Criterion {
    id: u32,
    title: &'static str,
    limit_secs: Option<f64>,
    run: fn() -> Check,
}

#[test]
fn acceptance_criteria() {
    let criteria = [
        Criterion { id: 1, title: "remark circle", limit_secs: Some(5.0), run: criterion_1 },
        Criterion { id: 2, title: "cell-growth circle", limit_secs: Some(10.0), run: criterion_2 },
        Criterion { id: 3, title: "Ross identity", limit_secs: None, run: criterion_3 },
        Criterion { id: 4, title: "annulus analytics vs torus", limit_secs: Some(30.0), run: criterion_4 },
        Criterion { id: 5, title: "truncation bound", limit_secs: Some(60.0), run: criterion_5 },
        Criterion { id: 6, title: "scalar ranges vs matrix symbol", limit_secs: None, run: criterion_6 },
        Criterion { id: 7, title: "Schur factorization", limit_secs: None, run: criterion_7 },
        Criterion { id: 8, title: "norm inequality", limit_secs: None, run: criterion_8 },
        Criterion { id: 9, title: "sharpness convergence", limit_secs: None, run: criterion_9 },
        Criterion { id: 10, title: "point/Weyl classification", limit_secs: None, run: criterion_10 },
        Criterion { id: 11, title: "relations", limit_secs: None, run: criterion_11 },
    ];
    let mut failed = Vec::new();
    for cr in &criteria {
        let start = Instant::now();
        let result = (cr.run)();
        let secs = start.elapsed().as_secs_f64();
        let in_time = cr.limit_secs.is_none_or(|limit| secs <= limit);
        let limit = cr.limit_secs.map_or(String::new(), |l| format!(" / {l:.0}s"));
        let (passed, detail) = match result {
            Ok(d) => (in_time, d),
            Err(d) => (false, d),
        };
        println!(
            "criterion {:>2} {:<32} {}  [{secs:.2}s{limit}]  {detail}",
            cr.id,
            cr.title,
            if passed { "PASS" } else { "FAIL" }
        );
        if !passed {
            failed.push(cr.id);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
