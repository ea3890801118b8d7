//! ℤ-linear independence of logarithms `log |a_ν(k)|`.
//!
//! Two routes:
//!
//! * [`check_log_independence`] searches every nonzero integer vector
//!   `l ∈ [−L, L]ᵐ` for the smallest `|Σ l_k log x_k|`. The search is
//!   exhaustive but runs in `O((2L+1)^{m/2})` time and `O((2L+1)^{m/4})`
//!   memory: vectors are normalised so their first nonzero coordinate is
//!   positive, the coordinates are split into four groups, and the two
//!   pairwise sum lists are streamed in sorted order from heaps
//!   (Schroeppel–Shamir) into a two-pointer scan for the minimum of `|x + y|`.
//! * [`check_exact_independence`] handles values given as `±base^(num/den)`:
//!   after prime factorisation a relation is a rational null vector of the
//!   exponent matrix, found by exact elimination.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use num_rational::Ratio;
use num_traits::{CheckedMul, CheckedSub};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{DiagonalizedFamily, ExactPower, OperatorSpec};

/// Default coefficient bound `L`.
pub const DEFAULT_BOUND: u32 = 10;
/// Default residual threshold below which a combination counts as a relation.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;
/// Largest admissible search space `(2L+1)^m`: twelve values at `L = 10`.
pub const SEARCH_BUDGET: f64 = 7_355_827_511_386_641.0; // 21^12
/// Largest base accepted by the exact path.
pub const MAX_EXACT_BASE: u64 = 1_000_000_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ArithmeticError {
    #[error("value #{0} is not a positive finite number")]
    NonPositive(usize),
    #[error("search space (2*{bound}+1)^{count} exceeds the budget")]
    SearchTooLarge { count: usize, bound: u32 },
    #[error("base {0} exceeds the factorisation budget")]
    BaseTooLarge(u64),
    #[error("malformed exact value #{0}")]
    Malformed(usize),
    #[error("exponent arithmetic overflowed")]
    Overflow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Dependent,
    IndependentUpToBound,
    ExactlyIndependent,
}

impl Verdict {
    pub fn is_independent(self) -> bool {
        self != Verdict::Dependent
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelationReport {
    pub verdict: Verdict,
    /// Integer vector with `Σ l_k log x_k ≈ 0`, present iff dependent.
    pub relation: Option<Vec<i64>>,
    /// `|Σ l_k log x_k|` of the relation, or the smallest value found when independent.
    pub residual: f64,
    pub search_bound: u32,
}

impl RelationReport {
    pub fn is_independent(&self) -> bool {
        self.verdict.is_independent()
    }
}

/// Bounded exhaustive search for an integer relation among `log values[k]`.
pub fn check_log_independence(values: &[f64], bound: u32, tol: f64) -> Result<RelationReport, ArithmeticError> {
    for (i, v) in values.iter().enumerate() {
        if !(v.is_finite() && *v > 0.0) {
            return Err(ArithmeticError::NonPositive(i));
        }
    }
    let m = values.len();
    let logs: Vec<f64> = values.iter().map(|v| v.ln()).collect();
    if let Some(i) = values.iter().position(|v| *v == 1.0) {
        let mut relation = vec![0; m];
        relation[i] = 1;
        return Ok(RelationReport {
            verdict: Verdict::Dependent,
            relation: Some(relation),
            residual: 0.0,
            search_bound: bound.max(1),
        });
    }
    if bound == 0 || m == 0 {
        return Ok(RelationReport {
            verdict: Verdict::IndependentUpToBound,
            relation: None,
            residual: f64::INFINITY,
            search_bound: bound,
        });
    }
    if f64::from(2 * bound + 1).powi(m as i32) > SEARCH_BUDGET {
        return Err(ArithmeticError::SearchTooLarge { count: m, bound });
    }

    let best = (0..m)
        .into_par_iter()
        .map(|lead| search_with_lead(&logs, lead, bound as i64))
        .collect::<Vec<_>>()
        .into_iter()
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .expect("at least one lead");

    let (mut residual, mut relation) = best;
    if residual <= tol {
        let g = relation.iter().fold(0i64, |g, v| gcd(g, v.abs()));
        if g > 1 {
            relation.iter_mut().for_each(|v| *v /= g);
        }
        residual = combination(&logs, &relation).abs();
        Ok(RelationReport {
            verdict: Verdict::Dependent,
            relation: Some(relation),
            residual,
            search_bound: bound,
        })
    } else {
        Ok(RelationReport {
            verdict: Verdict::IndependentUpToBound,
            relation: None,
            residual,
            search_bound: bound,
        })
    }
}

fn combination(logs: &[f64], l: &[i64]) -> f64 {
    logs.iter().zip(l).map(|(x, c)| x * *c as f64).sum()
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// One coordinate group: its positions and, per position, the coefficient range.
struct Group {
    coords: Vec<usize>,
    ranges: Vec<(i64, i64)>,
}

impl Group {
    fn combos(&self, logs: &[f64]) -> Vec<(f64, u64)> {
        let total: u64 = self.ranges.iter().map(|(lo, hi)| (hi - lo + 1) as u64).product();
        let mut out = Vec::with_capacity(total as usize);
        for code in 0..total {
            let coeffs = self.decode(code);
            let s: f64 = self.coords.iter().zip(&coeffs).map(|(c, l)| logs[*c] * *l as f64).sum();
            out.push((s, code));
        }
        out
    }

    fn decode(&self, mut code: u64) -> Vec<i64> {
        self.ranges
            .iter()
            .map(|(lo, hi)| {
                let width = (hi - lo + 1) as u64;
                let v = lo + (code % width) as i64;
                code /= width;
                v
            })
            .collect()
    }
}

#[derive(PartialEq)]
struct Key(f64);

impl Eq for Key {}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Key {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

/// Ascending stream of `a[i] + b[j]` over all pairs.
struct SortedSums<'a> {
    a: &'a [(f64, u64)],
    b: &'a [(f64, u64)],
    heap: BinaryHeap<Reverse<(Key, usize, usize)>>,
}

impl<'a> SortedSums<'a> {
    fn new(a: &'a [(f64, u64)], b: &'a [(f64, u64)]) -> Self {
        let mut heap = BinaryHeap::with_capacity(a.len());
        if !b.is_empty() {
            for (i, x) in a.iter().enumerate() {
                heap.push(Reverse((Key(x.0 + b[0].0), i, 0)));
            }
        }
        Self { a, b, heap }
    }
}

impl Iterator for SortedSums<'_> {
    /// (sum, code in a, code in b)
    type Item = (f64, u64, u64);

    fn next(&mut self) -> Option<Self::Item> {
        let Reverse((Key(s), i, j)) = self.heap.pop()?;
        if j + 1 < self.b.len() {
            self.heap.push(Reverse((Key(self.a[i].0 + self.b[j + 1].0), i, j + 1)));
        }
        Some((s, self.a[i].1, self.b[j].1))
    }
}

/// Minimum of `|Σ l_k x_k|` over `l` with `l_0..l_{lead-1} = 0` and `l_lead ∈ [1, L]`.
fn search_with_lead(logs: &[f64], lead: usize, bound: i64) -> (f64, Vec<i64>) {
    let m = logs.len();
    let free: Vec<usize> = (lead + 1..m).collect();
    // four groups; the lead coordinate joins the first
    let mut groups: Vec<Group> = (0..4).map(|_| Group { coords: vec![], ranges: vec![] }).collect();
    groups[0].coords.push(lead);
    groups[0].ranges.push((1, bound));
    let n_free = free.len();
    // sizes chosen so the lead group (range L) balances the others (range 2L+1)
    let mut cuts = [0usize; 4];
    for (g, cut) in cuts.iter_mut().enumerate() {
        *cut = ((n_free + 1) * (g + 1)).div_ceil(4).saturating_sub(1).min(n_free);
    }
    let mut start = 0;
    for g in 0..4 {
        for &c in &free[start..cuts[g]] {
            groups[g].coords.push(c);
            groups[g].ranges.push((-bound, bound));
        }
        start = cuts[g];
    }

    let mut lists: Vec<Vec<(f64, u64)>> = groups.iter().map(|g| g.combos(logs)).collect();
    for l in lists.iter_mut() {
        l.sort_by(|x, y| x.0.total_cmp(&y.0));
    }
    // the second pair is streamed descending by streaming the negated sums ascending
    let neg2: Vec<(f64, u64)> = lists[2].iter().rev().map(|(s, c)| (-s, *c)).collect();
    let neg3: Vec<(f64, u64)> = lists[3].iter().rev().map(|(s, c)| (-s, *c)).collect();

    let mut up = SortedSums::new(&lists[0], &lists[1]);
    let mut down = SortedSums::new(&neg2, &neg3);

    let mut x = up.next();
    let mut y = down.next().map(|(s, a, b)| (-s, a, b));
    let mut best = (f64::INFINITY, (0u64, 0u64, 0u64, 0u64));
    while let (Some(xv), Some(yv)) = (x, y) {
        let s = xv.0 + yv.0;
        if s.abs() < best.0 {
            best = (s.abs(), (xv.1, xv.2, yv.1, yv.2));
        }
        if s > 0.0 {
            y = down.next().map(|(s, a, b)| (-s, a, b));
        } else {
            x = up.next();
        }
    }

    let mut relation = vec![0i64; m];
    let codes = [best.1 .0, best.1 .1, best.1 .2, best.1 .3];
    for (g, code) in groups.iter().zip(codes) {
        for (c, v) in g.coords.iter().zip(g.decode(code)) {
            relation[*c] = v;
        }
    }
    (combination(logs, &relation).abs(), relation)
}

/// Decides independence exactly for values `±base^(num/den)`.
pub fn check_exact_independence(values: &[ExactPower]) -> Result<RelationReport, ArithmeticError> {
    let m = values.len();
    let mut primes: Vec<u64> = Vec::new();
    let mut factored = Vec::with_capacity(m);
    for (i, v) in values.iter().enumerate() {
        if !v.is_well_formed() {
            return Err(ArithmeticError::Malformed(i));
        }
        if v.base > MAX_EXACT_BASE {
            return Err(ArithmeticError::BaseTooLarge(v.base));
        }
        let f = factorize(v.base);
        for (p, _) in &f {
            if !primes.contains(p) {
                primes.push(*p);
            }
        }
        factored.push(f);
    }
    primes.sort_unstable();

    // exponent matrix: rows = primes, columns = values
    let mut rows: Vec<Vec<Ratio<i128>>> = primes
        .iter()
        .map(|p| {
            values
                .iter()
                .zip(&factored)
                .map(|(v, f)| {
                    let e = f.iter().find(|(q, _)| q == p).map_or(0, |(_, e)| *e) as i128;
                    Ratio::new(e * v.num as i128, v.den as i128)
                })
                .collect()
        })
        .collect();

    let pivots = row_reduce(&mut rows, m)?;
    let logs: Vec<f64> = values.iter().map(ExactPower::log_abs).collect();
    let Some(free) = (0..m).find(|c| !pivots.contains(c)) else {
        return Ok(RelationReport {
            verdict: Verdict::ExactlyIndependent,
            relation: None,
            residual: f64::INFINITY,
            search_bound: 1,
        });
    };

    let zero = Ratio::from_integer(0);
    let mut x = vec![zero; m];
    x[free] = Ratio::from_integer(1);
    for (r, &pc) in pivots.iter().enumerate() {
        x[pc] = -rows[r][free];
    }
    let lcm = x.iter().fold(1i128, |acc, q| lcm_i128(acc, *q.denom()));
    let mut ints: Vec<i128> = x.iter().map(|q| q.numer() * (lcm / q.denom())).collect();
    let g = ints.iter().fold(0i128, |g, v| gcd_i128(g, v.abs()));
    if g > 1 {
        ints.iter_mut().for_each(|v| *v /= g);
    }
    if ints.iter().find(|v| **v != 0).is_some_and(|v| *v < 0) {
        ints.iter_mut().for_each(|v| *v = -*v);
    }
    let relation: Vec<i64> = ints
        .iter()
        .map(|v| i64::try_from(*v).map_err(|_| ArithmeticError::Overflow))
        .collect::<Result<_, _>>()?;
    let max_coeff = relation.iter().map(|v| v.unsigned_abs()).max().unwrap_or(1);
    Ok(RelationReport {
        verdict: Verdict::Dependent,
        residual: combination(&logs, &relation).abs(),
        relation: Some(relation),
        search_bound: u32::try_from(max_coeff.max(1)).unwrap_or(u32::MAX),
    })
}

/// Gauss–Jordan elimination over ℚ; returns the pivot columns.
fn row_reduce(rows: &mut [Vec<Ratio<i128>>], ncols: usize) -> Result<Vec<usize>, ArithmeticError> {
    let zero = Ratio::from_integer(0);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| rows[i][c] != zero) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for v in rows[r].iter_mut() {
            *v = checked_mul(*v, inv)?;
        }
        for i in 0..rows.len() {
            if i != r && rows[i][c] != zero {
                let f = rows[i][c];
                for j in 0..ncols {
                    let t = checked_mul(f, rows[r][j])?;
                    rows[i][j] = rows[i][j]
                        .checked_sub(&t)
                        .ok_or(ArithmeticError::Overflow)?;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    Ok(pivots)
}

fn checked_mul(a: Ratio<i128>, b: Ratio<i128>) -> Result<Ratio<i128>, ArithmeticError> {
    a.checked_mul(&b).ok_or(ArithmeticError::Overflow)
}

fn gcd_i128(a: i128, b: i128) -> i128 {
    if b == 0 {
        a
    } else {
        gcd_i128(b, a % b)
    }
}

fn lcm_i128(a: i128, b: i128) -> i128 {
    a / gcd_i128(a, b) * b
}

fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Independence of `log |a_ν(k)|` for each eigen coordinate `ν`.
///
/// Uses the exact path when every entry carries exact eigenvalues (matched to
/// the diagonalizer's columns by value), the bounded search otherwise.
pub fn independence_by_coordinate(
    spec: &OperatorSpec,
    diag: &DiagonalizedFamily,
    bound: u32,
    tol: f64,
) -> Result<Vec<RelationReport>, ArithmeticError> {
    let d = spec.dimension();
    let exact_columns = exact_by_column(spec, diag);
    (0..d)
        .map(|nu| match &exact_columns {
            Some(cols) => check_exact_independence(&cols[nu]),
            None => {
                let vals: Vec<f64> = diag.eigen_tuples().iter().map(|a| a[nu].abs()).collect();
                check_log_independence(&vals, bound, tol)
            }
        })
        .collect()
}

/// The coordinate with the strongest verdict (first such on ties).
pub fn strongest_coordinate(
    spec: &OperatorSpec,
    diag: &DiagonalizedFamily,
    bound: u32,
    tol: f64,
) -> Result<(usize, RelationReport), ArithmeticError> {
    let reports = independence_by_coordinate(spec, diag, bound, tol)?;
    let mut best = 0;
    for (i, r) in reports.iter().enumerate() {
        if r.verdict > reports[best].verdict {
            best = i;
        }
    }
    Ok((best, reports[best].clone()))
}

fn exact_by_column(spec: &OperatorSpec, diag: &DiagonalizedFamily) -> Option<Vec<Vec<ExactPower>>> {
    let d = spec.dimension();
    let mut cols: Vec<Vec<ExactPower>> = vec![Vec::with_capacity(spec.len()); d];
    for (e, a) in spec.entries().iter().zip(diag.eigen_tuples()) {
        let exact = e.exact_eigenvalues.as_ref()?;
        let mut used = vec![false; exact.len()];
        for (nu, col) in cols.iter_mut().enumerate() {
            let pick = (0..exact.len())
                .filter(|i| !used[*i])
                .min_by(|x, y| {
                    (exact[*x].value() - a[nu])
                        .abs()
                        .total_cmp(&(exact[*y].value() - a[nu]).abs())
                })?;
            used[pick] = true;
            col.push(exact[pick]);
        }
    }
    Some(cols)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Plain enumeration of every nonzero vector in `[−L, L]ᵐ`, as an oracle.
    fn brute_force_min(values: &[f64], bound: i64) -> f64 {
        let logs: Vec<f64> = values.iter().map(|v| v.ln()).collect();
        let m = logs.len();
        let width = (2 * bound + 1) as usize;
        let mut best = f64::INFINITY;
        for code in 1..width.pow(m as u32) {
            let mut c = code;
            let mut s = 0.0;
            let mut nonzero = false;
            for x in &logs {
                let l = (c % width) as i64 - bound;
                c /= width;
                nonzero |= l != 0;
                s += *x * l as f64;
            }
            if nonzero {
                best = best.min(s.abs());
            }
        }
        best
    }

    #[test]
    fn two_three_independent() {
        for bound in [1, 3, 10] {
            let r = check_log_independence(&[2.0, 3.0], bound, DEFAULT_TOLERANCE).unwrap();
            assert_eq!(r.verdict, Verdict::IndependentUpToBound);
            assert!(r.relation.is_none());
        }
    }

    #[test]
    fn two_four_dependent() {
        let r = check_log_independence(&[2.0, 4.0], 10, DEFAULT_TOLERANCE).unwrap();
        assert_eq!(r.verdict, Verdict::Dependent);
        assert_eq!(r.relation, Some(vec![2, -1]));
        assert!(r.residual < 1e-12);
    }

    #[test]
    fn unit_value_is_dependent() {
        let r = check_log_independence(&[1.0, 2.0], 10, DEFAULT_TOLERANCE).unwrap();
        assert_eq!(r.verdict, Verdict::Dependent);
        assert_eq!(r.relation, Some(vec![1, 0]));
    }

    #[test]
    fn budget_is_enforced() {
        let vals: Vec<f64> = (2..15).map(f64::from).collect();
        assert!(matches!(
            check_log_independence(&vals, 10, DEFAULT_TOLERANCE),
            Err(ArithmeticError::SearchTooLarge { count: 13, bound: 10 })
        ));
        assert!(check_log_independence(&[0.0, 2.0], 3, DEFAULT_TOLERANCE).is_err());
    }

    #[test]
    fn six_primes_independent_at_bound_ten() {
        let vals = [2.0, 3.0, 5.0, 7.0, 11.0, 13.0];
        let r = check_log_independence(&vals, 10, DEFAULT_TOLERANCE).unwrap();
        assert_eq!(r.verdict, Verdict::IndependentUpToBound);
        assert!(r.residual > 1e-7);
    }

    // 21^10 combinations packed into a window of width ~460 leave gaps far
    // below 1e-9, so ten primes produce a numerical near-relation
    #[test]
    fn ten_primes_hit_a_near_relation() {
        let vals = [2.0, 3.0, 5.0, 7.0, 11.0, 13.0, 17.0, 19.0, 23.0, 29.0];
        let r = check_log_independence(&vals, 10, DEFAULT_TOLERANCE).unwrap();
        assert_eq!(r.verdict, Verdict::Dependent);
        let l = r.relation.unwrap();
        let s: f64 = l.iter().zip(&vals).map(|(a, x)| *a as f64 * x.ln()).sum();
        assert!(s.abs() <= DEFAULT_TOLERANCE && l.iter().all(|a| a.abs() <= 10));
    }

    #[test]
    fn exact_examples() {
        let r = check_exact_independence(&[ExactPower::integer(2), ExactPower::integer(3), ExactPower::integer(5)]).unwrap();
        assert_eq!(r.verdict, Verdict::ExactlyIndependent);

        let r = check_exact_independence(&[ExactPower::new(1, 2, 1, 2), ExactPower::new(1, 2, 1, 3)]).unwrap();
        assert_eq!(r.relation, Some(vec![2, -3]));

        let r = check_exact_independence(&[ExactPower::integer(6), ExactPower::integer(2), ExactPower::integer(3)]).unwrap();
        assert_eq!(r.relation, Some(vec![1, -1, -1]));
        assert!(r.residual < 1e-12);

        let r = check_exact_independence(&[ExactPower::new(-1, 2, 0, 1), ExactPower::integer(3)]).unwrap();
        assert_eq!(r.relation, Some(vec![1, 0]));

        assert!(matches!(
            check_exact_independence(&[ExactPower::integer(2_000_000_011)]),
            Err(ArithmeticError::BaseTooLarge(_))
        ));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn search_matches_brute_force(
            vals in proptest::collection::vec(1.1f64..50.0, 1..=4),
            bound in 1u32..=4,
        ) {
            let r = check_log_independence(&vals, bound, 0.0).unwrap();
            let oracle = brute_force_min(&vals, bound as i64);
            prop_assert!((r.residual - oracle).abs() <= 1e-12 * (1.0 + oracle),
                "search {} vs brute force {}", r.residual, oracle);
        }

        #[test]
        fn dependent_relations_are_sound(
            bases in proptest::collection::vec(2u64..12, 2..=4),
            bound in 2u32..=6,
        ) {
            let vals: Vec<f64> = bases.iter().map(|b| *b as f64).collect();
            let r = check_log_independence(&vals, bound, DEFAULT_TOLERANCE).unwrap();
            if let Some(l) = &r.relation {
                prop_assert!(l.iter().any(|v| *v != 0));
                prop_assert!(l.iter().all(|v| v.unsigned_abs() <= bound as u64));
                let s: f64 = vals.iter().zip(l).map(|(v, c)| v.ln() * *c as f64).sum();
                prop_assert!(s.abs() <= DEFAULT_TOLERANCE);
            }
        }

        #[test]
        fn lists_with_one_are_dependent(mut vals in proptest::collection::vec(1.5f64..20.0, 0..4), pos in 0usize..4) {
            let pos = pos.min(vals.len());
            vals.insert(pos, 1.0);
            let r = check_log_independence(&vals, 3, DEFAULT_TOLERANCE).unwrap();
            prop_assert_eq!(r.verdict, Verdict::Dependent);
        }
    }
}
