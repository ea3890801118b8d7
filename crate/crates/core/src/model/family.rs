//! Infinite coefficient families, seen through truncations and tail bounds.

use num_complex::Complex64;

use super::spec::{validate_spec, ExactPower, OperatorSpec, ScaleEntry};
use super::ModelError;

/// A (possibly infinite) family of entries, available as truncations `|k| ≤ n`
/// together with an upper bound on the omitted mass `Σ_{|k|>n} |c(k)|/√|det A(k)|`.
pub trait EntryFamily: Send + Sync {
    fn dimension(&self) -> usize;

    /// Entries with `|k| ≤ n`.
    fn entries_up_to(&self, n: u64) -> Vec<ScaleEntry>;

    /// Upper bound on `‖R_n‖`.
    fn tail_bound(&self, n: u64) -> Result<f64, ModelError>;

    fn truncation(&self, n: u64) -> Result<OperatorSpec, ModelError> {
        validate_spec(self.dimension(), self.entries_up_to(n))
    }
}

impl EntryFamily for OperatorSpec {
    fn dimension(&self) -> usize {
        OperatorSpec::dimension(self)
    }

    fn entries_up_to(&self, n: u64) -> Vec<ScaleEntry> {
        self.entries()
            .iter()
            .filter(|e| e.index.unsigned_abs() <= n)
            .cloned()
            .collect()
    }

    fn tail_bound(&self, n: u64) -> Result<f64, ModelError> {
        Ok(self
            .entries()
            .iter()
            .filter(|e| e.index.unsigned_abs() > n)
            .map(|e| e.symbol_weight().norm())
            .sum())
    }
}

/// `c(k) = ratio^k`, `A(k) = p_k · I_d` for `k ≥ 1`, `p_k` the k-th prime.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometricPrimeFamily {
    ratio: f64,
    dimension: usize,
}

impl GeometricPrimeFamily {
    pub fn new(ratio: f64, dimension: usize) -> Result<Self, ModelError> {
        if !(ratio > 0.0 && ratio < 1.0) || dimension == 0 {
            return Err(ModelError::InvalidGenerator(format!(
                "geometric-prime needs 0 < ratio < 1 and dimension >= 1 (got {ratio}, {dimension})"
            )));
        }
        Ok(Self { ratio, dimension })
    }

    pub fn ratio(&self) -> f64 {
        self.ratio
    }

    fn weight(&self, k: u64) -> f64 {
        self.ratio.powi(k as i32) * (nth_prime(k) as f64).powf(-(self.dimension as f64) / 2.0)
    }
}

impl EntryFamily for GeometricPrimeFamily {
    fn dimension(&self) -> usize {
        self.dimension
    }

    fn entries_up_to(&self, n: u64) -> Vec<ScaleEntry> {
        (1..=n)
            .map(|k| {
                let p = nth_prime(k);
                ScaleEntry::scalar(
                    k as i64,
                    Complex64::new(self.ratio.powi(k as i32), 0.0),
                    p as f64,
                    self.dimension,
                )
                .with_exact(vec![ExactPower::integer(p); self.dimension])
            })
            .collect()
    }

    /// Terms are summed until they fall below machine precision relative to
    /// the running total; the remainder is bounded by a geometric majorant.
    fn tail_bound(&self, n: u64) -> Result<f64, ModelError> {
        let mut sum = 0.0;
        let mut k = n + 1;
        loop {
            let w = self.weight(k);
            sum += w;
            k += 1;
            if w <= f64::EPSILON * sum * 1e-3 || k > n + 400 {
                break;
            }
        }
        let rest = self.ratio.powi(k as i32) / (1.0 - self.ratio)
            * (nth_prime(k) as f64).powf(-(self.dimension as f64) / 2.0);
        // absorb summation rounding so the value stays an upper bound
        Ok((sum + rest) * (1.0 + 8.0 * f64::EPSILON))
    }
}

/// Listed entries plus a declared geometric tail `C · ρ^n` for everything not listed.
#[derive(Debug, Clone, PartialEq)]
pub struct CustomTailFamily {
    listed: OperatorSpec,
    tail: Option<(f64, f64)>,
}

impl CustomTailFamily {
    pub fn new(listed: OperatorSpec, tail_constant: Option<f64>, tail_ratio: Option<f64>) -> Result<Self, ModelError> {
        let tail = match (tail_constant, tail_ratio) {
            (Some(c), Some(r)) => {
                if !(c >= 0.0 && (0.0..1.0).contains(&r)) {
                    return Err(ModelError::InvalidGenerator(format!(
                        "custom-tail needs tail_constant >= 0 and 0 <= tail_ratio < 1 (got {c}, {r})"
                    )));
                }
                Some((c, r))
            }
            (None, None) => None,
            _ => {
                return Err(ModelError::InvalidGenerator(
                    "custom-tail needs both tail_constant and tail_ratio".into(),
                ))
            }
        };
        Ok(Self { listed, tail })
    }

    pub fn listed(&self) -> &OperatorSpec {
        &self.listed
    }
}

impl EntryFamily for CustomTailFamily {
    fn dimension(&self) -> usize {
        self.listed.dimension()
    }

    fn entries_up_to(&self, n: u64) -> Vec<ScaleEntry> {
        self.listed.entries_up_to(n)
    }

    fn tail_bound(&self, n: u64) -> Result<f64, ModelError> {
        let (c, r) = self.tail.ok_or(ModelError::NoTailFormula)?;
        Ok(self.listed.tail_bound(n)? + c * r.powi(n.min(i32::MAX as u64) as i32))
    }
}

/// The k-th prime, 1-based (`nth_prime(1) = 2`).
pub fn nth_prime(k: u64) -> u64 {
    assert!(k >= 1);
    let mut count = 0;
    let mut candidate = 1u64;
    while count < k {
        candidate += 1;
        if is_prime(candidate) {
            count += 1;
        }
    }
    candidate
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}
