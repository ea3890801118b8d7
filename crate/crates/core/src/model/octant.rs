//! Hyperoctant enumeration and the `Ω_ij` partition of entry indices.

use std::collections::HashMap;

use super::diag::DiagonalizedFamily;
use super::ModelError;

/// An enumeration `U_1, …, U_{2^d}` of the open hyperoctants of `ℝᵈ`,
/// each identified by its sign vector, with `U_{2^{d-1}+j} = −U_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OctantScheme {
    dimension: usize,
    signs: Vec<Vec<i8>>,
}

impl OctantScheme {
    /// Standard enumeration: the first half is `(+1, b_2, …, b_d)` with
    /// `(b_2, …, b_d)` the binary expansion of `j` (0 ↦ +1, 1 ↦ −1, most
    /// significant first); the second half negates the first.
    pub fn standard(dimension: usize) -> Self {
        assert!(dimension >= 1, "octants need dimension >= 1");
        let half = 1usize << (dimension - 1);
        let mut signs = Vec::with_capacity(2 * half);
        for j in 0..half {
            let mut v = vec![1i8; dimension];
            for (pos, slot) in v.iter_mut().enumerate().skip(1) {
                let bit = (j >> (dimension - 1 - pos)) & 1;
                *slot = if bit == 0 { 1 } else { -1 };
            }
            signs.push(v);
        }
        for j in 0..half {
            let neg = signs[j].iter().map(|s| -s).collect();
            signs.push(neg);
        }
        Self { dimension, signs }
    }

    /// A caller-supplied enumeration; must list every octant once and obey
    /// the antipodal law.
    pub fn from_signs(dimension: usize, signs: Vec<Vec<i8>>) -> Result<Self, ModelError> {
        let count = 1usize << dimension;
        if signs.len() != count {
            return Err(ModelError::BadOctantScheme(format!(
                "expected {count} sign vectors, got {}",
                signs.len()
            )));
        }
        let mut seen = std::collections::HashSet::new();
        for v in &signs {
            if v.len() != dimension || v.iter().any(|s| *s != 1 && *s != -1) {
                return Err(ModelError::BadOctantScheme(format!("malformed sign vector {v:?}")));
            }
            if !seen.insert(v.clone()) {
                return Err(ModelError::BadOctantScheme(format!("repeated sign vector {v:?}")));
            }
        }
        let half = count / 2;
        for j in 0..half {
            if signs[half + j].iter().zip(&signs[j]).any(|(a, b)| *a != -*b) {
                return Err(ModelError::BadOctantScheme(format!(
                    "octant {} is not the antipode of octant {}",
                    half + j + 1,
                    j + 1
                )));
            }
        }
        Ok(Self { dimension, signs })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn len(&self) -> usize {
        self.signs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signs.is_empty()
    }

    pub fn signs(&self) -> &[Vec<i8>] {
        &self.signs
    }

    /// `ε(i, j)`, the unique sign vector with `ε U_i = U_j`.
    pub fn epsilon(&self, i: usize, j: usize) -> Vec<i8> {
        self.signs[i]
            .iter()
            .zip(&self.signs[j])
            .map(|(a, b)| a * b)
            .collect()
    }
}

/// `Ω_ij`: the entry positions whose sign pattern equals `ε(i, j)`.
///
/// Cells hold positions into the spec's entry list (not the indices `k`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Omega {
    size: usize,
    cells: Vec<Vec<usize>>,
}

impl Omega {
    /// Number of octants `2ᵈ`.
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn cell(&self, i: usize, j: usize) -> &[usize] {
        &self.cells[i * self.size + j]
    }

    /// For each entry position, the column `j` it occupies in row `i`.
    pub fn column_of(&self, i: usize, entry: usize) -> Option<usize> {
        (0..self.size).find(|&j| self.cell(i, j).contains(&entry))
    }

    /// True when every off-diagonal cell is empty.
    pub fn is_diagonal(&self) -> bool {
        (0..self.size).all(|i| (0..self.size).all(|j| i == j || self.cell(i, j).is_empty()))
    }
}

/// Builds `Ω_ij = {k : sgn a(k) = ε(i, j)}` for every octant pair.
pub fn build_omega(diag: &DiagonalizedFamily, oct: &OctantScheme) -> Omega {
    build_omega_from_patterns(diag.sign_patterns(), oct)
}

pub(crate) fn build_omega_from_patterns(patterns: &[Vec<i8>], oct: &OctantScheme) -> Omega {
    let size = oct.len();
    let lookup: HashMap<&[i8], usize> = oct
        .signs()
        .iter()
        .enumerate()
        .map(|(j, v)| (v.as_slice(), j))
        .collect();
    let mut cells = vec![Vec::new(); size * size];
    for (entry, pattern) in patterns.iter().enumerate() {
        for i in 0..size {
            let target: Vec<i8> = oct.signs()[i]
                .iter()
                .zip(pattern)
                .map(|(a, b)| a * b)
                .collect();
            let j = lookup[target.as_slice()];
            cells[i * size + j].push(entry);
        }
    }
    Omega { size, cells }
}
