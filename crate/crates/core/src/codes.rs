//! Linear codes over F_q with exact weight enumeration.
//!
//! Weights are found by walking the whole message space in Gray-code order:
//! consecutive messages differ in one digit, so each step adds one
//! precomputed multiple of a basis row and updates the weight over that
//! row's support only. Binary codes use bit-packed words. The message space
//! is cut into blocks by its leading digits and the blocks are walked in
//! parallel; block results are summed in block order.

use std::sync::OnceLock;

use num_rational::Ratio;
use rayon::prelude::*;

use crate::algebra::{dot, format_row, parse_row};
use crate::entropy;
use crate::error::{precondition, Error, Result};
use crate::field::{FieldElement, FieldSpec};
use crate::linalg::{self, Row};

/// Default cap on the number of codewords a single enumeration may visit.
pub const DEFAULT_BUDGET: u64 = 1 << 24;

/// The enumeration cap: `QGC_BUDGET` when set to an integer, else the default.
pub fn enumeration_budget() -> u64 {
    std::env::var("QGC_BUDGET")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_BUDGET)
}

#[derive(Debug, Clone)]
pub struct LinearCode {
    field: FieldSpec,
    n: usize,
    generators: Vec<Row>,
    basis: linalg::Echelon,
    distribution: OnceLock<Vec<u64>>,
}

impl PartialEq for LinearCode {
    /// Codes are equal when they are the same subspace.
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.n == other.n && self.basis == other.basis
    }
}

impl LinearCode {
    pub fn new(field: &FieldSpec, n: usize, generators: Vec<Row>) -> Result<LinearCode> {
        if let Some(bad) = generators.iter().find(|r| r.len() != n) {
            return Err(precondition(format!(
                "generator of length {} in a code of length {n}",
                bad.len()
            )));
        }
        if generators.iter().flatten().any(|c| c.index() >= field.order()) {
            return Err(precondition("generator entry outside the field"));
        }
        let basis = linalg::rref(field, &generators, n);
        Ok(LinearCode {
            field: field.clone(),
            n,
            generators,
            basis,
            distribution: OnceLock::new(),
        })
    }

    /// Code spanned by the given words; the length is taken from the first.
    pub fn from_generators(field: &FieldSpec, words: Vec<Row>) -> Result<LinearCode> {
        let n = words.first().map(|w| w.len()).unwrap_or(0);
        LinearCode::new(field, n, words)
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn dim(&self) -> usize {
        self.basis.rank()
    }

    pub fn generators(&self) -> &[Row] {
        &self.generators
    }

    /// Reduced echelon basis.
    pub fn basis(&self) -> &[Row] {
        &self.basis.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.basis.pivots
    }

    /// k/n in lowest terms.
    pub fn rate(&self) -> Ratio<usize> {
        Ratio::new(self.dim(), self.n.max(1))
    }

    pub fn contains(&self, word: &[FieldElement]) -> bool {
        word.len() == self.n && self.basis.contains(&self.field, word)
    }

    /// Sum m_i basis_i.
    pub fn encode(&self, message: &[FieldElement]) -> Row {
        let mut v = vec![FieldElement::ZERO; self.n];
        for (row, &m) in self.basis.rows.iter().zip(message) {
            linalg::axpy(&self.field, &mut v, m, row);
        }
        v
    }

    /// Every codeword, messages in mixed-radix order (small codes only).
    pub fn codewords(&self) -> Result<Vec<Row>> {
        let q = self.field.order() as u64;
        let k = self.dim();
        check_budget(q, k, enumeration_budget())?;
        let total = q.pow(k as u32);
        Ok((0..total)
            .map(|mut v| {
                let msg: Row = (0..k)
                    .map(|_| {
                        let d = FieldElement((v % q) as u32);
                        v /= q;
                        d
                    })
                    .collect();
                self.encode(&msg)
            })
            .collect())
    }

    /// Number of codewords of each weight 0..=n, under the given budget.
    pub fn weight_distribution_with_budget(&self, budget: u64) -> Result<&[u64]> {
        if let Some(d) = self.distribution.get() {
            return Ok(d);
        }
        check_budget(self.field.order() as u64, self.dim(), budget)?;
        let dist = if self.field.order() == 2 {
            binary_distribution(&self.basis.rows, self.n)
        } else {
            qary_distribution(&self.field, &self.basis.rows, self.n)
        };
        Ok(self.distribution.get_or_init(|| dist))
    }

    pub fn weight_distribution(&self) -> Result<&[u64]> {
        self.weight_distribution_with_budget(enumeration_budget())
    }

    /// Least weight of a nonzero codeword, which is also the minimum distance.
    pub fn min_weight_with_budget(&self, budget: u64) -> Result<usize> {
        if self.dim() == 0 {
            return Err(precondition("the zero code has no nonzero codeword"));
        }
        let dist = self.weight_distribution_with_budget(budget)?;
        Ok((1..dist.len()).find(|&w| dist[w] > 0).expect("nonzero code has a nonzero word"))
    }

    pub fn min_weight(&self) -> Result<usize> {
        self.min_weight_with_budget(enumeration_budget())
    }

    /// d/n.
    pub fn relative_distance(&self) -> Result<f64> {
        Ok(self.min_weight()? as f64 / self.n as f64)
    }

    /// |C^{<= delta}|, the zero word included.
    pub fn count_below(&self, delta: f64) -> Result<u64> {
        let t = entropy::radius(self.n, delta);
        Ok(self.weight_distribution()?[..=t].iter().sum())
    }

    /// The euclidean dual.
    pub fn dual(&self) -> LinearCode {
        let rows = linalg::null_space(&self.field, &self.basis.rows, self.n);
        LinearCode::new(&self.field, self.n, rows).expect("null space rows have length n")
    }

    /// dim (C intersect C^perp) = k - rank(G G^T).
    pub fn hull_dim(&self) -> usize {
        let g = &self.basis.rows;
        let gram: Vec<Row> = g
            .iter()
            .map(|a| g.iter().map(|b| dot(&self.field, a, b)).collect())
            .collect();
        self.dim() - linalg::rank(&self.field, &gram, g.len())
    }

    pub fn is_self_orthogonal(&self) -> bool {
        let g = &self.basis.rows;
        g.iter()
            .enumerate()
            .all(|(i, a)| g[i..].iter().all(|b| dot(&self.field, a, b).is_zero()))
    }

    pub fn is_self_dual(&self) -> bool {
        2 * self.dim() == self.n && self.is_self_orthogonal()
    }

    /// C intersect C^perp = 0.
    pub fn is_lcd(&self) -> bool {
        self.hull_dim() == 0
    }

    /// Reduced basis as text, one row of coefficient strings per line.
    pub fn to_text(&self) -> String {
        self.basis
            .rows
            .iter()
            .map(|r| format_row(&self.field, r) + "\n")
            .collect()
    }

    pub fn parse_text(field: &FieldSpec, text: &str) -> Result<LinearCode> {
        let rows: Vec<Row> = text
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(|l| parse_row(field, l))
            .collect::<Result<_>>()?;
        if rows.is_empty() {
            return Err(Error::Parse("no generator rows".into()));
        }
        LinearCode::from_generators(field, rows)
    }
}

/// Fails when q^k exceeds the budget.
pub fn check_budget(q: u64, k: usize, budget: u64) -> Result<()> {
    let needed = (q as f64).powi(k as i32);
    if needed > budget as f64 {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    Ok(())
}

/// Splits `k` message digits into (leading digits fixed per block, inner digits).
fn block_split(q: u64, k: usize) -> (usize, usize) {
    let mut inner = k;
    // Blocks of at least ~2^14 words, at most q^inner.
    while inner > 0 && (q as f64).powi(inner as i32 - 1) >= (1u64 << 14) as f64 {
        inner -= 1;
    }
    (k - inner, inner)
}

fn binary_distribution(rows: &[Row], n: usize) -> Vec<u64> {
    let limbs = n.div_ceil(64).max(1);
    let packed: Vec<Vec<u64>> = rows
        .iter()
        .map(|r| {
            let mut w = vec![0u64; limbs];
            for (i, c) in r.iter().enumerate() {
                if !c.is_zero() {
                    w[i / 64] |= 1 << (i % 64);
                }
            }
            w
        })
        .collect();
    let k = rows.len();
    let (outer, inner) = block_split(2, k);
    let blocks: Vec<Vec<u64>> = (0..1u64 << outer)
        .into_par_iter()
        .map(|block| {
            let mut dist = vec![0u64; n + 1];
            let mut word = vec![0u64; limbs];
            for (j, row) in packed[inner..].iter().enumerate() {
                if block >> j & 1 == 1 {
                    for (w, r) in word.iter_mut().zip(row) {
                        *w ^= r;
                    }
                }
            }
            let weight = |w: &[u64]| w.iter().map(|x| x.count_ones() as usize).sum::<usize>();
            dist[weight(&word)] += 1;
            for i in 1..1u64 << inner {
                let row = &packed[i.trailing_zeros() as usize];
                for (w, r) in word.iter_mut().zip(row) {
                    *w ^= r;
                }
                dist[weight(&word)] += 1;
            }
            dist
        })
        .collect();
    sum_distributions(blocks, n)
}

fn qary_distribution(field: &FieldSpec, rows: &[Row], n: usize) -> Vec<u64> {
    let q = field.order() as u64;
    let k = rows.len();
    // Field elements in index order c_0 = 0, ..., c_{q-1}; stepping a digit
    // from t to t+1 (mod q) adds (c_{t+1} - c_t) times the row.
    let steps: Vec<FieldElement> = (0..q as u32)
        .map(|t| field.sub(FieldElement((t + 1) % q as u32), FieldElement(t)))
        .collect();
    let supports: Vec<Vec<usize>> = rows
        .iter()
        .map(|r| (0..n).filter(|&i| !r[i].is_zero()).collect())
        .collect();
    let deltas: Vec<Vec<Vec<FieldElement>>> = rows
        .iter()
        .zip(&supports)
        .map(|(r, sup)| {
            steps
                .iter()
                .map(|&s| sup.iter().map(|&i| field.mul(s, r[i])).collect())
                .collect()
        })
        .collect();
    let (outer, inner) = block_split(q, k);
    let block_count = q.pow(outer as u32);
    let blocks: Vec<Vec<u64>> = (0..block_count)
        .into_par_iter()
        .map(|block| {
            let mut dist = vec![0u64; n + 1];
            let mut word = vec![FieldElement::ZERO; n];
            let mut b = block;
            for row in &rows[inner..] {
                let d = FieldElement((b % q) as u32);
                b /= q;
                linalg::axpy(field, &mut word, d, row);
            }
            let mut weight = word.iter().filter(|c| !c.is_zero()).count();
            dist[weight] += 1;
            let mut digits = vec![0u32; inner];
            for i in 1..q.pow(inner as u32) {
                let mut j = 0;
                let mut v = i;
                while v % q == 0 {
                    v /= q;
                    j += 1;
                }
                let t = digits[j] as usize;
                digits[j] = ((t + 1) % q as usize) as u32;
                for (&pos, &dv) in supports[j].iter().zip(&deltas[j][t]) {
                    let old = word[pos];
                    let new = field.add(old, dv);
                    word[pos] = new;
                    weight = weight + (!new.is_zero()) as usize - (!old.is_zero()) as usize;
                }
                dist[weight] += 1;
            }
            dist
        })
        .collect();
    sum_distributions(blocks, n)
}

fn sum_distributions(blocks: Vec<Vec<u64>>, n: usize) -> Vec<u64> {
    let mut total = vec![0u64; n + 1];
    for b in blocks {
        for (t, v) in total.iter_mut().zip(b) {
            *t += v;
        }
    }
    total
}
