//! Balanced systems of information sets and the entropy bounds they give.

use crate::codes::LinearCode;
use crate::entropy;
use crate::error::{precondition, Result};
use crate::field::FieldElement;
use crate::groups::GroupSpec;
use crate::linalg::{self, Row};

/// Information sets I_1, ..., I_s of common size k covering every
/// coordinate exactly t times. Repeated sets are allowed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BalancedSystem {
    pub index_sets: Vec<Vec<usize>>,
    pub k: usize,
    pub t: usize,
}

/// Whether projecting C onto the coordinates `set` is a bijection onto F^set.
pub fn is_information_set(code: &LinearCode, set: &[usize]) -> bool {
    if set.len() != code.dim() {
        return false;
    }
    let cols: Vec<Row> = code
        .basis()
        .iter()
        .map(|r| set.iter().map(|&i| r[i]).collect())
        .collect();
    linalg::rank(code.field(), &cols, set.len()) == code.dim()
}

/// Checks size, cover multiplicity and bijectivity of every projection.
pub fn verify_balanced(code: &LinearCode, sys: &BalancedSystem) -> bool {
    let n = code.len();
    if sys.index_sets.is_empty() || sys.k != code.dim() {
        return false;
    }
    let mut cover = vec![0usize; n];
    for set in &sys.index_sets {
        if set.len() != sys.k || set.iter().any(|&i| i >= n) {
            return false;
        }
        let mut sorted = set.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != set.len() {
            return false;
        }
        for &i in set {
            cover[i] += 1;
        }
        if !is_information_set(code, set) {
            return false;
        }
    }
    cover.iter().all(|&c| c == sys.t) && sys.k * sys.index_sets.len() == n * sys.t
}

/// For a left ideal C of F G (coordinates in canonical group order): the
/// translates x·I of the pivot information set I, one per x in G.
pub fn balanced_system_group_code(code: &LinearCode, group: &GroupSpec) -> Result<BalancedSystem> {
    if code.len() != group.order() {
        return Err(precondition("code length differs from the group order"));
    }
    if code.dim() == 0 {
        return Err(precondition("the zero code has no information set"));
    }
    for row in code.basis() {
        for x in group.elements() {
            let perm = group.cayley_permutation(x)?;
            let mut moved = vec![FieldElement::ZERO; row.len()];
            for (j, &c) in row.iter().enumerate() {
                moved[perm[j]] = c;
            }
            if !code.contains(&moved) {
                return Err(precondition("code is not a left ideal of the group algebra"));
            }
        }
    }
    let base = code.pivots().to_vec();
    let index_sets = group
        .elements()
        .map(|x| {
            let perm = group.cayley_permutation(x).expect("element of the group");
            let mut set: Vec<usize> = base.iter().map(|&i| perm[i]).collect();
            set.sort_unstable();
            set
        })
        .collect();
    let sys = BalancedSystem {
        index_sets,
        k: code.dim(),
        t: code.dim(),
    };
    if !verify_balanced(code, &sys) {
        return Err(crate::error::internal("translate system is not balanced"));
    }
    Ok(sys)
}

/// C^copies: words (c_1, ..., c_copies) with every c_i in C.
pub fn product_code(code: &LinearCode, copies: usize) -> Result<LinearCode> {
    if copies == 0 {
        return Err(precondition("need at least one copy"));
    }
    let n = code.len();
    let rows = (0..copies)
        .flat_map(|b| {
            code.basis().iter().map(move |r| {
                let mut w = vec![FieldElement::ZERO; n * copies];
                w[b * n..(b + 1) * n].copy_from_slice(r);
                w
            })
        })
        .collect();
    LinearCode::new(code.field(), n * copies, rows)
}

/// The system of C^copies whose j-th set is I_j repeated in every block.
pub fn product_system(sys: &BalancedSystem, n: usize, copies: usize) -> BalancedSystem {
    BalancedSystem {
        index_sets: sys
            .index_sets
            .iter()
            .map(|set| (0..copies).flat_map(|b| set.iter().map(move |&i| b * n + i)).collect())
            .collect(),
        k: sys.k * copies,
        t: sys.t,
    }
}

/// |C^{<= delta}| <= q^{k h_q(delta)} for a balanced code of dimension k.
pub fn balanced_bound_check(code: &LinearCode, delta: f64) -> Result<bool> {
    let q = code.field().order() as u64;
    let h = entropy::h_q(q, delta)?;
    let count = code.count_below(delta)?;
    Ok((count as f64).log(q as f64) <= code.dim() as f64 * h + 1e-9)
}

/// |B| <= q^{k h_q(omega)} for a set B of distinct codewords with average
/// relative weight omega <= 1 - 1/q.
pub fn subset_bound_check(code: &LinearCode, subset: &[Row]) -> Result<bool> {
    if subset.is_empty() {
        return Err(precondition("empty subset"));
    }
    if subset.iter().any(|w| !code.contains(w)) {
        return Err(precondition("subset contains a non-codeword"));
    }
    let q = code.field().order() as u64;
    let n = code.len() as f64;
    let total: usize = subset.iter().map(|w| w.iter().filter(|c| !c.is_zero()).count()).sum();
    let omega = total as f64 / (subset.len() as f64 * n);
    let top = 1.0 - 1.0 / q as f64;
    if omega > top + 1e-12 {
        return Err(precondition(format!("average relative weight {omega} exceeds 1 - 1/q")));
    }
    let h = entropy::h_q(q, omega.min(top))?;
    Ok((subset.len() as f64).log(q as f64) <= code.dim() as f64 * h + 1e-9)
}
