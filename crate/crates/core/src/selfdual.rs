//! Solutions of X bar(X) = -1, the sets D and D-dagger, and the
//! self-dual codes C_{1,b} and self-orthogonal codes C_{1-dagger,b-dagger}.
//!
//! Solutions are found component by component over the bar-invariant
//! idempotents e_0, e_i (fixed) and e_j + bar(e_j) (paired):
//! - on e_0 the component is F e_0 and the equation is lambda^2 = -1;
//! - on a fixed component every element of F G e_i is tried;
//! - on a paired component b = u + bar(v) with u a unit of F G e_j and
//!   v = -u^{-1}, which gives exactly q^{d_j} - 1 solutions.

use num_bigint::BigUint;
use num_traits::One;

use crate::algebra::AlgebraElement;
use crate::codes::LinearCode;
use crate::decomposition::{component_elements, Decomposition};
use crate::error::{internal, precondition, Result};
use crate::quasi::index2_code;
use crate::rng::RngStream;

/// 1 for even q, 2 for q = 1 mod 4, 0 for q = 3 mod 4: the number of
/// lambda in F with lambda^2 = -1.
pub fn s0(q: u64) -> u64 {
    if q % 2 == 0 {
        1
    } else if q % 4 == 1 {
        2
    } else {
        0
    }
}

pub fn selfdual_exists(q: u64) -> bool {
    s0(q) > 0
}

/// Per-component solutions of b_e bar(b_e) = -e for e in E-hat.
#[derive(Debug, Clone)]
pub struct UnitarySolutionSet {
    /// The bar-invariant idempotents e_0, fixed e_i, e_j + bar(e_j).
    pub hat: Vec<AlgebraElement>,
    /// k_e for hat[1..].
    pub k: Vec<usize>,
    /// Number of fixed components; hat[1..=fixed] are fixed, the rest paired.
    pub fixed: usize,
    pub solutions: Vec<Vec<AlgebraElement>>,
}

/// a^k inside the ring F G e, with e as its identity.
fn component_pow(a: &AlgebraElement, e: &AlgebraElement, mut k: u64) -> AlgebraElement {
    let mut acc = e.clone();
    let mut base = a.clone();
    while k > 0 {
        if k & 1 == 1 {
            acc = &acc * &base;
        }
        base = &base * &base;
        k >>= 1;
    }
    acc
}

pub fn solve_unitary(dec: &Decomposition) -> Result<UnitarySolutionSet> {
    let pairing = dec.pairing()?;
    let field = dec.field();
    let q = field.order() as u64;
    let minus_one = field.neg(field.one());
    let mut solutions = Vec::with_capacity(pairing.hat.len());

    let e0 = &pairing.hat[0];
    solutions.push(
        field
            .elements()
            .filter(|&l| field.mul(l, l) == minus_one)
            .map(|l| e0.scale(l))
            .collect::<Vec<_>>(),
    );
    for &i in &pairing.fixed {
        let e = &dec.idempotents()[i];
        let target = -e;
        let sols: Vec<AlgebraElement> = component_elements(e)?
            .into_iter()
            .filter(|w| &(w * &w.bar()) == &target)
            .collect();
        solutions.push(sols);
    }
    for &(j, _) in &pairing.pairs {
        let e = &dec.idempotents()[j];
        let d = dec.dims()[j] as u32;
        let order = q.pow(d);
        let mut sols = Vec::with_capacity(order as usize - 1);
        for u in component_elements(e)?.into_iter().filter(|u| !u.is_zero()) {
            let inv = component_pow(&u, e, order - 2);
            sols.push(&u - &inv.bar());
        }
        solutions.push(sols);
    }
    let set = UnitarySolutionSet {
        hat: pairing.hat.clone(),
        k: pairing.k.clone(),
        fixed: pairing.fixed.len(),
        solutions,
    };
    // Closed forms: s_0, q^{k_i} + 1, q^{k_{r+j}} - 1.
    if set.solutions[0].len() as u64 != s0(q) {
        return Err(internal("e_0 solution count differs from s_0"));
    }
    for (t, sols) in set.solutions.iter().enumerate().skip(1) {
        let qk = q.pow(set.k[t - 1] as u32);
        let expected = if t <= set.fixed { qk + 1 } else { qk - 1 };
        if sols.len() as u64 != expected {
            return Err(internal(format!("component {t}: {} solutions, expected {expected}", sols.len())));
        }
        let target = -&set.hat[t];
        if sols.iter().any(|b| &(b * &b.bar()) != &target) {
            return Err(internal("listed solution fails b bar(b) = -e"));
        }
    }
    Ok(set)
}

impl UnitarySolutionSet {
    fn product(&self, from: usize) -> BigUint {
        self.solutions[from..]
            .iter()
            .fold(BigUint::one(), |acc, s| acc * BigUint::from(s.len()))
    }

    /// |D| = s_0 prod (q^{k_i} + 1) prod (q^{k_{r+j}} - 1).
    pub fn count_d(&self) -> BigUint {
        self.product(0)
    }

    /// |D-dagger|: the same product without the s_0 factor.
    pub fn count_d_dagger(&self) -> BigUint {
        self.product(1)
    }

    fn sample_from(&self, from: usize, rng: &mut RngStream) -> Result<AlgebraElement> {
        let mut b = AlgebraElement::zero(self.hat[0].field(), self.hat[0].group());
        for sols in &self.solutions[from..] {
            if sols.is_empty() {
                return Err(precondition("no solution of X bar(X) = -1 on the trivial component (q = 3 mod 4)"));
            }
            b = &b + &sols[rng.below(sols.len() as u64) as usize];
        }
        Ok(b)
    }

    /// Uniform b in D, chosen independently per component.
    pub fn sample_d(&self, rng: &mut RngStream) -> Result<AlgebraElement> {
        self.sample_from(0, rng)
    }

    /// Uniform b-dagger in D-dagger.
    pub fn sample_d_dagger(&self, rng: &mut RngStream) -> Result<AlgebraElement> {
        self.sample_from(1, rng)
    }

    /// Every element of D (or D-dagger), components combined in order.
    pub fn enumerate(&self, dagger: bool) -> Vec<AlgebraElement> {
        let from = usize::from(dagger);
        let mut acc = vec![AlgebraElement::zero(self.hat[0].field(), self.hat[0].group())];
        for sols in &self.solutions[from..] {
            acc = acc.iter().flat_map(|a| sols.iter().map(move |s| a + s)).collect();
        }
        acc
    }
}

/// Closed-form |D| from the dimensions alone.
pub fn count_d(dec: &Decomposition) -> Result<BigUint> {
    Ok(BigUint::from(s0(dec.field().order() as u64)) * count_d_dagger(dec)?)
}

pub fn count_d_dagger(dec: &Decomposition) -> Result<BigUint> {
    let pairing = dec.pairing()?;
    let q = BigUint::from(dec.field().order());
    let r = pairing.fixed.len();
    Ok(pairing.k.iter().enumerate().fold(BigUint::one(), |acc, (t, &k)| {
        let qk = q.pow(k as u32);
        acc * if t < r { qk + 1u32 } else { qk - 1u32 }
    }))
}

/// s_0 q^{(n-1)/2 - 2} <= |D| <= q^{(n-1)/2 + 3}, the lower side only when s_0 >= 1.
pub fn count_d_bounds_hold(dec: &Decomposition) -> Result<bool> {
    let n = dec.order();
    let q = BigUint::from(dec.field().order());
    let d = count_d(dec)?;
    let half = ((n - 1) / 2) as u32;
    let upper = d <= q.pow(half + 3);
    let s = s0(dec.field().order() as u64);
    let lower = s == 0 || BigUint::from(s) * q.pow(half) <= &d * q.pow(2);
    Ok(upper && lower)
}

/// C_{1,b} = {(a, ab)}.
pub fn code_c1b(b: &AlgebraElement) -> Result<LinearCode> {
    index2_code(&AlgebraElement::one(b.field(), b.group()), b)
}

/// 1-dagger = 1 - e_0.
pub fn one_dagger(dec: &Decomposition) -> AlgebraElement {
    &AlgebraElement::one(dec.field(), dec.group()) - &dec.idempotents()[0]
}

/// C_{1-dagger,b-dagger} = {(a 1-dagger, a 1-dagger b-dagger)}.
pub fn code_c1dag(dec: &Decomposition, b: &AlgebraElement) -> Result<LinearCode> {
    let od = one_dagger(dec);
    index2_code(&od, &(&od * b))
}
