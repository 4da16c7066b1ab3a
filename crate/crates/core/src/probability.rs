//! Finite probability spaces and the standard inequalities as predicates.

use crate::error::{precondition, Result};
use crate::rng::RngStream;

const NORM_TOL: f64 = 1e-12;
const SLACK: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct FiniteSpace {
    probs: Vec<f64>,
}

impl FiniteSpace {
    pub fn new(probs: Vec<f64>) -> Result<FiniteSpace> {
        if probs.is_empty() {
            return Err(precondition("a probability space needs at least one sample"));
        }
        if probs.iter().any(|&p| !p.is_finite() || p < 0.0) {
            return Err(precondition("probabilities must be finite and nonnegative"));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > NORM_TOL {
            return Err(precondition(format!("probabilities sum to {total}, not 1")));
        }
        Ok(FiniteSpace { probs })
    }

    pub fn uniform(size: usize) -> Result<FiniteSpace> {
        if size == 0 {
            return Err(precondition("a probability space needs at least one sample"));
        }
        FiniteSpace::new(vec![1.0 / size as f64; size])
    }

    /// A random space with 1..=max_samples samples and normalized weights.
    pub fn random(rng: &mut RngStream, max_samples: usize) -> FiniteSpace {
        let size = 1 + rng.below(max_samples as u64) as usize;
        let mut w: Vec<f64> = (0..size).map(|_| rng.unit_f64()).collect();
        // Occasionally zero out samples to exercise vacuous events.
        for x in w.iter_mut() {
            if rng.below(5) == 0 {
                *x = 0.0;
            }
        }
        if w.iter().all(|&x| x == 0.0) {
            w[0] = 1.0;
        }
        let total: f64 = w.iter().sum();
        FiniteSpace { probs: w.into_iter().map(|x| x / total).collect() }
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Pr(E) for an event given as a membership mask.
    pub fn prob(&self, event: &[bool]) -> Result<f64> {
        self.check_len(event.len())?;
        Ok(self.probs.iter().zip(event).filter(|(_, &e)| e).map(|(p, _)| p).sum())
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.probs.len() {
            return Err(precondition(format!(
                "length {len} differs from the sample count {}",
                self.probs.len()
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RandomVariable<'a> {
    space: &'a FiniteSpace,
    values: Vec<f64>,
}

impl<'a> RandomVariable<'a> {
    pub fn new(space: &'a FiniteSpace, values: Vec<f64>) -> Result<RandomVariable<'a>> {
        space.check_len(values.len())?;
        Ok(RandomVariable { space, values })
    }

    pub fn indicator(space: &'a FiniteSpace, event: &[bool]) -> Result<RandomVariable<'a>> {
        RandomVariable::new(space, event.iter().map(|&e| e as u8 as f64).collect())
    }

    pub fn space(&self) -> &FiniteSpace {
        self.space
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> RandomVariable<'a> {
        RandomVariable {
            space: self.space,
            values: self.values.iter().map(|&x| f(x)).collect(),
        }
    }

    pub fn product(&self, other: &RandomVariable<'a>) -> Result<RandomVariable<'a>> {
        if self.space != other.space {
            return Err(precondition("random variables live on different spaces"));
        }
        RandomVariable::new(
            self.space,
            self.values.iter().zip(&other.values).map(|(x, y)| x * y).collect(),
        )
    }

    pub fn event(&self, pred: impl Fn(f64) -> bool) -> Vec<bool> {
        self.values.iter().map(|&x| pred(x)).collect()
    }

    fn is_indicator(&self) -> bool {
        self.values.iter().all(|&x| x == 0.0 || x == 1.0)
    }
}

pub fn expectation(x: &RandomVariable) -> f64 {
    x.space.probs.iter().zip(&x.values).map(|(p, v)| p * v).sum()
}

/// E(X | F).
pub fn conditional_expectation(x: &RandomVariable, event: &[bool]) -> Result<f64> {
    let pf = x.space.prob(event)?;
    if pf <= 0.0 {
        return Err(precondition("conditioning event has probability zero"));
    }
    let num: f64 = x
        .space
        .probs
        .iter()
        .zip(&x.values)
        .zip(event)
        .filter(|(_, &e)| e)
        .map(|((p, v), _)| p * v)
        .sum();
    Ok(num / pf)
}

/// Pr(G | F).
pub fn conditional_prob(space: &FiniteSpace, g: &[bool], f: &[bool]) -> Result<f64> {
    let pf = space.prob(f)?;
    if pf <= 0.0 {
        return Err(precondition("conditioning event has probability zero"));
    }
    let both: Vec<bool> = g.iter().zip(f).map(|(a, b)| *a && *b).collect();
    Ok(space.prob(&both)? / pf)
}

/// Pr(X >= a) <= E(X) / a for nonnegative X and a > 0.
pub fn markov_check(x: &RandomVariable, a: f64) -> Result<bool> {
    if x.values.iter().any(|&v| v < 0.0) {
        return Err(precondition("Markov's inequality needs a nonnegative variable"));
    }
    if a <= 0.0 {
        return Err(precondition("Markov's inequality needs a > 0"));
    }
    let lhs = x.space.prob(&x.event(|v| v >= a))?;
    Ok(lhs <= expectation(x) / a + SLACK)
}

/// Both sides of Pr(X >= 1) >= sum_i E(X_i) / E(X | X_i = 1) for X = sum X_i.
/// Summands with Pr(X_i = 1) = 0 contribute 0.
pub fn second_moment_bound(indicators: &[RandomVariable]) -> Result<(f64, f64, bool)> {
    let first = indicators
        .first()
        .ok_or_else(|| precondition("need at least one indicator"))?;
    let space = first.space;
    if indicators.iter().any(|x| x.space != space) {
        return Err(precondition("indicators live on different spaces"));
    }
    if indicators.iter().any(|x| !x.is_indicator()) {
        return Err(precondition("every X_i must take values in {0, 1}"));
    }
    let sum: Vec<f64> = (0..space.len())
        .map(|s| indicators.iter().map(|x| x.values[s]).sum())
        .collect();
    let total = RandomVariable::new(space, sum)?;
    let lhs = space.prob(&total.event(|v| v >= 1.0))?;
    let mut rhs = 0.0;
    for x in indicators {
        let ev = x.event(|v| v == 1.0);
        if space.prob(&ev)? > 0.0 {
            rhs += expectation(x) / conditional_expectation(&total, &ev)?;
        }
    }
    Ok((lhs, rhs, lhs + SLACK >= rhs))
}

/// E(f(X)) >= f(E(X)) for f convex on [lo, hi].
pub fn jensen_check(f: impl Fn(f64) -> f64, lo: f64, hi: f64, x: &RandomVariable) -> Result<bool> {
    if x.values.iter().any(|&v| v < lo || v > hi) {
        return Err(precondition(format!("values outside the domain [{lo}, {hi}]")));
    }
    let lhs = expectation(&x.map(&f));
    let rhs = f(expectation(x));
    Ok(lhs + SLACK * (1.0 + rhs.abs()) >= rhs)
}

/// Pr(G) = Pr(G|E) Pr(E) + Pr(G|F) Pr(F) for F the complement of E.
pub fn total_probability_check(space: &FiniteSpace, g: &[bool], e: &[bool]) -> Result<bool> {
    let f: Vec<bool> = e.iter().map(|b| !b).collect();
    let pe = space.prob(e)?;
    let pf = space.prob(&f)?;
    let mut rhs = 0.0;
    if pe > 0.0 {
        rhs += conditional_prob(space, g, e)? * pe;
    }
    if pf > 0.0 {
        rhs += conditional_prob(space, g, &f)? * pf;
    }
    Ok((space.prob(g)? - rhs).abs() <= SLACK)
}

/// E(XY)^2 <= E(X^2) E(Y^2).
pub fn cauchy_schwarz_check(x: &RandomVariable, y: &RandomVariable) -> Result<bool> {
    let xy = expectation(&x.product(y)?);
    let xx = expectation(&x.product(x)?);
    let yy = expectation(&y.product(y)?);
    Ok(xy * xy <= xx * yy * (1.0 + SLACK) + SLACK)
}
