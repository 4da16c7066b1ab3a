//! q-ary entropy, the GV function, Hamming balls and information entropy.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{precondition, Result};

const DOMAIN_SLACK: f64 = 1e-12;

fn check_q(q: u64) -> Result<()> {
    if q < 2 {
        return Err(precondition("alphabet size q must be at least 2"));
    }
    Ok(())
}

/// h_q(delta) = delta log_q(q-1) - delta log_q delta - (1-delta) log_q(1-delta).
pub fn h_q(q: u64, delta: f64) -> Result<f64> {
    check_q(q)?;
    let qf = q as f64;
    let top = 1.0 - 1.0 / qf;
    if !(delta >= -DOMAIN_SLACK && delta <= top + DOMAIN_SLACK) {
        return Err(precondition(format!("delta = {delta} outside [0, {top}]")));
    }
    let d = delta.clamp(0.0, top);
    let xlogx = |x: f64| if x <= 0.0 { 0.0 } else { x * x.ln() };
    let h = (d * (qf - 1.0).ln() - xlogx(d) - xlogx(1.0 - d)) / qf.ln();
    Ok(h.clamp(0.0, 1.0))
}

/// The GV function g_q = 1 - h_q.
pub fn g_q(q: u64, delta: f64) -> Result<f64> {
    Ok(1.0 - h_q(q, delta)?)
}

/// The delta in [0, 1 - 1/q] with g_q(delta) = r, by bisection.
pub fn g_q_inverse(q: u64, r: f64) -> Result<f64> {
    check_q(q)?;
    if !(0.0..=1.0).contains(&r) {
        return Err(precondition(format!("rate {r} outside [0, 1]")));
    }
    let (mut lo, mut hi) = (0.0f64, 1.0 - 1.0 / q as f64);
    if r >= 1.0 {
        return Ok(0.0);
    }
    if r <= 0.0 {
        return Ok(hi);
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let g = g_q(q, mid)?;
        if (g - r).abs() <= 1e-12 {
            return Ok(mid);
        }
        // g_q is decreasing.
        if g > r {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EntropyPoint {
    pub q: u64,
    pub delta: f64,
    pub h: f64,
    pub g: f64,
}

impl EntropyPoint {
    pub fn new(q: u64, delta: f64) -> Result<EntropyPoint> {
        let h = h_q(q, delta)?;
        Ok(EntropyPoint { q, delta, h, g: 1.0 - h })
    }
}

/// floor(delta n), absorbing decimal representation error in delta.
pub fn radius(n: usize, delta: f64) -> usize {
    if delta <= 0.0 {
        return 0;
    }
    ((delta * n as f64 + 1e-9).floor() as usize).min(n)
}

/// |(F^n)^{<=delta}| = sum_{i <= floor(delta n)} C(n, i) (q-1)^i.
pub fn ball_size(q: u64, n: usize, delta: f64) -> BigUint {
    ball_size_radius(q, n, radius(n, delta))
}

pub fn ball_size_radius(q: u64, n: usize, t: usize) -> BigUint {
    let mut total = BigUint::zero();
    let mut term = BigUint::one();
    for i in 0..=t.min(n) {
        if i > 0 {
            term = term * BigUint::from((n - i + 1) as u64) * BigUint::from(q - 1) / BigUint::from(i as u64);
        }
        total += &term;
    }
    total
}

/// log_base of a positive big integer.
pub fn log_big(x: &BigUint, base: f64) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().unwrap().ln() / base.ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().unwrap();
    (top.ln() + shift as f64 * std::f64::consts::LN_2) / base.ln()
}

/// Both sides of q^{n(h_q(delta) - log_q(n+1)/n)} <= |ball| <= q^{n h_q(delta)}.
///
/// The lower side is evaluated at the attained radius floor(delta n)/n;
/// for delta n integral that is delta itself. Off the integers the bound
/// at delta can exceed the ball (q = 2, n = 2, delta = 0.45 gives ball 1
/// against 1.32).
pub fn ball_bounds_check(q: u64, n: usize, delta: f64) -> Result<bool> {
    check_q(q)?;
    let top = 1.0 - 1.0 / q as f64;
    if !(delta > 0.0 && delta < top) {
        return Err(precondition(format!("delta = {delta} must lie strictly inside (0, {top})")));
    }
    let qf = q as f64;
    let nf = n as f64;
    let log_ball = log_big(&ball_size(q, n, delta), qf);
    let upper = nf * h_q(q, delta)?;
    let t = radius(n, delta) as f64 / nf;
    let lower = nf * h_q(q, t.min(top))? - (nf + 1.0).log(qf);
    Ok(log_ball <= upper + 1e-9 && lower <= log_ball + 1e-9)
}

/// The Plotkin bound 1/M >= (Delta - (1 - 1/q))/Delta with Delta = d/n,
/// in the exact integer form d q >= M (d q - (q - 1) n).
pub fn plotkin_check(q: u64, n: u64, m: u128, d: u64) -> Result<bool> {
    check_q(q)?;
    if n == 0 || d > n {
        return Err(precondition("need 1 <= d <= n"));
    }
    let dq = d as u128 * q as u128;
    let rhs = (q as u128 - 1) * n as u128;
    if dq <= rhs {
        return Err(precondition(format!(
            "relative distance {d}/{n} does not exceed 1 - 1/{q}; the bound does not apply"
        )));
    }
    Ok(m.checked_mul(dq - rhs).is_some_and(|v| v <= dq))
}

/// A distribution over the cells of a finite product of outcome sets,
/// row-major with the last axis fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    shape: Vec<usize>,
    probs: Vec<f64>,
}

impl Distribution {
    pub fn new(probs: Vec<f64>) -> Result<Distribution> {
        let len = probs.len();
        Distribution::joint(vec![len], probs)
    }

    pub fn joint(shape: Vec<usize>, probs: Vec<f64>) -> Result<Distribution> {
        if shape.is_empty() || shape.iter().product::<usize>() != probs.len() || probs.is_empty() {
            return Err(precondition("distribution shape does not match its probabilities"));
        }
        if probs.iter().any(|&p| !(p >= 0.0)) {
            return Err(precondition("negative or NaN probability"));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(precondition(format!("probabilities sum to {total}")));
        }
        Ok(Distribution { shape, probs })
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Distribution of the single variable on `axis`.
    pub fn marginal(&self, axis: usize) -> Distribution {
        let stride: usize = self.shape[axis + 1..].iter().product();
        let size = self.shape[axis];
        let mut out = vec![0.0; size];
        for (idx, &p) in self.probs.iter().enumerate() {
            out[(idx / stride) % size] += p;
        }
        Distribution {
            shape: vec![size],
            probs: out,
        }
    }

    /// H_gamma of the whole (joint) variable.
    pub fn entropy(&self, gamma: f64) -> Result<f64> {
        if !(gamma > 1.0) {
            return Err(precondition("entropy base must exceed 1"));
        }
        Ok(plogp_sum(&self.probs) / gamma.ln())
    }

    fn pair(&self) -> Result<(usize, usize)> {
        match self.shape[..] {
            [a, b] => Ok((a, b)),
            _ => Err(precondition("expected a joint distribution of two variables")),
        }
    }

    /// H(Y|X) = sum_x p(x) H(Y | X = x), X on axis 0.
    pub fn conditional_entropy(&self, gamma: f64) -> Result<f64> {
        let (nx, ny) = self.pair()?;
        if !(gamma > 1.0) {
            return Err(precondition("entropy base must exceed 1"));
        }
        let mut total = 0.0;
        for x in 0..nx {
            let row = &self.probs[x * ny..(x + 1) * ny];
            let px: f64 = row.iter().sum();
            if px > 0.0 {
                let cond: Vec<f64> = row.iter().map(|p| p / px).collect();
                total += px * plogp_sum(&cond);
            }
        }
        Ok(total / gamma.ln())
    }

    /// I(X;Y) = sum p(x,y) log(p(x,y) / (p(x) p(y))).
    pub fn mutual_information(&self, gamma: f64) -> Result<f64> {
        let (nx, ny) = self.pair()?;
        if !(gamma > 1.0) {
            return Err(precondition("entropy base must exceed 1"));
        }
        let px = self.marginal(0);
        let py = self.marginal(1);
        let mut total = 0.0;
        for x in 0..nx {
            for y in 0..ny {
                let p = self.probs[x * ny + y];
                if p > 0.0 {
                    total += p * (p / (px.probs[x] * py.probs[y])).ln();
                }
            }
        }
        Ok(total / gamma.ln())
    }
}

/// -sum p ln p with 0 ln 0 = 0.
fn plogp_sum(probs: &[f64]) -> f64 {
    probs.iter().filter(|&&p| p > 0.0).map(|&p| -p * p.ln()).sum()
}
