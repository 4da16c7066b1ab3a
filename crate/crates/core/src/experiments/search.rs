//! Integer search for coindices n with large mu_q(n).

use std::collections::HashMap;

use serde::Serialize;

use crate::arith;
use crate::error::{precondition, Result};

pub const MAX_SEARCH_LIMIT: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Threshold {
    /// No filter on mu.
    None,
    /// mu_q(n) >= m.
    MinMu(f64),
    /// mu_q(n) > c log_q n.
    MuOverLog(f64),
    /// mu_q(n) >= (log_q n)^2.
    LogSquared,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SearchOptions {
    pub require_minus_one: bool,
    pub prime_only: bool,
    pub odd_only: bool,
    pub threshold: Threshold,
}

impl Default for SearchOptions {
    fn default() -> SearchOptions {
        SearchOptions {
            require_minus_one: false,
            prime_only: false,
            odd_only: false,
            threshold: Threshold::None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Candidate {
    pub n: u64,
    pub mu: u64,
    pub log_q_n: f64,
    /// log_q n / mu_q(n).
    pub ratio: f64,
    pub prime: bool,
    pub minus_one: bool,
}

/// Ascending n in [2, limit] coprime to q that pass the requested filters.
/// mu_q(n) is the least ord_p(q) over primes p dividing n.
pub fn search_good_n(q: u64, limit: u64, opts: &SearchOptions) -> Result<Vec<Candidate>> {
    if limit > MAX_SEARCH_LIMIT {
        return Err(precondition(format!("limit {limit} exceeds {MAX_SEARCH_LIMIT}")));
    }
    if arith::prime_power(q).is_none() {
        return Err(precondition(format!("q = {q} is not a prime power")));
    }
    let size = limit as usize + 1;
    let mut spf = vec![0u32; size];
    for i in 2..size {
        if spf[i] == 0 {
            for j in (i..size).step_by(i) {
                if spf[j] == 0 {
                    spf[j] = i as u32;
                }
            }
        }
    }
    let lq = (q as f64).ln();
    let mut orders: HashMap<u64, u64> = HashMap::new();
    let mut out = Vec::new();
    for n in 2..=limit {
        if arith::gcd(n, q) != 1 || (opts.odd_only && n % 2 == 0) {
            continue;
        }
        let prime = spf[n as usize] as u64 == n;
        if opts.prime_only && !prime {
            continue;
        }
        let mut mu = u64::MAX;
        let mut m = n;
        while m > 1 {
            let p = spf[m as usize] as u64;
            let ord = *orders.entry(p).or_insert_with(|| arith::mult_order(q % p, p));
            mu = mu.min(ord);
            while m % p == 0 {
                m /= p;
            }
        }
        let log_q_n = (n as f64).ln() / lq;
        let pass = match opts.threshold {
            Threshold::None => true,
            Threshold::MinMu(m) => mu as f64 >= m,
            Threshold::MuOverLog(c) => mu as f64 > c * log_q_n,
            Threshold::LogSquared => mu as f64 >= log_q_n * log_q_n,
        };
        if !pass {
            continue;
        }
        let minus_one = arith::minus_one_in_subgroup(q, n);
        if opts.require_minus_one && !minus_one {
            continue;
        }
        out.push(Candidate {
            n,
            mu,
            log_q_n,
            ratio: log_q_n / mu as f64,
            prime,
            minus_one,
        });
    }
    Ok(out)
}
