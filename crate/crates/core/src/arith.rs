//! Small integer number theory used throughout: primality, factorization,
//! multiplicative orders.

use num_integer::Integer;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n % 2 == 0 {
        return false;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Prime factorization as (prime, exponent) pairs in increasing order.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn prime_divisors(n: u64) -> Vec<u64> {
    factorize(n).into_iter().map(|(p, _)| p).collect()
}

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

pub fn pow_mod(base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let m128 = m as u128;
    let mut acc: u128 = 1;
    let mut b = (base % m) as u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m128;
        }
        b = b * b % m128;
        exp >>= 1;
    }
    acc as u64
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1))
}

/// Multiplicative order of `q` modulo `n`; `n = 1` gives 1.
///
/// Requires gcd(q, n) = 1.
pub fn mult_order(q: u64, n: u64) -> u64 {
    if n == 1 {
        return 1;
    }
    debug_assert_eq!(gcd(q % n, n), 1);
    let mut ord = euler_phi(n);
    for (p, _) in factorize(ord) {
        while ord % p == 0 && pow_mod(q, ord / p, n) == 1 {
            ord /= p;
        }
    }
    ord
}

/// Whether -1 lies in the cyclic subgroup of Z_n^* generated by q.
pub fn minus_one_in_subgroup(q: u64, n: u64) -> bool {
    if n <= 2 {
        return true;
    }
    let ord = mult_order(q, n);
    ord % 2 == 0 && pow_mod(q, ord / 2, n) == n - 1
}

/// Integer logarithm test: returns (p, e) when `q = p^e` with p prime.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    let f = factorize(q);
    match f.as_slice() {
        [(p, e)] => Some((*p, *e)),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders() {
        assert_eq!(mult_order(2, 7), 3);
        assert_eq!(mult_order(2, 5), 4);
        assert_eq!(mult_order(2, 9), 6);
        assert_eq!(mult_order(3, 4), 2);
        assert_eq!(mult_order(5, 3), 2);
    }

    #[test]
    fn order_matches_brute_force() {
        for n in 2..200u64 {
            for q in 2..20u64 {
                if gcd(q, n) != 1 {
                    continue;
                }
                let mut x = q % n;
                let mut k = 1;
                while x != 1 % n {
                    x = x * q % n;
                    k += 1;
                }
                assert_eq!(mult_order(q, n), k, "q={q} n={n}");
            }
        }
    }

    #[test]
    fn minus_one_membership() {
        assert!(!minus_one_in_subgroup(2, 7));
        assert!(minus_one_in_subgroup(2, 5));
        assert!(minus_one_in_subgroup(2, 9));
        assert!(minus_one_in_subgroup(5, 3));
        for n in 3..150u64 {
            for q in 2..12u64 {
                if gcd(q, n) != 1 {
                    continue;
                }
                let mut seen = vec![false; n as usize];
                let mut x = 1u64;
                loop {
                    seen[x as usize] = true;
                    x = x * q % n;
                    if x == 1 {
                        break;
                    }
                }
                assert_eq!(minus_one_in_subgroup(q, n), seen[(n - 1) as usize]);
            }
        }
    }

    #[test]
    fn primes_and_powers() {
        assert!(is_prime(2) && is_prime(3) && is_prime(1_000_003));
        assert!(!is_prime(1) && !is_prime(91));
        assert_eq!(prime_power(8), Some((2, 3)));
        assert_eq!(prime_power(12), None);
        assert_eq!(factorize(360), vec![(2, 3), (3, 2), (5, 1)]);
    }
}
