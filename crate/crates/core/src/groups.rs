//! Finite abelian groups given by cyclic factors, and dihedral groups.
//!
//! Elements are identified with canonical indices in `[0, |G|)`:
//! abelian groups use little-endian mixed radix over the factors, dihedral
//! groups of order 2n list x^0..x^{n-1} followed by x^0 y..x^{n-1} y.
//! The identity always has index 0.

use std::fmt;
use std::sync::Arc;

use crate::arith;
use crate::error::{precondition, Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GroupKind {
    /// Product of cyclic groups Z_{n_1} x ... x Z_{n_s}.
    Abelian(Vec<usize>),
    /// Dihedral group of order 2n.
    Dihedral(usize),
}

/// A group element as its canonical index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement(pub usize);

struct Inner {
    kind: GroupKind,
    order: usize,
    mul: Vec<u32>,
    inv: Vec<u32>,
}

#[derive(Clone)]
pub struct GroupSpec(Arc<Inner>);

impl PartialEq for GroupSpec {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.kind == other.0.kind
    }
}

impl Eq for GroupSpec {}

impl fmt::Debug for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0.kind {
            GroupKind::Abelian(factors) if factors.is_empty() => write!(f, "c:1"),
            GroupKind::Abelian(factors) => {
                let s: Vec<String> = factors.iter().map(|n| n.to_string()).collect();
                write!(f, "c:{}", s.join("x"))
            }
            GroupKind::Dihedral(n) => write!(f, "d:{n}"),
        }
    }
}

impl GroupSpec {
    /// Z_{n_1} x ... x Z_{n_s}; an empty list is the trivial group.
    pub fn abelian(factors: &[usize]) -> Result<GroupSpec> {
        if factors.iter().any(|&n| n < 2) {
            return Err(precondition("cyclic factors must be at least 2"));
        }
        let order = factors
            .iter()
            .try_fold(1usize, |acc, &n| acc.checked_mul(n))
            .filter(|&o| o <= 1 << 16)
            .ok_or_else(|| precondition("group order too large"))?;
        let decode = |mut idx: usize| -> Vec<usize> {
            factors
                .iter()
                .map(|&n| {
                    let d = idx % n;
                    idx /= n;
                    d
                })
                .collect()
        };
        let encode = |v: &[usize]| -> usize {
            v.iter()
                .zip(factors)
                .rev()
                .fold(0, |acc, (&d, &n)| acc * n + d)
        };
        let digits: Vec<Vec<usize>> = (0..order).map(decode).collect();
        let mut mul = vec![0u32; order * order];
        for a in 0..order {
            for b in 0..order {
                let s: Vec<usize> = digits[a]
                    .iter()
                    .zip(&digits[b])
                    .zip(factors)
                    .map(|((x, y), n)| (x + y) % n)
                    .collect();
                mul[a * order + b] = encode(&s) as u32;
            }
        }
        let inv = (0..order)
            .map(|a| {
                let s: Vec<usize> = digits[a]
                    .iter()
                    .zip(factors)
                    .map(|(x, n)| (n - x) % n)
                    .collect();
                encode(&s) as u32
            })
            .collect();
        Ok(GroupSpec(Arc::new(Inner {
            kind: GroupKind::Abelian(factors.to_vec()),
            order,
            mul,
            inv,
        })))
    }

    pub fn cyclic(n: usize) -> Result<GroupSpec> {
        if n == 1 {
            return GroupSpec::abelian(&[]);
        }
        GroupSpec::abelian(&[n])
    }

    /// Dihedral group of order 2n with x^n = y^2 = 1 and y x y^{-1} = x^{-1}.
    pub fn dihedral(n: usize) -> Result<GroupSpec> {
        if n < 2 {
            return Err(precondition("dihedral rotation order must exceed 1"));
        }
        let order = 2 * n;
        let mut mul = vec![0u32; order * order];
        for a in 0..order {
            let (i, s) = (a % n, a / n);
            for b in 0..order {
                let (j, t) = (b % n, b / n);
                // x^i y^s x^j y^t = x^{i + (-1)^s j} y^{s+t}
                let k = if s == 0 { (i + j) % n } else { (i + n - j) % n };
                mul[a * order + b] = (k + n * ((s + t) % 2)) as u32;
            }
        }
        let inv = (0..order)
            .map(|a| {
                let (i, s) = (a % n, a / n);
                if s == 0 {
                    ((n - i) % n) as u32
                } else {
                    a as u32
                }
            })
            .collect();
        Ok(GroupSpec(Arc::new(Inner {
            kind: GroupKind::Dihedral(n),
            order,
            mul,
            inv,
        })))
    }

    /// Parses `c:n1xn2x...` or `d:n`.
    pub fn parse(s: &str) -> Result<GroupSpec> {
        let bad = || Error::Parse(format!("bad group literal {s:?}"));
        let (kind, rest) = s.trim().split_once(':').ok_or_else(bad)?;
        match kind {
            "c" => {
                let factors: Vec<usize> = rest
                    .split('x')
                    .map(|t| t.trim().parse().map_err(|_| bad()))
                    .collect::<Result<_>>()?;
                let factors: Vec<usize> = factors.into_iter().filter(|&n| n != 1).collect();
                GroupSpec::abelian(&factors)
            }
            "d" => GroupSpec::dihedral(rest.trim().parse().map_err(|_| bad())?),
            _ => Err(bad()),
        }
    }

    pub fn kind(&self) -> &GroupKind {
        &self.0.kind
    }

    pub fn order(&self) -> usize {
        self.0.order
    }

    pub fn is_abelian(&self) -> bool {
        matches!(self.0.kind, GroupKind::Abelian(_))
    }

    /// Invariant factors of an abelian group.
    pub fn factors(&self) -> Option<&[usize]> {
        match &self.0.kind {
            GroupKind::Abelian(f) => Some(f),
            GroupKind::Dihedral(_) => None,
        }
    }

    /// Least common multiple of element orders.
    pub fn exponent(&self) -> usize {
        match &self.0.kind {
            GroupKind::Abelian(f) => f.iter().fold(1, |acc, &n| arith::lcm(acc as u64, n as u64) as usize),
            GroupKind::Dihedral(n) => arith::lcm(*n as u64, 2) as usize,
        }
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement(0)
    }

    pub fn element(&self, index: usize) -> Result<GroupElement> {
        if index < self.0.order {
            Ok(GroupElement(index))
        } else {
            Err(Error::OutOfRange {
                index,
                size: self.0.order,
            })
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = GroupElement> {
        (0..self.0.order).map(GroupElement)
    }

    /// Mixed-radix digits of an abelian element.
    pub fn decode_abelian(&self, g: GroupElement) -> Option<Vec<usize>> {
        let factors = self.factors()?;
        let mut idx = g.0;
        Some(
            factors
                .iter()
                .map(|&n| {
                    let d = idx % n;
                    idx /= n;
                    d
                })
                .collect(),
        )
    }

    /// `(i, b)` with g = x^i y^b for a dihedral element.
    pub fn decode_dihedral(&self, g: GroupElement) -> Option<(usize, usize)> {
        match self.0.kind {
            GroupKind::Dihedral(n) => Some((g.0 % n, g.0 / n)),
            GroupKind::Abelian(_) => None,
        }
    }

    /// x^i y^b in a dihedral group.
    pub fn dihedral_element(&self, i: usize, b: usize) -> Option<GroupElement> {
        match self.0.kind {
            GroupKind::Dihedral(n) => Some(GroupElement(i % n + n * (b % 2))),
            GroupKind::Abelian(_) => None,
        }
    }

    #[inline]
    pub(crate) fn mul_idx(&self, a: usize, b: usize) -> usize {
        self.0.mul[a * self.0.order + b] as usize
    }

    #[inline]
    pub(crate) fn inv_idx(&self, a: usize) -> usize {
        self.0.inv[a] as usize
    }

    fn check(&self, g: GroupElement) -> Result<()> {
        self.element(g.0).map(|_| ())
    }

    pub fn mul(&self, a: GroupElement, b: GroupElement) -> Result<GroupElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(GroupElement(self.mul_idx(a.0, b.0)))
    }

    pub fn inv(&self, a: GroupElement) -> Result<GroupElement> {
        self.check(a)?;
        Ok(GroupElement(self.inv_idx(a.0)))
    }

    pub fn pow(&self, a: GroupElement, k: usize) -> Result<GroupElement> {
        self.check(a)?;
        let mut acc = 0usize;
        for _ in 0..k {
            acc = self.mul_idx(acc, a.0);
        }
        Ok(GroupElement(acc))
    }

    /// Left-regular (Cayley) permutation: j -> index of g * x_j.
    pub fn cayley_permutation(&self, g: GroupElement) -> Result<Vec<usize>> {
        self.check(g)?;
        Ok((0..self.0.order).map(|j| self.mul_idx(g.0, j)).collect())
    }
}

/// Composition of permutations: (a o b)(j) = a(b(j)).
pub fn compose(a: &[usize], b: &[usize]) -> Vec<usize> {
    b.iter().map(|&j| a[j]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn groups() -> Vec<GroupSpec> {
        let mut v = vec![GroupSpec::abelian(&[]).unwrap()];
        for f in [&[2][..], &[5], &[7], &[2, 2], &[2, 4], &[3, 3], &[2, 6], &[2, 2, 2], &[4, 6]] {
            v.push(GroupSpec::abelian(f).unwrap());
        }
        for n in [2, 3, 5, 6, 9, 12] {
            v.push(GroupSpec::dihedral(n).unwrap());
        }
        v
    }

    #[test]
    fn group_axioms() {
        for g in groups() {
            let n = g.order();
            for a in g.elements() {
                assert_eq!(g.mul(g.identity(), a).unwrap(), a);
                assert_eq!(g.mul(a, g.identity()).unwrap(), a);
                let ai = g.inv(a).unwrap();
                assert_eq!(g.mul(a, ai).unwrap(), g.identity());
                assert_eq!(g.inv(ai).unwrap(), a);
                for b in g.elements() {
                    for c in g.elements().step_by(1 + n / 8) {
                        let l = g.mul(g.mul(a, b).unwrap(), c).unwrap();
                        let r = g.mul(a, g.mul(b, c).unwrap()).unwrap();
                        assert_eq!(l, r);
                    }
                }
            }
        }
    }

    #[test]
    fn cyclic_generator_closes() {
        let n = 9;
        let g = GroupSpec::cyclic(n).unwrap();
        let x = GroupElement(1);
        assert_eq!(g.mul(x, GroupElement(n - 1)).unwrap(), g.identity());
        assert_eq!(g.cayley_permutation(x).unwrap(), (1..n).chain([0]).collect::<Vec<_>>());
    }

    #[test]
    fn dihedral_relation() {
        let g = GroupSpec::dihedral(5).unwrap();
        let x = g.dihedral_element(1, 0).unwrap();
        let y = g.dihedral_element(0, 1).unwrap();
        let yxy = g.mul(y, g.mul(x, y).unwrap()).unwrap();
        assert_eq!(yxy, g.inv(x).unwrap());
        assert_eq!(g.mul(y, y).unwrap(), g.identity());
        let rho = g.cayley_permutation(y).unwrap();
        assert_eq!(compose(&rho, &rho), (0..10).collect::<Vec<_>>());
        assert!(g.decode_dihedral(y).unwrap() == (0, 1));
    }

    #[test]
    fn cayley_is_a_homomorphism() {
        for g in groups() {
            if g.order() > 24 {
                continue;
            }
            let id: Vec<usize> = (0..g.order()).collect();
            assert_eq!(g.cayley_permutation(g.identity()).unwrap(), id);
            for a in g.elements() {
                for b in g.elements() {
                    let ab = g.mul(a, b).unwrap();
                    let lhs = g.cayley_permutation(ab).unwrap();
                    let rhs = compose(&g.cayley_permutation(a).unwrap(), &g.cayley_permutation(b).unwrap());
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn parsing_and_errors() {
        assert_eq!(GroupSpec::parse("c:2x3").unwrap().order(), 6);
        assert_eq!(GroupSpec::parse("d:5").unwrap().order(), 10);
        assert_eq!(GroupSpec::parse("c:1").unwrap().order(), 1);
        assert!(GroupSpec::parse("q:3").is_err());
        let g = GroupSpec::cyclic(4).unwrap();
        assert!(matches!(g.mul(GroupElement(4), GroupElement(0)), Err(Error::OutOfRange { .. })));
        assert_eq!(g.to_string(), "c:4");
        assert_eq!(GroupSpec::abelian(&[2, 3]).unwrap().exponent(), 6);
        assert_eq!(g.decode_abelian(GroupElement(3)).unwrap(), vec![3]);
    }
}
