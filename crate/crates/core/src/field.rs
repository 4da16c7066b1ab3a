//! Finite fields F_q with q = p^e <= 2^20.
//!
//! Elements are stored as their canonical integer `c_0 + c_1 p + ... + c_{e-1} p^{e-1}`
//! where `c_0 + c_1 X + ...` is the residue modulo the field's defining
//! polynomial. Multiplication goes through discrete log tables built at
//! construction time, so every operation is O(1) after `make_field`.

use std::fmt;
use std::sync::Arc;

use crate::arith;
use crate::error::{precondition, Error, Result};

/// Largest field order supported by [`make_field`].
pub const MAX_FIELD_ORDER: u64 = 1 << 20;

/// A field element, i.e. the canonical integer encoding of its residue.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FieldElement(pub(crate) u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    /// Canonical integer encoding.
    pub fn index(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

struct Inner {
    p: u32,
    e: u32,
    q: u32,
    /// Monic defining polynomial over F_p, low-to-high, length e + 1.
    modulus: Option<Vec<u32>>,
    exp: Vec<u32>,
    log: Vec<u32>,
    neg: Vec<u32>,
    add: Option<Vec<u32>>,
    pow_p: Vec<u32>,
}

/// A finite field description shared by all of its elements.
#[derive(Clone)]
pub struct FieldSpec(Arc<Inner>);

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.e == other.0.e && self.0.modulus == other.0.modulus)
    }
}

impl Eq for FieldSpec {}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.0.q)?;
        if let Some(m) = &self.0.modulus {
            write!(f, " (modulus {m:?})")?;
        }
        Ok(())
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}", self.0.p, self.0.e)
    }
}

/// Builds F_{p^e}. The defining polynomial is the smallest monic irreducible
/// of degree `e` over F_p, ordered by the integer `sum c_i p^i`.
pub fn make_field(p: u64, e: u32) -> Result<FieldSpec> {
    if !arith::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if e == 0 {
        return Err(Error::ZeroDegree);
    }
    let q = (p as u128).checked_pow(e).unwrap_or(u128::MAX);
    if q > MAX_FIELD_ORDER as u128 {
        return Err(Error::OrderTooLarge { p, e });
    }
    let p = p as u32;
    let modulus = if e == 1 {
        None
    } else {
        let prime = build(p, 1, None);
        let poly = Polynomial::smallest_irreducible(&prime, e as usize);
        Some(poly.coeffs.iter().map(|c| c.0).collect())
    };
    Ok(build(p, e, modulus))
}

/// Parses a field literal of the form `"p^e"` or `"p"`.
pub fn parse_field(s: &str) -> Result<FieldSpec> {
    let s = s.trim();
    let (p, e) = match s.split_once('^') {
        Some((p, e)) => (p.trim(), e.trim()),
        None => (s, "1"),
    };
    let p: u64 = p.parse().map_err(|_| Error::Parse(format!("bad field literal {s:?}")))?;
    let e: u32 = e.parse().map_err(|_| Error::Parse(format!("bad field literal {s:?}")))?;
    make_field(p, e)
}

fn build(p: u32, e: u32, modulus: Option<Vec<u32>>) -> FieldSpec {
    let q = p.pow(e);
    let digits = |mut v: u32| -> Vec<u32> {
        let mut d = vec![0u32; e as usize];
        for slot in d.iter_mut() {
            *slot = v % p;
            v /= p;
        }
        d
    };
    let undigits = |d: &[u32]| -> u32 { d.iter().rev().fold(0, |acc, &c| acc * p + c) };

    let slow_add = |a: u32, b: u32| -> u32 {
        if p == 2 {
            return a ^ b;
        }
        let (da, db) = (digits(a), digits(b));
        let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
        undigits(&s)
    };
    let slow_mul = |a: u32, b: u32| -> u32 {
        match &modulus {
            None => ((a as u64 * b as u64) % p as u64) as u32,
            Some(m) => {
                let (da, db) = (digits(a), digits(b));
                let el = e as usize;
                let mut prod = vec![0u64; 2 * el - 1];
                for (i, &x) in da.iter().enumerate() {
                    if x == 0 {
                        continue;
                    }
                    for (j, &y) in db.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p as u64;
                    }
                }
                for deg in (el..prod.len()).rev() {
                    let c = prod[deg];
                    if c == 0 {
                        continue;
                    }
                    prod[deg] = 0;
                    for k in 0..el {
                        let sub = c * m[k] as u64 % p as u64;
                        let slot = &mut prod[deg - el + k];
                        *slot = (*slot + p as u64 - sub) % p as u64;
                    }
                }
                let r: Vec<u32> = prod[..el].iter().map(|&c| c as u32).collect();
                undigits(&r)
            }
        }
    };

    let neg: Vec<u32> = (0..q)
        .map(|v| {
            let d: Vec<u32> = digits(v).iter().map(|&c| (p - c) % p).collect();
            undigits(&d)
        })
        .collect();
    let add = if p != 2 && e > 1 && q <= 256 {
        let mut t = vec![0u32; (q * q) as usize];
        for a in 0..q {
            for b in 0..q {
                t[(a * q + b) as usize] = slow_add(a, b);
            }
        }
        Some(t)
    } else {
        None
    };

    // Discrete log tables from a primitive element.
    let order = (q - 1) as u64;
    let primes = arith::prime_divisors(order);
    let slow_pow = |a: u32, mut k: u64| -> u32 {
        let mut acc = 1u32;
        let mut b = a;
        while k > 0 {
            if k & 1 == 1 {
                acc = slow_mul(acc, b);
            }
            b = slow_mul(b, b);
            k >>= 1;
        }
        acc
    };
    let generator = if q == 2 {
        1
    } else {
        (2..q)
            .chain(std::iter::once(1))
            .find(|&g| primes.iter().all(|&l| slow_pow(g, order / l) != 1))
            .expect("multiplicative group of a finite field is cyclic")
    };
    let mut exp = vec![0u32; 2 * (q as usize - 1).max(1)];
    let mut log = vec![0u32; q as usize];
    let mut cur = 1u32;
    for i in 0..(q - 1) as usize {
        exp[i] = cur;
        log[cur as usize] = i as u32;
        cur = slow_mul(cur, generator);
    }
    for i in (q - 1) as usize..exp.len() {
        exp[i] = exp[i - (q - 1) as usize];
    }
    let pow_p = (0..q)
        .map(|a| {
            if a == 0 {
                0
            } else {
                exp[(log[a as usize] as u64 * p as u64 % order.max(1)) as usize]
            }
        })
        .collect();

    FieldSpec(Arc::new(Inner {
        p,
        e,
        q,
        modulus,
        exp,
        log,
        neg,
        add,
        pow_p,
    }))
}

impl FieldSpec {
    pub fn prime(p: u64) -> Result<FieldSpec> {
        make_field(p, 1)
    }

    pub fn characteristic(&self) -> u32 {
        self.0.p
    }

    pub fn degree(&self) -> u32 {
        self.0.e
    }

    pub fn order(&self) -> u32 {
        self.0.q
    }

    /// Defining polynomial over F_p, low-to-high; `None` for prime fields.
    pub fn modulus(&self) -> Option<&[u32]> {
        self.0.modulus.as_deref()
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement(0)
    }

    pub fn one(&self) -> FieldElement {
        FieldElement(1)
    }

    pub fn element(&self, index: u32) -> Result<FieldElement> {
        if index < self.0.q {
            Ok(FieldElement(index))
        } else {
            Err(Error::OutOfRange {
                index: index as usize,
                size: self.0.q as usize,
            })
        }
    }

    /// All elements in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.0.q).map(FieldElement)
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, v: i64) -> FieldElement {
        FieldElement(v.rem_euclid(self.0.p as i64) as u32)
    }

    pub fn coeffs(&self, a: FieldElement) -> Vec<u32> {
        let mut v = a.0;
        (0..self.0.e)
            .map(|_| {
                let c = v % self.0.p;
                v /= self.0.p;
                c
            })
            .collect()
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<FieldElement> {
        if coeffs.len() > self.0.e as usize || coeffs.iter().any(|&c| c >= self.0.p) {
            return Err(precondition("coefficient vector does not describe a field element"));
        }
        let v = coeffs.iter().rev().fold(0u32, |acc, &c| acc * self.0.p + c);
        Ok(FieldElement(v))
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let inner = &*self.0;
        if inner.p == 2 {
            return FieldElement(a.0 ^ b.0);
        }
        if inner.e == 1 {
            let s = a.0 + b.0;
            return FieldElement(if s >= inner.p { s - inner.p } else { s });
        }
        if let Some(t) = &inner.add {
            return FieldElement(t[(a.0 * inner.q + b.0) as usize]);
        }
        let (mut x, mut y, mut out, mut place) = (a.0, b.0, 0u32, 1u32);
        for _ in 0..inner.e {
            out += ((x % inner.p + y % inner.p) % inner.p) * place;
            x /= inner.p;
            y /= inner.p;
            place *= inner.p;
        }
        FieldElement(out)
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        FieldElement(self.0.neg[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.0 == 0 || b.0 == 0 {
            return FieldElement(0);
        }
        let inner = &*self.0;
        FieldElement(inner.exp[(inner.log[a.0 as usize] + inner.log[b.0 as usize]) as usize])
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        let inner = &*self.0;
        let l = inner.log[a.0 as usize];
        Ok(FieldElement(inner.exp[((inner.q - 1 - l) % (inner.q - 1)) as usize]))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: FieldElement, k: u64) -> FieldElement {
        if k == 0 {
            return self.one();
        }
        if a.0 == 0 {
            return self.zero();
        }
        let inner = &*self.0;
        let l = inner.log[a.0 as usize] as u64 * (k % (inner.q as u64 - 1));
        FieldElement(inner.exp[(l % (inner.q as u64 - 1)) as usize])
    }

    /// The Frobenius map a -> a^p.
    pub fn frobenius(&self, a: FieldElement) -> FieldElement {
        FieldElement(self.0.pow_p[a.0 as usize])
    }

    /// Formats an element as its coefficient string, low-to-high.
    pub fn format_element(&self, a: FieldElement) -> String {
        let coeffs = self.coeffs(a);
        if self.0.p <= 36 {
            coeffs
                .iter()
                .map(|&c| std::char::from_digit(c, 36).unwrap())
                .collect()
        } else {
            coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(".")
        }
    }

    pub fn parse_element(&self, s: &str) -> Result<FieldElement> {
        let bad = || Error::Parse(format!("bad element literal {s:?} for {self}"));
        let coeffs: Vec<u32> = if self.0.p <= 36 {
            s.chars()
                .map(|c| c.to_digit(36).ok_or_else(bad))
                .collect::<Result<_>>()?
        } else {
            s.split('.')
                .map(|t| t.parse().map_err(|_| bad()))
                .collect::<Result<_>>()?
        };
        if coeffs.len() != self.0.e as usize {
            return Err(bad());
        }
        self.from_coeffs(&coeffs).map_err(|_| bad())
    }

    /// Width in characters of one formatted element, when fixed.
    pub(crate) fn element_width(&self) -> Option<usize> {
        (self.0.p <= 36).then_some(self.0.e as usize)
    }
}

/// Univariate polynomial over a finite field, constant term first.
///
/// Always normalized: the leading coefficient is nonzero, and the zero
/// polynomial has no coefficients at all.
#[derive(Clone, PartialEq, Eq)]
pub struct Polynomial {
    field: FieldSpec,
    coeffs: Vec<FieldElement>,
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let idx: Vec<u32> = self.coeffs.iter().map(|c| c.0).collect();
        write!(f, "Poly{idx:?}")
    }
}

impl Polynomial {
    pub fn new(field: &FieldSpec, mut coeffs: Vec<FieldElement>) -> Polynomial {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Polynomial {
            field: field.clone(),
            coeffs,
        }
    }

    pub fn zero(field: &FieldSpec) -> Polynomial {
        Polynomial::new(field, Vec::new())
    }

    pub fn one(field: &FieldSpec) -> Polynomial {
        Polynomial::new(field, vec![field.one()])
    }

    /// X^k.
    pub fn monomial(field: &FieldSpec, k: usize) -> Polynomial {
        let mut c = vec![field.zero(); k + 1];
        c[k] = field.one();
        Polynomial::new(field, c)
    }

    /// X^n - 1.
    pub fn x_n_minus_one(field: &FieldSpec, n: usize) -> Polynomial {
        let mut c = vec![field.zero(); n + 1];
        c[n] = field.one();
        c[0] = field.sub(c[0], field.one());
        Polynomial::new(field, c)
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Option<FieldElement> {
        self.coeffs.last().copied()
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == Some(self.field.one())
    }

    pub fn coeff(&self, i: usize) -> FieldElement {
        self.coeffs.get(i).copied().unwrap_or_default()
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let f = &self.field;
        let len = self.coeffs.len().max(other.coeffs.len());
        let c = (0..len).map(|i| f.add(self.coeff(i), other.coeff(i))).collect();
        Polynomial::new(f, c)
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        let f = &self.field;
        let len = self.coeffs.len().max(other.coeffs.len());
        let c = (0..len).map(|i| f.sub(self.coeff(i), other.coeff(i))).collect();
        Polynomial::new(f, c)
    }

    pub fn scale(&self, s: FieldElement) -> Polynomial {
        let c = self.coeffs.iter().map(|&a| self.field.mul(a, s)).collect();
        Polynomial::new(&self.field, c)
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero(&self.field);
        }
        let f = &self.field;
        let mut c = vec![f.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                c[i + j] = f.add(c[i + j], f.mul(a, b));
            }
        }
        Polynomial::new(f, c)
    }

    /// Euclidean division: `(quotient, remainder)`.
    pub fn div_rem(&self, divisor: &Polynomial) -> Result<(Polynomial, Polynomial)> {
        let f = &self.field;
        let dd = divisor.degree().ok_or(Error::DivisionByZero)?;
        let lead_inv = f.inv(divisor.leading().unwrap())?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Polynomial::zero(f), self.clone()));
        }
        let mut quot = vec![f.zero(); rem.len() - dd];
        for deg in (dd..rem.len()).rev() {
            let c = f.mul(rem[deg], lead_inv);
            if c.is_zero() {
                continue;
            }
            quot[deg - dd] = c;
            for (k, &d) in divisor.coeffs.iter().enumerate() {
                let slot = &mut rem[deg - dd + k];
                *slot = f.sub(*slot, f.mul(c, d));
            }
        }
        rem.truncate(dd);
        Ok((Polynomial::new(f, quot), Polynomial::new(f, rem)))
    }

    pub fn rem(&self, divisor: &Polynomial) -> Result<Polynomial> {
        Ok(self.div_rem(divisor)?.1)
    }

    pub fn monic(&self) -> Polynomial {
        match self.leading() {
            None => self.clone(),
            Some(l) => self.scale(self.field.inv(l).expect("nonzero leading coefficient")),
        }
    }

    /// Monic greatest common divisor (zero when both inputs are zero).
    pub fn gcd(&self, other: &Polynomial) -> Polynomial {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Inverse of `self` modulo `m`, if it exists.
    pub fn inverse_mod(&self, m: &Polynomial) -> Option<Polynomial> {
        let f = &self.field;
        let (mut r0, mut r1) = (m.clone(), self.rem(m).ok()?);
        let (mut s0, mut s1) = (Polynomial::zero(f), Polynomial::one(f));
        while !r1.is_zero() {
            let (qt, r) = r0.div_rem(&r1).ok()?;
            let s = s0.sub(&qt.mul(&s1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
        }
        if r0.degree() != Some(0) {
            return None;
        }
        let c = f.inv(r0.leading().unwrap()).ok()?;
        s0.scale(c).rem(m).ok()
    }

    /// `self^k mod m`.
    pub fn pow_mod(&self, mut k: u64, m: &Polynomial) -> Result<Polynomial> {
        let mut acc = Polynomial::one(&self.field).rem(m)?;
        let mut base = self.rem(m)?;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base).rem(m)?;
            }
            base = base.mul(&base).rem(m)?;
            k >>= 1;
        }
        Ok(acc)
    }

    pub fn eval(&self, x: FieldElement) -> FieldElement {
        let f = &self.field;
        self.coeffs
            .iter()
            .rev()
            .fold(f.zero(), |acc, &c| f.add(f.mul(acc, x), c))
    }

    /// Irreducibility test: `f` of degree d is irreducible iff
    /// gcd(f, X^{q^i} - X) = 1 for every i <= d/2.
    pub fn is_irreducible(&self) -> bool {
        let Some(d) = self.degree() else {
            return false;
        };
        if d == 0 {
            return false;
        }
        if d == 1 {
            return true;
        }
        let q = self.field.order() as u64;
        let x = Polynomial::monomial(&self.field, 1);
        let mut frob = x.clone();
        for _ in 0..d / 2 {
            frob = frob.pow_mod(q, self).expect("nonzero modulus");
            let g = self.gcd(&frob.sub(&x));
            if g.degree() != Some(0) {
                return false;
            }
        }
        true
    }

    /// Smallest monic irreducible polynomial of degree `d`, in the order of
    /// the integer `sum c_i q^i`.
    pub fn smallest_irreducible(field: &FieldSpec, d: usize) -> Polynomial {
        assert!(d >= 1);
        let q = field.order() as u64;
        let mut digits = vec![0u64; d];
        loop {
            // c_0 = 0 means X divides the candidate.
            if d == 1 || digits[0] != 0 {
                let mut c: Vec<FieldElement> = digits.iter().map(|&v| FieldElement(v as u32)).collect();
                c.push(field.one());
                let cand = Polynomial::new(field, c);
                if cand.is_irreducible() {
                    return cand;
                }
            }
            let mut i = 0;
            loop {
                digits[i] += 1;
                if digits[i] < q {
                    break;
                }
                digits[i] = 0;
                i += 1;
                assert!(i < d, "irreducible polynomials exist in every degree");
            }
        }
    }

    /// Total order used for deterministic sorting: degree, then coefficients.
    pub(crate) fn sort_key(&self) -> (usize, Vec<u32>) {
        (self.coeffs.len(), self.coeffs.iter().map(|c| c.0).collect())
    }
}

/// Factors X^n - 1 into monic irreducibles over `field`.
///
/// Factors correspond to the q-cosets of Z_n and are sorted by degree, then
/// coefficient vector.
pub fn factor_xn_minus_1(field: &FieldSpec, n: usize) -> Result<Vec<Polynomial>> {
    if n == 0 {
        return Err(precondition("n must be positive"));
    }
    let q = field.order() as u64;
    if arith::gcd(n as u64, field.characteristic() as u64) != 1 {
        return Err(Error::NotCoprime { n: n as u64, q });
    }
    let ext = crate::ext::SplittingField::new(field, n as u64)?;
    let zeta = ext.root_of_unity();
    let powers = ext.powers(&zeta, n);
    let cosets = crate::decomposition::q_cosets(n as u64, q)?;
    let mut factors = Vec::new();
    for orbit in &cosets.orbits {
        // prod_{k in orbit} (X - zeta^k), computed over the splitting field.
        let mut acc: Vec<Vec<FieldElement>> = vec![ext.one()];
        for &k in orbit {
            let root = ext.neg(&powers[k as usize]);
            let mut next = vec![ext.zero(); acc.len() + 1];
            for (i, c) in acc.iter().enumerate() {
                next[i + 1] = ext.add(&next[i + 1], c);
                next[i] = ext.add(&next[i], &ext.mul(c, &root));
            }
            acc = next;
        }
        let coeffs = acc
            .iter()
            .map(|c| ext.to_base(c))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| crate::error::internal("coset polynomial left the base field"))?;
        factors.push(Polynomial::new(field, coeffs));
    }
    factors.sort_by_key(|p| p.sort_key());
    let product = factors
        .iter()
        .fold(Polynomial::one(field), |acc, f| acc.mul(f));
    if product != Polynomial::x_n_minus_one(field, n) {
        return Err(crate::error::internal("factor product differs from X^n - 1"));
    }
    Ok(factors)
}
