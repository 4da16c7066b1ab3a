//! Splitting fields F_{q^m} = F_q[Y]/(g) containing a primitive N-th root of unity.
//!
//! Built as a tower over an existing [`FieldSpec`] so that F_q sits inside as
//! the constants. No order cap applies here, only the degree cap `m <= 32`.

use num_bigint::BigUint;
use num_traits::One;

use crate::arith;
use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec, Polynomial};

pub const MAX_SPLITTING_DEGREE: u32 = 32;

pub type ExtElement = Vec<FieldElement>;

pub struct SplittingField {
    base: FieldSpec,
    degree: usize,
    /// Monic modulus g, low-to-high, length degree + 1.
    modulus: Vec<FieldElement>,
    n: u64,
    zeta: ExtElement,
}

impl SplittingField {
    /// Smallest extension of `base` containing a primitive `n`-th root of unity.
    pub fn new(base: &FieldSpec, n: u64) -> Result<SplittingField> {
        let q = base.order() as u64;
        if arith::gcd(n, q) != 1 {
            return Err(Error::NotCoprime { n, q });
        }
        let m = arith::mult_order(q % n.max(1), n.max(1));
        if m > MAX_SPLITTING_DEGREE as u64 {
            return Err(Error::SplittingDegree {
                degree: m as u32,
                cap: MAX_SPLITTING_DEGREE,
            });
        }
        let m = m as usize;
        let g = Polynomial::smallest_irreducible(base, m);
        let mut ext = SplittingField {
            base: base.clone(),
            degree: m,
            modulus: g.coeffs().to_vec(),
            n,
            zeta: Vec::new(),
        };
        ext.zeta = ext.find_primitive_root()?;
        Ok(ext)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn zero(&self) -> ExtElement {
        vec![FieldElement::ZERO; self.degree]
    }

    pub fn one(&self) -> ExtElement {
        self.constant(self.base.one())
    }

    pub fn constant(&self, c: FieldElement) -> ExtElement {
        let mut v = self.zero();
        v[0] = c;
        v
    }

    /// The primitive n-th root of unity fixed at construction.
    pub fn root_of_unity(&self) -> ExtElement {
        self.zeta.clone()
    }

    /// zeta^0, ..., zeta^{count-1}.
    pub fn powers(&self, z: &ExtElement, count: usize) -> Vec<ExtElement> {
        let mut out = Vec::with_capacity(count);
        let mut cur = self.one();
        for _ in 0..count {
            out.push(cur.clone());
            cur = self.mul(&cur, z);
        }
        out
    }

    pub fn add(&self, a: &ExtElement, b: &ExtElement) -> ExtElement {
        a.iter().zip(b).map(|(&x, &y)| self.base.add(x, y)).collect()
    }

    pub fn neg(&self, a: &ExtElement) -> ExtElement {
        a.iter().map(|&x| self.base.neg(x)).collect()
    }

    pub fn scale(&self, a: &ExtElement, s: FieldElement) -> ExtElement {
        a.iter().map(|&x| self.base.mul(x, s)).collect()
    }

    pub fn mul(&self, a: &ExtElement, b: &ExtElement) -> ExtElement {
        let f = &self.base;
        let m = self.degree;
        let mut prod = vec![FieldElement::ZERO; 2 * m - 1];
        for (i, &x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = f.add(prod[i + j], f.mul(x, y));
            }
        }
        for deg in (m..prod.len()).rev() {
            let c = prod[deg];
            if c.is_zero() {
                continue;
            }
            for k in 0..m {
                let slot = &mut prod[deg - m + k];
                *slot = f.sub(*slot, f.mul(c, self.modulus[k]));
            }
        }
        prod.truncate(m);
        prod
    }

    pub fn pow(&self, a: &ExtElement, k: &BigUint) -> ExtElement {
        let mut acc = self.one();
        for i in (0..k.bits()).rev() {
            acc = self.mul(&acc, &acc);
            if k.bit(i) {
                acc = self.mul(&acc, a);
            }
        }
        acc
    }

    /// Returns the element as a base-field constant when it lies in F_q.
    pub fn to_base(&self, a: &ExtElement) -> Option<FieldElement> {
        a[1..].iter().all(|c| c.is_zero()).then_some(a[0])
    }

    fn is_one(&self, a: &ExtElement) -> bool {
        self.to_base(a) == Some(self.base.one())
    }

    fn find_primitive_root(&self) -> Result<ExtElement> {
        let n = self.n;
        if n == 1 {
            return Ok(self.one());
        }
        let q = BigUint::from(self.base.order());
        let order = q.pow(self.degree as u32) - BigUint::one();
        let cofactor = &order / BigUint::from(n);
        let primes = arith::prime_divisors(n);
        let qb = self.base.order();
        // Enumerate candidates by the integer sum c_i q^i, skipping 0.
        let mut counter: u64 = 1;
        loop {
            let mut cand = self.zero();
            let mut v = counter;
            for slot in cand.iter_mut() {
                *slot = FieldElement((v % qb as u64) as u32);
                v /= qb as u64;
            }
            if v != 0 {
                return Err(crate::error::internal("no primitive root of unity found"));
            }
            let z = self.pow(&cand, &cofactor);
            let primitive = primes
                .iter()
                .all(|&l| !self.is_one(&self.pow(&z, &BigUint::from(n / l))));
            if primitive {
                return Ok(z);
            }
            counter += 1;
        }
    }
}
