//! q-cosets and the primitive idempotents of a semisimple abelian group algebra.
//!
//! Idempotents are built from orbits of characters: with N the exponent of
//! G and zeta a primitive N-th root of unity in the splitting field, the
//! character of a in G is chi_a(x) = zeta^{sum a_i x_i N/n_i}, and each
//! orbit O of the action a -> q a gives
//! e_O = (1/|G|) sum_x (sum_{a in O} chi_a(x^{-1})) x, whose coefficients
//! lie in F_q.

use crate::algebra::AlgebraElement;
use crate::arith;
use crate::error::{internal, precondition, Error, Result};
use crate::ext::SplittingField;
use crate::field::{FieldElement, FieldSpec};
use crate::groups::GroupSpec;
use crate::linalg::{self, Row};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QCosetPartition {
    pub n: u64,
    pub q: u64,
    /// Sorted orbits, ordered by their least element; `orbits[0] == [0]`.
    pub orbits: Vec<Vec<u64>>,
}

pub fn q_cosets(n: u64, q: u64) -> Result<QCosetPartition> {
    if n == 0 {
        return Err(precondition("modulus must be positive"));
    }
    if arith::gcd(n, q) != 1 {
        return Err(Error::NotCoprime { n, q });
    }
    let mut seen = vec![false; n as usize];
    let mut orbits = Vec::new();
    for a in 0..n {
        if seen[a as usize] {
            continue;
        }
        let mut orbit = Vec::new();
        let mut cur = a;
        while !seen[cur as usize] {
            seen[cur as usize] = true;
            orbit.push(cur);
            cur = ((cur as u128 * q as u128) % n as u128) as u64;
        }
        orbit.sort_unstable();
        orbits.push(orbit);
    }
    Ok(QCosetPartition { n, q, orbits })
}

/// Least size of a nontrivial q-coset of Z_n.
pub fn mu(n: u64, q: u64) -> Result<u64> {
    if n < 2 {
        return Err(precondition("mu needs n > 1"));
    }
    let cosets = q_cosets(n, q)?;
    let from_orbits = cosets.orbits[1..].iter().map(|o| o.len() as u64).min().unwrap();
    let from_primes = arith::prime_divisors(n)
        .into_iter()
        .map(|p| arith::mult_order(q % p, p))
        .min()
        .unwrap();
    if from_orbits != from_primes {
        return Err(internal(format!(
            "mu_{q}({n}): orbit minimum {from_orbits} differs from prime-order minimum {from_primes}"
        )));
    }
    Ok(from_orbits)
}

/// The bar map on the idempotents of an odd-order abelian group algebra.
#[derive(Debug, Clone)]
pub struct BarPairing {
    /// Indices i >= 1 with bar(e_i) = e_i.
    pub fixed: Vec<usize>,
    /// Index pairs (j, j') with j < j' and bar(e_j) = e_{j'}.
    pub pairs: Vec<(usize, usize)>,
    /// e_0, the fixed e_i, then e_j + bar(e_j) for each pair.
    pub hat: Vec<AlgebraElement>,
    /// k_e for hat[1..]: d/2 on fixed components, d on pairs.
    pub k: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct Decomposition {
    field: FieldSpec,
    group: GroupSpec,
    idempotents: Vec<AlgebraElement>,
    dims: Vec<usize>,
    mu: Option<u64>,
    pairing: Option<BarPairing>,
}

impl Decomposition {
    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    /// e_0, e_1, ..., e_m.
    pub fn idempotents(&self) -> &[AlgebraElement] {
        &self.idempotents
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// mu_q(|G|), absent for the trivial group.
    pub fn mu(&self) -> Option<u64> {
        self.mu
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }

    /// The bar pairing; only defined for odd |G|.
    pub fn pairing(&self) -> Result<&BarPairing> {
        self.pairing
            .as_ref()
            .ok_or_else(|| precondition("the bar pairing needs a group of odd order"))
    }

    /// Indices i with a·e_i != 0.
    pub fn support(&self, a: &AlgebraElement) -> Vec<usize> {
        (0..self.idempotents.len())
            .filter(|&i| !component(a, &self.idempotents[i]).is_zero())
            .collect()
    }

    /// Indices t >= 1 into `hat` with a·hat[t] != 0, and l_a = sum of their k.
    pub fn support_ell(&self, a: &AlgebraElement) -> Result<(Vec<usize>, usize)> {
        let pairing = self.pairing()?;
        let hit: Vec<usize> = (1..pairing.hat.len())
            .filter(|&t| !component(a, &pairing.hat[t]).is_zero())
            .collect();
        let ell = hit.iter().map(|&t| pairing.k[t - 1]).sum();
        Ok((hit, ell))
    }

    /// I_b = F G iff every component is reached by some b_j.
    pub fn generates_algebra(&self, b: &[AlgebraElement]) -> bool {
        self.idempotents
            .iter()
            .all(|e| b.iter().any(|bj| !component(bj, e).is_zero()))
    }
}

/// The component a·e of a in F G e.
pub fn component(a: &AlgebraElement, e: &AlgebraElement) -> AlgebraElement {
    a * e
}

/// Basis of I_b = F G b_1 + ... + F G b_k, in reduced echelon form.
pub fn ideal_of(b: &[AlgebraElement]) -> Result<Vec<Row>> {
    let first = b.first().ok_or_else(|| precondition("empty generator tuple"))?;
    for bj in b {
        if bj.field() != first.field() || bj.group() != first.group() {
            return Err(Error::SpecMismatch("algebras"));
        }
    }
    let rows: Vec<Row> = b.iter().flat_map(|bj| bj.left_translates()).collect();
    Ok(linalg::rref(first.field(), &rows, first.group().order()).rows)
}

/// All primitive idempotents of F G for abelian G with gcd(|G|, q) = 1.
pub fn primitive_idempotents(field: &FieldSpec, group: &GroupSpec) -> Result<Decomposition> {
    let factors = group
        .factors()
        .ok_or_else(|| precondition("primitive_idempotents needs an abelian group"))?
        .to_vec();
    let n = group.order();
    let q = field.order() as u64;
    if arith::gcd(n as u64, q) != 1 {
        return Err(Error::NotCoprime { n: n as u64, q });
    }
    let exponent = group.exponent() as u64;
    let ext = SplittingField::new(field, exponent)?;
    let zeta = ext.root_of_unity();
    let powers = ext.powers(&zeta, exponent as usize);
    let digits: Vec<Vec<usize>> = group.elements().map(|g| group.decode_abelian(g).unwrap()).collect();
    let scale: Vec<u64> = factors.iter().map(|&ni| exponent / ni as u64).collect();
    let phase = |a: &[usize], x: &[usize]| -> u64 {
        a.iter()
            .zip(x)
            .zip(&scale)
            .map(|((&ai, &xi), &s)| (ai * xi) as u64 * s)
            .sum::<u64>()
            % exponent
    };
    let encode = |d: &[usize]| -> usize {
        d.iter().rev().zip(factors.iter().rev()).fold(0, |acc, (&di, &ni)| acc * ni + di)
    };

    // Character orbits under a -> q a.
    let mut seen = vec![false; n];
    let mut orbits: Vec<Vec<usize>> = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut orbit = Vec::new();
        let mut cur = start;
        while !seen[cur] {
            seen[cur] = true;
            orbit.push(cur);
            let next: Vec<usize> = digits[cur]
                .iter()
                .zip(&factors)
                .map(|(&d, &ni)| ((d as u64 * q) % ni as u64) as usize)
                .collect();
            cur = encode(&next);
        }
        orbits.push(orbit);
    }

    let inv_n = field.inv(field.from_int(n as i64))?;
    let mut elems: Vec<(usize, AlgebraElement)> = Vec::with_capacity(orbits.len());
    for orbit in &orbits {
        let mut coeffs = Vec::with_capacity(n);
        for x in &digits {
            let mut s = ext.zero();
            for &a in orbit {
                let ph = phase(&digits[a], x);
                s = ext.add(&s, &powers[((exponent - ph) % exponent) as usize]);
            }
            let c = ext
                .to_base(&s)
                .ok_or_else(|| internal("idempotent coefficient outside the base field"))?;
            coeffs.push(field.mul(c, inv_n));
        }
        elems.push((orbit.len(), AlgebraElement::from_coeffs(field, group, coeffs)?));
    }
    // orbits[0] is the trivial character, giving e_0.
    let e0 = elems.remove(0);
    elems.sort_by(|(da, a), (db, b)| da.cmp(db).then_with(|| a.coeffs().cmp(b.coeffs())));
    elems.insert(0, e0);

    let (dims, idempotents): (Vec<usize>, Vec<AlgebraElement>) = elems.into_iter().unzip();
    let mu_val = if n > 1 { Some(mu(n as u64, q)?) } else { None };
    let mut dec = Decomposition {
        field: field.clone(),
        group: group.clone(),
        idempotents,
        dims,
        mu: mu_val,
        pairing: None,
    };
    verify(&dec)?;
    if n % 2 == 1 {
        dec.pairing = Some(bar_pairing(&dec)?);
    }
    Ok(dec)
}

fn verify(dec: &Decomposition) -> Result<()> {
    let field = &dec.field;
    let group = &dec.group;
    let n = group.order();
    let es = &dec.idempotents;
    let mut sum = AlgebraElement::zero(field, group);
    for e in es {
        sum = &sum + e;
    }
    if sum != AlgebraElement::one(field, group) {
        return Err(internal("idempotents do not sum to 1"));
    }
    let all_ones = AlgebraElement::from_coeffs(field, group, vec![field.one(); n])?;
    let inv_n = field.inv(field.from_int(n as i64))?;
    if es[0] != all_ones.scale(inv_n) {
        return Err(internal("e_0 differs from (1/n) sum x"));
    }
    for (i, e) in es.iter().enumerate() {
        if &(e * e) != e {
            return Err(internal(format!("e_{i} is not idempotent")));
        }
        for f in &es[i + 1..] {
            if !(e * f).is_zero() {
                return Err(internal("idempotents are not orthogonal"));
            }
        }
        if linalg::rank(field, &e.left_translates(), n) != dec.dims[i] {
            return Err(internal(format!("dim F G e_{i} differs from its orbit size")));
        }
    }
    if dec.dims.iter().sum::<usize>() != n {
        return Err(internal("component dimensions do not add up to |G|"));
    }
    if let Some(m) = dec.mu {
        let min_dim = dec.dims[1..].iter().min().copied().unwrap_or(0) as u64;
        if min_dim != m {
            return Err(internal("least nontrivial dimension differs from mu"));
        }
    }
    Ok(())
}

fn bar_pairing(dec: &Decomposition) -> Result<BarPairing> {
    let n = dec.order();
    if n % 2 == 0 {
        return Err(precondition("the bar pairing needs a group of odd order"));
    }
    let es = &dec.idempotents;
    let partner: Vec<usize> = es
        .iter()
        .map(|e| {
            let b = e.bar();
            es.iter()
                .position(|f| *f == b)
                .ok_or_else(|| internal("bar(e) is not a primitive idempotent"))
        })
        .collect::<Result<_>>()?;
    if partner[0] != 0 {
        return Err(internal("e_0 is not bar-fixed"));
    }
    let mut fixed = Vec::new();
    let mut pairs = Vec::new();
    for (i, &j) in partner.iter().enumerate().skip(1) {
        if i == j {
            fixed.push(i);
        } else if i < j {
            pairs.push((i, j));
        }
    }
    let mut hat = vec![es[0].clone()];
    let mut k = Vec::new();
    for &i in &fixed {
        if dec.dims[i] % 2 != 0 {
            return Err(internal("bar-fixed component of odd dimension"));
        }
        hat.push(es[i].clone());
        k.push(dec.dims[i] / 2);
    }
    for &(j, jp) in &pairs {
        hat.push(&es[j] + &es[jp]);
        k.push(dec.dims[j]);
    }
    if 1 + fixed.len() + 2 * pairs.len() != es.len() {
        return Err(internal("bar pairing does not cover every component"));
    }
    if k.iter().sum::<usize>() != (n - 1) / 2 {
        return Err(internal("sum of k_e differs from (n-1)/2"));
    }
    Ok(BarPairing { fixed, pairs, hat, k })
}

/// Element of F G e sampled or enumerated as a·e for a in F G: the
/// coordinates of F G e in the basis given by the rref of its translates.
pub fn component_basis(e: &AlgebraElement) -> Vec<Row> {
    linalg::rref(e.field(), &e.left_translates(), e.group().order()).rows
}

/// Linear combination sum c_i rows_i as an algebra element.
pub fn combine(field: &FieldSpec, group: &GroupSpec, basis: &[Row], c: &[FieldElement]) -> AlgebraElement {
    let mut v = vec![FieldElement::ZERO; group.order()];
    for (row, &ci) in basis.iter().zip(c) {
        linalg::axpy(field, &mut v, ci, row);
    }
    AlgebraElement::from_coeffs(field, group, v).expect("basis rows have length |G|")
}

/// Largest component enumerated exhaustively.
pub const MAX_COMPONENT_SIZE: u64 = 1 << 20;

/// Every element of F G e, up to `MAX_COMPONENT_SIZE` of them.
pub fn component_elements(e: &AlgebraElement) -> Result<Vec<AlgebraElement>> {
    let field = e.field();
    let basis = component_basis(e);
    let q = field.order() as u64;
    let size = (q as f64).powi(basis.len() as i32);
    if size > MAX_COMPONENT_SIZE as f64 {
        return Err(precondition(format!(
            "component of {size} elements is too large to enumerate"
        )));
    }
    let d = basis.len();
    Ok((0..q.pow(d as u32))
        .map(|mut v| {
            let c: Vec<FieldElement> = (0..d)
                .map(|_| {
                    let x = FieldElement((v % q) as u32);
                    v /= q;
                    x
                })
                .collect();
            combine(field, e.group(), &basis, &c)
        })
        .collect())
}
