//! Random linear codes, quasi-abelian codes C_A, index-2 codes C_{a,a'} and
//! their fractional-index embeddings.

use crate::algebra::AlgebraElement;
use crate::arith;
use crate::codes::LinearCode;
use crate::decomposition::Decomposition;
use crate::error::{precondition, Error, Result};
use crate::field::{FieldElement, FieldSpec};
use crate::groups::{GroupKind, GroupSpec};
use crate::linalg::{self, Row};
use crate::rng::RngStream;

/// Parameters of a quasi-abelian ensemble (F G)^{k x t} with k = floor(r t).
#[derive(Debug, Clone)]
pub struct EnsembleConfig {
    pub field: FieldSpec,
    pub group: GroupSpec,
    pub t: usize,
    pub r: f64,
    pub delta: f64,
    pub trials: u64,
    pub seed: u64,
}

impl EnsembleConfig {
    pub fn k(&self) -> usize {
        (self.r * self.t as f64 + 1e-9).floor() as usize
    }

    pub fn validate(&self) -> Result<()> {
        let top = 1.0 - 1.0 / self.field.order() as f64;
        if !(self.r > 0.0 && self.r < 1.0) {
            return Err(precondition(format!("rate parameter r = {} must lie in (0, 1)", self.r)));
        }
        if !(self.delta > 0.0 && self.delta < top) {
            return Err(precondition(format!("delta = {} must lie in (0, {top})", self.delta)));
        }
        if self.k() == 0 {
            return Err(precondition("k = floor(r t) is 0"));
        }
        if !self.group.is_abelian() {
            return Err(precondition("quasi-abelian ensembles need an abelian group"));
        }
        Ok(())
    }
}

/// Uniform k x n matrix over F, drawn row by row.
pub fn random_matrix(field: &FieldSpec, k: usize, n: usize, rng: &mut RngStream) -> Vec<Row> {
    let q = field.order() as u64;
    (0..k)
        .map(|_| (0..n).map(|_| FieldElement(rng.below(q) as u32)).collect())
        .collect()
}

/// C_M: the row space of a uniform k x n matrix (its rank may fall below k).
pub fn random_linear_code(field: &FieldSpec, n: usize, k: usize, rng: &mut RngStream) -> Result<LinearCode> {
    if k == 0 || k > n {
        return Err(precondition(format!("need 1 <= k <= n, got k = {k}, n = {n}")));
    }
    LinearCode::new(field, n, random_matrix(field, k, n, rng))
}

/// A k x t matrix over F G, stored row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuasiMatrix {
    k: usize,
    t: usize,
    entries: Vec<AlgebraElement>,
}

impl QuasiMatrix {
    pub fn new(k: usize, t: usize, entries: Vec<AlgebraElement>) -> Result<QuasiMatrix> {
        if k == 0 || t == 0 || entries.len() != k * t {
            return Err(precondition("quasi matrix needs k * t entries with k, t >= 1"));
        }
        let first = &entries[0];
        if entries.iter().any(|e| e.field() != first.field() || e.group() != first.group()) {
            return Err(Error::SpecMismatch("algebras"));
        }
        Ok(QuasiMatrix { k, t, entries })
    }

    /// Entries sampled row-major, each in canonical group order.
    pub fn random(field: &FieldSpec, group: &GroupSpec, k: usize, t: usize, rng: &mut RngStream) -> QuasiMatrix {
        let entries = (0..k * t).map(|_| AlgebraElement::random(field, group, rng)).collect();
        QuasiMatrix { k, t, entries }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn entry(&self, i: usize, j: usize) -> &AlgebraElement {
        &self.entries[i * self.t + j]
    }

    pub fn field(&self) -> &FieldSpec {
        self.entries[0].field()
    }

    pub fn group(&self) -> &GroupSpec {
        self.entries[0].group()
    }

    /// bA for b in (F G)^k, as the concatenated word.
    pub fn apply(&self, b: &[AlgebraElement]) -> Result<Row> {
        if b.len() != self.k {
            return Err(precondition("message length differs from k"));
        }
        let mut out = Vec::with_capacity(self.t * self.group().order());
        for j in 0..self.t {
            let mut acc = AlgebraElement::zero(self.field(), self.group());
            for (i, bi) in b.iter().enumerate() {
                acc = acc.try_add(&bi.try_mul(self.entry(i, j))?)?;
            }
            out.extend_from_slice(acc.coeffs());
        }
        Ok(out)
    }

    /// The matrix with every entry multiplied by e.
    pub fn times(&self, e: &AlgebraElement) -> QuasiMatrix {
        QuasiMatrix {
            k: self.k,
            t: self.t,
            entries: self.entries.iter().map(|a| a * e).collect(),
        }
    }

    /// Field rows spanning {bA}: for each algebra row i and x in G, (x A_i1, ..., x A_it).
    pub fn field_rows(&self) -> Vec<Row> {
        let n = self.group().order();
        let mut rows = Vec::with_capacity(self.k * n);
        for i in 0..self.k {
            let translates: Vec<Vec<Row>> = (0..self.t).map(|j| self.entry(i, j).left_translates()).collect();
            for x in 0..n {
                rows.push(translates.iter().flat_map(|tr| tr[x].iter().copied()).collect());
            }
        }
        rows
    }
}

/// C_A = {bA : b in (F G)^k} as a code of length n t over F.
pub fn quasi_code(a: &QuasiMatrix) -> Result<LinearCode> {
    LinearCode::new(a.field(), a.t * a.group().order(), a.field_rows())
}

/// Whether every component matrix A e_i has full rank k over the field F G e_i.
pub fn full_rank(a: &QuasiMatrix, dec: &Decomposition) -> Result<bool> {
    if a.k > a.t {
        return Err(precondition("full rank needs k <= t"));
    }
    if a.group() != dec.group() || a.field() != dec.field() {
        return Err(Error::SpecMismatch("algebras"));
    }
    let len = a.t * a.group().order();
    for (e, &d) in dec.idempotents().iter().zip(dec.dims()) {
        let rows = a.times(e).field_rows();
        if linalg::rank(a.field(), &rows, len) != a.k * d {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Lower bound prod_i (1 - q^{d_i k} / q^{d_i t}) on Pr(A has full rank).
pub fn full_rank_probability_bound(dec: &Decomposition, k: usize, t: usize) -> f64 {
    let q = dec.field().order() as f64;
    dec.dims()
        .iter()
        .map(|&d| 1.0 - q.powf(d as f64 * (k as f64 - t as f64)))
        .product()
}

/// C_{a,a'} = {(ba, ba') : b in F G}.
pub fn index2_code(a: &AlgebraElement, a2: &AlgebraElement) -> Result<LinearCode> {
    quasi_code(&QuasiMatrix::new(1, 2, vec![a.clone(), a2.clone()])?)
}

/// Ann(a, b) = {c : c a = 0 = c b}, as a basis and its dimension.
pub fn annihilator(a: &AlgebraElement, b: &AlgebraElement) -> Result<(Vec<Row>, usize)> {
    let m = QuasiMatrix::new(1, 2, vec![a.clone(), b.clone()])?;
    let rows = m.field_rows();
    let basis = linalg::left_kernel(a.field(), &rows, 2 * a.group().order());
    let dim = basis.len();
    Ok((basis, dim))
}

/// The criterion a bar(a) + b bar(b) = 0 for C_{a,b} to be self-orthogonal.
pub fn index2_self_orthogonal(a: &AlgebraElement, b: &AlgebraElement) -> Result<bool> {
    Ok(a.try_mul(&a.bar())?.try_add(&b.try_mul(&b.bar())?)?.is_zero())
}

/// Pr(R(C_{a,a'}) = 1/2) for uniform (a, a'): prod over components of 1 - q^{-2 d_i}.
pub fn index2_full_rate_probability(dec: &Decomposition) -> f64 {
    let q = dec.field().order() as f64;
    dec.dims().iter().map(|&d| 1.0 - q.powi(-2 * d as i32)).product()
}

/// (1 - q^{-2}) q^{-q^{log_q(2n) - 2 mu}} <= Pr(R = 1/2) <= 1 - q^{-2}.
pub fn index2_rate_bounds(q: u64, n: u64, mu: u64) -> (f64, f64) {
    let qf = q as f64;
    let upper = 1.0 - qf.powi(-2);
    let lower = upper * qf.powf(-(2.0 * n as f64) / qf.powi(2 * mu as i32));
    (lower, upper)
}

fn cyclic_order(group: &GroupSpec) -> Result<usize> {
    match group.kind() {
        GroupKind::Abelian(f) if f.len() <= 1 => Ok(group.order()),
        _ => Err(precondition("fractional embedding needs a cyclic group")),
    }
}

/// phi~(a(x)) = a(x~)(1 + x~^n + ... + x~^{n(alpha-1)}) in F C_{alpha n}.
pub fn fractional_phi(a: &AlgebraElement, alpha: usize) -> Result<AlgebraElement> {
    if alpha < 1 {
        return Err(precondition("alpha must be at least 1"));
    }
    let n = cyclic_order(a.group())?;
    let q = a.field().order() as u64;
    if arith::gcd(n as u64, q) != 1 {
        return Err(Error::NotCoprime { n: n as u64, q });
    }
    let big = GroupSpec::cyclic(alpha * n)?;
    let coeffs = a.coeffs().repeat(alpha);
    AlgebraElement::from_coeffs(a.field(), &big, coeffs)
}

/// Phi(C_{a,a'}) = {(phi~(ba), ba')}, a code of length (alpha + 1) n.
pub fn fractional_code(a: &AlgebraElement, a2: &AlgebraElement, alpha: usize) -> Result<LinearCode> {
    fractional_phi(a, alpha)?;
    if a.group() != a2.group() || a.field() != a2.field() {
        return Err(Error::SpecMismatch("algebras"));
    }
    let n = a.group().order();
    let left = a.left_translates();
    let right = a2.left_translates();
    let rows = left
        .iter()
        .zip(&right)
        .map(|(l, r)| {
            let mut w = l.repeat(alpha);
            w.extend_from_slice(r);
            w
        })
        .collect();
    LinearCode::new(a.field(), (alpha + 1) * n, rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::primitive_idempotents;
    use crate::entropy;
    use crate::field::make_field;
    use crate::groups::GroupElement;
    use num_rational::Ratio;

    fn all_elements(f: &FieldSpec, g: &GroupSpec) -> Vec<AlgebraElement> {
        let q = f.order() as usize;
        let n = g.order();
        (0..q.pow(n as u32))
            .map(|mut v| {
                let coeffs = (0..n)
                    .map(|_| {
                        let c = FieldElement((v % q) as u32);
                        v /= q;
                        c
                    })
                    .collect();
                AlgebraElement::from_coeffs(f, g, coeffs).unwrap()
            })
            .collect()
    }

    #[test]
    fn random_codes_are_reproducible() {
        let f = make_field(2, 1).unwrap();
        let a = random_linear_code(&f, 6, 2, &mut RngStream::new(42)).unwrap();
        let b = random_linear_code(&f, 6, 2, &mut RngStream::new(42)).unwrap();
        assert_eq!(a.generators(), b.generators());
        assert!(random_linear_code(&f, 3, 4, &mut RngStream::new(1)).is_err());
        let mut rng = RngStream::new(5);
        loop {
            let c = random_linear_code(&f, 1, 1, &mut rng).unwrap();
            if c.dim() == 1 {
                assert_eq!(c.rate(), Ratio::new(1, 1));
                break;
            }
        }
    }

    #[test]
    fn quasi_code_examples() {
        let f = make_field(2, 1).unwrap();
        let g = GroupSpec::cyclic(3).unwrap();
        let one = AlgebraElement::one(&f, &g);
        let c = quasi_code(&QuasiMatrix::new(1, 1, vec![one.clone()]).unwrap()).unwrap();
        assert_eq!((c.len(), c.dim()), (3, 3));
        let x = AlgebraElement::basis(&f, &g, GroupElement(1)).unwrap();
        let a = QuasiMatrix::new(1, 2, vec![one.clone(), x.clone()]).unwrap();
        let c = quasi_code(&a).unwrap();
        assert_eq!((c.len(), c.dim()), (6, 3));
        for b in all_elements(&f, &g) {
            let mut w = b.coeffs().to_vec();
            w.extend_from_slice((&b * &x).coeffs());
            assert!(c.contains(&w));
        }
        // The trivial group gives the plain random linear code.
        let triv = GroupSpec::cyclic(1).unwrap();
        let m = QuasiMatrix::random(&f, &triv, 3, 8, &mut RngStream::new(9));
        let r = random_linear_code(&f, 8, 3, &mut RngStream::new(9)).unwrap();
        assert_eq!(quasi_code(&m).unwrap(), r);
    }

    #[test]
    fn quasi_code_equals_brute_force_image() {
        let mut rng = RngStream::new(21);
        for (p, n, k, t) in [(2u64, 3usize, 1usize, 2usize), (2, 3, 2, 2), (3, 2, 1, 3), (2, 5, 1, 2)] {
            let f = make_field(p, 1).unwrap();
            let g = GroupSpec::cyclic(n).unwrap();
            let a = QuasiMatrix::random(&f, &g, k, t, &mut rng);
            let code = quasi_code(&a).unwrap();
            let elems = all_elements(&f, &g);
            let mut image = std::collections::BTreeSet::new();
            let mut idx = vec![0usize; k];
            loop {
                let b: Vec<AlgebraElement> = idx.iter().map(|&i| elems[i].clone()).collect();
                image.insert(a.apply(&b).unwrap());
                let mut pos = 0;
                while pos < k {
                    idx[pos] += 1;
                    if idx[pos] < elems.len() {
                        break;
                    }
                    idx[pos] = 0;
                    pos += 1;
                }
                if pos == k {
                    break;
                }
            }
            let words: std::collections::BTreeSet<Row> = code.codewords().unwrap().into_iter().collect();
            assert_eq!(words, image);
        }
    }

    #[test]
    fn first_moment_identity_exhaustive() {
        // F_2 C_3, k = 2, t = 1, b = (e_0, 1 + e_0) generates F G.
        let f = make_field(2, 1).unwrap();
        let g = GroupSpec::cyclic(3).unwrap();
        let dec = primitive_idempotents(&f, &g).unwrap();
        let e0 = dec.idempotents()[0].clone();
        let b = vec![e0.clone(), &AlgebraElement::one(&f, &g) + &e0];
        assert!(dec.generates_algebra(&b));
        let elems = all_elements(&f, &g);
        let delta = 0.5;
        let t = entropy::radius(3, delta);
        let mut hits = 0u64;
        for a1 in &elems {
            for a2 in &elems {
                let m = QuasiMatrix::new(2, 1, vec![a1.clone(), a2.clone()]).unwrap();
                let w = m.apply(&b).unwrap().iter().filter(|c| !c.is_zero()).count();
                if w > 0 && w <= t {
                    hits += 1;
                }
            }
        }
        let ball = entropy::ball_size(2, 3, delta);
        // E(X_b) = (ball - 1) / q^{nt}: hits / 64 = (ball - 1) / 8.
        assert_eq!(Ratio::new(hits, 64), Ratio::new(u64::try_from(ball).unwrap() - 1, 8));
    }

    #[test]
    fn rank_by_components() {
        let f = make_field(2, 1).unwrap();
        let g = GroupSpec::cyclic(7).unwrap();
        let dec = primitive_idempotents(&f, &g).unwrap();
        let zero = AlgebraElement::zero(&f, &g);
        let one = AlgebraElement::one(&f, &g);
        let z = QuasiMatrix::new(2, 3, vec![zero.clone(), zero.clone(), zero.clone(), one.clone(), zero.clone(), zero.clone()]).unwrap();
        assert!(!full_rank(&z, &dec).unwrap());
        let u = QuasiMatrix::new(1, 3, vec![one.clone(), zero.clone(), zero.clone()]).unwrap();
        assert!(full_rank(&u, &dec).unwrap());
        let mut rng = RngStream::new(8);
        for _ in 0..40 {
            let a = QuasiMatrix::random(&f, &g, 2, 3, &mut rng);
            let by_dim = quasi_code(&a).unwrap().dim() == 14;
            assert_eq!(full_rank(&a, &dec).unwrap(), by_dim);
        }
        assert!(full_rank(&QuasiMatrix::random(&f, &g, 3, 2, &mut rng), &dec).is_err());
    }

    #[test]
    fn index2_dimension_and_duality() {
        let f = make_field(2, 1).unwrap();
        let g = GroupSpec::cyclic(7).unwrap();
        let dec = primitive_idempotents(&f, &g).unwrap();
        let one = AlgebraElement::one(&f, &g);
        let zero = AlgebraElement::zero(&f, &g);
        let e0 = dec.idempotents()[0].clone();
        assert_eq!(annihilator(&one, &zero).unwrap().1, 0);
        assert_eq!(annihilator(&zero, &zero).unwrap().1, 7);
        assert_eq!(index2_code(&e0, &e0).unwrap().dim(), 1);
        let mut rng = RngStream::new(12);
        for _ in 0..60 {
            let a = AlgebraElement::random(&f, &g, &mut rng);
            let b = AlgebraElement::random(&f, &g, &mut rng);
            let c = index2_code(&a, &b).unwrap();
            assert_eq!(c.dim(), 7 - annihilator(&a, &b).unwrap().1);
            assert_eq!(c.is_self_orthogonal(), index2_self_orthogonal(&a, &b).unwrap());
        }
        let (lo, hi) = index2_rate_bounds(2, 5, 4);
        assert!((lo - 0.75 * 2f64.powf(-10.0 / 256.0)).abs() < 1e-15 && hi == 0.75);
    }

    #[test]
    fn fractional_embedding() {
        let f = make_field(2, 1).unwrap();
        let g = GroupSpec::cyclic(3).unwrap();
        let one = AlgebraElement::one(&f, &g);
        let x = AlgebraElement::basis(&f, &g, GroupElement(1)).unwrap();
        let phi = fractional_phi(&one, 2).unwrap();
        assert_eq!(phi.format(), "100100");
        assert_eq!(phi.weight(), 2);
        assert_eq!(fractional_phi(&one, 1).unwrap(), one);
        assert!(fractional_phi(&AlgebraElement::zero(&f, &g), 3).unwrap().is_zero());
        assert!(fractional_phi(&one, 0).is_err());
        let c = fractional_code(&one, &x, 2).unwrap();
        assert_eq!((c.len(), c.dim(), c.rate()), (9, 3, Ratio::new(1, 3)));
        assert_eq!(fractional_code(&one, &x, 1).unwrap(), index2_code(&one, &x).unwrap());
        // phi~(x a) = x~ phi~(a).
        let mut rng = RngStream::new(3);
        let big = GroupSpec::cyclic(9).unwrap();
        let xt = AlgebraElement::basis(&f, &big, GroupElement(1)).unwrap();
        for _ in 0..10 {
            let a = AlgebraElement::random(&f, &g, &mut rng);
            assert_eq!(fractional_phi(&(&x * &a), 3).unwrap(), &xt * &fractional_phi(&a, 3).unwrap());
        }
    }
}
