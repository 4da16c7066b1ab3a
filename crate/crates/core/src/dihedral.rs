//! Dihedral group algebras F D_n for odd n with -1 in <q> mod n.
//!
//! Under that hypothesis every primitive idempotent e_i of the cyclic
//! subalgebra F C_n is bar-fixed, hence central in F D_n, and
//! A = F D_n = A_0 + A_1 + ... + A_r with A_i = F D_n e_i. For i >= 1,
//! A_i is isomorphic to the 2 x 2 matrices over Z_i, the bar-fixed subfield
//! of F_i = F C_n e_i, via
//!   a e_i + b x e_i + c y e_i + d xy e_i -> a eps + b eta + c nu + d eta nu,
//! eps = I, eta = [[0, -1], [1, -g]], nu = [[-1, 0], [-g, 1]], where
//! X^2 + g X + 1 is the minimal polynomial of x e_i over Z_i.
//! The code C = C_0 + C_1 + ... + C_r with C_0 = F (e_0 + e_0 y) and
//! C_i = A_i (e_i - y e_i) has dimension n in length 2n.

use crate::algebra::AlgebraElement;
use crate::arith;
use crate::codes::LinearCode;
use crate::decomposition::{component_basis, component_elements, primitive_idempotents, Decomposition};
use crate::error::{internal, precondition, Error, Result};
use crate::field::{FieldElement, FieldSpec};
use crate::groups::GroupSpec;
use crate::linalg::{self, Row};
use crate::rng::RngStream;

/// Whether -1 lies in the subgroup generated by q in Z_n^*.
pub fn minus_one_in_qgroup(n: u64, q: u64) -> Result<bool> {
    if arith::gcd(n, q) != 1 {
        return Err(Error::NotCoprime { n, q });
    }
    Ok(arith::minus_one_in_subgroup(q, n))
}

/// Odd n in [3, max] coprime to q with -1 in <q>_n.
pub fn admissible_n(q: u64, max: u64) -> Vec<u64> {
    (3..=max)
        .step_by(2)
        .filter(|&n| arith::gcd(n, q) == 1 && arith::minus_one_in_subgroup(q, n))
        .collect()
}

pub type Matrix2 = [[AlgebraElement; 2]; 2];

fn mat_mul(a: &Matrix2, b: &Matrix2) -> Matrix2 {
    let entry = |i: usize, j: usize| &(&a[i][0] * &b[0][j]) + &(&a[i][1] * &b[1][j]);
    [[entry(0, 0), entry(0, 1)], [entry(1, 0), entry(1, 1)]]
}

fn mat_add(a: &Matrix2, b: &Matrix2) -> Matrix2 {
    let entry = |i: usize, j: usize| &a[i][j] + &b[i][j];
    [[entry(0, 0), entry(0, 1)], [entry(1, 0), entry(1, 1)]]
}

fn mat_scale(z: &AlgebraElement, m: &Matrix2) -> Matrix2 {
    let entry = |i: usize, j: usize| z * &m[i][j];
    [[entry(0, 0), entry(0, 1)], [entry(1, 0), entry(1, 1)]]
}

/// The explicit isomorphism A_i -> M_2(Z_i).
#[derive(Debug, Clone)]
pub struct M2Iso {
    /// g in Z_i with (x e_i)^2 + g (x e_i) + e_i = 0.
    pub g: AlgebraElement,
    /// F-basis of Z_i.
    pub z_basis: Vec<AlgebraElement>,
    pub eps: Matrix2,
    pub eta: Matrix2,
    pub nu: Matrix2,
    /// phi(uv) = phi(u) phi(v) on all 16 products of e_i, x e_i, y e_i, xy e_i.
    pub multiplicative: bool,
    /// The images of an F-basis of A_i span M_2(Z_i).
    pub spans: bool,
    /// F-basis of A_i: z e_i, z x e_i, z y e_i, z xy e_i for z in `z_basis`.
    frame: Vec<Row>,
}

impl M2Iso {
    pub fn verified(&self) -> bool {
        self.multiplicative && self.spans
    }
}

#[derive(Debug, Clone)]
pub struct DihedralComponent {
    /// e_i lifted to F D_n.
    pub idempotent: AlgebraElement,
    /// F-basis of A_i = F D_n e_i.
    pub basis: Vec<Row>,
    /// k_i = dim Z_i (zero for A_0).
    pub k: usize,
    /// Present for i >= 1.
    pub iso: Option<M2Iso>,
}

#[derive(Debug, Clone)]
pub struct DihedralDecomposition {
    field: FieldSpec,
    n: usize,
    group: GroupSpec,
    cyclic: Decomposition,
    pub components: Vec<DihedralComponent>,
    /// e_0 + e_0 y.
    pub e00: AlgebraElement,
    /// e_0 - e_0 y, for odd q.
    pub e01: Option<AlgebraElement>,
}

impl DihedralDecomposition {
    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// The dihedral group of order 2n.
    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    /// Decomposition of the cyclic subalgebra F C_n.
    pub fn cyclic(&self) -> &Decomposition {
        &self.cyclic
    }

    /// r, the number of nontrivial components.
    pub fn r(&self) -> usize {
        self.components.len() - 1
    }

    pub fn ks(&self) -> Vec<usize> {
        self.components[1..].iter().map(|c| c.k).collect()
    }

    /// Lifts an element of F C_n to F D_n.
    pub fn lift(&self, a: &AlgebraElement) -> AlgebraElement {
        let mut coeffs = a.coeffs().to_vec();
        coeffs.resize(2 * self.n, FieldElement::ZERO);
        AlgebraElement::from_coeffs(&self.field, &self.group, coeffs).expect("length 2n")
    }

    pub fn x(&self) -> AlgebraElement {
        AlgebraElement::basis(&self.field, &self.group, self.group.dihedral_element(1, 0).unwrap()).unwrap()
    }

    pub fn y(&self) -> AlgebraElement {
        AlgebraElement::basis(&self.field, &self.group, self.group.dihedral_element(0, 1).unwrap()).unwrap()
    }

    /// <A_i, A_j> = 0 for i != j on basis pairs.
    pub fn is_orthogonal(&self) -> bool {
        let f = &self.field;
        self.components.iter().enumerate().all(|(i, a)| {
            self.components[i + 1..].iter().all(|b| {
                a.basis
                    .iter()
                    .all(|u| b.basis.iter().all(|v| crate::algebra::dot(f, u, v).is_zero()))
            })
        })
    }

    /// l_c = sum of k_i over components i >= 1 with c e_i != 0.
    pub fn ell(&self, c: &AlgebraElement) -> usize {
        self.components[1..]
            .iter()
            .filter(|comp| !(c * &comp.idempotent).is_zero())
            .map(|comp| comp.k)
            .sum()
    }
}

pub fn dihedral_decompose(field: &FieldSpec, n: usize) -> Result<DihedralDecomposition> {
    let q = field.order() as u64;
    if n < 3 || n % 2 == 0 {
        return Err(precondition(format!("n = {n} must be odd and at least 3")));
    }
    if !minus_one_in_qgroup(n as u64, q)? {
        return Err(precondition(format!(
            "-1 is not in the subgroup generated by {q} mod {n}; only that case is supported"
        )));
    }
    let cyclic = primitive_idempotents(field, &GroupSpec::cyclic(n)?)?;
    let pairing = cyclic.pairing()?;
    if !pairing.pairs.is_empty() {
        return Err(internal("bar-paired components despite -1 in <q>"));
    }
    let group = GroupSpec::dihedral(n)?;
    let mut dec = DihedralDecomposition {
        field: field.clone(),
        n,
        group,
        cyclic: cyclic.clone(),
        components: Vec::new(),
        e00: AlgebraElement::zero(field, &GroupSpec::dihedral(n)?),
        e01: None,
    };
    let y = dec.y();
    let x = dec.x();
    for (i, e) in cyclic.idempotents().iter().enumerate() {
        let lifted = dec.lift(e);
        for g in [&x, &y] {
            if &(g * &lifted) != &(&lifted * g) {
                return Err(internal("lifted idempotent is not central"));
            }
        }
        let basis = component_basis(&lifted);
        if basis.len() != 2 * cyclic.dims()[i] {
            return Err(internal("dim A_i differs from 2 dim F_i"));
        }
        dec.components.push(DihedralComponent {
            idempotent: lifted,
            basis,
            k: if i == 0 { 0 } else { cyclic.dims()[i] / 2 },
            iso: None,
        });
    }
    let e0 = dec.components[0].idempotent.clone();
    dec.e00 = &e0 + &(&e0 * &y);
    if q % 2 == 1 {
        dec.e01 = Some(&e0 - &(&e0 * &y));
    }
    for i in 1..dec.components.len() {
        let iso = m2_iso(&dec, i)?;
        dec.components[i].iso = Some(iso);
    }
    if !dec.is_orthogonal() {
        return Err(internal("dihedral components are not orthogonal"));
    }
    Ok(dec)
}

/// Facts about A_0 = F D_n e_0.
#[derive(Debug, Clone, PartialEq)]
pub struct A0Structure {
    pub e00_square_zero: bool,
    /// <e00, e00>.
    pub e00_norm: FieldElement,
    /// ((1/2) e00)^2 = (1/2) e00 (odd q only).
    pub half_e00_idempotent: Option<bool>,
    /// y e01 = -e01 (odd q only).
    pub y_negates_e01: Option<bool>,
    /// F e00 + F e01 = A_0 (odd q only).
    pub splits: Option<bool>,
}

pub fn a0_structure(dec: &DihedralDecomposition) -> Result<A0Structure> {
    let f = &dec.field;
    let e00 = &dec.e00;
    let square = e00 * e00;
    let mut out = A0Structure {
        e00_square_zero: square.is_zero(),
        e00_norm: e00.inner(e00)?,
        half_e00_idempotent: None,
        y_negates_e01: None,
        splits: None,
    };
    if let Some(e01) = &dec.e01 {
        let half = f.inv(f.from_int(2))?;
        let h = e00.scale(half);
        out.half_e00_idempotent = Some(&h * &h == h);
        out.y_negates_e01 = Some(&dec.y() * e01 == -e01);
        let span = linalg::rank(f, &[e00.coeffs().to_vec(), e01.coeffs().to_vec()], 2 * dec.n);
        out.splits = Some(span == 2 && span == dec.components[0].basis.len());
    }
    Ok(out)
}

/// Builds and checks the isomorphism A_i -> M_2(Z_i).
pub fn m2_iso(dec: &DihedralDecomposition, i: usize) -> Result<M2Iso> {
    if i == 0 || i >= dec.components.len() {
        return Err(precondition("m2_iso needs 1 <= i <= r"));
    }
    let f = &dec.field;
    let len = 2 * dec.n;
    let e = dec.components[i].idempotent.clone();
    // Z_i: solve bar(z) = z over an F-basis of F_i.
    let fi_basis: Vec<AlgebraElement> = component_basis(&dec.cyclic.idempotents()[i])
        .into_iter()
        .map(|r| dec.lift(&AlgebraElement::from_coeffs(f, dec.cyclic.group(), r).unwrap()))
        .collect();
    let diffs: Vec<Row> = fi_basis.iter().map(|b| (&b.bar() - b).into_coeffs()).collect();
    let kernel = linalg::left_kernel(f, &diffs, len);
    let z_basis: Vec<AlgebraElement> = kernel
        .iter()
        .map(|c| {
            fi_basis
                .iter()
                .zip(c)
                .fold(AlgebraElement::zero(f, &dec.group), |acc, (b, &ci)| &acc + &b.scale(ci))
        })
        .collect();
    if z_basis.len() != dec.components[i].k {
        return Err(internal("dim Z_i differs from d_i / 2"));
    }
    let x = dec.x();
    let y = dec.y();
    let xe = &x * &e;
    let ye = &y * &e;
    let xye = &(&x * &y) * &e;
    // g from (x e)^2 + g (x e) + e = 0 with g in Z_i.
    let rows: Vec<Row> = z_basis.iter().map(|z| (z * &xe).into_coeffs()).collect();
    let target = -&(&(&xe * &xe) + &e);
    let coeffs = linalg::express(f, &rows, len, target.coeffs())
        .ok_or_else(|| internal("x e_i has no quadratic minimal polynomial over Z_i"))?;
    let g = z_basis
        .iter()
        .zip(&coeffs)
        .fold(AlgebraElement::zero(f, &dec.group), |acc, (z, &c)| &acc + &z.scale(c));
    if g.is_zero() && f.characteristic() == 2 {
        return Err(internal("g and 2 both vanish"));
    }
    let zero = AlgebraElement::zero(f, &dec.group);
    let eps: Matrix2 = [[e.clone(), zero.clone()], [zero.clone(), e.clone()]];
    let eta: Matrix2 = [[zero.clone(), -&e], [e.clone(), -&g]];
    let nu: Matrix2 = [[-&e, zero.clone()], [-&g, e.clone()]];
    let eta_nu = mat_mul(&eta, &nu);

    let frame: Vec<Row> = [&e, &xe, &ye, &xye]
        .iter()
        .flat_map(|u| z_basis.iter().map(move |z| (z * *u).into_coeffs()))
        .collect();
    if linalg::rank(f, &frame, len) != 4 * z_basis.len() || frame.len() != dec.components[i].basis.len() {
        return Err(internal("z e_i, z x e_i, z y e_i, z xy e_i is not a basis of A_i"));
    }
    let mut iso = M2Iso {
        g,
        z_basis,
        eps,
        eta,
        nu,
        multiplicative: false,
        spans: false,
        frame,
    };
    let images = [iso.eps.clone(), iso.eta.clone(), iso.nu.clone(), eta_nu];
    let gens = [e.clone(), xe, ye, xye];
    iso.multiplicative = gens.iter().enumerate().all(|(s, u)| {
        gens.iter().enumerate().all(|(t, v)| {
            apply_iso(dec, &iso, &(u * v)).is_ok_and(|m| m == mat_mul(&images[s], &images[t]))
        })
    });
    // The images of the F-basis, flattened to 4 * 2n coordinates.
    let flat: Vec<Row> = images
        .iter()
        .flat_map(|m| {
            iso.z_basis.iter().map(move |z| {
                mat_scale(z, m)
                    .iter()
                    .flat_map(|row| row.iter().flat_map(|c| c.coeffs().to_vec()))
                    .collect()
            })
        })
        .collect();
    iso.spans = linalg::rank(f, &flat, 4 * len) == 4 * iso.z_basis.len();
    Ok(iso)
}

/// The image of u in A_i under the isomorphism.
pub fn apply_iso(dec: &DihedralDecomposition, iso: &M2Iso, u: &AlgebraElement) -> Result<Matrix2> {
    let f = &dec.field;
    let k = iso.z_basis.len();
    let c = linalg::express(f, &iso.frame, 2 * dec.n, u.coeffs())
        .ok_or_else(|| precondition("element does not lie in this component"))?;
    let coord = |block: usize| {
        iso.z_basis
            .iter()
            .zip(&c[block * k..(block + 1) * k])
            .fold(AlgebraElement::zero(f, &dec.group), |acc, (z, &ci)| &acc + &z.scale(ci))
    };
    let eta_nu = mat_mul(&iso.eta, &iso.nu);
    let parts = [
        mat_scale(&coord(0), &iso.eps),
        mat_scale(&coord(1), &iso.eta),
        mat_scale(&coord(2), &iso.nu),
        mat_scale(&coord(3), &eta_nu),
    ];
    Ok(parts[1..].iter().fold(parts[0].clone(), |acc, m| mat_add(&acc, m)))
}

/// Checks eta^2 + g eta + eps = 0, nu^2 = eps and nu eta nu = eta^{-1} = -(eta + g eps).
pub fn matrix_relations_hold(iso: &M2Iso) -> bool {
    let zero_like = |m: &Matrix2| m.iter().flatten().all(|c| c.is_zero());
    let eta2 = mat_mul(&iso.eta, &iso.eta);
    let g_eta = mat_scale(&iso.g, &iso.eta);
    let quad = mat_add(&mat_add(&eta2, &g_eta), &iso.eps);
    let nu2 = mat_mul(&iso.nu, &iso.nu);
    let neg = |m: &Matrix2| -> Matrix2 {
        [[-&m[0][0], -&m[0][1]], [-&m[1][0], -&m[1][1]]]
    };
    let eta_inv = neg(&mat_add(&iso.eta, &mat_scale(&iso.g, &iso.eps)));
    let conj = mat_mul(&mat_mul(&iso.nu, &iso.eta), &iso.nu);
    zero_like(&quad) && nu2 == iso.eps && conj == eta_inv && mat_mul(&iso.eta, &eta_inv) == iso.eps
}

/// C = C_0 + C_1 + ... + C_r with its component bases.
#[derive(Debug, Clone)]
pub struct DihedralCodeFamily {
    /// F-bases of C_0, C_1, ..., C_r.
    pub parts: Vec<Vec<Row>>,
    pub code: LinearCode,
}

pub fn build_c(dec: &DihedralDecomposition) -> Result<DihedralCodeFamily> {
    let f = &dec.field;
    let len = 2 * dec.n;
    let y = dec.y();
    let mut parts = vec![vec![dec.e00.coeffs().to_vec()]];
    for comp in &dec.components[1..] {
        let gen = &comp.idempotent - &(&y * &comp.idempotent);
        let rows = linalg::rref(f, &gen.left_translates(), len).rows;
        if rows.len() != 2 * comp.k {
            return Err(internal("dim C_i differs from 2 k_i"));
        }
        parts.push(rows);
    }
    let code = LinearCode::new(f, len, parts.concat())?;
    if code.dim() != dec.n {
        return Err(internal("dim C differs from n"));
    }
    Ok(DihedralCodeFamily { parts, code })
}

/// e_0 + sum alpha_i with each alpha_i uniform among the nonzero elements of F_i.
pub fn sample_kstar(dec: &DihedralDecomposition, rng: &mut RngStream) -> AlgebraElement {
    let f = &dec.field;
    let cg = dec.cyclic.group();
    let mut alpha = dec.components[0].idempotent.clone();
    for e in &dec.cyclic.idempotents()[1..] {
        let part = loop {
            let a = &AlgebraElement::random(f, cg, rng) * e;
            if !a.is_zero() {
                break a;
            }
        };
        alpha = &alpha + &dec.lift(&part);
    }
    alpha
}

/// |K*| = prod (q^{2 k_i} - 1), counted by enumerating each F_i.
pub fn count_kstar(dec: &DihedralDecomposition) -> Result<u128> {
    let mut total = 1u128;
    for e in &dec.cyclic.idempotents()[1..] {
        let units = component_elements(e)?.iter().filter(|a| !a.is_zero()).count();
        total *= units as u128;
    }
    Ok(total)
}

/// The code alpha C beta; rejects alpha, beta with a zero component.
pub fn code_alpha_beta(
    dec: &DihedralDecomposition,
    family: &DihedralCodeFamily,
    alpha: &AlgebraElement,
    beta: &AlgebraElement,
) -> Result<LinearCode> {
    for comp in &dec.components {
        if (alpha * &comp.idempotent).is_zero() || (beta * &comp.idempotent).is_zero() {
            return Err(precondition("alpha and beta must be units in every component"));
        }
    }
    let f = &dec.field;
    let rows: Vec<Row> = family
        .code
        .basis()
        .iter()
        .map(|r| {
            let c = AlgebraElement::from_coeffs(f, &dec.group, r.clone()).unwrap();
            (&(alpha * &c) * beta).into_coeffs()
        })
        .collect();
    LinearCode::new(f, 2 * dec.n, rows)
}

/// The code C beta.
pub fn code_beta(dec: &DihedralDecomposition, family: &DihedralCodeFamily, beta: &AlgebraElement) -> Result<LinearCode> {
    let one = AlgebraElement::one(&dec.field, &dec.group);
    code_alpha_beta(dec, family, &one, beta)
}
