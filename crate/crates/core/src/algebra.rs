//! The group algebra F G as dense coefficient vectors.
//!
//! Coefficients are indexed by the canonical group element order, so index
//! 0 is the identity of G and `one()` is the unit vector there.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec};
use crate::groups::{GroupElement, GroupSpec};
use crate::linalg::{self, Row};
use crate::rng::RngStream;

#[derive(Clone, PartialEq, Eq)]
pub struct AlgebraElement {
    field: FieldSpec,
    group: GroupSpec,
    coeffs: Vec<FieldElement>,
}

impl fmt::Debug for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.group, self.format())
    }
}

impl AlgebraElement {
    pub fn zero(field: &FieldSpec, group: &GroupSpec) -> AlgebraElement {
        AlgebraElement {
            field: field.clone(),
            group: group.clone(),
            coeffs: vec![FieldElement::ZERO; group.order()],
        }
    }

    pub fn one(field: &FieldSpec, group: &GroupSpec) -> AlgebraElement {
        AlgebraElement::scalar(field, group, field.one())
    }

    pub fn scalar(field: &FieldSpec, group: &GroupSpec, c: FieldElement) -> AlgebraElement {
        let mut a = AlgebraElement::zero(field, group);
        a.coeffs[0] = c;
        a
    }

    /// The basis element g.
    pub fn basis(field: &FieldSpec, group: &GroupSpec, g: GroupElement) -> Result<AlgebraElement> {
        group.element(g.0)?;
        let mut a = AlgebraElement::zero(field, group);
        a.coeffs[g.0] = field.one();
        Ok(a)
    }

    pub fn from_coeffs(field: &FieldSpec, group: &GroupSpec, coeffs: Vec<FieldElement>) -> Result<AlgebraElement> {
        if coeffs.len() != group.order() {
            return Err(crate::error::precondition(format!(
                "expected {} coefficients, got {}",
                group.order(),
                coeffs.len()
            )));
        }
        if let Some(c) = coeffs.iter().find(|c| c.index() >= field.order()) {
            return Err(Error::OutOfRange {
                index: c.index() as usize,
                size: field.order() as usize,
            });
        }
        Ok(AlgebraElement {
            field: field.clone(),
            group: group.clone(),
            coeffs,
        })
    }

    /// Uniform element, coefficients drawn in canonical group order.
    pub fn random(field: &FieldSpec, group: &GroupSpec, rng: &mut RngStream) -> AlgebraElement {
        let q = field.order() as u64;
        let coeffs = (0..group.order())
            .map(|_| FieldElement(rng.below(q) as u32))
            .collect();
        AlgebraElement {
            field: field.clone(),
            group: group.clone(),
            coeffs,
        }
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<FieldElement> {
        self.coeffs
    }

    pub fn coeff(&self, g: GroupElement) -> FieldElement {
        self.coeffs[g.0]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    fn check(&self, other: &AlgebraElement) -> Result<()> {
        if self.field != other.field {
            return Err(Error::SpecMismatch("fields"));
        }
        if self.group != other.group {
            return Err(Error::SpecMismatch("groups"));
        }
        Ok(())
    }

    fn with_coeffs(&self, coeffs: Vec<FieldElement>) -> AlgebraElement {
        AlgebraElement {
            field: self.field.clone(),
            group: self.group.clone(),
            coeffs,
        }
    }

    pub fn try_add(&self, other: &AlgebraElement) -> Result<AlgebraElement> {
        self.check(other)?;
        let f = &self.field;
        Ok(self.with_coeffs(self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| f.add(a, b)).collect()))
    }

    pub fn try_sub(&self, other: &AlgebraElement) -> Result<AlgebraElement> {
        self.check(other)?;
        let f = &self.field;
        Ok(self.with_coeffs(self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| f.sub(a, b)).collect()))
    }

    pub fn scale(&self, s: FieldElement) -> AlgebraElement {
        let f = &self.field;
        self.with_coeffs(self.coeffs.iter().map(|&a| f.mul(a, s)).collect())
    }

    /// Convolution product over the group's multiplication table.
    pub fn try_mul(&self, other: &AlgebraElement) -> Result<AlgebraElement> {
        self.check(other)?;
        let f = &self.field;
        let g = &self.group;
        let mut out = vec![FieldElement::ZERO; g.order()];
        for (x, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (y, &b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    let z = g.mul_idx(x, y);
                    out[z] = f.add(out[z], f.mul(a, b));
                }
            }
        }
        Ok(self.with_coeffs(out))
    }

    /// Moves the coefficient of x to x^{-1}.
    pub fn bar(&self) -> AlgebraElement {
        let mut out = vec![FieldElement::ZERO; self.coeffs.len()];
        for (x, &a) in self.coeffs.iter().enumerate() {
            out[self.group.inv_idx(x)] = a;
        }
        self.with_coeffs(out)
    }

    /// Coefficient at the identity.
    pub fn sigma(&self) -> FieldElement {
        self.coeffs[0]
    }

    /// Euclidean inner product of coefficient vectors.
    pub fn inner(&self, other: &AlgebraElement) -> Result<FieldElement> {
        self.check(other)?;
        Ok(dot(&self.field, &self.coeffs, &other.coeffs))
    }

    pub fn weight(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    /// Rows x·a for x in G: a spanning set of the left ideal F G a.
    pub fn left_translates(&self) -> Vec<Row> {
        let g = &self.group;
        let n = g.order();
        (0..n)
            .map(|x| {
                let mut row = vec![FieldElement::ZERO; n];
                for (y, &a) in self.coeffs.iter().enumerate() {
                    row[g.mul_idx(x, y)] = a;
                }
                row
            })
            .collect()
    }

    /// Rows a·x for x in G: a spanning set of the right ideal a F G.
    pub fn right_translates(&self) -> Vec<Row> {
        let g = &self.group;
        let n = g.order();
        (0..n)
            .map(|x| {
                let mut row = vec![FieldElement::ZERO; n];
                for (y, &a) in self.coeffs.iter().enumerate() {
                    row[g.mul_idx(y, x)] = a;
                }
                row
            })
            .collect()
    }

    /// The b with a·b = 1, or `None` when a is not a unit.
    pub fn invert(&self) -> Option<AlgebraElement> {
        let n = self.group.order();
        // Column j of the system is a·x_j.
        let system = linalg::transpose(&self.right_translates(), n);
        let mut target = vec![FieldElement::ZERO; n];
        target[0] = self.field.one();
        if linalg::rank(&self.field, &system, n) < n {
            return None;
        }
        linalg::solve(&self.field, &system, n, &target).map(|c| self.with_coeffs(c))
    }

    pub fn is_unit(&self) -> bool {
        let n = self.group.order();
        linalg::rank(&self.field, &self.left_translates(), n) == n
    }

    /// Coefficients as field element strings joined by spaces.
    pub fn format(&self) -> String {
        format_row(&self.field, &self.coeffs)
    }

    pub fn parse(field: &FieldSpec, group: &GroupSpec, s: &str) -> Result<AlgebraElement> {
        let coeffs = parse_row(field, s)?;
        AlgebraElement::from_coeffs(field, group, coeffs)
    }
}

pub(crate) fn dot(field: &FieldSpec, a: &[FieldElement], b: &[FieldElement]) -> FieldElement {
    a.iter()
        .zip(b)
        .fold(FieldElement::ZERO, |acc, (&x, &y)| field.add(acc, field.mul(x, y)))
}

/// A word as a coefficient string: concatenated digits when every element
/// is one character wide, space-separated otherwise.
pub fn format_row(field: &FieldSpec, row: &[FieldElement]) -> String {
    let parts: Vec<String> = row.iter().map(|&c| field.format_element(c)).collect();
    if field.element_width() == Some(1) {
        parts.concat()
    } else {
        parts.join(" ")
    }
}

pub fn parse_row(field: &FieldSpec, s: &str) -> Result<Vec<FieldElement>> {
    let s = s.trim();
    if s.contains(char::is_whitespace) || field.element_width() != Some(1) {
        s.split_whitespace().map(|t| field.parse_element(t)).collect()
    } else {
        s.chars().map(|c| field.parse_element(&c.to_string())).collect()
    }
}

impl Add for &AlgebraElement {
    type Output = AlgebraElement;
    fn add(self, rhs: &AlgebraElement) -> AlgebraElement {
        self.try_add(rhs).expect("algebra elements over different specs")
    }
}

impl Sub for &AlgebraElement {
    type Output = AlgebraElement;
    fn sub(self, rhs: &AlgebraElement) -> AlgebraElement {
        self.try_sub(rhs).expect("algebra elements over different specs")
    }
}

impl Mul for &AlgebraElement {
    type Output = AlgebraElement;
    fn mul(self, rhs: &AlgebraElement) -> AlgebraElement {
        self.try_mul(rhs).expect("algebra elements over different specs")
    }
}

impl Neg for &AlgebraElement {
    type Output = AlgebraElement;
    fn neg(self) -> AlgebraElement {
        let f = &self.field;
        self.with_coeffs(self.coeffs.iter().map(|&a| f.neg(a)).collect())
    }
}
