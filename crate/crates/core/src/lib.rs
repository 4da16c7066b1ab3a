//! Group algebras over finite fields and the codes built from them.
//!
//! The crate covers finite-field and group-algebra arithmetic, the
//! semisimple decomposition of abelian group algebras, linear codes with
//! exact minimum weights, the quasi-abelian, index-2, fractional-index,
//! self-dual and dihedral constructions, and seeded Monte Carlo drivers
//! for the random ensembles built from them.

pub mod algebra;
pub mod arith;
pub mod balanced;
pub mod codes;
pub mod decomposition;
pub mod dihedral;
pub mod entropy;
pub mod error;
pub mod experiments;
pub mod ext;
pub mod field;
pub mod groups;
pub mod linalg;
pub mod probability;
pub mod quasi;
pub mod rng;
pub mod selfdual;

pub use algebra::AlgebraElement;
pub use codes::LinearCode;
pub use decomposition::{primitive_idempotents, q_cosets, Decomposition, QCosetPartition};
pub use error::{Error, Result};
pub use field::{make_field, parse_field, FieldElement, FieldSpec, Polynomial};
pub use groups::{GroupElement, GroupKind, GroupSpec};
pub use rng::RngStream;
