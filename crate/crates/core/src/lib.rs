//! Exact computations around finite subgroups of anisotropic groups:
//! Minkowski bounds, torsion of anisotropic tori through their cocharacter
//! lattices, isotropic subgroups of alternating pairings, symbol algebras and
//! the char-p Weyl algebra, and quadratic forms including the Pfister quadric.
//!
//! Nothing here uses floating point. Integers are `BigInt`, field elements
//! are canonical rational functions over an exact constant field.

#![allow(clippy::needless_range_loop)]

pub mod bounds;
pub mod csa;
pub mod error;
pub mod json;
pub mod lattice;
pub mod pairing;
pub mod quadform;
pub mod replay;
pub mod scalars;
pub mod torus;

pub use bounds::{BoundKind, BoundQuery, BoundReport, DynkinType, FiniteMatrixGroup, MinkowskiValues};
pub use csa::{AlgebraElement, AlgebraSpec, SpecRef};
pub use error::{Error, Result};
pub use lattice::{AbelianGroupStructure, IntMatrix};
pub use pairing::{AlternatingPairing, FiniteAbelianGroup, Subgroup, QZ};
pub use quadform::{ProjectiveIsometry, QuadraticForm};
pub use replay::ReplayEntry;
pub use scalars::{Field, FieldDescriptor, FieldElement, FieldMatrix, FieldRef};
pub use torus::{FiniteGroup, TorusModel};
