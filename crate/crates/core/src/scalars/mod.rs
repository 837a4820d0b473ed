//! Exact coefficient arithmetic: Q, Q(ζ_N), F_p, F_{p^m} and rational
//! function fields over any of them.

pub mod base;
mod field;
mod matrix;
mod minpoly;
pub mod mpoly;

pub use base::{BaseField, Coeff, FINITE_FIELD_MODULI};
pub use field::{artin_schreier_image, Field, FieldDescriptor, FieldElement, FieldRef, DEFAULT_ENUMERATION_CAP};
pub use matrix::FieldMatrix;
pub(crate) use field::parse_rational;
pub use minpoly::{minimal_polynomial, MinimalPolynomial, Relation, UPoly};
pub use mpoly::{MPoly, PolyRing};
