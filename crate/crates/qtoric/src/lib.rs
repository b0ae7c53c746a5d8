//! Exact computer algebra for toric noncommutative spaces.
//!
//! A toric noncommutative space is presented by a finitely generated algebra
//! whose generators carry Z^n degrees and quasi-commute up to phases
//! q^(m^T theta m') fixed by an antisymmetric integer matrix theta. This
//! crate represents such algebras exactly (coefficients in Q(q), with
//! Q[q,q^-1] the common case), reduces modulo H-homogeneous relation ideals
//! by a phase-twisted Buchberger procedure, and implements the geometric
//! layer on top: coproducts, pushouts and localizations; Zariski covering
//! families with matching-family and gluing checks; stage-wise mapping
//! spaces with their monoid structure; tangent (dual-numbers) derivations
//! with a Lie bracket; and braided derivations with the comparison map xi
//! identifying the two derivation pictures.
//!
//! Every operation is pure and deterministic: fixed monomial order
//! (degrevlex), fixed pivoting, canonical forms everywhere. Start with the
//! runnable examples (`cargo run -p qtoric --example nc_torus`) or the
//! [`catalog`] of standard presentations.

pub mod algebra;
pub mod catalog;
pub mod command;
pub mod cover;
pub mod deformation;
pub mod derivation;
pub mod error;
pub mod linsolve;
pub mod mapping;
pub mod morphism;
pub mod presentation;
pub mod scalar;
mod textform;
pub mod workspace;

pub use algebra::{Element, GeneratorSpec, HDegree, Monomial};
pub use deformation::{DeformationData, DegreeVector};
pub use error::{Error, Result};
pub use morphism::Morphism;
pub use presentation::{GroebnerBasis, Presentation};
pub use scalar::{Laurent, Rat, Scalar};
