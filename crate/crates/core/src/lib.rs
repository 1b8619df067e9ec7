//! Computer algebra over GF(2) for characteristic classes of spin
//! representations.
//!
//! The crate is layered bottom-up:
//!
//! * [`poly`]: graded polynomial rings over GF(2), the monomial order,
//!   the canonical text format and dense GF(2) linear algebra.
//! * [`symfunc`]: elementary symmetric functions and the incremental
//!   conversion of exterior-power classes into elementary classes.
//! * [`steenrod`]: Steenrod squares on Stiefel-Whitney rings and on their
//!   quotients.
//! * [`presentations`]: Groebner bases, presentations of H*(BSpin(n)) and
//!   the restriction homomorphisms between them.
//! * [`spin`]: total Stiefel-Whitney classes of the spin representations
//!   and of the representations built from them.

pub mod error;
pub mod fixtures;
pub mod poly;
pub mod presentations;
pub mod spin;
pub mod steenrod;
pub mod symfunc;

pub use error::{Error, Result};
pub use poly::{Monomial, Polynomial, Ring};
