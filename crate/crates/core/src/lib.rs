//! Gröbner bases over path algebras, monomial arrow removal, module resolutions and
//! finitistic-dimension bounds for bound quiver algebras.

pub mod algebra;
pub mod corpus;
pub mod element;
pub mod error;
pub mod findim;
pub mod format;
pub mod groebner;
pub mod linalg;
pub mod modules;
pub mod ntip;
pub mod order;
pub mod quiver;
pub mod removal;
pub mod sample;
pub mod scalar;
pub mod selftest;

pub use algebra::Algebra;
pub use error::{Error, Result};
