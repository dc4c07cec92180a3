//! Finite-dimensional algebras over prime fields given by bound quivers,
//! their finitely generated modules, Auslander-Reiten translates and almost
//! split sequences, relative homological algebra, and mutation of Auslander
//! generators over selfinjective algebras with radical cube zero.
//!
//! Everything here is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod algebra;
pub mod ar;
pub mod decompose;
pub mod error;
pub mod field;
pub mod hypotheses;
pub mod linalg;
pub mod mutation;
pub mod relative;
pub mod rep;

pub use algebra::{Algebra, Arrow, Path, Presentation, Quiver, Relation};
pub use error::Error;
pub use field::PrimeField;
pub use linalg::{Mat, Rref};
