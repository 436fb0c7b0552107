//! Exact arithmetic for definite quadratic and Hermitian lattices over `Z`
//! and imaginary quadratic orders: genus enumeration by p-neighbors, isometry
//! testing, automorphism groups and Hecke operators on the class set.

#![no_std]
// Index loops read closer to the matrix formulas.
#![allow(clippy::needless_range_loop)]

extern crate alloc;

pub mod arith;
pub mod error;
pub mod exec;
pub mod field;
pub mod genus;
pub mod hecke;
pub mod isometry;
pub mod lattice;
pub mod neighbor;
pub mod qmat;
pub mod reduce;
pub mod ring;
pub mod shortvec;
pub mod zmat;

pub use error::{Error, ErrorKind, Result};
