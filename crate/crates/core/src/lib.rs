//! Reductive groups over finite local rings as concrete matrix groups:
//! coefficient rings with Frobenius, root data, congruence filtrations,
//! Iwahori and Bruhat decompositions, commutator identities, tori and their
//! characters, and point counts of the associated varieties.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

mod error;
mod poly;
pub mod ring;
pub mod rootdata;
pub mod group;
pub mod decomp;
pub mod abelian;
pub mod torus;
pub mod variety;
pub mod oracle;

pub use error::{Budget, Error, Result};
