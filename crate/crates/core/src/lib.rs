//! Koszulness certificates for finite point configurations in projective
//! space, with an independent homological cross-check.
//!
//! The crate is `no_std` with `alloc`; file formats and the command-line
//! front end live in the companion `koszul-points` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod config;
pub mod families;
pub mod filtration;
pub mod field;
pub mod lambda;
pub mod linalg;
pub mod monomials;
pub mod oracle;
pub mod pipeline;
pub mod pointset;
pub mod quadrics;
pub mod scan;
pub mod search_vectors;

pub use config::{ConfigError, Configuration, Flat, FlatLattice};
pub use field::{Field, FieldTag, PrimeField, Rationals, Scalar};
pub use lambda::{LambdaSet, SearchOptions, SearchOutcome};
pub use pointset::PointSet;
