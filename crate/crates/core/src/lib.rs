//! Exact lattice arithmetic behind rational Lagrangian fibrations on Hilbert
//! schemes of points on K3 surfaces.
//!
//! Everything is computed with arbitrary-precision integers and rationals.
//! Module map:
//!
//! - [`lattice`]: integer lattices, pairings, reflections, complements, saturation.
//! - [`mukai`]: algebraic Mukai lattice of a polarized K3 and Mukai vectors.
//! - [`hilbert`]: Bogomolov–Beauville lattice of `X^[d]`, isotropic classes.
//! - [`twisted`]: B-fields, `exp(B)` and the twisted algebraic lattice.
//! - [`fm`]: lattice-level consequences of the twisted Fourier–Mukai transform.
//! - [`brill_noether`]: numerics of the Serre construction.
//! - [`report`]: JSON/text report documents.

pub mod brill_noether;
pub mod error;
pub mod fm;
pub mod hilbert;
pub mod lattice;
pub mod linalg;
pub mod mukai;
pub mod report;
pub mod serial;
pub mod twisted;

pub use error::{Error, Result};
pub use lattice::{IntLattice, LatticeVector, RationalVector};
