//! Finite dimensional Hermitian symplectic calculus: Lagrangian subspaces,
//! the `m(V, W)` invariant and Maslov triple index, symplectic reduction
//! along bordisms, and two explicit example computations (the flat torus
//! with a varying metric, and Chern-Simons values on a torus bundle).
//!
//! ```
//! # fn main() -> hsymp::Result<()> {
//! use std::sync::Arc;
//! use hsymp::hermsymp::real_matrix;
//! use hsymp::{lagrangian_from_basis, m_invariant, HermitianSymplecticSpace};
//!
//! let s = Arc::new(HermitianSymplecticSpace::standard(1));
//! let v = lagrangian_from_basis(&s, real_matrix(2, 1, &[1.0, 0.0]))?;
//! let w = lagrangian_from_basis(&s, real_matrix(2, 1, &[1.0, 1.0]))?;
//! assert!((m_invariant(&v, &w)? - 0.5).abs() < 1e-12);
//! assert!((m_invariant(&w, &v)? + 0.5).abs() < 1e-12);
//! # Ok(())
//! # }
//! ```

pub mod bordism;
pub mod cli;
pub mod error;
pub mod hermsymp;
pub mod json;
pub mod knotcalc;
pub mod linalg;
pub mod maslov;
pub mod sample;
pub mod torus;

pub use error::{Error, Result};
pub use hermsymp::{
    intersection_dim, lagrangian_from_basis, validate_space, EigenSplitting,
    HermitianSymplecticSpace, Lagrangian, SpaceReport, Tolerances,
};
pub use maslov::{m_invariant, triple_index};
