//! Canonical discrete-time evolution for irregular linear systems.
//!
//! The crate is organised bottom-up:
//!
//! - [`linalg`]: canonical SVD, pseudoinverse, projectors, symplectic helpers
//! - [`timestep`]: one forward or backward evolution move with its constraints
//! - [`adapted`]: symplectic coordinates in which a move becomes trivial
//! - [`lattice`]: the scalar field on a triangulated tube and its split into steps
//! - [`global`]: multi-step trajectories and the space of global solutions
//! - [`report`]: JSON reports behind the `dle` binary

pub mod adapted;
pub mod error;
pub mod global;
pub mod lattice;
pub mod linalg;
pub mod report;
pub mod timestep;

pub use error::{Error, Result};
pub use linalg::{Matrix, Vector};
