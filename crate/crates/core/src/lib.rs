//! Entanglement classification of few-fermion states through the coupled
//! cluster parametrization.
//!
//! States of three fermions on six or seven modes are converted between CI
//! and CC coordinates, their SLOCC covariants and relative invariants are
//! evaluated, and orbit classes are read off from them. Every closed form is
//! mirrored by a brute-force contraction or Fock-space computation in
//! [`oracle`].

pub mod cluster;
pub mod four_eight;
pub mod io;
mod error;
pub mod linalg;
pub mod multilinear;
pub mod oracle;
pub mod perturbation;
pub mod sampling;
pub mod seven_mode;
pub mod six_mode;
pub mod verify;

pub use error::{Error, Result};
