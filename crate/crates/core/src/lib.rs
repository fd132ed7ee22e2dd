//! Weyl–Heisenberg and Clifford groups in finite dimension, projective
//! representations of the triangle group Δ(3,3,3), canonical order-three
//! Clifford unitaries and SIC fiducial search.

pub mod algebra;
pub mod canonical3;
pub mod cli;
pub mod clifford;
pub mod error;
pub mod matrix;
pub mod modring;
pub mod phase;
pub mod sicfid;
pub mod trianglerep;
pub mod whgroup;

pub use error::{Error, Result};
pub use matrix::{CMatrix, CVector, UMatrix, DEFAULT_TOL};
pub use modring::{Modulus, SympMat};
pub use phase::Phase;
pub use whgroup::DispIndex;
