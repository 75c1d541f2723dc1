//! Certification and refutation of unique solvability for conforming
//! Galerkin discretizations of the Helmholtz equation with Robin boundary
//! conditions.
//!
//! * [`mesh`]: conforming meshes, generators, angle and degree predicates
//! * [`fem`]: assembly of stiffness, mass and boundary matrices, and the
//!   exact reduced matrices on the reference square
//! * [`motz`]: the marching-of-the-zeros certification
//! * [`repair`]: transmission-edge bisection and edge flipping
//! * [`analysis`]: singular value sweeps, the singular T_α witness and the
//!   exact determinant checks for quadrilaterals
//! * [`render`]: SVG frames of a marching trace

pub mod analysis;
pub mod error;
pub mod fem;
pub mod mesh;
pub mod motz;
pub mod par;
pub mod rational;
pub mod render;
pub mod repair;

pub use error::{Error, Result};
