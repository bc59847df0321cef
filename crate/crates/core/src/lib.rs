//! Modes of asymmetry for quantum states, measurements and channels under
//! U(1) and SU(2)/SO(3) symmetry.
//!
//! The crate is organized bottom-up:
//!
//! * [`linalg`]: dense complex operators, density matrices, superoperators.
//! * [`u1`]: U(1) mode decomposition, monotones and transition bounds.
//! * [`su2`]: angular momentum, Clebsch–Gordan coefficients, Wigner-D,
//!   irreducible tensor operator bases and mode projections.
//! * [`channels`]: covariant channel reduction, superoperator modes,
//!   measurement channels and reference-frame simulation.
//! * [`monotones`]: SU(2) mode monotones and spin-j closed forms.
//! * [`rf`]: reference-frame misalignment and degradation.
//! * [`io`]: JSON interchange formats.

pub mod error;
pub mod linalg;
pub mod random;
pub mod u1;
pub mod su2;
pub mod channels;
pub mod monotones;
pub mod rf;
pub mod io;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, DensityMatrix, Povm, Superoperator, C64, DEFAULT_TOL};
