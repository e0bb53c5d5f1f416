//! Exact computations with rational quantum tori, their derivation algebras
//! and bounded weight modules.

pub mod cli;
pub mod cover;
pub mod cyclotomic;
pub mod degree;
pub mod derivation;
pub mod error;
pub mod gl_realization;
pub mod lattice;
pub mod linalg;
pub mod quantum_torus;
pub mod suites;
pub mod weight_modules;

pub use cyclotomic::{CycScalar, Rat};
pub use degree::Degree;
pub use error::{Error, Result};
