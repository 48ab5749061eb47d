//! Weighted shifts on the full Fock space: weight systems, their commutants,
//! joint eigenvectors of the adjoint algebra, and spectra of elements.

pub mod algebra;
#[cfg(feature = "cli")]
pub mod cli;
pub mod eigen;
pub mod error;
pub mod fock;
pub mod linalg;
pub mod spectra;
pub mod weights;
pub mod words;

pub use error::{Error, Result};
pub use fock::{GradedOperator, TruncatedFock};
pub use num_complex::Complex64;
pub use weights::{MuSystem, RightWeights, WeightSystem};
pub use words::Word;
