//! Gaussian continuous-variable quantum information.
//!
//! States are described by a mean vector and a covariance matrix in the
//! quadrature ordering `(x1, p1, ..., xN, pN)` with `ħ = 1/2`, so the vacuum
//! has variance `1/4` in every quadrature.

pub mod circuit;
pub mod entanglement;
pub mod error;
pub mod linalg;
pub mod measurement;
pub mod nonlocality;
pub mod numeric;
pub mod ops;
pub mod protocols;
pub mod random;
pub mod report;
pub mod stabilizer;
pub mod state;

pub use circuit::{Backend, Circuit};
pub use error::{Error, Result};
pub use ops::GaussianChannel;
pub use report::{CriterionReport, Verdict};
pub use state::GaussianState;
