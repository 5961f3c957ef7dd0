//! Numerical workbench for finite-dimensional Lie quasi-bialgebras.
//!
//! Everything is generic over a real [`Scalar`] (`f32` or `f64`); the aliases
//! below fix double precision, which is what the tolerances are tuned for.

pub mod catalog;
pub mod duality;
pub mod dynamics;
pub mod error;
pub mod lie;
pub mod linalg;
pub mod poly;
pub mod qbia;
pub mod report;
pub mod scalar;
pub mod specfile;
pub mod twist;

pub use error::{Error, Result};
pub use report::{Check, Report};
pub use scalar::Scalar;

pub type LinearMap = linalg::LinearMap<f64>;
pub type Tensor3 = linalg::Tensor3<f64>;
pub type LieAlgebra = lie::LieAlgebra<f64>;
pub type QuasiBialgebra = qbia::QuasiBialgebra<f64>;
