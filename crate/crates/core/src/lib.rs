//! Numerics for informationally complete POVMs, dual-frame tomography and
//! finite de Finetti bounds on symmetric and exchangeable quantum states.
//!
//! The operator algebra, POVM and distribution code is generic over the
//! scalar type ([`Real`], implemented for `f64` and `f32`). The aliases at the
//! crate root fix the scalar to `f64`, which is what the experiments and the
//! CLI use.

pub mod acceptance;
pub mod classical;
pub mod definetti;
pub mod error;
pub mod opalg;
pub mod povm;
pub mod random;
pub mod scalar;
pub mod symstate;
mod textio;

pub use error::{Error, PovmViolation, Result};
pub use scalar::{Mat, Real, C};

pub type Operator = opalg::HermitianOperator<f64>;
pub type State = opalg::DensityOperator<f64>;
pub type Dist = classical::Distribution<f64>;
pub type TupleDist = classical::TupleDistribution<f64>;
