//! Symmetric hypergeometric orthogonal polynomials in several variables,
//! built from one-variable polynomials by branching rules and Pieri
//! coefficients, with exact-arithmetic verification tooling.

pub mod branching;
pub mod cli;
pub mod error;
pub mod hermite_limit;
pub mod params;
pub mod partition;
pub mod pieri;
pub mod scalar;
pub mod sympoly;
pub mod verify;

pub use error::{Error, Result};
pub use params::{Family, ParamPoint};
pub use partition::Partition;
pub use scalar::{GaussRational, LimitField, LimitScalar, Rational, RationalFunction, Scalar};
pub use sympoly::{OneVarPoly, SymPoly};
