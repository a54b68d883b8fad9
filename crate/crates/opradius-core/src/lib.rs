//! Numerical radius computations, operator inequality chains, and an
//! ensemble verification harness for dense complex matrices.

pub mod error;
pub mod matrix;
pub mod decomp;
pub mod ensembles;
pub mod radii;
pub mod verifier;
pub mod chains;
pub mod blocks;
pub mod bounds;

pub use error::{Error, Result};
pub use matrix::{inner, BlockMatrix, ComplexMatrix, UnitVector, C64};
pub use radii::{
    min_modulus, numerical_radius, numerical_range_boundary, operator_norm, spectral_radius,
    RadiusResult,
};
