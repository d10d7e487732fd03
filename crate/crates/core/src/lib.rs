//! Numerical laboratory for the gauge-field description of lattice
//! elasticity: covariant derivatives under local translations, linearized
//! elastic wave dynamics, acoustic phonon quantization, the induced
//! electron-phonon interaction and the strain / spin-current coupling.

pub mod elastodyn;
pub mod eph;
pub mod error;
pub mod gauge;
pub mod lattice;
pub mod operators;
pub mod phonon;
pub mod spin_strain;

pub use error::{Error, Result};
pub use gauge::CouplingConstants;
pub use lattice::{Grid1D, ScalarField, SpinorField};
