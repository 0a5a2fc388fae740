//! Numerical laboratory for complementary-media superlensing of
//! electromagnetic waves.
//!
//! The crate builds the two-layer spherical lens (a negative-index shell
//! obtained by pushing the identity forward under a radial Kelvin map, and a
//! positive `mI` layer), solves time-harmonic Maxwell's equations in the
//! resulting radially layered anisotropic media by spherical-mode reduction,
//! and measures how the lossy solution approaches the field of the
//! `m`-times magnified object.
//!
//! Runnable entry points live in `examples/`; the `superlens` binary wraps the
//! experiment harness.

pub mod error;
pub mod fields;
pub mod geometry;
pub mod harness;
pub mod materials;
pub mod modesolver;
pub mod ode;
pub mod sampling;
pub mod special;

pub use error::{Error, Result};

use nalgebra::{Matrix3, Vector3};
pub use num_complex::Complex64 as C64;

pub type CVec3 = Vector3<C64>;
pub type CMat3 = Matrix3<C64>;
