//! Special functions: spherical Bessel functions of complex argument,
//! normalized associated Legendre functions and vector spherical harmonics,
//! and Gauss-Legendre based sphere quadrature.

mod bessel;
mod harmonics;
mod quadrature;

pub use bessel::{spherical_bessel, BesselTable};
pub use harmonics::{legendre_table, vsh, LegendreTable, Vsh};
pub use quadrature::{gauss_legendre, SphereNode, SphereQuadrature};
