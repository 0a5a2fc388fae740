//! Electromagnetic field pairs: analytic sources, vector-spherical multipoles,
//! the change-of-variables calculus, finite-difference Maxwell residuals and
//! the Stratton-Chu exterior representation.

mod calculus;
mod multipole;
mod pair;
mod probe;
mod sources;
mod stratton_chu;

pub use calculus::{boundary_trace_pushforward, fd_curl, maxwell_residual, silver_muller_residual};
pub use multipole::{
    expand_source_to_multipoles, synthesize, vacuum_amplitudes, MultipoleCoefficients, MultipoleExpansion,
    MultipoleField, MultipoleKind, Polarization, RadialAmplitudes,
};
pub use pair::{transform_field, FieldPair, FnPair, TransformedPair};
pub use probe::{read_probe_csv, write_probe_csv, ProbeRow};
pub use sources::{dipole_field, plane_wave, Dipole, PlaneWave, SourceSpec};
pub use stratton_chu::stratton_chu_eval;
