//! Spherical-mode solver for radially layered, radially anisotropic media.
//!
//! Each `(n, pol)` mode reduces Maxwell's equations to a 2×2 first-order
//! system for the tangential amplitudes `(u, v) = (r E_t, r H_t)`, which are
//! continuous across interfaces. The regular solution is started at a small
//! radius from its local power law, propagated outward, and matched to
//! `regular + s · outgoing` in the vacuum exterior.

mod field;
mod mie;
mod radial;
mod solve;
mod types;

pub use crate::fields::Polarization;
pub use field::{
    cauchy_shell_continuation, energy_norm, limit_solution_via_reflection, reconstruct_fields, CauchyContinuation,
    LimitField, SolvedField,
};
pub use mie::{hat_spectrum, mie_isotropic_oracle, IsotropicLayer};
pub use radial::{integrate_shell, radial_ode_coeffs, RadialSystem};
pub use solve::{scattering_coefficients, solve_layered, LayeredSolution, ModeSolution, SolveOptions};
pub use types::{ModeIndex, ModeState, ScatteringSpectrum, SpectrumRow, TransferMatrix};

use crate::special::spherical_bessel;
use crate::C64;

/// Vacuum states `(u, v)` at radius `r` of the unit regular and outgoing
/// multipoles.
pub(crate) fn vacuum_states(k: f64, mode: ModeIndex, r: f64) -> ([C64; 2], [C64; 2]) {
    let n = mode.n;
    let x = k * r;
    let t = spherical_bessel(n, C64::new(x, 0.0));
    let state = |f: C64, df: C64| {
        let w = f * r;
        let wp = (f + x * df) * (C64::i() / k);
        match mode.pol {
            Polarization::TE => [w, wp],
            Polarization::TM => [-wp, w],
        }
    };
    (state(t.j(n), t.dj(n)), state(t.h(n), t.dh(n)))
}
