use nalgebra::Matrix2;

use crate::error::{Error, Result};
use crate::fields::Polarization;
use crate::materials::RadialTensor;
use crate::ode::{integrate, OdeOptions};
use crate::C64;

use super::{ModeIndex, ModeState};

/// The per-mode radial system `d/dr (u, v) = A(r) (u, v)` of one shell.
///
/// TE: `u' = −ikμ_t v`, `v' = i(L/(kμ_r r²) − kε_t) u`.
/// TM: `u' = i(kμ_t − L/(kε_r r²)) v`, `v' = ikε_t u`.
#[derive(Debug, Clone)]
pub struct RadialSystem {
    pub eps: RadialTensor,
    pub mu: RadialTensor,
    pub k: f64,
    pub mode: ModeIndex,
}

pub fn radial_ode_coeffs(eps: &RadialTensor, mu: &RadialTensor, k: f64, mode: ModeIndex) -> RadialSystem {
    RadialSystem {
        eps: eps.clone(),
        mu: mu.clone(),
        k,
        mode,
    }
}

fn nonzero(c: C64, r: f64, what: &str) -> Result<C64> {
    if c.norm() == 0.0 || !c.is_finite() {
        return Err(Error::SingularCoefficient {
            radius: r,
            what: what.to_string(),
        });
    }
    Ok(c)
}

impl RadialSystem {
    /// `(ε_r, ε_t, μ_r, μ_t)` at `r`, with the ones the mode depends on
    /// checked for vanishing.
    fn params(&self, r: f64) -> Result<(C64, C64, C64, C64)> {
        let (er, et) = self.eps.components(r);
        let (mr, mt) = self.mu.components(r);
        match self.mode.pol {
            Polarization::TE => Ok((er, et, nonzero(mr, r, "radial mu")?, nonzero(mt, r, "tangential mu")?)),
            Polarization::TM => Ok((nonzero(er, r, "radial eps")?, nonzero(et, r, "tangential eps")?, mr, mt)),
        }
    }

    pub fn matrix(&self, r: f64) -> Result<Matrix2<C64>> {
        let (er, et, mr, mt) = self.params(r)?;
        let (k, l) = (self.k, self.mode.l());
        let i = C64::i();
        let z = C64::new(0.0, 0.0);
        Ok(match self.mode.pol {
            Polarization::TE => Matrix2::new(z, -i * k * mt, i * (l / (k * mr * r * r) - k * et), z),
            Polarization::TM => Matrix2::new(z, i * (k * mt - l / (k * er * r * r)), i * k * et, z),
        })
    }

    /// `r² ∫_{S²} (|E|² + |H|² + |curl E|² + |curl H|²)` for a unit mode
    /// coefficient.
    pub fn energy_density(&self, r: f64, u: C64, v: C64) -> Result<f64> {
        let (er, et, mr, mt) = self.params(r)?;
        let (k, l) = (self.k, self.mode.l());
        let (a, b, rad, tan_other, tan_self) = match self.mode.pol {
            Polarization::TE => (u.norm_sqr(), v.norm_sqr(), mr, mt, et),
            Polarization::TM => (v.norm_sqr(), u.norm_sqr(), er, et, mt),
        };
        let k2 = k * k;
        Ok(a + b
            + l * a / (k2 * rad.norm_sqr() * r * r)
            + l * a / (r * r)
            + k2 * tan_other.norm_sqr() * b
            + k2 * tan_self.norm_sqr() * a)
    }

    /// Field amplitudes `[Φ̃ part, radial Y part, Ψ̃ part]` of the mode whose
    /// state is `(u, v)` at `r` (see `RadialAmplitudes`).
    pub fn amplitudes(&self, r: f64, u: C64, v: C64) -> Result<[C64; 3]> {
        let (er, _, mr, _) = self.params(r)?;
        let sl = self.mode.l().sqrt();
        let i = C64::i();
        Ok(match self.mode.pol {
            Polarization::TE => [u / r, i * sl * u / (self.k * mr * r * r), v / r],
            Polarization::TM => [v / r, -i * sl * v / (self.k * er * r * r), u / r],
        })
    }

    /// Local power-law exponent `s` of the regular solution near the origin
    /// and the corresponding normalized state at `r`.
    pub fn regular_start(&self, r: f64) -> Result<(C64, ModeState)> {
        let (er, et, mr, mt) = self.params(r)?;
        let (t, dt, rad) = match self.mode.pol {
            Polarization::TE => (mt, self.mu.tangential.derivative(r), mr),
            Polarization::TM => (et, self.eps.tangential.derivative(r), er),
        };
        let p = dt * r / t;
        let c = t / rad;
        let one_p = p + 1.0;
        let root = (one_p * one_p + c * 4.0 * self.mode.l()).sqrt();
        let s = if (one_p + root).re >= (one_p - root).re {
            (one_p + root) / 2.0
        } else {
            (one_p - root) / 2.0
        };
        let lead = C64::new(1.0, 0.0);
        let other = s / (r * self.k * t);
        let state = match self.mode.pol {
            Polarization::TE => ModeState::new(r, lead, C64::i() * other),
            Polarization::TM => ModeState::new(r, -C64::i() * other, lead),
        };
        Ok((s, state))
    }

    pub(crate) fn rhs(&self, r: f64, y: &[C64], dy: &mut [C64], with_energy: bool) -> Result<()> {
        let a = self.matrix(r)?;
        dy[0] = a[(0, 1)] * y[1];
        dy[1] = a[(1, 0)] * y[0];
        if with_energy {
            dy[2] = C64::new(self.energy_density(r, y[0], y[1])?, 0.0);
        }
        Ok(())
    }
}

pub(crate) fn ode_options(tol: f64, with_energy: bool) -> OdeOptions {
    // Local error control; the global error over a shell is a few hundred
    // steps' worth, so the per-step target is tighter than `tol`.
    OdeOptions {
        rtol: (tol * 1e-3).max(1e-14),
        norm_groups: if with_energy { vec![0..2, 2..3] } else { Vec::new() },
        ..OdeOptions::default()
    }
}

/// Integrates the state across `[r_in, r_out]` (either direction) and returns
/// the state there together with `∫ energy_density` over the interval.
pub(crate) fn propagate(
    sys: &RadialSystem,
    r_in: f64,
    r_out: f64,
    y: [C64; 2],
    tol: f64,
    with_energy: bool,
) -> Result<([C64; 2], f64)> {
    let y0 = [y[0], y[1], C64::new(0.0, 0.0)];
    let dim = if with_energy { 3 } else { 2 };
    let (out, _) = integrate(
        |r, y, dy| sys.rhs(r, y, dy, with_energy),
        r_in,
        r_out,
        &y0[..dim],
        &ode_options(tol, with_energy),
    )?;
    let energy = if with_energy { out[2].re.abs() } else { 0.0 };
    Ok(([out[0], out[1]], energy))
}

/// Adaptive integration of one mode across a shell.
pub fn integrate_shell(sys: &RadialSystem, r_in: f64, r_out: f64, state: &ModeState, tol: f64) -> Result<ModeState> {
    if (state.r - r_in).abs() > 1e-12 * r_in.abs().max(1.0) {
        return Err(Error::domain("state radius differs from r_in"));
    }
    let (y, _) = propagate(sys, r_in, r_out, [state.u, state.v], tol, false)?;
    Ok(ModeState::new(r_out, y[0], y[1]))
}

impl super::TransferMatrix {
    /// Transfer matrix of a shell, from two unit initial states.
    pub fn compute(sys: &RadialSystem, r_in: f64, r_out: f64, tol: f64) -> Result<Self> {
        let one = C64::new(1.0, 0.0);
        let zero = C64::new(0.0, 0.0);
        let (a, _) = propagate(sys, r_in, r_out, [one, zero], tol, false)?;
        let (b, _) = propagate(sys, r_in, r_out, [zero, one], tol, false)?;
        Ok(super::TransferMatrix {
            r_in,
            r_out,
            matrix: Matrix2::new(a[0], b[0], a[1], b[1]),
        })
    }
}
