use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::materials::{LayeredMedium, Material};
use crate::C64;

use super::radial::propagate;
use super::{radial_ode_coeffs, vacuum_states, ModeIndex, ModeState, RadialSystem, ScatteringSpectrum};

#[derive(Debug, Clone, Copy)]
pub struct SolveOptions {
    /// Relative integration tolerance.
    pub tol: f64,
    /// Matching determinant below this fraction of its scale is a resonance.
    pub resonance_tol: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            tol: 1e-10,
            resonance_tol: 1e-13,
        }
    }
}

/// Regular solution of one mode, normalized so that the exterior field is
/// `regular + s · outgoing` with unit amplitude.
#[derive(Debug, Clone)]
pub struct ModeSolution {
    pub mode: ModeIndex,
    pub s: C64,
    /// Power-law exponent of the regular solution at the start radius.
    pub exponent: C64,
    /// States at the start radius and at every interface, outermost last.
    pub knots: Vec<ModeState>,
}

/// All mode solutions of one medium at one wavenumber.
#[derive(Debug, Clone)]
pub struct LayeredSolution {
    pub medium: LayeredMedium,
    pub k: f64,
    pub spectrum: ScatteringSpectrum,
    pub modes: Vec<ModeSolution>,
    pub options: SolveOptions,
}

pub(crate) fn start_radius(core: f64, n: usize) -> f64 {
    core * 10f64.powf(-16.0 / (2 * n + 1) as f64).clamp(1e-3, 0.5)
}

fn check_sign_changes(medium: &LayeredMedium) -> Result<()> {
    for i in 0..medium.len() {
        if medium.is_sign_changing(i) && !(medium.lossy_shell() == Some(i) && medium.delta() > 0.0) {
            return Err(Error::SignChangingLossless { shell: i });
        }
    }
    Ok(())
}

pub(crate) fn shell_system(medium: &LayeredMedium, shell: usize, k: f64, mode: ModeIndex) -> RadialSystem {
    radial_ode_coeffs(
        &medium.tensor(Material::Eps, shell),
        &medium.tensor(Material::Mu, shell),
        k,
        mode,
    )
}

fn solve_mode(medium: &LayeredMedium, k: f64, mode: ModeIndex, opts: &SolveOptions) -> Result<ModeSolution> {
    let bounds = medium.boundaries();
    if bounds.is_empty() {
        return Ok(ModeSolution {
            mode,
            s: C64::new(0.0, 0.0),
            exponent: C64::new((mode.n + 1) as f64, 0.0),
            knots: Vec::new(),
        });
    }
    let rs = start_radius(bounds[0], mode.n);
    let (exponent, start) = shell_system(medium, 0, k, mode).regular_start(rs)?;

    // Normalized leg-start states and the growth factor of each leg.
    let mut radii = vec![rs];
    radii.extend(&bounds);
    let norm = |y: [C64; 2]| (y[0].norm_sqr() + y[1].norm_sqr()).sqrt();
    let mut y = [start.u, start.v];
    let n0 = norm(y);
    y = [y[0] / n0, y[1] / n0];
    let mut starts = Vec::with_capacity(bounds.len() + 1);
    let mut growth = Vec::with_capacity(bounds.len());
    for (i, w) in radii.windows(2).enumerate() {
        starts.push(y);
        let sys = shell_system(medium, i, k, mode);
        let (z, _) = propagate(&sys, w[0], w[1], y, opts.tol, false)?;
        let g = norm(z);
        if !(g.is_finite() && g > 0.0) {
            return Err(Error::StepUnderflow {
                radius: w[1],
                target: w[1],
            });
        }
        growth.push(g);
        y = [z[0] / g, z[1] / g];
    }
    starts.push(y);

    let outer = *bounds.last().expect("nonempty");
    let (j, h) = vacuum_states(k, mode, outer);
    let den = y[0] * h[1] - y[1] * h[0];
    let scale = y[0].norm() * h[1].norm() + y[1].norm() * h[0].norm();
    if den.norm() < opts.resonance_tol * scale {
        return Err(Error::Resonance {
            n: mode.n,
            pol: mode.pol.to_string(),
            det: den.norm() / scale,
        });
    }
    let s = -(y[0] * j[1] - y[1] * j[0]) / den;
    let w = [j[0] + s * h[0], j[1] + s * h[1]];
    let c = (y[0] * w[0].conj() + y[1] * w[1].conj()) / (w[0].norm_sqr() + w[1].norm_sqr());

    // True scale of each normalized leg start, from the outside in.
    let mut kappa = vec![C64::new(0.0, 0.0); starts.len()];
    kappa[starts.len() - 1] = 1.0 / c;
    for i in (0..growth.len()).rev() {
        kappa[i] = kappa[i + 1] / growth[i];
    }
    let knots = starts
        .iter()
        .zip(&kappa)
        .zip(&radii)
        .map(|((y, kp), &r)| ModeState::new(r, y[0] * kp, y[1] * kp))
        .collect();
    Ok(ModeSolution {
        mode,
        s,
        exponent,
        knots,
    })
}

/// Solves every mode `1 ≤ n ≤ n_max` of `medium` (in parallel).
pub fn solve_layered(medium: &LayeredMedium, k: f64, n_max: usize, opts: &SolveOptions) -> Result<LayeredSolution> {
    if n_max < 1 {
        return Err(Error::domain("n_max must be at least 1"));
    }
    if !(k > 0.0) {
        return Err(Error::domain("wavenumber must be positive"));
    }
    check_sign_changes(medium)?;
    let modes = ModeIndex::all(n_max)
        .into_par_iter()
        .map(|mode| solve_mode(medium, k, mode, opts))
        .collect::<Result<Vec<_>>>()?;
    let mut spectrum = ScatteringSpectrum::new(k, n_max);
    for m in &modes {
        spectrum.s.insert(m.mode, m.s);
    }
    Ok(LayeredSolution {
        medium: medium.clone(),
        k,
        spectrum,
        modes,
        options: *opts,
    })
}

/// Exterior scattering coefficients `s_n` of every mode up to `n_max`.
pub fn scattering_coefficients(medium: &LayeredMedium, k: f64, n_max: usize) -> Result<ScatteringSpectrum> {
    Ok(solve_layered(medium, k, n_max, &SolveOptions::default())?.spectrum)
}

impl LayeredSolution {
    pub fn n_max(&self) -> usize {
        self.spectrum.n_max
    }

    pub fn mode(&self, mode: ModeIndex) -> &ModeSolution {
        let i = 2 * (mode.n - 1) + usize::from(mode.pol == super::Polarization::TM);
        &self.modes[i]
    }

    fn outer(&self) -> f64 {
        self.medium.outer_radius()
    }

    /// Shell index and true state at the start of the leg containing `r`.
    fn leg(&self, sol: &ModeSolution, r: f64) -> (usize, ModeState) {
        let legs = sol.knots.len() - 1;
        let i = (0..legs).rev().find(|&i| r >= sol.knots[i].r).unwrap_or(0);
        (i, sol.knots[i])
    }

    /// Mode state at radius `r` for unit exterior amplitude.
    pub fn state_at(&self, mode: ModeIndex, r: f64) -> Result<ModeState> {
        let sol = self.mode(mode);
        if sol.knots.is_empty() || r >= self.outer() {
            let (j, h) = vacuum_states(self.k, mode, r);
            return Ok(ModeState::new(r, j[0] + sol.s * h[0], j[1] + sol.s * h[1]));
        }
        let first = sol.knots[0];
        if r < first.r {
            let t = r / first.r;
            let up = C64::new(t, 0.0).powc(sol.exponent);
            let down = C64::new(t, 0.0).powc(sol.exponent - 1.0);
            return Ok(match mode.pol {
                super::Polarization::TE => ModeState::new(r, first.u * up, first.v * down),
                super::Polarization::TM => ModeState::new(r, first.u * down, first.v * up),
            });
        }
        let (i, start) = self.leg(sol, r);
        let sys = shell_system(&self.medium, i, self.k, mode);
        let (y, _) = propagate(&sys, start.r, r, [start.u, start.v], self.options.tol, false)?;
        Ok(ModeState::new(r, y[0], y[1]))
    }

    /// Field amplitudes at `r` (see `RadialAmplitudes`) for unit exterior
    /// amplitude.
    pub fn amplitudes_at(&self, mode: ModeIndex, r: f64) -> Result<[C64; 3]> {
        let st = self.state_at(mode, r)?;
        let shell = self.medium.shell_index(r);
        shell_system(&self.medium, shell, self.k, mode).amplitudes(r, st.u, st.v)
    }

    /// `∫_a^b energy_density dr` of one mode at unit exterior amplitude.
    pub fn mode_energy(&self, mode: ModeIndex, a: f64, b: f64) -> Result<f64> {
        if !(b > a && a >= 0.0) {
            return Err(Error::domain("energy interval must satisfy 0 <= a < b"));
        }
        let sol = self.mode(mode);
        let mut cuts: Vec<(f64, f64, usize, ModeState)> = Vec::new();
        let outer = if sol.knots.is_empty() { 0.0 } else { self.outer() };
        for i in 0..sol.knots.len().saturating_sub(1) {
            cuts.push((sol.knots[i].r, sol.knots[i + 1].r, i, sol.knots[i]));
        }
        if b > outer {
            // The vacuum state is analytic, so start the exterior leg at `a`
            // when it lies outside.
            let lo = outer.max(a).max(1e-6 * b);
            let start = self.state_at(mode, lo)?;
            cuts.push((lo, f64::INFINITY, self.medium.len() - 1, start));
        }
        let mut total = 0.0;
        for (lo, hi, shell, st) in cuts {
            let (from, to) = (a.max(lo), b.min(hi));
            if to <= from {
                continue;
            }
            let sys = shell_system(&self.medium, shell, self.k, mode);
            let (y, _) = propagate(&sys, st.r, from, [st.u, st.v], self.options.tol, false)?;
            let (_, e) = propagate(&sys, from, to, y, self.options.tol, true)?;
            total += e;
        }
        Ok(total)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::Polarization;
    use crate::geometry::lens_radii;
    use crate::materials::{assemble_lens_medium, ObjectMedium, RadialTensor, Shell};

    fn sphere(eps: f64, mu: f64, a: f64) -> LayeredMedium {
        LayeredMedium::new(
            vec![Shell {
                outer_radius: a,
                eps: RadialTensor::isotropic(eps),
                mu: RadialTensor::isotropic(mu),
            }],
            0.0,
            None,
        )
        .unwrap()
    }

    #[test]
    fn vacuum_scatters_nothing() {
        let s = scattering_coefficients(&sphere(1.0, 1.0, 1.0), 1.0, 10).unwrap();
        assert!(s.max_abs() < 1e-12, "{}", s.max_abs());
        let empty = LayeredMedium::new(vec![], 0.0, None).unwrap();
        assert_eq!(scattering_coefficients(&empty, 1.0, 5).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn lossless_sphere_is_unitary() {
        let s = scattering_coefficients(&sphere(3.0, 1.5, 1.2), 2.0, 12).unwrap();
        for v in s.s.values() {
            assert!(((*v * 2.0 + 1.0).norm() - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn rejects_lossless_lens() {
        let lens = lens_radii(2.0, 1.0, 2.0).unwrap();
        let med = assemble_lens_medium(&lens, 0.0, &ObjectMedium::isotropic(4.0, 4.0)).unwrap();
        assert!(matches!(
            scattering_coefficients(&med, 1.0, 3),
            Err(Error::SignChangingLossless { shell: 2 })
        ));
        assert!(scattering_coefficients(&med.with_delta(0.1).unwrap(), 1.0, 3).is_ok());
    }

    #[test]
    fn states_are_continuous_and_match_exterior() {
        let lens = lens_radii(2.0, 1.0, 2.0).unwrap();
        let med = assemble_lens_medium(&lens, 0.05, &ObjectMedium::isotropic(4.0, 4.0)).unwrap();
        let sol = solve_layered(&med, 1.0, 4, &SolveOptions::default()).unwrap();
        for mode in ModeIndex::all(4) {
            for &r in &[lens.r0, lens.r1, lens.r2] {
                let a = sol.state_at(mode, r * (1.0 - 1e-9)).unwrap();
                let b = sol.state_at(mode, r * (1.0 + 1e-9)).unwrap();
                assert!((a.u - b.u).norm() + (a.v - b.v).norm() < 1e-6 * (a.norm() + 1e-3), "{mode:?} r={r}");
            }
        }
        let e = sol.mode_energy(ModeIndex::new(1, Polarization::TE), 0.0, 3.0).unwrap();
        let e1 = sol.mode_energy(ModeIndex::new(1, Polarization::TE), 0.0, 1.5).unwrap();
        let e2 = sol.mode_energy(ModeIndex::new(1, Polarization::TE), 1.5, 3.0).unwrap();
        assert!(e > 0.0 && ((e1 + e2) - e).abs() < 1e-8 * e);
    }
}
