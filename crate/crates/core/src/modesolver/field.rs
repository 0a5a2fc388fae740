use crate::error::{Error, Result};
use crate::fields::{synthesize, FieldPair, MultipoleCoefficients, Polarization, RadialAmplitudes, TransformedPair};
use crate::geometry::{Composed, Inverted, Point, RadialMap};
use crate::materials::LayeredMedium;
use crate::{CVec3, C64};

use super::radial::propagate;
use super::solve::shell_system;
use super::{vacuum_states, LayeredSolution, ModeIndex, ModeState};

fn on_interface(r: f64, radii: &[f64]) -> bool {
    radii.iter().any(|&b| (r - b).abs() <= 1e-12 * b)
}

/// Total field of the layered solution driven by the regular incident
/// expansion `incident`: inside, the mode sum of the radial solutions; outside,
/// `incident + Σ s_n a_nm · outgoing`.
pub fn reconstruct_fields(
    solution: &LayeredSolution,
    incident: &MultipoleCoefficients,
    x: &Point,
) -> Result<(CVec3, CVec3)> {
    let r = x.norm();
    if on_interface(r, &solution.medium.boundaries()) {
        return Err(Error::domain(format!("field requested on an interface (r = {r})")));
    }
    let n_max = solution.n_max().min(incident.n_max);
    let mut amps = Vec::with_capacity(n_max + 1);
    amps.push(RadialAmplitudes {
        te: [C64::new(0.0, 0.0); 3],
        tm: [C64::new(0.0, 0.0); 3],
    });
    for n in 1..=n_max {
        amps.push(RadialAmplitudes {
            te: solution.amplitudes_at(ModeIndex::new(n, Polarization::TE), r)?,
            tm: solution.amplitudes_at(ModeIndex::new(n, Polarization::TM), r)?,
        });
    }
    let peak = (1..=n_max)
        .map(|n| {
            let a = &amps[n];
            let w = a.te.iter().chain(&a.tm).map(|c| c.norm()).fold(0.0, f64::max);
            w * (incident.order_power(Polarization::TE, n) + incident.order_power(Polarization::TM, n)).sqrt()
        })
        .collect::<Vec<_>>();
    let top = peak.iter().copied().fold(0.0, f64::max);
    if top > 0.0 && peak[n_max - 1] > 1e-8 * top {
        log::warn!(
            "mode sum at r = {r} truncated at n_max = {n_max}: last order contributes {:.2e} of the largest",
            peak[n_max - 1] / top
        );
    }
    synthesize(x, n_max, |p, n, m| incident.get(p, n, m), |n| amps[n])
}

/// A solved layered problem as a field pair.
pub struct SolvedField<'a> {
    pub solution: &'a LayeredSolution,
    pub incident: &'a MultipoleCoefficients,
}

impl FieldPair for SolvedField<'_> {
    fn k(&self) -> f64 {
        self.solution.k
    }

    fn eval(&self, x: &Point) -> Result<(CVec3, CVec3)> {
        reconstruct_fields(self.solution, self.incident, x)
    }
}

/// The limit field assembled from the magnified-object solution by
/// reflection: `Ê` outside `B_{r2}`, `(F⁻¹)*Ê` in the shell, `(G∘F)⁻¹*Ê` in
/// `B_{r1}`.
pub struct LimitField<P> {
    pub hat: P,
    pub f: RadialMap,
    pub g: RadialMap,
}

impl<P: FieldPair> LimitField<P> {
    /// Inner radius `F⁻¹(∂B_{r3})` of the shell.
    pub fn r1(&self) -> f64 {
        self.f.inverse().radial_image(self.g.reference_radius())
    }
}

impl<P: FieldPair> FieldPair for LimitField<P> {
    fn k(&self) -> f64 {
        self.hat.k()
    }

    fn eval(&self, x: &Point) -> Result<(CVec3, CVec3)> {
        limit_solution_via_reflection(&self.hat, &self.f, &self.g, x)
    }
}

pub fn limit_solution_via_reflection<P: FieldPair + ?Sized>(
    hat: &P,
    f: &RadialMap,
    g: &RadialMap,
    x: &Point,
) -> Result<(CVec3, CVec3)> {
    let (r2, r3) = (f.reference_radius(), g.reference_radius());
    let r1 = f.inverse().radial_image(r3);
    let r = x.norm();
    if on_interface(r, &[r1, r2, r3]) {
        return Err(Error::domain(format!("limit field requested on an interface (r = {r})")));
    }
    if r > r2 {
        hat.eval(x)
    } else if r > r1 {
        TransformedPair {
            inner: hat,
            map: f.inverse(),
        }
        .eval(x)
    } else {
        TransformedPair {
            inner: hat,
            map: Inverted(Composed { first: *f, second: *g }),
        }
        .eval(x)
    }
}

/// Discrete H(curl)-type norm on the annulus `a < |x| < b`:
/// `sqrt(Σ_{n,pol} (Σ_m |a_nm|²) ∫_a^b r² ∮ (|E|² + |H|² + |curl E|² + |curl H|²))`.
pub fn energy_norm(solution: &LayeredSolution, incident: &MultipoleCoefficients, a: f64, b: f64) -> Result<f64> {
    let n_max = solution.n_max().min(incident.n_max);
    let mut total = 0.0;
    for mode in ModeIndex::all(n_max) {
        let w = incident.order_power(mode.pol, mode.n);
        if w == 0.0 {
            continue;
        }
        total += w * solution.mode_energy(mode, a, b)?;
    }
    Ok(total.sqrt())
}

/// Inward continuation of exterior Cauchy data through the shells of a medium.
#[derive(Debug, Clone)]
pub struct CauchyContinuation {
    pub trajectory: Vec<ModeState>,
    /// `sqrt(∫ energy_density)` over the traversed interval.
    pub norm: f64,
}

/// Integrates the mode system of `medium` from `r_start` inward to `r_end`
/// starting from the vacuum state `regular + s_hat · outgoing`, recording the
/// state at every interface and at `samples` evenly spaced radii per leg.
pub fn cauchy_shell_continuation(
    s_hat: C64,
    r_start: f64,
    r_end: f64,
    medium: &LayeredMedium,
    k: f64,
    mode: ModeIndex,
    tol: f64,
    samples: usize,
) -> Result<CauchyContinuation> {
    if !(r_end > 0.0 && r_end < r_start) {
        return Err(Error::domain("continuation needs 0 < r_end < r_start"));
    }
    let (j, h) = vacuum_states(k, mode, r_start);
    let mut y = [j[0] + s_hat * h[0], j[1] + s_hat * h[1]];
    let mut cuts: Vec<f64> = medium
        .boundaries()
        .into_iter()
        .filter(|&b| b > r_end && b < r_start)
        .collect();
    cuts.push(r_end);
    cuts.sort_by(|a, b| b.partial_cmp(a).expect("finite radii"));
    let mut r = r_start;
    let mut trajectory = vec![ModeState::new(r, y[0], y[1])];
    let mut energy = 0.0;
    for &next in &cuts {
        let shell = medium.shell_index(0.5 * (r + next));
        let sys = shell_system(medium, shell, k, mode);
        let steps = samples.max(1);
        for i in 1..=steps {
            let to = r + (next - r) * i as f64 / steps as f64;
            let from = trajectory.last().expect("nonempty").r;
            let (z, e) = propagate(&sys, from, to, y, tol, true)?;
            y = z;
            energy += e;
            trajectory.push(ModeState::new(to, y[0], y[1]));
        }
        r = next;
    }
    Ok(CauchyContinuation {
        trajectory,
        norm: energy.sqrt(),
    })
}
