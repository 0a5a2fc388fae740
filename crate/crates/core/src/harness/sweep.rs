use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::{
    expand_source_to_multipoles, FieldPair, MultipoleCoefficients, MultipoleExpansion, MultipoleKind, Polarization,
};
use crate::materials::{check_reflecting_complementary, CheckOptions, ProfileSpec};
use crate::modesolver::{energy_norm, hat_spectrum, solve_layered, ModeIndex, ScatteringSpectrum, SolveOptions};
use crate::special::{spherical_bessel, SphereQuadrature};
use crate::C64;

use super::config::{ExperimentConfig, NmaxPolicy};
use super::fit::{fit_rate, RateFit};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub delta: f64,
    pub spectral_error: f64,
    /// Field error on the first probe sphere.
    pub field_error: f64,
    pub energy: f64,
}

/// `max_δ field_error(δ)/δ^{1/2}` on one probe sphere.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeConstant {
    pub radius: f64,
    pub constant: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub config: ExperimentConfig,
    pub n_max: usize,
    pub rows: Vec<SweepRow>,
    pub fit: Option<RateFit>,
    pub field_error_monotone: bool,
    pub probe_constants: Vec<ProbeConstant>,
    /// Fitted slope inside the configured window.
    pub pass: bool,
}

/// Incident coefficients of the configured source, projected on the outer
/// lens sphere, with the order cutoff chosen by the policy.
pub fn incident_coefficients(cfg: &ExperimentConfig) -> Result<MultipoleCoefficients> {
    let lens = cfg.lens.radii()?;
    let outer = lens.r3.max(lens.r2);
    let cap = match cfg.n_max {
        NmaxPolicy::Fixed { n_max } => n_max,
        NmaxPolicy::Adaptive { cap, .. } => cap,
    };
    let full = expand_source_to_multipoles(&cfg.source, cfg.k, cap, outer, 1e-10)?;
    let n_max = match cfg.n_max {
        NmaxPolicy::Fixed { n_max } => n_max,
        NmaxPolicy::Adaptive { tol, cap } => {
            let jb = spherical_bessel(cap, C64::new(cfg.k * outer, 0.0));
            let c: Vec<f64> = (1..=cap)
                .map(|n| {
                    (full.order_power(Polarization::TE, n) + full.order_power(Polarization::TM, n)).sqrt()
                        * jb.j(n).norm()
                })
                .collect();
            let top = c.iter().copied().fold(0.0, f64::max);
            let last = c.iter().rposition(|&v| v >= tol * top).map_or(1, |i| i + 1);
            if last == cap && cap > 1 {
                log::warn!("adaptive n_max reached its cap {cap}");
            }
            last
        }
    };
    Ok(full.truncated(n_max))
}

/// The magnified-object spectrum; closed form for constant isotropic
/// objects, radial ODE otherwise.
pub fn hat_reference(cfg: &ExperimentConfig, n_max: usize) -> Result<ScatteringSpectrum> {
    let o = &cfg.object;
    let lens = cfg.lens.radii()?;
    match (&o.eps_radial, &o.eps_tangential, &o.mu_radial, &o.mu_tangential) {
        (ProfileSpec::Constant(er), ProfileSpec::Constant(et), ProfileSpec::Constant(mr), ProfileSpec::Constant(mt))
            if er == et && mr == mt =>
        {
            hat_spectrum(&lens, C64::new(*er, 0.0), C64::new(*mr, 0.0), cfg.k, n_max)
        }
        _ => Ok(solve_layered(&cfg.hat_medium()?, cfg.k, n_max, &solve_options(cfg))?.spectrum),
    }
}

pub(crate) fn solve_options(cfg: &ExperimentConfig) -> SolveOptions {
    SolveOptions {
        tol: cfg.solver_tol,
        ..SolveOptions::default()
    }
}

/// `sqrt(Σ_{n,pol} (Σ_m |a_nm|²) |s_n − ŝ_n|²)`.
pub fn spectral_error(s: &ScatteringSpectrum, hat: &ScatteringSpectrum, incident: &MultipoleCoefficients) -> f64 {
    ModeIndex::all(incident.n_max)
        .into_iter()
        .map(|mode| incident.order_power(mode.pol, mode.n) * (s.get(mode.n, mode.pol) - hat.get(mode.n, mode.pol)).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// H(curl)-weighted L² norm, over the sphere of radius `radius`, of the
/// exterior field difference between two spectra under the same incidence.
pub fn probe_field_error(
    s: &ScatteringSpectrum,
    hat: &ScatteringSpectrum,
    incident: &MultipoleCoefficients,
    radius: f64,
) -> Result<f64> {
    let n_max = incident.n_max;
    let mut diff = MultipoleCoefficients::zeros(incident.k, n_max);
    for mode in ModeIndex::all(n_max) {
        let ds = s.get(mode.n, mode.pol) - hat.get(mode.n, mode.pol);
        for m in -(mode.n as i64)..=(mode.n as i64) {
            diff.set(mode.pol, mode.n, m, incident.get(mode.pol, mode.n, m) * ds);
        }
    }
    let field = MultipoleExpansion {
        coefficients: &diff,
        kind: MultipoleKind::Outgoing,
    };
    let n_theta = n_max + 16;
    let quad = SphereQuadrature::new(n_theta, 2 * n_theta);
    let k2 = incident.k * incident.k;
    let mut acc = 0.0;
    for node in quad.nodes() {
        let (e, h) = field.eval(&(node.direction() * radius))?;
        acc += node.weight * (e.norm_squared() + h.norm_squared());
    }
    // Source-free vacuum: |curl E| = k|H| and |curl H| = k|E|.
    Ok((acc * (1.0 + k2) * radius * radius).sqrt())
}

pub fn run_delta_sweep(cfg: &ExperimentConfig) -> Result<ConvergenceReport> {
    cfg.validate()?;
    let lens = cfg.lens.radii()?;
    let audit = check_reflecting_complementary(
        &cfg.lens_medium(0.0)?,
        &lens.fold(),
        &lens.unfold(),
        &cfg.hat_medium()?,
        &CheckOptions::default(),
    );
    if !audit.pass {
        return Err(Error::Inconsistent(format!(
            "lens is not reflecting complementary ({:?} violated by {:.2e})",
            audit.failed_condition, audit.max_violation
        )));
    }
    let incident = incident_coefficients(cfg)?;
    let n_max = incident.n_max;
    let hat = hat_reference(cfg, n_max)?;
    let opts = solve_options(cfg);
    let energy_radius = cfg.energy_radius * lens.r3;

    let per_delta = cfg
        .delta_grid
        .par_iter()
        .map(|&delta| {
            let sol = solve_layered(&cfg.lens_medium(delta)?, cfg.k, n_max, &opts)?;
            let fields = cfg
                .probe_radii
                .iter()
                .map(|&p| probe_field_error(&sol.spectrum, &hat, &incident, p * lens.r3))
                .collect::<Result<Vec<_>>>()?;
            Ok((
                delta,
                spectral_error(&sol.spectrum, &hat, &incident),
                fields,
                energy_norm(&sol, &incident, 0.0, energy_radius)?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;

    let rows: Vec<SweepRow> = per_delta
        .iter()
        .map(|(delta, se, fe, en)| SweepRow {
            delta: *delta,
            spectral_error: *se,
            field_error: fe.first().copied().unwrap_or(f64::NAN),
            energy: *en,
        })
        .collect();
    let probe_constants = cfg
        .probe_radii
        .iter()
        .enumerate()
        .map(|(i, &radius)| ProbeConstant {
            radius,
            constant: per_delta
                .iter()
                .map(|(d, _, fe, _)| fe[i] / d.sqrt())
                .fold(0.0, f64::max),
        })
        .collect();
    let field_error_monotone = rows.windows(2).all(|w| w[1].field_error < w[0].field_error);
    let deltas: Vec<f64> = rows.iter().map(|r| r.delta).collect();
    let errors: Vec<f64> = rows.iter().map(|r| r.spectral_error).collect();
    let fit = match fit_rate(&deltas, &errors) {
        Ok(f) => Some(f),
        Err(e) => {
            log::warn!("rate fit skipped: {e}");
            None
        }
    };
    let pass = fit
        .as_ref()
        .is_some_and(|f| f.slope >= cfg.rate_window[0] && f.slope <= cfg.rate_window[1]);
    Ok(ConvergenceReport {
        config: cfg.clone(),
        n_max,
        rows,
        fit,
        field_error_monotone,
        probe_constants,
        pass,
    })
}
