use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::fields::MultipoleCoefficients;
use crate::materials::LayeredMedium;
use crate::modesolver::{energy_norm, solve_layered, SolveOptions};

use super::config::ExperimentConfig;
use super::sweep::{incident_coefficients, solve_options};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlowupRow {
    pub delta: f64,
    pub energy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlowupReport {
    pub config: ExperimentConfig,
    pub n_max: usize,
    pub rows: Vec<BlowupRow>,
    /// Energy at the smallest δ over energy at the largest.
    pub growth: f64,
    pub diverging: bool,
    /// The flag agrees with the configured detuning.
    pub pass: bool,
}

/// Energy norm on `B_radius` for each loss level.
pub fn energy_table<M>(
    medium: M,
    incident: &MultipoleCoefficients,
    deltas: &[f64],
    radius: f64,
    opts: &SolveOptions,
) -> Result<Vec<BlowupRow>>
where
    M: Fn(f64) -> Result<LayeredMedium> + Sync,
{
    deltas
        .par_iter()
        .map(|&delta| {
            let sol = solve_layered(&medium(delta)?, incident.k, incident.n_max, opts)?;
            Ok(BlowupRow {
                delta,
                energy: energy_norm(&sol, incident, 0.0, radius)?,
            })
        })
        .collect()
}

pub fn run_blowup_probe(cfg: &ExperimentConfig) -> Result<BlowupReport> {
    cfg.validate()?;
    let lens = cfg.lens.radii()?;
    if cfg.lens.is_detuned() {
        log::info!("blow-up probe: r2 detuned by factor {}", cfg.lens.r2_factor);
    }
    let incident = incident_coefficients(cfg)?;
    let rows = energy_table(
        |d| cfg.lens_medium(d),
        &incident,
        &cfg.delta_grid,
        cfg.energy_radius * lens.r3,
        &solve_options(cfg),
    )?;
    let growth = match (rows.first(), rows.last()) {
        (Some(a), Some(b)) if rows.len() > 1 => b.energy / a.energy,
        _ => 1.0,
    };
    let diverging = growth >= cfg.blowup_threshold;
    Ok(BlowupReport {
        config: cfg.clone(),
        n_max: incident.n_max,
        rows,
        growth,
        diverging,
        pass: diverging == cfg.lens.is_detuned(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::config::NmaxPolicy;

    #[test]
    fn vacuum_energy_is_flat() {
        let cfg = ExperimentConfig::reference();
        let inc = incident_coefficients(&cfg).unwrap();
        let vac = |_| LayeredMedium::new(Vec::new(), 0.0, None);
        let rows = energy_table(vac, &inc, &[1e-1, 1e-2, 1e-3], 3.0, &SolveOptions::default()).unwrap();
        for r in &rows {
            assert!((r.energy - rows[0].energy).abs() < 1e-12 * rows[0].energy);
        }
    }

    #[test]
    fn matched_lens_stays_bounded() {
        let cfg = ExperimentConfig {
            delta_grid: vec![1e-1, 1e-2, 1e-3],
            n_max: NmaxPolicy::Fixed { n_max: 10 },
            ..ExperimentConfig::reference()
        };
        let r = run_blowup_probe(&cfg).unwrap();
        assert!(!r.diverging && r.growth < 2.0 && r.pass, "growth {}", r.growth);
    }
}
