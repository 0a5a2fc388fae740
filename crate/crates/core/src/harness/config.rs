use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::SourceSpec;
use crate::geometry::LensRadii;
use crate::materials::{assemble_hat_medium, assemble_lens_medium, LayeredMedium, ObjectConfig};

/// Environment variable that overrides `output_dir`.
pub const OUTPUT_DIR_ENV: &str = "SUPERLENS_OUTPUT_DIR";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LensConfig {
    pub m: f64,
    pub r0: f64,
    pub alpha: f64,
    /// Multiplies `r2`; 1 is the matched lens.
    pub r2_factor: f64,
}

impl LensConfig {
    pub fn matched(m: f64, r0: f64, alpha: f64) -> Self {
        LensConfig {
            m,
            r0,
            alpha,
            r2_factor: 1.0,
        }
    }

    pub fn radii(&self) -> Result<LensRadii> {
        LensRadii::detuned(self.m, self.r0, self.alpha, self.r2_factor)
    }

    pub fn is_detuned(&self) -> bool {
        self.r2_factor != 1.0
    }
}

/// Mode cutoff: a fixed order, or the smallest order whose incident
/// contribution at the lens boundary falls below `tol` relative to the
/// largest one, capped at `cap`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "policy", rename_all = "snake_case", deny_unknown_fields)]
pub enum NmaxPolicy {
    Fixed { n_max: usize },
    Adaptive { tol: f64, cap: usize },
}

impl Default for NmaxPolicy {
    fn default() -> Self {
        NmaxPolicy::Adaptive { tol: 1e-10, cap: 40 }
    }
}

/// A complete experiment; every field is echoed into reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub lens: LensConfig,
    pub object: ObjectConfig,
    pub k: f64,
    pub source: SourceSpec,
    /// Strictly decreasing, inside (0, 1).
    pub delta_grid: Vec<f64>,
    pub n_max: NmaxPolicy,
    /// Probe sphere radii as multiples of `r3`; the first is the reported one.
    pub probe_radii: Vec<f64>,
    /// Energy ball radius as a multiple of `r3`.
    pub energy_radius: f64,
    /// Accepted range of the fitted slope.
    pub rate_window: [f64; 2],
    /// Energy growth factor that flags divergence.
    pub blowup_threshold: f64,
    pub solver_tol: f64,
    pub output_dir: PathBuf,
}

/// Logarithmic grid with `per_decade` points per decade from `hi` down to
/// `lo`, both included.
pub fn log_delta_grid(hi: f64, lo: f64, per_decade: usize) -> Vec<f64> {
    let decades = (hi / lo).log10();
    let n = (decades * per_decade as f64).round() as usize;
    (0..=n)
        .map(|i| hi * 10f64.powf(-(i as f64) * decades / n as f64))
        .collect()
}

impl ExperimentConfig {
    /// Lens (2, 1, 2) around the object (4I, 4I), unit wavenumber, plane wave.
    pub fn reference() -> Self {
        ExperimentConfig {
            lens: LensConfig::matched(2.0, 1.0, 2.0),
            object: ObjectConfig::isotropic(4.0, 4.0),
            k: 1.0,
            source: SourceSpec::default_plane_wave(),
            delta_grid: log_delta_grid(1e-1, 1e-3, 5),
            n_max: NmaxPolicy::default(),
            probe_radii: vec![1.5, 2.0, 3.0],
            energy_radius: 1.2,
            rate_window: [0.4, 0.65],
            blowup_threshold: 10.0,
            solver_tol: 1e-10,
            output_dir: PathBuf::from("out"),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        let lens = self.lens.radii().map_err(|e| Error::Config(e.to_string()))?;
        if !(self.k > 0.0 && self.k.is_finite()) {
            return bad(format!("k must be positive, got {}", self.k));
        }
        if let Some(d) = self.delta_grid.iter().find(|d| !(**d > 0.0 && **d < 1.0)) {
            return bad(format!("delta_grid entries must lie in (0, 1), got {d}"));
        }
        if self.delta_grid.windows(2).any(|w| w[1] >= w[0]) {
            return bad("delta_grid must be strictly decreasing".into());
        }
        if let Some(p) = self.probe_radii.iter().find(|p| !(**p > 1.0 && p.is_finite())) {
            return bad(format!("probe radii are multiples of r3 and must exceed 1, got {p}"));
        }
        if !(self.energy_radius > 0.0) {
            return bad("energy_radius must be positive".into());
        }
        if !(self.rate_window[0] < self.rate_window[1]) {
            return bad("rate_window must be an increasing pair".into());
        }
        if !(self.blowup_threshold > 1.0) {
            return bad("blowup_threshold must exceed 1".into());
        }
        if !(self.solver_tol > 0.0 && self.solver_tol < 1e-3) {
            return bad("solver_tol must lie in (0, 1e-3)".into());
        }
        match self.n_max {
            NmaxPolicy::Fixed { n_max: 0 } => return bad("n_max must be at least 1".into()),
            NmaxPolicy::Adaptive { tol, cap } if !(tol > 0.0) || cap == 0 => {
                return bad("adaptive n_max needs tol > 0 and cap >= 1".into())
            }
            _ => {}
        }
        let outer = lens.r3.max(lens.r2);
        if self.source.support_radius() <= outer {
            return bad(format!(
                "source must lie outside the lens (|x| = {} <= {outer})",
                self.source.support_radius()
            ));
        }
        Ok(())
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml(&text)
    }

    /// `output_dir`, unless overridden by the environment.
    pub fn resolved_output_dir(&self) -> PathBuf {
        std::env::var_os(OUTPUT_DIR_ENV)
            .map(PathBuf::from)
            .unwrap_or_else(|| self.output_dir.clone())
    }

    pub fn lens_medium(&self, delta: f64) -> Result<LayeredMedium> {
        assemble_lens_medium(&self.lens.radii()?, delta, &self.object.to_object())
    }

    pub fn hat_medium(&self) -> Result<LayeredMedium> {
        assemble_hat_medium(&self.lens.radii()?, &self.object.to_object())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_round_trips_through_toml() {
        let cfg = ExperimentConfig::reference();
        cfg.validate().unwrap();
        let text = cfg.to_toml().unwrap();
        assert_eq!(ExperimentConfig::from_toml(&text).unwrap(), cfg);
    }

    #[test]
    fn default_grid_is_five_per_decade() {
        let g = log_delta_grid(1e-1, 1e-3, 5);
        assert_eq!(g.len(), 11);
        assert!((g[5] - 1e-2).abs() < 1e-15 && (g[10] - 1e-3).abs() < 1e-16);
    }

    #[test]
    fn rejects_bad_grids_and_probes() {
        let mut cfg = ExperimentConfig::reference();
        cfg.delta_grid = vec![0.1, 0.1, 0.01];
        assert!(matches!(cfg.validate(), Err(Error::Config(_))));
        cfg.delta_grid = vec![1.5, 0.1];
        assert!(cfg.validate().is_err());
        cfg = ExperimentConfig::reference();
        cfg.probe_radii = vec![0.9];
        assert!(cfg.validate().is_err());
        cfg = ExperimentConfig::reference();
        cfg.source = SourceSpec::dipole(crate::geometry::Point::new(0.0, 0.0, 1.0), crate::CVec3::zeros());
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let mut text = ExperimentConfig::reference().to_toml().unwrap();
        text.insert_str(0, "bogus = 1\n");
        assert!(ExperimentConfig::from_toml(&text).is_err());
    }
}
