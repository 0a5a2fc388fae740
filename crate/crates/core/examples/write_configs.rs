//! Writes the sample experiment configs used by the command line.
use std::path::Path;

use superlens::fields::SourceSpec;
use superlens::geometry::{lens_radii, Point};
use superlens::harness::{ExperimentConfig, LensConfig};
use superlens::{CVec3, C64};

fn save(cfg: &ExperimentConfig, path: &Path) -> superlens::Result<()> {
    cfg.validate()?;
    std::fs::write(path, cfg.to_toml()?).map_err(|e| superlens::Error::Io {
        path: path.to_path_buf(),
        source: e,
    })?;
    println!("wrote {}", path.display());
    Ok(())
}

fn main() -> superlens::Result<()> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/configs");
    let rate = ExperimentConfig {
        delta_grid: vec![1e-1, 3e-2, 1e-2, 3e-3, 1e-3],
        probe_radii: vec![1.5],
        output_dir: "out/rate".into(),
        ..ExperimentConfig::reference()
    };
    save(&rate, &dir.join("rate.toml"))?;

    let alpha = 4.0;
    let r3 = lens_radii(2.0, 1.0, alpha)?.r3;
    let z = C64::new(0.0, 0.0);
    let blowup = |r2_factor: f64, out: &str| ExperimentConfig {
        lens: LensConfig {
            m: 2.0,
            r0: 1.0,
            alpha,
            r2_factor,
        },
        k: 0.3,
        source: SourceSpec::dipole(Point::new(0.0, 0.0, 1.4 * r3), CVec3::new(z, z, C64::new(1.0, 0.0))),
        delta_grid: vec![1e-1, 1e-2, 1e-3],
        output_dir: out.into(),
        ..ExperimentConfig::reference()
    };
    save(&blowup(1.1, "out/blowup-detuned"), &dir.join("blowup_detuned.toml"))?;
    save(&blowup(1.0, "out/blowup-matched"), &dir.join("blowup_matched.toml"))?;
    Ok(())
}
