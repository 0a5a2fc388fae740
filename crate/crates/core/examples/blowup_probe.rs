//! Energy near the lens as the loss vanishes, for the matched lens and for
//! one with r2 pushed out by 10%.
use superlens::fields::SourceSpec;
use superlens::geometry::{lens_radii, Point};
use superlens::harness::{run_blowup_probe, ExperimentConfig, LensConfig};
use superlens::{CVec3, C64};

fn main() -> superlens::Result<()> {
    let alpha = 4.0;
    let r3 = lens_radii(2.0, 1.0, alpha)?.r3;
    let z = C64::new(0.0, 0.0);
    for r2_factor in [1.0, 1.1] {
        let cfg = ExperimentConfig {
            lens: LensConfig {
                m: 2.0,
                r0: 1.0,
                alpha,
                r2_factor,
            },
            k: 0.3,
            source: SourceSpec::dipole(Point::new(0.0, 0.0, 1.4 * r3), CVec3::new(z, z, C64::new(1.0, 0.0))),
            delta_grid: vec![1e-1, 3e-2, 1e-2, 3e-3, 1e-3],
            ..ExperimentConfig::reference()
        };
        let rep = run_blowup_probe(&cfg)?;
        println!("r2 factor {r2_factor} (n_max {}):", rep.n_max);
        for row in &rep.rows {
            println!("  delta {:>6.0e}  energy {:.4}", row.delta, row.energy);
        }
        println!("  growth {:.2}x, diverging = {}", rep.growth, rep.diverging);
    }
    Ok(())
}
