//! Loss sweep on the (2, 1, 2) lens around the object (4I, 4I): spectral and
//! probe-sphere errors against the magnified object, rate fit, report files.
use superlens::harness::{emit_report, run_delta_sweep, ExperimentConfig};

fn main() -> superlens::Result<()> {
    let mut cfg = ExperimentConfig::reference();
    cfg.delta_grid = vec![1e-1, 3e-2, 1e-2, 3e-3, 1e-3];
    cfg.output_dir = std::env::temp_dir().join("superlens-examples").join("sweep");
    let report = run_delta_sweep(&cfg)?;
    println!("n_max = {}", report.n_max);
    println!("{:>8} {:>14} {:>14} {:>10}", "delta", "spectral", "probe field", "energy");
    for r in &report.rows {
        println!("{:>8.0e} {:>14.4e} {:>14.4e} {:>10.4}", r.delta, r.spectral_error, r.field_error, r.energy);
    }
    if let Some(fit) = &report.fit {
        println!("slope {:.3}, intercept {:.3}, residual {:.2e}", fit.slope, fit.intercept, fit.residual);
    }
    for p in &report.probe_constants {
        println!("probe radius {:.1} r3: max error / delta^(1/2) = {:.3}", p.radius, p.constant);
    }
    let (csv, json) = emit_report(&report, &cfg.resolved_output_dir())?;
    println!("wrote {} and {}", csv.display(), json.display());
    Ok(())
}
