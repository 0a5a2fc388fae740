//! The lossy lens field inside the shell approaches the field obtained by
//! reflecting the magnified-object solution through the folding maps.
use superlens::fields::FieldPair;
use superlens::harness::{incident_coefficients, ExperimentConfig};
use superlens::modesolver::{reconstruct_fields, solve_layered, LimitField, SolveOptions, SolvedField};
use superlens::sampling::{point_in_shell, rng};

fn main() -> superlens::Result<()> {
    let cfg = ExperimentConfig::reference();
    let lens = cfg.lens.radii()?;
    let incident = incident_coefficients(&cfg)?;
    let opts = SolveOptions::default();
    let hat = solve_layered(&cfg.hat_medium()?, cfg.k, incident.n_max, &opts)?;
    let limit = LimitField {
        hat: SolvedField {
            solution: &hat,
            incident: &incident,
        },
        f: lens.fold(),
        g: lens.unfold(),
    };
    let mut g = rng(0);
    let points: Vec<_> = (0..100).map(|_| point_in_shell(&mut g, lens.r1 + 0.02, lens.r2 - 0.02)).collect();
    for delta in [1e-1, 1e-2, 1e-3, 1e-4] {
        let sol = solve_layered(&cfg.lens_medium(delta)?, cfg.k, incident.n_max, &opts)?;
        let (mut num, mut den) = (0.0, 0.0);
        for x in &points {
            let (e0, h0) = limit.eval(x)?;
            let (e, h) = reconstruct_fields(&sol, &incident, x)?;
            num += (e - e0).norm_squared() + (h - h0).norm_squared();
            den += e0.norm_squared() + h0.norm_squared();
        }
        println!("delta {delta:>6.0e}: relative shell error {:.3e}", (num / den).sqrt());
    }
    Ok(())
}
