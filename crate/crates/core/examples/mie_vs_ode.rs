//! Scattering by a coated sphere: radial ODE solver against the
//! transfer-matrix oracle, then the spectrum written as CSV.
use superlens::materials::{LayeredMedium, RadialTensor, Shell};
use superlens::modesolver::{mie_isotropic_oracle, solve_layered, IsotropicLayer, SolveOptions};
use superlens::C64;

fn main() -> superlens::Result<()> {
    let layers = [
        IsotropicLayer {
            outer_radius: 0.6,
            eps: C64::new(6.0, 0.3),
            mu: C64::new(1.0, 0.0),
        },
        IsotropicLayer {
            outer_radius: 1.0,
            eps: C64::new(2.25, 0.0),
            mu: C64::new(1.0, 0.0),
        },
    ];
    let shells = layers
        .iter()
        .map(|l| Shell {
            outer_radius: l.outer_radius,
            eps: RadialTensor::isotropic(l.eps),
            mu: RadialTensor::isotropic(l.mu),
        })
        .collect();
    let medium = LayeredMedium::new(shells, 0.0, None)?;
    let k = 3.0;
    let n_max = 12;
    let ode = solve_layered(&medium, k, n_max, &SolveOptions::default())?;
    let oracle = mie_isotropic_oracle(&layers, k, n_max)?;
    println!("{:>3} {:>3} {:>24} {:>10}", "n", "pol", "s_n", "|diff|");
    for row in ode.spectrum.rows() {
        let s = C64::new(row.re, row.im);
        let d = (s - oracle.get(row.n, row.pol)).norm();
        println!("{:>3} {:>3} {:>24.12} {:>10.2e}", row.n, row.pol, s, d);
    }
    let dir = std::env::temp_dir().join("superlens-examples");
    std::fs::create_dir_all(&dir).map_err(|e| superlens::Error::Io {
        path: dir.clone(),
        source: e,
    })?;
    let path = dir.join("coated_sphere.csv");
    ode.spectrum.write_csv(&path)?;
    println!("wrote {}", path.display());
    Ok(())
}
