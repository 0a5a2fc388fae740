//! Regular multipole coefficients of a dipole source, truncation tail, and
//! field samples written as probe CSV.
use superlens::fields::{expand_source_to_multipoles, write_probe_csv, MultipoleExpansion, MultipoleKind, Polarization, SourceSpec};
use superlens::geometry::Point;
use superlens::{CVec3, C64};

fn main() -> superlens::Result<()> {
    let k = 1.0;
    let z = C64::new(0.0, 0.0);
    let src = SourceSpec::dipole(Point::new(0.0, 0.0, 3.0), CVec3::new(C64::new(1.0, 0.0), z, z));
    let coeffs = expand_source_to_multipoles(&src, k, 40, 2.0, 1e-8)?;
    println!("tail {:.2e}, reconstruction error {:.2e}", coeffs.tail, coeffs.reconstruction_error);
    for n in 1..=6 {
        println!(
            "n = {n}: sqrt(sum_m |a_TE|^2) = {:.4e}, sqrt(sum_m |a_TM|^2) = {:.4e}",
            coeffs.order_power(Polarization::TE, n).sqrt(),
            coeffs.order_power(Polarization::TM, n).sqrt()
        );
    }
    let field = MultipoleExpansion {
        coefficients: &coeffs,
        kind: MultipoleKind::Regular,
    };
    let points: Vec<Point> = (0..8).map(|i| Point::new(0.2 * i as f64, 0.1, -0.3)).collect();
    let path = std::env::temp_dir().join("superlens-examples-probe.csv");
    write_probe_csv(&path, &field, &points)?;
    println!("wrote {}", path.display());
    Ok(())
}
