//! A plane wave pulled back through a radial map solves Maxwell's equations
//! with the pushed-forward vacuum tensors; the FD residual is second order.
use superlens::fields::{maxwell_residual, FieldPair, PlaneWave, TransformedPair};
use superlens::geometry::{lens_radii, Point};
use superlens::materials::{Pushed, RadialTensor};
use superlens::{CVec3, C64};

fn main() -> superlens::Result<()> {
    let pw = PlaneWave::new(
        1.0,
        Point::new(0.0, 0.6, 0.8),
        CVec3::new(C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0)),
    )?;
    let lens = lens_radii(2.0, 1.0, 2.0)?;
    let map = lens.fold();
    let field = TransformedPair { inner: pw, map };
    let id = RadialTensor::identity();
    let tensor = Pushed { map: &map, inner: &id };
    let x = Point::new(0.9, 0.4, -0.8);
    let (e, _) = field.eval(&x)?;
    println!("|E'(x)| = {:.6}", e.norm());
    let mut prev: Option<f64> = None;
    for h in [4e-2, 2e-2, 1e-2, 5e-3] {
        let (a, b) = maxwell_residual(&field, &tensor, &tensor, |_| CVec3::zeros(), &x, h)?;
        let res: f64 = a.norm().max(b.norm());
        match prev {
            Some(p) => println!("h = {h:.0e}: residual {res:.3e}, observed order {:.3}", (p / res).log2()),
            None => println!("h = {h:.0e}: residual {res:.3e}"),
        }
        prev = Some(res);
    }
    Ok(())
}
