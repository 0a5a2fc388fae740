//! Radiating fields recovered outside a sphere from their tangential traces.
use superlens::fields::{stratton_chu_eval, Dipole, FieldPair, MultipoleField, MultipoleKind, Polarization};
use superlens::geometry::Point;
use superlens::special::SphereQuadrature;
use superlens::{CVec3, C64};

fn main() -> superlens::Result<()> {
    let dipole = Dipole {
        k: 2.0,
        position: Point::new(0.1, 0.2, -0.3),
        moment: CVec3::new(C64::new(0.0, 1.0), C64::new(1.0, 0.0), C64::new(0.0, 0.0)),
    };
    let multipole = MultipoleField {
        k: 2.0,
        n: 3,
        m: 2,
        pol: Polarization::TE,
        kind: MultipoleKind::Outgoing,
    };
    let x = Point::new(1.2, -0.9, 1.0);
    let sources: [(&str, &dyn FieldPair); 2] = [("dipole", &dipole), ("TE n=3 m=2", &multipole)];
    for (name, field) in sources {
        let (e0, _) = field.eval(&x)?;
        for n in [8, 16, 32] {
            let quad = SphereQuadrature::new(n, 2 * n);
            let (e, _) = stratton_chu_eval(field, 1.0, &quad, &x)?;
            println!("{name:>12}, {n:>2}x{:<2} nodes: relative error {:.2e}", 2 * n, (e - e0).norm() / e0.norm());
        }
    }
    Ok(())
}
