//! Lens radii, the folding maps and what they do to spheres.
use superlens::geometry::{compose_object_map, lens_radii, LensRadii, Point};

fn main() -> superlens::Result<()> {
    let lens = lens_radii(2.0, 1.0, 2.0)?;
    println!("r0 = {}, r1 = {}, r2 = {}, r3 = {}", lens.r0, lens.r1, lens.r2, lens.r3);
    println!("alpha = {}, beta = {}", lens.alpha, lens.beta);

    let (f, g) = (lens.fold(), lens.unfold());
    for r in [lens.r1, 0.5 * (lens.r1 + lens.r2), lens.r2] {
        println!("F maps the sphere |x| = {r:.4} to |x| = {:.4}", f.radial_image(r));
    }
    let x = Point::new(0.3, -0.2, 0.5);
    let y = g.eval(&f.eval(&x)?)?;
    println!("G(F(x)) / x = {:.12}", y.norm() / x.norm());
    println!("measured dilation factor = {:.12}", compose_object_map(&f, &g, &lens)?);

    let off = LensRadii::detuned(2.0, 1.0, 2.0, 1.1)?;
    println!(
        "detuned r2 = {:.3}: F(r1) = {:.4} instead of r3 = {:.4}, matched = {}",
        off.r2,
        off.complementary_radius(),
        off.r3,
        off.is_matched()
    );
    Ok(())
}
