//! Shell tensor from the push-forward of vacuum, and the complementarity audit.
use superlens::geometry::{lens_radii, LensRadii, Point};
use superlens::materials::{
    assemble_hat_medium, assemble_lens_medium, check_reflecting_complementary, lens_tensor_closed_form,
    push_forward_tensor, CheckOptions, ObjectMedium, RadialTensor,
};

fn main() -> superlens::Result<()> {
    let lens = lens_radii(2.0, 1.0, 3.0)?;
    let finv = lens.fold().inverse();
    for t in [0.0, 0.5, 1.0] {
        let r = lens.r1 + t * (lens.r2 - lens.r1);
        let x = Point::new(0.0, 0.6, 0.8) * r;
        let a = push_forward_tensor(&finv, &RadialTensor::identity(), &x)?;
        let (rad, tan) = lens_tensor_closed_form(lens.alpha, lens.r2, r)?;
        let radial = (a * x.map(Into::into)).dot(&x.map(Into::into)) / (r * r);
        println!("r = {r:.4}: radial {:.6} (closed form {rad:.6}), tangential {tan:.6}", radial.re);
    }

    let object = ObjectMedium::isotropic(4.0, 4.0);
    let hat = assemble_hat_medium(&lens, &object)?;
    let medium = assemble_lens_medium(&lens, 0.0, &object)?;
    let opts = CheckOptions::default();
    let rep = check_reflecting_complementary(&medium, &lens.fold(), &lens.unfold(), &hat, &opts);
    println!("matched lens: pass = {}, max violation = {:.2e}", rep.pass, rep.max_violation);

    let off = LensRadii::detuned(2.0, 1.0, 3.0, 1.05)?;
    let medium = assemble_lens_medium(&off, 0.0, &object)?;
    let rep = check_reflecting_complementary(&medium, &off.fold(), &off.unfold(), &hat, &opts);
    println!(
        "r2 detuned by 5%: pass = {}, failed condition = {:?}, violations = {:?}",
        rep.pass, rep.failed_condition, rep.violations
    );
    Ok(())
}
