use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::special::SphereQuadrature;
use crate::{CMat3, CVec3, C64};

use super::FieldPair;

/// Exterior Stratton-Chu representation from the traces of `pair` on the
/// sphere of radius `rho`:
///
/// `E = −curl S[E×ν] + (ik)⁻¹ curl curl S[H×ν]`,
/// `H = −curl S[H×ν] − (ik)⁻¹ curl curl S[E×ν]`,
///
/// with `S[a](x) = ∫ a(y) G(x−y) ds(y)` and `ν` the outward normal.
pub fn stratton_chu_eval<P: FieldPair + ?Sized>(
    pair: &P,
    rho: f64,
    quad: &SphereQuadrature,
    x: &Point,
) -> Result<(CVec3, CVec3)> {
    if x.norm() <= rho {
        return Err(Error::domain("Stratton-Chu evaluation point must lie outside the sphere"));
    }
    let k = pair.k();
    let ik = C64::new(0.0, k);
    let (mut curl_e, mut curl_h) = (CVec3::zeros(), CVec3::zeros());
    let (mut cc_e, mut cc_h) = (CVec3::zeros(), CVec3::zeros());
    for node in quad.nodes() {
        let nu = node.direction();
        let y = nu * rho;
        let ds = node.weight * rho * rho;
        let (e, h) = pair.eval(&y)?;
        let nuc = nu.map(|v| C64::new(v, 0.0));
        let a_e = e.cross(&nuc) * C64::new(ds, 0.0);
        let a_h = h.cross(&nuc) * C64::new(ds, 0.0);

        let d = x - y;
        let r = d.norm();
        let g = (ik * r).exp() / (4.0 * PI * r);
        let dg = (ik - 1.0 / r) * g;
        let ddg = (ik - 1.0 / r) * (ik - 1.0 / r) * g + g / (r * r);
        let rh = (d / r).map(|v| C64::new(v, 0.0));
        let grad = rh * dg;
        let outer = rh * rh.transpose();
        let hess: CMat3 = outer * ddg + (CMat3::identity() - outer) * (dg / r);

        curl_e += grad.cross(&a_e);
        curl_h += grad.cross(&a_h);
        cc_e += hess * a_e + a_e * (g * k * k);
        cc_h += hess * a_h + a_h * (g * k * k);
    }
    let e = -curl_e + cc_h / ik;
    let h = -curl_h - cc_e / ik;
    Ok((e, h))
}
