use crate::error::{Error, Result};
use crate::geometry::{Point, Transform};
use crate::materials::TensorField;
use crate::{CVec3, C64};

use super::FieldPair;

/// Central-difference curl with step `h`.
pub fn fd_curl<V>(v: V, x: &Point, h: f64) -> Result<CVec3>
where
    V: Fn(&Point) -> Result<CVec3>,
{
    if !(h > 0.0) {
        return Err(Error::domain("finite-difference step must be positive"));
    }
    // d[j] = ∂V/∂x_j
    let mut d = [CVec3::zeros(); 3];
    for (j, dj) in d.iter_mut().enumerate() {
        let mut e = Point::zeros();
        e[j] = h;
        *dj = (v(&(x + e))? - v(&(x - e))?) / C64::new(2.0 * h, 0.0);
    }
    Ok(CVec3::new(d[1][2] - d[2][1], d[2][0] - d[0][2], d[0][1] - d[1][0]))
}

/// `(curl E − ikμH, curl H + ikεE − j)` with finite-difference curls.
pub fn maxwell_residual<P, J>(
    pair: &P,
    eps: &dyn TensorField,
    mu: &dyn TensorField,
    j: J,
    x: &Point,
    h: f64,
) -> Result<(CVec3, CVec3)>
where
    P: FieldPair + ?Sized,
    J: Fn(&Point) -> CVec3,
{
    let ik = C64::new(0.0, pair.k());
    let (e, hf) = pair.eval(x)?;
    let ce = fd_curl(|p| pair.e(p), x, h)?;
    let ch = fd_curl(|p| pair.h(p), x, h)?;
    let res_e = ce - mu.at(x)? * hf * ik;
    let res_h = ch + eps.at(x)? * e * ik - j(x);
    Ok((res_e, res_h))
}

/// `|E × x̂ + H|`, which decays like `1/|x|²` for outgoing fields.
pub fn silver_muller_residual<P: FieldPair + ?Sized>(pair: &P, x: &Point) -> Result<f64> {
    let r = x.norm();
    if r == 0.0 {
        return Err(Error::domain("outgoing residual needs x != 0"));
    }
    let (e, h) = pair.eval(x)?;
    let xh = (x / r).map(|v| C64::new(v, 0.0));
    Ok((e.cross(&xh) + h).norm())
}

/// Surface push-forward of a tangential field on a sphere centred at the
/// origin: `sign · ∇T φ / |surface Jacobian|` evaluated at `x = T⁻¹(x')`,
/// where `sign = sign(det ∇T)` records whether the outward normal is
/// preserved.
pub fn boundary_trace_pushforward<T, F>(map: &T, phi: F, xp: &Point) -> Result<CVec3>
where
    T: Transform + ?Sized,
    F: Fn(&Point) -> CVec3,
{
    let x = map.apply_inverse(xp)?;
    let r = x.norm();
    if r == 0.0 {
        return Err(Error::domain("trace push-forward at the origin"));
    }
    let nu = x / r;
    let val = phi(&x);
    let normal = nu.map(|v| C64::new(v, 0.0)).dot(&val).norm();
    if normal > 1e-10 * val.norm().max(f64::MIN_POSITIVE) {
        return Err(Error::domain("boundary field is not tangential"));
    }
    let seed = if nu.x.abs() < 0.9 { Point::x() } else { Point::y() };
    let t1 = nu.cross(&seed).normalize();
    let t2 = nu.cross(&t1);
    let jac = map.jacobian_at(&x)?;
    let sdet = (jac * t1).cross(&(jac * t2)).norm();
    let sign = jac.determinant().signum();
    Ok(jac.map(|v| C64::new(v, 0.0)) * val * C64::new(sign / sdet, 0.0))
}
