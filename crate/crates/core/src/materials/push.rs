use crate::error::{Error, Result};
use crate::geometry::{Mat3, Point, Transform};
use crate::{CMat3, CVec3, C64};

use super::TensorField;

fn complexify(m: &Mat3) -> CMat3 {
    m.map(|v| C64::new(v, 0.0))
}

fn jacobian_with_det<T: Transform + ?Sized>(map: &T, x: &Point) -> Result<(Mat3, f64)> {
    let j = map.jacobian_at(x)?;
    let det = j.determinant();
    if det == 0.0 || !det.is_finite() {
        return Err(Error::domain(format!("degenerate Jacobian at {x:?}")));
    }
    Ok((j, det))
}

/// `T_*a(x') = ∇T a ∇Tᵀ / det ∇T` at `x = T⁻¹(x')`, with the signed
/// determinant. Symmetric input gives an exactly symmetric result.
pub fn push_forward_tensor<T: Transform + ?Sized>(map: &T, a: &dyn TensorField, xp: &Point) -> Result<CMat3> {
    let x = map.apply_inverse(xp)?;
    let (j, det) = jacobian_with_det(map, &x)?;
    let av = a.at(&x)?;
    let jc = complexify(&j);
    let mut out = jc * av * jc.transpose() / C64::new(det, 0.0);
    if av == av.transpose() {
        for i in 0..3 {
            for k in 0..i {
                out[(i, k)] = out[(k, i)];
            }
        }
    }
    Ok(out)
}

/// `T_*j(x') = ∇T j / det ∇T` at `x = T⁻¹(x')`.
pub fn push_forward_vector<T, F>(map: &T, j: F, xp: &Point) -> Result<CVec3>
where
    T: Transform + ?Sized,
    F: Fn(&Point) -> CVec3,
{
    let x = map.apply_inverse(xp)?;
    let (jac, det) = jacobian_with_det(map, &x)?;
    Ok(complexify(&jac) * j(&x) / C64::new(det, 0.0))
}

/// A tensor field pushed forward under a map, itself a tensor field.
pub struct Pushed<'a, T: ?Sized> {
    pub map: &'a T,
    pub inner: &'a dyn TensorField,
}

impl<T: Transform + ?Sized> TensorField for Pushed<'_, T> {
    fn at(&self, x: &Point) -> Result<CMat3> {
        push_forward_tensor(self.map, self.inner, x)
    }
}

/// Spherical-frame components `(radial, tangential)` of `F⁻¹_* I` at radius
/// `r`, where `F(x) = r₂^α x/|x|^α`.
pub fn lens_tensor_closed_form(alpha: f64, r2: f64, r: f64) -> Result<(f64, f64)> {
    if alpha <= 1.0 || r2 <= 0.0 {
        return Err(Error::domain(format!("need alpha > 1 and r2 > 0 (alpha = {alpha}, r2 = {r2})")));
    }
    if !(r > 0.0 && r <= r2 * (1.0 + 1e-12)) {
        return Err(Error::domain(format!("r = {r} outside the lens shell (0, {r2}]")));
    }
    let pref = -(r2 / r).powf(alpha);
    Ok((pref / (alpha - 1.0), pref * (alpha - 1.0)))
}
