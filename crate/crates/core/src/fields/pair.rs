use crate::error::{Error, Result};
use crate::geometry::{Point, Transform};
use crate::{CVec3, C64};

/// A time-harmonic `(E, H)` pair at wavenumber `k`.
pub trait FieldPair: Sync {
    fn k(&self) -> f64;
    fn eval(&self, x: &Point) -> Result<(CVec3, CVec3)>;

    fn e(&self, x: &Point) -> Result<CVec3> {
        Ok(self.eval(x)?.0)
    }

    fn h(&self, x: &Point) -> Result<CVec3> {
        Ok(self.eval(x)?.1)
    }
}

impl<P: FieldPair + ?Sized> FieldPair for &P {
    fn k(&self) -> f64 {
        (**self).k()
    }

    fn eval(&self, x: &Point) -> Result<(CVec3, CVec3)> {
        (**self).eval(x)
    }
}

impl<P: FieldPair + ?Sized> FieldPair for Box<P> {
    fn k(&self) -> f64 {
        (**self).k()
    }

    fn eval(&self, x: &Point) -> Result<(CVec3, CVec3)> {
        (**self).eval(x)
    }
}

/// A pair given by a closure.
pub struct FnPair<F> {
    pub k: f64,
    pub f: F,
}

impl<F> FieldPair for FnPair<F>
where
    F: Fn(&Point) -> Result<(CVec3, CVec3)> + Sync,
{
    fn k(&self) -> f64 {
        self.k
    }

    fn eval(&self, x: &Point) -> Result<(CVec3, CVec3)> {
        (self.f)(x)
    }
}

fn inverse_transpose<T: Transform + ?Sized>(map: &T, x: &Point) -> Result<nalgebra::Matrix3<C64>> {
    let j = map.jacobian_at(x)?;
    let inv = j
        .try_inverse()
        .ok_or_else(|| Error::domain(format!("singular Jacobian at {x:?}")))?;
    Ok(inv.transpose().map(|v| C64::new(v, 0.0)))
}

/// `∇T(x)^{-T} V(x)` at `x = T⁻¹(x')`.
pub fn transform_field<T, V>(map: &T, v: V, xp: &Point) -> Result<CVec3>
where
    T: Transform + ?Sized,
    V: Fn(&Point) -> Result<CVec3>,
{
    let x = map.apply_inverse(xp)?;
    Ok(inverse_transpose(map, &x)? * v(&x)?)
}

/// `(T*E, T*H)`: both fields transformed covariantly under `map`.
pub struct TransformedPair<P, T> {
    pub inner: P,
    pub map: T,
}

impl<P: FieldPair, T: Transform> FieldPair for TransformedPair<P, T> {
    fn k(&self) -> f64 {
        self.inner.k()
    }

    fn eval(&self, xp: &Point) -> Result<(CVec3, CVec3)> {
        let x = self.map.apply_inverse(xp)?;
        let m = inverse_transpose(&self.map, &x)?;
        let (e, h) = self.inner.eval(&x)?;
        Ok((m * e, m * h))
    }
}
