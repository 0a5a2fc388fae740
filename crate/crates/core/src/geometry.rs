//! Radial Kelvin-type maps and the lens radius arithmetic.
//!
//! A [`RadialMap`] is `x ↦ c + ρ^α (x − c)/|x − c|^α`. It fixes the sphere of
//! radius `ρ` about `c` pointwise, swaps its interior and exterior, and has a
//! negative Jacobian determinant everywhere off the center. The lens uses two
//! of them: the folding map `F` (fixed sphere `r2`, exponent `α`) and the
//! unfolding map `G` (fixed sphere `r3`, exponent `β = α/(α − 1)`).

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Point = Vector3<f64>;
pub type Mat3 = Matrix3<f64>;

/// Tolerance used for the exponent relation `αβ − α − β = 0` and the radius
/// relations of a matched lens.
pub const LENS_RELATION_TOL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadialMap {
    center: Point,
    exponent: f64,
    reference_radius: f64,
}

impl RadialMap {
    /// Map centered at the origin.
    pub fn new(exponent: f64, reference_radius: f64) -> Result<Self> {
        Self::with_center(Point::zeros(), exponent, reference_radius)
    }

    pub fn with_center(center: Point, exponent: f64, reference_radius: f64) -> Result<Self> {
        if !(exponent > 1.0) || !exponent.is_finite() {
            return Err(Error::domain(format!("map exponent must be > 1, got {exponent}")));
        }
        if !(reference_radius > 0.0) || !reference_radius.is_finite() {
            return Err(Error::domain(format!(
                "reference radius must be > 0, got {reference_radius}"
            )));
        }
        Ok(Self {
            center,
            exponent,
            reference_radius,
        })
    }

    pub fn center(&self) -> Point {
        self.center
    }

    pub fn exponent(&self) -> f64 {
        self.exponent
    }

    pub fn reference_radius(&self) -> f64 {
        self.reference_radius
    }

    fn offset(&self, x: &Point) -> Result<(Point, f64)> {
        let d = x - self.center;
        let r = d.norm();
        if r == 0.0 || !r.is_finite() {
            return Err(Error::domain("radial map evaluated at its center"));
        }
        Ok((d, r))
    }

    /// Image radius of a sphere of radius `r` about the center.
    pub fn radial_image(&self, r: f64) -> f64 {
        self.reference_radius.powf(self.exponent) * r.powf(1.0 - self.exponent)
    }

    pub fn eval(&self, x: &Point) -> Result<Point> {
        let (d, r) = self.offset(x)?;
        let scale = (self.reference_radius / r).powf(self.exponent);
        Ok(self.center + d * scale)
    }

    /// Analytic Jacobian `(ρ/|d|)^α (I − α d̂ d̂ᵀ)`.
    pub fn jacobian(&self, x: &Point) -> Result<Mat3> {
        let (d, r) = self.offset(x)?;
        let n = d / r;
        let scale = (self.reference_radius / r).powf(self.exponent);
        Ok((Mat3::identity() - n * n.transpose() * self.exponent) * scale)
    }

    /// Closed form of `det ∇T`, always negative.
    pub fn jacobian_det(&self, x: &Point) -> Result<f64> {
        let (_, r) = self.offset(x)?;
        let scale = (self.reference_radius / r).powf(self.exponent);
        Ok(scale.powi(3) * (1.0 - self.exponent))
    }

    /// The inverse map: same center and fixed sphere, exponent `α/(α − 1)`.
    pub fn inverse(&self) -> RadialMap {
        RadialMap {
            center: self.center,
            exponent: self.exponent / (self.exponent - 1.0),
            reference_radius: self.reference_radius,
        }
    }
}

/// A diffeomorphism with an analytic Jacobian, as consumed by the
/// push-forward operations.
pub trait Transform: Sync {
    fn apply(&self, x: &Point) -> Result<Point>;
    fn apply_inverse(&self, y: &Point) -> Result<Point>;
    fn jacobian_at(&self, x: &Point) -> Result<Mat3>;
}

impl Transform for RadialMap {
    fn apply(&self, x: &Point) -> Result<Point> {
        self.eval(x)
    }

    fn apply_inverse(&self, y: &Point) -> Result<Point> {
        self.inverse().eval(y)
    }

    fn jacobian_at(&self, x: &Point) -> Result<Mat3> {
        self.jacobian(x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityMap;

impl Transform for IdentityMap {
    fn apply(&self, x: &Point) -> Result<Point> {
        Ok(*x)
    }

    fn apply_inverse(&self, y: &Point) -> Result<Point> {
        Ok(*y)
    }

    fn jacobian_at(&self, _x: &Point) -> Result<Mat3> {
        Ok(Mat3::identity())
    }
}

/// `x ↦ s x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dilation(pub f64);

impl Transform for Dilation {
    fn apply(&self, x: &Point) -> Result<Point> {
        Ok(x * self.0)
    }

    fn apply_inverse(&self, y: &Point) -> Result<Point> {
        if self.0 == 0.0 {
            return Err(Error::domain("dilation by zero has no inverse"));
        }
        Ok(y / self.0)
    }

    fn jacobian_at(&self, _x: &Point) -> Result<Mat3> {
        Ok(Mat3::identity() * self.0)
    }
}

/// `second ∘ first`.
#[derive(Debug, Clone, Copy)]
pub struct Composed<A, B> {
    pub first: A,
    pub second: B,
}

impl<A: Transform, B: Transform> Transform for Composed<A, B> {
    fn apply(&self, x: &Point) -> Result<Point> {
        self.second.apply(&self.first.apply(x)?)
    }

    fn apply_inverse(&self, y: &Point) -> Result<Point> {
        self.first.apply_inverse(&self.second.apply_inverse(y)?)
    }

    fn jacobian_at(&self, x: &Point) -> Result<Mat3> {
        let mid = self.first.apply(x)?;
        Ok(self.second.jacobian_at(&mid)? * self.first.jacobian_at(x)?)
    }
}

/// The inverse of a transform.
#[derive(Debug, Clone, Copy)]
pub struct Inverted<T>(pub T);

impl<T: Transform> Transform for Inverted<T> {
    fn apply(&self, x: &Point) -> Result<Point> {
        self.0.apply_inverse(x)
    }

    fn apply_inverse(&self, y: &Point) -> Result<Point> {
        self.0.apply(y)
    }

    fn jacobian_at(&self, x: &Point) -> Result<Mat3> {
        let y = self.0.apply_inverse(x)?;
        self.0
            .jacobian_at(&y)?
            .try_inverse()
            .ok_or_else(|| Error::domain(format!("singular Jacobian at {y:?}")))
    }
}

/// Radii and exponents of the two-layer lens of magnification `m`.
///
/// A matched lens has `r1 = m^{1−1/α} r0`, `r2 = m r0`, `r3 = m^{2−1/α} r0`.
/// [`LensRadii::detuned`] moves `r2` (and with it the folding map) while
/// keeping the nominal `r1` and `r3`; such a lens is still reflecting
/// complementary across `r2` but no longer reproduces the magnified object.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LensRadii {
    pub m: f64,
    pub r0: f64,
    pub r1: f64,
    pub r2: f64,
    pub r3: f64,
    pub alpha: f64,
    pub beta: f64,
}

pub fn lens_radii(m: f64, r0: f64, alpha: f64) -> Result<LensRadii> {
    if !(m > 1.0) || !m.is_finite() {
        return Err(Error::domain(format!("magnification must be > 1, got {m}")));
    }
    if !(r0 > 0.0) || !r0.is_finite() {
        return Err(Error::domain(format!("object radius must be > 0, got {r0}")));
    }
    if !(alpha > 1.0) || !alpha.is_finite() {
        return Err(Error::domain(format!("alpha must be > 1, got {alpha}")));
    }
    let beta = alpha / (alpha - 1.0);
    Ok(LensRadii {
        m,
        r0,
        r1: m.powf(1.0 - 1.0 / alpha) * r0,
        r2: m * r0,
        r3: m.powf(2.0 - 1.0 / alpha) * r0,
        alpha,
        beta,
    })
}

impl LensRadii {
    /// Matched lens with `r2` scaled by `factor` (1 leaves it matched).
    pub fn detuned(m: f64, r0: f64, alpha: f64, factor: f64) -> Result<Self> {
        let mut lens = lens_radii(m, r0, alpha)?;
        if !(factor > 0.0) {
            return Err(Error::domain(format!("detuning factor must be > 0, got {factor}")));
        }
        lens.r2 *= factor;
        if !(lens.r1 < lens.r2) {
            return Err(Error::domain("detuned r2 must stay above r1"));
        }
        Ok(lens)
    }

    /// The folding map `F`, fixing the sphere `r2`.
    pub fn fold(&self) -> RadialMap {
        RadialMap {
            center: Point::zeros(),
            exponent: self.alpha,
            reference_radius: self.r2,
        }
    }

    /// The unfolding map `G`, fixing the sphere `r3`.
    pub fn unfold(&self) -> RadialMap {
        RadialMap {
            center: Point::zeros(),
            exponent: self.beta,
            reference_radius: self.r3,
        }
    }

    /// Radius of `F(∂B_{r1})`, the outer edge of the region complementary
    /// to the lens shell. Equals `r3` for a matched lens.
    pub fn complementary_radius(&self) -> f64 {
        self.fold().radial_image(self.r1)
    }

    /// Largest deviation from the matched-lens relations (exponent relation
    /// absolute, radius relations relative).
    pub fn relation_defect(&self) -> f64 {
        let exp = (self.alpha * self.beta - self.alpha - self.beta).abs();
        let rel = |got: f64, want: f64| ((got - want) / want).abs();
        let a = self.alpha;
        exp.max(rel(self.r1, self.m.powf(1.0 - 1.0 / a) * self.r0))
            .max(rel(self.r2, self.m * self.r0))
            .max(rel(self.r3, self.m.powf(2.0 - 1.0 / a) * self.r0))
    }

    pub fn is_matched(&self) -> bool {
        self.r0 < self.r1
            && self.r1 < self.r2
            && self.r2 < self.r3
            && self.relation_defect() <= 4.0 * LENS_RELATION_TOL
    }
}

/// Dilation factor of `G∘F` on `B_{r0}`.
///
/// The composition of two radial maps with `(α − 1)(β − 1) = 1` is a pure
/// dilation; the factor is measured at sample points and checked against that.
/// For a matched lens it equals `m`.
pub fn compose_object_map(f: &RadialMap, g: &RadialMap, lens: &LensRadii) -> Result<f64> {
    let mut rng = crate::sampling::rng(0x6f62_6a65);
    let mut factor: Option<f64> = None;
    for _ in 0..50 {
        let x = crate::sampling::point_in_ball(&mut rng, lens.r0);
        let y = g.eval(&f.eval(&x)?)?;
        let d = y.norm() / x.norm();
        let defect = (y - x * d).norm() / y.norm();
        if defect > 1e-10 {
            return Err(Error::Inconsistent(format!(
                "G∘F is not a dilation at {x:?}: relative defect {defect:e}"
            )));
        }
        match factor {
            None => factor = Some(d),
            Some(d0) if ((d - d0) / d0).abs() > 1e-10 => {
                return Err(Error::Inconsistent(format!(
                    "G∘F dilation varies across B_r0: {d0} vs {d}"
                )))
            }
            _ => {}
        }
    }
    Ok(factor.expect("at least one sample"))
}
