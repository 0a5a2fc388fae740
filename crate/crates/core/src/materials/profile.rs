use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::geometry::Point;
use crate::{CMat3, C64};

/// `coeff · r^power`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerTerm {
    pub coeff: C64,
    pub power: f64,
}

/// A finite sum of power laws in the radius.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct Profile {
    terms: Vec<PowerTerm>,
}

impl Profile {
    pub fn new(terms: Vec<PowerTerm>) -> Self {
        let mut p = Profile { terms: Vec::new() };
        for t in terms {
            p.push(t);
        }
        p
    }

    pub fn constant(c: impl Into<C64>) -> Self {
        Profile::power_law(c, 0.0)
    }

    pub fn power_law(coeff: impl Into<C64>, power: f64) -> Self {
        Profile::new(vec![PowerTerm {
            coeff: coeff.into(),
            power,
        }])
    }

    fn push(&mut self, t: PowerTerm) {
        if let Some(e) = self.terms.iter_mut().find(|e| e.power == t.power) {
            e.coeff += t.coeff;
        } else {
            self.terms.push(t);
        }
    }

    pub fn terms(&self) -> &[PowerTerm] {
        &self.terms
    }

    pub fn eval(&self, r: f64) -> C64 {
        self.terms
            .iter()
            .map(|t| if t.power == 0.0 { t.coeff } else { t.coeff * r.powf(t.power) })
            .sum()
    }

    pub fn derivative(&self, r: f64) -> C64 {
        self.terms
            .iter()
            .filter(|t| t.power != 0.0)
            .map(|t| t.coeff * t.power * r.powf(t.power - 1.0))
            .sum()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|t| t.power == 0.0 || t.coeff == C64::new(0.0, 0.0))
    }

    pub fn scaled(&self, s: impl Into<C64>) -> Self {
        let s = s.into();
        Profile::new(
            self.terms
                .iter()
                .map(|t| PowerTerm {
                    coeff: t.coeff * s,
                    power: t.power,
                })
                .collect(),
        )
    }

    /// `r ↦ self(r / m)`.
    pub fn dilated(&self, m: f64) -> Self {
        Profile::new(
            self.terms
                .iter()
                .map(|t| PowerTerm {
                    coeff: t.coeff * m.powf(-t.power),
                    power: t.power,
                })
                .collect(),
        )
    }

    pub fn plus(&self, c: impl Into<C64>) -> Self {
        let mut p = self.clone();
        p.push(PowerTerm {
            coeff: c.into(),
            power: 0.0,
        });
        p
    }
}

/// `radial · e_r⊗e_r + tangential · (e_θ⊗e_θ + e_φ⊗e_φ)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialTensor {
    pub radial: Profile,
    pub tangential: Profile,
}

impl RadialTensor {
    pub fn new(radial: Profile, tangential: Profile) -> Self {
        RadialTensor { radial, tangential }
    }

    pub fn isotropic(c: impl Into<C64>) -> Self {
        let p = Profile::constant(c);
        RadialTensor::new(p.clone(), p)
    }

    pub fn identity() -> Self {
        RadialTensor::isotropic(1.0)
    }

    pub fn components(&self, r: f64) -> (C64, C64) {
        (self.radial.eval(r), self.tangential.eval(r))
    }

    pub fn scaled(&self, s: impl Into<C64>) -> Self {
        let s = s.into();
        RadialTensor::new(self.radial.scaled(s), self.tangential.scaled(s))
    }

    pub fn dilated(&self, m: f64) -> Self {
        RadialTensor::new(self.radial.dilated(m), self.tangential.dilated(m))
    }

    pub fn plus_isotropic(&self, c: impl Into<C64>) -> Self {
        let c = c.into();
        RadialTensor::new(self.radial.plus(c), self.tangential.plus(c))
    }

    /// Cartesian matrix at `x`. At the origin the radial direction is taken
    /// as `e_z`.
    pub fn matrix_at(&self, x: &Point) -> CMat3 {
        let r = x.norm();
        let (a, b) = self.components(r);
        let e = if r > 0.0 { x / r } else { Point::z() };
        let mut m = CMat3::zeros();
        for i in 0..3 {
            for j in 0..3 {
                let p = e[i] * e[j];
                let id = if i == j { 1.0 } else { 0.0 };
                m[(i, j)] = a * p + b * (id - p);
            }
        }
        m
    }
}

/// A point-wise 3×3 complex tensor.
pub trait TensorField: Sync {
    fn at(&self, x: &Point) -> Result<CMat3>;
}

impl TensorField for RadialTensor {
    fn at(&self, x: &Point) -> Result<CMat3> {
        Ok(self.matrix_at(x))
    }
}

impl TensorField for CMat3 {
    fn at(&self, _x: &Point) -> Result<CMat3> {
        Ok(*self)
    }
}

pub struct FnTensor<F>(pub F);

impl<F> TensorField for FnTensor<F>
where
    F: Fn(&Point) -> CMat3 + Sync,
{
    fn at(&self, x: &Point) -> Result<CMat3> {
        Ok((self.0)(x))
    }
}
