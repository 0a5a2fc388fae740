use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::{CMat3, CVec3, C64};

use super::FieldPair;

fn cvec(v: &Point) -> CVec3 {
    v.map(|a| C64::new(a, 0.0))
}

/// `E = p e^{ik d·x}`, `H = d × p e^{ik d·x}`.
pub fn plane_wave(k: f64, direction: &Point, polarization: &CVec3, x: &Point) -> Result<(CVec3, CVec3)> {
    let pw = PlaneWave::new(k, *direction, *polarization)?;
    pw.eval(x)
}

/// Free-space field of a point current `moment · δ(x − position)`.
pub fn dipole_field(k: f64, position: &Point, moment: &CVec3, x: &Point) -> Result<(CVec3, CVec3)> {
    Dipole {
        k,
        position: *position,
        moment: *moment,
    }
    .eval(x)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneWave {
    k: f64,
    direction: Point,
    polarization: CVec3,
}

impl PlaneWave {
    pub fn new(k: f64, direction: Point, polarization: CVec3) -> Result<Self> {
        if !(k > 0.0) {
            return Err(Error::domain("wavenumber must be positive"));
        }
        if (direction.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::domain("plane-wave direction must be a unit vector"));
        }
        let dot = cvec(&direction).dot(&polarization);
        if dot.norm() > 1e-12 * polarization.norm().max(1.0) {
            return Err(Error::domain("plane-wave polarization must be transverse"));
        }
        Ok(PlaneWave {
            k,
            direction,
            polarization,
        })
    }

    pub fn direction(&self) -> Point {
        self.direction
    }

    pub fn polarization(&self) -> CVec3 {
        self.polarization
    }
}

impl FieldPair for PlaneWave {
    fn k(&self) -> f64 {
        self.k
    }

    fn eval(&self, x: &Point) -> Result<(CVec3, CVec3)> {
        let phase = C64::from_polar(1.0, self.k * self.direction.dot(x));
        let e = self.polarization * phase;
        let h = cvec(&self.direction).cross(&self.polarization) * phase;
        Ok((e, h))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dipole {
    pub k: f64,
    pub position: Point,
    pub moment: CVec3,
}

impl FieldPair for Dipole {
    fn k(&self) -> f64 {
        self.k
    }

    fn eval(&self, x: &Point) -> Result<(CVec3, CVec3)> {
        let d = x - self.position;
        let r = d.norm();
        if r == 0.0 {
            return Err(Error::domain("dipole field evaluated at the source point"));
        }
        let k = self.k;
        let ik = C64::new(0.0, k);
        let g = (ik * r).exp() / (4.0 * PI * r);
        let dg = (ik - 1.0 / r) * g;
        let ddg = (ik - 1.0 / r) * (ik - 1.0 / r) * g + g / (r * r);
        let e_hat = d / r;
        let outer = e_hat * e_hat.transpose();
        let hess: CMat3 =
            outer.map(|v| C64::new(v, 0.0)) * ddg + (CMat3::identity() - outer.map(|v| C64::new(v, 0.0))) * (dg / r);
        let j = self.moment;
        let e = (j * (g * k * k) + hess * j) * (C64::i() / k);
        let h = (cvec(&e_hat) * dg).cross(&j);
        Ok((e, h))
    }
}

/// Incident-field description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SourceSpec {
    ElectricDipole {
        position: [f64; 3],
        /// Complex moment as `[re, im]` per component.
        moment: [[f64; 2]; 3],
    },
    PlaneWave {
        direction: [f64; 3],
        polarization: [[f64; 2]; 3],
    },
}

fn cv(a: &[[f64; 2]; 3]) -> CVec3 {
    CVec3::new(
        C64::new(a[0][0], a[0][1]),
        C64::new(a[1][0], a[1][1]),
        C64::new(a[2][0], a[2][1]),
    )
}

impl SourceSpec {
    /// `x`-polarized plane wave travelling along `+z`.
    pub fn default_plane_wave() -> Self {
        SourceSpec::PlaneWave {
            direction: [0.0, 0.0, 1.0],
            polarization: [[1.0, 0.0], [0.0, 0.0], [0.0, 0.0]],
        }
    }

    pub fn dipole(position: Point, moment: CVec3) -> Self {
        SourceSpec::ElectricDipole {
            position: [position.x, position.y, position.z],
            moment: [
                [moment.x.re, moment.x.im],
                [moment.y.re, moment.y.im],
                [moment.z.re, moment.z.im],
            ],
        }
    }

    /// Distance of the source support from the origin; infinite for plane
    /// waves.
    pub fn support_radius(&self) -> f64 {
        match self {
            SourceSpec::ElectricDipole { position, .. } => Point::from(*position).norm(),
            SourceSpec::PlaneWave { .. } => f64::INFINITY,
        }
    }

    pub fn field(&self, k: f64) -> Result<Box<dyn FieldPair>> {
        match self {
            SourceSpec::ElectricDipole { position, moment } => {
                if !(k > 0.0) {
                    return Err(Error::domain("wavenumber must be positive"));
                }
                Ok(Box::new(Dipole {
                    k,
                    position: Point::from(*position),
                    moment: cv(moment),
                }))
            }
            SourceSpec::PlaneWave {
                direction,
                polarization,
            } => Ok(Box::new(PlaneWave::new(k, Point::from(*direction), cv(polarization))?)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_longitudinal_polarization() {
        let p = CVec3::new(C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(1.0, 0.0));
        assert!(plane_wave(1.0, &Point::z(), &p, &Point::zeros()).is_err());
        assert!(PlaneWave::new(1.0, Point::new(0.0, 0.0, 2.0), p).is_err());
    }

    #[test]
    fn dipole_near_field_is_static() {
        // For kR ≪ 1 the field approaches (i/k)(3R̂R̂ − I)j/(4πR³).
        let k = 1e-4;
        let j = CVec3::new(C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(1.0, 0.0));
        let dip = Dipole {
            k,
            position: Point::zeros(),
            moment: j,
        };
        let x = Point::new(0.3, 0.2, 0.5);
        let r = x.norm();
        let e_hat = (x / r).map(|v| C64::new(v, 0.0));
        let stat = (e_hat * (e_hat.dot(&j) * 3.0) - j) * (C64::i() / (k * 4.0 * PI * r.powi(3)));
        let (e, _) = dip.eval(&x).unwrap();
        assert!((e - stat).norm() < 1e-6 * stat.norm());
        assert!(dip.eval(&Point::zeros()).is_err());
    }

    #[test]
    fn source_spec_round_trip() {
        let s = SourceSpec::dipole(Point::new(0.0, 0.0, 3.0), CVec3::new(C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.5)));
        let text = serde_json::to_string(&s).unwrap();
        assert!(text.contains("electric_dipole"));
        let back: SourceSpec = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
        assert_eq!(s.support_radius(), 3.0);
    }
}
