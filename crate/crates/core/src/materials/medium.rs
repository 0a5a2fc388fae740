use nalgebra::SymmetricEigen;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{LensRadii, Point};
use crate::{CMat3, C64};

use super::{lens_tensor_closed_form, Profile, RadialTensor, TensorField};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Material {
    Eps,
    Mu,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Shell {
    /// Outer radius; the last shell extends to infinity.
    pub outer_radius: f64,
    pub eps: RadialTensor,
    pub mu: RadialTensor,
}

/// The object's `(ε_O, μ_O)` on `B_{r0}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObjectMedium {
    pub eps: RadialTensor,
    pub mu: RadialTensor,
}

impl ObjectMedium {
    pub fn isotropic(eps: impl Into<C64>, mu: impl Into<C64>) -> Self {
        ObjectMedium {
            eps: RadialTensor::isotropic(eps),
            mu: RadialTensor::isotropic(mu),
        }
    }
}

/// Concentric shells around the origin, vacuum outside the last finite radius.
/// Loss `+iδI` is added to both tensors of the designated shell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayeredMedium {
    shells: Vec<Shell>,
    delta: f64,
    lossy_shell: Option<usize>,
}

impl LayeredMedium {
    /// `shells` are the finite layers in increasing radius; the vacuum
    /// exterior is appended.
    pub fn new(shells: Vec<Shell>, delta: f64, lossy_shell: Option<usize>) -> Result<Self> {
        if !(delta >= 0.0 && delta.is_finite()) {
            return Err(Error::domain(format!("delta must be finite and >= 0, got {delta}")));
        }
        let mut prev = 0.0;
        for s in &shells {
            if !(s.outer_radius > prev && s.outer_radius.is_finite()) {
                return Err(Error::domain("shell radii must be finite and strictly increasing"));
            }
            prev = s.outer_radius;
        }
        if let Some(i) = lossy_shell {
            if i >= shells.len() {
                return Err(Error::domain(format!("lossy shell {i} out of range")));
            }
        }
        let mut shells = shells;
        shells.push(Shell {
            outer_radius: f64::INFINITY,
            eps: RadialTensor::identity(),
            mu: RadialTensor::identity(),
        });
        Ok(LayeredMedium {
            shells,
            delta,
            lossy_shell,
        })
    }

    pub fn shells(&self) -> &[Shell] {
        &self.shells
    }

    pub fn len(&self) -> usize {
        self.shells.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn lossy_shell(&self) -> Option<usize> {
        self.lossy_shell
    }

    pub fn with_delta(&self, delta: f64) -> Result<Self> {
        let mut m = self.clone();
        if !(delta >= 0.0 && delta.is_finite()) {
            return Err(Error::domain(format!("delta must be finite and >= 0, got {delta}")));
        }
        m.delta = delta;
        Ok(m)
    }

    /// Finite interface radii in increasing order.
    pub fn boundaries(&self) -> Vec<f64> {
        self.shells[..self.shells.len() - 1].iter().map(|s| s.outer_radius).collect()
    }

    /// Radius beyond which the medium is vacuum.
    pub fn outer_radius(&self) -> f64 {
        self.boundaries().last().copied().unwrap_or(0.0)
    }

    pub fn inner_radius(&self, i: usize) -> f64 {
        if i == 0 {
            0.0
        } else {
            self.shells[i - 1].outer_radius
        }
    }

    pub fn shell_index(&self, r: f64) -> usize {
        self.shells.iter().position(|s| r < s.outer_radius).unwrap_or(self.shells.len() - 1)
    }

    /// Tensor of shell `i` including loss.
    pub fn tensor(&self, which: Material, i: usize) -> RadialTensor {
        let s = &self.shells[i];
        let base = match which {
            Material::Eps => &s.eps,
            Material::Mu => &s.mu,
        };
        if Some(i) == self.lossy_shell && self.delta > 0.0 {
            base.plus_isotropic(C64::new(0.0, self.delta))
        } else {
            base.clone()
        }
    }

    pub fn components(&self, which: Material, r: f64) -> (C64, C64) {
        self.tensor(which, self.shell_index(r)).components(r)
    }

    pub fn tensor_at(&self, which: Material, x: &Point) -> CMat3 {
        self.tensor(which, self.shell_index(x.norm())).matrix_at(x)
    }

    pub fn field(&self, which: Material) -> MediumTensor<'_> {
        MediumTensor { medium: self, which }
    }

    /// A shell with real parts of a negative sign somewhere in it, sampled on
    /// a radial grid.
    pub fn is_sign_changing(&self, i: usize) -> bool {
        let (a, b) = (self.inner_radius(i), self.shells[i].outer_radius);
        if !b.is_finite() {
            return false;
        }
        let s = &self.shells[i];
        (1..16).any(|k| {
            let r = a + (b - a) * k as f64 / 16.0;
            let (er, et) = s.eps.components(r);
            let (mr, mt) = s.mu.components(r);
            [er, et, mr, mt].iter().any(|c| c.re < 0.0)
        })
    }
}

pub struct MediumTensor<'a> {
    medium: &'a LayeredMedium,
    which: Material,
}

impl TensorField for MediumTensor<'_> {
    fn at(&self, x: &Point) -> Result<CMat3> {
        Ok(self.medium.tensor_at(self.which, x))
    }
}

fn ensure_object_elliptic(object: &ObjectMedium, r0: f64) -> Result<()> {
    const LAMBDA: f64 = 1e8;
    let samples: Vec<Point> = (1..=64).map(|i| Point::new(0.0, 0.0, r0 * i as f64 / 64.0)).collect();
    for (name, t) in [("eps", &object.eps), ("mu", &object.mu)] {
        if !check_ellipticity(t, &samples, LAMBDA) {
            return Err(Error::Ellipticity(format!("object {name} is not uniformly elliptic on B_r0")));
        }
        if samples.iter().any(|x| {
            let (a, b) = t.components(x.norm());
            a.im < 0.0 || b.im < 0.0
        }) {
            return Err(Error::Ellipticity(format!("object {name} has negative imaginary part")));
        }
    }
    Ok(())
}

/// Object in `B_{r0}`, `(mI, mI)` up to `r1`, the folded lens tensor plus
/// `iδI` up to `r2`, vacuum outside.
pub fn assemble_lens_medium(lens: &LensRadii, delta: f64, object: &ObjectMedium) -> Result<LayeredMedium> {
    ensure_object_elliptic(object, lens.r0)?;
    let (rad, tan) = lens_tensor_closed_form(lens.alpha, lens.r2, lens.r2)?;
    // The closed form is a single power law in r.
    let shell = RadialTensor::new(
        Profile::power_law(rad * lens.r2.powf(lens.alpha), -lens.alpha),
        Profile::power_law(tan * lens.r2.powf(lens.alpha), -lens.alpha),
    );
    let m = RadialTensor::isotropic(lens.m);
    LayeredMedium::new(
        vec![
            Shell {
                outer_radius: lens.r0,
                eps: object.eps.clone(),
                mu: object.mu.clone(),
            },
            Shell {
                outer_radius: lens.r1,
                eps: m.clone(),
                mu: m,
            },
            Shell {
                outer_radius: lens.r2,
                eps: shell.clone(),
                mu: shell,
            },
        ],
        delta,
        Some(2),
    )
}

/// `(m⁻¹ε_O(x/m), m⁻¹μ_O(x/m))` in `B_{m r0}`, vacuum outside.
pub fn assemble_hat_medium(lens: &LensRadii, object: &ObjectMedium) -> Result<LayeredMedium> {
    ensure_object_elliptic(object, lens.r0)?;
    let m = lens.m;
    LayeredMedium::new(
        vec![Shell {
            outer_radius: m * lens.r0,
            eps: object.eps.scaled(1.0 / m).dilated(m),
            mu: object.mu.scaled(1.0 / m).dilated(m),
        }],
        0.0,
        None,
    )
}

/// True iff every eigenvalue of the real part lies in `[1/Λ, Λ]` at every
/// sample.
pub fn check_ellipticity(t: &dyn TensorField, samples: &[Point], lambda: f64) -> bool {
    if lambda < 1.0 {
        return false;
    }
    let (lo, hi) = (1.0 / lambda, lambda);
    let tol = 1e-12 * lambda;
    samples.iter().all(|x| match t.at(x) {
        Ok(m) => {
            let re = m.map(|v| v.re);
            let sym = (re + re.transpose()) * 0.5;
            SymmetricEigen::new(sym)
                .eigenvalues
                .iter()
                .all(|&e| e.is_finite() && e >= lo - tol && e <= hi + tol)
        }
        Err(_) => false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::lens_radii;
    use crate::sampling;

    #[test]
    fn four_shell_layout() {
        let lens = lens_radii(2.0, 1.0, 2.0).unwrap();
        let med = assemble_lens_medium(&lens, 0.0, &ObjectMedium::isotropic(4.0, 4.0)).unwrap();
        assert_eq!(med.len(), 4);
        assert_eq!(med.boundaries(), vec![lens.r0, lens.r1, lens.r2]);
        assert_eq!(med.components(Material::Eps, 2.5), (C64::new(1.0, 0.0), C64::new(1.0, 0.0)));
    }

    #[test]
    fn magnifying_object_is_continuous() {
        let lens = lens_radii(2.0, 1.0, 2.0).unwrap();
        let med = assemble_lens_medium(&lens, 0.0, &ObjectMedium::isotropic(2.0, 2.0)).unwrap();
        let a = med.components(Material::Eps, lens.r0 * (1.0 - 1e-12));
        let b = med.components(Material::Eps, lens.r0 * (1.0 + 1e-12));
        assert_eq!(a, b);
    }

    #[test]
    fn slab_lens_shell() {
        let lens = lens_radii(2.0, 1.0, 2.0).unwrap();
        let med = assemble_lens_medium(&lens, 0.0, &ObjectMedium::isotropic(4.0, 4.0)).unwrap();
        for &r in &[lens.r1 * 1.01, 1.7, lens.r2 * 0.99] {
            let expected = C64::new(-(lens.r2 / r).powi(2), 0.0);
            for w in [Material::Eps, Material::Mu] {
                let (a, b) = med.components(w, r);
                assert!((a - expected).norm() < 1e-13 && (b - expected).norm() < 1e-13);
            }
        }
        assert!(med.is_sign_changing(2));
        assert!(!med.is_sign_changing(1));
    }

    #[test]
    fn loss_only_in_lens_shell() {
        let lens = lens_radii(2.0, 1.0, 2.0).unwrap();
        let med = assemble_lens_medium(&lens, 0.01, &ObjectMedium::isotropic(4.0, 4.0)).unwrap();
        let (a, b) = med.components(Material::Eps, 1.6);
        assert_eq!((a.im, b.im), (0.01, 0.01));
        let mut rng = sampling::rng(1);
        let x = sampling::point_in_shell(&mut rng, lens.r1, lens.r2);
        let im = med.tensor_at(Material::Mu, &x).map(|v| v.im);
        assert!((im - nalgebra::Matrix3::identity() * 0.01).norm() < 1e-15);
        for r in [0.5, 1.2, 3.0] {
            let (a, b) = med.components(Material::Eps, r);
            assert_eq!((a.im, b.im), (0.0, 0.0));
        }
    }

    #[test]
    fn hat_media() {
        let lens = lens_radii(2.0, 1.0, 2.0).unwrap();
        let hat = assemble_hat_medium(&lens, &ObjectMedium::isotropic(2.0, 2.0)).unwrap();
        for r in [0.3, 1.9, 5.0] {
            assert_eq!(hat.components(Material::Eps, r), (C64::new(1.0, 0.0), C64::new(1.0, 0.0)));
        }
        let hat = assemble_hat_medium(&lens, &ObjectMedium::isotropic(4.0, 1.0)).unwrap();
        assert_eq!(hat.boundaries(), vec![2.0]);
        assert_eq!(hat.components(Material::Eps, 1.0).0, C64::new(2.0, 0.0));
        assert_eq!(hat.components(Material::Mu, 1.0).1, C64::new(0.5, 0.0));
    }

    #[test]
    fn hat_of_power_law_object() {
        let lens = lens_radii(2.0, 1.0, 2.0).unwrap();
        let obj = ObjectMedium {
            eps: RadialTensor::new(Profile::power_law(3.0, 1.0).plus(1.0), Profile::constant(2.0)),
            mu: RadialTensor::identity(),
        };
        let hat = assemble_hat_medium(&lens, &obj).unwrap();
        let x = Point::new(0.4, 0.8, -0.6);
        let expected = obj.eps.matrix_at(&(x / 2.0)) / C64::new(2.0, 0.0);
        assert!((hat.tensor_at(Material::Eps, &x) - expected).norm() < 1e-14);
    }

    #[test]
    fn rejects_non_elliptic_object() {
        let lens = lens_radii(2.0, 1.0, 2.0).unwrap();
        let bad = ObjectMedium::isotropic(-1.0, 1.0);
        assert!(matches!(
            assemble_lens_medium(&lens, 0.0, &bad),
            Err(Error::Ellipticity(_))
        ));
        assert!(assemble_hat_medium(&lens, &bad).is_err());
    }

    #[test]
    fn ellipticity_examples() {
        let mut rng = sampling::rng(5);
        let pts: Vec<Point> = (0..50).map(|_| sampling::point_in_ball(&mut rng, 2.0)).collect();
        assert!(check_ellipticity(&RadialTensor::identity(), &pts, 1.0));
        assert!(check_ellipticity(&RadialTensor::isotropic(2.0), &pts, 2.0));
        assert!(!check_ellipticity(&RadialTensor::isotropic(2.0), &pts, 1.5));
        let lens = lens_radii(2.0, 1.0, 2.0).unwrap();
        let med = assemble_lens_medium(&lens, 0.0, &ObjectMedium::isotropic(4.0, 4.0)).unwrap();
        let shell: Vec<Point> = (0..50)
            .map(|_| sampling::point_in_shell(&mut rng, lens.r1, lens.r2))
            .collect();
        assert!(!check_ellipticity(&med.field(Material::Eps), &shell, 100.0));
    }
}
