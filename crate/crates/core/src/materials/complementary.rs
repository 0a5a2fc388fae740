use serde::{Deserialize, Serialize};

use crate::geometry::{Composed, RadialMap, Transform};
use crate::sampling;
use crate::CMat3;

use super::{push_forward_tensor, LayeredMedium, Material, Pushed};

/// Which part of the complementarity definition failed first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Condition {
    None,
    /// `F_*ε = ε`, `F_*μ = μ` between the two reference spheres.
    PushForwardInvariance,
    /// `F` fixes `∂B_{r2}` and `G` fixes `∂B_{r3}`.
    FixedSpheres,
    /// `G_*F_*` of the inner media equals the magnified object.
    MagnifiedObject,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComplementarityReport {
    pub pass: bool,
    pub max_violation: f64,
    pub failed_condition: Condition,
    /// Largest violation of each condition, in declaration order.
    pub violations: [f64; 3],
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct CheckOptions {
    pub samples: usize,
    pub tol: f64,
    pub seed: u64,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            samples: 500,
            tol: 1e-12,
            seed: 0,
        }
    }
}

fn rel_diff(a: &CMat3, b: &CMat3) -> f64 {
    let d = (a - b).iter().map(|v| v.norm()).fold(0.0, f64::max);
    let s = b.iter().map(|v| v.norm()).fold(0.0, f64::max);
    d / s.max(1.0)
}

/// Keeps samples away from material interfaces, where the pointwise identity
/// is ambiguous.
fn off_interface(r: f64, radii: &[f64]) -> bool {
    radii.iter().all(|&b| (r - b).abs() > 1e-9 * b)
}

/// Sample-based audit of the reflecting-complementary conditions for a
/// lossless medium with fold `F` (reference `r2`) and unfold `G` (reference
/// `r3`); `hat` is the expected magnified-object medium. Loss in `medium` is
/// ignored.
pub fn check_reflecting_complementary(
    medium: &LayeredMedium,
    f: &RadialMap,
    g: &RadialMap,
    hat: &LayeredMedium,
    opts: &CheckOptions,
) -> ComplementarityReport {
    let medium = medium.with_delta(0.0).expect("zero loss is valid");
    let (r2, r3) = (f.reference_radius(), g.reference_radius());
    let mut radii = medium.boundaries();
    radii.extend(hat.boundaries());
    radii.extend([r2, r3]);
    let mut rng = sampling::rng(opts.seed);
    let mut v = [0.0f64; 3];
    let bump = |slot: &mut f64, x: f64| {
        *slot = if x.is_nan() { f64::INFINITY } else { slot.max(x) };
    };

    let mut drawn = 0;
    while drawn < opts.samples && r3 > r2 {
        let x = sampling::point_in_shell(&mut rng, r2, r3);
        let pre = f.apply_inverse(&x).map(|p| p.norm()).unwrap_or(f64::NAN);
        if !off_interface(x.norm(), &radii) || !off_interface(pre, &radii) {
            continue;
        }
        drawn += 1;
        for w in [Material::Eps, Material::Mu] {
            let field = medium.field(w);
            let here = medium.tensor_at(w, &x);
            let e = push_forward_tensor(f, &field, &x).map_or(f64::INFINITY, |p| rel_diff(&p, &here));
            bump(&mut v[0], e);
        }
    }

    for _ in 0..opts.samples {
        let x = sampling::point_on_sphere(&mut rng, r2);
        let e = f.apply(&x).map_or(f64::INFINITY, |y| (y - x).norm() / r2);
        bump(&mut v[1], e);
        let x = sampling::point_on_sphere(&mut rng, r3);
        let e = g.apply(&x).map_or(f64::INFINITY, |y| (y - x).norm() / r3);
        bump(&mut v[1], e);
    }
    let lens_outer = medium.boundaries().get(2).copied().unwrap_or(r2);
    bump(&mut v[1], (lens_outer - r2).abs() / r2);

    let gf = Composed { first: *f, second: *g };
    let mut drawn = 0;
    while drawn < opts.samples {
        let y = sampling::point_in_ball(&mut rng, r3);
        let pre = gf.apply_inverse(&y).map(|p| p.norm()).unwrap_or(f64::NAN);
        if y.norm() < 1e-6 * r3 || !off_interface(y.norm(), &radii) || !off_interface(pre, &radii) {
            continue;
        }
        drawn += 1;
        for w in [Material::Eps, Material::Mu] {
            let field = medium.field(w);
            let pushed = Pushed { map: f, inner: &field };
            let expected = hat.tensor_at(w, &y);
            let e = push_forward_tensor(g, &pushed, &y).map_or(f64::INFINITY, |p| rel_diff(&p, &expected));
            bump(&mut v[2], e);
        }
    }

    let conds = [
        Condition::PushForwardInvariance,
        Condition::FixedSpheres,
        Condition::MagnifiedObject,
    ];
    let failed = v
        .iter()
        .zip(conds)
        .find(|(e, _)| !(**e <= opts.tol))
        .map_or(Condition::None, |(_, c)| c);
    ComplementarityReport {
        pass: failed == Condition::None,
        max_violation: v.iter().copied().fold(0.0, f64::max),
        failed_condition: failed,
        violations: v,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{lens_radii, LensRadii};
    use crate::materials::{assemble_hat_medium, assemble_lens_medium, ObjectMedium, RadialTensor, Shell};

    fn audit(lens: &LensRadii, medium: &LayeredMedium, object: &ObjectMedium) -> ComplementarityReport {
        let hat = assemble_hat_medium(lens, object).unwrap();
        check_reflecting_complementary(medium, &lens.fold(), &lens.unfold(), &hat, &CheckOptions::default())
    }

    #[test]
    fn assembled_lens_passes() {
        let lens = lens_radii(2.0, 1.0, 2.0).unwrap();
        let obj = ObjectMedium::isotropic(4.0, 4.0);
        let med = assemble_lens_medium(&lens, 0.0, &obj).unwrap();
        let rep = audit(&lens, &med, &obj);
        assert!(rep.pass, "{rep:?}");
        assert!(rep.max_violation < 1e-12);
    }

    #[test]
    fn passes_on_parameter_grid() {
        let obj = ObjectMedium {
            eps: RadialTensor::new(
                crate::materials::Profile::power_law(1.0, 1.0).plus(2.0),
                crate::materials::Profile::constant(3.0),
            ),
            mu: RadialTensor::isotropic(1.5),
        };
        for m in [1.5, 2.0, 4.0] {
            for alpha in [1.5, 2.0, 3.0] {
                let lens = lens_radii(m, 1.0, alpha).unwrap();
                let med = assemble_lens_medium(&lens, 0.0, &obj).unwrap();
                let rep = audit(&lens, &med, &obj);
                assert!(rep.pass, "m={m} alpha={alpha}: {rep:?}");
            }
        }
    }

    #[test]
    fn detuned_outer_radius_fails_magnification() {
        let obj = ObjectMedium::isotropic(4.0, 4.0);
        let nominal = lens_radii(2.0, 1.0, 2.0).unwrap();
        let lens = LensRadii::detuned(2.0, 1.0, 2.0, 1.05).unwrap();
        let med = assemble_lens_medium(&lens, 0.0, &obj).unwrap();
        let hat = assemble_hat_medium(&nominal, &obj).unwrap();
        let rep = check_reflecting_complementary(&med, &lens.fold(), &lens.unfold(), &hat, &CheckOptions::default());
        assert!(!rep.pass);
        assert_eq!(rep.failed_condition, Condition::MagnifiedObject);
    }

    #[test]
    fn wrong_shell_tensor_fails_invariance() {
        let obj = ObjectMedium::isotropic(4.0, 4.0);
        let lens = lens_radii(2.0, 1.0, 3.0).unwrap();
        let med = assemble_lens_medium(&lens, 0.0, &obj).unwrap();
        let mut shells: Vec<Shell> = med.shells()[..3].to_vec();
        shells[2].eps = RadialTensor::isotropic(-1.0);
        shells[2].mu = RadialTensor::isotropic(-1.0);
        let bad = LayeredMedium::new(shells, 0.0, Some(2)).unwrap();
        let rep = audit(&lens, &bad, &obj);
        assert_eq!(rep.failed_condition, Condition::PushForwardInvariance);
    }

    #[test]
    fn loss_is_ignored() {
        let lens = lens_radii(2.0, 1.0, 2.0).unwrap();
        let obj = ObjectMedium::isotropic(4.0, 4.0);
        let med = assemble_lens_medium(&lens, 0.1, &obj).unwrap();
        assert!(audit(&lens, &med, &obj).pass);
    }
}
