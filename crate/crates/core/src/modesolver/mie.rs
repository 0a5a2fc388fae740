use nalgebra::{Matrix2, Vector2};

use crate::error::{Error, Result};
use crate::fields::Polarization;
use crate::geometry::LensRadii;
use crate::special::spherical_bessel;
use crate::C64;

use super::{vacuum_states, ModeIndex, ScatteringSpectrum};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IsotropicLayer {
    pub outer_radius: f64,
    pub eps: C64,
    pub mu: C64,
}

/// `(u, v)` of the `j`- and `y`-type solutions of an isotropic layer at `r`.
fn layer_basis(k: f64, mode: ModeIndex, layer: &IsotropicLayer, r: f64) -> Matrix2<C64> {
    let n = mode.n;
    let nn = (layer.eps * layer.mu).sqrt();
    let z = nn * k * r;
    let t = spherical_bessel(n, z);
    let col = |f: C64, df: C64| {
        let w = f * r;
        let wp = f + z * df;
        match mode.pol {
            Polarization::TE => Vector2::new(w, C64::i() * wp / (k * layer.mu)),
            Polarization::TM => Vector2::new(-C64::i() * wp / (k * layer.eps), w),
        }
    };
    Matrix2::from_columns(&[col(t.j(n), t.dj(n)), col(t.y(n), t.dy(n))])
}

fn mode_coefficient(layers: &[IsotropicLayer], k: f64, mode: ModeIndex) -> Result<C64> {
    let first = &layers[0];
    let mut y = layer_basis(k, mode, first, first.outer_radius).column(0).into_owned();
    for w in layers.windows(2) {
        let (inner, layer) = (&w[0], &w[1]);
        let at_in = layer_basis(k, mode, layer, inner.outer_radius);
        let c = at_in
            .try_inverse()
            .ok_or_else(|| Error::domain(format!("degenerate layer basis at r = {}", inner.outer_radius)))?
            * y;
        y = layer_basis(k, mode, layer, layer.outer_radius) * c;
        y /= C64::new(y.norm(), 0.0);
    }
    let (j, h) = vacuum_states(k, mode, layers.last().expect("nonempty").outer_radius);
    let den = y[0] * h[1] - y[1] * h[0];
    let scale = y[0].norm() * h[1].norm() + y[1].norm() * h[0].norm();
    if den.norm() < 1e-14 * scale {
        return Err(Error::Resonance {
            n: mode.n,
            pol: mode.pol.to_string(),
            det: den.norm() / scale,
        });
    }
    Ok(-(y[0] * j[1] - y[1] * j[0]) / den)
}

/// Closed-form scattering coefficients of concentric isotropic layers in
/// vacuum, by Bessel-function interface matching.
pub fn mie_isotropic_oracle(layers: &[IsotropicLayer], k: f64, n_max: usize) -> Result<ScatteringSpectrum> {
    let mut prev = 0.0;
    for l in layers {
        if !(l.outer_radius > prev) {
            return Err(Error::domain("layer radii must be strictly increasing"));
        }
        if (l.eps * l.mu).norm() == 0.0 {
            return Err(Error::domain("layer with vanishing refractive index"));
        }
        prev = l.outer_radius;
    }
    let mut out = ScatteringSpectrum::new(k, n_max);
    for mode in ModeIndex::all(n_max) {
        let s = if layers.is_empty() {
            C64::new(0.0, 0.0)
        } else {
            mode_coefficient(layers, k, mode)?
        };
        out.s.insert(mode, s);
    }
    Ok(out)
}

/// Spectrum of the magnified isotropic object `(m⁻¹ε_O, m⁻¹μ_O)` in
/// `B_{m r0}`.
pub fn hat_spectrum(lens: &LensRadii, eps: C64, mu: C64, k: f64, n_max: usize) -> Result<ScatteringSpectrum> {
    let layer = IsotropicLayer {
        outer_radius: lens.m * lens.r0,
        eps: eps / lens.m,
        mu: mu / lens.m,
    };
    mie_isotropic_oracle(&[layer], k, n_max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vacuum_layers_scatter_nothing() {
        let one = C64::new(1.0, 0.0);
        let l = [
            IsotropicLayer { outer_radius: 0.5, eps: one, mu: one },
            IsotropicLayer { outer_radius: 1.0, eps: one, mu: one },
        ];
        assert!(mie_isotropic_oracle(&l, 1.0, 8).unwrap().max_abs() < 1e-14);
        assert_eq!(mie_isotropic_oracle(&[], 1.0, 3).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn rayleigh_regime() {
        let l = [IsotropicLayer {
            outer_radius: 0.1,
            eps: C64::new(4.0, 0.0),
            mu: C64::new(1.0, 0.0),
        }];
        let s = mie_isotropic_oracle(&l, 1.0, 4).unwrap();
        let tm1 = s.get(1, Polarization::TM).norm();
        assert!(tm1 > 1e-4);
        for n in 2..=4 {
            assert!(s.get(n, Polarization::TM).norm() < 1e-2 * s.get(n - 1, Polarization::TM).norm());
        }
        assert!(s.get(1, Polarization::TE).norm() < 1e-2 * tm1);
    }

    #[test]
    fn electric_rayleigh_coefficient() {
        // Small sphere: s = (e^{2iη} − 1)/2 ≈ iη with phase shift
        // η ≈ (2/3)(ka)³ (ε − 1)/(ε + 2), to O(ka)².
        let (ka, eps) = (1e-2, 3.0);
        let l = [IsotropicLayer {
            outer_radius: ka,
            eps: C64::new(eps, 0.0),
            mu: C64::new(1.0, 0.0),
        }];
        let s = mie_isotropic_oracle(&l, 1.0, 1).unwrap().get(1, Polarization::TM);
        let expected = C64::new(0.0, 2.0 / 3.0) * ka.powi(3) * (eps - 1.0) / (eps + 2.0);
        assert!((s - expected).norm() < 1e-3 * expected.norm(), "{s} vs {expected}");
    }

    #[test]
    fn hat_of_magnifying_object_is_empty() {
        let lens = crate::geometry::lens_radii(2.0, 1.0, 2.0).unwrap();
        let s = hat_spectrum(&lens, C64::new(2.0, 0.0), C64::new(2.0, 0.0), 1.0, 10).unwrap();
        assert!(s.max_abs() < 1e-14);
    }
}
