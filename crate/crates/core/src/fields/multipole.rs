use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::sampling;
use crate::special::{legendre_table, spherical_bessel, SphereQuadrature};
use crate::{CVec3, C64};

use super::{FieldPair, SourceSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Polarization {
    /// Tangential electric field `∝ Φ̃`.
    TE,
    /// Tangential magnetic field `∝ Φ̃`.
    TM,
}

impl std::fmt::Display for Polarization {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Polarization::TE => "TE",
            Polarization::TM => "TM",
        })
    }
}

impl std::str::FromStr for Polarization {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "TE" => Ok(Polarization::TE),
            "TM" => Ok(Polarization::TM),
            _ => Err(Error::Config(format!("unknown polarization '{s}'"))),
        }
    }
}

/// Radial function used in a vacuum multipole: `j_n`, `h_n = j_n + i y_n`, or
/// `j_n − i y_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MultipoleKind {
    Regular,
    Outgoing,
    Incoming,
}

/// Per-order radial amplitudes of the field components.
///
/// `te = [E·Φ̃, H·r̂Y, H·Ψ̃]`, `tm = [H·Φ̃, E·r̂Y, E·Ψ̃]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialAmplitudes {
    pub te: [C64; 3],
    pub tm: [C64; 3],
}

/// Radial amplitudes of the unit vacuum multipoles of order `n` at radius `r`.
pub fn vacuum_amplitudes(k: f64, n: usize, r: f64, kind: MultipoleKind) -> RadialAmplitudes {
    let x = k * r;
    let t = spherical_bessel(n, C64::new(x, 0.0));
    let (f, df) = match kind {
        MultipoleKind::Regular => (t.j(n), t.dj(n)),
        MultipoleKind::Outgoing => (t.h(n), t.dh(n)),
        MultipoleKind::Incoming => (t.h2(n), t.dh2(n)),
    };
    let sl = ((n * (n + 1)) as f64).sqrt();
    let radial = C64::i() * sl * f / x;
    let tang = C64::i() * (f + x * df) / x;
    RadialAmplitudes {
        te: [f, radial, tang],
        tm: [f, -radial, -tang],
    }
}

fn cs_sign(m: i64) -> f64 {
    if m < 0 && m % 2 != 0 {
        -1.0
    } else {
        1.0
    }
}

/// Sums `Σ_{n,m,pol} coeff(pol, n, m) · mode` at `x ≠ 0`, with the mode's
/// radial amplitudes given per order by `amps`.
pub fn synthesize<C, A>(x: &Point, n_max: usize, coeff: C, amps: A) -> Result<(CVec3, CVec3)>
where
    C: Fn(Polarization, usize, i64) -> C64,
    A: Fn(usize) -> RadialAmplitudes,
{
    let r = x.norm();
    if r == 0.0 {
        return Err(Error::domain("mode synthesis at the origin"));
    }
    let theta = (x.z / r).clamp(-1.0, 1.0).acos();
    let phi = x.y.atan2(x.x);
    let table = legendre_table(n_max, theta);
    // Spherical components (r, θ, φ).
    let mut e = [C64::new(0.0, 0.0); 3];
    let mut h = [C64::new(0.0, 0.0); 3];
    for n in 1..=n_max {
        let a = amps(n);
        let sl = ((n * (n + 1)) as f64).sqrt();
        for m in -(n as i64)..=(n as i64) {
            let (cte, ctm) = (coeff(Polarization::TE, n, m), coeff(Polarization::TM, n, m));
            if cte == C64::new(0.0, 0.0) && ctm == C64::new(0.0, 0.0) {
                continue;
            }
            let am = m.unsigned_abs() as usize;
            let ph = C64::from_polar(cs_sign(m), m as f64 * phi);
            let y = ph * table.p(n, am);
            let dp = ph * table.dp_dtheta(n, am) / sl;
            let iq = ph * C64::new(0.0, m as f64 * table.p_over_sin(n, am) / sl);
            // Ψ̃ = (dp, iq) and Φ̃ = (−iq, dp) in (θ, φ).
            let (te, tm) = (cte, ctm);
            e[1] += te * a.te[0] * -iq + tm * a.tm[2] * dp;
            e[2] += te * a.te[0] * dp + tm * a.tm[2] * iq;
            e[0] += tm * a.tm[1] * y;
            h[1] += tm * a.tm[0] * -iq + te * a.te[2] * dp;
            h[2] += tm * a.tm[0] * dp + te * a.te[2] * iq;
            h[0] += te * a.te[1] * y;
        }
    }
    let (st, ct, sp, cp) = (theta.sin(), theta.cos(), phi.sin(), phi.cos());
    let to_cart = |v: [C64; 3]| {
        CVec3::new(
            v[0] * st * cp + v[1] * ct * cp - v[2] * sp,
            v[0] * st * sp + v[1] * ct * sp + v[2] * cp,
            v[0] * ct - v[1] * st,
        )
    };
    Ok((to_cart(e), to_cart(h)))
}

/// A single unit vacuum multipole.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MultipoleField {
    pub k: f64,
    pub n: usize,
    pub m: i64,
    pub pol: Polarization,
    pub kind: MultipoleKind,
}

impl FieldPair for MultipoleField {
    fn k(&self) -> f64 {
        self.k
    }

    fn eval(&self, x: &Point) -> Result<(CVec3, CVec3)> {
        let r = x.norm();
        synthesize(
            x,
            self.n,
            |p, n, m| {
                if p == self.pol && n == self.n && m == self.m {
                    C64::new(1.0, 0.0)
                } else {
                    C64::new(0.0, 0.0)
                }
            },
            |n| vacuum_amplitudes(self.k, n, r, self.kind),
        )
    }
}

/// Regular-multipole coefficients `a^{pol}_{nm}`, `1 ≤ n ≤ n_max`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultipoleCoefficients {
    pub k: f64,
    pub n_max: usize,
    te: Vec<C64>,
    tm: Vec<C64>,
    /// Field contribution of order `n_max` on the projection sphere relative
    /// to the largest order.
    pub tail: f64,
    /// Radius of the projection sphere.
    pub radius: f64,
    /// Max relative field mismatch of the truncated sum on that sphere.
    pub reconstruction_error: f64,
}

fn mode_index(n: usize, m: i64) -> usize {
    (n * n - 1) + (m + n as i64) as usize
}

impl MultipoleCoefficients {
    pub fn zeros(k: f64, n_max: usize) -> Self {
        let len = (n_max + 1) * (n_max + 1) - 1;
        MultipoleCoefficients {
            k,
            n_max,
            te: vec![C64::new(0.0, 0.0); len],
            tm: vec![C64::new(0.0, 0.0); len],
            tail: 0.0,
            radius: 0.0,
            reconstruction_error: 0.0,
        }
    }

    pub fn get(&self, pol: Polarization, n: usize, m: i64) -> C64 {
        if n == 0 || n > self.n_max || m.unsigned_abs() as usize > n {
            return C64::new(0.0, 0.0);
        }
        match pol {
            Polarization::TE => self.te[mode_index(n, m)],
            Polarization::TM => self.tm[mode_index(n, m)],
        }
    }

    pub fn set(&mut self, pol: Polarization, n: usize, m: i64, v: C64) {
        let i = mode_index(n, m);
        match pol {
            Polarization::TE => self.te[i] = v,
            Polarization::TM => self.tm[i] = v,
        }
    }

    /// `Σ_m |a_nm|²` for one order and polarization.
    pub fn order_power(&self, pol: Polarization, n: usize) -> f64 {
        (-(n as i64)..=(n as i64)).map(|m| self.get(pol, n, m).norm_sqr()).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.te.iter().chain(&self.tm).map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn truncated(&self, n_max: usize) -> Self {
        let mut out = MultipoleCoefficients::zeros(self.k, n_max);
        for n in 1..=n_max.min(self.n_max) {
            for m in -(n as i64)..=(n as i64) {
                for pol in [Polarization::TE, Polarization::TM] {
                    out.set(pol, n, m, self.get(pol, n, m));
                }
            }
        }
        out.radius = self.radius;
        out
    }
}

/// Mode sum `Σ a_nm · (multipole of the given kind)`.
pub struct MultipoleExpansion<'a> {
    pub coefficients: &'a MultipoleCoefficients,
    pub kind: MultipoleKind,
}

impl FieldPair for MultipoleExpansion<'_> {
    fn k(&self) -> f64 {
        self.coefficients.k
    }

    fn eval(&self, x: &Point) -> Result<(CVec3, CVec3)> {
        let c = self.coefficients;
        let r = x.norm();
        synthesize(x, c.n_max, |p, n, m| c.get(p, n, m), |n| vacuum_amplitudes(c.k, n, r, self.kind))
    }
}

/// Tangential `(θ, φ)` components.
fn tangential(v: &CVec3, theta: f64, phi: f64) -> (C64, C64) {
    let (st, ct, sp, cp) = (theta.sin(), theta.cos(), phi.sin(), phi.cos());
    (v.x * ct * cp + v.y * ct * sp - v.z * st, -v.x * sp + v.y * cp)
}

/// Projects a source-free field onto regular vacuum multipoles on the sphere
/// of radius `radius`.
pub fn project_regular<P: FieldPair + ?Sized>(pair: &P, n_max: usize, radius: f64) -> Result<MultipoleCoefficients> {
    if n_max < 1 {
        return Err(Error::domain("n_max must be at least 1"));
    }
    if !(radius > 0.0) {
        return Err(Error::domain("projection radius must be positive"));
    }
    let k = pair.k();
    let n_theta = n_max + (k * radius).ceil() as usize + 16;
    let n_phi = 2 * n_theta;
    let quad = SphereQuadrature::new(n_theta, n_phi);
    let nm = n_max as i64;
    let width = 2 * n_max + 1;

    let mut out = MultipoleCoefficients::zeros(k, n_max);
    // Inner products per (n, m): [<E,Ψ̃>, <E,Φ̃>, <H,Ψ̃>, <H,Φ̃>].
    let mut ip = vec![[C64::new(0.0, 0.0); 4]; out.te.len()];

    for row in quad.nodes().chunks(n_phi) {
        let theta = row[0].theta;
        let w_theta = row[0].weight;
        // Fourier sums over φ of E_θ, E_φ, H_θ, H_φ.
        let mut s = vec![[C64::new(0.0, 0.0); 4]; width];
        for node in row {
            let (e, h) = pair.eval(&(node.direction() * radius))?;
            let (et, ep) = tangential(&e, theta, node.phi);
            let (ht, hp) = tangential(&h, theta, node.phi);
            for m in -nm..=nm {
                let ph = C64::from_polar(1.0, -(m as f64) * node.phi);
                let slot = &mut s[(m + nm) as usize];
                slot[0] += et * ph;
                slot[1] += ep * ph;
                slot[2] += ht * ph;
                slot[3] += hp * ph;
            }
        }
        let table = legendre_table(n_max, theta);
        for n in 1..=n_max {
            let sl = ((n * (n + 1)) as f64).sqrt();
            for m in -(n as i64)..=(n as i64) {
                let am = m.unsigned_abs() as usize;
                let c = cs_sign(m) * w_theta / sl;
                let dp = table.dp_dtheta(n, am) * c;
                let iq = C64::new(0.0, m as f64 * table.p_over_sin(n, am) * c);
                let f = &s[(m + nm) as usize];
                let acc = &mut ip[mode_index(n, m)];
                acc[0] += f[0] * dp - iq * f[1];
                acc[1] += f[1] * dp + iq * f[0];
                acc[2] += f[2] * dp - iq * f[3];
                acc[3] += f[3] * dp + iq * f[2];
            }
        }
    }

    let x = k * radius;
    let t = spherical_bessel(n_max, C64::new(x, 0.0));
    for n in 1..=n_max {
        let f = t.j(n);
        let g = C64::i() * (f + x * t.dj(n)) / x;
        let den = f.norm_sqr() + g.norm_sqr();
        for m in -(n as i64)..=(n as i64) {
            let p = ip[mode_index(n, m)];
            out.set(Polarization::TE, n, m, (f.conj() * p[1] + g.conj() * p[2]) / den);
            out.set(Polarization::TM, n, m, (f.conj() * p[3] - g.conj() * p[0]) / den);
        }
    }

    let weights: Vec<f64> = (0..=n_max)
        .map(|n| {
            let f = t.j(n);
            (f.norm_sqr() + (C64::i() * (f + x * t.dj(n)) / x).norm_sqr()).sqrt()
        })
        .collect();
    let contribution = |n: usize| {
        (-(n as i64)..=(n as i64))
            .flat_map(|m| [out.get(Polarization::TE, n, m), out.get(Polarization::TM, n, m)])
            .map(|c| c.norm())
            .fold(0.0, f64::max)
            * weights[n]
    };
    let peak = (1..=n_max).map(contribution).fold(0.0, f64::max);
    out.tail = if peak > 0.0 { contribution(n_max) / peak } else { 0.0 };
    out.radius = radius;

    let mut rng = sampling::rng(0x5eed);
    let expansion = MultipoleExpansion {
        coefficients: &out,
        kind: MultipoleKind::Regular,
    };
    let (mut err, mut scale) = (0.0f64, 0.0f64);
    for _ in 0..64 {
        let p = sampling::point_on_sphere(&mut rng, radius);
        let (e, h) = pair.eval(&p)?;
        let (e2, h2) = expansion.eval(&p)?;
        err = err.max((e - e2).norm()).max((h - h2).norm());
        scale = scale.max(e.norm()).max(h.norm());
    }
    let rec = if scale > 0.0 { err / scale } else { err };
    out.reconstruction_error = rec;
    Ok(out)
}

/// Regular-multipole expansion of an incident field, projected on a sphere of
/// radius `radius` inside the source-free ball. Logs a warning when the
/// order-`n_max` coefficients exceed `tail_tol` relative to the largest.
pub fn expand_source_to_multipoles(
    src: &SourceSpec,
    k: f64,
    n_max: usize,
    radius: f64,
    tail_tol: f64,
) -> Result<MultipoleCoefficients> {
    if radius >= src.support_radius() {
        return Err(Error::domain(format!(
            "projection radius {radius} must lie inside the source-free ball (source at {})",
            src.support_radius()
        )));
    }
    let field = src.field(k)?;
    let coeffs = project_regular(&field, n_max, radius)?;
    if coeffs.tail > tail_tol {
        log::warn!(
            "multipole expansion truncated at n_max = {n_max}: tail {:.3e} exceeds {:.1e}",
            coeffs.tail,
            tail_tol
        );
    }
    Ok(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{maxwell_residual, silver_muller_residual, PlaneWave};
    use crate::materials::RadialTensor;
    use crate::special::{vsh, legendre_table};

    fn zero(_: &Point) -> CVec3 {
        CVec3::zeros()
    }

    #[test]
    fn multipoles_solve_free_space_maxwell() {
        let id = RadialTensor::identity();
        let x = Point::new(0.7, -0.4, 1.1);
        for kind in [MultipoleKind::Regular, MultipoleKind::Outgoing, MultipoleKind::Incoming] {
            for pol in [Polarization::TE, Polarization::TM] {
                for (n, m) in [(1, 0), (2, -1), (3, 2)] {
                    let f = MultipoleField { k: 1.7, n, m, pol, kind };
                    let scale = f.e(&x).unwrap().norm() + f.h(&x).unwrap().norm();
                    let (a, b) = maxwell_residual(&f, &id, &id, zero, &x, 1e-4).unwrap();
                    assert!(a.norm() < 1e-7 * scale && b.norm() < 1e-7 * scale, "{kind:?} {pol} {n} {m}");
                }
            }
        }
    }

    #[test]
    fn tangential_field_matches_vsh() {
        let f = MultipoleField {
            k: 1.0,
            n: 3,
            m: -2,
            pol: Polarization::TE,
            kind: MultipoleKind::Regular,
        };
        let (th, ph, r) = (0.9f64, 2.1f64, 1.4);
        let x = Point::new(th.sin() * ph.cos(), th.sin() * ph.sin(), th.cos()) * r;
        let v = vsh(&legendre_table(3, th), 3, -2, th, ph);
        let jn = spherical_bessel(3, C64::new(r, 0.0)).j(3);
        assert!((f.e(&x).unwrap() - v.phi * jn).norm() < 1e-14);
    }

    fn sm_ratio(f: &MultipoleField) -> f64 {
        let dir = Point::new(1.0, 0.5, 0.3).normalize();
        silver_muller_residual(f, &(dir * 40.0)).unwrap() / silver_muller_residual(f, &(dir * 80.0)).unwrap()
    }

    #[test]
    fn outgoing_decays_incoming_does_not() {
        // The magnetic-type mode keeps a radial H ~ 1/r²; for the electric
        // type the radial E drops out of E × x̂ and the residual is ~ 1/r³.
        let te = MultipoleField { k: 1.0, n: 1, m: 0, pol: Polarization::TE, kind: MultipoleKind::Outgoing };
        let tm = MultipoleField { pol: Polarization::TM, ..te };
        assert!((sm_ratio(&te) - 4.0).abs() < 0.2, "{}", sm_ratio(&te));
        assert!((sm_ratio(&tm) - 8.0).abs() < 0.2, "{}", sm_ratio(&tm));
        for n in 1..=4 {
            for pol in [Polarization::TE, Polarization::TM] {
                let out = MultipoleField { n, pol, ..te };
                assert!(sm_ratio(&out) > 3.9);
                let inc = MultipoleField { kind: MultipoleKind::Incoming, ..out };
                assert!((sm_ratio(&inc) - 2.0).abs() < 0.1, "incoming ratio {}", sm_ratio(&inc));
            }
        }
    }

    #[test]
    fn plane_wave_expansion_reconstructs() {
        let src = SourceSpec::default_plane_wave();
        let c = expand_source_to_multipoles(&src, 1.0, 20, 1.0, 1e-10).unwrap();
        assert!(c.reconstruction_error < 1e-10, "{}", c.reconstruction_error);
        // x-polarized +z incidence only excites m = ±1.
        assert!(c.get(Polarization::TE, 3, 0).norm() < 1e-12);
        assert!(c.get(Polarization::TE, 3, 1).norm() > 1e-3);
        let pw = PlaneWave::new(
            1.0,
            Point::z(),
            CVec3::new(C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0)),
        )
        .unwrap();
        let exp = MultipoleExpansion { coefficients: &c, kind: MultipoleKind::Regular };
        let p = Point::new(0.2, 0.3, -0.4);
        assert!((exp.e(&p).unwrap() - pw.e(&p).unwrap()).norm() < 1e-10);
    }

    #[test]
    fn dipole_coefficients_decay_geometrically() {
        let pos = Point::new(0.0, 0.0, 10.0);
        let src = SourceSpec::dipole(pos, CVec3::new(C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0)));
        let c = expand_source_to_multipoles(&src, 1.0, 12, 1.0, 1e-6).unwrap();
        // Field contribution of each order on the unit sphere.
        let t = spherical_bessel(12, C64::new(1.0, 0.0));
        let power: Vec<f64> = (1..=12)
            .map(|n| (c.order_power(Polarization::TE, n) + c.order_power(Polarization::TM, n)).sqrt() * t.j(n).norm())
            .collect();
        for w in power.windows(2).skip(2) {
            assert!(w[1] < 0.3 * w[0], "{power:?}");
        }
        assert!(c.reconstruction_error < 1e-8);
        assert!(c.tail < 1e-8);
    }

    #[test]
    fn zero_source_gives_zero() {
        let src = SourceSpec::dipole(Point::new(0.0, 0.0, 5.0), CVec3::zeros());
        let c = expand_source_to_multipoles(&src, 1.0, 5, 1.0, 1e-10).unwrap();
        assert_eq!(c.max_abs(), 0.0);
        assert!(expand_source_to_multipoles(&src, 1.0, 5, 6.0, 1e-10).is_err());
    }

    proptest::proptest! {
        #[test]
        fn silver_muller_separates_directions(n in 1usize..6, m_frac in 0.0f64..1.0, k in 0.5f64..3.0, te in proptest::bool::ANY) {
            let m = (m_frac * (2 * n + 1) as f64).floor() as i64 - n as i64;
            let pol = if te { Polarization::TE } else { Polarization::TM };
            let out = MultipoleField { k, n, m: m.min(n as i64), pol, kind: MultipoleKind::Outgoing };
            let dir = Point::new(1.0, 0.5, 0.3).normalize();
            let ratio = |f: &MultipoleField| {
                let r = 200.0 / k;
                silver_muller_residual(f, &(dir * r)).unwrap() / silver_muller_residual(f, &(dir * 2.0 * r)).unwrap()
            };
            proptest::prop_assert!(ratio(&out) > 3.5, "outgoing ratio {}", ratio(&out));
            let inc = MultipoleField { kind: MultipoleKind::Incoming, ..out };
            proptest::prop_assert!((ratio(&inc) - 2.0).abs() < 0.1, "incoming ratio {}", ratio(&inc));
        }
    }
}
