use std::f64::consts::PI;

use nalgebra::Vector3;
use num_complex::Complex64 as C64;

use crate::CVec3;

/// Orthonormal associated Legendre functions `P̄_n^m(cos θ)` (Condon-Shortley
/// phase, `∫|P̄ e^{imφ}|² dΩ = 1`) with `P̄/sin θ` and `dP̄/dθ`, for
/// `0 ≤ m ≤ n ≤ nmax`.
#[derive(Debug, Clone)]
pub struct LegendreTable {
    nmax: usize,
    p: Vec<f64>,
    q: Vec<f64>,
    dp: Vec<f64>,
}

fn idx(n: usize, m: usize) -> usize {
    n * (n + 1) / 2 + m
}

/// Builds the table at polar angle `theta`. `P̄/sin θ` is generated by its own
/// recurrence so it stays finite at the poles.
pub fn legendre_table(nmax: usize, theta: f64) -> LegendreTable {
    let (x, s) = (theta.cos(), theta.sin());
    let size = idx(nmax, nmax) + 1;
    let mut p = vec![0.0; size];
    let mut q = vec![0.0; size];
    let mut dp = vec![0.0; size];

    let mut pmm = 1.0 / (4.0 * PI).sqrt();
    for m in 0..=nmax {
        if m > 0 {
            let f = -((2 * m + 1) as f64 / (2 * m) as f64).sqrt();
            q[idx(m, m)] = f * pmm;
            pmm *= f * s;
        }
        p[idx(m, m)] = pmm;
        if m < nmax {
            let f = ((2 * m + 3) as f64).sqrt() * x;
            p[idx(m + 1, m)] = f * p[idx(m, m)];
            q[idx(m + 1, m)] = f * q[idx(m, m)];
        }
        for n in (m + 2)..=nmax {
            let (nf, mf) = (n as f64, m as f64);
            let a = ((4.0 * nf * nf - 1.0) / (nf * nf - mf * mf)).sqrt();
            let b = (((nf - 1.0).powi(2) - mf * mf) / (4.0 * (nf - 1.0).powi(2) - 1.0)).sqrt();
            p[idx(n, m)] = a * (x * p[idx(n - 1, m)] - b * p[idx(n - 2, m)]);
            q[idx(n, m)] = a * (x * q[idx(n - 1, m)] - b * q[idx(n - 2, m)]);
        }
    }

    for n in 1..=nmax {
        let nf = n as f64;
        dp[idx(n, 0)] = (nf * (nf + 1.0)).sqrt() * p[idx(n, 1)];
        for m in 1..=n {
            let mf = m as f64;
            let lower = if n > m {
                ((2.0 * nf + 1.0) / (2.0 * nf - 1.0) * (nf * nf - mf * mf)).sqrt() * q[idx(n - 1, m)]
            } else {
                0.0
            };
            dp[idx(n, m)] = nf * x * q[idx(n, m)] - lower;
        }
    }
    LegendreTable { nmax, p, q, dp }
}

impl LegendreTable {
    pub fn nmax(&self) -> usize {
        self.nmax
    }

    pub fn p(&self, n: usize, m: usize) -> f64 {
        self.p[idx(n, m)]
    }

    /// `P̄_n^m / sin θ` (zero for `m = 0`, where it is not needed).
    pub fn p_over_sin(&self, n: usize, m: usize) -> f64 {
        self.q[idx(n, m)]
    }

    pub fn dp_dtheta(&self, n: usize, m: usize) -> f64 {
        self.dp[idx(n, m)]
    }
}

/// Normalized scalar and vector spherical harmonics at one direction, in
/// Cartesian components. `psi = r∇_S Y/√(n(n+1))`, `phi = r̂ × psi`.
#[derive(Debug, Clone, Copy)]
pub struct Vsh {
    pub y: C64,
    pub psi: CVec3,
    pub phi: CVec3,
}

/// Evaluates `Y_nm`, `Ψ̃_nm`, `Φ̃_nm` for `n ≥ 1`, `|m| ≤ n` from a table
/// computed at the same `theta`.
pub fn vsh(table: &LegendreTable, n: usize, m: i64, theta: f64, phi: f64) -> Vsh {
    let am = m.unsigned_abs() as usize;
    let l = ((n * (n + 1)) as f64).sqrt();
    let e = C64::from_polar(1.0, am as f64 * phi);
    let y = e * table.p(n, am);
    let dth = e * table.dp_dtheta(n, am) / l;
    let dph = C64::i() * am as f64 * table.p_over_sin(n, am) * e / l;

    let (st, ct, sp, cp) = (theta.sin(), theta.cos(), phi.sin(), phi.cos());
    let th_hat = Vector3::new(ct * cp, ct * sp, -st);
    let ph_hat = Vector3::new(-sp, cp, 0.0);
    let c = |v: Vector3<f64>, s: C64| v.map(|a| s * a);
    let psi = c(th_hat, dth) + c(ph_hat, dph);
    let phi_v = c(ph_hat, dth) - c(th_hat, dph);

    if m >= 0 {
        Vsh { y, psi, phi: phi_v }
    } else {
        let sign = if am.is_multiple_of(2) { 1.0 } else { -1.0 };
        Vsh {
            y: y.conj() * sign,
            psi: psi.map(|a| a.conj() * sign),
            phi: phi_v.map(|a| a.conj() * sign),
        }
    }
}
