use num_complex::Complex64 as C64;

/// Values of `j_n`, `y_n` for `n = 0..=nmax` at a single complex argument.
#[derive(Debug, Clone)]
pub struct BesselTable {
    z: C64,
    j: Vec<C64>,
    y: Vec<C64>,
}

const RESCALE_AT: f64 = 1e150;

/// Spherical Bessel functions of the first and second kind for orders
/// `0..=nmax` at `z`.
///
/// `j_n` uses Miller's downward recurrence normalized against `j_0` or `j_1`;
/// `y_n` uses the upward recurrence, which is stable for it. At `z = 0` the
/// `y_n` are infinite.
pub fn spherical_bessel(nmax: usize, z: C64) -> BesselTable {
    if z.norm() == 0.0 {
        let mut j = vec![C64::new(0.0, 0.0); nmax + 1];
        j[0] = C64::new(1.0, 0.0);
        let y = vec![C64::new(f64::NEG_INFINITY, 0.0); nmax + 1];
        return BesselTable { z, j, y };
    }
    BesselTable {
        z,
        j: jn_downward(nmax, z),
        y: yn_upward(nmax, z),
    }
}

fn jn_downward(nmax: usize, z: C64) -> Vec<C64> {
    let (s, c) = (z.sin(), z.cos());
    let j0 = s / z;
    let j1 = s / (z * z) - c / z;
    if nmax == 0 {
        return vec![j0];
    }
    let az = z.norm();
    let start = nmax + 16 + (az + 4.0 * az.cbrt()).ceil() as usize + (2.0 * z.im.abs()) as usize;
    let mut f = vec![C64::new(0.0, 0.0); start + 2];
    f[start] = C64::new(1.0, 0.0);
    for k in (1..=start).rev() {
        f[k - 1] = C64::new((2 * k + 1) as f64, 0.0) / z * f[k] - f[k + 1];
        if f[k - 1].norm() > RESCALE_AT {
            let s = 1.0 / f[k - 1].norm();
            f[k - 1..].iter_mut().for_each(|v| *v *= s);
        }
    }
    let mut out = f;
    out.truncate(nmax + 1);
    let (target, got) = if j0.norm() >= j1.norm() {
        (j0, out[0])
    } else {
        (j1, out[1])
    };
    // Complex division squares the divisor's modulus; keep it in range.
    let g = got.norm();
    let scale = (target / g) / (got / g);
    out.iter_mut().for_each(|v| *v *= scale);
    out
}

fn yn_upward(nmax: usize, z: C64) -> Vec<C64> {
    let (s, c) = (z.sin(), z.cos());
    let mut y = Vec::with_capacity(nmax + 1);
    y.push(-c / z);
    if nmax >= 1 {
        y.push(-c / (z * z) - s / z);
    }
    for n in 1..nmax {
        let next = C64::new((2 * n + 1) as f64, 0.0) / z * y[n] - y[n - 1];
        y.push(next);
    }
    y
}

impl BesselTable {
    pub fn nmax(&self) -> usize {
        self.j.len() - 1
    }

    pub fn arg(&self) -> C64 {
        self.z
    }

    pub fn j(&self, n: usize) -> C64 {
        self.j[n]
    }

    pub fn y(&self, n: usize) -> C64 {
        self.y[n]
    }

    /// Outgoing Hankel function `h_n = j_n + i y_n`.
    pub fn h(&self, n: usize) -> C64 {
        self.j[n] + C64::i() * self.y[n]
    }

    /// Incoming Hankel function `j_n - i y_n`.
    pub fn h2(&self, n: usize) -> C64 {
        self.j[n] - C64::i() * self.y[n]
    }

    pub fn dj(&self, n: usize) -> C64 {
        Self::deriv(&self.j, n, self.z)
    }

    pub fn dy(&self, n: usize) -> C64 {
        Self::deriv(&self.y, n, self.z)
    }

    pub fn dh(&self, n: usize) -> C64 {
        self.dj(n) + C64::i() * self.dy(n)
    }

    pub fn dh2(&self, n: usize) -> C64 {
        self.dj(n) - C64::i() * self.dy(n)
    }

    fn deriv(f: &[C64], n: usize, z: C64) -> C64 {
        if n == 0 {
            // f_0' = -f_1, and f_1 = f_0 / z - f_0' for both kinds.
            if f.len() > 1 {
                return -f[1];
            }
            let (s, c) = (z.sin(), z.cos());
            let is_j = (f[0] - s / z).norm() <= 1e-12 * f[0].norm().max(1e-300);
            return if is_j {
                -(s / (z * z) - c / z)
            } else {
                -(-c / (z * z) - s / z)
            };
        }
        f[n - 1] - C64::new((n + 1) as f64, 0.0) / z * f[n]
    }
}
