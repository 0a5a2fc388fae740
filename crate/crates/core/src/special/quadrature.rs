use std::f64::consts::PI;

/// Gauss-Legendre nodes and weights on `[-1, 1]`, by Newton iteration on `P_n`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, 0.0);
            for k in 1..=n {
                let p2 = p1;
                p1 = p0;
                p0 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p2) / k as f64;
            }
            dp = n as f64 * (z * p0 - p1) / (z * z - 1.0);
            let dz = p0 / dp;
            z -= dz;
            if dz.abs() < 1e-15 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

#[derive(Debug, Clone, Copy)]
pub struct SphereNode {
    pub theta: f64,
    pub phi: f64,
    pub weight: f64,
}

impl SphereNode {
    pub fn direction(&self) -> nalgebra::Vector3<f64> {
        let s = self.theta.sin();
        nalgebra::Vector3::new(s * self.phi.cos(), s * self.phi.sin(), self.theta.cos())
    }
}

/// Product rule on the unit sphere: Gauss-Legendre in `cos θ`, trapezoid in
/// `φ`. Exact for spherical polynomials of degree `< min(2 n_theta, n_phi)`.
#[derive(Debug, Clone)]
pub struct SphereQuadrature {
    nodes: Vec<SphereNode>,
}

impl SphereQuadrature {
    pub fn new(n_theta: usize, n_phi: usize) -> Self {
        let (x, w) = gauss_legendre(n_theta);
        let dphi = 2.0 * PI / n_phi as f64;
        let mut nodes = Vec::with_capacity(n_theta * n_phi);
        for (xi, wi) in x.iter().zip(&w) {
            for j in 0..n_phi {
                nodes.push(SphereNode {
                    theta: xi.acos(),
                    phi: j as f64 * dphi,
                    weight: wi * dphi,
                });
            }
        }
        SphereQuadrature { nodes }
    }

    pub fn nodes(&self) -> &[SphereNode] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_polynomials_exactly() {
        let (x, w) = gauss_legendre(7);
        for k in 0..14 {
            let q: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(k)).sum();
            let exact = if k % 2 == 1 { 0.0 } else { 2.0 / (k as f64 + 1.0) };
            assert!((q - exact).abs() < 1e-14, "k={k}");
        }
    }

    #[test]
    fn sphere_area_and_moment() {
        let q = SphereQuadrature::new(6, 12);
        let area: f64 = q.nodes().iter().map(|n| n.weight).sum();
        assert!((area - 4.0 * PI).abs() < 1e-13);
        let zz: f64 = q.nodes().iter().map(|n| n.weight * n.direction().z.powi(2)).sum();
        assert!((zz - 4.0 * PI / 3.0).abs() < 1e-13);
    }
}
