//! Seeded random sample points for sample-based checks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geometry::Point;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn unit_vector<R: Rng>(rng: &mut R) -> Point {
    loop {
        let v = Point::new(
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        );
        let n = v.norm();
        if n > 1e-3 && n <= 1.0 {
            return v / n;
        }
    }
}

pub fn point_on_sphere<R: Rng>(rng: &mut R, radius: f64) -> Point {
    unit_vector(rng) * radius
}

/// Uniform (in volume) point with `inner < |x| < outer`.
pub fn point_in_shell<R: Rng>(rng: &mut R, inner: f64, outer: f64) -> Point {
    let (a, b) = (inner.powi(3), outer.powi(3));
    let r = loop {
        let r = (a + (b - a) * rng.random::<f64>()).cbrt();
        if r > inner && r < outer {
            break r;
        }
    };
    unit_vector(rng) * r
}

pub fn point_in_ball<R: Rng>(rng: &mut R, radius: f64) -> Point {
    loop {
        let p = point_in_shell(rng, 0.0, radius);
        if p.norm() > 1e-6 * radius {
            return p;
        }
    }
}
