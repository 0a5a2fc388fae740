//! Adaptive Dormand-Prince 5(4) integration of complex first-order systems.

use std::ops::Range;

use crate::error::{Error, Result};
use crate::C64;

#[derive(Debug, Clone)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    /// Components whose error is measured against their own group norm.
    /// Empty means one group covering the whole state.
    pub norm_groups: Vec<Range<usize>>,
    pub initial_step: Option<f64>,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        OdeOptions {
            rtol: 1e-10,
            atol: 1e-300,
            norm_groups: Vec::new(),
            initial_step: None,
            max_steps: 2_000_000,
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct OdeStats {
    pub accepted: usize,
    pub rejected: usize,
}

const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Integrates `y' = f(t, y)` from `t0` to `t1` (either direction) and returns
/// `y(t1)`.
///
/// The local error of each component is scaled by `atol + rtol * s`, where
/// `s` is the max-norm of that component's group over the old and new state.
pub fn integrate<F>(mut f: F, t0: f64, t1: f64, y0: &[C64], opts: &OdeOptions) -> Result<(Vec<C64>, OdeStats)>
where
    F: FnMut(f64, &[C64], &mut [C64]) -> Result<()>,
{
    let dim = y0.len();
    let mut y = y0.to_vec();
    let mut stats = OdeStats::default();
    if t0 == t1 {
        return Ok((y, stats));
    }
    let dir = (t1 - t0).signum();
    let span = (t1 - t0).abs();
    let groups = if opts.norm_groups.is_empty() {
        vec![0..dim]
    } else {
        opts.norm_groups.clone()
    };

    let mut k = vec![vec![C64::new(0.0, 0.0); dim]; 7];
    let mut tmp = vec![C64::new(0.0, 0.0); dim];
    let mut y5 = vec![C64::new(0.0, 0.0); dim];

    let mut t = t0;
    let mut h = opts.initial_step.unwrap_or(span / 100.0).min(span);
    f(t, &y, &mut k[0])?;

    loop {
        if stats.accepted + stats.rejected >= opts.max_steps {
            return Err(Error::StepUnderflow { radius: t, target: t1 });
        }
        let remaining = (t1 - t).abs();
        let last = h >= remaining;
        if last {
            h = remaining;
        }
        let hs = dir * h;
        for s in 1..7 {
            for i in 0..dim {
                let mut acc = y[i];
                for (j, kj) in k.iter().enumerate().take(s) {
                    if A[s][j] != 0.0 {
                        acc += kj[i] * (hs * A[s][j]);
                    }
                }
                tmp[i] = acc;
            }
            f(t + C[s] * hs, &tmp, &mut k[s])?;
        }
        for i in 0..dim {
            let mut acc = y[i];
            for s in 0..7 {
                if B5[s] != 0.0 {
                    acc += k[s][i] * (hs * B5[s]);
                }
            }
            y5[i] = acc;
        }

        let mut err: f64 = 0.0;
        for g in &groups {
            let scale = g
                .clone()
                .map(|i| y[i].norm().max(y5[i].norm()))
                .fold(0.0, f64::max);
            let sc = opts.atol + opts.rtol * scale;
            for i in g.clone() {
                let mut e = C64::new(0.0, 0.0);
                for s in 0..7 {
                    e += k[s][i] * (B5[s] - B4[s]);
                }
                err = err.max((e * hs).norm() / sc);
            }
        }
        if !err.is_finite() {
            err = 1e10;
        }

        if err <= 1.0 {
            stats.accepted += 1;
            t = if last { t1 } else { t + hs };
            std::mem::swap(&mut y, &mut y5);
            // FSAL: the last stage is f at the new point.
            k.swap(0, 6);
            if last {
                return Ok((y, stats));
            }
            let fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
            h *= fac;
        } else {
            stats.rejected += 1;
            h *= (0.9 * err.powf(-0.2)).clamp(0.1, 0.9);
        }
        if h < 1e-14 * t.abs().max(span) {
            return Err(Error::StepUnderflow { radius: t, target: t1 });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_exponential() {
        let lam = C64::new(-0.5, 3.0);
        let (y, stats) = integrate(
            |_, y, dy| {
                dy[0] = lam * y[0];
                Ok(())
            },
            0.0,
            4.0,
            &[C64::new(1.0, 0.0)],
            &OdeOptions::default(),
        )
        .unwrap();
        let exact = (lam * 4.0).exp();
        assert!((y[0] - exact).norm() < 1e-9 * exact.norm());
        assert!(stats.accepted > 10);
    }

    #[test]
    fn backward_round_trip_of_oscillator() {
        let sys = |_: f64, y: &[C64], dy: &mut [C64]| {
            dy[0] = y[1];
            dy[1] = -y[0] * 9.0;
            Ok(())
        };
        let y0 = [C64::new(1.0, 0.5), C64::new(0.0, -2.0)];
        let opts = OdeOptions::default();
        let (y1, _) = integrate(sys, 1.0, 5.0, &y0, &opts).unwrap();
        let (back, _) = integrate(sys, 5.0, 1.0, &y1, &opts).unwrap();
        for i in 0..2 {
            assert!((back[i] - y0[i]).norm() < 1e-8);
        }
    }

    #[test]
    fn euler_equation_power_law() {
        // r² y'' + r y' - 4 y = 0 has y = r², checked on [0.01, 10].
        let sys = |r: f64, y: &[C64], dy: &mut [C64]| {
            dy[0] = y[1];
            dy[1] = (y[0] * 4.0 - y[1] * r) / (r * r);
            Ok(())
        };
        let y0 = [C64::new(1e-4, 0.0), C64::new(0.02, 0.0)];
        let (y, _) = integrate(sys, 0.01, 10.0, &y0, &OdeOptions::default()).unwrap();
        assert!((y[0].re - 100.0).abs() < 1e-7);
    }

    #[test]
    fn blowing_up_solution_underflows() {
        let r = integrate(
            |_, y, dy| {
                dy[0] = y[0] * y[0];
                Ok(())
            },
            0.0,
            2.0,
            &[C64::new(1.0, 0.0)],
            &OdeOptions::default(),
        );
        assert!(matches!(r, Err(Error::StepUnderflow { .. })));
    }
}
