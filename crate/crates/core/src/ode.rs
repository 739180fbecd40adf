//! Adaptive Dormand–Prince 5(4) integration of small real systems.
//!
//! Steps are clamped so every requested stop point is hit exactly; no dense
//! output is needed. The step observer sees every accepted step, which is how
//! the shooting solver counts nodes.

use alloc::vec::Vec;

use crate::math::powf;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    /// First trial step; `0` picks one from the span.
    pub initial_step: f64,
    /// Steps below `min_step_factor · |t|` count as underflow.
    pub min_step_factor: f64,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        Self {
            rtol: 1e-12,
            atol: 1e-300,
            initial_step: 0.0,
            min_step_factor: 1e-14,
            max_steps: 2_000_000,
        }
    }
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// b - b*: fifth- minus embedded fourth-order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

fn axpy<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    let mut out = *y;
    for (i, o) in out.iter_mut().enumerate() {
        let mut acc = 0.0;
        for (c, k) in terms {
            acc += c * k[i];
        }
        *o += h * acc;
    }
    out
}

/// Integrates `y' = f(t, y)` from `(t0, y0)` through the monotone `stops`
/// (all on the same side of `t0`), returning the state at each stop.
/// `observer(t, y)` is called after every accepted step.
pub fn integrate<const N: usize, F, O>(
    mut f: F,
    t0: f64,
    y0: [f64; N],
    stops: &[f64],
    opts: &OdeOptions,
    mut observer: O,
) -> Result<Vec<[f64; N]>>
where
    F: FnMut(f64, &[f64; N]) -> [f64; N],
    O: FnMut(f64, &[f64; N]),
{
    let mut out = Vec::with_capacity(stops.len());
    let Some(&last) = stops.last() else {
        return Ok(out);
    };
    let dir = if last >= t0 { 1.0 } else { -1.0 };
    let mut t = t0;
    let mut y = y0;
    let mut k1 = f(t, &y);
    let mut h = if opts.initial_step > 0.0 {
        opts.initial_step
    } else {
        1e-3 * (last - t0).abs().max(1e-300)
    };
    let mut steps = 0usize;
    for &stop in stops {
        if (stop - t) * dir < 0.0 {
            return Err(Error::InvalidProblem(
                "ODE stop points must be monotone".into(),
            ));
        }
        while (stop - t) * dir > 0.0 {
            steps += 1;
            if steps > opts.max_steps {
                return Err(Error::StiffnessFailure { r: t });
            }
            let remaining = (stop - t).abs();
            let clamped = h >= remaining;
            let step = if clamped { remaining } else { h };
            let hs = dir * step;
            let k2 = f(t + C2 * hs, &axpy(&y, hs, &[(A21, &k1)]));
            let k3 = f(t + C3 * hs, &axpy(&y, hs, &[(A31, &k1), (A32, &k2)]));
            let k4 = f(
                t + C4 * hs,
                &axpy(&y, hs, &[(A41, &k1), (A42, &k2), (A43, &k3)]),
            );
            let k5 = f(
                t + C5 * hs,
                &axpy(&y, hs, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
            );
            let k6 = f(
                t + hs,
                &axpy(
                    &y,
                    hs,
                    &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
                ),
            );
            let y_new = axpy(
                &y,
                hs,
                &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)],
            );
            let t_new = if clamped { stop } else { t + hs };
            let k7 = f(t_new, &y_new);
            let mut err = 0.0f64;
            for i in 0..N {
                let e = hs
                    * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
                let sc = opts.atol + opts.rtol * y[i].abs().max(y_new[i].abs());
                let q = e / sc;
                err += q * q;
            }
            let err = crate::math::sqrt(err / N as f64);
            if !err.is_finite() {
                h = step * 0.1;
            } else if err <= 1.0 {
                t = t_new;
                y = y_new;
                k1 = k7;
                observer(t, &y);
                let grow = if err == 0.0 {
                    5.0
                } else {
                    (0.9 * powf(err, -0.2)).clamp(0.2, 5.0)
                };
                // a clamped step says nothing about the natural step size
                h = if clamped {
                    h.max(step * grow)
                } else {
                    step * grow
                };
                continue;
            } else {
                h = step * (0.9 * powf(err, -0.2)).clamp(0.1, 1.0);
            }
            if h < opts.min_step_factor * t.abs().max(f64::MIN_POSITIVE) {
                return Err(Error::StiffnessFailure { r: t });
            }
        }
        out.push(y);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::{cos, exp, sin};

    #[test]
    fn harmonic_oscillator_hits_stops() {
        let stops: Vec<f64> = (1..=20).map(|i| 0.5 * i as f64).collect();
        let out = integrate(
            |_, y: &[f64; 2]| [y[1], -y[0]],
            0.0,
            [0.0, 1.0],
            &stops,
            &OdeOptions::default(),
            |_, _| {},
        )
        .unwrap();
        for (t, y) in stops.iter().zip(&out) {
            assert!((y[0] - sin(*t)).abs() < 1e-10, "t = {t}");
            assert!((y[1] - cos(*t)).abs() < 1e-10);
        }
    }

    #[test]
    fn backward_and_growth() {
        let out = integrate(
            |_, y: &[f64; 1]| [y[0]],
            2.0,
            [1.0],
            &[1.0, 0.0],
            &OdeOptions::default(),
            |_, _| {},
        )
        .unwrap();
        assert!((out[1][0] - exp(-2.0)).abs() < 1e-13);
    }

    #[test]
    fn observer_sees_monotone_steps() {
        let mut last = 0.0;
        let mut count = 0;
        integrate(
            |_, y: &[f64; 2]| [y[1], -y[0]],
            0.0,
            [0.0, 1.0],
            &[10.0],
            &OdeOptions::default(),
            |t, _| {
                assert!(t > last);
                last = t;
                count += 1;
            },
        )
        .unwrap();
        assert_eq!(last, 10.0);
        assert!(count > 10);
    }

    #[test]
    fn blow_up_is_reported() {
        // y' = y², y(0) = 1 blows up at t = 1
        let r = integrate(
            |_, y: &[f64; 1]| [y[0] * y[0]],
            0.0,
            [1.0],
            &[2.0],
            &OdeOptions::default(),
            |_, _| {},
        );
        assert!(matches!(r, Err(Error::StiffnessFailure { .. })));
    }
}
