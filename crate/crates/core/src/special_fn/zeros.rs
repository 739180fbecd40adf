use alloc::vec::Vec;

use super::{eval, eval_derivative, CylinderFunction, CylinderKind};
use crate::math::PI;
use crate::{Error, Result};

/// 1-based index of a positive zero of a cylinder function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ZeroIndex {
    pub function: CylinderFunction,
    n: u32,
}

impl ZeroIndex {
    pub fn new(function: CylinderFunction, n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidProblem("zero index is 1-based".into()));
        }
        Ok(Self { function, n })
    }

    pub fn n(&self) -> u32 {
        self.n
    }
}

const SCAN_STEP: f64 = 0.2;

/// McMahon's leading-order estimate of the `n`-th zero.
fn mcmahon(f: CylinderFunction, n: u32) -> f64 {
    let order = f.order as f64;
    let mu = 4.0 * order * order;
    let shift = match f.kind {
        CylinderKind::BesselJ => 0.25,
        CylinderKind::NeumannY => 0.75,
    };
    let beta = (n as f64 + 0.5 * f.order as f64 - shift) * PI;
    beta - (mu - 1.0) / (8.0 * beta)
}

fn value(f: CylinderFunction, x: f64) -> f64 {
    // Scanning starts strictly inside the domain, so evaluation cannot fail.
    eval(f, x).unwrap_or(f64::NAN)
}

/// Bisection down to a narrow bracket, then safeguarded Newton.
fn refine(f: CylinderFunction, mut lo: f64, mut hi: f64) -> f64 {
    let mut f_lo = value(f, lo);
    if f_lo == 0.0 {
        return lo;
    }
    while hi - lo > 1e-6 {
        let mid = 0.5 * (lo + hi);
        let f_mid = value(f, mid);
        if f_mid == 0.0 {
            return mid;
        }
        if (f_mid < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..20 {
        let fx = value(f, x);
        let dfx = eval_derivative(f, x).unwrap_or(f64::NAN);
        if fx == 0.0 || dfx == 0.0 || !dfx.is_finite() {
            break;
        }
        let next = x - fx / dfx;
        if !(next > lo && next < hi) {
            break;
        }
        let done = (next - x).abs() <= 4.0 * f64::EPSILON * x;
        x = next;
        if done {
            break;
        }
    }
    x
}

/// The first `count` positive zeros of `f`, in increasing order.
pub fn zeros(f: CylinderFunction, count: u32) -> Vec<f64> {
    let mut out = Vec::with_capacity(count as usize);
    if count == 0 {
        return out;
    }
    // Neither J_m nor Y_m vanishes on (0, m].
    let mut lo = (f.order as f64).max(1e-3);
    let mut f_lo = value(f, lo);
    // The McMahon estimate bounds how far the scan must reach; the margin
    // absorbs its inaccuracy for the first few zeros of higher orders.
    let horizon = mcmahon(f, count) + 2.0 * PI + f.order as f64;
    while (out.len() as u32) < count {
        let hi = lo + SCAN_STEP;
        let f_hi = value(f, hi);
        if f_lo == 0.0 {
            out.push(lo);
        } else if (f_lo < 0.0) != (f_hi < 0.0) && f_hi != 0.0 {
            out.push(refine(f, lo, hi));
        }
        lo = hi;
        f_lo = f_hi;
        debug_assert!(lo < 4.0 * horizon + 100.0, "zero scan ran away");
    }
    out
}

/// The `n`-th positive zero.
pub fn zero(idx: ZeroIndex) -> f64 {
    zeros(idx.function, idx.n)[idx.n as usize - 1]
}
