//! Evaluation kernels for integer-order `J_n` and `Y_n` on `x > 0`.
//!
//! Three regimes:
//! * `x <= SERIES_CROSSOVER`: ascending power series (compensated sums).
//! * `SERIES_CROSSOVER < x < ASYMPTOTIC_CROSSOVER`: Miller backward recurrence
//!   normalised by `J_0 + 2 Σ J_2k = 1`; `Y_0`, `Y_1` from Neumann series over
//!   the same sequence.
//! * `x >= ASYMPTOTIC_CROSSOVER`: Hankel asymptotic expansion for orders 0, 1.
//!
//! Higher orders of `Y` always come from forward recurrence, which is stable.

use alloc::vec;
use alloc::vec::Vec;

use crate::math::{cos, ln, sin, sqrt, KahanSum, EULER_GAMMA, FRAC_PI_4, PI};

/// Largest argument handled by the ascending series.
pub const SERIES_CROSSOVER: f64 = 6.0;
/// Smallest argument handled by the Hankel expansion.
pub const ASYMPTOTIC_CROSSOVER: f64 = 25.0;

const SERIES_MAX_TERMS: usize = 200;

/// `J_n(x)` by its ascending series.
pub(crate) fn j_series(n: u32, x: f64) -> f64 {
    let half = 0.5 * x;
    let q = -half * half;
    // (x/2)^n / n!
    let mut term = 1.0;
    for k in 1..=n {
        term *= half / k as f64;
    }
    let mut acc = KahanSum::new();
    acc.add(term);
    for k in 1..SERIES_MAX_TERMS {
        term *= q / (k as f64 * (n as f64 + k as f64));
        acc.add(term);
        if term.abs() <= 1e-18 * acc.value().abs() {
            break;
        }
    }
    acc.value()
}

/// `(Y_0(x), Y_1(x))` by their ascending series.
pub(crate) fn y01_series(x: f64) -> (f64, f64) {
    let half = 0.5 * x;
    let q = -half * half;
    let log_term = ln(half) + EULER_GAMMA;
    let j0 = j_series(0, x);
    let j1 = j_series(1, x);

    // Y0: -(2/pi) Σ_{k>=1} H_k q^k / (k!)^2
    let mut y0_tail = KahanSum::new();
    // Y1: Σ_{k>=0} [psi(k+1) + psi(k+2)] q^k / (k! (k+1)!)
    let mut y1_tail = KahanSum::new();
    let mut harmonic = 0.0; // H_k
    let mut term0 = 1.0; // q^k / (k!)^2
    let mut term1 = 1.0; // q^k / (k! (k+1)!)
    y1_tail.add((-2.0 * EULER_GAMMA + 1.0) * term1);
    for k in 1..SERIES_MAX_TERMS {
        let kf = k as f64;
        harmonic += 1.0 / kf;
        term0 *= q / (kf * kf);
        term1 *= q / (kf * (kf + 1.0));
        let t0 = harmonic * term0;
        let t1 = (2.0 * harmonic + 1.0 / (kf + 1.0) - 2.0 * EULER_GAMMA) * term1;
        y0_tail.add(t0);
        y1_tail.add(t1);
        if t0.abs() <= 1e-18 * y0_tail.value().abs() && t1.abs() <= 1e-18 * y1_tail.value().abs() {
            break;
        }
    }
    let y0 = (2.0 / PI) * (log_term * j0 - y0_tail.value());
    let y1 = -2.0 / (PI * x) + (2.0 / PI) * ln(half) * j1 - (half / PI) * y1_tail.value();
    (y0, y1)
}

/// Start index for the Miller recurrence: far enough beyond the turning point
/// `n ≈ x` that the discarded tail is below double precision.
fn miller_start(n_max: usize, x: f64) -> usize {
    let turning = x + 12.0 * libm::cbrt(x.max(1.0)) + 20.0;
    let start = (n_max as f64 + 20.0).max(turning) as usize;
    start + (start & 1)
}

/// `J_0(x) ..= J_{n_max}(x)` by Miller's backward recurrence.
pub(crate) fn j_miller(n_max: usize, x: f64) -> Vec<f64> {
    let start = miller_start(n_max, x);
    let mut seq = vec![0.0; start + 2];
    seq[start + 1] = 0.0;
    seq[start] = 1e-300;
    for k in (1..=start).rev() {
        seq[k - 1] = (2.0 * k as f64 / x) * seq[k] - seq[k + 1];
        if seq[k - 1].abs() > 1e250 {
            for v in seq.iter_mut().skip(k - 1) {
                *v *= 1e-250;
            }
        }
    }
    let mut norm = KahanSum::new();
    norm.add(seq[0]);
    for k in (2..=start).step_by(2) {
        norm.add(2.0 * seq[k]);
    }
    let scale = 1.0 / norm.value();
    seq.truncate(start + 1);
    for v in seq.iter_mut() {
        *v *= scale;
    }
    seq
}

/// `(Y_0, Y_1)` from Neumann series over a Miller sequence of `J_k(x)`.
pub(crate) fn y01_neumann(j: &[f64], x: f64) -> (f64, f64) {
    let log_term = ln(0.5 * x) + EULER_GAMMA;
    let mut s0 = KahanSum::new();
    let mut s1 = KahanSum::new();
    let mut k = 1;
    while 2 * k + 1 < j.len() {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let kf = k as f64;
        s0.add(sign * j[2 * k] / kf);
        s1.add(sign * (j[2 * k - 1] - j[2 * k + 1]) / kf);
        k += 1;
    }
    let y0 = (2.0 / PI) * log_term * j[0] - (4.0 / PI) * s0.value();
    let y1 = -(2.0 / PI) * j[0] / x + (2.0 / PI) * log_term * j[1] + (2.0 / PI) * s1.value();
    (y0, y1)
}

/// Hankel asymptotic `(J_ν(x), Y_ν(x))` for `ν ∈ {0, 1}`.
pub(crate) fn jy_asymptotic(order: u32, x: f64) -> (f64, f64) {
    let mu = 4.0 * (order * order) as f64;
    let mut p = KahanSum::new();
    let mut q = KahanSum::new();
    let mut a = 1.0; // a_k(ν) / x^k
    let mut last = f64::INFINITY;
    p.add(1.0);
    for k in 1..60 {
        let kf = k as f64;
        let odd = 2.0 * kf - 1.0;
        a *= (mu - odd * odd) / (kf * 8.0 * x);
        if a.abs() > last || a == 0.0 {
            break;
        }
        last = a.abs();
        // P = Σ (-1)^k a_{2k}, Q = Σ (-1)^k a_{2k+1}
        match k % 4 {
            0 => p.add(a),
            1 => q.add(a),
            2 => p.add(-a),
            _ => q.add(-a),
        }
        if a.abs() < 1e-17 {
            break;
        }
    }
    let chi = x - (0.5 * order as f64) * PI - FRAC_PI_4;
    let (s, c) = (sin(chi), cos(chi));
    let amp = sqrt(2.0 / (PI * x));
    let (p, q) = (p.value(), q.value());
    (amp * (p * c - q * s), amp * (p * s + q * c))
}

/// `J_0(x) ..= J_{n_max}(x)` for `x > 0`.
pub(crate) fn j_orders(n_max: usize, x: f64) -> Vec<f64> {
    if x <= SERIES_CROSSOVER {
        (0..=n_max).map(|n| j_series(n as u32, x)).collect()
    } else if x < ASYMPTOTIC_CROSSOVER || n_max as f64 > 0.5 * x {
        let mut seq = j_miller(n_max, x);
        seq.truncate(n_max + 1);
        seq
    } else {
        let (j0, _) = jy_asymptotic(0, x);
        let (j1, _) = jy_asymptotic(1, x);
        forward(j0, j1, n_max, x)
    }
}

/// `Y_0(x) ..= Y_{n_max}(x)` for `x > 0`.
pub(crate) fn y_orders(n_max: usize, x: f64) -> Vec<f64> {
    let (y0, y1) = if x <= SERIES_CROSSOVER {
        y01_series(x)
    } else if x < ASYMPTOTIC_CROSSOVER {
        let j = j_miller(1, x);
        y01_neumann(&j, x)
    } else {
        (jy_asymptotic(0, x).1, jy_asymptotic(1, x).1)
    };
    forward(y0, y1, n_max, x)
}

fn forward(f0: f64, f1: f64, n_max: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n_max + 1);
    out.push(f0);
    if n_max >= 1 {
        out.push(f1);
    }
    for n in 1..n_max {
        let next = (2.0 * n as f64 / x) * out[n] - out[n - 1];
        out.push(next);
    }
    out
}
