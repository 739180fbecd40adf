//! Exact distributional Laplacians of the singular radial branches.
//!
//! For integer `s`, `∇² r^s = s² r^{s-2} + χ_p C_p ∇^{2p} δ` with `p = -s/2`,
//! `C_p = -4pπ / (2^{2p-1} (p!)²)` and `χ_p = 1` only for `p = 1, 2, 3, …`.
//! Multiplying by the harmonic `e^{imφ}` gives
//!
//! ```text
//! ∇²(r^s e^{imφ}) = (s² - m²) r^{s-2} e^{imφ}
//!     + [(1 - |m|/2) χ_p C_p + |m|/(8p²) χ_{p-1} C_{p-1}] r^{|m|} e^{imφ} ∇^{2p} δ,
//!   p = -(s - |m|)/2.
//! ```
//!
//! The anomalous term of the Schrödinger equation is `Q = -(ħ²/2μ) A` where
//! `A` is the delta part of `∇²ψ`.

mod delta;
pub mod exact;
mod pairing;

use num_traits::{One, Zero};

pub use delta::{
    reduce_to_cartesian, DeltaForm, DeltaSum, DeltaTerm, MultiIndex, Polynomial, RadialWeight,
};
pub use exact::{ExactComplex, Rational};
pub use pairing::{pair_exact, pair_with_testfn, OriginJet, PiSeries};

use crate::origin::{classify, Branch, Dimension, RadialProblem, Units};
use crate::{Error, Result};
use exact::{exact_real, factorial, integer, rational};

/// `C_p` (as a rational multiple of π) together with `χ_p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnomalyCoefficient {
    pub p: i64,
    /// `C_p / π`.
    pub c_over_pi: Rational,
    pub chi: u8,
}

impl AnomalyCoefficient {
    pub fn new(p: i64) -> Self {
        if p < 1 {
            return Self {
                p,
                c_over_pi: Rational::zero(),
                chi: 0,
            };
        }
        let pf = factorial(p as u32);
        let den = (1i128 << (2 * p - 1)) * pf * pf;
        Self {
            p,
            c_over_pi: rational(-4 * p as i128, den),
            chi: 1,
        }
    }

    /// `χ_p C_p / π`.
    pub fn value(&self) -> Rational {
        if self.chi == 1 {
            self.c_over_pi
        } else {
            Rational::zero()
        }
    }
}

/// `∇² r^s`: classical part `s² r^{s-2}` plus the delta anomaly.
#[derive(Debug, Clone, PartialEq)]
pub struct SchwartzLaplacian {
    pub classical_factor: i64,
    pub classical_exponent: i32,
    pub anomaly: DeltaSum,
}

pub fn schwartz_laplacian(s: i32) -> SchwartzLaplacian {
    let mut anomaly = DeltaSum::new();
    if s < 0 && s % 2 == 0 {
        let c = AnomalyCoefficient::new(-(s as i64) / 2);
        anomaly = DeltaSum::single(exact_real(c.value()), 1, DeltaForm::laplacian(c.p as u32));
    }
    SchwartzLaplacian {
        classical_factor: (s as i64) * (s as i64),
        classical_exponent: s - 2,
        anomaly,
    }
}

/// `∇²(r^s e^{imφ})`: classical part `(s² - m²) r^{s-2} e^{imφ}` plus the
/// anomaly in weighted iterated-Laplacian form.
#[derive(Debug, Clone, PartialEq)]
pub struct AngularLaplacian {
    pub classical_factor: i64,
    pub classical_exponent: i32,
    pub harmonic: i32,
    pub anomaly: DeltaSum,
}

pub fn angular_laplacian(s: i32, m: i32) -> AngularLaplacian {
    let abs_m = m.abs();
    let classical_factor = (s as i64) * (s as i64) - (m as i64) * (m as i64);
    let mut anomaly = DeltaSum::new();
    let shift = s - abs_m;
    if shift < 0 && shift % 2 == 0 {
        let p = -(shift as i64) / 2;
        let cp = AnomalyCoefficient::new(p);
        let cp1 = AnomalyCoefficient::new(p - 1);
        let first = (Rational::one() - rational(abs_m as i128, 2)) * cp.value();
        let second = rational(abs_m as i128, 8 * (p as i128) * (p as i128)) * cp1.value();
        let bracket = first + second;
        anomaly = DeltaSum::single(
            exact_real(bracket),
            1,
            DeltaForm::IteratedLaplacian {
                power: p as u32,
                weight: RadialWeight {
                    r_power: abs_m as u32,
                    harmonic: m,
                },
            },
        );
    }
    AngularLaplacian {
        classical_factor,
        classical_exponent: s - 2,
        harmonic: m,
        anomaly,
    }
}

/// The anomalous term of `Hψ = Eψ + Q`, stored at Laplacian level.
#[derive(Debug, Clone, PartialEq)]
pub struct AnomalousTerm {
    pub units: Units,
    /// `A = Q · (-2μ/ħ²)`, the delta part of `∇²ψ`.
    pub laplacian_part: DeltaSum,
}

impl AnomalousTerm {
    /// `-ħ²/(2μ)`, the factor turning [`Self::laplacian_part`] into `Q`.
    pub fn q_prefactor(&self) -> f64 {
        -self.units.kinetic_scale()
    }

    pub fn is_empty(&self) -> bool {
        self.laplacian_part.is_empty()
    }
}

/// `Q` for one branch of a 2D problem with leading amplitude `amplitude`
/// (`a₀` of the `r^{-|m|}` series, or `C` of `C ln kr` when `m = 0`).
///
/// The acceptable branch yields an empty sum. Three-dimensional problems
/// only carry the derivative-order pattern (see
/// [`OriginBehavior::q_pattern`](crate::origin::OriginBehavior)).
pub fn q_term(
    problem: &RadialProblem,
    branch: Branch,
    amplitude: ExactComplex,
) -> Result<AnomalousTerm> {
    if problem.dimension != Dimension::Two {
        return Err(Error::InvalidProblem(
            "anomaly coefficients are only available in 2D".into(),
        ));
    }
    let behavior = classify(problem)?;
    let units = problem.units;
    if branch == Branch::Acceptable {
        return Ok(AnomalousTerm {
            units,
            laplacian_part: DeltaSum::new(),
        });
    }
    if exact::is_zero(&amplitude) {
        return Err(Error::InvalidProblem(
            "singular amplitude must be non-zero".into(),
        ));
    }
    let laplacian_part = match behavior.unacceptable_exponent {
        // ∇² ln kr = 2π δ
        None => DeltaSum::single(amplitude * integer(2), 1, DeltaForm::DELTA),
        Some(s) => reduce_to_cartesian(&angular_laplacian(s, problem.quantum_number).anomaly)?
            .scale(amplitude),
    };
    Ok(AnomalousTerm {
        units,
        laplacian_part,
    })
}

#[cfg(test)]
mod tests;
