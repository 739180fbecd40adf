//! Action of delta sums on smooth test functions.
//!
//! `⟨∂^α δ, φ⟩ = (-1)^{|α|} ∂^α φ(0)` and, for weighted iterated Laplacians,
//! `⟨w ∇^{2p} δ, φ⟩ = ∇^{2p}(w φ)(0)` expanded by the Leibniz rule. The
//! weighted route never passes through the moment rules used by
//! [`reduce_to_cartesian`](super::reduce_to_cartesian), so comparing the two
//! checks the reduction.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::Zero;

use super::delta::{DeltaForm, DeltaSum, MultiIndex};
use super::exact::{binomial, integer, is_zero, sign, to_complex64, ExactComplex, Rational};
use crate::math::{powi, PI};
use crate::{Error, Result};

/// Derivatives of a test function at the origin.
pub trait OriginJet {
    /// Highest total derivative order available.
    fn max_derivative_order(&self) -> u32;

    /// `∂^α φ(0)` in floating point.
    fn origin_derivative(&self, idx: MultiIndex) -> f64;

    /// `∂^α φ(0)` exactly, when the probe has rational parameters.
    fn origin_derivative_exact(&self, _idx: MultiIndex) -> Option<Rational> {
        None
    }
}

/// Exact pairing value: a polynomial in π with Gaussian-rational
/// coefficients, keyed by the power of π.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PiSeries(BTreeMap<u32, ExactComplex>);

impl PiSeries {
    fn add(&mut self, pi_power: u32, c: ExactComplex) {
        let e = self.0.entry(pi_power).or_insert_with(ExactComplex::zero);
        *e += c;
        if is_zero(e) {
            self.0.remove(&pi_power);
        }
    }

    pub fn coefficient(&self, pi_power: u32) -> ExactComplex {
        self.0
            .get(&pi_power)
            .copied()
            .unwrap_or_else(ExactComplex::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn to_complex(&self) -> Complex64 {
        self.0
            .iter()
            .map(|(&k, c)| to_complex64(c) * powi(PI, k as i32))
            .sum()
    }
}

/// The functional of a delta sum written as `Σ c · π^k · ∂^α φ(0)`.
fn functional(sum: &DeltaSum) -> Result<Vec<(ExactComplex, u32, MultiIndex)>> {
    let mut out = Vec::new();
    for term in sum.terms() {
        match term.form {
            DeltaForm::Cartesian(idx) => {
                out.push((
                    term.coefficient * integer(sign(idx.order())),
                    term.pi_power,
                    idx,
                ));
            }
            DeltaForm::IteratedLaplacian { power, weight } => {
                let poly = weight.polynomial()?;
                for k in 0..=power {
                    let alpha = MultiIndex::new(2 * k, 2 * (power - k));
                    let lap = integer(binomial(power, k));
                    for (bx, by, _) in poly.iter() {
                        if bx > alpha.x || by > alpha.y {
                            continue;
                        }
                        let w = poly.origin_derivative(MultiIndex::new(bx, by));
                        let leibniz = integer(binomial(alpha.x, bx) * binomial(alpha.y, by));
                        out.push((
                            term.coefficient * w * lap * leibniz,
                            term.pi_power,
                            MultiIndex::new(alpha.x - bx, alpha.y - by),
                        ));
                    }
                }
            }
        }
    }
    Ok(out)
}

fn check_order<P: OriginJet + ?Sized>(
    items: &[(ExactComplex, u32, MultiIndex)],
    probe: &P,
) -> Result<()> {
    let needed = items
        .iter()
        .map(|(_, _, idx)| idx.order())
        .max()
        .unwrap_or(0);
    let available = probe.max_derivative_order();
    if needed > available {
        return Err(Error::InsufficientDerivativeOrder { needed, available });
    }
    Ok(())
}

/// `⟨d, φ⟩` in floating point.
pub fn pair_with_testfn<P: OriginJet + ?Sized>(sum: &DeltaSum, probe: &P) -> Result<Complex64> {
    let items = functional(sum)?;
    check_order(&items, probe)?;
    Ok(items
        .iter()
        .map(|(c, k, idx)| to_complex64(c) * powi(PI, *k as i32) * probe.origin_derivative(*idx))
        .sum())
}

/// `⟨d, φ⟩` exactly. Returns `None` when the probe has no exact jet.
pub fn pair_exact<P: OriginJet + ?Sized>(sum: &DeltaSum, probe: &P) -> Result<Option<PiSeries>> {
    let items = functional(sum)?;
    check_order(&items, probe)?;
    let mut out = PiSeries::default();
    for (c, k, idx) in items {
        let Some(d) = probe.origin_derivative_exact(idx) else {
            return Ok(None);
        };
        out.add(k, c * d);
    }
    Ok(Some(out))
}
