//! Symbolic sums of delta-derivative terms with exact `rational · π^k`
//! coefficients.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};

use super::exact::{binomial, factorial, i_power, integer, is_zero, sign, ExactComplex};
use crate::{Error, Result};

/// Orders `(x, y)` of a Cartesian derivative `∂_x^x ∂_y^y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MultiIndex {
    pub x: u32,
    pub y: u32,
}

impl MultiIndex {
    pub const fn new(x: u32, y: u32) -> Self {
        Self { x, y }
    }

    pub fn order(&self) -> u32 {
        self.x + self.y
    }

    /// All multi-indices of total order `<= max_order`, canonically ordered.
    pub fn up_to(max_order: u32) -> Vec<Self> {
        let mut out = Vec::new();
        for n in 0..=max_order {
            for y in 0..=n {
                out.push(Self::new(n - y, y));
            }
        }
        out
    }

    /// Canonical ordering key: ascending total order, then x before y.
    fn key(&self) -> (u32, u32) {
        (self.order(), self.y)
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<core::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> core::cmp::Ordering {
        self.key().cmp(&other.key())
    }
}

/// The monomial weight `r^r_power e^{i·harmonic·φ}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RadialWeight {
    pub r_power: u32,
    pub harmonic: i32,
}

impl RadialWeight {
    pub const ONE: Self = Self {
        r_power: 0,
        harmonic: 0,
    };

    /// Expands the weight as a polynomial in `x, y`:
    /// `(x² + y²)^{(j-|m|)/2} (x ± i y)^{|m|}`. Fails unless `j ≥ |m|` with
    /// `j - |m|` even.
    pub fn polynomial(&self) -> Result<Polynomial> {
        let m = self.harmonic.unsigned_abs();
        if self.r_power < m || !(self.r_power - m).is_multiple_of(2) {
            return Err(Error::UnreducibleWeight {
                r_power: self.r_power,
                harmonic: self.harmonic,
            });
        }
        let mut harmonic = Polynomial::default();
        for b in 0..=m {
            let c = i_power(b, self.harmonic < 0) * integer(binomial(m, b));
            harmonic.add(m - b, b, c);
        }
        let mut out = harmonic;
        let r2 = {
            let mut p = Polynomial::default();
            p.add(2, 0, ExactComplex::one());
            p.add(0, 2, ExactComplex::one());
            p
        };
        for _ in 0..(self.r_power - m) / 2 {
            out = out.mul(&r2);
        }
        Ok(out)
    }
}

/// Polynomial in `x, y` with exact complex coefficients.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Polynomial {
    terms: BTreeMap<(u32, u32), ExactComplex>,
}

impl Polynomial {
    pub fn add(&mut self, a: u32, b: u32, c: ExactComplex) {
        let e = self.terms.entry((a, b)).or_insert_with(ExactComplex::zero);
        *e += c;
        if is_zero(e) {
            self.terms.remove(&(a, b));
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::default();
        for (&(a1, b1), c1) in &self.terms {
            for (&(a2, b2), c2) in &other.terms {
                out.add(a1 + a2, b1 + b2, *c1 * *c2);
            }
        }
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, u32, &ExactComplex)> {
        self.terms.iter().map(|(&(a, b), c)| (a, b, c))
    }

    /// `∂_x^a ∂_y^b P(0) = a! b! · [x^a y^b] P`.
    pub fn origin_derivative(&self, idx: MultiIndex) -> ExactComplex {
        match self.terms.get(&(idx.x, idx.y)) {
            Some(c) => *c * integer(factorial(idx.x) * factorial(idx.y)),
            None => ExactComplex::zero(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DeltaForm {
    /// `∂^α δ`.
    Cartesian(MultiIndex),
    /// `weight · ∇^{2·power} δ`.
    IteratedLaplacian { power: u32, weight: RadialWeight },
}

impl DeltaForm {
    pub const DELTA: Self = DeltaForm::Cartesian(MultiIndex::new(0, 0));

    pub fn cartesian(x: u32, y: u32) -> Self {
        DeltaForm::Cartesian(MultiIndex::new(x, y))
    }

    pub fn laplacian(power: u32) -> Self {
        DeltaForm::IteratedLaplacian {
            power,
            weight: RadialWeight::ONE,
        }
    }

    /// Highest derivative order of the test function this form touches.
    pub fn derivative_order(&self) -> u32 {
        match self {
            DeltaForm::Cartesian(idx) => idx.order(),
            DeltaForm::IteratedLaplacian { power, .. } => 2 * power,
        }
    }

    fn sort_key(&self) -> (u8, u32, u32, u32, i32) {
        match self {
            DeltaForm::Cartesian(idx) => (0, idx.order(), idx.y, 0, 0),
            DeltaForm::IteratedLaplacian { power, weight } => {
                (1, *power, weight.r_power, 0, weight.harmonic)
            }
        }
    }
}

/// One term `coefficient · π^pi_power · form`.
#[derive(Debug, Clone, PartialEq)]
pub struct DeltaTerm {
    pub coefficient: ExactComplex,
    pub pi_power: u32,
    pub form: DeltaForm,
}

/// A finite sum of delta terms at the origin of the plane.
///
/// Always held in normal form: terms sorted canonically, duplicates merged,
/// zero coefficients dropped. Equality is therefore term-by-term exact.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct DeltaSum {
    terms: Vec<DeltaTerm>,
}

impl DeltaSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_terms<I: IntoIterator<Item = DeltaTerm>>(terms: I) -> Self {
        let mut out = Self::new();
        for t in terms {
            out.push(t);
        }
        out
    }

    pub fn single(coefficient: ExactComplex, pi_power: u32, form: DeltaForm) -> Self {
        Self::from_terms([DeltaTerm {
            coefficient,
            pi_power,
            form,
        }])
    }

    /// The two-dimensional delta is the only one carried with coefficients.
    pub fn dimension(&self) -> u32 {
        2
    }

    pub fn terms(&self) -> &[DeltaTerm] {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn push(&mut self, term: DeltaTerm) {
        if is_zero(&term.coefficient) {
            return;
        }
        let key = (term.form.sort_key(), term.pi_power);
        match self
            .terms
            .binary_search_by(|t| (t.form.sort_key(), t.pi_power).cmp(&key))
        {
            Ok(i) => {
                let c = self.terms[i].coefficient + term.coefficient;
                if is_zero(&c) {
                    self.terms.remove(i);
                } else {
                    self.terms[i].coefficient = c;
                }
            }
            Err(i) => self.terms.insert(i, term),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for t in &other.terms {
            out.push(t.clone());
        }
        out
    }

    pub fn scale(&self, factor: ExactComplex) -> Self {
        Self::from_terms(self.terms.iter().map(|t| DeltaTerm {
            coefficient: t.coefficient * factor,
            ..t.clone()
        }))
    }

    pub fn conj(&self) -> Self {
        Self::from_terms(self.terms.iter().map(|t| DeltaTerm {
            coefficient: super::exact::conj(&t.coefficient),
            pi_power: t.pi_power,
            form: match t.form {
                DeltaForm::IteratedLaplacian { power, weight } => DeltaForm::IteratedLaplacian {
                    power,
                    weight: RadialWeight {
                        r_power: weight.r_power,
                        harmonic: -weight.harmonic,
                    },
                },
                f => f,
            },
        }))
    }

    /// Highest derivative order over all terms.
    pub fn derivative_order(&self) -> u32 {
        self.terms
            .iter()
            .map(|t| t.form.derivative_order())
            .max()
            .unwrap_or(0)
    }

    /// Coefficient of `∂^α δ` at a given power of π (zero if absent).
    pub fn coefficient(&self, form: DeltaForm, pi_power: u32) -> ExactComplex {
        self.terms
            .iter()
            .find(|t| t.form == form && t.pi_power == pi_power)
            .map(|t| t.coefficient)
            .unwrap_or_else(ExactComplex::zero)
    }

    pub fn is_cartesian(&self) -> bool {
        self.terms
            .iter()
            .all(|t| matches!(t.form, DeltaForm::Cartesian(_)))
    }
}

/// Rewrites every `r^j e^{imφ} ∇^{2p} δ` into pure Cartesian derivatives.
///
/// The weight is expanded as a polynomial and each monomial is absorbed by
/// the moment rule `x^a ∂_x^n δ = (-1)^a n!/(n-a)! ∂_x^{n-a} δ` (zero when
/// `a > n`), applied per axis.
pub fn reduce_to_cartesian(sum: &DeltaSum) -> Result<DeltaSum> {
    let mut out = DeltaSum::new();
    for term in sum.terms() {
        match term.form {
            DeltaForm::Cartesian(_) => out.push(term.clone()),
            DeltaForm::IteratedLaplacian { power, weight } => {
                let poly = weight.polynomial()?;
                for k in 0..=power {
                    let deriv = MultiIndex::new(2 * k, 2 * (power - k));
                    let lap = integer(binomial(power, k));
                    for (a, b, c) in poly.iter() {
                        if a > deriv.x || b > deriv.y {
                            continue;
                        }
                        let moment = sign(a + b)
                            * (factorial(deriv.x) / factorial(deriv.x - a))
                            * (factorial(deriv.y) / factorial(deriv.y - b));
                        out.push(DeltaTerm {
                            coefficient: term.coefficient * *c * lap * integer(moment),
                            pi_power: term.pi_power,
                            form: DeltaForm::cartesian(deriv.x - a, deriv.y - b),
                        });
                    }
                }
            }
        }
    }
    Ok(out)
}

impl fmt::Display for DeltaSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({} + {}i)", t.coefficient.re, t.coefficient.im)?;
            match t.pi_power {
                0 => {}
                1 => write!(f, "·pi")?,
                k => write!(f, "·pi^{k}")?,
            }
            match t.form {
                DeltaForm::Cartesian(idx) => {
                    write!(f, "·")?;
                    for _ in 0..idx.x {
                        write!(f, "d_x ")?;
                    }
                    for _ in 0..idx.y {
                        write!(f, "d_y ")?;
                    }
                    write!(f, "delta")?;
                }
                DeltaForm::IteratedLaplacian { power, weight } => write!(
                    f,
                    "·r^{} e^({}i phi)·lap^{} delta",
                    weight.r_power, weight.harmonic, power
                )?,
            }
        }
        Ok(())
    }
}

#[cfg(feature = "serde")]
mod serde_impl {
    use alloc::vec::Vec;

    use num_rational::Ratio;
    use serde::{Deserialize, Serialize};

    use super::*;

    /// Wire form: one flat record per term.
    #[derive(Serialize, Deserialize)]
    pub(super) struct TermRecord {
        coeff_re_num: i128,
        coeff_re_den: i128,
        coeff_im_num: i128,
        coeff_im_den: i128,
        pi_power: u32,
        /// `[x, y]` for Cartesian terms.
        multi_index: Option<[u32; 2]>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        laplacian_power: Option<u32>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        weight_r_power: Option<u32>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        weight_harmonic: Option<i32>,
    }

    #[derive(Serialize, Deserialize)]
    pub(super) struct SumRecord {
        dimension: u32,
        terms: Vec<TermRecord>,
    }

    impl From<&DeltaSum> for SumRecord {
        fn from(sum: &DeltaSum) -> Self {
            let terms = sum
                .terms()
                .iter()
                .map(|t| {
                    let (multi_index, laplacian_power, weight_r_power, weight_harmonic) =
                        match t.form {
                            DeltaForm::Cartesian(idx) => (Some([idx.x, idx.y]), None, None, None),
                            DeltaForm::IteratedLaplacian { power, weight } => (
                                None,
                                Some(power),
                                Some(weight.r_power),
                                Some(weight.harmonic),
                            ),
                        };
                    TermRecord {
                        coeff_re_num: *t.coefficient.re.numer(),
                        coeff_re_den: *t.coefficient.re.denom(),
                        coeff_im_num: *t.coefficient.im.numer(),
                        coeff_im_den: *t.coefficient.im.denom(),
                        pi_power: t.pi_power,
                        multi_index,
                        laplacian_power,
                        weight_r_power,
                        weight_harmonic,
                    }
                })
                .collect();
            SumRecord {
                dimension: sum.dimension(),
                terms,
            }
        }
    }

    impl TryFrom<SumRecord> for DeltaSum {
        type Error = &'static str;

        fn try_from(rec: SumRecord) -> core::result::Result<Self, Self::Error> {
            if rec.dimension != 2 {
                return Err("only two-dimensional delta sums carry coefficients");
            }
            let mut out = DeltaSum::new();
            for t in rec.terms {
                if t.coeff_re_den == 0 || t.coeff_im_den == 0 {
                    return Err("zero denominator");
                }
                let form = match (t.multi_index, t.laplacian_power) {
                    (Some([x, y]), None) => DeltaForm::cartesian(x, y),
                    (None, Some(power)) => DeltaForm::IteratedLaplacian {
                        power,
                        weight: RadialWeight {
                            r_power: t.weight_r_power.unwrap_or(0),
                            harmonic: t.weight_harmonic.unwrap_or(0),
                        },
                    },
                    _ => return Err("term needs exactly one of multi_index or laplacian_power"),
                };
                out.push(DeltaTerm {
                    coefficient: ExactComplex::new(
                        Ratio::new(t.coeff_re_num, t.coeff_re_den),
                        Ratio::new(t.coeff_im_num, t.coeff_im_den),
                    ),
                    pi_power: t.pi_power,
                    form,
                });
            }
            Ok(out)
        }
    }

    impl Serialize for DeltaSum {
        fn serialize<S: serde::Serializer>(&self, s: S) -> core::result::Result<S::Ok, S::Error> {
            SumRecord::from(self).serialize(s)
        }
    }

    impl<'de> Deserialize<'de> for DeltaSum {
        fn deserialize<D: serde::Deserializer<'de>>(d: D) -> core::result::Result<Self, D::Error> {
            let rec = SumRecord::deserialize(d)?;
            DeltaSum::try_from(rec).map_err(serde::de::Error::custom)
        }
    }
}
