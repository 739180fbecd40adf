//! Behaviour of radial solutions at `r = 0` for regular central potentials.
//!
//! In 2D the radial equation
//! `R'' + R'/r - m²R/r² + (2μ/ħ²)(E - V)R = 0`
//! has indicial exponents `±|m|`, degenerating to `{r⁰, ln kr}` at `m = 0`.
//! In 3D (`R'' + 2R'/r - l(l+1)R/r² + …`) they are `l` and `-(l+1)`. The branch
//! with the non-negative exponent is finite at the origin and is the only
//! acceptable one; the other injects a delta term into the full equation.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;

use crate::math::{ln, powf, sqrt};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Dimension {
    #[cfg_attr(feature = "serde", serde(rename = "2d"))]
    Two,
    #[cfg_attr(feature = "serde", serde(rename = "3d"))]
    Three,
}

impl Dimension {
    pub fn value(self) -> u32 {
        match self {
            Dimension::Two => 2,
            Dimension::Three => 3,
        }
    }
}

/// Reduced Planck constant and particle mass. Defaults to `ħ = μ = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Units {
    pub hbar: f64,
    pub mass: f64,
}

impl Default for Units {
    fn default() -> Self {
        Self {
            hbar: 1.0,
            mass: 1.0,
        }
    }
}

impl Units {
    pub fn new(hbar: f64, mass: f64) -> Result<Self> {
        if !(hbar > 0.0 && hbar.is_finite() && mass > 0.0 && mass.is_finite()) {
            return Err(Error::InvalidProblem(
                "hbar and mass must be positive and finite".into(),
            ));
        }
        Ok(Self { hbar, mass })
    }

    /// `2μ/ħ²`, the factor converting energies into squared wavenumbers.
    pub fn kappa(&self) -> f64 {
        2.0 * self.mass / (self.hbar * self.hbar)
    }

    /// `ħ²/(2μ)`.
    pub fn kinetic_scale(&self) -> f64 {
        1.0 / self.kappa()
    }
}

/// Potential sampled on strictly increasing radii `r > 0`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TabulatedPotential {
    r: Vec<f64>,
    v: Vec<f64>,
}

impl TabulatedPotential {
    pub fn new(r: Vec<f64>, v: Vec<f64>) -> Result<Self> {
        if r.len() != v.len() || r.len() < 3 {
            return Err(Error::InvalidPotential(
                "tabulated potential needs at least three (r, V) samples".into(),
            ));
        }
        if !(r[0] > 0.0) || r.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidPotential(
                "tabulated radii must be positive and strictly increasing".into(),
            ));
        }
        if v.iter().chain(&r).any(|x| !x.is_finite()) {
            return Err(Error::InvalidPotential(
                "tabulated values must be finite".into(),
            ));
        }
        Ok(Self { r, v })
    }

    pub fn radii(&self) -> &[f64] {
        &self.r
    }

    pub fn values(&self) -> &[f64] {
        &self.v
    }

    /// Least-squares power law `|V| ≈ c r^k` through the three innermost
    /// samples; `None` when they vanish or change sign.
    fn inner_power_law(&self) -> Option<(f64, f64)> {
        let (r, v) = (&self.r[..3], &self.v[..3]);
        let sign = v[0].signum();
        if v.iter().any(|&x| x == 0.0 || x.signum() != sign) {
            return None;
        }
        let xs: Vec<f64> = r.iter().map(|&x| ln(x)).collect();
        let ys: Vec<f64> = v.iter().map(|&x| ln(x.abs())).collect();
        let xm = xs.iter().sum::<f64>() / 3.0;
        let ym = ys.iter().sum::<f64>() / 3.0;
        let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - xm) * (y - ym)).sum();
        let sxx: f64 = xs.iter().map(|x| (x - xm) * (x - xm)).sum();
        let k = sxy / sxx;
        let c = sign * crate::math::exp(ym - k * xm);
        Some((c, k))
    }

    fn value(&self, r: f64) -> f64 {
        let n = self.r.len();
        if r <= self.r[0] {
            return match self.inner_power_law() {
                Some((c, k)) => c * powf(r, k),
                None => self.v[0],
            };
        }
        if r >= self.r[n - 1] {
            return self.v[n - 1];
        }
        let i = self.r.partition_point(|&x| x <= r) - 1;
        let t = (r - self.r[i]) / (self.r[i + 1] - self.r[i]);
        self.v[i] + t * (self.v[i + 1] - self.v[i])
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "form", rename_all = "snake_case"))]
pub enum PotentialSpec {
    Zero,
    /// `V = 0` for `r < radius`, infinite outside.
    InfiniteCircularWell {
        radius: f64,
    },
    /// `V = coefficient · r^exponent`.
    PowerLaw {
        coefficient: f64,
        exponent: f64,
    },
    /// `V = -strength / r`.
    Coulomb2D {
        strength: f64,
    },
    Tabulated(TabulatedPotential),
}

impl PotentialSpec {
    pub fn well(radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidPotential(
                "well radius must be positive".into(),
            ));
        }
        Ok(Self::InfiniteCircularWell { radius })
    }

    /// Rejects exponents `k <= -2`, for which `r²V` does not vanish.
    pub fn power_law(coefficient: f64, exponent: f64) -> Result<Self> {
        if !(coefficient.is_finite() && exponent.is_finite()) {
            return Err(Error::InvalidPotential(
                "power-law parameters must be finite".into(),
            ));
        }
        if exponent <= -2.0 && coefficient != 0.0 {
            return Err(Error::IrregularPotential);
        }
        Ok(Self::PowerLaw {
            coefficient,
            exponent,
        })
    }

    pub fn coulomb_2d(strength: f64) -> Result<Self> {
        if !(strength > 0.0 && strength.is_finite()) {
            return Err(Error::InvalidPotential(
                "Coulomb strength must be positive".into(),
            ));
        }
        Ok(Self::Coulomb2D { strength })
    }

    /// `V(r)`; infinite outside a well.
    pub fn value(&self, r: f64) -> f64 {
        match self {
            PotentialSpec::Zero => 0.0,
            PotentialSpec::InfiniteCircularWell { radius } => {
                if r < *radius {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
            PotentialSpec::PowerLaw {
                coefficient,
                exponent,
            } => coefficient * powf(r, *exponent),
            PotentialSpec::Coulomb2D { strength } => -strength / r,
            PotentialSpec::Tabulated(t) => t.value(r),
        }
    }

    /// Radius of the hard wall, if any.
    pub fn wall_radius(&self) -> Option<f64> {
        match self {
            PotentialSpec::InfiniteCircularWell { radius } => Some(*radius),
            _ => None,
        }
    }

    /// Taylor weights `w_i` of `r²·κ(E - V(r)) = Σ_{i≥1} w_i r^i`, with
    /// `κ = 2μ/ħ²`, when that expansion runs over integer powers.
    fn series_weights(&self, energy: f64, kappa: f64) -> (Vec<f64>, bool) {
        let mut w = vec![0.0; 3];
        w[2] = kappa * energy;
        let exact = match self {
            PotentialSpec::Zero | PotentialSpec::InfiniteCircularWell { .. } => true,
            PotentialSpec::Coulomb2D { strength } => {
                w[1] = kappa * strength;
                true
            }
            PotentialSpec::PowerLaw {
                coefficient,
                exponent,
            } => {
                let shifted = exponent + 2.0;
                if libm::fabs(shifted - libm::round(shifted)) < 1e-12 && shifted >= 1.0 {
                    let i = libm::round(shifted) as usize;
                    if w.len() <= i {
                        w.resize(i + 1, 0.0);
                    }
                    w[i] -= kappa * coefficient;
                    true
                } else {
                    *coefficient == 0.0
                }
            }
            PotentialSpec::Tabulated(_) => false,
        };
        (w, exact)
    }
}

/// `true` iff `r²V(r) → 0` as `r → 0`.
///
/// Tabulated potentials are judged from a power law through the three
/// innermost samples; when those vanish or change sign, `r²|V|` must shrink
/// towards the origin across them.
pub fn check_regular(potential: &PotentialSpec) -> bool {
    match potential {
        PotentialSpec::Zero
        | PotentialSpec::InfiniteCircularWell { .. }
        | PotentialSpec::Coulomb2D { .. } => true,
        PotentialSpec::PowerLaw {
            coefficient,
            exponent,
        } => *coefficient == 0.0 || *exponent > -2.0,
        PotentialSpec::Tabulated(t) => match t.inner_power_law() {
            Some((_, k)) => k > -2.0,
            None => {
                let s: Vec<f64> = t.r[..3]
                    .iter()
                    .zip(&t.v[..3])
                    .map(|(r, v)| r * r * v.abs())
                    .collect();
                s[0] <= s[1] && s[1] <= s[2]
            }
        },
    }
}

/// A central-potential problem: the setting of the radial equation.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RadialProblem {
    pub dimension: Dimension,
    /// `m` in 2D (any sign), `l ≥ 0` in 3D.
    pub quantum_number: i32,
    pub units: Units,
    pub potential: PotentialSpec,
}

impl RadialProblem {
    pub fn new(
        dimension: Dimension,
        quantum_number: i32,
        units: Units,
        potential: PotentialSpec,
    ) -> Result<Self> {
        if dimension == Dimension::Three && quantum_number < 0 {
            return Err(Error::InvalidProblem(String::from(
                "3D problems need l >= 0",
            )));
        }
        Units::new(units.hbar, units.mass)?;
        Ok(Self {
            dimension,
            quantum_number,
            units,
            potential,
        })
    }

    pub fn two_d(m: i32, potential: PotentialSpec) -> Self {
        Self {
            dimension: Dimension::Two,
            quantum_number: m,
            units: Units::default(),
            potential,
        }
    }

    pub fn three_d(l: u32, potential: PotentialSpec) -> Self {
        Self {
            dimension: Dimension::Three,
            quantum_number: l as i32,
            units: Units::default(),
            potential,
        }
    }

    pub fn with_units(mut self, units: Units) -> Self {
        self.units = units;
        self
    }

    /// `|m|` in 2D, `l` in 3D.
    pub fn order(&self) -> u32 {
        self.quantum_number.unsigned_abs()
    }

    /// Coefficient of `R/r²` in the radial equation: `m²` or `l(l+1)`.
    pub fn centrifugal(&self) -> f64 {
        let q = self.quantum_number as f64;
        match self.dimension {
            Dimension::Two => q * q,
            Dimension::Three => q * (q + 1.0),
        }
    }

    /// Coefficient of `R'/r`: `d - 1`.
    pub fn first_order_coefficient(&self) -> f64 {
        (self.dimension.value() - 1) as f64
    }
}

/// Leading small-`r` form of one radial branch.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "form", rename_all = "snake_case"))]
pub enum LeadingForm {
    /// `r^exponent`.
    Power { exponent: i32 },
    /// `ln(k r)`.
    Log { scale: f64 },
}

impl fmt::Display for LeadingForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LeadingForm::Power { exponent } => write!(f, "r^{exponent}"),
            LeadingForm::Log { .. } => write!(f, "ln kr"),
        }
    }
}

/// Derivative order of the delta carried by the anomalous term `Q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DeltaPattern {
    pub dimension: Dimension,
    pub derivative_order: u32,
}

impl fmt::Display for DeltaPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        const INDICES: [&str; 4] = ["", "i", "ij", "ijk"];
        let d = self.dimension.value();
        match self.derivative_order {
            0 => write!(f, "delta^({d})(r)"),
            n @ 1..=3 => write!(f, "d_{} delta^({d})(r)", INDICES[n as usize]),
            n => write!(f, "d^{n} delta^({d})(r)"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct OriginBehavior {
    pub dimension: Dimension,
    pub quantum_number: i32,
    /// Exponent of the acceptable branch, `|m|` or `l`.
    pub acceptable_exponent: i32,
    /// Exponent of the singular power branch; absent for the 2D `m = 0` log.
    pub unacceptable_exponent: Option<i32>,
    pub has_log_branch: bool,
    pub acceptable: LeadingForm,
    pub unacceptable: LeadingForm,
    /// `k` in `ln kr`, conventionally 1.
    pub log_scale: Option<f64>,
    pub q_pattern: DeltaPattern,
}

impl OriginBehavior {
    /// Whether `R(0)` is finite on the given branch.
    pub fn finite_at_origin(form: LeadingForm) -> bool {
        matches!(form, LeadingForm::Power { exponent } if exponent >= 0)
    }
}

/// Frobenius classification of both branches at the origin.
pub fn classify(problem: &RadialProblem) -> Result<OriginBehavior> {
    if !check_regular(&problem.potential) {
        return Err(Error::IrregularPotential);
    }
    let order = problem.order() as i32;
    let (unacceptable_exponent, has_log_branch) = match problem.dimension {
        Dimension::Two if order == 0 => (None, true),
        Dimension::Two => (Some(-order), false),
        Dimension::Three => (Some(-(order + 1)), false),
    };
    let unacceptable = match unacceptable_exponent {
        Some(exponent) => LeadingForm::Power { exponent },
        None => LeadingForm::Log { scale: 1.0 },
    };
    Ok(OriginBehavior {
        dimension: problem.dimension,
        quantum_number: problem.quantum_number,
        acceptable_exponent: order,
        unacceptable_exponent,
        has_log_branch,
        acceptable: LeadingForm::Power { exponent: order },
        unacceptable,
        log_scale: has_log_branch.then_some(1.0),
        q_pattern: DeltaPattern {
            dimension: problem.dimension,
            derivative_order: order as u32,
        },
    })
}

/// Coefficient of the dominant `r^{s-2}` term after inserting `r^s`:
/// `s² - m²` (2D) or `s(s+1) - l(l+1)` (3D).
pub fn indicial_residual(problem: &RadialProblem, s: f64) -> f64 {
    match problem.dimension {
        Dimension::Two => s * s - problem.centrifugal(),
        Dimension::Three => s * (s + 1.0) - problem.centrifugal(),
    }
}

/// The 1D form `-ħ²/(2μ) u'' + V_eff u = E u` with `u = R√r` (2D) or
/// `u = R r` (3D).
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct UTransform {
    pub dimension: Dimension,
    pub quantum_number: i32,
    pub units: Units,
    pub potential: PotentialSpec,
    /// `c` in `V_eff = V + c ħ²/(2μr²)`: `m² - 1/4` or `l(l+1)`.
    pub centrifugal_coefficient: f64,
    /// 2D `m = 0`: the log branch has `u(0) = 0` although `R(0)` diverges.
    pub boundary_condition_exception: bool,
}

impl UTransform {
    pub fn effective_potential(&self, r: f64) -> f64 {
        self.potential.value(r)
            + self.centrifugal_coefficient * self.units.kinetic_scale() / (r * r)
    }

    /// `u(r)` from `R(r)`.
    pub fn u_from_radial(&self, r: f64, radial: f64) -> f64 {
        match self.dimension {
            Dimension::Two => radial * sqrt(r),
            Dimension::Three => radial * r,
        }
    }

    pub fn radial_from_u(&self, r: f64, u: f64) -> f64 {
        match self.dimension {
            Dimension::Two => u / sqrt(r),
            Dimension::Three => u / r,
        }
    }

    pub fn sample_u(&self, r: &[f64], radial: &[f64]) -> Vec<f64> {
        r.iter()
            .zip(radial)
            .map(|(&r, &rad)| self.u_from_radial(r, rad))
            .collect()
    }
}

pub fn u_transform(problem: &RadialProblem) -> UTransform {
    let centrifugal_coefficient = match problem.dimension {
        Dimension::Two => problem.centrifugal() - 0.25,
        Dimension::Three => problem.centrifugal(),
    };
    UTransform {
        dimension: problem.dimension,
        quantum_number: problem.quantum_number,
        units: problem.units,
        potential: problem.potential.clone(),
        centrifugal_coefficient,
        boundary_condition_exception: problem.dimension == Dimension::Two
            && problem.quantum_number == 0,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Branch {
    Acceptable,
    Unacceptable,
}

/// `R(r) = r^s Σ_{k=0}^{K} a_k r^k` near the origin.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FrobeniusSeries {
    pub leading_exponent: i32,
    pub coefficients: Vec<Complex64>,
    /// The recurrence hit a resonant index where a `ln r` term enters; the
    /// series stops just before it.
    pub truncated_at_resonance: bool,
    /// `false` when the potential has no integer-power expansion and only the
    /// energy term entered the recurrence.
    pub exact: bool,
}

pub const DEFAULT_SERIES_ORDER: usize = 12;

impl FrobeniusSeries {
    /// A bare series from explicit coefficients.
    pub fn new(leading_exponent: i32, coefficients: Vec<Complex64>) -> Result<Self> {
        if coefficients
            .first()
            .is_none_or(|a| *a == Complex64::new(0.0, 0.0))
        {
            return Err(Error::InvalidProblem(
                "Frobenius series needs a0 != 0".into(),
            ));
        }
        Ok(Self {
            leading_exponent,
            coefficients,
            truncated_at_resonance: false,
            exact: true,
        })
    }

    pub fn a0(&self) -> Complex64 {
        self.coefficients[0]
    }

    /// `(R, R', R'')` at `r > 0`.
    pub fn eval_with_derivatives(&self, r: f64) -> (Complex64, Complex64, Complex64) {
        let mut v = Complex64::new(0.0, 0.0);
        let mut d1 = v;
        let mut d2 = v;
        for (k, a) in self.coefficients.iter().enumerate() {
            let p = (self.leading_exponent + k as i32) as f64;
            let rp = crate::math::powi(r, self.leading_exponent + k as i32);
            v += a * rp;
            d1 += a * (p * rp / r);
            d2 += a * (p * (p - 1.0) * rp / (r * r));
        }
        (v, d1, d2)
    }

    pub fn eval(&self, r: f64) -> Complex64 {
        self.eval_with_derivatives(r).0
    }
}

/// Frobenius coefficients of one branch at energy `energy`, normalised to
/// the given `a0`, up to `order` terms beyond the leading one.
///
/// The 2D `m = 0` log branch has no pure power series and is rejected.
pub fn frobenius_series(
    problem: &RadialProblem,
    energy: f64,
    branch: Branch,
    a0: Complex64,
    order: usize,
) -> Result<FrobeniusSeries> {
    let behavior = classify(problem)?;
    let s = match branch {
        Branch::Acceptable => behavior.acceptable_exponent,
        Branch::Unacceptable => behavior.unacceptable_exponent.ok_or_else(|| {
            Error::InvalidProblem("the m = 0 log branch has no power series".into())
        })?,
    };
    if a0 == Complex64::new(0.0, 0.0) {
        return Err(Error::InvalidProblem(
            "Frobenius series needs a0 != 0".into(),
        ));
    }
    let (weights, exact) = problem
        .potential
        .series_weights(energy, problem.units.kappa());
    let mut coefficients = vec![a0];
    let mut truncated_at_resonance = false;
    for j in 1..=order {
        let mut rhs = Complex64::new(0.0, 0.0);
        for (i, w) in weights.iter().enumerate().skip(1) {
            if i > j {
                break;
            }
            rhs -= coefficients[j - i] * *w;
        }
        let d = indicial_residual(problem, (s + j as i32) as f64);
        if d == 0.0 {
            if rhs.norm() > 1e-300 {
                truncated_at_resonance = true;
                break;
            }
            coefficients.push(Complex64::new(0.0, 0.0));
        } else {
            coefficients.push(rhs / d);
        }
    }
    Ok(FrobeniusSeries {
        leading_exponent: s,
        coefficients,
        truncated_at_resonance,
        exact,
    })
}
