//! Gaussian test functions with closed-form derivatives.
//!
//! `φ(x, y) = x^a y^b exp(-(x² + y²) / 2σ²)` factorises into two 1D factors
//! `h(x) = x^a exp(-x²/2s)`, `s = σ²`, and `h^{(n)} = P_n(x) exp(-x²/2s)` with
//! `P_0 = x^a`, `P_{n+1} = P_n' - (x/s) P_n`.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Mul, Sub};

use num_traits::{One, Zero};

use crate::anomaly::exact::{integer, to_f64};
use crate::anomaly::{MultiIndex, OriginJet, Rational};
use crate::math::{exp, sqrt};
use crate::{Error, Result};

/// Highest total derivative order the probes provide.
pub const MAX_DERIVATIVE_ORDER: u32 = 6;

/// Highest monomial order `a + b`.
pub const MAX_MONOMIAL_ORDER: u32 = 4;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "family", rename_all = "snake_case"))]
pub enum ProbeFamily {
    Gaussian {
        sigma: f64,
    },
    MonomialGaussian {
        sigma: f64,
        x_power: u32,
        y_power: u32,
    },
}

impl fmt::Display for ProbeFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ProbeFamily::Gaussian { sigma } => write!(f, "G(sigma={sigma})"),
            ProbeFamily::MonomialGaussian {
                sigma,
                x_power,
                y_power,
            } => {
                write!(f, "x^{x_power} y^{y_power} G(sigma={sigma})")
            }
        }
    }
}

type Jet<T> = Vec<Vec<T>>;

#[derive(Debug, Clone, PartialEq)]
pub struct TestFunction {
    family: ProbeFamily,
    inv_var: f64,
    x_jet: Jet<f64>,
    y_jet: Jet<f64>,
    exact: Option<(Jet<Rational>, Jet<Rational>)>,
}

/// `P_0..=P_max` for `h(x) = x^power exp(-x² inv_var / 2)`, coefficients in
/// ascending powers of `x`.
fn axis_jet<T>(power: u32, inv_var: T, max: u32) -> Jet<T>
where
    T: Clone + Zero + One + Sub<Output = T> + Mul<Output = T> + From<i32>,
{
    let mut p = vec![T::zero(); power as usize + 1];
    p[power as usize] = T::one();
    let mut out = vec![p];
    for _ in 0..max {
        let prev = out.last().unwrap();
        let mut next = vec![T::zero(); prev.len() + 1];
        for (k, c) in prev.iter().enumerate() {
            if k > 0 {
                next[k - 1] = next[k - 1].clone() + c.clone() * T::from(k as i32);
            }
            next[k + 1] = next[k + 1].clone() - c.clone() * inv_var.clone();
        }
        out.push(next);
    }
    out
}

/// Newtype so `Rational` gets the `From<i32>` the recursion needs.
#[derive(Clone, PartialEq)]
struct Q(Rational);

impl From<i32> for Q {
    fn from(n: i32) -> Self {
        Q(integer(n as i128))
    }
}
impl Zero for Q {
    fn zero() -> Self {
        Q(Rational::zero())
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}
impl One for Q {
    fn one() -> Self {
        Q(Rational::one())
    }
}
impl core::ops::Add for Q {
    type Output = Q;
    fn add(self, o: Q) -> Q {
        Q(self.0 + o.0)
    }
}
impl Sub for Q {
    type Output = Q;
    fn sub(self, o: Q) -> Q {
        Q(self.0 - o.0)
    }
}
impl Mul for Q {
    type Output = Q;
    fn mul(self, o: Q) -> Q {
        Q(self.0 * o.0)
    }
}

fn horner(p: &[f64], x: f64) -> f64 {
    p.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

fn check_sigma(sigma: f64) -> Result<()> {
    if !(sigma.is_finite() && sigma > 0.0) {
        return Err(Error::InvalidProblem(alloc::format!(
            "probe width must be positive, got {sigma}"
        )));
    }
    Ok(())
}

fn check_powers(a: u32, b: u32) -> Result<()> {
    if a + b > MAX_MONOMIAL_ORDER {
        return Err(Error::InvalidProblem(alloc::format!(
            "monomial order {} exceeds {MAX_MONOMIAL_ORDER}",
            a + b
        )));
    }
    Ok(())
}

impl TestFunction {
    pub fn new(family: ProbeFamily) -> Result<Self> {
        let (sigma, a, b) = match family {
            ProbeFamily::Gaussian { sigma } => (sigma, 0, 0),
            ProbeFamily::MonomialGaussian {
                sigma,
                x_power,
                y_power,
            } => (sigma, x_power, y_power),
        };
        check_sigma(sigma)?;
        check_powers(a, b)?;
        let inv_var = 1.0 / (sigma * sigma);
        Ok(Self {
            family,
            inv_var,
            x_jet: axis_jet(a, inv_var, MAX_DERIVATIVE_ORDER),
            y_jet: axis_jet(b, inv_var, MAX_DERIVATIVE_ORDER),
            exact: None,
        })
    }

    pub fn gaussian(sigma: f64) -> Result<Self> {
        Self::new(ProbeFamily::Gaussian { sigma })
    }

    pub fn monomial_gaussian(sigma: f64, x_power: u32, y_power: u32) -> Result<Self> {
        if x_power == 0 && y_power == 0 {
            return Self::gaussian(sigma);
        }
        Self::new(ProbeFamily::MonomialGaussian {
            sigma,
            x_power,
            y_power,
        })
    }

    /// A probe with rational variance `σ² = variance`, whose origin jet is
    /// then available exactly.
    pub fn with_exact_variance(variance: Rational, x_power: u32, y_power: u32) -> Result<Self> {
        if variance <= Rational::zero() {
            return Err(Error::InvalidProblem(
                "probe variance must be positive".into(),
            ));
        }
        check_powers(x_power, y_power)?;
        let inv = Q(variance.recip());
        let x_exact: Jet<Rational> = axis_jet(x_power, inv.clone(), MAX_DERIVATIVE_ORDER)
            .into_iter()
            .map(|p| p.into_iter().map(|q| q.0).collect())
            .collect();
        let y_exact: Jet<Rational> = axis_jet(y_power, inv, MAX_DERIVATIVE_ORDER)
            .into_iter()
            .map(|p| p.into_iter().map(|q| q.0).collect())
            .collect();
        let to_float =
            |j: &Jet<Rational>| j.iter().map(|p| p.iter().map(to_f64).collect()).collect();
        let sigma = sqrt(to_f64(&variance));
        let family = if x_power == 0 && y_power == 0 {
            ProbeFamily::Gaussian { sigma }
        } else {
            ProbeFamily::MonomialGaussian {
                sigma,
                x_power,
                y_power,
            }
        };
        Ok(Self {
            family,
            inv_var: to_f64(&variance.recip()),
            x_jet: to_float(&x_exact),
            y_jet: to_float(&y_exact),
            exact: Some((x_exact, y_exact)),
        })
    }

    pub fn family(&self) -> ProbeFamily {
        self.family
    }

    pub fn sigma(&self) -> f64 {
        match self.family {
            ProbeFamily::Gaussian { sigma } | ProbeFamily::MonomialGaussian { sigma, .. } => sigma,
        }
    }

    fn envelope(&self, x: f64, y: f64) -> f64 {
        exp(-0.5 * self.inv_var * (x * x + y * y))
    }

    pub fn value(&self, x: f64, y: f64) -> f64 {
        self.derivative(MultiIndex::new(0, 0), x, y)
    }

    /// `∂^α φ(x, y)` for `|α| <= MAX_DERIVATIVE_ORDER` per axis.
    pub fn derivative(&self, idx: MultiIndex, x: f64, y: f64) -> f64 {
        let px = &self.x_jet[idx.x as usize];
        let py = &self.y_jet[idx.y as usize];
        horner(px, x) * horner(py, y) * self.envelope(x, y)
    }

    /// `(φ, ∇²φ)` sharing one exponential.
    pub fn value_and_laplacian(&self, x: f64, y: f64) -> (f64, f64) {
        let g = self.envelope(x, y);
        let (hx, hy) = (horner(&self.x_jet[0], x), horner(&self.y_jet[0], y));
        let lap = horner(&self.x_jet[2], x) * hy + hx * horner(&self.y_jet[2], y);
        (hx * hy * g, lap * g)
    }

    /// `(∂_x φ, ∂_y φ)`.
    pub fn gradient(&self, x: f64, y: f64) -> (f64, f64) {
        let g = self.envelope(x, y);
        let (hx, hy) = (horner(&self.x_jet[0], x), horner(&self.y_jet[0], y));
        (
            horner(&self.x_jet[1], x) * hy * g,
            hx * horner(&self.y_jet[1], y) * g,
        )
    }

    /// Radius beyond which `|φ|` and every derivative up to
    /// `MAX_DERIVATIVE_ORDER` stay below `tolerance`.
    pub fn r_cut(&self, tolerance: f64) -> f64 {
        let bound = |jet: &Jet<f64>, r: f64| {
            jet.iter()
                .map(|p| p.iter().rev().fold(0.0, |acc, c| acc * r + c.abs()))
                .fold(0.0, f64::max)
        };
        let sigma = self.sigma();
        let step = sigma / 16.0;
        let mut r = sigma;
        let mut prev = f64::INFINITY;
        loop {
            let b =
                bound(&self.x_jet, r) * bound(&self.y_jet, r) * exp(-0.5 * self.inv_var * r * r);
            if b < tolerance && b < prev {
                return r;
            }
            prev = b;
            r += step;
        }
    }
}

impl OriginJet for TestFunction {
    fn max_derivative_order(&self) -> u32 {
        MAX_DERIVATIVE_ORDER
    }

    fn origin_derivative(&self, idx: MultiIndex) -> f64 {
        if idx.x > MAX_DERIVATIVE_ORDER || idx.y > MAX_DERIVATIVE_ORDER {
            return f64::NAN;
        }
        self.x_jet[idx.x as usize][0] * self.y_jet[idx.y as usize][0]
    }

    fn origin_derivative_exact(&self, idx: MultiIndex) -> Option<Rational> {
        let (xj, yj) = self.exact.as_ref()?;
        Some(xj.get(idx.x as usize)?[0] * yj.get(idx.y as usize)?[0])
    }
}

/// `x^a y^b G(σ)` for every `a + b <= max_order`, in canonical multi-index
/// order.
pub fn monomial_basis(sigma: f64, max_order: u32) -> Result<Vec<TestFunction>> {
    MultiIndex::up_to(max_order)
        .into_iter()
        .map(|i| TestFunction::monomial_gaussian(sigma, i.x, i.y))
        .collect()
}

/// The same basis with the exact variance `σ² = variance`.
pub fn exact_monomial_basis(variance: Rational, max_order: u32) -> Result<Vec<TestFunction>> {
    MultiIndex::up_to(max_order)
        .into_iter()
        .map(|i| TestFunction::with_exact_variance(variance, i.x, i.y))
        .collect()
}
