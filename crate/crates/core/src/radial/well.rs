//! The infinite circular well, `V = 0` for `r < a`: `R = J_|m|(x_n r/a)`
//! with `x_n` the `n`-th zero of `J_|m|` and `E_n = ħ² x_n² / (2μa²)`.

use alloc::vec::Vec;

use crate::math::{sqrt, KahanSum};
use crate::origin::{PotentialSpec, RadialProblem, Units};
use crate::quadrature::{integrate_panels, GaussLegendre};
use crate::special_fn::{
    eval, eval_derivative, eval_second_derivative, zero, CylinderFunction, ZeroIndex,
};
use crate::{Error, Result};

use super::{uniform_grid, Level, SpectrumResult};

/// The zero of `Y₀` bounding the plotted pseudo-state interval.
pub const FIG1_ZERO_INDEX: u32 = 2;

fn check_radius(a: f64) -> Result<()> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::InvalidProblem(alloc::format!(
            "well radius must be positive, got {a}"
        )));
    }
    Ok(())
}

fn level_energy(units: Units, a: f64, x: f64) -> f64 {
    units.kinetic_scale() * x * x / (a * a)
}

/// `E_n = ħ² j_{|m|,n}² / (2μa²)`.
pub fn well_energy(units: Units, a: f64, m: i32, n: u32) -> Result<f64> {
    check_radius(a)?;
    let x = zero(ZeroIndex::new(CylinderFunction::j(m.unsigned_abs()), n)?);
    Ok(level_energy(units, a, x))
}

/// `ħ² y_{0,n}² / (2μa²)`: the energy at which `Y₀(x r/a)` also vanishes at
/// the wall. Not an eigenvalue.
pub fn pseudo_level_energy(units: Units, a: f64, n: u32) -> Result<f64> {
    check_radius(a)?;
    let x = zero(ZeroIndex::new(CylinderFunction::y(0), n)?);
    Ok(level_energy(units, a, x))
}

/// A normalised well eigenfunction `R_n(r) = J_|m|(x_n r/a) / N`,
/// `N² = (a²/2) J_{|m|+1}(x_n)²`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct WellState {
    pub a: f64,
    pub m: i32,
    pub n: u32,
    pub x_n: f64,
    pub energy: f64,
    inv_norm: f64,
}

impl WellState {
    pub fn new(units: Units, a: f64, m: i32, n: u32) -> Result<Self> {
        check_radius(a)?;
        let order = m.unsigned_abs();
        let x_n = zero(ZeroIndex::new(CylinderFunction::j(order), n)?);
        let jn1 = eval(CylinderFunction::j(order + 1), x_n)?;
        let inv_norm = 1.0 / (a * jn1.abs() / sqrt(2.0));
        Ok(Self {
            a,
            m,
            n,
            x_n,
            energy: level_energy(units, a, x_n),
            inv_norm,
        })
    }

    fn bessel(&self) -> CylinderFunction {
        CylinderFunction::j(self.m.unsigned_abs())
    }

    pub fn eval(&self, r: f64) -> f64 {
        eval(self.bessel(), self.x_n * r / self.a).unwrap_or(f64::NAN) * self.inv_norm
    }

    pub fn derivative(&self, r: f64) -> f64 {
        let k = self.x_n / self.a;
        eval_derivative(self.bessel(), k * r).unwrap_or(f64::NAN) * k * self.inv_norm
    }

    pub fn second_derivative(&self, r: f64) -> f64 {
        let k = self.x_n / self.a;
        eval_second_derivative(self.bessel(), k * r).unwrap_or(f64::NAN) * k * k * self.inv_norm
    }

    /// `∫₀^a R_i R_j r dr` on 16 panels of 32-point Gauss–Legendre.
    pub fn overlap(&self, other: &WellState) -> f64 {
        let rule = GaussLegendre::new(32);
        let edges: Vec<f64> = (0..=16).map(|i| self.a * i as f64 / 16.0).collect();
        integrate_panels(&rule, &edges, |r| self.eval(r) * other.eval(r) * r)
    }

    /// Relative residual of the radial equation at `r`, from analytic
    /// derivatives.
    pub fn residual(&self, units: Units, r: f64) -> f64 {
        let m2 = (self.m as f64) * (self.m as f64);
        let v = self.eval(r);
        let terms = [
            self.second_derivative(r),
            self.derivative(r) / r,
            -m2 * v / (r * r),
            units.kappa() * self.energy * v,
        ];
        let scale = terms.iter().fold(0.0f64, |a, t| a.max(t.abs()));
        let mut s = KahanSum::new();
        terms.iter().for_each(|t| s.add(*t));
        s.value().abs() / scale.max(f64::MIN_POSITIVE)
    }
}

/// The lowest `count` levels of the well of radius `a`, wavefunctions on
/// `samples` uniform radii of `(0, a]`.
pub fn well_spectrum(
    units: Units,
    a: f64,
    m: i32,
    count: u32,
    samples: usize,
) -> Result<SpectrumResult> {
    check_radius(a)?;
    if count == 0 {
        return Err(Error::InvalidProblem("need at least one level".into()));
    }
    let problem = RadialProblem::two_d(m, PotentialSpec::well(a)?).with_units(units);
    let grid = uniform_grid(a, samples.max(1));
    let mut levels = Vec::new();
    let mut wavefunctions = Vec::new();
    let mut normalization = Vec::new();
    for n in 1..=count {
        let state = WellState::new(units, a, m, n)?;
        levels.push(Level {
            n: n as usize,
            energy: state.energy,
        });
        wavefunctions.push(grid.iter().map(|&r| state.eval(r)).collect());
        normalization.push(state.overlap(&state));
    }
    Ok(SpectrumResult {
        problem,
        r_max: a,
        levels,
        grid,
        wavefunctions,
        normalization,
    })
}

/// `points` uniform abscissae on `(0, x₂]`, `x₂` the second zero of `Y₀`.
pub fn fig1_grid(points: usize) -> Vec<f64> {
    let x2 =
        zero(ZeroIndex::new(CylinderFunction::y(0), FIG1_ZERO_INDEX).expect("index is positive"));
    uniform_grid(x2, points.max(1))
}

/// `(x, x Y₀(x)²)` on a grid inside `(0, x₂]`.
pub fn fig1_data(grid: &[f64]) -> Result<Vec<(f64, f64)>> {
    let x2 = zero(ZeroIndex::new(CylinderFunction::y(0), FIG1_ZERO_INDEX)?);
    grid.iter()
        .map(|&x| {
            // the last grid point may carry roundoff from its construction
            if !(x > 0.0 && x <= x2 * (1.0 + 1e-14)) {
                return Err(Error::InvalidProblem(alloc::format!(
                    "x = {x} outside (0, {x2}]"
                )));
            }
            let y = eval(CylinderFunction::y(0), x)?;
            Ok((x, x * y * y))
        })
        .collect()
}
