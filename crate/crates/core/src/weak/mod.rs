//! Weak-form measurement of delta anomalies.
//!
//! For a candidate `ψ` and a probe `φ` the excised residual
//!
//! `M(ε) = ∫_{r>ε} ψ ∇²φ dA - ∫_{r>ε} (L_c ψ) φ dA`
//!
//! vanishes as `ε → 0` exactly when `∇²ψ = L_c ψ` as distributions; otherwise
//! its limit is the pairing of the anomaly with `φ`. Integrals are done
//! angle-first on full circles (symmetric excision is what makes the
//! `|m| >= 2` integrals converge), then on Gauss–Legendre panels graded
//! toward `ε`, and the sequence over nested `ε` is extrapolated.

mod candidate;
mod probe;

use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::anomaly::exact::to_complex64;
use crate::anomaly::{reduce_to_cartesian, DeltaForm, DeltaSum, MultiIndex, OriginJet};
use crate::extrapolate::{extrapolate, least_squares, CorrectionTerm};
use crate::math::{cos, powi, sin, KahanSumC, PI, TAU};
use crate::quadrature::{angular_nodes, graded_capped_edges, GaussLegendre};
use crate::{Error, Result};

pub use candidate::SingularCandidate;
pub use probe::{
    exact_monomial_basis, monomial_basis, ProbeFamily, TestFunction, MAX_DERIVATIVE_ORDER,
    MAX_MONOMIAL_ORDER,
};

/// Roundoff allowance per unit of absolute integrand mass, added to the
/// extrapolation tolerance.
const ROUNDOFF: f64 = 1e-13;

/// Absolute floor of the denominator in [`ResidualReport::relative_error`].
pub const RELATIVE_ERROR_FLOOR: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct QuadratureConfig {
    /// Excision radii, strictly decreasing.
    pub eps: Vec<f64>,
    /// Geometric growth of radial panel widths away from `ε`.
    pub panel_ratio: f64,
    /// Cap on radial panel width, in units of the probe width `σ`.
    pub max_panel_width: f64,
    /// Gauss–Legendre nodes per radial panel.
    pub gauss_nodes: usize,
    /// Angular nodes; `None` picks `max(8(|m| + 2), 64)`.
    pub angular_nodes: Option<usize>,
    /// Extrapolation basis; `None` lets the candidate choose.
    pub corrections: Option<Vec<CorrectionTerm>>,
    /// Probe tail bound defining the outer radius.
    pub tail_tolerance: f64,
    /// Largest accepted extrapolation error bar, relative to the largest of
    /// the excised values and the extrapolated one.
    pub dispersion_tolerance: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            eps: (0..6).map(|j| 2e-2 / (1u32 << j) as f64).collect(),
            panel_ratio: 2.0,
            max_panel_width: 0.5,
            gauss_nodes: 32,
            angular_nodes: None,
            corrections: None,
            tail_tolerance: 1e-18,
            dispersion_tolerance: 1e-6,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| {
            Err(Error::InvalidProblem(alloc::format!(
                "quadrature config: {msg}"
            )))
        };
        if self.eps.is_empty() || self.eps.iter().any(|e| !(*e > 0.0 && e.is_finite())) {
            return bad("excision radii must be positive");
        }
        if !self.eps.windows(2).all(|w| w[0] > w[1]) {
            return bad("excision radii must be strictly decreasing");
        }
        if !(self.panel_ratio > 1.0) || !(self.max_panel_width > 0.0) {
            return bad("panel ratio must exceed 1 and panel width be positive");
        }
        if self.gauss_nodes == 0 || self.angular_nodes == Some(0) {
            return bad("node counts must be positive");
        }
        if !(self.tail_tolerance > 0.0) || !(self.dispersion_tolerance > 0.0) {
            return bad("tolerances must be positive");
        }
        Ok(())
    }

    /// Angular node count for harmonics up to `|m|`.
    pub fn angular_count(&self, max_harmonic: u32) -> usize {
        let need = 8 * (max_harmonic as usize + 2);
        self.angular_nodes.unwrap_or(need.max(64)).max(need)
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ResidualReport {
    /// The `ε → 0` residual.
    pub measured: Complex64,
    /// `⟨anomaly(ψ), φ⟩` from the symbolic side.
    pub predicted: Complex64,
    pub excision_radii: Vec<f64>,
    /// `M(ε)` at each radius.
    pub excised_values: Vec<Complex64>,
    pub extrapolated_value: Complex64,
    /// Extrapolation error estimate.
    pub error_bar: f64,
    pub relative_error: f64,
}

/// `|a - b| / max(|b|, floor)`.
pub fn relative_error(measured: Complex64, predicted: Complex64) -> f64 {
    (measured - predicted).norm() / predicted.norm().max(RELATIVE_ERROR_FLOOR)
}

struct Grid {
    /// `(cos θ_k, sin θ_k, w_k)`.
    angles: Vec<(f64, f64, f64)>,
    /// `e^{i m θ_k}` per distinct harmonic.
    harmonics: Vec<(i32, Vec<Complex64>)>,
}

impl Grid {
    fn new(candidate: &SingularCandidate, n: usize) -> Self {
        let nodes: Vec<(f64, f64)> = angular_nodes(n).collect();
        let mut buf = Vec::new();
        candidate.samples(1.0, &mut buf);
        let mut ms: Vec<i32> = buf.iter().map(|(_, s)| s.harmonic).collect();
        ms.sort_unstable();
        ms.dedup();
        let harmonics = ms
            .into_iter()
            .map(|m| {
                (
                    m,
                    nodes
                        .iter()
                        .map(|(t, _)| Complex64::new(cos(m as f64 * t), sin(m as f64 * t)))
                        .collect(),
                )
            })
            .collect();
        Self {
            angles: nodes.iter().map(|&(t, w)| (cos(t), sin(t), w)).collect(),
            harmonics,
        }
    }

    fn harmonic_index(&self, m: i32) -> usize {
        self.harmonics
            .iter()
            .position(|(h, _)| *h == m)
            .expect("harmonic registered at setup")
    }
}

/// `M(ε)` for a single excision radius.
pub fn excised_residual(
    candidate: &SingularCandidate,
    probe: &TestFunction,
    eps: f64,
    quad: &QuadratureConfig,
) -> Result<Complex64> {
    quad.validate()?;
    let rule = GaussLegendre::new(quad.gauss_nodes);
    let grid = Grid::new(candidate, quad.angular_count(candidate.max_harmonic()));
    Ok(excised_with(candidate, probe, eps, quad, &rule, &grid).0)
}

fn excised_with(
    candidate: &SingularCandidate,
    probe: &TestFunction,
    eps: f64,
    quad: &QuadratureConfig,
    rule: &GaussLegendre,
    grid: &Grid,
) -> (Complex64, f64) {
    let r_cut = probe.r_cut(quad.tail_tolerance);
    if eps >= r_cut {
        return (Complex64::new(0.0, 0.0), 0.0);
    }
    let edges = graded_capped_edges(
        eps,
        r_cut,
        quad.panel_ratio,
        eps,
        quad.max_panel_width * probe.sigma(),
    );
    let nh = grid.harmonics.len();
    let mut phi_proj = alloc::vec![Complex64::new(0.0, 0.0); nh];
    let mut lap_proj = phi_proj.clone();
    let mut samples = Vec::new();
    let mut total = KahanSumC::new();
    // ∫ |ψ||∇²φ| + |L_c ψ||φ|: the scale of the cancellation, hence of roundoff
    let mut magnitude = crate::math::KahanSum::new();
    for w in edges.windows(2) {
        for (r, wr) in rule.mapped(w[0], w[1]) {
            phi_proj
                .iter_mut()
                .for_each(|z| *z = Complex64::new(0.0, 0.0));
            lap_proj
                .iter_mut()
                .for_each(|z| *z = Complex64::new(0.0, 0.0));
            let (mut phi_abs, mut lap_abs) = (0.0, 0.0);
            for (k, &(c, s, wt)) in grid.angles.iter().enumerate() {
                let (v, lap) = probe.value_and_laplacian(r * c, r * s);
                phi_abs += wt * v.abs();
                lap_abs += wt * lap.abs();
                for (j, (_, table)) in grid.harmonics.iter().enumerate() {
                    let e = table[k] * wt;
                    phi_proj[j] += e * v;
                    lap_proj[j] += e * lap;
                }
            }
            samples.clear();
            candidate.samples(r, &mut samples);
            for (coef, s) in &samples {
                let j = grid.harmonic_index(s.harmonic);
                total.add(coef * (s.value * lap_proj[j] - s.laplacian * phi_proj[j]) * (wr * r));
                magnitude.add(
                    coef.norm()
                        * (s.value.norm() * lap_abs + s.laplacian.norm() * phi_abs)
                        * wr
                        * r,
                );
            }
        }
    }
    (total.value(), magnitude.value())
}

/// The Green-identity form of `M(ε)`: `-ε ∮ (ψ ∂_r φ - φ ∂_r ψ) dθ`.
///
/// Equal to [`excised_residual`] up to the probe tail; used as an
/// independent check of the area quadrature.
pub fn boundary_residual(
    candidate: &SingularCandidate,
    probe: &TestFunction,
    eps: f64,
    angular: usize,
) -> Complex64 {
    let mut samples = Vec::new();
    candidate.samples(eps, &mut samples);
    let mut total = KahanSumC::new();
    for (theta, w) in angular_nodes(angular) {
        let (c, s) = (cos(theta), sin(theta));
        let (x, y) = (eps * c, eps * s);
        let v = probe.value(x, y);
        let (gx, gy) = probe.gradient(x, y);
        let dr = gx * c + gy * s;
        for (coef, smp) in &samples {
            let e = Complex64::new(
                cos(smp.harmonic as f64 * theta),
                sin(smp.harmonic as f64 * theta),
            );
            total.add(coef * e * (smp.value * dr - smp.slope * v) * (-eps * w));
        }
    }
    total.value()
}

/// Measures the anomaly pairing of `ψ` with `φ` and compares it with the
/// symbolic prediction.
pub fn weak_residual(
    candidate: &SingularCandidate,
    probe: &TestFunction,
    quad: &QuadratureConfig,
) -> Result<ResidualReport> {
    quad.validate()?;
    let predicted = candidate.predicted(probe)?;
    let rule = GaussLegendre::new(quad.gauss_nodes);
    let grid = Grid::new(candidate, quad.angular_count(candidate.max_harmonic()));
    let (values, magnitudes): (Vec<Complex64>, Vec<f64>) = quad
        .eps
        .iter()
        .map(|&e| excised_with(candidate, probe, e, quad, &rule, &grid))
        .unzip();
    let mut terms = quad
        .corrections
        .clone()
        .unwrap_or_else(|| candidate.default_corrections());
    terms.truncate(quad.eps.len().saturating_sub(1));
    let ex = extrapolate(&quad.eps, &values, &terms)?;
    let noise = ROUNDOFF * magnitudes.iter().fold(0.0, |a: f64, b| a.max(*b));
    let peak = values
        .iter()
        .map(|v| v.norm())
        .fold(ex.value.norm(), f64::max);
    let tolerance = quad.dispersion_tolerance * peak.max(RELATIVE_ERROR_FLOOR) + noise;
    if !(ex.error <= tolerance) {
        return Err(Error::NonConvergent {
            dispersion: ex.error,
            tolerance,
        });
    }
    Ok(ResidualReport {
        measured: ex.value,
        predicted,
        excision_radii: quad.eps.clone(),
        excised_values: values,
        extrapolated_value: ex.value,
        error_bar: ex.error,
        relative_error: relative_error(ex.value, predicted),
    })
}

/// Least-squares estimate of the Cartesian anomaly coefficients.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CoefficientEstimate {
    /// `(α, c_α)` with the anomaly `≈ Σ c_α ∂^α δ`.
    pub coefficients: Vec<(MultiIndex, Complex64)>,
    /// 2-norm condition number of the (column-scaled) pairing matrix.
    pub condition: f64,
    pub residuals: Vec<ResidualReport>,
}

impl CoefficientEstimate {
    pub fn coefficient(&self, idx: MultiIndex) -> Complex64 {
        self.coefficients
            .iter()
            .find(|(i, _)| *i == idx)
            .map_or(Complex64::new(0.0, 0.0), |(_, c)| *c)
    }

    pub fn max_abs(&self) -> f64 {
        self.coefficients
            .iter()
            .map(|(_, c)| c.norm())
            .fold(0.0, f64::max)
    }
}

/// Recovers `c_α` for all `|α| <= max_order` from pairings against `basis`:
/// `M_j = Σ_α c_α (-1)^{|α|} ∂^α φ_j(0)`.
pub fn measure_coefficient(
    candidate: &SingularCandidate,
    basis: &[TestFunction],
    max_order: u32,
    quad: &QuadratureConfig,
) -> Result<CoefficientEstimate> {
    let indices = MultiIndex::up_to(max_order);
    if basis.len() < indices.len() {
        return Err(Error::IllConditionedBasis {
            condition: f64::INFINITY,
        });
    }
    if max_order > MAX_DERIVATIVE_ORDER {
        return Err(Error::InsufficientDerivativeOrder {
            needed: max_order,
            available: MAX_DERIVATIVE_ORDER,
        });
    }
    let a = DMatrix::from_fn(basis.len(), indices.len(), |j, k| {
        let idx = indices[k];
        let sign = if idx.order().is_multiple_of(2) { 1.0 } else { -1.0 };
        sign * basis[j].origin_derivative(idx)
    });
    let residuals = basis
        .iter()
        .map(|p| weak_residual(candidate, p, quad))
        .collect::<Result<Vec<_>>>()?;
    let rhs: Vec<Complex64> = residuals.iter().map(|r| r.measured).collect();
    let (coef, condition) = least_squares(&a, &rhs)?;
    Ok(CoefficientEstimate {
        coefficients: indices.into_iter().zip(coef).collect(),
        condition,
        residuals,
    })
}

/// Numeric Cartesian coefficients `c_α` (π included) of an exact sum.
pub fn cartesian_coefficients(sum: &DeltaSum) -> Result<Vec<(MultiIndex, Complex64)>> {
    let reduced = reduce_to_cartesian(sum)?;
    let mut out: Vec<(MultiIndex, Complex64)> = Vec::new();
    for t in reduced.terms() {
        let DeltaForm::Cartesian(idx) = t.form else {
            unreachable!("reduced sums are Cartesian")
        };
        let c = to_complex64(&t.coefficient) * powi(PI, t.pi_power as i32);
        match out.iter_mut().find(|(i, _)| *i == idx) {
            Some(slot) => slot.1 += c,
            None => out.push((idx, c)),
        }
    }
    Ok(out)
}

/// Outward flux of `∇F_α`, `F_α = ln(r + α)`, through the circle `r = ε`,
/// by angular quadrature of the Cartesian gradient. Closed form
/// `2πε / (ε + α)`.
pub fn regularized_flux(alpha: f64, eps: f64) -> f64 {
    let mut acc = crate::math::KahanSum::new();
    for (theta, w) in angular_nodes(64) {
        let (c, s) = (cos(theta), sin(theta));
        let (x, y) = (eps * c, eps * s);
        let g = 1.0 / (eps * (eps + alpha));
        acc.add(w * eps * (x * g * c + y * g * s));
    }
    acc.value()
}

/// `∇² F_α = α / (r (r + α)²)` for `r > 0`.
pub fn regularized_laplacian(alpha: f64, r: f64) -> f64 {
    alpha / (r * (r + alpha) * (r + alpha))
}

/// `∫_{ε<r<R} ∇²F_α dA` by graded Gauss–Legendre quadrature.
pub fn regularized_area_integral(alpha: f64, eps: f64, outer: f64) -> f64 {
    let rule = GaussLegendre::new(32);
    let edges = crate::quadrature::graded_edges(eps, outer, 2.0, eps);
    TAU * crate::quadrature::integrate_panels(&rule, &edges, |r| {
        r * regularized_laplacian(alpha, r)
    })
}
