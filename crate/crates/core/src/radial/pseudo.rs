//! The `Y₀` pseudo-state of the circular well: `Y₀(x_n r/a)` with `x_n` a
//! zero of `Y₀` meets the wall condition but carries a `4δ` source at the
//! origin.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::anomaly::MultiIndex;
use crate::extrapolate::{extrapolate, CorrectionTerm};
use crate::math::{ln, KahanSum, PI, TAU};
use crate::origin::Units;
use crate::quadrature::{graded_edges, integrate_panels, GaussLegendre};
use crate::special_fn::{
    eval, eval_derivative, eval_second_derivative, zero, CylinderFunction, ZeroIndex,
};
use crate::weak::{measure_coefficient, monomial_basis, QuadratureConfig, SingularCandidate};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PseudoOptions {
    pub quadrature: QuadratureConfig,
    /// Width of the Gaussian probes measuring the δ coefficient.
    pub probe_sigma: f64,
    /// Inner cut-offs of the kinetic integral, strictly decreasing.
    pub kinetic_eps: Vec<f64>,
}

impl Default for PseudoOptions {
    fn default() -> Self {
        Self {
            quadrature: QuadratureConfig::default(),
            probe_sigma: 0.5,
            // 1e-3 down to 1e-6, four per decade
            kinetic_eps: (0..=12)
                .map(|j| crate::math::powf(10.0, -3.0 - j as f64 / 4.0))
                .collect(),
        }
    }
}

/// `T(ε) ≈ a + b ln(1/ε)` by least squares.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct KineticFit {
    pub a: f64,
    pub b: f64,
    /// `max |T - fit| / |T|` over the samples.
    pub max_relative_residual: f64,
    pub eps: Vec<f64>,
    pub values: Vec<f64>,
}

impl KineticFit {
    /// Whether `T` grows strictly as `ε` shrinks.
    pub fn monotone(&self) -> bool {
        self.values.windows(2).all(|w| w[1] > w[0])
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PseudoStateReport {
    pub zero_index: u32,
    /// `x_n`, the zero of `Y₀`.
    pub zero: f64,
    /// `ħ² x_n² / (2μa²)`.
    pub energy: f64,
    /// `∫₀^{x_n} x Y₀(x)² dx`.
    pub norm_sq: f64,
    /// Relative change of `norm_sq` under a finer grid.
    pub norm_refinement: f64,
    /// `green_flux - green_interior`.
    pub green_defect: f64,
    /// `∮_{r=a} (J₀ ∂_r Y₀ - Y₀ ∂_r J₀) ds`.
    pub green_flux: f64,
    /// `∫_{ε<r<a} (J₀ ∇²Y₀ - Y₀ ∇²J₀) dA`, extrapolated to `ε → 0`.
    pub green_interior: f64,
    pub green_interior_error: f64,
    pub kinetic_fit: KineticFit,
    /// Measured coefficient of `δ` in `∇²Y₀`.
    pub q_coefficient: f64,
    /// `-(ħ²/2μ) q_coefficient`, the weight of `δ` in `Q`.
    pub q_value: f64,
    /// Condition number of the probe pairing matrix.
    pub condition: f64,
}

const Y0: CylinderFunction = CylinderFunction::y(0);
const J0: CylinderFunction = CylinderFunction::j(0);

/// `∫₀^{x_n} x Y₀² dx` on panels graded from `first` by `ratio`.
fn norm_integral(x_n: f64, first: f64, ratio: f64, nodes: usize) -> f64 {
    let rule = GaussLegendre::new(nodes);
    let edges = graded_edges(0.0, x_n, ratio, first);
    integrate_panels(&rule, &edges, |x| {
        let y = eval(Y0, x).unwrap_or(f64::NAN);
        x * y * y
    })
}

/// `(ħ²/2μ) 2π ∫_ε^{x_n} Y₀'(x)² x dx`.
fn kinetic_integral(units: Units, x_n: f64, eps: f64, rule: &GaussLegendre) -> f64 {
    let edges = graded_edges(eps, x_n, 1.5, 0.0);
    units.kinetic_scale()
        * TAU
        * integrate_panels(rule, &edges, |x| {
            let d = eval_derivative(Y0, x).unwrap_or(f64::NAN);
            d * d * x
        })
}

fn fit_log(eps: &[f64], values: &[f64]) -> KineticFit {
    let n = eps.len() as f64;
    let t: Vec<f64> = eps.iter().map(|e| -ln(*e)).collect();
    let t_mean = t.iter().sum::<f64>() / n;
    let v_mean = values.iter().sum::<f64>() / n;
    let mut sxy = KahanSum::new();
    let mut sxx = KahanSum::new();
    for (ti, vi) in t.iter().zip(values) {
        sxy.add((ti - t_mean) * (vi - v_mean));
        sxx.add((ti - t_mean) * (ti - t_mean));
    }
    let b = sxy.value() / sxx.value();
    let a = v_mean - b * t_mean;
    let max_relative_residual = t
        .iter()
        .zip(values)
        .map(|(ti, vi)| ((a + b * ti) - vi).abs() / vi.abs())
        .fold(0.0, f64::max);
    KineticFit {
        a,
        b,
        max_relative_residual,
        eps: eps.to_vec(),
        values: values.to_vec(),
    }
}

/// Diagnostics of the `n`-th `Y₀` pseudo-state in a well of radius `a`.
pub fn pseudo_y0_report(
    a: f64,
    n: u32,
    units: Units,
    opts: &PseudoOptions,
) -> Result<PseudoStateReport> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::InvalidProblem(alloc::format!(
            "well radius must be positive, got {a}"
        )));
    }
    opts.quadrature.validate()?;
    if opts.kinetic_eps.len() < 3 || !opts.kinetic_eps.windows(2).all(|w| w[0] > w[1]) {
        return Err(Error::InvalidProblem(
            "kinetic cut-offs: need three or more, strictly decreasing".into(),
        ));
    }
    let x_n = zero(ZeroIndex::new(Y0, n)?);
    if opts.kinetic_eps[0] >= x_n || *opts.kinetic_eps.last().unwrap() <= 0.0 {
        return Err(Error::InvalidProblem(
            "kinetic cut-offs must lie in (0, x_n)".into(),
        ));
    }
    let k = x_n / a;
    let energy = units.kinetic_scale() * k * k;

    let norm_sq = norm_integral(x_n, 1e-10, 2.0, 32);
    let fine = norm_integral(x_n, 1e-12, 1.5, 48);
    let norm_refinement = (fine - norm_sq).abs() / fine.abs();

    // Green's second identity on the disk, J₀ and Y₀ at the same energy
    let flux = TAU
        * a
        * (eval(J0, x_n)? * k * eval_derivative(Y0, x_n)?
            - eval(Y0, x_n)? * k * eval_derivative(J0, x_n)?);
    let laplacian = |f: CylinderFunction, r: f64| {
        let x = k * r;
        k * k
            * (eval_second_derivative(f, x).unwrap_or(f64::NAN)
                + eval_derivative(f, x).unwrap_or(f64::NAN) / x)
    };
    let rule = GaussLegendre::new(opts.quadrature.gauss_nodes);
    let excised: Vec<Complex64> = opts
        .quadrature
        .eps
        .iter()
        .map(|&e| {
            let edges = graded_edges(e, a, opts.quadrature.panel_ratio, 0.0);
            let v = integrate_panels(&rule, &edges, |r| {
                let (j, y) = (
                    eval(J0, k * r).unwrap_or(f64::NAN),
                    eval(Y0, k * r).unwrap_or(f64::NAN),
                );
                TAU * r * (j * laplacian(Y0, r) - y * laplacian(J0, r))
            });
            Complex64::new(v, 0.0)
        })
        .collect();
    let terms = [CorrectionTerm::log(2.0), CorrectionTerm::power(2.0)];
    let interior = extrapolate(&opts.quadrature.eps, &excised, &terms)?;

    let kinetic_rule = GaussLegendre::new(32);
    let values: Vec<f64> = opts
        .kinetic_eps
        .iter()
        .map(|&e| kinetic_integral(units, x_n, e, &kinetic_rule))
        .collect();
    let kinetic_fit = fit_log(&opts.kinetic_eps, &values);

    let candidate = SingularCandidate::cylinder_y0(units, energy)?;
    let basis = monomial_basis(opts.probe_sigma, 3)?;
    let est = measure_coefficient(&candidate, &basis, 3, &opts.quadrature)?;
    let q = est.coefficient(MultiIndex::new(0, 0)).re;

    Ok(PseudoStateReport {
        zero_index: n,
        zero: x_n,
        energy,
        norm_sq,
        norm_refinement,
        green_defect: flux - interior.value.re,
        green_flux: flux,
        green_interior: interior.value.re,
        green_interior_error: interior.error,
        kinetic_fit,
        q_coefficient: q,
        q_value: -units.kinetic_scale() * q,
        condition: est.condition,
    })
}

/// `x² (Y₀² + Y₁²)/2 - 2/π²` at `x`: the closed form of `∫₀^x t Y₀(t)² dt`.
pub fn y0_norm_closed_form(x_n: f64) -> Result<f64> {
    let (y0, y1) = (eval(Y0, x_n)?, eval(CylinderFunction::y(1), x_n)?);
    Ok(0.5 * x_n * x_n * (y0 * y0 + y1 * y1) - 2.0 / (PI * PI))
}
