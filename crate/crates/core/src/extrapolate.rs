//! Generalised Richardson extrapolation in the excision radius.
//!
//! A sequence `f(ε_i)` is fitted by least squares to
//! `f(ε) ≈ f₀ + Σ_j c_j ε^{p_j} (ln ε)^{q_j}` and `f₀` is reported. Pure powers
//! recover classical Richardson; the `ε^p ln ε` terms are needed whenever the
//! singular function itself carries a logarithm.

use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::math::ln;
use crate::{Error, Result};

/// One correction term `ε^power (ln ε)^log_power`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CorrectionTerm {
    pub power: f64,
    pub log_power: u32,
}

impl CorrectionTerm {
    pub const fn power(power: f64) -> Self {
        Self {
            power,
            log_power: 0,
        }
    }

    pub const fn log(power: f64) -> Self {
        Self {
            power,
            log_power: 1,
        }
    }

    fn at(&self, eps: f64) -> f64 {
        let mut v = crate::math::powf(eps, self.power);
        for _ in 0..self.log_power {
            v *= ln(eps);
        }
        v
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Extrapolated {
    pub value: Complex64,
    /// Difference to the fit that drops the largest radius and the last
    /// correction term.
    pub error: f64,
}

/// Real least-squares solve with the 2-norm condition number of `a`.
/// Columns are equilibrated before the SVD.
pub(crate) fn least_squares(a: &DMatrix<f64>, rhs: &[Complex64]) -> Result<(Vec<Complex64>, f64)> {
    let (rows, cols) = a.shape();
    debug_assert_eq!(rows, rhs.len());
    let mut scaled = a.clone();
    let mut scales = Vec::with_capacity(cols);
    for j in 0..cols {
        let norm = scaled.column(j).norm();
        let s = if norm > 0.0 { 1.0 / norm } else { 1.0 };
        scaled.column_mut(j).scale_mut(s);
        scales.push(s);
    }
    let svd = scaled.svd(true, true);
    let s_max = svd.singular_values.max();
    let s_min = svd.singular_values.min();
    let condition = if s_min > 0.0 {
        s_max / s_min
    } else {
        f64::INFINITY
    };
    if !condition.is_finite() || condition > 1e14 {
        return Err(Error::IllConditionedBasis { condition });
    }
    let re = DVector::from_iterator(rows, rhs.iter().map(|z| z.re));
    let im = DVector::from_iterator(rows, rhs.iter().map(|z| z.im));
    let solve = |b: &DVector<f64>| {
        svd.solve(b, 0.0)
            .map_err(|_| Error::IllConditionedBasis { condition })
    };
    let x_re = solve(&re)?;
    let x_im = solve(&im)?;
    let out = (0..cols)
        .map(|j| Complex64::new(x_re[j] * scales[j], x_im[j] * scales[j]))
        .collect();
    Ok((out, condition))
}

fn fit(eps: &[f64], values: &[Complex64], terms: &[CorrectionTerm]) -> Result<Complex64> {
    let a = DMatrix::from_fn(eps.len(), terms.len() + 1, |i, j| {
        if j == 0 {
            1.0
        } else {
            terms[j - 1].at(eps[i])
        }
    });
    let (coef, _) = least_squares(&a, values)?;
    Ok(coef[0])
}

/// Extrapolates `values[i] = f(eps[i])` to `ε → 0`.
///
/// Needs at least `terms.len() + 1` radii, strictly decreasing.
pub fn extrapolate(
    eps: &[f64],
    values: &[Complex64],
    terms: &[CorrectionTerm],
) -> Result<Extrapolated> {
    assert_eq!(eps.len(), values.len());
    assert!(
        eps.windows(2).all(|w| w[0] > w[1]),
        "radii must be strictly decreasing"
    );
    assert!(
        eps.len() > terms.len(),
        "not enough radii for the requested terms"
    );
    let value = fit(eps, values, terms)?;
    let error = if terms.is_empty() {
        if eps.len() >= 2 {
            (values[values.len() - 1] - values[values.len() - 2]).norm()
        } else {
            0.0
        }
    } else {
        let reduced = fit(&eps[1..], &values[1..], &terms[..terms.len() - 1])?;
        (value - reduced).norm()
    };
    Ok(Extrapolated { value, error })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn removes_power_corrections() {
        let eps = vec![0.1, 0.05, 0.025, 0.0125];
        let f = |e: f64| Complex64::new(3.0 + 2.0 * e * e - 5.0 * e.powi(4), -1.0 + e * e);
        let values: Vec<_> = eps.iter().map(|&e| f(e)).collect();
        let terms = [CorrectionTerm::power(2.0), CorrectionTerm::power(4.0)];
        let out = extrapolate(&eps, &values, &terms).unwrap();
        assert!((out.value - Complex64::new(3.0, -1.0)).norm() < 1e-12);
    }

    #[test]
    fn removes_log_corrections() {
        let eps = vec![0.02, 0.01, 0.005, 0.0025, 0.00125];
        let f = |e: f64| Complex64::new(7.0 + 0.3 * e * e * e.ln() - 1.1 * e * e, 0.0);
        let values: Vec<_> = eps.iter().map(|&e| f(e)).collect();
        let terms = [CorrectionTerm::log(2.0), CorrectionTerm::power(2.0)];
        let out = extrapolate(&eps, &values, &terms).unwrap();
        assert!((out.value.re - 7.0).abs() < 1e-12, "{out:?}");
        assert!(out.error < 1e-4);
    }
}
