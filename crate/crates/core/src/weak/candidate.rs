//! Singular and regular 2D wavefunctions `ψ = R(r) e^{imφ}` with their
//! pointwise (r > 0) Laplacians and predicted delta anomalies.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::anomaly::exact::{exact_real, integer};
use crate::anomaly::{
    angular_laplacian, pair_with_testfn, reduce_to_cartesian, DeltaForm, DeltaSum, OriginJet,
};
use crate::extrapolate::CorrectionTerm;
use crate::math::{cos, ln, powi, sin, sqrt};
use crate::origin::{FrobeniusSeries, Units};
use crate::special_fn::{eval, CylinderFunction};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "snake_case"))]
pub enum SingularCandidate {
    /// `C ln(k r)`.
    LogBranch { c: f64, k: f64 },
    /// `e^{imφ} r^{-|m|} (a₀ + a₁ r + …)`.
    PowerBranch { m: i32, series: FrobeniusSeries },
    /// `e^{imφ} r^{|m|} (a₀ + a₁ r + …)`.
    SmoothBranch { m: i32, series: FrobeniusSeries },
    /// `Y₀(k r)`, the Bessel-equation solution at `k² = 2μE/ħ²`.
    CylinderY0 { wavenumber: f64 },
    /// `Σ c_i ψ_i`.
    Combination {
        parts: Vec<(Complex64, SingularCandidate)>,
    },
}

/// One `R(r) e^{imφ}` piece evaluated at a radius.
#[derive(Debug, Clone, Copy)]
pub(crate) struct RadialSample {
    pub harmonic: i32,
    /// `R`, `R'` and the classical Laplacian's radial factor.
    pub value: Complex64,
    pub slope: Complex64,
    pub laplacian: Complex64,
}

impl SingularCandidate {
    pub fn log_branch(c: f64, k: f64) -> Result<Self> {
        if !(k > 0.0 && k.is_finite() && c.is_finite()) {
            return Err(Error::InvalidProblem(format!(
                "log branch needs k > 0, got C = {c}, k = {k}"
            )));
        }
        Ok(Self::LogBranch { c, k })
    }

    pub fn power_branch(m: i32, series: FrobeniusSeries) -> Result<Self> {
        if m == 0 || series.leading_exponent != -m.abs() {
            return Err(Error::InvalidProblem(format!(
                "power branch needs m != 0 and leading exponent -|m|, got m = {m}, s = {}",
                series.leading_exponent
            )));
        }
        Ok(Self::PowerBranch { m, series })
    }

    /// The bare leading term `a₀ e^{imφ} r^{-|m|}`.
    pub fn pure_power(m: i32, a0: Complex64) -> Result<Self> {
        Self::power_branch(m, FrobeniusSeries::new(-m.abs(), vec![a0])?)
    }

    pub fn smooth_branch(m: i32, series: FrobeniusSeries) -> Result<Self> {
        if series.leading_exponent != m.abs() {
            return Err(Error::InvalidProblem(format!(
                "smooth branch needs leading exponent |m| = {}, got {}",
                m.abs(),
                series.leading_exponent
            )));
        }
        Ok(Self::SmoothBranch { m, series })
    }

    pub fn cylinder_y0(units: Units, energy: f64) -> Result<Self> {
        if !(energy > 0.0 && energy.is_finite()) {
            return Err(Error::InvalidProblem(format!(
                "Y0 candidate needs E > 0, got {energy}"
            )));
        }
        Ok(Self::CylinderY0 {
            wavenumber: sqrt(units.kappa() * energy),
        })
    }

    pub fn combination(parts: Vec<(Complex64, SingularCandidate)>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidProblem("empty combination".into()));
        }
        Ok(Self::Combination { parts })
    }

    /// Pieces `(coefficient, sample)` at radius `r`.
    pub(crate) fn samples(&self, r: f64, out: &mut Vec<(Complex64, RadialSample)>) {
        let one = Complex64::new(1.0, 0.0);
        match self {
            Self::LogBranch { c, k } => out.push((
                one,
                RadialSample {
                    harmonic: 0,
                    value: Complex64::new(c * ln(k * r), 0.0),
                    slope: Complex64::new(c / r, 0.0),
                    laplacian: Complex64::new(0.0, 0.0),
                },
            )),
            Self::PowerBranch { m, series } | Self::SmoothBranch { m, series } => {
                let m2 = (*m as f64) * (*m as f64);
                let mut v = Complex64::new(0.0, 0.0);
                let mut d = v;
                let mut lap = v;
                for (k, a) in series.coefficients.iter().enumerate() {
                    let p = series.leading_exponent + k as i32;
                    let pf = p as f64;
                    let rp = powi(r, p);
                    v += a * rp;
                    d += a * (pf * rp / r);
                    // ∇²(r^p e^{imφ}) = (p² - m²) r^{p-2} e^{imφ}
                    lap += a * ((pf * pf - m2) * rp / (r * r));
                }
                out.push((
                    one,
                    RadialSample {
                        harmonic: *m,
                        value: v,
                        slope: d,
                        laplacian: lap,
                    },
                ));
            }
            Self::CylinderY0 { wavenumber: k } => {
                let x = k * r;
                let y0 = eval(CylinderFunction::y(0), x).unwrap_or(f64::NAN);
                let y1 = eval(CylinderFunction::y(1), x).unwrap_or(f64::NAN);
                out.push((
                    one,
                    RadialSample {
                        harmonic: 0,
                        value: Complex64::new(y0, 0.0),
                        slope: Complex64::new(-k * y1, 0.0),
                        laplacian: Complex64::new(-k * k * y0, 0.0),
                    },
                ));
            }
            Self::Combination { parts } => {
                let start = out.len();
                for (c, part) in parts {
                    let before = out.len();
                    part.samples(r, out);
                    for s in &mut out[before..] {
                        s.0 *= c;
                    }
                }
                debug_assert!(out.len() > start);
            }
        }
    }

    /// `ψ(r, θ)`.
    pub fn value(&self, r: f64, theta: f64) -> Complex64 {
        self.eval_with(r, theta, |s| s.value)
    }

    /// Classical Laplacian `L_c ψ` at `r > 0`.
    pub fn classical_laplacian(&self, r: f64, theta: f64) -> Complex64 {
        self.eval_with(r, theta, |s| s.laplacian)
    }

    fn eval_with(
        &self,
        r: f64,
        theta: f64,
        pick: impl Fn(&RadialSample) -> Complex64,
    ) -> Complex64 {
        let mut buf = Vec::new();
        self.samples(r, &mut buf);
        buf.iter()
            .map(|(c, s)| {
                let m = s.harmonic as f64;
                c * pick(s) * Complex64::new(cos(m * theta), sin(m * theta))
            })
            .sum()
    }

    /// Largest `|m|` present.
    pub fn max_harmonic(&self) -> u32 {
        match self {
            Self::LogBranch { .. } | Self::CylinderY0 { .. } => 0,
            Self::PowerBranch { m, .. } | Self::SmoothBranch { m, .. } => m.unsigned_abs(),
            Self::Combination { parts } => parts
                .iter()
                .map(|(_, p)| p.max_harmonic())
                .max()
                .unwrap_or(0),
        }
    }

    /// The anomaly of `∇²ψ` as `Σ scale_i · D_i` with exact delta sums.
    pub fn anomaly(&self) -> Result<Vec<(Complex64, DeltaSum)>> {
        let one = Complex64::new(1.0, 0.0);
        Ok(match self {
            // ∇² ln r = 2π δ
            Self::LogBranch { c, .. } => {
                vec![(
                    Complex64::new(*c, 0.0),
                    DeltaSum::single(exact_real(integer(2)), 1, DeltaForm::DELTA),
                )]
            }
            // Y₀(kr) ~ (2/π) ln r
            Self::CylinderY0 { .. } => vec![(
                one,
                DeltaSum::single(exact_real(integer(4)), 0, DeltaForm::DELTA),
            )],
            Self::PowerBranch { m, series } => {
                let lap = angular_laplacian(-m.abs(), *m);
                vec![(series.a0(), reduce_to_cartesian(&lap.anomaly)?)]
            }
            Self::SmoothBranch { .. } => Vec::new(),
            Self::Combination { parts } => {
                let mut out = Vec::new();
                for (c, p) in parts {
                    out.extend(p.anomaly()?.into_iter().map(|(s, d)| (s * c, d)));
                }
                out
            }
        })
    }

    /// `⟨anomaly, φ⟩`.
    pub fn predicted<P: OriginJet + ?Sized>(&self, probe: &P) -> Result<Complex64> {
        let mut total = Complex64::new(0.0, 0.0);
        for (scale, sum) in self.anomaly()? {
            total += scale * pair_with_testfn(&sum, probe)?;
        }
        Ok(total)
    }

    fn has_log(&self) -> bool {
        match self {
            Self::LogBranch { .. } | Self::CylinderY0 { .. } => true,
            Self::PowerBranch { .. } | Self::SmoothBranch { .. } => false,
            Self::Combination { parts } => parts.iter().any(|(_, p)| p.has_log()),
        }
    }

    fn has_odd_terms(&self) -> bool {
        match self {
            Self::LogBranch { .. } | Self::CylinderY0 { .. } => false,
            Self::PowerBranch { series, .. } | Self::SmoothBranch { series, .. } => series
                .coefficients
                .iter()
                .skip(1)
                .step_by(2)
                .any(|a| a.norm() != 0.0),
            Self::Combination { parts } => parts.iter().any(|(_, p)| p.has_odd_terms()),
        }
    }

    /// Correction terms of the excised residual in `ε`.
    ///
    /// The residual equals a boundary integral on the excision circle; with
    /// probes that are even in `r` after angular projection it expands in
    /// `ε²`, plus `ε² ln ε` families when ψ has a logarithm and odd powers when
    /// the series does.
    pub fn default_corrections(&self) -> Vec<CorrectionTerm> {
        if self.has_log() {
            vec![
                CorrectionTerm::log(2.0),
                CorrectionTerm::power(2.0),
                CorrectionTerm::log(4.0),
                CorrectionTerm::power(4.0),
            ]
        } else if self.has_odd_terms() {
            vec![
                CorrectionTerm::power(1.0),
                CorrectionTerm::power(2.0),
                CorrectionTerm::power(3.0),
                CorrectionTerm::power(4.0),
            ]
        } else {
            vec![
                CorrectionTerm::power(2.0),
                CorrectionTerm::power(4.0),
                CorrectionTerm::power(6.0),
            ]
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::PI;
    use crate::origin::{frobenius_series, Branch, PotentialSpec, RadialProblem};

    #[test]
    fn classical_laplacian_matches_finite_differences() {
        let problem = RadialProblem::two_d(2, PotentialSpec::Zero);
        let series = frobenius_series(
            &problem,
            1.3,
            Branch::Unacceptable,
            Complex64::new(1.0, 0.5),
            8,
        )
        .unwrap();
        let cands = [
            SingularCandidate::log_branch(1.5, 2.0).unwrap(),
            SingularCandidate::power_branch(2, series).unwrap(),
            SingularCandidate::cylinder_y0(Units::default(), 2.0).unwrap(),
            SingularCandidate::pure_power(-3, Complex64::new(0.0, 1.0)).unwrap(),
        ];
        let h = 1e-3;
        for c in &cands {
            for (x, y) in [(0.4, 0.3), (-0.7, 0.2), (0.1, -0.9)] {
                let f = |x: f64, y: f64| {
                    let r = crate::math::hypot(x, y);
                    c.value(r, crate::math::atan2(y, x))
                };
                // fourth-order five-point stencil per axis
                let d2 = |fx: &dyn Fn(f64) -> Complex64| {
                    (-fx(2.0 * h) + fx(h) * 16.0 - fx(0.0) * 30.0 + fx(-h) * 16.0 - fx(-2.0 * h))
                        / (12.0 * h * h)
                };
                let fd = d2(&|d| f(x + d, y)) + d2(&|d| f(x, y + d));
                let r = crate::math::hypot(x, y);
                let exact = c.classical_laplacian(r, crate::math::atan2(y, x));
                assert!(
                    (fd - exact).norm() < 1e-5 * (1.0 + exact.norm()),
                    "{c:?}: {fd} vs {exact}"
                );
            }
        }
    }

    #[test]
    fn constructors_validate() {
        assert!(SingularCandidate::log_branch(1.0, 0.0).is_err());
        let s = FrobeniusSeries::new(2, vec![Complex64::new(1.0, 0.0)]).unwrap();
        assert!(SingularCandidate::power_branch(2, s.clone()).is_err());
        assert!(SingularCandidate::smooth_branch(2, s.clone()).is_ok());
        assert!(SingularCandidate::smooth_branch(-2, s).is_ok());
        assert!(SingularCandidate::pure_power(0, Complex64::new(1.0, 0.0)).is_err());
        assert!(SingularCandidate::cylinder_y0(Units::default(), -1.0).is_err());
        assert!(SingularCandidate::combination(Vec::new()).is_err());
    }

    #[test]
    fn predicted_pairings() {
        let g = crate::weak::TestFunction::gaussian(0.5).unwrap();
        let log = SingularCandidate::log_branch(1.0, 3.0).unwrap();
        assert!((log.predicted(&g).unwrap() - Complex64::new(2.0 * PI, 0.0)).norm() < 1e-14);
        let y0 = SingularCandidate::cylinder_y0(Units::default(), 2.0).unwrap();
        assert!((y0.predicted(&g).unwrap().re - 4.0).abs() < 1e-14);
        // 2π(∂x + i∂y)δ against x G: -2π
        let xg = crate::weak::TestFunction::monomial_gaussian(0.5, 1, 0).unwrap();
        let p1 = SingularCandidate::pure_power(1, Complex64::new(1.0, 0.0)).unwrap();
        assert!((p1.predicted(&xg).unwrap() - Complex64::new(-2.0 * PI, 0.0)).norm() < 1e-13);
        let sum = SingularCandidate::combination(vec![
            (Complex64::new(2.0, 0.0), log),
            (Complex64::new(0.0, 1.0), y0),
        ])
        .unwrap();
        let want = Complex64::new(4.0 * PI, 4.0);
        assert!((sum.predicted(&g).unwrap() - want).norm() < 1e-13);
        assert_eq!(sum.max_harmonic(), 0);
    }
}
