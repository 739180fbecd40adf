use std::f64::consts::TAU;

use clap::ValueEnum;
use rayon::prelude::*;
use serde::Serialize;

use radial_gate_core::anomaly::{q_term, ExactComplex, MultiIndex, Rational};
use radial_gate_core::origin::{
    classify, frobenius_series, Branch, Dimension, OriginBehavior, PotentialSpec, RadialProblem,
    Units,
};
use radial_gate_core::radial::{
    effective_r_max, fig1_data, fig1_grid, normalization_diverges, pseudo_y0_report, shoot_state,
    uniform_grid, well_spectrum, PseudoOptions, PseudoStateReport, ShootingForm, SolverOptions,
    SpectrumResult,
};
use radial_gate_core::weak::{
    cartesian_coefficients, measure_coefficient, monomial_basis, regularized_flux, weak_residual,
    QuadratureConfig, ResidualReport, SingularCandidate, TestFunction,
};
use radial_gate_core::Complex64;

use crate::args::{
    Case, ClassifyArgs, Fig1Args, FluxArgs, Form, Format, OutputArgs, ProblemArgs, PseudoArgs,
    QuadArgs, SpectrumArgs, UnitArgs, VerifyArgs, WellArgs,
};
use crate::error::CliError;
use crate::output::{emit, fmt_f64, to_csv, to_json};
use crate::potential;

const LOG_TOLERANCE: f64 = 1e-6;
const POWER_TOLERANCE: f64 = 1e-3;
/// Absolute bound on coefficients (and smooth-case residuals) predicted to vanish.
const ZERO_TOLERANCE: f64 = 1e-6;
/// Frobenius terms kept in the power and smooth candidates.
const SERIES_ORDER: usize = 12;

fn units(u: &UnitArgs) -> Result<Units, CliError> {
    Ok(Units::new(u.hbar, u.mass)?)
}

fn problem(p: &ProblemArgs) -> Result<RadialProblem, CliError> {
    let (dimension, q) = match p.dim {
        2 => {
            if p.l.is_some() {
                return Err(CliError::Args(
                    "--l applies to 3D problems; use --m with --dim 2".into(),
                ));
            }
            (Dimension::Two, p.m.unwrap_or(0))
        }
        _ => {
            if p.m.is_some() {
                return Err(CliError::Args(
                    "--m applies to 2D problems; use --l with --dim 3".into(),
                ));
            }
            let l = p.l.unwrap_or(0);
            let l =
                i32::try_from(l).map_err(|_| CliError::Args(format!("l = {l} is too large")))?;
            (Dimension::Three, l)
        }
    };
    Ok(RadialProblem::new(
        dimension,
        q,
        units(&p.units)?,
        potential::parse(&p.potential)?,
    )?)
}

fn quadrature(q: &QuadArgs) -> Result<QuadratureConfig, CliError> {
    let mut cfg = QuadratureConfig::default();
    if let Some(eps) = &q.eps_list {
        cfg.eps = eps.clone();
    }
    cfg.angular_nodes = q.angular_nodes;
    cfg.validate()?;
    if !(q.sigma > 0.0 && q.sigma.is_finite()) {
        return Err(CliError::Args(format!(
            "--sigma must be positive, got {}",
            q.sigma
        )));
    }
    Ok(cfg)
}

fn format(out: &OutputArgs, default: Format) -> Format {
    out.format.unwrap_or(default)
}

fn json_only(out: &OutputArgs, command: &str) -> Result<(), CliError> {
    match out.format {
        Some(Format::Csv) => Err(CliError::Args(format!("{command} has no CSV output"))),
        _ => Ok(()),
    }
}

fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

// ---------------------------------------------------------------- classify

#[derive(Serialize)]
struct ClassifyReport {
    dimension: u32,
    quantum_number: i32,
    acceptable: String,
    unacceptable: String,
    q_pattern: String,
    q_derivative_order: u32,
    acceptable_normalizable: bool,
    unacceptable_normalizable: bool,
    /// Delta part of the Laplacian for unit leading amplitude (2D only).
    laplacian_anomaly: Option<String>,
    behavior: OriginBehavior,
}

pub fn classify_cmd(a: &ClassifyArgs) -> Result<(), CliError> {
    json_only(&a.output, "classify")?;
    let p = problem(&a.problem)?;
    let b = classify(&p)?;
    let laplacian_anomaly = match p.dimension {
        Dimension::Two => Some(
            q_term(
                &p,
                Branch::Unacceptable,
                ExactComplex::new(Rational::from_integer(1), Rational::from_integer(0)),
            )?
            .laplacian_part
            .to_string(),
        ),
        Dimension::Three => None,
    };
    let report = ClassifyReport {
        dimension: p.dimension.value(),
        quantum_number: p.quantum_number,
        acceptable: b.acceptable.to_string(),
        unacceptable: b.unacceptable.to_string(),
        q_pattern: b.q_pattern.to_string(),
        q_derivative_order: b.q_pattern.derivative_order,
        acceptable_normalizable: !normalization_diverges(p.dimension, b.acceptable),
        unacceptable_normalizable: !normalization_diverges(p.dimension, b.unacceptable),
        laplacian_anomaly,
        behavior: b,
    };
    emit(&to_json(&report)?, a.output.out.as_deref())
}

// ---------------------------------------------------------- verify-anomaly

#[derive(Serialize)]
struct ResidualRow {
    probe: String,
    measured: [f64; 2],
    predicted: [f64; 2],
    relative_error: f64,
    error_bar: f64,
}

impl ResidualRow {
    fn new(probe: &TestFunction, r: &ResidualReport) -> Self {
        Self {
            probe: probe.family().to_string(),
            measured: pair(r.measured),
            predicted: pair(r.predicted),
            relative_error: r.relative_error,
            error_bar: r.error_bar,
        }
    }
}

#[derive(Serialize)]
struct CoefficientRow {
    x: u32,
    y: u32,
    measured: [f64; 2],
    predicted: [f64; 2],
    /// Relative error, or the absolute value when nothing is predicted.
    error: f64,
}

#[derive(Serialize)]
struct Run {
    m: i32,
    candidate: String,
    residuals: Vec<ResidualRow>,
    coefficients: Vec<CoefficientRow>,
    condition: Option<f64>,
    passed: bool,
}

#[derive(Serialize)]
struct VerifyReport {
    case: String,
    tolerance: f64,
    zero_tolerance: f64,
    sigma: f64,
    eps: Vec<f64>,
    energy: Option<f64>,
    runs: Vec<Run>,
    passed: bool,
}

fn log_run(sigma: f64, quad: &QuadratureConfig) -> Result<Run, CliError> {
    let cand = SingularCandidate::log_branch(1.0, 1.0)?;
    let probes = [0.4, 0.7, 1.0, 1.4, 2.0]
        .iter()
        .map(|s| TestFunction::gaussian(s * sigma))
        .collect::<Result<Vec<_>, _>>()?;
    let reports = probes
        .par_iter()
        .map(|p| weak_residual(&cand, p, quad))
        .collect::<Result<Vec<_>, _>>()?;
    let residuals: Vec<ResidualRow> = probes
        .iter()
        .zip(&reports)
        .map(|(p, r)| ResidualRow::new(p, r))
        .collect();
    let passed = residuals.iter().all(|r| r.relative_error <= LOG_TOLERANCE);
    Ok(Run {
        m: 0,
        candidate: "ln r".into(),
        residuals,
        coefficients: Vec::new(),
        condition: None,
        passed,
    })
}

/// Fits every `c_α`, `|α| <= 3`, and compares with the exact anomaly.
fn fitted_run(
    m: i32,
    cand: SingularCandidate,
    label: String,
    sigma: f64,
    tolerance: f64,
    quad: &QuadratureConfig,
) -> Result<Run, CliError> {
    let basis = monomial_basis(sigma, 3)?;
    let est = measure_coefficient(&cand, &basis, 3, quad)?;
    let mut predicted: Vec<(MultiIndex, Complex64)> = Vec::new();
    for (scale, sum) in cand.anomaly()? {
        for (idx, c) in cartesian_coefficients(&sum)? {
            match predicted.iter_mut().find(|(i, _)| *i == idx) {
                Some(slot) => slot.1 += scale * c,
                None => predicted.push((idx, scale * c)),
            }
        }
    }
    let mut passed = true;
    let coefficients = MultiIndex::up_to(3)
        .into_iter()
        .map(|idx| {
            let got = est.coefficient(idx);
            let want = predicted
                .iter()
                .find(|(i, _)| *i == idx)
                .map_or(Complex64::new(0.0, 0.0), |(_, c)| *c);
            let error = if want.norm() > 0.0 {
                let e = (got - want).norm() / want.norm();
                passed &= e <= tolerance;
                e
            } else {
                passed &= got.norm() <= ZERO_TOLERANCE;
                got.norm()
            };
            CoefficientRow {
                x: idx.x,
                y: idx.y,
                measured: pair(got),
                predicted: pair(want),
                error,
            }
        })
        .collect();
    let residuals: Vec<ResidualRow> = basis
        .iter()
        .zip(&est.residuals)
        .map(|(p, r)| ResidualRow::new(p, r))
        .collect();
    if matches!(cand, SingularCandidate::SmoothBranch { .. }) {
        passed &= residuals
            .iter()
            .all(|r| r.measured[0].hypot(r.measured[1]) <= ZERO_TOLERANCE);
    }
    Ok(Run {
        m,
        candidate: label,
        residuals,
        coefficients,
        condition: Some(est.condition),
        passed,
    })
}

fn power_run(m: i32, energy: f64, sigma: f64, quad: &QuadratureConfig) -> Result<Run, CliError> {
    let p = RadialProblem::two_d(m, PotentialSpec::Zero);
    let series = frobenius_series(
        &p,
        energy,
        Branch::Unacceptable,
        Complex64::new(1.0, 0.0),
        SERIES_ORDER,
    )?;
    let cand = SingularCandidate::power_branch(m, series)?;
    let label = format!("e^({m} i phi) r^-{} (1 + ...), E = {energy}", m.abs());
    fitted_run(m, cand, label, sigma, POWER_TOLERANCE, quad)
}

fn smooth_run(m: i32, energy: f64, sigma: f64, quad: &QuadratureConfig) -> Result<Run, CliError> {
    let p = RadialProblem::two_d(m, PotentialSpec::Zero);
    let series = frobenius_series(
        &p,
        energy,
        Branch::Acceptable,
        Complex64::new(1.0, 0.0),
        SERIES_ORDER,
    )?;
    let cand = SingularCandidate::smooth_branch(m, series)?;
    let label = format!("e^({m} i phi) r^{} (1 + ...), E = {energy}", m.abs());
    fitted_run(m, cand, label, sigma, ZERO_TOLERANCE, quad)
}

pub fn verify_anomaly(a: &VerifyArgs) -> Result<(), CliError> {
    let quad = quadrature(&a.quad)?;
    if !a.energy.is_finite() {
        return Err(CliError::Args("--energy must be finite".into()));
    }
    let sigma = a.quad.sigma;
    let (runs, tolerance) = match a.case {
        Case::Log => {
            if a.m.is_some_and(|m| m != 0) {
                return Err(CliError::Args("the log case has m = 0".into()));
            }
            (vec![log_run(sigma, &quad)?], LOG_TOLERANCE)
        }
        Case::M1 | Case::M2 | Case::M3 => {
            let k = match a.case {
                Case::M1 => 1,
                Case::M2 => 2,
                _ => 3,
            };
            let ms = match a.m {
                None => vec![k, -k],
                Some(m) if m.abs() == k => vec![m],
                Some(m) => {
                    return Err(CliError::Args(format!("case m{k} needs m = ±{k}, got {m}")))
                }
            };
            let runs = ms
                .par_iter()
                .map(|&m| power_run(m, a.energy, sigma, &quad))
                .collect::<Result<Vec<_>, _>>()?;
            (runs, POWER_TOLERANCE)
        }
        Case::Smooth => (
            vec![smooth_run(a.m.unwrap_or(0), a.energy, sigma, &quad)?],
            ZERO_TOLERANCE,
        ),
    };
    let passed = runs.iter().all(|r| r.passed);
    let case = a
        .case
        .to_possible_value()
        .map_or_else(String::new, |v| v.get_name().to_owned());
    let bytes = match format(&a.output, Format::Json) {
        Format::Json => to_json(&VerifyReport {
            case: case.clone(),
            tolerance,
            zero_tolerance: ZERO_TOLERANCE,
            sigma,
            eps: quad.eps.clone(),
            energy: (a.case != Case::Log).then_some(a.energy),
            runs,
            passed,
        })?,
        Format::Csv => {
            let rows: Vec<Vec<String>> = runs
                .iter()
                .flat_map(|run| {
                    run.residuals.iter().map(move |r| {
                        vec![
                            run.m.to_string(),
                            r.probe.clone(),
                            fmt_f64(r.measured[0]),
                            fmt_f64(r.measured[1]),
                            fmt_f64(r.predicted[0]),
                            fmt_f64(r.predicted[1]),
                            fmt_f64(r.relative_error),
                        ]
                    })
                })
                .collect();
            to_csv(
                &[
                    "m",
                    "probe",
                    "measured_re",
                    "measured_im",
                    "predicted_re",
                    "predicted_im",
                    "relative_error",
                ],
                &rows,
            )?
        }
    };
    emit(&bytes, a.output.out.as_deref())?;
    if passed {
        Ok(())
    } else {
        Err(CliError::Verification(format!(
            "case {case}: measured anomaly outside tolerance"
        )))
    }
}

// ------------------------------------------------------------ well/spectrum

fn spectrum_output(s: &SpectrumResult, out: &OutputArgs) -> Result<(), CliError> {
    let bytes = match format(out, Format::Json) {
        Format::Json => to_json(s)?,
        Format::Csv => {
            let mut rows = Vec::with_capacity(s.levels.len() * s.grid.len());
            for (level, wf) in s.levels.iter().zip(&s.wavefunctions) {
                for (r, v) in s.grid.iter().zip(wf) {
                    rows.push(vec![
                        level.n.to_string(),
                        fmt_f64(*r),
                        fmt_f64(*v),
                        fmt_f64(0.0),
                    ]);
                }
            }
            to_csv(&["n", "r", "re_R", "im_R"], &rows)?
        }
    };
    emit(&bytes, out.out.as_deref())
}

pub fn well(a: &WellArgs) -> Result<(), CliError> {
    if a.points == 0 {
        return Err(CliError::Args("--points must be positive".into()));
    }
    let s = well_spectrum(units(&a.units)?, a.a, a.m, a.levels, a.points)?;
    spectrum_output(&s, &a.output)
}

pub fn spectrum(a: &SpectrumArgs) -> Result<(), CliError> {
    let p = problem(&a.problem)?;
    classify(&p)?;
    if a.levels == 0 || a.points == 0 {
        return Err(CliError::Args(
            "--levels and --points must be positive".into(),
        ));
    }
    let r_max = match (a.r_max, p.potential.wall_radius()) {
        (Some(r), _) => r,
        (None, Some(wall)) => wall,
        (None, None) => {
            return Err(CliError::Args(
                "--r-max is required without a hard wall".into(),
            ))
        }
    };
    if !(r_max > 0.0 && r_max.is_finite()) {
        return Err(CliError::Args(format!(
            "--r-max must be positive, got {r_max}"
        )));
    }
    let opts = SolverOptions {
        form: match a.form {
            Form::Radial => ShootingForm::Radial,
            Form::Reduced => ShootingForm::Reduced,
        },
        ..SolverOptions::default()
    };
    let r_eff = effective_r_max(&p, r_max);
    let grid = uniform_grid(r_eff, a.points);
    let states = (1..=a.levels)
        .into_par_iter()
        .map(|n| shoot_state(&p, r_eff, n, &grid, &opts))
        .collect::<Result<Vec<_>, _>>()?;
    spectrum_output(
        &SpectrumResult::from_states(&p, r_eff, grid, states),
        &a.output,
    )
}

// ------------------------------------------------------------- pseudo-y0

#[derive(Serialize)]
struct PseudoOutput<'a> {
    a: f64,
    #[serde(flatten)]
    report: &'a PseudoStateReport,
}

pub fn pseudo_y0(a: &PseudoArgs) -> Result<(), CliError> {
    let opts = PseudoOptions {
        quadrature: quadrature(&a.quad)?,
        probe_sigma: a.quad.sigma,
        ..PseudoOptions::default()
    };
    let report = pseudo_y0_report(a.a, a.n, units(&a.units)?, &opts)?;
    let bytes = match format(&a.output, Format::Json) {
        Format::Json => to_json(&PseudoOutput {
            a: a.a,
            report: &report,
        })?,
        Format::Csv => {
            let fit = &report.kinetic_fit;
            let rows: Vec<Vec<String>> = fit
                .eps
                .iter()
                .zip(&fit.values)
                .map(|(e, t)| vec![fmt_f64(*e), fmt_f64(*t)])
                .collect();
            to_csv(&["eps", "kinetic"], &rows)?
        }
    };
    emit(&bytes, a.output.out.as_deref())
}

// ------------------------------------------------------------------ fig1

#[derive(Serialize)]
struct Fig1Output {
    x2: f64,
    /// `(x, x Y0(x)^2)`.
    points: Vec<(f64, f64)>,
}

pub fn fig1(a: &Fig1Args) -> Result<(), CliError> {
    if a.points == 0 {
        return Err(CliError::Args("--points must be positive".into()));
    }
    let grid = fig1_grid(a.points);
    let data = fig1_data(&grid)?;
    let bytes = match format(&a.output, Format::Csv) {
        Format::Csv => {
            let rows: Vec<Vec<String>> = data
                .iter()
                .map(|(x, y)| vec![fmt_f64(*x), fmt_f64(*y)])
                .collect();
            to_csv(&["x", "xY0sq"], &rows)?
        }
        Format::Json => to_json(&Fig1Output {
            x2: *grid.last().expect("grid is non-empty"),
            points: data,
        })?,
    };
    emit(&bytes, a.output.out.as_deref())
}

// ------------------------------------------------------------------ flux

#[derive(Serialize)]
struct FluxOutput {
    alpha: f64,
    eps: f64,
    flux: f64,
    limit: f64,
    difference: f64,
}

pub fn flux(a: &FluxArgs) -> Result<(), CliError> {
    json_only(&a.output, "flux")?;
    for (name, v) in [("--alpha", a.alpha), ("--eps", a.eps)] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(CliError::Args(format!("{name} must be positive, got {v}")));
        }
    }
    let flux = regularized_flux(a.alpha, a.eps);
    let out = FluxOutput {
        alpha: a.alpha,
        eps: a.eps,
        flux,
        limit: TAU,
        difference: flux - TAU,
    };
    emit(&to_json(&out)?, a.output.out.as_deref())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn problem_args(dim: u32, m: Option<i32>, l: Option<u32>) -> ProblemArgs {
        ProblemArgs {
            dim,
            m,
            l,
            potential: "zero".into(),
            units: UnitArgs {
                hbar: 1.0,
                mass: 1.0,
            },
        }
    }

    #[test]
    fn quantum_number_follows_dimension() {
        assert_eq!(
            problem(&problem_args(2, Some(-2), None))
                .unwrap()
                .quantum_number,
            -2
        );
        assert_eq!(
            problem(&problem_args(3, None, Some(4)))
                .unwrap()
                .quantum_number,
            4
        );
        assert_eq!(
            problem(&problem_args(2, None, Some(1))).unwrap_err().code(),
            2
        );
        assert_eq!(
            problem(&problem_args(3, Some(1), None)).unwrap_err().code(),
            2
        );
    }

    #[test]
    fn quadrature_overrides_are_validated() {
        let q = |eps: Vec<f64>, sigma| QuadArgs {
            eps_list: Some(eps),
            sigma,
            angular_nodes: None,
        };
        assert!(quadrature(&q(vec![0.02, 0.01, 0.005], 0.5)).is_ok());
        assert_eq!(quadrature(&q(vec![0.01, 0.02], 0.5)).unwrap_err().code(), 2);
        assert_eq!(
            quadrature(&q(vec![0.02, 0.01], -1.0)).unwrap_err().code(),
            2
        );
    }

    #[test]
    fn log_case_passes() {
        let run = log_run(0.5, &QuadratureConfig::default()).unwrap();
        assert!(run.passed);
        assert_eq!(run.residuals.len(), 5);
        for r in &run.residuals {
            assert!((r.predicted[0] - TAU).abs() < 1e-12);
        }
    }

    #[test]
    fn fitted_run_flags_out_of_tolerance() {
        let quad = QuadratureConfig::default();
        let p = RadialProblem::two_d(1, PotentialSpec::Zero);
        let series =
            frobenius_series(&p, 2.0, Branch::Unacceptable, Complex64::new(1.0, 0.0), 12).unwrap();
        let cand = SingularCandidate::power_branch(1, series).unwrap();
        let loose = fitted_run(1, cand.clone(), String::new(), 0.5, 1e-3, &quad).unwrap();
        assert!(loose.passed);
        let strict = fitted_run(1, cand, String::new(), 0.5, 0.0, &quad).unwrap();
        assert!(!strict.passed);
    }
}
