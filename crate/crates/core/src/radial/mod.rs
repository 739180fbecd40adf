//! Bound states of the radial equation
//!
//! `R'' + (d-1)/r R' - c/r² R + κ (E - V) R = 0`, `c = m²` (2D) or `l(l+1)`
//! (3D), `κ = 2μ/ħ²`,
//!
//! by outward integration from a Frobenius start near the origin and
//! shooting on `R(r_max) = 0`. The same problem in the reduced variable
//! `u = R√r` (2D) or `u = rR` (3D) is available as an independent check.

mod pseudo;
mod well;

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::math::{powi, sqrt};
use crate::ode::{integrate, OdeOptions};
use crate::origin::{
    check_regular, classify, frobenius_series, u_transform, Branch, LeadingForm, RadialProblem,
    DEFAULT_SERIES_ORDER,
};
use crate::special_fn::{zero, CylinderFunction, ZeroIndex};
use crate::{Error, Result};

pub use pseudo::{
    pseudo_y0_report, y0_norm_closed_form, KineticFit, PseudoOptions, PseudoStateReport,
};
pub use well::{
    fig1_data, fig1_grid, pseudo_level_energy, well_energy, well_spectrum, WellState,
    FIG1_ZERO_INDEX,
};

/// Which unknown is integrated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum ShootingForm {
    /// `R` itself.
    #[default]
    Radial,
    /// `u = R r^{(d-1)/2}`, a 1D Schrödinger equation with `V_eff`.
    Reduced,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SolverOptions {
    /// Start radius as a fraction of `r_max`.
    pub start_fraction: f64,
    pub series_order: usize,
    pub rtol: f64,
    /// Relative energy tolerance of the eigenvalue refinement.
    pub energy_tolerance: f64,
    pub form: ShootingForm,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            start_fraction: 1e-6,
            series_order: DEFAULT_SERIES_ORDER,
            rtol: 1e-12,
            energy_tolerance: 1e-13,
            form: ShootingForm::Radial,
        }
    }
}

/// One outward integration.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RadialSolution {
    pub energy: f64,
    pub r: Vec<f64>,
    /// `R(r)` at the sample radii (unnormalised, `a₀ = 1`).
    pub radial: Vec<f64>,
    /// `R'(r)`.
    pub slope: Vec<f64>,
    /// `∫₀^{r_max} R² r^{d-1} dr`.
    pub norm_sq: f64,
    /// Sign changes of `R` on `(r₀, r_max)`.
    pub nodes: usize,
    /// `R(r_max)` (or `u(r_max)` in reduced form), the shooting mismatch.
    pub mismatch: f64,
}

/// `V` inside the integration domain; a hard wall only bounds the domain.
fn interior_potential(problem: &RadialProblem, r: f64) -> f64 {
    match problem.potential.wall_radius() {
        Some(_) => 0.0,
        None => problem.potential.value(r),
    }
}

/// Outer radius actually used: a hard wall caps `r_max`.
pub fn effective_r_max(problem: &RadialProblem, r_max: f64) -> f64 {
    match problem.potential.wall_radius() {
        Some(a) => a.min(r_max),
        None => r_max,
    }
}

struct Shot {
    states: Vec<[f64; 3]>,
    nodes: usize,
}

fn shoot(
    problem: &RadialProblem,
    energy: f64,
    r_max: f64,
    stops: &[f64],
    opts: &SolverOptions,
) -> Result<(Shot, f64)> {
    let r0 = opts.start_fraction * r_max;
    let series = frobenius_series(
        problem,
        energy,
        Branch::Acceptable,
        Complex64::new(1.0, 0.0),
        opts.series_order,
    )?;
    let (v, d, _) = series.eval_with_derivatives(r0);
    let (rv, rd) = (v.re, d.re);
    let dim = problem.dimension.value() as f64;
    let s = series.leading_exponent as f64;
    // ∫₀^{r₀} of the leading term
    let head = powi(
        r0,
        2 * series.leading_exponent + problem.dimension.value() as i32,
    ) / (2.0 * s + dim);
    let kappa = problem.units.kappa();
    let c = problem.centrifugal();
    let first = problem.first_order_coefficient();
    let ode = OdeOptions {
        rtol: opts.rtol,
        ..OdeOptions::default()
    };
    let half = 0.5 * first;
    // u = R r^{(d-1)/2}
    let scale = powf_half(r0, half);
    let mut prev = match opts.form {
        ShootingForm::Radial => rv,
        ShootingForm::Reduced => rv * scale,
    };
    let mut nodes = 0usize;
    let mut count = |_t: f64, y: &[f64; 3]| {
        if prev * y[0] < 0.0 {
            nodes += 1;
        }
        if y[0] != 0.0 {
            prev = y[0];
        }
    };
    let states = match opts.form {
        ShootingForm::Radial => integrate(
            |r, y: &[f64; 3]| {
                let w = kappa * (energy - interior_potential(problem, r));
                let acc = -first / r * y[1] + c / (r * r) * y[0] - w * y[0];
                [y[1], acc, y[0] * y[0] * powi(r, first as i32)]
            },
            r0,
            [rv, rd, head],
            stops,
            &ode,
            &mut count,
        )?,
        ShootingForm::Reduced => {
            let ut = u_transform(problem);
            let u0 = rv * scale;
            let du0 = rd * scale
                + if half > 0.0 {
                    half * rv * scale / r0
                } else {
                    0.0
                };
            let cu = ut.centrifugal_coefficient;
            let out = integrate(
                |r, y: &[f64; 3]| {
                    let w = kappa * (interior_potential(problem, r) - energy) + cu / (r * r);
                    [y[1], w * y[0], y[0] * y[0]]
                },
                r0,
                [u0, du0, head],
                stops,
                &ode,
                &mut count,
            )?;
            // back to R, R'
            out.into_iter()
                .zip(stops)
                .map(|(y, &r)| {
                    let sc = powf_half(r, half);
                    let rr = y[0] / sc;
                    let dr = y[1] / sc - if half > 0.0 { half * rr / r } else { 0.0 };
                    [rr, dr, y[2]]
                })
                .collect()
        }
    };
    let last = states.last().copied().unwrap_or([f64::NAN; 3]);
    let mismatch = match opts.form {
        ShootingForm::Radial => last[0],
        ShootingForm::Reduced => last[0] * powf_half(*stops.last().unwrap_or(&r_max), 0.5 * first),
    };
    Ok((Shot { states, nodes }, mismatch))
}

/// `r^p` for the half-integer powers of the reduction.
fn powf_half(r: f64, p: f64) -> f64 {
    if p == 0.0 {
        1.0
    } else if p == 0.5 {
        sqrt(r)
    } else {
        crate::math::powf(r, p)
    }
}

fn check_problem(problem: &RadialProblem, r_max: f64) -> Result<()> {
    if !check_regular(&problem.potential) {
        return Err(Error::IrregularPotential);
    }
    if !(r_max > 0.0 && r_max.is_finite()) {
        return Err(Error::InvalidProblem(alloc::format!(
            "r_max must be positive, got {r_max}"
        )));
    }
    classify(problem).map(|_| ())
}

/// Uniform sample radii `r_max · i / n`, `i = 1..=n`.
pub fn uniform_grid(r_max: f64, n: usize) -> Vec<f64> {
    (1..=n).map(|i| r_max * i as f64 / n as f64).collect()
}

/// Outward integration of the acceptable branch at energy `energy`,
/// sampled at `samples` uniform radii on `(0, r_max]`.
pub fn integrate_radial(
    problem: &RadialProblem,
    energy: f64,
    branch: Branch,
    r_max: f64,
    samples: usize,
) -> Result<RadialSolution> {
    integrate_radial_with(
        problem,
        energy,
        branch,
        r_max,
        &uniform_grid(r_max, samples.max(1)),
        &SolverOptions::default(),
    )
}

/// As [`integrate_radial`] on explicit, increasing sample radii ending at
/// the outer radius.
pub fn integrate_radial_with(
    problem: &RadialProblem,
    energy: f64,
    branch: Branch,
    r_max: f64,
    grid: &[f64],
    opts: &SolverOptions,
) -> Result<RadialSolution> {
    if branch != Branch::Acceptable {
        return Err(Error::InvalidProblem(
            "outward integration starts on the acceptable branch".into(),
        ));
    }
    check_problem(problem, r_max)?;
    let r_max = effective_r_max(problem, r_max);
    let r0 = opts.start_fraction * r_max;
    if grid.is_empty()
        || grid[0] <= r0
        || grid.windows(2).any(|w| w[1] <= w[0])
        || *grid.last().unwrap() > r_max
    {
        return Err(Error::InvalidProblem(
            "sample radii must increase within (r0, r_max]".into(),
        ));
    }
    let (shot, mismatch) = shoot(problem, energy, r_max, grid, opts)?;
    Ok(RadialSolution {
        energy,
        r: grid.to_vec(),
        radial: shot.states.iter().map(|y| y[0]).collect(),
        slope: shot.states.iter().map(|y| y[1]).collect(),
        norm_sq: shot.states.last().map_or(0.0, |y| y[2]),
        nodes: shot.nodes,
        mismatch,
    })
}

fn nodes_and_mismatch(
    problem: &RadialProblem,
    energy: f64,
    r_max: f64,
    opts: &SolverOptions,
) -> Result<(usize, f64)> {
    let (shot, mismatch) = shoot(problem, energy, r_max, &[r_max], opts)?;
    Ok((shot.nodes, mismatch))
}

/// Upper end of the initial search window: the 10th hard-wall level of a
/// disk of radius `r_max`, lifted by the largest sampled potential.
fn energy_cap(problem: &RadialProblem, r_max: f64) -> f64 {
    let order = problem.order()
        + if problem.dimension == crate::origin::Dimension::Three {
            1
        } else {
            0
        };
    let j = zero(ZeroIndex::new(CylinderFunction::j(order), 10).expect("index is positive"));
    let base = j * j / (problem.units.kappa() * r_max * r_max);
    let v_max = (1..=64)
        .map(|i| interior_potential(problem, r_max * i as f64 / 64.0))
        .filter(|v| v.is_finite())
        .fold(0.0, f64::max);
    base + v_max
}

fn lower_start(problem: &RadialProblem, r_max: f64) -> f64 {
    let v_min = (1..=64)
        .map(|i| interior_potential(problem, r_max * i as f64 / 64.0))
        .filter(|v| v.is_finite())
        .fold(0.0, f64::min);
    if v_min >= 0.0 {
        0.0
    } else {
        2.0 * v_min - 1.0
    }
}

/// The `n`-th (1-based) level with `R(r_max) = 0`.
pub fn shoot_level(
    problem: &RadialProblem,
    r_max: f64,
    n: usize,
    opts: &SolverOptions,
) -> Result<f64> {
    check_problem(problem, r_max)?;
    if n == 0 {
        return Err(Error::InvalidProblem("levels are numbered from 1".into()));
    }
    let r_max = effective_r_max(problem, r_max);
    let count = |e: f64| nodes_and_mismatch(problem, e, r_max, opts);
    // E_n = inf { E : nodes(E) >= n }
    let mut lo = lower_start(problem, r_max);
    let mut lo_state = count(lo)?;
    let mut doublings = 0;
    while lo_state.0 >= n {
        doublings += 1;
        if doublings > 200 {
            return Err(Error::NoBracket {
                level: n,
                ceiling: lo,
            });
        }
        lo = 2.0 * lo - 1.0;
        lo_state = count(lo)?;
    }
    let mut hi = energy_cap(problem, r_max).max(lo + 1.0);
    let mut hi_state = count(hi)?;
    let mut doublings = 0;
    while hi_state.0 < n {
        doublings += 1;
        if doublings > 60 {
            return Err(Error::NoBracket {
                level: n,
                ceiling: hi,
            });
        }
        hi = lo + 2.0 * (hi - lo);
        hi_state = count(hi)?;
    }
    for _ in 0..400 {
        if lo_state.0 == n - 1 && hi_state.0 == n {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let s = count(mid)?;
        if s.0 >= n {
            hi = mid;
            hi_state = s;
        } else {
            lo = mid;
            lo_state = s;
        }
    }
    if !(lo_state.0 == n - 1 && hi_state.0 == n) || lo_state.1 * hi_state.1 > 0.0 {
        return Err(Error::NoBracket {
            level: n,
            ceiling: hi,
        });
    }
    refine(lo, lo_state.1, hi, hi_state.1, opts.energy_tolerance, |e| {
        Ok(count(e)?.1)
    })
}

/// Illinois regula falsi on a sign-changing bracket, bisecting every
/// fourth step.
fn refine(
    mut a: f64,
    mut fa: f64,
    mut b: f64,
    mut fb: f64,
    tol: f64,
    mut f: impl FnMut(f64) -> Result<f64>,
) -> Result<f64> {
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    for i in 0..200 {
        if (b - a).abs() <= tol * a.abs().max(b.abs()).max(f64::MIN_POSITIVE) {
            break;
        }
        let mut c = (a * fb - b * fa) / (fb - fa);
        if i % 4 == 3 || !(c > a.min(b) && c < a.max(b)) {
            c = 0.5 * (a + b);
        }
        let fc = f(c)?;
        if fc == 0.0 {
            return Ok(c);
        }
        if fc * fb < 0.0 {
            a = b;
            fa = fb;
        } else {
            fa *= 0.5;
        }
        b = c;
        fb = fc;
    }
    Ok(if fa.abs() < fb.abs() { a } else { b })
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Level {
    pub n: usize,
    pub energy: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SpectrumResult {
    pub problem: RadialProblem,
    pub r_max: f64,
    pub levels: Vec<Level>,
    pub grid: Vec<f64>,
    /// Normalised `R_n` at `grid`, one row per level.
    pub wavefunctions: Vec<Vec<f64>>,
    /// `∫ R_n² r^{d-1} dr` after scaling.
    pub normalization: Vec<f64>,
}

/// One shot level with its normalised wavefunction on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelState {
    pub level: Level,
    pub wavefunction: Vec<f64>,
    pub normalization: f64,
}

/// Level `n` of `problem` on `(0, r_max]`, sampled at `grid` (which must
/// end inside the effective outer radius).
pub fn shoot_state(
    problem: &RadialProblem,
    r_max: f64,
    n: usize,
    grid: &[f64],
    opts: &SolverOptions,
) -> Result<LevelState> {
    let r_eff = effective_r_max(problem, r_max);
    let energy = shoot_level(problem, r_eff, n, opts)?;
    let sol = integrate_radial_with(problem, energy, Branch::Acceptable, r_eff, grid, opts)?;
    let scale = 1.0 / sqrt(sol.norm_sq);
    Ok(LevelState {
        level: Level { n, energy },
        wavefunction: sol.radial.iter().map(|v| v * scale).collect(),
        normalization: sol.norm_sq * scale * scale,
    })
}

impl SpectrumResult {
    /// Assembles a spectrum from states ordered by `n`.
    pub fn from_states(
        problem: &RadialProblem,
        r_max: f64,
        grid: Vec<f64>,
        states: Vec<LevelState>,
    ) -> Self {
        let mut out = SpectrumResult {
            problem: problem.clone(),
            r_max,
            levels: Vec::with_capacity(states.len()),
            grid,
            wavefunctions: Vec::with_capacity(states.len()),
            normalization: Vec::with_capacity(states.len()),
        };
        for s in states {
            out.levels.push(s.level);
            out.wavefunctions.push(s.wavefunction);
            out.normalization.push(s.normalization);
        }
        out
    }
}

/// The lowest `count` levels by shooting, with normalised wavefunctions on
/// `samples` uniform radii.
pub fn shoot_spectrum(
    problem: &RadialProblem,
    r_max: f64,
    count: usize,
    samples: usize,
    opts: &SolverOptions,
) -> Result<SpectrumResult> {
    check_problem(problem, r_max)?;
    if count == 0 {
        return Err(Error::InvalidProblem("need at least one level".into()));
    }
    let r_eff = effective_r_max(problem, r_max);
    let grid = uniform_grid(r_eff, samples.max(1));
    let states = (1..=count)
        .map(|n| shoot_state(problem, r_eff, n, &grid, opts))
        .collect::<Result<Vec<_>>>()?;
    Ok(SpectrumResult::from_states(problem, r_eff, grid, states))
}

/// Relative residual `|R'' + (d-1)R'/r - cR/r² + κ(E-V)R| / max term` of
/// the integrated acceptable solution at each checkpoint, with `R''` and
/// `R'` from fourth-order central differences of step `h`.
pub fn checkpoint_residuals(
    problem: &RadialProblem,
    energy: f64,
    r_max: f64,
    checkpoints: &[f64],
    h: f64,
    opts: &SolverOptions,
) -> Result<Vec<f64>> {
    let r_eff = effective_r_max(problem, r_max);
    let mut stops = Vec::with_capacity(5 * checkpoints.len());
    for &r in checkpoints {
        if r - 2.0 * h <= opts.start_fraction * r_eff || r + 2.0 * h > r_eff {
            return Err(Error::InvalidProblem(alloc::format!(
                "checkpoint {r} too close to the ends"
            )));
        }
        for k in -2..=2 {
            stops.push(r + k as f64 * h);
        }
    }
    let mut order: Vec<usize> = (0..stops.len()).collect();
    order.sort_by(|&a, &b| stops[a].total_cmp(&stops[b]));
    let sorted: Vec<f64> = order.iter().map(|&i| stops[i]).collect();
    let mut dedup = sorted.clone();
    dedup.dedup();
    let sol = integrate_radial_with(problem, energy, Branch::Acceptable, r_eff, &dedup, opts)?;
    let at = |r: f64| {
        let i = dedup.partition_point(|&x| x < r);
        sol.radial[i]
    };
    let kappa = problem.units.kappa();
    let c = problem.centrifugal();
    let first = problem.first_order_coefficient();
    Ok(checkpoints
        .iter()
        .map(|&r| {
            let f = [
                at(r - 2.0 * h),
                at(r - h),
                at(r),
                at(r + h),
                at(r + 2.0 * h),
            ];
            let d1 = (f[0] - 8.0 * f[1] + 8.0 * f[3] - f[4]) / (12.0 * h);
            let d2 = (-f[0] + 16.0 * f[1] - 30.0 * f[2] + 16.0 * f[3] - f[4]) / (12.0 * h * h);
            let terms = [
                d2,
                first * d1 / r,
                -c * f[2] / (r * r),
                kappa * (energy - interior_potential(problem, r)) * f[2],
            ];
            let scale = terms.iter().fold(0.0f64, |m, t| m.max(t.abs()));
            terms.iter().sum::<f64>().abs() / scale.max(f64::MIN_POSITIVE)
        })
        .collect())
}

/// Whether `∫₀ |R|² r^{d-1} dr` diverges for a branch with this leading form.
pub fn normalization_diverges(dimension: crate::origin::Dimension, form: LeadingForm) -> bool {
    match form {
        // r^{2s + d - 1} is integrable at 0 iff 2s + d > 0
        LeadingForm::Power { exponent } => 2 * exponent + dimension.value() as i32 <= 0,
        LeadingForm::Log { .. } => false,
    }
}

/// Normalisability at the origin of one branch of `problem`.
pub fn normalization_check(problem: &RadialProblem, branch: Branch) -> Result<bool> {
    let b = classify(problem)?;
    let form = match branch {
        Branch::Acceptable => b.acceptable,
        Branch::Unacceptable => b.unacceptable,
    };
    Ok(normalization_diverges(problem.dimension, form))
}
