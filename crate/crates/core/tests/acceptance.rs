//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Criteria 3 and 4 compare against the reference third-harmonic row, which
//! disagrees with the exact reduction; those two lines report FAIL. The
//! process exits non-zero only if something else regresses.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_traits::{One, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use radial_gate_core::anomaly::exact::{exact, exact_real, integer, rational};
use radial_gate_core::anomaly::{
    angular_laplacian, pair_exact, q_term, reduce_to_cartesian, DeltaForm, DeltaSum, DeltaTerm,
    ExactComplex, MultiIndex, RadialWeight, Rational,
};
use radial_gate_core::origin::{
    classify, frobenius_series, u_transform, Branch, Dimension, LeadingForm, PotentialSpec,
    RadialProblem, Units,
};
use radial_gate_core::radial::{
    normalization_check, pseudo_y0_report, shoot_level, well_energy, y0_norm_closed_form,
    PseudoOptions, SolverOptions,
};
use radial_gate_core::special_fn::{eval, zero, CylinderFunction, ZeroIndex};
use radial_gate_core::weak::{
    exact_monomial_basis, measure_coefficient, monomial_basis, regularized_flux, weak_residual,
    QuadratureConfig, SingularCandidate, TestFunction,
};
use radial_gate_core::Complex64;

struct Outcome {
    pass: bool,
    /// Checks that must hold even when the criterion as stated cannot.
    sound: bool,
    detail: String,
}

impl Outcome {
    fn plain(pass: bool, detail: String) -> Self {
        Self {
            pass,
            sound: pass,
            detail,
        }
    }
}

fn run(id: u32, title: &str, limit: Option<Duration>, f: impl FnOnce() -> Outcome) -> (bool, bool) {
    let start = Instant::now();
    let mut out = f();
    let elapsed = start.elapsed();
    if let Some(limit) = limit {
        if elapsed > limit {
            out.pass = false;
            out.sound = false;
            let _ = write!(out.detail, "; over the {:.0?} budget", limit);
        }
    }
    let tag = if out.pass { "PASS" } else { "FAIL" };
    println!(
        "criterion {id:>2} [{tag}] {title} ({elapsed:.2?}): {}",
        out.detail
    );
    (out.pass, out.sound)
}

fn cart(c: ExactComplex, x: u32, y: u32) -> DeltaTerm {
    DeltaTerm {
        coefficient: c,
        pi_power: 1,
        form: DeltaForm::cartesian(x, y),
    }
}

fn re(n: i128, d: i128) -> ExactComplex {
    exact_real(rational(n, d))
}

fn im(n: i128, d: i128) -> ExactComplex {
    exact(Rational::zero(), rational(n, d))
}

/// The reference `Q·(-2μ/ħ²)/a₀` rows, `s = ±1` selecting the sign.
fn reference_row(abs_m: u32, s: i128) -> DeltaSum {
    let s = integer(s);
    match abs_m {
        // 2π(∂x ± i∂y)
        1 => DeltaSum::from_terms([cart(re(2, 1), 1, 0), cart(im(2, 1) * s, 0, 1)]),
        // -π(∂xx - ∂yy ± 2i∂xy)
        2 => DeltaSum::from_terms([
            cart(re(-1, 1), 2, 0),
            cart(re(1, 1), 0, 2),
            cart(im(-2, 1) * s, 1, 1),
        ]),
        // π(1/4)(-∂xxx - 2∂yyx ± i∂yyy ± 2i∂xxy)
        3 => DeltaSum::from_terms([
            cart(re(-1, 4), 3, 0),
            cart(re(-2, 4), 1, 2),
            cart(im(1, 4) * s, 0, 3),
            cart(im(2, 4) * s, 2, 1),
        ]),
        _ => unreachable!(),
    }
}

/// `(π/4)(∂x ± i∂y)³`, the exact reduction of the third harmonic.
fn reduced_third_row(s: i128) -> DeltaSum {
    let s = integer(s);
    DeltaSum::from_terms([
        cart(re(1, 4), 3, 0),
        cart(im(3, 4) * s, 2, 1),
        cart(re(-3, 4), 1, 2),
        cart(im(-1, 4) * s, 0, 3),
    ])
}

fn criterion_1() -> Outcome {
    let x2 = zero(ZeroIndex::new(CylinderFunction::y(0), 2).unwrap());
    let err = (x2 - 3.95768).abs();
    Outcome::plain(
        err <= 5e-5,
        format!("x2 = {x2:.15}, |x2 - 3.95768| = {err:.2e}"),
    )
}

fn criterion_2() -> Outcome {
    let quad = QuadratureConfig::default();
    let cand = SingularCandidate::log_branch(1.0, 1.0).unwrap();
    let mut worst = 0.0f64;
    let mut ok = true;
    for sigma in [0.2, 0.35, 0.5, 0.7, 1.0] {
        let probe = TestFunction::gaussian(sigma).unwrap();
        match weak_residual(&cand, &probe, &quad) {
            Ok(r) => {
                let rel = (r.measured - Complex64::new(2.0 * PI, 0.0)).norm() / (2.0 * PI);
                worst = worst.max(rel);
            }
            Err(e) => {
                ok = false;
                println!("    σ = {sigma}: {e}");
            }
        }
    }
    Outcome::plain(
        ok && worst <= 1e-6,
        format!("5 Gaussian probes, worst relative error {worst:.2e}"),
    )
}

fn criterion_3() -> Outcome {
    let mut pass = true;
    let mut sound = true;
    let mut notes = Vec::new();
    for abs_m in 1..=3u32 {
        for s in [1i128, -1] {
            let m = s as i32 * abs_m as i32;
            let problem = RadialProblem::two_d(m, PotentialSpec::Zero);
            let q = q_term(&problem, Branch::Unacceptable, ExactComplex::one()).unwrap();
            let via_reduction =
                reduce_to_cartesian(&angular_laplacian(-(abs_m as i32), m).anomaly).unwrap();
            let composed = q.laplacian_part == via_reduction;
            let reference = q.laplacian_part == reference_row(abs_m, s);
            sound &= composed;
            pass &= composed && reference;
            if abs_m == 3 {
                let corrected = q.laplacian_part == reduced_third_row(s);
                sound &= corrected;
                notes.push(format!(
                    "m={m:+}: reference row {}, exact (π/4)(∂x{}i∂y)³ {}",
                    if reference { "matches" } else { "differs" },
                    if s > 0 { "+" } else { "-" },
                    if corrected { "matches" } else { "differs" }
                ));
            } else {
                sound &= reference;
                if !reference {
                    notes.push(format!("m={m:+}: reference row differs"));
                }
            }
        }
    }
    let detail = format!(
        "q_term = reduce∘angular_laplacian for all m; {}",
        notes.join("; ")
    );
    Outcome {
        pass,
        sound,
        detail,
    }
}

fn cartesian_entries(sum: &DeltaSum) -> Vec<(MultiIndex, Complex64)> {
    sum.terms()
        .iter()
        .map(|t| {
            let DeltaForm::Cartesian(idx) = t.form else {
                unreachable!()
            };
            let c = Complex64::new(
                radial_gate_core::anomaly::exact::to_f64(&t.coefficient.re),
                radial_gate_core::anomaly::exact::to_f64(&t.coefficient.im),
            );
            (idx, c * PI.powi(t.pi_power as i32))
        })
        .collect()
}

fn worst_relative(measured: &[(MultiIndex, Complex64)], want: &[(MultiIndex, Complex64)]) -> f64 {
    want.iter()
        .map(|(idx, w)| {
            let got = measured
                .iter()
                .find(|(i, _)| i == idx)
                .map_or(Complex64::zero(), |(_, v)| *v);
            (got - w).norm() / w.norm()
        })
        .fold(0.0, f64::max)
}

fn criterion_4() -> Outcome {
    let quad = QuadratureConfig::default();
    let basis = monomial_basis(0.5, 3).unwrap();
    let mut pass = true;
    let mut sound = true;
    let mut notes = Vec::new();
    for abs_m in 1..=3u32 {
        for s in [1i128, -1] {
            let m = s as i32 * abs_m as i32;
            // a solution of the free radial equation at E = 2, a₀ = 1
            let problem = RadialProblem::two_d(m, PotentialSpec::Zero);
            let series =
                frobenius_series(&problem, 2.0, Branch::Unacceptable, Complex64::one(), 12)
                    .unwrap();
            let cand = SingularCandidate::power_branch(m, series).unwrap();
            let est = match measure_coefficient(&cand, &basis, 3, &quad) {
                Ok(e) => e,
                Err(e) => {
                    pass = false;
                    sound = false;
                    notes.push(format!("m={m:+}: {e}"));
                    continue;
                }
            };
            // coefficients absent from a row must vanish as well
            let spurious = est
                .coefficients
                .iter()
                .filter(|(idx, _)| idx.order() != abs_m)
                .map(|(_, c)| c.norm())
                .fold(0.0, f64::max);
            let reference = worst_relative(
                &est.coefficients,
                &cartesian_entries(&reference_row(abs_m, s)),
            );
            let ok = reference <= 1e-3 && spurious <= 1e-6;
            pass &= ok;
            if abs_m == 3 {
                let exact =
                    worst_relative(&est.coefficients, &cartesian_entries(&reduced_third_row(s)));
                sound &= exact <= 1e-3 && spurious <= 1e-6;
                notes.push(format!(
                    "m={m:+}: vs reference {reference:.1e}, vs exact reduction {exact:.1e}"
                ));
            } else {
                sound &= ok;
                notes.push(format!("m={m:+}: {reference:.1e}"));
            }
        }
    }
    let mut acceptable = 0.0f64;
    for m in -3..=3 {
        let problem = RadialProblem::two_d(m, PotentialSpec::Zero);
        let series =
            frobenius_series(&problem, 1.7, Branch::Acceptable, Complex64::one(), 12).unwrap();
        let cand = SingularCandidate::smooth_branch(m, series).unwrap();
        match measure_coefficient(&cand, &basis, 3, &quad) {
            Ok(est) => acceptable = acceptable.max(est.max_abs()),
            Err(e) => {
                acceptable = f64::INFINITY;
                notes.push(format!("acceptable m={m}: {e}"));
            }
        }
    }
    let acc_ok = acceptable <= 1e-6;
    pass &= acc_ok;
    sound &= acc_ok;
    notes.push(format!("acceptable branches max |c| {acceptable:.1e}"));
    Outcome {
        pass,
        sound,
        detail: format!("worst relative error per row: {}", notes.join("; ")),
    }
}

fn criterion_5() -> Outcome {
    let opts = SolverOptions::default();
    let mut worst = 0.0f64;
    let mut errors = Vec::new();
    for m in 0..=3 {
        let problem = RadialProblem::two_d(m, PotentialSpec::well(1.0).unwrap());
        for n in 1..=5 {
            let want = well_energy(Units::default(), 1.0, m, n as u32).unwrap();
            match shoot_level(&problem, 1.0, n, &opts) {
                Ok(e) => worst = worst.max((e - want).abs() / want),
                Err(e) => errors.push(format!("m={m} n={n}: {e}")),
            }
        }
    }
    Outcome::plain(
        errors.is_empty() && worst <= 1e-7,
        format!(
            "20 levels, worst relative deviation {worst:.2e}{}",
            errors.join("; ")
        ),
    )
}

fn criterion_6() -> Outcome {
    let r = match pseudo_y0_report(1.0, 2, Units::default(), &PseudoOptions::default()) {
        Ok(r) => r,
        Err(e) => return Outcome::plain(false, e.to_string()),
    };
    let closed = y0_norm_closed_form(r.zero).unwrap();
    let a = r.norm_sq.is_finite() && r.norm_sq > 0.0 && r.norm_refinement <= 1e-8;
    let b = (r.q_coefficient - 4.0).abs() / 4.0 <= 1e-3;
    let c = (r.green_defect - 4.0).abs() / 4.0 <= 1e-3;
    let slope = 4.0 / PI;
    let d = (r.kinetic_fit.b - slope).abs() / slope <= 0.05;
    let flag = |ok: bool| if ok { "ok" } else { "FAIL" };
    Outcome::plain(
        a && b && c && d,
        format!(
            "(a) {} norm {:.12} (closed form {:.12}, refinement {:.1e}); (b) {} δ coefficient {:.8}; \
             (c) {} Green defect {:.8}; (d) {} B = {:.6} vs 4/π = {:.6}, fit residual {:.1e}",
            flag(a),
            r.norm_sq,
            closed,
            r.norm_refinement,
            flag(b),
            r.q_coefficient,
            flag(c),
            r.green_defect,
            flag(d),
            r.kinetic_fit.b,
            slope,
            r.kinetic_fit.max_relative_residual
        ),
    )
}

fn criterion_7() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let alpha: f64 = rng.random_range(1e-6..1.0);
        let eps: f64 = rng.random_range(1e-6..1.0);
        let want = 2.0 * PI * eps / (eps + alpha);
        worst = worst.max((regularized_flux(alpha, eps) - want).abs() / want.max(1.0));
    }
    let seq: Vec<f64> = (0..=30)
        .map(|j| regularized_flux(0.1 / 2f64.powi(j), 0.1))
        .collect();
    let monotone = seq.windows(2).all(|w| w[1] > w[0]);
    let gap = (seq[30] - 2.0 * PI).abs();
    Outcome::plain(
        worst <= 1e-12 && monotone && gap < 1e-8,
        format!("100 pairs, worst deviation {worst:.1e}; α→0 increasing, |F - 2π| = {gap:.1e} at α = 0.1·2^-30"),
    )
}

fn criterion_8() -> Outcome {
    let mut ok = true;
    let mut rows = Vec::new();
    for m in 0..=3 {
        for sign in [1, -1] {
            let b = classify(&RadialProblem::two_d(sign * m, PotentialSpec::Zero)).unwrap();
            let unacceptable = if m == 0 {
                LeadingForm::Log { scale: 1.0 }
            } else {
                LeadingForm::Power { exponent: -m }
            };
            ok &= b.acceptable == LeadingForm::Power { exponent: m }
                && b.unacceptable == unacceptable
                && b.q_pattern.derivative_order == m as u32
                && b.q_pattern.dimension == Dimension::Two;
        }
        rows.push(format!("2D m=±{m}"));
    }
    for l in 0..=3u32 {
        let b = classify(&RadialProblem::three_d(l, PotentialSpec::Zero)).unwrap();
        ok &= b.acceptable == LeadingForm::Power { exponent: l as i32 }
            && b.unacceptable
                == LeadingForm::Power {
                    exponent: -(l as i32) - 1,
                }
            && b.q_pattern.derivative_order == l
            && b.q_pattern.dimension == Dimension::Three;
    }
    rows.push("3D l=0..3".into());
    // the m = 0 singular solution Y₀(kr): R(0) diverges, u = √r R → 0
    let problem = RadialProblem::two_d(0, PotentialSpec::Zero);
    let radii: Vec<f64> = (2..=14).map(|j| 10f64.powi(-j)).collect();
    let radial: Vec<f64> = radii
        .iter()
        .map(|&r| eval(CylinderFunction::y(0), r).unwrap())
        .collect();
    let u = u_transform(&problem).sample_u(&radii, &radial);
    let r_grows =
        radial.windows(2).all(|w| w[1].abs() > w[0].abs()) && radial.last().unwrap().abs() > 20.0;
    let u_vanishes =
        u.windows(2).all(|w| w[1].abs() < w[0].abs()) && u.last().unwrap().abs() < 1e-5;
    ok &= r_grows && u_vanishes;
    Outcome::plain(
        ok,
        format!(
            "{} classified; m=0 singular branch: |R(1e-14)| = {:.2}, u(1e-14) = {:.2e}",
            rows.join(", "),
            radial.last().unwrap().abs(),
            u.last().unwrap()
        ),
    )
}

fn criterion_9() -> Outcome {
    let mut ok = true;
    let mut detail = Vec::new();
    for m in -3..=3i32 {
        let p = RadialProblem::two_d(m, PotentialSpec::Zero);
        let singular = normalization_check(&p, Branch::Unacceptable).unwrap();
        let regular = normalization_check(&p, Branch::Acceptable).unwrap();
        ok &= singular == (m != 0) && !regular;
        detail.push(format!(
            "m={m:+}: {}",
            if singular { "diverges" } else { "finite" }
        ));
    }
    Outcome::plain(
        ok,
        format!(
            "singular branch {}; acceptable branches finite",
            detail.join(", ")
        ),
    )
}

fn criterion_10() -> Outcome {
    let basis = exact_monomial_basis(rational(1, 4), 3).unwrap();
    let mut ok = basis.len() == 10;
    for p in 1..=3u32 {
        let weighted = DeltaSum::single(
            ExactComplex::one(),
            0,
            DeltaForm::IteratedLaplacian {
                power: p,
                weight: RadialWeight {
                    r_power: 2,
                    harmonic: 0,
                },
            },
        );
        let lowered = DeltaSum::single(
            exact_real(integer(4 * (p * p) as i128)),
            0,
            DeltaForm::laplacian(p - 1),
        );
        for probe in &basis {
            let lhs = pair_exact(&weighted, probe).unwrap();
            let rhs = pair_exact(&lowered, probe).unwrap();
            ok &= lhs.is_some() && lhs == rhs;
        }
    }
    Outcome::plain(
        ok,
        "r²∇^{2p}δ ≡ 4p²∇^{2(p-1)}δ, p = 1..3, on 10 exact probes".into(),
    )
}

fn main() -> ExitCode {
    let results = [
        run(
            1,
            "second zero of Y0",
            Some(Duration::from_secs(1)),
            criterion_1,
        ),
        run(
            2,
            "log anomaly 2π φ(0)",
            Some(Duration::from_secs(10)),
            criterion_2,
        ),
        run(3, "delta rows, symbolic", None, criterion_3),
        run(
            4,
            "delta rows, numeric",
            Some(Duration::from_secs(120)),
            criterion_4,
        ),
        run(5, "circular-well spectrum", None, criterion_5),
        run(6, "Y0 pseudo-state", None, criterion_6),
        run(7, "regularized flux", None, criterion_7),
        run(8, "origin-behaviour catalogue", None, criterion_8),
        run(9, "normalizability split", None, criterion_9),
        run(10, "iterated-Laplacian identity", None, criterion_10),
    ];
    let passed = results.iter().filter(|(p, _)| *p).count();
    println!("acceptance: {passed}/{} criteria pass", results.len());
    // 3 and 4 cannot pass against the reference |m| = 3 row
    let regressions: Vec<usize> = results
        .iter()
        .enumerate()
        .filter(|(i, (pass, sound))| if *i == 2 || *i == 3 { !sound } else { !pass })
        .map(|(i, _)| i + 1)
        .collect();
    if regressions.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("unexpected failures: {regressions:?}");
        ExitCode::FAILURE
    }
}
