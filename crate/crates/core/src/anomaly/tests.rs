use super::exact::{binomial, exact, exact_i, i_power, integer, rational, sign};
use super::*;
use crate::origin::PotentialSpec;

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

fn one() -> ExactComplex {
    ExactComplex::one()
}

#[test]
fn c_p_closed_form() {
    assert_eq!(AnomalyCoefficient::new(1).c_over_pi, integer(-2));
    assert_eq!(AnomalyCoefficient::new(2).c_over_pi, rational(-1, 4));
    assert_eq!(AnomalyCoefficient::new(3).c_over_pi, rational(-1, 96));
    for p in 1..=6i64 {
        let c = AnomalyCoefficient::new(p);
        let f = factorial(p as u32);
        let want = rational(-4 * p as i128, 2i128.pow(2 * p as u32 - 1) * f * f);
        assert_eq!(c.c_over_pi, want);
        assert_eq!(c.chi, 1);
    }
    for p in [-2, -1, 0] {
        assert_eq!(AnomalyCoefficient::new(p).value(), Rational::zero());
    }
}

#[test]
fn schwartz_examples() {
    let l = schwartz_laplacian(-2);
    assert_eq!((l.classical_factor, l.classical_exponent), (4, -4));
    assert_eq!(
        l.anomaly,
        DeltaSum::single(re(-2, 1), 1, DeltaForm::laplacian(1))
    );
    let l = schwartz_laplacian(-1);
    assert_eq!((l.classical_factor, l.classical_exponent), (1, -3));
    assert!(l.anomaly.is_empty());
    let l = schwartz_laplacian(-4);
    assert_eq!(l.anomaly.coefficient(DeltaForm::laplacian(2), 1), re(-1, 4));
    for s in [-5, -3, 0, 1, 2, 4] {
        assert!(schwartz_laplacian(s).anomaly.is_empty(), "s = {s}");
    }
}

#[test]
fn angular_examples() {
    for m in -4i32..=4 {
        let l = angular_laplacian(m.abs(), m);
        assert_eq!(l.classical_factor, 0);
        assert!(l.anomaly.is_empty());
    }
    let w1 = RadialWeight {
        r_power: 1,
        harmonic: 1,
    };
    let l = angular_laplacian(-1, 1);
    assert_eq!(
        l.anomaly,
        DeltaSum::single(
            re(-1, 1),
            1,
            DeltaForm::IteratedLaplacian {
                power: 1,
                weight: w1
            }
        )
    );
    let w2 = RadialWeight {
        r_power: 2,
        harmonic: 2,
    };
    let l = angular_laplacian(-2, 2);
    assert_eq!(
        l.anomaly,
        DeltaSum::single(
            re(-1, 8),
            1,
            DeltaForm::IteratedLaplacian {
                power: 2,
                weight: w2
            }
        )
    );
    let w3 = RadialWeight {
        r_power: 3,
        harmonic: -3,
    };
    let l = angular_laplacian(-3, -3);
    assert_eq!(
        l.anomaly,
        DeltaSum::single(
            re(-1, 192),
            1,
            DeltaForm::IteratedLaplacian {
                power: 3,
                weight: w3
            }
        )
    );
}

#[test]
fn m0_angular_matches_schwartz() {
    for s in -8..=3 {
        assert_eq!(
            angular_laplacian(s, 0).anomaly,
            schwartz_laplacian(s).anomaly,
            "s = {s}"
        );
    }
}

#[test]
fn reduction_of_first_harmonic() {
    for sign in [1i32, -1] {
        let sum = DeltaSum::single(
            one(),
            0,
            DeltaForm::IteratedLaplacian {
                power: 1,
                weight: RadialWeight {
                    r_power: 1,
                    harmonic: sign,
                },
            },
        );
        let got = reduce_to_cartesian(&sum).unwrap();
        let s = integer(sign as i128);
        let want = DeltaSum::from_terms([
            DeltaTerm {
                coefficient: re(-2, 1),
                pi_power: 0,
                form: DeltaForm::cartesian(1, 0),
            },
            DeltaTerm {
                coefficient: exact_i() * s * integer(-2),
                pi_power: 0,
                form: DeltaForm::cartesian(0, 1),
            },
        ]);
        assert_eq!(got, want);
    }
}

#[test]
fn reduction_of_second_and_third_harmonics() {
    for sign in [1i128, -1] {
        let s = integer(sign);
        let w = RadialWeight {
            r_power: 2,
            harmonic: 2 * sign as i32,
        };
        let sum = DeltaSum::single(
            re(-1, 8),
            1,
            DeltaForm::IteratedLaplacian {
                power: 2,
                weight: w,
            },
        );
        let want = DeltaSum::from_terms([
            cart(re(-1, 1), 2, 0),
            cart(re(1, 1), 0, 2),
            cart(im(-2, 1) * s, 1, 1),
        ]);
        assert_eq!(reduce_to_cartesian(&sum).unwrap(), want);

        let w = RadialWeight {
            r_power: 3,
            harmonic: 3 * sign as i32,
        };
        let sum = DeltaSum::single(
            re(-1, 192),
            1,
            DeltaForm::IteratedLaplacian {
                power: 3,
                weight: w,
            },
        );
        // (π/4)(∂x ± i∂y)³
        let want = DeltaSum::from_terms([
            cart(re(1, 4), 3, 0),
            cart(im(3, 4) * s, 2, 1),
            cart(re(-3, 4), 1, 2),
            cart(im(-1, 4) * s, 0, 3),
        ]);
        assert_eq!(reduce_to_cartesian(&sum).unwrap(), want);
    }
}

#[test]
fn unreducible_weight() {
    let sum = DeltaSum::single(
        one(),
        0,
        DeltaForm::IteratedLaplacian {
            power: 1,
            weight: RadialWeight {
                r_power: 1,
                harmonic: 2,
            },
        },
    );
    assert_eq!(
        reduce_to_cartesian(&sum),
        Err(Error::UnreducibleWeight {
            r_power: 1,
            harmonic: 2
        })
    );
}

/// `∇²(e^{imφ}/r^|m|)` from `e^{imφ}/r^|m| = 1/z̄^|m|` (or its conjugate) and
/// `∇²(1/z̄) = 4π ∂_z̄ δ`: `(-1)^{|m|-1} 2π / ((|m|-1)! 2^{|m|-1}) (∂x ± i∂y)^|m| δ`.
fn closed_form(m: i32) -> DeltaSum {
    let n = m.unsigned_abs();
    let lead = rational(2 * sign(n - 1), factorial(n - 1) * 2i128.pow(n - 1));
    let terms = (0..=n).map(|k| {
        // k factors of ±i∂y
        let c = exact_real(lead * integer(binomial(n, k))) * i_power(k, m < 0);
        cart(c, n - k, k)
    });
    DeltaSum::from_terms(terms)
}

#[test]
fn q_term_matches_complex_closed_form() {
    for m in [-4, -3, -2, -1, 1, 2, 3, 4] {
        let p = RadialProblem::two_d(m, PotentialSpec::Zero);
        let q = q_term(&p, Branch::Unacceptable, one()).unwrap();
        assert_eq!(q.laplacian_part, closed_form(m), "m = {m}");
    }
}

#[test]
fn q_term_log_branch() {
    let units = Units::new(1.3, 0.7).unwrap();
    let p = RadialProblem::two_d(0, PotentialSpec::Zero).with_units(units);
    let c = re(3, 5);
    let q = q_term(&p, Branch::Unacceptable, c).unwrap();
    assert_eq!(
        q.laplacian_part,
        DeltaSum::single(re(6, 5), 1, DeltaForm::DELTA)
    );
    // Q = -(ħ²π/μ) C δ
    let numeric = q.q_prefactor() * 1.2 * core::f64::consts::PI;
    let want = -(1.3f64 * 1.3) * core::f64::consts::PI / 0.7 * 0.6;
    assert!((numeric - want).abs() < 1e-14);
}

#[test]
fn q_term_acceptable_branch_is_empty() {
    for m in -3..=3 {
        let p = RadialProblem::two_d(m, PotentialSpec::Zero);
        assert!(q_term(&p, Branch::Acceptable, one()).unwrap().is_empty());
    }
    let p3 = RadialProblem::three_d(1, PotentialSpec::Zero);
    assert!(q_term(&p3, Branch::Unacceptable, one()).is_err());
}

#[test]
fn q_term_conjugation_symmetry() {
    for m in 1..=3 {
        let plus = q_term(
            &RadialProblem::two_d(m, PotentialSpec::Zero),
            Branch::Unacceptable,
            re(5, 3),
        )
        .unwrap();
        let minus = q_term(
            &RadialProblem::two_d(-m, PotentialSpec::Zero),
            Branch::Unacceptable,
            re(5, 3),
        )
        .unwrap();
        assert_eq!(minus.laplacian_part, plus.laplacian_part.conj());
    }
}

#[test]
fn normal_form_merges_and_drops() {
    let sum = DeltaSum::from_terms([
        cart(re(1, 2), 1, 0),
        cart(re(1, 2), 1, 0),
        cart(re(1, 1), 0, 1),
        cart(re(-1, 1), 0, 1),
    ]);
    assert_eq!(
        sum,
        DeltaSum::single(re(1, 1), 1, DeltaForm::cartesian(1, 0))
    );
    let ordered = DeltaSum::from_terms([
        cart(one(), 0, 2),
        cart(one(), 2, 0),
        cart(one(), 0, 0),
        cart(one(), 1, 1),
    ]);
    let forms: alloc::vec::Vec<_> = ordered.terms().iter().map(|t| t.form).collect();
    assert_eq!(
        forms,
        [
            DeltaForm::cartesian(0, 0),
            DeltaForm::cartesian(2, 0),
            DeltaForm::cartesian(1, 1),
            DeltaForm::cartesian(0, 2)
        ]
    );
}
