//! Integer-order Bessel (`J_m`) and Neumann (`Y_m`) functions of a real
//! argument, their derivatives, and their positive zeros.
//!
//! No external special-function library is involved. Accuracy targets are
//! about `1e-13` absolute for `J` and `1e-13` relative for `Y` away from zeros.

mod bessel;
mod zeros;

use alloc::vec::Vec;

use crate::{Error, Result};

pub use bessel::{ASYMPTOTIC_CROSSOVER, SERIES_CROSSOVER};
pub use zeros::{zero, zeros, ZeroIndex};

/// Euler–Mascheroni constant γ.
pub const EULER_GAMMA: f64 = crate::math::EULER_GAMMA;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum CylinderKind {
    BesselJ,
    NeumannY,
}

/// A cylinder function of non-negative integer order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CylinderFunction {
    pub kind: CylinderKind,
    pub order: u32,
}

impl CylinderFunction {
    pub const fn j(order: u32) -> Self {
        Self {
            kind: CylinderKind::BesselJ,
            order,
        }
    }

    pub const fn y(order: u32) -> Self {
        Self {
            kind: CylinderKind::NeumannY,
            order,
        }
    }

    /// Maps a signed order onto a non-negative one: `f_{-m} = (-1)^m f_m`
    /// for both kinds. Returns the function together with that sign.
    pub fn signed(kind: CylinderKind, order: i32) -> (Self, f64) {
        let sign = if order < 0 && order % 2 != 0 {
            -1.0
        } else {
            1.0
        };
        (
            Self {
                kind,
                order: order.unsigned_abs(),
            },
            sign,
        )
    }

    pub fn eval(self, x: f64) -> Result<f64> {
        eval(self, x)
    }

    pub fn derivative(self, x: f64) -> Result<f64> {
        eval_derivative(self, x)
    }
}

fn check_domain(f: CylinderFunction, x: f64) -> Result<()> {
    let bad = match f.kind {
        CylinderKind::BesselJ => !(x >= 0.0),
        CylinderKind::NeumannY => !(x > 0.0),
    };
    if bad || !x.is_finite() {
        let function = match f.kind {
            CylinderKind::BesselJ => "J_m",
            CylinderKind::NeumannY => "Y_m",
        };
        return Err(Error::Domain { function, x });
    }
    Ok(())
}

/// Values `f_0(x) ..= f_{n_max}(x)` of one kind.
pub fn eval_orders(kind: CylinderKind, n_max: u32, x: f64) -> Result<Vec<f64>> {
    check_domain(CylinderFunction { kind, order: n_max }, x)?;
    let n_max = n_max as usize;
    Ok(match kind {
        CylinderKind::BesselJ if x == 0.0 => (0..=n_max)
            .map(|n| if n == 0 { 1.0 } else { 0.0 })
            .collect(),
        CylinderKind::BesselJ => bessel::j_orders(n_max, x),
        CylinderKind::NeumannY => bessel::y_orders(n_max, x),
    })
}

/// `J_m(x)` or `Y_m(x)`.
///
/// `Y_m` is undefined at `x = 0` and yields [`Error::Domain`]; so does any
/// negative or non-finite argument.
pub fn eval(f: CylinderFunction, x: f64) -> Result<f64> {
    check_domain(f, x)?;
    match f.kind {
        CylinderKind::BesselJ if x == 0.0 => Ok(if f.order == 0 { 1.0 } else { 0.0 }),
        CylinderKind::BesselJ if x <= SERIES_CROSSOVER => Ok(bessel::j_series(f.order, x)),
        _ => Ok(eval_orders(f.kind, f.order, x)?[f.order as usize]),
    }
}

/// Order-reflected lookup `f_n` for possibly negative `n`.
fn reflected(values: &[f64], n: i64) -> f64 {
    let v = values[n.unsigned_abs() as usize];
    if n < 0 && n % 2 != 0 {
        -v
    } else {
        v
    }
}

/// `f_m'(x) = (f_{m-1}(x) - f_{m+1}(x)) / 2`.
pub fn eval_derivative(f: CylinderFunction, x: f64) -> Result<f64> {
    let values = eval_orders(f.kind, f.order + 1, x)?;
    let n = f.order as i64;
    Ok(0.5 * (reflected(&values, n - 1) - reflected(&values, n + 1)))
}

/// `f_m''(x) = (f_{m-2}(x) - 2 f_m(x) + f_{m+2}(x)) / 4`.
///
/// Obtained from the order recurrence rather than from Bessel's equation, so
/// it can be used to check that equation independently.
pub fn eval_second_derivative(f: CylinderFunction, x: f64) -> Result<f64> {
    let values = eval_orders(f.kind, f.order + 2, x)?;
    let n = f.order as i64;
    Ok(0.25
        * (reflected(&values, n - 2) - 2.0 * values[f.order as usize] + reflected(&values, n + 2)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::{ln, PI};

    #[test]
    fn j0_at_origin_is_one() {
        assert_eq!(eval(CylinderFunction::j(0), 0.0).unwrap(), 1.0);
        assert_eq!(eval(CylinderFunction::j(3), 0.0).unwrap(), 0.0);
    }

    #[test]
    fn y_is_singular_at_origin() {
        assert!(matches!(
            eval(CylinderFunction::y(0), 0.0),
            Err(Error::Domain { .. })
        ));
        assert!(matches!(
            eval_derivative(CylinderFunction::y(2), 0.0),
            Err(Error::Domain { .. })
        ));
        assert!(eval(CylinderFunction::j(0), -1.0).is_err());
    }

    #[test]
    fn y0_small_argument_form() {
        let x = 0.01;
        let approx = (2.0 / PI) * (EULER_GAMMA + ln(0.5 * x));
        let y0 = eval(CylinderFunction::y(0), x).unwrap();
        assert!((y0 - approx).abs() < 1e-4, "{y0} vs {approx}");
    }

    #[test]
    fn y0_derivative_small_argument() {
        let x = 0.01;
        let d = eval_derivative(CylinderFunction::y(0), x).unwrap();
        let expected = (2.0 / PI) / x;
        assert!(((d - expected) / expected).abs() < 0.01);
    }

    #[test]
    fn j_derivative_at_origin() {
        assert_eq!(eval_derivative(CylinderFunction::j(0), 0.0).unwrap(), 0.0);
        assert_eq!(eval_derivative(CylinderFunction::j(1), 0.0).unwrap(), 0.5);
    }

    #[test]
    fn reference_values() {
        // Reference values from scipy.special.jv / yv.
        let cases = [
            (CylinderFunction::j(0), 1.0, 0.765_197_686_557_966_6),
            (CylinderFunction::j(1), 1.0, 0.440_050_585_744_933_5),
            (CylinderFunction::y(0), 1.0, 0.088_256_964_215_677),
            (CylinderFunction::y(1), 1.0, -0.781_212_821_300_288_7),
            (CylinderFunction::j(0), 10.0, -0.245_935_764_451_348_3),
            (CylinderFunction::y(0), 10.0, 0.055_671_167_283_599_39),
            (CylinderFunction::j(2), 5.0, 0.046_565_116_277_752_22),
            (CylinderFunction::y(2), 5.0, 0.367_662_882_605_524_6),
            (CylinderFunction::j(0), 30.0, -0.086_367_983_581_040_23),
            (CylinderFunction::y(0), 30.0, -0.117_295_731_686_664_09),
        ];
        for (f, x, want) in cases {
            let got = eval(f, x).unwrap();
            assert!(
                (got - want).abs() < 1e-13 * want.abs().max(1.0),
                "{f:?}({x}) = {got}, want {want}"
            );
        }
    }

    #[test]
    fn negative_order_reflection() {
        let (f, sign) = CylinderFunction::signed(CylinderKind::BesselJ, -3);
        assert_eq!(f.order, 3);
        assert_eq!(sign, -1.0);
        let (_, sign) = CylinderFunction::signed(CylinderKind::NeumannY, -2);
        assert_eq!(sign, 1.0);
    }
}
