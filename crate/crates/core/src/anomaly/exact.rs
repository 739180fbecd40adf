//! Exact rational and Gaussian-rational scalars.

use num_complex::Complex;
use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};

pub type Rational = Ratio<i128>;
/// `p + q i` with `p, q` rational.
pub type ExactComplex = Complex<Rational>;

pub fn rational(num: i128, den: i128) -> Rational {
    Ratio::new(num, den)
}

pub fn integer(n: i128) -> Rational {
    Ratio::from_integer(n)
}

pub fn exact(re: Rational, im: Rational) -> ExactComplex {
    Complex::new(re, im)
}

pub fn exact_real(re: Rational) -> ExactComplex {
    Complex::new(re, Rational::zero())
}

pub fn exact_i() -> ExactComplex {
    Complex::new(Rational::zero(), Rational::one())
}

pub fn to_f64(q: &Rational) -> f64 {
    // Numerator and denominator stay far below 2^53 in practice; dividing as
    // floats then loses at most one rounding.
    q.numer().to_f64().unwrap_or(f64::NAN) / q.denom().to_f64().unwrap_or(f64::NAN)
}

pub fn to_complex64(z: &ExactComplex) -> num_complex::Complex64 {
    num_complex::Complex64::new(to_f64(&z.re), to_f64(&z.im))
}

pub fn is_zero(z: &ExactComplex) -> bool {
    z.re.is_zero() && z.im.is_zero()
}

pub fn conj(z: &ExactComplex) -> ExactComplex {
    Complex::new(z.re, -z.im)
}

pub(crate) fn factorial(n: u32) -> i128 {
    (1..=n as i128).product()
}

pub(crate) fn binomial(n: u32, k: u32) -> i128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: i128 = 1;
    for i in 0..k as i128 {
        acc = acc * (n as i128 - i) / (i + 1);
    }
    acc
}

pub(crate) fn sign(n: u32) -> i128 {
    if n.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// `(±i)^k`.
pub(crate) fn i_power(k: u32, negative: bool) -> ExactComplex {
    let base = if negative { -exact_i() } else { exact_i() };
    (0..k).fold(ExactComplex::one(), |acc, _| acc * base)
}
