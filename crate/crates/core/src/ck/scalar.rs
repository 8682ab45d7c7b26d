//! Exact Gaussian rationals `p/q + (r/s) i`.

use num_complex::Complex;
use num_rational::Rational64;
use num_traits::{One, Signed, Zero};

pub type Scalar = Complex<Rational64>;

pub fn rational(num: i64, den: i64) -> Scalar {
    Complex::new(Rational64::new(num, den), Rational64::zero())
}

pub fn integer(n: i64) -> Scalar {
    rational(n, 1)
}

pub fn imaginary_unit() -> Scalar {
    Complex::new(Rational64::zero(), Rational64::one())
}

pub fn from_ratio(r: Rational64) -> Scalar {
    Complex::new(r, Rational64::zero())
}

/// The scalar as a real rational, if its imaginary part vanishes.
pub fn as_real(s: &Scalar) -> Option<Rational64> {
    s.im.is_zero().then_some(s.re)
}

pub fn to_f64(r: &Rational64) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

pub fn to_c64(s: &Scalar) -> num_complex::Complex64 {
    num_complex::Complex64::new(to_f64(&s.re), to_f64(&s.im))
}

fn fmt_ratio(r: &Rational64) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Formats a coefficient as it will precede a monomial, returning the sign
/// to print in front and the magnitude text (empty for a unit magnitude).
pub(crate) fn coefficient_parts(s: &Scalar) -> (bool, String) {
    if s.im.is_zero() {
        let neg = s.re.is_negative();
        let mag = s.re.abs();
        let text = if mag.is_one() { String::new() } else { fmt_ratio(&mag) };
        return (neg, text);
    }
    if s.re.is_zero() {
        let neg = s.im.is_negative();
        let mag = s.im.abs();
        let text = if mag.is_one() { "i".to_string() } else { format!("{} i", fmt_ratio(&mag)) };
        return (neg, text);
    }
    let sign = if s.im.is_negative() { '-' } else { '+' };
    (false, format!("({} {} {} i)", fmt_ratio(&s.re), sign, fmt_ratio(&s.im.abs())))
}

pub fn format_scalar(s: &Scalar) -> String {
    let (neg, text) = coefficient_parts(s);
    let text = if text.is_empty() { "1".to_string() } else { text };
    if neg {
        format!("-{text}")
    } else {
        text
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formatting() {
        assert_eq!(format_scalar(&rational(3, 4)), "3/4");
        assert_eq!(format_scalar(&rational(-2, 1)), "-2");
        assert_eq!(format_scalar(&imaginary_unit()), "i");
        assert_eq!(format_scalar(&Complex::new(Rational64::new(1, 2), Rational64::new(-3, 4))), "(1/2 - 3/4 i)");
        assert_eq!(format_scalar(&integer(1)), "1");
    }

    #[test]
    fn arithmetic_is_exact() {
        let x = rational(1, 3) + imaginary_unit() * rational(2, 5);
        let y = x * x.conj();
        assert_eq!(as_real(&y), Some(Rational64::new(1, 9) + Rational64::new(4, 25)));
    }
}
