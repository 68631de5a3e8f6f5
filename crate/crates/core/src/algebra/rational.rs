//! Exact Gaussian-rational scalars: complex numbers with `BigRational`
//! real and imaginary parts. These are the coefficient field of the
//! symbolic oracle; equality there is exact, never tolerance-based.

use num::complex::Complex64;
use num::{BigInt, BigRational, Complex, One, Signed, Zero};

pub type Rat = BigRational;
pub type CRat = Complex<BigRational>;

pub fn crat_zero() -> CRat {
    Complex::new(Rat::zero(), Rat::zero())
}

pub fn crat_one() -> CRat {
    Complex::new(Rat::one(), Rat::zero())
}

pub fn crat_i() -> CRat {
    Complex::new(Rat::zero(), Rat::one())
}

pub fn crat_from_i64(re: i64, im: i64) -> CRat {
    Complex::new(
        Rat::from_integer(BigInt::from(re)),
        Rat::from_integer(BigInt::from(im)),
    )
}

/// Exact promotion of a double to a rational (every finite f64 is a dyadic
/// rational, so this conversion is lossless).
pub fn rat_from_f64(x: f64) -> Option<Rat> {
    BigRational::from_float(x)
}

pub fn crat_from_c64(z: Complex64) -> Option<CRat> {
    Some(Complex::new(rat_from_f64(z.re)?, rat_from_f64(z.im)?))
}

pub fn crat_to_c64(z: &CRat) -> Complex64 {
    Complex64::new(rat_to_f64(&z.re), rat_to_f64(&z.im))
}

pub fn rat_to_f64(r: &Rat) -> f64 {
    let num = r.numer();
    let den = r.denom();
    // Split big integers through string parsing only when they exceed the
    // f64-safe integer range.
    let nf = bigint_to_f64(num);
    let df = bigint_to_f64(den);
    nf / df
}

fn bigint_to_f64(x: &BigInt) -> f64 {
    use num::ToPrimitive;
    x.to_f64().unwrap_or(if x.is_negative() {
        f64::NEG_INFINITY
    } else {
        f64::INFINITY
    })
}

pub fn crat_is_zero(z: &CRat) -> bool {
    z.re.is_zero() && z.im.is_zero()
}

/// |z| = 1 exactly: re^2 + im^2 == 1.
pub fn crat_is_unimodular(z: &CRat) -> bool {
    (&z.re * &z.re) + (&z.im * &z.im) == Rat::one()
}

pub fn crat_inv(z: &CRat) -> Option<CRat> {
    if crat_is_zero(z) {
        return None;
    }
    let n = (&z.re * &z.re) + (&z.im * &z.im);
    Some(Complex::new(&z.re / &n, -(&z.im) / &n))
}
