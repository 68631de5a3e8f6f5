//! Log-space complex arithmetic.
//!
//! Orbits of the maps implemented here grow like |y|^(d^n); any fixed-width
//! floating representation of the value itself dies after a handful of
//! iterates. A [`LogComplex`] stores a complex number as (log-modulus,
//! argument), which keeps iteration linear in the quantity that actually
//! matters (the log). [`Cx`] is the hybrid used by orbit evaluators: exact
//! `Complex64` while the value is comfortably representable, log form past
//! the overflow threshold.

use num::complex::Complex64;

use crate::error::{CoreError, Result};

/// Modulus above which orbit coordinates switch to log representation.
pub const PROMOTE_MODULUS: f64 = 1e100;

/// Log-modulus below which a log value can be demoted to an exact
/// `Complex64` without overflow (e^690 ≈ 5.3e299).
pub const DEMOTE_LOGMOD: f64 = 690.0;

/// Wrap an angle into (-pi, pi].
pub fn wrap_arg(a: f64) -> f64 {
    if a.is_nan() || a.is_infinite() {
        return 0.0;
    }
    let two_pi = std::f64::consts::TAU;
    let mut r = a.rem_euclid(two_pi); // [0, 2pi)
    if r > std::f64::consts::PI {
        r -= two_pi;
    }
    r
}

/// A complex number represented as `exp(logmod) * e^(i*arg)`.
///
/// `logmod` is the natural log of the modulus (`-inf` encodes zero) and
/// `arg` lies in (-pi, pi]. Multiplication adds fields; the argument is
/// renormalized after every operation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogComplex {
    pub logmod: f64,
    pub arg: f64,
}

impl LogComplex {
    pub const ZERO: LogComplex = LogComplex {
        logmod: f64::NEG_INFINITY,
        arg: 0.0,
    };

    pub const ONE: LogComplex = LogComplex {
        logmod: 0.0,
        arg: 0.0,
    };

    pub fn new(logmod: f64, arg: f64) -> Self {
        LogComplex {
            logmod,
            arg: wrap_arg(arg),
        }
    }

    pub fn from_complex(z: Complex64) -> Self {
        if z.re == 0.0 && z.im == 0.0 {
            return LogComplex::ZERO;
        }
        LogComplex {
            logmod: z.norm().ln(),
            arg: z.arg(),
        }
    }

    /// Exact value when representable; `None` if the modulus overflows f64.
    pub fn to_complex(self) -> Option<Complex64> {
        if self.logmod > DEMOTE_LOGMOD {
            return None;
        }
        if self.logmod == f64::NEG_INFINITY {
            return Some(Complex64::new(0.0, 0.0));
        }
        let m = self.logmod.exp();
        Some(Complex64::from_polar(m, self.arg))
    }

    pub fn is_zero(self) -> bool {
        self.logmod == f64::NEG_INFINITY
    }

    pub fn mul(self, other: LogComplex) -> LogComplex {
        if self.is_zero() || other.is_zero() {
            return LogComplex::ZERO;
        }
        LogComplex::new(self.logmod + other.logmod, self.arg + other.arg)
    }

    pub fn div(self, other: LogComplex) -> LogComplex {
        LogComplex::new(self.logmod - other.logmod, self.arg - other.arg)
    }

    pub fn powi(self, n: i32) -> LogComplex {
        if self.is_zero() {
            return if n == 0 { LogComplex::ONE } else { LogComplex::ZERO };
        }
        LogComplex::new(self.logmod * n as f64, self.arg * n as f64)
    }

    /// Principal fractional power: divides log-modulus and the *principal*
    /// argument by `n`.
    pub fn principal_root(self, n: f64) -> LogComplex {
        LogComplex::new(self.logmod / n, self.arg / n)
    }

    /// Sum computed by factoring out the dominant term: a+b = a(1 + b/a).
    ///
    /// Exact in the dominant log-modulus; the relative correction is carried
    /// at double precision. Safe for any magnitude gap (the ratio underflows
    /// to zero once the gap exceeds ~745 in log).
    pub fn add(self, other: LogComplex) -> LogComplex {
        let (big, small) = if self.logmod >= other.logmod {
            (self, other)
        } else {
            (other, self)
        };
        if small.is_zero() {
            return big;
        }
        let ratio_log = small.logmod - big.logmod;
        let r = Complex64::from_polar(ratio_log.exp(), small.arg - big.arg); // |r| <= 1
        // ln|1+r| via ln_1p on |1+r|^2 - 1 = 2 Re r + |r|^2 for accuracy at small |r|
        let t = 2.0 * r.re + r.norm_sqr();
        if t <= -1.0 {
            // exact cancellation to double precision
            return LogComplex::ZERO;
        }
        let logmod = big.logmod + 0.5 * t.ln_1p();
        let arg = big.arg + (r.im).atan2(1.0 + r.re);
        LogComplex::new(logmod, arg)
    }

    pub fn neg(self) -> LogComplex {
        LogComplex::new(self.logmod, self.arg + std::f64::consts::PI)
    }

    pub fn scale(self, c: Complex64) -> LogComplex {
        self.mul(LogComplex::from_complex(c))
    }
}

/// Hybrid orbit coordinate: exact while representable, log-space past the
/// overflow policy threshold (`PROMOTE_MODULUS`).
#[derive(Debug, Clone, Copy)]
pub enum Cx {
    Exact(Complex64),
    Log(LogComplex),
}

impl Cx {
    pub fn from_complex(z: Complex64) -> Self {
        Cx::Exact(z)
    }

    pub fn zero() -> Self {
        Cx::Exact(Complex64::new(0.0, 0.0))
    }

    /// Natural log of the modulus (`-inf` for zero).
    pub fn abs_log(self) -> f64 {
        match self {
            Cx::Exact(z) => {
                let n = z.norm();
                if n == 0.0 {
                    f64::NEG_INFINITY
                } else {
                    n.ln()
                }
            }
            Cx::Log(l) => l.logmod,
        }
    }

    pub fn to_log(self) -> LogComplex {
        match self {
            Cx::Exact(z) => LogComplex::from_complex(z),
            Cx::Log(l) => l,
        }
    }

    /// Exact value when representable.
    pub fn to_complex(self) -> Option<Complex64> {
        match self {
            Cx::Exact(z) => Some(z),
            Cx::Log(l) => l.to_complex(),
        }
    }

    /// Re-tag per the overflow policy: promote once the modulus passes
    /// `PROMOTE_MODULUS`.
    pub fn normalize(self) -> Cx {
        match self {
            Cx::Exact(z) => {
                if z.norm() > PROMOTE_MODULUS || !z.re.is_finite() || !z.im.is_finite() {
                    Cx::Log(LogComplex::from_complex(z))
                } else {
                    Cx::Exact(z)
                }
            }
            Cx::Log(l) => Cx::Log(l),
        }
    }

    pub fn scale(self, c: Complex64) -> Cx {
        match self {
            Cx::Exact(z) => Cx::Exact(z * c).normalize(),
            Cx::Log(l) => Cx::Log(l.scale(c)),
        }
    }

    pub fn neg(self) -> Cx {
        match self {
            Cx::Exact(z) => Cx::Exact(-z),
            Cx::Log(l) => Cx::Log(l.neg()),
        }
    }

    pub fn add(self, other: Cx) -> Cx {
        match (self, other) {
            (Cx::Exact(a), Cx::Exact(b)) => Cx::Exact(a + b).normalize(),
            (a, b) => Cx::Log(a.to_log().add(b.to_log())),
        }
    }
}

/// Relative agreement check usable across representations.
pub fn cx_rel_err(a: Cx, b: Cx) -> f64 {
    let la = a.to_log();
    let lb = b.to_log();
    if la.is_zero() && lb.is_zero() {
        return 0.0;
    }
    let diff = la.add(lb.neg());
    (diff.logmod - la.logmod.max(lb.logmod)).exp()
}

/// Verify a value is finite unless explicitly tagged as overflowed to log
/// representation.
pub fn complex_is_finite(z: Complex64) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

impl Default for Cx {
    fn default() -> Self {
        Cx::zero()
    }
}

/// Convert log-space `z` back to a complex number or report the overflow.
pub fn demote(l: LogComplex) -> Result<Complex64> {
    l.to_complex().ok_or(CoreError::DominanceNotReached {
        needed: DEMOTE_LOGMOD,
        have: l.logmod,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wrap_keeps_pi() {
        assert_eq!(wrap_arg(std::f64::consts::PI), std::f64::consts::PI);
        assert!(wrap_arg(3.0 * std::f64::consts::PI) - std::f64::consts::PI < 1e-12);
    }

    #[test]
    fn mul_adds_fields() {
        let a = LogComplex::new(1.0, 0.5);
        let b = LogComplex::new(2.0, 0.7);
        let c = a.mul(b);
        assert_eq!(c.logmod, 3.0);
        assert!((c.arg - 1.2).abs() < 1e-15);
    }

    #[test]
    fn add_factored_matches_exact() {
        let a = Complex64::new(3.0, -1.0);
        let b = Complex64::new(-0.5, 2.0);
        let la = LogComplex::from_complex(a);
        let lb = LogComplex::from_complex(b);
        let sum = la.add(lb);
        let want = LogComplex::from_complex(a + b);
        assert!((sum.logmod - want.logmod).abs() < 1e-14);
        assert!((sum.arg - want.arg).abs() < 1e-14);
    }

    #[test]
    fn huge_gap_keeps_dominant() {
        let big = LogComplex::new(5000.0, 0.3);
        let small = LogComplex::new(-5000.0, 1.0);
        let s = big.add(small);
        assert_eq!(s.logmod, 5000.0);
        assert_eq!(s.arg, 0.3);
    }

    #[test]
    fn hybrid_promotes_on_overflow() {
        let z = Cx::Exact(Complex64::new(1e99, 0.0));
        let big = z.scale(Complex64::new(100.0, 0.0));
        assert!(matches!(big, Cx::Log(_)));
        assert!((big.abs_log() - (101.0 * std::f64::consts::LN_10)).abs() < 1e-9);
    }
}
