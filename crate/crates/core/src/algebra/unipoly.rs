//! Dense univariate polynomials over `Complex64`.

use num::complex::Complex64;

use crate::algebra::logcomplex::{Cx, LogComplex, DEMOTE_LOGMOD};
use crate::error::{CoreError, Result};

/// A univariate polynomial with coefficients in ascending degree order.
/// Canonical form: empty vector is the zero polynomial, otherwise the last
/// coefficient is nonzero.
#[derive(Debug, Clone, PartialEq)]
pub struct UniPoly {
    coeffs: Vec<Complex64>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs
            .last()
            .map_or(false, |c| c.re == 0.0 && c.im == 0.0)
        {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Complex64) -> Self {
        UniPoly::new(vec![c])
    }

    /// `w^d` with unit leading coefficient.
    pub fn power(d: usize) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); d + 1];
        coeffs[d] = Complex64::new(1.0, 0.0);
        UniPoly { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        UniPoly::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> Complex64 {
        *self.coeffs.last().unwrap_or(&Complex64::new(0.0, 0.0))
    }

    /// Horner evaluation.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    /// Sum of the moduli of the non-leading coefficients.
    pub fn lower_abs_sum(&self) -> f64 {
        if self.coeffs.len() <= 1 {
            return 0.0;
        }
        self.coeffs[..self.coeffs.len() - 1]
            .iter()
            .map(|c| c.norm())
            .sum()
    }

    pub fn abs_sum(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).sum()
    }

    /// Radius past which the leading term dominates twice the remaining
    /// terms: for |z| >= radius, |c_d z^d| > 2 |p(z) - c_d z^d|.
    /// Returns 0 for pure powers (always dominant).
    pub fn dominance_radius(&self) -> f64 {
        let d = self.degree();
        if d == 0 {
            return 0.0;
        }
        let lower = self.lower_abs_sum();
        if lower == 0.0 {
            return 0.0;
        }
        (2.0 * lower / self.leading().norm()).max(1.0) * (1.0 + 1e-12)
    }

    /// Evaluate at a log-space argument as `c_d z^d (1 + rho)` with the
    /// correction `rho` computed from the ratio series in 1/z.
    ///
    /// Requires the argument to sit past [`Self::dominance_radius`]; callers
    /// below that radius should demote to exact evaluation instead.
    pub fn log_eval(&self, z: LogComplex) -> Result<LogComplex> {
        let d = self.degree();
        if self.is_zero() {
            return Ok(LogComplex::ZERO);
        }
        if d == 0 {
            return Ok(LogComplex::from_complex(self.coeffs[0]));
        }
        let lead = LogComplex::from_complex(self.leading()).mul(z.powi(d as i32));
        let lower = self.lower_abs_sum();
        if lower == 0.0 {
            return Ok(lead);
        }
        let needed = self.dominance_radius().ln();
        if !(z.logmod > needed) {
            return Err(CoreError::DominanceNotReached {
                needed,
                have: z.logmod,
            });
        }
        // rho = sum_{i<d} (c_i/c_d) t^{d-i} with t = 1/z; |t| < 1 here, and it
        // underflows to zero exactly when the gap exceeds the f64 exponent
        // range, which is the regime where rho is far below machine epsilon.
        let t = if -z.logmod < -745.0 {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::from_polar((-z.logmod).exp(), -z.arg)
        };
        // ascending order: rho = (((c_0/c_d)·t + c_1/c_d)·t + …)·t = Σ (c_i/c_d) t^{d-i}
        let inv_lead = 1.0 / self.leading();
        let mut rho = Complex64::new(0.0, 0.0);
        for c in self.coeffs[..d].iter() {
            rho = (rho + c * inv_lead) * t;
        }
        Ok(lead.mul(LogComplex::from_complex(Complex64::new(1.0, 0.0) + rho)))
    }

    /// Evaluate on a hybrid coordinate, choosing the representation that
    /// keeps the computation exact or provably dominant.
    pub fn eval_cx(&self, z: Cx) -> Result<Cx> {
        match z {
            Cx::Exact(v) => {
                // Guard intermediate overflow in Horner: |p(z)| <= sum|c| * |z|^d.
                let d = self.degree() as f64;
                let bound = self.abs_sum().ln().max(0.0) + d * v.norm().max(1.0).ln();
                if bound < 690.0 {
                    Ok(Cx::Exact(self.eval(v)).normalize())
                } else {
                    Ok(Cx::Log(self.log_eval(LogComplex::from_complex(v))?))
                }
            }
            Cx::Log(l) => {
                if l.logmod <= DEMOTE_LOGMOD && l.logmod.is_finite() {
                    let d = self.degree() as f64;
                    let bound = self.abs_sum().ln().max(0.0) + d * l.logmod.max(0.0);
                    if bound < 690.0 {
                        let v = l.to_complex().expect("logmod checked demotable");
                        return Ok(Cx::Exact(self.eval(v)).normalize());
                    }
                }
                Ok(Cx::Log(self.log_eval(l)?))
            }
        }
    }

    /// Composition p(q(w)); used by the oracle tests.
    pub fn compose(&self, q: &UniPoly) -> UniPoly {
        let mut acc = UniPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(q).add(&UniPoly::constant(*c));
        }
        acc
    }

    pub fn add(&self, other: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i] += c;
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            coeffs[i] += c;
        }
        UniPoly::new(coeffs)
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero();
        }
        let mut coeffs =
            vec![Complex64::new(0.0, 0.0); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        UniPoly::new(coeffs)
    }

    pub fn scale(&self, c: Complex64) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|k| k * c).collect())
    }

    /// Substitute `w -> c*w`.
    pub fn scale_argument(&self, c: Complex64) -> UniPoly {
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        let mut pow = Complex64::new(1.0, 0.0);
        for k in &self.coeffs {
            coeffs.push(k * pow);
            pow *= c;
        }
        UniPoly::new(coeffs)
    }
}
