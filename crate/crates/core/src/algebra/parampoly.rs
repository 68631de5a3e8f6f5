//! Polynomials in one variable whose coefficients are polynomials in the
//! base parameter λ. These house the family p_{j,λ} of a skew Hénon factor.

use num::complex::Complex64;

use crate::algebra::unipoly::UniPoly;
use crate::error::{CoreError, Result};

/// `p_λ(y) = Σ_i c_i(λ) y^i` with each `c_i` a polynomial in λ.
///
/// The leading coefficient must be a nonzero constant (λ-independent): the
/// degree and leading coefficient of a Hénon factor may not vary with the
/// parameter.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamPolynomial {
    coeffs: Vec<UniPoly>,
}

impl ParamPolynomial {
    pub fn new(coeffs: Vec<UniPoly>) -> Result<Self> {
        let mut coeffs = coeffs;
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        let p = ParamPolynomial { coeffs };
        match p.coeffs.last() {
            None => Err(CoreError::InvalidMap("zero parameter polynomial".into())),
            Some(top) if top.degree() > 0 => Err(CoreError::InvalidMap(
                "leading coefficient must not depend on the parameter".into(),
            )),
            Some(_) => Ok(p),
        }
    }

    /// λ-independent polynomial.
    pub fn from_unipoly(p: &UniPoly) -> Result<Self> {
        ParamPolynomial::new(p.coeffs().iter().map(|&c| UniPoly::constant(c)).collect())
    }

    pub fn coeffs(&self) -> &[UniPoly] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// The λ-independent leading coefficient.
    pub fn leading(&self) -> Complex64 {
        self.coeffs
            .last()
            .map(|c| c.eval(Complex64::new(0.0, 0.0)))
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    /// Specialize the parameter.
    pub fn at_lambda(&self, lambda: Complex64) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|c| c.eval(lambda)).collect())
    }

    /// Substitute λ -> s·λ in every coefficient (used to turn the fiber of
    /// H over λ into the fiber of an iterate over c^j λ).
    pub fn scale_lambda(&self, s: Complex64) -> ParamPolynomial {
        ParamPolynomial {
            coeffs: self.coeffs.iter().map(|c| c.scale_argument(s)).collect(),
        }
    }

    /// Largest λ-degree among the coefficients.
    pub fn lambda_degree(&self) -> usize {
        self.coeffs.iter().map(|c| c.degree()).max().unwrap_or(0)
    }

    /// `max_i Σ_s |coeff_s(c_i)|`: gives |c_i(λ)| <= M·max(|λ|,1)^{deg_λ}
    /// for every i, the bound shape the growth lemmas run on.
    pub fn coeff_bound(&self) -> f64 {
        self.coeffs
            .iter()
            .map(|c| c.abs_sum())
            .fold(1.0_f64, f64::max)
    }

    /// Same bound restricted to the non-leading coefficients.
    pub fn lower_coeff_bound(&self) -> f64 {
        if self.coeffs.len() <= 1 {
            return 1.0;
        }
        self.coeffs[..self.coeffs.len() - 1]
            .iter()
            .map(|c| c.abs_sum())
            .fold(1.0_f64, f64::max)
    }
}
