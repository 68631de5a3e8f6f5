//! Skew products of Hénon maps over the affine base: H(λ,x,y) = (cλ, H_λ(x,y))
//! with H_λ an ordered composition of generalized Hénon factors whose
//! coefficients are polynomials in λ.

use num::complex::Complex64;

use crate::algebra::logcomplex::Cx;
use crate::algebra::multipoly::{compose_maps, identity_map, MultiPoly};
use crate::algebra::parampoly::ParamPolynomial;
use crate::algebra::rational::{crat_from_c64, crat_inv};
use crate::error::{CoreError, Result};
use crate::maps::Direction;

/// One generalized Hénon factor `H_j(x,y) = (y, p_{j,λ}(y) - δ_j x)`.
///
/// Degree, leading coefficient and δ are λ-independent by construction of
/// [`ParamPolynomial`] plus the checks here.
#[derive(Debug, Clone)]
pub struct HenonFactor {
    p: ParamPolynomial,
    delta: Complex64,
}

impl HenonFactor {
    pub fn new(p: ParamPolynomial, delta: Complex64) -> Result<Self> {
        if delta.norm() == 0.0 {
            return Err(CoreError::InvalidMap("factor delta must be nonzero".into()));
        }
        if p.degree() < 2 {
            return Err(CoreError::InvalidMap(
                "Hénon factor polynomial must have degree >= 2".into(),
            ));
        }
        if p.leading().norm() == 0.0 {
            return Err(CoreError::InvalidMap(
                "Hénon factor leading coefficient must be nonzero".into(),
            ));
        }
        Ok(HenonFactor { p, delta })
    }

    pub fn p(&self) -> &ParamPolynomial {
        &self.p
    }

    pub fn delta(&self) -> Complex64 {
        self.delta
    }

    pub fn degree(&self) -> usize {
        self.p.degree()
    }

    pub fn leading(&self) -> Complex64 {
        self.p.leading()
    }

    fn forward_cx(&self, lambda: Complex64, x: Cx, y: Cx) -> Result<(Cx, Cx)> {
        let p = self.p.at_lambda(lambda);
        let py = p.eval_cx(y)?;
        Ok((y, py.add(x.scale(-self.delta))))
    }

    fn inverse_cx(&self, lambda: Complex64, x: Cx, y: Cx) -> Result<(Cx, Cx)> {
        let p = self.p.at_lambda(lambda);
        let px = p.eval_cx(x)?;
        Ok((px.add(y.neg()).scale(1.0 / self.delta), x))
    }
}

/// Orbit state of a skew product: the base coordinate stays a plain complex
/// number (it only ever grows geometrically), the fiber pair is hybrid.
#[derive(Debug, Clone, Copy)]
pub struct SkewState {
    pub lambda: Complex64,
    pub x: Cx,
    pub y: Cx,
}

impl SkewState {
    pub fn from_point(p: [Complex64; 3]) -> Self {
        SkewState {
            lambda: p[0],
            x: Cx::from_complex(p[1]),
            y: Cx::from_complex(p[2]),
        }
    }

    pub fn to_point(&self) -> Option<[Complex64; 3]> {
        Some([self.lambda, self.x.to_complex()?, self.y.to_complex()?])
    }

    /// Sup of the logs of the three coordinate moduli.
    pub fn sup_log_norm(&self) -> f64 {
        let ll = if self.lambda.norm() == 0.0 {
            f64::NEG_INFINITY
        } else {
            self.lambda.norm().ln()
        };
        ll.max(self.x.abs_log()).max(self.y.abs_log())
    }
}

#[derive(Debug, Clone)]
pub struct SkewHenonMap {
    c: Complex64,
    factors: Vec<HenonFactor>,
    d: u32,
    c_h: Complex64,
    c_h_prime: Complex64,
    d_tilde: u32,
    fiber_fwd: Vec<MultiPoly>,
    fiber_inv: Vec<MultiPoly>,
}

/// Variables of all skew-product symbolic maps, in order.
pub const SKEW_VARS: [&str; 3] = ["λ", "x", "y"];

impl SkewHenonMap {
    pub fn new(c: Complex64, factors: Vec<HenonFactor>) -> Result<Self> {
        if c.norm() == 0.0 {
            return Err(CoreError::InvalidMap("base multiplier c must be nonzero".into()));
        }
        if factors.is_empty() {
            return Err(CoreError::InvalidMap("at least one Hénon factor required".into()));
        }
        let mut d: u32 = 1;
        for f in &factors {
            d = d
                .checked_mul(f.degree() as u32)
                .ok_or(CoreError::DegreeBudgetExceeded {
                    degree: u64::MAX,
                    budget: u32::MAX as u64,
                })?;
        }
        let m = factors.len();
        // c_H = prod c_j^{d_{j+1}···d_m}, c_H' = prod (c_j δ_j^{-1})^{d_{j-1}···d_1}
        let mut c_h = Complex64::new(1.0, 0.0);
        let mut c_h_prime = Complex64::new(1.0, 0.0);
        for j in 0..m {
            let later: u32 = factors[j + 1..].iter().map(|f| f.degree() as u32).product();
            let earlier: u32 = factors[..j].iter().map(|f| f.degree() as u32).product();
            c_h *= factors[j].leading().powu(later);
            c_h_prime *= (factors[j].leading() / factors[j].delta).powu(earlier);
        }
        let fiber_fwd = fiber_polys(&factors, Direction::Forward)?;
        let fiber_inv = fiber_polys(&factors, Direction::Inverse)?;
        let d_tilde = fiber_fwd[2]
            .total_degree()
            .ok_or_else(|| CoreError::InvalidMap("degenerate fiber".into()))?;
        debug_assert!(d_tilde >= d);
        Ok(SkewHenonMap {
            c,
            factors,
            d,
            c_h,
            c_h_prime,
            d_tilde,
            fiber_fwd,
            fiber_inv,
        })
    }

    pub fn c(&self) -> Complex64 {
        self.c
    }

    pub fn factors(&self) -> &[HenonFactor] {
        &self.factors
    }

    /// (d, d̃, c_H, c_H').
    pub fn structure_constants(&self) -> (u32, u32, Complex64, Complex64) {
        (self.d, self.d_tilde, self.c_h, self.c_h_prime)
    }

    pub fn degree(&self) -> u32 {
        self.d
    }

    pub fn degree_tilde(&self) -> u32 {
        self.d_tilde
    }

    pub fn c_h(&self) -> Complex64 {
        self.c_h
    }

    pub fn c_h_prime(&self) -> Complex64 {
        self.c_h_prime
    }

    /// Symbolic fiber map (λ, x, y) ↦ (λ, H_λ(x,y)).
    pub fn fiber_symbolic(&self, dir: Direction) -> &[MultiPoly] {
        match dir {
            Direction::Forward => &self.fiber_fwd,
            Direction::Inverse => &self.fiber_inv,
        }
    }

    /// One application of H or H^{-1}.
    pub fn apply(&self, s: SkewState, dir: Direction) -> Result<SkewState> {
        match dir {
            Direction::Forward => {
                let (mut x, mut y) = (s.x, s.y);
                for f in &self.factors {
                    let (nx, ny) = f.forward_cx(s.lambda, x, y)?;
                    x = nx;
                    y = ny;
                }
                Ok(SkewState {
                    lambda: self.c * s.lambda,
                    x,
                    y,
                })
            }
            Direction::Inverse => {
                let lam = s.lambda / self.c;
                let (mut x, mut y) = (s.x, s.y);
                for f in self.factors.iter().rev() {
                    let (nx, ny) = f.inverse_cx(lam, x, y)?;
                    x = nx;
                    y = ny;
                }
                Ok(SkewState { lambda: lam, x, y })
            }
        }
    }

    pub fn apply_point(&self, p: [Complex64; 3], dir: Direction) -> Result<[Complex64; 3]> {
        let s = self.apply(SkewState::from_point(p), dir)?;
        s.to_point().ok_or(CoreError::Precondition(
            "image left the exactly representable range".into(),
        ))
    }

    /// The j-th iterate exposed as a skew Hénon map in its own right: the
    /// fiber list is the concatenation of the factor lists with λ rescaled
    /// block by block (block i sees c^i λ).
    pub fn iterate_map(&self, j: u32) -> Result<SkewHenonMap> {
        if j == 0 {
            return Err(CoreError::InvalidMap("iterate exponent must be >= 1".into()));
        }
        let mut factors = Vec::with_capacity(self.factors.len() * j as usize);
        let mut scale = Complex64::new(1.0, 0.0);
        for _ in 0..j {
            for f in &self.factors {
                factors.push(HenonFactor::new(f.p.scale_lambda(scale), f.delta)?);
            }
            scale *= self.c;
        }
        SkewHenonMap::new(self.c.powu(j), factors)
    }

    /// Exact symbolic coordinates of the n-th iterate in the variables
    /// (λ, x, y); λ is an honest variable of the composition.
    pub fn iterate_polys(&self, n: i64, budget: u64) -> Result<Vec<MultiPoly>> {
        let steps = n.unsigned_abs() as u32;
        if steps > 0 {
            let predicted =
                (self.d_tilde as u64).saturating_mul((self.d as u64).saturating_pow(steps - 1));
            if predicted > budget {
                return Err(CoreError::DegreeBudgetExceeded {
                    degree: predicted,
                    budget,
                });
            }
        }
        let one = self.map_polys(if n >= 0 {
            Direction::Forward
        } else {
            Direction::Inverse
        })?;
        let mut acc = identity_map(3);
        for _ in 0..steps {
            acc = compose_maps(&one, &acc)?;
        }
        Ok(acc)
    }

    /// Symbolic coordinates of one application of H or H^{-1}.
    pub fn map_polys(&self, dir: Direction) -> Result<Vec<MultiPoly>> {
        let c = crat_from_c64(self.c)
            .ok_or_else(|| CoreError::InvalidMap("non-finite base multiplier".into()))?;
        match dir {
            Direction::Forward => {
                let lam = MultiPoly::var(3, 0).scale(&c);
                Ok(vec![lam, self.fiber_fwd[1].clone(), self.fiber_fwd[2].clone()])
            }
            Direction::Inverse => {
                let c_inv =
                    crat_inv(&c).ok_or_else(|| CoreError::InvalidMap("c must be nonzero".into()))?;
                // H^{-1}(λ,x,y) = (c^{-1}λ, H^{-1}_{c^{-1}λ}(x,y))
                let subst = vec![
                    MultiPoly::var(3, 0).scale(&c_inv),
                    MultiPoly::var(3, 1),
                    MultiPoly::var(3, 2),
                ];
                Ok(vec![
                    subst[0].clone(),
                    self.fiber_inv[1].compose(&subst)?,
                    self.fiber_inv[2].compose(&subst)?,
                ])
            }
        }
    }

    /// Coefficient-magnitude bounds for the growth lemmas, computed from the
    /// symbolic fiber: returns (M, T) with |coeff_{jk}(λ)| <= M·max(|λ|,1)^d̃
    /// for the non-dominant part and T the number of contributing monomials.
    pub fn fiber_coeff_bounds(&self, dir: Direction) -> CoeffBounds {
        let (dominant_idx, polys) = match dir {
            Direction::Forward => (2usize, &self.fiber_fwd),
            Direction::Inverse => (1usize, &self.fiber_inv),
        };
        let dominant_var = dominant_idx; // x dominates backward, y forward
        let mut groups: std::collections::BTreeMap<(u32, u32), f64> = Default::default();
        let mut lambda_deg = 0u32;
        for (m, c) in polys[dominant_idx].terms() {
            let (l, j, k) = (m[0], m[1], m[2]);
            // skip the leading c_H y^d (resp. c_H' x^d) monomial
            if l == 0 && m[dominant_var] == self.d && j + k == self.d {
                continue;
            }
            lambda_deg = lambda_deg.max(l);
            let entry = groups.entry((j, k)).or_insert(0.0);
            *entry += crate::algebra::rational::crat_to_c64(c).norm();
        }
        let m_bound = groups.values().cloned().fold(1.0_f64, f64::max);
        CoeffBounds {
            m: m_bound,
            terms: groups.len().max(1),
            lambda_degree: lambda_deg,
        }
    }

    /// Same bounds for the co-dominant coordinate (x forward, y backward).
    pub fn fiber_codominant_bounds(&self, dir: Direction) -> CoeffBounds {
        let (idx, polys) = match dir {
            Direction::Forward => (1usize, &self.fiber_fwd),
            Direction::Inverse => (2usize, &self.fiber_inv),
        };
        let mut groups: std::collections::BTreeMap<(u32, u32), f64> = Default::default();
        let mut lambda_deg = 0u32;
        for (m, c) in polys[idx].terms() {
            let (l, j, k) = (m[0], m[1], m[2]);
            lambda_deg = lambda_deg.max(l);
            let entry = groups.entry((j, k)).or_insert(0.0);
            *entry += crate::algebra::rational::crat_to_c64(c).norm();
        }
        CoeffBounds {
            m: groups.values().cloned().fold(1.0_f64, f64::max),
            terms: groups.len().max(1),
            lambda_degree: lambda_deg,
        }
    }

    /// λ-degrees of the inverse fiber coefficients (the paper leaves the
    /// inverse bound unstated; we compute instead of assuming).
    pub fn inverse_lambda_degree(&self) -> u32 {
        self.fiber_inv[1]
            .terms()
            .map(|(m, _)| m[0])
            .max()
            .unwrap_or(0)
            .max(self.fiber_inv[2].terms().map(|(m, _)| m[0]).max().unwrap_or(0))
    }
}

/// Coefficient-magnitude bound data extracted from a symbolic fiber.
#[derive(Debug, Clone, Copy)]
pub struct CoeffBounds {
    /// `M`: per-monomial bound |c_{jk}(λ)| <= M·max(|λ|,1)^{deg_λ}.
    pub m: f64,
    /// Number of (j,k) groups contributing.
    pub terms: usize,
    /// Largest λ-degree among the grouped coefficients.
    pub lambda_degree: u32,
}

/// Symbolic (λ,x,y) ↦ (λ, H_λ^{±1}(x,y)) from the ordered factor list.
fn fiber_polys(factors: &[HenonFactor], dir: Direction) -> Result<Vec<MultiPoly>> {
    let lam = MultiPoly::var(3, 0);
    let x = MultiPoly::var(3, 1);
    let y = MultiPoly::var(3, 2);

    let param_poly_sym = |p: &ParamPolynomial, arg: &MultiPoly| -> Result<MultiPoly> {
        let mut acc = MultiPoly::zero(3);
        for coeff in p.coeffs().iter().rev() {
            // coeff is a polynomial in λ
            let mut csym = MultiPoly::zero(3);
            for (l, cl) in coeff.coeffs().iter().enumerate() {
                let cr = crat_from_c64(*cl)
                    .ok_or_else(|| CoreError::InvalidMap("non-finite coefficient".into()))?;
                csym = csym.add(&lam.pow(l as u32).scale(&cr));
            }
            acc = acc.mul(arg).add(&csym);
        }
        Ok(acc)
    };

    let mut acc = vec![lam.clone(), x.clone(), y.clone()];
    match dir {
        Direction::Forward => {
            for f in factors {
                let step = vec![
                    lam.clone(),
                    y.clone(),
                    param_poly_sym(&f.p, &y)?.sub(&x.scale(
                        &crat_from_c64(f.delta)
                            .ok_or_else(|| CoreError::InvalidMap("non-finite delta".into()))?,
                    )),
                ];
                acc = compose_maps(&step, &acc)?;
            }
        }
        Direction::Inverse => {
            for f in factors.iter().rev() {
                let delta_inv = crat_inv(
                    &crat_from_c64(f.delta)
                        .ok_or_else(|| CoreError::InvalidMap("non-finite delta".into()))?,
                )
                .ok_or_else(|| CoreError::InvalidMap("delta must be nonzero".into()))?;
                let step = vec![
                    lam.clone(),
                    param_poly_sym(&f.p, &x)?.sub(&y).scale(&delta_inv),
                    x.clone(),
                ];
                acc = compose_maps(&step, &acc)?;
            }
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::unipoly::UniPoly;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// The workhorse example H(λ,x,y) = (2λ, (y, y² − x)).
    pub(crate) fn basic() -> SkewHenonMap {
        let p = ParamPolynomial::from_unipoly(&UniPoly::power(2)).unwrap();
        SkewHenonMap::new(c(2.0, 0.0), vec![HenonFactor::new(p, c(1.0, 0.0)).unwrap()]).unwrap()
    }

    #[test]
    fn forward_hand_evaluation() {
        let h = basic();
        let p1 = h.apply_point([c(0.0, 0.0), c(0.0, 0.0), c(10.0, 0.0)], Direction::Forward).unwrap();
        assert_eq!(p1, [c(0.0, 0.0), c(10.0, 0.0), c(100.0, 0.0)]);
        let p2 = h.apply_point(p1, Direction::Forward).unwrap();
        assert_eq!(p2, [c(0.0, 0.0), c(100.0, 0.0), c(9990.0, 0.0)]);
    }

    #[test]
    fn inverse_round_trip() {
        let h = basic();
        let p = [c(0.3, -0.2), c(1.5, 0.7), c(-2.0, 0.1)];
        let fwd = h.apply_point(p, Direction::Forward).unwrap();
        let back = h.apply_point(fwd, Direction::Inverse).unwrap();
        for (a, b) in p.iter().zip(&back) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn structure_constants_simple() {
        // p_λ(y) = y² + λ, δ = 1
        let p = ParamPolynomial::new(vec![
            UniPoly::from_real(&[0.0, 1.0]),
            UniPoly::zero(),
            UniPoly::constant(c(1.0, 0.0)),
        ])
        .unwrap();
        let h = SkewHenonMap::new(c(2.0, 0.0), vec![HenonFactor::new(p, c(1.0, 0.0)).unwrap()]).unwrap();
        let (d, dt, ch, chp) = h.structure_constants();
        assert_eq!((d, dt), (2, 2));
        assert_eq!(ch, c(1.0, 0.0));
        assert_eq!(chp, c(1.0, 0.0));
    }

    #[test]
    fn structure_constants_lambda_cubed() {
        // p_λ(y) = y² + λ³ pushes d̃ to 3
        let p = ParamPolynomial::new(vec![
            UniPoly::from_real(&[0.0, 0.0, 0.0, 1.0]),
            UniPoly::zero(),
            UniPoly::constant(c(1.0, 0.0)),
        ])
        .unwrap();
        let h = SkewHenonMap::new(c(2.0, 0.0), vec![HenonFactor::new(p, c(1.0, 0.0)).unwrap()]).unwrap();
        assert_eq!(h.degree_tilde(), 3);
        assert_eq!(h.degree(), 2);
    }

    #[test]
    fn c_h_product_formula() {
        // m=2 with c1=2 (d1=2), c2=3 (d2=3): c_H = 2^3 · 3 = 24
        let p1 = ParamPolynomial::from_unipoly(&UniPoly::from_real(&[0.0, 0.0, 2.0])).unwrap();
        let p2 = ParamPolynomial::from_unipoly(&UniPoly::from_real(&[0.0, 0.0, 0.0, 3.0])).unwrap();
        let h = SkewHenonMap::new(
            c(1.5, 0.0),
            vec![
                HenonFactor::new(p1, c(1.0, 0.0)).unwrap(),
                HenonFactor::new(p2, c(1.0, 0.0)).unwrap(),
            ],
        )
        .unwrap();
        let (d, _, ch, _) = h.structure_constants();
        assert_eq!(d, 6);
        assert!((ch - c(24.0, 0.0)).norm() < 1e-12);
        // consistency: the symbolic fiber's y^d coefficient is c_H
        let coeff = h.fiber_symbolic(Direction::Forward)[2].coeff(&[0, 0, 6]);
        assert!((crate::algebra::rational::crat_to_c64(&coeff) - c(24.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn symbolic_inverse_is_exact_identity() {
        let h = basic();
        let fwd = h.iterate_polys(1, 1 << 20).unwrap();
        let inv = h.iterate_polys(-1, 1 << 20).unwrap();
        let comp = compose_maps(&fwd, &inv).unwrap();
        assert_eq!(comp, identity_map(3));
        let comp2 = compose_maps(&inv, &fwd).unwrap();
        assert_eq!(comp2, identity_map(3));
    }

    #[test]
    fn degree_law() {
        // d̃ = 3, d = 2: deg(H²) = d̃·d = 6
        let p = ParamPolynomial::new(vec![
            UniPoly::from_real(&[0.0, 0.0, 0.0, 1.0]),
            UniPoly::zero(),
            UniPoly::constant(c(1.0, 0.0)),
        ])
        .unwrap();
        let h = SkewHenonMap::new(c(2.0, 0.0), vec![HenonFactor::new(p, c(1.0, 0.0)).unwrap()]).unwrap();
        let h2 = h.iterate_polys(2, 1 << 20).unwrap();
        assert_eq!(crate::algebra::multipoly::map_degree(&h2), 6);
    }

    #[test]
    fn iterate_map_matches_pointwise() {
        let h = basic();
        let h2 = h.iterate_map(2).unwrap();
        let p = [c(0.4, 0.1), c(-0.3, 0.2), c(1.1, -0.6)];
        let twice = h
            .apply_point(h.apply_point(p, Direction::Forward).unwrap(), Direction::Forward)
            .unwrap();
        let once = h2.apply_point(p, Direction::Forward).unwrap();
        for (a, b) in twice.iter().zip(&once) {
            assert!((a - b).norm() < 1e-12);
        }
        let (d2, dt2, ch2, _) = h2.structure_constants();
        assert_eq!((d2, dt2), (4, 4));
        assert!((ch2 - c(1.0, 0.0)).norm() < 1e-12); // c_H^{d+1} = 1
    }
}
