//! Skew products of Hénon maps fibered over a compact base, realized as the
//! unit circle with a rotation: t ↦ t+θ (mod 1), λ = e^{2πit}.

use num::complex::Complex64;

use crate::algebra::logcomplex::Cx;
use crate::algebra::multipoly::MultiPoly;
use crate::error::{CoreError, Result};
use crate::maps::skew::{CoeffBounds, HenonFactor};
use crate::maps::Direction;

/// Rotation of the circle R/Z by θ; always a homeomorphism.
#[derive(Debug, Clone, Copy)]
pub struct CircleRotation {
    pub theta: f64,
}

impl CircleRotation {
    pub fn new(theta: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&theta) {
            return Err(CoreError::InvalidMap("rotation angle must lie in [0,1)".into()));
        }
        Ok(CircleRotation { theta })
    }

    pub fn step(&self, t: f64, dir: Direction) -> f64 {
        let t = match dir {
            Direction::Forward => t + self.theta,
            Direction::Inverse => t - self.theta,
        };
        t.rem_euclid(1.0)
    }

    pub fn lambda(t: f64) -> Complex64 {
        Complex64::from_polar(1.0, std::f64::consts::TAU * t)
    }
}

/// Orbit state over the circle base.
#[derive(Debug, Clone, Copy)]
pub struct FiberedState {
    pub t: f64,
    pub x: Cx,
    pub y: Cx,
}

impl FiberedState {
    pub fn new(t: f64, x: Complex64, y: Complex64) -> Self {
        FiberedState {
            t,
            x: Cx::from_complex(x),
            y: Cx::from_complex(y),
        }
    }

    /// Sup log-norm of the fiber pair (the base lives on the unit circle and
    /// plays no role in escape).
    pub fn fiber_log_norm(&self) -> f64 {
        self.x.abs_log().max(self.y.abs_log())
    }
}

/// A fibered skew product with circle base. Fiber coefficients are
/// polynomials in λ restricted to |λ| = 1, so all coefficient bounds are
/// uniform over the base, which is what the uniform filtration needs.
#[derive(Debug, Clone)]
pub struct FiberedSkewHenon {
    base: CircleRotation,
    factors: Vec<HenonFactor>,
    d: u32,
    c_h: Complex64,
    c_h_prime: Complex64,
    // the skew product over the affine base with c = 1 shares fiber algebra;
    // we reuse its symbolic machinery for bounds and oracles
    proxy: crate::maps::skew::SkewHenonMap,
}

impl FiberedSkewHenon {
    pub fn new(theta: f64, factors: Vec<HenonFactor>) -> Result<Self> {
        let base = CircleRotation::new(theta)?;
        let proxy = crate::maps::skew::SkewHenonMap::new(Complex64::new(1.0, 0.0), factors.clone())?;
        let (d, _, c_h, c_h_prime) = proxy.structure_constants();
        Ok(FiberedSkewHenon {
            base,
            factors,
            d,
            c_h,
            c_h_prime,
            proxy,
        })
    }

    pub fn base(&self) -> CircleRotation {
        self.base
    }

    pub fn factors(&self) -> &[HenonFactor] {
        &self.factors
    }

    pub fn degree(&self) -> u32 {
        self.d
    }

    pub fn c_h(&self) -> Complex64 {
        self.c_h
    }

    pub fn c_h_prime(&self) -> Complex64 {
        self.c_h_prime
    }

    /// Fiber map at a fixed base point, as hybrid arithmetic.
    pub fn fiber_apply(&self, lambda: Complex64, x: Cx, y: Cx, dir: Direction) -> Result<(Cx, Cx)> {
        let state = crate::maps::skew::SkewState { lambda, x, y };
        // the proxy has c = 1, so its base coordinate stays λ and its fiber
        // is exactly H_λ^{±1}
        let out = self.proxy.apply(state, dir)?;
        Ok((out.x, out.y))
    }

    /// One application of the fibered map: forward is (σ t, H_{λ(t)}(x,y));
    /// the inverse fiber is taken at the pulled-back base point.
    pub fn apply(&self, s: FiberedState, dir: Direction) -> Result<FiberedState> {
        match dir {
            Direction::Forward => {
                let lam = CircleRotation::lambda(s.t);
                let (x, y) = self.fiber_apply(lam, s.x, s.y, Direction::Forward)?;
                Ok(FiberedState {
                    t: self.base.step(s.t, Direction::Forward),
                    x,
                    y,
                })
            }
            Direction::Inverse => {
                let t = self.base.step(s.t, Direction::Inverse);
                let lam = CircleRotation::lambda(t);
                let (x, y) = self.fiber_apply(lam, s.x, s.y, Direction::Inverse)?;
                Ok(FiberedState { t, x, y })
            }
        }
    }

    /// Symbolic fiber (λ treated as a free variable), for the exact oracles.
    pub fn fiber_symbolic(&self, dir: Direction) -> &[MultiPoly] {
        self.proxy.fiber_symbolic(dir)
    }

    /// Uniform coefficient bounds over the base (|λ| = 1).
    pub fn fiber_coeff_bounds(&self, dir: Direction) -> CoeffBounds {
        self.proxy.fiber_coeff_bounds(dir)
    }

    pub fn fiber_codominant_bounds(&self, dir: Direction) -> CoeffBounds {
        self.proxy.fiber_codominant_bounds(dir)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parampoly::ParamPolynomial;
    use crate::algebra::unipoly::UniPoly;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// θ = (3-√5)/2, p_λ(y) = y² + ε λ.
    pub(crate) fn golden(eps: f64) -> FiberedSkewHenon {
        let p = ParamPolynomial::new(vec![
            UniPoly::new(vec![c(0.0, 0.0), c(eps, 0.0)]),
            UniPoly::zero(),
            UniPoly::constant(c(1.0, 0.0)),
        ])
        .unwrap();
        FiberedSkewHenon::new(
            (3.0 - 5f64.sqrt()) / 2.0,
            vec![HenonFactor::new(p, c(1.0, 0.0)).unwrap()],
        )
        .unwrap()
    }

    #[test]
    fn base_round_trip() {
        let h = golden(0.1);
        let s = FiberedState::new(0.2, c(0.5, 0.1), c(3.0, -0.4));
        let fwd = h.apply(s, Direction::Forward).unwrap();
        let back = h.apply(fwd, Direction::Inverse).unwrap();
        assert!((back.t - s.t).abs() < 1e-12);
        assert!((back.x.to_complex().unwrap() - s.x.to_complex().unwrap()).norm() < 1e-12);
        assert!((back.y.to_complex().unwrap() - s.y.to_complex().unwrap()).norm() < 1e-12);
    }

    #[test]
    fn cocycle_law() {
        // H_λ^{n+1} = H_{σ^n λ} ∘ H_λ^n pointwise
        let h = golden(0.1);
        let mut s = FiberedState::new(0.37, c(0.2, 0.0), c(1.4, 0.3));
        let mut t = s.t;
        for _ in 0..5 {
            let lam = CircleRotation::lambda(t);
            let (fx, fy) = h
                .fiber_apply(lam, s.x, s.y, Direction::Forward)
                .unwrap();
            let next = h.apply(s, Direction::Forward).unwrap();
            assert!((next.x.to_complex().unwrap() - fx.to_complex().unwrap()).norm() < 1e-12);
            assert!((next.y.to_complex().unwrap() - fy.to_complex().unwrap()).norm() < 1e-12);
            s = next;
            t = h.base().step(t, Direction::Forward);
        }
    }

    #[test]
    fn theta_zero_reduces_to_fixed_fiber() {
        let p = ParamPolynomial::from_unipoly(&UniPoly::power(2)).unwrap();
        let h = FiberedSkewHenon::new(0.0, vec![HenonFactor::new(p, c(1.0, 0.0)).unwrap()]).unwrap();
        let s = FiberedState::new(0.0, c(0.0, 0.0), c(10.0, 0.0));
        let n = h.apply(s, Direction::Forward).unwrap();
        assert_eq!(n.t, 0.0);
        assert_eq!(n.y.to_complex().unwrap(), c(100.0, 0.0));
    }
}
