//! Shift-like polynomial automorphisms of C^k.

use num::complex::Complex64;

use crate::algebra::logcomplex::Cx;
use crate::algebra::multipoly::{compose_maps, identity_map, MultiPoly};
use crate::algebra::rational::crat_from_c64;
use crate::algebra::unipoly::UniPoly;
use crate::error::{CoreError, Result};
use crate::maps::Direction;

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// `S(z_1,…,z_k) = (z_2,…,z_k, a z_1 + p(z_{k-ν+1}))` with `a ≠ 0` and
/// `deg p ≥ 2`. The type-ν structure makes `S^{ν(k-ν)}` regular; the block
/// iterates `S^ν` and `S^{-(k-ν)}` drive the Green functions.
#[derive(Debug, Clone)]
pub struct ShiftLikeMap {
    k: usize,
    nu: usize,
    a: Complex64,
    p: UniPoly,
    m: usize,
}

impl ShiftLikeMap {
    pub fn new(k: usize, nu: usize, a: Complex64, p: UniPoly) -> Result<Self> {
        if k < 3 {
            return Err(CoreError::InvalidMap(format!(
                "shift-like maps here live in C^k with k >= 3, got k = {k}"
            )));
        }
        if nu == 0 || nu >= k {
            return Err(CoreError::InvalidMap(format!(
                "shift type must satisfy 1 <= nu <= k-1, got nu = {nu}"
            )));
        }
        if a.norm() == 0.0 {
            return Err(CoreError::InvalidMap("the coefficient a must be nonzero".into()));
        }
        if p.degree() < 2 {
            return Err(CoreError::InvalidMap(
                "the polynomial p must have degree >= 2".into(),
            ));
        }
        let m = nu * (k - nu) / gcd(nu, k - nu);
        Ok(ShiftLikeMap { k, nu, a, p, m })
    }

    pub fn dim(&self) -> usize {
        self.k
    }

    pub fn nu(&self) -> usize {
        self.nu
    }

    pub fn a(&self) -> Complex64 {
        self.a
    }

    pub fn p(&self) -> &UniPoly {
        &self.p
    }

    /// Degree of the map (= deg p).
    pub fn degree(&self) -> usize {
        self.p.degree()
    }

    /// lcm(ν, k-ν): the regular-iterate exponent of the rigidity theorem.
    pub fn regular_exponent(&self) -> usize {
        self.m
    }

    fn check_dim(&self, z: usize) -> Result<()> {
        if z != self.k {
            return Err(CoreError::DimensionMismatch {
                expected: self.k,
                got: z,
            });
        }
        Ok(())
    }

    /// One application of S or S^{-1} in exact arithmetic.
    pub fn apply(&self, z: &[Complex64], dir: Direction) -> Result<Vec<Complex64>> {
        self.check_dim(z.len())?;
        let k = self.k;
        let mut out = Vec::with_capacity(k);
        match dir {
            Direction::Forward => {
                out.extend_from_slice(&z[1..]);
                out.push(self.a * z[0] + self.p.eval(z[k - self.nu]));
            }
            Direction::Inverse => {
                out.push((z[k - 1] - self.p.eval(z[k - self.nu - 1])) / self.a);
                out.extend_from_slice(&z[..k - 1]);
            }
        }
        Ok(out)
    }

    /// One application on hybrid coordinates (survives past f64 overflow).
    pub fn apply_cx(&self, z: &[Cx], dir: Direction) -> Result<Vec<Cx>> {
        self.check_dim(z.len())?;
        let k = self.k;
        let mut out = Vec::with_capacity(k);
        match dir {
            Direction::Forward => {
                out.extend_from_slice(&z[1..]);
                let pv = self.p.eval_cx(z[k - self.nu])?;
                out.push(z[0].scale(self.a).add(pv));
            }
            Direction::Inverse => {
                let pv = self.p.eval_cx(z[k - self.nu - 1])?;
                let first = z[k - 1].add(pv.neg()).scale(1.0 / self.a);
                out.push(first);
                out.extend_from_slice(&z[..k - 1]);
            }
        }
        Ok(out)
    }

    /// The Green-function block step: `S^ν` forward, `S^{-(k-ν)}` backward.
    pub fn block_cx(&self, z: &[Cx], dir: Direction) -> Result<Vec<Cx>> {
        let steps = match dir {
            Direction::Forward => self.nu,
            Direction::Inverse => self.k - self.nu,
        };
        let mut state = z.to_vec();
        for _ in 0..steps {
            state = self.apply_cx(&state, dir)?;
        }
        Ok(state)
    }

    /// n-fold application (sign of `n` picks the direction), hybrid output.
    pub fn iterate_cx(&self, z: &[Complex64], n: i64) -> Result<Vec<Cx>> {
        let dir = if n >= 0 {
            Direction::Forward
        } else {
            Direction::Inverse
        };
        let mut state: Vec<Cx> = z.iter().map(|&c| Cx::from_complex(c)).collect();
        for _ in 0..n.unsigned_abs() {
            state = self.apply_cx(&state, dir)?;
        }
        Ok(state)
    }

    /// Exact symbolic coordinates of one application.
    pub fn map_polys(&self, dir: Direction) -> Result<Vec<MultiPoly>> {
        let k = self.k;
        let a = crat_from_c64(self.a)
            .ok_or_else(|| CoreError::InvalidMap("non-finite coefficient a".into()))?;
        let p_sym: Vec<_> = self
            .p
            .coeffs()
            .iter()
            .map(|&c| {
                crat_from_c64(c)
                    .ok_or_else(|| CoreError::InvalidMap("non-finite p coefficient".into()))
            })
            .collect::<Result<_>>()?;
        let poly_at = |v: &MultiPoly| {
            let mut acc = MultiPoly::zero(k);
            for c in p_sym.iter().rev() {
                acc = acc.mul(v).add(&MultiPoly::constant(k, c.clone()));
            }
            acc
        };
        let vars = identity_map(k);
        let mut out = Vec::with_capacity(k);
        match dir {
            Direction::Forward => {
                out.extend(vars[1..].iter().cloned());
                let last = vars[0].scale(&a).add(&poly_at(&vars[k - self.nu]));
                out.push(last);
            }
            Direction::Inverse => {
                let a_inv = crate::algebra::rational::crat_inv(&a)
                    .ok_or_else(|| CoreError::InvalidMap("a must be nonzero".into()))?;
                let first = vars[k - 1].sub(&poly_at(&vars[k - self.nu - 1])).scale(&a_inv);
                out.push(first);
                out.extend(vars[..k - 1].iter().cloned());
            }
        }
        Ok(out)
    }

    /// Exact symbolic coordinates of the n-th iterate. Degrees explode like
    /// d^|n|, so the symbolic side is budgeted.
    pub fn iterate_polys(&self, n: i64, budget: u64) -> Result<Vec<MultiPoly>> {
        let dir = if n >= 0 {
            Direction::Forward
        } else {
            Direction::Inverse
        };
        let steps = n.unsigned_abs();
        let predicted = (self.degree() as u64).saturating_pow(steps.min(64) as u32);
        if predicted > budget {
            return Err(CoreError::DegreeBudgetExceeded {
                degree: predicted,
                budget,
            });
        }
        let one = self.map_polys(dir)?;
        let mut acc = identity_map(self.k);
        for _ in 0..steps {
            acc = compose_maps(&one, &acc)?;
        }
        Ok(acc)
    }
}
