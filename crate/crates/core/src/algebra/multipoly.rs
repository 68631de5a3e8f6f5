//! Exact multivariate polynomials over Gaussian rationals.
//!
//! This is the symbolic oracle behind the commutation certificates: addition,
//! multiplication and composition are exact, and equality is coefficient-wise
//! exact equality. No zero coefficients are ever stored.

use std::collections::BTreeMap;
use std::fmt;

use num::complex::Complex64;

use crate::algebra::rational::{crat_is_zero, crat_one, crat_to_c64, CRat};
use crate::error::{CoreError, Result};

/// Exponent tuple, one entry per variable.
pub type Monomial = Vec<u32>;

#[derive(Debug, Clone, PartialEq)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Monomial, CRat>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: CRat) -> Self {
        let mut p = MultiPoly::zero(nvars);
        if !crat_is_zero(&c) {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        MultiPoly::constant(nvars, crat_one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable index out of range");
        let mut mono = vec![0u32; nvars];
        mono[i] = 1;
        let mut p = MultiPoly::zero(nvars);
        p.terms.insert(mono, crat_one());
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &CRat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, mono: &[u32]) -> CRat {
        self.terms
            .get(mono)
            .cloned()
            .unwrap_or_else(crate::algebra::rational::crat_zero)
    }

    fn insert(&mut self, mono: Monomial, c: CRat) {
        if crat_is_zero(&c) {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(mono) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let s = e.get().clone() + c;
                if crat_is_zero(&s) {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> MultiPoly {
        MultiPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }

    pub fn sub(&self, other: &MultiPoly) -> MultiPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, other.nvars);
        let mut out = MultiPoly::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let mono: Monomial = ma.iter().zip(mb).map(|(a, b)| a + b).collect();
                out.insert(mono, ca.clone() * cb.clone());
            }
        }
        out
    }

    pub fn scale(&self, c: &CRat) -> MultiPoly {
        if crat_is_zero(c) {
            return MultiPoly::zero(self.nvars);
        }
        MultiPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, k)| (m.clone(), k.clone() * c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut acc = MultiPoly::one(self.nvars);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Substitute `args[i]` for variable `i`. All arguments must share an
    /// ambient variable set.
    pub fn compose(&self, args: &[MultiPoly]) -> Result<MultiPoly> {
        if args.len() != self.nvars {
            return Err(CoreError::ArityMismatch(format!(
                "composition needs {} arguments, got {}",
                self.nvars,
                args.len()
            )));
        }
        let target_vars = match args.first() {
            Some(a) => a.nvars,
            None => return Ok(MultiPoly::zero(0)),
        };
        if args.iter().any(|a| a.nvars != target_vars) {
            return Err(CoreError::ArityMismatch(
                "composition arguments have mixed variable counts".into(),
            ));
        }
        // Cache argument powers up to the largest exponent that occurs.
        let mut max_exp = vec![0u32; self.nvars];
        for m in self.terms.keys() {
            for (i, e) in m.iter().enumerate() {
                max_exp[i] = max_exp[i].max(*e);
            }
        }
        let mut powers: Vec<Vec<MultiPoly>> = Vec::with_capacity(self.nvars);
        for (i, &top) in max_exp.iter().enumerate() {
            let mut ps = Vec::with_capacity(top as usize + 1);
            ps.push(MultiPoly::one(target_vars));
            for e in 1..=top {
                let next = ps[(e - 1) as usize].mul(&args[i]);
                ps.push(next);
            }
            powers.push(ps);
        }
        let mut out = MultiPoly::zero(target_vars);
        for (m, c) in &self.terms {
            let mut term = MultiPoly::constant(target_vars, c.clone());
            for (i, &e) in m.iter().enumerate() {
                if e > 0 {
                    term = term.mul(&powers[i][e as usize]);
                }
            }
            out = out.add(&term);
        }
        Ok(out)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.iter().sum()).max()
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m[var]).max().unwrap_or(0)
    }

    /// Leading term in graded-lexicographic order (total degree first, then
    /// lexicographic with variable 0 strongest).
    pub fn leading_graded_lex(&self) -> Option<(&Monomial, &CRat)> {
        self.terms
            .iter()
            .max_by(|(ma, _), (mb, _)| {
                let da: u32 = ma.iter().sum();
                let db: u32 = mb.iter().sum();
                da.cmp(&db).then_with(|| ma.cmp(mb))
            })
    }

    /// Smallest monomial (graded-lex) on which `self` and `other` differ.
    pub fn first_difference(&self, other: &MultiPoly) -> Option<(Monomial, CRat, CRat)> {
        let mut monos: Vec<&Monomial> = self.terms.keys().chain(other.terms.keys()).collect();
        monos.sort_by(|ma, mb| {
            let da: u32 = ma.iter().sum();
            let db: u32 = mb.iter().sum();
            da.cmp(&db).then_with(|| ma.cmp(mb))
        });
        monos.dedup();
        for m in monos {
            let a = self.coeff(m);
            let b = other.coeff(m);
            if a != b {
                return Some((m.clone(), a, b));
            }
        }
        None
    }

    /// Floating evaluation, used to cross-check the exact oracle numerically.
    pub fn eval(&self, point: &[Complex64]) -> Complex64 {
        assert_eq!(point.len(), self.nvars);
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let mut t = crat_to_c64(c);
            for (i, &e) in m.iter().enumerate() {
                t *= point[i].powu(e);
            }
            acc += t;
        }
        acc
    }

    /// Render with the given variable names.
    pub fn display<'a>(&'a self, names: &'a [&'a str]) -> MultiPolyDisplay<'a> {
        MultiPolyDisplay { poly: self, names }
    }
}

/// Coordinatewise exact composition `f ∘ g` of polynomial maps.
pub fn compose_maps(f: &[MultiPoly], g: &[MultiPoly]) -> Result<Vec<MultiPoly>> {
    f.iter().map(|fi| fi.compose(g)).collect()
}

/// The identity map on `nvars` variables.
pub fn identity_map(nvars: usize) -> Vec<MultiPoly> {
    (0..nvars).map(|i| MultiPoly::var(nvars, i)).collect()
}

/// Total degree of a polynomial map (max over coordinates).
pub fn map_degree(f: &[MultiPoly]) -> u32 {
    f.iter().filter_map(|p| p.total_degree()).max().unwrap_or(0)
}

pub struct MultiPolyDisplay<'a> {
    poly: &'a MultiPoly,
    names: &'a [&'a str],
}

impl fmt::Display for MultiPolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.poly.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({}+{}i)", c.re, c.im)?;
            for (i, &e) in m.iter().enumerate() {
                if e == 1 {
                    write!(f, "*{}", self.names[i])?;
                } else if e > 1 {
                    write!(f, "*{}^{}", self.names[i], e)?;
                }
            }
        }
        Ok(())
    }
}
