//! Map-definition files: a JSON document with complex numbers as [re, im]
//! pairs and polynomials as coefficient arrays, lowest degree first.
//!
//! Families:
//!   {"family":"shift","k":3,"nu":1,"a":[1,0],"p":[[0,0],[0,0],[1,0]]}
//!   {"family":"skew-affine","c":[2,0],"factors":[{"p":[[[0,0]],[[0,0]],[[1,0]]],"delta":[1,0]}]}
//!   {"family":"skew-circle","theta":0.5,"factors":[...]}
//!
//! For skew factors, `p` is indexed by the y-degree and each entry is the
//! λ-polynomial of that coefficient (again lowest degree first).

use std::path::Path;

use num::complex::Complex64;
use serde::{Deserialize, Serialize};

use polyauto_core::algebra::{ParamPolynomial, UniPoly};
use polyauto_core::maps::{FiberedSkewHenon, HenonFactor, ShiftLikeMap, SkewHenonMap};

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: String,
        source: std::io::Error,
    },
    #[error("schema error in {path}: {source}")]
    Schema {
        path: String,
        source: serde_json::Error,
    },
    #[error("invalid map in {path}: {message}")]
    Invalid { path: String, message: String },
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "family")]
pub enum RawMap {
    #[serde(rename = "shift")]
    Shift {
        k: usize,
        nu: usize,
        a: [f64; 2],
        p: Vec<[f64; 2]>,
    },
    #[serde(rename = "skew-affine")]
    SkewAffine {
        c: [f64; 2],
        factors: Vec<RawFactor>,
    },
    #[serde(rename = "skew-circle")]
    SkewCircle { theta: f64, factors: Vec<RawFactor> },
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct RawFactor {
    pub p: Vec<Vec<[f64; 2]>>,
    pub delta: [f64; 2],
}

/// A validated map of any family, with structure constants computed.
#[derive(Debug, Clone)]
pub enum AnyMap {
    Shift(ShiftLikeMap),
    SkewAffine(SkewHenonMap),
    SkewCircle(FiberedSkewHenon),
}

impl AnyMap {
    pub fn family(&self) -> &'static str {
        match self {
            AnyMap::Shift(_) => "shift",
            AnyMap::SkewAffine(_) => "skew-affine",
            AnyMap::SkewCircle(_) => "skew-circle",
        }
    }
}

fn cx(v: [f64; 2]) -> Complex64 {
    Complex64::new(v[0], v[1])
}

fn raw_factor(f: &RawFactor) -> Result<HenonFactor, polyauto_core::CoreError> {
    let coeffs = f
        .p
        .iter()
        .map(|lambda_poly| UniPoly::new(lambda_poly.iter().map(|&c| cx(c)).collect()))
        .collect();
    HenonFactor::new(ParamPolynomial::new(coeffs)?, cx(f.delta))
}

/// Build the validated map; constructor checks enforce the defining
/// constraints (a ≠ 0, δ_j ≠ 0, degrees ≥ 2, c ≠ 0, λ-independent leading
/// coefficients).
pub fn build(raw: &RawMap) -> Result<AnyMap, polyauto_core::CoreError> {
    match raw {
        RawMap::Shift { k, nu, a, p } => {
            let poly = UniPoly::new(p.iter().map(|&c| cx(c)).collect());
            Ok(AnyMap::Shift(ShiftLikeMap::new(*k, *nu, cx(*a), poly)?))
        }
        RawMap::SkewAffine { c, factors } => {
            let fs = factors.iter().map(raw_factor).collect::<Result<_, _>>()?;
            Ok(AnyMap::SkewAffine(SkewHenonMap::new(cx(*c), fs)?))
        }
        RawMap::SkewCircle { theta, factors } => {
            let fs = factors.iter().map(raw_factor).collect::<Result<_, _>>()?;
            Ok(AnyMap::SkewCircle(FiberedSkewHenon::new(*theta, fs)?))
        }
    }
}

pub fn load_map(path: impl AsRef<Path>) -> Result<AnyMap, IoError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| IoError::Read {
        path: path.display().to_string(),
        source,
    })?;
    let raw: RawMap = serde_json::from_str(&text).map_err(|source| IoError::Schema {
        path: path.display().to_string(),
        source,
    })?;
    build(&raw).map_err(|e| IoError::Invalid {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn unraw_complex(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

fn unraw_factor(f: &HenonFactor) -> RawFactor {
    RawFactor {
        p: f.p()
            .coeffs()
            .iter()
            .map(|lp| {
                if lp.is_zero() {
                    vec![[0.0, 0.0]]
                } else {
                    lp.coeffs().iter().map(|&c| unraw_complex(c)).collect()
                }
            })
            .collect(),
        delta: unraw_complex(f.delta()),
    }
}

/// Back to the file representation (exact: coefficients are stored doubles).
pub fn to_raw(map: &AnyMap) -> RawMap {
    match map {
        AnyMap::Shift(s) => RawMap::Shift {
            k: s.dim(),
            nu: s.nu(),
            a: unraw_complex(s.a()),
            p: s.p().coeffs().iter().map(|&c| unraw_complex(c)).collect(),
        },
        AnyMap::SkewAffine(h) => RawMap::SkewAffine {
            c: unraw_complex(h.c()),
            factors: h.factors().iter().map(unraw_factor).collect(),
        },
        AnyMap::SkewCircle(h) => RawMap::SkewCircle {
            theta: h.base().theta,
            factors: h.factors().iter().map(unraw_factor).collect(),
        },
    }
}

pub fn save_map(map: &AnyMap, path: impl AsRef<Path>) -> Result<(), IoError> {
    let raw = to_raw(map);
    let text = serde_json::to_string_pretty(&raw).expect("raw map serializes");
    std::fs::write(path.as_ref(), text).map_err(|source| IoError::Read {
        path: path.as_ref().display().to_string(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shift_round_trip() {
        let raw = RawMap::Shift {
            k: 3,
            nu: 1,
            a: [1.0, 0.0],
            p: vec![[0.0, 0.0], [0.0, 0.0], [1.0, 0.0]],
        };
        let m = build(&raw).unwrap();
        assert_eq!(to_raw(&m), raw);
    }

    #[test]
    fn rejects_zero_a() {
        let raw = RawMap::Shift {
            k: 3,
            nu: 1,
            a: [0.0, 0.0],
            p: vec![[0.0, 0.0], [0.0, 0.0], [1.0, 0.0]],
        };
        let err = build(&raw).unwrap_err().to_string();
        assert!(err.contains("nonzero"), "{err}");
    }

    #[test]
    fn rejects_zero_delta() {
        let raw = RawMap::SkewAffine {
            c: [2.0, 0.0],
            factors: vec![RawFactor {
                p: vec![vec![[0.0, 0.0]], vec![[0.0, 0.0]], vec![[1.0, 0.0]]],
                delta: [0.0, 0.0],
            }],
        };
        assert!(build(&raw).is_err());
    }
}
