//! Diagonal linear maps: the conjugating candidates of the rigidity
//! theorems. Entries are exact Gaussian rationals or symbolic roots of
//! unity, so commutation certificates stay exact even on root-of-unity
//! search grids that leave Q(i).

use num::complex::Complex64;

use crate::algebra::rational::{crat_from_i64, crat_is_unimodular, crat_to_c64, CRat};

#[derive(Debug, Clone, PartialEq)]
pub enum DiagEntry {
    Exact(CRat),
    /// e^{2πi·pow/order}.
    RootOfUnity { order: u32, pow: u32 },
}

impl DiagEntry {
    pub fn value(&self) -> Complex64 {
        match self {
            DiagEntry::Exact(c) => crat_to_c64(c),
            DiagEntry::RootOfUnity { order, pow } => {
                Complex64::from_polar(1.0, std::f64::consts::TAU * *pow as f64 / *order as f64)
            }
        }
    }

    /// The exact rational value when the entry lies in Q(i).
    pub fn as_crat(&self) -> Option<CRat> {
        match self {
            DiagEntry::Exact(c) => Some(c.clone()),
            DiagEntry::RootOfUnity { order, pow } => {
                let p = pow % order;
                // e^{2πi p/o} ∈ Q(i) iff the angle is a multiple of π/2
                if (4 * p) % order != 0 {
                    return None;
                }
                Some(match (4 * p) / order {
                    0 => crat_from_i64(1, 0),
                    1 => crat_from_i64(0, 1),
                    2 => crat_from_i64(-1, 0),
                    _ => crat_from_i64(0, -1),
                })
            }
        }
    }

    pub fn is_unimodular(&self) -> bool {
        match self {
            DiagEntry::Exact(c) => crat_is_unimodular(c),
            DiagEntry::RootOfUnity { .. } => true,
        }
    }
}

/// `C(z_1,…,z_k) = (δ_1 z_1, …, δ_k z_k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalMap {
    entries: Vec<DiagEntry>,
}

impl DiagonalMap {
    pub fn new(entries: Vec<DiagEntry>) -> Self {
        DiagonalMap { entries }
    }

    pub fn identity(k: usize) -> Self {
        DiagonalMap {
            entries: vec![DiagEntry::Exact(crat_from_i64(1, 0)); k],
        }
    }

    pub fn from_crats(entries: Vec<CRat>) -> Self {
        DiagonalMap {
            entries: entries.into_iter().map(DiagEntry::Exact).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[DiagEntry] {
        &self.entries
    }

    pub fn entry(&self, i: usize) -> &DiagEntry {
        &self.entries[i]
    }

    pub fn values(&self) -> Vec<Complex64> {
        self.entries.iter().map(|e| e.value()).collect()
    }

    pub fn apply(&self, z: &[Complex64]) -> Vec<Complex64> {
        z.iter()
            .zip(self.entries.iter())
            .map(|(v, e)| v * e.value())
            .collect()
    }

    pub fn all_unimodular(&self) -> bool {
        self.entries.iter().all(|e| e.is_unimodular())
    }

    /// True when the entries split into a constant block of length
    /// `split` followed by a constant block (the C-shape of the shift
    /// rigidity theorem). Exact entries only.
    pub fn has_block_shape(&self, split: usize) -> bool {
        let exact: Option<Vec<CRat>> = self.entries.iter().map(|e| e.as_crat()).collect();
        match exact {
            None => false,
            Some(vals) => {
                vals[..split].windows(2).all(|w| w[0] == w[1])
                    && vals[split..].windows(2).all(|w| w[0] == w[1])
            }
        }
    }
}
