//! The three automorphism families and the diagonal conjugators.

pub mod diagonal;
pub mod fibered;
pub mod shift;
pub mod skew;

pub use diagonal::{DiagEntry, DiagonalMap};
pub use fibered::{CircleRotation, FiberedSkewHenon, FiberedState};
pub use shift::ShiftLikeMap;
pub use skew::{HenonFactor, SkewHenonMap, SkewState};

/// Orbit direction. Forward means the map itself, inverse its inverse;
/// the Green/Böttcher machinery interprets the sign accordingly (plus
/// objects live on forward orbits, minus objects on backward ones).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

impl Direction {
    pub fn sign(self) -> i32 {
        match self {
            Direction::Forward => 1,
            Direction::Inverse => -1,
        }
    }

    pub fn flip(self) -> Direction {
        match self {
            Direction::Forward => Direction::Inverse,
            Direction::Inverse => Direction::Forward,
        }
    }
}
