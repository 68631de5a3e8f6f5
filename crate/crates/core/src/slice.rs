//! Two-axis slice grids through the ambient space, shared by the Green
//! comparison and the renderer.

use num::complex::Complex64;

use crate::error::{CoreError, Result};

/// Real/imaginary part selector of a complex coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Part {
    Re,
    Im,
}

/// One sweep axis: a real degree of freedom swept over [min, max] with
/// `res` evenly spaced samples (endpoints included).
#[derive(Debug, Clone, Copy)]
pub struct SliceAxis {
    pub coord: usize,
    pub part: Part,
    pub min: f64,
    pub max: f64,
    pub res: usize,
}

impl SliceAxis {
    pub fn value(&self, idx: usize) -> f64 {
        self.min + (self.max - self.min) * idx as f64 / (self.res - 1) as f64
    }
}

/// Real-coordinate layout of the ambient space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointLayout {
    /// k complex coordinates (2k real degrees of freedom).
    Complex(usize),
    /// Circle base angle t plus two complex fiber coordinates (5 dof).
    CircleFibered,
}

impl PointLayout {
    pub fn dof(&self) -> usize {
        match self {
            PointLayout::Complex(k) => 2 * k,
            PointLayout::CircleFibered => 5,
        }
    }

    /// Index of (coord, part) in the flat dof vector.
    pub fn dof_index(&self, coord: usize, part: Part) -> Result<usize> {
        match self {
            PointLayout::Complex(k) => {
                if coord >= *k {
                    return Err(CoreError::DimensionMismatch {
                        expected: *k,
                        got: coord,
                    });
                }
                Ok(2 * coord + if part == Part::Im { 1 } else { 0 })
            }
            PointLayout::CircleFibered => {
                if coord == 0 {
                    if part == Part::Im {
                        return Err(CoreError::Precondition(
                            "the circle coordinate has no imaginary part".into(),
                        ));
                    }
                    return Ok(0);
                }
                if coord > 2 {
                    return Err(CoreError::DimensionMismatch {
                        expected: 3,
                        got: coord,
                    });
                }
                Ok(2 * coord - 1 + if part == Part::Im { 1 } else { 0 })
            }
        }
    }
}

/// A validated two-axis slice: two sweep axes plus fixed values for every
/// remaining real degree of freedom.
#[derive(Debug, Clone)]
pub struct SliceSpec {
    pub axes: [SliceAxis; 2],
    /// Base values for all dof; the swept entries are overwritten per pixel.
    pub fixed: Vec<f64>,
}

impl SliceSpec {
    pub fn new(axes: [SliceAxis; 2], fixed: Vec<f64>, layout: PointLayout) -> Result<Self> {
        for ax in &axes {
            if ax.res < 2 {
                return Err(CoreError::Precondition(
                    "slice resolution must be >= 2 per axis".into(),
                ));
            }
            if !(ax.min < ax.max) {
                return Err(CoreError::Precondition("slice needs min < max".into()));
            }
            layout.dof_index(ax.coord, ax.part)?;
        }
        if fixed.len() != layout.dof() {
            return Err(CoreError::DimensionMismatch {
                expected: layout.dof(),
                got: fixed.len(),
            });
        }
        let i0 = layout.dof_index(axes[0].coord, axes[0].part)?;
        let i1 = layout.dof_index(axes[1].coord, axes[1].part)?;
        if i0 == i1 {
            return Err(CoreError::Precondition(
                "the two sweep axes must be distinct".into(),
            ));
        }
        Ok(SliceSpec { axes, fixed })
    }

    pub fn width(&self) -> usize {
        self.axes[0].res
    }

    pub fn height(&self) -> usize {
        self.axes[1].res
    }

    /// The dof vector at grid position (i, j) = (axis1 index, axis2 index).
    pub fn point(&self, i: usize, j: usize, layout: PointLayout) -> Vec<f64> {
        let mut dof = self.fixed.clone();
        let i0 = layout
            .dof_index(self.axes[0].coord, self.axes[0].part)
            .expect("validated");
        let i1 = layout
            .dof_index(self.axes[1].coord, self.axes[1].part)
            .expect("validated");
        dof[i0] = self.axes[0].value(i);
        dof[i1] = self.axes[1].value(j);
        dof
    }
}

/// Reassemble complex coordinates from a flat dof vector.
pub fn dof_to_complex(dof: &[f64]) -> Vec<Complex64> {
    dof.chunks_exact(2)
        .map(|c| Complex64::new(c[0], c[1]))
        .collect()
}
