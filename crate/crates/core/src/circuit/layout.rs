//! Input placements. In every layout the cut plane sits between axis-0
//! coordinates `-1` and `0`: sites with `site[0] < 0` hold `x`.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// `x` and `y` blocks of `per_side` sites each, mirrored across the cut.
///
/// For `D >= 2`, `per_side = L^D` and each block is an `L^D` cube; position
/// `k` follows a boustrophedon (reflected Gray) walk with axis 0 most
/// significant, so consecutive positions are grid neighbours and the first
/// `L^(D-1)` positions of both blocks face each other across the cut. For
/// `D = 1` the blocks are mirrored half-lines with `x_1` next to `y_1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridLayout {
    pub dimension: usize,
    pub per_side: usize,
    side: usize,
}

impl GridLayout {
    pub fn new(dimension: usize, per_side: usize) -> Result<Self> {
        if dimension == 0 || per_side == 0 {
            return Err(domain("dimension and size must be positive"));
        }
        let side = if dimension == 1 {
            per_side
        } else {
            let root = (per_side as f64).powf(1.0 / dimension as f64).round() as usize;
            (root.saturating_sub(1)..=root + 1)
                .find(|&l| l.checked_pow(dimension as u32) == Some(per_side))
                .ok_or_else(|| {
                    domain(format!("{per_side} sites is not a perfect power of dimension {dimension}"))
                })?
        };
        Ok(Self {
            dimension,
            per_side,
            side,
        })
    }

    /// Edge length `L` of each block.
    pub fn side(&self) -> usize {
        self.side
    }

    fn walk(&self, k: usize) -> Vec<i64> {
        if self.dimension == 1 {
            return vec![k as i64];
        }
        let l = self.side;
        let mut digits = vec![0usize; self.dimension];
        let mut rest = k;
        for d in digits.iter_mut().rev() {
            *d = rest % l;
            rest /= l;
        }
        let mut prefix = 0;
        digits
            .iter()
            .map(|&d| {
                let c = if prefix % 2 == 1 { l - 1 - d } else { d };
                prefix += c;
                c as i64
            })
            .collect()
    }

    pub fn x_site(&self, k: usize) -> Vec<i64> {
        let mut c = self.walk(k);
        c[0] = -1 - c[0];
        c
    }

    pub fn y_site(&self, k: usize) -> Vec<i64> {
        self.walk(k)
    }

    pub fn x_sites(&self) -> Vec<Vec<i64>> {
        (0..self.per_side).map(|k| self.x_site(k)).collect()
    }

    pub fn y_sites(&self) -> Vec<Vec<i64>> {
        (0..self.per_side).map(|k| self.y_site(k)).collect()
    }

    /// Number of `(x_i, y_i)` pairs that are grid neighbours: `L^(D-1)`.
    pub fn cut_pairs(&self) -> usize {
        self.side.pow(self.dimension as u32 - 1).min(self.per_side)
    }
}

/// Placement of the two input registers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "layout", rename_all = "lowercase")]
pub enum InputGeometry {
    /// `x_1 .. x_n` at sites `-n .. -1`, `y_1 .. y_n` at `0 .. n-1`, so
    /// `x_n` is next to `y_1`.
    Line { bits_per_side: usize },
    Grid(GridLayout),
}

impl InputGeometry {
    pub fn per_side(&self) -> usize {
        match self {
            InputGeometry::Line { bits_per_side } => *bits_per_side,
            InputGeometry::Grid(g) => g.per_side,
        }
    }

    pub fn dimension(&self) -> usize {
        match self {
            InputGeometry::Line { .. } => 1,
            InputGeometry::Grid(g) => g.dimension,
        }
    }

    pub fn x_sites(&self) -> Vec<Vec<i64>> {
        match self {
            InputGeometry::Line { bits_per_side } => {
                let n = *bits_per_side as i64;
                (0..n).map(|k| vec![k - n]).collect()
            }
            InputGeometry::Grid(g) => g.x_sites(),
        }
    }

    pub fn y_sites(&self) -> Vec<Vec<i64>> {
        match self {
            InputGeometry::Line { bits_per_side } => (0..*bits_per_side as i64).map(|k| vec![k]).collect(),
            InputGeometry::Grid(g) => g.y_sites(),
        }
    }

    pub fn cut_pairs(&self) -> usize {
        match self {
            InputGeometry::Line { .. } => 1,
            InputGeometry::Grid(g) => g.cut_pairs(),
        }
    }
}

/// Whether a site lies on the `x` side of the cut.
#[inline]
pub fn is_x_site(site: &[i64]) -> bool {
    site[0] < 0
}

/// Bits of both registers on a grid layout.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridInput {
    pub layout: GridLayout,
    pub x: Vec<bool>,
    pub y: Vec<bool>,
}

impl GridInput {
    pub fn new(layout: GridLayout, x: Vec<bool>, y: Vec<bool>) -> Result<Self> {
        if x.len() != layout.per_side || y.len() != layout.per_side {
            return Err(domain(format!(
                "registers of {} and {} bits for a layout of {} sites per side",
                x.len(),
                y.len(),
                layout.per_side
            )));
        }
        Ok(Self { layout, x, y })
    }
}
