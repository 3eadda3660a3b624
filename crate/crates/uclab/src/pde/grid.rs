//! Space-time grid descriptors for 1D and 2D rectangles.

use crate::{Result, UclabError};
use serde::{Deserialize, Serialize};

/// Uniform space-time grid. `ny = 0` marks a 1D grid; otherwise the spatial
/// domain is the rectangle `[x_lo, x_hi] x [y_lo, y_hi]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub x_lo: f64,
    pub x_hi: f64,
    /// number of spatial intervals in x (nx + 1 nodes)
    pub nx: usize,
    pub y_lo: f64,
    pub y_hi: f64,
    /// number of spatial intervals in y; 0 for 1D grids
    pub ny: usize,
    pub t_lo: f64,
    pub t_hi: f64,
    /// number of time steps (nt + 1 levels)
    pub nt: usize,
}

impl Grid {
    pub fn new_1d(x_lo: f64, x_hi: f64, nx: usize, t_lo: f64, t_hi: f64, nt: usize) -> Result<Self> {
        let g = Grid { x_lo, x_hi, nx, y_lo: 0.0, y_hi: 0.0, ny: 0, t_lo, t_hi, nt };
        g.validate()?;
        Ok(g)
    }

    #[allow(clippy::too_many_arguments)]
    pub fn new_2d(
        x_lo: f64,
        x_hi: f64,
        nx: usize,
        y_lo: f64,
        y_hi: f64,
        ny: usize,
        t_lo: f64,
        t_hi: f64,
        nt: usize,
    ) -> Result<Self> {
        let g = Grid { x_lo, x_hi, nx, y_lo, y_hi, ny, t_lo, t_hi, nt };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.x_hi > self.x_lo) || self.nx < 2 {
            return Err(UclabError::invalid("grid: need x_hi > x_lo and nx >= 2"));
        }
        if self.ny > 0 && (!(self.y_hi > self.y_lo) || self.ny < 2) {
            return Err(UclabError::invalid("grid: need y_hi > y_lo and ny >= 2"));
        }
        if !(self.t_hi > self.t_lo) || self.nt < 1 {
            return Err(UclabError::invalid("grid: need t_hi > t_lo and nt >= 1"));
        }
        if !(self.hx() > 0.0 && self.k() > 0.0) {
            return Err(UclabError::invalid("grid: steps must be positive"));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        if self.ny == 0 {
            1
        } else {
            2
        }
    }

    pub fn hx(&self) -> f64 {
        (self.x_hi - self.x_lo) / self.nx as f64
    }

    pub fn hy(&self) -> f64 {
        if self.ny == 0 {
            0.0
        } else {
            (self.y_hi - self.y_lo) / self.ny as f64
        }
    }

    pub fn k(&self) -> f64 {
        (self.t_hi - self.t_lo) / self.nt as f64
    }

    /// k / hx^2, recorded for diagnostics (the schemes are implicit).
    pub fn parabolic_ratio(&self) -> f64 {
        self.k() / (self.hx() * self.hx())
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x_lo + i as f64 * self.hx()
    }

    pub fn y(&self, j: usize) -> f64 {
        self.y_lo + j as f64 * self.hy()
    }

    pub fn t(&self, j: usize) -> f64 {
        self.t_lo + j as f64 * self.k()
    }

    /// Nodes per time level.
    pub fn space_len(&self) -> usize {
        if self.ny == 0 {
            self.nx + 1
        } else {
            (self.nx + 1) * (self.ny + 1)
        }
    }
}
