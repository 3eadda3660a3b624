//! Space-time sample grids of solutions, with CSV and binary export.

use super::Grid;
use crate::{Result, UclabError};
use serde::{Deserialize, Serialize};
use std::io::Write;

/// Where the samples came from; kept so cross-checks can refuse to compare a
/// field against itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Provenance {
    Solver,
    Analytic,
    Oracle,
}

/// A sampled solution u on a [`Grid`]. 1D layout is `values[j*(nx+1) + i]`,
/// 2D layout is `values[(j*(ny+1) + iy)*(nx+1) + ix]` with `j` the time level.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HeatField {
    pub grid: Grid,
    pub values: Vec<f64>,
    pub provenance: Provenance,
}

impl HeatField {
    pub fn new(grid: Grid, values: Vec<f64>, provenance: Provenance) -> Result<Self> {
        let expect = (grid.nt + 1) * grid.space_len();
        if values.len() != expect {
            return Err(UclabError::invalid(format!(
                "field: {} values for a grid holding {}",
                values.len(),
                expect
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(UclabError::Invariant("field: non-finite value".into()));
        }
        Ok(HeatField { grid, values, provenance })
    }

    /// Samples an analytic 1D solution u(x, t) on `grid`.
    pub fn from_fn_1d(grid: Grid, provenance: Provenance, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        assert_eq!(grid.dim(), 1);
        let mut values = Vec::with_capacity((grid.nt + 1) * (grid.nx + 1));
        for j in 0..=grid.nt {
            let t = grid.t(j);
            for i in 0..=grid.nx {
                values.push(f(grid.x(i), t));
            }
        }
        HeatField::new(grid, values, provenance)
    }

    /// Samples an analytic 2D solution u(x, y, t) on `grid`.
    pub fn from_fn_2d(
        grid: Grid,
        provenance: Provenance,
        f: impl Fn(f64, f64, f64) -> f64,
    ) -> Result<Self> {
        assert_eq!(grid.dim(), 2);
        let mut values = Vec::with_capacity((grid.nt + 1) * grid.space_len());
        for j in 0..=grid.nt {
            let t = grid.t(j);
            for iy in 0..=grid.ny {
                let y = grid.y(iy);
                for ix in 0..=grid.nx {
                    values.push(f(grid.x(ix), y, t));
                }
            }
        }
        HeatField::new(grid, values, provenance)
    }

    pub fn at_1d(&self, i: usize, j: usize) -> f64 {
        self.values[j * (self.grid.nx + 1) + i]
    }

    pub fn at_2d(&self, ix: usize, iy: usize, j: usize) -> f64 {
        let nxp = self.grid.nx + 1;
        let nyp = self.grid.ny + 1;
        self.values[(j * nyp + iy) * nxp + ix]
    }

    /// Time slice as a contiguous block.
    pub fn slice_t(&self, j: usize) -> &[f64] {
        let n = self.grid.space_len();
        &self.values[j * n..(j + 1) * n]
    }

    pub fn linf(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// Writes CSV rows `x,t,u` (1D) or `x,y,t,u` (2D).
    pub fn write_csv<W: Write>(&self, w: &mut W) -> Result<()> {
        if self.grid.dim() == 1 {
            writeln!(w, "x,t,u")?;
            for j in 0..=self.grid.nt {
                for i in 0..=self.grid.nx {
                    writeln!(w, "{},{},{}", self.grid.x(i), self.grid.t(j), self.at_1d(i, j))?;
                }
            }
        } else {
            writeln!(w, "x,y,t,u")?;
            for j in 0..=self.grid.nt {
                for iy in 0..=self.grid.ny {
                    for ix in 0..=self.grid.nx {
                        writeln!(
                            w,
                            "{},{},{},{}",
                            self.grid.x(ix),
                            self.grid.y(iy),
                            self.grid.t(j),
                            self.at_2d(ix, iy, j)
                        )?;
                    }
                }
            }
        }
        Ok(())
    }

    /// Compact binary block: one JSON header line, then row-major f64 LE.
    pub fn write_binary<W: Write>(&self, w: &mut W) -> Result<()> {
        let header = serde_json::json!({
            "grid": self.grid,
            "provenance": self.provenance,
            "len": self.values.len(),
            "layout": "row-major f64 le",
        });
        writeln!(w, "{}", header)?;
        for v in &self.values {
            w.write_all(&v.to_le_bytes())?;
        }
        Ok(())
    }
}
