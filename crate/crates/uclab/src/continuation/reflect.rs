//! Time reflection extending a solution from (0, 1) to (0, 2).

use crate::pde::{Grid, HeatField};
use crate::{Result, UclabError};

/// Extends u past t = 1 by `u_bar(x, t) = -3 u(x, 2 - t) + 4 u(x, 3/2 - t/2)`.
///
/// The second argument needs u at half-steps of the output grid, so the
/// output is sampled with twice the input time step: an odd number of input
/// steps cannot place t = 1 on the output grid and is rejected.
pub fn reflect_extend(u: &HeatField) -> Result<HeatField> {
    let g = &u.grid;
    if g.dim() != 1 {
        return Err(UclabError::invalid("reflect_extend: 1D fields only"));
    }
    if (g.t_lo, g.t_hi) != (0.0, 1.0) {
        return Err(UclabError::invalid("reflect_extend: field must span (0, 1) in time"));
    }
    if g.nt % 2 != 0 {
        return Err(UclabError::invalid(
            "reflect_extend: grid not refinable to place t = 1 exactly (odd step count)",
        ));
    }
    let nt_out = g.nt; // step 2k over (0, 2)
    let out_grid = Grid::new_1d(g.x_lo, g.x_hi, g.nx, 0.0, 2.0, nt_out)?;

    let nxp = g.nx + 1;
    let mut values = Vec::with_capacity((nt_out + 1) * nxp);
    for j in 0..=nt_out {
        // output level j sits at t = 2 j / nt = (2j) k
        if 2 * j <= g.nt {
            values.extend_from_slice(u.slice_t(2 * j));
        } else {
            // t in (1, 2): 2 - t = (nt - 2j + nt) k ... in input indices:
            // t = 2j k, 2 - t has index nt_in - (2j - nt_in) = 2 nt - 2j
            let idx_a = 2 * g.nt - 2 * j;
            // 3/2 - t/2 has input index (3 nt / 2) - j; nt even keeps it integral
            let idx_b = 3 * g.nt / 2 - j;
            for i in 0..nxp {
                values.push(-3.0 * u.slice_t(idx_a)[i] + 4.0 * u.slice_t(idx_b)[i]);
            }
        }
    }
    HeatField::new(out_grid, values, u.provenance)
}
