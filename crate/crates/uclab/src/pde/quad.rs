//! Midpoint quadrature of grid slices over balls, with partial-cell weighting
//! at the sphere boundary.

use super::{Grid, HeatField};

/// Weight of the cell centered at distance `r` from the ball center: the
/// approximate fraction of the cell inside the ball of radius `rho`, resolved
/// by subsampling cells the sphere crosses.
fn cell_fraction_1d(xc: f64, h: f64, center: f64, rho: f64) -> f64 {
    let lo = (xc - 0.5 * h - center).abs().min((xc + 0.5 * h - center).abs());
    let hi = (xc - 0.5 * h - center).abs().max((xc + 0.5 * h - center).abs());
    let inside_lo = if (xc - 0.5 * h - center) * (xc + 0.5 * h - center) < 0.0 { 0.0 } else { lo };
    if hi <= rho {
        return 1.0;
    }
    if inside_lo >= rho {
        return 0.0;
    }
    // crossing cell: exact in 1D
    let a = xc - 0.5 * h;
    let b = xc + 0.5 * h;
    let lo_clip = a.max(center - rho);
    let hi_clip = b.min(center + rho);
    ((hi_clip - lo_clip) / h).clamp(0.0, 1.0)
}

fn cell_fraction_2d(xc: f64, yc: f64, hx: f64, hy: f64, cx: f64, cy: f64, rho: f64) -> f64 {
    let corners = [
        (xc - 0.5 * hx, yc - 0.5 * hy),
        (xc + 0.5 * hx, yc - 0.5 * hy),
        (xc - 0.5 * hx, yc + 0.5 * hy),
        (xc + 0.5 * hx, yc + 0.5 * hy),
    ];
    let inside = corners
        .iter()
        .filter(|(x, y)| ((x - cx).powi(2) + (y - cy).powi(2)).sqrt() <= rho)
        .count();
    if inside == 4 {
        return 1.0;
    }
    if inside == 0 {
        // the cell may still clip the ball if rho is smaller than a cell
        let d = ((xc - cx).powi(2) + (yc - cy).powi(2)).sqrt();
        if d > rho + 0.5 * (hx + hy) {
            return 0.0;
        }
    }
    // boundary cell: 4x4 subsampling
    let mut hits = 0;
    for sx in 0..4 {
        for sy in 0..4 {
            let x = xc + hx * ((sx as f64 + 0.5) / 4.0 - 0.5);
            let y = yc + hy * ((sy as f64 + 0.5) / 4.0 - 0.5);
            if (x - cx).powi(2) + (y - cy).powi(2) <= rho * rho {
                hits += 1;
            }
        }
    }
    hits as f64 / 16.0
}

/// Integral of u(., t_j)^2 over the ball B_rho(center) for a 1D or 2D field.
pub fn ball_integral_sq(field: &HeatField, j: usize, center: &[f64], rho: f64) -> f64 {
    let g = &field.grid;
    if g.dim() == 1 {
        let h = g.hx();
        let mut acc = 0.0;
        for i in 0..=g.nx {
            let w = cell_fraction_1d(g.x(i), h, center[0], rho);
            if w > 0.0 {
                let v = field.at_1d(i, j);
                acc += v * v * w * h;
            }
        }
        acc
    } else {
        let (hx, hy) = (g.hx(), g.hy());
        let mut acc = 0.0;
        for iy in 0..=g.ny {
            for ix in 0..=g.nx {
                let w = cell_fraction_2d(g.x(ix), g.y(iy), hx, hy, center[0], center[1], rho);
                if w > 0.0 {
                    let v = field.at_2d(ix, iy, j);
                    acc += v * v * w * hx * hy;
                }
            }
        }
        acc
    }
}

/// Integral of u^2 over B_rho(center) x (t_a, t_b) (trapezoidal in time).
pub fn cylinder_integral_sq(field: &HeatField, center: &[f64], rho: f64, t_a: f64, t_b: f64) -> f64 {
    let g = &field.grid;
    let k = g.k();
    let mut acc = 0.0;
    for j in 0..=g.nt {
        let t = g.t(j);
        if t < t_a - 1e-14 || t > t_b + 1e-14 {
            continue;
        }
        let w = if (t - t_a).abs() < 1e-14 || (t - t_b).abs() < 1e-14 { 0.5 } else { 1.0 };
        acc += w * ball_integral_sq(field, j, center, rho) * k;
    }
    acc
}

/// Sup of |u(., t_j)| over the ball B_rho(center).
pub fn ball_sup(field: &HeatField, j: usize, center: &[f64], rho: f64) -> f64 {
    let g = &field.grid;
    let mut m = 0.0f64;
    if g.dim() == 1 {
        for i in 0..=g.nx {
            if (g.x(i) - center[0]).abs() <= rho {
                m = m.max(field.at_1d(i, j).abs());
            }
        }
    } else {
        for iy in 0..=g.ny {
            for ix in 0..=g.nx {
                if (g.x(ix) - center[0]).powi(2) + (g.y(iy) - center[1]).powi(2) <= rho * rho {
                    m = m.max(field.at_2d(ix, iy, j).abs());
                }
            }
        }
    }
    m
}

/// Nearest time index of `t` on the field's grid.
pub fn time_index(grid: &Grid, t: f64) -> usize {
    (((t - grid.t_lo) / grid.k()).round() as isize).clamp(0, grid.nt as isize) as usize
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pde::Provenance;

    #[test]
    fn constant_field_ball_measure_1d() {
        let grid = Grid::new_1d(-1.0, 1.0, 400, 0.0, 1.0, 1).unwrap();
        let f = HeatField::from_fn_1d(grid, Provenance::Analytic, |_, _| 2.0).unwrap();
        let got = ball_integral_sq(&f, 0, &[0.1], 0.5);
        assert!((got - 4.0 * 1.0).abs() < 1e-3, "got {got}");
    }

    #[test]
    fn constant_field_disk_measure_2d() {
        let grid = Grid::new_2d(-1.0, 1.0, 160, -1.0, 1.0, 160, 0.0, 1.0, 1).unwrap();
        let f = HeatField::from_fn_2d(grid, Provenance::Analytic, |_, _, _| 1.0).unwrap();
        let got = ball_integral_sq(&f, 0, &[0.0, 0.0], 0.7);
        let exact = std::f64::consts::PI * 0.49;
        assert!((got - exact).abs() < 3e-3 * exact, "got {got} want {exact}");
    }
}
