//! Discrete families of boundary curves.
//!
//! Two constructions are provided. `generate_discrete_family` places sign
//! patterns over disjoint mollifier bumps of height delta, which realizes a
//! pairwise-delta-discrete subset of the class X_{m,b,delta}. `keyed_family`
//! rides signed high-frequency carriers on a shared pedestal; differences
//! between members then carry only odd harmonics of the carrier, which is
//! what the instability experiments need.

use super::{sup_distance, BoundaryCurve};
use crate::{Result, UclabError};

/// The standard mollifier bump exp(1 - 1/(1 - x^2)) on (-1, 1), normalized to
/// peak value 1.
pub fn bump_profile(x: f64) -> f64 {
    if x.abs() >= 1.0 {
        0.0
    } else {
        (1.0 - 1.0 / (1.0 - x * x)).exp()
    }
}

fn bump_profile_deriv(x: f64) -> f64 {
    if x.abs() >= 1.0 {
        0.0
    } else {
        let d = 1.0 - x * x;
        bump_profile(x) * (-2.0 * x / (d * d))
    }
}

/// sup |d^j/dx^j bump_profile| for j = 0..=m, estimated on a fine grid by
/// repeated centered differences.
fn bump_derivative_sups(m: usize) -> Vec<f64> {
    let n = 4096usize;
    let h = 2.0 / n as f64;
    let mut level: Vec<f64> = (0..=n).map(|i| bump_profile(-1.0 + i as f64 * h)).collect();
    let mut sups = vec![level.iter().fold(0.0f64, |a, b| a.max(b.abs()))];
    for _ in 1..=m {
        let mut next = Vec::with_capacity(level.len() - 2);
        for i in 1..level.len() - 1 {
            next.push((level[i + 1] - level[i - 1]) / (2.0 * h));
        }
        sups.push(next.iter().fold(0.0f64, |a, b| a.max(b.abs())));
        level = next;
    }
    sups
}

/// Smallest admissible bump half-width for the (m, b, delta) budget. The
/// C^m estimate is a max over derivative orders, so each order gets the full
/// budget: delta * sup|B^(j)| / hw^j <= b.
fn min_half_width(m: usize, b: f64, delta: f64) -> Result<f64> {
    if b <= 1.0 + delta {
        return Err(UclabError::invalid(format!(
            "family: C^m budget b = {b} below the amplitude bound {}",
            1.0 + delta
        )));
    }
    let sups = bump_derivative_sups(m);
    let mut hw: f64 = 0.0;
    for (j, sup) in sups.iter().enumerate().skip(1) {
        hw = hw.max((delta * sup / b).powf(1.0 / j as f64));
    }
    Ok(hw)
}

/// Number of disjoint bump slots the budget allows on [t_lo, t_hi], with the
/// count of sign patterns they generate. Bumps fill their slot: half-width
/// 2h on a slot pitch of 4h, adjacent supports touching only at endpoints.
pub fn max_family_size(m: usize, b: f64, delta: f64, span: f64) -> Result<(usize, u128)> {
    let hw = min_half_width(m, b, delta)?;
    let k = (span / (2.05 * hw)).floor() as usize;
    let count = if k >= 127 { u128::MAX } else { 1u128 << k };
    Ok((k, count))
}

/// Builds `target_count` curves in X_{m,b,delta}, pairwise d0-distance >=
/// delta, by sign patterns over K disjoint bumps. Pairwise distances are
/// verified before returning.
pub fn generate_discrete_family(
    m: usize,
    b: f64,
    delta: f64,
    target_count: usize,
    t_lo: f64,
    t_hi: f64,
) -> Result<Vec<BoundaryCurve>> {
    if target_count == 0 {
        return Err(UclabError::invalid("family: target_count must be positive"));
    }
    let span = t_hi - t_lo;
    let (k, achievable) = max_family_size(m, b, delta, span)?;
    if (target_count as u128) > achievable {
        return Err(UclabError::invalid(format!(
            "family: target_count {target_count} unreachable; {k} slots allow at most {achievable}"
        )));
    }
    // slot pitch 4h with bump half-width 2h (the slot-filling layout)
    let h = span / (4.0 * k.max(1) as f64);
    let centers: Vec<f64> = (0..k).map(|i| t_lo + (4 * i + 2) as f64 * h).collect();

    // sample grid aligned with the bump centers so the pairwise sup is
    // attained exactly at the peaks
    let per_slot = (256 / (4 * k.max(1)) + 1).max(2);
    let grid_n = 4 * k.max(1) * per_slot;
    let mut family = Vec::with_capacity(target_count);
    for pattern in 0..target_count as u128 {
        let centers = centers.clone();
        let bits: Vec<bool> = (0..k).map(|i| pattern >> i & 1 == 1).collect();
        let bits_d = bits.clone();
        let centers_d = centers.clone();
        let hw = 1.96 * h; // strictly disjoint supports
        let curve = BoundaryCurve::from_analytic(
            t_lo,
            t_hi,
            m,
            b,
            delta,
            move |t| {
                let mut s = 1.0;
                for (c, &on) in centers.iter().zip(&bits) {
                    if on {
                        s += delta * bump_profile((t - c) / hw);
                    }
                }
                s
            },
            move |t| {
                let mut ds = 0.0;
                for (c, &on) in centers_d.iter().zip(&bits_d) {
                    if on {
                        ds += delta * bump_profile_deriv((t - c) / hw) / hw;
                    }
                }
                ds
            },
            grid_n,
        )?;
        family.push(curve);
    }

    // verify pairwise discreteness on a dense grid before returning
    for i in 0..family.len() {
        for j in i + 1..family.len() {
            let d = sup_distance(&family[i], &family[j])?;
            if d < delta * (1.0 - 1e-9) {
                return Err(UclabError::Invariant(format!(
                    "family: pair ({i}, {j}) at distance {d} < delta = {delta}"
                )));
            }
        }
    }
    Ok(family)
}

/// Calibrated threshold: the largest delta for which the bump construction
/// still reaches `target_count` members (bisection; monotone in delta).
pub fn epsilon0(m: usize, b: f64, target_count: usize, span: f64) -> f64 {
    let reaches = |delta: f64| -> bool {
        max_family_size(m, b, delta, span)
            .map(|(_, c)| c >= target_count as u128)
            .unwrap_or(false)
    };
    if !reaches(1e-9) {
        return 0.0;
    }
    let (mut lo, mut hi) = (1e-9, b.max(1.0));
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if reaches(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Smooth plateau envelope: 1 on the middle half of (-1, 1), falling to 0 at
/// the edges with C-infinity joins.
fn plateau(x: f64) -> f64 {
    let a = x.abs();
    if a >= 1.0 {
        0.0
    } else if a <= 0.5 {
        1.0
    } else {
        // smoothstep of infinite order via the exp(-1/x) partition
        let up = |y: f64| if y <= 0.0 { 0.0 } else { (-1.0 / y).exp() };
        let t = (1.0 - a) / 0.5;
        up(t) / (up(t) + up(1.0 - t))
    }
}

fn plateau_deriv(x: f64) -> f64 {
    let h = 1e-6;
    (plateau(x + h) - plateau(x - h)) / (2.0 * h)
}

/// Frequency-keyed family: members share the pedestal `1 + (amp/2) sum_k S_k`
/// and differ by the slot signs of the carrier `sin(omega (t - t_lo))`:
///
/// `s_j = 1 + (amp/2) sum_k S_k(t) (1 + sigma_jk sin(omega (t - t_lo)))`.
///
/// Any two members differ by a pure carrier modulation on the slots where
/// their signs disagree, so pairwise d0 ~ amp while the difference carries no
/// low-frequency content. `amp` should exceed the target discreteness delta
/// by a small margin so the sampled sup clears it.
pub fn keyed_family(
    amp: f64,
    n_slots: usize,
    omega: f64,
    m: usize,
    b: f64,
    t_lo: f64,
    t_hi: f64,
    count: usize,
    grid_n: usize,
) -> Result<Vec<BoundaryCurve>> {
    if n_slots == 0 || count == 0 {
        return Err(UclabError::invalid("keyed_family: need slots and count"));
    }
    if n_slots < 127 && (count as u128) > (1u128 << n_slots) {
        return Err(UclabError::invalid(format!(
            "keyed_family: {n_slots} slots allow at most {} members",
            1u128 << n_slots
        )));
    }
    let span = t_hi - t_lo;
    let slot_w = span / n_slots as f64;
    let centers: Vec<f64> = (0..n_slots)
        .map(|i| t_lo + (i as f64 + 0.5) * slot_w)
        .collect();
    let hw = 0.48 * slot_w; // strictly disjoint supports

    let mut family = Vec::with_capacity(count);
    for pattern in 0..count as u128 {
        let signs: Vec<f64> = (0..n_slots)
            .map(|i| if pattern >> i & 1 == 1 { 1.0 } else { -1.0 })
            .collect();
        let (c1, s1) = (centers.clone(), signs.clone());
        let (c2, s2) = (centers.clone(), signs);
        let curve = BoundaryCurve::from_analytic(
            t_lo,
            t_hi,
            m,
            b,
            amp,
            move |t| {
                let carrier = (omega * (t - t_lo)).sin();
                let mut v = 1.0;
                for (c, sg) in c1.iter().zip(&s1) {
                    let env = plateau((t - c) / hw);
                    if env > 0.0 {
                        v += 0.5 * amp * env * (1.0 + sg * carrier);
                    }
                }
                v
            },
            move |t| {
                let carrier = (omega * (t - t_lo)).sin();
                let dcarrier = omega * (omega * (t - t_lo)).cos();
                let mut v = 0.0;
                for (c, sg) in c2.iter().zip(&s2) {
                    let env = plateau((t - c) / hw);
                    let denv = plateau_deriv((t - c) / hw) / hw;
                    if env > 0.0 || denv != 0.0 {
                        v += 0.5 * amp * (denv * (1.0 + sg * carrier) + env * sg * dcarrier);
                    }
                }
                v
            },
            grid_n,
        )?;
        family.push(curve);
    }
    Ok(family)
}
