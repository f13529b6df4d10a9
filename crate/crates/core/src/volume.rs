//! Volume lower bounds from precisely invariant collars and balls, and the
//! holonomy-killing search behind the bounds for groups with high-order
//! torsion.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::{Error, Result, C64};

/// A collar about a simple axis and its stabilizer data.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TubeSpec {
    /// Order of the elliptic rotating about the axis (1 = none).
    pub p: u32,
    pub tau: f64,
    pub r: f64,
    pub has_involution: bool,
}

/// πτ sinh²(r)/(2p), halved again when an involution swaps the ends.
pub fn tube_volume(spec: &TubeSpec) -> Result<f64> {
    if spec.p == 0 || !(spec.tau > 0.0) || !(spec.r >= 0.0) {
        return Err(Error::InvalidInput(format!("invalid tube {spec:?}")));
    }
    let v = PI * spec.tau * spec.r.sinh().powi(2) / (2.0 * spec.p as f64);
    Ok(if spec.has_involution { v / 2.0 } else { v })
}

/// π(sinh 2r − 2r)/|stabilizer| for a precisely invariant ball of radius r.
pub fn ball_volume_bound(r: f64, stabilizer_order: u32) -> Result<f64> {
    if !(r > 0.0) || stabilizer_order == 0 {
        return Err(Error::InvalidInput("radius and order must be positive".into()));
    }
    Ok(PI * ((2.0 * r).sinh() - 2.0 * r) / stabilizer_order as f64)
}

/// Translation-length threshold below which holonomy can be killed.
pub fn c_p(p: u32) -> Result<f64> {
    match p {
        0 => Err(Error::InvalidInput("p must be positive".into())),
        1 => Ok(2.97),
        2 => Ok(1.91),
        _ => Ok(3f64.sqrt() * PI / p as f64),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HolonomyKill {
    pub m: u32,
    pub n: u32,
    /// |4 sinh²(m(τ+iθ)/2 + inπ/p)|.
    pub value: f64,
    /// 4πτ/(√3 p).
    pub bound: f64,
}

/// Value of |β(f^m g^n)| for f of complex length τ + iθ and g the primitive
/// order-p rotation about the same axis.
pub fn holonomy_value(tau: f64, theta: f64, p: u32, m: u32, n: u32) -> f64 {
    let w = C64::new(m as f64 * tau / 2.0, m as f64 * theta / 2.0 + n as f64 * PI / p as f64);
    (4.0 * w.sinh().powu(2)).norm()
}

/// Minimizes over m ∈ [1, m_max] and n ∈ [0, 2p − 1]; the default
/// m_max is ⌈c_p/τ⌉ + 8. Fails if the guaranteed bound is not met.
pub fn kill_holonomy(tau: f64, theta: f64, p: u32, m_max: Option<u32>) -> Result<HolonomyKill> {
    let cp = c_p(p)?;
    if !(tau > 0.0 && tau <= cp) {
        return Err(Error::InvalidInput(format!("τ = {tau} outside (0, c_p = {cp}]")));
    }
    let m_max = m_max.unwrap_or((cp / tau).ceil() as u32 + 8);
    let bound = 4.0 * PI * tau / (3f64.sqrt() * p as f64);
    let mut best = HolonomyKill { m: 0, n: 0, value: f64::INFINITY, bound };
    for m in 1..=m_max {
        for n in 0..2 * p {
            let v = holonomy_value(tau, theta, p, m, n);
            if v < best.value {
                best = HolonomyKill { m, n, value: v, bound };
            }
        }
    }
    if best.value > bound {
        return Err(Error::BoundViolated(format!(
            "τ = {tau}, θ = {theta}, p = {p}: best {:.6} at (m, n) = ({}, {}) exceeds {bound:.6} with m ≤ {m_max}",
            best.value, best.m, best.n
        )));
    }
    Ok(best)
}

/// The lattice form of the same search: minimizes |m(τ+iθ) + 2πin/p|², the
/// squared complex length of f^m g^n, which Hermite's constant bounds by
/// 4πτ/(√3 p) exactly. |4 sinh²(L/2)| only agrees with |L|² to leading
/// order, and near τ = c_p with θ ≈ π/p (the hexagonal lattice) the
/// sinh² form overshoots for p ≥ 3.
pub fn kill_holonomy_length(tau: f64, theta: f64, p: u32, m_max: Option<u32>) -> Result<HolonomyKill> {
    let cp = c_p(p)?;
    if !(tau > 0.0 && tau <= cp) {
        return Err(Error::InvalidInput(format!("τ = {tau} outside (0, c_p = {cp}]")));
    }
    let m_max = m_max.unwrap_or((cp / tau).ceil() as u32 + 8);
    let bound = 4.0 * PI * tau / (3f64.sqrt() * p as f64);
    let step = 2.0 * PI / p as f64;
    let mut best = HolonomyKill { m: 0, n: 0, value: f64::INFINITY, bound };
    for m in 1..=m_max {
        // Reduce the holonomy mod 2π/p and try the two nearest shifts.
        let y = m as f64 * theta;
        let k = (y / step).floor();
        for shift in [k, k + 1.0] {
            let n = (-(shift as i64)).rem_euclid(p as i64) as u32;
            let v = (m as f64 * tau).powi(2) + (y - shift * step).powi(2);
            if v < best.value {
                best = HolonomyKill { m, n, value: v, bound };
            }
        }
    }
    if best.value > bound * (1.0 + 1e-12) {
        return Err(Error::BoundViolated(format!(
            "τ = {tau}, θ = {theta}, p = {p}: best |L|² {:.6} exceeds {bound:.6}",
            best.value
        )));
    }
    Ok(best)
}

/// Lower bound for cosh δ from Jørgensen's inequality:
/// cosh²δ ≥ |sinh(δ+iθ)|² ≥ 4(1 − |β|)/|β|².
pub fn collar_bound_from_beta(beta_abs: f64) -> Result<f64> {
    if !(beta_abs > 0.0 && beta_abs < 1.0) {
        return Err(Error::InvalidInput(format!("|β| = {beta_abs} gives no information")));
    }
    Ok((4.0 * (1.0 - beta_abs) / (beta_abs * beta_abs)).sqrt())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CollarOutcome {
    Bound(f64),
    Inconclusive(String),
}

/// The order-6 variant using |γ| ≥ 1 in place of Jørgensen: cosh δ ≥ 2/|β|.
/// When the axis and its translate share a fixed point (a parabolic is
/// present) no bound is claimed.
pub fn collar_bound_order6(beta_abs: f64, shares_fixed_point: bool) -> Result<CollarOutcome> {
    if !(beta_abs > 0.0) {
        return Err(Error::InvalidInput("|β| must be positive".into()));
    }
    if shares_fixed_point {
        return Ok(CollarOutcome::Inconclusive("parabolic case".into()));
    }
    Ok(CollarOutcome::Bound((2.0 / beta_abs).max(1.0)))
}

/// Case (i): πτ cos(2π/p)/(8p sin²(π/p)), the collar of radius δ₀(p,p)/2.
pub fn vest1(tau: f64, p: u32) -> f64 {
    let s = (PI / p as f64).sin();
    PI * tau * (2.0 * PI / p as f64).cos() / (8.0 * p as f64 * s * s)
}

/// Case (ii): √3/8 · √(1 − 4πτ/(p√3)) − πτ/(4p), clamped at 0 where the
/// Jørgensen step gives nothing.
pub fn vest2(tau: f64, p: u32) -> f64 {
    let p = p as f64;
    let x = 1.0 - 4.0 * PI * tau / (p * 3f64.sqrt());
    if x <= 0.0 {
        return 0.0;
    }
    (3f64.sqrt() / 8.0 * x.sqrt() - PI * tau / (4.0 * p)).max(0.0)
}

/// Case (i) at τ = c_p: π²√3 cos(2π/p)/(8p² sin²(π/p)).
pub fn case_i_bound(p: u32) -> Result<f64> {
    Ok(vest1(c_p(p)?, p))
}

/// Balanced bound for p ≥ 6: if τ ≥ τ* use vest1 (increasing), otherwise
/// vest2 (decreasing) with holonomy killed; the best threshold τ* ≤ c_p is
/// the crossing, or c_p when the curves do not cross.
pub fn volume_bound_high_torsion(p: u32) -> Result<(f64, f64)> {
    if p < 6 {
        return Err(Error::InvalidInput("p must be at least 6".into()));
    }
    let cp = c_p(p)?;
    let diff = |t: f64| vest1(t, p) - vest2(t, p);
    if diff(cp) <= 0.0 {
        return Ok((vest1(cp, p).min(vest2(cp, p)), cp));
    }
    let (mut lo, mut hi) = (0.0, cp);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if diff(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let t = 0.5 * (lo + hi);
    Ok((vest1(t, p).min(vest2(t, p)), t))
}
