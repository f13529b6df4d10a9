//! Hyperbolic and spherical trigonometry for groups generated by elliptics of
//! orders p, q, r: free-product criteria, axial distances, Margulis constants
//! of triangle configurations and inscribed disks.
//!
//! Triangle conventions: axes are numbered 1, 2, 3 and `V_ij` is the vertex
//! where axes i and j meet. [`TriangleAngles`] stores the angle at V12, V13
//! and V23 in that order; an angle of 0 is an ideal vertex.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use argmin::core::{CostFunction, Executor, State};
use argmin::solver::neldermead::NelderMead;
use serde::{Deserialize, Serialize};

use crate::tables::{self, MargulisRow};
use crate::{Error, Result, C64};

/// Order of an elliptic generator; `Infinite` is the parabolic limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Order {
    Finite(u32),
    Infinite,
}

impl Order {
    pub fn new(n: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidInput(format!("order {n} < 2")));
        }
        Ok(Order::Finite(n))
    }

    /// sin(π/n), with limit 0 at ∞.
    pub fn sin_pi(self) -> f64 {
        match self {
            Order::Finite(n) => (PI / n as f64).sin(),
            Order::Infinite => 0.0,
        }
    }

    /// cos(π/n), with limit 1 at ∞.
    pub fn cos_pi(self) -> f64 {
        match self {
            Order::Finite(n) => (PI / n as f64).cos(),
            Order::Infinite => 1.0,
        }
    }

    pub fn finite(self) -> Option<u32> {
        match self {
            Order::Finite(n) => Some(n),
            Order::Infinite => None,
        }
    }
}

impl FromStr for Order {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "∞" | "infinity" | "oo" => Ok(Order::Infinite),
            t => Order::new(
                t.parse()
                    .map_err(|_| Error::InvalidInput(format!("bad order {t:?}")))?,
            ),
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(n) => write!(f, "{n}"),
            Order::Infinite => write!(f, "inf"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EllipticOrders {
    pub p: Order,
    pub q: Order,
    pub r: Order,
}

impl EllipticOrders {
    pub fn finite(p: u32, q: u32, r: u32) -> Result<Self> {
        Ok(EllipticOrders { p: Order::new(p)?, q: Order::new(q)?, r: Order::new(r)? })
    }

    fn as_array(&self) -> [Order; 3] {
        [self.p, self.q, self.r]
    }

    fn finite_array(&self) -> Result<[u32; 3]> {
        let mut out = [0; 3];
        for (o, n) in out.iter_mut().zip(self.as_array()) {
            *o = n
                .finite()
                .ok_or_else(|| Error::InvalidInput("infinite order not allowed here".into()))?;
        }
        Ok(out)
    }
}

/// Angles at V12, V13, V23 (radians).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TriangleAngles {
    pub alpha: f64,
    pub beta_angle: f64,
    pub gamma_angle: f64,
}

impl TriangleAngles {
    pub fn new(alpha: f64, beta_angle: f64, gamma_angle: f64) -> Result<Self> {
        let t = TriangleAngles { alpha, beta_angle, gamma_angle };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        let a = self.as_array();
        if a.iter().any(|x| !x.is_finite() || *x < 0.0) {
            return Err(Error::InvalidInput(format!("bad angles {a:?}")));
        }
        if a.iter().sum::<f64>() >= PI - 1e-12 {
            return Err(Error::InvalidInput(format!("angle sum of {a:?} is not < π")));
        }
        Ok(())
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.alpha, self.beta_angle, self.gamma_angle]
    }

    /// Angle at V_ij (axes 0-based).
    fn at(&self, i: usize, j: usize) -> f64 {
        match (i.min(j), i.max(j)) {
            (0, 1) => self.alpha,
            (0, 2) => self.beta_angle,
            (1, 2) => self.gamma_angle,
            _ => unreachable!("bad vertex {i}{j}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MargulisMethod {
    GeneralFormula,
    IdealSymmetric,
    InscribedDisk,
    NumericOracle,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MargulisResult {
    pub value: f64,
    pub method: MargulisMethod,
    pub orders: EllipticOrders,
    pub angles: Option<TriangleAngles>,
    /// Spread of the three displacements at the optimum (oracle only).
    pub residual: Option<f64>,
}

// ---------------------------------------------------------------------------
// Free products and axial distances

/// λ_{p,q} and the second focus of the free-product ellipse
/// {|z| + |z − focus| < λ}; γ outside it gives a free product Z_p * Z_q.
pub fn free_product_ellipse(p: Order, q: Order) -> Result<(f64, C64)> {
    if p == Order::Finite(2) && q == Order::Finite(2) {
        return Err(Error::InvalidInput("p = q = 2 has no free-product ellipse".into()));
    }
    let (cp, cq) = (p.cos_pi(), q.cos_pi());
    let lambda = 4.0 * (cp + cq).powi(2) + 4.0 * (cp * cq + 1.0).powi(2);
    let focus = -4.0 * p.sin_pi().powi(2) * q.sin_pi().powi(2);
    Ok((lambda, C64::new(focus, 0.0)))
}

/// Whether γ lies on or outside the free-product ellipse.
pub fn outside_free_ellipse(p: Order, q: Order, gamma: C64) -> Result<bool> {
    let (lambda, focus) = free_product_ellipse(p, q)?;
    Ok(gamma.norm() + (gamma - focus).norm() >= lambda)
}

/// Cruder bound: |γ| ≥ 4(1 + cos(π/p)cos(π/q))² also gives a free product.
pub fn trivial_free_bound(p: Order, q: Order) -> f64 {
    4.0 * (1.0 + p.cos_pi() * q.cos_pi()).powi(2)
}

/// Sufficient isometric-circle criterion for Z_p * Z_q in the normalization
/// where ω scales the second generator; both sign cases must hold.
pub fn isometric_circle_free_test(p: u32, q: u32, omega: C64) -> Result<bool> {
    if omega.norm() >= 1.0 {
        return Err(Error::InvalidInput("need |ω| < 1".into()));
    }
    let (sp, cp) = (PI / p as f64).sin_cos();
    let (sq, cq) = (PI / q as f64).sin_cos();
    let ok = |sign: f64| (sq * cp + sign * omega * cq * sp).norm() + omega.norm() * sp <= sq;
    Ok(ok(1.0) && ok(-1.0))
}

/// γ of the isometric-circle normalization: (ω − 1/ω)² sin²(π/p) sin²(π/q).
pub fn gamma_from_omega(p: u32, q: u32, omega: C64) -> C64 {
    let s = (PI / p as f64).sin() * (PI / q as f64).sin();
    (omega - omega.inv()).powi(2) * s * s
}

/// Axial distance beyond which ⟨f, g⟩ is the free product Z_p * Z_q; attained
/// by the (p, q, ∞) triangle group.
pub fn delta_infinity(p: Order, q: Order) -> Result<f64> {
    if p == Order::Finite(2) && q == Order::Finite(2) {
        return Err(Error::InvalidInput("(2,2) has no free-product distance".into()));
    }
    let den = p.sin_pi() * q.sin_pi();
    if den == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(((p.cos_pi() * q.cos_pi() + 1.0) / den).acosh())
}

/// Minimal axial distance for elliptics of orders p, q ≥ 7.
pub fn delta_zero_high_order(p: Order, q: Order) -> Result<f64> {
    for o in [p, q] {
        if let Order::Finite(n) = o {
            if n < 7 {
                return Err(Error::InvalidInput(format!("order {n} < 7")));
            }
        }
    }
    if p == Order::Infinite && q == Order::Infinite {
        return Err(Error::InvalidInput("both orders infinite".into()));
    }
    Ok((1.0 / (2.0 * p.sin_pi() * q.sin_pi())).acosh())
}

// ---------------------------------------------------------------------------
// Triangle trigonometry

/// Lengths of the triangle's sides along axes 1, 2, 3 (∞ when an endpoint is
/// ideal), from cosh ℓ_C = (cos A cos B + cos C)/(sin A sin B).
pub fn triangle_edge_lengths(angles: &TriangleAngles) -> Result<[f64; 3]> {
    angles.validate()?;
    let mut out = [0.0; 3];
    // side on axis i joins V_ij and V_ik; the opposite vertex is V_jk
    for (i, o) in out.iter_mut().enumerate() {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        let (a, b, c) = (angles.at(i, j), angles.at(i, k), angles.at(j, k));
        if a == 0.0 && b == 0.0 {
            return Err(Error::InvalidInput(format!("side on axis {} has two ideal ends", i + 1)));
        }
        *o = if a == 0.0 || b == 0.0 {
            f64::INFINITY
        } else {
            ((a.cos() * b.cos() + c.cos()) / (a.sin() * b.sin())).acosh()
        };
    }
    Ok(out)
}

/// Radius of the inscribed disk.
pub fn inscribed_radius(angles: &TriangleAngles) -> Result<f64> {
    angles.validate()?;
    let [a, b, c] = angles.as_array().map(f64::cos);
    let num = a * a + b * b + c * c + 2.0 * a * b * c - 1.0;
    if num <= 0.0 {
        return Err(Error::InvalidInput("degenerate (non-hyperbolic) triangle".into()));
    }
    let t2 = num / (2.0 * (1.0 + a) * (1.0 + b) * (1.0 + c));
    Ok(t2.sqrt().atanh())
}

/// Translation length 2 arcsinh(sin(π/n) sinh d) of an order-n elliptic at a
/// point at distance d from its axis.
pub fn elliptic_displacement(n: u32, d: f64) -> f64 {
    2.0 * ((PI / n as f64).sin() * d.sinh()).asinh()
}

/// Hyperbolic area 2π(2g − 2 + N + Σ(1 − 1/m_j)) of a 2-orbifold.
pub fn orbifold_area(genus: u32, cusps: u32, cone_orders: &[u32]) -> Result<f64> {
    if cone_orders.iter().any(|&m| m < 2) {
        return Err(Error::InvalidInput("cone orders must be ≥ 2".into()));
    }
    let chi = 2.0 * genus as f64 - 2.0
        + cusps as f64
        + cone_orders.iter().map(|&m| 1.0 - 1.0 / m as f64).sum::<f64>();
    if chi <= 1e-12 {
        return Err(Error::InvalidInput("signature is not hyperbolic".into()));
    }
    Ok(2.0 * PI * chi)
}

// ---------------------------------------------------------------------------
// Margulis constants

fn ks(orders: &[u32; 3]) -> [f64; 3] {
    orders.map(|n| (PI / n as f64).sin())
}

/// Closed formula with axis `j` as the middle axis. None when its side is
/// infinite.
fn margulis_formula_at(orders: &[u32; 3], angles: &TriangleAngles, j: usize) -> Option<f64> {
    let (i, k) = ((j + 2) % 3, (j + 1) % 3);
    let (aij, ajk) = (angles.at(i, j), angles.at(j, k));
    if aij == 0.0 || ajk == 0.0 {
        return None;
    }
    let kk = ks(orders);
    let ch = (aij.cos() * ajk.cos() + angles.at(i, k).cos()) / (aij.sin() * ajk.sin());
    // θ_ij: angle at V_ij between side j and the locus k_i sinh d_i = k_j sinh d_j
    let cot1 = (kk[j] / kk[i] + aij.cos()) / aij.sin();
    let cot3 = (kk[j] / kk[k] + ajk.cos()) / ajk.sin();
    let num = kk[j] * kk[j] * (ch * ch - 1.0);
    let den = 1.0 - ch * ch + cot1 * cot1 + cot3 * cot3 + 2.0 * cot1 * cot3 * ch;
    if den <= 0.0 {
        return Some(f64::NAN);
    }
    Some(2.0 * (num / den).sqrt().asinh())
}

fn solve3(g: &[[f64; 3]; 3], b: &[f64; 3]) -> Option<[f64; 3]> {
    let det = |m: &[[f64; 3]; 3]| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let d = det(g);
    if d.abs() < 1e-300 {
        return None;
    }
    let mut out = [0.0; 3];
    for (c, o) in out.iter_mut().enumerate() {
        let mut m = *g;
        for r in 0..3 {
            m[r][c] = b[r];
        }
        *o = det(&m) / d;
    }
    Some(out)
}

fn gram_matrix(angles: &TriangleAngles) -> [[f64; 3]; 3] {
    let g = |i, j| -angles.at(i, j).cos();
    [[1.0, g(0, 1), g(0, 2)], [g(0, 1), 1.0, g(1, 2)], [g(0, 2), g(1, 2), 1.0]]
}

/// Gram-matrix form: sinh²(m/2) = −1/(bᵀG⁻¹b) with G the Gram matrix of the
/// side normals and b_i = 1/sin(π/n_i). Valid with ideal vertices.
pub fn margulis_gram(orders: &[u32; 3], angles: &TriangleAngles) -> Result<f64> {
    angles.validate()?;
    let b = ks(orders).map(|k| 1.0 / k);
    let g = gram_matrix(angles);
    let x = solve3(&g, &b).ok_or_else(|| Error::InvalidInput("singular Gram matrix".into()))?;
    let q: f64 = b.iter().zip(x).map(|(u, v)| u * v).sum();
    if q >= 0.0 {
        return Err(Error::InvalidInput("non-positive Margulis denominator".into()));
    }
    Ok(2.0 * (-1.0 / q).sqrt().asinh())
}

/// Margulis constant of the triangle configuration via the closed edge
/// formula. Every labeling with a finite middle side is evaluated and the
/// results must agree to 1e−8; with fewer than two finite vertices the Gram
/// form is used.
pub fn margulis_triangle(orders: &EllipticOrders, angles: &TriangleAngles) -> Result<MargulisResult> {
    angles.validate()?;
    let n = orders.finite_array()?;
    let vals: Vec<f64> = (0..3).filter_map(|j| margulis_formula_at(&n, angles, j)).collect();
    let value = if vals.is_empty() {
        if angles.as_array().iter().all(|a| *a == 0.0) {
            return margulis_ideal(orders).map(|r| MargulisResult { angles: Some(*angles), ..r });
        }
        margulis_gram(&n, angles)?
    } else {
        if vals.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("non-positive Margulis denominator".into()));
        }
        let (lo, hi) = vals.iter().fold((f64::MAX, f64::MIN), |(l, h), v| (l.min(*v), h.max(*v)));
        if hi - lo > 1e-8 {
            return Err(Error::Certification(format!("labelings disagree: {vals:?}")));
        }
        vals[0]
    };
    Ok(MargulisResult {
        value,
        method: MargulisMethod::GeneralFormula,
        orders: *orders,
        angles: Some(*angles),
        residual: None,
    })
}

/// All-ideal triangle: 1/sinh²(m/2) = Σ_{i<j} 1/(sin(π/n_i) sin(π/n_j)).
pub fn margulis_ideal(orders: &EllipticOrders) -> Result<MargulisResult> {
    let k = ks(&orders.finite_array()?);
    let s = 1.0 / (k[0] * k[1]) + 1.0 / (k[0] * k[2]) + 1.0 / (k[1] * k[2]);
    Ok(MargulisResult {
        value: 2.0 * (1.0 / s).sqrt().asinh(),
        method: MargulisMethod::IdealSymmetric,
        orders: *orders,
        angles: None,
        residual: None,
    })
}

fn near_int(x: f64) -> Option<u32> {
    let r = x.round();
    ((x - r).abs() < 1e-7 && (1.0..1e6).contains(&r)).then_some(r as u32)
}

/// Membership in the six angle families for which three order-2 rotations
/// with coplanar axes generate a discrete group.
pub fn admissible_222_angles(angles: &TriangleAngles) -> bool {
    if angles.validate().is_err() {
        return false;
    }
    let a = angles.as_array();
    if a.iter().any(|x| *x <= 0.0) {
        return false;
    }
    // k·π/x for the family's numerator k
    let den = |x: f64, k: f64| near_int(k * PI / x);
    let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    perms.iter().any(|p| {
        let (x, y, z) = (a[p[0]], a[p[1]], a[p[2]]);
        let fam1 = matches!((den(x, 1.0), den(y, 1.0), den(z, 1.0)),
            (Some(l), Some(m), Some(n)) if l >= 2 && m >= 2 && n >= 2
                && 1.0 / (l as f64) + 1.0 / (m as f64) + 1.0 / (n as f64) < 1.0);
        let fam2 = matches!((den(x, 2.0), den(y, 1.0)),
            (Some(l), Some(m)) if (y - z).abs() < 1e-9 && m >= 2
                && 1.0 / (l as f64) + 1.0 / (m as f64) < 0.5);
        let fam3 = (y - PI / 2.0).abs() < 1e-9
            && matches!((den(x, 2.0), den(z, 1.0)), (Some(l), Some(l2)) if l == l2 && l >= 7);
        let fam4 = (y - PI / 3.0).abs() < 1e-9
            && matches!((den(x, 3.0), den(z, 1.0)), (Some(l), Some(l2)) if l == l2 && l >= 7);
        let fam5 = (y - z).abs() < 1e-9
            && matches!((den(x, 4.0), den(y, 1.0)), (Some(l), Some(l2)) if l == l2 && l >= 7);
        let fam6 = (x - 2.0 * PI / 7.0).abs() < 1e-9
            && (y - PI / 3.0).abs() < 1e-9
            && (z - PI / 7.0).abs() < 1e-9;
        fam1 || fam2 || fam3 || fam4 || fam5 || fam6
    })
}

/// Margulis constant of three order-2 rotations with coplanar axes: twice the
/// inscribed radius.
pub fn margulis_222(angles: &TriangleAngles) -> Result<MargulisResult> {
    if !admissible_222_angles(angles) {
        return Err(Error::InvalidInput(format!("inadmissible angles {:?}", angles.as_array())));
    }
    Ok(MargulisResult {
        value: 2.0 * inscribed_radius(angles)?,
        method: MargulisMethod::InscribedDisk,
        orders: EllipticOrders::finite(2, 2, 2)?,
        angles: Some(*angles),
        residual: None,
    })
}

// --- numeric oracle ---------------------------------------------------------

type V3 = [f64; 3];

fn mink(x: &V3, y: &V3) -> f64 {
    -x[0] * y[0] + x[1] * y[1] + x[2] * y[2]
}

/// Vector Minkowski-orthogonal to both arguments.
fn lorentz_cross(a: &V3, b: &V3) -> V3 {
    let c = [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]];
    [-c[0], c[1], c[2]]
}

fn hyperboloid_point(p: &[f64]) -> V3 {
    [(1.0 + p[0] * p[0] + p[1] * p[1]).sqrt(), p[0], p[1]]
}

/// Unit side normals with Gram matrix `g`, oriented so that the triangle is
/// the region where all three pairings have one sign.
fn side_normals(g: &[[f64; 3]; 3]) -> Result<[V3; 3]> {
    let (g12, g13, g23) = (g[0][1], g[0][2], g[1][2]);
    let u1 = [0.0, 1.0, 0.0];
    let a = g12.abs();
    let u2 = [a, g12, 1.0];
    // u3 = (t, g13, r + a t) with r = g23 − g12 g13
    let x = g13;
    let r = g23 - g12 * x;
    let (qa, qb, qc) = (a * a - 1.0, 2.0 * a * r, x * x + r * r - 1.0);
    let ts: Vec<f64> = if qa.abs() < 1e-14 {
        if qb.abs() < 1e-300 {
            vec![]
        } else {
            vec![-qc / qb]
        }
    } else {
        let disc = qb * qb - 4.0 * qa * qc;
        if disc < -1e-12 {
            vec![]
        } else {
            let s = disc.max(0.0).sqrt();
            vec![(-qb + s) / (2.0 * qa), (-qb - s) / (2.0 * qa)]
        }
    };
    for t in ts {
        let u3 = [t, x, r + a * t];
        let u = [u1, u2, u3];
        let side = |i: usize, j: usize, k: usize| {
            let mut v = lorentz_cross(&u[i], &u[j]);
            if v[0] < 0.0 {
                v = v.map(|c| -c);
            }
            mink(&v, &u[k])
        };
        let s = [side(0, 1, 2), side(0, 2, 1), side(1, 2, 0)];
        if s.iter().all(|v| *v > 0.0) || s.iter().all(|v| *v < 0.0) {
            return Ok(u);
        }
    }
    Err(Error::InvalidInput("angles do not form a hyperbolic triangle".into()))
}

struct Minimax {
    u: [V3; 3],
    k: [f64; 3],
}

impl Minimax {
    fn displacements(&self, p: &[f64]) -> [f64; 3] {
        let x = hyperboloid_point(p);
        [0, 1, 2].map(|i| 2.0 * (self.k[i] * mink(&x, &self.u[i]).abs()).asinh())
    }

    fn value(&self, p: &[f64]) -> f64 {
        self.displacements(p).into_iter().fold(f64::MIN, f64::max)
    }
}

impl CostFunction for Minimax {
    type Param = Vec<f64>;
    type Output = f64;
    fn cost(&self, p: &Self::Param) -> std::result::Result<f64, argmin::core::Error> {
        Ok(self.value(p))
    }
}

fn nelder_mead(prob: &Minimax, start: [f64; 2], size: f64) -> Result<(Vec<f64>, f64)> {
    let simplex = vec![
        vec![start[0], start[1]],
        vec![start[0] + size, start[1]],
        vec![start[0], start[1] + size],
    ];
    let solver = NelderMead::new(simplex)
        .with_sd_tolerance(1e-16)
        .map_err(|e| Error::NoConvergence(e.to_string()))?;
    let res = Executor::new(Minimax { u: prob.u, k: prob.k }, solver)
        .configure(|s| s.max_iters(4000))
        .run()
        .map_err(|e| Error::NoConvergence(e.to_string()))?;
    let st = res.state();
    let best = st
        .get_best_param()
        .cloned()
        .ok_or_else(|| Error::NoConvergence("no best point".into()))?;
    Ok((best, st.get_best_cost()))
}

/// Newton iteration on the two equidistance equations.
fn polish(prob: &Minimax, p0: &[f64]) -> Option<Vec<f64>> {
    let f = |p: &[f64]| {
        let d = prob.displacements(p);
        [d[0] - d[1], d[0] - d[2]]
    };
    let mut p = p0.to_vec();
    for _ in 0..30 {
        let r = f(&p);
        if r[0].abs().max(r[1].abs()) < 1e-14 {
            return Some(p);
        }
        let h = 1e-7;
        let mut jac = [[0.0; 2]; 2];
        for c in 0..2 {
            let mut q = p.clone();
            q[c] += h;
            let rq = f(&q);
            jac[0][c] = (rq[0] - r[0]) / h;
            jac[1][c] = (rq[1] - r[1]) / h;
        }
        let det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
        if det.abs() < 1e-300 {
            return None;
        }
        p[0] -= (jac[1][1] * r[0] - jac[0][1] * r[1]) / det;
        p[1] -= (-jac[1][0] * r[0] + jac[0][0] * r[1]) / det;
    }
    let r = f(&p);
    (r[0].abs().max(r[1].abs()) < 1e-11).then_some(p)
}

/// Direct minimax: minimize over the plane the largest displacement of the
/// three elliptics. Independent of the closed formulas.
pub fn numeric_margulis_oracle(orders: &EllipticOrders, angles: &TriangleAngles) -> Result<MargulisResult> {
    angles.validate()?;
    let n = orders.finite_array()?;
    let g = gram_matrix(angles);
    let u = side_normals(&g)?;
    let prob = Minimax { u, k: ks(&n) };
    // incenter: equal pairing with every side normal
    let c = solve3(&g, &[1.0; 3]).ok_or_else(|| Error::InvalidInput("singular Gram matrix".into()))?;
    let mut x = [0.0; 3];
    for (ci, ui) in c.iter().zip(&u) {
        for (xk, uk) in x.iter_mut().zip(ui) {
            *xk += ci * uk;
        }
    }
    let nrm = (-mink(&x, &x)).sqrt();
    let sign = if x[0] < 0.0 { -1.0 } else { 1.0 };
    let inc = [sign * x[1] / nrm, sign * x[2] / nrm];
    let starts = [
        inc,
        [inc[0] + 0.3, inc[1]],
        [inc[0], inc[1] + 0.3],
        [inc[0] - 0.3, inc[1] - 0.3],
    ];
    let mut best: Option<(Vec<f64>, f64)> = None;
    for s in starts {
        let (mut p, mut v) = nelder_mead(&prob, s, 0.1)?;
        let mut size = 1e-2;
        for _ in 0..6 {
            let (p2, v2) = nelder_mead(&prob, [p[0], p[1]], size)?;
            if v2 <= v {
                let done = v - v2 < 1e-15;
                p = p2;
                v = v2;
                if done {
                    break;
                }
            }
            size *= 0.1;
        }
        if best.as_ref().is_none_or(|b| v < b.1) {
            best = Some((p, v));
        }
    }
    let (mut p, mut v) = best.expect("at least one start");
    if let Some(q) = polish(&prob, &p) {
        let vq = prob.value(&q);
        let dist = ((q[0] - p[0]).powi(2) + (q[1] - p[1]).powi(2)).sqrt();
        if vq <= v + 1e-8 && dist < 1e-3 {
            p = q;
            v = vq;
        }
    }
    if !v.is_finite() {
        return Err(Error::NoConvergence("oracle diverged".into()));
    }
    let d = prob.displacements(&p);
    let residual = d.iter().fold(f64::MIN, |a, b| a.max(*b)) - d.iter().fold(f64::MAX, |a, b| a.min(*b));
    Ok(MargulisResult {
        value: v,
        method: MargulisMethod::NumericOracle,
        orders: *orders,
        angles: Some(*angles),
        residual: Some(residual),
    })
}

// --- table rows --------------------------------------------------------------

/// A row of the shipped Margulis tables resolved to exact angles.
#[derive(Debug, Clone, Serialize)]
pub struct MargulisRowGeometry {
    pub table: String,
    pub row: u32,
    pub orders: EllipticOrders,
    pub angles: TriangleAngles,
    pub printed: f64,
    /// Every vertex has dihedral angle π/k.
    pub all_submultiple: bool,
    /// Printed (truncated) angles agree with the exact ones to 1e−3.
    pub angles_consistent: bool,
}

fn pair_index(s: &str) -> Result<(usize, usize)> {
    let b = s.as_bytes();
    if b.len() != 2 {
        return Err(Error::Data(format!("bad vertex label {s}")));
    }
    let i = (b[0] - b'1') as usize;
    let j = (b[1] - b'1') as usize;
    if i > 2 || j > 2 || i == j {
        return Err(Error::Data(format!("bad vertex label {s}")));
    }
    Ok((i.min(j), i.max(j)))
}

/// Dihedral angle ψ at a vertex where axes of orders with half-angles a1, a2
/// meet at angle θ.
pub fn psi_from_theta(a1: f64, a2: f64, theta: f64) -> f64 {
    (-a1.cos() * a2.cos() + a1.sin() * a2.sin() * theta.cos()).clamp(-1.0, 1.0).acos()
}

/// Inverse of [`psi_from_theta`].
pub fn theta_from_psi(a1: f64, a2: f64, psi: f64) -> f64 {
    ((psi.cos() + a1.cos() * a2.cos()) / (a1.sin() * a2.sin())).clamp(-1.0, 1.0).acos()
}

/// Resolves a table row. Family rows (`pi/n`) use their smallest n. Rows
/// without printed ψ pick θ or π − θ so that ψ is a submultiple of π.
pub fn margulis_row_geometry(row: &MargulisRow) -> Result<MargulisRowGeometry> {
    let n = row.orders();
    let half = n.map(|x| PI / x as f64);
    let mut ang = [0.0; 3];
    let mut sub = true;
    let mut consistent = true;
    for (label, theta_s, psi_s) in row.vertices() {
        let (i, j) = pair_index(label)?;
        let theta = tables::parse_angle(theta_s, row.n_min)?;
        let exact = if theta == 0.0 {
            0.0
        } else if let Some(ps) = psi_s {
            theta_from_psi(half[i], half[j], tables::parse_angle(ps, row.n_min)?)
        } else {
            let mut best = (f64::MAX, theta);
            for cand in [theta, PI - theta] {
                let k = PI / psi_from_theta(half[i], half[j], cand);
                let err = (k - k.round()).abs();
                if err < best.0 {
                    best = (err, theta_from_psi(half[i], half[j], PI / k.round()));
                }
            }
            if best.0 > 1e-2 {
                sub = false;
            }
            best.1
        };
        if theta != 0.0 && (exact - theta).abs() > 1e-3 {
            consistent = false;
        }
        let idx = match (i, j) {
            (0, 1) => 0,
            (0, 2) => 1,
            _ => 2,
        };
        ang[idx] = exact;
    }
    Ok(MargulisRowGeometry {
        table: row.table.clone(),
        row: row.row,
        orders: EllipticOrders::finite(n[0], n[1], n[2])?,
        angles: TriangleAngles::new(ang[0], ang[1], ang[2])?,
        printed: row.m_printed,
        all_submultiple: sub,
        angles_consistent: consistent,
    })
}

/// Formula, oracle and printed value for one table row.
#[derive(Debug, Clone, Serialize)]
pub struct MargulisRowReport {
    pub geometry: MargulisRowGeometry,
    pub formula: f64,
    pub oracle: f64,
    pub oracle_residual: f64,
    /// |printed − formula| > 5e−4: the printed value is logged as an erratum.
    pub erratum: bool,
}

pub fn check_margulis_row(row: &MargulisRow) -> Result<MargulisRowReport> {
    let geo = margulis_row_geometry(row)?;
    let formula = margulis_triangle(&geo.orders, &geo.angles)?.value;
    let or = numeric_margulis_oracle(&geo.orders, &geo.angles)?;
    Ok(MargulisRowReport {
        erratum: (geo.printed - formula).abs() > 5e-4,
        formula,
        oracle: or.value,
        oracle_residual: or.residual.unwrap_or(0.0),
        geometry: geo,
    })
}

// ---------------------------------------------------------------------------
// Spherical data

/// Angle θ between intersecting axes of a finite (or Euclidean) subgroup and
/// the dihedral angle ψ of the associated reflection configuration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AngleTableEntry {
    pub p: u32,
    pub q: u32,
    /// Closed-form tag as printed; a leading `-` marks θ = π − arcsin.
    pub sin_form: String,
    pub sin_theta: f64,
    pub theta: f64,
    /// Value as printed, when present (truncated to 4 decimals).
    pub theta_printed: Option<f64>,
    pub psi: f64,
    pub group: String,
}

/// Orders whose axes can meet on the sphere at infinity (p ≤ q).
pub const MEET_AT_INFINITY: [(u32, u32); 8] =
    [(2, 2), (2, 3), (2, 4), (2, 6), (3, 3), (3, 6), (4, 4), (6, 6)];

/// Every tabulated entry, plus the ideal (θ = 0) meetings.
pub fn all_angle_entries() -> Result<Vec<AngleTableEntry>> {
    let mut out = Vec::new();
    for r in tables::angles()? {
        let theta = r.theta()?;
        out.push(AngleTableEntry {
            p: r.p,
            q: r.q,
            sin_theta: tables::sin_form_value(&r.sin_form)?,
            sin_form: if r.sign < 0 { format!("-{}", r.sin_form) } else { r.sin_form.clone() },
            theta,
            theta_printed: Some(tables::parse_angle(&r.theta_printed, None)?),
            psi: tables::parse_angle(&r.psi, None)?,
            group: r.group,
        });
    }
    for (p, q) in MEET_AT_INFINITY {
        if out.iter().any(|e| e.p == p && e.q == q && e.theta == 0.0) {
            continue;
        }
        out.push(AngleTableEntry {
            p,
            q,
            sin_form: "0".into(),
            sin_theta: 0.0,
            theta: 0.0,
            theta_printed: None,
            psi: PI - PI / p as f64 - PI / q as f64,
            group: "ideal".into(),
        });
    }
    Ok(out)
}

/// Dihedral group entries for two order-2 axes: θ = ψ = kπ/m.
fn dihedral_entries(m: u32) -> Vec<AngleTableEntry> {
    (1..m)
        .map(|k| {
            let t = k as f64 * PI / m as f64;
            AngleTableEntry {
                p: 2,
                q: 2,
                sin_form: format!("sin({k}pi/{m})"),
                sin_theta: t.sin(),
                theta: t,
                theta_printed: None,
                psi: t,
                group: format!("D{m}"),
            }
        })
        .collect()
}

/// Entries for the pair of orders inside the named group (`A4`, `S4`, `A5`,
/// `D<m>`, or `ideal`).
pub fn spherical_axis_angles(p: u32, q: u32, group: &str) -> Result<Vec<AngleTableEntry>> {
    let (p, q) = (p.min(q), p.max(q));
    let out: Vec<AngleTableEntry> = if p == 2 && q == 2 {
        let m = group
            .strip_prefix('D')
            .and_then(|s| s.parse::<u32>().ok())
            .filter(|m| *m >= 2)
            .ok_or_else(|| Error::NotTabulated(format!("(2,2) in {group}")))?;
        dihedral_entries(m)
    } else {
        all_angle_entries()?
            .into_iter()
            .filter(|e| e.p == p && e.q == q && e.group == group)
            .collect()
    };
    if out.is_empty() {
        return Err(Error::NotTabulated(format!("({p},{q}) in {group}")));
    }
    Ok(out)
}

/// γ values of finite groups generated by primitive elliptics of orders p, q
/// with intersecting axes: γ = (β_p β_q / 4)(−sin²θ). For (2,2) the dihedral
/// groups D2..D6 are listed.
pub fn elementary_gammas(p: u32, q: u32) -> Result<Vec<(C64, String)>> {
    let (p, q) = (p.min(q), p.max(q));
    let bp = crate::moebius::elliptic_beta(p);
    let bq = crate::moebius::elliptic_beta(q);
    let entries: Vec<AngleTableEntry> = if p == 2 && q == 2 {
        (2..=6).flat_map(dihedral_entries).collect()
    } else {
        all_angle_entries()?
            .into_iter()
            .filter(|e| e.p == p && e.q == q && e.theta > 0.0)
            .collect()
    };
    if entries.is_empty() {
        return Err(Error::NotTabulated(format!("({p},{q})")));
    }
    let mut out: Vec<(C64, String)> = Vec::new();
    for e in entries {
        let g = C64::new(-bp * bq / 4.0 * e.theta.sin().powi(2), 0.0);
        if !out.iter().any(|(h, grp)| (h - g).norm() < 1e-12 && *grp == e.group) {
            out.push((g, e.group));
        }
    }
    Ok(out)
}

/// Tabulated distance between spherical points of the given pair of finite
/// groups (1-based index). Returns (order, alternative order, distance).
pub fn spherical_point_distance_lookup(pair: &str, index: usize) -> Result<(u32, Option<u32>, f64)> {
    let parts: Vec<String> = pair
        .split(|c: char| c == ',' || c == '-' || c == '(' || c == ')' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| s.to_uppercase())
        .collect();
    if parts.len() != 2 {
        return Err(Error::InvalidInput(format!("bad pair {pair:?}")));
    }
    let rows = tables::spherical_distances()?;
    for key in [format!("{}-{}", parts[0], parts[1]), format!("{}-{}", parts[1], parts[0])] {
        let sel: Vec<_> = rows.iter().filter(|r| r.pair == key).collect();
        if !sel.is_empty() {
            let r = sel
                .iter()
                .find(|r| r.index as usize == index)
                .ok_or_else(|| Error::NotTabulated(format!("{key} entry {index}")))?;
            return Ok((r.n, r.n_alt, r.rho));
        }
    }
    Err(Error::NotTabulated(format!("pair {pair}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fin(p: u32, q: u32, r: u32) -> EllipticOrders {
        EllipticOrders::finite(p, q, r).unwrap()
    }

    #[test]
    fn ellipse_limits() {
        let (l, f) = free_product_ellipse(Order::Finite(2), Order::Infinite).unwrap();
        assert_eq!(f.norm(), 0.0);
        assert!((l / 2.0 - 4.0).abs() < 1e-12); // the disk D(0,4)
        let (l, _) = free_product_ellipse(Order::Infinite, Order::Infinite).unwrap();
        assert!((l - 32.0).abs() < 1e-12);
        assert!(free_product_ellipse(Order::Finite(2), Order::Finite(2)).is_err());
        assert!((trivial_free_bound(Order::Finite(2), Order::Finite(3)) - 4.0).abs() < 1e-12);
    }

    #[test]
    fn isometric_circle() {
        assert!(!isometric_circle_free_test(3, 3, C64::new(0.99, 0.0)).unwrap());
        assert!(isometric_circle_free_test(3, 3, C64::new(0.0, 0.0)).unwrap());
        assert!(isometric_circle_free_test(3, 3, C64::new(1.0, 0.0)).is_err());
    }

    #[test]
    fn omega_normalization_matches_gamma() {
        // f, g in the normalization behind the isometric-circle test
        use crate::moebius::{gamma, MoebiusMap};
        let (p, q) = (3u32, 5u32);
        let (sp, cp) = (PI / p as f64).sin_cos();
        let (sq, cq) = (PI / q as f64).sin_cos();
        let i = C64::i();
        for w in [C64::new(0.3, 0.2), C64::new(-0.5, 0.1), C64::new(0.05, -0.7)] {
            let f = MoebiusMap::new(cp.into(), i * sp, i * sp, cp.into()).unwrap();
            let g = MoebiusMap::new(cq.into(), i * w * sq, i * w.inv() * sq, cq.into()).unwrap();
            assert!((gamma(&f, &g) - gamma_from_omega(p, q, w)).norm() < 1e-10);
        }
    }

    #[test]
    fn axial_distances() {
        let d = delta_infinity(Order::Finite(2), Order::Finite(3)).unwrap();
        assert!((d - (2.0 / 3f64.sqrt()).acosh()).abs() < 1e-14);
        assert!((d - 0.549306).abs() < 1e-6);
        let d0 = delta_zero_high_order(Order::Finite(7), Order::Finite(7)).unwrap();
        assert!((d0 - (1.0 / (2.0 * (PI / 7.0).sin().powi(2))).acosh()).abs() < 1e-14);
        assert!(delta_zero_high_order(Order::Finite(6), Order::Finite(7)).is_err());
        for p in 7..=50 {
            for q in 7..=50 {
                let a = delta_infinity(Order::Finite(p), Order::Finite(q)).unwrap();
                let b = delta_zero_high_order(Order::Finite(p), Order::Finite(q)).unwrap();
                assert!(a > b, "{p} {q}");
                if p > 7 {
                    // increasing in p: sin(π/p) shrinks
                    let prev = delta_zero_high_order(Order::Finite(p - 1), Order::Finite(q)).unwrap();
                    assert!(b > prev);
                }
            }
        }
        // (2, p, ∞): cosh δ = 1/sin(π/p)
        for p in 3..10 {
            let d = delta_infinity(Order::Finite(2), Order::Finite(p)).unwrap();
            assert!((d.cosh() - 1.0 / (PI / p as f64).sin()).abs() < 1e-12);
        }
    }

    #[test]
    fn edges_and_radius() {
        let t = TriangleAngles::new(PI / 4.0, PI / 4.0, PI / 4.0).unwrap();
        let e = triangle_edge_lengths(&t).unwrap();
        assert!((e[0] - e[1]).abs() < 1e-14 && (e[1] - e[2]).abs() < 1e-14);
        let t = TriangleAngles::new(PI / 2.0, PI / 3.0, PI / 7.0).unwrap();
        let d = 2.0 * inscribed_radius(&t).unwrap();
        assert!((0.2088..0.2089).contains(&d), "{d}"); // printed truncated
        let ideal = TriangleAngles::new(0.0, 0.0, 0.0).unwrap();
        assert!((inscribed_radius(&ideal).unwrap() - 3f64.ln() / 2.0).abs() < 1e-14);
        assert!(triangle_edge_lengths(&ideal).is_err());
        assert!(TriangleAngles::new(PI / 3.0, PI / 3.0, PI / 3.0).is_err());
    }

    #[test]
    fn orbifold_areas() {
        assert!((orbifold_area(0, 0, &[2, 3, 7]).unwrap() - PI / 21.0).abs() < 1e-14);
        assert!(orbifold_area(1, 0, &[]).is_err());
        assert!((orbifold_area(1, 1, &[]).unwrap() - 2.0 * PI).abs() < 1e-14);
    }

    #[test]
    fn displacement() {
        assert_eq!(elliptic_displacement(5, 0.0), 0.0);
        assert!((elliptic_displacement(2, 0.7) - 1.4).abs() < 1e-14);
    }

    #[test]
    fn ideal_333() {
        let o = fin(3, 3, 3);
        let m = margulis_ideal(&o).unwrap().value;
        assert!((m - 2.0 * 0.5f64.asinh()).abs() < 1e-14);
        assert!((m - 0.962424).abs() < 5e-7);
        let ideal = TriangleAngles::new(0.0, 0.0, 0.0).unwrap();
        let or = numeric_margulis_oracle(&o, &ideal).unwrap();
        assert!((or.value - m).abs() < 1e-8, "{or:?}");
        let m444 = margulis_ideal(&fin(4, 4, 4)).unwrap().value;
        assert!((m444 - 2.0 * (1.0 / 6f64.sqrt()).asinh()).abs() < 1e-14);
    }

    #[test]
    fn formula_matches_gram_and_oracle() {
        let cases = [
            (fin(3, 4, 5), TriangleAngles::new(0.955, 0.652, 0.7).unwrap()),
            (fin(2, 3, 7), TriangleAngles::new(PI / 2.0, PI / 7.0, PI / 3.0).unwrap()),
            (fin(3, 3, 5), TriangleAngles::new(1.2309594, 0.6523581, 0.6523581).unwrap()),
            (fin(3, 3, 3), TriangleAngles::new(1.0, 1.1, 0.9).unwrap()),
        ];
        for (o, t) in cases {
            let f = margulis_triangle(&o, &t).unwrap().value;
            let g = margulis_gram(&o.finite_array().unwrap(), &t).unwrap();
            let or = numeric_margulis_oracle(&o, &t).unwrap();
            assert!((f - g).abs() < 1e-10, "{f} {g}");
            assert!((f - or.value).abs() < 1e-7, "{f} {:?}", or);
        }
    }

    #[test]
    fn reflection_237() {
        let t = TriangleAngles::new(PI / 2.0, PI / 3.0, PI / 7.0).unwrap();
        let m = margulis_222(&t).unwrap().value;
        assert!((m - 0.2088).abs() < 5e-4);
        let or = numeric_margulis_oracle(&fin(2, 2, 2), &t).unwrap();
        assert!((or.value - m).abs() < 1e-8);
    }

    #[test]
    fn admissible_families() {
        let t = |a: f64, b: f64, c: f64| TriangleAngles { alpha: a, beta_angle: b, gamma_angle: c };
        assert!(admissible_222_angles(&t(PI / 2.0, PI / 3.0, PI / 7.0)));
        assert!(admissible_222_angles(&t(2.0 * PI / 7.0, PI / 3.0, PI / 7.0)));
        assert!(admissible_222_angles(&t(2.0 * PI / 9.0, PI / 2.0, PI / 9.0)));
        assert!(admissible_222_angles(&t(4.0 * PI / 11.0, PI / 11.0, PI / 11.0)));
        assert!(!admissible_222_angles(&t(PI / 5.0, PI / 5.0, 3.0 * PI / 5.0)));
        assert!(!admissible_222_angles(&t(PI / 2.0, PI / 2.0, PI / 2.0)));
        assert!(margulis_222(&t(PI / 5.0, PI / 5.0, 3.0 * PI / 5.0)).is_err());
    }

    #[test]
    fn angle_entries() {
        let e = spherical_axis_angles(2, 3, "A4").unwrap();
        assert!((e[0].sin_theta - (2.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert!((e[0].psi - PI / 3.0).abs() < 1e-15);
        let e = spherical_axis_angles(3, 3, "A4").unwrap();
        assert!((e[0].theta - 1.2309).abs() < 1e-4);
        assert!(spherical_axis_angles(2, 7, "A5").is_err());
        assert_eq!(spherical_axis_angles(2, 2, "D4").unwrap().len(), 3);
        for e in all_angle_entries().unwrap() {
            assert!((e.theta.sin() - e.sin_theta).abs() < 1e-9, "{e:?}");
            let psi = psi_from_theta(PI / e.p as f64, PI / e.q as f64, e.theta);
            assert!((psi - e.psi).abs() < 1e-9, "{e:?}");
        }
    }

    #[test]
    fn elementary_values() {
        let g = elementary_gammas(2, 3).unwrap();
        assert!(g.iter().any(|(v, grp)| (v.re + 2.0).abs() < 1e-12 && grp == "A4"));
        let g = elementary_gammas(2, 2).unwrap();
        assert!(g.iter().any(|(v, _)| (v.re + 4.0).abs() < 1e-12));
        for (p, q) in [(2, 3), (2, 4), (2, 5), (3, 3), (3, 4), (3, 5), (4, 4), (5, 5)] {
            let bound = crate::moebius::elliptic_beta(p) * crate::moebius::elliptic_beta(q) / 4.0;
            for (v, _) in elementary_gammas(p, q).unwrap() {
                assert!(v.im == 0.0 && v.re < 0.0 && v.re >= -bound - 1e-12);
            }
        }
    }

    #[test]
    #[allow(clippy::approx_constant)] // tabulated value, not ln 2
    fn spherical_lookup() {
        assert_eq!(spherical_point_distance_lookup("A4,A4", 1).unwrap(), (3, None, 0.69314));
        assert_eq!(spherical_point_distance_lookup("A5-A5", 7).unwrap(), (2, None, 2.82643));
        assert_eq!(spherical_point_distance_lookup("S4,S4", 3).unwrap(), (3, Some(4), 1.31696));
        assert_eq!(spherical_point_distance_lookup("S4,A4", 1).unwrap().2, 1.01481);
        assert!(spherical_point_distance_lookup("A4,A4", 9).is_err());
    }
}
