//! Möbius transformations as normalized SL(2,C) matrices and the (γ, β, β′)
//! parameter calculus of two-generator groups.

use crate::error::{Error, Result};
use crate::C64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Tolerance on |ad − bc − 1| after normalization.
pub const DET_TOL: f64 = 1e-9;
/// |Im β| below this counts as real for classification.
pub const REAL_TOL: f64 = 1e-9;
/// Largest elliptic order detected from a rotation angle.
pub const MAX_ORDER: u32 = 2000;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// A 2×2 complex matrix with unit determinant, representing ±M in PSL(2,C).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct MoebiusMap {
    pub a: C64,
    pub b: C64,
    pub c: C64,
    pub d: C64,
}

impl MoebiusMap {
    /// Builds the map z ↦ (az+b)/(cz+d), dividing by a square root of the determinant.
    pub fn new(a: C64, b: C64, c: C64, d: C64) -> Result<Self> {
        let det = a * d - b * c;
        if det.norm() < 1e-300 || !det.is_finite() {
            return Err(Error::InvalidInput("singular matrix".into()));
        }
        let s = det.sqrt();
        Ok(MoebiusMap { a: a / s, b: b / s, c: c / s, d: d / s })
    }

    pub fn identity() -> Self {
        MoebiusMap { a: c(1.0, 0.0), b: c(0.0, 0.0), c: c(0.0, 0.0), d: c(1.0, 0.0) }
    }

    /// Translation z ↦ z + t.
    pub fn translation(t: C64) -> Self {
        MoebiusMap { a: c(1.0, 0.0), b: t, c: c(0.0, 0.0), d: c(1.0, 0.0) }
    }

    /// Dilation z ↦ k z.
    pub fn dilation(k: C64) -> Result<Self> {
        Self::new(k, c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0))
    }

    pub fn det(&self) -> C64 {
        self.a * self.d - self.b * self.c
    }

    pub fn trace(&self) -> C64 {
        self.a + self.d
    }

    /// Matrix product `self · other` (apply `other` first), renormalized.
    pub fn mul(&self, o: &MoebiusMap) -> MoebiusMap {
        let m = MoebiusMap {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        };
        m.renormalized()
    }

    fn renormalized(self) -> MoebiusMap {
        let det = self.det();
        if (det - 1.0).norm() <= 1e-13 {
            return self;
        }
        let s = det.sqrt();
        MoebiusMap { a: self.a / s, b: self.b / s, c: self.c / s, d: self.d / s }
    }

    /// Inverse in SL(2,C): [[d, −b], [−c, a]].
    pub fn inverse(&self) -> MoebiusMap {
        MoebiusMap { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }

    pub fn pow(&self, n: i64) -> MoebiusMap {
        let base = if n < 0 { self.inverse() } else { *self };
        let mut k = n.unsigned_abs();
        let mut acc = MoebiusMap::identity();
        let mut sq = base;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&sq);
            }
            sq = sq.mul(&sq);
            k >>= 1;
        }
        acc
    }

    pub fn neg(&self) -> MoebiusMap {
        MoebiusMap { a: -self.a, b: -self.b, c: -self.c, d: -self.d }
    }

    /// Conjugate `h self h⁻¹`.
    pub fn conjugate_by(&self, h: &MoebiusMap) -> MoebiusMap {
        h.mul(self).mul(&h.inverse())
    }

    /// Applies the map to a point of the Riemann sphere.
    pub fn apply(&self, z: Point) -> Point {
        match z {
            Point::Infinity => {
                if self.c.norm() < 1e-300 {
                    Point::Infinity
                } else {
                    Point::Finite(self.a / self.c)
                }
            }
            Point::Finite(z) => {
                let den = self.c * z + self.d;
                if den.norm() < 1e-300 {
                    Point::Infinity
                } else {
                    Point::Finite((self.a * z + self.b) / den)
                }
            }
        }
    }

    /// Entrywise distance to `other` up to the sign ambiguity ±M.
    pub fn distance(&self, o: &MoebiusMap) -> f64 {
        let plus = (self.a - o.a).norm()
            + (self.b - o.b).norm()
            + (self.c - o.c).norm()
            + (self.d - o.d).norm();
        let minus = (self.a + o.a).norm()
            + (self.b + o.b).norm()
            + (self.c + o.c).norm()
            + (self.d + o.d).norm();
        plus.min(minus)
    }

    /// Equality in PSL(2,C) within `tol`.
    pub fn approx_eq(&self, o: &MoebiusMap, tol: f64) -> bool {
        self.distance(o) <= tol
    }

    fn scale(&self) -> f64 {
        self.a.norm().max(self.b.norm()).max(self.c.norm()).max(self.d.norm())
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        self.approx_eq(&MoebiusMap::identity(), tol)
    }
}

/// A point of the Riemann sphere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Point {
    Finite(C64),
    Infinity,
}

impl Point {
    pub fn approx_eq(&self, o: &Point, tol: f64) -> bool {
        match (self, o) {
            (Point::Infinity, Point::Infinity) => true,
            (Point::Finite(a), Point::Finite(b)) => (a - b).norm() <= tol * (1.0 + a.norm()),
            _ => false,
        }
    }
}

/// Conjugacy class of an isometry of H³.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "tag", rename_all = "snake_case")]
pub enum IsometryClass {
    Identity,
    /// `rotation` ∈ (0, π] from β alone (the sign of the turn is not a conjugacy
    /// invariant in PSL(2,C)); `order`/`turns` give rotation = 2π·turns/order.
    Elliptic { rotation: f64, order: Option<u32>, turns: Option<u32> },
    Parabolic,
    Loxodromic,
}

/// The conjugacy triple (γ, β, β′) of a two-generator group ⟨f, g⟩.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceParams {
    pub gamma: C64,
    pub beta: C64,
    pub beta_prime: C64,
}

impl TraceParams {
    pub fn new(gamma: C64, beta: C64, beta_prime: C64) -> Self {
        TraceParams { gamma, beta, beta_prime }
    }

    /// The triple with an order-two second generator.
    pub fn with_involution(gamma: C64, beta: C64) -> Self {
        TraceParams { gamma, beta, beta_prime: c(-4.0, 0.0) }
    }

    /// γ = 0 encodes a shared fixed point (elementary group).
    pub fn is_elementary_flag(&self) -> bool {
        self.gamma.norm() < 1e-12
    }

    pub fn distance(&self, o: &TraceParams) -> f64 {
        (self.gamma - o.gamma)
            .norm()
            .max((self.beta - o.beta).norm())
            .max((self.beta_prime - o.beta_prime).norm())
    }

    /// Extracts (γ(f,g), β(f), β(g)).
    pub fn of_pair(f: &MoebiusMap, g: &MoebiusMap) -> Self {
        TraceParams { gamma: gamma(f, g), beta: beta(f), beta_prime: beta(g) }
    }
}

/// Complex distance δ + iθ between two axes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexDistance {
    pub delta: f64,
    /// Unoriented angle in [0, π).
    pub theta: f64,
    /// Signed angle with β_f β_g sinh²(δ + i·theta_signed)/4 = γ exactly.
    pub theta_signed: f64,
    pub coaxial: bool,
}

impl ComplexDistance {
    pub fn new(delta: f64, theta: f64) -> Self {
        let t = theta.rem_euclid(PI);
        ComplexDistance { delta, theta: t, theta_signed: theta, coaxial: false }
    }
}

/// Product f∘g as matrices, renormalized.
pub fn compose(f: &MoebiusMap, g: &MoebiusMap) -> MoebiusMap {
    f.mul(g)
}

/// β(f) = tr²(f) − 4.
pub fn beta(f: &MoebiusMap) -> C64 {
    let t = f.trace();
    t * t - 4.0
}

/// γ(f,g) = tr[f,g] − 2.
pub fn gamma(f: &MoebiusMap, g: &MoebiusMap) -> C64 {
    let comm = f.mul(g).mul(&f.inverse()).mul(&g.inverse());
    comm.trace() - 2.0
}

/// Classification of a parameter β alone (no identity test).
pub fn classify_beta(b: C64) -> IsometryClass {
    if b.norm() < 1e-9 {
        return IsometryClass::Parabolic;
    }
    if b.im.abs() < REAL_TOL && b.re >= -4.0 - 1e-9 && b.re <= -1e-12 {
        // β = −4 sin²(θ/2) with θ the rotation angle.
        let s = (-b.re / 4.0).clamp(0.0, 1.0).sqrt();
        let rotation = 2.0 * s.asin();
        let (order, turns) = match detect_rotation_order(rotation / (2.0 * PI)) {
            Some((k, n)) => (Some(n), Some(k)),
            None => (None, None),
        };
        return IsometryClass::Elliptic { rotation, order, turns };
    }
    IsometryClass::Loxodromic
}

/// Trichotomy per β with the documented tolerance bands.
pub fn classify(f: &MoebiusMap) -> IsometryClass {
    if f.is_identity(1e-12 * f.scale().max(1.0)) {
        return IsometryClass::Identity;
    }
    classify_beta(beta(f))
}

/// Best rational approximation k/n of x ∈ (0, 1) with n ≤ MAX_ORDER, accepted
/// when within 1e-9.
fn detect_rotation_order(x: f64) -> Option<(u32, u32)> {
    let (mut h0, mut h1) = (0i64, 1i64);
    let (mut k0, mut k1) = (1i64, 0i64);
    let mut r = x;
    let mut best = None;
    for _ in 0..64 {
        let a = r.floor();
        let ai = a as i64;
        let h2 = ai * h1 + h0;
        let k2 = ai * k1 + k0;
        if k2 > MAX_ORDER as i64 {
            break;
        }
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
        if (x - h1 as f64 / k1 as f64).abs() <= 1e-9 {
            best = Some((h1 as u32, k1 as u32));
            break;
        }
        let frac = r - a;
        if frac < 1e-15 {
            break;
        }
        r = 1.0 / frac;
    }
    best.filter(|&(h, _)| h > 0)
}

/// Fixed points: roots of cz² + (d−a)z − b, with ∞ when c = 0.
pub fn fixed_points(f: &MoebiusMap) -> Result<Vec<Point>> {
    let s = f.scale().max(1.0);
    if f.is_identity(1e-12 * s) {
        return Err(Error::InvalidInput("identity has every point fixed".into()));
    }
    let (a, b, cc, d) = (f.a, f.b, f.c, f.d);
    if cc.norm() <= 1e-14 * s {
        if (a - d).norm() <= 1e-12 * s {
            return Ok(vec![Point::Infinity]);
        }
        return Ok(vec![Point::Finite(b / (d - a)), Point::Infinity]);
    }
    let disc = (a - d) * (a - d) + 4.0 * b * cc;
    let r = disc.sqrt();
    if r.norm() <= 1e-12 * s {
        return Ok(vec![Point::Finite((a - d) / (2.0 * cc))]);
    }
    Ok(vec![Point::Finite((a - d + r) / (2.0 * cc)), Point::Finite((a - d - r) / (2.0 * cc))])
}

/// Translation length τ ≥ 0 and holonomy η with β = 4 sinh²((τ + iη)/2).
pub fn translation_holonomy(f: &MoebiusMap) -> Result<(f64, f64)> {
    holonomy_from_beta(beta(f))
}

/// As [`translation_holonomy`] but from β directly.
pub fn holonomy_from_beta(b: C64) -> Result<(f64, f64)> {
    if b.norm() < 1e-9 {
        return Err(Error::Parabolic("translation length/holonomy"));
    }
    let p = (b + 4.0).norm();
    let q = b.norm();
    let tau = ((p + q) / 4.0).max(1.0).acosh();
    let eta = ((p - q) / 4.0).clamp(-1.0, 1.0).acos();
    let err = |e: f64| (4.0 * (c(tau, e) / 2.0).sinh().powi(2) - b).norm();
    let eta = if err(-eta) < err(eta) { -eta } else { eta };
    Ok((tau, eta))
}

/// β from (τ, η).
pub fn beta_from_holonomy(tau: f64, eta: f64) -> C64 {
    4.0 * (c(tau, eta) / 2.0).sinh().powi(2)
}

/// Complex distance between the axes of f and g from
/// cosh 2δ = |X+1| + |X|, cos 2θ = |X+1| − |X|, X = 4γ/(β_f β_g).
pub fn axis_complex_distance(f: &MoebiusMap, g: &MoebiusMap) -> Result<ComplexDistance> {
    let bf = beta(f);
    let bg = beta(g);
    if bf.norm() < 1e-9 || bg.norm() < 1e-9 {
        return Err(Error::Parabolic("axis"));
    }
    let coaxial = match (fixed_points(f), fixed_points(g)) {
        (Ok(pf), Ok(pg)) if pf.len() == 2 && pg.len() == 2 => {
            let t = 1e-9;
            (pf[0].approx_eq(&pg[0], t) && pf[1].approx_eq(&pg[1], t))
                || (pf[0].approx_eq(&pg[1], t) && pf[1].approx_eq(&pg[0], t))
        }
        _ => false,
    };
    if coaxial {
        return Ok(ComplexDistance { delta: 0.0, theta: 0.0, theta_signed: 0.0, coaxial: true });
    }
    complex_distance_from_params(gamma(f, g), bf, bg)
}

/// Complex distance from (γ, β_f, β_g) alone.
pub fn complex_distance_from_params(g: C64, bf: C64, bg: C64) -> Result<ComplexDistance> {
    let prod = bf * bg;
    if prod.norm() < 1e-18 {
        return Err(Error::InvalidInput("beta_f * beta_g = 0".into()));
    }
    let x = 4.0 * g / prod;
    let p = (x + 1.0).norm();
    let q = x.norm();
    let delta = (p + q).max(1.0).acosh() / 2.0;
    let theta = (p - q).clamp(-1.0, 1.0).acos() / 2.0;
    let err = |t: f64| (c(delta, t).sinh().powi(2) - x).norm();
    let signed = if err(-theta) < err(theta) { -theta } else { theta };
    Ok(ComplexDistance { delta, theta: theta.rem_euclid(PI), theta_signed: signed, coaxial: false })
}

/// γ = β_f β_g sinh²(δ + iθ)/4, using the signed angle.
pub fn gamma_from_geometry(beta_f: C64, beta_g: C64, dist: &ComplexDistance) -> C64 {
    beta_f * beta_g / 4.0 * c(dist.delta, dist.theta_signed).sinh().powi(2)
}

/// Larger-modulus root of x² + b x + cc = 0.
pub fn stable_quadratic_root(b: C64, cc: C64) -> C64 {
    // x² + b x + cc = 0
    let r = (b * b - 4.0 * cc).sqrt();
    let q = if (b.conj() * r).re >= 0.0 { -(b + r) / 2.0 } else { -(b - r) / 2.0 };
    if q.norm() == 0.0 {
        C64::new(0.0, 0.0)
    } else {
        q
    }
}

/// A pair (f, g) with the given parameters.
///
/// Frozen normalization: f = [[t, 1], [−1, 0]] with t = √(β+4) (principal root),
/// g = [[0, v], [w, t′]] with t′ = √(β′+4). x = tr(fg) is the larger root of
/// x² − t t′ x + (t² + t′² − 4 − γ) = 0 (Fricke), v the larger root of
/// v² + x v + 1 = 0 and w = −1/v.
pub fn realize(params: &TraceParams) -> Result<(MoebiusMap, MoebiusMap)> {
    if params.gamma.norm() < 1e-12 {
        return Err(Error::ZeroGamma);
    }
    let t = (params.beta + 4.0).sqrt();
    let tp = (params.beta_prime + 4.0).sqrt();
    let x = stable_quadratic_root(-t * tp, t * t + tp * tp - 4.0 - params.gamma);
    let v = stable_quadratic_root(x, c(1.0, 0.0));
    let w = -1.0 / v;
    let f = MoebiusMap { a: t, b: c(1.0, 0.0), c: c(-1.0, 0.0), d: c(0.0, 0.0) };
    let g = MoebiusMap { a: c(0.0, 0.0), b: v, c: w, d: tp };
    Ok((f, g.renormalized()))
}

/// Order-two element φ = (fg − gf)/√det, whose axis is the common
/// perpendicular of the axes of f and g; γ(f, φ) = γ(f, g).
pub fn common_perpendicular_involution(f: &MoebiusMap, g: &MoebiusMap) -> Result<MoebiusMap> {
    let fg = f.mul(g);
    let gf = g.mul(f);
    MoebiusMap::new(fg.a - gf.a, fg.b - gf.b, fg.c - gf.c, fg.d - gf.d)
        .map_err(|_| Error::ZeroGamma)
}

/// The four symmetries of the (γ, β, −4) slice.
///
/// Identity, γ ↦ β − γ, and the two obtained by replacing f with fg.
pub fn parameter_symmetries(p: &TraceParams) -> Result<Vec<TraceParams>> {
    require_involution(p)?;
    let (g, b) = (p.gamma, p.beta);
    let m4 = c(-4.0, 0.0);
    Ok(vec![
        TraceParams::new(g, b, m4),
        TraceParams::new(b - g, b, m4),
        TraceParams::new(g, g - b - 4.0, m4),
        TraceParams::new(-b - 4.0, g - b - 4.0, m4),
    ])
}

fn require_involution(p: &TraceParams) -> Result<()> {
    if (p.beta_prime + 4.0).norm() > 1e-9 {
        return Err(Error::InvalidInput("beta_prime must be -4".into()));
    }
    Ok(())
}

/// β(fg) = γ − β − 4 when g has order two.
pub fn beta_of_product_with_involution(p: &TraceParams) -> Result<C64> {
    require_involution(p)?;
    Ok(p.gamma - p.beta - 4.0)
}

/// Parameters of ⟨f, gfg⁻¹⟩ and of ⟨f, φ⟩.
pub fn project_to_two_generator_subgroup(p: &TraceParams) -> (TraceParams, TraceParams) {
    (
        TraceParams::new(p.gamma * (p.gamma - p.beta), p.beta, p.beta),
        TraceParams::with_involution(p.gamma, p.beta),
    )
}

/// β(fⁿ) via the Chebyshev recursion on traces.
pub fn beta_power(b: C64, n: u32) -> C64 {
    // tr(f^k) = t tr(f^{k-1}) − tr(f^{k-2}).
    let t = (b + 4.0).sqrt();
    let (mut prev, mut cur) = (c(2.0, 0.0), t);
    if n == 0 {
        return c(0.0, 0.0);
    }
    for _ in 1..n {
        let next = t * cur - prev;
        prev = cur;
        cur = next;
    }
    cur * cur - 4.0
}

/// (γ(fⁿ, g), β(fⁿ), β′) = ((β(fⁿ)/β)·γ, β(fⁿ), β′).
pub fn chebyshev_action(p: &TraceParams, n: u32) -> Result<TraceParams> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be positive".into()));
    }
    if p.beta.norm() < 1e-12 {
        return Err(Error::Parabolic("Chebyshev action"));
    }
    let bn = beta_power(p.beta, n);
    Ok(TraceParams::new(bn / p.beta * p.gamma, bn, p.beta_prime))
}

/// β of a primitive elliptic of order n (β = −4 sin²(π/n)); n = 0 means ∞.
pub fn elliptic_beta(n: u32) -> f64 {
    if n == 0 {
        0.0
    } else {
        -4.0 * (PI / n as f64).sin().powi(2)
    }
}

/// A primitive elliptic of order n with axis (0, ∞): diag(e^{iπ/n}, e^{−iπ/n}).
pub fn primitive_elliptic(n: u32) -> MoebiusMap {
    let z = C64::from_polar(1.0, PI / n as f64);
    MoebiusMap { a: z, b: c(0.0, 0.0), c: c(0.0, 0.0), d: z.conj() }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn approx(a: C64, b: C64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn identity_is_neutral() {
        let f = MoebiusMap::new(c(1.0, 2.0), c(0.5, 0.0), c(-1.0, 0.3), c(2.0, -1.0)).unwrap();
        assert!(compose(&MoebiusMap::identity(), &f).approx_eq(&f, 1e-12));
        assert!(compose(&f, &f.inverse()).is_identity(1e-12));
    }

    #[test]
    fn beta_of_elliptics() {
        assert!(beta(&MoebiusMap::identity()).norm() < 1e-15);
        assert!(approx(beta(&primitive_elliptic(2)), c(-4.0, 0.0), 1e-12));
        for n in 3..20 {
            assert!(approx(beta(&primitive_elliptic(n)), c(elliptic_beta(n), 0.0), 1e-12));
        }
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify(&MoebiusMap::translation(c(1.0, 0.0))), IsometryClass::Parabolic);
        assert_eq!(classify(&MoebiusMap::dilation(c(2.0, 0.0)).unwrap()), IsometryClass::Loxodromic);
        assert_eq!(classify(&MoebiusMap::identity()), IsometryClass::Identity);
        match classify_beta(c(-3.0, 0.0)) {
            IsometryClass::Elliptic { order, .. } => assert_eq!(order, Some(3)),
            other => panic!("{other:?}"),
        }
        match classify(&primitive_elliptic(1999)) {
            IsometryClass::Elliptic { order, .. } => assert_eq!(order, Some(1999)),
            other => panic!("{other:?}"),
        }
        // β(f) for a rotation by 2·2π/5.
        let b = -4.0 * (2.0 * PI / 5.0).sin().powi(2);
        match classify_beta(c(b, 0.0)) {
            IsometryClass::Elliptic { order, turns, .. } => {
                assert_eq!(order, Some(5));
                assert_eq!(turns, Some(2));
            }
            other => panic!("{other:?}"),
        }
        match classify_beta(c(-2.0 - 2f64.sqrt() * 0.1, 0.0)) {
            IsometryClass::Elliptic { order, .. } => assert_eq!(order, None),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn fixed_points_examples() {
        let t = MoebiusMap::translation(c(1.0, 0.0));
        assert_eq!(fixed_points(&t).unwrap(), vec![Point::Infinity]);
        let d = MoebiusMap::dilation(c(3.0, 1.0)).unwrap();
        let fp = fixed_points(&d).unwrap();
        assert_eq!(fp.len(), 2);
        assert!(fp.iter().any(|p| matches!(p, Point::Infinity)));
        assert!(fp.iter().any(|p| p.approx_eq(&Point::Finite(c(0.0, 0.0)), 1e-12)));
        assert!(fixed_points(&MoebiusMap::identity()).is_err());
    }

    #[test]
    fn holonomy_examples() {
        let (tau, eta) = holonomy_from_beta(c(-4.0, 0.0)).unwrap();
        assert!(tau.abs() < 1e-12 && (eta.abs() - PI).abs() < 1e-7);
        let f = MoebiusMap::dilation(c(4.0, 0.0)).unwrap();
        let (tau, eta) = translation_holonomy(&f).unwrap();
        assert!((tau - 4f64.ln()).abs() < 1e-12 && eta.abs() < 1e-7);
        assert!(translation_holonomy(&MoebiusMap::translation(c(1.0, 0.0))).is_err());
    }

    #[test]
    fn two_p_infinity_distance() {
        // (2,p,∞): cosh δ = 1/sin(π/p), θ = 0, γ = 4 − 4 sin²(π/p).
        for p in 3..9u32 {
            let s = (PI / p as f64).sin();
            let d = ComplexDistance::new((1.0 / s).acosh(), 0.0);
            let g = gamma_from_geometry(c(-4.0, 0.0), c(elliptic_beta(p), 0.0), &d);
            assert!(approx(g, c(4.0 - 4.0 * s * s, 0.0), 1e-12));
            let back = complex_distance_from_params(g, c(-4.0, 0.0), c(elliptic_beta(p), 0.0)).unwrap();
            assert!((back.delta - d.delta).abs() < 1e-8 && back.theta.abs() < 1e-7);
        }
        let d = ComplexDistance::new(0.0, PI / 2.0);
        assert!(approx(gamma_from_geometry(c(-4.0, 0.0), c(-4.0, 0.0), &d), c(-4.0, 0.0), 1e-12));
    }

    #[test]
    fn realize_examples() {
        for p in [
            TraceParams::new(c(-4.0, 0.0), c(-4.0, 0.0), c(-4.0, 0.0)),
            TraceParams::with_involution(c(0.5, 3f64.sqrt() / 2.0), c(0.0, 0.0)),
            TraceParams::new(c(0.3, -2.0), c(1.5, 0.2), c(-3.0, 0.0)),
        ] {
            let (f, g) = realize(&p).unwrap();
            assert!(TraceParams::of_pair(&f, &g).distance(&p) < 1e-9, "{p:?}");
            assert!((f.det() - 1.0).norm() < 1e-9 && (g.det() - 1.0).norm() < 1e-9);
        }
        assert!(matches!(
            realize(&TraceParams::with_involution(c(0.0, 0.0), c(1.0, 0.0))),
            Err(Error::ZeroGamma)
        ));
    }

    #[test]
    fn symmetries_and_products() {
        let p = TraceParams::with_involution(c(1.0, 0.0), c(0.0, 0.0));
        let s = parameter_symmetries(&p).unwrap();
        assert!(s.iter().any(|q| q.distance(&TraceParams::with_involution(c(-1.0, 0.0), c(0.0, 0.0))) < 1e-15));
        let q = TraceParams::with_involution(c(1.0, 0.0), c(-3.0, 0.0));
        assert!(beta_of_product_with_involution(&q).unwrap().norm() < 1e-15);
        let (a, _) = project_to_two_generator_subgroup(&q);
        assert!(approx(a.gamma, c(4.0, 0.0), 1e-15));
    }

    #[test]
    fn chebyshev_examples() {
        let p = TraceParams::new(c(0.7, 0.2), c(-3.0, 0.0), c(-4.0, 0.0));
        let q = chebyshev_action(&p, 1).unwrap();
        assert!(q.distance(&p) < 1e-12);
        let q = chebyshev_action(&p, 3).unwrap();
        assert!(q.beta.norm() < 1e-12 && q.gamma.norm() < 1e-12);
    }

    #[test]
    fn rotation_order_detection() {
        assert_eq!(detect_rotation_order(1.0 / 7.0), Some((1, 7)));
        assert_eq!(detect_rotation_order(3.0 / 1000.0), Some((3, 1000)));
        assert_eq!(detect_rotation_order(2f64.sqrt() - 1.0), None);
    }
}
