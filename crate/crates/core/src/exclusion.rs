//! Jørgensen-type inequalities, excluded disks in the γ-plane and slice
//! rasterization.
//!
//! A value v is *base-excluded* at β when a bare inequality rules out every
//! non-elementary discrete group with commutator parameter v. Good-word
//! polynomials push this backwards: if p_w(γ, β) is base-excluded then so is
//! γ. Values that can only come from elementary groups (shared fixed points,
//! finite spherical groups, …) act as stop points and never exclude.

use std::collections::{BTreeMap, HashMap};
use std::f64::consts::PI;
use std::sync::{Mutex, OnceLock};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::moebius::TraceParams;
use crate::poly;
use crate::triangle::{self, Order};
use crate::words::{self, GoodWord, TracePolynomial};
use crate::{Error, Result, C64};

const STRICT: f64 = 1e-9;
const EXCEPTION_TOL: f64 = 1e-7;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Disk in the γ-plane free of Kleinian parameters except at listed centers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExclusionDisk {
    pub center: C64,
    pub radius: f64,
    pub exceptional_centers: Vec<C64>,
    pub provenance: String,
}

impl ExclusionDisk {
    pub fn contains(&self, z: C64) -> bool {
        (z - self.center).norm() < self.radius
    }

    /// Inside and not at an exceptional center.
    pub fn excludes(&self, z: C64) -> bool {
        self.contains(z) && !self.exceptional_centers.iter().any(|e| (z - e).norm() < EXCEPTION_TOL)
    }

    /// Image under γ ↦ β − γ (valid when the second generator is an involution).
    pub fn reflect(&self, beta: C64) -> ExclusionDisk {
        ExclusionDisk {
            center: beta - self.center,
            radius: self.radius,
            exceptional_centers: self.exceptional_centers.iter().map(|e| beta - e).collect(),
            provenance: format!("{} reflected by γ ↦ β − γ", self.provenance),
        }
    }
}

/// |γ| + |β| − 1.
pub fn jorgensen_margin(params: &TraceParams) -> f64 {
    params.gamma.norm() + params.beta.norm() - 1.0
}

/// |γ| + |1 + β| − 1, flagged (inconclusive) when γ = 1 + β.
pub fn modified_jorgensen_margin(params: &TraceParams) -> (f64, bool) {
    let one_plus = params.beta + 1.0;
    let flag = (params.gamma - one_plus).norm() < 1e-12;
    (params.gamma.norm() + one_plus.norm() - 1.0, flag)
}

/// |p_w(γ, β)| + |β| − 1, flagged when p_w(γ, β) vanishes.
pub fn word_inequality(p: &TracePolynomial, params: &TraceParams) -> (f64, bool) {
    let v = p.eval(params.gamma, params.beta);
    (v.norm() + params.beta.norm() - 1.0, v.norm() < 1e-12)
}

/// Real root of r³ + r² − 1 (radius of the Riley disks about ±1).
pub fn riley_r0() -> f64 {
    newton_real(|r| (r * r * r + r * r - 1.0, 3.0 * r * r + 2.0 * r), 0.75)
}

fn newton_real(f: impl Fn(f64) -> (f64, f64), mut x: f64) -> f64 {
    for _ in 0..100 {
        let (v, d) = f(x);
        let step = v / d;
        x -= step;
        if step.abs() < 1e-16 * (1.0 + x.abs()) {
            break;
        }
    }
    x
}

/// D(0,1), and D(±1, r₀) with the (2,3,∞) groups at their centers.
pub fn riley_excluded_disks() -> Vec<ExclusionDisk> {
    let r0 = riley_r0();
    vec![
        ExclusionDisk {
            center: c(0.0, 0.0),
            radius: 1.0,
            exceptional_centers: vec![],
            provenance: "|γ| + |β| ≥ 1 at β = 0".into(),
        },
        ExclusionDisk {
            center: c(1.0, 0.0),
            radius: r0,
            exceptional_centers: vec![c(1.0, 0.0)],
            provenance: "z(1−z)² (aba^-1b^-1a after γ ↦ −γ)".into(),
        },
        ExclusionDisk {
            center: c(-1.0, 0.0),
            radius: r0,
            exceptional_centers: vec![c(-1.0, 0.0)],
            provenance: "z(1+z)² (abABa at β = 0)".into(),
        },
    ]
}

/// Lower bound for |γ| when the first generator has order p (p ∈ {3, 6}).
pub fn order_p_minimum_gamma(p: u32) -> Result<f64> {
    match p {
        3 => {
            let f = |r: f64| {
                let v = r * r * (r + 3.0) * (r + 2.0).powi(2) - 1.0;
                let d = 2.0 * r * (r + 3.0) * (r + 2.0).powi(2)
                    + r * r * (r + 2.0).powi(2)
                    + 2.0 * r * r * (r + 3.0) * (r + 2.0);
                (v, d)
            };
            Ok(newton_real(f, 0.25))
        }
        6 => Ok(1.0),
        _ => Err(Error::InvalidInput(format!("order {p} not supported"))),
    }
}

/// The order-3 disks: |γ| < 2cos(2π/7) − 1, and the disks about −2 and −1
/// obtained from z(z+2)⁴ and the symmetry γ ↦ β − γ.
pub fn order3_disks() -> Result<Vec<ExclusionDisk>> {
    let r3 = order_p_minimum_gamma(3)?;
    let base = ExclusionDisk {
        center: c(0.0, 0.0),
        radius: r3,
        exceptional_centers: vec![],
        provenance: "|γ| ≥ 2cos(2π/7) − 1 for order 3".into(),
    };
    let p = GoodWord::parse("aBAbabABa").and_then(|w| words::trace_polynomial(&w, None))?;
    let beta = c(-3.0, 0.0);
    let d2 = excluded_disk_from_polynomial(&p.poly.at_beta(beta), c(-2.0, 0.0), &base, "z(z+2)^4 (aBAbabABa at β = −3)")?;
    let d1 = d2.reflect(beta);
    Ok(vec![base, d2, d1])
}

/// Disks known at β: the Riley disks at β = 0 and the order-3 disks at β = −3.
pub fn known_disks(beta: C64) -> Result<Vec<ExclusionDisk>> {
    if beta.norm() < 1e-12 {
        Ok(riley_excluded_disks())
    } else if (beta + 3.0).norm() < 1e-12 {
        order3_disks()
    } else {
        Ok(vec![])
    }
}

/// Taylor coefficients of p about `center` (ascending in (z − center)).
fn taylor_shift(coeffs: &[C64], center: C64) -> Vec<C64> {
    let mut b = coeffs.to_vec();
    let n = b.len();
    for i in 0..n {
        for j in (i..n - 1).rev() {
            let t = b[j + 1] * center;
            b[j] += t;
        }
    }
    b
}

/// Largest r such that max |p(z) − p(center)| over |z − center| ≤ r stays
/// below the target radius, certified two ways (coefficient majorant, and
/// 4096-point circle sampling plus a Lipschitz allowance); the larger
/// certified radius is returned.
pub fn excluded_disk_from_polynomial(
    coeffs: &[C64],
    center: C64,
    target: &ExclusionDisk,
    provenance: &str,
) -> Result<ExclusionDisk> {
    if !(target.radius > 0.0) {
        return Err(Error::NoRadius);
    }
    let pc = poly::eval(coeffs, center);
    if (pc - target.center).norm() > 1e-9 * (1.0 + target.center.norm()) {
        return Err(Error::InvalidInput(format!(
            "p(center) = {pc} is not the target center {}",
            target.center
        )));
    }
    let b = taylor_shift(coeffs, center);
    let abs: Vec<f64> = b.iter().skip(1).map(|x| x.norm()).collect();
    if abs.iter().all(|&a| a == 0.0) {
        return Err(Error::InvalidInput("constant polynomial".into()));
    }
    let majorant = |r: f64| abs.iter().enumerate().map(|(k, a)| a * r.powi(k as i32 + 1)).sum::<f64>();
    let lip = |r: f64| abs.iter().enumerate().map(|(k, a)| (k as f64 + 1.0) * a * r.powi(k as i32 + 1)).sum::<f64>();
    let big = target.radius;
    let mut hi = 1.0;
    while majorant(hi) < big {
        hi *= 2.0;
    }
    let r_a = bisect(0.0, hi, |r| majorant(r) < big);

    const N: usize = 4096;
    let dphi = 2.0 * PI / N as f64;
    let sampled = |r: f64| {
        let m = (0..N)
            .map(|k| (poly::eval(coeffs, center + C64::from_polar(r, k as f64 * dphi)) - pc).norm())
            .fold(0.0, f64::max);
        m + lip(r) * dphi / 2.0 < big
    };
    let mut hi_b = r_a.max(1e-12) * 2.0;
    while sampled(hi_b) && hi_b < 1e6 {
        hi_b *= 2.0;
    }
    let r_b = if sampled(r_a) { bisect(r_a, hi_b, sampled) } else { 0.0 };
    let radius = r_a.max(r_b);
    if !(radius > 0.0) {
        return Err(Error::NoRadius);
    }

    let mut exceptional = Vec::new();
    for e in std::iter::once(target.center).chain(target.exceptional_centers.iter().copied()) {
        let mut shifted = coeffs.to_vec();
        shifted[0] -= e;
        for z in cluster_roots(&shifted, poly::roots(&shifted)?) {
            if (z - center).norm() < radius && !exceptional.iter().any(|w: &C64| (w - z).norm() < 1e-6) {
                let z = if (z - center).norm() < 1e-9 * (1.0 + center.norm()) { center } else { z };
                exceptional.push(z);
            }
        }
    }
    Ok(ExclusionDisk { center, radius, exceptional_centers: exceptional, provenance: provenance.into() })
}

/// Multiple roots come back from the solver as small clusters. A cluster of
/// size m is a simple root of the (m−1)-th derivative, so it is polished by
/// Newton there, starting from the centroid.
fn cluster_roots(coeffs: &[C64], roots: Vec<C64>) -> Vec<C64> {
    let mut groups: Vec<Vec<C64>> = Vec::new();
    for z in roots {
        match groups.iter_mut().find(|g| g.iter().any(|w| (w - z).norm() < 1e-3 * (1.0 + z.norm()))) {
            Some(g) => g.push(z),
            None => groups.push(vec![z]),
        }
    }
    groups
        .into_iter()
        .map(|g| {
            let mut d = coeffs.to_vec();
            for _ in 1..g.len() {
                d = d.iter().enumerate().skip(1).map(|(k, a)| a * k as f64).collect();
            }
            let mut z = g.iter().sum::<C64>() / g.len() as f64;
            for _ in 0..50 {
                let (v, dv) = poly::eval_with_derivative(&d, z);
                if dv.norm() == 0.0 {
                    break;
                }
                let step = v / dv;
                z -= step;
                if step.norm() < 1e-16 * (1.0 + z.norm()) {
                    break;
                }
            }
            z
        })
        .collect()
}

fn bisect(mut lo: f64, mut hi: f64, ok: impl Fn(f64) -> bool) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if ok(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 * hi.max(1.0) {
            break;
        }
    }
    lo
}

/// Battery outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Excluded,
    FreeProduct,
    Unknown,
}

/// Detects β = −4 sin²(πk/p) with gcd(k, p) = 1 and p ≤ 1000.
pub fn elliptic_order_of_beta(beta: C64) -> Option<(u32, u32)> {
    if beta.im.abs() > 1e-9 || beta.re >= -1e-12 || beta.re < -4.0 - 1e-9 {
        return None;
    }
    let t = ((-beta.re / 4.0).clamp(0.0, 1.0)).sqrt().asin() / PI;
    for p in 2..=1000u32 {
        let k = (t * p as f64).round();
        if k >= 1.0 && (t * p as f64 - k).abs() < 1e-9 * p as f64 {
            return Some((p, k as u32));
        }
    }
    None
}

fn order_of(beta: C64) -> Option<Order> {
    if beta.norm() < 1e-12 {
        return Some(Order::Infinite);
    }
    match elliptic_order_of_beta(beta) {
        Some((p, 1)) => Some(Order::Finite(p)),
        _ => None,
    }
}

/// A compiled exclusion battery for a fixed (β, β′).
#[derive(Debug, Clone)]
pub struct Battery {
    pub beta: C64,
    pub beta_prime: C64,
    pub depth: usize,
    /// Word names and univariate polynomials at β (only when β′ = −4).
    words: Vec<(String, Vec<C64>)>,
    exceptions: Vec<C64>,
    real_interval: bool,
    order3: Option<f64>,
    free: Option<(f64, C64)>,
    involution: bool,
}

/// Compiled polynomials of the bundled named words.
pub fn default_words() -> Result<Vec<(String, TracePolynomial)>> {
    words::named_words().iter().map(|(_, w)| Ok((w.to_string(), compiled(w)?))).collect()
}

/// Compiles a word once per process.
pub fn compiled(word: &str) -> Result<TracePolynomial> {
    static CACHE: OnceLock<Mutex<HashMap<String, TracePolynomial>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().expect("cache lock").get(word) {
        return Ok(p.clone());
    }
    let p = words::trace_polynomial(&GoodWord::parse(word)?, None)?;
    cache.lock().expect("cache lock").insert(word.to_string(), p.clone());
    Ok(p)
}

impl Battery {
    pub fn new(beta: C64, beta_prime: C64, words: &[(String, TracePolynomial)], depth: usize) -> Result<Self> {
        let involution = (beta_prime + 4.0).norm() < 1e-12;
        let words = if involution {
            words.iter().map(|(n, p)| (n.clone(), p.poly.at_beta(beta))).collect()
        } else {
            Vec::new()
        };
        let mut exceptions = vec![c(0.0, 0.0), beta, beta + 1.0];
        let mut real_interval = false;
        if let Some((p, _)) = elliptic_order_of_beta(beta) {
            real_interval = p == 2;
            if (3..=5).contains(&p) {
                let entries = triangle::all_angle_entries()?;
                for q in 2..=5u32 {
                    for k in 1..q {
                        if num_integer::gcd(k, q) != 1 {
                            continue;
                        }
                        let bq = -4.0 * (PI * k as f64 / q as f64).sin().powi(2);
                        for e in entries
                            .iter()
                            .filter(|e| e.theta > 0.0 && (e.p.min(e.q), e.p.max(e.q)) == (p.min(q), p.max(q)))
                        {
                            exceptions.push(-beta * bq * e.theta.sin().powi(2) / 4.0);
                        }
                    }
                }
            }
        }
        let order3 = if (beta + 3.0).norm() < 1e-12 { Some(order_p_minimum_gamma(3)?) } else { None };
        let free = match (order_of(beta), order_of(beta_prime)) {
            (Some(p), Some(q)) => triangle::free_product_ellipse(p, q).ok(),
            _ => None,
        };
        Ok(Battery { beta, beta_prime, depth, words, exceptions, real_interval, order3, free, involution })
    }

    /// The bundled battery at (β, −4) with composition depth 2.
    pub fn standard(beta: C64) -> Result<Self> {
        Battery::new(beta, c(-4.0, 0.0), &default_words()?, 2)
    }

    /// Whether v can only arise from an elementary subgroup.
    pub fn is_exception(&self, v: C64) -> bool {
        if self.real_interval && v.im.abs() < EXCEPTION_TOL && v.re > -4.0 - EXCEPTION_TOL && v.re < EXCEPTION_TOL {
            return true;
        }
        self.exceptions.iter().any(|e| (v - e).norm() < EXCEPTION_TOL * (1.0 + e.norm()))
    }

    /// Name of the inequality that rules out v as γ of a non-elementary
    /// discrete ⟨f, h⟩ with β(f) = β, if any.
    pub fn base_excluded(&self, v: C64) -> Option<&'static str> {
        if !v.is_finite() || self.is_exception(v) {
            return None;
        }
        let r = v.norm();
        if r + self.beta.norm() < 1.0 - STRICT {
            return Some("jorgensen");
        }
        if r + (self.beta + 1.0).norm() < 1.0 - STRICT {
            return Some("modified jorgensen");
        }
        if let Some(r3) = self.order3 {
            if r < r3 * (1.0 - STRICT) {
                return Some("order-3 bound");
            }
        }
        None
    }

    fn search(&self, v: C64, depth: usize, path: &mut Vec<usize>) -> bool {
        if depth == 0 {
            return false;
        }
        for (i, (_, p)) in self.words.iter().enumerate() {
            let w = poly::eval(p, v);
            if !w.is_finite() || self.is_exception(w) {
                continue;
            }
            path.push(i);
            if self.base_excluded(w).is_some() || self.search(w, depth - 1, path) {
                return true;
            }
            path.pop();
        }
        false
    }

    /// Verdict with a short human-readable reason.
    pub fn explain(&self, gamma: C64) -> (Verdict, Option<String>) {
        let mut starts = vec![(gamma, "")];
        if self.involution {
            starts.push((self.beta - gamma, "β−γ"));
        }
        for (v, tag) in &starts {
            if let Some(why) = self.base_excluded(*v) {
                return (Verdict::Excluded, Some(format!("{why} at {}", if tag.is_empty() { "γ" } else { tag })));
            }
        }
        for (v, tag) in &starts {
            if self.is_exception(*v) {
                continue;
            }
            let mut path = Vec::new();
            if self.search(*v, self.depth, &mut path) {
                let names: Vec<&str> = path.iter().map(|&i| self.words[i].0.as_str()).collect();
                let at = if tag.is_empty() { "γ" } else { tag };
                return (Verdict::Excluded, Some(format!("word chain [{}] at {at}", names.join(" ∘ "))));
            }
        }
        if let Some((lambda, focus)) = self.free {
            if gamma.norm() + (gamma - focus).norm() >= lambda * (1.0 + STRICT) {
                return (Verdict::FreeProduct, Some("outside the free-product ellipse".into()));
            }
        }
        (Verdict::Unknown, None)
    }

    pub fn verdict(&self, gamma: C64) -> Verdict {
        self.explain(gamma).0
    }
}

/// One-shot battery verdict at (γ, β, −4) with the given words and depth 2.
pub fn gamma_battery(gamma: C64, beta: C64, words: &[(String, TracePolynomial)]) -> Result<Verdict> {
    Ok(Battery::new(beta, c(-4.0, 0.0), words, 2)?.verdict(gamma))
}

/// Rectangle in the γ-plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl Window {
    pub fn is_degenerate(&self) -> bool {
        !(self.re_max > self.re_min && self.im_max > self.im_min)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SliceSpec {
    pub beta: C64,
    pub beta_prime: C64,
    pub window: Window,
    pub width: usize,
    pub height: usize,
    pub words: Vec<String>,
    pub depth: usize,
    /// γ values to overlay as known discrete groups.
    #[serde(default)]
    pub marked: Vec<C64>,
}

impl SliceSpec {
    /// Bundled words, β′ = −4, depth 2, no overlay.
    pub fn new(beta: C64, window: Window, width: usize, height: usize) -> Self {
        SliceSpec {
            beta,
            beta_prime: c(-4.0, 0.0),
            window,
            width,
            height,
            words: words::named_words().iter().map(|(_, w)| w.to_string()).collect(),
            depth: 2,
            marked: vec![],
        }
    }

    /// γ at the center of pixel (col, row); row 0 is the top edge.
    pub fn pixel_gamma(&self, col: usize, row: usize) -> C64 {
        let w = &self.window;
        let x = w.re_min + (col as f64 + 0.5) * (w.re_max - w.re_min) / self.width as f64;
        let y = w.im_max - (row as f64 + 0.5) * (w.im_max - w.im_min) / self.height as f64;
        c(x, y)
    }

    /// Pixel containing γ, if inside the window.
    pub fn pixel_of(&self, g: C64) -> Option<(usize, usize)> {
        let w = &self.window;
        let fx = (g.re - w.re_min) / (w.re_max - w.re_min);
        let fy = (w.im_max - g.im) / (w.im_max - w.im_min);
        if !(0.0..1.0).contains(&fx) || !(0.0..1.0).contains(&fy) {
            return None;
        }
        Some(((fx * self.width as f64) as usize, (fy * self.height as f64) as usize))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PixelStatus {
    Excluded,
    FreeProduct,
    Unknown,
    MarkedDiscrete,
}

impl From<Verdict> for PixelStatus {
    fn from(v: Verdict) -> Self {
        match v {
            Verdict::Excluded => PixelStatus::Excluded,
            Verdict::FreeProduct => PixelStatus::FreeProduct,
            Verdict::Unknown => PixelStatus::Unknown,
        }
    }
}

impl PixelStatus {
    pub fn rgb(self) -> [u8; 3] {
        match self {
            PixelStatus::Excluded => [255, 0, 0],
            PixelStatus::FreeProduct => [0, 0, 255],
            PixelStatus::Unknown => [255, 255, 255],
            PixelStatus::MarkedDiscrete => [0, 0, 0],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SliceRaster {
    pub spec: SliceSpec,
    pub width: usize,
    pub height: usize,
    /// Row-major, top row first.
    pub status: Vec<PixelStatus>,
}

/// JSON sidecar content.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RasterMetadata {
    pub spec: SliceSpec,
    pub disks: Vec<ExclusionDisk>,
    pub counts: BTreeMap<PixelStatus, usize>,
}

impl SliceRaster {
    pub fn get(&self, col: usize, row: usize) -> PixelStatus {
        self.status[row * self.width + col]
    }

    /// Binary P6 image.
    pub fn to_ppm(&self) -> Vec<u8> {
        let mut out = format!("P6\n{} {}\n255\n", self.width, self.height).into_bytes();
        for s in &self.status {
            out.extend_from_slice(&s.rgb());
        }
        out
    }

    pub fn count(&self, s: PixelStatus) -> usize {
        self.status.iter().filter(|&&t| t == s).count()
    }

    pub fn metadata(&self) -> Result<RasterMetadata> {
        let mut counts = BTreeMap::new();
        for s in &self.status {
            *counts.entry(*s).or_insert(0) += 1;
        }
        let disks = if (self.spec.beta_prime + 4.0).norm() < 1e-12 { known_disks(self.spec.beta)? } else { vec![] };
        Ok(RasterMetadata { spec: self.spec.clone(), disks, counts })
    }
}

/// Per-pixel battery verdicts; rows are evaluated in parallel and assembled
/// in order, so the output does not depend on the thread count.
pub fn rasterize_slice(spec: &SliceSpec) -> Result<SliceRaster> {
    if spec.window.is_degenerate() || spec.width == 0 || spec.height == 0 {
        return Ok(SliceRaster { spec: spec.clone(), width: 0, height: 0, status: vec![] });
    }
    let words = spec.words.iter().map(|w| Ok((w.clone(), compiled(w)?))).collect::<Result<Vec<_>>>()?;
    let battery = Battery::new(spec.beta, spec.beta_prime, &words, spec.depth)?;
    let rows: Vec<Vec<PixelStatus>> = (0..spec.height)
        .into_par_iter()
        .map(|row| (0..spec.width).map(|col| battery.verdict(spec.pixel_gamma(col, row)).into()).collect())
        .collect();
    let mut status: Vec<PixelStatus> = rows.into_iter().flatten().collect();
    for g in &spec.marked {
        if let Some((col, row)) = spec.pixel_of(*g) {
            status[row * spec.width + col] = PixelStatus::MarkedDiscrete;
        }
    }
    Ok(SliceRaster { spec: spec.clone(), width: spec.width, height: spec.height, status })
}

/// Polishes a rounded tabulated γ to the nearest root of its minimal
/// polynomial, so that exact elementary values are recognized.
pub fn refine_to_root(coeffs: &[C64], guess: C64) -> Result<C64> {
    let roots = poly::roots(coeffs)?;
    roots
        .into_iter()
        .min_by(|a, b| (a - guess).norm().total_cmp(&(b - guess).norm()))
        .ok_or_else(|| Error::InvalidInput("constant polynomial".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn r3() -> f64 {
        2.0 * (2.0 * PI / 7.0).cos() - 1.0
    }

    #[test]
    fn margins() {
        let fig8 = TraceParams::with_involution(c(0.5, 3f64.sqrt() / 2.0), c(0.0, 0.0));
        assert!(jorgensen_margin(&fig8).abs() < 1e-12);
        assert_eq!(jorgensen_margin(&TraceParams::with_involution(c(2.0, 0.0), c(0.0, 0.0))), 1.0);
        assert!((jorgensen_margin(&TraceParams::with_involution(c(0.3, 0.0), c(-0.2, 0.0))) + 0.5).abs() < 1e-12);
        let (m, f) = modified_jorgensen_margin(&TraceParams::with_involution(c(0.5, 0.0), c(-1.0, 0.0)));
        assert!((m + 0.5).abs() < 1e-12 && !f);
        let (_, f) = modified_jorgensen_margin(&TraceParams::with_involution(c(-2.0, 0.0), c(-3.0, 0.0)));
        assert!(f);
    }

    #[test]
    fn word_inequality_special_cases() {
        let aba = compiled("abA").unwrap();
        // γ(γ − β): flagged at γ = β.
        let (_, flag) = word_inequality(&aba, &TraceParams::with_involution(c(-2.0, 0.0), c(-2.0, 0.0)));
        assert!(flag);
        let (m, _) = word_inequality(&aba, &TraceParams::with_involution(c(0.5, 0.0), c(-0.5, 0.0)));
        assert!((m - (0.5f64 * 1.0 + 0.5 - 1.0)).abs() < 1e-12);
        // At β = 0 one of the length-5 words is z(1+z)²; zero at γ = −1.
        let w = compiled("abABa").unwrap();
        let (_, flag) = word_inequality(&w, &TraceParams::with_involution(c(-1.0, 0.0), c(0.0, 0.0)));
        assert!(flag);
        let z = c(0.3, 0.7);
        assert!((w.eval(z, c(0.0, 0.0)) - z * (z + 1.0).powu(2)).norm() < 1e-12);
    }

    #[test]
    fn constants() {
        let r0 = riley_r0();
        assert!((r0 - 0.7548776662).abs() < 1e-9);
        assert!((r0.powi(3) + r0 * r0 - 1.0).abs() < 1e-12);
        let m3 = order_p_minimum_gamma(3).unwrap();
        assert!((m3 - r3()).abs() < 1e-12);
        assert!((m3 * m3 * (m3 + 3.0) * (m3 + 2.0).powi(2) - 1.0).abs() < 1e-12);
        assert_eq!(order_p_minimum_gamma(6).unwrap(), 1.0);
        assert!(order_p_minimum_gamma(4).is_err());
    }

    #[test]
    fn order3_disk_radius() {
        let disks = order3_disks().unwrap();
        let d = &disks[1];
        let r1 = d.radius;
        assert!(((2.0 + r1) * r1.powi(4) - r3()).abs() < 1e-9);
        assert!((r1 - 0.557459).abs() < 1e-6);
        assert_eq!(d.exceptional_centers, vec![c(-2.0, 0.0)]);
        assert!((disks[2].center + 1.0).norm() < 1e-12);
        assert!((disks[2].radius - r1).abs() < 1e-15);
    }

    #[test]
    fn zero_target_radius_errors() {
        let t = ExclusionDisk { center: c(0.0, 0.0), radius: 0.0, exceptional_centers: vec![], provenance: String::new() };
        let p = vec![c(0.0, 0.0), c(1.0, 0.0)];
        assert_eq!(excluded_disk_from_polynomial(&p, c(0.0, 0.0), &t, "x"), Err(Error::NoRadius));
    }

    #[test]
    fn disk_samples_satisfy_chain() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let beta = c(-3.0, 0.0);
        let p = compiled("aBAbabABa").unwrap().poly.at_beta(beta);
        let disks = order3_disks().unwrap();
        for _ in 0..1000 {
            let z = disks[1].center + C64::from_polar(disks[1].radius * rng.gen::<f64>().sqrt(), rng.gen::<f64>() * 2.0 * PI);
            if disks[1].excludes(z) {
                assert!(poly::eval(&p, z).norm() < disks[0].radius);
            }
            // The reflected disk through γ ↦ β − γ.
            let zr = beta - z;
            assert!(disks[2].contains(zr));
            assert!(poly::eval(&p, beta - zr).norm() < disks[0].radius || !disks[2].excludes(zr));
        }
        let riley = riley_excluded_disks();
        let q = compiled("abABa").unwrap().poly.at_beta(c(0.0, 0.0));
        for _ in 0..1000 {
            let z = riley[2].center + C64::from_polar(riley[2].radius * rng.gen::<f64>().sqrt(), rng.gen::<f64>() * 2.0 * PI);
            if riley[2].excludes(z) {
                assert!(poly::eval(&q, z).norm() < 1.0);
                let w = -z;
                assert!(riley[1].excludes(w));
                assert!((w * (1.0 - w).powu(2)).norm() < 1.0);
            }
        }
    }

    #[test]
    fn riley_disk_radius_from_polynomial() {
        let q = compiled("abABa").unwrap().poly.at_beta(c(0.0, 0.0));
        let d = excluded_disk_from_polynomial(&q, c(-1.0, 0.0), &riley_excluded_disks()[0], "z(1+z)^2").unwrap();
        assert!((d.radius - riley_r0()).abs() < 1e-9);
        assert_eq!(d.exceptional_centers, vec![c(-1.0, 0.0)]);
    }

    #[test]
    fn battery_examples() {
        let b = Battery::standard(c(-3.0, 0.0)).unwrap();
        assert_eq!(b.verdict(c(0.1, 0.0)), Verdict::Excluded);
        assert_eq!(b.verdict(c(20.0, 0.0)), Verdict::FreeProduct);
        // Root of z⁴+6z³+12z²+9z+1, a genuine lattice.
        let g = refine_to_root(&[c(1.0, 0.0), c(9.0, 0.0), c(12.0, 0.0), c(6.0, 0.0), c(1.0, 0.0)], c(-1.5, 0.6066)).unwrap();
        assert_eq!(b.verdict(g), Verdict::Unknown);
        assert_eq!(b.verdict(c(-2.0, 0.0)), Verdict::Unknown);
        assert_eq!(b.verdict(c(-2.0, 0.3)), Verdict::Excluded);
        let riley = Battery::standard(c(0.0, 0.0)).unwrap();
        assert_eq!(riley.verdict(c(0.5, 0.0)), Verdict::Excluded);
        assert_eq!(riley.verdict(c(1.0, 0.0)), Verdict::Unknown);
        assert_eq!(riley.verdict(c(0.5, 3f64.sqrt() / 2.0)), Verdict::Unknown);
    }

    #[test]
    fn elliptic_order_detection() {
        assert_eq!(elliptic_order_of_beta(c(-3.0, 0.0)), Some((3, 1)));
        assert_eq!(elliptic_order_of_beta(c(-1.0, 0.0)), Some((6, 1)));
        assert_eq!(elliptic_order_of_beta(c(-4.0, 0.0)), Some((2, 1)));
        let b = crate::moebius::elliptic_beta(7) * (3.0f64).powi(0);
        assert_eq!(elliptic_order_of_beta(c(b, 0.0)), Some((7, 1)));
        let b2 = -4.0 * (2.0 * PI / 5.0).sin().powi(2);
        assert_eq!(elliptic_order_of_beta(c(b2, 0.0)), Some((5, 2)));
        assert_eq!(elliptic_order_of_beta(c(0.0, 0.0)), None);
        assert_eq!(elliptic_order_of_beta(c(-1.0, 0.5)), None);
    }

    #[test]
    fn raster_basics() {
        let w = Window { re_min: -4.0, re_max: 4.0, im_min: -3.0, im_max: 3.0 };
        let spec = SliceSpec::new(c(0.0, 0.0), w, 40, 30);
        let r = rasterize_slice(&spec).unwrap();
        assert_eq!(r.status.len(), 1200);
        for row in 0..30 {
            for col in 0..40 {
                if spec.pixel_gamma(col, row).norm() < 1.0 {
                    assert_eq!(r.get(col, row), PixelStatus::Excluded);
                }
            }
        }
        let ppm = r.to_ppm();
        assert!(ppm.starts_with(b"P6\n40 30\n255\n"));
        assert_eq!(ppm.len(), "P6\n40 30\n255\n".len() + 3600);

        let empty = rasterize_slice(&SliceSpec::new(c(0.0, 0.0), Window { re_min: 1.0, re_max: 1.0, im_min: 0.0, im_max: 1.0 }, 10, 10)).unwrap();
        assert_eq!((empty.width, empty.height, empty.status.len()), (0, 0, 0));

        let mut marked = spec.clone();
        marked.marked = vec![c(0.5, 3f64.sqrt() / 2.0)];
        let m = rasterize_slice(&marked).unwrap();
        assert_eq!(m.count(PixelStatus::MarkedDiscrete), 1);
    }
}
