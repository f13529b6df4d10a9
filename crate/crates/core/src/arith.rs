//! Arithmeticity screening of commutator parameters: the root-profile
//! criterion for γ at integral β, Schur's discriminant bound, bounded
//! enumeration of candidate minimal polynomials, and row checks for the
//! shipped tables of arithmetic groups.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::exclusion::{Battery, Verdict};
use crate::poly::{self, parse_int_poly, BiPoly, IntPoly};
use crate::tables;
use crate::triangle::{free_product_ellipse, Order};
use crate::{Error, Result, C64};

/// Schur's bound M_r on ∏(x_i − x_j)² for r points in [−1, 1].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchurBound {
    pub r: u32,
    pub m: BigRational,
}

impl SchurBound {
    pub fn to_f64(&self) -> f64 {
        self.m.to_f64().unwrap_or(f64::NAN)
    }
}

fn power_product(ks: impl Iterator<Item = u32>) -> BigInt {
    ks.fold(BigInt::one(), |acc, k| acc * num_traits::pow(BigInt::from(k), k as usize))
}

/// M_1 = 1, M_2 = M_3 = 4 and, for r ≥ 4,
/// M_r = (2²3³⋯r^r · 2²3³⋯(r−2)^{r−2}) / (3³5⁵⋯(2r−3)^{2r−3}).
pub fn schur_bound(r: u32) -> Result<SchurBound> {
    let m = match r {
        0 => return Err(Error::InvalidInput("r must be positive".into())),
        1 => BigRational::one(),
        2 | 3 => BigRational::from_integer(4.into()),
        _ => {
            let num = power_product(2..=r) * power_product(2..=r - 2);
            let den = power_product((3..=2 * r - 3).step_by(2));
            BigRational::new(num, den)
        }
    };
    Ok(SchurBound { r, m })
}

/// Exact discriminant.
pub fn poly_discriminant(p: &IntPoly) -> BigInt {
    p.discriminant()
}

/// f ≥ 1 with disc = fundamental · f², if it exists.
pub fn square_factor(disc: &BigInt, fundamental: i64) -> Option<BigInt> {
    let fd = BigInt::from(fundamental);
    if fd.is_zero() || !(disc % &fd).is_zero() {
        return None;
    }
    let q = disc / &fd;
    if q.is_negative() {
        return None;
    }
    let s = q.sqrt();
    (&s * &s == q).then_some(s)
}

// ---- Sturm sequences over Q ----

fn to_rational(p: &IntPoly) -> Vec<BigRational> {
    p.coeffs.iter().map(|c| BigRational::from_integer(c.clone())).collect()
}

fn rat_trim(mut p: Vec<BigRational>) -> Vec<BigRational> {
    while p.len() > 1 && p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn rat_rem(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lb = &b[db];
    while r.len() > db && !(r.len() == 1 && r[0].is_zero()) {
        let dr = r.len() - 1;
        let q = &r[dr] / lb;
        for i in 0..=db {
            let t = &q * &b[i];
            r[dr - db + i] -= t;
        }
        r.pop();
        r = rat_trim(r);
        if r.len() <= db {
            break;
        }
    }
    rat_trim(r)
}

fn sturm_sequence(p: &IntPoly) -> Vec<Vec<BigRational>> {
    let p0 = to_rational(p);
    let p1: Vec<BigRational> = rat_trim(to_rational(&p.derivative()));
    let mut seq = vec![p0, p1];
    loop {
        let n = seq.len();
        if seq[n - 1].len() == 1 && seq[n - 1][0].is_zero() {
            seq.pop();
            break;
        }
        if seq[n - 1].len() == 1 {
            break;
        }
        let r = rat_rem(&seq[n - 2], &seq[n - 1]);
        seq.push(r.into_iter().map(|c| -c).collect());
    }
    seq
}

fn rat_eval(p: &[BigRational], x: &BigRational) -> BigRational {
    p.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
}

fn sign_changes(signs: impl Iterator<Item = i32>) -> usize {
    let mut last = 0;
    let mut n = 0;
    for s in signs.filter(|&s| s != 0) {
        if last != 0 && s != last {
            n += 1;
        }
        last = s;
    }
    n
}

fn sig(x: &BigRational) -> i32 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

/// Distinct real roots of a squarefree polynomial.
pub fn count_real_roots(p: &IntPoly) -> usize {
    let seq = sturm_sequence(p);
    let at = |pos: bool| {
        sign_changes(seq.iter().map(|q| {
            let d = q.len() - 1;
            let s = sig(&q[d]);
            if pos || d % 2 == 0 {
                s
            } else {
                -s
            }
        }))
    };
    at(false) - at(true)
}

/// Distinct real roots in the half-open interval (a, b].
pub fn count_roots_in(p: &IntPoly, a: i64, b: i64) -> usize {
    let seq = sturm_sequence(p);
    let v = |x: i64| {
        let x = BigRational::from_integer(x.into());
        sign_changes(seq.iter().map(|q| sig(&rat_eval(q, &x))))
    };
    v(a) - v(b)
}

/// Certified classification of the roots of an integer polynomial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootProfile {
    /// One representative per conjugate pair, Im > 0.
    pub complex_pairs: Vec<C64>,
    pub real_roots: Vec<f64>,
    pub min_separation: f64,
    pub max_residual: f64,
}

impl RootProfile {
    pub fn degree(&self) -> usize {
        2 * self.complex_pairs.len() + self.real_roots.len()
    }
}

fn coeff_scale(p: &IntPoly) -> f64 {
    p.to_f64().iter().fold(0.0f64, |m, c| m.max(c.abs()))
}

fn numeric_roots(p: &IntPoly) -> Result<Vec<C64>> {
    poly::roots(&p.to_complex())
}

/// Roots split into real values and conjugate pairs. The number of real
/// roots is certified by a Sturm sequence; repeated roots are refused.
pub fn root_profile(p: &IntPoly) -> Result<RootProfile> {
    if p.degree() == 0 {
        return Err(Error::InvalidInput("constant polynomial".into()));
    }
    if poly_discriminant(p).is_zero() {
        return Err(Error::Certification("repeated roots".into()));
    }
    let roots = numeric_roots(p)?;
    let n_real = count_real_roots(p);
    profile_from(p, roots, n_real)
}

fn profile_from(p: &IntPoly, mut roots: Vec<C64>, n_real: usize) -> Result<RootProfile> {
    roots.sort_by(|a, b| a.im.abs().total_cmp(&b.im.abs()));
    let mut real: Vec<f64> = roots[..n_real].iter().map(|z| z.re).collect();
    real.sort_by(f64::total_cmp);
    let mut upper: Vec<C64> = roots[n_real..].iter().filter(|z| z.im > 0.0).copied().collect();
    if 2 * upper.len() != roots.len() - n_real {
        return Err(Error::Certification("complex roots do not pair up".into()));
    }
    upper.sort_by(|a, b| b.im.total_cmp(&a.im).then(a.re.total_cmp(&b.re)));
    let mut sep = f64::INFINITY;
    for i in 0..roots.len() {
        for j in i + 1..roots.len() {
            sep = sep.min((roots[i] - roots[j]).norm());
        }
    }
    let coeffs = p.to_complex();
    let scale = coeff_scale(p);
    let deg = p.degree() as i32;
    let mut resid: f64 = 0.0;
    for z in &roots {
        let r = poly::eval(&coeffs, *z).norm() / (scale * z.norm().max(1.0).powi(deg));
        resid = resid.max(r);
    }
    if resid > 1e-9 {
        return Err(Error::Certification(format!("root residual {resid:.2e}")));
    }
    Ok(RootProfile { complex_pairs: upper, real_roots: real, min_separation: sep, max_residual: resid })
}

/// The screening checks, in the order they are reported.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checks {
    pub monic: bool,
    pub one_complex_place: bool,
    pub real_roots_in_interval: bool,
    pub irreducible: bool,
    pub inside_nonfree_ellipse: bool,
}

impl Checks {
    pub fn all(&self) -> bool {
        self.monic && self.one_complex_place && self.real_roots_in_interval && self.irreducible && self.inside_nonfree_ellipse
    }

    /// Bit i set when check i passes (declaration order).
    pub fn bits(&self) -> u8 {
        [self.monic, self.one_complex_place, self.real_roots_in_interval, self.irreducible, self.inside_nonfree_ellipse]
            .iter()
            .enumerate()
            .fold(0, |acc, (i, &b)| acc | ((b as u8) << i))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateGamma {
    /// Ascending integer coefficients.
    pub coefficients: Vec<i64>,
    pub polynomial: String,
    pub gamma: C64,
    pub beta: i64,
    pub checks: Checks,
    pub reason: Option<String>,
    /// Polynomial of β − γ (ascending).
    pub reflected: Vec<i64>,
}

impl CandidateGamma {
    pub fn accepted(&self) -> bool {
        self.checks.all()
    }

    pub fn int_poly(&self) -> IntPoly {
        IntPoly::from_i64(&self.coefficients)
    }
}

/// Elliptic order of the first generator for integral β.
pub fn order_for_beta(beta: i64) -> Result<Order> {
    match beta {
        -3 => Ok(Order::Finite(3)),
        -2 => Ok(Order::Finite(4)),
        -1 => Ok(Order::Finite(6)),
        0 => Ok(Order::Infinite),
        _ => Err(Error::InvalidInput(format!("β = {beta} is not −3, −2, −1 or 0"))),
    }
}

/// (λ, focus) of the non-free ellipse for ⟨f, g⟩ with g of order 2.
pub fn nonfree_region(beta: i64) -> Result<(f64, C64)> {
    free_product_ellipse(order_for_beta(beta)?, Order::Finite(2))
}

/// A nontrivial factorization found by grouping numeric roots into
/// conjugation-closed subsets whose product has integral coefficients;
/// every factor is confirmed by exact division.
pub fn factor_search(p: &IntPoly) -> Result<Option<Vec<IntPoly>>> {
    let n = p.degree();
    if n <= 1 || !p.is_monic() {
        return Ok(None);
    }
    if p.coeffs[0].is_zero() {
        let q = IntPoly::new(p.coeffs[1..].to_vec());
        return Ok(Some(vec![IntPoly::from_i64(&[0, 1]), q]));
    }
    let roots = numeric_roots(p)?;
    factor_from_roots(p, &roots)
}

fn factor_from_roots(p: &IntPoly, roots: &[C64]) -> Result<Option<Vec<IntPoly>>> {
    let n = roots.len();
    for mask in 1u32..(1 << n) - 1 {
        let d = mask.count_ones() as usize;
        if 2 * d > n || (2 * d == n && mask & 1 == 0) {
            continue;
        }
        let mut prod = vec![C64::new(1.0, 0.0)];
        for (i, r) in roots.iter().enumerate() {
            if mask & (1 << i) != 0 {
                let mut next = vec![C64::new(0.0, 0.0); prod.len() + 1];
                for (k, c) in prod.iter().enumerate() {
                    next[k + 1] += c;
                    next[k] -= c * r;
                }
                prod = next;
            }
        }
        let near = prod.iter().all(|c| c.im.abs() < 1e-3 && (c.re - c.re.round()).abs() < 1e-3 && c.re.abs() < 9e15);
        if !near {
            continue;
        }
        let q = IntPoly::from_i64(&prod.iter().map(|c| c.re.round() as i64).collect::<Vec<_>>());
        if let Some(r) = p.div_exact_monic(&q) {
            return Ok(Some(vec![q, r]));
        }
    }
    Ok(None)
}

fn to_i64s(p: &IntPoly) -> Result<Vec<i64>> {
    p.to_i64().ok_or(Error::Overflow("coefficient"))
}

/// Screens P against the root-profile criterion at integral β. Reducible
/// inputs are an error carrying the factors; otherwise the candidate records
/// every check.
pub fn arithmeticity_check(p: &IntPoly, beta: i64) -> Result<CandidateGamma> {
    let (lambda, focus) = nonfree_region(beta)?;
    check_with_region(p, beta, lambda, focus)
}

fn check_with_region(p: &IntPoly, beta: i64, lambda: f64, focus: C64) -> Result<CandidateGamma> {
    let n = p.degree();
    if n == 0 {
        return Err(Error::InvalidInput("constant polynomial".into()));
    }
    let monic = p.is_monic();
    let roots = numeric_roots(p)?;
    if monic {
        if let Some(f) = if p.coeffs[0].is_zero() && n > 1 { factor_search(p)? } else { factor_from_roots(p, &roots)? } {
            return Err(Error::Reducible(f.iter().map(to_i64s).collect::<Result<_>>()?));
        }
    }
    let squarefree = n == 1 || {
        let mut sep = f64::INFINITY;
        for i in 0..n {
            for j in i + 1..n {
                sep = sep.min((roots[i] - roots[j]).norm());
            }
        }
        sep > 1e-5 || !poly_discriminant(p).is_zero()
    };
    if !squarefree {
        return Err(Error::Reducible(vec![]));
    }

    // Numeric classification with margins; anything close to a decision
    // boundary is settled by Sturm counts.
    let b = beta as f64;
    let scale = roots.iter().fold(1.0f64, |m, z| m.max(z.norm()));
    let mut ambiguous = false;
    let mut n_real = 0;
    for z in &roots {
        let im = z.im.abs() / scale;
        if im < 1e-10 {
            n_real += 1;
        } else if im < 1e-6 {
            ambiguous = true;
        }
    }
    let real_in = |x: f64| x > b && x < 0.0;
    let near_edge = |x: f64| (x - b).abs() < 1e-7 || x.abs() < 1e-7;

    let mut sorted = roots.clone();
    sorted.sort_by(|a, b| a.im.abs().total_cmp(&b.im.abs()));
    let mut reals: Vec<f64> = sorted[..n_real].iter().map(|z| z.re).collect();
    ambiguous |= reals.iter().any(|&x| near_edge(x));
    let mut pairs = (n - n_real) / 2;
    let mut interval = reals.iter().all(|&x| real_in(x));
    let numeric_pass = pairs <= 1 && interval;

    if ambiguous || (numeric_pass && monic) {
        let exact_real = count_real_roots(p);
        let exact_in = if beta < 0 { count_roots_in(p, beta, 0) } else { 0 };
        let zero_root = p.coeffs[0].is_zero();
        if exact_real != n_real {
            if !ambiguous {
                return Err(Error::Certification("numeric and Sturm real-root counts differ".into()));
            }
            n_real = exact_real;
            sorted = roots.clone();
            sorted.sort_by(|a, b| a.im.abs().total_cmp(&b.im.abs()));
            reals = sorted[..n_real].iter().map(|z| z.re).collect();
        }
        pairs = (n - n_real) / 2;
        interval = exact_in == n_real && !zero_root;
    }
    let one_place = pairs <= 1;

    let gamma = if pairs >= 1 {
        sorted[n_real..].iter().filter(|z| z.im > 0.0).max_by(|a, b| a.im.total_cmp(&b.im)).copied().unwrap_or(sorted[n - 1])
    } else {
        C64::new(reals.iter().copied().fold(f64::NEG_INFINITY, f64::max), 0.0)
    };
    let gamma = if gamma.im.abs() < 1e-12 { C64::new(gamma.re, 0.0) } else { gamma };
    let inside = gamma.norm() + (gamma - focus).norm() < lambda - 1e-9;

    let checks = Checks {
        monic,
        one_complex_place: one_place,
        real_roots_in_interval: interval,
        irreducible: true,
        inside_nonfree_ellipse: inside,
    };
    let reason = if !monic {
        Some("not monic".into())
    } else if !one_place {
        Some(format!("{pairs} complex pairs"))
    } else if !interval {
        Some(format!("real roots outside ({beta}, 0)"))
    } else if !inside {
        Some("outside the non-free ellipse".into())
    } else {
        None
    };
    Ok(CandidateGamma {
        coefficients: to_i64s(p)?,
        polynomial: p.to_string(),
        gamma,
        beta,
        checks,
        reason,
        reflected: to_i64s(&p.reflect(beta))?,
    })
}

// ---- enumeration ----

#[derive(Debug, Clone, Copy)]
struct Iv(f64, f64);

impl Iv {
    fn add(self, o: Iv) -> Iv {
        Iv(self.0 + o.0, self.1 + o.1)
    }
    fn mul(self, o: Iv) -> Iv {
        let p = [self.0 * o.0, self.0 * o.1, self.1 * o.0, self.1 * o.1];
        Iv(p.iter().copied().fold(f64::INFINITY, f64::min), p.iter().copied().fold(f64::NEG_INFINITY, f64::max))
    }
    fn hull(self, o: Iv) -> Iv {
        Iv(self.0.min(o.0), self.1.max(o.1))
    }
}

fn binom(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Ascending coefficients of ∏(z + y_i), y_i ∈ [0, w], as intervals.
fn real_factor(m: usize, w: f64) -> Vec<Iv> {
    (0..=m).map(|k| if k == m { Iv(1.0, 1.0) } else { Iv(0.0, binom(m, m - k) * w.powi((m - k) as i32)) }).collect()
}

fn iv_mul(a: &[Iv], b: &[Iv]) -> Vec<Iv> {
    let mut out = vec![Iv(0.0, 0.0); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].add(x.mul(*y));
        }
    }
    out
}

/// Integer ranges for a_0 … a_{n−1} of monic degree-n polynomials whose
/// roots are a conjugate pair in the ellipse and n − 2 reals in [β, 0]
/// (or n reals in [β, 0]), by interval multiplication of the factors.
pub fn coefficient_box(beta: i64, n: usize, lambda: f64, focus: C64) -> Vec<(i64, i64)> {
    let w = (-beta) as f64;
    let all_real = real_factor(n, w);
    let iv: Vec<Iv> = if n >= 2 {
        let a = lambda / 2.0;
        let cx = focus.re / 2.0;
        let rmax = a + focus.norm() / 2.0;
        let quad = vec![Iv(0.0, rmax * rmax), Iv(-2.0 * (cx + a), -2.0 * (cx - a)), Iv(1.0, 1.0)];
        let pair = iv_mul(&quad, &real_factor(n - 2, w));
        pair.iter().zip(&all_real).map(|(x, y)| x.hull(*y)).collect()
    } else {
        all_real
    };
    iv[..n].iter().map(|x| ((x.0 - 1e-9).floor() as i64, (x.1 + 1e-9).ceil() as i64)).collect()
}

/// Naive ranges |a_{n−k}| ≤ C(n,k)·R^k with R the largest root modulus the
/// region allows.
pub fn naive_coefficient_box(beta: i64, n: usize, lambda: f64, focus: C64) -> Vec<(i64, i64)> {
    let r = (lambda / 2.0 + focus.norm() / 2.0).max((-beta) as f64);
    (0..n)
        .map(|j| {
            let k = n - j;
            let b = (binom(n, k) * r.powi(k as i32) + 1e-9).ceil() as i64;
            (-b, b)
        })
        .collect()
}

const BOX_LIMIT: f64 = 2e9;

fn box_size(b: &[(i64, i64)]) -> f64 {
    b.iter().map(|(lo, hi)| (hi - lo + 1) as f64).product()
}

fn canonical(c: &CandidateGamma) -> bool {
    let other = IntPoly::from_i64(&c.reflected);
    if other == c.int_poly() {
        return true;
    }
    let g2 = C64::new(c.beta as f64, 0.0) - c.gamma;
    if (c.gamma.re - g2.re).abs() > 1e-9 {
        c.gamma.re > g2.re
    } else {
        c.coefficients.iter().rev().lt(c.reflected.iter().rev())
    }
}

fn sort_candidates(v: &mut [CandidateGamma]) {
    v.sort_by(|a, b| {
        a.coefficients.len().cmp(&b.coefficients.len()).then_with(|| a.coefficients.iter().rev().cmp(b.coefficients.iter().rev()))
    });
}

fn scan(
    beta: i64,
    n: usize,
    bx: &[(i64, i64)],
    lambda: f64,
    focus: C64,
    prefilter: bool,
) -> Result<Vec<CandidateGamma>> {
    if box_size(bx) > BOX_LIMIT {
        return Err(Error::Overflow("enumeration box"));
    }
    let (lo, hi) = bx[n - 1];
    let chunks: Vec<Result<Vec<CandidateGamma>>> = (lo..=hi)
        .into_par_iter()
        .map(|top| {
            let mut out = Vec::new();
            let mut c: Vec<i64> = bx.iter().map(|r| r.0).collect();
            c[n - 1] = top;
            c.push(1);
            loop {
                let keep = !prefilter || {
                    // P(0) > 0 and (−1)^n P(β) > 0 are forced by the root profile.
                    let at_beta = c.iter().rev().fold(0i128, |acc, &a| acc * beta as i128 + a as i128);
                    c[0] > 0
                        && (if n.is_multiple_of(2) { at_beta } else { -at_beta }) > 0
                        && descartes_ok(&c, beta)
                        && quick_screen(&c, beta, lambda, focus)
                };
                if keep {
                    match check_with_region(&IntPoly::from_i64(&c), beta, lambda, focus) {
                        Ok(cand) if cand.accepted() => out.push(cand),
                        Ok(_) | Err(Error::Reducible(_)) => {}
                        Err(e) => return Err(e),
                    }
                }
                // Odometer over a_0 … a_{n−2}.
                let mut k = 0;
                loop {
                    if k + 1 >= n {
                        return Ok(out);
                    }
                    if c[k] < bx[k].1 {
                        c[k] += 1;
                        break;
                    }
                    c[k] = bx[k].0;
                    k += 1;
                }
            }
        })
        .collect();
    let mut all = Vec::new();
    for ch in chunks {
        all.extend(ch?);
    }
    Ok(all)
}

/// Descartes' rule on (β, 0): with x = βt/(1+t), the sign variations V of
/// (1+t)^n P(x) bound the roots in (β, 0) and share their parity. The
/// profile needs n − 2 or n such roots.
fn descartes_ok(c: &[i64], beta: i64) -> bool {
    let n = c.len() - 1;
    if n < 2 || beta == 0 {
        return true;
    }
    let mut q = vec![0i128; n + 1];
    let mut bk: i128 = 1;
    for (k, &a) in c.iter().enumerate() {
        // a_k β^k t^k (1+t)^{n−k}
        let m = n - k;
        let mut binom: i128 = 1;
        for j in 0..=m {
            q[k + j] += a as i128 * bk * binom;
            binom = binom * (m - j) as i128 / (j + 1) as i128;
        }
        bk *= beta as i128;
    }
    let mut v = 0;
    let mut last = 0i128;
    for x in q.into_iter().filter(|&x| x != 0) {
        if last != 0 && (x > 0) != (last > 0) {
            v += 1;
        }
        last = x;
    }
    v + 2 >= n && (v + n).is_multiple_of(2)
}

/// Allocation-free relaxation of the root-profile checks (generous
/// tolerances): at most one pair off the real line, every real root in
/// [β, 0] and the pair inside the ellipse, all up to 1e−6.
fn quick_screen(c: &[i64], beta: i64, lambda: f64, focus: C64) -> bool {
    let n = c.len() - 1;
    if n > 6 {
        return true;
    }
    let mut a = [0.0f64; 7];
    for (k, &x) in c.iter().enumerate() {
        a[k] = x as f64;
    }
    let ev = |z: C64| {
        let mut p = C64::new(0.0, 0.0);
        let mut d = C64::new(0.0, 0.0);
        for k in (0..=n).rev() {
            d = d * z + p;
            p = p * z + a[k];
        }
        (p, d)
    };
    let r0 = a[0].abs().powf(1.0 / n as f64).max(1e-3);
    let mut z = [C64::new(0.0, 0.0); 6];
    for (k, zk) in z.iter_mut().enumerate().take(n) {
        *zk = C64::from_polar(r0, 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4);
    }
    let mut done = false;
    for _ in 0..500 {
        let mut max_step: f64 = 0.0;
        for k in 0..n {
            let (p, d) = ev(z[k]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / d;
            let mut s = C64::new(0.0, 0.0);
            for j in 0..n {
                if j != k {
                    s += 1.0 / (z[k] - z[j]);
                }
            }
            let step = ratio / (1.0 - ratio * s);
            if step.is_finite() {
                z[k] -= step;
                max_step = max_step.max(step.norm() / (1.0 + z[k].norm()));
            }
        }
        if max_step < 1e-13 {
            done = true;
            break;
        }
    }
    if !done {
        return true;
    }
    let b = beta as f64;
    let mut off = 0;
    for zk in &z[..n] {
        let tol = 1e-6 * (1.0 + zk.norm());
        if zk.im.abs() > tol {
            off += 1;
            if zk.norm() + (zk - focus).norm() > lambda + tol {
                return false;
            }
        } else if zk.re < b - tol || zk.re > tol {
            return false;
        }
    }
    off <= 2
}

fn region_or_default(beta: i64, region: Option<(f64, C64)>) -> Result<(f64, C64)> {
    match region {
        Some(r) => Ok(r),
        None => nonfree_region(beta),
    }
}

/// Accepted candidates of degree 1 … `degree`, one per γ ↦ β − γ class,
/// sorted by degree then descending coefficients.
pub fn enumerate_candidates(beta: i64, degree: u32, region: Option<(f64, C64)>) -> Result<Vec<CandidateGamma>> {
    if degree == 0 || degree > 6 {
        return Err(Error::InvalidInput("degree must be in 1..=6".into()));
    }
    let (lambda, focus) = region_or_default(beta, region)?;
    let mut out = Vec::new();
    for n in 1..=degree as usize {
        let bx = coefficient_box(beta, n, lambda, focus);
        out.extend(scan(beta, n, &bx, lambda, focus, true)?.into_iter().filter(canonical));
    }
    sort_candidates(&mut out);
    Ok(out)
}

/// Reference scan over the naive coefficient box with no prefilter.
pub fn brute_force_candidates(beta: i64, degree: u32) -> Result<Vec<CandidateGamma>> {
    let (lambda, focus) = nonfree_region(beta)?;
    let mut out = Vec::new();
    for n in 1..=degree as usize {
        let bx = naive_coefficient_box(beta, n, lambda, focus);
        out.extend(scan(beta, n, &bx, lambda, focus, false)?.into_iter().filter(canonical));
    }
    sort_candidates(&mut out);
    Ok(out)
}

// ---- two parabolic generators ----

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParabolicCandidate {
    /// γ² + bγ + c = 0.
    pub b: i64,
    pub c: i64,
    pub gamma: C64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParabolicReport {
    pub coarse: Vec<ParabolicCandidate>,
    pub refined: Vec<ParabolicCandidate>,
    /// Candidates dropped by the refinement, with the reason.
    pub eliminated: Vec<(ParabolicCandidate, String)>,
}

/// γ² + bγ + c with −8 < b ≤ 0, 0 < c < 16 and b² < 4c (the non-free
/// bounds, reduced by γ ↦ −γ, γ̄), then refined by the free-product ellipse
/// and the word battery at β = 0.
pub fn enumerate_parabolic_candidates() -> Result<ParabolicReport> {
    let mut coarse = Vec::new();
    for b in -7..=0i64 {
        for c in 1..16i64 {
            if b * b < 4 * c {
                let gamma = C64::new(-b as f64 / 2.0, ((4 * c - b * b) as f64).sqrt() / 2.0);
                coarse.push(ParabolicCandidate { b, c, gamma });
            }
        }
    }
    let (lambda, focus) = nonfree_region(0)?;
    let battery = Battery::standard(C64::new(0.0, 0.0))?;
    let mut refined = Vec::new();
    let mut eliminated = Vec::new();
    for cand in &coarse {
        let g = cand.gamma;
        if g.norm() + (g - focus).norm() >= lambda {
            eliminated.push((cand.clone(), "free product".into()));
            continue;
        }
        match battery.explain(g) {
            (Verdict::Excluded, why) => eliminated.push((cand.clone(), format!("not discrete: {}", why.unwrap_or_default()))),
            (Verdict::FreeProduct, _) => eliminated.push((cand.clone(), "free product".into())),
            (Verdict::Unknown, _) => refined.push(cand.clone()),
        }
    }
    Ok(ParabolicReport { coarse, refined, eliminated })
}

/// The seven points left after the classical free-group refinement.
pub fn parabolic_seven() -> Vec<C64> {
    let s3 = 3f64.sqrt();
    vec![
        C64::new(0.0, 1.0),
        C64::new(0.0, 2f64.sqrt()),
        C64::new(0.0, s3),
        C64::new(0.5, s3 / 2.0),
        C64::new(0.5, 7f64.sqrt() / 2.0),
        C64::new(1.0, 1.0),
        C64::new(1.5, s3 / 2.0),
    ]
}

// ---- table verification ----

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TableId {
    Gamma3,
    Gamma4,
    Gamma5,
    Plane23,
    P6,
    Noncompact,
}

impl TableId {
    pub const ALL: [TableId; 6] =
        [TableId::Gamma3, TableId::Gamma4, TableId::Gamma5, TableId::Plane23, TableId::P6, TableId::Noncompact];
}

impl FromStr for TableId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "gamma3" => TableId::Gamma3,
            "gamma4" => TableId::Gamma4,
            "gamma5" => TableId::Gamma5,
            "plane23" => TableId::Plane23,
            "p6" => TableId::P6,
            "noncompact" => TableId::Noncompact,
            _ => return Err(Error::NotTabulated(s.into())),
        })
    }
}

impl fmt::Display for TableId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            TableId::Gamma3 => "gamma3",
            TableId::Gamma4 => "gamma4",
            TableId::Gamma5 => "gamma5",
            TableId::Plane23 => "plane23",
            TableId::P6 => "p6",
            TableId::Noncompact => "noncompact",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Interpretation {
    /// The printed γ is a root of the printed polynomial.
    Root,
    /// β − γ is a root (the printed value is the symmetric representative).
    BetaMinusRoot,
    /// γ lies in Z[ω] for a root ω of the printed (field) polynomial.
    FieldElement,
    /// γ is an integer of Q(√−d) for the printed d.
    QuadraticInteger,
    None,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RowCheck {
    pub label: String,
    pub printed: C64,
    pub matched: bool,
    pub interpretation: Interpretation,
    /// Distance from the printed value to the matched exact value.
    pub distance: f64,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Erratum {
    pub label: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableReport {
    pub table: TableId,
    pub rows: Vec<RowCheck>,
    pub errata: Vec<Erratum>,
}

impl TableReport {
    pub fn matched(&self) -> usize {
        self.rows.iter().filter(|r| r.matched).count()
    }
}

fn nearest(roots: &[C64], z: C64) -> (C64, f64) {
    roots.iter().map(|r| (*r, (r - z).norm())).min_by(|a, b| a.1.total_cmp(&b.1)).unwrap_or((z, f64::INFINITY))
}

fn root_row(label: String, printed: C64, coeffs: &[C64], beta: f64, tol: f64) -> Result<(RowCheck, Option<Erratum>)> {
    let roots = poly::roots(coeffs)?;
    let (r, d) = nearest(&roots, printed);
    if d <= tol {
        return Ok((RowCheck { label, printed, matched: true, interpretation: Interpretation::Root, distance: d, note: None }, None));
    }
    let sym: Vec<C64> = roots.iter().map(|x| C64::new(beta, 0.0) - x).collect();
    let (s, ds) = nearest(&sym, printed);
    if ds <= tol {
        let note = Some(format!("printed value is β − γ for the root γ = {:.6}{:+.6}i", beta - s.re, -s.im));
        return Ok((
            RowCheck { label, printed, matched: true, interpretation: Interpretation::BetaMinusRoot, distance: ds, note },
            None,
        ));
    }
    let msg = format!("no root within {tol:.0e}; nearest root {:.6}{:+.6}i at distance {d:.2e}", r.re, r.im);
    Ok((
        RowCheck { label: label.clone(), printed, matched: false, interpretation: Interpretation::None, distance: d, note: None },
        Some(Erratum { label, message: msg }),
    ))
}

/// Small integer combination a_0 + a_1ω + … of a root ω of `field` within tol of z.
fn field_element(field: &IntPoly, z: C64, tol: f64) -> Result<Option<(Vec<i64>, f64)>> {
    let n = field.degree();
    let bound = 12i64;
    let mut best: Option<(Vec<i64>, f64)> = None;
    for w in poly::roots(&field.to_complex())? {
        let powers: Vec<C64> = (0..n).map(|k| w.powu(k as u32)).collect();
        let mut a = vec![-bound; n];
        loop {
            let v: C64 = a.iter().zip(&powers).map(|(c, p)| *c as f64 * p).sum();
            let d = (v - z).norm();
            if d <= tol && best.as_ref().is_none_or(|b| d < b.1) {
                best = Some((a.clone(), d));
            }
            let mut k = 0;
            loop {
                if k == n {
                    break;
                }
                if a[k] < bound {
                    a[k] += 1;
                    break;
                }
                a[k] = -bound;
                k += 1;
            }
            if k == n {
                break;
            }
        }
    }
    Ok(best)
}

/// Certifies each printed γ against its printed polynomial; every miss is
/// reported as an erratum.
pub fn verify_table(id: TableId) -> Result<TableReport> {
    let mut rows = Vec::new();
    let mut errata = Vec::new();
    let mut push = |row: RowCheck, err: Option<Erratum>| {
        rows.push(row);
        errata.extend(err);
    };
    match id {
        TableId::Gamma3 => {
            for r in tables::gamma3()? {
                let (row, e) = root_row(format!("Γ3,{}", r.i), r.gamma(), &parse_int_poly(&r.polynomial)?.to_complex(), -3.0, 1e-4)?;
                push(row, e);
            }
        }
        TableId::Gamma4 => {
            for r in tables::gamma4()? {
                let (row, e) = root_row(format!("Γ4,{}", r.i), r.gamma(), &parse_int_poly(&r.polynomial)?.to_complex(), -2.0, 1e-4)?;
                push(row, e);
            }
        }
        TableId::Gamma5 => {
            let beta = crate::moebius::elliptic_beta(5);
            for r in tables::gamma5()? {
                let coeffs = BiPoly::parse(&r.polynomial)?.at_beta(C64::new(beta, 0.0));
                let (row, e) = root_row(format!("Γ5,{}", r.i), r.gamma(), &coeffs, beta, 1e-4)?;
                push(row, e);
            }
        }
        TableId::Plane23 => {
            for r in tables::commutator_plane_23()? {
                let (row, e) = root_row(format!("row {}", r.row), r.gamma(), &parse_int_poly(&r.polynomial)?.to_complex(), -3.0, 1e-5)?;
                push(row, e);
            }
        }
        TableId::P6 => {
            for r in tables::arith_p6()? {
                let field = parse_int_poly(&r.field_polynomial)?;
                let label = format!("p=q=6 {}", r.gamma_label);
                let (direct, _) = root_row(label.clone(), r.gamma(), &field.to_complex(), -1.0, 1e-4)?;
                if direct.matched {
                    push(direct, None);
                    continue;
                }
                let err = Erratum {
                    label: label.clone(),
                    message: format!("γ is not a root of {}; the column is the field polynomial", r.field_polynomial),
                };
                match field_element(&field, r.gamma(), 1e-4)? {
                    Some((a, d)) => push(
                        RowCheck {
                            label,
                            printed: r.gamma(),
                            matched: true,
                            interpretation: Interpretation::FieldElement,
                            distance: d,
                            note: Some(format!("γ = Σ a_k ω^k with a = {a:?}")),
                        },
                        Some(err),
                    ),
                    None => push(
                        RowCheck { label, printed: r.gamma(), matched: false, interpretation: Interpretation::None, distance: f64::INFINITY, note: None },
                        Some(err),
                    ),
                }
            }
        }
        TableId::Noncompact => {
            for r in tables::noncompact()? {
                let g = r.gamma();
                let label = format!("noncompact {}", r.i);
                let tr = 2.0 * g.re;
                let nm = g.norm_sqr();
                let integral = (tr - tr.round()).abs() < 1e-9 && (nm - nm.round()).abs() < 1e-9;
                let disc = (tr.round() as i64).pow(2) - 4 * nm.round() as i64;
                let ok = integral
                    && (g.im.abs() < 1e-12 || square_factor(&BigInt::from(disc), -(r.d as i64)).is_some()
                        || square_factor(&BigInt::from(disc), -4 * r.d as i64).is_some());
                let row = RowCheck {
                    label: label.clone(),
                    printed: g,
                    matched: ok,
                    interpretation: if ok { Interpretation::QuadraticInteger } else { Interpretation::None },
                    distance: 0.0,
                    note: Some(format!("z^2 {:+}z {:+}", -tr.round() as i64, nm.round() as i64)),
                };
                let err = (!ok).then(|| Erratum { label, message: format!("γ is not an integer of Q(√−{})", r.d) });
                push(row, err);
            }
        }
    }
    Ok(TableReport { table: id, rows, errata })
}
