//! Words in the free group on {a, b}, good words, the composition semigroup,
//! and compilation of good words to integer trace polynomials p_w(z, β) with
//! γ(f, w(g, f)) = p_w(γ(f,g), β(f)).
//!
//! Letter roles: `a` is evaluated as g (the order-two generator in the
//! (γ, β, −4) slice) and `b` as f.

use crate::error::{Error, Result};
use crate::moebius::{gamma, realize, MoebiusMap, TraceParams};
use crate::poly::BiPoly;
use crate::C64;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, PartialOrd, Ord)]
pub enum Letter {
    A,
    B,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Syllable {
    pub letter: Letter,
    pub exp: i64,
}

/// A freely reduced word, stored as syllables with alternating letters.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct GroupWord {
    pub syllables: Vec<Syllable>,
}

impl GroupWord {
    /// Builds a reduced word from (letter, exponent) pairs.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (Letter, i64)>) -> Self {
        let mut w = GroupWord::default();
        for (l, e) in pairs {
            w.push(l, e);
        }
        w
    }

    fn push(&mut self, letter: Letter, exp: i64) {
        if exp == 0 {
            return;
        }
        if let Some(last) = self.syllables.last_mut() {
            if last.letter == letter {
                last.exp += exp;
                if last.exp == 0 {
                    self.syllables.pop();
                }
                return;
            }
        }
        self.syllables.push(Syllable { letter, exp });
    }

    pub fn is_empty(&self) -> bool {
        self.syllables.is_empty()
    }

    pub fn concat(&self, o: &GroupWord) -> GroupWord {
        let mut w = self.clone();
        for s in &o.syllables {
            w.push(s.letter, s.exp);
        }
        w
    }

    pub fn inverse(&self) -> GroupWord {
        GroupWord::from_pairs(self.syllables.iter().rev().map(|s| (s.letter, -s.exp)))
    }

    pub fn pow(&self, k: i64) -> GroupWord {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut w = GroupWord::default();
        for _ in 0..k.unsigned_abs() {
            w = w.concat(&base);
        }
        w
    }

    /// Exchanges the letters a and b.
    pub fn swap_letters(&self) -> GroupWord {
        GroupWord::from_pairs(self.syllables.iter().map(|s| {
            let l = if s.letter == Letter::A { Letter::B } else { Letter::A };
            (l, s.exp)
        }))
    }

    /// Number of syllables of the given letter.
    pub fn syllable_count(&self, l: Letter) -> usize {
        self.syllables.iter().filter(|s| s.letter == l).count()
    }

    /// Σ |exponent| over syllables of the given letter.
    pub fn weight(&self, l: Letter) -> u64 {
        self.syllables.iter().filter(|s| s.letter == l).map(|s| s.exp.unsigned_abs()).sum()
    }

    /// Letter length.
    pub fn len(&self) -> u64 {
        self.syllables.iter().map(|s| s.exp.unsigned_abs()).sum()
    }

    /// Evaluates the word with a ↦ `a_map`, b ↦ `b_map`.
    pub fn evaluate(&self, a_map: &MoebiusMap, b_map: &MoebiusMap) -> MoebiusMap {
        let mut acc = MoebiusMap::identity();
        for s in &self.syllables {
            let m = if s.letter == Letter::A { a_map } else { b_map };
            acc = acc.mul(&m.pow(s.exp));
        }
        acc
    }
}

impl fmt::Display for GroupWord {
    /// Compact form: lowercase letters, uppercase inverses ("abA").
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.syllables {
            let ch = match (s.letter, s.exp > 0) {
                (Letter::A, true) => 'a',
                (Letter::A, false) => 'A',
                (Letter::B, true) => 'b',
                (Letter::B, false) => 'B',
            };
            for _ in 0..s.exp.unsigned_abs() {
                write!(f, "{ch}")?;
            }
        }
        Ok(())
    }
}

/// Parses a word: letters a, b (uppercase = inverse), optional `^k` integer
/// exponents, whitespace ignored. The result is freely reduced.
pub fn parse_word(text: &str) -> Result<GroupWord> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut i = 0;
    let mut pairs = Vec::new();
    while i < chars.len() {
        let (pos, ch) = chars[i];
        if ch.is_whitespace() {
            i += 1;
            continue;
        }
        let (letter, sign) = match ch {
            'a' => (Letter::A, 1),
            'A' => (Letter::A, -1),
            'b' => (Letter::B, 1),
            'B' => (Letter::B, -1),
            _ => return Err(Error::WordSyntax { pos, msg: format!("unexpected '{ch}'") }),
        };
        i += 1;
        while i < chars.len() && chars[i].1.is_whitespace() {
            i += 1;
        }
        let mut exp = 1i64;
        if i < chars.len() && chars[i].1 == '^' {
            i += 1;
            while i < chars.len() && chars[i].1.is_whitespace() {
                i += 1;
            }
            let start = i;
            if i < chars.len() && (chars[i].1 == '-' || chars[i].1 == '+') {
                i += 1;
            }
            while i < chars.len() && chars[i].1.is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().map(|c| c.1).collect();
            let epos = chars.get(start).map(|c| c.0).unwrap_or(text.len());
            exp = s.parse::<i64>().map_err(|_| Error::WordSyntax {
                pos: epos,
                msg: "expected an integer exponent".into(),
            })?;
        }
        pairs.push((letter, sign * exp));
    }
    let w = GroupWord::from_pairs(pairs);
    if w.is_empty() {
        return Err(Error::EmptyWord);
    }
    Ok(w)
}

/// Strict good-word pattern: a^{s_1} b^{r_1} ⋯ b^{r_{m−1}} a^{s_m} with
/// s_j = (−1)^{j+1} s_1 ∈ {±1}.
pub fn is_good(w: &GroupWord) -> bool {
    let s = &w.syllables;
    if s.is_empty() || s[0].letter != Letter::A || s[s.len() - 1].letter != Letter::A {
        return false;
    }
    let s1 = s[0].exp;
    if s1.abs() != 1 {
        return false;
    }
    s.iter()
        .filter(|x| x.letter == Letter::A)
        .enumerate()
        .all(|(j, x)| x.exp == if j % 2 == 0 { s1 } else { -s1 })
}

/// Good once a² = 1 is imposed: starts and ends in a, every a-exponent odd.
pub fn is_good_under_involution(w: &GroupWord) -> bool {
    let s = &w.syllables;
    !s.is_empty()
        && s[0].letter == Letter::A
        && s[s.len() - 1].letter == Letter::A
        && s.iter().filter(|x| x.letter == Letter::A).all(|x| x.exp % 2 != 0)
}

/// A validated good word.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GoodWord {
    word: GroupWord,
    strict: bool,
}

impl GoodWord {
    pub fn new(word: GroupWord) -> Result<Self> {
        if is_good(&word) {
            Ok(GoodWord { word, strict: true })
        } else if is_good_under_involution(&word) {
            Ok(GoodWord { word, strict: false })
        } else {
            Err(Error::NotGood(word.to_string()))
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        GoodWord::new(parse_word(text)?)
    }

    pub fn word(&self) -> &GroupWord {
        &self.word
    }

    /// False when goodness relies on a² = 1.
    pub fn is_strict(&self) -> bool {
        self.strict
    }

    /// Default degree bounds: (number of a-syllables, total b-weight).
    pub fn default_degree_hint(&self) -> DegreeHint {
        DegreeHint {
            z: self.word.syllable_count(Letter::A) as u32,
            beta: self.word.weight(Letter::B) as u32,
        }
    }
}

impl fmt::Display for GoodWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.word.fmt(f)
    }
}

/// Substitutes `w2` for every occurrence of `letter` in `w1` and reduces.
pub fn substitute(w1: &GroupWord, w2: &GroupWord, letter: Letter) -> GroupWord {
    let mut out = GroupWord::default();
    for s in &w1.syllables {
        if s.letter == letter {
            out = out.concat(&w2.pow(s.exp));
        } else {
            out = out.concat(&GroupWord::from_pairs([(s.letter, s.exp)]));
        }
    }
    out
}

/// The composition w1 * w2 = w1(w2, b): w2 replaces every a in w1.
///
/// With a ↦ g and b ↦ f this is the substitution satisfying
/// p_{w1*w2} = p_{w1} ∘ p_{w2}. Written with the letters' roles exchanged it
/// is the substitution for b, as in (bab⁻¹ab)*(bab⁻¹) = bab⁻¹aba⁻¹b⁻¹abab⁻¹.
pub fn compose_words(w1: &GoodWord, w2: &GoodWord) -> Result<GoodWord> {
    GoodWord::new(substitute(&w1.word, &w2.word, Letter::A))
}

/// Evaluates w(g, f) on a realization of `params` and returns γ(f, w(g,f)).
///
/// For loxodromic or elliptic f the evaluation is done in the eigenbasis of
/// f, where γ(f, h) = −β·h₁₂·h₂₁ avoids the cancellation in tr[f,h] − 2.
pub fn evaluate_gamma(w: &GroupWord, params: &TraceParams) -> Result<C64> {
    if params.gamma.norm() < 1e-12 {
        return Err(Error::ZeroGamma);
    }
    let beta = params.beta;
    if beta.norm() < 1e-6 {
        let (f, g) = realize(params)?;
        return Ok(gamma(&f, &w.evaluate(&g, &f)));
    }
    let t = (beta + 4.0).sqrt();
    let lam = (t + beta.sqrt()) / 2.0;
    let one = C64::new(1.0, 0.0);
    let zero = C64::new(0.0, 0.0);
    let f = MoebiusMap { a: lam, b: zero, c: zero, d: one / lam };
    // g = [[p, 1], [r, tr g − p]] with bc = −γ/β and det 1.
    let tp = (params.beta_prime + 4.0).sqrt();
    let r = -params.gamma / beta;
    // p(tp − p) − r = 1
    let p = crate::moebius::stable_quadratic_root(-tp, one + r);
    let g = MoebiusMap { a: p, b: one, c: r, d: tp - p };
    let h = w.evaluate(&g, &f);
    Ok(-beta * h.b * h.c)
}

/// Degree bounds (z, β) for interpolation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeHint {
    pub z: u32,
    pub beta: u32,
}

/// The trace polynomial of a good word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TracePolynomial {
    pub poly: BiPoly,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TermJson {
    pub zdeg: u32,
    pub bdeg: u32,
    pub coeff: i64,
}

impl TracePolynomial {
    pub fn z_degree(&self) -> u32 {
        self.poly.z_degree()
    }

    pub fn eval(&self, z: C64, beta: C64) -> C64 {
        self.poly.eval(z, beta)
    }

    /// Leading z-coefficient as a polynomial in β (observed ±1).
    pub fn leading(&self) -> BiPoly {
        self.poly.leading_z_coeff()
    }

    pub fn is_monic_up_to_sign(&self) -> bool {
        let l = self.leading();
        l.terms.len() == 1 && l.coeff(0, 0).abs() == 1
    }

    /// p(0, β) ≡ 0.
    pub fn vanishes_at_zero(&self) -> bool {
        self.poly.z_coeff(0).is_zero()
    }

    /// z-composition p(q(z,β), β).
    pub fn compose(&self, q: &TracePolynomial) -> Result<TracePolynomial> {
        Ok(TracePolynomial { poly: self.poly.compose_z(&q.poly)? })
    }

    pub fn to_json_terms(&self) -> Vec<TermJson> {
        self.poly
            .terms
            .iter()
            .map(|((i, j), c)| TermJson { zdeg: *i, bdeg: *j, coeff: *c })
            .collect()
    }

    pub fn from_json_terms(t: &[TermJson]) -> Self {
        TracePolynomial { poly: BiPoly::from_terms(t.iter().map(|x| ((x.zdeg, x.bdeg), x.coeff))) }
    }
}

impl fmt::Display for TracePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.poly.fmt(f)
    }
}

const VERIFY_SEED: u64 = 0x6b6c_6569_6e69_616e;
/// Random exact spot checks after interpolation (Schwartz–Zippel).
const SPOT_CHECKS: usize = 4;

/// Integer 2×2 matrix of determinant one.
#[derive(Clone)]
struct IntMat([BigInt; 4]);

impl IntMat {
    fn identity() -> Self {
        IntMat([BigInt::one(), BigInt::zero(), BigInt::zero(), BigInt::one()])
    }

    fn mul(&self, o: &IntMat) -> IntMat {
        let [a, b, c, d] = &self.0;
        let [e, f, g, h] = &o.0;
        IntMat([a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h])
    }

    fn inverse(&self) -> IntMat {
        let [a, b, c, d] = &self.0;
        IntMat([d.clone(), -b, -c, a.clone()])
    }

    fn pow(&self, n: i64) -> IntMat {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        (0..n.unsigned_abs()).fold(IntMat::identity(), |acc, _| acc.mul(&base))
    }

    fn trace(&self) -> BigInt {
        &self.0[0] + &self.0[3]
    }
}

/// Exact γ(f, w(g, f)) at the integer point (x, t), where
/// f = [[x, −1], [1, 0]] and g = [[t, 1+t²], [−1, −t]] (tr g = 0). Returns
/// (γ(f,g), β(f), value) with β = x² − 4 and γ = β + (t² + xt + 2)².
fn exact_sample(w: &GroupWord, x: &BigInt, t: &BigInt) -> (BigInt, BigInt, BigInt) {
    let one = BigInt::one();
    let f = IntMat([x.clone(), -&one, one.clone(), BigInt::zero()]);
    let g = IntMat([t.clone(), &one + t * t, -&one, -t]);
    let mut h = IntMat::identity();
    for s in &w.syllables {
        let m = if s.letter == Letter::A { &g } else { &f };
        h = h.mul(&m.pow(s.exp));
    }
    let comm = f.mul(&h).mul(&f.inverse()).mul(&h.inverse());
    let beta = x * x - 4;
    let trfg = t * t + x * t + 2;
    (&beta + &trfg * &trfg, beta, comm.trace() - 2)
}

/// Monomial coefficients (ascending) of the interpolant through (nodes, values).
fn newton_interpolate(nodes: &[BigInt], values: &[BigRational]) -> Vec<BigRational> {
    let n = nodes.len();
    let mut dd = values.to_vec();
    for k in 1..n {
        for i in (k..n).rev() {
            let den = BigRational::from_integer(&nodes[i] - &nodes[i - k]);
            dd[i] = (&dd[i] - &dd[i - 1]) / den;
        }
    }
    // Horner on the Newton form.
    let mut coeffs = vec![BigRational::zero(); n];
    for k in (0..n).rev() {
        // coeffs ← coeffs·(z − nodes[k]) + dd[k]
        let xk = BigRational::from_integer(nodes[k].clone());
        let mut next = vec![BigRational::zero(); n];
        for i in 0..n {
            if i + 1 < n {
                next[i + 1] = &next[i + 1] + &coeffs[i];
            }
            next[i] = &next[i] - &coeffs[i] * &xk;
        }
        next[0] = &next[0] + &dd[k];
        coeffs = next;
    }
    coeffs
}

fn eval_exact(p: &BiPoly, z: &BigInt, beta: &BigInt) -> BigInt {
    p.terms
        .iter()
        .map(|((i, j), c)| BigInt::from(*c) * num_traits::pow(z.clone(), *i as usize) * num_traits::pow(beta.clone(), *j as usize))
        .sum()
}

/// Compiles a good word to its integer trace polynomial.
///
/// γ(f, w(g,f)) is evaluated exactly on integer matrices at (hint.beta+1)
/// values of β and, for each, (hint.z+1) values of γ; Newton interpolation
/// over Q recovers p(·, β_i), then each z-coefficient is interpolated in β.
/// Non-integral coefficients, or disagreement at random exact spot checks,
/// mean the degree hint was too small.
pub fn trace_polynomial(w: &GoodWord, hint: Option<DegreeHint>) -> Result<TracePolynomial> {
    let hint = hint.unwrap_or_else(|| w.default_degree_hint());
    let nz = hint.z as usize + 1;
    let nb = hint.beta as usize + 1;
    let mut beta_nodes = Vec::with_capacity(nb);
    let mut per_beta = Vec::with_capacity(nb);
    for i in 0..nb {
        let x = BigInt::from(2 + i as i64);
        let mut gnodes = Vec::with_capacity(nz);
        let mut vals = Vec::with_capacity(nz);
        let mut beta = BigInt::zero();
        for j in 0..nz {
            let (g, b, v) = exact_sample(w.word(), &x, &BigInt::from(j as i64));
            gnodes.push(g);
            vals.push(BigRational::from_integer(v));
            beta = b;
        }
        beta_nodes.push(beta);
        per_beta.push(newton_interpolate(&gnodes, &vals));
    }
    let mut terms = Vec::new();
    for k in 0..nz {
        let col: Vec<BigRational> = per_beta.iter().map(|c| c[k].clone()).collect();
        for (l, c) in newton_interpolate(&beta_nodes, &col).into_iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !c.is_integer() {
                return Err(Error::DegreeHint(format!("non-integral coefficient of z^{k} β^{l}")));
            }
            let v = c.to_integer().to_i64().ok_or(Error::Overflow("trace polynomial coefficient"))?;
            terms.push(((k as u32, l as u32), v));
        }
    }
    let poly = BiPoly::from_terms(terms);
    let mut rng = ChaCha8Rng::seed_from_u64(VERIFY_SEED);
    for _ in 0..SPOT_CHECKS {
        let x = BigInt::from(rng.gen_range(1_000i64..1_000_000));
        let t = BigInt::from(rng.gen_range(-1_000_000i64..1_000_000));
        let (g, b, v) = exact_sample(w.word(), &x, &t);
        if eval_exact(&poly, &g, &b) != v {
            return Err(Error::DegreeHint(format!("interpolant fails an exact spot check (hint {hint:?})")));
        }
    }
    Ok(TracePolynomial { poly })
}

/// Compares the polynomial with direct matrix evaluation at `n` pseudo-random
/// points (|z|, |β| ∈ [0.3, 2]).
pub fn verify_numeric(w: &GoodWord, tp: &TracePolynomial, n: usize) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(VERIFY_SEED);
    let mut worst: f64 = 0.0;
    for _ in 0..n {
        let z = C64::from_polar(rng.gen_range(0.3..2.0), rng.gen_range(0.0..2.0 * PI));
        let b = C64::from_polar(rng.gen_range(0.3..2.0), rng.gen_range(0.0..2.0 * PI));
        let direct = evaluate_gamma(w.word(), &TraceParams::with_involution(z, b))?;
        let p = tp.eval(z, b);
        let rel = (p - direct).norm() / (1.0 + p.norm());
        worst = worst.max(rel);
        if rel > 1e-7 {
            return Err(Error::DegreeHint(format!(
                "interpolant disagrees with matrix evaluation at z={z}, beta={b} (rel {rel:.2e})"
            )));
        }
    }
    Ok(worst)
}

/// The four identities for f of order 4 and g of order 2 (β = −2).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Order42 {
    /// (gf)⁴g
    First,
    /// (gf)³g
    Second,
    /// (gf)³(gf⁻¹)³g
    Third,
    /// (gf)³(gf⁻¹)³(gf)³g
    Fourth,
}

impl Order42 {
    pub const ALL: [Order42; 4] = [Order42::First, Order42::Second, Order42::Third, Order42::Fourth];

    /// The word with g ↦ a, f ↦ b.
    pub fn word(self) -> &'static str {
        match self {
            Order42::First => "ababababa",
            Order42::Second => "abababa",
            Order42::Third => "abababaBaBaBa",
            Order42::Fourth => "abababaBaBaBabababa",
        }
    }

    pub fn from_name(s: &str) -> Result<Self> {
        match s {
            "1" | "first" => Ok(Order42::First),
            "2" | "second" => Ok(Order42::Second),
            "3" | "third" => Ok(Order42::Third),
            "4" | "fourth" => Ok(Order42::Fourth),
            _ => Err(Error::InvalidInput(format!("unknown order-(4,2) selector {s}"))),
        }
    }
}

/// The printed univariate identity for the selector.
pub fn order42_identities(k: Order42) -> BiPoly {
    let s = match k {
        Order42::First => "z(-1+z+z^2)^2",
        Order42::Second => "z^3(2+z)",
        Order42::Third => "-2+(2+z)(1+z^2+z^3)^2",
        Order42::Fourth => "z(2+z)(1+2z+z^2+2z^3+z^4)^2",
    };
    BiPoly::parse(s).expect("static polynomial")
}

/// Named words bundled for exclusion batteries.
pub fn named_words() -> Vec<(&'static str, &'static str)> {
    vec![
        ("aba^-1", "abA"),
        ("aba^-1b^-1a", "abABa"),
        ("aba^-1ba", "abAba"),
        ("gfg^-1fgf^-1g^-1f^-1gfg^-1", "abAbaBABabA"),
        ("gf^-1g^-1fgfg^-1f^-1g", "aBAbabABa"),
        ("(gf)^4g", "ababababa"),
        ("(gf)^3g", "abababa"),
        ("(gf)^3(gf^-1)^3g", "abababaBaBaBa"),
        ("(gf)^3(gf^-1)^3(gf)^3g", "abababaBaBaBabababa"),
    ]
}
