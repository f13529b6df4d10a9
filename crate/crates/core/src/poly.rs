//! Polynomial utilities: complex root finding (Aberth–Ehrlich), exact integer
//! polynomials with resultant-based discriminants, and bivariate integer
//! polynomials in (z, β) with a small expression parser.

use crate::error::{Error, Result};
use crate::C64;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// Horner evaluation; coefficients in ascending degree.
pub fn eval(coeffs: &[C64], z: C64) -> C64 {
    coeffs.iter().rev().fold(C64::new(0.0, 0.0), |acc, &a| acc * z + a)
}

/// Value and derivative at z.
pub fn eval_with_derivative(coeffs: &[C64], z: C64) -> (C64, C64) {
    let mut p = C64::new(0.0, 0.0);
    let mut dp = C64::new(0.0, 0.0);
    for &a in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + a;
    }
    (p, dp)
}

fn trim(coeffs: &[C64]) -> &[C64] {
    let mut n = coeffs.len();
    while n > 0 && coeffs[n - 1].norm() == 0.0 {
        n -= 1;
    }
    &coeffs[..n]
}

/// All complex roots (with multiplicity) of a polynomial with ascending
/// coefficients, by simultaneous Aberth–Ehrlich iteration and Newton polish.
pub fn roots(coeffs: &[C64]) -> Result<Vec<C64>> {
    let p = trim(coeffs);
    if p.is_empty() {
        return Err(Error::InvalidInput("zero polynomial".into()));
    }
    let n = p.len() - 1;
    if n == 0 {
        return Ok(vec![]);
    }
    let lead = p[n];
    let mono: Vec<C64> = p.iter().map(|&a| a / lead).collect();
    if n == 1 {
        return Ok(vec![-mono[0]]);
    }
    // Initial guesses on a circle of the geometric-mean radius, rotated off the axes.
    let r0 = mono[0].norm().powf(1.0 / n as f64).max(1e-3);
    let bound = 1.0 + mono[..n].iter().map(|a| a.norm()).fold(0.0, f64::max);
    let r = r0.min(bound);
    let mut z: Vec<C64> = (0..n)
        .map(|k| C64::from_polar(r, 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4))
        .collect();
    let mut converged = false;
    for _ in 0..1000 {
        let mut max_step: f64 = 0.0;
        for k in 0..n {
            let (pv, dv) = eval_with_derivative(&mono, z[k]);
            if pv.norm() == 0.0 {
                continue;
            }
            let ratio = pv / dv;
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
        if max_step < 1e-15 {
            converged = true;
            break;
        }
    }
    if !converged && z.iter().any(|r| !r.is_finite()) {
        return Err(Error::NoConvergence("Aberth iteration".into()));
    }
    for zk in z.iter_mut() {
        for _ in 0..3 {
            let (pv, dv) = eval_with_derivative(&mono, *zk);
            if dv.norm() == 0.0 {
                break;
            }
            let step = pv / dv;
            let cand = *zk - step;
            if eval(&mono, cand).norm() <= pv.norm() {
                *zk = cand;
            } else {
                break;
            }
        }
    }
    Ok(z)
}

/// Real-coefficient convenience wrapper.
pub fn roots_real(coeffs: &[f64]) -> Result<Vec<C64>> {
    let c: Vec<C64> = coeffs.iter().map(|&x| C64::new(x, 0.0)).collect();
    roots(&c)
}

/// A univariate polynomial with arbitrary-precision integer coefficients
/// (ascending degree).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntPoly {
    pub coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(BigInt::zero());
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(c: &[i64]) -> Self {
        IntPoly::new(c.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn lead(&self) -> &BigInt {
        self.coeffs.last().expect("nonempty")
    }

    pub fn is_monic(&self) -> bool {
        self.lead().is_one()
    }

    pub fn to_i64(&self) -> Option<Vec<i64>> {
        self.coeffs.iter().map(|c| c.to_i64()).collect()
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coeffs.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect()
    }

    pub fn to_complex(&self) -> Vec<C64> {
        self.to_f64().into_iter().map(|x| C64::new(x, 0.0)).collect()
    }

    pub fn eval_c(&self, z: C64) -> C64 {
        eval(&self.to_complex(), z)
    }

    pub fn derivative(&self) -> IntPoly {
        if self.degree() == 0 {
            return IntPoly::new(vec![BigInt::zero()]);
        }
        IntPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigInt::from(k))
                .collect(),
        )
    }

    pub fn mul(&self, o: &IntPoly) -> IntPoly {
        let mut out = vec![BigInt::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }

    /// Exact division by a monic divisor; None if the remainder is nonzero.
    pub fn div_exact_monic(&self, d: &IntPoly) -> Option<IntPoly> {
        assert!(d.is_monic());
        if d.degree() > self.degree() {
            return None;
        }
        let mut rem = self.coeffs.clone();
        let dd = d.degree();
        let mut q = vec![BigInt::zero(); self.degree() - dd + 1];
        for k in (0..q.len()).rev() {
            let c = rem[k + dd].clone();
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    rem[k + j] -= &c * dc;
                }
            }
            q[k] = c;
        }
        if rem.iter().all(|c| c.is_zero()) {
            Some(IntPoly::new(q))
        } else {
            None
        }
    }

    /// P(β − z)·(−1)^deg, the polynomial of β − γ (monic if P is).
    pub fn reflect(&self, beta: i64) -> IntPoly {
        // Expand Σ a_k (β − z)^k.
        let n = self.degree();
        let mut out = vec![BigInt::zero(); n + 1];
        let b = BigInt::from(beta);
        for (k, a) in self.coeffs.iter().enumerate() {
            // (β − z)^k = Σ_j C(k,j) β^{k−j} (−z)^j
            let mut binom = BigInt::one();
            for j in 0..=k {
                let term = a * &binom * num_traits::pow(b.clone(), k - j);
                if j % 2 == 0 {
                    out[j] += term;
                } else {
                    out[j] -= term;
                }
                binom = binom * BigInt::from(k - j) / BigInt::from(j + 1);
            }
        }
        if n % 2 == 1 {
            for c in out.iter_mut() {
                *c = -c.clone();
            }
        }
        IntPoly::new(out)
    }

    /// Resultant via the Sylvester determinant (fraction-free Bareiss elimination).
    pub fn resultant(&self, o: &IntPoly) -> BigInt {
        let m = self.degree();
        let n = o.degree();
        if m == 0 && n == 0 {
            return BigInt::one();
        }
        let size = m + n;
        let mut mat = vec![vec![BigInt::zero(); size]; size];
        // Rows hold descending coefficients, shifted.
        for i in 0..n {
            for (k, c) in self.coeffs.iter().rev().enumerate() {
                mat[i][i + k] = c.clone();
            }
        }
        for i in 0..m {
            for (k, c) in o.coeffs.iter().rev().enumerate() {
                mat[n + i][i + k] = c.clone();
            }
        }
        bareiss_det(mat)
    }

    /// disc(P) = (−1)^{n(n−1)/2} Res(P, P′)/lead(P).
    pub fn discriminant(&self) -> BigInt {
        let n = self.degree();
        if n == 0 {
            return BigInt::zero();
        }
        if n == 1 {
            return BigInt::one();
        }
        let r = self.resultant(&self.derivative());
        let (q, rem) = r.div_rem(self.lead());
        debug_assert!(rem.is_zero());
        if (n * (n - 1) / 2) % 2 == 1 {
            -q
        } else {
            q
        }
    }
}

fn bareiss_det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<(usize, BigInt)> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (k, c.clone()))
            .collect();
        write!(f, "{}", format_terms(&terms, "z"))
    }
}

/// Formats descending (degree, coefficient) terms as "z^2 + 3z − 1".
fn format_terms(terms: &[(usize, BigInt)], var: &str) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    let mut s = String::new();
    for (i, (k, c)) in terms.iter().enumerate() {
        let neg = c.is_negative();
        let a = c.abs();
        if i == 0 {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        let mon = match k {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{k}"),
        };
        if a.is_one() && *k > 0 {
            s.push_str(&mon);
        } else {
            s.push_str(&format!("{a}{mon}"));
        }
    }
    s
}

/// Bivariate integer polynomial Σ c_{ij} z^i β^j.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BiPoly {
    pub terms: BTreeMap<(u32, u32), i64>,
}

impl BiPoly {
    pub fn zero() -> Self {
        BiPoly::default()
    }

    pub fn constant(c: i64) -> Self {
        let mut p = BiPoly::zero();
        if c != 0 {
            p.terms.insert((0, 0), c);
        }
        p
    }

    pub fn z() -> Self {
        let mut p = BiPoly::zero();
        p.terms.insert((1, 0), 1);
        p
    }

    pub fn beta() -> Self {
        let mut p = BiPoly::zero();
        p.terms.insert((0, 1), 1);
        p
    }

    pub fn from_terms(it: impl IntoIterator<Item = ((u32, u32), i64)>) -> Self {
        let mut p = BiPoly::zero();
        for (k, c) in it {
            if c != 0 {
                *p.terms.entry(k).or_insert(0) += c;
            }
        }
        p.terms.retain(|_, c| *c != 0);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn z_degree(&self) -> u32 {
        self.terms.keys().map(|k| k.0).max().unwrap_or(0)
    }

    pub fn beta_degree(&self) -> u32 {
        self.terms.keys().map(|k| k.1).max().unwrap_or(0)
    }

    pub fn coeff(&self, zdeg: u32, bdeg: u32) -> i64 {
        self.terms.get(&(zdeg, bdeg)).copied().unwrap_or(0)
    }

    pub fn checked_add(&self, o: &BiPoly) -> Result<BiPoly> {
        let mut out = self.terms.clone();
        for (k, c) in &o.terms {
            let e = out.entry(*k).or_insert(0);
            *e = e.checked_add(*c).ok_or(Error::Overflow("polynomial addition"))?;
        }
        out.retain(|_, c| *c != 0);
        Ok(BiPoly { terms: out })
    }

    pub fn neg(&self) -> BiPoly {
        BiPoly { terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect() }
    }

    pub fn checked_mul(&self, o: &BiPoly) -> Result<BiPoly> {
        let mut out: BTreeMap<(u32, u32), i64> = BTreeMap::new();
        for (ka, a) in &self.terms {
            for (kb, b) in &o.terms {
                let prod = a.checked_mul(*b).ok_or(Error::Overflow("polynomial product"))?;
                let e = out.entry((ka.0 + kb.0, ka.1 + kb.1)).or_insert(0);
                *e = e.checked_add(prod).ok_or(Error::Overflow("polynomial product"))?;
            }
        }
        out.retain(|_, c| *c != 0);
        Ok(BiPoly { terms: out })
    }

    pub fn checked_pow(&self, n: u32) -> Result<BiPoly> {
        let mut acc = BiPoly::constant(1);
        for _ in 0..n {
            acc = acc.checked_mul(self)?;
        }
        Ok(acc)
    }

    /// Coefficient of z^k as a polynomial in β alone.
    pub fn z_coeff(&self, k: u32) -> BiPoly {
        BiPoly::from_terms(
            self.terms.iter().filter(|(key, _)| key.0 == k).map(|(key, c)| ((0, key.1), *c)),
        )
    }

    /// Substitutes q(z, β) for z: self(q(z,β), β).
    pub fn compose_z(&self, q: &BiPoly) -> Result<BiPoly> {
        let mut acc = BiPoly::zero();
        for k in (0..=self.z_degree()).rev() {
            acc = acc.checked_mul(q)?.checked_add(&self.z_coeff(k))?;
        }
        Ok(acc)
    }

    pub fn eval(&self, z: C64, beta: C64) -> C64 {
        // Horner in z over β-polynomials.
        let dz = self.z_degree();
        let mut acc = C64::new(0.0, 0.0);
        for k in (0..=dz).rev() {
            let mut ck = C64::new(0.0, 0.0);
            for (key, c) in self.terms.iter().filter(|(key, _)| key.0 == k) {
                ck += *c as f64 * beta.powu(key.1);
            }
            acc = acc * z + ck;
        }
        acc
    }

    /// Univariate coefficients in z (ascending) at a fixed β.
    pub fn at_beta(&self, beta: C64) -> Vec<C64> {
        let mut out = vec![C64::new(0.0, 0.0); self.z_degree() as usize + 1];
        for ((i, j), c) in &self.terms {
            out[*i as usize] += *c as f64 * beta.powu(*j);
        }
        out
    }

    /// Integer coefficients in z at an integer β, if they fit.
    pub fn at_integer_beta(&self, beta: i64) -> Result<IntPoly> {
        let mut out = vec![BigInt::zero(); self.z_degree() as usize + 1];
        for ((i, j), c) in &self.terms {
            out[*i as usize] += BigInt::from(*c) * num_traits::pow(BigInt::from(beta), *j as usize);
        }
        Ok(IntPoly::new(out))
    }

    /// Leading z-coefficient, as a polynomial in β.
    pub fn leading_z_coeff(&self) -> BiPoly {
        self.z_coeff(self.z_degree())
    }

    pub fn parse(s: &str) -> Result<BiPoly> {
        ExprParser::new(s).parse()
    }
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for ((i, j), c) in self.terms.iter().rev() {
            let neg = *c < 0;
            let a = c.unsigned_abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            let mut mon = String::new();
            let mut push = |v: &str, e: u32| {
                if e == 0 {
                    return;
                }
                if !mon.is_empty() {
                    mon.push('*');
                }
                if e == 1 {
                    mon.push_str(v);
                } else {
                    mon.push_str(&format!("{v}^{e}"));
                }
            };
            push("z", *i);
            push("b", *j);
            if mon.is_empty() {
                write!(f, "{a}")?;
            } else if a == 1 {
                write!(f, "{mon}")?;
            } else {
                write!(f, "{a}*{mon}")?;
            }
        }
        Ok(())
    }
}

/// Recursive-descent parser for integer polynomial expressions in `z` and
/// `b` (β): `+ - *`, `^` with nonnegative integer exponents, parentheses and
/// implicit multiplication (`2z`, `z(z-b-1)^2`). `β` and `beta` also denote β.
struct ExprParser {
    chars: Vec<char>,
    pos: usize,
}

impl ExprParser {
    fn new(s: &str) -> Self {
        let s = s.replace("beta", "b").replace('β', "b").replace('−', "-");
        ExprParser { chars: s.chars().filter(|c| !c.is_whitespace()).collect(), pos: 0 }
    }

    fn err(&self, msg: &str) -> Error {
        Error::Data(format!("polynomial parse error at {}: {msg}", self.pos))
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn parse(mut self) -> Result<BiPoly> {
        let p = self.expr()?;
        if self.pos != self.chars.len() {
            return Err(self.err("trailing input"));
        }
        Ok(p)
    }

    fn expr(&mut self) -> Result<BiPoly> {
        let mut acc = match self.peek() {
            Some('-') => {
                self.pos += 1;
                self.term()?.neg()
            }
            Some('+') => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        while let Some(c) = self.peek() {
            match c {
                '+' => {
                    self.pos += 1;
                    acc = acc.checked_add(&self.term()?)?;
                }
                '-' => {
                    self.pos += 1;
                    acc = acc.checked_add(&self.term()?.neg())?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<BiPoly> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    acc = acc.checked_mul(&self.power()?)?;
                }
                Some(c) if c == '(' || c == 'z' || c == 'b' || c.is_ascii_digit() => {
                    acc = acc.checked_mul(&self.power()?)?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<BiPoly> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            let e = self.number()?;
            return base.checked_pow(e as u32);
        }
        Ok(base)
    }

    fn number(&mut self) -> Result<i64> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a number"));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse::<i64>().map_err(|_| self.err("number out of range"))
    }

    fn atom(&mut self) -> Result<BiPoly> {
        match self.peek() {
            Some('z') => {
                self.pos += 1;
                Ok(BiPoly::z())
            }
            Some('b') => {
                self.pos += 1;
                Ok(BiPoly::beta())
            }
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => Ok(BiPoly::constant(self.number()?)),
            _ => Err(self.err("unexpected token")),
        }
    }
}

/// Parses an integer polynomial in z alone.
pub fn parse_int_poly(s: &str) -> Result<IntPoly> {
    let p = BiPoly::parse(s)?;
    if p.beta_degree() > 0 {
        return Err(Error::Data(format!("unexpected beta in {s}")));
    }
    p.at_integer_beta(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn aberth_finds_known_roots() {
        // (z−1)(z+2)(z−3i)
        let r = roots(&[
            C64::new(0.0, 6.0),
            C64::new(-2.0, -3.0),
            C64::new(1.0, -3.0),
            C64::new(1.0, 0.0),
        ])
        .unwrap();
        for want in [C64::new(1.0, 0.0), C64::new(-2.0, 0.0), C64::new(0.0, 3.0)] {
            assert!(r.iter().any(|z| (z - want).norm() < 1e-12), "{r:?}");
        }
    }

    #[test]
    fn discriminant_quadratic() {
        assert_eq!(IntPoly::from_i64(&[1, 0, 1]).discriminant(), BigInt::from(-4));
        assert_eq!(IntPoly::from_i64(&[1, 3, 1]).discriminant(), BigInt::from(5));
        // z³ + z + 1: −4 − 27 = −31
        assert_eq!(IntPoly::from_i64(&[1, 1, 0, 1]).discriminant(), BigInt::from(-31));
    }

    #[test]
    fn reflect_is_involution() {
        let p = IntPoly::from_i64(&[1, 3, 7, 5, 1]);
        assert_eq!(p.reflect(-3).reflect(-3), p);
        // z + 1 at β = −3 → γ' = −2: z + 2.
        assert_eq!(IntPoly::from_i64(&[1, 1]).reflect(-3), IntPoly::from_i64(&[2, 1]));
    }

    #[test]
    fn parser_handles_table_forms() {
        let p = BiPoly::parse("z(z - b - 1)^2 - b - 1").unwrap();
        let z = C64::new(0.3, -0.2);
        let b = C64::new(-1.2, 0.1);
        let direct = z * (z - b - 1.0).powu(2) - b - 1.0;
        assert!((p.eval(z, b) - direct).norm() < 1e-12);
        let q = parse_int_poly("z^4 + 6z^3 + 12z^2 + 9z + 1").unwrap();
        assert_eq!(q, IntPoly::from_i64(&[1, 9, 12, 6, 1]));
        assert_eq!(q.to_string(), "z^4 + 6z^3 + 12z^2 + 9z + 1");
        assert!(BiPoly::parse("z^").is_err());
    }

    #[test]
    fn compose_z_matches_evaluation() {
        let p = BiPoly::parse("z(z-b)").unwrap();
        let q = BiPoly::parse("z(1+b-z)^2").unwrap();
        let pq = p.compose_z(&q).unwrap();
        let z = C64::new(0.4, 0.9);
        let b = C64::new(-3.0, 0.0);
        assert!((pq.eval(z, b) - p.eval(q.eval(z, b), b)).norm() < 1e-10);
    }
}
