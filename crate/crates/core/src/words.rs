//! Infinite words over `{0,1}`: periodic words and lower mechanical words.
//!
//! A mechanical word with slope `α` and intercept `ρ` has letters
//! `w_i = ⌊(i+1)α + ρ⌋ − ⌊iα + ρ⌋` for `i ≥ 1`. Irrational slopes give
//! Sturmian words. Slopes are exact (rationals or quadratic surds), so every
//! floor is evaluated without rounding.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::real::{self, Real};

/// Rational mechanical words with a period up to this length are enumerated
/// over one full period instead of being scanned.
pub const PERIOD_SCAN_LIMIT: u64 = 1 << 16;

/// Longest prefix examined while certifying a factor set.
pub const DEFAULT_PREFIX_BUDGET: usize = 1 << 20;

/// Exact slope of a mechanical word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Slope {
    Rational(BigRational),
    /// `(a + b·√d) / c`, `d > 0` not a perfect square, `c > 0`.
    Surd {
        a: BigInt,
        b: BigInt,
        d: BigInt,
        c: BigInt,
    },
}

fn floor_sqrt_times(b: &BigInt, d: &BigInt) -> BigInt {
    // ⌊b·√d⌋
    let sq = b * b * d;
    let s = sq.sqrt();
    if !b.is_negative() {
        s
    } else if &s * &s == sq {
        -s
    } else {
        -s - 1
    }
}

impl Slope {
    pub fn rational(p: i64, q: i64) -> Self {
        Slope::Rational(BigRational::new(p.into(), q.into()))
    }

    pub fn surd(a: i64, b: i64, d: i64, c: i64) -> Result<Self> {
        Self::surd_big(a.into(), b.into(), d.into(), c.into())
    }

    pub fn surd_big(a: BigInt, b: BigInt, d: BigInt, c: BigInt) -> Result<Self> {
        if !d.is_positive() {
            return Err(Error::InvalidWord(format!("sqrt({d}) is not a positive radicand")));
        }
        if c.is_zero() {
            return Err(Error::InvalidWord("zero denominator".into()));
        }
        let r = d.sqrt();
        if &r * &r == d || b.is_zero() {
            let num = a + b * r;
            return Ok(Slope::Rational(BigRational::new(num, c)));
        }
        let (a, b, c) = if c.is_negative() { (-a, -b, -c) } else { (a, b, c) };
        Ok(Slope::Surd { a, b, d, c })
    }

    /// `(3 − √5)/2 ≈ 0.381966`, the square of the golden-ratio conjugate.
    pub fn golden_square() -> Self {
        Slope::surd(3, -1, 5, 2).expect("valid surd")
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, Slope::Rational(_))
    }

    /// `⌊i·α + ρ⌋`, exact.
    pub fn floor_affine(&self, i: &BigInt, rho: &BigRational) -> BigInt {
        match self {
            Slope::Rational(q) => {
                let v = q * BigRational::from_integer(i.clone()) + rho;
                v.floor().to_integer()
            }
            Slope::Surd { a, b, d, c } => {
                let (rn, rd) = (rho.numer(), rho.denom());
                let big_a = i * a * rd + rn * c;
                let big_b = i * b * rd;
                let big_c = c * rd;
                (big_a + floor_sqrt_times(&big_b, d)).div_floor(&big_c)
            }
        }
    }

    pub fn to_real(&self) -> Real {
        match self {
            Slope::Rational(q) => real::from_ratio(q),
            Slope::Surd { a, b, d, c } => {
                let bits = real::precision_bits() + 16;
                let scale = BigInt::one() << bits;
                let root = floor_sqrt_times(&(b * &scale), d);
                let num = a * &scale + root;
                real::from_ratio(&BigRational::new(num, c * scale))
            }
        }
    }

    pub fn to_f64(&self) -> f64 {
        real::to_f64(&self.to_real())
    }

    fn validate_unit_interval(&self) -> Result<()> {
        let zero = BigRational::zero();
        let ok = match self {
            Slope::Rational(q) => q.is_positive() && *q <= BigRational::one(),
            Slope::Surd { .. } => {
                // irrational: 0 < α < 1 iff ⌊α⌋ = 0 and ⌊−α⌋ = −1
                let one = BigInt::one();
                let neg = self.negated();
                self.floor_affine(&one, &zero).is_zero()
                    && neg.floor_affine(&one, &zero) == -BigInt::one()
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidWord(format!("slope {self} is outside (0,1]")))
        }
    }

    fn negated(&self) -> Slope {
        match self {
            Slope::Rational(q) => Slope::Rational(-q),
            Slope::Surd { a, b, d, c } => Slope::Surd {
                a: -a,
                b: -b,
                d: d.clone(),
                c: c.clone(),
            },
        }
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slope::Rational(q) => write!(f, "{q}"),
            Slope::Surd { a, b, d, c } => {
                let sign = if b.is_negative() { '-' } else { '+' };
                let mag = b.abs();
                let coef = if mag.is_one() { String::new() } else { format!("{mag}*") };
                if c.is_one() {
                    write!(f, "{a}{sign}{coef}sqrt({d})")
                } else {
                    write!(f, "({a}{sign}{coef}sqrt({d}))/{c}")
                }
            }
        }
    }
}

fn parse_decimal(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("not a number: {s:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(p, q));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    let digits = format!("{int}{frac}");
    if !digits.chars().all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let num: BigInt = digits.parse().map_err(|_| bad())?;
    let den = num_traits::pow(BigInt::from(10), frac.len());
    let v = BigRational::new(num, den);
    Ok(if neg { -v } else { v })
}

impl FromStr for Slope {
    type Err = Error;

    /// Accepts `p/q`, decimals, and surds such as `(3-sqrt(5))/2` or `sqrt(2)-1`.
    fn from_str(s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let Some(idx) = s.find("sqrt(") else {
            return Ok(Slope::Rational(parse_decimal(&s)?));
        };
        let bad = || Error::Parse(format!("cannot parse surd {s:?}"));
        let close = s[idx..].find(')').map(|k| idx + k).ok_or_else(bad)?;
        let d: BigInt = s[idx + 5..close].parse().map_err(|_| bad())?;
        let mut head = &s[..idx];
        let mut tail = &s[close + 1..];
        // optional outer parentheses followed by a denominator
        let mut c = BigInt::one();
        if let Some(rest) = head.strip_prefix('(') {
            head = rest;
            let rest_tail = tail.strip_prefix(')').ok_or_else(bad)?;
            let (mid, den) = match rest_tail.find('/') {
                Some(k) => (&rest_tail[..k], Some(&rest_tail[k + 1..])),
                None => (rest_tail, None),
            };
            tail = mid;
            if let Some(den) = den {
                c = den.parse().map_err(|_| bad())?;
            }
            if !tail.is_empty() {
                return Err(bad());
            }
        } else if let Some(k) = tail.find('/') {
            c = tail[k + 1..].parse().map_err(|_| bad())?;
            tail = &tail[..k];
        }
        let head = head.strip_suffix('*').unwrap_or(head);
        let split = head.rfind(['+', '-']);
        let (a_str, coef_str) = match split {
            Some(0) | None => ("", head),
            Some(k) => (&head[..k], &head[k..]),
        };
        let mut a: BigInt = if a_str.is_empty() {
            BigInt::zero()
        } else {
            a_str.parse().map_err(|_| bad())?
        };
        let b: BigInt = match coef_str {
            "" | "+" => BigInt::one(),
            "-" => -BigInt::one(),
            other => other.parse().map_err(|_| bad())?,
        };
        if !tail.is_empty() {
            let extra: BigInt = tail.parse().map_err(|_| bad())?;
            a += extra;
        }
        Slope::surd_big(a, b, d, c)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WordKind {
    Periodic(Vec<u8>),
    Mechanical { alpha: Slope, rho: BigRational },
}

/// Generator of an infinite binary word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WordSpec {
    kind: WordKind,
}

/// Distinct factors of a fixed length with their first occurrence (1-based).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorSet {
    pub length: usize,
    pub factors: BTreeMap<Vec<u8>, usize>,
    pub certified: bool,
    /// Largest prefix length that was scanned.
    pub scanned: usize,
}

impl FactorSet {
    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }
}

impl WordSpec {
    pub fn periodic(pattern: Vec<u8>) -> Result<Self> {
        if pattern.is_empty() {
            return Err(Error::InvalidWord("empty periodic pattern".into()));
        }
        if pattern.iter().any(|&b| b > 1) {
            return Err(Error::InvalidWord("pattern letters must be 0 or 1".into()));
        }
        if pattern.iter().all(|&b| b == 0) {
            return Err(Error::InvalidWord("periodic word must be non-zero".into()));
        }
        Ok(WordSpec {
            kind: WordKind::Periodic(pattern),
        })
    }

    pub fn mechanical(alpha: Slope, rho: BigRational) -> Result<Self> {
        alpha.validate_unit_interval()?;
        if rho.is_negative() || rho >= BigRational::one() {
            return Err(Error::InvalidWord(format!("intercept {rho} is outside [0,1)")));
        }
        Ok(WordSpec {
            kind: WordKind::Mechanical { alpha, rho },
        })
    }

    /// Mechanical word of slope `(3−√5)/2` with zero intercept.
    pub fn fibonacci_like() -> Self {
        Self::mechanical(Slope::golden_square(), BigRational::zero()).expect("valid slope")
    }

    /// Periodic realization of the mechanical word of rational slope `p/q`,
    /// taken over one period of length `q`.
    pub fn from_rational_slope(alpha: &BigRational) -> Result<Self> {
        let q = alpha
            .denom()
            .to_u64()
            .filter(|&q| q <= PERIOD_SCAN_LIMIT)
            .ok_or_else(|| Error::InvalidWord(format!("period of slope {alpha} is too long")))?;
        let mech = Self::mechanical(Slope::Rational(alpha.clone()), BigRational::zero())?;
        let pattern = mech.generate_prefix(q as usize)?;
        Self::periodic(pattern)
    }

    pub fn kind(&self) -> &WordKind {
        &self.kind
    }

    pub fn is_periodic(&self) -> bool {
        self.period().is_some()
    }

    /// A period of the word when it is eventually periodic by construction.
    pub fn period(&self) -> Option<usize> {
        match &self.kind {
            WordKind::Periodic(p) => Some(p.len()),
            WordKind::Mechanical {
                alpha: Slope::Rational(q),
                ..
            } => q.denom().to_u64().filter(|&q| q <= PERIOD_SCAN_LIMIT).map(|q| q as usize),
            WordKind::Mechanical { .. } => None,
        }
    }

    /// Exact slope `π(w)`.
    pub fn slope(&self) -> Slope {
        match &self.kind {
            WordKind::Periodic(p) => {
                let ones = p.iter().filter(|&&b| b == 1).count() as i64;
                Slope::rational(ones, p.len() as i64)
            }
            WordKind::Mechanical { alpha, .. } => alpha.clone(),
        }
    }

    /// Letter `w_i`, `i ≥ 1`.
    pub fn letter(&self, i: usize) -> u8 {
        assert!(i >= 1, "words are indexed from 1");
        match &self.kind {
            WordKind::Periodic(p) => p[(i - 1) % p.len()],
            WordKind::Mechanical { alpha, rho } => {
                let i = BigInt::from(i);
                let hi = alpha.floor_affine(&(&i + 1), rho);
                let lo = alpha.floor_affine(&i, rho);
                (hi - lo).to_u8().expect("mechanical letters are 0 or 1")
            }
        }
    }

    /// `w_1 … w_n`.
    pub fn generate_prefix(&self, n: usize) -> Result<Vec<u8>> {
        if n == 0 {
            return Err(Error::InvalidWord("prefix length must be positive".into()));
        }
        Ok(self.prefix_from(1, n))
    }

    /// `w_start … w_{start+len-1}`.
    pub fn prefix_from(&self, start: usize, len: usize) -> Vec<u8> {
        match &self.kind {
            WordKind::Periodic(p) => (start..start + len).map(|i| p[(i - 1) % p.len()]).collect(),
            WordKind::Mechanical { alpha, rho } => {
                let mut out = Vec::with_capacity(len);
                let mut prev = alpha.floor_affine(&BigInt::from(start), rho);
                for i in start..start + len {
                    let next = alpha.floor_affine(&BigInt::from(i + 1), rho);
                    out.push(if next != prev { 1 } else { 0 });
                    prev = next;
                }
                out
            }
        }
    }

    /// `(w_1 + ⋯ + w_n)/n`, exact.
    pub fn slope_partial(&self, n: usize) -> Result<BigRational> {
        if n == 0 {
            return Err(Error::InvalidWord("prefix length must be positive".into()));
        }
        let ones = match &self.kind {
            WordKind::Periodic(_) => self.prefix_from(1, n).iter().map(|&b| b as u64).sum::<u64>(),
            WordKind::Mechanical { alpha, rho } => {
                // telescoping: Σ w_i = ⌊(n+1)α+ρ⌋ − ⌊α+ρ⌋
                let hi = alpha.floor_affine(&BigInt::from(n + 1), rho);
                let lo = alpha.floor_affine(&BigInt::one(), rho);
                (hi - lo).to_u64().expect("count fits")
            }
        };
        Ok(BigRational::new(BigInt::from(ones), BigInt::from(n)))
    }

    /// `w_1 + ⋯ + w_n` (0 for `n = 0`).
    pub fn ones_count(&self, n: usize) -> u64 {
        if n == 0 {
            return 0;
        }
        match &self.kind {
            WordKind::Periodic(p) => {
                let t = p.len();
                let per: u64 = p.iter().map(|&b| b as u64).sum();
                let full = (n / t) as u64 * per;
                full + p[..n % t].iter().map(|&b| b as u64).sum::<u64>()
            }
            WordKind::Mechanical { alpha, rho } => {
                let hi = alpha.floor_affine(&BigInt::from(n + 1), rho);
                let lo = alpha.floor_affine(&BigInt::one(), rho);
                (hi - lo).to_u64().expect("count fits")
            }
        }
    }

    /// Factor complexity with the default prefix budget.
    pub fn complexity(&self, length: usize) -> Result<(usize, FactorSet)> {
        self.complexity_with_budget(length, DEFAULT_PREFIX_BUDGET)
    }

    pub fn complexity_with_budget(&self, length: usize, budget: usize) -> Result<(usize, FactorSet)> {
        if length == 0 {
            return Err(Error::InvalidWord("factor length must be positive".into()));
        }
        if let Some(t) = self.period() {
            // every factor occurs at one of the positions 1..=t
            let prefix = self.prefix_from(1, t + length - 1);
            let factors = collect_factors(&prefix, length, t);
            let set = FactorSet {
                length,
                certified: true,
                scanned: prefix.len(),
                factors,
            };
            return Ok((set.len(), set));
        }
        let target = length + 1;
        let mut scan = 4 * (length + 2);
        let mut prefix = self.prefix_from(1, scan.min(budget));
        let mut previous: Option<usize> = None;
        loop {
            let factors = collect_factors(&prefix, length, prefix.len() + 1 - length);
            let count = factors.len();
            let stable = previous == Some(count) && count == target;
            if stable || scan >= budget {
                let set = FactorSet {
                    length,
                    certified: stable,
                    scanned: prefix.len(),
                    factors,
                };
                return Ok((count, set));
            }
            previous = Some(count);
            let next = (scan * 2).min(budget);
            let more = self.prefix_from(prefix.len() + 1, next - prefix.len());
            prefix.extend(more);
            scan = next;
        }
    }

    /// Certified factor set, or an error when the budget runs out.
    pub fn certified_factors(&self, length: usize) -> Result<FactorSet> {
        let (_, set) = self.complexity(length)?;
        if !set.certified {
            return Err(Error::UncertifiedFactors {
                length,
                budget: DEFAULT_PREFIX_BUDGET,
            });
        }
        Ok(set)
    }
}

fn collect_factors(prefix: &[u8], length: usize, starts: usize) -> BTreeMap<Vec<u8>, usize> {
    let mut out = BTreeMap::new();
    for s in 0..starts.min(prefix.len() + 1 - length) {
        out.entry(prefix[s..s + length].to_vec()).or_insert(s + 1);
    }
    out
}

impl fmt::Display for WordSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            WordKind::Periodic(p) => {
                write!(f, "periodic:")?;
                p.iter().try_for_each(|b| write!(f, "{b}"))
            }
            WordKind::Mechanical { alpha, rho } => write!(f, "mechanical:alpha={alpha},rho={rho}"),
        }
    }
}

impl FromStr for WordSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(bits) = s.strip_prefix("periodic:") {
            let pattern = bits
                .chars()
                .map(|c| match c {
                    '0' => Ok(0),
                    '1' => Ok(1),
                    _ => Err(Error::Parse(format!("bad letter {c:?} in {s:?}"))),
                })
                .collect::<Result<Vec<u8>>>()?;
            return WordSpec::periodic(pattern);
        }
        if let Some(params) = s.strip_prefix("mechanical:") {
            let mut alpha = None;
            let mut rho = BigRational::zero();
            for part in split_params(params) {
                let (key, value) = part
                    .split_once('=')
                    .ok_or_else(|| Error::Parse(format!("expected key=value in {part:?}")))?;
                match key.trim() {
                    "alpha" => alpha = Some(value.parse::<Slope>()?),
                    "rho" => rho = parse_decimal(value.trim())?,
                    other => return Err(Error::Parse(format!("unknown word parameter {other:?}"))),
                }
            }
            let alpha = alpha.ok_or_else(|| Error::Parse("mechanical word needs alpha=".into()))?;
            return WordSpec::mechanical(alpha, rho);
        }
        Err(Error::Parse(format!(
            "word must look like periodic:0110 or mechanical:alpha=...,rho=..., got {s:?}"
        )))
    }
}

/// Split on commas that are not inside parentheses.
fn split_params(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

pub fn bits_to_string(bits: &[u8]) -> String {
    bits.iter().map(|&b| if b == 1 { '1' } else { '0' }).collect()
}
