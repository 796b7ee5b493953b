//! Exact rational arithmetic with p-adic valuations.
//!
//! Every scalar in the crate is an arbitrary-precision rational number
//! ([`ExactScalar`]). Magnitudes in `p^Q` (absolute values, norm parameters)
//! are kept as exact exponents ([`PExponent`]) and never converted to floats.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Arbitrary-precision rational number in canonical reduced form.
pub type ExactScalar = BigRational;

/// Builds an integer-valued scalar.
pub fn int(n: i64) -> ExactScalar {
    BigRational::from_integer(BigInt::from(n))
}

/// Builds the scalar `num/den`; panics on a zero denominator.
pub fn rat(num: i64, den: i64) -> ExactScalar {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Lifts an arbitrary-precision integer to a scalar.
pub fn from_bigint(n: BigInt) -> ExactScalar {
    BigRational::from_integer(n)
}

/// `x^e` for an arbitrary (possibly negative) integer exponent; `x` must be
/// nonzero when `e < 0`.
pub fn pow_i(x: &ExactScalar, e: i64) -> ExactScalar {
    let base = if e < 0 { x.recip() } else { x.clone() };
    num_traits::pow(base, e.unsigned_abs() as usize)
}

/// Formats a rational as `num/den` (the denominator is always printed).
pub fn fmt_rational(x: &ExactScalar) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Parses `n`, `-n`, `num/den` into an exact rational.
pub fn parse_rational(s: &str) -> Result<ExactScalar> {
    let t = s.trim();
    let parse_int = |u: &str| {
        u.trim()
            .parse::<BigInt>()
            .map_err(|_| Error::Parse(format!("not a rational number: {s:?}")))
    };
    match t.split_once('/') {
        Some((n, d)) => {
            let d = parse_int(d)?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(BigRational::new(parse_int(n)?, d))
        }
        None => Ok(from_bigint(parse_int(t)?)),
    }
}

/// A p-adic valuation: an integer or `+∞` (the valuation of zero).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    /// The finite value, if any.
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Valuation::Infinite)
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Valuation::Finite(a), Valuation::Finite(b)) => a.cmp(b),
            (Valuation::Finite(_), Valuation::Infinite) => Ordering::Less,
            (Valuation::Infinite, Valuation::Finite(_)) => Ordering::Greater,
            (Valuation::Infinite, Valuation::Infinite) => Ordering::Equal,
        }
    }
}

impl Add for Valuation {
    type Output = Valuation;
    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinite,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => write!(f, "inf"),
        }
    }
}

/// Trial-division primality test (primes in this crate are small).
pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// The prime together with `κ = 1` for odd `p` and `κ = 2` for `p = 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PContext {
    pub p: u64,
    pub kappa: u32,
}

impl PContext {
    pub fn new(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::Domain(format!("{p} is not a prime")));
        }
        Ok(PContext {
            p,
            kappa: if p == 2 { 2 } else { 1 },
        })
    }

    pub fn p_big(&self) -> BigInt {
        BigInt::from(self.p)
    }

    /// `p^h` as an arbitrary-precision integer.
    pub fn pow(&self, h: u32) -> BigInt {
        num_traits::pow(self.p_big(), h as usize)
    }
}

/// `p^h` as an arbitrary-precision integer.
pub fn p_pow(p: u64, h: u32) -> BigInt {
    num_traits::pow(BigInt::from(p), h as usize)
}

/// Valuation of a nonzero or zero integer.
pub fn vp_int(n: &BigInt, p: u64) -> Valuation {
    if n.is_zero() {
        return Valuation::Infinite;
    }
    let pb = BigInt::from(p);
    let mut m = n.abs();
    let mut v = 0i64;
    loop {
        let (q, r) = m.div_rem(&pb);
        if !r.is_zero() {
            break;
        }
        m = q;
        v += 1;
    }
    Valuation::Finite(v)
}

/// `v_p(x)` with `v_p(0) = +∞`.
pub fn vp(x: &ExactScalar, p: u64) -> Valuation {
    if x.is_zero() {
        return Valuation::Infinite;
    }
    let vn = vp_int(x.numer(), p).finite().unwrap_or(0);
    let vd = vp_int(x.denom(), p).finite().unwrap_or(0);
    Valuation::Finite(vn - vd)
}

/// True when `v_p(x) = 0`.
pub fn is_unit(x: &ExactScalar, p: u64) -> bool {
    vp(x, p) == Valuation::Finite(0)
}

/// True when `v_p(x) ≥ 0`.
pub fn is_p_integral(x: &ExactScalar, p: u64) -> bool {
    vp_int(x.denom(), p) == Valuation::Finite(0)
}

/// A magnitude `p^q` stored through its rational exponent `q`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PExponent {
    pub q: BigRational,
}

impl PExponent {
    pub fn new(q: BigRational) -> Self {
        PExponent { q }
    }

    /// The magnitude `p^0 = 1`.
    pub fn one() -> Self {
        PExponent {
            q: BigRational::zero(),
        }
    }

    /// Product of magnitudes (sum of exponents).
    pub fn mul(&self, other: &PExponent) -> PExponent {
        PExponent {
            q: &self.q + &other.q,
        }
    }

    /// `self^n`.
    pub fn powi(&self, n: i64) -> PExponent {
        PExponent {
            q: &self.q * int(n),
        }
    }

    /// Renders as `p^q` with the concrete prime substituted.
    pub fn display(&self, p: u64) -> String {
        if self.q.is_integer() {
            format!("{p}^{}", self.q.numer())
        } else {
            format!("{p}^{}/{}", self.q.numer(), self.q.denom())
        }
    }

    /// Exact integer value when `q` is a nonnegative integer.
    pub fn as_integer(&self, p: u64) -> Option<BigInt> {
        if self.q.is_integer() && !self.q.is_negative() {
            self.q.to_integer().to_u32().map(|e| p_pow(p, e))
        } else {
            None
        }
    }
}

/// Parses a norm parameter written `p^q`, e.g. `3^-1/3`, `5^-1` or `2^1/2`.
/// Returns the prime and the exponent `q`.
pub fn parse_pexponent(s: &str) -> Result<(u64, PExponent)> {
    let (base, exp) = s
        .trim()
        .split_once('^')
        .ok_or_else(|| Error::Parse(format!("expected p^q, got {s:?}")))?;
    let p: u64 = base
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad prime in {s:?}")))?;
    let q = parse_rational(exp)?;
    Ok((p, PExponent::new(q)))
}

/// An absolute value: either zero or a power of `p`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Magnitude {
    Zero,
    Power(PExponent),
}

impl Magnitude {
    pub fn display(&self, p: u64) -> String {
        match self {
            Magnitude::Zero => "0".to_string(),
            Magnitude::Power(e) => e.display(p),
        }
    }

    pub fn mul(&self, other: &Magnitude) -> Magnitude {
        match (self, other) {
            (Magnitude::Power(a), Magnitude::Power(b)) => Magnitude::Power(a.mul(b)),
            _ => Magnitude::Zero,
        }
    }
}

/// `|x|_p = p^{-v_p(x)}`.
pub fn abs_p(x: &ExactScalar, p: u64) -> Magnitude {
    match vp(x, p) {
        Valuation::Infinite => Magnitude::Zero,
        Valuation::Finite(v) => Magnitude::Power(PExponent::new(int(-v))),
    }
}

/// `|x|_p` as an exact rational number (`p^{-v}`); zero for `x = 0`.
pub fn abs_p_value(x: &ExactScalar, p: u64) -> ExactScalar {
    match vp(x, p) {
        Valuation::Infinite => BigRational::zero(),
        Valuation::Finite(v) => pow_i(&int(p as i64), -v),
    }
}

/// `|x|_p^{-1} = p^{v_p(x)}` as an exact rational; `x` must be nonzero.
pub fn inv_abs_p_value(x: &ExactScalar, p: u64) -> Result<ExactScalar> {
    match vp(x, p) {
        Valuation::Infinite => Err(Error::Domain("inverse absolute value of zero".into())),
        Valuation::Finite(v) => Ok(pow_i(&int(p as i64), v)),
    }
}

/// Residue of a p-integral rational modulo `m` (an integer prime-to-denominator),
/// as the representative in `[0, m)`.
pub fn residue_mod(c: &ExactScalar, m: &BigInt) -> Result<BigInt> {
    let num = c.numer().mod_floor(m);
    let den = c.denom().mod_floor(m);
    let inv = mod_inverse(&den, m).ok_or_else(|| {
        Error::Domain(format!(
            "denominator of {} is not invertible modulo {m}",
            fmt_rational(c)
        ))
    })?;
    Ok((num * inv).mod_floor(m))
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    if m.is_one() {
        return Some(BigInt::zero());
    }
    let g = a.extended_gcd(m);
    if g.gcd.is_one() {
        Some(g.x.mod_floor(m))
    } else if (-&g.gcd).is_one() {
        Some((-g.x).mod_floor(m))
    } else {
        None
    }
}

/// Splits a p-integral `c` as `c = Q + R` with `R ∈ {0, …, p^h − 1}` and
/// `v_p(Q) ≥ h`.
pub fn residue_split(c: &ExactScalar, p: u64, h: u32) -> Result<(BigInt, ExactScalar)> {
    if !is_p_integral(c, p) {
        return Err(Error::Domain(format!(
            "{} is not {p}-integral",
            fmt_rational(c)
        )));
    }
    let m = p_pow(p, h);
    let r = residue_mod(c, &m)?;
    let q = c - from_bigint(r.clone());
    Ok((r, q))
}

/// Sum of the base-`p` digits of `n`.
pub fn digit_sum(n: u64, p: u64) -> u64 {
    let mut m = n;
    let mut s = 0;
    while m > 0 {
        s += m % p;
        m /= p;
    }
    s
}

/// Binomial coefficient `C(n, k)`, zero outside `0 ≤ k ≤ n`.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if n < 0 || k < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= BigInt::from(n - i);
        acc /= BigInt::from(i + 1);
    }
    acc
}

/// `n!` for `n ≥ 0`.
pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// Rising factorial `x (x+1) ⋯ (x+n−1)`; equal to 1 for `n = 0`.
pub fn rising(x: &ExactScalar, n: u64) -> ExactScalar {
    let mut acc = BigRational::one();
    let mut y = x.clone();
    for _ in 0..n {
        acc *= &y;
        y += BigRational::one();
    }
    acc
}

/// `(-1)^n` as a scalar.
pub fn sign_pow(n: i64) -> ExactScalar {
    if n.rem_euclid(2) == 0 {
        BigRational::one()
    } else {
        -BigRational::one()
    }
}

/// Sign of an integer as `-1`, `0`, `1`.
pub fn sign_of(n: &BigInt) -> i32 {
    match n.sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn valuations_of_examples() {
        assert_eq!(vp(&int(0), 3), Valuation::Infinite);
        assert_eq!(vp(&int(12), 2), Valuation::Finite(2));
        assert_eq!(vp(&rat(9, 4), 3), Valuation::Finite(2));
        assert_eq!(vp(&rat(9, 4), 2), Valuation::Finite(-2));
    }

    #[test]
    fn residue_split_examples() {
        assert_eq!(
            residue_split(&int(7), 3, 1).unwrap(),
            (BigInt::from(1), int(6))
        );
        let (r, q) = residue_split(&rat(1, 2), 3, 2).unwrap();
        // Oracle: brute-force solve 2R ≡ 1 mod 9.
        let brute = (0..9).find(|r| (2 * r) % 9 == 1).unwrap();
        assert_eq!(r, BigInt::from(brute));
        assert_eq!(q, rat(-9, 2));
        assert!(vp(&q, 3) >= Valuation::Finite(2));
        assert_eq!(
            residue_split(&int(0), 5, 3).unwrap(),
            (BigInt::zero(), int(0))
        );
        assert!(residue_split(&rat(1, 3), 3, 1).is_err());
    }

    #[test]
    fn digit_sums_and_binomials() {
        assert_eq!(digit_sum(0, 5), 0);
        assert_eq!(digit_sum(125, 5), 1);
        assert_eq!(digit_sum(7, 2), 3);
        assert_eq!(binomial(4, 2), BigInt::from(6));
        assert_eq!(binomial(9, 0), BigInt::one());
        assert_eq!(binomial(3, 5), BigInt::zero());
        assert_eq!(binomial(3, -1), BigInt::zero());
    }

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("-3/6").unwrap(), rat(-1, 2));
        assert_eq!(fmt_rational(&int(5)), "5/1");
        let (p, e) = parse_pexponent("3^-1/3").unwrap();
        assert_eq!(p, 3);
        assert_eq!(e.q, rat(-1, 3));
        assert_eq!(e.display(3), "3^-1/3");
        assert!(parse_rational("1/0").is_err());
    }

    #[test]
    fn absolute_values() {
        assert_eq!(abs_p_value(&rat(3, 4), 3), rat(1, 3));
        assert_eq!(abs_p(&int(0), 3), Magnitude::Zero);
        assert_eq!(inv_abs_p_value(&int(-15), 3).unwrap(), int(3));
        assert!(PContext::new(4).is_err());
        assert_eq!(PContext::new(2).unwrap().kappa, 2);
    }
}
