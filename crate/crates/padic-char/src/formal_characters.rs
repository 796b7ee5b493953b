//! Formal sums of characters and their evaluation through localization.
//!
//! A [`FormalFunction`] is a symbolic element of `Z[[X]]`, where `X` is the
//! free abelian group on a declared list of [`Generator`]s. Each generator is a
//! character of a split torus, given by an exponent vector over the torus
//! coordinates, so every monomial has an exact rational value at every
//! [`TorusPoint`] with unit coordinates.
//!
//! Infinite sums are only ever represented symbolically (geometric-series and
//! permutation-character nodes). Numerical partial sums `Σ_{n<k} λ(s)^n` do not
//! converge p-adically for unit `λ(s) ≠ 1`, so the value of `Σ_j λ^j` at `s`
//! is *defined* through a certificate `(g, h)` with `h·f = g` and `h(s) ≠ 0`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::padic_core::{
    fmt_rational, from_bigint, p_pow, pow_i, residue_mod, vp, ExactScalar, Valuation,
};

/// A point of the split torus, given by its coordinates (rational p-adic units).
pub type TorusPoint = Vec<ExactScalar>;

/// Componentwise inverse of a torus point.
pub fn torus_inverse(s: &TorusPoint) -> TorusPoint {
    s.iter().map(|x| x.recip()).collect()
}

/// Componentwise product of two torus points.
pub fn torus_mul(s: &TorusPoint, t: &TorusPoint) -> TorusPoint {
    s.iter().zip(t).map(|(a, b)| a * b).collect()
}

/// Value `∏ s_i^{e_i}` of the character with exponent vector `e`.
pub fn torus_character(exponents: &[i64], s: &TorusPoint) -> ExactScalar {
    assert_eq!(exponents.len(), s.len(), "character/torus rank mismatch");
    exponents
        .iter()
        .zip(s)
        .fold(BigRational::one(), |acc, (&e, x)| acc * pow_i(x, e))
}

/// A named character generator with its evaluation rule.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generator {
    pub name: String,
    /// Exponents over the torus coordinates: the generator's value at `s` is
    /// `∏ s_i^{coord_exponents[i]}`.
    pub coord_exponents: Vec<i64>,
}

/// The declared generator list of a session.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generators {
    pub list: Vec<Generator>,
}

impl Generators {
    pub fn new(list: Vec<Generator>) -> Self {
        Generators { list }
    }

    pub fn len(&self) -> usize {
        self.list.len()
    }

    pub fn is_empty(&self) -> bool {
        self.list.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.list.iter().position(|g| g.name == name)
    }

    /// Values of all generators at `s`.
    pub fn values(&self, s: &TorusPoint) -> Vec<ExactScalar> {
        self.list
            .iter()
            .map(|g| torus_character(&g.coord_exponents, s))
            .collect()
    }
}

/// A character monomial `∏ g_i^{e_i}` over the declared generators.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Monomial(pub Vec<i64>);

impl Monomial {
    pub fn identity(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    /// The single generator `g_i` in a list of `n` generators.
    pub fn generator(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Monomial(e)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        assert_eq!(self.0.len(), other.0.len());
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn pow(&self, k: i64) -> Monomial {
        Monomial(self.0.iter().map(|a| a * k).collect())
    }

    pub fn inv(&self) -> Monomial {
        self.pow(-1)
    }

    /// Total degree `Σ |e_i|`, used for truncation.
    pub fn degree(&self) -> u64 {
        self.0.iter().map(|e| e.unsigned_abs()).sum()
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// Value at `s`; multiplicative in the monomial.
    pub fn eval(&self, gens: &Generators, s: &TorusPoint) -> ExactScalar {
        assert_eq!(
            self.0.len(),
            gens.len(),
            "monomial/generator count mismatch"
        );
        gens.values(s)
            .iter()
            .zip(&self.0)
            .fold(BigRational::one(), |acc, (v, &e)| acc * pow_i(v, e))
    }
}

/// A finite integer combination of monomials: an element of `Z[X]`.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(into = "Vec<TermRepr>", try_from = "Vec<TermRepr>")]
pub struct GroupRingElement {
    pub terms: BTreeMap<Vec<i64>, BigInt>,
}

/// Serialized form of one term of a [`GroupRingElement`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TermRepr {
    pub exponents: Vec<i64>,
    pub coeff: String,
}

impl From<GroupRingElement> for Vec<TermRepr> {
    fn from(g: GroupRingElement) -> Self {
        g.terms
            .into_iter()
            .map(|(exponents, c)| TermRepr {
                exponents,
                coeff: c.to_string(),
            })
            .collect()
    }
}

impl TryFrom<Vec<TermRepr>> for GroupRingElement {
    type Error = String;
    fn try_from(v: Vec<TermRepr>) -> std::result::Result<Self, String> {
        let mut g = GroupRingElement::zero();
        for t in v {
            let c: BigInt = t
                .coeff
                .parse()
                .map_err(|_| format!("bad coefficient {:?}", t.coeff))?;
            g.add_term(Monomial(t.exponents), &c);
        }
        Ok(g)
    }
}

impl GroupRingElement {
    pub fn zero() -> Self {
        GroupRingElement::default()
    }

    pub fn monomial(m: Monomial) -> Self {
        Self::term(m, BigInt::one())
    }

    pub fn term(m: Monomial, c: BigInt) -> Self {
        let mut g = Self::zero();
        g.add_term(m, &c);
        g
    }

    /// `e(1)` in `n` generators.
    pub fn one(n: usize) -> Self {
        Self::monomial(Monomial::identity(n))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: Monomial, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m.0.clone()).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&m.0);
        }
    }

    pub fn coeff(&self, m: &Monomial) -> BigInt {
        self.terms.get(&m.0).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn add(&self, other: &GroupRingElement) -> GroupRingElement {
        let mut out = self.clone();
        for (k, v) in &other.terms {
            out.add_term(Monomial(k.clone()), v);
        }
        out
    }

    pub fn sub(&self, other: &GroupRingElement) -> GroupRingElement {
        self.add(&other.scale(&-BigInt::one()))
    }

    pub fn scale(&self, c: &BigInt) -> GroupRingElement {
        let mut out = GroupRingElement::zero();
        for (k, v) in &self.terms {
            out.add_term(Monomial(k.clone()), &(v * c));
        }
        out
    }

    /// Product, keeping only monomials of degree `≤ max_degree` when given.
    pub fn mul_truncated(
        &self,
        other: &GroupRingElement,
        max_degree: Option<u64>,
    ) -> GroupRingElement {
        let mut out = GroupRingElement::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let m = Monomial(a.clone()).mul(&Monomial(b.clone()));
                if max_degree.map_or(true, |t| m.degree() <= t) {
                    out.add_term(m, &(ca * cb));
                }
            }
        }
        out
    }

    pub fn mul(&self, other: &GroupRingElement) -> GroupRingElement {
        self.mul_truncated(other, None)
    }

    /// Restriction to monomials of degree `≤ t`.
    pub fn truncate(&self, t: u64) -> GroupRingElement {
        GroupRingElement {
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| Monomial((*k).clone()).degree() <= t)
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
        }
    }

    /// `Σ n_λ λ(s)`; a ring homomorphism `Z[X] → Q`.
    pub fn eval(&self, gens: &Generators, s: &TorusPoint) -> ExactScalar {
        self.terms.iter().fold(BigRational::zero(), |acc, (k, c)| {
            acc + from_bigint(c.clone()) * Monomial(k.clone()).eval(gens, s)
        })
    }

    pub fn max_degree(&self) -> u64 {
        self.terms
            .keys()
            .map(|k| Monomial(k.clone()).degree())
            .max()
            .unwrap_or(0)
    }
}

/// Symbolic element of `Z[[X]]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FormalFunction {
    /// A finite combination of monomials.
    Poly {
        element: GroupRingElement,
    },
    /// `Σ_{j ≥ 0} e(λ)^j`.
    Geom {
        ratio: Monomial,
    },
    /// Formal character of the permutation `i ↦ μ(s)·i mod p^h` on
    /// `{0, …, p^h − 1}` (or on the nonzero indices when `include_zero` is false).
    Perm {
        p: u64,
        h: u32,
        multiplier: Monomial,
        include_zero: bool,
    },
    Sum {
        terms: Vec<FormalFunction>,
    },
    Product {
        factors: Vec<FormalFunction>,
    },
}

impl FormalFunction {
    pub fn poly(element: GroupRingElement) -> Self {
        FormalFunction::Poly { element }
    }

    pub fn monomial(m: Monomial) -> Self {
        Self::poly(GroupRingElement::monomial(m))
    }

    pub fn geom(ratio: Monomial) -> Self {
        FormalFunction::Geom { ratio }
    }

    pub fn perm(p: u64, h: u32, multiplier: Monomial, include_zero: bool) -> Self {
        FormalFunction::Perm {
            p,
            h,
            multiplier,
            include_zero,
        }
    }

    pub fn sum(terms: Vec<FormalFunction>) -> Self {
        FormalFunction::Sum { terms }
    }

    pub fn product(factors: Vec<FormalFunction>) -> Self {
        FormalFunction::Product { factors }
    }

    pub fn contains_perm(&self) -> bool {
        match self {
            FormalFunction::Perm { .. } => true,
            FormalFunction::Sum { terms } => terms.iter().any(Self::contains_perm),
            FormalFunction::Product { factors } => factors.iter().any(Self::contains_perm),
            _ => false,
        }
    }

    /// Ratios of all geometric-series nodes, in tree order.
    pub fn geom_ratios(&self) -> Vec<Monomial> {
        match self {
            FormalFunction::Geom { ratio } => vec![ratio.clone()],
            FormalFunction::Sum { terms } => terms.iter().flat_map(Self::geom_ratios).collect(),
            FormalFunction::Product { factors } => {
                factors.iter().flat_map(Self::geom_ratios).collect()
            }
            _ => Vec::new(),
        }
    }

    /// Canonical JSON expression tree.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("formal functions always serialize")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// Number of `i` in `{0,…,p^h−1}` (or `{1,…,p^h−1}`) with `μ·i ≡ i mod p^h`,
/// counted by brute force.
pub fn perm_fixpoints(p: u64, h: u32, mu: &ExactScalar, include_zero: bool) -> Result<BigInt> {
    let m = p_pow(p, h);
    let mu_mod = residue_mod(mu, &m)?;
    let mut count = BigInt::zero();
    let mut i = if include_zero {
        BigInt::zero()
    } else {
        BigInt::one()
    };
    while i < m {
        if (&mu_mod * &i - &i) % &m == BigInt::zero() {
            count += 1;
        }
        i += 1;
    }
    Ok(count)
}

/// Value of `f` at `s`: geometric nodes evaluate to `(1 − λ(s))^{-1}`,
/// permutation nodes to their fixpoint count, sums and products pointwise.
pub fn eval_formal(f: &FormalFunction, gens: &Generators, s: &TorusPoint) -> Result<ExactScalar> {
    match f {
        FormalFunction::Poly { element } => Ok(element.eval(gens, s)),
        FormalFunction::Geom { ratio } => {
            let v = ratio.eval(gens, s);
            let d = BigRational::one() - &v;
            if d.is_zero() {
                return Err(Error::NotEvaluableAt(format!(
                    "geometric ratio takes the value 1 at {}",
                    fmt_point(s)
                )));
            }
            Ok(d.recip())
        }
        FormalFunction::Perm {
            p,
            h,
            multiplier,
            include_zero,
        } => {
            let mu = multiplier.eval(gens, s);
            if vp(&mu, *p) != Valuation::Finite(0) {
                return Err(Error::Domain(format!(
                    "permutation multiplier {} is not a {p}-adic unit",
                    fmt_rational(&mu)
                )));
            }
            Ok(from_bigint(perm_fixpoints(*p, *h, &mu, *include_zero)?))
        }
        FormalFunction::Sum { terms } => terms.iter().try_fold(BigRational::zero(), |acc, t| {
            Ok(acc + eval_formal(t, gens, s)?)
        }),
        FormalFunction::Product { factors } => {
            factors.iter().try_fold(BigRational::one(), |acc, t| {
                Ok(acc * eval_formal(t, gens, s)?)
            })
        }
    }
}

fn fmt_point(s: &TorusPoint) -> String {
    let parts: Vec<String> = s.iter().map(fmt_rational).collect();
    format!("({})", parts.join(", "))
}

/// Coefficients of `f` on all monomials of degree `≤ t`.
///
/// Exact whenever total degree is additive on the products involved, which
/// holds when all monomials of a product lie in a common orthant.
pub fn expand(f: &FormalFunction, n_gens: usize, t: u64) -> Result<GroupRingElement> {
    match f {
        FormalFunction::Poly { element } => Ok(element.truncate(t)),
        FormalFunction::Geom { ratio } => {
            if ratio.is_identity() {
                return Err(Error::Domain("Σ e(1)^j is not summable".into()));
            }
            let mut out = GroupRingElement::zero();
            let mut m = Monomial::identity(n_gens);
            while m.degree() <= t {
                out.add_term(m.clone(), &BigInt::one());
                m = m.mul(ratio);
            }
            Ok(out)
        }
        FormalFunction::Perm { .. } => Err(Error::Domain(
            "permutation nodes are evaluable only, not expandable".into(),
        )),
        FormalFunction::Sum { terms } => {
            terms.iter().try_fold(GroupRingElement::zero(), |acc, x| {
                Ok(acc.add(&expand(x, n_gens, t)?))
            })
        }
        FormalFunction::Product { factors } => factors
            .iter()
            .try_fold(GroupRingElement::one(n_gens), |acc, x| {
                Ok(acc.mul_truncated(&expand(x, n_gens, t)?, Some(t)))
            }),
    }
}

/// Evidence that `f` is evaluable on the sampled points: `h·f = g` with `h`
/// zero-free on the samples.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalCertificate {
    pub g: GroupRingElement,
    pub h: GroupRingElement,
    pub checked_to: u64,
}

impl EvalCertificate {
    /// `g(s)/h(s)`.
    pub fn value(&self, gens: &Generators, s: &TorusPoint) -> Result<ExactScalar> {
        let hv = self.h.eval(gens, s);
        if hv.is_zero() {
            return Err(Error::NotEvaluableAt(format!(
                "h vanishes at {}",
                fmt_point(s)
            )));
        }
        Ok(self.g.eval(gens, s) / hv)
    }
}

/// Exact numerator for `f` relative to the denominator `∏ (1 − e(λ))` over all
/// geometric nodes of `f`.
fn numerator(f: &FormalFunction, n: usize) -> Result<(GroupRingElement, GroupRingElement)> {
    // Returns (g, h) with h·f = g and h the product over the Geom nodes of f.
    match f {
        FormalFunction::Poly { element } => Ok((element.clone(), GroupRingElement::one(n))),
        FormalFunction::Geom { ratio } => Ok((
            GroupRingElement::one(n),
            GroupRingElement::one(n).sub(&GroupRingElement::monomial(ratio.clone())),
        )),
        FormalFunction::Perm { .. } => Err(Error::Domain(
            "certificates are only built for permutation-free functions".into(),
        )),
        FormalFunction::Sum { terms } => {
            let parts: Vec<_> = terms
                .iter()
                .map(|t| numerator(t, n))
                .collect::<Result<_>>()?;
            let h_all = parts
                .iter()
                .fold(GroupRingElement::one(n), |acc, (_, h)| acc.mul(h));
            let mut g_all = GroupRingElement::zero();
            for (i, (g, _)) in parts.iter().enumerate() {
                let others = parts
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| *j != i)
                    .fold(GroupRingElement::one(n), |acc, (_, (_, h))| acc.mul(h));
                g_all = g_all.add(&g.mul(&others));
            }
            Ok((g_all, h_all))
        }
        FormalFunction::Product { factors } => factors.iter().try_fold(
            (GroupRingElement::one(n), GroupRingElement::one(n)),
            |(ga, ha), x| {
                let (g, h) = numerator(x, n)?;
                Ok((ga.mul(&g), ha.mul(&h)))
            },
        ),
    }
}

/// Builds and verifies the certificate `(g, h)` for a permutation-free `f`:
/// `h = ∏ (1 − e(λ))` over all geometric nodes, `h·f = g` is checked
/// coefficientwise up to degree `t`, `h(s) ≠ 0` and `eval_formal(f, s) =
/// g(s)/h(s)` on every sample.
pub fn certify_evaluable(
    f: &FormalFunction,
    gens: &Generators,
    samples: &[TorusPoint],
    t: u64,
) -> Result<EvalCertificate> {
    if f.contains_perm() {
        return Err(Error::Domain(
            "certificates are only built for permutation-free functions".into(),
        ));
    }
    let n = gens.len();
    let (g, h) = numerator(f, n)?;
    let lhs = h.mul_truncated(&expand(f, n, t)?, Some(t));
    if lhs != g.truncate(t) {
        return Err(Error::CertificateRejected(format!(
            "h·f and g differ below degree {t}"
        )));
    }
    let cert = EvalCertificate {
        g,
        h,
        checked_to: t,
    };
    for s in samples {
        if cert.h.eval(gens, s).is_zero() {
            return Err(Error::CertificateRejected(format!(
                "h vanishes at sample {}",
                fmt_point(s)
            )));
        }
        let direct = eval_formal(f, gens, s)?;
        if direct != cert.value(gens, s)? {
            return Err(Error::CertificateRejected(format!(
                "recursive value differs from g/h at {}",
                fmt_point(s)
            )));
        }
    }
    Ok(cert)
}

/// Formal character `Σ_i e(λ_i)` of a finite-dimensional triangular
/// representation with diagonal characters `λ_i`.
pub fn formal_character_triangular(diag: &[Monomial], n_gens: usize) -> FormalFunction {
    let mut g = GroupRingElement::zero();
    for m in diag {
        assert_eq!(m.0.len(), n_gens);
        g.add_term(m.clone(), &BigInt::one());
    }
    FormalFunction::poly(g)
}

/// Formal character of a lazily generated diagonal `n ↦ λ_n` (`n < count`),
/// restricted to degree `≤ t`. Summability is checked up to the truncation:
/// extending the diagonal to `2·count` entries must not change any coefficient
/// of degree `≤ t`.
pub fn formal_character_lazy(
    diag: impl Fn(usize) -> Monomial,
    count: usize,
    n_gens: usize,
    t: u64,
) -> Result<GroupRingElement> {
    let collect = |upto: usize| {
        let mut g = GroupRingElement::zero();
        for i in 0..upto {
            let m = diag(i);
            if m.degree() <= t {
                g.add_term(m, &BigInt::one());
            }
        }
        g
    };
    let _ = n_gens;
    let first = collect(count);
    if first != collect(2 * count) {
        return Err(Error::Domain(format!(
            "diagonal is not summable below degree {t}: some monomial keeps recurring"
        )));
    }
    Ok(first)
}

/// Coefficientwise limit of a sequence of group-ring elements on the monomials
/// of degree `≤ window`. The last two members must agree there.
pub fn limit_of_truncations(seq: &[GroupRingElement], window: u64) -> Result<GroupRingElement> {
    match seq {
        [] => Err(Error::NotConverged("empty sequence".into())),
        [only] => Ok(only.truncate(window)),
        [.., prev, last] => {
            let (a, b) = (prev.truncate(window), last.truncate(window));
            if a == b {
                Ok(b)
            } else {
                let changing: Vec<String> =
                    b.sub(&a).terms.keys().map(|k| format!("{k:?}")).collect();
                Err(Error::NotConverged(format!(
                    "coefficients still changing at monomials {}",
                    changing.join(", ")
                )))
            }
        }
    }
}

/// Which covering of `Z_p` defines the smooth representation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Covering {
    /// Cosets `i + p^h Z_p`.
    Standard,
    /// Inverted sets `{z^{-1} : z ∈ i p^{1−h} + p^h Z_p}` together with `p^h Z_p`.
    Inverted,
}

/// Trace of `s` on the space of functions constant on the chosen covering,
/// by brute-force counting of fixed basis vectors.
pub fn smooth_trace(p: u64, h: u32, s: &ExactScalar, covering: Covering) -> Result<BigInt> {
    if vp(s, p) != Valuation::Finite(0) {
        return Err(Error::Domain(format!(
            "{} is not a {p}-adic unit",
            fmt_rational(s)
        )));
    }
    match covering {
        Covering::Standard => {
            let m = p_pow(p, h);
            let s_inv = residue_mod(&s.recip(), &m)?;
            let mut count = BigInt::zero();
            let mut i = BigInt::zero();
            while i < m {
                if (&s_inv * &i - &i) % &m == BigInt::zero() {
                    count += 1;
                }
                i += 1;
            }
            Ok(count)
        }
        Covering::Inverted => {
            if h == 0 {
                return Ok(BigInt::one());
            }
            let m = p_pow(p, 2 * h - 1);
            let ph = p_pow(p, h);
            let s_mod = residue_mod(s, &m)?;
            // The index 0 (the set p^h Z_p) is always fixed.
            let mut count = BigInt::one();
            let mut i = BigInt::one();
            while i < m {
                // Index set: v_p(i) < h.
                let in_index_set = &i % &ph != BigInt::zero();
                if in_index_set && (&s_mod * &i - &i) % &m == BigInt::zero() {
                    count += 1;
                }
                i += 1;
            }
            Ok(count)
        }
    }
}

/// Closed form `p^{min(h, v_p(s^{-1} − 1))}` of the standard smooth trace.
pub fn smooth_trace_standard_closed(p: u64, h: u32, s: &ExactScalar) -> BigInt {
    let v = vp(&(s.recip() - BigRational::one()), p);
    let e = match v {
        Valuation::Infinite => h as i64,
        Valuation::Finite(v) => v.min(h as i64),
    };
    p_pow(p, e.max(0) as u32)
}

/// Closed form `1 + #{i ∈ I : v_p(i) + v_p(s − 1) ≥ 2h − 1}` of the inverted
/// smooth trace, counted over valuations rather than residues.
pub fn smooth_trace_inverted_closed(p: u64, h: u32, s: &ExactScalar) -> BigInt {
    if h == 0 {
        return BigInt::one();
    }
    let vs = vp(&(s - BigRational::one()), p);
    let top = 2 * h as i64 - 1;
    // Number of 1 ≤ i < p^{2h−1} with v_p(i) = v is p^{2h−1−v} − p^{2h−2−v}.
    let mut count = BigInt::one();
    for v in 0..h as i64 {
        let holds = match vs {
            Valuation::Infinite => true,
            Valuation::Finite(w) => v + w >= top,
        };
        if holds {
            let with_v = p_pow(p, (top - v) as u32) - p_pow(p, (top - v - 1) as u32);
            count += with_v;
        }
    }
    count
}

/// `#{0 ≤ i < p^β : v_p(i) ≥ β − α}` by brute force.
pub fn count_divisible(alpha: u32, beta: u32, p: u64) -> Result<BigInt> {
    if alpha > beta {
        return Err(Error::Domain(format!("α = {alpha} exceeds β = {beta}")));
    }
    let m = p_pow(p, beta);
    let step = p_pow(p, beta - alpha);
    let mut count = BigInt::zero();
    let mut i = BigInt::zero();
    while i < m {
        if &i % &step == BigInt::zero() {
            count += 1;
        }
        i += 1;
    }
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic_core::{int, rat};

    /// One generator `ε` with `ε(s) = a^{-1}` on the rank-one torus.
    fn eps_gens() -> Generators {
        Generators::new(vec![Generator {
            name: "eps".into(),
            coord_exponents: vec![-1],
        }])
    }

    #[test]
    fn group_ring_evaluation() {
        let gens = eps_gens();
        let s = vec![int(2)];
        let f = GroupRingElement::one(1).sub(&GroupRingElement::monomial(Monomial(vec![2])));
        assert_eq!(f.eval(&gens, &s), rat(3, 4));
        assert_eq!(GroupRingElement::zero().eval(&gens, &s), int(0));
        let mut g = GroupRingElement::zero();
        for n in 0..2 {
            g.add_term(Monomial(vec![-2 * n]), &BigInt::one());
        }
        assert_eq!(g.eval(&gens, &s), int(5));
    }

    #[test]
    fn geometric_and_permutation_nodes() {
        let gens = eps_gens();
        let s = vec![int(2)];
        let f = FormalFunction::geom(Monomial(vec![2]));
        assert_eq!(eval_formal(&f, &gens, &s).unwrap(), rat(4, 3));
        // μ(s) = ε(s)^{-2} = a² = 4.
        let perm9 = FormalFunction::perm(3, 2, Monomial(vec![-2]), true);
        let brute = (0..9).filter(|i| (4 * i) % 9 == *i).count() as i64;
        assert_eq!(eval_formal(&perm9, &gens, &s).unwrap(), int(brute));
        assert_eq!(brute, 3);
        let perm5 = FormalFunction::perm(5, 1, Monomial(vec![-2]), false);
        assert_eq!(eval_formal(&perm5, &gens, &s).unwrap(), int(0));
        let perm5z = FormalFunction::perm(5, 1, Monomial(vec![-2]), true);
        assert_eq!(eval_formal(&perm5z, &gens, &s).unwrap(), int(1));
        let one = vec![int(1)];
        assert!(matches!(
            eval_formal(&f, &gens, &one),
            Err(Error::NotEvaluableAt(_))
        ));
    }

    #[test]
    fn certificates() {
        let gens = eps_gens();
        let samples = vec![vec![int(2)], vec![int(3)], vec![rat(1, 2)]];
        let f = FormalFunction::geom(Monomial(vec![2]));
        let cert = certify_evaluable(&f, &gens, &samples, 32).unwrap();
        assert_eq!(cert.g, GroupRingElement::one(1));
        assert_eq!(
            cert.h,
            GroupRingElement::one(1).sub(&GroupRingElement::monomial(Monomial(vec![2])))
        );
        let poly = GroupRingElement::monomial(Monomial(vec![3])).add(&GroupRingElement::one(1));
        let cert =
            certify_evaluable(&FormalFunction::poly(poly.clone()), &gens, &samples, 8).unwrap();
        assert_eq!((cert.g, cert.h), (poly, GroupRingElement::one(1)));
        // A sample where 1 − e(ε²) vanishes is rejected.
        assert!(certify_evaluable(&f, &gens, &[vec![int(-1)]], 8).is_err());
    }

    #[test]
    fn limits_of_truncations() {
        let seq: Vec<GroupRingElement> = (1..=10)
            .map(|k| {
                let mut g = GroupRingElement::zero();
                for n in 0..k {
                    g.add_term(Monomial(vec![n]), &BigInt::one());
                }
                g
            })
            .collect();
        let lim = limit_of_truncations(&seq, 3).unwrap();
        for n in 0..=3 {
            assert_eq!(lim.coeff(&Monomial(vec![n])), BigInt::one());
        }
        let constant = vec![GroupRingElement::one(1); 3];
        assert_eq!(
            limit_of_truncations(&constant, 5).unwrap(),
            GroupRingElement::one(1)
        );
        let diverging: Vec<_> = (1..5)
            .map(|k| GroupRingElement::term(Monomial(vec![0]), BigInt::from(k)))
            .collect();
        assert!(matches!(
            limit_of_truncations(&diverging, 3),
            Err(Error::NotConverged(_))
        ));
    }

    #[test]
    fn smooth_traces() {
        assert_eq!(
            smooth_trace(3, 2, &int(4), Covering::Standard).unwrap(),
            BigInt::from(3)
        );
        assert_eq!(
            smooth_trace(5, 3, &int(1), Covering::Standard).unwrap(),
            BigInt::from(125)
        );
        assert_eq!(
            smooth_trace(3, 4, &int(4), Covering::Inverted).unwrap(),
            BigInt::one()
        );
        assert_eq!(smooth_trace_inverted_closed(3, 4, &int(4)), BigInt::one());
    }

    #[test]
    fn divisible_counts() {
        assert_eq!(count_divisible(0, 3, 2).unwrap(), BigInt::one());
        assert_eq!(count_divisible(2, 2, 3).unwrap(), BigInt::from(9));
        assert_eq!(count_divisible(1, 3, 3).unwrap(), BigInt::from(3));
        assert!(count_divisible(3, 2, 3).is_err());
    }

    #[test]
    fn triangular_characters() {
        let trivial = formal_character_triangular(&[Monomial(vec![0])], 1);
        assert_eq!(trivial, FormalFunction::poly(GroupRingElement::one(1)));
        let lazy = formal_character_lazy(|n| Monomial(vec![n as i64]), 4, 1, 10);
        assert!(lazy.is_err(), "unbounded diagonal changes below the window");
        let ok = formal_character_lazy(|n| Monomial(vec![100 + n as i64]), 4, 1, 10).unwrap();
        assert!(ok.is_zero());
    }

    #[test]
    fn json_round_trip() {
        let f = FormalFunction::product(vec![
            FormalFunction::monomial(Monomial(vec![1, 0])),
            FormalFunction::perm(5, 2, Monomial(vec![0, -2]), true),
            FormalFunction::geom(Monomial(vec![0, -2])),
        ]);
        let back = FormalFunction::from_json(&f.to_json()).unwrap();
        assert_eq!(f, back);
    }
}
