//! The invariant `ε(r)` and norms `‖λ‖_r = sup_α |d_α| r^α` of Mahler-type
//! series `λ = Σ d_α b^α`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::padic_core::{
    int, p_pow, rat, vp, ExactScalar, Magnitude, PContext, PExponent, Valuation,
};

/// `ε(r)` for `r = p^{-q}`, `0 < q ≤ 1`: the p-power `p^k` maximizing
/// `k − κ q p^k` (ties resolved to the larger power). Returns `(k, p^k)`.
pub fn epsilon_r(q: &ExactScalar, ctx: PContext) -> Result<(u32, BigInt)> {
    if !q.is_positive() || q > &BigRational::one() {
        return Err(Error::Domain(format!(
            "norm parameter r = p^-{q} lies outside [p^-1, 1)"
        )));
    }
    let kappa = int(ctx.kappa as i64);
    let p_minus_1 = int(ctx.p as i64 - 1);
    let score = |k: u32| int(k as i64) - &kappa * q * BigRational::from_integer(p_pow(ctx.p, k));
    let mut best_k = 0u32;
    let mut best = score(0);
    let mut k = 0u32;
    // The increment from k to k+1 is 1 − κ q p^k (p − 1); once negative it
    // stays negative, so the search can stop there.
    loop {
        let growth = &kappa * q * BigRational::from_integer(p_pow(ctx.p, k)) * &p_minus_1;
        if growth > BigRational::one() {
            break;
        }
        k += 1;
        let s = score(k);
        if s >= best {
            best = s;
            best_k = k;
        }
    }
    Ok((best_k, p_pow(ctx.p, best_k)))
}

/// Norm parameters `r = (p^{-q_1}, …, p^{-q_d})`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NormParams {
    pub p: u64,
    pub q: Vec<ExactScalar>,
}

impl NormParams {
    /// Validates `0 < q_ν ≤ 1` for every component.
    pub fn new(p: u64, q: Vec<ExactScalar>) -> Result<Self> {
        for qv in &q {
            if !qv.is_positive() || qv > &BigRational::one() {
                return Err(Error::Domain(format!(
                    "norm parameter {p}^-{qv} lies outside [p^-1, 1)"
                )));
            }
        }
        Ok(NormParams { p, q })
    }

    /// Parameters without the `[p^{-1}, 1)` restriction (used for `r^κ`).
    pub fn unchecked(p: u64, q: Vec<ExactScalar>) -> Self {
        NormParams { p, q }
    }

    pub fn dim(&self) -> usize {
        self.q.len()
    }

    /// Exponent of `r^α`, i.e. `−Σ q_ν α_ν`.
    pub fn exponent_of(&self, alpha: &[u32]) -> ExactScalar {
        -self
            .q
            .iter()
            .zip(alpha)
            .fold(BigRational::zero(), |acc, (q, &a)| acc + q * int(a as i64))
    }
}

type Rule = Arc<dyn Fn(&[u32]) -> ExactScalar + Send + Sync>;

/// Coefficients `d_α` of a series `Σ d_α b^α`, as a finite table or a rule.
#[derive(Clone)]
pub enum MahlerSeries {
    Table {
        dim: usize,
        coeffs: BTreeMap<Vec<u32>, ExactScalar>,
    },
    Rule {
        dim: usize,
        rule: Rule,
    },
}

impl fmt::Debug for MahlerSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MahlerSeries::Table { dim, coeffs } => f
                .debug_struct("Table")
                .field("dim", dim)
                .field("terms", &coeffs.len())
                .finish(),
            MahlerSeries::Rule { dim, .. } => f.debug_struct("Rule").field("dim", dim).finish(),
        }
    }
}

impl MahlerSeries {
    pub fn table(dim: usize, coeffs: BTreeMap<Vec<u32>, ExactScalar>) -> Self {
        MahlerSeries::Table { dim, coeffs }
    }

    pub fn rule(dim: usize, rule: impl Fn(&[u32]) -> ExactScalar + Send + Sync + 'static) -> Self {
        MahlerSeries::Rule {
            dim,
            rule: Arc::new(rule),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            MahlerSeries::Table { dim, .. } | MahlerSeries::Rule { dim, .. } => *dim,
        }
    }

    pub fn coeff(&self, alpha: &[u32]) -> ExactScalar {
        match self {
            MahlerSeries::Table { coeffs, .. } => {
                coeffs.get(alpha).cloned().unwrap_or_else(BigRational::zero)
            }
            MahlerSeries::Rule { rule, .. } => rule(alpha),
        }
    }
}

/// `log(1 + b) = Σ_{n≥1} (−1)^{n−1} b^n / n` in one variable.
pub fn log_series() -> MahlerSeries {
    MahlerSeries::rule(1, |alpha| {
        let n = alpha[0] as i64;
        if n == 0 {
            BigRational::zero()
        } else if n % 2 == 1 {
            rat(1, n)
        } else {
            rat(-1, n)
        }
    })
}

/// Result of a truncated norm computation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NormReport {
    /// `sup_{|α| ≤ T} |d_α| r^α`.
    pub norm: Magnitude,
    /// All indices attaining the supremum, sorted.
    pub argmax: Vec<Vec<u32>>,
    /// The greatest argmax index in the product order, when one exists.
    pub dominant: Option<Vec<u32>>,
    /// The supremum is attained on the truncation boundary `|α| = T`, so the
    /// result is inconclusive for the untruncated series.
    pub boundary: bool,
}

/// All multi-indices of length `d` with total degree `≤ t`.
pub fn multi_indices(d: usize, t: u32) -> Vec<Vec<u32>> {
    if d == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 0..=t {
        for rest in multi_indices(d - 1, t - first) {
            let mut v = vec![first];
            v.extend(rest);
            out.push(v);
        }
    }
    out
}

/// Exact supremum of `|d_α| r^α` over `|α| ≤ t`, the argmax set and the
/// dominant index (the greatest element of the argmax set in the product
/// order, reported only when it exists).
pub fn norm_and_dominant(series: &MahlerSeries, r: &NormParams, t: u32) -> Result<NormReport> {
    if series.dim() != r.dim() {
        return Err(Error::Domain(
            "series and norm parameters differ in dimension".into(),
        ));
    }
    let mut best: Option<ExactScalar> = None;
    let mut argmax: Vec<Vec<u32>> = Vec::new();
    for alpha in multi_indices(series.dim(), t) {
        let c = series.coeff(&alpha);
        let Valuation::Finite(v) = vp(&c, r.p) else {
            continue;
        };
        let e = r.exponent_of(&alpha) - int(v);
        match &best {
            Some(b) if &e < b => {}
            Some(b) if &e == b => argmax.push(alpha),
            _ => {
                best = Some(e);
                argmax = vec![alpha];
            }
        }
    }
    argmax.sort();
    let dominant = argmax
        .iter()
        .find(|cand| {
            argmax
                .iter()
                .all(|other| other.iter().zip(cand.iter()).all(|(o, c)| o <= c))
        })
        .cloned();
    let boundary = argmax
        .iter()
        .any(|a| a.iter().map(|&x| x as u64).sum::<u64>() == t as u64);
    Ok(NormReport {
        norm: best.map_or(Magnitude::Zero, |q| Magnitude::Power(PExponent::new(q))),
        argmax,
        dominant,
        boundary,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn epsilon_examples() {
        let ctx = PContext::new(3).unwrap();
        assert_eq!(epsilon_r(&int(1), ctx).unwrap().1, BigInt::from(1));
        assert_eq!(epsilon_r(&rat(1, 3), ctx).unwrap().1, BigInt::from(3));
        assert!(epsilon_r(&int(0), ctx).is_err());
        assert!(epsilon_r(&rat(3, 2), ctx).is_err());
    }

    /// Oracle: exhaustive comparison of `k − κ q p^k` over a fixed window.
    fn eps_oracle(p: u64, q: &ExactScalar) -> u32 {
        let kappa = if p == 2 { 2 } else { 1 };
        (0..12u32)
            .map(|k| {
                (
                    k,
                    int(k as i64) - int(kappa) * q * BigRational::from_integer(p_pow(p, k)),
                )
            })
            .fold((0u32, None::<ExactScalar>), |(bk, bs), (k, s)| match &bs {
                Some(b) if &s < b => (bk, bs),
                _ => (k, Some(s)),
            })
            .0
    }

    #[test]
    fn epsilon_matches_oracle() {
        for p in [2u64, 3, 5] {
            let ctx = PContext::new(p).unwrap();
            for den in 1..40 {
                for num in 1..=den.min(4) {
                    let q = rat(num, den);
                    assert_eq!(
                        epsilon_r(&q, ctx).unwrap().0,
                        eps_oracle(p, &q),
                        "p={p} q={q}"
                    );
                }
            }
        }
    }

    #[test]
    fn single_term_and_zero_series() {
        let mut t = BTreeMap::new();
        t.insert(vec![2], rat(1, 9));
        let s = MahlerSeries::table(1, t);
        let r = NormParams::new(3, vec![rat(1, 2)]).unwrap();
        let rep = norm_and_dominant(&s, &r, 10).unwrap();
        assert_eq!(rep.norm, Magnitude::Power(PExponent::new(int(1))));
        assert_eq!(rep.dominant, Some(vec![2]));
        let z = MahlerSeries::table(1, BTreeMap::new());
        let rep = norm_and_dominant(&z, &r, 10).unwrap();
        assert_eq!(rep.norm, Magnitude::Zero);
        assert!(rep.argmax.is_empty());
    }

    #[test]
    fn log_series_dominant_index() {
        // p = 3, r = 3^{-1/3}: |1/n| r^n is largest at n = 3.
        let r = NormParams::new(3, vec![rat(1, 3)]).unwrap();
        let rep = norm_and_dominant(&log_series(), &r, 30).unwrap();
        assert_eq!(rep.dominant, Some(vec![3]));
        assert_eq!(rep.norm, Magnitude::Power(PExponent::new(int(0))));
        assert!(!rep.boundary);
        // Oracle: enumerate |1/n| r^n directly.
        let best = (1..=30i64)
            .max_by_key(|&n| {
                let v = vp(&int(n), 3).finite().unwrap();
                (int(v) - rat(n, 3), n)
            })
            .unwrap();
        assert_eq!(best, 3);
    }

    #[test]
    fn incomparable_argmax_has_no_dominant_index() {
        let mut t = BTreeMap::new();
        t.insert(vec![1, 0], int(1));
        t.insert(vec![0, 1], int(1));
        let s = MahlerSeries::table(2, t);
        let r = NormParams::new(5, vec![rat(1, 2), rat(1, 2)]).unwrap();
        let rep = norm_and_dominant(&s, &r, 4).unwrap();
        assert_eq!(rep.argmax.len(), 2);
        assert_eq!(rep.dominant, None);
    }
}
