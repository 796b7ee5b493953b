//! Alternating binomial sums and the dominance of re-expanded monomials
//! `(b')^β`, `b'_ν = (1 + b_ν)^{p^{γ_ν}} − 1`, in the variables `b`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::dist_algebra::norms::{multi_indices, MahlerSeries, NormParams};
use crate::error::{Error, Result};
use crate::padic_core::{binomial, from_bigint, int, p_pow, vp_int, ExactScalar, Valuation};

/// `Σ_{k=0}^{a} (−1)^{a−k} C(a,k) C(ck + d, b)`.
pub fn binom_sum_i(a: u64, b: u64, c: u64, d: u64) -> BigInt {
    (0..=a).fold(BigInt::zero(), |acc, k| {
        let term = binomial(a as i64, k as i64) * binomial((c * k + d) as i64, b as i64);
        if (a - k) % 2 == 0 {
            acc + term
        } else {
            acc - term
        }
    })
}

/// `Σ_{k=0}^{a} (−1)^{a−k} C(a,k) C(p^h k, b)`.
pub fn binom_sum_ii(a: u64, b: u64, h: u32, p: u64) -> BigInt {
    let ph = p_pow(p, h);
    (0..=a).fold(BigInt::zero(), |acc, k| {
        let n: BigInt = &ph * BigInt::from(k);
        let n = i64::try_from(n).expect("binomial argument fits in i64");
        let term = binomial(a as i64, k as i64) * binomial(n, b as i64);
        if (a - k) % 2 == 0 {
            acc + term
        } else {
            acc - term
        }
    })
}

/// Values of both sums and whether each applicable claim holds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BinomVerdicts {
    pub sum_i: BigInt,
    pub sum_ii: BigInt,
    /// Claim for the first sum: `c^a` when `b = a`, `0` when `b < a`;
    /// `None` when neither case applies.
    pub claim_i: Option<bool>,
    /// Claim for the second sum: `1` when `b = a p^h`, `0` when `b < a` or
    /// `b > a p^h`, divisible by `p` otherwise.
    pub claim_ii: bool,
}

impl BinomVerdicts {
    pub fn all_hold(&self) -> bool {
        self.claim_i.unwrap_or(true) && self.claim_ii
    }
}

/// Evaluates both alternating sums exactly and checks the claims.
pub fn binom_identity_checks(a: u64, b: u64, c: u64, d: u64, h: u32, p: u64) -> BinomVerdicts {
    let sum_i = binom_sum_i(a, b, c, d);
    let sum_ii = binom_sum_ii(a, b, h, p);
    let claim_i = if b == a {
        Some(sum_i == BigInt::from(c).pow(a as u32))
    } else if b < a {
        Some(sum_i.is_zero())
    } else {
        None
    };
    let top = p_pow(p, h) * BigInt::from(a);
    let bb = BigInt::from(b);
    let claim_ii = if bb == top {
        sum_ii.is_one()
    } else if b < a || bb > top {
        sum_ii.is_zero()
    } else {
        sum_ii.is_multiple_of(&BigInt::from(p))
    };
    BinomVerdicts {
        sum_i,
        sum_ii,
        claim_i,
        claim_ii,
    }
}

/// `t_{β,α} = Π_ν Σ_l (−1)^{β_ν−l} C(β_ν,l) C(l p^{γ_ν}, α_ν)`: the coefficient
/// of `b^α` in `(b')^β`.
pub fn t_coefficient(p: u64, beta: &[u32], gamma: &[u32], alpha: &[u32]) -> BigInt {
    beta.iter()
        .zip(gamma)
        .zip(alpha)
        .map(|((&b, &g), &a)| binom_sum_ii(b as u64, a as u64, g, p))
        .fold(BigInt::one(), |acc, x| acc * x)
}

/// Outcome of the dominance computation for one `β`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DominanceReport {
    /// `S_β = (β_ν p^{γ_ν})_ν`.
    pub s_beta: Vec<u32>,
    pub t_at_s_beta: BigInt,
    /// `|t_{β,S_β}| = 1`.
    pub unit_at_s_beta: bool,
    /// Indices `α ≠ S_β` in range with `|t_{β,α}| r^α ≥ r^{S_β}`.
    pub violations: Vec<Vec<u32>>,
    /// Number of indices examined.
    pub checked: usize,
}

impl DominanceReport {
    pub fn holds(&self) -> bool {
        self.unit_at_s_beta && self.violations.is_empty()
    }
}

fn check_hypothesis(r: &NormParams, gamma: &[u32]) -> Result<()> {
    if gamma.len() != r.dim() {
        return Err(Error::Domain("γ and r differ in dimension".into()));
    }
    for (q, &g) in r.q.iter().zip(gamma) {
        let scaled = q * from_bigint(p_pow(r.p, g));
        if scaled > BigRational::one() {
            return Err(Error::Domain(format!(
                "r^(p^γ) = {}^-{} lies below p^-1",
                r.p, scaled
            )));
        }
    }
    Ok(())
}

/// Computes `t_{β,α}` for all `|α| ≤ t` and checks that `S_β` strictly
/// dominates: `|t_{β,S_β}| = 1` and `|t_{β,α}| r^α < r^{S_β}` otherwise.
pub fn subgroup_expansion_dominance(
    beta: &[u32],
    gamma: &[u32],
    r: &NormParams,
    t: u32,
) -> Result<DominanceReport> {
    check_hypothesis(r, gamma)?;
    if beta.len() != gamma.len() {
        return Err(Error::Domain("β and γ differ in dimension".into()));
    }
    let s_beta: Vec<u32> = beta
        .iter()
        .zip(gamma)
        .map(|(&b, &g)| b * r.p.pow(g) as u32)
        .collect();
    let t_s = t_coefficient(r.p, beta, gamma, &s_beta);
    let unit_at_s_beta = matches!(vp_int(&t_s, r.p), Valuation::Finite(0));
    let bound = r.exponent_of(&s_beta);
    let mut violations = Vec::new();
    let mut checked = 0;
    for alpha in multi_indices(beta.len(), t) {
        checked += 1;
        if alpha == s_beta {
            continue;
        }
        let c = t_coefficient(r.p, beta, gamma, &alpha);
        let Valuation::Finite(v) = vp_int(&c, r.p) else {
            continue;
        };
        if r.exponent_of(&alpha) - int(v) >= bound {
            violations.push(alpha);
        }
    }
    Ok(DominanceReport {
        s_beta,
        t_at_s_beta: t_s,
        unit_at_s_beta,
        violations,
        checked,
    })
}

/// Re-expands `Σ_β d_β (b')^β` (a finite one-variable table) in the variable
/// `b`, where `b' = (1 + b)^{p^γ} − 1`.
pub fn reexpand_subgroup_series(
    d_beta: &BTreeMap<u32, ExactScalar>,
    p: u64,
    gamma: u32,
) -> MahlerSeries {
    let mut out: BTreeMap<Vec<u32>, ExactScalar> = BTreeMap::new();
    let scale = p.pow(gamma) as u32;
    for (&beta, d) in d_beta {
        for alpha in 0..=beta * scale {
            let t = binom_sum_ii(beta as u64, alpha as u64, gamma, p);
            if t.is_zero() {
                continue;
            }
            let entry = out.entry(vec![alpha]).or_insert_with(BigRational::zero);
            *entry += d * from_bigint(t);
        }
    }
    out.retain(|_, v| !v.is_zero());
    MahlerSeries::table(1, out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic_core::rat;
    use num_traits::Signed;

    #[test]
    fn spec_examples() {
        assert_eq!(binom_sum_i(2, 2, 3, 1), BigInt::from(9));
        assert_eq!(binom_sum_i(3, 1, 3, 1), BigInt::zero());
        let v = binom_identity_checks(1, 2, 1, 0, 1, 3);
        assert_eq!(v.sum_ii, BigInt::from(3));
        assert!(v.claim_ii);
    }

    #[test]
    fn claim_table_exhaustive() {
        for p in [2u64, 3, 5] {
            for h in 0..=2 {
                for a in 0..=8 {
                    for b in 0..=8 {
                        for c in 1..=3 {
                            let v = binom_identity_checks(a, b, c, 1, h, p);
                            assert!(v.all_hold(), "p={p} h={h} a={a} b={b} c={c}: {v:?}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn dominance_example() {
        let r = NormParams::new(3, vec![rat(1, 4)]).unwrap();
        let rep = subgroup_expansion_dominance(&[2], &[1], &r, 12).unwrap();
        assert_eq!(rep.s_beta, vec![6]);
        assert!(rep.t_at_s_beta.abs().is_one());
        assert!(rep.holds(), "{rep:?}");
    }

    #[test]
    fn unit_vector_and_trivial_gamma() {
        for alpha in 0..=12u32 {
            let t = t_coefficient(3, &[1], &[1], &[alpha]);
            let expected = if (1..=3).contains(&alpha) {
                binomial(3, alpha as i64)
            } else {
                BigInt::zero()
            };
            assert_eq!(t, expected);
            for beta in 0..=4u32 {
                let t0 = t_coefficient(5, &[beta], &[0], &[alpha]);
                assert_eq!(
                    t0,
                    if alpha == beta {
                        BigInt::one()
                    } else {
                        BigInt::zero()
                    }
                );
            }
        }
    }

    #[test]
    fn hypothesis_violation_rejected() {
        let r = NormParams::new(3, vec![rat(1, 2)]).unwrap();
        assert!(subgroup_expansion_dominance(&[1], &[1], &r, 6).is_err());
    }
}
