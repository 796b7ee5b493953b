//! Root data over `Q_p` restricted to the Iwahori subgroup.
//!
//! The quotient is spanned by `λ_{α,β}` with `α_j < p^{h_j}` and `β_j < k`;
//! a torus element `s` acts by
//!
//! `s·λ_{α',β'} = χ_w^{-1}(s) a(s)^{β'} Σ_γ Q^γ/γ! · λ_{R, β'+γ}`,
//!
//! where `α'_j a_j(s) = R_j + Q_j` is the residue split modulo `p^{h_j}`.
//! The matrix is triangular in `β`, so the trace only needs the diagonal:
//! `χ_w^{-1}(s) a(s)^β` at the `α` fixed by `α ↦ R(s, α)`.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formal_characters::{torus_character, TorusPoint};
use crate::padic_core::{
    abs_p_value, factorial, from_bigint, is_prime, is_unit, p_pow, pow_i, residue_split, vp,
    ExactScalar, Valuation,
};
use crate::principal_series::{ActionMatrix, Label};

/// A root datum over `Q_p`: the roots `a_j(s) = ∏ s_i^{e_{ji}}` spanning the
/// unipotent radical, the character `χ_w(s) = ∏ s_i^{c_i}`, per-root levels
/// `p^{h_j}` and the cutoff `k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootDatum {
    pub p: u64,
    pub torus_rank: usize,
    pub roots: Vec<Vec<i64>>,
    pub chi_w: Vec<i64>,
    pub levels: Vec<u32>,
    pub k: u32,
}

impl RootDatum {
    pub fn validate(&self) -> Result<()> {
        if !is_prime(self.p) {
            return Err(Error::Domain(format!("{} is not prime", self.p)));
        }
        if self.roots.is_empty() {
            return Err(Error::Domain("a root datum needs at least one root".into()));
        }
        for r in &self.roots {
            if r.len() != self.torus_rank {
                return Err(Error::Domain(format!(
                    "root {r:?} does not have torus rank {}",
                    self.torus_rank
                )));
            }
            if r.iter().all(|&e| e == 0) {
                return Err(Error::Domain("roots must be nonzero".into()));
            }
        }
        if self.chi_w.len() != self.torus_rank {
            return Err(Error::Domain("χ_w has the wrong rank".into()));
        }
        if self.levels.len() != self.roots.len() {
            return Err(Error::Domain("one level per root is required".into()));
        }
        if self.k == 0 {
            return Err(Error::Domain("cutoff k must be positive".into()));
        }
        Ok(())
    }

    pub fn d(&self) -> usize {
        self.roots.len()
    }

    /// The same datum with every level set to `h` and cutoff `k`.
    pub fn with_uniform(&self, h: u32, k: u32) -> RootDatum {
        RootDatum {
            levels: vec![h; self.d()],
            k,
            ..self.clone()
        }
    }

    /// Whether all roots lie in a common closed orthant, i.e. every coordinate
    /// exponent has the same sign across roots. Needed for the formal
    /// characters `Σ_β ∏ e(a_j)^{β_j}` to be summable.
    pub fn roots_in_common_orthant(&self) -> bool {
        (0..self.torus_rank)
            .all(|i| self.roots.iter().all(|r| r[i] >= 0) || self.roots.iter().all(|r| r[i] <= 0))
    }

    /// `a_j(s)` for every root.
    pub fn root_values(&self, s: &TorusPoint) -> Vec<ExactScalar> {
        self.roots.iter().map(|r| torus_character(r, s)).collect()
    }

    fn check_point(&self, s: &TorusPoint) -> Result<()> {
        if s.len() != self.torus_rank {
            return Err(Error::Domain(format!(
                "torus point has {} coordinates, expected {}",
                s.len(),
                self.torus_rank
            )));
        }
        for x in s {
            if x.is_zero() || !is_unit(x, self.p) {
                return Err(Error::Domain(format!(
                    "coordinate {x} is not a {}-adic unit",
                    self.p
                )));
            }
        }
        Ok(())
    }

    fn moduli(&self) -> Vec<i64> {
        self.levels
            .iter()
            .map(|&h| i64::try_from(p_pow(self.p, h)).expect("level small enough for enumeration"))
            .collect()
    }
}

/// All multi-indices `x` with `0 ≤ x_j < bounds_j`, in lexicographic order.
fn grid(bounds: &[i64]) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for &b in bounds {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..b).map(move |x| {
                    let mut v = prefix.clone();
                    v.push(x);
                    v
                })
            })
            .collect();
    }
    out
}

/// Labels `α ++ β` of the basis.
pub fn iwahori_basis(rd: &RootDatum) -> Vec<Label> {
    let d = rd.d();
    let mut bounds = rd.moduli();
    bounds.extend(std::iter::repeat(i64::from(rd.k)).take(d));
    grid(&bounds)
}

/// Residue split of `α_j a_j(s)` for every root: `(R, Q)`.
fn split_all(
    rd: &RootDatum,
    alpha: &[i64],
    avals: &[ExactScalar],
) -> Result<Vec<(i64, ExactScalar)>> {
    alpha
        .iter()
        .zip(avals)
        .zip(&rd.levels)
        .map(|((&a, v), &h)| {
            let (r, q) = residue_split(&(v * ExactScalar::from_integer(a.into())), rd.p, h)?;
            Ok((i64::try_from(r).expect("residue fits"), q))
        })
        .collect()
}

/// Matrix of `s` on the quotient.
pub fn iwahori_action_matrix(s: &TorusPoint, rd: &RootDatum) -> Result<ActionMatrix> {
    rd.validate()?;
    rd.check_point(s)?;
    let d = rd.d();
    let k = i64::from(rd.k);
    let avals = rd.root_values(s);
    let chi_inv = torus_character(&rd.chi_w, s).recip();
    let mut mat = ActionMatrix::zero(iwahori_basis(rd));
    let index = mat.index();
    for col in 0..mat.dim() {
        let label = mat.labels[col].clone();
        let (alpha, beta) = label.split_at(d);
        let split = split_all(rd, alpha, &avals)?;
        let base = beta
            .iter()
            .zip(&avals)
            .fold(chi_inv.clone(), |acc, (&b, a)| acc * pow_i(a, b));
        let gamma_bounds: Vec<i64> = beta.iter().map(|&b| k - b).collect();
        for gamma in grid(&gamma_bounds) {
            let mut v = base.clone();
            for (g, (_, q)) in gamma.iter().zip(&split) {
                v *= pow_i(q, *g) / from_bigint(factorial(*g as u64));
            }
            let mut row: Label = split.iter().map(|(r, _)| *r).collect();
            row.extend(beta.iter().zip(&gamma).map(|(b, g)| b + g));
            mat.add_entry(index[&row], col, v);
        }
    }
    Ok(mat)
}

/// Diagonal entries `(label, value)` of [`iwahori_action_matrix`], computed
/// without building the matrix: nonzero exactly at the fixed `α`.
pub fn iwahori_diagonal(s: &TorusPoint, rd: &RootDatum) -> Result<Vec<(Label, ExactScalar)>> {
    rd.validate()?;
    rd.check_point(s)?;
    let avals = rd.root_values(s);
    let chi_inv = torus_character(&rd.chi_w, s).recip();
    let betas = grid(&vec![i64::from(rd.k); rd.d()]);
    let mut out = Vec::new();
    for alpha in grid(&rd.moduli()) {
        let fixed = split_all(rd, &alpha, &avals)?
            .iter()
            .zip(&alpha)
            .all(|((r, _), a)| r == a);
        for beta in &betas {
            let v = if fixed {
                beta.iter()
                    .zip(&avals)
                    .fold(chi_inv.clone(), |acc, (&b, a)| acc * pow_i(a, b))
            } else {
                ExactScalar::zero()
            };
            let mut label = alpha.clone();
            label.extend(beta);
            out.push((label, v));
        }
    }
    Ok(out)
}

/// Trace of [`iwahori_action_matrix`], summed over the diagonal.
pub fn iwahori_trace(s: &TorusPoint, rd: &RootDatum) -> Result<ExactScalar> {
    Ok(iwahori_diagonal(s, rd)?
        .into_iter()
        .fold(ExactScalar::zero(), |acc, (_, v)| acc + v))
}

/// Number of `α` with `R(s, α) = α`, by enumeration of the whole index grid.
pub fn fixpoint_count_brute(s: &TorusPoint, rd: &RootDatum) -> Result<u64> {
    rd.validate()?;
    rd.check_point(s)?;
    let avals = rd.root_values(s);
    let mut count = 0u64;
    for alpha in grid(&rd.moduli()) {
        if split_all(rd, &alpha, &avals)?
            .iter()
            .zip(&alpha)
            .all(|((r, _), a)| r == a)
        {
            count += 1;
        }
    }
    Ok(count)
}

/// `∏_j p^{min(h_j, v_p(a_j(s) − 1))}`.
pub fn fixpoint_count_closed(s: &TorusPoint, rd: &RootDatum) -> Result<u64> {
    rd.validate()?;
    rd.check_point(s)?;
    let mut count = 1u64;
    for (a, &h) in rd.root_values(s).iter().zip(&rd.levels) {
        let e = match vp(&(a - ExactScalar::one()), rd.p) {
            Valuation::Infinite => h,
            Valuation::Finite(v) => h.min(u32::try_from(v).expect("nonnegative valuation")),
        };
        count *= rd.p.pow(e);
    }
    Ok(count)
}

/// `χ_w^{-1}(s) · (fixpoint count) · ∏_j Σ_{β_j<k} a_j(s)^{β_j}`.
pub fn iwahori_block_closed_form(s: &TorusPoint, rd: &RootDatum) -> Result<ExactScalar> {
    let fix = fixpoint_count_brute(s, rd)?;
    let chi_inv = torus_character(&rd.chi_w, s).recip();
    let geo = rd.root_values(s).iter().fold(ExactScalar::one(), |acc, a| {
        acc * (0..rd.k).fold(ExactScalar::zero(), |g, b| g + pow_i(a, i64::from(b)))
    });
    Ok(chi_inv * ExactScalar::from_integer(fix.into()) * geo)
}

/// `χ_w(s) ∏_j 1/((1 − a_j^{-1}(s)) |1 − a_j^{-1}(s)|_p)`.
pub fn theta_iwahori(s: &TorusPoint, rd: &RootDatum) -> Result<ExactScalar> {
    rd.validate()?;
    rd.check_point(s)?;
    let mut out = torus_character(&rd.chi_w, s);
    for (j, a) in rd.root_values(s).iter().enumerate() {
        if a.is_one() {
            return Err(Error::NotRegular(format!("root {j} takes the value 1")));
        }
        let u = ExactScalar::one() - a.recip();
        out /= &u * abs_p_value(&u, rd.p);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic_core::{int, rat};
    use crate::principal_series::sl2::{sl2_action_matrix, SL2Config, Side};

    fn datum(p: u64, roots: Vec<Vec<i64>>, chi_w: Vec<i64>, h: u32, k: u32) -> RootDatum {
        let t = chi_w.len();
        let d = roots.len();
        RootDatum {
            p,
            torus_rank: t,
            roots,
            chi_w,
            levels: vec![h; d],
            k,
        }
    }

    #[test]
    fn identity_and_dimension() {
        let rd = datum(3, vec![vec![1], vec![2]], vec![0], 1, 2);
        let m = iwahori_action_matrix(&vec![int(1)], &rd).unwrap();
        assert!(m.is_identity());
        assert_eq!(iwahori_trace(&vec![int(1)], &rd).unwrap(), int(4 * 9));
    }

    #[test]
    fn rank_one_matches_sl2_plus_chart() {
        for c in [-2i64, 0, 3] {
            let rd = datum(3, vec![vec![2]], vec![-c], 2, 3);
            let cfg = SL2Config::new(3, c, 2, 2, 0, 3).unwrap();
            for a in [int(2), int(4), rat(5, 7)] {
                let mi = iwahori_action_matrix(&vec![a.clone()], &rd).unwrap();
                let ms = sl2_action_matrix(&a, &cfg, Side::Plus).unwrap();
                let mut ei = mi.entries();
                let mut es = ms.entries();
                // Labels (α, β) versus (n, i): swap to compare.
                for e in &mut ei {
                    e.0.reverse();
                    e.1.reverse();
                }
                ei.sort();
                es.sort();
                assert_eq!(ei, es, "c={c} a={a}");
            }
        }
    }

    #[test]
    fn multiplicativity() {
        let rd = datum(
            3,
            vec![vec![1, 0], vec![0, 1], vec![1, 1]],
            vec![1, -1],
            1,
            2,
        );
        let pts = [
            vec![int(2), int(4)],
            vec![rat(1, 2), int(5)],
            vec![int(7), rat(2, 5)],
        ];
        for s in &pts {
            for t in &pts {
                let st: TorusPoint = s.iter().zip(t).map(|(x, y)| x * y).collect();
                let ms = iwahori_action_matrix(s, &rd).unwrap();
                let mt = iwahori_action_matrix(t, &rd).unwrap();
                assert_eq!(
                    ms.mul(&mt).unwrap(),
                    iwahori_action_matrix(&st, &rd).unwrap()
                );
            }
        }
    }

    #[test]
    fn diagonal_matches_matrix() {
        let rd = datum(3, vec![vec![1], vec![2]], vec![1], 1, 3);
        let s = vec![int(4)];
        let m = iwahori_action_matrix(&s, &rd).unwrap();
        assert_eq!(m.trace(), iwahori_trace(&s, &rd).unwrap());
    }

    #[test]
    fn trace_example_and_fixpoints() {
        let rd = datum(3, vec![vec![1], vec![2]], vec![0], 2, 2);
        let s = vec![int(4)];
        assert_eq!(fixpoint_count_brute(&s, &rd).unwrap(), 9);
        assert_eq!(fixpoint_count_closed(&s, &rd).unwrap(), 9);
        // Σ_{β<2} 4^{β₁} 16^{β₂} = (1+4)(1+16) = 1+4+16+64.
        assert_eq!(iwahori_trace(&s, &rd).unwrap(), int(9 * 85));
        assert_eq!(iwahori_block_closed_form(&s, &rd).unwrap(), int(9 * 85));
    }

    #[test]
    fn theta_example() {
        let rd = datum(3, vec![vec![1]], vec![0], 1, 1);
        assert_eq!(theta_iwahori(&vec![int(4)], &rd).unwrap(), int(4));
        assert!(matches!(
            theta_iwahori(&vec![int(1)], &rd),
            Err(Error::NotRegular(_))
        ));
    }

    #[test]
    fn orthant_check() {
        assert!(datum(3, vec![vec![1, 0], vec![1, 1]], vec![0, 0], 1, 1).roots_in_common_orthant());
        assert!(
            !datum(3, vec![vec![1, -1], vec![0, 1]], vec![0, 0], 1, 1).roots_in_common_orthant()
        );
    }
}
