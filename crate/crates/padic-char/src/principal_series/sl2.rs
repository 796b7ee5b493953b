//! The principal series of `SL_2(Q_p)` on the two Bruhat charts.
//!
//! On the `+` chart the quotient `M^+/n^k M^+` has basis `T_{n,i}`
//! (`n < k`, `i < L = ε(r)·m^+`) and
//!
//! `s·T_{n',i'} = a^c a^{2n'} Σ_m Q^m/m! · T_{n'+m, R}`, `a² i' = R + Q`.
//!
//! On the `−` chart the quotient is taken in the basis `T̃_{n,i}`, in which
//! `n` acts by shifting `n` (or, on the zero chart, by a scalar multiple of the
//! downward shift). Writing `z' = a^{-2} i' = R + Q`, the expansion
//!
//! `T̃_{n,z'} = Σ_l (R/z')^{c+2n} (QR/z')^l / l! · T̃_{n+l,R}`
//!
//! (checked on the monomials `x^N`, where `T̃_{n,z}(x^N) = (N+c)_n z^{N−n}`)
//! gives the exact matrix entries
//!
//! `s·T̃_{n',i'} = a^{-c−2n'} Σ_l (R/z')^{c+2n'} (QR/z')^l / l! · T̃_{n'+l, R}`,
//!
//! and `s·T̃_{n,0} = a^{-c−2n} T̃_{n,0}` on the zero chart. The `−` matrix is
//! therefore lower triangular in `n`, with diagonal `a^{c+2n}` at fixed
//! indices `i ≠ 0`.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formal_characters::{
    limit_of_truncations, perm_fixpoints, FormalFunction, Generator, Generators, GroupRingElement,
    Monomial,
};
use crate::linalg::QMatrix;
use crate::padic_core::{
    abs_p_value, binomial, factorial, from_bigint, int, inv_abs_p_value, is_prime, is_unit, p_pow,
    pow_i, residue_split, rising, sign_pow, ExactScalar,
};
use crate::principal_series::{ActionMatrix, Label};

/// Which Bruhat chart.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    Plus,
    Minus,
}

impl Side {
    pub fn name(self) -> &'static str {
        match self {
            Side::Plus => "plus",
            Side::Minus => "minus",
        }
    }
}

/// Parameters of a finite quotient on both charts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SL2Config {
    pub p: u64,
    /// `χ(a) = a^c`.
    pub c: i64,
    /// `m^+ = p^{level_plus}`.
    pub level_plus: u32,
    /// `m^- = p^{level_minus}`.
    pub level_minus: u32,
    /// `ε(r) = p^{eps_exponent}`.
    pub eps_exponent: u32,
    /// Cutoff of the `n`-adic quotient.
    pub k: u32,
}

impl SL2Config {
    pub fn new(
        p: u64,
        c: i64,
        level_plus: u32,
        level_minus: u32,
        eps_exponent: u32,
        k: u32,
    ) -> Result<Self> {
        let cfg = SL2Config {
            p,
            c,
            level_plus,
            level_minus,
            eps_exponent,
            k,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !is_prime(self.p) {
            return Err(Error::Domain(format!("{} is not prime", self.p)));
        }
        if self.c <= 0 && i64::from(self.k) <= -self.c {
            return Err(Error::Domain(format!(
                "cutoff k = {} must exceed −c = {}",
                self.k, -self.c
            )));
        }
        if self.k == 0 {
            return Err(Error::Domain("cutoff k must be positive".into()));
        }
        Ok(())
    }

    /// Exponent of `ε(r)·m^±`.
    pub fn level(&self, side: Side) -> u32 {
        self.eps_exponent
            + match side {
                Side::Plus => self.level_plus,
                Side::Minus => self.level_minus,
            }
    }

    /// `ε(r)·m^±` as an integer.
    pub fn modulus(&self, side: Side) -> u64 {
        p_pow(self.p, self.level(side))
            .to_u64()
            .expect("level small enough for enumeration")
    }

    /// The zero-chart indices `n` kept on the `−` side: `0 ≤ n ≤ −c`.
    pub fn zero_chart(&self) -> Vec<u32> {
        if self.c <= 0 {
            (0..=(-self.c) as u32).collect()
        } else {
            Vec::new()
        }
    }
}

/// `c_{n,j,z} = z^{j−n} (c+j)(c+j+1)⋯(c+n−1)`.
pub fn c_coeff(n: u32, j: u32, z: &ExactScalar, c: i64) -> Result<ExactScalar> {
    if j > n {
        return Err(Error::Domain(format!(
            "c_{{n,j,z}} needs j ≤ n (got j={j}, n={n})"
        )));
    }
    if z.is_zero() && j < n {
        return Err(Error::Domain("c_{n,j,z} needs z ≠ 0".into()));
    }
    Ok(pow_i(z, i64::from(j) - i64::from(n)) * rising(&int(c + i64::from(j)), u64::from(n - j)))
}

/// The base change `M = (C(l,j) c_{l,j,z})_{l,j ≤ k}` from `T̃` to `T` and its
/// inverse `((−1)^{j+l} C(l,j) c_{l,j,z})`.
pub fn base_change_matrices(k: u32, z: &ExactScalar, c: i64) -> Result<(QMatrix, QMatrix)> {
    if z.is_zero() {
        return Err(Error::Domain("base change needs z ≠ 0".into()));
    }
    let n = k as usize + 1;
    let mut m = QMatrix::zeros(n, n);
    let mut inv = QMatrix::zeros(n, n);
    for l in 0..=k {
        for j in 0..=l {
            let v = from_bigint(binomial(i64::from(l), i64::from(j))) * c_coeff(l, j, z, c)?;
            inv.set(l as usize, j as usize, sign_pow(i64::from(j + l)) * &v);
            m.set(l as usize, j as usize, v);
        }
    }
    Ok((m, inv))
}

fn check_unit(a: &ExactScalar, p: u64) -> Result<()> {
    if a.is_zero() || !is_unit(a, p) {
        return Err(Error::Domain(format!("a = {a} is not a {p}-adic unit")));
    }
    Ok(())
}

/// Labels `(n, i)` of the basis of the quotient on one chart.
pub fn sl2_basis(cfg: &SL2Config, side: Side) -> Vec<Label> {
    let m = cfg.modulus(side) as i64;
    let mut out = Vec::new();
    match side {
        Side::Plus => {
            for n in 0..cfg.k {
                for i in 0..m {
                    out.push(vec![i64::from(n), i]);
                }
            }
        }
        Side::Minus => {
            for n in cfg.zero_chart() {
                out.push(vec![i64::from(n), 0]);
            }
            for n in 0..cfg.k {
                for i in 1..m {
                    out.push(vec![i64::from(n), i]);
                }
            }
        }
    }
    out
}

/// Matrix of `s = diag(a, a^{-1})` on the quotient of one chart.
pub fn sl2_action_matrix(a: &ExactScalar, cfg: &SL2Config, side: Side) -> Result<ActionMatrix> {
    cfg.validate()?;
    check_unit(a, cfg.p)?;
    let labels = sl2_basis(cfg, side);
    let mut mat = ActionMatrix::zero(labels);
    let index = mat.index();
    let level = cfg.level(side);
    let k = i64::from(cfg.k);
    let c = cfg.c;
    for col in 0..mat.dim() {
        let (n1, i1) = (mat.labels[col][0], mat.labels[col][1]);
        match side {
            Side::Plus => {
                let (r, q) = residue_split(&(a * a * int(i1)), cfg.p, level)?;
                let base = pow_i(a, c + 2 * n1);
                let r = r.to_i64().expect("residue fits");
                let mut qpow = ExactScalar::one();
                for m in 0..(k - n1) {
                    let row = index[&vec![n1 + m, r]];
                    let v = &base * &qpow / from_bigint(factorial(m as u64));
                    mat.add_entry(row, col, v);
                    qpow *= &q;
                }
            }
            Side::Minus if i1 == 0 => {
                mat.add_entry(col, col, pow_i(a, -c - 2 * n1));
            }
            Side::Minus => {
                let z = int(i1) / (a * a);
                let (r, q) = residue_split(&z, cfg.p, level)?;
                if r.is_zero() {
                    return Err(Error::Domain("nonzero index mapped to zero residue".into()));
                }
                let rr = from_bigint(r.clone());
                let base = pow_i(a, -c - 2 * n1) * pow_i(&(&rr / &z), c + 2 * n1);
                let ratio = &q * &rr / &z;
                let r = r.to_i64().expect("residue fits");
                let mut rpow = ExactScalar::one();
                for l in 0..(k - n1) {
                    let row = index[&vec![n1 + l, r]];
                    let v = &base * &rpow / from_bigint(factorial(l as u64));
                    mat.add_entry(row, col, v);
                    rpow *= &ratio;
                }
            }
        }
    }
    Ok(mat)
}

/// Trace of [`sl2_action_matrix`].
pub fn sl2_trace(a: &ExactScalar, cfg: &SL2Config, side: Side) -> Result<ExactScalar> {
    Ok(sl2_action_matrix(a, cfg, side)?.trace())
}

/// `d_{n,j,m} = c_{j+m,j,1}/m! · (−1)^{j+m+n} C(n,j) C(j+m,n)`.
pub fn d_coeff(n: u32, j: u32, m: u32, c: i64) -> ExactScalar {
    rising(&int(c + i64::from(j)), u64::from(m)) / from_bigint(factorial(u64::from(m)))
        * sign_pow(i64::from(j + m + n))
        * from_bigint(
            binomial(i64::from(n), i64::from(j)) * binomial(i64::from(j + m), i64::from(n)),
        )
}

/// Closed form of `Σ_{j,m} d_{n,j,m} x^j (x − 1)^m` with `x = a^{-2}`, the
/// `m`-series summed as `Σ_m (α)_m/m! C(m,t) w^m = (α)_t/t! w^t x^{−α−t}`
/// with `w = 1 − x`. This equals `a^{2c+2n}`.
pub fn minus_diagonal_closed_form(a: &ExactScalar, c: i64, n: u32) -> ExactScalar {
    let x = pow_i(a, -2);
    let w = ExactScalar::one() - &x;
    let mut total = ExactScalar::zero();
    for j in 0..=n {
        let mut inner = ExactScalar::zero();
        for t in 0..=n {
            let b = binomial(i64::from(j), i64::from(n - t));
            if b.is_zero() {
                continue;
            }
            let alpha = c + i64::from(j);
            inner += from_bigint(b) * rising(&int(alpha), u64::from(t))
                / from_bigint(factorial(u64::from(t)))
                * pow_i(&w, i64::from(t))
                * pow_i(&x, -alpha - i64::from(t));
        }
        total += sign_pow(i64::from(j + n))
            * from_bigint(binomial(i64::from(n), i64::from(j)))
            * pow_i(&x, i64::from(j))
            * inner;
    }
    total
}

/// The partial closed forms for the trace on one chart:
/// * `+`: `a^c · l(s) · Σ_{n<k} a^{2n}`, `l` the fixpoint count of `i ↦ R(a² i)`;
/// * `−`: `a^{-c} · l^-(s) · Σ_{n<k} Σ_{j,m} d_{n,j,m} a^{-2j}(a^{-2}−1)^m
///   + a^{-c} Σ_{j=0}^{−c} a^{-2j}`, with `l^-` counted on the nonzero indices
///   and the inner sum in closed form ([`minus_diagonal_closed_form`]).
pub fn sl2_partial_closed_form(
    a: &ExactScalar,
    cfg: &SL2Config,
    side: Side,
) -> Result<ExactScalar> {
    cfg.validate()?;
    check_unit(a, cfg.p)?;
    let level = cfg.level(side);
    match side {
        Side::Plus => {
            let l = from_bigint(perm_fixpoints(cfg.p, level, &(a * a), true)?);
            let geo = (0..cfg.k).fold(ExactScalar::zero(), |acc, n| {
                acc + pow_i(a, 2 * i64::from(n))
            });
            Ok(pow_i(a, cfg.c) * l * geo)
        }
        Side::Minus => {
            let l = from_bigint(perm_fixpoints(cfg.p, level, &pow_i(a, -2), false)?);
            let dsum = (0..cfg.k).fold(ExactScalar::zero(), |acc, n| {
                acc + minus_diagonal_closed_form(a, cfg.c, n)
            });
            let zero = cfg
                .zero_chart()
                .iter()
                .fold(ExactScalar::zero(), |acc, &j| {
                    acc + pow_i(a, -2 * i64::from(j))
                });
            Ok(pow_i(a, -cfg.c) * (l * dsum + zero))
        }
    }
}

/// Trace obtained when the `−` chart is truncated in the `T` basis instead:
/// the diagonal is `a^{-c} Σ_{j+m<k} d_{n,j,m} a^{-2j}(a^{-2}−1)^m`. Summed over
/// `n < k` this telescopes to `a^{-c} Σ_{j<k} a^{-2j}` per fixed index; the
/// span of `{T_{n,i} : n ≥ k}` is, however, not stable under `n`, so this is a
/// diagnostic rather than a trace of the quotient.
pub fn t_filtration_minus_trace(a: &ExactScalar, cfg: &SL2Config) -> Result<ExactScalar> {
    cfg.validate()?;
    check_unit(a, cfg.p)?;
    let x = pow_i(a, -2);
    let y = &x - ExactScalar::one();
    let l = from_bigint(perm_fixpoints(cfg.p, cfg.level(Side::Minus), &x, false)?);
    let mut diag_sum = ExactScalar::zero();
    for n in 0..cfg.k {
        for j in 0..=n {
            for m in 0..(cfg.k - j) {
                diag_sum +=
                    d_coeff(n, j, m, cfg.c) * pow_i(&x, i64::from(j)) * pow_i(&y, i64::from(m));
            }
        }
    }
    let zero = cfg
        .zero_chart()
        .iter()
        .fold(ExactScalar::zero(), |acc, &j| {
            acc + pow_i(a, -2 * i64::from(j))
        });
    Ok(pow_i(a, -cfg.c) * (l * diag_sum + zero))
}

/// Generators `(ε, χ)` on the coordinate `a`: `ε(s) = a^{-1}`,
/// `e(χ)(s) = a^{-c}`.
pub fn sl2_generators(c: i64) -> Generators {
    Generators::new(vec![
        Generator {
            name: "eps".into(),
            coord_exponents: vec![-1],
        },
        Generator {
            name: "chi".into(),
            coord_exponents: vec![-c],
        },
    ])
}

/// The formal characters as displayed in the closed formula's derivation:
/// `Θ^+ = e(χ^{-1})·Ψ^+·Σ_j e(ε)^{-2j}` and
/// `Θ^- = e(χ)·Ψ^-·Σ_j e(ε)^{2j} + e(χ)·Σ_{j=0}^{−c} e(ε)^{2j}`,
/// with `Ψ^±` the permutation characters of `i ↦ R(a^{±2} i)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FormalTheta {
    pub plus: FormalFunction,
    pub minus: FormalFunction,
    /// Weight polynomials `Σ_{n<k} e(ε)^{∓2n}` for `k = 1, …, k_max`.
    pub plus_truncations: Vec<GroupRingElement>,
    pub minus_truncations: Vec<GroupRingElement>,
}

/// Builds [`FormalTheta`] and checks that the limit of the truncations
/// reproduces the geometric coefficients up to degree `2(k_max − 1)`.
pub fn sl2_formal_theta(cfg: &SL2Config) -> Result<FormalTheta> {
    cfg.validate()?;
    let mono = |e: i64, x: i64| Monomial(vec![e, x]);
    let plus = FormalFunction::product(vec![
        FormalFunction::monomial(mono(0, -1)),
        FormalFunction::perm(cfg.p, cfg.level(Side::Plus), mono(-2, 0), true),
        FormalFunction::geom(mono(-2, 0)),
    ]);
    let mut minus_terms = vec![FormalFunction::product(vec![
        FormalFunction::monomial(mono(0, 1)),
        FormalFunction::perm(cfg.p, cfg.level(Side::Minus), mono(2, 0), false),
        FormalFunction::geom(mono(2, 0)),
    ])];
    let zero = cfg.zero_chart();
    if !zero.is_empty() {
        let mut g = GroupRingElement::zero();
        for j in zero {
            g.add_term(mono(2 * i64::from(j), 1), &BigInt::one());
        }
        minus_terms.push(FormalFunction::poly(g));
    }
    let minus = FormalFunction::sum(minus_terms);
    let truncs = |sign: i64| -> Vec<GroupRingElement> {
        (1..=cfg.k)
            .map(|k| {
                let mut g = GroupRingElement::zero();
                for n in 0..k {
                    g.add_term(mono(sign * 2 * i64::from(n), 0), &BigInt::one());
                }
                g
            })
            .collect()
    };
    let plus_truncations = truncs(-1);
    let minus_truncations = truncs(1);
    if cfg.k >= 2 {
        let window = 2 * u64::from(cfg.k - 1) - 1;
        for (seq, ratio) in [
            (&plus_truncations, mono(-2, 0)),
            (&minus_truncations, mono(2, 0)),
        ] {
            let lim = limit_of_truncations(seq, window)?;
            let geo = crate::formal_characters::expand(&FormalFunction::geom(ratio), 2, window)?;
            if lim != geo {
                return Err(Error::NotConverged(
                    "truncations do not converge to the geometric series".into(),
                ));
            }
        }
    }
    Ok(FormalTheta {
        plus,
        minus,
        plus_truncations,
        minus_truncations,
    })
}

fn check_regular(a: &ExactScalar) -> Result<()> {
    if a.abs().is_one() {
        return Err(Error::NotRegular(format!("a = {a} (need a ≠ ±1)")));
    }
    Ok(())
}

/// The closed character formula
/// `χ(a)^{-1}/(|1−a^{-2}|(1−a^{-2})) + χ(a)/(|1−a²|(1−a²)) − χ(a) a^{2m₀}/(1−a²)`
/// with `χ(a) = a^c`, `m₀ = 1 − c` if `c ≤ 0` and `0` otherwise.
pub fn theta_sl2(p: u64, a: &ExactScalar, c: i64) -> Result<ExactScalar> {
    check_regular(a)?;
    check_unit(a, p)?;
    let one = ExactScalar::one();
    let chi = pow_i(a, c);
    let u = &one - pow_i(a, -2);
    let v = &one - a * a;
    let m0 = if c <= 0 { 1 - c } else { 0 };
    Ok(
        chi.recip() / (abs_p_value(&u, p) * &u) + &chi / (abs_p_value(&v, p) * &v)
            - chi * pow_i(a, 2 * m0) / v,
    )
}

/// The smooth character formula `χ(a)^{-1}/|1−a^{-2}| + χ(a)/|1−a²|` for a
/// smooth character with value `chi_a = χ(a)`.
pub fn theta_sl2_smooth(p: u64, a: &ExactScalar, chi_a: &ExactScalar) -> Result<ExactScalar> {
    check_regular(a)?;
    check_unit(a, p)?;
    let one = ExactScalar::one();
    let u = &one - pow_i(a, -2);
    let v = &one - a * a;
    Ok(chi_a.recip() * inv_abs_p_value(&u, p)? + chi_a * inv_abs_p_value(&v, p)?)
}

/// Weyl character of the algebraic representation of highest weight `ε^c`:
/// `(a^{c−1} − a^{1−c})/(a − a^{-1})`.
pub fn weyl_char_sl2(a: &ExactScalar, c: i64) -> Result<ExactScalar> {
    check_regular(a)?;
    Ok((pow_i(a, c - 1) - pow_i(a, 1 - c)) / (a - a.recip()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic_core::rat;

    #[test]
    fn c_coeff_examples() {
        assert_eq!(c_coeff(3, 3, &int(7), 2).unwrap(), int(1));
        assert_eq!(c_coeff(3, 1, &int(1), -2).unwrap(), int(0));
        assert!(c_coeff(1, 2, &int(1), 0).is_err());
        for (j, l, k) in [(0, 2, 5), (1, 1, 3), (2, 4, 6)] {
            let z = rat(3, 7);
            assert_eq!(
                c_coeff(l, j, &z, -1).unwrap() * c_coeff(k, l, &z, -1).unwrap(),
                c_coeff(k, j, &z, -1).unwrap()
            );
        }
    }

    #[test]
    fn base_change_inverse() {
        let (m, inv) = base_change_matrices(0, &int(2), 1).unwrap();
        assert_eq!(m, QMatrix::identity(1));
        assert_eq!(inv, QMatrix::identity(1));
        for k in 0..=10 {
            for (z, c) in [(int(2), 1), (rat(5, 3), -2), (int(-4), 0)] {
                let (m, inv) = base_change_matrices(k, &z, c).unwrap();
                let id = QMatrix::identity(k as usize + 1);
                assert_eq!(m.mul(&inv), id);
                assert_eq!(inv.mul(&m), id);
            }
        }
        assert!(base_change_matrices(2, &int(0), 0).is_err());
    }

    /// `T̃_{n,z}(x^N)` from the defining base change, `Σ_j C(n,j) c_{n,j,z} (d/dx)^j x^N |_z`.
    fn t_tilde_on_monomial(n: u32, z: &ExactScalar, c: i64, big_n: u32) -> ExactScalar {
        (0..=n).fold(ExactScalar::zero(), |acc, j| {
            let deriv = if j > big_n {
                ExactScalar::zero()
            } else {
                from_bigint(factorial(u64::from(big_n)) / factorial(u64::from(big_n - j)))
                    * pow_i(z, i64::from(big_n - j))
            };
            acc + from_bigint(binomial(i64::from(n), i64::from(j)))
                * c_coeff(n, j, z, c).unwrap()
                * deriv
        })
    }

    #[test]
    fn minus_expansion_on_terminating_monomials() {
        // With N + c + n a negative integer the l-series terminates, so the
        // expansion T̃_{n,z'} = Σ_l (R/z')^{c+2n}(QR/z')^l/l! T̃_{n+l,R} can be
        // checked exactly on x^N.
        let c = -6;
        let (r, q) = (int(2), int(9));
        let z = &r + &q;
        for n in 0..3u32 {
            for big_n in 0..3u32 {
                let lhs = t_tilde_on_monomial(n, &z, c, big_n);
                let mut rhs = ExactScalar::zero();
                let base = pow_i(&(&r / &z), c + 2 * i64::from(n));
                for l in 0..12u32 {
                    rhs += &base * pow_i(&(&q * &r / &z), i64::from(l))
                        / from_bigint(factorial(u64::from(l)))
                        * t_tilde_on_monomial(n + l, &r, c, big_n);
                }
                assert_eq!(lhs, rhs, "n={n} N={big_n}");
            }
        }
    }

    #[test]
    fn identity_acts_trivially() {
        let cfg = SL2Config::new(3, -1, 1, 1, 0, 3).unwrap();
        for side in [Side::Plus, Side::Minus] {
            assert!(sl2_action_matrix(&int(1), &cfg, side)
                .unwrap()
                .is_identity());
        }
    }

    #[test]
    fn plus_trace_example() {
        let cfg = SL2Config::new(5, 0, 1, 1, 0, 2).unwrap();
        assert_eq!(sl2_trace(&int(2), &cfg, Side::Plus).unwrap(), int(5));
        let m = sl2_action_matrix(&int(2), &cfg, Side::Plus).unwrap();
        let idx = m.index();
        // Diagonal entry at the fixed index 0 is χ(a) a^{2n}.
        assert_eq!(m.get(idx[&vec![1, 0]], idx[&vec![1, 0]]), int(4));
    }

    #[test]
    fn traces_match_partial_forms() {
        for (p, c, a) in [
            (5u64, 0i64, int(2)),
            (3, -2, int(4)),
            (5, 1, int(6)),
            (3, 2, rat(1, 2)),
        ] {
            let k = std::cmp::max(2, 1 - c) as u32;
            for lvl in 0..3 {
                let cfg = SL2Config::new(p, c, lvl, lvl, 0, k).unwrap();
                for side in [Side::Plus, Side::Minus] {
                    assert_eq!(
                        sl2_trace(&a, &cfg, side).unwrap(),
                        sl2_partial_closed_form(&a, &cfg, side).unwrap(),
                        "p={p} c={c} a={a} lvl={lvl} {side:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn minus_closed_form_is_power() {
        for c in -3..=3 {
            for n in 0..5 {
                for a in [int(2), rat(3, 5), int(-7)] {
                    assert_eq!(
                        minus_diagonal_closed_form(&a, c, n),
                        pow_i(&a, 2 * c + 2 * i64::from(n))
                    );
                }
            }
        }
    }

    #[test]
    fn triangularity() {
        let cfg = SL2Config::new(3, -1, 1, 1, 1, 3).unwrap();
        for side in [Side::Plus, Side::Minus] {
            let m = sl2_action_matrix(&int(5), &cfg, side).unwrap();
            for (row, col, _) in m.entries() {
                assert!(row[0] >= col[0], "{side:?}: entry from {col:?} to {row:?}");
            }
        }
    }

    #[test]
    fn multiplicativity() {
        let cfg = SL2Config::new(3, -2, 1, 1, 0, 4).unwrap();
        for side in [Side::Plus, Side::Minus] {
            for (s, t) in [(int(2), int(4)), (rat(1, 2), int(7)), (int(5), rat(2, 5))] {
                let ms = sl2_action_matrix(&s, &cfg, side).unwrap();
                let mt = sl2_action_matrix(&t, &cfg, side).unwrap();
                let mst = sl2_action_matrix(&(&s * &t), &cfg, side).unwrap();
                assert_eq!(ms.mul(&mt).unwrap(), mst, "{side:?} s={s} t={t}");
            }
        }
    }

    #[test]
    fn closed_formula_examples() {
        assert_eq!(theta_sl2(5, &int(2), 0).unwrap(), rat(7, 3));
        assert_eq!(theta_sl2_smooth(5, &int(2), &int(1)).unwrap(), int(2));
        assert_eq!(theta_sl2_smooth(3, &int(2), &int(1)).unwrap(), int(6));
        assert_eq!(weyl_char_sl2(&int(2), 0).unwrap(), int(-1));
        assert_eq!(weyl_char_sl2(&int(2), -1).unwrap(), rat(-5, 2));
        assert!(matches!(
            theta_sl2(5, &int(-1), 0),
            Err(Error::NotRegular(_))
        ));
    }

    #[test]
    fn formal_theta_shapes() {
        let cfg = SL2Config::new(5, 0, 1, 1, 0, 4).unwrap();
        let th = sl2_formal_theta(&cfg).unwrap();
        assert!(th.plus.contains_perm() && th.minus.contains_perm());
        let cfg = SL2Config::new(5, 1, 1, 1, 0, 4).unwrap();
        let th = sl2_formal_theta(&cfg).unwrap();
        assert!(matches!(&th.minus, FormalFunction::Sum { terms } if terms.len() == 1));
    }
}
