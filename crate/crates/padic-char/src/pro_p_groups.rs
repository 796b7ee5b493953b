//! Lattices in nilpotent Lie algebras and the associated pro-p groups.
//!
//! Groups are realized inside unipotent upper-triangular matrices, where the
//! matrix logarithm and exponential are finite series. A `Z_(p)`-lattice is
//! given by an integer generator matrix; elementary divisors come from the
//! Smith normal form over `Z`, which absorbs all units prime to `p`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{smith_diagonal, QMatrix, ZMatrix};
use crate::padic_core::{
    from_bigint, int, is_p_integral, is_prime, p_pow, vp, vp_int, ExactScalar, Valuation,
};

/// Strictly upper-triangular matrix (so `N^n = 0`).
pub type NilMatrix = QMatrix;
/// Upper-triangular matrix with unit diagonal.
pub type UnipotentMatrix = QMatrix;

fn is_strictly_upper(x: &QMatrix) -> bool {
    x.is_square() && (0..x.rows).all(|i| (0..=i).all(|j| x.get(i, j).is_zero()))
}

fn is_unipotent(u: &QMatrix) -> bool {
    u.is_square() && is_strictly_upper(&u.sub(&QMatrix::identity(u.rows)))
}

/// `Exp(x) = Σ_{k<n} x^k / k!` for strictly upper-triangular `x`.
pub fn mat_exp(x: &NilMatrix) -> Result<UnipotentMatrix> {
    if !is_strictly_upper(x) {
        return Err(Error::Domain(
            "mat_exp expects a strictly upper-triangular matrix".into(),
        ));
    }
    let n = x.rows;
    let mut out = QMatrix::identity(n);
    let mut term = QMatrix::identity(n);
    for k in 1..n.max(1) {
        term = term
            .mul(x)
            .scale(&BigRational::new(BigInt::one(), BigInt::from(k)));
        out = out.add(&term);
    }
    Ok(out)
}

/// `Log(u) = Σ_{k≥1} (−1)^{k+1} (u − 1)^k / k` for unipotent `u`.
pub fn mat_log(u: &UnipotentMatrix) -> Result<NilMatrix> {
    if !is_unipotent(u) {
        return Err(Error::Domain(
            "mat_log expects a unipotent upper-triangular matrix".into(),
        ));
    }
    let n = u.rows;
    let y = u.sub(&QMatrix::identity(n));
    let mut out = QMatrix::zeros(n, n);
    let mut power = QMatrix::identity(n);
    for k in 1..n.max(1) {
        power = power.mul(&y);
        let c = BigRational::new(
            if k % 2 == 1 { 1.into() } else { (-1).into() },
            BigInt::from(k),
        );
        out = out.add(&power.scale(&c));
    }
    Ok(out)
}

/// `Ad(g)(x) = g x g^{-1}`.
pub fn adjoint(g: &QMatrix, x: &QMatrix) -> Result<QMatrix> {
    let inv = g.inverse()?;
    Ok(g.mul(x).mul(&inv))
}

/// Lie bracket `[x, y] = xy − yx`.
pub fn bracket(x: &QMatrix, y: &QMatrix) -> QMatrix {
    x.mul(y).sub(&y.mul(x))
}

/// Flattens matrices into the columns of a coordinate matrix.
fn coordinate_matrix(mats: &[QMatrix]) -> QMatrix {
    let n = mats.first().map_or(0, |m| m.rows * m.cols);
    let mut out = QMatrix::zeros(n, mats.len());
    for (j, m) in mats.iter().enumerate() {
        for (i, v) in m.data.iter().enumerate() {
            out.set(i, j, v.clone());
        }
    }
    out
}

/// Extracts a maximal linearly independent subfamily.
fn independent_subfamily(mats: &[QMatrix]) -> Vec<QMatrix> {
    let mut basis: Vec<QMatrix> = Vec::new();
    for m in mats {
        if m.is_zero() {
            continue;
        }
        let mut trial = basis.clone();
        trial.push(m.clone());
        if coordinate_matrix(&trial)
            .solve(&QMatrix::zeros(m.rows * m.cols, 0))
            .is_ok()
        {
            basis = trial;
        }
    }
    basis
}

/// Coordinates of `x` in the span of `basis` (over `Q`), if it lies there.
pub fn span_coordinates(basis: &[QMatrix], x: &QMatrix) -> Result<Option<Vec<ExactScalar>>> {
    if basis.is_empty() {
        return Ok(if x.is_zero() { Some(Vec::new()) } else { None });
    }
    let a = coordinate_matrix(basis);
    let b = coordinate_matrix(std::slice::from_ref(x));
    Ok(a.solve(&b)?.map(|sol| sol.col(0)))
}

/// Lower central series `C^0 = g ⊃ C^1 = [g, C^0] ⊃ ⋯` of the Lie algebra
/// spanned by `basis`, each member given by a basis, ending with the zero
/// algebra.
pub fn lower_central_series(basis: &[QMatrix]) -> Vec<Vec<QMatrix>> {
    let mut series = vec![independent_subfamily(basis)];
    loop {
        let last = series.last().expect("series is nonempty");
        if last.is_empty() {
            break;
        }
        let brackets: Vec<QMatrix> = basis
            .iter()
            .flat_map(|x| last.iter().map(move |y| bracket(x, y)))
            .collect();
        let next = independent_subfamily(&brackets);
        if next.len() == last.len() {
            // Not nilpotent: the series became stationary.
            break;
        }
        series.push(next);
    }
    series
}

/// True when `x` lies in the `Q`-span of `basis`.
pub fn in_span(basis: &[QMatrix], x: &QMatrix) -> Result<bool> {
    Ok(span_coordinates(basis, x)?.is_some())
}

/// A finitely generated `Z_(p)`-lattice in `Q^n`, optionally inside a Lie
/// algebra with the given structure constants.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PLattice {
    pub p: u64,
    /// Generators as a list of coordinate vectors (the columns of the generator
    /// matrix).
    pub generators: Vec<Vec<i64>>,
    /// `bracket[i][j]` = coordinates of `[e_i, e_j]` for the ambient basis `e`.
    #[serde(default)]
    pub bracket: Option<Vec<Vec<Vec<i64>>>>,
}

/// Nondecreasing sequence of p-elementary divisors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElemDivisors(pub Vec<u32>);

impl PLattice {
    pub fn new(
        p: u64,
        generators: Vec<Vec<i64>>,
        bracket: Option<Vec<Vec<Vec<i64>>>>,
    ) -> Result<Self> {
        let lat = PLattice {
            p,
            generators,
            bracket,
        };
        lat.validate()?;
        Ok(lat)
    }

    pub fn validate(&self) -> Result<()> {
        if !is_prime(self.p) {
            return Err(Error::Domain(format!("{} is not a prime", self.p)));
        }
        if self.generators.is_empty() {
            return Err(Error::Domain(
                "a lattice needs at least one generator".into(),
            ));
        }
        let n = self.ambient_dim();
        if self.generators.iter().any(|g| g.len() != n) {
            return Err(Error::Domain("generators have different lengths".into()));
        }
        let g = self.generator_matrix();
        g.solve(&QMatrix::zeros(n, 0))?;
        if let Some(b) = &self.bracket {
            if b.len() != n
                || b.iter()
                    .any(|row| row.len() != n || row.iter().any(|v| v.len() != n))
            {
                return Err(Error::Domain(format!("bracket table must be {n}×{n}×{n}")));
            }
        }
        Ok(())
    }

    pub fn ambient_dim(&self) -> usize {
        self.generators.first().map_or(0, Vec::len)
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    /// The `n × d` generator matrix.
    pub fn generator_matrix(&self) -> QMatrix {
        let n = self.ambient_dim();
        let mut m = QMatrix::zeros(n, self.rank());
        for (j, g) in self.generators.iter().enumerate() {
            for (i, &v) in g.iter().enumerate() {
                m.set(i, j, int(v));
            }
        }
        m
    }

    /// `p^m Λ`.
    pub fn scaled(&self, m: u32) -> PLattice {
        let f = p_pow(self.p, m).to_i64().expect("scale factor fits in i64");
        PLattice {
            p: self.p,
            generators: self
                .generators
                .iter()
                .map(|g| g.iter().map(|v| v * f).collect())
                .collect(),
            bracket: self.bracket.clone(),
        }
    }

    /// Coordinates of `v` over the generators when `v ∈ Λ` (p-integral
    /// solution), `None` otherwise.
    pub fn coordinates(&self, v: &[ExactScalar]) -> Result<Option<Vec<ExactScalar>>> {
        let rhs = QMatrix::from_rows(v.iter().map(|x| vec![x.clone()]).collect());
        let sol = self.generator_matrix().solve(&rhs)?;
        Ok(sol
            .map(|s| s.col(0))
            .filter(|c| c.iter().all(|x| is_p_integral(x, self.p))))
    }

    pub fn contains(&self, v: &[ExactScalar]) -> Result<bool> {
        Ok(self.coordinates(v)?.is_some())
    }

    /// `[u, v]` from the bracket table.
    fn bracket_vec(&self, u: &[ExactScalar], v: &[ExactScalar]) -> Result<Vec<ExactScalar>> {
        let table = self
            .bracket
            .as_ref()
            .ok_or_else(|| Error::Domain("lattice has no bracket table".into()))?;
        let n = self.ambient_dim();
        let mut out = vec![BigRational::zero(); n];
        for i in 0..n {
            for j in 0..n {
                let c = &u[i] * &v[j];
                if c.is_zero() {
                    continue;
                }
                for (k, o) in out.iter_mut().enumerate() {
                    *o += &c * int(table[i][j][k]);
                }
            }
        }
        Ok(out)
    }
}

/// p-elementary divisors of `Λ' ⊆ Λ`: `v_p` of the Smith diagonal of the
/// change-of-basis matrix `C` with `G' = G·C`.
pub fn p_elementary_divisors(lambda: &PLattice, lambda_prime: &PLattice) -> Result<ElemDivisors> {
    if lambda.p != lambda_prime.p {
        return Err(Error::Domain("lattices over different primes".into()));
    }
    lambda.validate()?;
    lambda_prime.validate()?;
    if lambda.ambient_dim() != lambda_prime.ambient_dim() {
        return Err(Error::Domain(
            "lattices live in different ambient spaces".into(),
        ));
    }
    let p = lambda.p;
    let c = lambda
        .generator_matrix()
        .solve(&lambda_prime.generator_matrix())?
        .ok_or_else(|| Error::Domain("Λ' is not contained in QΛ".into()))?;
    if c.data.iter().any(|x| !is_p_integral(x, p)) {
        return Err(Error::Domain("Λ' is not contained in Λ".into()));
    }
    // Clear denominators (all prime to p).
    let lcm = c
        .data
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let mut z = ZMatrix::zeros(c.rows, c.cols);
    for i in 0..c.rows {
        for j in 0..c.cols {
            let v = c.get(i, j) * from_bigint(lcm.clone());
            z.set(i, j, v.to_integer());
        }
    }
    let diag = smith_diagonal(&z);
    if diag.len() < lambda_prime.rank() {
        return Err(Error::Domain(
            "generators of Λ' are linearly dependent".into(),
        ));
    }
    let mut alphas: Vec<u32> = diag
        .iter()
        .map(|d| vp_int(d, p).finite().expect("nonzero invariant factor") as u32)
        .collect();
    alphas.sort_unstable();
    Ok(ElemDivisors(alphas))
}

/// Uniform defect `α(d) − α(1)` of a full-rank divisor sequence.
pub fn uniform_defect(divisors: &ElemDivisors, d: usize) -> Result<u32> {
    if divisors.0.len() != d || d == 0 {
        return Err(Error::Domain(format!(
            "uniform defect needs {d} divisors (open sublattice), got {}",
            divisors.0.len()
        )));
    }
    Ok(divisors.0[d - 1] - divisors.0[0])
}

/// `[Λ, Λ] ⊆ pΛ` (or `4Λ` when `p = 2`), tested on all pairs of generators.
pub fn is_powerful(lambda: &PLattice) -> Result<bool> {
    lambda.validate()?;
    let p = lambda.p;
    let target = if p == 2 { int(4) } else { int(p as i64) };
    let gens: Vec<Vec<ExactScalar>> = lambda
        .generators
        .iter()
        .map(|g| g.iter().map(|&v| int(v)).collect())
        .collect();
    for (i, u) in gens.iter().enumerate() {
        for v in gens.iter().skip(i + 1) {
            let b: Vec<ExactScalar> = lambda
                .bracket_vec(u, v)?
                .iter()
                .map(|x| x / &target)
                .collect();
            if !lambda.contains(&b)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Largest `k` with `[Λ, Λ] ⊆ p^k Λ` (capped at `cap`).
pub fn bracket_depth(lambda: &PLattice, cap: u32) -> Result<u32> {
    let gens: Vec<Vec<ExactScalar>> = lambda
        .generators
        .iter()
        .map(|g| g.iter().map(|&v| int(v)).collect())
        .collect();
    let mut depth = cap;
    for (i, u) in gens.iter().enumerate() {
        for v in gens.iter().skip(i + 1) {
            let b = lambda.bracket_vec(u, v)?;
            if b.iter().all(Zero::is_zero) {
                continue;
            }
            let coords = lambda
                .coordinates(&b)?
                .ok_or_else(|| Error::Domain("Λ is not closed under the bracket".into()))?;
            let k = coords
                .iter()
                .map(|c| vp(c, lambda.p))
                .min()
                .unwrap_or(Valuation::Infinite);
            if let Valuation::Finite(k) = k {
                depth = depth.min(k.max(0) as u32);
            }
        }
    }
    Ok(depth)
}

/// Ambient basis `(e12, e23, e13)` of the 3×3 strictly upper-triangular
/// (Heisenberg) Lie algebra, as matrices.
pub fn heisenberg_basis() -> Vec<QMatrix> {
    let unit = |i: usize, j: usize| {
        let mut m = QMatrix::zeros(3, 3);
        m.set(i, j, BigRational::one());
        m
    };
    vec![unit(0, 1), unit(1, 2), unit(0, 2)]
}

/// Structure constants of the Heisenberg algebra in the basis
/// `(e12, e23, e13)`: `[e12, e23] = e13`.
pub fn heisenberg_bracket() -> Vec<Vec<Vec<i64>>> {
    let mut t = vec![vec![vec![0; 3]; 3]; 3];
    t[0][1][2] = 1;
    t[1][0][2] = -1;
    t
}

/// The lattice `p^{a12} Z e12 + p^{a23} Z e23 + p^{a13} Z e13` (the `Log` of
/// the unitriangular group with entries in the given ideals, `p` odd).
pub fn unitriangular_lattice(p: u64, a12: u32, a13: u32, a23: u32) -> PLattice {
    let s = |e: u32| p_pow(p, e).to_i64().expect("small exponent");
    PLattice {
        p,
        generators: vec![vec![s(a12), 0, 0], vec![0, s(a23), 0], vec![0, 0, s(a13)]],
        bracket: Some(heisenberg_bracket()),
    }
}

/// Random unimodular integer matrix as a product of elementary operations.
pub fn random_unimodular<R: Rng>(n: usize, rng: &mut R, steps: usize) -> ZMatrix {
    let mut m = ZMatrix::identity(n);
    if n < 2 {
        if n == 1 && rng.gen_bool(0.5) {
            m.set(0, 0, BigInt::from(-1));
        }
        return m;
    }
    for _ in 0..steps {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n);
        while j == i {
            j = rng.gen_range(0..n);
        }
        let f: i64 = rng.gen_range(-3..=3);
        // row_i += f·row_j
        for c in 0..n {
            let v = m.get(j, c) * BigInt::from(f);
            let cur = m.get(i, c).clone();
            m.set(i, c, cur + v);
        }
        if rng.gen_bool(0.2) {
            for c in 0..n {
                let cur = m.get(i, c).clone();
                m.set(i, c, -cur);
            }
        }
    }
    m
}

/// Applies an integer basis change `U` (columns of the result are `G·U`).
pub fn change_basis(lambda: &PLattice, u: &ZMatrix) -> PLattice {
    let g = lambda.generator_matrix().mul(&u.to_q());
    let generators = (0..g.cols)
        .map(|j| {
            g.col(j)
                .iter()
                .map(|x| x.to_integer().to_i64().expect("entries stay small"))
                .collect()
        })
        .collect();
    PLattice {
        p: lambda.p,
        generators,
        bracket: lambda.bracket.clone(),
    }
}

/// Result of an exhaustive coset verification in a finite model.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CosetReport {
    /// Exponent tuples `(l_1, …, l_d)` with `0 ≤ l_ν < p^{α(ν)}`.
    pub representatives: Vec<Vec<u64>>,
    /// No two representatives are congruent modulo the subgroup.
    pub pairwise_distinct: bool,
    /// Every element of the finite model lies in some coset.
    pub covering: bool,
    /// Number of model elements that were checked.
    pub elements_checked: usize,
}

impl CosetReport {
    pub fn verified(&self) -> bool {
        self.pairwise_distinct && self.covering
    }
}

fn ordered_product(basis: &[QMatrix], exps: &[u64]) -> QMatrix {
    let n = basis[0].rows;
    let mut acc = QMatrix::identity(n);
    for (h, &l) in basis.iter().zip(exps) {
        let x = mat_log(h)
            .expect("basis elements are unipotent")
            .scale(&int(l as i64));
        acc = acc.mul(&mat_exp(&x).expect("nilpotent"));
    }
    acc
}

fn all_tuples(bounds: &[u64]) -> Vec<Vec<u64>> {
    let mut out = vec![Vec::new()];
    for &b in bounds {
        let mut next = Vec::with_capacity(out.len() * b as usize);
        for t in &out {
            for l in 0..b {
                let mut u = t.clone();
                u.push(l);
                next.push(u);
            }
        }
        out = next;
    }
    out
}

/// Enumerates the products `h_1^{l_1} ⋯ h_d^{l_d}`, `0 ≤ l_ν < p^{α(ν)}`, and
/// verifies exhaustively that they form a system of representatives of
/// `H/H'`, where `H'` is `Exp` of the lattice spanned by `sub_lattice`.
/// The finite model consists of all `h_1^{l_1} ⋯ h_d^{l_d}` with
/// `0 ≤ l_ν < p^M`; membership in `H'` is decided through `Log`.
pub fn coset_representatives(
    basis: &[UnipotentMatrix],
    sub_lattice: &[NilMatrix],
    divisors: &ElemDivisors,
    p: u64,
    model_exponent: u32,
) -> Result<CosetReport> {
    if basis.len() != divisors.0.len() {
        return Err(Error::Domain(
            "one divisor per basis element is required".into(),
        ));
    }
    if basis.iter().any(|h| !is_unipotent(h)) {
        return Err(Error::Domain("basis elements must be unipotent".into()));
    }
    if divisors.0.iter().any(|&a| a > model_exponent) {
        return Err(Error::Domain(
            "finite model must exceed all divisors".into(),
        ));
    }
    let coords = coordinate_matrix(sub_lattice);
    let in_sub = |g: &QMatrix| -> Result<bool> {
        let x = mat_log(g)?;
        let b = coordinate_matrix(std::slice::from_ref(&x));
        Ok(coords
            .solve(&b)?
            .map_or(false, |s| s.data.iter().all(|c| is_p_integral(c, p))))
    };
    let bounds: Vec<u64> = divisors
        .0
        .iter()
        .map(|&a| p_pow(p, a).to_u64().expect("small index"))
        .collect();
    let reps = all_tuples(&bounds);
    let rep_mats: Vec<QMatrix> = reps.iter().map(|t| ordered_product(basis, t)).collect();
    let rep_invs: Vec<QMatrix> = rep_mats
        .iter()
        .map(|m| m.inverse())
        .collect::<Result<_>>()?;

    let mut pairwise_distinct = true;
    'pairs: for i in 0..rep_mats.len() {
        for j in i + 1..rep_mats.len() {
            if in_sub(&rep_invs[i].mul(&rep_mats[j]))? {
                pairwise_distinct = false;
                break 'pairs;
            }
        }
    }
    let model_bound = p_pow(p, model_exponent).to_u64().expect("small model");
    let model = all_tuples(&vec![model_bound; basis.len()]);
    let mut covering = true;
    for t in &model {
        let g = ordered_product(basis, t);
        let mut found = false;
        for inv in &rep_invs {
            if in_sub(&inv.mul(&g))? {
                found = true;
                break;
            }
        }
        if !found {
            covering = false;
            break;
        }
    }
    Ok(CosetReport {
        representatives: reps,
        pairwise_distinct,
        covering,
        elements_checked: model.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn exp_log_examples() {
        let z = QMatrix::zeros(3, 3);
        assert_eq!(mat_exp(&z).unwrap(), QMatrix::identity(3));
        let u = QMatrix::from_int_rows(&[vec![1, 1], vec![0, 1]]);
        assert_eq!(
            mat_log(&u).unwrap(),
            QMatrix::from_int_rows(&[vec![0, 1], vec![0, 0]])
        );
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10 {
            let mut x = QMatrix::zeros(4, 4);
            for i in 0..4 {
                for j in i + 1..4 {
                    x.set(
                        i,
                        j,
                        BigRational::new(rng.gen_range(-9..=9).into(), rng.gen_range(1..=5).into()),
                    );
                }
            }
            assert_eq!(mat_log(&mat_exp(&x).unwrap()).unwrap(), x);
            let three = mat_exp(&x.scale(&int(3))).unwrap();
            let e = mat_exp(&x).unwrap();
            assert_eq!(three, e.mul(&e).mul(&e));
        }
        assert!(mat_exp(&QMatrix::identity(2)).is_err());
    }

    #[test]
    fn divisors_examples() {
        let std = PLattice::new(5, vec![vec![1, 0], vec![0, 1]], None).unwrap();
        assert_eq!(
            p_elementary_divisors(&std, &std).unwrap(),
            ElemDivisors(vec![0, 0])
        );
        let sub = PLattice::new(5, vec![vec![5, 0], vec![0, 25]], None).unwrap();
        assert_eq!(
            p_elementary_divisors(&std, &sub).unwrap(),
            ElemDivisors(vec![1, 2])
        );
        // Units prime to p are absorbed.
        let sub2 = PLattice::new(5, vec![vec![15, 0], vec![0, 50]], None).unwrap();
        assert_eq!(
            p_elementary_divisors(&std, &sub2).unwrap(),
            ElemDivisors(vec![1, 2])
        );
        let not_sub = PLattice::new(5, vec![vec![1, 0], vec![0, 1]], None).unwrap();
        assert!(p_elementary_divisors(&sub, &not_sub).is_err());
        assert_eq!(uniform_defect(&ElemDivisors(vec![1, 2]), 2).unwrap(), 1);
        assert!(uniform_defect(&ElemDivisors(vec![1]), 2).is_err());
    }

    #[test]
    fn lower_p_series_divisors() {
        let lat = unitriangular_lattice(3, 1, 0, 1);
        for m in 0..3 {
            let d = p_elementary_divisors(&lat, &lat.scaled(m)).unwrap();
            assert_eq!(d, ElemDivisors(vec![m; 3]));
            assert_eq!(uniform_defect(&d, 3).unwrap(), 0);
        }
    }

    #[test]
    fn unitriangular_lattices_powerfulness() {
        assert!(is_powerful(&unitriangular_lattice(5, 1, 0, 1)).unwrap());
        assert!(is_powerful(&unitriangular_lattice(5, 1, 1, 1)).unwrap());
        assert!(!is_powerful(&unitriangular_lattice(5, 1, 2, 1)).unwrap());
        let no_bracket = PLattice::new(5, vec![vec![1]], None).unwrap();
        assert!(is_powerful(&no_bracket).is_ok()); // rank one: no pairs to test
    }

    #[test]
    fn adjoint_examples() {
        let b = heisenberg_basis();
        assert_eq!(adjoint(&QMatrix::identity(3), &b[1]).unwrap(), b[1]);
        let g = mat_exp(&b[0]).unwrap();
        assert_eq!(adjoint(&g, &b[1]).unwrap(), b[1].add(&b[2]));
        let lcs = lower_central_series(&b);
        assert_eq!(lcs.len(), 3);
        assert_eq!(lcs[1].len(), 1);
        assert!(lcs[2].is_empty());
    }

    #[test]
    fn cyclic_coset_representatives() {
        let h = vec![QMatrix::from_int_rows(&[vec![1, 1], vec![0, 1]])];
        let sub = vec![QMatrix::from_int_rows(&[vec![0, 3], vec![0, 0]])];
        let rep = coset_representatives(&h, &sub, &ElemDivisors(vec![1]), 3, 2).unwrap();
        assert_eq!(rep.representatives.len(), 3);
        assert!(rep.verified());
        let trivial = coset_representatives(
            &h,
            &[QMatrix::from_int_rows(&[vec![0, 1], vec![0, 0]])],
            &ElemDivisors(vec![0]),
            3,
            1,
        )
        .unwrap();
        assert_eq!(trivial.representatives, vec![vec![0]]);
        assert!(trivial.verified());
    }
}
