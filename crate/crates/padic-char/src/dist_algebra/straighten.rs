//! Straightening in the smash product `U(g) # K[G]`.
//!
//! Only three relations are modelled: the Lie bracket of `g`, the rule
//! `δ_g x δ_g^{-1} = Ad(g) x`, and the fact that group symbols are never
//! multiplied together here. Words alternate Lie generators `x_j` and group
//! symbols `δ_{g_s}`; the normal form is
//!
//! `x_1^{α_1} δ_{g_1} x_2^{α_2} δ_{g_2} ⋯ x_d^{α_d} δ_{g_d}`,
//!
//! reached with the two rewriting rules
//!
//! * (I)  `x_j x_i = x_i x_j + [x_j, x_i]`,
//! * (II) `x_j δ_g = δ_g x_j − y δ_g` with `y = Ad(g) x_j − x_j`.
//!
//! The generator basis must be ordered compatibly with the lower central
//! series, so that both correction terms only involve later generators.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::QMatrix;
use crate::padic_core::ExactScalar;
use crate::pro_p_groups::{
    adjoint, bracket, lower_central_series, span_coordinates, UnipotentMatrix,
};

/// A letter: a Lie generator `x_j` or the `s`-th group symbol `δ_{g_s}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Token {
    X(usize),
    D(usize),
}

pub type Word = Vec<Token>;

/// A nilpotent Lie algebra given by strictly upper-triangular matrices whose
/// basis is adapted to the lower central series.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LieData {
    pub basis: Vec<QMatrix>,
    /// `structure[i][j]` = coordinates of `[x_i, x_j]`.
    pub structure: Vec<Vec<Vec<ExactScalar>>>,
    /// `depth[i]` = largest `k` with `x_i ∈ C^k(g)`.
    pub depth: Vec<usize>,
    /// Nilpotency class `m` (`C^m(g) = 0`).
    pub nilpotency_class: usize,
}

impl LieData {
    /// Validates nilpotency, closure under the bracket and compatibility of
    /// the basis order with the lower central series.
    pub fn new(basis: Vec<QMatrix>) -> Result<Self> {
        for x in &basis {
            let strictly_upper =
                x.is_square() && (0..x.rows).all(|i| (0..=i).all(|j| x.get(i, j).is_zero()));
            if !strictly_upper {
                return Err(Error::Domain(
                    "Lie data must be strictly upper triangular (nilpotent)".into(),
                ));
            }
        }
        let d = basis.len();
        let mut structure = vec![vec![Vec::new(); d]; d];
        for i in 0..d {
            for j in 0..d {
                structure[i][j] = span_coordinates(&basis, &bracket(&basis[i], &basis[j]))?
                    .ok_or_else(|| Error::Domain("basis is not closed under the bracket".into()))?;
            }
        }
        let series = lower_central_series(&basis);
        if series.last().is_some_and(|s| !s.is_empty()) {
            return Err(Error::Domain("Lie data is not nilpotent".into()));
        }
        let mut depth = vec![0; d];
        for (k, member) in series.iter().enumerate() {
            let inside: Vec<usize> = (0..d)
                .filter(|&i| span_coordinates(member, &basis[i]).ok().flatten().is_some())
                .collect();
            if inside.len() != member.len() {
                return Err(Error::Domain(format!(
                    "C^{k}(g) is not spanned by a subfamily of the basis"
                )));
            }
            for i in inside {
                depth[i] = k;
            }
        }
        if depth.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::Domain(
                "basis must be ordered by lower-central-series depth".into(),
            ));
        }
        Ok(LieData {
            basis,
            structure,
            depth,
            nilpotency_class: series.len() - 1,
        })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates of `Ad(g) x_j`.
    pub fn adjoint_coords(&self, g: &UnipotentMatrix, j: usize) -> Result<Vec<ExactScalar>> {
        span_coordinates(&self.basis, &adjoint(g, &self.basis[j])?)?
            .ok_or_else(|| Error::Domain("Ad(g) does not preserve the Lie algebra".into()))
    }
}

/// A finite linear combination of words over a fixed Lie algebra and a fixed
/// list of group elements `g_1, …, g_d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnvElement {
    pub lie: LieData,
    pub groups: Vec<UnipotentMatrix>,
    pub terms: BTreeMap<Word, ExactScalar>,
}

impl EnvElement {
    pub fn new(lie: LieData, groups: Vec<UnipotentMatrix>) -> Self {
        EnvElement {
            lie,
            groups,
            terms: BTreeMap::new(),
        }
    }

    /// Adds `c · word`, validating that the word only uses declared letters.
    pub fn add_word(&mut self, word: Word, c: ExactScalar) -> Result<()> {
        for t in &word {
            match *t {
                Token::X(j) if j >= self.lie.dim() => {
                    return Err(Error::Domain(format!("undeclared generator x_{}", j + 1)))
                }
                Token::D(s) if s >= self.groups.len() => {
                    return Err(Error::Domain(format!(
                        "undeclared group symbol δ_{}",
                        s + 1
                    )))
                }
                _ => {}
            }
        }
        add_to(&mut self.terms, word, c);
        Ok(())
    }
}

fn add_to(map: &mut BTreeMap<Word, ExactScalar>, w: Word, c: ExactScalar) {
    if c.is_zero() {
        return;
    }
    let e = map.entry(w.clone()).or_insert_with(ExactScalar::zero);
    *e += c;
    if e.is_zero() {
        map.remove(&w);
    }
}

/// Normal-form words keyed by their exponent vector `(α_1, …, α_d)`.
pub type NormalForm = BTreeMap<Vec<u32>, ExactScalar>;

/// Output of [`straighten`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiltrationReport {
    /// The full normal form.
    pub normal_form: NormalForm,
    /// Words with total Lie degree `≥ d·k₂`.
    pub high_part: NormalForm,
    /// Words with total Lie degree `< d·k₂`.
    pub low_part: NormalForm,
    /// Smallest total Lie degree among the output words.
    pub min_degree: Option<u32>,
    /// Every unprocessed word was eliminated: the rewriting queue is empty.
    pub remainder_vanished: bool,
    /// Rewriting steps performed.
    pub steps: usize,
}

/// Segment of each position (number of group symbols strictly before it).
fn segments(word: &[Token]) -> Vec<usize> {
    let mut s = 0;
    word.iter()
        .map(|t| {
            let here = s;
            if matches!(t, Token::D(_)) {
                s += 1;
            }
            here
        })
        .collect()
}

fn check_shape(word: &[Token], n_groups: usize) -> Result<()> {
    let deltas: Vec<usize> = word
        .iter()
        .filter_map(|t| if let Token::D(s) = t { Some(*s) } else { None })
        .collect();
    if deltas != (0..n_groups).collect::<Vec<_>>() {
        return Err(Error::Domain(
            "each word must contain δ_1, …, δ_d exactly once and in order".into(),
        ));
    }
    for (t, seg) in word.iter().zip(segments(word)) {
        if let Token::X(j) = t {
            if *j < seg {
                return Err(Error::Domain(format!(
                    "x_{} occurs after δ_{}; only rightward moves are supported",
                    j + 1,
                    seg
                )));
            }
        }
    }
    Ok(())
}

/// Position of a letter that still has to move, or `None` for a normal word.
fn first_offender(word: &[Token]) -> Option<usize> {
    let segs = segments(word);
    let mut candidate = None;
    let mut current_seg = None;
    for (pos, (t, &seg)) in word.iter().zip(&segs).enumerate() {
        if current_seg != Some(seg) {
            if candidate.is_some() {
                return candidate;
            }
            current_seg = Some(seg);
        }
        if let Token::X(j) = t {
            if *j != seg {
                candidate = Some(pos);
            }
        }
    }
    candidate
}

fn normal_exponents(word: &[Token], d: usize) -> Vec<u32> {
    let mut alpha = vec![0u32; d];
    for t in word {
        if let Token::X(j) = t {
            alpha[*j] += 1;
        }
    }
    alpha
}

/// Rewrites `e` into normal form with rules (I) and (II) and splits the
/// result by total Lie degree at `d·k₂`.
pub fn straighten(e: &EnvElement, k2: u32) -> Result<FiltrationReport> {
    let d = e.lie.dim();
    if e.groups.len() != d {
        return Err(Error::Domain(
            "need exactly one group symbol per generator".into(),
        ));
    }
    for w in e.terms.keys() {
        check_shape(w, d)?;
    }
    let adj: Vec<Vec<Vec<ExactScalar>>> = e
        .groups
        .iter()
        .map(|g| {
            (0..d)
                .map(|j| e.lie.adjoint_coords(g, j))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;

    let mut pending = e.terms.clone();
    let mut done: NormalForm = BTreeMap::new();
    let mut steps = 0usize;
    let step_cap = 10_000_000usize;
    while let Some((word, c)) = pending.pop_first() {
        let Some(pos) = first_offender(&word) else {
            let alpha = normal_exponents(&word, d);
            let entry = done.entry(alpha.clone()).or_insert_with(ExactScalar::zero);
            *entry += &c;
            if entry.is_zero() {
                done.remove(&alpha);
            }
            continue;
        };
        steps += 1;
        if steps > step_cap {
            return Err(Error::NotConverged(
                "straightening exceeded its step budget".into(),
            ));
        }
        let Token::X(j) = word[pos] else {
            unreachable!("offenders are Lie letters")
        };
        match word[pos + 1] {
            Token::D(s) => {
                // (II): x_j δ_g = δ_g x_j − (Ad(g) x_j − x_j) δ_g.
                let mut swapped = word.clone();
                swapped.swap(pos, pos + 1);
                add_to(&mut pending, swapped, c.clone());
                for (i, coef) in adj[s][j].iter().enumerate() {
                    let y = if i == j {
                        coef - ExactScalar::from_integer(1.into())
                    } else {
                        coef.clone()
                    };
                    if y.is_zero() {
                        continue;
                    }
                    let mut w = word.clone();
                    w[pos] = Token::X(i);
                    add_to(&mut pending, w, -(&c * y));
                }
            }
            Token::X(i) => {
                // (I): x_j x_i = x_i x_j + [x_j, x_i].
                let mut swapped = word.clone();
                swapped.swap(pos, pos + 1);
                add_to(&mut pending, swapped, c.clone());
                for (l, coef) in e.lie.structure[j][i].iter().enumerate() {
                    if coef.is_zero() {
                        continue;
                    }
                    let mut w = word.clone();
                    w.splice(pos..pos + 2, [Token::X(l)]);
                    add_to(&mut pending, w, &c * coef);
                }
            }
        }
    }
    let threshold = d as u32 * k2;
    let (high_part, low_part): (NormalForm, NormalForm) = done
        .iter()
        .map(|(a, c)| (a.clone(), c.clone()))
        .partition(|(a, _)| a.iter().sum::<u32>() >= threshold);
    let min_degree = done.keys().map(|a| a.iter().sum::<u32>()).min();
    Ok(FiltrationReport {
        normal_form: done,
        high_part,
        low_part,
        min_degree,
        remainder_vanished: pending.is_empty(),
        steps,
    })
}

/// Independent canonical form: every group symbol is pushed to the far right
/// with `δ_g x = Ad(g)(x) δ_g`, and the remaining `U(g)` part is sorted into
/// PBW order using only (I). Returns PBW exponent vectors; the common factor
/// `δ_{g_1 ⋯ g_d}` is implicit.
pub fn oracle_canonical(
    lie: &LieData,
    groups: &[UnipotentMatrix],
    terms: &BTreeMap<Word, ExactScalar>,
) -> Result<NormalForm> {
    let d = lie.dim();
    // Ad(g_1 ⋯ g_s) applied to each basis vector, for every segment s.
    let mut prefix = QMatrix::identity(groups.first().map_or(1, |g| g.rows));
    let mut seg_adj: Vec<Vec<Vec<ExactScalar>>> = Vec::new();
    for s in 0..=groups.len() {
        seg_adj.push(
            (0..d)
                .map(|j| lie.adjoint_coords(&prefix, j))
                .collect::<Result<_>>()?,
        );
        if s < groups.len() {
            prefix = prefix.mul(&groups[s]);
        }
    }
    let mut lie_words: BTreeMap<Vec<usize>, ExactScalar> = BTreeMap::new();
    for (word, c) in terms {
        let mut partial: BTreeMap<Vec<usize>, ExactScalar> = BTreeMap::new();
        partial.insert(Vec::new(), c.clone());
        for (t, seg) in word.iter().zip(segments(word)) {
            let Token::X(j) = t else { continue };
            let mut next = BTreeMap::new();
            for (w, wc) in &partial {
                for (i, coef) in seg_adj[seg][*j].iter().enumerate() {
                    if coef.is_zero() {
                        continue;
                    }
                    let mut nw = w.clone();
                    nw.push(i);
                    let e = next.entry(nw).or_insert_with(ExactScalar::zero);
                    *e += wc * coef;
                }
            }
            partial = next;
        }
        for (w, wc) in partial {
            let e = lie_words.entry(w).or_insert_with(ExactScalar::zero);
            *e += wc;
        }
    }
    lie_words.retain(|_, v| !v.is_zero());
    // PBW sort with (I) only.
    let mut out: NormalForm = BTreeMap::new();
    while let Some((w, c)) = lie_words.pop_first() {
        match w.windows(2).position(|p| p[0] > p[1]) {
            None => {
                let mut alpha = vec![0u32; d];
                for &i in &w {
                    alpha[i] += 1;
                }
                let e = out.entry(alpha.clone()).or_insert_with(ExactScalar::zero);
                *e += c;
                if e.is_zero() {
                    out.remove(&alpha);
                }
            }
            Some(pos) => {
                let (j, i) = (w[pos], w[pos + 1]);
                let mut swapped = w.clone();
                swapped.swap(pos, pos + 1);
                let e = lie_words.entry(swapped).or_insert_with(ExactScalar::zero);
                *e += &c;
                for (l, coef) in lie.structure[j][i].iter().enumerate() {
                    if coef.is_zero() {
                        continue;
                    }
                    let mut nw = w.clone();
                    nw.splice(pos..pos + 2, [l]);
                    let e = lie_words.entry(nw).or_insert_with(ExactScalar::zero);
                    *e += &c * coef;
                }
                lie_words.retain(|_, v| !v.is_zero());
            }
        }
    }
    Ok(out)
}

/// Turns a normal form back into words `x_1^{α_1} δ_1 ⋯ x_d^{α_d} δ_d`.
pub fn normal_form_words(nf: &NormalForm) -> BTreeMap<Word, ExactScalar> {
    nf.iter()
        .map(|(alpha, c)| {
            let mut w = Vec::new();
            for (s, &a) in alpha.iter().enumerate() {
                w.extend(std::iter::repeat(Token::X(s)).take(a as usize));
                w.push(Token::D(s));
            }
            (w, c.clone())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic_core::int;
    use crate::pro_p_groups::{heisenberg_basis, mat_exp};

    fn heis_groups() -> Vec<UnipotentMatrix> {
        let b = heisenberg_basis();
        vec![
            mat_exp(&b[0].scale(&int(3))).unwrap(),
            mat_exp(&b[1].scale(&int(3)).add(&b[0])).unwrap(),
            mat_exp(&b[2].scale(&int(9))).unwrap(),
        ]
    }

    #[test]
    fn normal_input_unchanged() {
        let lie = LieData::new(heisenberg_basis()).unwrap();
        let mut e = EnvElement::new(lie, heis_groups());
        let w = vec![
            Token::X(0),
            Token::D(0),
            Token::X(1),
            Token::X(1),
            Token::D(1),
            Token::D(2),
        ];
        e.add_word(w, int(5)).unwrap();
        let rep = straighten(&e, 1).unwrap();
        assert_eq!(rep.steps, 0);
        assert_eq!(rep.normal_form.get(&vec![1, 2, 0]), Some(&int(5)));
        assert_eq!(rep.normal_form.len(), 1);
    }

    #[test]
    fn heisenberg_word_matches_oracle() {
        let lie = LieData::new(heisenberg_basis()).unwrap();
        let groups = heis_groups();
        let mut e = EnvElement::new(lie.clone(), groups.clone());
        let mut w: Word = [2, 1, 0, 1, 0, 2, 1].iter().map(|&j| Token::X(j)).collect();
        w.extend([Token::D(0), Token::D(1), Token::D(2)]);
        e.add_word(w, int(1)).unwrap();
        let rep = straighten(&e, 1).unwrap();
        assert!(rep.remainder_vanished);
        assert!(rep.min_degree.unwrap() >= 3);
        assert!(rep.low_part.is_empty());
        let lhs = oracle_canonical(&lie, &groups, &e.terms).unwrap();
        let rhs = oracle_canonical(&lie, &groups, &normal_form_words(&rep.normal_form)).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn abelian_data_collects_powers() {
        let mut a = QMatrix::zeros(3, 3);
        a.set(0, 2, int(1));
        let lie = LieData::new(vec![a.clone()]).unwrap();
        let g = mat_exp(&a.scale(&int(7))).unwrap();
        let mut e = EnvElement::new(lie, vec![g]);
        e.add_word(vec![Token::X(0), Token::X(0), Token::D(0)], int(2))
            .unwrap();
        let rep = straighten(&e, 1).unwrap();
        assert_eq!(rep.normal_form.get(&vec![2]), Some(&int(2)));
    }

    #[test]
    fn rejects_non_nilpotent_data() {
        let mut a = QMatrix::zeros(2, 2);
        a.set(0, 0, int(1));
        assert!(LieData::new(vec![a]).is_err());
    }
}
