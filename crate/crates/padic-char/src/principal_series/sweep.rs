//! The formal-character pipeline, swept over levels and cutoffs.
//!
//! For every grid point `(h, e)` (total level `L = h + e`) and every cutoff
//! `k` of the grid:
//!
//! 1. the action matrix is built at a reference point `a_ref = 1 + p^{max(L,1)}`
//!    that fixes every index, and the diagonal characters are read off as
//!    monomials in the generators;
//! 2. the formal character `Θ_k = Ψ·W_k + Z` (`Ψ` a permutation character,
//!    `W_k` the weights of one orbit block, `Z` the zero chart) is checked to
//!    evaluate to the brute-force trace at `s`, and the trace is compared
//!    with the block closed form;
//! 3. `W_k` is normalized by its leading weight, its limit in `k` is taken
//!    and recognized as a product of geometric series;
//! 4. the geometric part is certified evaluable at `s^{-1}` and
//!    `θ(s) = Ψ(s^{-1})·lead(s^{-1})·(g/h)(s^{-1}) + Z(s^{-1})`.
//!
//! Values at all grid points past the stable-regime threshold
//! (`L ≥ max_j v_p(a_j(s) − 1)`) must coincide.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formal_characters::{
    certify_evaluable, eval_formal, expand, limit_of_truncations, torus_inverse, FormalFunction,
    Generator, Generators, GroupRingElement, Monomial, TorusPoint,
};
use crate::padic_core::{from_bigint, inv_abs_p_value, p_pow, vp, ExactScalar, Valuation};
use crate::principal_series::iwahori::{
    iwahori_block_closed_form, iwahori_diagonal, iwahori_trace, RootDatum,
};
use crate::principal_series::sl2::{
    sl2_action_matrix, sl2_generators, sl2_partial_closed_form, sl2_trace, SL2Config, Side,
};

/// The grid of `(h, e, k)`: `h` the level exponent, `e` the exponent of
/// `ε(r)`, `k` the cutoff.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Grid {
    pub hs: Vec<u32>,
    pub es: Vec<u32>,
    pub ks: Vec<u32>,
}

impl Grid {
    /// `h, e ∈ {0, 1, 2}` and three consecutive cutoffs starting at `k0`.
    pub fn standard(k0: u32) -> Self {
        Grid {
            hs: vec![0, 1, 2],
            es: vec![0, 1, 2],
            ks: vec![k0, k0 + 1, k0 + 2],
        }
    }

    /// The standard grid for a family: for `SL_2` the cutoffs start at
    /// `max(2, 1 − c)`.
    pub fn for_family(family: &Family) -> Self {
        match family {
            Family::Sl2 { c, .. } => Grid::standard(std::cmp::max(2, 1 - *c) as u32),
            Family::Iwahori(_) => Grid {
                hs: vec![0, 1, 2],
                es: vec![0],
                ks: vec![2, 3, 4],
            },
        }
    }

    fn validate(&self, family: &Family) -> Result<()> {
        if self.hs.is_empty() || self.es.is_empty() {
            return Err(Error::Domain("grid needs at least one level".into()));
        }
        if self.ks.len() < 2 || self.ks.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Domain(
                "grid needs at least two strictly increasing cutoffs".into(),
            ));
        }
        if self.ks[0] < 2 {
            return Err(Error::Domain("cutoffs must be at least 2".into()));
        }
        if let Family::Sl2 { c, .. } = family {
            if *c <= 0 && i64::from(self.ks[0]) <= -c {
                return Err(Error::Domain(format!("cutoffs must exceed −c = {}", -c)));
            }
        }
        Ok(())
    }

    /// Degree window on which consecutive truncations are compared.
    fn window(&self) -> u64 {
        u64::from(self.ks[self.ks.len() - 2] - 1)
    }
}

/// What is being swept.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Family {
    /// `SL_2(Q_p)` with `χ(a) = a^c`; both Bruhat charts.
    Sl2 { p: u64, c: i64 },
    /// A root datum; its levels are replaced by the uniform level `h + e`
    /// and its cutoff by the grid cutoffs.
    Iwahori(RootDatum),
}

impl Family {
    fn p(&self) -> u64 {
        match self {
            Family::Sl2 { p, .. } => *p,
            Family::Iwahori(rd) => rd.p,
        }
    }

    fn components(&self) -> Vec<&'static str> {
        match self {
            Family::Sl2 { .. } => vec!["plus", "minus"],
            Family::Iwahori(_) => vec!["total"],
        }
    }

    fn generators(&self) -> Generators {
        match self {
            Family::Sl2 { c, .. } => sl2_generators(*c),
            Family::Iwahori(rd) => Generators::new(
                (0..rd.torus_rank)
                    .map(|i| {
                        let mut e = vec![0; rd.torus_rank];
                        e[i] = 1;
                        Generator {
                            name: format!("x{}", i + 1),
                            coord_exponents: e,
                        }
                    })
                    .collect(),
            ),
        }
    }

    /// Root values `a_j(s)`: `a²` for `SL_2`.
    fn root_values(&self, s: &TorusPoint) -> Vec<ExactScalar> {
        match self {
            Family::Sl2 { .. } => vec![&s[0] * &s[0]],
            Family::Iwahori(rd) => rd.root_values(s),
        }
    }

    /// `max_j v_p(a_j(s) − 1)`, the level from which on the sweep is stable.
    pub fn threshold(&self, s: &TorusPoint) -> Result<u32> {
        let mut t = 0u32;
        for (j, a) in self.root_values(s).iter().enumerate() {
            match vp(&(a - ExactScalar::one()), self.p()) {
                Valuation::Infinite => {
                    return Err(Error::NotRegular(format!(
                        "root {j} takes the value 1 at s"
                    )))
                }
                Valuation::Finite(v) => t = t.max(u32::try_from(v).unwrap_or(0)),
            }
        }
        Ok(t)
    }
}

/// One component at one grid point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepRow {
    pub h: u32,
    pub e: u32,
    pub component: String,
    /// Brute-force traces at `s` for each cutoff.
    pub traces: Vec<(u32, ExactScalar)>,
    /// Every trace equals the block closed form.
    pub closed_forms_match: bool,
    /// Every trace equals the evaluation of the formal `Θ_k` at `s`.
    pub formal_matches: bool,
    /// The limit formal character (permutation part kept symbolic).
    pub formal: FormalFunction,
    /// `Ψ(s^{-1})`, the permutation character at the inverted point.
    pub perm_value: ExactScalar,
    /// `∏ |a_j(s^{-1}) − 1|^{-1}` (minus one on charts without the zero index).
    pub perm_stable_value: ExactScalar,
    /// Pipeline value of this component.
    pub value: ExactScalar,
    /// Whether `h + e` has reached the stable-regime threshold.
    pub stable: bool,
}

/// Result of a sweep.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub threshold: u32,
    pub rows: Vec<SweepRow>,
    /// Stabilized value per component.
    pub components: BTreeMap<String, ExactScalar>,
    /// Sum of the component values.
    pub value: ExactScalar,
}

/// Finite data at one `(L, k)`.
struct Stage {
    trace: ExactScalar,
    closed: ExactScalar,
    /// `Σ` of the block weights.
    w: GroupRingElement,
    /// Weight of the first block entry.
    lead: Option<Monomial>,
    /// Weights of the unit steps, relative to `lead`.
    ratios: Vec<Monomial>,
    /// Zero-chart weights.
    z: GroupRingElement,
}

fn reference_point(p: u64, level: u32) -> ExactScalar {
    from_bigint(p_pow(p, level.max(1)) + BigInt::one())
}

/// The `w` with `base^w = d`, for an integer `base > 1`.
fn read_exponent(base: &ExactScalar, d: &ExactScalar, bound: i64) -> Result<i64> {
    let mut x = crate::padic_core::pow_i(base, -bound);
    for w in -bound..=bound {
        if &x == d {
            return Ok(w);
        }
        x *= base;
    }
    Err(Error::Domain(format!(
        "diagonal entry {d} is not a power of {base} with exponent ≤ {bound}"
    )))
}

fn sl2_perm(p: u64, level: u32, side: Side) -> FormalFunction {
    match side {
        Side::Plus => FormalFunction::perm(p, level, Monomial(vec![-2, 0]), true),
        Side::Minus => FormalFunction::perm(p, level, Monomial(vec![2, 0]), false),
    }
}

fn sl2_stage(p: u64, c: i64, h: u32, e: u32, k: u32, side: Side, s: &TorusPoint) -> Result<Stage> {
    let cfg = SL2Config::new(p, c, h, h, e, k)?;
    let level = cfg.level(side);
    let a_ref = reference_point(p, level);
    let m = sl2_action_matrix(&a_ref, &cfg, side)?;
    let bound = 2 * i64::from(k) + 2 * c.abs() + 4;
    // Weight a^w with σ = −1 (orbit blocks) or +1 (zero chart) is the
    // monomial [−w − cσ, σ] in (ε, χ).
    let mut block: BTreeMap<i64, Monomial> = BTreeMap::new();
    let mut z = GroupRingElement::zero();
    for (i, label) in m.labels.iter().enumerate() {
        let w = read_exponent(&a_ref, &m.get(i, i), bound)?;
        let (n, idx) = (label[0], label[1]);
        if side == Side::Minus && idx == 0 {
            z.add_term(Monomial(vec![-w - c, 1]), &BigInt::one());
            continue;
        }
        let mono = Monomial(vec![-w + c, -1]);
        match block.get(&n) {
            Some(prev) if *prev != mono => {
                return Err(Error::Domain(format!(
                    "diagonal weights differ within the block n = {n}"
                )))
            }
            _ => {
                block.insert(n, mono);
            }
        }
    }
    let mut w = GroupRingElement::zero();
    for mono in block.values() {
        w.add_term(mono.clone(), &BigInt::one());
    }
    let lead = block.get(&0).cloned();
    let ratios = match (&lead, block.get(&1)) {
        (Some(l), Some(m1)) => vec![m1.mul(&l.inv())],
        _ => Vec::new(),
    };
    Ok(Stage {
        trace: sl2_trace(&s[0], &cfg, side)?,
        closed: sl2_partial_closed_form(&s[0], &cfg, side)?,
        w,
        lead,
        ratios,
        z,
    })
}

fn iwahori_perm(rd: &RootDatum, level: u32) -> FormalFunction {
    FormalFunction::product(
        rd.roots
            .iter()
            .map(|r| FormalFunction::perm(rd.p, level, Monomial(r.clone()), true))
            .collect(),
    )
}

fn iwahori_stage(rd: &RootDatum, level: u32, k: u32, s: &TorusPoint) -> Result<Stage> {
    let rd = rd.with_uniform(level, k);
    let d = rd.d();
    let t = rd.torus_rank;
    let a_ref = reference_point(rd.p, level);
    let bound = rd
        .roots
        .iter()
        .flatten()
        .chain(&rd.chi_w)
        .map(|e| e.abs())
        .sum::<i64>()
        * i64::from(k)
        + 4;
    // weights[β] = exponent vector of the diagonal character at β.
    let mut weights: BTreeMap<Vec<i64>, Vec<i64>> = BTreeMap::new();
    for i in 0..t {
        let mut s_ref = vec![ExactScalar::one(); t];
        s_ref[i] = a_ref.clone();
        for (label, v) in iwahori_diagonal(&s_ref, &rd)? {
            let beta = label[d..].to_vec();
            let w = read_exponent(&a_ref, &v, bound)?;
            let entry = weights.entry(beta).or_insert_with(|| vec![i64::MIN; t]);
            if entry[i] == i64::MIN {
                entry[i] = w;
            } else if entry[i] != w {
                return Err(Error::Domain(
                    "diagonal weights differ within a block".into(),
                ));
            }
        }
    }
    let mut w = GroupRingElement::zero();
    for e in weights.values() {
        w.add_term(Monomial(e.clone()), &BigInt::one());
    }
    let lead = weights.get(&vec![0; d]).map(|e| Monomial(e.clone()));
    let mut ratios = Vec::new();
    if let Some(l) = &lead {
        for j in 0..d {
            let mut unit = vec![0; d];
            unit[j] = 1;
            if let Some(e) = weights.get(&unit) {
                ratios.push(Monomial(e.clone()).mul(&l.inv()));
            }
        }
    }
    Ok(Stage {
        trace: iwahori_trace(s, &rd)?,
        closed: iwahori_block_closed_form(s, &rd)?,
        w,
        lead,
        ratios,
        z: GroupRingElement::zero(),
    })
}

/// `∏ (|μ(s) − 1|^{-1} − [zero excluded])` over the permutation nodes.
fn perm_stable_value(f: &FormalFunction, gens: &Generators, s: &TorusPoint) -> Result<ExactScalar> {
    match f {
        FormalFunction::Perm {
            p,
            multiplier,
            include_zero,
            ..
        } => {
            let mu = multiplier.eval(gens, s);
            let v = inv_abs_p_value(&(mu - ExactScalar::one()), *p)?;
            Ok(if *include_zero {
                v
            } else {
                v - ExactScalar::one()
            })
        }
        FormalFunction::Product { factors } => {
            factors.iter().try_fold(ExactScalar::one(), |acc, x| {
                Ok(acc * perm_stable_value(x, gens, s)?)
            })
        }
        _ => Err(Error::Domain(
            "expected a product of permutation characters".into(),
        )),
    }
}

/// Runs the pipeline for one component at one grid point.
fn run_component(
    stages: &[(u32, Stage)],
    perm: FormalFunction,
    gens: &Generators,
    s: &TorusPoint,
    window: u64,
) -> Result<(
    Vec<(u32, ExactScalar)>,
    bool,
    bool,
    FormalFunction,
    ExactScalar,
    ExactScalar,
)> {
    let s_inv = torus_inverse(s);
    let mut closed_ok = true;
    let mut formal_ok = true;
    let mut traces = Vec::new();
    for (k, st) in stages {
        let theta_k = FormalFunction::sum(vec![
            FormalFunction::product(vec![perm.clone(), FormalFunction::poly(st.w.clone())]),
            FormalFunction::poly(st.z.clone()),
        ]);
        formal_ok &= eval_formal(&theta_k, gens, s)? == st.trace;
        closed_ok &= st.closed == st.trace;
        traces.push((*k, st.trace.clone()));
    }
    let last = &stages.last().expect("at least two cutoffs").1;
    if stages.iter().any(|(_, st)| st.z != last.z) {
        return Err(Error::NotConverged(
            "zero chart depends on the cutoff".into(),
        ));
    }
    let perm_value = eval_formal(&perm, gens, &s_inv)?;
    let mut value = last.z.eval(gens, &s_inv);
    let mut parts = Vec::new();
    if let Some(lead) = &last.lead {
        if stages
            .iter()
            .any(|(_, st)| st.lead.as_ref() != Some(lead) || st.ratios != last.ratios)
        {
            return Err(Error::NotConverged(
                "block weights depend on the cutoff".into(),
            ));
        }
        let normalize = GroupRingElement::monomial(lead.inv());
        let seq: Vec<GroupRingElement> =
            stages.iter().map(|(_, st)| st.w.mul(&normalize)).collect();
        let limit = limit_of_truncations(&seq, window)?;
        let geom = FormalFunction::product(
            last.ratios
                .iter()
                .map(|r| FormalFunction::geom(r.clone()))
                .collect(),
        );
        if expand(&geom, gens.len(), window)? != limit {
            return Err(Error::NotConverged(
                "limit of the truncations is not the expected product of geometric series".into(),
            ));
        }
        let cert = certify_evaluable(&geom, gens, std::slice::from_ref(&s_inv), window)?;
        value += &perm_value * lead.eval(gens, &s_inv) * cert.value(gens, &s_inv)?;
        parts.push(FormalFunction::product(vec![
            FormalFunction::monomial(lead.clone()),
            perm,
            geom,
        ]));
    }
    if !last.z.is_zero() {
        parts.push(FormalFunction::poly(last.z.clone()));
    }
    Ok((
        traces,
        closed_ok,
        formal_ok,
        FormalFunction::sum(parts),
        perm_value,
        value,
    ))
}

/// Runs the pipeline over the grid and returns the stabilized values.
///
/// Fails with [`Error::NotStabilized`] if two grid points past the threshold
/// give different values, or if no grid point reaches the threshold.
pub fn ncharacter_sweep(family: &Family, s: &TorusPoint, grid: &Grid) -> Result<SweepReport> {
    grid.validate(family)?;
    if let Family::Iwahori(rd) = family {
        rd.validate()?;
        if !rd.roots_in_common_orthant() {
            return Err(Error::Domain(
                "roots must lie in a common orthant for the formal characters to be summable"
                    .into(),
            ));
        }
    }
    if let Family::Sl2 { p, c } = family {
        SL2Config::new(*p, *c, 0, 0, 0, grid.ks[0])?;
        if s.len() != 1 {
            return Err(Error::Domain(
                "an SL_2 torus point has one coordinate".into(),
            ));
        }
        if s[0].abs().is_one() {
            return Err(Error::NotRegular(format!("a = {} (need a ≠ ±1)", s[0])));
        }
    }
    let threshold = family.threshold(s)?;
    let gens = family.generators();
    let s_inv = torus_inverse(s);
    let window = grid.window();
    let mut rows = Vec::new();
    for &h in &grid.hs {
        for &e in &grid.es {
            let level = h + e;
            for comp in family.components() {
                let (stages, perm) = match family {
                    Family::Sl2 { p, c } => {
                        let side = if comp == "plus" {
                            Side::Plus
                        } else {
                            Side::Minus
                        };
                        let stages = grid
                            .ks
                            .iter()
                            .map(|&k| Ok((k, sl2_stage(*p, *c, h, e, k, side, s)?)))
                            .collect::<Result<Vec<_>>>()?;
                        (stages, sl2_perm(*p, level, side))
                    }
                    Family::Iwahori(rd) => {
                        let stages = grid
                            .ks
                            .iter()
                            .map(|&k| Ok((k, iwahori_stage(rd, level, k, s)?)))
                            .collect::<Result<Vec<_>>>()?;
                        (stages, iwahori_perm(rd, level))
                    }
                };
                let perm_stable = perm_stable_value(&perm, &gens, &s_inv)?;
                let (traces, closed_ok, formal_ok, formal, perm_value, value) =
                    run_component(&stages, perm, &gens, s, window)?;
                rows.push(SweepRow {
                    h,
                    e,
                    component: comp.to_string(),
                    traces,
                    closed_forms_match: closed_ok,
                    formal_matches: formal_ok,
                    formal,
                    perm_value,
                    perm_stable_value: perm_stable,
                    value,
                    stable: level >= threshold,
                });
            }
        }
    }
    let mut components = BTreeMap::new();
    for comp in family.components() {
        let mut stable = rows.iter().filter(|r| r.stable && r.component == comp);
        let first = stable.next().ok_or_else(|| {
            Error::NotStabilized(format!(
                "no grid point reaches the stable regime h + e ≥ {threshold}"
            ))
        })?;
        for r in stable {
            if r.value != first.value {
                return Err(Error::NotStabilized(format!(
                    "{comp}: value {} at (h, e) = ({}, {}) differs from {} at ({}, {})",
                    r.value, r.h, r.e, first.value, first.h, first.e
                )));
            }
        }
        components.insert(comp.to_string(), first.value.clone());
    }
    let value = components
        .values()
        .fold(ExactScalar::zero(), |acc, v| acc + v);
    Ok(SweepReport {
        threshold,
        rows,
        components,
        value,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic_core::{int, rat};
    use crate::principal_series::iwahori::theta_iwahori;
    use crate::principal_series::sl2::theta_sl2;

    #[test]
    fn sl2_sweep_reaches_closed_formula() {
        let family = Family::Sl2 { p: 5, c: 0 };
        let grid = Grid {
            hs: vec![0, 1, 2],
            es: vec![0, 1, 2],
            ks: vec![2, 3, 4],
        };
        let report = ncharacter_sweep(&family, &vec![int(2)], &grid).unwrap();
        assert_eq!(report.value, rat(7, 3));
        assert_eq!(report.value, theta_sl2(5, &int(2), 0).unwrap());
        assert!(report
            .rows
            .iter()
            .all(|r| r.closed_forms_match && r.formal_matches));
        let sum = report.components["plus"].clone() + report.components["minus"].clone();
        assert_eq!(sum, report.value);
    }

    #[test]
    fn below_threshold_permutation_values_differ() {
        // v_3(4² − 1) = 1 for s = 4, so level 0 lies below the threshold.
        let family = Family::Sl2 { p: 3, c: 1 };
        let report = ncharacter_sweep(&family, &vec![int(4)], &Grid::for_family(&family)).unwrap();
        let low = report
            .rows
            .iter()
            .find(|r| !r.stable && r.component == "plus")
            .unwrap();
        assert_ne!(low.perm_value, low.perm_stable_value);
        assert!(report
            .rows
            .iter()
            .filter(|r| r.stable)
            .all(|r| r.perm_value == r.perm_stable_value));
    }

    #[test]
    fn iwahori_sweep_matches_formula() {
        let rd = RootDatum {
            p: 3,
            torus_rank: 1,
            roots: vec![vec![1], vec![2]],
            chi_w: vec![1],
            levels: vec![1, 1],
            k: 2,
        };
        let s = vec![int(4)];
        let family = Family::Iwahori(rd.clone());
        let report = ncharacter_sweep(&family, &s, &Grid::for_family(&family)).unwrap();
        assert_eq!(report.value, theta_iwahori(&s, &rd).unwrap());
    }

    #[test]
    fn rejects_bad_input() {
        let family = Family::Sl2 { p: 5, c: 0 };
        assert!(matches!(
            ncharacter_sweep(&family, &vec![int(-1)], &Grid::standard(2)),
            Err(Error::NotRegular(_))
        ));
        let grid = Grid {
            hs: vec![0],
            es: vec![0],
            ks: vec![2, 3],
        };
        // v_5(6² − 1) = 1, so level 0 never reaches the stable regime.
        assert!(matches!(
            ncharacter_sweep(&family, &vec![int(6)], &grid),
            Err(Error::NotStabilized(_))
        ));
    }
}
