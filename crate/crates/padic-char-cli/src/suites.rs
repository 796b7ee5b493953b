//! `verify <suite|all>`: the identity checks, each reported case by case.
//!
//! Every suite compares a brute-force or pipeline computation with a closed
//! form. Sampled inputs (rational units, basis changes, words) come from a
//! ChaCha generator seeded with `--seed`, so the output is reproducible.

use num_bigint::BigInt;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use padic_char::dist_algebra::{
    binom_identity_checks, epsilon_r, log_series, norm_and_dominant, subgroup_expansion_dominance,
    NormParams,
};
use padic_char::formal_characters::{
    count_divisible, smooth_trace, smooth_trace_inverted_closed, smooth_trace_standard_closed,
    Covering, TorusPoint,
};
use padic_char::padic_core::{
    fmt_rational, int, inv_abs_p_value, p_pow, pow_i, rat, ExactScalar, PContext,
};
use padic_char::principal_series::{
    fixpoint_count_brute, fixpoint_count_closed, iwahori_action_matrix, iwahori_block_closed_form,
    iwahori_trace, ncharacter_sweep, sl2_action_matrix, sl2_partial_closed_form, sl2_trace,
    theta_iwahori, theta_sl2, theta_sl2_smooth, weyl_char_sl2, Family, Grid, RootDatum, SL2Config,
    Side,
};
use padic_char::pro_p_groups::{
    change_basis, is_powerful, p_elementary_divisors, random_unimodular, unitriangular_lattice,
    ElemDivisors, PLattice,
};

use crate::commands::{random_word, straighten_words, CliResult, STRAIGHTEN_COLUMNS};
use crate::report::{concat, Report};

pub const SUITE_NAMES: [&str; 13] = [
    "all",
    "smooth",
    "count-divisible",
    "binom",
    "snf",
    "eps",
    "dominance",
    "straighten",
    "sl2",
    "alternating-sums",
    "iwahori",
    "multiplicative",
    "threshold",
];

const COLUMNS: [&str; 5] = ["suite", "case", "status", "expected", "got"];

struct Suite {
    name: &'static str,
    report: Report,
}

impl Suite {
    fn new(name: &'static str) -> Self {
        Suite {
            name,
            report: Report::new("verify", &COLUMNS),
        }
    }

    fn record(&mut self, case: String, expected: String, got: String) {
        let ok = self
            .report
            .check(format!("{} {case}", self.name), &expected, &got);
        let status = if ok { "pass" } else { "FAIL" };
        self.report
            .push(vec![self.name.into(), case, status.into(), expected, got]);
    }

    fn record_eq(&mut self, case: String, expected: &ExactScalar, got: &ExactScalar) {
        self.record(case, fmt_rational(expected), fmt_rational(got));
    }

    fn record_true(&mut self, case: String, holds: bool) {
        self.record(case, "true".into(), holds.to_string());
    }

    /// Records a computation that raised an error as a failure.
    fn record_err(&mut self, case: String, err: impl std::fmt::Display) {
        self.record(case, "a value".into(), format!("error: {err}"));
    }
}

/// Rational `p`-adic units `n/d` with `|n| ≤ 60`, `1 ≤ d ≤ 40`, distinct.
fn sample_units(rng: &mut ChaCha8Rng, p: u64, count: usize) -> Vec<ExactScalar> {
    let mut out = Vec::new();
    while out.len() < count {
        let n: i64 = rng.gen_range(-60..=60);
        let d: i64 = rng.gen_range(1..=40);
        if n == 0 || n % p as i64 == 0 || d % p as i64 == 0 {
            continue;
        }
        let x = rat(n, d);
        if !out.contains(&x) {
            out.push(x);
        }
    }
    out
}

fn smooth(seed: u64) -> CliResult<Report> {
    let mut s = Suite::new("smooth");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for p in [2u64, 3, 5] {
        for x in sample_units(&mut rng, p, 10) {
            for h in 0..=5u32 {
                let brute = smooth_trace(p, h, &x, Covering::Standard)?;
                let closed = smooth_trace_standard_closed(p, h, &x);
                s.record(
                    format!("standard p={p} h={h} s={}", fmt_rational(&x)),
                    closed.to_string(),
                    brute.to_string(),
                );
            }
            for h in 0..=3u32 {
                let brute = smooth_trace(p, h, &x, Covering::Inverted)?;
                let closed = smooth_trace_inverted_closed(p, h, &x);
                s.record(
                    format!("inverted p={p} h={h} s={}", fmt_rational(&x)),
                    closed.to_string(),
                    brute.to_string(),
                );
            }
        }
    }
    Ok(s.report)
}

fn count_divisible_suite() -> CliResult<Report> {
    let mut s = Suite::new("count-divisible");
    for p in [2u64, 3, 5] {
        for beta in 0..=6u32 {
            for alpha in 0..=beta {
                let c = count_divisible(alpha, beta, p)?;
                s.record(
                    format!("p={p} α={alpha} β={beta}"),
                    p_pow(p, alpha).to_string(),
                    c.to_string(),
                );
            }
        }
    }
    Ok(s.report)
}

fn binom() -> CliResult<Report> {
    let mut s = Suite::new("binom");
    for a in 0..=8u64 {
        for b in 0..=8u64 {
            for c in 0..=5u64 {
                for d in 0..=5u64 {
                    let v = binom_identity_checks(a, b, c, d, 0, 2);
                    if let Some(ok) = v.claim_i {
                        s.record_true(format!("(i) a={a} b={b} c={c} d={d}"), ok);
                    }
                }
            }
            for p in [2u64, 3, 5] {
                for h in 0..=2u32 {
                    let v = binom_identity_checks(a, b, 1, 0, h, p);
                    s.record_true(format!("(ii) p={p} h={h} a={a} b={b}"), v.claim_ii);
                }
            }
        }
    }
    Ok(s.report)
}

fn snf(seed: u64) -> CliResult<Report> {
    let mut s = Suite::new("snf");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let diag = |p: u64, d: &[i64]| {
        let n = d.len();
        let gens = (0..n)
            .map(|j| (0..n).map(|i| if i == j { d[j] } else { 0 }).collect())
            .collect();
        PLattice::new(p, gens, None)
    };
    let cases: Vec<(PLattice, PLattice)> = vec![
        (diag(5, &[1, 1])?, diag(5, &[5, 25])?),
        (diag(3, &[1, 1, 1])?, diag(3, &[3, 9, 2])?),
        (
            unitriangular_lattice(5, 1, 0, 1),
            unitriangular_lattice(5, 1, 0, 1).scaled(2),
        ),
        (diag(2, &[1, 1])?, diag(2, &[4, 8])?),
    ];
    for (idx, (lam, sub)) in cases.iter().enumerate() {
        let base: ElemDivisors = p_elementary_divisors(lam, sub)?;
        let n = lam.rank();
        for trial in 0..20 {
            let u1 = random_unimodular(n, &mut rng, 12);
            let u2 = random_unimodular(n, &mut rng, 12);
            let d = p_elementary_divisors(&change_basis(lam, &u1), &change_basis(sub, &u2))?;
            s.record(
                format!("case {idx} change {trial}"),
                format!("{:?}", base.0),
                format!("{:?}", d.0),
            );
        }
    }
    for ((a12, a13, a23), expect) in [((1, 0, 1), true), ((1, 1, 1), true), ((1, 2, 1), false)] {
        let lat = unitriangular_lattice(5, a12, a13, a23);
        s.record(
            format!("powerful p=5 ({a12},{a13},{a23})"),
            expect.to_string(),
            is_powerful(&lat)?.to_string(),
        );
    }
    Ok(s.report)
}

fn eps(seed: u64) -> CliResult<Report> {
    let mut s = Suite::new("eps");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for p in [2u64, 3, 5] {
        let ctx = PContext::new(p)?;
        let kappa = int(ctx.kappa as i64);
        let mut qs = vec![int(1)];
        while qs.len() < 20 {
            let d: i64 = rng.gen_range(2..=40);
            let n: i64 = rng.gen_range(1..=d);
            let x = rat(n, d);
            if !qs.contains(&x) {
                qs.push(x);
            }
        }
        for q in &qs {
            let case = format!("p={p} q={}", fmt_rational(q));
            let (_, e) = epsilon_r(q, ctx)?;
            let rep = norm_and_dominant(
                &log_series(),
                &NormParams::unchecked(p, vec![&kappa * q]),
                50,
            )?;
            s.record(
                format!("{case} dominant index of log(1+b)"),
                format!("{:?}", Some(vec![e.clone()])),
                format!(
                    "{:?}",
                    rep.dominant
                        .map(|d| d.into_iter().map(BigInt::from).collect::<Vec<_>>())
                ),
            );
            let (_, root) = epsilon_r(&(q / int(p as i64)), ctx)?;
            s.record(
                format!("{case} ε(r^(1/p)) = p·ε(r)"),
                (&e * BigInt::from(p)).to_string(),
                root.to_string(),
            );
            let x = &kappa * q * ExactScalar::from_integer(e);
            let pm1 = int(p as i64 - 1);
            let holds = x > pm1.recip() && x <= int(p as i64) / &pm1;
            s.record_true(
                format!("{case} p^(-p/(p-1)) ≤ r^(κε) < p^(-1/(p-1))"),
                holds,
            );
        }
    }
    Ok(s.report)
}

fn dominance() -> CliResult<Report> {
    let mut s = Suite::new("dominance");
    let r = NormParams::new(3, vec![rat(1, 4)])?;
    for beta in 0..=5u32 {
        let rep = subgroup_expansion_dominance(&[beta], &[1], &r, 20)?;
        s.record(
            format!("p=3 γ=1 β={beta} S_β"),
            (3 * beta).to_string(),
            rep.s_beta[0].to_string(),
        );
        s.record_true(format!("p=3 γ=1 β={beta} |t| = 1"), rep.unit_at_s_beta);
        s.record_true(
            format!("p=3 γ=1 β={beta} strict elsewhere"),
            rep.violations.is_empty(),
        );
    }
    Ok(s.report)
}

fn straighten_suite(seed: u64) -> CliResult<Report> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let words: Vec<_> = (0..10).map(|_| random_word(&mut rng, 7)).collect();
    let mut inner = Report::new("straighten", &STRAIGHTEN_COLUMNS);
    straighten_words(&mut inner, 3, 2, 1, &words)?;
    let mut s = Suite::new("straighten");
    for row in &inner.rows {
        s.record_true(format!("{} terminated", row[0]), row[3] == "true");
        s.record_true(format!("{} degree ≥ 3", row[0]), row[4] == "true");
        s.record_true(format!("{} oracle", row[0]), row[5] == "true");
    }
    Ok(s.report)
}

fn sl2() -> CliResult<Report> {
    let mut s = Suite::new("sl2");
    for p in [3u64, 5] {
        for c in [0i64, -1, -2, 1, 2] {
            for a0 in [2i64, 3, 1 + p as i64] {
                if a0 % p as i64 == 0 {
                    continue;
                }
                let a = int(a0);
                let case = format!("p={p} c={c} a={a0}");
                let family = Family::Sl2 { p, c };
                let grid = Grid::for_family(&family);
                for &h in &grid.hs {
                    for &e in &grid.es {
                        for &k in &grid.ks {
                            let cfg = SL2Config::new(p, c, h, h, e, k)?;
                            for side in [Side::Plus, Side::Minus] {
                                s.record_eq(
                                    format!("{case} h={h} e={e} k={k} {} trace", side.name()),
                                    &sl2_partial_closed_form(&a, &cfg, side)?,
                                    &sl2_trace(&a, &cfg, side)?,
                                );
                            }
                        }
                    }
                }
                let expect = theta_sl2(p, &a, c)?;
                match ncharacter_sweep(&family, &vec![a.clone()], &grid) {
                    Ok(rep) => s.record_eq(format!("{case} character"), &expect, &rep.value),
                    Err(err) => s.record_err(format!("{case} character"), err),
                }
            }
        }
    }
    Ok(s.report)
}

fn alternating_sums() -> CliResult<Report> {
    let mut s = Suite::new("alternating-sums");
    for p in [3u64, 5, 7] {
        for a0 in [2i64, 3, 4, 6, 1 + p as i64] {
            if a0 % p as i64 == 0 {
                continue;
            }
            for a in [int(a0), rat(1, a0)] {
                let th = |c: i64| theta_sl2(p, &a, c);
                let smooth = theta_sl2_smooth(p, &a, &int(1))?;
                let case = format!("p={p} a={}", fmt_rational(&a));
                s.record_eq(
                    format!("{case} Θ(2) − Θ(0) + Θ∞(1)"),
                    &int(0),
                    &(th(2)? - th(0)? + &smooth),
                );
                for c in -4..=0 {
                    s.record_eq(
                        format!("{case} c={c} Θ(2−c) − Θ(c)"),
                        &(&smooth * weyl_char_sl2(&a, c)?),
                        &(th(2 - c)? - th(c)?),
                    );
                }
            }
        }
    }
    Ok(s.report)
}

fn root_data() -> Vec<(&'static str, RootDatum, TorusPoint)> {
    vec![
        (
            "rank-1 sl2-like",
            RootDatum {
                p: 3,
                torus_rank: 1,
                roots: vec![vec![2]],
                chi_w: vec![1],
                levels: vec![1],
                k: 2,
            },
            vec![int(2)],
        ),
        (
            "rank-1 two roots",
            RootDatum {
                p: 3,
                torus_rank: 1,
                roots: vec![vec![1], vec![2]],
                chi_w: vec![0],
                levels: vec![1, 1],
                k: 2,
            },
            vec![int(4)],
        ),
        (
            "rank-2 three roots",
            RootDatum {
                p: 3,
                torus_rank: 2,
                roots: vec![vec![1, 0], vec![0, 1], vec![1, 1]],
                chi_w: vec![1, -1],
                levels: vec![1, 1, 1],
                k: 2,
            },
            vec![int(4), int(2)],
        ),
    ]
}

fn iwahori() -> CliResult<Report> {
    let mut s = Suite::new("iwahori");
    for (name, rd, x) in root_data() {
        let family = Family::Iwahori(rd.clone());
        let threshold = family.threshold(&x)?;
        for h in 0..=2u32 {
            for k in 2..=4u32 {
                let rdk = rd.with_uniform(h, k);
                s.record_eq(
                    format!("{name} h={h} k={k} trace"),
                    &iwahori_block_closed_form(&x, &rdk)?,
                    &iwahori_trace(&x, &rdk)?,
                );
                if h >= threshold {
                    s.record(
                        format!("{name} h={h} k={k} fixpoints"),
                        fixpoint_count_closed(&x, &rdk)?.to_string(),
                        fixpoint_count_brute(&x, &rdk)?.to_string(),
                    );
                }
            }
        }
        let expect = theta_iwahori(&x, &rd)?;
        match ncharacter_sweep(&family, &x, &Grid::for_family(&family)) {
            Ok(rep) => s.record_eq(format!("{name} character"), &expect, &rep.value),
            Err(err) => s.record_err(format!("{name} character"), err),
        }
    }
    Ok(s.report)
}

fn multiplicative(seed: u64) -> CliResult<Report> {
    let mut s = Suite::new("multiplicative");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for (p, c, lvl, k) in [(3u64, -1i64, 1u32, 3u32), (5, 1, 1, 2), (3, 2, 2, 2)] {
        let cfg = SL2Config::new(p, c, lvl, lvl, 0, k)?;
        for side in [Side::Plus, Side::Minus] {
            let us = sample_units(&mut rng, p, 20);
            for pair in us.chunks(2) {
                let (x, y) = (&pair[0], &pair[1]);
                let lhs =
                    sl2_action_matrix(x, &cfg, side)?.mul(&sl2_action_matrix(y, &cfg, side)?)?;
                let rhs = sl2_action_matrix(&(x * y), &cfg, side)?;
                s.record_true(
                    format!(
                        "sl2 p={p} c={c} {} s={} t={}",
                        side.name(),
                        fmt_rational(x),
                        fmt_rational(y)
                    ),
                    lhs == rhs,
                );
            }
        }
    }
    for (name, rd, _) in root_data() {
        for _ in 0..10 {
            let x = sample_units(&mut rng, rd.p, rd.torus_rank);
            let y = sample_units(&mut rng, rd.p, rd.torus_rank);
            let xy: TorusPoint = x.iter().zip(&y).map(|(u, v)| u * v).collect();
            let lhs = iwahori_action_matrix(&x, &rd)?.mul(&iwahori_action_matrix(&y, &rd)?)?;
            let rhs = iwahori_action_matrix(&xy, &rd)?;
            let txt = |v: &TorusPoint| v.iter().map(fmt_rational).collect::<Vec<_>>().join(",");
            s.record_true(
                format!("{name} s=({}) t=({})", txt(&x), txt(&y)),
                lhs == rhs,
            );
        }
    }
    Ok(s.report)
}

fn threshold() -> CliResult<Report> {
    let mut s = Suite::new("threshold");
    let family = Family::Sl2 { p: 3, c: 0 };
    let a = int(4);
    let stable = inv_abs_p_value(&(pow_i(&a, -2) - ExactScalar::one()), 3)?;
    let rep = ncharacter_sweep(&family, &vec![a], &Grid::for_family(&family))?;
    let below: Vec<_> = rep
        .rows
        .iter()
        .filter(|r| !r.stable && r.component == "plus")
        .collect();
    s.record_true(
        "sl2 p=3 a=4 has grid points below the threshold".into(),
        !below.is_empty(),
    );
    for r in below {
        s.record_true(
            format!(
                "sl2 p=3 a=4 h={} e={} perm value {} differs from {}",
                r.h,
                r.e,
                fmt_rational(&r.perm_value),
                fmt_rational(&stable)
            ),
            r.perm_value != stable,
        );
    }
    let (name, rd, x) = root_data().remove(1);
    let low = rd.with_uniform(0, 2);
    let brute = fixpoint_count_brute(&x, &low)?;
    let stable = fixpoint_count_closed(&x, &rd.with_uniform(2, 2))?;
    s.record_true(
        format!("{name} level 0 fixpoints {brute} differ from stable {stable}"),
        brute != stable,
    );
    Ok(s.report)
}

fn run_one(name: &str, seed: u64) -> CliResult<Report> {
    match name {
        "smooth" => smooth(seed),
        "count-divisible" => count_divisible_suite(),
        "binom" => binom(),
        "snf" => snf(seed),
        "eps" => eps(seed),
        "dominance" => dominance(),
        "straighten" => straighten_suite(seed),
        "sl2" => sl2(),
        "alternating-sums" => alternating_sums(),
        "iwahori" => iwahori(),
        "multiplicative" => multiplicative(seed),
        "threshold" => threshold(),
        other => unreachable!("suite {other} is rejected by the argument parser"),
    }
}

pub fn verify(suite: &str, seed: u64) -> CliResult<Report> {
    if suite == "all" {
        let parts = SUITE_NAMES[1..]
            .iter()
            .map(|n| run_one(n, seed))
            .collect::<CliResult<Vec<_>>>()?;
        Ok(concat("verify", parts))
    } else {
        run_one(suite, seed)
    }
}
