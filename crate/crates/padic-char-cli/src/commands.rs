//! The single-computation subcommands.

use std::fs::File;
use std::io::BufReader;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;

use padic_char::dist_algebra::binom_identity_checks;
use padic_char::dist_algebra::{
    amice_class_check, epsilon_r, log_series, norm_and_dominant, normal_form_words,
    oracle_canonical, straighten, subgroup_expansion_dominance, AmiceClass, AmiceRule, EnvElement,
    LieData, NormParams, Token, Word,
};
use padic_char::formal_characters::{
    smooth_trace, smooth_trace_inverted_closed, smooth_trace_standard_closed, Covering, TorusPoint,
};
use padic_char::linalg::QMatrix;
use padic_char::padic_core::{
    fmt_rational, int, p_pow, parse_pexponent, parse_rational, ExactScalar, PContext,
};
use padic_char::principal_series::{
    ncharacter_sweep, sl2_partial_closed_form, sl2_trace, theta_iwahori, theta_sl2, Family, Grid,
    RootDatum, SL2Config, Side, SweepReport,
};
use padic_char::pro_p_groups::{
    bracket_depth, heisenberg_basis, is_powerful, mat_exp, p_elementary_divisors, uniform_defect,
    unitriangular_lattice, PLattice, UnipotentMatrix,
};

use crate::args::*;
use crate::report::Report;

/// Why a command did not succeed.
#[derive(Debug)]
pub enum CliError {
    /// Invalid parameters: exit status 2.
    Usage(String),
    /// A computation could not be carried out: exit status 1.
    Failed(String),
}

impl From<padic_char::Error> for CliError {
    fn from(e: padic_char::Error) -> Self {
        use padic_char::Error::*;
        match e {
            Domain(_) | Parse(_) | NotRegular(_) => CliError::Usage(e.to_string()),
            _ => CliError::Failed(e.to_string()),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

pub fn rational(s: &str) -> CliResult<ExactScalar> {
    Ok(parse_rational(s)?)
}

pub fn point(coords: &[String]) -> CliResult<TorusPoint> {
    coords.iter().map(|c| rational(c)).collect()
}

fn read_json<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    let f = File::open(path)
        .map_err(|e| CliError::Usage(format!("cannot open {}: {e}", path.display())))?;
    serde_json::from_reader(BufReader::new(f))
        .map_err(|e| CliError::Usage(format!("invalid JSON in {}: {e}", path.display())))
}

fn read_lattice(path: &Path) -> CliResult<PLattice> {
    let lat: PLattice = read_json(path)?;
    lat.validate()?;
    Ok(lat)
}

fn read_datum(path: &Path) -> CliResult<RootDatum> {
    let rd: RootDatum = read_json(path)?;
    rd.validate()?;
    Ok(rd)
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

pub fn smooth_trace_cmd(a: &SmoothTraceArgs) -> CliResult<Report> {
    let s = rational(&a.s)?;
    let (covering, name) = match a.covering {
        CoveringArg::Standard => (Covering::Standard, "standard"),
        CoveringArg::Inverted => (Covering::Inverted, "inverted"),
    };
    let brute = smooth_trace(a.p, a.h, &s, covering)?;
    let closed = match covering {
        Covering::Standard => smooth_trace_standard_closed(a.p, a.h, &s),
        Covering::Inverted => smooth_trace_inverted_closed(a.p, a.h, &s),
    };
    let mut r = Report::scalar(
        "smooth-trace",
        &["p", "h", "s", "covering", "trace", "closed_form"],
        vec![
            a.p.to_string(),
            a.h.to_string(),
            fmt_rational(&s),
            name.into(),
            brute.to_string(),
            closed.to_string(),
        ],
        brute.to_string(),
    );
    r.check(
        "trace = closed form",
        &closed.to_string(),
        &brute.to_string(),
    );
    Ok(r)
}

pub fn eps_r_cmd(a: &EpsArgs, trunc: u32) -> CliResult<Report> {
    let ctx = PContext::new(a.p)?;
    let (base, e) = parse_pexponent(&a.r)?;
    if base != a.p {
        return Err(CliError::Usage(format!(
            "radius {} is not a power of p = {}",
            a.r, a.p
        )));
    }
    let q = -e.q;
    let (k, eps) = epsilon_r(&q, ctx)?;
    // The dominant index of log(1 + b) for the norm with r^κ.
    let scaled = NormParams::unchecked(a.p, vec![int(ctx.kappa as i64) * &q]);
    let rep = norm_and_dominant(&log_series(), &scaled, trunc)?;
    let dominant = match (&rep.dominant, rep.boundary) {
        (_, true) => "boundary".to_string(),
        (Some(d), false) => join(d),
        (None, false) => "none".to_string(),
    };
    let mut r = Report::scalar(
        "eps-r",
        &["p", "r", "k", "eps", "log_dominant"],
        vec![
            a.p.to_string(),
            a.r.clone(),
            k.to_string(),
            eps.to_string(),
            dominant.clone(),
        ],
        eps.to_string(),
    );
    if !rep.boundary {
        r.check(
            "dominant index of log(1+b) = ε(r)",
            &eps.to_string(),
            &dominant,
        );
    }
    Ok(r)
}

pub fn snf_cmd(a: &SnfArgs) -> CliResult<Report> {
    let lam = read_lattice(&a.lattice)?;
    let sub = read_lattice(&a.sublattice)?;
    if lam.p != sub.p {
        return Err(CliError::Usage("lattices use different primes".into()));
    }
    let d = p_elementary_divisors(&lam, &sub)?;
    let defect = uniform_defect(&d, lam.rank())
        .map(|x| x.to_string())
        .unwrap_or_else(|_| "n/a".into());
    let mut r = Report::new("snf", &["p", "divisors", "uniform_defect"]);
    r.push(vec![lam.p.to_string(), join(&d.0), defect]);
    Ok(r)
}

pub fn powerful_cmd(a: &PowerfulArgs, trunc: u32) -> CliResult<Report> {
    let lam = match (&a.source.lattice, &a.source.unitriangular) {
        (Some(path), _) => read_lattice(path)?,
        (None, Some(e)) => {
            if e.len() != 3 {
                return Err(CliError::Usage("--unitriangular takes a12,a13,a23".into()));
            }
            let p =
                a.p.ok_or_else(|| CliError::Usage("--unitriangular needs --p".into()))?;
            let lat = unitriangular_lattice(p, e[0], e[1], e[2]);
            lat.validate()?;
            lat
        }
        (None, None) => return Err(CliError::Usage("no lattice given".into())),
    };
    let powerful = is_powerful(&lam)?;
    let depth = match &lam.bracket {
        Some(_) => bracket_depth(&lam, trunc)?.to_string(),
        None => "n/a".into(),
    };
    Ok(Report::scalar(
        "powerful",
        &["p", "powerful", "bracket_depth"],
        vec![lam.p.to_string(), powerful.to_string(), depth],
        powerful.to_string(),
    ))
}

pub fn binom_cmd(a: &BinomArgs) -> CliResult<Report> {
    if !padic_char::padic_core::is_prime(a.p) {
        return Err(CliError::Usage(format!("{} is not a prime", a.p)));
    }
    let v = binom_identity_checks(a.a, a.b, a.c, a.d, a.h, a.p);
    let claim_i = v.claim_i.map_or("n/a".to_string(), |c| c.to_string());
    let mut r = Report::new(
        "binom-id",
        &[
            "a", "b", "c", "d", "h", "p", "sum_i", "claim_i", "sum_ii", "claim_ii",
        ],
    );
    r.push(vec![
        a.a.to_string(),
        a.b.to_string(),
        a.c.to_string(),
        a.d.to_string(),
        a.h.to_string(),
        a.p.to_string(),
        v.sum_i.to_string(),
        claim_i.clone(),
        v.sum_ii.to_string(),
        v.claim_ii.to_string(),
    ]);
    if v.claim_i == Some(false) {
        r.check("claim (i)", "true", "false");
    }
    r.check("claim (ii)", "true", &v.claim_ii.to_string());
    Ok(r)
}

pub fn dominance_cmd(a: &DominanceArgs, trunc: u32) -> CliResult<Report> {
    let q: Vec<ExactScalar> = a.q.iter().map(|x| rational(x)).collect::<CliResult<_>>()?;
    let norm = NormParams::new(a.p, q)?;
    let rep = subgroup_expansion_dominance(&a.beta, &a.gamma, &norm, trunc)?;
    let mut r = Report::new(
        "dominance",
        &[
            "beta",
            "gamma",
            "s_beta",
            "t_at_s_beta",
            "unit",
            "violations",
            "checked",
        ],
    );
    r.push(vec![
        join(&a.beta),
        join(&a.gamma),
        join(&rep.s_beta),
        rep.t_at_s_beta.to_string(),
        rep.unit_at_s_beta.to_string(),
        rep.violations.len().to_string(),
        rep.checked.to_string(),
    ]);
    r.check("S_β strictly dominates", "true", &rep.holds().to_string());
    Ok(r)
}

pub fn amice_cmd(a: &AmiceArgs, trunc: u32) -> CliResult<Report> {
    let rule = match (&a.rule, &a.rule_file) {
        (Some(name), None) => AmiceRule::from_name(name)?,
        (None, Some(path)) => {
            let raw: Vec<Option<String>> = read_json(path)?;
            AmiceRule::Table(
                raw.iter()
                    .map(|v| v.as_deref().map(rational).transpose())
                    .collect::<CliResult<_>>()?,
            )
        }
        _ => {
            return Err(CliError::Usage(
                "give exactly one of --rule, --rule-file".into(),
            ))
        }
    };
    let lambda = || -> CliResult<ExactScalar> {
        rational(
            a.lambda
                .as_deref()
                .ok_or_else(|| CliError::Usage("this class needs --lambda".into()))?,
        )
    };
    let class = match a.class {
        ClassArg::Cr => AmiceClass::Cr { lambda: lambda()? },
        ClassArg::CrPlus => AmiceClass::CrPlus { lambda: lambda()? },
        ClassArg::Holomorphic => AmiceClass::Holomorphic {
            h: a.class_h
                .ok_or_else(|| CliError::Usage("the holomorphic class needs --class-h".into()))?,
        },
    };
    let v = amice_class_check(&rule, a.p, a.h, &class, u64::from(trunc))?;
    let windows = v
        .windows
        .iter()
        .map(|(lo, hi, n, m)| {
            let at = n.map_or("-".to_string(), |n| n.to_string());
            let val = m.as_ref().map_or("inf".to_string(), fmt_rational);
            format!("[{lo},{hi}):{at}={val}")
        })
        .collect::<Vec<_>>()
        .join(" ");
    Ok(Report::scalar(
        "amice",
        &["member", "n_max", "threshold", "windows"],
        vec![
            v.member.to_string(),
            v.n_max.to_string(),
            v.threshold.map_or("-".into(), |t| t.to_string()),
            windows,
        ],
        v.member.to_string(),
    ))
}

/// `Exp(p^m (x_s + x_{s+2}))` for the three Heisenberg generators.
pub fn heisenberg_groups(p: u64, m: u32) -> CliResult<Vec<UnipotentMatrix>> {
    let basis = heisenberg_basis();
    let f = ExactScalar::from_integer(p_pow(p, m));
    (0..3)
        .map(|s| {
            let x: QMatrix = basis[s].scale(&f).add(&basis[(s + 2) % 3].scale(&f));
            Ok(mat_exp(&x)?)
        })
        .collect()
}

fn parse_word(s: &str) -> CliResult<Word> {
    s.split_whitespace()
        .map(|t| {
            let (kind, idx) = t.split_at(1);
            let i: usize = idx
                .parse()
                .ok()
                .filter(|&i| (1..=3).contains(&i))
                .ok_or_else(|| CliError::Usage(format!("bad letter {t:?} (use x1..x3, d1..d3)")))?;
            match kind {
                "x" => Ok(Token::X(i - 1)),
                "d" => Ok(Token::D(i - 1)),
                _ => Err(CliError::Usage(format!(
                    "bad letter {t:?} (use x1..x3, d1..d3)"
                ))),
            }
        })
        .collect()
}

fn fmt_word(w: &Word) -> String {
    w.iter()
        .map(|t| match t {
            Token::X(j) => format!("x{}", j + 1),
            Token::D(s) => format!("d{}", s + 1),
        })
        .collect::<Vec<_>>()
        .join(" ")
}

/// Random word: `k1` Lie letters in the first segment followed by `d1 d2 d3`.
pub fn random_word(rng: &mut ChaCha8Rng, k1: usize) -> Word {
    let mut w: Word = (0..k1).map(|_| Token::X(rng.gen_range(0..3))).collect();
    w.extend([Token::D(0), Token::D(1), Token::D(2)]);
    w
}

/// Straightens each word and compares with the oracle; one row per word.
pub fn straighten_words(
    report: &mut Report,
    p: u64,
    m: u32,
    k2: u32,
    words: &[Word],
) -> CliResult<()> {
    let lie = LieData::new(heisenberg_basis())?;
    let groups = heisenberg_groups(p, m)?;
    let d = lie.dim() as u32;
    for w in words {
        let case = fmt_word(w);
        let mut e = EnvElement::new(lie.clone(), groups.clone());
        e.add_word(w.clone(), int(1))?;
        let rep = straighten(&e, k2)?;
        let lhs = oracle_canonical(&lie, &groups, &e.terms)?;
        let rhs = oracle_canonical(&lie, &groups, &normal_form_words(&rep.normal_form))?;
        let degree_ok = rep.low_part.is_empty() && rep.min_degree.map_or(true, |x| x >= d * k2);
        report.push(vec![
            case.clone(),
            rep.normal_form.len().to_string(),
            rep.min_degree.map_or("-".into(), |x| x.to_string()),
            rep.remainder_vanished.to_string(),
            degree_ok.to_string(),
            (lhs == rhs).to_string(),
        ]);
        report.check(
            format!("{case}: terminated"),
            "true",
            &rep.remainder_vanished.to_string(),
        );
        report.check(
            format!("{case}: degree ≥ {}", d * k2),
            "true",
            &degree_ok.to_string(),
        );
        report.check(format!("{case}: oracle"), "true", &(lhs == rhs).to_string());
    }
    Ok(())
}

pub const STRAIGHTEN_COLUMNS: [&str; 6] = [
    "word",
    "terms",
    "min_degree",
    "terminated",
    "degree_ok",
    "oracle_agrees",
];

pub fn straighten_cmd(a: &StraightenArgs, seed: u64) -> CliResult<Report> {
    if !padic_char::padic_core::is_prime(a.p) {
        return Err(CliError::Usage(format!("{} is not a prime", a.p)));
    }
    let words = match &a.word {
        Some(w) => vec![parse_word(w)?],
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..a.words).map(|_| random_word(&mut rng, a.k1)).collect()
        }
    };
    let mut r = Report::new("straighten", &STRAIGHTEN_COLUMNS);
    straighten_words(&mut r, a.p, a.m, a.k2, &words)?;
    Ok(r)
}

pub fn sl2_trace_cmd(a: &Sl2TraceArgs) -> CliResult<Report> {
    let x = rational(&a.point.a)?;
    let cfg = SL2Config::new(a.point.p, a.point.c, a.h, a.h, a.e, a.k)?;
    let sides = match a.side {
        SideArg::Plus => vec![Side::Plus],
        SideArg::Minus => vec![Side::Minus],
        SideArg::Both => vec![Side::Plus, Side::Minus],
    };
    let mut r = Report::new("sl2-trace", &["side", "trace", "closed_form"]);
    for side in sides {
        let t = fmt_rational(&sl2_trace(&x, &cfg, side)?);
        let c = fmt_rational(&sl2_partial_closed_form(&x, &cfg, side)?);
        r.push(vec![side.name().into(), t.clone(), c.clone()]);
        r.check(format!("{} trace", side.name()), &c, &t);
    }
    Ok(r)
}

pub fn sl2_theta_cmd(a: &Sl2ThetaArgs) -> CliResult<Report> {
    let x = rational(&a.point.a)?;
    let (p, c) = (a.point.p, a.point.c);
    let (method, value) = match a.method {
        MethodArg::Formula => ("formula", theta_sl2(p, &x, c)?),
        MethodArg::Pipeline => {
            let family = Family::Sl2 { p, c };
            let grid = Grid::for_family(&family);
            (
                "pipeline",
                ncharacter_sweep(&family, &vec![x.clone()], &grid)?.value,
            )
        }
    };
    let v = fmt_rational(&value);
    Ok(Report::scalar(
        "sl2-theta",
        &["p", "c", "a", "method", "value"],
        vec![
            p.to_string(),
            c.to_string(),
            fmt_rational(&x),
            method.into(),
            v.clone(),
        ],
        v,
    ))
}

pub fn iwahori_theta_cmd(a: &IwahoriThetaArgs) -> CliResult<Report> {
    let rd = read_datum(&a.datum)?;
    let s = point(&a.s)?;
    let (method, value) = match a.method {
        MethodArg::Formula => ("formula", theta_iwahori(&s, &rd)?),
        MethodArg::Pipeline => {
            let family = Family::Iwahori(rd);
            let grid = Grid::for_family(&family);
            ("pipeline", ncharacter_sweep(&family, &s, &grid)?.value)
        }
    };
    let v = fmt_rational(&value);
    let s_txt = s.iter().map(fmt_rational).collect::<Vec<_>>().join(",");
    Ok(Report::scalar(
        "iwahori-theta",
        &["s", "method", "value"],
        vec![s_txt, method.into(), v.clone()],
        v,
    ))
}

pub const SWEEP_COLUMNS: [&str; 10] = [
    "h",
    "e",
    "component",
    "stable",
    "traces",
    "closed_forms_match",
    "formal_matches",
    "perm_value",
    "perm_stable_value",
    "value",
];

/// Rows for every grid point, then one summary row per component and the total.
pub fn sweep_rows(report: &mut Report, rep: &SweepReport) {
    for row in &rep.rows {
        let traces = row
            .traces
            .iter()
            .map(|(k, t)| format!("{k}:{}", fmt_rational(t)))
            .collect::<Vec<_>>()
            .join(" ");
        report.push(vec![
            row.h.to_string(),
            row.e.to_string(),
            row.component.clone(),
            row.stable.to_string(),
            traces,
            row.closed_forms_match.to_string(),
            row.formal_matches.to_string(),
            fmt_rational(&row.perm_value),
            fmt_rational(&row.perm_stable_value),
            fmt_rational(&row.value),
        ]);
        let case = format!("h={} e={} {}", row.h, row.e, row.component);
        report.check(
            format!("{case}: traces = closed forms"),
            "true",
            &row.closed_forms_match.to_string(),
        );
        report.check(
            format!("{case}: traces = Θ_k(s)"),
            "true",
            &row.formal_matches.to_string(),
        );
    }
    let summary = rep
        .components
        .iter()
        .map(|(k, v)| (k.clone(), v.clone()))
        .chain(std::iter::once(("total".to_string(), rep.value.clone())));
    for (name, v) in summary {
        let mut row = vec![String::new(); SWEEP_COLUMNS.len()];
        row[2] = name;
        row[3] = format!("threshold {}", rep.threshold);
        row[9] = fmt_rational(&v);
        report.push(row);
    }
}

pub fn sweep_cmd(a: &SweepArgs) -> CliResult<Report> {
    let family = match (&a.family, a.p, a.c) {
        (Some(path), _, _) => {
            let f: Family = read_json(path)?;
            if let Family::Iwahori(rd) = &f {
                rd.validate()?;
            }
            f
        }
        (None, Some(p), Some(c)) => Family::Sl2 { p, c },
        _ => return Err(CliError::Usage("give --family or both --p and --c".into())),
    };
    let s = point(&a.s)?;
    let mut grid = Grid::for_family(&family);
    if let Some(hs) = &a.hs {
        grid.hs = hs.clone();
    }
    if let Some(es) = &a.es {
        grid.es = es.clone();
    }
    if let Some(ks) = &a.ks {
        grid.ks = ks.clone();
    }
    let rep = ncharacter_sweep(&family, &s, &grid)?;
    let mut r = Report::new("sweep", &SWEEP_COLUMNS);
    sweep_rows(&mut r, &rep);
    Ok(r)
}
