//! Experiment commands behind the `ruelle` binary.
//!
//! Each command builds a [`Report`]; every number in it carries the method
//! that produced it, and the process exit status follows [`Report::passed`].

pub mod config;
pub mod report;
pub mod suite;
pub mod text;

use std::path::PathBuf;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};

use crate::cover::{
    build_cover, count_periodic_via_cover, intersecting_families, verify_cover, zeta_via_cover, CoverGeometry,
    IntersectingFamilies, MarkovCover,
};
use crate::enttool::{entropy_estimate, preimage_entropy_bound, verify_theorem2, EntropyEstimate, SeparatedSets, GRID_GUARD, OVERLAP_TOL};
use crate::exactmat::SignedIntMatrix;
use crate::expmap::circle::frac;
use crate::expmap::{toral_count, CircleMap, ExpandingMap, ShiftMap, ShiftPoint};
use crate::sft::SubshiftOfFiniteType;
use crate::shadow::{shadow_finite, verify_certificate, PseudoOrbit};
use crate::zetafn::{
    check_recurrence, counts_from_zeta, fit_rational_zeta, radius_and_entropy, zeta_from_sft, CountSequence,
    RadiusEntropy, RationalFunction,
};
use crate::{Error, Result};

pub use config::{BuiltMap, ExperimentConfig, MapKind, MapSpec, Params};
pub use report::{Block, Check, Claim, Format, Method, Report, Table};

pub const DEFAULT_ORDER: usize = 10;
/// Largest `k^n` for which the circle enumeration oracle iterates every candidate.
const CIRCLE_ENUM_GUARD: u64 = 1 << 17;
/// Largest `k^n` for the SFT word enumeration.
const WORD_ENUM_GUARD: u64 = 1 << 20;
/// Largest `det(M^n - I)^2` for the torus lattice enumeration.
const LATTICE_GUARD: u64 = 1 << 22;
/// Covers with more rectangles than this are not used for counting.
const COVER_SIZE_GUARD: usize = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Zeta,
    Count,
    Entropy,
    Shadow,
    Cover,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Zeta => "zeta",
            Command::Count => "count",
            Command::Entropy => "entropy",
            Command::Shadow => "shadow",
            Command::Cover => "cover",
        }
    }
}

pub fn run(cmd: Command, cfg: &ExperimentConfig) -> Result<Report> {
    match cmd {
        Command::Zeta => cmd_zeta(cfg),
        Command::Count => cmd_count(cfg),
        Command::Entropy => cmd_entropy(cfg),
        Command::Shadow => cmd_shadow(cfg),
        Command::Cover => cmd_cover(cfg),
    }
}

fn order(cfg: &ExperimentConfig) -> Result<usize> {
    match cfg.params.order.unwrap_or(DEFAULT_ORDER) {
        0 => Err(Error::Config("order must be >= 1".into())),
        n => Ok(n),
    }
}

fn circle_mesh(cfg: &ExperimentConfig, map: &CircleMap) -> Result<BigRational> {
    Ok(cfg
        .mesh()?
        .unwrap_or_else(|| BigRational::new(1.into(), (4 * map.k()).into())))
}

fn shift_mesh(cfg: &ExperimentConfig) -> Result<BigRational> {
    Ok(cfg.mesh()?.unwrap_or_else(|| BigRational::new(1.into(), 16.into())))
}

fn cover_families<M: CoverGeometry + Clone>(map: &M, mesh: &BigRational) -> Result<IntersectingFamilies> {
    let cover = build_cover(map, mesh)?;
    if cover.len() > COVER_SIZE_GUARD {
        return Err(Error::GuardExceeded(format!(
            "cover has {} rectangles, more than {COVER_SIZE_GUARD}",
            cover.len()
        )));
    }
    intersecting_families(&cover)
}

fn cover_counts(fam: &IntersectingFamilies, order: usize) -> Result<Vec<BigInt>> {
    (1..=order as u64).map(|p| count_periodic_via_cover(fam, p)).collect()
}

/// Fixed points of `f^n` found by iterating every `j / (k^n - 1)` exactly.
fn circle_enumeration(map: &CircleMap, n: usize) -> Option<BigInt> {
    let total = (map.k() as u64).checked_pow(n as u32).filter(|&t| t <= CIRCLE_ENUM_GUARD)?;
    let d = BigInt::from(total - 1);
    let hits = (0..total - 1)
        .filter(|&j| {
            let x = BigRational::new(j.into(), d.clone());
            map.iterate(&x, n) == x
        })
        .count();
    Some(hits.into())
}

fn sft_enumeration(s: &SubshiftOfFiniteType, n: usize) -> Option<BigInt> {
    let k = s.alphabet_size() as u64;
    k.checked_pow(n as u32).filter(|&t| t <= WORD_ENUM_GUARD)?;
    s.count_periodic_bruteforce(n as u32).ok().map(BigInt::from)
}

/// Solutions of `(M^n - I) x = 0 mod 1`, all of which lie on the lattice `Z^2 / det(M^n - I)`.
fn lattice_enumeration(m: &SignedIntMatrix, n: usize) -> Option<BigInt> {
    let p = m.pow(n as u64).sub(&SignedIntMatrix::identity(2));
    let d = p.det().abs().to_u64().filter(|&d| d > 0)?;
    d.checked_mul(d).filter(|&dd| dd <= LATTICE_GUARD)?;
    let e = p.to_i64_rows()?;
    let (d, e) = (d as i128, e.iter().map(|r| [r[0] as i128, r[1] as i128]).collect::<Vec<_>>());
    let mut hits = 0u64;
    for a in 0..d {
        for b in 0..d {
            if (e[0][0] * a + e[0][1] * b) % d == 0 && (e[1][0] * a + e[1][1] * b) % d == 0 {
                hits += 1;
            }
        }
    }
    Some(hits.into())
}

type Column = (String, Vec<Option<BigInt>>);

fn column(method: Method, what: &str, values: Vec<Option<BigInt>>) -> Column {
    (format!("{}:{what}", method.tag()), values)
}

/// Adds the side-by-side table and an agreement check; missing cells are skipped.
fn count_table(rep: &mut Report, name: &str, cols: Vec<Column>) {
    let order = cols.iter().map(|c| c.1.len()).max().unwrap_or(0);
    let mut rows = Vec::new();
    let mut bad = Vec::new();
    for n in 1..=order {
        let cells: Vec<Option<&BigInt>> = cols.iter().map(|c| c.1.get(n - 1).and_then(Option::as_ref)).collect();
        let present: Vec<&BigInt> = cells.iter().flatten().copied().collect();
        if present.windows(2).any(|w| w[0] != w[1]) {
            bad.push(n.to_string());
        }
        let mut row = vec![n.to_string()];
        row.extend(cells.iter().map(|c| c.map_or("-".to_string(), BigInt::to_string)));
        rows.push(row);
    }
    let mut columns = vec!["n".to_string()];
    columns.extend(cols.iter().map(|c| c.0.clone()));
    let methods: Vec<&str> = cols.iter().map(|c| c.0.as_str()).collect();
    rep.tables.push(Table {
        name: name.into(),
        columns,
        rows,
    });
    if bad.is_empty() {
        rep.check("counts-agree", true, methods.join(" = "));
    } else {
        rep.check("counts-agree", false, format!("disagree at n = {}", bad.join(", ")));
    }
}

fn some(v: Vec<BigInt>) -> Vec<Option<BigInt>> {
    v.into_iter().map(Some).collect()
}

fn radius_claims(rep: &mut Report, zeta: &RationalFunction, method: Method) -> Result<()> {
    match radius_and_entropy(zeta)? {
        RadiusEntropy::NoPoles => {
            rep.claim("rho", method, "inf");
            rep.claim("periodic_entropy", method, "0");
        }
        RadiusEntropy::Pole {
            rho,
            rho_lower,
            rho_upper,
            periodic_entropy,
            ..
        } => {
            rep.claim("rho", method, format!("{rho:.12} [{rho_lower:.12}, {rho_upper:.12}]"));
            rep.claim("periodic_entropy", method, format!("{periodic_entropy:.12}"));
        }
    }
    Ok(())
}

pub fn cmd_zeta(cfg: &ExperimentConfig) -> Result<Report> {
    let built = cfg.build()?;
    let order = order(cfg)?;
    let mut rep = Report::new("zeta", built.label());
    let (zeta, method, direct) = match &built {
        BuiltMap::Sft(s) => {
            let z = zeta_from_sft(s.transition())?;
            (z, Method::Trace, column(Method::Trace, "N_n", some(s.trace_counts(order))))
        }
        BuiltMap::Circle(map) => {
            let mesh = circle_mesh(cfg, map)?;
            let fam = cover_families(map, &mesh)?;
            let z = zeta_via_cover(&fam)?;
            let direct = (1..=order).map(|n| circle_enumeration(map, n)).collect();
            (z, Method::Cover, column(Method::Bruteforce, "N_n", direct))
        }
        BuiltMap::Toral(m, _) => {
            let counts = (1..=order as u64).map(|n| toral_count(m, n)).collect::<Result<Vec<_>>>()?;
            let seq = CountSequence::new(counts.clone())?;
            let z = fit_rational_zeta(&seq)?;
            rep.check("recurrence", check_recurrence(&seq, &z), "fit reproduces every toral count");
            (z, Method::Toral, column(Method::Toral, "N_n", some(counts)))
        }
    };
    rep.claim("zeta", method, &zeta);
    rep.claim("zeta_coefficients", method, zeta.to_text());
    radius_claims(&mut rep, &zeta, method)?;
    let from_zeta = counts_from_zeta(&zeta, order)?;
    let cols = vec![column(method, "zeta_N_n", some(from_zeta.counts().to_vec())), direct];
    count_table(&mut rep, "periodic counts", cols);
    Ok(rep)
}

pub fn cmd_count(cfg: &ExperimentConfig) -> Result<Report> {
    let built = cfg.build()?;
    let order = order(cfg)?;
    let mut rep = Report::new("count", built.label());
    let mut cols = Vec::new();
    match &built {
        BuiltMap::Sft(s) => {
            cols.push(column(Method::Trace, "N_n", some(s.trace_counts(order))));
            cols.push(column(
                Method::Bruteforce,
                "N_n",
                (1..=order).map(|n| sft_enumeration(s, n)).collect(),
            ));
            let map = built.shift_map()?;
            match cover_families(&map, &shift_mesh(cfg)?) {
                Ok(fam) => cols.push(column(Method::Cover, "N_n", some(cover_counts(&fam, order)?))),
                Err(Error::GuardExceeded(msg)) => rep.notes.push(format!("cover skipped: {msg}")),
                Err(e) => return Err(e),
            }
        }
        BuiltMap::Circle(map) => {
            cols.push(column(
                Method::Bruteforce,
                "N_n",
                (1..=order).map(|n| circle_enumeration(map, n)).collect(),
            ));
            let fam = cover_families(map, &circle_mesh(cfg, map)?)?;
            cols.push(column(Method::Cover, "N_n", some(cover_counts(&fam, order)?)));
        }
        BuiltMap::Toral(m, _) => {
            let det = (1..=order as u64).map(|n| toral_count(m, n)).collect::<Result<Vec<_>>>()?;
            cols.push(column(Method::Toral, "N_n", some(det)));
            cols.push(column(
                Method::Bruteforce,
                "N_n",
                (1..=order).map(|n| lattice_enumeration(m, n)).collect(),
            ));
        }
    }
    count_table(&mut rep, "periodic counts", cols);
    Ok(rep)
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

struct EntropyInputs<'a, M: SeparatedSets> {
    map: &'a M,
    counts: Vec<BigInt>,
    count_method: Method,
    n_max: usize,
    eps: BigRational,
    samples: Vec<M::Point>,
}

fn entropy_report<M: SeparatedSets>(rep: &mut Report, inp: EntropyInputs<'_, M>) -> Result<EntropyEstimate> {
    let ns: Vec<usize> = (1..=inp.n_max).collect();
    let est = entropy_estimate(inp.map, &ns, std::slice::from_ref(&inp.eps))?;
    let counts = CountSequence::new(inp.counts)?;
    let t2 = verify_theorem2(inp.map, &counts, &est)?;
    let cm = inp.count_method;
    rep.claim("eps", Method::Estimate, &inp.eps);
    rep.claim(
        "entropy",
        Method::Estimate,
        format!("{:.6} [{:.6}, {:.6}]", est.value, est.lower, est.upper),
    );
    rep.claim("periodic_slope", cm, format!("{:.6}", t2.periodic_slope));
    rep.claim("sandwich_constant", Method::Estimate, format!("{:.6}", t2.sandwich_constant));
    let opt = |x: &Option<BigInt>| x.as_ref().map_or("-".to_string(), BigInt::to_string);
    rep.tables.push(Table {
        name: "growth".into(),
        columns: vec![
            "n".into(),
            format!("{}:N_n", cm.tag()),
            "estimate:lower_s_n".into(),
            "estimate:upper_s_n".into(),
            format!("{}:log_slope", cm.tag()),
        ],
        rows: t2
            .rows
            .iter()
            .map(|r| {
                vec![
                    r.n.to_string(),
                    r.count.to_string(),
                    opt(&r.lower_s_n),
                    opt(&r.upper_s_n),
                    r.log_slope.map_or("-".to_string(), |v| format!("{v:.6}")),
                ]
            })
            .collect(),
    });
    rep.check(
        "overlap",
        t2.overlap,
        format!(
            "slope {:.6} vs [{:.6}, {:.6}] at relative tolerance {:.4}",
            t2.periodic_slope, t2.entropy_lower, t2.entropy_upper, t2.tolerance
        ),
    );
    rep.check("sandwich", t2.sandwich, format!("C = {:.6}", t2.sandwich_constant));
    if let Some(s) = t2.submultiplicative {
        rep.check("submultiplicative", s, "");
    }
    let bound = preimage_entropy_bound(inp.map, &inp.samples)?;
    rep.claim("preimage_bound", Method::Estimate, format!("{bound:.6}"));
    rep.check(
        "preimage-bound",
        bound >= est.lower - 1e-9,
        format!("{bound:.6} >= {:.6}", est.lower),
    );
    Ok(est)
}

/// Largest `n <= 12` whose default grid fits the enumeration guard.
fn circle_default_n_max(map: &CircleMap, eps: &BigRational) -> Result<usize> {
    let mut n = 1;
    while n < 12 && map.default_grid(n + 1, eps)?.map_or(true, |g| g as usize <= GRID_GUARD) {
        n += 1;
    }
    Ok(n)
}

pub fn cmd_entropy(cfg: &ExperimentConfig) -> Result<Report> {
    let built = cfg.build()?;
    let mut rep = Report::new("entropy", built.label());
    let eps = cfg.eps()?;
    match &built {
        BuiltMap::Sft(s) => {
            let map = built.shift_map()?;
            let n_max = cfg.params.n_max.unwrap_or(12);
            let samples = (0..s.alphabet_size()).filter_map(|a| map.extend_word(&[a]).ok()).collect();
            let est = entropy_report(
                &mut rep,
                EntropyInputs {
                    map: &map,
                    counts: s.trace_counts(n_max),
                    count_method: Method::Trace,
                    n_max,
                    eps: eps.unwrap_or_else(|| q(1, 1)),
                    samples,
                },
            )?;
            match s.sft_entropy() {
                Ok(h) => {
                    rep.claim(
                        "perron_entropy",
                        Method::Perron,
                        format!("{:.6} [{:.9}, {:.9}]", h.value, h.lower, h.upper),
                    );
                    let tol = OVERLAP_TOL * h.value.abs().max(1e-3);
                    rep.check(
                        "perron-consistent",
                        est.contains(h.value, tol),
                        format!("{:.6} within {tol:.2e} of the estimate", h.value),
                    );
                }
                Err(Error::Reducible) => rep.notes.push("perron bracket skipped: reducible matrix".into()),
                Err(e) => return Err(e),
            }
        }
        BuiltMap::Circle(map) => {
            let eps = eps.unwrap_or_else(|| q(1, 64));
            let n_max = match cfg.params.n_max {
                Some(n) => n,
                None => circle_default_n_max(map, &eps)?,
            };
            let fam = cover_families(map, &circle_mesh(cfg, map)?)?;
            entropy_report(
                &mut rep,
                EntropyInputs {
                    map,
                    counts: cover_counts(&fam, n_max)?,
                    count_method: Method::Cover,
                    n_max,
                    eps,
                    samples: vec![q(0, 1), q(1, 3), q(1, 7), q(2, 5)],
                },
            )?;
        }
        BuiltMap::Toral(m, t) => {
            let map = t.as_ref().ok_or_else(|| {
                Error::NotExpanding("entropy estimates need an expanding toral matrix".into())
            })?;
            let n_max = cfg.params.n_max.unwrap_or(8);
            let counts = (1..=n_max as u64).map(|n| toral_count(m, n)).collect::<Result<Vec<_>>>()?;
            entropy_report(
                &mut rep,
                EntropyInputs {
                    map,
                    counts,
                    count_method: Method::Toral,
                    n_max,
                    eps: eps.unwrap_or_else(|| q(1, 8)),
                    samples: vec![[q(0, 1), q(0, 1)], [q(1, 3), q(1, 5)], [q(1, 2), q(1, 7)]],
                },
            )?;
        }
    }
    Ok(rep)
}

fn shadow_report<M: ExpandingMap>(
    rep: &mut Report,
    map: &M,
    points: Vec<M::Point>,
    beta: Option<f64>,
    show: impl Fn(&M::Point) -> String,
) -> Result<()> {
    let po = PseudoOrbit::measured(map, points)?;
    let alpha = po.alpha();
    let lambda = map.constants().lambda;
    let beta = beta.unwrap_or_else(|| (alpha * lambda / (0.99 * (1.0 - lambda)) * 1.01).max(1e-9));
    let cert = shadow_finite(map, &po, beta)?;
    rep.claim("alpha", Method::Shadow, format!("{alpha:.6e}"));
    rep.claim("beta", Method::Shadow, format!("{beta:.6e}"));
    rep.claim("shadow", Method::Shadow, show(&cert.shadow));
    rep.claim("max_error", Method::Shadow, format!("{:.6e}", cert.max_error()));
    let orbit = map.orbit(&cert.shadow, po.len() - 1);
    rep.tables.push(Table {
        name: "certificate".into(),
        columns: vec!["i".into(), "pseudo".into(), "shadow:orbit".into(), "shadow:error".into()],
        rows: (0..po.len())
            .map(|i| {
                vec![
                    i.to_string(),
                    show(&po.points()[i]),
                    show(&orbit[i]),
                    format!("{:.6e}", cert.errors[i]),
                ]
            })
            .collect(),
    });
    rep.check("certificate", verify_certificate(map, &po, &cert), "orbit re-run against the pseudo-orbit");
    rep.check(
        "errors-below-beta",
        cert.errors.iter().all(|&e| e < beta),
        format!("max {:.3e} < {beta:.3e}", cert.max_error()),
    );
    Ok(())
}

fn orbit_path(cfg: &ExperimentConfig) -> Result<PathBuf> {
    cfg.orbit_path()
        .ok_or_else(|| Error::Config("shadow needs params.orbit or --orbit".into()))
}

pub fn cmd_shadow(cfg: &ExperimentConfig) -> Result<Report> {
    let built = cfg.build()?;
    let path = orbit_path(cfg)?;
    let text = std::fs::read_to_string(&path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let mut rep = Report::new("shadow", built.label());
    let beta = cfg.params.beta;
    match &built {
        BuiltMap::Circle(map) => {
            let pts = text::parse_circle_points(&text)?.iter().map(frac).collect();
            shadow_report(&mut rep, map, pts, beta, |x| x.to_string())?;
        }
        BuiltMap::Toral(_, t) => {
            let map = t
                .as_ref()
                .ok_or_else(|| Error::NotExpanding("shadowing needs an expanding toral matrix".into()))?;
            let pts = text::parse_torus_points(&text)?
                .iter()
                .map(|[x, y]| [frac(x), frac(y)])
                .collect();
            shadow_report(&mut rep, map, pts, beta, text::format_torus)?;
        }
        BuiltMap::Sft(_) => {
            let map = built.shift_map()?;
            let pts = text::parse_shift_points(&text)?
                .into_iter()
                .map(|p| map.point(p.prefix().to_vec(), p.cycle().to_vec()))
                .collect::<Result<Vec<ShiftPoint>>>()?;
            shadow_report(&mut rep, &map, pts, beta, |p| p.to_string())?;
        }
    }
    Ok(rep)
}

fn cover_report<M: CoverGeometry + Clone>(rep: &mut Report, cover: MarkovCover<M>, order: usize) {
    let v = verify_cover(&cover);
    rep.claim("rectangles", Method::Cover, cover.len());
    rep.claim(
        "max_diameter",
        Method::Cover,
        format!("{:.6e} (bound {:.6e})", v.max_diameter, v.diameter_bound),
    );
    rep.blocks.push(Block {
        name: "cover".into(),
        text: cover.to_text(),
    });
    for (name, ok) in v.checks() {
        rep.check(format!("cover-{name}"), ok, "");
    }
    let fam = match intersecting_families(&cover) {
        Ok(f) => f,
        Err(e) => {
            rep.check("families", false, e.to_string());
            return;
        }
    };
    rep.claim("max_order", Method::Cover, fam.max_order());
    rep.blocks.push(Block {
        name: "families".into(),
        text: fam.to_text(),
    });
    match zeta_via_cover(&fam) {
        Ok(z) => {
            rep.claim("zeta", Method::Cover, &z);
            rep.check("zeta-consistent", true, "");
        }
        Err(e) => rep.check("zeta-consistent", false, e.to_string()),
    }
    let counts: Vec<String> = (1..=order as u64)
        .map(|p| count_periodic_via_cover(&fam, p).map_or_else(|e| e.to_string(), |c| c.to_string()))
        .collect();
    rep.claim("counts", Method::Cover, counts.join(" "));
}

pub fn cmd_cover(cfg: &ExperimentConfig) -> Result<Report> {
    let built = cfg.build()?;
    let order = cfg.params.order.unwrap_or(6);
    let mut rep = Report::new("cover", built.label());
    match &built {
        BuiltMap::Circle(map) => {
            let mesh = circle_mesh(cfg, map)?;
            cover_report(&mut rep, MarkovCover::from_rects(map, map.uniform_rects(&mesh)?)?, order);
        }
        BuiltMap::Sft(_) => {
            let map: ShiftMap = built.shift_map()?;
            let mesh = shift_mesh(cfg)?;
            cover_report(&mut rep, MarkovCover::from_rects(&map, map.uniform_rects(&mesh)?)?, order);
        }
        BuiltMap::Toral(..) => {
            return Err(Error::Config("covers are implemented for circle and sft maps only".into()));
        }
    }
    Ok(rep)
}

/// Runs the acceptance suite as a report with one check per criterion.
pub fn cmd_verify(seed: u64) -> Report {
    let results = suite::run_suite(seed);
    let mut rep = Report::new("verify", "built-in suite".into());
    rep.tables.push(Table {
        name: "criteria".into(),
        columns: vec!["id".into(), "title".into(), "pass".into()],
        rows: results
            .iter()
            .map(|r| vec![r.id.to_string(), r.title.to_string(), r.pass.to_string()])
            .collect(),
    });
    for r in &results {
        rep.notes.push(format!("criterion {} took {:.2}s", r.id, r.seconds));
        rep.check(format!("criterion-{}", r.id), r.pass, r.detail.clone());
    }
    rep
}
