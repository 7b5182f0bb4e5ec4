//! Run configuration, orchestration, JSON reports and DOT posets for the CLI.

mod config;
mod poset;

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

pub use config::{parse_elt, parse_matrix, CartanSpec, PairSel, RunConfig, Target, Validated};
pub use poset::{emit_poset, PosetEdge, PosetGraph, PosetNode};

use crate::cache::DiskCache;
use crate::error::{Error, Result};
use crate::flagcoord::{FlagAlgebra, FlagDisjointness, MultiplicativityOutcome, NormalityCheck, SkewDegree};
use crate::hwmod::ModuleStore;
use crate::rootdata::{CartanData, Weight};
use crate::schubert::{Disjointness, FundGeneration, IdealTruncation, NormalityOutcome, PosetReport, SchubertCell};
use crate::uq::Uq;
use crate::verdict::Verdict;
use crate::weyl::{bruhat_leq, lower_interval, WeylElt};

pub const SCHEMA_VERSION: u32 = 1;

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const FAIL: i32 = 1;
    pub const INCONCLUSIVE: i32 = 2;
    pub const CONFIG: i32 = 3;
    /// A computation aborted with an error (truncation overflow, cache I/O, ...).
    pub const ERROR: i32 = 4;
}

#[derive(Clone, Debug, Serialize)]
pub struct Manifest {
    pub config: String,
    pub cartan_label: String,
    pub versions: BTreeMap<String, String>,
    pub cache_keys: BTreeMap<String, String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Witness {
    #[serde(rename = "K")]
    pub k: String,
    pub lambda: Weight,
    pub minor: String,
    pub demazure_route: bool,
    pub ideal_route: Option<bool>,
    pub agree: bool,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, Serialize)]
pub struct RqgPairReport {
    pub pair: String,
    pub disjointness: Verdict,
    pub disjointness_checks: Vec<FlagDisjointness>,
    pub witnesses: Vec<Witness>,
    pub route_disagreements: usize,
    pub ore_generators: Vec<String>,
    pub lambda_bound: i64,
    pub delegated: Vec<String>,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, Serialize)]
pub struct MultiplicativityReport {
    pub pair: String,
    /// The factored form is forced when lower = upper.
    pub expected_factored: bool,
    pub outcomes: Vec<MultiplicativityOutcome>,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, Serialize)]
pub struct RqgSection {
    pub lambda_bound: i64,
    pub skew_degrees: Vec<SkewDegree>,
    pub normality: Vec<NormalityCheck>,
    pub pairs: Vec<RqgPairReport>,
    pub multiplicativity: Vec<MultiplicativityReport>,
}

#[derive(Clone, Debug, Serialize)]
pub struct IdealSummary {
    pub u: String,
    pub lambda_bound: i64,
    pub stabilized_at: Option<i64>,
    /// Nonzero component dimensions keyed by degree.
    pub dims: BTreeMap<String, usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct UwPairReport {
    pub pair: String,
    pub disjointness: Verdict,
    pub disjointness_checks: Vec<Disjointness>,
    pub witnesses: Vec<Witness>,
    pub route_disagreements: usize,
    pub ore_generators: Vec<String>,
    pub matches_upper_ore_set: bool,
    pub stabilized_at: BTreeMap<String, Option<i64>>,
    pub delegated: Vec<String>,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, Serialize)]
pub struct UwSection {
    pub word: String,
    pub cutoff: i64,
    pub ideals: Vec<IdealSummary>,
    pub poset_check: PosetReport,
    pub normality: Vec<NormalityOutcome>,
    pub fund_generation: Vec<FundGeneration>,
    pub pairs: Vec<UwPairReport>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub manifest: Manifest,
    pub verdict: Verdict,
    /// Worst verdict per check family.
    pub checks: BTreeMap<String, Verdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rqg: Option<RqgSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub uw: Option<UwSection>,
    pub poset: PosetGraph,
    /// Wall-clock seconds per phase; the only nondeterministic field.
    pub timings: BTreeMap<String, f64>,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        match self.verdict {
            Verdict::Pass | Verdict::Delegated => exit::OK,
            Verdict::Fail => exit::FAIL,
            Verdict::Inconclusive => exit::INCONCLUSIVE,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    /// The report JSON with the timings field removed, for byte comparisons.
    pub fn stable_json(&self) -> Result<String> {
        let mut v = serde_json::to_value(self)?;
        if let Some(m) = v.as_object_mut() {
            m.remove("timings");
        }
        Ok(serde_json::to_string_pretty(&v)? + "\n")
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir)?;
        }
        fs::write(path, self.to_json()?)?;
        Ok(())
    }
}

fn manifest(cfg: &RunConfig, cd: &CartanData) -> Manifest {
    let echo = cfg.echo();
    let mut versions = BTreeMap::new();
    versions.insert("oreset-core".to_string(), env!("CARGO_PKG_VERSION").to_string());
    versions.insert("schema".to_string(), SCHEMA_VERSION.to_string());
    let mut cache_keys = BTreeMap::new();
    cache_keys.insert("cartan".to_string(), cd.content_hash());
    cache_keys.insert("config".to_string(), hex::encode(&Sha256::digest(echo.as_bytes())[..8]));
    Manifest { config: echo, cartan_label: cd.label(), versions, cache_keys }
}

fn disk_cache(cfg: &RunConfig) -> DiskCache {
    match &cfg.cache_dir {
        Some(d) => DiskCache::at(d),
        None => DiskCache::from_env(),
    }
}

fn pool(jobs: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Internal(format!("thread pool: {e}")))
}

/// Validates the configuration, runs the selected suite and writes the report
/// and poset files when paths are configured. No file is written when
/// validation or any computation fails.
pub fn run(cfg: &RunConfig) -> Result<Report> {
    let val = cfg.validate()?;
    let report = match cfg.target {
        Target::Rqg => run_rqg(cfg, &val)?,
        Target::Uw => run_uw(cfg, &val)?,
    };
    if let Some(p) = &cfg.report {
        report.write(p)?;
    }
    if let Some(p) = &cfg.poset {
        emit_poset(&report.poset, p)?;
    }
    Ok(report)
}

fn finish(
    cfg: &RunConfig,
    cd: &CartanData,
    checks: BTreeMap<String, Verdict>,
    rqg: Option<RqgSection>,
    uw: Option<UwSection>,
    poset: PosetGraph,
    timings: BTreeMap<String, f64>,
) -> Report {
    Report {
        schema_version: SCHEMA_VERSION,
        manifest: manifest(cfg, cd),
        verdict: Verdict::all(checks.values().copied()),
        checks,
        rqg,
        uw,
        poset,
        timings,
    }
}

fn pair_label(u: &WeylElt, v: &WeylElt) -> String {
    format!("({u},{v})")
}

/// Dominant weights with all coordinates at most `k`, excluding zero.
fn weights_up_to(rank: usize, k: i64) -> Vec<Weight> {
    let mut out = vec![Weight(vec![0; rank])];
    for i in 0..rank {
        out = out
            .into_iter()
            .flat_map(|w| {
                (0..=k).map(move |c| {
                    let mut x = w.clone();
                    x.0[i] = c;
                    x
                })
            })
            .collect();
    }
    out.retain(|w| w.0.iter().any(|&c| c != 0));
    out.sort();
    out
}

fn run_rqg(cfg: &RunConfig, val: &Validated) -> Result<Report> {
    let cd = val.cd.clone();
    let t_all = Instant::now();
    let mut timings = BTreeMap::new();
    let store = Arc::new(ModuleStore::new(cd.clone(), disk_cache(cfg)));
    let alg = FlagAlgebra::new(store)?;
    let elems = lower_interval(&cd, alg.w0());
    let r = cd.rank();
    let mut checks = BTreeMap::new();
    let threads = pool(cfg.jobs)?;

    let mut skew_degrees = Vec::new();
    if cfg.skew {
        let t = Instant::now();
        let mut lambdas: Vec<Weight> = (0..r).map(|i| Weight::fundamental(r, i)).collect();
        if r > 1 {
            lambdas.push(Weight::rho(r));
        }
        for u in &elems {
            for i in 0..r {
                if u.has_left_descent(&cd, i) {
                    continue;
                }
                for l in &lambdas {
                    skew_degrees.push(alg.skew_degree(i, u, l)?.0);
                }
            }
        }
        checks.insert("skew_degree".into(), Verdict::all(skew_degrees.iter().map(|s| s.verdict)));
        timings.insert("skew_degree".into(), t.elapsed().as_secs_f64());
    }

    let mut normality = Vec::new();
    if cfg.normality_bound > 0 {
        let t = Instant::now();
        let ws = weights_up_to(r, cfg.normality_bound);
        let mut comps = vec![Weight::zero(r)];
        comps.extend(ws.iter().cloned());
        let jobs: Vec<(WeylElt, WeylElt, Weight, Weight)> = elems
            .iter()
            .flat_map(|u| elems.iter().map(move |v| (u.clone(), v.clone())))
            .flat_map(|(u, v)| {
                let comps = &comps;
                ws.iter().flat_map(move |l| {
                    let (u, v) = (u.clone(), v.clone());
                    comps.iter().map(move |c| (u.clone(), v.clone(), l.clone(), c.clone()))
                })
            })
            .collect();
        let results: Vec<Result<Vec<NormalityCheck>>> = threads.install(|| {
            jobs.par_iter()
                .map(|(u, v, l, c)| alg.verify_normality_rqg(u, v, l, c, cfg.lambda_bound))
                .collect()
        });
        for res in results {
            normality.extend(res?);
        }
        checks.insert("normality".into(), Verdict::all(normality.iter().map(|n| n.verdict)));
        timings.insert("normality".into(), t.elapsed().as_secs_f64());
    }

    let pairs: Vec<((WeylElt, WeylElt), (WeylElt, WeylElt))> = if cfg.all_pairs {
        let ws: Vec<(WeylElt, WeylElt)> =
            elems.iter().flat_map(|u| elems.iter().map(move |v| (u.clone(), v.clone()))).collect();
        let mut out = Vec::new();
        for a in &ws {
            for b in &ws {
                if a != b && bruhat_leq(&cd, &a.0, &b.0) && bruhat_leq(&cd, &a.1, &b.1) {
                    out.push((a.clone(), b.clone()));
                }
            }
        }
        out
    } else {
        val.pairs
            .iter()
            .filter_map(|p| match p {
                PairSel::Rqg { upper, lower } => Some((upper.clone(), lower.clone())),
                PairSel::Uw { .. } => None,
            })
            .collect()
    };

    let t = Instant::now();
    let rho = Weight::rho(r);
    let results: Vec<Result<RqgPairReport>> = threads.install(|| {
        pairs
            .par_iter()
            .map(|(upper, lower)| {
                let s = alg.verify_separating_rqg((&upper.0, &upper.1), (&lower.0, &lower.1), cfg.lambda_bound)?;
                let disjointness = Verdict::all(s.disjointness.iter().map(|d| d.verdict));
                Ok(RqgPairReport {
                    pair: format!("{}:{}", pair_label(&upper.0, &upper.1), pair_label(&lower.0, &lower.1)),
                    disjointness,
                    disjointness_checks: s.disjointness,
                    witnesses: s
                        .witnesses
                        .into_iter()
                        .map(|w| Witness {
                            k: w.prime,
                            lambda: rho.clone(),
                            minor: w.minor,
                            demazure_route: w.demazure_route,
                            ideal_route: w.ideal_route,
                            agree: w.agree,
                            verdict: w.verdict,
                        })
                        .collect(),
                    route_disagreements: s.route_disagreements,
                    ore_generators: s.ore_generators,
                    lambda_bound: s.lambda_bound,
                    delegated: s.delegated,
                    verdict: s.verdict,
                })
            })
            .collect()
    });
    let pair_reports = results.into_iter().collect::<Result<Vec<_>>>()?;
    if !pair_reports.is_empty() {
        checks.insert("separation".into(), Verdict::all(pair_reports.iter().map(|p| p.verdict)));
        let agree = pair_reports.iter().all(|p| p.route_disagreements == 0);
        checks.insert("route_agreement".into(), Verdict::from_bool(agree));
        checks.insert("delegated".into(), Verdict::Delegated);
    }
    timings.insert("separation".into(), t.elapsed().as_secs_f64());

    let mut multiplicativity = Vec::new();
    if cfg.multiplicativity {
        let t = Instant::now();
        for (upper, lower) in &pairs {
            let outcomes =
                alg.multiplicativity_probe((&upper.0, &upper.1), (&lower.0, &lower.1), cfg.lambda_bound)?;
            let expected_factored = upper == lower;
            let verdict = if !expected_factored {
                Verdict::Pass
            } else if outcomes.iter().all(|o| o.factored) {
                Verdict::Pass
            } else if outcomes.iter().all(|o| o.factored || !o.stabilized) {
                Verdict::Inconclusive
            } else {
                Verdict::Fail
            };
            multiplicativity.push(MultiplicativityReport {
                pair: format!("{}:{}", pair_label(&upper.0, &upper.1), pair_label(&lower.0, &lower.1)),
                expected_factored,
                outcomes,
                verdict,
            });
        }
        checks.insert("multiplicativity".into(), Verdict::all(multiplicativity.iter().map(|m| m.verdict)));
        timings.insert("multiplicativity".into(), t.elapsed().as_secs_f64());
    }

    let poset = PosetGraph::rqg(&cd, &elems);
    timings.insert("total".into(), t_all.elapsed().as_secs_f64());
    let section = RqgSection {
        lambda_bound: cfg.lambda_bound,
        skew_degrees,
        normality,
        pairs: pair_reports,
        multiplicativity,
    };
    Ok(finish(cfg, &cd, checks, Some(section), None, poset, timings))
}

fn run_uw(cfg: &RunConfig, val: &Validated) -> Result<Report> {
    let cd = val.cd.clone();
    let t_all = Instant::now();
    let mut timings = BTreeMap::new();
    let word = cfg.word.clone().ok_or_else(|| Error::Config("uw runs need a `word`".into()))?;
    let disk = disk_cache(cfg);
    let uq = Arc::new(Uq::with_cache(cd.clone(), disk.clone()));
    let store = Arc::new(ModuleStore::new(cd.clone(), disk));
    let cell = SchubertCell::new(uq, store, &word)?;
    let elems = lower_interval(&cd, cell.w());
    let r = cd.rank();
    let threads = pool(cfg.jobs)?;
    let mut checks = BTreeMap::new();

    let t = Instant::now();
    let truncs: Vec<Result<IdealTruncation>> = threads.install(|| {
        elems
            .par_iter()
            .map(|u| cell.stabilized_ideal(u, cfg.cutoff, cfg.lambda_bound_start, cfg.lambda_bound_max))
            .collect()
    });
    let mut ideals = BTreeMap::new();
    for (u, t) in elems.iter().zip(truncs) {
        ideals.insert(u.clone(), t?);
    }
    let summaries: Vec<IdealSummary> = elems
        .iter()
        .map(|u| {
            let t = &ideals[u];
            IdealSummary {
                u: u.to_string(),
                lambda_bound: t.lambda_bound,
                stabilized_at: t.stabilized_at,
                dims: t.dims().into_iter().map(|(k, d)| (format!("{:?}", k.0), d)).collect(),
            }
        })
        .collect();
    timings.insert("ideals".into(), t.elapsed().as_secs_f64());

    let t = Instant::now();
    let poset_check = cell.poset_check(&ideals)?;
    checks.insert("poset".into(), poset_check.verdict);
    timings.insert("poset".into(), t.elapsed().as_secs_f64());

    let t = Instant::now();
    let mut normality = Vec::new();
    let mut fund_generation = Vec::new();
    for u in &elems {
        for i in 0..r {
            normality.extend(cell.verify_normality_uw(u, &Weight::fundamental(r, i), &ideals[u])?);
        }
        fund_generation.push(cell.fund_generation_check(u)?);
    }
    checks.insert("normality".into(), Verdict::all(normality.iter().map(|n| n.verdict)));
    checks.insert("fund_generation".into(), Verdict::all(fund_generation.iter().map(|f| f.verdict)));
    timings.insert("normality".into(), t.elapsed().as_secs_f64());

    let pairs: Vec<(WeylElt, WeylElt)> = if cfg.all_pairs {
        let mut out = Vec::new();
        for upper in &elems {
            for lower in &elems {
                if lower != upper && bruhat_leq(&cd, lower, upper) {
                    out.push((upper.clone(), lower.clone()));
                }
            }
        }
        out
    } else {
        val.pairs
            .iter()
            .filter_map(|p| match p {
                PairSel::Uw { upper, lower } => Some((upper.clone(), lower.clone())),
                PairSel::Rqg { .. } => None,
            })
            .collect()
    };
    let t = Instant::now();
    let rho = Weight::rho(r);
    let mut pair_reports = Vec::new();
    for (upper, lower) in &pairs {
        let s = cell.verify_separating_uw(lower, upper, &ideals)?;
        let stabilized_at = elems
            .iter()
            .filter(|x| bruhat_leq(&cd, lower, x))
            .map(|x| (x.to_string(), ideals[x].stabilized_at))
            .collect();
        pair_reports.push(UwPairReport {
            pair: format!("{upper}:{lower}"),
            disjointness: Verdict::all(s.disjointness.iter().map(|d| d.verdict)),
            disjointness_checks: s.disjointness,
            witnesses: s
                .witnesses
                .into_iter()
                .map(|w| Witness {
                    k: format!("I({})", w.above),
                    lambda: rho.clone(),
                    minor: format!("d[{upper},{}]", w.lambda),
                    demazure_route: w.demazure_route,
                    ideal_route: w.ideal_route,
                    agree: w.agree,
                    verdict: w.verdict,
                })
                .collect(),
            route_disagreements: s.route_disagreements,
            ore_generators: s.ore_generators,
            matches_upper_ore_set: s.matches_upper_ore_set,
            stabilized_at,
            delegated: s.delegated,
            verdict: s.verdict,
        });
    }
    if !pair_reports.is_empty() {
        checks.insert("separation".into(), Verdict::all(pair_reports.iter().map(|p| p.verdict)));
        let agree = pair_reports.iter().all(|p| p.route_disagreements == 0);
        checks.insert("route_agreement".into(), Verdict::from_bool(agree));
        checks.insert("delegated".into(), Verdict::Delegated);
    }
    timings.insert("separation".into(), t.elapsed().as_secs_f64());

    let poset = PosetGraph::uw(&cd, cell.w());
    timings.insert("total".into(), t_all.elapsed().as_secs_f64());
    let section = UwSection {
        word: crate::weyl::format_word(&word),
        cutoff: cfg.cutoff,
        ideals: summaries,
        poset_check,
        normality,
        fund_generation,
        pairs: pair_reports,
    };
    Ok(finish(cfg, &cd, checks, None, Some(section), poset, timings))
}
