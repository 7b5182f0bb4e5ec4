use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use oreset_core::harness::{self, exit, parse_matrix, CartanSpec, Report, RunConfig, Target};
use oreset_core::weyl::parse_word;
use oreset_core::Error;

#[derive(Parser)]
#[command(name = "oreset", version, about = "Exact checks on the H-primes of R_q[G] and U^-[w]")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a verification suite.
    #[command(subcommand)]
    Verify(Verify),
    /// Run a suite described by a plain-text `key = value` config file.
    Run {
        config: PathBuf,
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long)]
        poset: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum Verify {
    /// Quantum function algebra R_q[G]: primes I_{u,v}.
    Rqg(RqgArgs),
    /// Quantum Schubert cell algebra U^-[w]: primes I_w(u).
    Uw(UwArgs),
}

#[derive(Args)]
struct Common {
    /// Preset Cartan type: A1, A2, A3, B2, C2, G2.
    #[arg(long = "type", conflicts_with = "cartan")]
    ty: Option<String>,
    /// Cartan matrix as rows, e.g. `2,-1;-1,2`.
    #[arg(long)]
    cartan: Option<String>,
    /// Symmetrizers for `--cartan`, e.g. `1,2`.
    #[arg(long, requires = "cartan")]
    symmetrizers: Option<String>,
    #[arg(long, conflicts_with = "pair")]
    all_pairs: bool,
    #[arg(long)]
    report: Option<PathBuf>,
    /// DOT file for the H-prime poset (JSON written alongside). Defaults to
    /// `<report stem>.poset.dot` when a report path is given.
    #[arg(long)]
    poset: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Cache directory (overrides ORESET_CACHE_DIR).
    #[arg(long)]
    cache_dir: Option<PathBuf>,
}

#[derive(Args)]
struct RqgArgs {
    #[command(flatten)]
    common: Common,
    /// Incident pair `u,v:u',v'` (I_{u',v'} inside I_{u,v}); repeatable.
    #[arg(long)]
    pair: Vec<String>,
    /// Tensor stages computed past the reach stage of each ideal window.
    #[arg(long, default_value_t = 1)]
    lambda_bound: i64,
    /// Largest coordinate for the exhaustive normality sweep (0 = skip).
    #[arg(long, default_value_t = 0)]
    normality_bound: i64,
    #[arg(long)]
    no_skew: bool,
    #[arg(long)]
    multiplicativity: bool,
}

#[derive(Args)]
struct UwArgs {
    #[command(flatten)]
    common: Common,
    /// Reduced word of w, e.g. `1,2,1`.
    #[arg(long)]
    word: String,
    /// Incident pair `u:u'` (I_w(u') inside I_w(u)); repeatable.
    #[arg(long)]
    pair: Vec<String>,
    #[arg(long, default_value_t = 6)]
    cutoff: i64,
    #[arg(long, default_value_t = 1)]
    lambda_bound_start: i64,
    #[arg(long, default_value_t = 4)]
    lambda_bound_max: i64,
}

fn base_config(c: &Common, target: Target) -> Result<RunConfig, Error> {
    let spec = match (&c.ty, &c.cartan) {
        (Some(t), None) => CartanSpec::Preset(t.to_ascii_uppercase()),
        (None, Some(m)) => {
            let cartan = parse_matrix(m)?;
            let symmetrizers = match &c.symmetrizers {
                Some(s) => s
                    .split(',')
                    .map(|x| x.trim().parse().map_err(|_| Error::Config(format!("bad symmetrizer `{x}`"))))
                    .collect::<Result<_, _>>()?,
                None => vec![1; cartan.len()],
            };
            CartanSpec::Matrix { cartan, symmetrizers }
        }
        _ => return Err(Error::Config("give --type or --cartan".into())),
    };
    let mut cfg = RunConfig::new(spec, target);
    cfg.all_pairs = c.all_pairs;
    cfg.report = c.report.clone();
    cfg.poset = c.poset.clone().or_else(|| c.report.as_ref().map(default_poset_path));
    cfg.jobs = c.jobs.max(1);
    cfg.cache_dir = c.cache_dir.clone();
    Ok(cfg)
}

fn default_poset_path(report: &PathBuf) -> PathBuf {
    let stem = report.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "report".into());
    report.with_file_name(format!("{stem}.poset.dot"))
}

fn build(cmd: &Cmd) -> Result<RunConfig, Error> {
    match cmd {
        Cmd::Verify(Verify::Rqg(a)) => {
            let mut cfg = base_config(&a.common, Target::Rqg)?;
            cfg.pairs = a.pair.clone();
            cfg.lambda_bound = a.lambda_bound;
            cfg.normality_bound = a.normality_bound;
            cfg.skew = !a.no_skew;
            cfg.multiplicativity = a.multiplicativity;
            Ok(cfg)
        }
        Cmd::Verify(Verify::Uw(a)) => {
            let mut cfg = base_config(&a.common, Target::Uw)?;
            cfg.word = Some(parse_word(&a.word).map_err(|e| Error::Config(e.to_string()))?);
            cfg.pairs = a.pair.clone();
            cfg.cutoff = a.cutoff;
            cfg.lambda_bound_start = a.lambda_bound_start;
            cfg.lambda_bound_max = a.lambda_bound_max;
            Ok(cfg)
        }
        Cmd::Run { config, report, poset } => {
            let text = std::fs::read_to_string(config)
                .map_err(|e| Error::Config(format!("cannot read {}: {e}", config.display())))?;
            let mut cfg = RunConfig::from_text(&text)?;
            if report.is_some() {
                cfg.report = report.clone();
            }
            if poset.is_some() {
                cfg.poset = poset.clone();
            }
            Ok(cfg)
        }
    }
}

fn summary(r: &Report) {
    println!("{} ({})", r.manifest.cartan_label, r.manifest.config.lines().nth(1).unwrap_or(""));
    for (name, v) in &r.checks {
        println!("  {name:<18} {v}");
    }
    println!("verdict: {}", r.verdict);
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match build(&cli.cmd).and_then(|c| c.validate().map(|_| c)) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(exit::CONFIG as u8);
        }
    };
    match harness::run(&cfg) {
        Ok(r) => {
            summary(&r);
            ExitCode::from(r.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            let code = if matches!(e, Error::Config(_)) { exit::CONFIG } else { exit::ERROR };
            ExitCode::from(code as u8)
        }
    }
}
