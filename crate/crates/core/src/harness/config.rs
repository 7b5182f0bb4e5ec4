use std::fmt::Write as _;
use std::path::PathBuf;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rootdata::CartanData;
use crate::weyl::{bruhat_leq, check_reduced, format_word, parse_word, WeylElt};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    Rqg,
    Uw,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CartanSpec {
    Preset(String),
    Matrix { cartan: Vec<Vec<i64>>, symmetrizers: Vec<u32> },
}

impl CartanSpec {
    pub fn build(&self) -> Result<CartanData> {
        match self {
            CartanSpec::Preset(name) => CartanData::preset(name),
            CartanSpec::Matrix { cartan, symmetrizers } => {
                CartanData::new(cartan.clone(), symmetrizers.clone())
            }
        }
    }
}

/// Everything a run needs. Parsed from `key = value` text or built by the CLI.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub cartan: CartanSpec,
    pub target: Target,
    /// Reduced word of w (uw only).
    pub word: Option<Vec<usize>>,
    /// Raw pair selections: `u,v:u',v'` (rqg) or `u:u'` (uw), upper ideal first.
    pub pairs: Vec<String>,
    pub all_pairs: bool,
    /// Largest degree height kept in U^-[w] ideal truncations.
    pub cutoff: i64,
    /// Extra tensor stages past the reach stage in R_q[G] ideal windows.
    pub lambda_bound: i64,
    pub lambda_bound_start: i64,
    pub lambda_bound_max: i64,
    /// Run the skew-derivation degree table (rqg).
    pub skew: bool,
    /// Largest coordinate of lambda and of the tested component in the
    /// exhaustive normality sweep (rqg); 0 skips it.
    pub normality_bound: i64,
    pub multiplicativity: bool,
    pub report: Option<PathBuf>,
    pub poset: Option<PathBuf>,
    pub cache_dir: Option<PathBuf>,
    pub jobs: usize,
}

impl RunConfig {
    pub fn new(cartan: CartanSpec, target: Target) -> Self {
        RunConfig {
            cartan,
            target,
            word: None,
            pairs: Vec::new(),
            all_pairs: false,
            cutoff: 6,
            lambda_bound: 1,
            lambda_bound_start: 1,
            lambda_bound_max: 4,
            skew: target == Target::Rqg,
            normality_bound: 0,
            multiplicativity: false,
            report: None,
            poset: None,
            cache_dir: None,
            jobs: 1,
        }
    }

    /// Parses plain `key = value` lines; `#` starts a comment.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut kv = Vec::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected `key = value`", n + 1)))?;
            kv.push((k.trim().to_string(), v.trim().to_string()));
        }
        let get = |key: &str| kv.iter().rev().find(|(k, _)| k == key).map(|(_, v)| v.as_str());
        let cartan = match (get("type"), get("cartan")) {
            (Some(t), None) => CartanSpec::Preset(t.to_ascii_uppercase()),
            (None, Some(m)) => {
                let cartan = parse_matrix(m)?;
                let symmetrizers = match get("symmetrizers") {
                    Some(s) => parse_list(s)?,
                    None => vec![1; cartan.len()],
                };
                CartanSpec::Matrix { cartan, symmetrizers }
            }
            (Some(_), Some(_)) => return Err(Error::Config("give either `type` or `cartan`, not both".into())),
            (None, None) => return Err(Error::Config("missing `type` or `cartan`".into())),
        };
        let target = match get("target") {
            Some("rqg") => Target::Rqg,
            Some("uw") => Target::Uw,
            Some(t) => return Err(Error::Config(format!("unknown target `{t}`"))),
            None => return Err(Error::Config("missing `target`".into())),
        };
        let mut c = RunConfig::new(cartan, target);
        for (k, v) in &kv {
            match k.as_str() {
                "type" | "cartan" | "symmetrizers" | "target" => {}
                "word" => c.word = Some(parse_word(v).map_err(config)?),
                "pairs" => {
                    c.pairs = v.split(';').map(|p| p.trim().to_string()).filter(|p| !p.is_empty()).collect()
                }
                "all_pairs" => c.all_pairs = parse_bool(k, v)?,
                "cutoff" => c.cutoff = parse_int(k, v)?,
                "lambda_bound" => c.lambda_bound = parse_int(k, v)?,
                "lambda_bound_start" => c.lambda_bound_start = parse_int(k, v)?,
                "lambda_bound_max" => c.lambda_bound_max = parse_int(k, v)?,
                "skew" => c.skew = parse_bool(k, v)?,
                "normality_bound" => c.normality_bound = parse_int(k, v)?,
                "multiplicativity" => c.multiplicativity = parse_bool(k, v)?,
                "report" => c.report = Some(PathBuf::from(v)),
                "poset" => c.poset = Some(PathBuf::from(v)),
                "cache_dir" => c.cache_dir = Some(PathBuf::from(v)),
                "jobs" => c.jobs = parse_int(k, v)?.max(1) as usize,
                other => return Err(Error::Config(format!("unknown key `{other}`"))),
            }
        }
        Ok(c)
    }

    /// Canonical text of the settings that determine the results. Output paths,
    /// cache location and thread count are left out.
    pub fn echo(&self) -> String {
        let mut s = String::new();
        match &self.cartan {
            CartanSpec::Preset(t) => writeln!(s, "type = {t}").unwrap(),
            CartanSpec::Matrix { cartan, symmetrizers } => {
                let rows: Vec<String> = cartan
                    .iter()
                    .map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
                    .collect();
                writeln!(s, "cartan = {}", rows.join(";")).unwrap();
                let sym: Vec<String> = symmetrizers.iter().map(|x| x.to_string()).collect();
                writeln!(s, "symmetrizers = {}", sym.join(",")).unwrap();
            }
        }
        let target = match self.target {
            Target::Rqg => "rqg",
            Target::Uw => "uw",
        };
        writeln!(s, "target = {target}").unwrap();
        if let Some(w) = &self.word {
            writeln!(s, "word = {}", format_word(w)).unwrap();
        }
        if !self.pairs.is_empty() {
            writeln!(s, "pairs = {}", self.pairs.join("; ")).unwrap();
        }
        writeln!(s, "all_pairs = {}", self.all_pairs).unwrap();
        match self.target {
            Target::Rqg => {
                writeln!(s, "lambda_bound = {}", self.lambda_bound).unwrap();
                writeln!(s, "skew = {}", self.skew).unwrap();
                writeln!(s, "normality_bound = {}", self.normality_bound).unwrap();
                writeln!(s, "multiplicativity = {}", self.multiplicativity).unwrap();
            }
            Target::Uw => {
                writeln!(s, "cutoff = {}", self.cutoff).unwrap();
                writeln!(s, "lambda_bound_start = {}", self.lambda_bound_start).unwrap();
                writeln!(s, "lambda_bound_max = {}", self.lambda_bound_max).unwrap();
            }
        }
        s
    }

    /// Checks everything that can be checked without computing.
    pub fn validate(&self) -> Result<Validated> {
        let cd = self.cartan.build().map_err(config)?;
        if !cd.is_finite_type() {
            return Err(Error::Config("only finite-type Cartan data can be verified".into()));
        }
        if !self.all_pairs && self.pairs.is_empty() {
            return Err(Error::Config("select pairs with `pairs` or `all_pairs`".into()));
        }
        if self.all_pairs && !self.pairs.is_empty() {
            return Err(Error::Config("`pairs` and `all_pairs` are exclusive".into()));
        }
        let mut pairs = Vec::new();
        let w = match self.target {
            Target::Uw => {
                let word = self.word.as_ref().ok_or_else(|| Error::Config("uw runs need a `word`".into()))?;
                for &i in word {
                    cd.check_index(i).map_err(config)?;
                }
                check_reduced(&cd, word)
                    .map_err(|_| Error::Config(format!("word {} is not reduced", format_word(word))))?;
                if self.cutoff < 0 {
                    return Err(Error::Config("cutoff must be non-negative".into()));
                }
                if self.lambda_bound_start < 1 || self.lambda_bound_max < self.lambda_bound_start {
                    return Err(Error::Config("need 1 <= lambda_bound_start <= lambda_bound_max".into()));
                }
                let w = WeylElt::reduce(&cd, word).map_err(config)?;
                for p in &self.pairs {
                    let (a, b) = p
                        .split_once(':')
                        .ok_or_else(|| Error::Config(format!("pair `{p}` is not of the form u:u'")))?;
                    let upper = parse_elt(&cd, a)?;
                    let lower = parse_elt(&cd, b)?;
                    if !bruhat_leq(&cd, &upper, &w) {
                        return Err(Error::Config(format!("{upper} is not below w = {w}")));
                    }
                    if !bruhat_leq(&cd, &lower, &upper) {
                        return Err(Error::Config(format!("pair `{p}` is not incident: {lower} is not below {upper}")));
                    }
                    pairs.push(PairSel::Uw { upper, lower });
                }
                Some(w)
            }
            Target::Rqg => {
                if self.word.is_some() {
                    return Err(Error::Config("rqg runs take no `word`".into()));
                }
                if self.lambda_bound < 0 || self.normality_bound < 0 {
                    return Err(Error::Config("bounds must be non-negative".into()));
                }
                for p in &self.pairs {
                    let (a, b) = p
                        .split_once(':')
                        .ok_or_else(|| Error::Config(format!("pair `{p}` is not of the form u,v:u',v'")))?;
                    let (u, v) = parse_elt_pair(&cd, a)?;
                    let (u1, v1) = parse_elt_pair(&cd, b)?;
                    if !bruhat_leq(&cd, &u, &u1) || !bruhat_leq(&cd, &v, &v1) {
                        return Err(Error::Config(format!(
                            "pair `{p}` is not incident: need {u} <= {u1} and {v} <= {v1}"
                        )));
                    }
                    pairs.push(PairSel::Rqg { upper: (u, v), lower: (u1, v1) });
                }
                None
            }
        };
        Ok(Validated { cd, w, pairs })
    }
}

/// Output of [`RunConfig::validate`].
#[derive(Clone, Debug)]
pub struct Validated {
    pub cd: CartanData,
    pub w: Option<WeylElt>,
    /// Explicit pairs; empty when all pairs are selected.
    pub pairs: Vec<PairSel>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PairSel {
    Rqg { upper: (WeylElt, WeylElt), lower: (WeylElt, WeylElt) },
    Uw { upper: WeylElt, lower: WeylElt },
}

fn config(e: Error) -> Error {
    match e {
        Error::Config(_) => e,
        other => Error::Config(other.to_string()),
    }
}

fn parse_int(k: &str, v: &str) -> Result<i64> {
    v.parse().map_err(|_| Error::Config(format!("`{k}` expects an integer, got `{v}`")))
}

fn parse_bool(k: &str, v: &str) -> Result<bool> {
    match v {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(Error::Config(format!("`{k}` expects true or false, got `{v}`"))),
    }
}

fn parse_list<T: std::str::FromStr>(s: &str) -> Result<Vec<T>> {
    s.split(',')
        .map(|x| x.trim().parse().map_err(|_| Error::Config(format!("bad list entry `{x}`"))))
        .collect()
}

/// `2,-1;-1,2` style matrix.
pub fn parse_matrix(s: &str) -> Result<Vec<Vec<i64>>> {
    s.split(';').map(parse_list).collect()
}

/// A Weyl group element written `e`, `s1s2s1` or as a digit string `121`.
pub fn parse_elt(cd: &CartanData, s: &str) -> Result<WeylElt> {
    let t = s.trim();
    if t == "e" || t.is_empty() {
        return Ok(WeylElt::identity(cd));
    }
    let letters: Vec<&str> = if t.starts_with('s') {
        t.split('s').skip(1).collect()
    } else {
        t.split("").filter(|x| !x.is_empty()).collect()
    };
    let mut word = Vec::new();
    for l in letters {
        let n: usize = l.parse().map_err(|_| Error::Config(format!("bad Weyl group element `{t}`")))?;
        if n == 0 || n > cd.rank() {
            return Err(Error::Config(format!("index {n} out of range in `{t}`")));
        }
        word.push(n - 1);
    }
    WeylElt::reduce(cd, &word).map_err(config)
}

fn parse_elt_pair(cd: &CartanData, s: &str) -> Result<(WeylElt, WeylElt)> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| Error::Config(format!("`{s}` is not a pair u,v")))?;
    Ok((parse_elt(cd, a)?, parse_elt(cd, b)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        let c = RunConfig::from_text("type = a2\ntarget = uw\nword = 1,2,1 # w0\nall_pairs = true\ncutoff = 5\n").unwrap();
        assert_eq!(c.cartan, CartanSpec::Preset("A2".into()));
        assert_eq!(c.word, Some(vec![0, 1, 0]));
        assert_eq!(c.cutoff, 5);
        let again = RunConfig::from_text(&c.echo()).unwrap();
        assert_eq!(again.echo(), c.echo());
    }

    #[test]
    fn matrix_spec() {
        let c = RunConfig::from_text("cartan = 2,-2;-1,2\nsymmetrizers = 1,2\ntarget = rqg\nall_pairs = yes").unwrap();
        let cd = c.validate().unwrap().cd;
        assert_eq!(cd.c(0, 1), -2);
        assert_eq!(RunConfig::from_text(&c.echo()).unwrap(), c);
    }

    #[test]
    fn rejects_bad_input() {
        let nonreduced = RunConfig::from_text("type = A2\ntarget = uw\nword = 1,1\nall_pairs = true").unwrap();
        assert!(matches!(nonreduced.validate(), Err(Error::Config(_))));
        assert!(RunConfig::from_text("type = A2\ntarget = uw\nfoo = 1").is_err());
        let bad_pair = RunConfig::from_text("type = A1\ntarget = rqg\npairs = s1,e:e,e").unwrap();
        assert!(matches!(bad_pair.validate(), Err(Error::Config(_))));
        let no_pairs = RunConfig::from_text("type = A1\ntarget = rqg").unwrap();
        assert!(no_pairs.validate().is_err());
    }

    #[test]
    fn element_notation() {
        let cd = CartanData::preset("A2").unwrap();
        let a = parse_elt(&cd, "s1s2s1").unwrap();
        assert_eq!(a, parse_elt(&cd, "212").unwrap());
        assert_eq!(parse_elt(&cd, "e").unwrap(), WeylElt::identity(&cd));
        assert!(parse_elt(&cd, "s3").is_err());
    }
}
