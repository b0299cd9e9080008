use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use ausolab::walks::PivotRule;

use crate::{Family, Start};

/// A config problem; `line` is 0 for problems with the file as a whole.
#[derive(Debug)]
pub struct ConfigError {
    pub line: usize,
    pub msg: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            0 => f.write_str(&self.msg),
            line => write!(f, "line {line}: {}", self.msg),
        }
    }
}

impl std::error::Error for ConfigError {}

fn err(line: usize, msg: impl Into<String>) -> ConfigError {
    ConfigError { line, msg: msg.into() }
}

/// A rule column entry: a pivot rule, or `exact` for the DP value alone.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RuleSpec {
    Walk(PivotRule),
    Exact,
}

impl fmt::Display for RuleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RuleSpec::Walk(r) => write!(f, "{r}"),
            RuleSpec::Exact => f.write_str("exact"),
        }
    }
}

impl FromStr for RuleSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "exact" {
            Ok(RuleSpec::Exact)
        } else {
            s.parse().map(RuleSpec::Walk)
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub family: Family,
    pub dims: Vec<usize>,
    pub cuts: usize,
    pub rules: Vec<RuleSpec>,
    pub trials: u64,
    pub seed: u64,
    pub instances: u64,
    pub t: Vec<usize>,
    pub k: Vec<usize>,
    pub start: Start,
    pub output: Option<PathBuf>,
    pub path: Option<PathBuf>,
    pub graph: Option<PathBuf>,
    /// Accepted `key = value` lines in file order, echoed into the metadata.
    pub echo: Vec<(String, String)>,
}

const KEYS: &[&str] =
    &["family", "d", "cuts", "rules", "trials", "seed", "instances", "t", "k", "start", "output", "path", "graph"];

fn list<T: FromStr>(line: usize, key: &str, value: &str) -> Result<Vec<T>, ConfigError> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().map_err(|_| err(line, format!("bad {key} entry `{s}`"))))
        .collect()
}

fn scalar<T: FromStr>(line: usize, key: &str, value: &str) -> Result<T, ConfigError> {
    value.parse().map_err(|_| err(line, format!("bad {key} value `{value}`")))
}

fn dims(line: usize, value: &str) -> Result<Vec<usize>, ConfigError> {
    match value.split_once("..") {
        Some((a, b)) => {
            let lo: usize = scalar(line, "d", a.trim())?;
            let hi: usize = scalar(line, "d", b.trim())?;
            if lo > hi {
                return Err(err(line, format!("empty dimension range {value}")));
            }
            Ok((lo..=hi).collect())
        }
        None => list(line, "d", value),
    }
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = ExperimentConfig {
            family: Family::CubeLinear,
            dims: Vec::new(),
            cuts: 0,
            rules: Vec::new(),
            trials: 10_000,
            seed: 0,
            instances: 1,
            t: Vec::new(),
            k: Vec::new(),
            start: Start::Source,
            output: None,
            path: None,
            graph: None,
            echo: Vec::new(),
        };
        let mut seen_family = false;
        let mut seen_rules = false;
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap().trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content.split_once('=').ok_or_else(|| err(line, "expected `key = value`"))?;
            let (key, value) = (key.trim(), value.trim());
            if !KEYS.contains(&key) {
                return Err(err(line, format!("unknown key `{key}`")));
            }
            if cfg.echo.iter().any(|(k, _)| k == key) {
                return Err(err(line, format!("duplicate key `{key}`")));
            }
            match key {
                "family" => {
                    cfg.family = value.parse().map_err(|e: String| err(line, e))?;
                    seen_family = true;
                }
                "d" => cfg.dims = dims(line, value)?,
                "cuts" => cfg.cuts = scalar(line, key, value)?,
                "rules" => {
                    cfg.rules = list(line, key, value)?;
                    seen_rules = true;
                }
                "trials" => cfg.trials = scalar(line, key, value)?,
                "seed" => cfg.seed = scalar(line, key, value)?,
                "instances" => cfg.instances = scalar(line, key, value)?,
                "t" => cfg.t = list(line, key, value)?,
                "k" => cfg.k = list(line, key, value)?,
                "start" => cfg.start = value.parse().map_err(|e: String| err(line, e))?,
                "output" => cfg.output = Some(PathBuf::from(value)),
                "path" => cfg.path = Some(PathBuf::from(value)),
                "graph" => cfg.graph = Some(PathBuf::from(value)),
                _ => unreachable!(),
            }
            cfg.echo.push((key.to_string(), value.to_string()));
        }
        if !seen_family {
            return Err(err(0, "missing `family`"));
        }
        if !seen_rules || cfg.rules.is_empty() {
            return Err(err(0, "`rules` must list at least one rule"));
        }
        if cfg.family == Family::File {
            if cfg.path.is_none() {
                return Err(err(0, "family = file needs `path`"));
            }
        } else if cfg.dims.is_empty() {
            return Err(err(0, "missing `d`"));
        }
        if cfg.trials == 0 && cfg.rules.iter().any(|r| matches!(r, RuleSpec::Walk(_))) {
            return Err(err(0, "`trials` must be positive"));
        }
        Ok(cfg)
    }

    /// `(t, k)` pairs in config order, `t` outermost.
    pub fn tk_pairs(&self) -> Vec<(usize, usize)> {
        self.t.iter().flat_map(|&t| self.k.iter().map(move |&k| (t, k))).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_a_full_config() {
        let cfg = ExperimentConfig::parse(
            "# sweep\nfamily = cube-linear\nd = 3..6\nrules = random-edge, exact\ntrials = 500\nseed = 9\nt = 2,3\nk = 1\n",
        )
        .unwrap();
        assert_eq!(cfg.dims, vec![3, 4, 5, 6]);
        assert_eq!(cfg.rules, vec![RuleSpec::Walk(PivotRule::RandomEdge), RuleSpec::Exact]);
        assert_eq!(cfg.tk_pairs(), vec![(2, 1), (3, 1)]);
        assert_eq!(cfg.echo.len(), 7);
    }

    #[test]
    fn rejects_bad_configs() {
        for text in [
            "family = km\nd = 3\nrules =\n",
            "family = km\nd = 3\n",
            "family = km\nd = 3\nrules = exact\ncolor = red\n",
            "family = km\nd = 3\nrules = fastest\n",
            "family = km\nd = 5..3\nrules = exact\n",
            "family = km\nrules = exact\n",
            "family = file\nrules = exact\n",
            "family = km\nd = 3\nd = 4\nrules = exact\n",
            "family km\n",
        ] {
            assert!(ExperimentConfig::parse(text).is_err(), "{text}");
        }
    }
}
