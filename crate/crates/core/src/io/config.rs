//! Experiment configuration files.
//!
//! The format is flat `key = value` lines grouped under `[section]`
//! headers. `#` starts a comment. Lists are separated by whitespace or
//! commas; matrix rows are separated by `;`.
//!
//! ```text
//! [model]
//! family = exponential
//! B = 4 2; 2 7
//! rho = 0.5 0.5
//!
//! [contamination]
//! Bprime = 9 6; 6 13
//!
//! [grid]
//! epsilon = 0 0.05 0.1 0.2 0.3 0.4
//! q = 0.9
//! n = 100
//! m = 20
//!
//! [run]
//! replicates = 100
//! seed = 2018
//!
//! [pipeline]
//! dim = 2            # or "auto"
//! elbow = 3
//! augmentation = marchette-scheinerman
//! clamp_negative = true
//! truncate = off
//! ```

use std::collections::BTreeMap;
use std::str::FromStr;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::estimate::QParam;
use crate::eval::{Grid, McConfig};
use crate::model::{ContaminationSpec, RBound, WeightFamily, WsbmSpec};
use crate::pipeline::{Augmentation, DimMode, PipelineConfig, DEFAULT_ELBOW};

const KNOWN: &[(&str, &[&str])] = &[
    ("model", &["family", "B", "rho"]),
    ("contamination", &["Bprime"]),
    ("grid", &["epsilon", "q", "n", "m"]),
    ("run", &["replicates", "seed"]),
    ("pipeline", &["dim", "elbow", "augmentation", "clamp_negative", "truncate"]),
];

#[derive(Debug, Clone)]
struct Entry {
    value: String,
    line: usize,
}

/// Parsed key/value file; keys are `(section, key)`.
#[derive(Debug, Clone)]
pub struct ConfigFile {
    entries: BTreeMap<(String, String), Entry>,
    lines: usize,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        let mut section: Option<String> = None;
        let mut count = 0;
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            count = line;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            if let Some(rest) = body.strip_prefix('[') {
                let name = rest
                    .strip_suffix(']')
                    .ok_or_else(|| cfg_err(line, "unterminated section header"))?
                    .trim();
                if !KNOWN.iter().any(|(s, _)| *s == name) {
                    return Err(cfg_err(line, format!("unknown section [{name}]")));
                }
                section = Some(name.to_string());
                continue;
            }
            let (key, value) = body
                .split_once('=')
                .ok_or_else(|| cfg_err(line, "expected 'key = value'"))?;
            let (key, value) = (key.trim(), value.trim());
            let sec = section
                .as_deref()
                .ok_or_else(|| cfg_err(line, "key outside of any section"))?;
            let allowed = KNOWN.iter().find(|(s, _)| *s == sec).map(|(_, k)| *k).unwrap_or(&[]);
            if !allowed.contains(&key) {
                return Err(cfg_err(line, format!("unknown key '{key}' in [{sec}]")));
            }
            if value.is_empty() {
                return Err(cfg_err(line, format!("empty value for '{key}'")));
            }
            let prev = entries.insert(
                (sec.to_string(), key.to_string()),
                Entry {
                    value: value.to_string(),
                    line,
                },
            );
            if prev.is_some() {
                return Err(cfg_err(line, format!("duplicate key '{key}' in [{sec}]")));
            }
        }
        Ok(ConfigFile {
            entries,
            lines: count,
        })
    }

    fn get(&self, section: &str, key: &str) -> Option<&Entry> {
        self.entries.get(&(section.to_string(), key.to_string()))
    }

    fn require(&self, section: &str, key: &str) -> Result<&Entry> {
        self.get(section, key).ok_or_else(|| {
            cfg_err(
                self.lines,
                format!("missing required key '{key}' in [{section}]"),
            )
        })
    }

    /// SHA-256 over the sorted, whitespace-normalized entries.
    pub fn digest(&self) -> String {
        let mut h = Sha256::new();
        for ((sec, key), e) in &self.entries {
            let norm: Vec<&str> = e.value.split_whitespace().collect();
            h.update(format!("{sec}.{key}={}\n", norm.join(" ")).as_bytes());
        }
        hex::encode(h.finalize())
    }

    pub fn to_mc_config(&self) -> Result<McConfig> {
        let family: WeightFamily = parse_scalar(self.require("model", "family")?)?;
        let b = parse_matrix(self.require("model", "B")?)?;
        let rho = parse_list::<f64>(self.require("model", "rho")?)?;
        let rho_line = self.require("model", "rho")?.line;
        let spec = WsbmSpec::new(b, rho, family).map_err(|e| cfg_err(rho_line, e.to_string()))?;

        let bp_entry = self.require("contamination", "Bprime")?;
        let contamination = ContaminationSpec::new(parse_matrix(bp_entry)?, 0.0)
            .map_err(|e| cfg_err(bp_entry.line, e.to_string()))?;

        let axis = |key: &str| self.require("grid", key);
        let grid = Grid {
            epsilons: parse_list(axis("epsilon")?)?,
            qs: parse_list(axis("q")?)?,
            ns: parse_list(axis("n")?)?,
            ms: parse_list(axis("m")?)?,
        };
        let at = |key: &str| axis(key).map(|e| e.line);
        for &eps in &grid.epsilons {
            contamination.with_epsilon(eps).map_err(|e| cfg_err(at("epsilon").unwrap_or(0), e.to_string()))?;
        }
        for &q in &grid.qs {
            QParam::new(q).map_err(|e| cfg_err(at("q").unwrap_or(0), e.to_string()))?;
        }
        if let Some(n) = grid.ns.iter().find(|&&n| n < 2) {
            return Err(cfg_err(at("n")?, format!("n = {n} must be at least 2")));
        }
        if grid.ms.contains(&0) {
            return Err(cfg_err(at("m")?, "m must be at least 1"));
        }
        let reps_entry = self.require("run", "replicates")?;
        let replicates: usize = parse_scalar(reps_entry)?;
        if replicates == 0 {
            return Err(cfg_err(reps_entry.line, "replicates must be at least 1"));
        }
        let base_seed = parse_scalar(self.require("run", "seed")?)?;

        let elbow = match self.get("pipeline", "elbow") {
            Some(e) => parse_scalar(e)?,
            None => DEFAULT_ELBOW,
        };
        let dim_mode = match self.get("pipeline", "dim") {
            None => DimMode::Fixed(spec.blocks()),
            Some(e) if e.value == "auto" => DimMode::Elbow(elbow),
            Some(e) => DimMode::Fixed(parse_scalar(e)?),
        };
        let mut pipeline = PipelineConfig::new(QParam::MLE, dim_mode);
        if let Some(e) = self.get("pipeline", "augmentation") {
            pipeline.augmentation = match e.value.as_str() {
                "marchette-scheinerman" => Augmentation::MarchetteScheinerman,
                "none" => Augmentation::None,
                other => return Err(cfg_err(e.line, format!("unknown augmentation '{other}'"))),
            };
        }
        if let Some(e) = self.get("pipeline", "clamp_negative") {
            pipeline.clamp_negative = parse_scalar(e)?;
        }
        if let Some(e) = self.get("pipeline", "truncate") {
            if e.value != "off" {
                let r: f64 = parse_scalar(e)?;
                pipeline.truncation = Some(RBound::new(r).map_err(|err| cfg_err(e.line, err.to_string()))?);
            }
        }

        let cfg = McConfig {
            spec,
            contamination,
            grid,
            replicates,
            base_seed,
            pipeline,
        };
        // Axis values are checked above; what is left concerns B' against B.
        cfg.validate().map_err(|e| cfg_err(bp_entry.line, e.to_string()))?;
        Ok(cfg)
    }
}

fn cfg_err(line: usize, message: impl Into<String>) -> Error {
    Error::Config {
        line,
        message: message.into(),
    }
}

fn parse_scalar<T: FromStr>(e: &Entry) -> Result<T> {
    e.value
        .parse()
        .map_err(|_| cfg_err(e.line, format!("cannot parse '{}'", e.value)))
}

fn split_items(s: &str) -> impl Iterator<Item = &str> {
    s.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
}

fn parse_list<T: FromStr>(e: &Entry) -> Result<Vec<T>> {
    split_items(&e.value)
        .map(|t| {
            t.parse()
                .map_err(|_| cfg_err(e.line, format!("cannot parse list item '{t}'")))
        })
        .collect()
}

fn parse_matrix(e: &Entry) -> Result<Vec<Vec<f64>>> {
    e.value
        .split(';')
        .map(|row| {
            split_items(row)
                .map(|t| {
                    t.parse()
                        .map_err(|_| cfg_err(e.line, format!("cannot parse matrix entry '{t}'")))
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "\
[model]
family = exponential
B = 4 2; 2 7
rho = 0.5 0.5
[contamination]
Bprime = 9 6; 6 13
[grid]
epsilon = 0.1
q = 0.9
n = 20
m = 5
[run]
replicates = 1
seed = 7
";

    #[test]
    fn parses_minimal_config() {
        let cfg = ConfigFile::parse(MINIMAL).unwrap().to_mc_config().unwrap();
        assert_eq!(cfg.spec.b(), &[vec![4.0, 2.0], vec![2.0, 7.0]]);
        assert_eq!(cfg.grid.len(), 1);
        assert_eq!(cfg.pipeline.dim_mode, DimMode::Fixed(2));
        assert_eq!(cfg.base_seed, 7);
    }

    #[test]
    fn digest_ignores_key_order() {
        let reordered = MINIMAL.replace("family = exponential\nB = 4 2; 2 7\n", "B = 4  2; 2 7\nfamily = exponential\n");
        let a = ConfigFile::parse(MINIMAL).unwrap().digest();
        let b = ConfigFile::parse(&reordered).unwrap().digest();
        assert_eq!(a, b);
        let changed = MINIMAL.replace("seed = 7", "seed = 8");
        assert_ne!(a, ConfigFile::parse(&changed).unwrap().digest());
    }

    #[test]
    fn errors_carry_line_numbers() {
        let bad = MINIMAL.replace("q = 0.9", "q = zero");
        match ConfigFile::parse(&bad).unwrap().to_mc_config() {
            Err(Error::Config { line, .. }) => assert_eq!(line, 9),
            other => panic!("unexpected {other:?}"),
        }
        match ConfigFile::parse("[model]\nfoo = 1\n") {
            Err(Error::Config { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        match ConfigFile::parse("family = poisson\n") {
            Err(Error::Config { line, .. }) => assert_eq!(line, 1),
            other => panic!("unexpected {other:?}"),
        }
        let missing = MINIMAL.replace("seed = 7\n", "");
        assert!(matches!(
            ConfigFile::parse(&missing).unwrap().to_mc_config(),
            Err(Error::Config { .. })
        ));
    }
}
