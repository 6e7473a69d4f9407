use std::path::{Path, PathBuf};

use super::HarnessError;
use crate::density::{parse_rational, Rational};
use crate::smooth::ThresholdParams;
use crate::tournament::Tournament;

/// Environment variable that overrides the configured output path.
pub const OUTPUT_ENV: &str = "EHC_EXPERIMENT_OUTPUT";

/// A flat `key = value` experiment description.
///
/// ```text
/// sizes = 4, 8, 16
/// samples = 10
/// family = h1.txt, h2.txt
/// seed = 7
/// ```
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub sizes: Vec<usize>,
    pub samples: usize,
    pub family: Vec<PathBuf>,
    pub seed: u64,
    pub max_rejects: u64,
    pub tr_limit: usize,
    pub output: Option<PathBuf>,
    /// Adds wall-clock times to the records, which makes output
    /// non-reproducible.
    pub timing: bool,
    /// Optional λ checked against the `lambda_key` threshold.
    pub lambda: Option<Rational>,
    pub thresholds: ThresholdParams,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            sizes: vec![4],
            samples: 1,
            family: Vec::new(),
            seed: 0,
            max_rejects: 1_000_000,
            tr_limit: 64,
            output: None,
            timing: false,
            lambda: None,
            thresholds: ThresholdParams::default(),
        }
    }
}

fn list<T: std::str::FromStr>(key: &str, v: &str) -> Result<Vec<T>, HarnessError>
where
    T::Err: std::fmt::Display,
{
    v.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<T>()
                .map_err(|e| HarnessError::Config(format!("{key}: {s:?}: {e}")))
        })
        .collect()
}

fn one<T: std::str::FromStr>(key: &str, v: &str) -> Result<T, HarnessError>
where
    T::Err: std::fmt::Display,
{
    v.parse::<T>()
        .map_err(|e| HarnessError::Config(format!("{key}: {v:?}: {e}")))
}

fn rational(key: &str, v: &str) -> Result<Rational, HarnessError> {
    parse_rational(v).map_err(|e| HarnessError::Config(format!("{key}: {e}")))
}

impl ExperimentConfig {
    /// Parses the config text. Relative family and output paths are
    /// resolved against `base`.
    pub fn parse(text: &str, base: &Path) -> Result<Self, HarnessError> {
        let mut cfg = ExperimentConfig::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| HarnessError::Config(format!("line {}: expected key = value", lineno + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "sizes" => cfg.sizes = list(key, value)?,
                "samples" => cfg.samples = one(key, value)?,
                "family" => {
                    cfg.family = value
                        .split(',')
                        .map(str::trim)
                        .filter(|s| !s.is_empty())
                        .map(|s| base.join(s))
                        .collect()
                }
                "seed" => cfg.seed = one(key, value)?,
                "max_rejects" => cfg.max_rejects = one(key, value)?,
                "tr_limit" => cfg.tr_limit = one(key, value)?,
                "output" => cfg.output = Some(base.join(value)),
                "timing" => cfg.timing = one(key, value)?,
                "lambda" => cfg.lambda = Some(rational(key, value)?),
                "c" => cfg.thresholds.c = Some(rational(key, value)?),
                "f" => cfg.thresholds.f = Some(rational(key, value)?),
                "t" => cfg.thresholds.t = Some(one(key, value)?),
                "delta" => cfg.thresholds.delta = Some(one(key, value)?),
                "h" => cfg.thresholds.h = Some(one(key, value)?),
                _ => {
                    return Err(HarnessError::Config(format!(
                        "line {}: unknown key {key:?}",
                        lineno + 1
                    )))
                }
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path)?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::parse(&text, base)
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.sizes.is_empty() || self.sizes.contains(&0) {
            return Err(HarnessError::Config(
                "sizes must be a nonempty list of positive integers".into(),
            ));
        }
        if let Some(&n) = self.sizes.iter().find(|&&n| n > crate::bits::MAX_VERTICES) {
            return Err(HarnessError::Config(format!(
                "size {n} exceeds {}",
                crate::bits::MAX_VERTICES
            )));
        }
        if self.samples == 0 {
            return Err(HarnessError::Config("samples must be positive".into()));
        }
        if self.max_rejects == 0 || self.tr_limit == 0 {
            return Err(HarnessError::Config("budgets must be positive".into()));
        }
        Ok(())
    }

    /// The output path, with the environment override applied.
    pub fn output_path(&self) -> Option<PathBuf> {
        std::env::var_os(OUTPUT_ENV)
            .map(PathBuf::from)
            .or_else(|| self.output.clone())
    }

    pub fn load_family(&self) -> Result<Vec<Tournament>, HarnessError> {
        self.family
            .iter()
            .map(|p| {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| HarnessError::Config(format!("family file {}: {e}", p.display())))?;
                Ok(Tournament::parse(&text)?)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_keys() {
        let cfg = ExperimentConfig::parse(
            "sizes = 4, 8\nsamples=3 # trailing\nseed = 9\nfamily = a.txt\ndelta = 2\n",
            Path::new("/tmp/x"),
        )
        .unwrap();
        assert_eq!(cfg.sizes, vec![4, 8]);
        assert_eq!(cfg.samples, 3);
        assert_eq!(cfg.family, vec![PathBuf::from("/tmp/x/a.txt")]);
        assert_eq!(cfg.thresholds.delta, Some(2));
    }

    #[test]
    fn rejects_bad_input() {
        for text in ["sizes = 0", "samples = 0", "bogus = 1", "sizes 4", "max_rejects = 0"] {
            assert!(ExperimentConfig::parse(text, Path::new(".")).is_err(), "{text}");
        }
    }
}
