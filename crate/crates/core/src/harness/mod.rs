//! Reproducible experiments: uniform random tournaments, rejection sampling
//! of `F`-free ones, and the growth exponent of their largest transitive
//! subtournaments.

mod config;

use std::io::Write;
use std::time::Instant;

use num_bigint::BigUint;
use num_traits::Pow;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::containment::is_family_free;
use crate::density::Rational;
use crate::error::{CoreError, Result};
use crate::smooth::{epsilon_thresholds, Bound};
use crate::tournament::Tournament;
use crate::transitive::tr_exact_with_limit;

pub use config::{ExperimentConfig, OUTPUT_ENV};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("config: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Core(#[from] CoreError),
}

/// Orients every pair by a fair coin.
pub fn sample_tournament<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Tournament {
    Tournament::from_fn(n, |_, _| rng.gen_bool(0.5))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeSample {
    pub tournament: Tournament,
    /// Samples rejected before this one.
    pub rejects: u64,
}

/// Draws until a sample avoids every member of `family`. Fails with
/// `BudgetExceeded` after `max_rejects` rejections.
pub fn sample_free<R: Rng + ?Sized>(
    n: usize,
    family: &[Tournament],
    rng: &mut R,
    max_rejects: u64,
) -> Result<FreeSample> {
    let mut rejects = 0;
    loop {
        let t = sample_tournament(n, rng);
        if is_family_free(&t, family) {
            return Ok(FreeSample { tournament: t, rejects });
        }
        rejects += 1;
        if rejects >= max_rejects {
            return Err(CoreError::BudgetExceeded(format!(
                "{rejects} samples at n = {n} all contained a forbidden tournament"
            )));
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentRecord {
    pub n: usize,
    pub sample: usize,
    /// False when the rejection budget ran out; the record then describes
    /// a fresh unconstrained sample.
    pub is_free: bool,
    pub rejects: u64,
    pub tr: usize,
    pub tournament: Tournament,
    /// A transitive subtournament of size `tr`, in transitive order.
    pub witness: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<f64>,
}

/// `min log(tr)/log(n)` over the records, as a float plus the exact value
/// when it is rational (`tr^q = n^p` for small `p, q`).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EpsilonEstimate {
    pub value: f64,
    #[serde(serialize_with = "ser_opt_rational")]
    pub exact: Option<Rational>,
    /// Index of the record attaining the minimum.
    pub record: usize,
}

fn ser_opt_rational<S: serde::Serializer>(r: &Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.collect_str(r),
        None => s.serialize_none(),
    }
}

fn exact_log_ratio(tr: usize, n: usize) -> Option<Rational> {
    if tr == 1 {
        return Some(Rational::from_integer(0));
    }
    let (a, b) = (BigUint::from(tr), BigUint::from(n));
    for q in 1u32..=64 {
        let aq: BigUint = Pow::pow(&a, q);
        for p in 0u32..=q {
            let bp: BigUint = Pow::pow(&b, p);
            if bp == aq {
                return Some(Rational::new(p as i64, q as i64));
            }
            if bp > aq {
                break;
            }
        }
    }
    None
}

/// The largest exponent ε with `tr ≥ n^ε` for every record.
pub fn estimate_epsilon(records: &[ExperimentRecord]) -> Result<EpsilonEstimate> {
    if records.is_empty() {
        return Err(CoreError::Precondition("no records to estimate from".into()));
    }
    let mut best: Option<(usize, f64)> = None;
    for (i, r) in records.iter().enumerate() {
        if r.n < 2 || r.tr == 0 || r.tr > r.n {
            return Err(CoreError::Precondition(format!(
                "record {i} has n = {}, tr = {}",
                r.n, r.tr
            )));
        }
        let e = (r.tr as f64).ln() / (r.n as f64).ln();
        if best.is_none_or(|(_, b)| e < b) {
            best = Some((i, e));
        }
    }
    let (i, value) = best.expect("nonempty");
    let exact = exact_log_ratio(records[i].tr, records[i].n);
    let value = exact.map_or(value, |r| *r.numer() as f64 / *r.denom() as f64);
    Ok(EpsilonEstimate {
        value,
        exact,
        record: i,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SizeSummary {
    pub n: usize,
    pub samples: usize,
    pub free: usize,
    pub rejects: u64,
    /// Rejected draws over all draws.
    pub rejection_rate: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentSummary {
    pub records: usize,
    pub free: usize,
    /// Over free records with `n ≥ 2`; absent when there are none.
    pub epsilon: Option<EpsilonEstimate>,
    pub sizes: Vec<SizeSummary>,
    pub thresholds: std::collections::BTreeMap<&'static str, Bound>,
}

#[derive(Serialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
enum Line<'a> {
    Record(&'a ExperimentRecord),
    Summary(&'a ExperimentSummary),
}

fn sample_rng(seed: u64, n: usize, sample: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((n as u64) << 32) | sample as u64);
    rng
}

fn run_one(cfg: &ExperimentConfig, family: &[Tournament], n: usize, sample: usize) -> Result<ExperimentRecord> {
    let start = Instant::now();
    let mut rng = sample_rng(cfg.seed, n, sample);
    let (t, is_free, rejects) = match sample_free(n, family, &mut rng, cfg.max_rejects) {
        Ok(s) => (s.tournament, true, s.rejects),
        Err(CoreError::BudgetExceeded(_)) => (sample_tournament(n, &mut rng), false, cfg.max_rejects),
        Err(e) => return Err(e),
    };
    let (tr, witness) = tr_exact_with_limit(&t, cfg.tr_limit)?;
    Ok(ExperimentRecord {
        n,
        sample,
        is_free,
        rejects,
        tr,
        tournament: t,
        witness,
        elapsed_ms: cfg.timing.then(|| start.elapsed().as_secs_f64() * 1e3),
    })
}

/// Runs the configured experiment, writing one JSON record per line and a
/// final summary line. Family files are read relative to the working
/// directory unless given absolute.
pub fn run_experiment(
    cfg: &ExperimentConfig,
    out: &mut dyn Write,
) -> std::result::Result<ExperimentSummary, HarnessError> {
    let family = cfg.load_family()?;
    run_experiment_with_family(cfg, &family, out)
}

pub fn run_experiment_with_family(
    cfg: &ExperimentConfig,
    family: &[Tournament],
    out: &mut dyn Write,
) -> std::result::Result<ExperimentSummary, HarnessError> {
    cfg.validate()?;
    let thresholds = epsilon_thresholds(&cfg.thresholds)?;
    if let (Some(lambda), Some(b)) = (cfg.lambda, thresholds.get("lambda_key")) {
        if !b.exceeds(lambda) {
            return Err(HarnessError::Config(format!(
                "λ = {lambda} is not below 1/(2δ)^(δ+3) = {b}"
            )));
        }
    }
    let mut all = Vec::new();
    let mut sizes = Vec::new();
    for &n in &cfg.sizes {
        let units: Vec<usize> = (0..cfg.samples).collect();
        let recs = crate::par::map_collect(units, |s| run_one(cfg, family, n, s));
        let recs: Vec<ExperimentRecord> = recs.into_iter().collect::<Result<_>>()?;
        for r in &recs {
            serde_json::to_writer(&mut *out, &Line::Record(r)).map_err(std::io::Error::from)?;
            out.write_all(b"\n")?;
        }
        out.flush()?;
        let free = recs.iter().filter(|r| r.is_free).count();
        let rejects: u64 = recs.iter().map(|r| r.rejects).sum();
        let draws = rejects + free as u64;
        sizes.push(SizeSummary {
            n,
            samples: recs.len(),
            free,
            rejects,
            rejection_rate: if draws == 0 { 0.0 } else { rejects as f64 / draws as f64 },
        });
        all.extend(recs);
    }
    let usable: Vec<ExperimentRecord> = all.iter().filter(|r| r.is_free && r.n >= 2).cloned().collect();
    let summary = ExperimentSummary {
        records: all.len(),
        free: all.iter().filter(|r| r.is_free).count(),
        epsilon: if usable.is_empty() {
            None
        } else {
            Some(estimate_epsilon(&usable)?)
        },
        sizes,
        thresholds,
    };
    serde_json::to_writer(&mut *out, &Line::Summary(&summary)).map_err(std::io::Error::from)?;
    out.write_all(b"\n")?;
    out.flush()?;
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_ratios() {
        assert_eq!(exact_log_ratio(2, 4), Some(Rational::new(1, 2)));
        assert_eq!(exact_log_ratio(8, 8), Some(Rational::from_integer(1)));
        assert_eq!(exact_log_ratio(4, 8), Some(Rational::new(2, 3)));
        assert_eq!(exact_log_ratio(3, 8), None);
    }

    #[test]
    fn streams_differ_per_sample() {
        let a = sample_tournament(10, &mut sample_rng(1, 10, 0));
        let b = sample_tournament(10, &mut sample_rng(1, 10, 1));
        assert_ne!(a, b);
    }
}
