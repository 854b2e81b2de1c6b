//! Monte Carlo experiments: configuration, trial execution, CSV records,
//! summaries and parameter sweeps.

mod config;
mod summary;
mod trial;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use thiserror::Error;

use crate::adversary::AdversaryError;
use crate::codebook::{generate_codebook, Codebook, CodebookError};
use crate::seed::{derive_seed, Role};

pub use config::{CodeRate, EncoderKind, ExperimentConfig, StrategyKind};
pub use summary::{binomial_se, parse_summary, summary_text, verify_summary, Summary};
pub use trial::{
    read_records, run_trial, run_trials, write_records, write_trace, TrialContext, TrialRecord, TrialRun, AMBIGUOUS,
    RECORDS_HEADER,
};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Codebook(#[from] CodebookError),
    #[error(transparent)]
    Adversary(#[from] AdversaryError),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
    #[error("summary does not match records: {0}")]
    Verify(String),
}

pub fn build_codebook(config: &ExperimentConfig) -> Result<Codebook, HarnessError> {
    Ok(generate_codebook(config.code_params()?, config.code_seed))
}

#[derive(Debug, Clone)]
pub struct Experiment {
    pub records: Vec<TrialRecord>,
    pub summary: Summary,
    pub budget: usize,
}

impl Experiment {
    pub fn csv(&self) -> Vec<u8> {
        let mut buf = Vec::new();
        write_records(&self.records, &mut buf).expect("writing to memory");
        buf
    }

    pub fn summary_text(&self, config: &ExperimentConfig) -> String {
        let mut context: Vec<(String, String)> = config
            .to_text()
            .lines()
            .filter_map(|l| l.split_once('=').map(|(k, v)| (format!("config.{k}"), v.to_string())))
            .collect();
        context.push(("budget".into(), self.budget.to_string()));
        summary_text(&self.summary, &context)
    }

    /// Writes the records to `csv_path` and the summary next to it.
    pub fn write(&self, config: &ExperimentConfig, csv_path: &Path) -> Result<PathBuf, HarnessError> {
        let mut out = BufWriter::new(File::create(csv_path)?);
        out.write_all(&self.csv())?;
        out.flush()?;
        let summary_path = summary_path_for(csv_path);
        std::fs::write(&summary_path, self.summary_text(config))?;
        Ok(summary_path)
    }
}

/// `runs/a.csv` -> `runs/a.summary.txt`.
pub fn summary_path_for(csv_path: &Path) -> PathBuf {
    csv_path.with_extension("summary.txt")
}

pub fn run_on(cb: &Codebook, config: &ExperimentConfig) -> Result<Experiment, HarnessError> {
    let records = run_trials(cb, config)?;
    let summary = Summary::from_records(&records);
    Ok(Experiment { records, summary, budget: cb.params().budget() })
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<Experiment, HarnessError> {
    config.validate()?;
    run_on(&build_codebook(config)?, config)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    P,
    Epsilon,
    Delta,
    N,
    NumMessages,
}

impl FromStr for SweepAxis {
    type Err = HarnessError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "p" => Ok(SweepAxis::P),
            "epsilon" => Ok(SweepAxis::Epsilon),
            "delta" => Ok(SweepAxis::Delta),
            "n" => Ok(SweepAxis::N),
            "num_messages" | "messages" => Ok(SweepAxis::NumMessages),
            _ => Err(HarnessError::Config(format!(
                "invalid sweep axis `{s}` (expected p, epsilon, delta, n or num_messages)"
            ))),
        }
    }
}

impl SweepAxis {
    pub fn name(self) -> &'static str {
        match self {
            SweepAxis::P => "p",
            SweepAxis::Epsilon => "epsilon",
            SweepAxis::Delta => "delta",
            SweepAxis::N => "n",
            SweepAxis::NumMessages => "num_messages",
        }
    }

    fn apply(self, config: &mut ExperimentConfig, value: f64) -> Result<(), HarnessError> {
        let whole = || {
            if value >= 1.0 && value.fract() == 0.0 {
                Ok(value as usize)
            } else {
                Err(HarnessError::Config(format!("{} must be a positive integer, got {value}", self.name())))
            }
        };
        match self {
            SweepAxis::P => config.p = value,
            SweepAxis::Epsilon => config.epsilon = value,
            SweepAxis::Delta => config.delta = value,
            SweepAxis::N => config.n = whole()?,
            SweepAxis::NumMessages => config.messages = Some(whole()?),
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct SweepPoint {
    pub value: f64,
    pub config: ExperimentConfig,
    pub budget: usize,
    pub summary: Summary,
}

/// One experiment per value. Point `i` uses experiment and code seeds derived
/// from the base seeds and `i`.
pub fn sweep(base: &ExperimentConfig, axis: SweepAxis, values: &[f64]) -> Result<Vec<SweepPoint>, HarnessError> {
    if values.is_empty() {
        return Err(HarnessError::Config("sweep needs at least one value".into()));
    }
    values
        .iter()
        .enumerate()
        .map(|(i, &value)| {
            let mut config = base.clone();
            axis.apply(&mut config, value)?;
            config.seed = derive_seed(base.seed, Role::Sweep, i as u64);
            config.code_seed = derive_seed(base.code_seed, Role::Sweep, i as u64);
            let exp = run_experiment(&config)?;
            Ok(SweepPoint { value, config, budget: exp.budget, summary: exp.summary })
        })
        .collect()
}

/// Combined sweep table: the axis value, the budget, then every summary entry.
pub fn write_sweep<W: Write>(axis: SweepAxis, points: &[SweepPoint], out: W) -> Result<(), HarnessError> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec![axis.name().to_string(), "budget".to_string()];
    header.extend(points[0].summary.entries().into_iter().map(|(k, _)| k));
    w.write_record(&header)?;
    for p in points {
        let mut row = vec![p.value.to_string(), p.budget.to_string()];
        row.extend(p.summary.entries().into_iter().map(|(_, v)| v));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}
