//! Experiment harness: synthetic dataset, attack suites, bulk querying,
//! result logs and CSVs, and the attack-signature classifier.

mod classify;
mod config;
pub mod dataset;
mod log;
mod report;
mod suite;

use std::path::Path;

pub use self::classify::{classify_attack, classify_rows, classify_scores, AttackLabel, AttackSignature, Evidence};
pub use self::config::{ClassifierConfig, Config};
pub use self::dataset::{synthetic_image, write_dataset, DATASET_STEMS, DEFAULT_SIZE, DEFAULT_TESTSET};
pub use self::log::{parse_log, render_entries, write_log, write_log_to, LogEntry};
pub use self::report::{aggregation_violation, emit_csv, read_csv, CsvRow, CSV_HEADER};
pub use self::suite::{
    attack_file_name, generate_attacks, parse_attack_file_name, run_generated, run_suite, run_test,
    write_attacks, GeneratedAttack, SuiteResult, TestRecord, TruthMap,
};

use crate::imagecore::ImageError;
use crate::network::NetworkError;

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("{path}: {reason}")]
    Io { path: String, reason: String },
    #[error(transparent)]
    Image(#[from] ImageError),
    #[error(transparent)]
    Network(#[from] NetworkError),
    #[error("config line {line}: {reason}")]
    Config { line: usize, reason: String },
    #[error("truth map line {line}: {reason}")]
    Truth { line: usize, reason: String },
    #[error("log line {line}: {reason}")]
    Log { line: usize, reason: String },
    #[error("csv: {0}")]
    Csv(String),
    #[error("classifier: {0}")]
    Classify(String),
    #[error("no ground truth for `{0}`")]
    UnknownStem(String),
    #[error("suite directory {0} holds no attack images")]
    EmptySuite(String),
}

impl HarnessError {
    pub fn io(path: &Path, err: std::io::Error) -> HarnessError {
        HarnessError::Io {
            path: path.display().to_string(),
            reason: err.to_string(),
        }
    }
}

/// Writes `<name>.log` and `<name>.csv` for each suite into `out_dir`.
pub fn write_results(out_dir: &Path, suites: &[SuiteResult]) -> Result<(), HarnessError> {
    std::fs::create_dir_all(out_dir).map_err(|e| HarnessError::io(out_dir, e))?;
    for suite in suites {
        let log = out_dir.join(format!("{}.log", suite.name()));
        std::fs::write(&log, write_log(suite)).map_err(|e| HarnessError::io(&log, e))?;
        let csv = out_dir.join(format!("{}.csv", suite.name()));
        std::fs::write(&csv, emit_csv(suite)?).map_err(|e| HarnessError::io(&csv, e))?;
    }
    Ok(())
}
