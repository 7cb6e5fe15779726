//! Per-suite CSV tables.

use serde::Deserialize;

use super::{HarnessError, SuiteResult};
use crate::phash::AlgorithmId;

pub const CSV_HEADER: [&str; 18] = [
    "stem",
    "attack",
    "step",
    "param",
    "winner_algo",
    "winner_block",
    "winner_score",
    "correct",
    "avg_score",
    "ph_score",
    "bm_score",
    "mh_score",
    "rv_score",
    "avg_block",
    "ph_block",
    "bm_block",
    "mh_block",
    "rv_block",
];

/// One CSV row, as read back by [`read_csv`].
#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct CsvRow {
    pub stem: String,
    pub attack: String,
    pub step: u32,
    pub param: f64,
    pub winner_algo: String,
    pub winner_block: usize,
    pub winner_score: f64,
    pub correct: u8,
    pub avg_score: f64,
    pub ph_score: f64,
    pub bm_score: f64,
    pub mh_score: f64,
    pub rv_score: f64,
    pub avg_block: usize,
    pub ph_block: usize,
    pub bm_block: usize,
    pub mh_block: usize,
    pub rv_block: usize,
}

impl CsvRow {
    /// Per-algorithm scores in precedence order.
    pub fn scores(&self) -> [f64; 5] {
        [self.avg_score, self.ph_score, self.bm_score, self.mh_score, self.rv_score]
    }

    pub fn blocks(&self) -> [usize; 5] {
        [self.avg_block, self.ph_block, self.bm_block, self.mh_block, self.rv_block]
    }

    pub fn is_correct(&self) -> bool {
        self.correct == 1
    }
}

fn csv_err(e: csv::Error) -> HarnessError {
    HarnessError::Csv(e.to_string())
}

/// Renders one row per test. Scores use the same shortest round-trip form
/// as the logs.
pub fn emit_csv(suite: &SuiteResult) -> Result<String, HarnessError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER).map_err(csv_err)?;
    for rec in &suite.records {
        let report = &rec.report;
        let mut row = vec![
            suite.stem.clone(),
            suite.kind.to_string(),
            rec.attack.step.to_string(),
            rec.attack.parameter.to_string(),
            report.winner.algo.to_string(),
            report.winner.found_block.to_string(),
            format!("{:?}", report.winner.score.value()),
            u8::from(rec.correct()).to_string(),
        ];
        let results: Vec<_> = AlgorithmId::ALL
            .iter()
            .map(|&a| {
                report
                    .result_for(a)
                    .ok_or_else(|| HarnessError::Csv(format!("{}: no {a} result", rec.test_name)))
            })
            .collect::<Result<_, _>>()?;
        row.extend(results.iter().map(|r| format!("{:?}", r.score.value())));
        row.extend(results.iter().map(|r| r.found_block.to_string()));
        w.write_record(&row).map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| HarnessError::Csv(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

pub fn read_csv(text: &str) -> Result<Vec<CsvRow>, HarnessError> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let headers = r.headers().map_err(csv_err)?;
    if headers.iter().ne(CSV_HEADER) {
        return Err(HarnessError::Csv(format!("unexpected header {headers:?}")));
    }
    r.deserialize().map(|row| row.map_err(csv_err)).collect()
}

/// A row that breaks the aggregation rule: the winner must hold the row
/// minimum and be the first algorithm (in precedence order) to reach it.
pub fn aggregation_violation(row: &CsvRow) -> Option<String> {
    let scores = row.scores();
    let min = scores.iter().copied().fold(f64::INFINITY, f64::min);
    let first = AlgorithmId::ALL[scores.iter().position(|&s| s == min)?];
    if row.winner_score != min {
        return Some(format!("winner score {} is not the row minimum {min}", row.winner_score));
    }
    if row.winner_algo != first.name() {
        return Some(format!("winner {} but {first} is first at the minimum", row.winner_algo));
    }
    let idx = AlgorithmId::ALL.iter().position(|&a| a == first)?;
    if row.winner_block != row.blocks()[idx] {
        return Some(format!("winner block {} differs from {first}'s", row.winner_block));
    }
    None
}
