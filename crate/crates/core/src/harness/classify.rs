//! Attack-signature classifier.
//!
//! Each attack family leaves a characteristic trace in the winner scores of
//! its suite: blurs stay low and flat, a flip triple contains a near-zero
//! score (the 180-degree turn) beside much larger ones, crops climb steadily,
//! and rotations miss often with no clear trend.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{ClassifierConfig, CsvRow, HarnessError, SuiteResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AttackLabel {
    Blur,
    Crop,
    Rotation,
    Flip,
    Unknown,
}

impl fmt::Display for AttackLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AttackLabel::Blur => "Blur",
            AttackLabel::Crop => "Crop",
            AttackLabel::Rotation => "Rotation",
            AttackLabel::Flip => "Flip",
            AttackLabel::Unknown => "Unknown",
        })
    }
}

impl FromStr for AttackLabel {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        [
            AttackLabel::Blur,
            AttackLabel::Crop,
            AttackLabel::Rotation,
            AttackLabel::Flip,
            AttackLabel::Unknown,
        ]
        .into_iter()
        .find(|l| l.to_string() == s)
        .ok_or_else(|| HarnessError::Classify(format!("unknown label `{s}`")))
    }
}

/// Statistics the decision was based on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Evidence {
    pub count: usize,
    pub min: f64,
    pub max: f64,
    pub range: f64,
    /// Least-squares slope of score against step.
    pub slope: f64,
    pub error_rate: f64,
    /// Non-decreasing within the configured tolerance.
    pub monotone: bool,
    /// Length of the leading run of correct retrievals.
    pub correct_run: usize,
    /// Non-decreasing (within tolerance) over that leading run.
    pub rising_until_miss: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AttackSignature {
    pub label: AttackLabel,
    pub evidence: Evidence,
}

fn slope(scores: &[f64]) -> f64 {
    let n = scores.len() as f64;
    let mx = (n - 1.0) / 2.0;
    let my = scores.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (i, &y) in scores.iter().enumerate() {
        let dx = i as f64 - mx;
        sxy += dx * (y - my);
        sxx += dx * dx;
    }
    if sxx == 0.0 {
        0.0
    } else {
        sxy / sxx
    }
}

/// Classifies a suite from its winner scores (in step order) and whether
/// each retrieval was correct.
pub fn classify_scores(
    scores: &[f64],
    correct: &[bool],
    cfg: &ClassifierConfig,
) -> Result<AttackSignature, HarnessError> {
    if scores.len() < 3 {
        return Err(HarnessError::Classify(format!(
            "need at least 3 tests, got {}",
            scores.len()
        )));
    }
    if scores.len() != correct.len() {
        return Err(HarnessError::Classify("scores and outcomes differ in length".into()));
    }
    let rising = |s: &[f64]| s.windows(2).all(|w| w[1] >= w[0] - cfg.monotone_tolerance);
    let correct_run = correct.iter().take_while(|&&c| c).count();
    let min = scores.iter().copied().fold(f64::INFINITY, f64::min);
    let max = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let evidence = Evidence {
        count: scores.len(),
        min,
        max,
        range: max - min,
        slope: slope(scores),
        error_rate: correct.iter().filter(|&&c| !c).count() as f64 / correct.len() as f64,
        monotone: rising(scores),
        correct_run,
        rising_until_miss: rising(&scores[..correct_run]),
    };

    let label = if evidence.count == 3 && min < cfg.flip_min && max > cfg.flip_spread * cfg.flip_min
    {
        AttackLabel::Flip
    } else if max < cfg.blur_max && evidence.range < cfg.blur_range {
        AttackLabel::Blur
    } else if evidence.range >= cfg.crop_range
        && (evidence.monotone
            || (evidence.rising_until_miss && correct_run >= cfg.crop_min_run))
    {
        // a steady climb, possibly levelling off into noise once retrieval
        // starts to fail
        AttackLabel::Crop
    } else if evidence.error_rate >= cfg.rotation_error_rate && !evidence.monotone {
        AttackLabel::Rotation
    } else {
        AttackLabel::Unknown
    };
    Ok(AttackSignature { label, evidence })
}

pub fn classify_attack(
    suite: &SuiteResult,
    cfg: &ClassifierConfig,
) -> Result<AttackSignature, HarnessError> {
    let scores: Vec<f64> = suite.records.iter().map(|r| r.report.winner.score.value()).collect();
    let correct: Vec<bool> = suite.records.iter().map(|r| r.correct()).collect();
    classify_scores(&scores, &correct, cfg)
}

/// Classifies the rows of one suite CSV (sorted by step first).
pub fn classify_rows(rows: &[CsvRow], cfg: &ClassifierConfig) -> Result<AttackSignature, HarnessError> {
    let mut rows: Vec<&CsvRow> = rows.iter().collect();
    rows.sort_by_key(|r| r.step);
    let scores: Vec<f64> = rows.iter().map(|r| r.winner_score).collect();
    let correct: Vec<bool> = rows.iter().map(|r| r.is_correct()).collect();
    classify_scores(&scores, &correct, cfg)
}
