//! Per-test result logs.
//!
//! ```text
//! -----
//! mandrill_crop_2.png:
//! Best Score: 0.03371293156076527 using RadialVarianceHash
//! Image Found: images/mandrill.png (7)
//!
//! AverageHash:      (7) 0.34375
//! PHash:            (5) 0.421875
//! BlockMeanHash:    (7) 0.3359375
//! MarrHildrethHash: (7) 0.4236111111111111
//! RadialVarianceHash: (7) 0.03371293156076527
//! -----
//! ```
//!
//! Scores are printed as the shortest decimal that round-trips to the same
//! `f64`, so [`parse_log`] recovers every value exactly.

use std::fmt::Write as _;

use super::{HarnessError, SuiteResult, TestRecord};
use crate::phash::AlgorithmId;

const RULE: &str = "-----";

/// One test as it appears in a log.
#[derive(Debug, Clone, PartialEq)]
pub struct LogEntry {
    pub test_name: String,
    pub best_score: f64,
    pub best_algo: AlgorithmId,
    pub image_found: String,
    pub found_block: usize,
    /// `(algorithm, block, score)` in precedence order.
    pub per_algo: Vec<(AlgorithmId, usize, f64)>,
}

impl LogEntry {
    pub fn from_record(rec: &TestRecord) -> LogEntry {
        let w = &rec.report.winner;
        LogEntry {
            test_name: rec.test_name.clone(),
            best_score: w.score.value(),
            best_algo: w.algo,
            image_found: w.image_ref.clone(),
            found_block: w.found_block,
            per_algo: rec
                .report
                .per_device
                .iter()
                .map(|r| (r.algo, r.found_block, r.score.value()))
                .collect(),
        }
    }
}

fn write_entry(out: &mut String, e: &LogEntry) {
    // writing into a String cannot fail
    let _ = writeln!(out, "{}:", e.test_name);
    let _ = writeln!(out, "Best Score: {:?} using {}", e.best_score, e.best_algo);
    let _ = writeln!(out, "Image Found: {} ({})", e.image_found, e.found_block);
    out.push('\n');
    for (algo, block, score) in &e.per_algo {
        let label = format!("{algo}:");
        let _ = writeln!(out, "{label:<17} ({block}) {score:?}");
    }
    let _ = writeln!(out, "{RULE}");
}

/// Renders every test of `suite` in order.
pub fn write_log(suite: &SuiteResult) -> String {
    render_entries(suite.records.iter().map(LogEntry::from_record))
}

pub fn render_entries(entries: impl IntoIterator<Item = LogEntry>) -> String {
    let mut out = format!("{RULE}\n");
    for e in entries {
        write_entry(&mut out, &e);
    }
    out
}

/// Writes the log of `suite` to `sink`.
pub fn write_log_to(suite: &SuiteResult, sink: &mut impl std::io::Write) -> std::io::Result<()> {
    sink.write_all(write_log(suite).as_bytes())
}

fn parse_score(s: &str, line: usize) -> Result<f64, HarnessError> {
    let v: f64 = s.parse().map_err(|_| HarnessError::Log {
        line,
        reason: format!("bad score `{s}`"),
    })?;
    // only the canonical rendering is accepted
    if format!("{v:?}") != s {
        return Err(HarnessError::Log {
            line,
            reason: format!("score `{s}` is not in shortest round-trip form"),
        });
    }
    Ok(v)
}

/// `<text> (<index>)`, splitting at the last ` (`.
fn parse_ref(s: &str, line: usize) -> Result<(&str, usize), HarnessError> {
    let bad = || HarnessError::Log {
        line,
        reason: format!("expected `<ref> (<block>)`, got `{s}`"),
    };
    let (text, idx) = s.rsplit_once(" (").ok_or_else(bad)?;
    let idx = idx.strip_suffix(')').ok_or_else(bad)?;
    if idx.is_empty() || !idx.bytes().all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    Ok((text, idx.parse().map_err(|_| bad())?))
}

/// Parses a log produced by [`write_log`]. Strict about every line shape;
/// the only freedom is the run of spaces that aligns the per-algorithm
/// block indices.
pub fn parse_log(text: &str) -> Result<Vec<LogEntry>, HarnessError> {
    let lines: Vec<&str> = text.split('\n').collect();
    let err = |line: usize, reason: &str| HarnessError::Log {
        line: line + 1,
        reason: reason.to_string(),
    };
    if lines.last() != Some(&"") {
        return Err(err(lines.len() - 1, "log must end with a newline"));
    }
    let lines = &lines[..lines.len() - 1];
    if lines.first() != Some(&RULE) {
        return Err(err(0, "log must start with `-----`"));
    }

    let mut entries = Vec::new();
    let mut i = 1;
    let n_algos = AlgorithmId::ALL.len();
    while i < lines.len() {
        if lines.len() < i + 5 + n_algos {
            return Err(err(i, "truncated entry"));
        }
        let test_name = lines[i]
            .strip_suffix(':')
            .filter(|s| !s.is_empty())
            .ok_or_else(|| err(i, "expected `<name>:`"))?;

        let best = lines[i + 1]
            .strip_prefix("Best Score: ")
            .ok_or_else(|| err(i + 1, "expected `Best Score: <s> using <Algo>`"))?;
        let (score, algo) = best
            .split_once(" using ")
            .ok_or_else(|| err(i + 1, "expected `Best Score: <s> using <Algo>`"))?;
        let best_score = parse_score(score, i + 2)?;
        let best_algo: AlgorithmId = algo.parse().map_err(|_| err(i + 1, "unknown algorithm"))?;

        let found = lines[i + 2]
            .strip_prefix("Image Found: ")
            .ok_or_else(|| err(i + 2, "expected `Image Found: <ref> (<block>)`"))?;
        let (image_found, found_block) = parse_ref(found, i + 3)?;

        if !lines[i + 3].is_empty() {
            return Err(err(i + 3, "expected a blank line"));
        }

        let mut per_algo = Vec::with_capacity(n_algos);
        for (k, expected) in AlgorithmId::ALL.iter().enumerate() {
            let ln = i + 4 + k;
            let line = lines[ln];
            let (name, rest) = line
                .split_once(':')
                .ok_or_else(|| err(ln, "expected `<Algo>: (<block>) <score>`"))?;
            if name != expected.name() {
                return Err(err(ln, &format!("expected {expected} here")));
            }
            let rest = rest.trim_start_matches(' ');
            if rest.len() + name.len() + 1 == line.len() {
                return Err(err(ln, "missing space after the algorithm name"));
            }
            let (block, score) = rest
                .strip_prefix('(')
                .and_then(|r| r.split_once(") "))
                .ok_or_else(|| err(ln, "expected `(<block>) <score>`"))?;
            if block.is_empty() || !block.bytes().all(|b| b.is_ascii_digit()) {
                return Err(err(ln, "bad block index"));
            }
            let block = block.parse().map_err(|_| err(ln, "bad block index"))?;
            per_algo.push((*expected, block, parse_score(score, ln + 1)?));
        }

        let close = i + 4 + n_algos;
        if lines[close] != RULE {
            return Err(err(close, "expected `-----`"));
        }
        entries.push(LogEntry {
            test_name: test_name.to_string(),
            best_score,
            best_algo,
            image_found: image_found.to_string(),
            found_block,
            per_algo,
        });
        i = close + 1;
    }
    Ok(entries)
}
