//! `key=value` configuration file.
//!
//! ```text
//! # comment
//! difficulty=4
//! crop.anchor=center        # or topleft
//! rotate.expand=false
//! replicas=shared           # or deep
//! classifier.blur_max=0.15
//! testset=house,lake,mandrill,peppers,woman_blonde
//! ```

use std::path::Path;

use super::HarnessError;
use crate::chain::DEFAULT_DIFFICULTY;
use crate::harness::dataset::DEFAULT_TESTSET;
use crate::imagecore::{CropAnchor, TransformOptions};
use crate::network::ReplicaMode;

/// Thresholds for the attack-signature decision ladder.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassifierConfig {
    /// A flip triple needs its best score below this.
    pub flip_min: f64,
    /// ...and its worst score above `flip_spread * flip_min`.
    pub flip_spread: f64,
    /// Blur suites stay below this score...
    pub blur_max: f64,
    /// ...and within this range.
    pub blur_range: f64,
    /// Allowed dip between consecutive scores of a "non-decreasing" series.
    pub monotone_tolerance: f64,
    /// Crop suites rise by at least this much overall.
    pub crop_range: f64,
    /// A crop curve may turn noisy after its first miss, but only once it
    /// has climbed for at least this many correct retrievals.
    pub crop_min_run: usize,
    /// Rotation suites miss at least this fraction of retrievals.
    pub rotation_error_rate: f64,
}

impl Default for ClassifierConfig {
    fn default() -> Self {
        ClassifierConfig {
            flip_min: 0.05,
            flip_spread: 1.5,
            blur_max: 0.15,
            blur_range: 0.08,
            monotone_tolerance: 0.02,
            crop_range: 0.08,
            crop_min_run: 3,
            rotation_error_rate: 0.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub difficulty: u32,
    pub transform: TransformOptions,
    pub replicas: ReplicaMode,
    pub classifier: ClassifierConfig,
    pub testset: Vec<String>,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            difficulty: DEFAULT_DIFFICULTY,
            transform: TransformOptions::default(),
            replicas: ReplicaMode::Shared,
            classifier: ClassifierConfig::default(),
            testset: DEFAULT_TESTSET.iter().map(|s| s.to_string()).collect(),
        }
    }
}

impl Config {
    pub fn parse(text: &str) -> Result<Config, HarnessError> {
        let mut cfg = Config::default();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |reason: String| HarnessError::Config {
                line: n + 1,
                reason,
            };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| bad(format!("expected key=value, got `{line}`")))?;
            let (key, value) = (key.trim(), value.trim());
            let num = || value.parse::<f64>().map_err(|e| bad(format!("{key}: {e}")));
            match key {
                "difficulty" => {
                    cfg.difficulty = value.parse().map_err(|e| bad(format!("difficulty: {e}")))?
                }
                "crop.anchor" => {
                    cfg.transform.crop_anchor = match value {
                        "center" => CropAnchor::Center,
                        "topleft" => CropAnchor::TopLeft,
                        _ => return Err(bad(format!("crop.anchor: unknown anchor `{value}`"))),
                    }
                }
                "rotate.expand" => {
                    cfg.transform.rotate_expand =
                        value.parse().map_err(|e| bad(format!("rotate.expand: {e}")))?
                }
                "replicas" => {
                    cfg.replicas = match value {
                        "shared" => ReplicaMode::Shared,
                        "deep" => ReplicaMode::Deep,
                        _ => return Err(bad(format!("replicas: unknown mode `{value}`"))),
                    }
                }
                "testset" => {
                    cfg.testset = value
                        .split(',')
                        .map(str::trim)
                        .filter(|s| !s.is_empty())
                        .map(String::from)
                        .collect()
                }
                "classifier.flip_min" => cfg.classifier.flip_min = num()?,
                "classifier.flip_spread" => cfg.classifier.flip_spread = num()?,
                "classifier.blur_max" => cfg.classifier.blur_max = num()?,
                "classifier.blur_range" => cfg.classifier.blur_range = num()?,
                "classifier.monotone_tolerance" => cfg.classifier.monotone_tolerance = num()?,
                "classifier.crop_range" => cfg.classifier.crop_range = num()?,
                "classifier.crop_min_run" => {
                    cfg.classifier.crop_min_run =
                        value.parse().map_err(|e| bad(format!("{key}: {e}")))?
                }
                "classifier.rotation_error_rate" => cfg.classifier.rotation_error_rate = num()?,
                _ => return Err(bad(format!("unknown key `{key}`"))),
            }
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Config, HarnessError> {
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
        Config::parse(&text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults() {
        let cfg = Config::parse("").unwrap();
        assert_eq!(cfg, Config::default());
        assert_eq!(cfg.difficulty, 4);
        assert_eq!(cfg.testset.len(), 5);
        assert_eq!(cfg.transform.crop_anchor, CropAnchor::Center);
        assert!(!cfg.transform.rotate_expand);
    }

    #[test]
    fn overrides() {
        let cfg = Config::parse(
            "# test\ndifficulty = 2\ncrop.anchor=topleft\nrotate.expand=true\nreplicas=deep\n\
             classifier.blur_max=0.2 # inline\ntestset=lake, house\n",
        )
        .unwrap();
        assert_eq!(cfg.difficulty, 2);
        assert_eq!(cfg.transform.crop_anchor, CropAnchor::TopLeft);
        assert!(cfg.transform.rotate_expand);
        assert_eq!(cfg.replicas, ReplicaMode::Deep);
        assert_eq!(cfg.classifier.blur_max, 0.2);
        assert_eq!(cfg.testset, vec!["lake", "house"]);
    }

    #[test]
    fn errors_carry_line() {
        let err = Config::parse("difficulty=2\nbogus=1\n").unwrap_err();
        assert!(matches!(err, HarnessError::Config { line: 2, .. }));
        assert!(Config::parse("difficulty").is_err());
        assert!(Config::parse("crop.anchor=middle").is_err());
        assert!(Config::parse("classifier.flip_min=abc").is_err());
    }
}
