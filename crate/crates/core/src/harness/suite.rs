//! Attack-suite generation, ground truth, and bulk querying.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::HarnessError;
use crate::chain::Chain;
use crate::imagecore::{read_image, write_image, AttackSpec, Image, SuiteKind, TransformOptions};
use crate::network::{Network, QueryReport};

/// `<stem>_<kind>_<step>.png`
pub fn attack_file_name(stem: &str, kind: SuiteKind, step: u32) -> String {
    format!("{stem}_{kind}_{step}.png")
}

/// Splits an attack file name into stem, suite kind and step. Stems may
/// themselves contain underscores.
pub fn parse_attack_file_name(name: &str) -> Option<(String, SuiteKind, u32)> {
    let base = name.strip_suffix(".png")?;
    let mut parts = base.rsplitn(3, '_');
    let step = parts.next()?.parse::<u32>().ok()?;
    let kind = parts.next()?.parse::<SuiteKind>().ok()?;
    let stem = parts.next().filter(|s| !s.is_empty())?;
    kind.spec(step)?;
    Some((stem.to_string(), kind, step))
}

#[derive(Debug, Clone)]
pub struct GeneratedAttack {
    pub spec: AttackSpec,
    pub file_name: String,
    pub image: Image,
}

/// Renders the canonical suite of `kind` for one source image.
pub fn generate_attacks(
    img: &Image,
    stem: &str,
    kind: SuiteKind,
    opts: &TransformOptions,
) -> Result<Vec<GeneratedAttack>, HarnessError> {
    kind.specs()
        .into_par_iter()
        .map(|spec| {
            Ok(GeneratedAttack {
                file_name: attack_file_name(stem, kind, spec.step),
                image: spec.apply(img, opts)?,
                spec,
            })
        })
        .collect()
}

/// Generates a suite and writes it into `dir`; returns the written paths.
pub fn write_attacks(
    img: &Image,
    stem: &str,
    kind: SuiteKind,
    opts: &TransformOptions,
    dir: &Path,
) -> Result<Vec<PathBuf>, HarnessError> {
    std::fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))?;
    generate_attacks(img, stem, kind, opts)?
        .into_iter()
        .map(|a| {
            let path = dir.join(&a.file_name);
            write_image(&path, &a.image)?;
            Ok(path)
        })
        .collect()
}

/// Maps image stems to the block that enrolled them.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TruthMap(BTreeMap<String, usize>);

impl TruthMap {
    pub fn from_chain(chain: &Chain) -> TruthMap {
        TruthMap(
            chain
                .blocks()
                .iter()
                .skip(1)
                .filter_map(|b| {
                    let stem = Path::new(&b.image_ref).file_stem()?.to_str()?.to_string();
                    Some((stem, b.index as usize))
                })
                .collect(),
        )
    }

    pub fn get(&self, stem: &str) -> Option<usize> {
        self.0.get(stem).copied()
    }

    pub fn insert(&mut self, stem: &str, block: usize) {
        self.0.insert(stem.to_string(), block);
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `stem=blockIndex` lines, sorted by stem.
    pub fn to_text(&self) -> String {
        self.0.iter().map(|(s, b)| format!("{s}={b}\n")).collect()
    }

    pub fn parse(text: &str) -> Result<TruthMap, HarnessError> {
        let mut map = BTreeMap::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let bad = |reason: String| HarnessError::Truth {
                line: n + 1,
                reason,
            };
            let (stem, idx) = line
                .split_once('=')
                .ok_or_else(|| bad(format!("expected stem=blockIndex, got `{line}`")))?;
            let idx = idx.parse::<usize>().map_err(|e| bad(e.to_string()))?;
            if idx == 0 {
                return Err(bad("block 0 is the genesis block".into()));
            }
            map.insert(stem.to_string(), idx);
        }
        Ok(TruthMap(map))
    }

    pub fn load(path: &Path) -> Result<TruthMap, HarnessError> {
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
        TruthMap::parse(&text)
    }
}

/// One query with its ground truth.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestRecord {
    pub test_name: String,
    pub report: QueryReport,
    pub ground_truth_block: usize,
    pub attack: AttackSpec,
}

impl TestRecord {
    pub fn correct(&self) -> bool {
        self.report.winner.found_block == self.ground_truth_block
    }
}

/// All tests of one attack family against one source image, in step order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteResult {
    pub stem: String,
    pub kind: SuiteKind,
    pub records: Vec<TestRecord>,
}

impl SuiteResult {
    pub fn correct_count(&self) -> usize {
        self.records.iter().filter(|r| r.correct()).count()
    }

    /// `<stem>_<kind>`, the base name of the suite's log and CSV files.
    pub fn name(&self) -> String {
        format!("{}_{}", self.stem, self.kind)
    }
}

/// Queries one test image and records the outcome against `truth_block`.
pub fn run_test(
    network: &Network,
    test_name: &str,
    img: &Image,
    attack: AttackSpec,
    truth_block: usize,
) -> Result<TestRecord, HarnessError> {
    let mut report = network.query(img)?;
    report.correct = Some(report.winner.found_block == truth_block);
    Ok(TestRecord {
        test_name: test_name.to_string(),
        report,
        ground_truth_block: truth_block,
        attack,
    })
}

/// Runs an in-memory suite (as produced by [`generate_attacks`]).
pub fn run_generated(
    network: &Network,
    stem: &str,
    kind: SuiteKind,
    attacks: &[GeneratedAttack],
    truth: &TruthMap,
) -> Result<SuiteResult, HarnessError> {
    let truth_block = truth
        .get(stem)
        .ok_or_else(|| HarnessError::UnknownStem(stem.to_string()))?;
    let records = attacks
        .iter()
        .map(|a| run_test(network, &a.file_name, &a.image, a.spec, truth_block))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SuiteResult {
        stem: stem.to_string(),
        kind,
        records,
    })
}

/// Queries every attack image in `dir`, grouped into one suite per
/// (stem, kind) and ordered by step.
pub fn run_suite(
    network: &Network,
    dir: &Path,
    truth: &TruthMap,
) -> Result<Vec<SuiteResult>, HarnessError> {
    let mut groups: BTreeMap<(String, SuiteKind), Vec<(u32, PathBuf)>> = BTreeMap::new();
    for entry in std::fs::read_dir(dir).map_err(|e| HarnessError::io(dir, e))? {
        let path = entry.map_err(|e| HarnessError::io(dir, e))?.path();
        if !path.is_file() {
            continue;
        }
        let Some(name) = path.file_name().and_then(|n| n.to_str()) else {
            continue;
        };
        let (stem, kind, step) = parse_attack_file_name(name)
            .ok_or_else(|| HarnessError::UnknownStem(name.to_string()))?;
        groups.entry((stem, kind)).or_default().push((step, path));
    }
    if groups.is_empty() {
        return Err(HarnessError::EmptySuite(dir.display().to_string()));
    }

    groups
        .into_par_iter()
        .map(|((stem, kind), mut files)| {
            files.sort();
            let truth_block = truth
                .get(&stem)
                .ok_or_else(|| HarnessError::UnknownStem(stem.clone()))?;
            let records = files
                .iter()
                .map(|(step, path)| {
                    let img = read_image(path)?;
                    let spec = kind.spec(*step).expect("validated by the file name parser");
                    let name = path.file_name().and_then(|n| n.to_str()).unwrap_or_default();
                    run_test(network, name, &img, spec, truth_block)
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok(SuiteResult {
                stem,
                kind,
                records,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_names() {
        assert_eq!(attack_file_name("mandrill", SuiteKind::Crop, 2), "mandrill_crop_2.png");
        assert_eq!(
            parse_attack_file_name("woman_blonde_blur_9.png"),
            Some(("woman_blonde".to_string(), SuiteKind::Blur, 9))
        );
        assert_eq!(parse_attack_file_name("x_flip_4.png"), None);
        assert_eq!(parse_attack_file_name("x_flip_3.tif"), None);
        assert_eq!(parse_attack_file_name("_crop_3.png"), None);
        assert_eq!(parse_attack_file_name("crop_3.png"), None);
        assert_eq!(parse_attack_file_name("x_zoom_3.png"), None);
    }

    #[test]
    fn truth_map_text() {
        let mut t = TruthMap::default();
        t.insert("lake", 5);
        t.insert("house", 3);
        let text = t.to_text();
        assert_eq!(text, "house=3\nlake=5\n");
        assert_eq!(TruthMap::parse(&text).unwrap(), t);
        assert!(TruthMap::parse("house").is_err());
        assert!(TruthMap::parse("house=x").is_err());
        assert!(TruthMap::parse("house=0").is_err());
    }

    #[test]
    fn suite_sizes() {
        let img = Image::from_fn_gray(40, 40, |x, y| (x * 3 + y * 5) as u8).unwrap();
        let opts = TransformOptions::default();
        for (kind, n) in [
            (SuiteKind::Blur, 9),
            (SuiteKind::Rotate, 9),
            (SuiteKind::Crop, 9),
            (SuiteKind::Flip, 3),
        ] {
            let out = generate_attacks(&img, "t", kind, &opts).unwrap();
            assert_eq!(out.len(), n);
            assert!(out.iter().enumerate().all(|(i, a)| a.spec.step == i as u32 + 1));
        }
    }

    #[test]
    fn tiny_image_crop_fails() {
        let img = Image::from_fn_gray(4, 4, |x, _| x as u8).unwrap();
        assert!(generate_attacks(&img, "t", SuiteKind::Crop, &TransformOptions::default()).is_err());
    }
}
