//! Line-oriented chain file:
//!
//! ```text
//! imgchain v1 difficulty=<d> algos=<name>,<name>,...
//! <index>|<prev hash hex>|<image ref>|<content digest hex>|<hash>,<hash>,...|<nonce>|<hash hex>
//! ```

use std::collections::BTreeMap;
use std::path::Path;

use super::hex::hex_to_digest;
use super::{byte_to_hex, Block, Chain, ChainError};
use crate::phash::{AlgorithmId, PerceptualHash};

const MAGIC: &str = "imgchain v1";

impl Chain {
    pub fn to_text(&self) -> String {
        let algos: Vec<&str> = self.algorithms().iter().map(|a| a.name()).collect();
        let mut out = format!("{MAGIC} difficulty={} algos={}\n", self.difficulty(), algos.join(","));
        for b in self.blocks() {
            let hashes: Vec<String> = b.perceptual_hashes.values().map(|h| h.to_string()).collect();
            out.push_str(&format!(
                "{}|{}|{}|{}|{}|{}|{}\n",
                b.index,
                byte_to_hex(&b.prev_hash),
                b.image_ref,
                byte_to_hex(&b.content_digest),
                hashes.join(","),
                b.nonce,
                byte_to_hex(&b.hash),
            ));
        }
        out
    }

    /// Parses a chain file. Structural problems are errors; the result is not
    /// verified.
    pub fn from_text(text: &str) -> Result<Chain, ChainError> {
        let err = |line: usize, reason: String| ChainError::Parse { line, reason };
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
        let (_, header) = lines.next().ok_or_else(|| err(1, "empty file".into()))?;
        let rest = header
            .strip_prefix(MAGIC)
            .and_then(|r| r.strip_prefix(' '))
            .ok_or_else(|| err(1, format!("expected `{MAGIC}` header")))?;
        let mut difficulty = None;
        let mut algorithms = None;
        for field in rest.split(' ') {
            match field.split_once('=') {
                Some(("difficulty", v)) => {
                    difficulty = Some(v.parse::<u32>().map_err(|e| err(1, format!("difficulty: {e}")))?)
                }
                Some(("algos", v)) => {
                    let list = v
                        .split(',')
                        .filter(|s| !s.is_empty())
                        .map(|s| s.parse::<AlgorithmId>())
                        .collect::<Result<Vec<_>, _>>()
                        .map_err(|e| err(1, e.to_string()))?;
                    algorithms = Some(list);
                }
                _ => return Err(err(1, format!("unknown header field `{field}`"))),
            }
        }
        let difficulty = difficulty.ok_or_else(|| err(1, "missing difficulty".into()))?;
        let algorithms = algorithms.ok_or_else(|| err(1, "missing algos".into()))?;

        let mut blocks = Vec::new();
        for (n, line) in lines {
            let fields: Vec<&str> = line.split('|').collect();
            if fields.len() != 7 {
                return Err(err(n, format!("expected 7 fields, found {}", fields.len())));
            }
            let index = fields[0].parse::<u64>().map_err(|e| err(n, format!("index: {e}")))?;
            let prev_hash = hex_to_digest(fields[1]).map_err(|e| err(n, format!("prev hash: {e}")))?;
            let content_digest =
                hex_to_digest(fields[3]).map_err(|e| err(n, format!("content digest: {e}")))?;
            let mut perceptual_hashes = BTreeMap::new();
            for item in fields[4].split(',').filter(|s| !s.is_empty()) {
                let h: PerceptualHash = item.parse().map_err(|e| err(n, format!("{e}")))?;
                if perceptual_hashes.insert(h.algo(), h).is_some() {
                    return Err(err(n, "duplicate algorithm".into()));
                }
            }
            let nonce = fields[5].parse::<u64>().map_err(|e| err(n, format!("nonce: {e}")))?;
            let hash = hex_to_digest(fields[6]).map_err(|e| err(n, format!("hash: {e}")))?;
            blocks.push(Block {
                index,
                prev_hash,
                image_ref: fields[2].to_string(),
                content_digest,
                perceptual_hashes,
                nonce,
                hash,
            });
        }
        if blocks.is_empty() {
            return Err(err(2, "no genesis block".into()));
        }
        Ok(Chain::from_parts(blocks, difficulty, algorithms))
    }

    pub fn save(&self, path: &Path) -> std::io::Result<()> {
        std::fs::write(path, self.to_text())
    }

    pub fn load(path: &Path) -> Result<Chain, ChainError> {
        let text = std::fs::read_to_string(path).map_err(|e| ChainError::Parse {
            line: 0,
            reason: format!("{}: {e}", path.display()),
        })?;
        Chain::from_text(&text)
    }
}

#[cfg(test)]
mod tests {
    use super::super::tests::fake_hashes;
    use super::*;

    fn sample() -> Chain {
        let mut c = Chain::new(1, &AlgorithmId::ALL).unwrap();
        c.append_image("images/a.png", b"aaa", fake_hashes(3)).unwrap();
        c.append_image("images/b c.png", b"bbb", fake_hashes(200)).unwrap();
        c
    }

    #[test]
    fn text_round_trip() {
        let c = sample();
        let text = c.to_text();
        let back = Chain::from_text(&text).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.to_text(), text);
        assert!(back.verify().is_valid());
    }

    #[test]
    fn layout() {
        let text = sample().to_text();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(
            lines[0],
            "imgchain v1 difficulty=1 algos=AverageHash,PHash,BlockMeanHash,MarrHildrethHash,RadialVarianceHash"
        );
        assert_eq!(lines.len(), 4);
        let genesis: Vec<&str> = lines[1].split('|').collect();
        assert_eq!(genesis[0], "0");
        assert_eq!(genesis[2], "");
        assert_eq!(genesis[4], "");
        assert_eq!(genesis[3], "0".repeat(64));
        let b1: Vec<&str> = lines[2].split('|').collect();
        assert_eq!(b1[2], "images/a.png");
        assert_eq!(b1[4].split(',').count(), 5);
        assert!(b1[4].starts_with("AverageHash:0303"));
        assert!(b1[6].starts_with('0'));
        assert!(text.ends_with('\n'));
    }

    #[test]
    fn parse_errors() {
        let text = sample().to_text();
        assert!(matches!(Chain::from_text(""), Err(ChainError::Parse { line: 1, .. })));
        assert!(Chain::from_text("imgchain v2 difficulty=1 algos=PHash\n").is_err());
        let header_only = text.lines().next().unwrap().to_string() + "\n";
        assert!(Chain::from_text(&header_only).is_err());
        let broken = text.replacen("|images/a.png|", "|images/a.png||", 1);
        assert!(matches!(Chain::from_text(&broken), Err(ChainError::Parse { line: 3, .. })));
        let bad_hex = text.replacen("AverageHash:03", "AverageHash:0G", 1);
        assert!(matches!(Chain::from_text(&bad_hex), Err(ChainError::Parse { line: 3, .. })));
    }
}
