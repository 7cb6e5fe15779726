//! Proof-of-work chain of image blocks.
//!
//! Each block's SHA-256 covers the UTF-8 preimage
//!
//! ```text
//! hex(prev_hash) ":" hex(content_digest) ":" hash_1 "," ... "," hash_k ":" decimal(nonce)
//! ```
//!
//! with perceptual hashes serialized as `<Algorithm>:<hex>` in precedence
//! order. A block is mined when the hex form of its hash starts with
//! `difficulty` zeros.

mod block;
mod hex;
mod store;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

pub use self::block::{make_genesis, meets_difficulty, mine_block, sha256, Block, Digest32};
pub use self::hex::{byte_to_hex, hex_to_byte, HexError};

use crate::phash::{AlgorithmId, PerceptualHash};

pub const DEFAULT_DIFFICULTY: u32 = 4;

#[derive(Debug, thiserror::Error)]
pub enum ChainError {
    #[error("block is missing the {0} hash")]
    MissingHash(AlgorithmId),
    #[error("block carries a {0} hash the chain does not use")]
    UnexpectedHash(AlgorithmId),
    #[error("hash stored under {key} was produced by {actual}")]
    MislabeledHash { key: AlgorithmId, actual: AlgorithmId },
    #[error("image reference {0:?} contains a reserved character")]
    InvalidImageRef(String),
    #[error("chain is invalid: {0}")]
    Invalid(Verdict),
    #[error("nonce space exhausted")]
    NonceExhausted,
    #[error("chain file line {line}: {reason}")]
    Parse { line: usize, reason: String },
}

/// Why a block failed verification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FailureReason {
    /// The stored hash does not match the block's contents.
    HashMismatch,
    /// `prev_hash` does not equal the previous block's hash.
    BrokenLink,
    /// The hash lacks the required leading zeros.
    Difficulty,
    /// The block's index does not match its position.
    IndexMismatch,
    /// The block's perceptual hashes do not match the chain's algorithm set.
    HashSet,
}

impl fmt::Display for FailureReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FailureReason::HashMismatch => "hash-mismatch",
            FailureReason::BrokenLink => "broken-link",
            FailureReason::Difficulty => "difficulty",
            FailureReason::IndexMismatch => "index-mismatch",
            FailureReason::HashSet => "hash-set",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Valid,
    Invalid { block: usize, reason: FailureReason },
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Valid => f.write_str("valid"),
            Verdict::Invalid { block, reason } => write!(f, "invalid at block {block}: {reason}"),
        }
    }
}

/// An ordered list of blocks starting at the genesis block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chain {
    blocks: Vec<Block>,
    difficulty: u32,
    algorithms: Vec<AlgorithmId>,
}

impl Chain {
    /// A chain holding only a freshly mined genesis block.
    pub fn new(difficulty: u32, algorithms: &[AlgorithmId]) -> Result<Self, ChainError> {
        let mut algorithms = algorithms.to_vec();
        algorithms.sort();
        algorithms.dedup();
        Ok(Chain {
            blocks: vec![make_genesis(difficulty)?],
            difficulty,
            algorithms,
        })
    }

    /// Assembles a chain from parts without checking it; see [`Chain::verify`].
    pub fn from_parts(blocks: Vec<Block>, difficulty: u32, algorithms: Vec<AlgorithmId>) -> Self {
        Chain {
            blocks,
            difficulty,
            algorithms,
        }
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    /// Direct mutable access, for building tamper scenarios.
    pub fn blocks_mut(&mut self) -> &mut Vec<Block> {
        &mut self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn difficulty(&self) -> u32 {
        self.difficulty
    }

    pub fn algorithms(&self) -> &[AlgorithmId] {
        &self.algorithms
    }

    pub fn tip(&self) -> &Block {
        self.blocks.last().expect("chain always holds a genesis block")
    }

    /// Mines a block for an image and links it after the current tip.
    ///
    /// `hashes` must hold exactly one hash per algorithm in the chain's set.
    pub fn append_image(
        &mut self,
        image_ref: &str,
        image_bytes: &[u8],
        hashes: BTreeMap<AlgorithmId, PerceptualHash>,
    ) -> Result<&Block, ChainError> {
        if image_ref.contains(['|', '\n', '\r']) {
            return Err(ChainError::InvalidImageRef(image_ref.to_string()));
        }
        for &algo in &self.algorithms {
            if !hashes.contains_key(&algo) {
                return Err(ChainError::MissingHash(algo));
            }
        }
        for (&key, h) in &hashes {
            if !self.algorithms.contains(&key) {
                return Err(ChainError::UnexpectedHash(key));
            }
            if h.algo() != key {
                return Err(ChainError::MislabeledHash {
                    key,
                    actual: h.algo(),
                });
            }
        }
        let verdict = self.verify();
        if !verdict.is_valid() {
            return Err(ChainError::Invalid(verdict));
        }
        let tip = self.tip();
        let block = Block::new(tip.index + 1, tip.hash, image_ref, sha256(image_bytes), hashes);
        let block = mine_block(block, self.difficulty)?;
        self.blocks.push(block);
        Ok(self.tip())
    }

    /// Checks every block in order and reports the first failure.
    ///
    /// Per block: the stored hash recomputes, the link to the previous block
    /// holds, the difficulty prefix holds, the index matches the position, and
    /// the perceptual hashes match the chain's algorithm set.
    pub fn verify(&self) -> Verdict {
        let fail = |block, reason| Verdict::Invalid { block, reason };
        for (i, b) in self.blocks.iter().enumerate() {
            if b.calculate_hash() != b.hash {
                return fail(i, FailureReason::HashMismatch);
            }
            let expected_prev = if i == 0 { [0; 32] } else { self.blocks[i - 1].hash };
            if b.prev_hash != expected_prev {
                return fail(i, FailureReason::BrokenLink);
            }
            if !b.meets_difficulty(self.difficulty) {
                return fail(i, FailureReason::Difficulty);
            }
            if b.index != i as u64 {
                return fail(i, FailureReason::IndexMismatch);
            }
            let keys: Vec<AlgorithmId> = b.perceptual_hashes.keys().copied().collect();
            let labels_ok = b.perceptual_hashes.iter().all(|(k, h)| h.algo() == *k);
            let set_ok = if i == 0 { keys.is_empty() } else { keys == self.algorithms };
            if !labels_ok || !set_ok {
                return fail(i, FailureReason::HashSet);
            }
        }
        if self.blocks.is_empty() {
            return fail(0, FailureReason::BrokenLink);
        }
        Verdict::Valid
    }
}

/// Free-function form of [`Chain::verify`].
pub fn verify_chain(chain: &Chain) -> Verdict {
    chain.verify()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phash::{BitHash, RadialDigest};

    pub(crate) fn fake_hashes(seed: u8) -> BTreeMap<AlgorithmId, PerceptualHash> {
        AlgorithmId::ALL
            .iter()
            .map(|&a| {
                let h = match a.bit_length() {
                    Some(bits) => BitHash::from_bytes(a, vec![seed; bits / 8]).unwrap().into(),
                    None => RadialDigest::new([seed; 40]).into(),
                };
                (a, h)
            })
            .collect()
    }

    fn chain_of(n: u8, difficulty: u32) -> Chain {
        let mut c = Chain::new(difficulty, &AlgorithmId::ALL).unwrap();
        for i in 0..n {
            c.append_image(&format!("img/{i}.png"), &[i; 10], fake_hashes(i))
                .unwrap();
        }
        c
    }

    #[test]
    fn append_links_to_tip() {
        let c = chain_of(1, 1);
        assert_eq!(c.len(), 2);
        assert_eq!(c.blocks()[1].prev_hash, c.blocks()[0].hash);
        assert_eq!(c.blocks()[1].content_digest, sha256(&[0; 10]));
        assert!(c.verify().is_valid());
    }

    #[test]
    fn append_rejects_missing_hash() {
        let mut c = Chain::new(0, &AlgorithmId::ALL).unwrap();
        let mut hashes = fake_hashes(1);
        hashes.remove(&AlgorithmId::BlockMean);
        assert!(matches!(
            c.append_image("a.png", b"x", hashes),
            Err(ChainError::MissingHash(AlgorithmId::BlockMean))
        ));
        assert_eq!(c.len(), 1);
    }

    #[test]
    fn append_rejects_bad_refs_and_labels() {
        let mut c = Chain::new(0, &[AlgorithmId::Average]).unwrap();
        let mut hashes = fake_hashes(1);
        hashes.retain(|k, _| *k == AlgorithmId::Average);
        assert!(matches!(
            c.append_image("a|b.png", b"x", hashes.clone()),
            Err(ChainError::InvalidImageRef(_))
        ));
        assert!(matches!(
            c.append_image("a.png", b"x", fake_hashes(1)),
            Err(ChainError::UnexpectedHash(_))
        ));
        let swapped: BTreeMap<_, _> = [(AlgorithmId::Average, fake_hashes(1)[&AlgorithmId::PHash].clone())].into();
        assert!(matches!(
            c.append_image("a.png", b"x", swapped),
            Err(ChainError::MislabeledHash { .. })
        ));
        c.append_image("a.png", b"x", hashes).unwrap();
    }

    #[test]
    fn append_rejects_invalid_chain() {
        let mut c = chain_of(2, 1);
        c.blocks_mut()[1].nonce += 1;
        assert!(matches!(
            c.append_image("z.png", b"z", fake_hashes(9)),
            Err(ChainError::Invalid(Verdict::Invalid { block: 1, .. }))
        ));
    }

    #[test]
    fn digest_bit_flip_detected() {
        let mut c = chain_of(5, 2);
        c.blocks_mut()[3].content_digest[7] ^= 0x01;
        assert_eq!(
            c.verify(),
            Verdict::Invalid {
                block: 3,
                reason: FailureReason::HashMismatch
            }
        );
    }

    #[test]
    fn relink_without_mining_hits_difficulty() {
        let mut c = chain_of(6, 2);
        c.blocks_mut()[3].content_digest[0] ^= 0xff;
        // recompute hashes and links from 3 to the tip, but do not re-mine
        for i in 3..c.len() {
            let prev = c.blocks()[i - 1].hash;
            let b = &mut c.blocks_mut()[i];
            b.prev_hash = prev;
            b.hash = b.calculate_hash();
        }
        // the attacker may get lucky on a prefix; find the oracle answer
        let first_unmined = (3..c.len())
            .find(|&i| !c.blocks()[i].meets_difficulty(2))
            .expect("some block lost its proof of work");
        assert_eq!(
            c.verify(),
            Verdict::Invalid {
                block: first_unmined,
                reason: FailureReason::Difficulty
            }
        );
    }

    #[test]
    fn index_and_link_tampering() {
        let mut c = chain_of(3, 1);
        c.blocks_mut()[2].index = 7;
        assert_eq!(
            c.verify(),
            Verdict::Invalid {
                block: 2,
                reason: FailureReason::IndexMismatch
            }
        );
        let mut c = chain_of(3, 1);
        c.blocks_mut().swap(1, 2);
        assert!(matches!(c.verify(), Verdict::Invalid { block: 1, reason: FailureReason::BrokenLink }));
    }

    #[test]
    fn build_is_deterministic() {
        assert_eq!(chain_of(3, 2), chain_of(3, 2));
    }
}
