use std::collections::BTreeMap;

use rayon::prelude::*;
use sha2::{Digest, Sha256};

use super::{byte_to_hex, ChainError};
use crate::phash::{AlgorithmId, PerceptualHash};

pub type Digest32 = [u8; 32];

/// One link of the chain: an image reference, the SHA-256 of the image file,
/// every perceptual hash of the image, and the proof-of-work nonce.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub index: u64,
    pub prev_hash: Digest32,
    /// Path of the image file; empty for the genesis block.
    pub image_ref: String,
    /// SHA-256 of the image file bytes; all zero for the genesis block.
    pub content_digest: Digest32,
    pub perceptual_hashes: BTreeMap<AlgorithmId, PerceptualHash>,
    pub nonce: u64,
    pub hash: Digest32,
}

impl Block {
    /// An unmined block (nonce 0, hash unset).
    pub fn new(
        index: u64,
        prev_hash: Digest32,
        image_ref: impl Into<String>,
        content_digest: Digest32,
        perceptual_hashes: BTreeMap<AlgorithmId, PerceptualHash>,
    ) -> Self {
        Block {
            index,
            prev_hash,
            image_ref: image_ref.into(),
            content_digest,
            perceptual_hashes,
            nonce: 0,
            hash: [0; 32],
        }
    }

    /// The hash-preimage text up to and including the final `:`; the nonce in
    /// decimal completes it.
    pub fn preimage_prefix(&self) -> String {
        let hashes: Vec<String> = self.perceptual_hashes.values().map(|h| h.to_string()).collect();
        format!(
            "{}:{}:{}:",
            byte_to_hex(&self.prev_hash),
            byte_to_hex(&self.content_digest),
            hashes.join(",")
        )
    }

    pub fn preimage(&self) -> String {
        format!("{}{}", self.preimage_prefix(), self.nonce)
    }

    pub fn calculate_hash(&self) -> Digest32 {
        sha256(self.preimage().as_bytes())
    }

    pub fn hash_hex(&self) -> String {
        byte_to_hex(&self.hash)
    }

    /// Whether the stored hash satisfies `difficulty` leading zero hex digits.
    pub fn meets_difficulty(&self, difficulty: u32) -> bool {
        meets_difficulty(&self.hash, difficulty)
    }
}

pub fn sha256(bytes: &[u8]) -> Digest32 {
    Sha256::digest(bytes).into()
}

/// True when the hex form of `hash` starts with `difficulty` `'0'` characters.
pub fn meets_difficulty(hash: &Digest32, difficulty: u32) -> bool {
    let d = difficulty as usize;
    if d > 64 {
        return false;
    }
    let full = d / 2;
    hash[..full].iter().all(|&b| b == 0) && (d.is_multiple_of(2) || hash[full] >> 4 == 0)
}

const MINING_BATCH: u64 = 1 << 14;

/// Finds the smallest nonce whose block hash meets `difficulty`, sets it and
/// the resulting hash on the block, and returns the block.
///
/// Batches of nonces are checked in parallel; within a batch the lowest
/// qualifying nonce wins, so the result matches a sequential scan.
pub fn mine_block(mut block: Block, difficulty: u32) -> Result<Block, ChainError> {
    if difficulty > 64 {
        return Err(ChainError::NonceExhausted);
    }
    let mut prefix = Sha256::new();
    prefix.update(block.preimage_prefix().as_bytes());
    let attempt = |nonce: u64| -> Digest32 {
        let mut h = prefix.clone();
        h.update(nonce.to_string().as_bytes());
        h.finalize().into()
    };

    let mut start = 0u64;
    loop {
        let end = start.saturating_add(MINING_BATCH);
        let found = (start..end)
            .into_par_iter()
            .map(|n| (n, attempt(n)))
            .find_first(|(_, h)| meets_difficulty(h, difficulty));
        if let Some((nonce, hash)) = found {
            block.nonce = nonce;
            block.hash = hash;
            return Ok(block);
        }
        if end == u64::MAX {
            return Err(ChainError::NonceExhausted);
        }
        start = end;
    }
}

/// The fixed first block: no predecessor, no image, mined at `difficulty`.
pub fn make_genesis(difficulty: u32) -> Result<Block, ChainError> {
    mine_block(Block::new(0, [0; 32], "", [0; 32], BTreeMap::new()), difficulty)
}
