//! Hash values, their textual form, and the distance measures between them.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{AlgorithmId, HashError};
use crate::chain::{byte_to_hex, hex_to_byte};

/// Number of features in a radial variance digest.
pub const RADIAL_FEATURES: usize = 40;

/// A fixed-length bit vector tagged with the algorithm that produced it.
/// Bits are packed big-endian: bit 0 is the high bit of byte 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BitHash {
    algo: AlgorithmId,
    bytes: Vec<u8>,
}

impl BitHash {
    pub fn from_bits(algo: AlgorithmId, bits: &[bool]) -> Result<Self, HashError> {
        let len = algo.bit_length().ok_or(HashError::NotBinary(algo))?;
        if bits.len() != len {
            return Err(HashError::Length {
                algo,
                expected: len,
                actual: bits.len(),
            });
        }
        let mut bytes = vec![0u8; len.div_ceil(8)];
        for (i, _) in bits.iter().enumerate().filter(|(_, &b)| b) {
            bytes[i / 8] |= 0x80 >> (i % 8);
        }
        Ok(BitHash { algo, bytes })
    }

    pub fn from_bytes(algo: AlgorithmId, bytes: Vec<u8>) -> Result<Self, HashError> {
        let len = algo.bit_length().ok_or(HashError::NotBinary(algo))?;
        if bytes.len() != len.div_ceil(8) {
            return Err(HashError::Length {
                algo,
                expected: len.div_ceil(8),
                actual: bytes.len(),
            });
        }
        Ok(BitHash { algo, bytes })
    }

    pub fn algo(&self) -> AlgorithmId {
        self.algo
    }

    pub fn bit_len(&self) -> usize {
        self.algo.bit_length().expect("binary algorithm")
    }

    pub fn bytes(&self) -> &[u8] {
        &self.bytes
    }

    pub fn bit(&self, i: usize) -> bool {
        self.bytes[i / 8] & (0x80 >> (i % 8)) != 0
    }

    pub fn count_ones(&self) -> u32 {
        self.bytes.iter().map(|b| b.count_ones()).sum()
    }

    /// Bitwise complement, keeping padding bits clear.
    pub fn complement(&self) -> BitHash {
        let bits: Vec<bool> = (0..self.bit_len()).map(|i| !self.bit(i)).collect();
        BitHash::from_bits(self.algo, &bits).expect("same length")
    }
}

/// The radial variance digest: 40 coefficients quantized to bytes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RadialDigest {
    features: [u8; RADIAL_FEATURES],
}

impl RadialDigest {
    pub fn new(features: [u8; RADIAL_FEATURES]) -> Self {
        RadialDigest { features }
    }

    pub fn features(&self) -> &[u8; RADIAL_FEATURES] {
        &self.features
    }
}

/// Output of any of the five algorithms.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PerceptualHash {
    Bits(BitHash),
    Radial(RadialDigest),
}

impl PerceptualHash {
    pub fn algo(&self) -> AlgorithmId {
        match self {
            PerceptualHash::Bits(h) => h.algo(),
            PerceptualHash::Radial(_) => AlgorithmId::RadialVariance,
        }
    }

    pub fn payload(&self) -> &[u8] {
        match self {
            PerceptualHash::Bits(h) => h.bytes(),
            PerceptualHash::Radial(d) => d.features(),
        }
    }

    /// Rebuilds a hash from its algorithm and raw payload bytes.
    pub fn from_payload(algo: AlgorithmId, payload: Vec<u8>) -> Result<Self, HashError> {
        if algo.is_binary() {
            return BitHash::from_bytes(algo, payload).map(PerceptualHash::Bits);
        }
        let features: [u8; RADIAL_FEATURES] =
            payload
                .as_slice()
                .try_into()
                .map_err(|_| HashError::Length {
                    algo,
                    expected: RADIAL_FEATURES,
                    actual: payload.len(),
                })?;
        Ok(PerceptualHash::Radial(RadialDigest::new(features)))
    }
}

impl From<BitHash> for PerceptualHash {
    fn from(h: BitHash) -> Self {
        PerceptualHash::Bits(h)
    }
}

impl From<RadialDigest> for PerceptualHash {
    fn from(d: RadialDigest) -> Self {
        PerceptualHash::Radial(d)
    }
}

/// `<AlgorithmName>:<lowercase hex payload>`
impl fmt::Display for PerceptualHash {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.algo().name(), byte_to_hex(self.payload()))
    }
}

impl FromStr for PerceptualHash {
    type Err = HashError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (name, hex) = s
            .split_once(':')
            .ok_or_else(|| HashError::Malformed(s.to_string()))?;
        let algo: AlgorithmId = name.parse()?;
        let payload = hex_to_byte(hex).map_err(|e| HashError::Malformed(format!("{s}: {e}")))?;
        PerceptualHash::from_payload(algo, payload)
    }
}

/// A difference score in `[0, 1]`; lower means more similar.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NormalizedScore(f64);

impl NormalizedScore {
    pub const ZERO: NormalizedScore = NormalizedScore(0.0);

    pub fn new(value: f64) -> Result<Self, HashError> {
        if (0.0..=1.0).contains(&value) {
            Ok(NormalizedScore(value))
        } else {
            Err(HashError::ScoreRange(value))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl fmt::Display for NormalizedScore {
    /// Shortest decimal that round-trips, always with a fractional part.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Number of differing bits.
pub fn hamming_distance(a: &BitHash, b: &BitHash) -> Result<u32, HashError> {
    if a.algo != b.algo {
        return Err(HashError::Mismatch(a.algo, b.algo));
    }
    Ok(a.bytes
        .iter()
        .zip(&b.bytes)
        .map(|(x, y)| (x ^ y).count_ones())
        .sum())
}

/// `value / max`.
pub fn normalize(value: f64, max: f64) -> Result<NormalizedScore, HashError> {
    // written this way round so NaN is rejected too
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    if !(max > 0.0) {
        return Err(HashError::NonPositiveMax(max));
    }
    if !(0.0..=max).contains(&value) {
        return Err(HashError::ScoreRange(value / max));
    }
    Ok(NormalizedScore(value / max))
}

/// `1 - peak Pearson correlation` over all circular shifts of `b`, clamped to
/// `[0, 1]`.
///
/// Sums are accumulated in integers so the result is exactly symmetric in its
/// arguments.
pub fn radial_distance(a: &RadialDigest, b: &RadialDigest) -> NormalizedScore {
    if a == b {
        return NormalizedScore::ZERO;
    }
    let n = RADIAL_FEATURES as i64;
    let stats = |d: &RadialDigest| {
        let sum: i64 = d.features.iter().map(|&v| v as i64).sum();
        let sq: i64 = d.features.iter().map(|&v| (v as i64) * (v as i64)).sum();
        (sum, n * sq - sum * sum)
    };
    let (sum_a, var_a) = stats(a);
    let (sum_b, var_b) = stats(b);
    if var_a == 0 || var_b == 0 {
        return NormalizedScore(1.0);
    }
    let denom = (var_a as f64).sqrt() * (var_b as f64).sqrt();
    let mut best = f64::NEG_INFINITY;
    for shift in 0..RADIAL_FEATURES {
        let cross: i64 = (0..RADIAL_FEATURES)
            .map(|i| a.features[i] as i64 * b.features[(i + shift) % RADIAL_FEATURES] as i64)
            .sum();
        let pcc = (n * cross - sum_a * sum_b) as f64 / denom;
        best = best.max(pcc);
    }
    NormalizedScore((1.0 - best).clamp(0.0, 1.0))
}

/// Normalized difference between two hashes from the same algorithm.
pub fn compare(
    algo: AlgorithmId,
    a: &PerceptualHash,
    b: &PerceptualHash,
) -> Result<NormalizedScore, HashError> {
    for h in [a, b] {
        if h.algo() != algo {
            return Err(HashError::Mismatch(algo, h.algo()));
        }
    }
    match (a, b) {
        (PerceptualHash::Bits(x), PerceptualHash::Bits(y)) => {
            let d = hamming_distance(x, y)?;
            normalize(d as f64, x.bit_len() as f64)
        }
        (PerceptualHash::Radial(x), PerceptualHash::Radial(y)) => Ok(radial_distance(x, y)),
        _ => unreachable!("algorithm tags agree"),
    }
}
