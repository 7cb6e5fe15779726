use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::HashError;

/// The five perceptual hash algorithms. Declaration order is the canonical
/// precedence order used for tie-breaking and output ordering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum AlgorithmId {
    Average,
    PHash,
    BlockMean,
    MarrHildreth,
    RadialVariance,
}

impl AlgorithmId {
    pub const ALL: [AlgorithmId; 5] = [
        AlgorithmId::Average,
        AlgorithmId::PHash,
        AlgorithmId::BlockMean,
        AlgorithmId::MarrHildreth,
        AlgorithmId::RadialVariance,
    ];

    /// Display name, as used in logs, hash serializations and chain files.
    pub fn name(self) -> &'static str {
        match self {
            AlgorithmId::Average => "AverageHash",
            AlgorithmId::PHash => "PHash",
            AlgorithmId::BlockMean => "BlockMeanHash",
            AlgorithmId::MarrHildreth => "MarrHildrethHash",
            AlgorithmId::RadialVariance => "RadialVarianceHash",
        }
    }

    /// Hash length in bits for the binary algorithms; `None` for the radial
    /// digest, which is not compared bitwise.
    pub fn bit_length(self) -> Option<usize> {
        match self {
            AlgorithmId::Average | AlgorithmId::PHash => Some(64),
            AlgorithmId::BlockMean => Some(256),
            AlgorithmId::MarrHildreth => Some(576),
            AlgorithmId::RadialVariance => None,
        }
    }

    pub fn is_binary(self) -> bool {
        self.bit_length().is_some()
    }
}

impl fmt::Display for AlgorithmId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AlgorithmId {
    type Err = HashError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        AlgorithmId::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| HashError::UnknownAlgorithm(s.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence_is_declaration_order() {
        let mut sorted = AlgorithmId::ALL;
        sorted.sort();
        assert_eq!(sorted, AlgorithmId::ALL);
        assert!(AlgorithmId::Average < AlgorithmId::RadialVariance);
    }

    #[test]
    fn names_round_trip() {
        for a in AlgorithmId::ALL {
            assert_eq!(a.name().parse::<AlgorithmId>().unwrap(), a);
        }
        assert!("Sha256".parse::<AlgorithmId>().is_err());
    }

    #[test]
    fn lengths() {
        let lens: Vec<_> = AlgorithmId::ALL.iter().map(|a| a.bit_length()).collect();
        assert_eq!(lens, vec![Some(64), Some(64), Some(256), Some(576), None]);
    }
}
