//! Perceptual hashing: five algorithms, Hamming distance, normalization to a
//! common `[0, 1]` difference scale, and the radial digest's correlation
//! distance.

mod algorithm;
mod algorithms;
mod value;

pub use self::algorithm::AlgorithmId;
pub use self::algorithms::{
    average_hash, block_mean_hash, hash_all, hash_image, marr_hildreth_hash, p_hash,
    radial_projections, radial_variance_hash, LOG_KERNEL_SIZE, LOG_SIGMA, RADIAL_ANGLES,
};
pub use self::value::{
    compare, hamming_distance, normalize, radial_distance, BitHash, NormalizedScore,
    PerceptualHash, RadialDigest, RADIAL_FEATURES,
};

#[derive(Debug, thiserror::Error)]
pub enum HashError {
    #[error("hashes come from different algorithms ({0} vs {1})")]
    Mismatch(AlgorithmId, AlgorithmId),
    #[error("{0} is not a bit-vector hash")]
    NotBinary(AlgorithmId),
    #[error("{algo} hash must be {expected} long, got {actual}")]
    Length {
        algo: AlgorithmId,
        expected: usize,
        actual: usize,
    },
    #[error("normalization maximum must be positive, got {0}")]
    NonPositiveMax(f64),
    #[error("score {0} outside [0, 1]")]
    ScoreRange(f64),
    #[error("unknown hash algorithm `{0}`")]
    UnknownAlgorithm(String),
    #[error("malformed hash `{0}`")]
    Malformed(String),
}

#[cfg(test)]
mod proptests {
    use super::*;
    use crate::imagecore::{flip, FlipAxis, Image};
    use proptest::prelude::*;

    fn arb_bits(algo: AlgorithmId) -> impl Strategy<Value = BitHash> {
        proptest::collection::vec(any::<bool>(), algo.bit_length().unwrap())
            .prop_map(move |b| BitHash::from_bits(algo, &b).unwrap())
    }

    fn arb_digest() -> impl Strategy<Value = RadialDigest> {
        proptest::array::uniform32(any::<u8>()).prop_flat_map(|head| {
            proptest::array::uniform8(any::<u8>()).prop_map(move |tail| {
                let mut f = [0u8; RADIAL_FEATURES];
                f[..32].copy_from_slice(&head);
                f[32..].copy_from_slice(&tail);
                RadialDigest::new(f)
            })
        })
    }

    fn arb_image() -> impl Strategy<Value = Image> {
        (4u32..40, 4u32..40).prop_flat_map(|(w, h)| {
            proptest::collection::vec(any::<u8>(), (w * h) as usize)
                .prop_map(move |d| Image::gray(w, h, d).unwrap())
        })
    }

    proptest! {
        #[test]
        fn triangle_inequality(
            a in arb_bits(AlgorithmId::MarrHildreth),
            b in arb_bits(AlgorithmId::MarrHildreth),
            c in arb_bits(AlgorithmId::MarrHildreth),
        ) {
            let ab = hamming_distance(&a, &b).unwrap();
            let bc = hamming_distance(&b, &c).unwrap();
            let ac = hamming_distance(&a, &c).unwrap();
            prop_assert!(ac <= ab + bc);
        }

        #[test]
        fn binary_scores_are_symmetric_multiples(
            a in arb_bits(AlgorithmId::BlockMean),
            b in arb_bits(AlgorithmId::BlockMean),
        ) {
            let (pa, pb) = (PerceptualHash::from(a), PerceptualHash::from(b));
            let s = compare(AlgorithmId::BlockMean, &pa, &pb).unwrap().value();
            prop_assert_eq!(s, compare(AlgorithmId::BlockMean, &pb, &pa).unwrap().value());
            prop_assert!((0.0..=1.0).contains(&s));
            let k = s * 256.0;
            prop_assert_eq!(k, k.round());
        }

        #[test]
        fn radial_symmetric_and_bounded(a in arb_digest(), b in arb_digest()) {
            let ab = radial_distance(&a, &b).value();
            prop_assert_eq!(ab, radial_distance(&b, &a).value());
            prop_assert!((0.0..=1.0).contains(&ab));
            prop_assert_eq!(radial_distance(&a, &a).value(), 0.0);
        }

        #[test]
        fn hash_text_round_trip(a in arb_bits(AlgorithmId::PHash), d in arb_digest()) {
            for h in [PerceptualHash::from(a), PerceptualHash::from(d)] {
                prop_assert_eq!(h.to_string().parse::<PerceptualHash>().unwrap(), h);
            }
        }

        #[test]
        fn self_comparison_is_zero(img in arb_image()) {
            for algo in AlgorithmId::ALL {
                let h = hash_image(algo, &img);
                prop_assert_eq!(compare(algo, &h, &h).unwrap().value(), 0.0);
            }
        }

        #[test]
        fn radial_half_turn_exact(img in arb_image()) {
            prop_assert_eq!(
                radial_variance_hash(&img),
                radial_variance_hash(&flip(&img, FlipAxis::Both))
            );
        }
    }
}
