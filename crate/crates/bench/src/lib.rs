//! Fixtures shared by the benchmarks.

use imgchain::chain::Chain;
use imgchain::harness::synthetic_image;
use imgchain::network::Network;
use imgchain::phash::{hash_all, AlgorithmId};
use imgchain::{Image, ReplicaMode};

/// Side length used throughout the benchmarks.
pub const SIZE: u32 = 256;

pub fn sample_image() -> Image {
    synthetic_image(6, SIZE)
}

/// A network over the full twelve-image synthetic dataset, mined at
/// difficulty 1 to keep setup short.
pub fn sample_network() -> Network {
    let mut chain = Chain::new(1, &AlgorithmId::ALL).expect("valid algorithm set");
    for i in 0..12 {
        let img = synthetic_image(i, SIZE);
        chain
            .append_image(&format!("synthetic/{i}.png"), img.data(), hash_all(&img, &AlgorithmId::ALL))
            .expect("synthetic images enroll");
    }
    Network::from_chain(chain, &AlgorithmId::ALL, ReplicaMode::Shared).expect("all algorithms assigned")
}
