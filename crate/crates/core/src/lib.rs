//! Image-provenance ledger: perceptual hashing of images, a proof-of-work
//! chain that records them, a simulated network of single-algorithm devices
//! that answers "which enrolled image is this?", and the experiment harness
//! that attacks images and measures how well they are still recognised.

pub mod chain;
pub mod harness;
pub mod imagecore;
pub mod network;
pub mod phash;

pub use chain::{verify_chain, Block, Chain, ChainError, FailureReason, Verdict};
pub use imagecore::{AttackSpec, Image, ImageError, SuiteKind, TransformOptions};
pub use network::{Network, NetworkError, QueryReport, ReplicaMode};
pub use phash::{AlgorithmId, HashError, NormalizedScore, PerceptualHash};
