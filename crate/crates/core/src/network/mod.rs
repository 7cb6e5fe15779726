//! Simulated device network.
//!
//! Every device owns one hash algorithm and a replica of the chain. A query
//! asks each device for its closest block and keeps the lowest score, with
//! ties resolved by algorithm precedence.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chain::{Chain, ChainError, Verdict};
use crate::imagecore::{decode_image, Format, Image, ImageError};
use crate::phash::{compare, hash_all, hash_image, AlgorithmId, HashError, NormalizedScore};

#[derive(Debug, thiserror::Error)]
pub enum NetworkError {
    #[error("dataset directory {0} holds no images")]
    EmptyDataset(String),
    #[error("{path}: {source}")]
    Image {
        path: String,
        #[source]
        source: ImageError,
    },
    #[error("reading {path}: {reason}")]
    Io { path: String, reason: String },
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error(transparent)]
    Hash(#[from] HashError),
    #[error("algorithm assignment must cover {expected:?} exactly once, got {got:?}")]
    Assignment {
        expected: Vec<AlgorithmId>,
        got: Vec<AlgorithmId>,
    },
    #[error("device {device} holds an invalid chain: {verdict}")]
    ReplicaInvalid { device: usize, verdict: Verdict },
    #[error("device {device} diverges from the network at block {block}")]
    Diverged { device: usize, block: usize },
    #[error("device {0} holds no image blocks")]
    NothingEnrolled(usize),
    #[error("no devices")]
    NoDevices,
}

/// Whether devices share one chain snapshot or hold independent copies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum ReplicaMode {
    #[default]
    Shared,
    Deep,
}

#[derive(Debug, Clone)]
pub struct Device {
    pub id: usize,
    pub algo: AlgorithmId,
    pub replica: Arc<Chain>,
}

/// One device's answer: the closest block it found and how close it was.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeviceResult {
    pub algo: AlgorithmId,
    pub found_block: usize,
    pub score: NormalizedScore,
    pub image_ref: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QueryReport {
    /// In algorithm precedence order.
    pub per_device: Vec<DeviceResult>,
    pub winner: DeviceResult,
    /// Set once the ground truth is known.
    pub correct: Option<bool>,
}

impl QueryReport {
    pub fn result_for(&self, algo: AlgorithmId) -> Option<&DeviceResult> {
        self.per_device.iter().find(|r| r.algo == algo)
    }
}

/// Outcome of comparing every device's replica.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ReplicaVerdict {
    Consistent,
    /// `device` disagrees with the majority, first at `block`.
    Diverged { device: usize, block: usize },
    /// Replicas agree but the shared chain fails verification.
    Corrupt { device: usize, verdict: Verdict },
}

impl ReplicaVerdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, ReplicaVerdict::Consistent)
    }
}

/// Image files in `dir` (by extension), sorted by file name.
pub fn dataset_files(dir: &Path) -> Result<Vec<PathBuf>, NetworkError> {
    let io = |e: std::io::Error| NetworkError::Io {
        path: dir.display().to_string(),
        reason: e.to_string(),
    };
    let mut files = Vec::new();
    for entry in std::fs::read_dir(dir).map_err(io)? {
        let path = entry.map_err(io)?.path();
        if path.is_file() && Format::from_path(&path).is_some() {
            files.push(path);
        }
    }
    files.sort_by(|a, b| a.file_name().cmp(&b.file_name()));
    Ok(files)
}

/// `<dataset dir name>/<file name>`: independent of where the dataset lives,
/// so the same images always produce the same chain file.
fn image_ref(dir: &Path, file: &Path) -> String {
    let name = file.file_name().unwrap_or_default().to_string_lossy();
    match dir.file_name() {
        Some(d) => format!("{}/{name}", d.to_string_lossy()),
        None => name.into_owned(),
    }
}

/// Hashes every dataset image with every algorithm and mines one block per
/// image, in file-name order.
pub fn enroll_dataset(
    dir: &Path,
    difficulty: u32,
    algorithms: &[AlgorithmId],
) -> Result<Chain, NetworkError> {
    let files = dataset_files(dir)?;
    if files.is_empty() {
        return Err(NetworkError::EmptyDataset(dir.display().to_string()));
    }
    let loaded = files
        .par_iter()
        .map(|path| {
            let bytes = std::fs::read(path).map_err(|e| NetworkError::Io {
                path: path.display().to_string(),
                reason: e.to_string(),
            })?;
            let img = decode_image(&bytes).map_err(|source| NetworkError::Image {
                path: path.display().to_string(),
                source,
            })?;
            Ok((path, bytes, hash_all(&img, algorithms)))
        })
        .collect::<Result<Vec<_>, NetworkError>>()?;

    let mut chain = Chain::new(difficulty, algorithms)?;
    for (path, bytes, hashes) in loaded {
        chain.append_image(&image_ref(dir, path), &bytes, hashes)?;
    }
    Ok(chain)
}

/// A set of devices sharing (or copying) one chain.
#[derive(Debug, Clone)]
pub struct Network {
    devices: Vec<Device>,
}

impl Network {
    /// One device per entry of `assignment`, which must name every algorithm
    /// of the chain exactly once.
    pub fn from_chain(
        chain: Chain,
        assignment: &[AlgorithmId],
        mode: ReplicaMode,
    ) -> Result<Self, NetworkError> {
        let mut sorted = assignment.to_vec();
        sorted.sort();
        if sorted != chain.algorithms() {
            return Err(NetworkError::Assignment {
                expected: chain.algorithms().to_vec(),
                got: assignment.to_vec(),
            });
        }
        let shared = Arc::new(chain);
        let devices = assignment
            .iter()
            .enumerate()
            .map(|(id, &algo)| Device {
                id,
                algo,
                replica: match mode {
                    ReplicaMode::Shared => Arc::clone(&shared),
                    ReplicaMode::Deep => Arc::new(Chain::clone(&shared)),
                },
            })
            .collect();
        Ok(Network { devices })
    }

    pub fn devices(&self) -> &[Device] {
        &self.devices
    }

    /// Mutable access, for injecting divergence in tests.
    pub fn devices_mut(&mut self) -> &mut Vec<Device> {
        &mut self.devices
    }

    pub fn chain(&self) -> &Chain {
        &self.devices[0].replica
    }

    pub fn query(&self, img: &Image) -> Result<QueryReport, NetworkError> {
        query(&self.devices, img)
    }

    pub fn verify_replicas(&self) -> ReplicaVerdict {
        verify_replicas(&self.devices)
    }
}

/// Builds the chain from a dataset directory and hands it to one device per
/// algorithm in `assignment`.
pub fn build_network(
    dataset_dir: &Path,
    difficulty: u32,
    assignment: &[AlgorithmId],
    mode: ReplicaMode,
) -> Result<Network, NetworkError> {
    let mut algos = assignment.to_vec();
    algos.sort();
    if algos != AlgorithmId::ALL {
        return Err(NetworkError::Assignment {
            expected: AlgorithmId::ALL.to_vec(),
            got: assignment.to_vec(),
        });
    }
    let chain = enroll_dataset(dataset_dir, difficulty, &algos)?;
    Network::from_chain(chain, assignment, mode)
}

/// Scans a device's replica for the block closest to `img` under the
/// device's algorithm. Ties keep the lowest block index.
pub fn device_scan(device: &Device, img: &Image) -> Result<DeviceResult, NetworkError> {
    let verdict = device.replica.verify();
    if !verdict.is_valid() {
        return Err(NetworkError::ReplicaInvalid {
            device: device.id,
            verdict,
        });
    }
    let probe = hash_image(device.algo, img);
    let mut best: Option<(usize, NormalizedScore)> = None;
    for (i, block) in device.replica.blocks().iter().enumerate().skip(1) {
        let stored = block
            .perceptual_hashes
            .get(&device.algo)
            .ok_or(ChainError::MissingHash(device.algo))?;
        let score = compare(device.algo, &probe, stored)?;
        if best.is_none_or(|(_, s)| score < s) {
            best = Some((i, score));
        }
    }
    let (found_block, score) = best.ok_or(NetworkError::NothingEnrolled(device.id))?;
    Ok(DeviceResult {
        algo: device.algo,
        found_block,
        score,
        image_ref: device.replica.blocks()[found_block].image_ref.clone(),
    })
}

/// Minimum score over `results`; among equal scores the earliest entry wins.
fn pick_winner(results: &[DeviceResult]) -> &DeviceResult {
    let mut winner = &results[0];
    for r in &results[1..] {
        if r.score < winner.score {
            winner = r;
        }
    }
    winner
}

/// Runs every device's scan (in parallel) and aggregates.
pub fn query(devices: &[Device], img: &Image) -> Result<QueryReport, NetworkError> {
    if devices.is_empty() {
        return Err(NetworkError::NoDevices);
    }
    match verify_replicas(devices) {
        ReplicaVerdict::Consistent => {}
        ReplicaVerdict::Diverged { device, block } => {
            return Err(NetworkError::Diverged { device, block })
        }
        ReplicaVerdict::Corrupt { device, verdict } => {
            return Err(NetworkError::ReplicaInvalid { device, verdict })
        }
    }
    let mut per_device = devices
        .par_iter()
        .map(|d| device_scan(d, img))
        .collect::<Result<Vec<_>, _>>()?;
    per_device.sort_by_key(|r| r.algo);
    let winner = pick_winner(&per_device).clone();
    Ok(QueryReport {
        per_device,
        winner,
        correct: None,
    })
}

/// Checks that all replicas are identical and that the common chain verifies.
pub fn verify_replicas(devices: &[Device]) -> ReplicaVerdict {
    let Some(first) = devices.first() else {
        return ReplicaVerdict::Consistent;
    };
    let all_shared = devices.iter().all(|d| Arc::ptr_eq(&d.replica, &first.replica));
    if !all_shared {
        // Group identical replicas; the largest group (earliest on ties) is
        // the reference.
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (i, d) in devices.iter().enumerate() {
            let rep = (0..i)
                .find(|&j| groups.contains_key(&j) && *devices[j].replica == *d.replica)
                .unwrap_or(i);
            groups.entry(rep).or_default().push(i);
        }
        if groups.len() > 1 {
            let (&reference, _) = groups
                .iter()
                .max_by(|a, b| a.1.len().cmp(&b.1.len()).then(b.0.cmp(a.0)))
                .expect("non-empty");
            let odd = (0..devices.len())
                .find(|&i| !groups[&reference].contains(&i))
                .expect("more than one group");
            let a = devices[reference].replica.blocks();
            let b = devices[odd].replica.blocks();
            let block = (0..a.len().max(b.len()))
                .find(|&k| a.get(k) != b.get(k))
                .unwrap_or(0);
            return ReplicaVerdict::Diverged {
                device: devices[odd].id,
                block,
            };
        }
    }
    match first.replica.verify() {
        Verdict::Valid => ReplicaVerdict::Consistent,
        verdict => ReplicaVerdict::Corrupt {
            device: first.id,
            verdict,
        },
    }
}
