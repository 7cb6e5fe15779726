//! Deterministic synthetic stand-in for the twelve standard test images.
//!
//! Each image mixes multi-octave value noise, a background gradient, a weak
//! oriented grating and an angular pinwheel, all drawn from a per-image
//! seeded RNG, so the set is mutually distinct, asymmetric, and textured at
//! several scales. The mix was chosen so the attack suites show the
//! behaviour the experiment is about: blurs retrieve reliably, crops degrade
//! gradually, rotations fail quickly, and mirror images are not confused
//! with their originals.

use std::f64::consts::{PI, TAU};
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::HarnessError;
use crate::imagecore::{write_image, Image};

/// File stems of the generated dataset, in enrollment (file name) order.
pub const DATASET_STEMS: [&str; 12] = [
    "boat",
    "cameraman",
    "house",
    "jetplane",
    "lake",
    "livingroom",
    "mandrill",
    "peppers",
    "pirate",
    "plane",
    "walkbridge",
    "woman_blonde",
];

/// The images attacked by default.
pub const DEFAULT_TESTSET: [&str; 5] = ["house", "lake", "mandrill", "peppers", "woman_blonde"];

pub const DEFAULT_SIZE: u32 = 256;

struct ValueNoise {
    cells: usize,
    grid: Vec<f64>,
}

impl ValueNoise {
    fn new(rng: &mut ChaCha8Rng, cells: usize) -> Self {
        let grid = (0..(cells + 1) * (cells + 1)).map(|_| rng.gen::<f64>()).collect();
        ValueNoise { cells, grid }
    }

    /// Smoothly interpolated value at (u, v) in [0, 1]^2.
    fn at(&self, u: f64, v: f64) -> f64 {
        let fx = u * self.cells as f64;
        let fy = v * self.cells as f64;
        let x0 = (fx.floor() as usize).min(self.cells - 1);
        let y0 = (fy.floor() as usize).min(self.cells - 1);
        let smooth = |t: f64| t * t * (3.0 - 2.0 * t);
        let tx = smooth(fx - x0 as f64);
        let ty = smooth(fy - y0 as f64);
        let g = |x: usize, y: usize| self.grid[y * (self.cells + 1) + x];
        let top = g(x0, y0) * (1.0 - tx) + g(x0 + 1, y0) * tx;
        let bottom = g(x0, y0 + 1) * (1.0 - tx) + g(x0 + 1, y0 + 1) * tx;
        top * (1.0 - ty) + bottom * ty
    }
}

/// Gradient directions step through the twelve 30-degree slots in an order
/// unrelated to the file names; the small offset keeps a mirrored direction
/// (a -> 180 - a or a -> -a) from landing on another image's slot.
fn gradient_angle(index: usize) -> f64 {
    let slot = (index * 7) % 12;
    TAU * (slot as f64 + 0.125) / 12.0
}

/// Renders dataset image number `index` (0-based) at `size` x `size`.
pub fn synthetic_image(index: usize, size: u32) -> Image {
    const NOISE: f64 = 0.627;
    const GRATING: f64 = 0.2;
    const PINWHEEL: f64 = 0.478;
    const HARMONICS: usize = 4;

    let mut rng = ChaCha8Rng::seed_from_u64(0x1a9e_c4a1_0000 + index as u64);
    let octaves: Vec<[ValueNoise; 3]> = [3usize, 7, 17, 41]
        .iter()
        .map(|&c| {
            [
                ValueNoise::new(&mut rng, c),
                ValueNoise::new(&mut rng, c),
                ValueNoise::new(&mut rng, c),
            ]
        })
        .collect();
    let weights = [0.45, 0.28, 0.331 * 0.17, 0.331 * 0.10];
    let weight_sum: f64 = weights.iter().sum();

    // the direction itself is fixed per index, but the draw stays so the
    // rest of the stream is unchanged
    let _: f64 = rng.gen_range(0.0..TAU);
    let angle = gradient_angle(index);
    let (gdx, gdy) = (angle.cos(), angle.sin());
    let gradient_strength: f64 = rng.gen_range(0.818..1.132);
    let tint: [f64; 3] = [rng.gen_range(0.5..1.0), rng.gen_range(0.5..1.0), rng.gen_range(0.5..1.0)];
    // an oriented grating gives every image its own direction-dependent
    // structure, as horizons and edges do in photographs
    let phi: f64 = rng.gen_range(0.0..PI);
    let (sdx, sdy) = (phi.cos(), phi.sin());
    let freq: f64 = rng.gen_range(2.0..9.0);
    let phase: f64 = rng.gen_range(0.0..TAU);
    // low angular harmonics around the centre, fading towards it: a
    // chiral "pinwheel" that a mirror reverses, and that centre crops
    // progressively lose
    let harmonics: Vec<(f64, f64)> = (0..HARMONICS)
        .map(|_| (rng.gen_range(-1.0..1.0), rng.gen_range(0.0..TAU)))
        .collect();

    let n = size as f64;
    Image::from_fn_rgb(size, size, |x, y| {
        let (u, v) = ((x as f64 + 0.5) / n, (y as f64 + 0.5) / n);
        let ramp = (u - 0.5) * gdx + (v - 0.5) * gdy;
        let wave = 0.5 + 0.5 * (TAU * freq * (u * sdx + v * sdy) + phase).sin();
        let radius = 2.0 * ((u - 0.5).powi(2) + (v - 0.5).powi(2)).sqrt();
        let theta = (v - 0.5).atan2(u - 0.5);
        let pinwheel = radius
            * harmonics
                .iter()
                .enumerate()
                .map(|(k, (a, p))| a * ((k + 1) as f64 * theta + p).cos())
                .sum::<f64>()
            / (HARMONICS as f64).sqrt();
        let mut px = [0.0f64; 3];
        for (c, p) in px.iter_mut().enumerate() {
            let noise = octaves
                .iter()
                .zip(weights)
                .map(|(oct, w)| w * oct[c].at(u, v))
                .sum::<f64>()
                / weight_sum;
            *p = (0.5
                + NOISE * (noise - 0.5)
                + GRATING * (wave - 0.5)
                + PINWHEEL * pinwheel
                + gradient_strength * ramp)
                * tint[c];
        }
        px.map(|p| crate::imagecore::round_sample(p.clamp(0.0, 1.0) * 255.0))
    })
    .expect("non-zero size")
}

/// Writes the twelve images as `<stem>.png` into `dir`, returning the paths.
pub fn write_dataset(dir: &Path, size: u32) -> Result<Vec<PathBuf>, HarnessError> {
    std::fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))?;
    DATASET_STEMS
        .iter()
        .enumerate()
        .map(|(i, stem)| {
            let path = dir.join(format!("{stem}.png"));
            write_image(&path, &synthetic_image(i, size))?;
            Ok(path)
        })
        .collect()
}
