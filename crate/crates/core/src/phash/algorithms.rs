//! The five hash functions.
//!
//! Fixed parameters:
//!
//! | algorithm     | preprocessing        | output                            |
//! |---------------|----------------------|-----------------------------------|
//! | average       | gray, 8x8            | 64 bits, pixel > mean             |
//! | pHash         | gray, 32x32, DCT     | 64 bits, low 8x8 coeff > AC mean  |
//! | block mean    | gray, 256x256        | 256 bits, 16x16 block > median    |
//! | Marr-Hildreth | gray, 512x512, LoG   | 576 bits, 24x24 block sum > mean  |
//! | radial        | gray, 180 projections| 40 quantized DCT coefficients     |

use std::collections::BTreeMap;

use super::{AlgorithmId, BitHash, PerceptualHash, RadialDigest, RADIAL_FEATURES};
use crate::imagecore::{convolve_separable, dct1, dct2, gray_resized, to_grayscale, Image};

/// Laplacian-of-Gaussian scale used by the Marr-Hildreth hash.
pub const LOG_SIGMA: f64 = 2.0 * std::f64::consts::SQRT_2;
/// Laplacian-of-Gaussian kernel size used by the Marr-Hildreth hash.
pub const LOG_KERNEL_SIZE: usize = 15;
/// Number of projection angles (one per degree over a half turn).
pub const RADIAL_ANGLES: usize = 180;

fn threshold_bits(algo: AlgorithmId, values: &[f64], threshold: f64) -> BitHash {
    let bits: Vec<bool> = values.iter().map(|&v| v > threshold).collect();
    BitHash::from_bits(algo, &bits).expect("algorithm-sized input")
}

pub fn average_hash(img: &Image) -> BitHash {
    let px = gray_resized(img, 8, 8);
    let mean = px.iter().sum::<f64>() / 64.0;
    threshold_bits(AlgorithmId::Average, &px, mean)
}

pub fn p_hash(img: &Image) -> BitHash {
    const N: usize = 32;
    let px = gray_resized(img, N as u32, N as u32);
    let mean = px.iter().sum::<f64>() / (N * N) as f64;
    // AC terms are unaffected by removing the mean; transforming the centered
    // block keeps them exactly zero for flat input. The DC term is restored.
    let block: Vec<Vec<f64>> = px.chunks(N).map(|r| r.iter().map(|v| v - mean).collect()).collect();
    let coeffs = dct2(&block).expect("square block");
    let mut low: Vec<f64> = coeffs[..8].iter().flat_map(|r| r[..8].to_vec()).collect();
    low[0] = N as f64 * mean;
    let ac_mean = low[1..].iter().sum::<f64>() / 63.0;
    threshold_bits(AlgorithmId::PHash, &low, ac_mean)
}

pub fn block_mean_hash(img: &Image) -> BitHash {
    const SIDE: usize = 256;
    const BLOCK: usize = 16;
    let px = gray_resized(img, SIDE as u32, SIDE as u32);
    let grid = SIDE / BLOCK;
    // Equal-sized blocks: compare integer sums rather than means.
    let mut sums = vec![0u64; grid * grid];
    for y in 0..SIDE {
        for x in 0..SIDE {
            sums[(y / BLOCK) * grid + x / BLOCK] += px[y * SIDE + x] as u64;
        }
    }
    let mut sorted = sums.clone();
    sorted.sort_unstable();
    let mid = sorted.len() / 2;
    let twice_median = sorted[mid - 1] + sorted[mid];
    let bits: Vec<bool> = sums.iter().map(|&s| 2 * s > twice_median).collect();
    BitHash::from_bits(AlgorithmId::BlockMean, &bits).expect("256 blocks")
}

/// The two 1-D factors of the LoG kernel: a normalized Gaussian `g` and its
/// zero-sum second derivative `g2`. The 2-D kernel is `g2(x)g(y) + g(x)g2(y)`.
fn log_factors(size: usize, sigma: f64) -> (Vec<f64>, Vec<f64>) {
    let c = (size / 2) as f64;
    let s2 = sigma * sigma;
    let raw: Vec<f64> = (0..size)
        .map(|i| {
            let d = i as f64 - c;
            (-d * d / (2.0 * s2)).exp()
        })
        .collect();
    let total: f64 = raw.iter().sum();
    let g: Vec<f64> = raw.iter().map(|v| v / total).collect();
    let mut g2: Vec<f64> = g
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let d = i as f64 - c;
            (d * d / (s2 * s2) - 1.0 / s2) * v
        })
        .collect();
    let bias = g2.iter().sum::<f64>() / size as f64;
    g2.iter_mut().for_each(|v| *v -= bias);
    (g, g2)
}

pub fn marr_hildreth_hash(img: &Image) -> BitHash {
    const SIDE: usize = 512;
    const GRID: usize = 24;
    let mut px = gray_resized(img, SIDE as u32, SIDE as u32);
    // The LoG annihilates constants; centering first makes a flat image give
    // an exactly zero response.
    let mean = px.iter().sum::<f64>() / px.len() as f64;
    px.iter_mut().for_each(|v| *v -= mean);

    let (g, g2) = log_factors(LOG_KERNEL_SIZE, LOG_SIGMA);
    let dxx = convolve_separable(&px, SIDE, SIDE, &g2, &g);
    let dyy = convolve_separable(&px, SIDE, SIDE, &g, &g2);

    let edges: Vec<usize> = (0..=GRID).map(|i| i * SIDE / GRID).collect();
    let mut sums = vec![0.0f64; GRID * GRID];
    for by in 0..GRID {
        for bx in 0..GRID {
            let mut s = 0.0;
            for y in edges[by]..edges[by + 1] {
                for x in edges[bx]..edges[bx + 1] {
                    s += dxx[y * SIDE + x] + dyy[y * SIDE + x];
                }
            }
            sums[by * GRID + bx] = s;
        }
    }
    let mean = sums.iter().sum::<f64>() / sums.len() as f64;
    threshold_bits(AlgorithmId::MarrHildreth, &sums, mean)
}

/// Variance of the pixels along each line through the image center, one line
/// per degree.
///
/// Every sampled pixel is paired with its point reflection through the
/// center, so the sample multiset of each line is closed under a half turn and
/// the profile of a 180-degree rotated image is bit-identical.
pub fn radial_projections(img: &Image) -> Vec<f64> {
    let gray = to_grayscale(img);
    let (w, h) = (gray.width() as i64, gray.height() as i64);
    let px = gray.data();
    let (cx, cy) = ((w - 1) as f64 / 2.0, (h - 1) as f64 / 2.0);
    let reach = ((cx * cx + cy * cy).sqrt()).ceil() as i64 + 1;

    (0..RADIAL_ANGLES)
        .map(|deg| {
            let (cos, sin) = match deg {
                0 => (1.0, 0.0),
                90 => (0.0, 1.0),
                _ => {
                    let r = (deg as f64).to_radians();
                    (r.cos(), r.sin())
                }
            };
            let (mut n, mut sum, mut sq) = (0u64, 0u64, 0u64);
            for t in 0..=reach {
                let x = (cx + t as f64 * cos).round() as i64;
                let y = (cy + t as f64 * sin).round() as i64;
                if x < 0 || y < 0 || x >= w || y >= h {
                    continue;
                }
                for (px_x, px_y) in [(x, y), (w - 1 - x, h - 1 - y)] {
                    let v = px[(px_y * w + px_x) as usize] as u64;
                    n += 1;
                    sum += v;
                    sq += v * v;
                }
            }
            if n == 0 {
                return 0.0;
            }
            let num = n as f64 * sq as f64 - (sum as f64) * (sum as f64);
            num / (n as f64 * n as f64)
        })
        .collect()
}

pub fn radial_variance_hash(img: &Image) -> RadialDigest {
    let mut profile = radial_projections(img);
    // Standardise the profile so the digest encodes how variance changes
    // with angle rather than how large it is; otherwise the DC term
    // dominates every digest and unrelated images correlate strongly.
    let n = profile.len() as f64;
    let mean = profile.iter().sum::<f64>() / n;
    let sd = (profile.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n).sqrt();
    for v in &mut profile {
        *v = if sd > 0.0 { (*v - mean) / sd } else { 0.0 };
    }
    let coeffs = dct1(&profile);
    let kept = &coeffs[..RADIAL_FEATURES];
    let min = kept.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = kept.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut features = [0u8; RADIAL_FEATURES];
    if max > min {
        for (f, &c) in features.iter_mut().zip(kept) {
            *f = crate::imagecore::round_sample((c - min) / (max - min) * 255.0);
        }
    }
    RadialDigest::new(features)
}

/// Runs one algorithm.
pub fn hash_image(algo: AlgorithmId, img: &Image) -> PerceptualHash {
    match algo {
        AlgorithmId::Average => average_hash(img).into(),
        AlgorithmId::PHash => p_hash(img).into(),
        AlgorithmId::BlockMean => block_mean_hash(img).into(),
        AlgorithmId::MarrHildreth => marr_hildreth_hash(img).into(),
        AlgorithmId::RadialVariance => radial_variance_hash(img).into(),
    }
}

/// Runs every algorithm in `algos`.
pub fn hash_all(img: &Image, algos: &[AlgorithmId]) -> BTreeMap<AlgorithmId, PerceptualHash> {
    algos.iter().map(|&a| (a, hash_image(a, img))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::imagecore::{flip, FlipAxis};

    fn textured() -> Image {
        Image::from_fn_rgb(97, 64, |x, y| {
            let v = ((x as f64 / 9.0).sin() * 60.0 + (y as f64 / 5.0).cos() * 50.0 + 120.0) as u8;
            [v, v.wrapping_add((x * y % 40) as u8), (x * 2) as u8]
        })
        .unwrap()
    }

    #[test]
    fn constant_image_bits() {
        let img = Image::constant(40, 30, 3, 90).unwrap();
        assert_eq!(average_hash(&img).count_ones(), 0);
        assert_eq!(block_mean_hash(&img).count_ones(), 0);
        assert_eq!(marr_hildreth_hash(&img).count_ones(), 0);
        let ph = p_hash(&img);
        assert!(ph.bit(0), "DC above the zero AC mean");
        assert_eq!(ph.count_ones(), 1);
    }

    #[test]
    fn average_hash_half_split() {
        let img = Image::from_fn_gray(8, 8, |x, _| if x < 4 { 0 } else { 255 }).unwrap();
        assert_eq!(average_hash(&img).bytes(), &[0x0f; 8]);
    }

    #[test]
    fn block_mean_top_half() {
        let img = Image::from_fn_gray(64, 64, |_, y| if y < 32 { 255 } else { 0 }).unwrap();
        let h = block_mean_hash(&img);
        assert_eq!(h.count_ones(), 128);
        assert!((0..128).all(|i| h.bit(i)));
    }

    #[test]
    fn lengths() {
        let img = textured();
        assert_eq!(average_hash(&img).bit_len(), 64);
        assert_eq!(p_hash(&img).bit_len(), 64);
        assert_eq!(block_mean_hash(&img).bit_len(), 256);
        assert_eq!(marr_hildreth_hash(&img).bytes().len(), 72);
    }

    #[test]
    fn log_kernel_annihilates_constants() {
        let (g, g2) = log_factors(LOG_KERNEL_SIZE, LOG_SIGMA);
        assert!((g.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(g2.iter().sum::<f64>().abs() < 1e-12);
        // symmetric and negative at the center (a "Mexican hat", inverted)
        assert!(g2[7] < 0.0);
        assert!((g2[0] - g2[14]).abs() < 1e-15);
    }

    #[test]
    fn radial_half_turn_invariance() {
        for img in [textured(), crate::imagecore::crop(&textured(), 30.0).unwrap()] {
            let rotated = flip(&img, FlipAxis::Both);
            assert_eq!(radial_projections(&img), radial_projections(&rotated));
            assert_eq!(radial_variance_hash(&img), radial_variance_hash(&rotated));
        }
    }

    #[test]
    fn radial_flat_image() {
        let img = Image::constant(20, 20, 1, 5).unwrap();
        assert_eq!(radial_variance_hash(&img).features(), &[0u8; RADIAL_FEATURES]);
    }

    #[test]
    fn deterministic() {
        let img = textured();
        for a in AlgorithmId::ALL {
            assert_eq!(hash_image(a, &img), hash_image(a, &img));
        }
        assert_eq!(hash_all(&img, &AlgorithmId::ALL).len(), 5);
    }

    #[test]
    fn tiny_images_hash() {
        let img = Image::gray(1, 1, vec![42]).unwrap();
        for a in AlgorithmId::ALL {
            let _ = hash_image(a, &img);
        }
    }
}
