//! Separable convolution with replicated borders, and the Gaussian blur
//! attack built on it.

use super::{Image, ImageError};

/// Convolves a row-major plane with `kx` along rows and `ky` along columns.
/// Kernels must have odd length; samples beyond the edge replicate the border.
pub fn convolve_separable(plane: &[f64], w: usize, h: usize, kx: &[f64], ky: &[f64]) -> Vec<f64> {
    debug_assert!(kx.len() % 2 == 1 && ky.len() % 2 == 1);
    let rx = (kx.len() / 2) as isize;
    let ry = (ky.len() / 2) as isize;
    let clamp = |v: isize, len: usize| v.clamp(0, len as isize - 1) as usize;

    let mut tmp = vec![0.0; w * h];
    for y in 0..h {
        let row = &plane[y * w..(y + 1) * w];
        for x in 0..w {
            let mut acc = 0.0;
            for (t, k) in kx.iter().enumerate() {
                acc += k * row[clamp(x as isize + t as isize - rx, w)];
            }
            tmp[y * w + x] = acc;
        }
    }
    let mut out = vec![0.0; w * h];
    for y in 0..h {
        for (t, k) in ky.iter().enumerate() {
            let src = clamp(y as isize + t as isize - ry, h) * w;
            for x in 0..w {
                out[y * w + x] += k * tmp[src + x];
            }
        }
    }
    out
}

/// Normalized 1-D Gaussian of odd length `size`.
pub fn gaussian_kernel(size: usize, sigma: f64) -> Vec<f64> {
    let c = (size / 2) as f64;
    let raw: Vec<f64> = (0..size)
        .map(|i| {
            let d = i as f64 - c;
            (-d * d / (2.0 * sigma * sigma)).exp()
        })
        .collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|v| v / total).collect()
}

/// Sigma implied by a kernel size when none is given explicitly.
pub fn sigma_for_kernel(size: usize) -> f64 {
    0.3 * ((size as f64 - 1.0) / 2.0 - 1.0) + 0.8
}

/// Kernel size for a blur of `strength_pct` percent of the shorter side:
/// the largest odd integer not above that length, never below 3.
pub fn blur_kernel_size(width: u32, height: u32, strength_pct: f64) -> usize {
    let span = (strength_pct / 100.0 * width.min(height) as f64).floor() as usize;
    let odd = if span.is_multiple_of(2) { span.saturating_sub(1) } else { span };
    odd.max(3)
}

/// Gaussian blur whose kernel size scales with the image.
pub fn gaussian_blur(img: &Image, strength_pct: f64) -> Result<Image, ImageError> {
    if !(strength_pct > 0.0 && strength_pct < 100.0) {
        return Err(ImageError::OutOfRange {
            what: "blur strength %",
            value: strength_pct,
        });
    }
    let k = blur_kernel_size(img.width(), img.height(), strength_pct);
    Ok(gaussian_blur_kernel(img, k))
}

/// Gaussian blur with an explicit odd kernel size.
pub fn gaussian_blur_kernel(img: &Image, size: usize) -> Image {
    let size = if size.is_multiple_of(2) { size + 1 } else { size };
    let kernel = gaussian_kernel(size, sigma_for_kernel(size));
    let (w, h) = (img.width() as usize, img.height() as usize);
    let planes: Vec<Vec<f64>> = img
        .planes()
        .iter()
        .map(|p| convolve_separable(p, w, h, &kernel, &kernel))
        .collect();
    Image::from_planes(img.width(), img.height(), &planes)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_size_examples() {
        assert_eq!(blur_kernel_size(512, 512, 5.0), 25);
        assert_eq!(blur_kernel_size(256, 256, 5.0), 11);
        assert_eq!(blur_kernel_size(10, 10, 5.0), 3);
        assert_eq!(blur_kernel_size(256, 300, 85.0), 217);
    }

    #[test]
    fn conventional_sigma() {
        assert!((sigma_for_kernel(3) - 0.8).abs() < 1e-12);
        assert!((sigma_for_kernel(25) - (0.3 * 11.0 + 0.8)).abs() < 1e-12);
    }

    #[test]
    fn constant_is_fixed_point() {
        let img = Image::constant(40, 30, 3, 77).unwrap();
        assert_eq!(gaussian_blur(&img, 35.0).unwrap(), img);
    }

    #[test]
    fn impulse_peaks_at_center() {
        let img = Image::from_fn_gray(7, 7, |x, y| if (x, y) == (3, 3) { 255 } else { 0 }).unwrap();
        let out = gaussian_blur_kernel(&img, 3);
        let max = *out.data().iter().max().unwrap();
        assert_eq!(out.sample(3, 3, 0), max);
        assert!(max < 255);
        assert_eq!(out.sample(0, 0, 0), 0);
    }

    #[test]
    fn strength_out_of_range() {
        let img = Image::constant(8, 8, 1, 0).unwrap();
        assert!(gaussian_blur(&img, 0.0).is_err());
        assert!(gaussian_blur(&img, 100.0).is_err());
        assert!(gaussian_blur(&img, f64::NAN).is_err());
    }

    #[test]
    fn dimensions_unchanged() {
        let img = Image::from_fn_gray(31, 17, |x, y| (x * y) as u8).unwrap();
        let out = gaussian_blur(&img, 55.0).unwrap();
        assert_eq!((out.width(), out.height()), (31, 17));
    }
}
