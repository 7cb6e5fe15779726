//! Grayscale conversion and resizing.

use super::{Image, ImageError};

/// BT.601 luma. Grayscale input is returned unchanged.
pub fn to_grayscale(img: &Image) -> Image {
    if img.is_gray() {
        return img.clone();
    }
    let data = img
        .data()
        .chunks_exact(3)
        .map(|px| {
            let luma = 0.299 * px[0] as f64 + 0.587 * px[1] as f64 + 0.114 * px[2] as f64;
            super::round_sample(luma)
        })
        .collect();
    Image::gray(img.width(), img.height(), data).expect("same geometry as a valid image")
}

/// Per-output-sample list of `(source index, weight)` along one axis.
type AxisWeights = Vec<Vec<(usize, f64)>>;

fn axis_weights(len_in: usize, len_out: usize) -> AxisWeights {
    if len_in == len_out {
        return (0..len_out).map(|i| vec![(i, 1.0)]).collect();
    }
    if len_out < len_in {
        // Area averaging: each output sample covers `scale` source samples.
        let scale = len_in as f64 / len_out as f64;
        (0..len_out)
            .map(|j| {
                let start = j as f64 * scale;
                let end = start + scale;
                let first = start.floor() as usize;
                let last = (end.ceil() as usize).min(len_in);
                (first..last)
                    .filter_map(|i| {
                        let overlap = (end.min(i as f64 + 1.0) - start.max(i as f64)).max(0.0);
                        (overlap > 0.0).then_some((i, overlap / scale))
                    })
                    .collect()
            })
            .collect()
    } else {
        // Bilinear with pixel-center alignment.
        let scale = len_in as f64 / len_out as f64;
        (0..len_out)
            .map(|j| {
                let src = ((j as f64 + 0.5) * scale - 0.5).clamp(0.0, (len_in - 1) as f64);
                let i0 = src.floor() as usize;
                let i1 = (i0 + 1).min(len_in - 1);
                let frac = src - i0 as f64;
                if i1 == i0 || frac == 0.0 {
                    vec![(i0, 1.0)]
                } else {
                    vec![(i0, 1.0 - frac), (i1, frac)]
                }
            })
            .collect()
    }
}

/// Resamples one row-major plane, horizontally then vertically.
pub(crate) fn resize_plane(plane: &[f64], w: usize, h: usize, nw: usize, nh: usize) -> Vec<f64> {
    let wx = axis_weights(w, nw);
    let wy = axis_weights(h, nh);
    let mut horiz = vec![0.0; nw * h];
    for y in 0..h {
        let row = &plane[y * w..(y + 1) * w];
        for (x, taps) in wx.iter().enumerate() {
            horiz[y * nw + x] = taps.iter().map(|&(i, wt)| row[i] * wt).sum();
        }
    }
    let mut out = vec![0.0; nw * nh];
    for (y, taps) in wy.iter().enumerate() {
        for x in 0..nw {
            out[y * nw + x] = taps.iter().map(|&(i, wt)| horiz[i * nw + x] * wt).sum();
        }
    }
    out
}

/// Resizes to `width` x `height`: area averaging along an axis that shrinks,
/// bilinear interpolation along an axis that grows.
pub fn resize(img: &Image, width: u32, height: u32) -> Result<Image, ImageError> {
    if width == 0 || height == 0 {
        return Err(ImageError::ZeroTarget { width, height });
    }
    if width == img.width() && height == img.height() {
        return Ok(img.clone());
    }
    let planes: Vec<Vec<f64>> = img
        .planes()
        .iter()
        .map(|p| {
            resize_plane(
                p,
                img.width() as usize,
                img.height() as usize,
                width as usize,
                height as usize,
            )
        })
        .collect();
    Ok(Image::from_planes(width, height, &planes))
}

/// Grayscale then resize, kept in floating point so hashes see unrounded
/// intensities only where the resize itself introduces them.
pub(crate) fn gray_resized(img: &Image, width: u32, height: u32) -> Vec<f64> {
    let gray = to_grayscale(img);
    let resized = resize(&gray, width, height).expect("hash target sizes are non-zero");
    resized.data().iter().map(|&v| v as f64).collect()
}
