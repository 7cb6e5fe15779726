//! Geometric attacks: rotation, crop and flips.

use serde::{Deserialize, Serialize};

use super::{round_sample, Image, ImageError};

/// Where a crop keeps its retained region.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum CropAnchor {
    #[default]
    Center,
    TopLeft,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FlipAxis {
    /// Mirror columns (left-right).
    Horizontal,
    /// Mirror rows (top-bottom).
    Vertical,
    Both,
}

// Exact values at quarter turns so 90/180/270 degree rotations are pure
// permutations.
fn cos_sin_degrees(degrees: f64) -> (f64, f64) {
    let d = degrees.rem_euclid(360.0);
    if d == 0.0 {
        (1.0, 0.0)
    } else if d == 90.0 {
        (0.0, 1.0)
    } else if d == 180.0 {
        (-1.0, 0.0)
    } else if d == 270.0 {
        (0.0, -1.0)
    } else {
        let r = d.to_radians();
        (r.cos(), r.sin())
    }
}

const EDGE_EPS: f64 = 1e-9;

/// Rotates counter-clockwise (as displayed) about the image center, keeping
/// the original canvas. Samples that fall outside the source are black.
pub fn rotate(img: &Image, degrees: f64) -> Image {
    rotate_with(img, degrees, false)
}

/// Like [`rotate`]; with `expand` the canvas grows to the rotated bounding box.
pub fn rotate_with(img: &Image, degrees: f64, expand: bool) -> Image {
    let (cos, sin) = cos_sin_degrees(degrees);
    let (w, h) = (img.width() as f64, img.height() as f64);
    let (out_w, out_h) = if expand {
        let bw = (w * cos.abs() + h * sin.abs() - EDGE_EPS).ceil().max(1.0);
        let bh = (w * sin.abs() + h * cos.abs() - EDGE_EPS).ceil().max(1.0);
        (bw as u32, bh as u32)
    } else {
        (img.width(), img.height())
    };
    let (cx, cy) = ((w - 1.0) / 2.0, (h - 1.0) / 2.0);
    let (ocx, ocy) = ((out_w as f64 - 1.0) / 2.0, (out_h as f64 - 1.0) / 2.0);
    let channels = img.channels();
    let mut data = vec![0u8; out_w as usize * out_h as usize * channels as usize];

    for oy in 0..out_h {
        for ox in 0..out_w {
            let dx = ox as f64 - ocx;
            let dy = oy as f64 - ocy;
            // inverse of the forward map x' = x cos + y sin, y' = -x sin + y cos
            let sx = cx + dx * cos - dy * sin;
            let sy = cy + dx * sin + dy * cos;
            if sx < -EDGE_EPS || sy < -EDGE_EPS || sx > w - 1.0 + EDGE_EPS || sy > h - 1.0 + EDGE_EPS
            {
                continue;
            }
            let sx = sx.clamp(0.0, w - 1.0);
            let sy = sy.clamp(0.0, h - 1.0);
            let x0 = sx.floor() as u32;
            let y0 = sy.floor() as u32;
            let x1 = (x0 + 1).min(img.width() - 1);
            let y1 = (y0 + 1).min(img.height() - 1);
            let fx = sx - x0 as f64;
            let fy = sy - y0 as f64;
            let base = (oy as usize * out_w as usize + ox as usize) * channels as usize;
            for c in 0..channels {
                let top = img.sample(x0, y0, c) as f64 * (1.0 - fx) + img.sample(x1, y0, c) as f64 * fx;
                let bottom =
                    img.sample(x0, y1, c) as f64 * (1.0 - fx) + img.sample(x1, y1, c) as f64 * fx;
                data[base + c as usize] = round_sample(top * (1.0 - fy) + bottom * fy);
            }
        }
    }
    Image::new(out_w, out_h, channels, data).expect("rotation output geometry is valid")
}

/// Removes `pct` percent of each dimension, keeping the centered region.
/// The result is not scaled back up.
pub fn crop(img: &Image, pct: f64) -> Result<Image, ImageError> {
    crop_with(img, pct, CropAnchor::Center)
}

pub fn crop_with(img: &Image, pct: f64, anchor: CropAnchor) -> Result<Image, ImageError> {
    if !(pct > 0.0 && pct < 100.0) {
        return Err(ImageError::OutOfRange {
            what: "crop %",
            value: pct,
        });
    }
    let keep = 1.0 - pct / 100.0;
    let cw = (img.width() as f64 * keep + 0.5).floor() as u32;
    let ch = (img.height() as f64 * keep + 0.5).floor() as u32;
    if cw < 1 || ch < 1 {
        return Err(ImageError::CropTooSmall {
            width: img.width(),
            height: img.height(),
            pct,
        });
    }
    let (x0, y0) = match anchor {
        CropAnchor::Center => ((img.width() - cw) / 2, (img.height() - ch) / 2),
        CropAnchor::TopLeft => (0, 0),
    };
    let n = img.channels() as usize;
    let mut data = Vec::with_capacity(cw as usize * ch as usize * n);
    for y in y0..y0 + ch {
        let start = img.index(x0, y, 0);
        data.extend_from_slice(&img.data()[start..start + cw as usize * n]);
    }
    Image::new(cw, ch, img.channels(), data)
}

pub fn flip(img: &Image, axis: FlipAxis) -> Image {
    let (w, h) = (img.width(), img.height());
    let n = img.channels() as usize;
    let mut data = Vec::with_capacity(img.data().len());
    for y in 0..h {
        let sy = match axis {
            FlipAxis::Horizontal => y,
            FlipAxis::Vertical | FlipAxis::Both => h - 1 - y,
        };
        for x in 0..w {
            let sx = match axis {
                FlipAxis::Vertical => x,
                FlipAxis::Horizontal | FlipAxis::Both => w - 1 - x,
            };
            let i = img.index(sx, sy, 0);
            data.extend_from_slice(&img.data()[i..i + n]);
        }
    }
    Image::new(w, h, img.channels(), data).expect("flip preserves geometry")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn textured(w: u32, h: u32) -> Image {
        Image::from_fn_rgb(w, h, |x, y| {
            [
                (x * 13 + y * 3) as u8,
                (x ^ y) as u8,
                ((x * y) % 251) as u8,
            ]
        })
        .unwrap()
    }

    #[test]
    fn zero_rotation_is_identity() {
        let img = textured(20, 13);
        assert_eq!(rotate(&img, 0.0), img);
    }

    #[test]
    fn full_turn_within_one() {
        let img = textured(20, 13);
        // 360 is special-cased; a computed near-full turn exercises the
        // general path.
        for deg in [360.0, 359.999_999_999, -720.0] {
            let out = rotate(&img, deg);
            for (a, b) in out.data().iter().zip(img.data()) {
                assert!((*a as i32 - *b as i32).abs() <= 1, "deg {deg}");
            }
        }
    }

    #[test]
    fn disk_is_quarter_turn_invariant() {
        // Direct coordinate oracle: a pixel is inside iff its squared
        // distance from the center is at most r^2.
        let n = 33;
        let c = 16i32;
        let disk = Image::from_fn_gray(n, n, |x, y| {
            let (dx, dy) = (x as i32 - c, y as i32 - c);
            if dx * dx + dy * dy <= 100 {
                200
            } else {
                10
            }
        })
        .unwrap();
        assert_eq!(rotate(&disk, 90.0), disk);
    }

    #[test]
    fn quarter_turn_moves_corner() {
        let img = Image::from_fn_gray(3, 3, |x, y| (y * 3 + x) as u8).unwrap();
        // counter-clockwise: top-right content ends at top-left
        let out = rotate(&img, 90.0);
        assert_eq!(out.data(), &[2, 5, 8, 1, 4, 7, 0, 3, 6]);
    }

    #[test]
    fn half_turn_matches_flip_both() {
        let img = textured(17, 10);
        let a = rotate(&img, 180.0);
        let b = flip(&img, FlipAxis::Both);
        assert_eq!(a, b);
    }

    #[test]
    fn expand_grows_canvas() {
        let img = textured(20, 10);
        let out = rotate_with(&img, 90.0, true);
        assert_eq!((out.width(), out.height()), (10, 20));
        let out = rotate_with(&img, 45.0, true);
        assert!(out.width() > 20 && out.height() > 10);
    }

    #[test]
    fn half_crop_of_512() {
        let img = Image::from_fn_gray(512, 512, |x, y| ((x * 7 + y * 11) % 256) as u8).unwrap();
        let out = crop(&img, 50.0).unwrap();
        assert_eq!((out.width(), out.height()), (256, 256));
        for y in 0..256 {
            for x in 0..256 {
                assert_eq!(out.sample(x, y, 0), img.sample(x + 128, y + 128, 0));
            }
        }
    }

    #[test]
    fn crop_topleft_anchor() {
        let img = textured(10, 10);
        let out = crop_with(&img, 30.0, CropAnchor::TopLeft).unwrap();
        assert_eq!((out.width(), out.height()), (7, 7));
        assert_eq!(out.sample(0, 0, 1), img.sample(0, 0, 1));
        assert_eq!(out.sample(6, 6, 2), img.sample(6, 6, 2));
    }

    #[test]
    fn crop_errors() {
        let img = textured(4, 4);
        assert!(matches!(crop(&img, 90.0), Err(ImageError::CropTooSmall { .. })));
        assert!(crop(&img, 0.0).is_err());
        assert!(crop(&img, 100.0).is_err());
    }

    #[test]
    fn crop_of_constant_is_constant() {
        let img = Image::constant(30, 20, 3, 9).unwrap();
        let out = crop(&img, 40.0).unwrap();
        assert!(out.data().iter().all(|&v| v == 9));
    }

    #[test]
    fn flip_small() {
        let img = Image::gray(2, 1, vec![5, 9]).unwrap();
        assert_eq!(flip(&img, FlipAxis::Horizontal).data(), &[9, 5]);
        assert_eq!(flip(&img, FlipAxis::Vertical).data(), &[5, 9]);
    }

    #[test]
    fn flips_are_involutions() {
        let img = textured(9, 6);
        for axis in [FlipAxis::Horizontal, FlipAxis::Vertical, FlipAxis::Both] {
            assert_eq!(flip(&flip(&img, axis), axis), img);
        }
        let hv = flip(&flip(&img, FlipAxis::Horizontal), FlipAxis::Vertical);
        assert_eq!(hv, flip(&img, FlipAxis::Both));
    }
}
