use serde::{Deserialize, Serialize};

use super::ImageError;

/// An owned 8-bit pixel grid, row-major, either grayscale (1 channel) or RGB
/// (3 channels, interleaved).
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Image {
    width: u32,
    height: u32,
    channels: u8,
    data: Vec<u8>,
}

impl Image {
    pub fn new(width: u32, height: u32, channels: u8, data: Vec<u8>) -> Result<Self, ImageError> {
        if width == 0 || height == 0 {
            return Err(ImageError::InvalidDimensions { width, height });
        }
        if channels != 1 && channels != 3 {
            return Err(ImageError::UnsupportedChannels(channels));
        }
        let expected = width as usize * height as usize * channels as usize;
        if data.len() != expected {
            return Err(ImageError::DataLength {
                expected,
                actual: data.len(),
            });
        }
        Ok(Image {
            width,
            height,
            channels,
            data,
        })
    }

    pub fn gray(width: u32, height: u32, data: Vec<u8>) -> Result<Self, ImageError> {
        Self::new(width, height, 1, data)
    }

    pub fn rgb(width: u32, height: u32, data: Vec<u8>) -> Result<Self, ImageError> {
        Self::new(width, height, 3, data)
    }

    /// Builds a grayscale image by evaluating `f(x, y)` at every pixel.
    pub fn from_fn_gray(
        width: u32,
        height: u32,
        mut f: impl FnMut(u32, u32) -> u8,
    ) -> Result<Self, ImageError> {
        let mut data = Vec::with_capacity(width as usize * height as usize);
        for y in 0..height {
            for x in 0..width {
                data.push(f(x, y));
            }
        }
        Self::gray(width, height, data)
    }

    /// Builds an RGB image by evaluating `f(x, y)` at every pixel.
    pub fn from_fn_rgb(
        width: u32,
        height: u32,
        mut f: impl FnMut(u32, u32) -> [u8; 3],
    ) -> Result<Self, ImageError> {
        let mut data = Vec::with_capacity(width as usize * height as usize * 3);
        for y in 0..height {
            for x in 0..width {
                data.extend_from_slice(&f(x, y));
            }
        }
        Self::rgb(width, height, data)
    }

    pub fn constant(width: u32, height: u32, channels: u8, value: u8) -> Result<Self, ImageError> {
        let len = width as usize * height as usize * channels as usize;
        Self::new(width, height, channels, vec![value; len])
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn channels(&self) -> u8 {
        self.channels
    }

    pub fn is_gray(&self) -> bool {
        self.channels == 1
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    pub fn into_data(self) -> Vec<u8> {
        self.data
    }

    pub(crate) fn index(&self, x: u32, y: u32, c: u8) -> usize {
        (y as usize * self.width as usize + x as usize) * self.channels as usize + c as usize
    }

    /// Sample at (x, y) in channel `c`. Panics when out of bounds.
    pub fn sample(&self, x: u32, y: u32, c: u8) -> u8 {
        assert!(x < self.width && y < self.height && c < self.channels);
        self.data[self.index(x, y, c)]
    }

    pub fn area(&self) -> usize {
        self.width as usize * self.height as usize
    }

    /// Splits the interleaved samples into one `f64` plane per channel.
    pub(crate) fn planes(&self) -> Vec<Vec<f64>> {
        let n = self.channels as usize;
        (0..n)
            .map(|c| self.data.iter().skip(c).step_by(n).map(|&v| v as f64).collect())
            .collect()
    }

    /// Inverse of [`Image::planes`]: rounds half-up and clamps to `0..=255`.
    pub(crate) fn from_planes(width: u32, height: u32, planes: &[Vec<f64>]) -> Self {
        let n = planes.len();
        let mut data = vec![0u8; width as usize * height as usize * n];
        for (c, plane) in planes.iter().enumerate() {
            for (i, &v) in plane.iter().enumerate() {
                data[i * n + c] = round_sample(v);
            }
        }
        Image {
            width,
            height,
            channels: n as u8,
            data,
        }
    }
}

impl std::fmt::Debug for Image {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Image")
            .field("width", &self.width)
            .field("height", &self.height)
            .field("channels", &self.channels)
            .finish_non_exhaustive()
    }
}

/// Rounds half-up to the nearest integer and clamps into `0..=255`.
pub fn round_sample(v: f64) -> u8 {
    if v.is_nan() {
        return 0;
    }
    (v + 0.5).floor().clamp(0.0, 255.0) as u8
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_shapes() {
        assert!(matches!(
            Image::new(0, 4, 1, vec![]),
            Err(ImageError::InvalidDimensions { .. })
        ));
        assert!(matches!(
            Image::new(1, 1, 4, vec![0; 4]),
            Err(ImageError::UnsupportedChannels(4))
        ));
        assert!(matches!(
            Image::new(2, 2, 3, vec![0; 11]),
            Err(ImageError::DataLength {
                expected: 12,
                actual: 11
            })
        ));
    }

    #[test]
    fn rounding_is_half_up() {
        assert_eq!(round_sample(127.5), 128);
        assert_eq!(round_sample(127.49), 127);
        assert_eq!(round_sample(-3.0), 0);
        assert_eq!(round_sample(300.0), 255);
    }

    #[test]
    fn planes_round_trip() {
        let img = Image::rgb(2, 1, vec![1, 2, 3, 4, 5, 6]).unwrap();
        let planes = img.planes();
        assert_eq!(planes[1], vec![2.0, 5.0]);
        assert_eq!(Image::from_planes(2, 1, &planes), img);
    }
}
