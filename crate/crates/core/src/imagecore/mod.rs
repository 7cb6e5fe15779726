//! Image model and pixel-level primitives: codecs, grayscale, resizing, DCT,
//! convolution and the attack transforms.
//!
//! All pixel arithmetic rounds half-up and clamps to `0..=255`. Every
//! function here is a pure function of its inputs.

mod attack;
mod codec;
mod dct;
mod filter;
mod geometry;
mod image;
mod resample;

pub use self::attack::{AttackKind, AttackSpec, SuiteKind, TransformOptions};
pub use self::codec::{decode_image, encode_image, read_image, write_image, Format};
pub use self::dct::{dct1, dct2, idct2};
pub use self::filter::{
    blur_kernel_size, convolve_separable, gaussian_blur, gaussian_blur_kernel, gaussian_kernel,
    sigma_for_kernel,
};
pub use self::geometry::{crop, crop_with, flip, rotate, rotate_with, CropAnchor, FlipAxis};
pub use self::image::{round_sample, Image};
pub use self::resample::{resize, to_grayscale};

pub(crate) use self::resample::gray_resized;

#[derive(Debug, thiserror::Error)]
pub enum ImageError {
    #[error("invalid image dimensions {width}x{height}")]
    InvalidDimensions { width: u32, height: u32 },
    #[error("unsupported channel count {0} (expected 1 or 3)")]
    UnsupportedChannels(u8),
    #[error("pixel buffer holds {actual} samples, expected {expected}")]
    DataLength { expected: usize, actual: usize },
    #[error("resize target {width}x{height} has a zero dimension")]
    ZeroTarget { width: u32, height: u32 },
    #[error("matrix is not square ({rows} rows, row of length {cols})")]
    NonSquare { rows: usize, cols: usize },
    #[error("{what} out of range: {value}")]
    OutOfRange { what: &'static str, value: f64 },
    #[error("cropping {width}x{height} by {pct}% leaves an empty image")]
    CropTooSmall { width: u32, height: u32, pct: f64 },
    #[error("unknown attack kind `{0}`")]
    UnknownAttack(String),
    #[error("decode failed: {0}")]
    Decode(String),
    #[error("encode failed: {0}")]
    Encode(String),
    #[error("{path}: {reason}")]
    File { path: String, reason: String },
    #[error("{path}: {reason}")]
    Io { path: String, reason: String },
}
