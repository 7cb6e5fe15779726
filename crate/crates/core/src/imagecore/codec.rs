//! PNG and binary NetPBM (P5/P6) reading and writing.

use std::io::Cursor;
use std::path::Path;

use image::{DynamicImage, ImageFormat};

use super::{Image, ImageError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Png,
    /// P5 for grayscale, P6 for RGB.
    NetPbm,
}

impl Format {
    pub fn from_path(path: &Path) -> Option<Format> {
        let ext = path.extension()?.to_str()?.to_ascii_lowercase();
        match ext.as_str() {
            "png" => Some(Format::Png),
            "pgm" | "ppm" | "pnm" => Some(Format::NetPbm),
            _ => None,
        }
    }
}

/// Decodes PNG or NetPBM bytes into an 8-bit gray or RGB image. Alpha is
/// dropped and 16-bit samples are scaled down.
pub fn decode_image(bytes: &[u8]) -> Result<Image, ImageError> {
    let format = image::guess_format(bytes)
        .map_err(|e| ImageError::Decode(format!("unrecognized container: {e}")))?;
    if !matches!(format, ImageFormat::Png | ImageFormat::Pnm) {
        return Err(ImageError::Decode(format!("unsupported format {format:?}")));
    }
    let dynamic = image::load_from_memory_with_format(bytes, format)
        .map_err(|e| ImageError::Decode(e.to_string()))?;
    let (w, h) = (dynamic.width(), dynamic.height());
    let gray = matches!(
        dynamic,
        DynamicImage::ImageLuma8(_)
            | DynamicImage::ImageLuma16(_)
            | DynamicImage::ImageLumaA8(_)
            | DynamicImage::ImageLumaA16(_)
    );
    if gray {
        Image::gray(w, h, dynamic.into_luma8().into_raw())
    } else {
        Image::rgb(w, h, dynamic.into_rgb8().into_raw())
    }
}

pub fn encode_image(img: &Image, format: Format) -> Result<Vec<u8>, ImageError> {
    match format {
        Format::NetPbm => {
            let magic = if img.is_gray() { "P5" } else { "P6" };
            let mut out = format!("{magic}\n{} {}\n255\n", img.width(), img.height()).into_bytes();
            out.extend_from_slice(img.data());
            Ok(out)
        }
        Format::Png => {
            let color = if img.is_gray() {
                image::ExtendedColorType::L8
            } else {
                image::ExtendedColorType::Rgb8
            };
            let mut out = Cursor::new(Vec::new());
            image::write_buffer_with_format(
                &mut out,
                img.data(),
                img.width(),
                img.height(),
                color,
                ImageFormat::Png,
            )
            .map_err(|e| ImageError::Encode(e.to_string()))?;
            Ok(out.into_inner())
        }
    }
}

pub fn read_image(path: &Path) -> Result<Image, ImageError> {
    let bytes = std::fs::read(path).map_err(|e| ImageError::Io {
        path: path.display().to_string(),
        reason: e.to_string(),
    })?;
    decode_image(&bytes).map_err(|e| ImageError::File {
        path: path.display().to_string(),
        reason: e.to_string(),
    })
}

/// Writes `img` in the format implied by the file extension.
pub fn write_image(path: &Path, img: &Image) -> Result<(), ImageError> {
    let format = Format::from_path(path).ok_or_else(|| ImageError::File {
        path: path.display().to_string(),
        reason: "unknown image extension".into(),
    })?;
    let bytes = encode_image(img, format)?;
    std::fs::write(path, bytes).map_err(|e| ImageError::Io {
        path: path.display().to_string(),
        reason: e.to_string(),
    })
}
