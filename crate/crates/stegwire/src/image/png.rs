//! PNG codec restricted to 8-bit RGB.
//!
//! Decoding keeps the raw samples (no transformations), so anything that is
//! not exactly 8-bit truecolor RGB — palette, grayscale, alpha, 16-bit — is
//! rejected rather than silently converted. That keeps the LSB layer of the
//! cover byte-exact through a save/load cycle.

use std::io::Cursor;

use super::{ImageError, ImageFormat, RgbImage};

pub struct PngFormat;

impl ImageFormat for PngFormat {
    fn name(&self) -> &'static str {
        "png"
    }

    fn extensions(&self) -> &'static [&'static str] {
        &["png"]
    }

    fn decode(&self, bytes: &[u8]) -> Result<RgbImage, ImageError> {
        let decoder = png::Decoder::new(Cursor::new(bytes));
        let mut reader = decoder
            .read_info()
            .map_err(|e| ImageError::CorruptStream(e.to_string()))?;
        let info = reader.info();
        if info.color_type != png::ColorType::Rgb {
            return Err(ImageError::UnsupportedFormat(format!(
                "PNG color type {:?} (only 8-bit RGB without alpha is accepted)",
                info.color_type
            )));
        }
        if info.bit_depth != png::BitDepth::Eight {
            return Err(ImageError::UnsupportedFormat(format!(
                "PNG bit depth {:?} (only 8-bit RGB is accepted)",
                info.bit_depth
            )));
        }
        let size = reader
            .output_buffer_size()
            .ok_or_else(|| ImageError::CorruptStream("output buffer size overflow".into()))?;
        let mut buf = vec![0u8; size];
        let out = reader
            .next_frame(&mut buf)
            .map_err(|e| ImageError::CorruptStream(e.to_string()))?;
        buf.truncate(out.buffer_size());
        RgbImage::from_interleaved(out.width, out.height, &buf)
    }

    fn encode(&self, img: &RgbImage) -> Result<Vec<u8>, ImageError> {
        let mut out = Vec::new();
        {
            let mut encoder = png::Encoder::new(&mut out, img.width(), img.height());
            encoder.set_color(png::ColorType::Rgb);
            encoder.set_depth(png::BitDepth::Eight);
            let mut writer = encoder
                .write_header()
                .map_err(|e| ImageError::CorruptStream(e.to_string()))?;
            writer
                .write_image_data(&img.to_interleaved())
                .map_err(|e| ImageError::CorruptStream(e.to_string()))?;
        }
        Ok(out)
    }
}
