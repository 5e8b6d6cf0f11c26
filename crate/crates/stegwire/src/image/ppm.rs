//! Binary PPM (P6) codec, maxval 255.
//!
//! The writer emits exactly `P6\n<w> <h>\n255\n` followed by interleaved
//! RGB bytes; that header shape is normative for this crate's output. The
//! reader accepts the general P6 grammar (arbitrary whitespace and `#`
//! comments between header tokens) but only maxval 255.

use super::{ImageError, ImageFormat, RgbImage};

pub struct PpmFormat;

impl ImageFormat for PpmFormat {
    fn name(&self) -> &'static str {
        "ppm"
    }

    fn extensions(&self) -> &'static [&'static str] {
        &["ppm"]
    }

    fn decode(&self, bytes: &[u8]) -> Result<RgbImage, ImageError> {
        let mut cursor = HeaderCursor::new(bytes);
        match cursor.magic()? {
            b"P6" => {}
            other => {
                return Err(ImageError::UnsupportedFormat(format!(
                    "PPM magic {:?} (only binary P6 is accepted)",
                    String::from_utf8_lossy(other)
                )))
            }
        }
        let width = cursor.integer("width")?;
        let height = cursor.integer("height")?;
        let maxval = cursor.integer("maxval")?;
        if maxval != 255 {
            return Err(ImageError::UnsupportedFormat(format!(
                "PPM maxval {maxval} (only 255 is accepted)"
            )));
        }
        if width == 0 || height == 0 {
            return Err(ImageError::ZeroDimension);
        }
        if width > u32::MAX as u64 || height > u32::MAX as u64 {
            return Err(ImageError::CorruptStream("dimensions overflow".into()));
        }
        // Exactly one whitespace byte separates the header from the raster.
        cursor.single_whitespace()?;
        let raster = cursor.rest();
        let expected = (width * height).checked_mul(3).and_then(|n| {
            usize::try_from(n).ok()
        });
        match expected {
            Some(n) if raster.len() == n => {
                RgbImage::from_interleaved(width as u32, height as u32, raster)
            }
            Some(n) => Err(ImageError::CorruptStream(format!(
                "raster has {} bytes, expected {n}",
                raster.len()
            ))),
            None => Err(ImageError::CorruptStream("raster size overflow".into())),
        }
    }

    fn encode(&self, img: &RgbImage) -> Result<Vec<u8>, ImageError> {
        let header = format!("P6\n{} {}\n255\n", img.width(), img.height());
        let mut out = header.into_bytes();
        out.extend_from_slice(&img.to_interleaved());
        Ok(out)
    }
}

/// Tokenizer for the PPM header grammar.
struct HeaderCursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> HeaderCursor<'a> {
    fn new(bytes: &'a [u8]) -> Self {
        Self { bytes, pos: 0 }
    }

    fn magic(&mut self) -> Result<&'a [u8], ImageError> {
        if self.bytes.len() < 2 {
            return Err(ImageError::CorruptStream("missing PPM magic".into()));
        }
        self.pos = 2;
        Ok(&self.bytes[..2])
    }

    /// Skips whitespace and `#` comments (which run to end of line).
    fn skip_separators(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b.is_ascii_whitespace() {
                self.pos += 1;
            } else if b == b'#' {
                while let Some(&c) = self.bytes.get(self.pos) {
                    self.pos += 1;
                    if c == b'\n' {
                        break;
                    }
                }
            } else {
                break;
            }
        }
    }

    fn integer(&mut self, what: &str) -> Result<u64, ImageError> {
        self.skip_separators();
        let start = self.pos;
        while self
            .bytes
            .get(self.pos)
            .is_some_and(|b| b.is_ascii_digit())
        {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(ImageError::CorruptStream(format!("missing PPM {what}")));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| ImageError::CorruptStream(format!("unreadable PPM {what}")))
    }

    fn single_whitespace(&mut self) -> Result<(), ImageError> {
        match self.bytes.get(self.pos) {
            Some(b) if b.is_ascii_whitespace() => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(ImageError::CorruptStream(
                "missing whitespace before raster".into(),
            )),
        }
    }

    fn rest(&self) -> &'a [u8] {
        &self.bytes[self.pos..]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::image::synth_image;

    #[test]
    fn decodes_two_pixel_fixture() {
        let mut bytes = b"P6\n2 1\n255\n".to_vec();
        bytes.extend_from_slice(&[255, 0, 0, 0, 255, 0]);
        let img = PpmFormat.decode(&bytes).unwrap();
        assert_eq!((img.width(), img.height()), (2, 1));
        assert_eq!(img.red(), &[255, 0]);
        assert_eq!(img.green(), &[0, 255]);
        assert_eq!(img.blue(), &[0, 0]);
    }

    #[test]
    fn header_shape_is_exact() {
        let img = synth_image(1, 256, 256).unwrap();
        let bytes = PpmFormat.encode(&img).unwrap();
        assert!(bytes.starts_with(b"P6\n256 256\n255\n"));
        assert_eq!(bytes.len(), 15 + 3 * 65536);
    }

    #[test]
    fn round_trip_is_lossless() {
        let img = synth_image(9, 7, 11).unwrap();
        let back = PpmFormat.decode(&PpmFormat.encode(&img).unwrap()).unwrap();
        assert_eq!(img, back);
    }

    #[test]
    fn accepts_comments_in_header() {
        let mut bytes = b"P6\n# made by hand\n1 1 # dims\n255\n".to_vec();
        bytes.extend_from_slice(&[1, 2, 3]);
        let img = PpmFormat.decode(&bytes).unwrap();
        assert_eq!((img.red()[0], img.green()[0], img.blue()[0]), (1, 2, 3));
    }

    #[test]
    fn rejects_p3_and_wide_maxval() {
        assert!(matches!(
            PpmFormat.decode(b"P3\n1 1\n255\n1 2 3"),
            Err(ImageError::UnsupportedFormat(_))
        ));
        assert!(matches!(
            PpmFormat.decode(b"P6\n1 1\n65535\n\0\0\0\0\0\0"),
            Err(ImageError::UnsupportedFormat(_))
        ));
    }

    #[test]
    fn rejects_short_or_long_raster() {
        assert!(matches!(
            PpmFormat.decode(b"P6\n2 1\n255\n\x01\x02\x03"),
            Err(ImageError::CorruptStream(_))
        ));
        assert!(matches!(
            PpmFormat.decode(b"P6\n1 1\n255\n\x01\x02\x03\x04"),
            Err(ImageError::CorruptStream(_))
        ));
    }
}
