//! Raster image model, lossless codecs, and synthetic cover generation.
//!
//! [`RgbImage`] keeps the three color planes separate because every other
//! part of the crate addresses samples as (pixel index, channel). Images are
//! immutable once built; operations that "modify" an image return a new one.
//!
//! File formats live behind the [`ImageFormat`] trait. Each codec registers
//! under a name and a set of file extensions, and is picked at runtime via
//! [`format_named`] / [`format_for_path`]. Both supported formats (PNG and
//! binary PPM) are lossless for 8-bit RGB, which matters here: an LSB
//! payload does not survive lossy recompression, so no lossy codec is
//! offered at all.

mod png;
mod ppm;

use std::path::Path;

use thiserror::Error;

use crate::rng::Xorshift64Star;

pub use self::png::PngFormat;
pub use self::ppm::PpmFormat;

/// Errors from image construction, decoding, and encoding.
#[derive(Debug, Error)]
pub enum ImageError {
    /// The stream is a recognizable image we refuse to handle losslessly
    /// (wrong bit depth, palette, grayscale, alpha) or an unknown format.
    #[error("unsupported image format: {0}")]
    UnsupportedFormat(String),
    /// The stream claims to be a supported format but is malformed.
    #[error("corrupt image stream: {0}")]
    CorruptStream(String),
    /// Width or height is zero.
    #[error("image dimensions must be at least 1x1")]
    ZeroDimension,
    /// A plane's length disagrees with width*height.
    #[error("plane of {got} samples does not match width*height = {expected}")]
    PlaneSizeMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// An 8-bit RGB raster held as three row-major planes.
///
/// Invariants, enforced at construction: `width >= 1`, `height >= 1`, and
/// each plane has exactly `width * height` samples. The maximum sample
/// intensity is fixed at 255.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RgbImage {
    width: u32,
    height: u32,
    // Indexed red = 0, green = 1, blue = 2.
    pub(crate) planes: [Vec<u8>; 3],
}

/// Peak sample intensity for the fixed 8-bit depth.
pub const MAX_INTENSITY: u8 = 255;

impl RgbImage {
    /// Builds an image from its three planes, validating the invariants.
    pub fn from_planes(
        width: u32,
        height: u32,
        red: Vec<u8>,
        green: Vec<u8>,
        blue: Vec<u8>,
    ) -> Result<Self, ImageError> {
        if width == 0 || height == 0 {
            return Err(ImageError::ZeroDimension);
        }
        let expected = width as usize * height as usize;
        for plane in [&red, &green, &blue] {
            if plane.len() != expected {
                return Err(ImageError::PlaneSizeMismatch {
                    expected,
                    got: plane.len(),
                });
            }
        }
        Ok(Self {
            width,
            height,
            planes: [red, green, blue],
        })
    }

    /// Builds an image from interleaved RGB bytes (RGBRGB..., row-major).
    pub fn from_interleaved(width: u32, height: u32, rgb: &[u8]) -> Result<Self, ImageError> {
        if width == 0 || height == 0 {
            return Err(ImageError::ZeroDimension);
        }
        let pixels = width as usize * height as usize;
        if rgb.len() != pixels * 3 {
            return Err(ImageError::PlaneSizeMismatch {
                expected: pixels,
                got: rgb.len() / 3,
            });
        }
        let mut planes = [
            Vec::with_capacity(pixels),
            Vec::with_capacity(pixels),
            Vec::with_capacity(pixels),
        ];
        for px in rgb.chunks_exact(3) {
            planes[0].push(px[0]);
            planes[1].push(px[1]);
            planes[2].push(px[2]);
        }
        Ok(Self {
            width,
            height,
            planes,
        })
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    /// Total pixel count `width * height`.
    pub fn pixel_count(&self) -> u64 {
        self.width as u64 * self.height as u64
    }

    pub fn red(&self) -> &[u8] {
        &self.planes[0]
    }

    pub fn green(&self) -> &[u8] {
        &self.planes[1]
    }

    pub fn blue(&self) -> &[u8] {
        &self.planes[2]
    }

    /// Plane by index: red = 0, green = 1, blue = 2.
    pub fn plane(&self, index: usize) -> &[u8] {
        &self.planes[index]
    }

    pub fn same_dimensions(&self, other: &RgbImage) -> bool {
        self.width == other.width && self.height == other.height
    }

    /// Interleaved RGB bytes, row-major.
    pub fn to_interleaved(&self) -> Vec<u8> {
        let pixels = self.planes[0].len();
        let mut out = Vec::with_capacity(pixels * 3);
        for i in 0..pixels {
            out.push(self.planes[0][i]);
            out.push(self.planes[1][i]);
            out.push(self.planes[2][i]);
        }
        out
    }
}

/// A lossless image codec selectable at runtime.
pub trait ImageFormat: Sync {
    /// Registry name, e.g. `"png"`.
    fn name(&self) -> &'static str;
    /// File extensions (lowercase, no dot) this codec claims.
    fn extensions(&self) -> &'static [&'static str];
    /// Decodes a full in-memory stream.
    fn decode(&self, bytes: &[u8]) -> Result<RgbImage, ImageError>;
    /// Encodes to an in-memory stream. `decode(encode(img)) == img`.
    fn encode(&self, img: &RgbImage) -> Result<Vec<u8>, ImageError>;
}

/// All registered codecs.
pub static FORMATS: [&dyn ImageFormat; 2] = [&PngFormat, &PpmFormat];

/// Looks a codec up by registry name (case-insensitive).
pub fn format_named(name: &str) -> Option<&'static dyn ImageFormat> {
    FORMATS
        .iter()
        .copied()
        .find(|f| f.name().eq_ignore_ascii_case(name))
}

/// Picks a codec from a file extension.
pub fn format_for_path(path: &Path) -> Option<&'static dyn ImageFormat> {
    let ext = path.extension()?.to_str()?.to_ascii_lowercase();
    FORMATS
        .iter()
        .copied()
        .find(|f| f.extensions().contains(&ext.as_str()))
}

/// Decodes `bytes` with the named codec.
pub fn load_image(bytes: &[u8], format: &dyn ImageFormat) -> Result<RgbImage, ImageError> {
    format.decode(bytes)
}

/// Encodes `img` with the named codec.
pub fn save_image(img: &RgbImage, format: &dyn ImageFormat) -> Result<Vec<u8>, ImageError> {
    format.encode(img)
}

/// Loads an image file, picking the codec from the extension.
pub fn load_image_file(path: &Path) -> Result<RgbImage, ImageError> {
    let format = format_for_path(path).ok_or_else(|| {
        ImageError::UnsupportedFormat(format!("no codec for path {}", path.display()))
    })?;
    let bytes = std::fs::read(path)?;
    format.decode(&bytes)
}

/// Saves an image file, picking the codec from the extension.
pub fn save_image_file(img: &RgbImage, path: &Path) -> Result<(), ImageError> {
    let format = format_for_path(path).ok_or_else(|| {
        ImageError::UnsupportedFormat(format!("no codec for path {}", path.display()))
    })?;
    let bytes = format.encode(img)?;
    std::fs::write(path, bytes)?;
    Ok(())
}

/// Generates a deterministic cover image.
///
/// Samples come from [`Xorshift64Star`] seeded with `seed`, filling the red
/// plane, then green, then blue; each sample is the top byte of one 64-bit
/// output. The result is a pure function of `(seed, width, height)`, which
/// stands in for a corpus of standard test images without shipping one.
pub fn synth_image(seed: u64, width: u32, height: u32) -> Result<RgbImage, ImageError> {
    if width == 0 || height == 0 {
        return Err(ImageError::ZeroDimension);
    }
    let pixels = width as usize * height as usize;
    let mut rng = Xorshift64Star::new(seed);
    let red = rng.bytes(pixels);
    let green = rng.bytes(pixels);
    let blue = rng.bytes(pixels);
    RgbImage::from_planes(width, height, red, green, blue)
}
