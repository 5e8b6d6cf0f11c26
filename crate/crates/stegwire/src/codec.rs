//! Cyclic-channel LSB substitution: embed a framed bitstream into a cover
//! image and extract it back without the cover.
//!
//! Bit `i` of the frame lands in the least-significant bit of exactly one
//! sample: pixel `i` in row-major order, in the channel selected by a 1-2-3
//! indicator that starts at RED and advances by one per bit, wrapping BLUE
//! back to RED. Capacity is therefore one bit per pixel. Extraction walks
//! the same plan, so no key and no cover image are needed on the receiving
//! side.

use thiserror::Error;

use crate::framing::{self, bits_to_bytes, frame, FramingError, HEADER_BITS};
use crate::image::RgbImage;

/// Errors from embedding and extraction.
#[derive(Debug, Error)]
pub enum CodecError {
    /// The framed payload needs more bits than the cover has pixels.
    #[error("payload needs {required_bits} bits but the cover holds {available_bits}")]
    PayloadExceedsCapacity {
        required_bits: u64,
        available_bits: u64,
    },
    /// Frame-level failure: bad magic (not a stego image from this tool) or
    /// a declared length the image cannot hold.
    #[error(transparent)]
    Framing(#[from] FramingError),
}

/// The channel indicator: which plane receives the current bit.
///
/// Discriminants follow the 1 = RED, 2 = GREEN, 3 = BLUE convention.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Channel {
    Red = 1,
    Green = 2,
    Blue = 3,
}

impl Channel {
    /// Indicator value in 1..=3.
    pub fn indicator(self) -> u8 {
        self as u8
    }

    /// Next indicator state: RED -> GREEN -> BLUE -> RED.
    pub fn successor(self) -> Channel {
        match self {
            Channel::Red => Channel::Green,
            Channel::Green => Channel::Blue,
            Channel::Blue => Channel::Red,
        }
    }

    /// Plane index into an [`RgbImage`].
    pub fn plane_index(self) -> usize {
        self as usize - 1
    }
}

/// Channel that bit `i` of the frame occupies: `(i mod 3) + 1`.
pub fn channel_for_bit(i: u64) -> Channel {
    match i % 3 {
        0 => Channel::Red,
        1 => Channel::Green,
        _ => Channel::Blue,
    }
}

/// Embedding capacity in bits: one per pixel, `width * height`.
pub fn capacity_bits(img: &RgbImage) -> u64 {
    img.pixel_count()
}

/// Largest payload that fits once the 48-bit header is paid for.
pub fn usable_payload_bytes(img: &RgbImage) -> u64 {
    capacity_bits(img).saturating_sub(HEADER_BITS) / 8
}

/// LSB of the sample that carries frame bit `i`.
fn carrier_lsb(img: &RgbImage, i: u64) -> u8 {
    img.planes[channel_for_bit(i).plane_index()][i as usize] & 1
}

/// Embeds `payload` into a copy of `cover`.
///
/// Exactly one sample per frame bit differs from the cover, and only in its
/// LSB; every other sample is byte-identical. The cover itself is untouched.
pub fn embed(cover: &RgbImage, payload: &[u8]) -> Result<RgbImage, CodecError> {
    let required_bits = HEADER_BITS + 8 * payload.len() as u64;
    let available_bits = capacity_bits(cover);
    if required_bits > available_bits {
        return Err(CodecError::PayloadExceedsCapacity {
            required_bits,
            available_bits,
        });
    }
    let framed = frame(payload)?;
    let mut stego = cover.clone();
    for (i, &bit) in framed.bits().iter().enumerate() {
        let plane = &mut stego.planes[channel_for_bit(i as u64).plane_index()];
        plane[i] = (plane[i] & !1) | bit;
    }
    Ok(stego)
}

/// Recovers the payload from a stego image alone.
///
/// Reads LSBs along the embedding plan, validates the frame header, and
/// deframes. Fails with `BadMagic` on images this tool never touched and
/// with `TruncatedStream` when the declared length cannot fit the image
/// (corrupted or hostile input).
pub fn extract(stego: &RgbImage) -> Result<Vec<u8>, CodecError> {
    let available = capacity_bits(stego);
    let header_bits: Vec<u8> = (0..HEADER_BITS.min(available))
        .map(|i| carrier_lsb(stego, i))
        .collect();
    let payload_len = framing::parse_header(&header_bits, available)?;
    let needed = HEADER_BITS + 8 * payload_len as u64;
    if needed > available {
        return Err(FramingError::TruncatedStream {
            needed,
            available,
        }
        .into());
    }
    let payload_bits: Vec<u8> = (HEADER_BITS..needed).map(|i| carrier_lsb(stego, i)).collect();
    Ok(bits_to_bytes(&payload_bits))
}
