//! Payload framing: bytes to a self-describing bit sequence and back.
//!
//! The embedder consumes bits, and bare payload bits give the extractor no
//! way to know where to stop, so the payload travels inside a frame:
//!
//! ```text
//! MAGIC (16 bits, 0x5357) || LENGTH (32 bits, big-endian byte count) || payload bits
//! ```
//!
//! Every byte, header and payload alike, is serialized MSB-first. The magic
//! lets an extractor reject an image that never carried a frame; the length
//! bounds how many bits to read. Both the layout and the bit order are
//! normative parts of stego format version 1.

use thiserror::Error;

/// First 16 frame bits, ASCII "SW".
pub const FRAME_MAGIC: u16 = 0x5357;

/// Header size: 16 magic bits plus 32 length bits.
pub const HEADER_BITS: u64 = 48;

/// Errors from framing and deframing.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum FramingError {
    /// Payload byte count does not fit the 32-bit length field.
    #[error("payload of {0} bytes exceeds the 32-bit length field")]
    PayloadTooLong(u64),
    /// The first 16 bits are not the frame magic; the source was not
    /// produced by this embedder.
    #[error("bad frame magic 0x{found:04X} (expected 0x{FRAME_MAGIC:04X})")]
    BadMagic { found: u16 },
    /// Fewer bits available than the header demands.
    #[error("truncated bitstream: need {needed} bits, have {available}")]
    TruncatedStream { needed: u64, available: u64 },
}

/// A framed payload as an ordered bit sequence, one bit per element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FramedBitstream {
    bits: Vec<u8>,
}

impl FramedBitstream {
    /// The bits in embedding order, each 0 or 1.
    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    /// Total bit count, `48 + 8 * payload_len`.
    pub fn len(&self) -> u64 {
        self.bits.len() as u64
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }
}

/// Appends the bits of `byte`, most significant first.
///
/// This is the single byte-to-bit conversion in the crate; frame, deframe,
/// and the extractor all route through it (or its inverse).
pub fn push_bits_msb_first(bits: &mut Vec<u8>, byte: u8) {
    for shift in (0..8).rev() {
        bits.push((byte >> shift) & 1);
    }
}

/// Converts a byte slice to its MSB-first bit sequence.
pub fn bytes_to_bits(bytes: &[u8]) -> Vec<u8> {
    let mut bits = Vec::with_capacity(bytes.len() * 8);
    for &b in bytes {
        push_bits_msb_first(&mut bits, b);
    }
    bits
}

/// Inverse of [`bytes_to_bits`]; `bits.len()` must be a multiple of 8.
pub fn bits_to_bytes(bits: &[u8]) -> Vec<u8> {
    debug_assert_eq!(bits.len() % 8, 0);
    bits.chunks_exact(8)
        .map(|chunk| chunk.iter().fold(0u8, |acc, &bit| (acc << 1) | (bit & 1)))
        .collect()
}

/// Frames `payload` for embedding.
pub fn frame(payload: &[u8]) -> Result<FramedBitstream, FramingError> {
    let len = payload.len() as u64;
    if len > u32::MAX as u64 {
        return Err(FramingError::PayloadTooLong(len));
    }
    let mut bits = Vec::with_capacity(48 + payload.len() * 8);
    for byte in FRAME_MAGIC.to_be_bytes() {
        push_bits_msb_first(&mut bits, byte);
    }
    for byte in (len as u32).to_be_bytes() {
        push_bits_msb_first(&mut bits, byte);
    }
    for &byte in payload {
        push_bits_msb_first(&mut bits, byte);
    }
    Ok(FramedBitstream { bits })
}

/// Validates the 48 header bits and returns the declared payload byte count.
///
/// `header` must hold at least [`HEADER_BITS`] bits; `available` is the total
/// bit supply of the caller's source, reported in truncation errors.
pub(crate) fn parse_header(header: &[u8], available: u64) -> Result<u32, FramingError> {
    if (header.len() as u64) < HEADER_BITS {
        return Err(FramingError::TruncatedStream {
            needed: HEADER_BITS,
            available,
        });
    }
    let magic_bytes = bits_to_bytes(&header[..16]);
    let found = u16::from_be_bytes([magic_bytes[0], magic_bytes[1]]);
    if found != FRAME_MAGIC {
        return Err(FramingError::BadMagic { found });
    }
    let len_bytes = bits_to_bytes(&header[16..48]);
    Ok(u32::from_be_bytes([
        len_bytes[0],
        len_bytes[1],
        len_bytes[2],
        len_bytes[3],
    ]))
}

/// Recovers the payload bytes from a framed bit sequence.
///
/// Bits past the end of the frame are ignored, so the caller may pass every
/// bit its source can supply.
pub fn deframe(bits: &[u8]) -> Result<Vec<u8>, FramingError> {
    let available = bits.len() as u64;
    let payload_len = parse_header(bits, available)?;
    let needed = HEADER_BITS + 8 * payload_len as u64;
    if available < needed {
        return Err(FramingError::TruncatedStream { needed, available });
    }
    Ok(bits_to_bytes(
        &bits[HEADER_BITS as usize..needed as usize],
    ))
}
