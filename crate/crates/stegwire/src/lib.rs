//! Steganographic transport for aggregated sensor data.
//!
//! `stegwire` hides payload bytes in the least-significant bits of a color
//! image, cycling the target channel R -> G -> B across consecutive pixels,
//! and ships the resulting stego image from a sink node to a fusion center
//! over a minimal length-prefixed protocol. Imperceptibility is scored with
//! four reference metrics (PSNR, MSE, NCC, SSIM).
//!
//! The pieces compose left to right:
//!
//! ```text
//! SensorRecord* --encode_aggregate--> bytes --frame--> bits --embed--> stego image
//!     --PNG--> "STG1" message --TCP/file--> extract --deframe--> decode --> SensorRecord*
//! ```
//!
//! # Stego format (version 1)
//!
//! The on-image format is normative; any conforming extractor can recover
//! the payload blind (without the cover):
//!
//! * traversal: row-major pixels from the top-left, one bit per pixel;
//! * channel for bit `i`: `(i mod 3) + 1`, i.e. R, G, B, R, ... ([`codec::Channel`]);
//! * bit layout: 16-bit magic `0x5357`, 32-bit big-endian payload byte
//!   count, then payload bytes MSB-first ([`framing`]);
//! * embedding is plain LSB substitution; all other bits of the cover are
//!   untouched.

pub mod codec;
pub mod experiment;
pub mod framing;
pub mod image;
pub mod metrics;
pub mod records;
pub mod rng;
pub mod wire;

pub use codec::{capacity_bits, embed, extract, usable_payload_bytes, Channel, CodecError};
pub use framing::{deframe, frame, FramedBitstream, FramingError};
pub use image::{load_image, save_image, synth_image, ImageError, RgbImage};
pub use metrics::{metric_report, MetricReport, MetricsError};
pub use records::{decode_aggregate, encode_aggregate, RecordError, SensorKind, SensorRecord};
pub use wire::{fusion_receive, sink_send, FusionReceiver, WireError};

/// Version of the (traversal order, channel cycle, frame layout) tuple.
pub const STEGO_FORMAT_VERSION: u32 = 1;
