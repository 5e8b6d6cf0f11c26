//! Sink-to-fusion-center transport for stego images.
//!
//! One message per connection, nothing streamed:
//!
//! ```text
//! "STG1" || length: u32 big-endian || <length> bytes of PNG
//! ```
//!
//! The PNG decodes to a stego image whose payload is one aggregate of
//! sensor records. The same message bytes can be dropped into a file
//! instead of a socket ([`write_message_file`] / [`read_message_file`]),
//! which keeps offline tests and air-gapped handoff on the identical
//! format. Extraction is blind: the receiver never needs the cover.
//!
//! A declared length above the 64 MiB cap is rejected before any
//! allocation, so a hostile length field cannot balloon the receiver.

use std::io::{Read, Write};
use std::net::{TcpListener, TcpStream, ToSocketAddrs};
use std::path::Path;

use thiserror::Error;

use crate::codec::{self, CodecError};
use crate::image::{self, ImageError, RgbImage};
use crate::records::{self, RecordError, SensorRecord};

/// First four bytes of every message.
pub const PROTOCOL_MAGIC: [u8; 4] = *b"STG1";

/// Ceiling on the declared message length.
pub const MAX_MESSAGE_LEN: u32 = 64 * 1024 * 1024;

/// Errors from the transport layer, including the embedded codec stages.
#[derive(Debug, Error)]
pub enum WireError {
    #[error("connection failed: {0}")]
    ConnectionFailed(std::io::Error),
    #[error("bad protocol magic {found:?} (expected {PROTOCOL_MAGIC:?})")]
    BadProtocolMagic { found: [u8; 4] },
    #[error("declared message length {declared} exceeds cap {max}")]
    LengthOverflow { declared: u32, max: u32 },
    #[error(transparent)]
    Image(#[from] ImageError),
    #[error(transparent)]
    Codec(#[from] CodecError),
    #[error(transparent)]
    Record(#[from] RecordError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// What a sink sent, for logging.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SinkReport {
    pub record_count: usize,
    pub payload_bytes: usize,
    pub message_bytes: usize,
}

/// What a fusion center recovered, plus stego stats for logging.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FusionReport {
    pub records: Vec<SensorRecord>,
    pub stego_width: u32,
    pub stego_height: u32,
    pub payload_bytes: usize,
}

/// Builds one complete protocol message: aggregate, embed, PNG, frame.
pub fn encode_message(
    records: &[SensorRecord],
    cover: &RgbImage,
) -> Result<(Vec<u8>, SinkReport), WireError> {
    let payload = records::encode_aggregate(records)?;
    let stego = codec::embed(cover, &payload)?;
    let png = image::save_image(&stego, image::format_named("png").expect("png registered"))?;
    let mut message = Vec::with_capacity(8 + png.len());
    message.extend_from_slice(&PROTOCOL_MAGIC);
    message.extend_from_slice(&(png.len() as u32).to_be_bytes());
    message.extend_from_slice(&png);
    let report = SinkReport {
        record_count: records.len(),
        payload_bytes: payload.len(),
        message_bytes: message.len(),
    };
    Ok((message, report))
}

/// Reads one protocol message and recovers the records inside.
pub fn decode_message(reader: &mut impl Read) -> Result<FusionReport, WireError> {
    let mut magic = [0u8; 4];
    reader.read_exact(&mut magic)?;
    if magic != PROTOCOL_MAGIC {
        return Err(WireError::BadProtocolMagic { found: magic });
    }
    let mut len_bytes = [0u8; 4];
    reader.read_exact(&mut len_bytes)?;
    let declared = u32::from_be_bytes(len_bytes);
    if declared > MAX_MESSAGE_LEN {
        return Err(WireError::LengthOverflow {
            declared,
            max: MAX_MESSAGE_LEN,
        });
    }
    let mut png = vec![0u8; declared as usize];
    reader.read_exact(&mut png)?;
    let stego = image::load_image(&png, image::format_named("png").expect("png registered"))?;
    let payload = codec::extract(&stego)?;
    let records = records::decode_aggregate(&payload)?;
    Ok(FusionReport {
        records,
        stego_width: stego.width(),
        stego_height: stego.height(),
        payload_bytes: payload.len(),
    })
}

/// Embeds `records` in `cover` and sends the message to `endpoint`,
/// closing the connection afterwards.
pub fn sink_send(
    records: &[SensorRecord],
    cover: &RgbImage,
    endpoint: impl ToSocketAddrs,
) -> Result<SinkReport, WireError> {
    let (message, report) = encode_message(records, cover)?;
    let mut stream = TcpStream::connect(endpoint).map_err(WireError::ConnectionFailed)?;
    stream.write_all(&message)?;
    stream.shutdown(std::net::Shutdown::Write)?;
    Ok(report)
}

/// A bound fusion-center endpoint accepting one message per connection.
pub struct FusionReceiver {
    listener: TcpListener,
}

impl FusionReceiver {
    /// Binds the listening endpoint.
    pub fn bind(addr: impl ToSocketAddrs) -> Result<Self, WireError> {
        let listener = TcpListener::bind(addr).map_err(WireError::ConnectionFailed)?;
        Ok(Self { listener })
    }

    pub fn local_addr(&self) -> Result<std::net::SocketAddr, WireError> {
        Ok(self.listener.local_addr()?)
    }

    /// Blocks for the next connection and decodes its single message.
    pub fn receive_one(&self) -> Result<FusionReport, WireError> {
        let (mut stream, _peer) = self.listener.accept().map_err(WireError::ConnectionFailed)?;
        decode_message(&mut stream)
    }
}

/// Receives exactly one message on a freshly bound endpoint.
pub fn fusion_receive(addr: impl ToSocketAddrs) -> Result<FusionReport, WireError> {
    FusionReceiver::bind(addr)?.receive_one()
}

/// File-drop mode: the exact wire bytes, written to a file.
pub fn write_message_file(
    records: &[SensorRecord],
    cover: &RgbImage,
    path: &Path,
) -> Result<SinkReport, WireError> {
    let (message, report) = encode_message(records, cover)?;
    std::fs::write(path, message)?;
    Ok(report)
}

/// File-drop mode: reads one message file.
pub fn read_message_file(path: &Path) -> Result<FusionReport, WireError> {
    let mut file = std::fs::File::open(path)?;
    decode_message(&mut file)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::image::synth_image;
    use crate::records::SensorKind;
    use std::io::Cursor;

    fn sample_records(n: usize) -> Vec<SensorRecord> {
        (0..n)
            .map(|i| SensorRecord {
                sensor_id: i as u16,
                timestamp_ms: 1_700_000_000_000 + i as u64,
                kind: SensorKind::from_code((i % 5) as u8).unwrap(),
                value_millis: (i as i32 - 3) * 997,
            })
            .collect()
    }

    #[test]
    fn message_round_trips_in_memory() {
        let cover = synth_image(21, 64, 64).unwrap();
        let records = sample_records(10);
        let (message, report) = encode_message(&records, &cover).unwrap();
        assert_eq!(&message[..4], b"STG1");
        assert_eq!(report.payload_bytes, 2 + 15 * 10);
        let decoded = decode_message(&mut Cursor::new(&message)).unwrap();
        assert_eq!(decoded.records, records);
        assert_eq!((decoded.stego_width, decoded.stego_height), (64, 64));
        assert_eq!(decoded.payload_bytes, report.payload_bytes);
    }

    #[test]
    fn wire_bytes_after_header_are_a_valid_png() {
        let cover = synth_image(22, 32, 32).unwrap();
        let (message, _) = encode_message(&sample_records(2), &cover).unwrap();
        let len = u32::from_be_bytes(message[4..8].try_into().unwrap()) as usize;
        assert_eq!(message.len(), 8 + len);
        let stego = image::load_image(
            &message[8..],
            image::format_named("png").unwrap(),
        )
        .unwrap();
        assert!(codec::extract(&stego).is_ok());
    }

    #[test]
    fn rejects_http_magic() {
        let mut stream = Cursor::new(b"HTTP/1.1 200 OK\r\n".to_vec());
        match decode_message(&mut stream) {
            Err(WireError::BadProtocolMagic { found }) => assert_eq!(&found, b"HTTP"),
            other => panic!("expected bad magic, got {other:?}"),
        }
    }

    #[test]
    fn rejects_oversized_declared_length() {
        let mut message = PROTOCOL_MAGIC.to_vec();
        message.extend_from_slice(&u32::MAX.to_be_bytes());
        match decode_message(&mut Cursor::new(message)) {
            Err(WireError::LengthOverflow { declared, max }) => {
                assert_eq!(declared, u32::MAX);
                assert_eq!(max, MAX_MESSAGE_LEN);
            }
            other => panic!("expected length overflow, got {other:?}"),
        }
    }

    #[test]
    fn oversized_aggregate_is_rejected_before_sending() {
        let cover = synth_image(23, 256, 256).unwrap();
        // 5000 records = 75002 bytes, far past the 8186-byte capacity.
        let records = sample_records(5000);
        match encode_message(&records, &cover) {
            Err(WireError::Codec(CodecError::PayloadExceedsCapacity { .. })) => {}
            other => panic!("expected capacity error, got {other:?}"),
        }
    }

    #[test]
    fn empty_record_list_still_transmits() {
        let cover = synth_image(24, 16, 16).unwrap();
        let (message, report) = encode_message(&[], &cover).unwrap();
        assert_eq!(report.payload_bytes, 2);
        let decoded = decode_message(&mut Cursor::new(&message)).unwrap();
        assert!(decoded.records.is_empty());
    }

    #[test]
    fn file_drop_round_trips() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("drop.stg");
        let cover = synth_image(25, 48, 48).unwrap();
        let records = sample_records(7);
        write_message_file(&records, &cover, &path).unwrap();
        let report = read_message_file(&path).unwrap();
        assert_eq!(report.records, records);
    }

    #[test]
    fn tcp_loopback_round_trips() {
        let receiver = FusionReceiver::bind("127.0.0.1:0").unwrap();
        let addr = receiver.local_addr().unwrap();
        let records = sample_records(25);
        let cover = synth_image(26, 64, 64).unwrap();
        let sender = {
            let records = records.clone();
            std::thread::spawn(move || sink_send(&records, &cover, addr).unwrap())
        };
        let report = receiver.receive_one().unwrap();
        let sink_report = sender.join().unwrap();
        assert_eq!(report.records, records);
        assert_eq!(report.payload_bytes, sink_report.payload_bytes);
    }
}
