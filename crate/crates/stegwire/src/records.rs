//! Typed sensor readings and the aggregate byte layout a sink node ships.
//!
//! A sink collects [`SensorRecord`]s from its sensors and serializes them as
//! one [`encode_aggregate`] frame, which becomes the stego payload. The
//! layout is big-endian throughout and platform-independent:
//!
//! ```text
//! count: u16 || count * { sensor_id: u16, timestamp_ms: u64, kind: u8, value_millis: i32 }
//! ```
//!
//! so an aggregate of `n` records is exactly `2 + 15 n` bytes.

use thiserror::Error;

/// Serialized size of one record.
pub const RECORD_BYTES: usize = 15;

/// Errors from aggregate encoding and decoding.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum RecordError {
    /// More records than the 16-bit count field can hold.
    #[error("aggregate of {0} records exceeds the 16-bit count field")]
    TooManyRecords(usize),
    /// Byte length disagrees with `2 + 15 * count`.
    #[error("aggregate frame is {actual} bytes, expected {expected}")]
    TruncatedFrame { expected: usize, actual: usize },
    /// Kind code outside 0..=4.
    #[error("unknown sensor kind code {0}")]
    BadKind(u8),
}

/// What a sensor measures. Codes 0..=4 are the wire values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u8)]
pub enum SensorKind {
    Temperature = 0,
    Pressure = 1,
    Motion = 2,
    Sound = 3,
    Other = 4,
}

impl SensorKind {
    pub fn code(self) -> u8 {
        self as u8
    }

    pub fn from_code(code: u8) -> Result<Self, RecordError> {
        match code {
            0 => Ok(SensorKind::Temperature),
            1 => Ok(SensorKind::Pressure),
            2 => Ok(SensorKind::Motion),
            3 => Ok(SensorKind::Sound),
            4 => Ok(SensorKind::Other),
            other => Err(RecordError::BadKind(other)),
        }
    }
}

/// One sensed reading.
///
/// `value_millis` is a signed fixed-point value in thousandths of the
/// kind's base unit (e.g. 21500 = 21.5 degrees for a temperature sensor).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SensorRecord {
    pub sensor_id: u16,
    pub timestamp_ms: u64,
    pub kind: SensorKind,
    pub value_millis: i32,
}

/// Serializes records into the aggregate layout.
pub fn encode_aggregate(records: &[SensorRecord]) -> Result<Vec<u8>, RecordError> {
    let count = u16::try_from(records.len())
        .map_err(|_| RecordError::TooManyRecords(records.len()))?;
    let mut out = Vec::with_capacity(2 + RECORD_BYTES * records.len());
    out.extend_from_slice(&count.to_be_bytes());
    for r in records {
        out.extend_from_slice(&r.sensor_id.to_be_bytes());
        out.extend_from_slice(&r.timestamp_ms.to_be_bytes());
        out.push(r.kind.code());
        out.extend_from_slice(&r.value_millis.to_be_bytes());
    }
    Ok(out)
}

/// Inverse of [`encode_aggregate`]; the input must be exactly one aggregate.
pub fn decode_aggregate(bytes: &[u8]) -> Result<Vec<SensorRecord>, RecordError> {
    if bytes.len() < 2 {
        return Err(RecordError::TruncatedFrame {
            expected: 2,
            actual: bytes.len(),
        });
    }
    let count = u16::from_be_bytes([bytes[0], bytes[1]]) as usize;
    let expected = 2 + RECORD_BYTES * count;
    if bytes.len() != expected {
        return Err(RecordError::TruncatedFrame {
            expected,
            actual: bytes.len(),
        });
    }
    let mut records = Vec::with_capacity(count);
    for chunk in bytes[2..].chunks_exact(RECORD_BYTES) {
        records.push(SensorRecord {
            sensor_id: u16::from_be_bytes([chunk[0], chunk[1]]),
            timestamp_ms: u64::from_be_bytes(chunk[2..10].try_into().unwrap()),
            kind: SensorKind::from_code(chunk[10])?,
            value_millis: i32::from_be_bytes(chunk[11..15].try_into().unwrap()),
        });
    }
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn empty_aggregate_is_two_zero_bytes() {
        assert_eq!(encode_aggregate(&[]).unwrap(), vec![0x00, 0x00]);
        assert_eq!(decode_aggregate(&[0x00, 0x00]).unwrap(), vec![]);
    }

    #[test]
    fn single_record_layout() {
        let record = SensorRecord {
            sensor_id: 1,
            timestamp_ms: 0,
            kind: SensorKind::Temperature,
            value_millis: 21500,
        };
        let bytes = encode_aggregate(&[record]).unwrap();
        assert_eq!(bytes.len(), 17);
        // 21500 = 0x53FC, big-endian in the last four bytes.
        assert_eq!(&bytes[13..], &[0x00, 0x00, 0x53, 0xFC]);
        assert_eq!(decode_aggregate(&bytes).unwrap(), vec![record]);
    }

    #[test]
    fn sixteen_bytes_with_count_one_is_truncated() {
        let frame = [0u8; 16];
        let mut frame = frame;
        frame[1] = 1;
        assert_eq!(
            decode_aggregate(&frame),
            Err(RecordError::TruncatedFrame {
                expected: 17,
                actual: 16
            })
        );
    }

    #[test]
    fn trailing_bytes_are_rejected() {
        let mut bytes = encode_aggregate(&[]).unwrap();
        bytes.push(0xAA);
        assert_eq!(
            decode_aggregate(&bytes),
            Err(RecordError::TruncatedFrame {
                expected: 2,
                actual: 3
            })
        );
    }

    #[test]
    fn unknown_kind_code_is_rejected() {
        let mut bytes = encode_aggregate(&[SensorRecord {
            sensor_id: 9,
            timestamp_ms: 1,
            kind: SensorKind::Other,
            value_millis: -40,
        }])
        .unwrap();
        bytes[12] = 5;
        assert_eq!(decode_aggregate(&bytes), Err(RecordError::BadKind(5)));
    }

    fn record_strategy() -> impl Strategy<Value = SensorRecord> {
        (any::<u16>(), any::<u64>(), 0u8..=4, any::<i32>()).prop_map(
            |(sensor_id, timestamp_ms, kind, value_millis)| SensorRecord {
                sensor_id,
                timestamp_ms,
                kind: SensorKind::from_code(kind).unwrap(),
                value_millis,
            },
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn decode_inverts_encode(records in proptest::collection::vec(record_strategy(), 0..40)) {
            let bytes = encode_aggregate(&records).unwrap();
            prop_assert_eq!(bytes.len(), 2 + RECORD_BYTES * records.len());
            prop_assert_eq!(decode_aggregate(&bytes).unwrap(), records);
        }
    }
}
