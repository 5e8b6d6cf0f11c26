//! Reproducible evaluation runs and their CSV/manifest artifacts.
//!
//! An [`ExperimentSpec`] declares what to measure; a [`Perspective`]
//! strategy (selected by number from the [`perspectives::PERSPECTIVES`]
//! registry) turns it into a [`MetricTable`]:
//!
//! 1. one payload size, many images of one dimension;
//! 2. one image, a sweep of payload sizes;
//! 3. one synthetic image regenerated across a sweep of dimensions at a
//!    fixed payload size.
//!
//! Everything is seed-driven: rerunning a spec with the same seeds yields
//! byte-identical CSV and manifest files. Floats are serialized with
//! Rust's shortest round-trip formatting, so parsing a CSV back recovers
//! the in-memory values exactly.

pub mod perspectives;

use std::io::Write;
use std::path::PathBuf;

use serde::Deserialize;
use thiserror::Error;

use crate::codec::CodecError;
use crate::framing::HEADER_BITS;
use crate::image::{self, ImageError, RgbImage};
use crate::metrics::{metric_report, MetricReport, MetricsError};
use crate::rng::Xorshift64Star;

pub use perspectives::{perspective, Perspective, PERSPECTIVES};

/// Errors from spec validation and experiment execution.
#[derive(Debug, Error)]
pub enum ExperimentError {
    /// The spec is missing or misusing a field for its perspective.
    #[error("invalid experiment spec: {0}")]
    InvalidSpec(String),
    /// A planned payload does not fit a planned image.
    #[error("payload needs {required_bits} bits but image '{image}' ({width}x{height}) holds {available_bits}")]
    CapacityViolation {
        image: String,
        width: u32,
        height: u32,
        required_bits: u64,
        available_bits: u64,
    },
    #[error(transparent)]
    Image(#[from] ImageError),
    #[error(transparent)]
    Codec(#[from] CodecError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Where a cover image comes from.
#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ImageSource {
    /// A file on disk (PNG or PPM, picked by extension).
    File { path: PathBuf },
    /// A deterministic synthetic image; dimensions come from the spec.
    Synth { seed: u64 },
}

/// A named cover image.
#[derive(Debug, Clone, Deserialize)]
pub struct ImageSpec {
    pub name: String,
    pub source: ImageSource,
}

/// Where payload bytes come from.
#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PayloadSource {
    /// Seeded uniform random bytes.
    Random { seed: u64 },
    /// The first `payload_size` bytes of a file.
    File { path: PathBuf },
}

/// Declarative description of one evaluation run.
#[derive(Debug, Clone, Deserialize)]
pub struct ExperimentSpec {
    /// Which strategy runs this spec: 1, 2, or 3.
    pub perspective: u8,
    pub images: Vec<ImageSpec>,
    /// Render dimensions. One entry for perspectives 1 and 2 (the size of
    /// synthetic covers); the sweep for perspective 3.
    #[serde(default)]
    pub dimensions: Vec<(u32, u32)>,
    /// Payload byte counts. One entry for perspectives 1 and 3; the sweep
    /// for perspective 2.
    pub payload_sizes: Vec<u64>,
    pub payload: PayloadSource,
}

impl ExperimentSpec {
    /// The built-in spec for a perspective, everything derived from `seed`.
    ///
    /// Image `i` is `synth(seed + 1 + i)`; payload bytes are `random(seed)`.
    /// The payload sizes are the maximal byte counts that fit the header at
    /// each canonical dimension (8186 at 256x256, 2042 at 128x128).
    pub fn default_for(perspective: u8, seed: u64) -> Result<Self, ExperimentError> {
        let synth_images = |count: usize| -> Vec<ImageSpec> {
            (0..count)
                .map(|i| ImageSpec {
                    name: format!("synth-{i:02}"),
                    source: ImageSource::Synth {
                        seed: seed.wrapping_add(1 + i as u64),
                    },
                })
                .collect()
        };
        let payload = PayloadSource::Random { seed };
        match perspective {
            1 => Ok(Self {
                perspective: 1,
                images: synth_images(20),
                dimensions: vec![(256, 256)],
                payload_sizes: vec![8186],
                payload,
            }),
            2 => Ok(Self {
                perspective: 2,
                images: synth_images(1),
                dimensions: vec![(256, 256)],
                payload_sizes: vec![2043, 4086, 6129, 8186],
                payload,
            }),
            3 => Ok(Self {
                perspective: 3,
                images: synth_images(1),
                dimensions: vec![(128, 128), (256, 256), (512, 512), (1024, 1024)],
                payload_sizes: vec![2042],
                payload,
            }),
            other => Err(ExperimentError::InvalidSpec(format!(
                "unknown perspective {other} (expected 1, 2, or 3)"
            ))),
        }
    }
}

/// One table row: an embedding plus its four scores.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricRow {
    pub image_name: String,
    pub width: u32,
    pub height: u32,
    pub payload_bytes: u64,
    pub report: MetricReport,
}

/// The result of one experiment run.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricTable {
    pub perspective: u8,
    pub rows: Vec<MetricRow>,
    /// Arithmetic mean of each metric over the rows. Rows with infinite
    /// PSNR are excluded from the PSNR mean and counted below.
    pub average: MetricReport,
    pub psnr_infinite_rows: usize,
}

/// Runs a spec with the perspective registry.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<MetricTable, ExperimentError> {
    perspective(spec.perspective)
        .ok_or_else(|| {
            ExperimentError::InvalidSpec(format!(
                "unknown perspective {} (expected 1, 2, or 3)",
                spec.perspective
            ))
        })?
        .run(spec)
}

/// Resolves one image spec, rendering synthetic sources at `dimensions`.
fn resolve_image(
    spec: &ImageSpec,
    dimensions: Option<(u32, u32)>,
) -> Result<RgbImage, ExperimentError> {
    match &spec.source {
        ImageSource::File { path } => {
            let img = image::load_image_file(path)?;
            if let Some((w, h)) = dimensions {
                if img.width() != w || img.height() != h {
                    return Err(ExperimentError::InvalidSpec(format!(
                        "image '{}' is {}x{}, spec expects {w}x{h}",
                        spec.name,
                        img.width(),
                        img.height()
                    )));
                }
            }
            Ok(img)
        }
        ImageSource::Synth { seed } => {
            let (w, h) = dimensions.ok_or_else(|| {
                ExperimentError::InvalidSpec(format!(
                    "synthetic image '{}' needs a dimensions entry",
                    spec.name
                ))
            })?;
            Ok(image::synth_image(*seed, w, h)?)
        }
    }
}

/// Produces `size` payload bytes from the configured source.
fn payload_bytes(source: &PayloadSource, size: u64) -> Result<Vec<u8>, ExperimentError> {
    let size = usize::try_from(size)
        .map_err(|_| ExperimentError::InvalidSpec(format!("payload size {size} too large")))?;
    match source {
        PayloadSource::Random { seed } => Ok(Xorshift64Star::new(*seed).bytes(size)),
        PayloadSource::File { path } => {
            let bytes = std::fs::read(path)?;
            if bytes.len() < size {
                return Err(ExperimentError::InvalidSpec(format!(
                    "payload file {} has {} bytes, spec needs {size}",
                    path.display(),
                    bytes.len()
                )));
            }
            Ok(bytes[..size].to_vec())
        }
    }
}

/// Fails fast when a payload cannot fit an image.
fn check_capacity(
    name: &str,
    width: u32,
    height: u32,
    payload_size: u64,
) -> Result<(), ExperimentError> {
    let required_bits = HEADER_BITS + 8 * payload_size;
    let available_bits = width as u64 * height as u64;
    if required_bits > available_bits {
        return Err(ExperimentError::CapacityViolation {
            image: name.to_string(),
            width,
            height,
            required_bits,
            available_bits,
        });
    }
    Ok(())
}

/// Embeds and scores one (cover, payload) pair.
fn measure_row(
    name: &str,
    cover: &RgbImage,
    payload: &[u8],
) -> Result<MetricRow, ExperimentError> {
    let stego = crate::codec::embed(cover, payload)?;
    Ok(MetricRow {
        image_name: name.to_string(),
        width: cover.width(),
        height: cover.height(),
        payload_bytes: payload.len() as u64,
        report: metric_report(cover, &stego)?,
    })
}

/// Column means; infinite-PSNR rows are excluded from the PSNR mean.
fn table_average(rows: &[MetricRow]) -> (MetricReport, usize) {
    let n = rows.len() as f64;
    let finite_psnr: Vec<f64> = rows
        .iter()
        .map(|r| r.report.psnr)
        .filter(|p| p.is_finite())
        .collect();
    let psnr = if finite_psnr.is_empty() {
        f64::INFINITY
    } else {
        finite_psnr.iter().sum::<f64>() / finite_psnr.len() as f64
    };
    let average = MetricReport {
        psnr,
        mse: rows.iter().map(|r| r.report.mse).sum::<f64>() / n,
        ncc: rows.iter().map(|r| r.report.ncc).sum::<f64>() / n,
        ssim: rows.iter().map(|r| r.report.ssim).sum::<f64>() / n,
    };
    (average, rows.len() - finite_psnr.len())
}

/// Builds a finished table from measured rows.
fn finish_table(perspective: u8, rows: Vec<MetricRow>) -> MetricTable {
    let (average, psnr_infinite_rows) = table_average(&rows);
    MetricTable {
        perspective,
        rows,
        average,
        psnr_infinite_rows,
    }
}

/// CSV header, normative for every table this crate writes.
pub const CSV_HEADER: &str = "image_name,width,height,payload_bytes,psnr,mse,ncc,ssim";

/// Formats a metric value so that parsing the text recovers the exact f64.
/// Infinity (the zero-MSE PSNR sentinel) becomes `inf`.
pub fn format_metric(value: f64) -> String {
    if value == f64::INFINITY {
        "inf".to_string()
    } else {
        format!("{value}")
    }
}

/// Serializes a table as CSV (UTF-8, LF line endings).
///
/// Data rows carry the full row shape; the final average row leaves the
/// width/height/payload cells empty since they may differ across rows.
pub fn csv_string(table: &MetricTable) -> String {
    let mut out = String::new();
    out.push_str(CSV_HEADER);
    out.push('\n');
    for row in &table.rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            row.image_name,
            row.width,
            row.height,
            row.payload_bytes,
            fmt_metric(row.report.psnr),
            fmt_metric(row.report.mse),
            fmt_metric(row.report.ncc),
            fmt_metric(row.report.ssim),
        ));
    }
    out.push_str(&format!(
        "average,,,,{},{},{},{}\n",
        fmt_metric(table.average.psnr),
        fmt_metric(table.average.mse),
        fmt_metric(table.average.ncc),
        fmt_metric(table.average.ssim),
    ));
    out
}

/// Writes [`csv_string`] to a writer.
pub fn write_csv(table: &MetricTable, writer: &mut impl Write) -> std::io::Result<()> {
    writer.write_all(csv_string(table).as_bytes())
}

/// A textual run manifest: seeds, sizes, and the stego format version.
///
/// Contains nothing volatile, so a rerun with the same spec is
/// byte-identical.
pub fn manifest_string(spec: &ExperimentSpec, table: &MetricTable) -> String {
    let mut out = String::new();
    out.push_str("stegwire experiment manifest\n");
    out.push_str(&format!(
        "stego-format-version: {}\n",
        crate::STEGO_FORMAT_VERSION
    ));
    out.push_str(&format!("perspective: {}\n", spec.perspective));
    for img in &spec.images {
        match &img.source {
            ImageSource::File { path } => {
                out.push_str(&format!("image: {} file({})\n", img.name, path.display()))
            }
            ImageSource::Synth { seed } => {
                out.push_str(&format!("image: {} synth(seed={seed})\n", img.name))
            }
        }
    }
    let dims: Vec<String> = spec
        .dimensions
        .iter()
        .map(|(w, h)| format!("{w}x{h}"))
        .collect();
    out.push_str(&format!("dimensions: {}\n", dims.join(" ")));
    let sizes: Vec<String> = spec.payload_sizes.iter().map(|s| s.to_string()).collect();
    out.push_str(&format!("payload-sizes: {}\n", sizes.join(" ")));
    match &spec.payload {
        PayloadSource::Random { seed } => {
            out.push_str(&format!("payload-source: random(seed={seed})\n"))
        }
        PayloadSource::File { path } => {
            out.push_str(&format!("payload-source: file({})\n", path.display()))
        }
    }
    out.push_str(&format!("rows: {}\n", table.rows.len()));
    out.push_str(&format!(
        "psnr-infinite-rows-excluded-from-average: {}\n",
        table.psnr_infinite_rows
    ));
    out
}
