//! The three evaluation strategies behind a common trait.
//!
//! Each strategy validates the perspective-specific preconditions of an
//! [`ExperimentSpec`], measures its rows in spec order, and returns a
//! finished table. Strategies are registered in [`PERSPECTIVES`] and
//! selected by number at runtime (the CLI's `--perspective` flag).

use super::{
    check_capacity, finish_table, measure_row, payload_bytes, resolve_image, ExperimentError,
    ExperimentSpec, ImageSource, MetricTable,
};

/// One evaluation strategy.
pub trait Perspective: Sync {
    /// Registry key, matching the CLI's `--perspective` value.
    fn number(&self) -> u8;
    /// One-line description for listings and manifests.
    fn describe(&self) -> &'static str;
    /// Validates and runs the spec.
    fn run(&self, spec: &ExperimentSpec) -> Result<MetricTable, ExperimentError>;
}

/// Perspective 1: one payload size across many images of one dimension.
pub struct FixedPayloadAcrossImages;

/// Perspective 2: one image, a sweep of payload sizes.
pub struct PayloadSweep;

/// Perspective 3: one synthetic image regenerated across dimensions at a
/// fixed payload size.
pub struct DimensionSweep;

/// All registered strategies.
pub static PERSPECTIVES: [&dyn Perspective; 3] =
    [&FixedPayloadAcrossImages, &PayloadSweep, &DimensionSweep];

/// Looks a strategy up by number.
pub fn perspective(number: u8) -> Option<&'static dyn Perspective> {
    PERSPECTIVES.iter().copied().find(|p| p.number() == number)
}

fn invalid(msg: impl Into<String>) -> ExperimentError {
    ExperimentError::InvalidSpec(msg.into())
}

/// The single shared-dimensions entry used by perspectives 1 and 2.
fn single_dimensions(spec: &ExperimentSpec) -> Result<Option<(u32, u32)>, ExperimentError> {
    match spec.dimensions.len() {
        0 => Ok(None),
        1 => Ok(Some(spec.dimensions[0])),
        n => Err(invalid(format!(
            "perspective {} takes at most one dimensions entry, got {n}",
            spec.perspective
        ))),
    }
}

impl Perspective for FixedPayloadAcrossImages {
    fn number(&self) -> u8 {
        1
    }

    fn describe(&self) -> &'static str {
        "same payload size embedded in every image at one dimension"
    }

    fn run(&self, spec: &ExperimentSpec) -> Result<MetricTable, ExperimentError> {
        if spec.images.is_empty() {
            return Err(invalid("perspective 1 needs at least one image"));
        }
        let &[size] = spec.payload_sizes.as_slice() else {
            return Err(invalid("perspective 1 takes exactly one payload size"));
        };
        let dims = single_dimensions(spec)?;

        let mut resolved = Vec::with_capacity(spec.images.len());
        for image_spec in &spec.images {
            resolved.push((image_spec.name.clone(), resolve_image(image_spec, dims)?));
        }
        // All covers must share one dimension so the rows are comparable.
        let (w, h) = (resolved[0].1.width(), resolved[0].1.height());
        for (name, img) in &resolved {
            if img.width() != w || img.height() != h {
                return Err(invalid(format!(
                    "perspective 1 images must share dimensions: '{}' is {}x{}, '{}' is {w}x{h}",
                    name,
                    img.width(),
                    img.height(),
                    resolved[0].0
                )));
            }
            check_capacity(name, w, h, size)?;
        }

        // One message, every cover: the same payload goes into each image.
        let payload = payload_bytes(&spec.payload, size)?;
        let mut rows = Vec::with_capacity(resolved.len());
        for (name, cover) in &resolved {
            rows.push(measure_row(name, cover, &payload)?);
        }
        Ok(finish_table(1, rows))
    }
}

impl Perspective for PayloadSweep {
    fn number(&self) -> u8 {
        2
    }

    fn describe(&self) -> &'static str {
        "payload size sweep over one image at a fixed dimension"
    }

    fn run(&self, spec: &ExperimentSpec) -> Result<MetricTable, ExperimentError> {
        let [image_spec] = spec.images.as_slice() else {
            return Err(invalid("perspective 2 takes exactly one image"));
        };
        if spec.payload_sizes.len() < 2 {
            return Err(invalid("perspective 2 needs at least two payload sizes"));
        }
        let dims = single_dimensions(spec)?;
        let cover = resolve_image(image_spec, dims)?;

        let mut sizes = spec.payload_sizes.clone();
        sizes.sort_unstable();
        for &size in &sizes {
            check_capacity(&image_spec.name, cover.width(), cover.height(), size)?;
        }

        let mut rows = Vec::with_capacity(sizes.len());
        for &size in &sizes {
            let payload = payload_bytes(&spec.payload, size)?;
            rows.push(measure_row(&image_spec.name, &cover, &payload)?);
        }
        Ok(finish_table(2, rows))
    }
}

impl Perspective for DimensionSweep {
    fn number(&self) -> u8 {
        3
    }

    fn describe(&self) -> &'static str {
        "dimension sweep over one synthetic image at a fixed payload size"
    }

    fn run(&self, spec: &ExperimentSpec) -> Result<MetricTable, ExperimentError> {
        let [image_spec] = spec.images.as_slice() else {
            return Err(invalid("perspective 3 takes exactly one image"));
        };
        // File covers cannot be re-rendered at other dimensions, and
        // resampling is out of scope.
        if matches!(image_spec.source, ImageSource::File { .. }) {
            return Err(invalid(
                "perspective 3 needs a synthetic image source (files have a fixed dimension)",
            ));
        }
        let &[size] = spec.payload_sizes.as_slice() else {
            return Err(invalid("perspective 3 takes exactly one payload size"));
        };
        if spec.dimensions.len() < 2 {
            return Err(invalid("perspective 3 needs at least two dimensions"));
        }

        let mut dims = spec.dimensions.clone();
        dims.sort_unstable_by_key(|&(w, h)| (w as u64 * h as u64, w));
        // The payload must fit everywhere, i.e. at the smallest dimension.
        for &(w, h) in &dims {
            check_capacity(&image_spec.name, w, h, size)?;
        }

        let payload = payload_bytes(&spec.payload, size)?;
        let mut rows = Vec::with_capacity(dims.len());
        for &dim in &dims {
            let cover = resolve_image(image_spec, Some(dim))?;
            rows.push(measure_row(&image_spec.name, &cover, &payload)?);
        }
        Ok(finish_table(3, rows))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiment::{ImageSpec, PayloadSource};

    fn base_spec(perspective: u8) -> ExperimentSpec {
        ExperimentSpec {
            perspective,
            images: vec![ImageSpec {
                name: "cover".into(),
                source: ImageSource::Synth { seed: 3 },
            }],
            dimensions: vec![(32, 32)],
            payload_sizes: vec![32],
            payload: PayloadSource::Random { seed: 4 },
        }
    }

    #[test]
    fn registry_resolves_by_number() {
        for n in 1..=3u8 {
            assert_eq!(perspective(n).unwrap().number(), n);
        }
        assert!(perspective(0).is_none());
        assert!(perspective(4).is_none());
    }

    #[test]
    fn perspective_two_orders_rows_by_payload_size() {
        let mut spec = base_spec(2);
        spec.payload_sizes = vec![100, 16, 60];
        let table = PayloadSweep.run(&spec).unwrap();
        let sizes: Vec<u64> = table.rows.iter().map(|r| r.payload_bytes).collect();
        assert_eq!(sizes, vec![16, 60, 100]);
    }

    #[test]
    fn perspective_two_single_size_is_rejected() {
        let spec = base_spec(2);
        assert!(matches!(
            PayloadSweep.run(&spec),
            Err(ExperimentError::InvalidSpec(_))
        ));
    }

    #[test]
    fn perspective_three_orders_rows_by_pixel_count() {
        let mut spec = base_spec(3);
        spec.dimensions = vec![(64, 64), (16, 16), (32, 32)];
        spec.payload_sizes = vec![20];
        let table = DimensionSweep.run(&spec).unwrap();
        let dims: Vec<(u32, u32)> = table.rows.iter().map(|r| (r.width, r.height)).collect();
        assert_eq!(dims, vec![(16, 16), (32, 32), (64, 64)]);
    }

    #[test]
    fn perspective_three_rejects_file_sources() {
        let mut spec = base_spec(3);
        spec.dimensions = vec![(16, 16), (32, 32)];
        spec.payload_sizes = vec![8];
        spec.images[0].source = ImageSource::File {
            path: "cover.png".into(),
        };
        assert!(matches!(
            DimensionSweep.run(&spec),
            Err(ExperimentError::InvalidSpec(_))
        ));
    }

    #[test]
    fn perspective_three_checks_smallest_dimension() {
        let mut spec = base_spec(3);
        spec.dimensions = vec![(16, 16), (256, 256)];
        spec.payload_sizes = vec![2042];
        match DimensionSweep.run(&spec) {
            Err(ExperimentError::CapacityViolation { width, height, .. }) => {
                assert_eq!((width, height), (16, 16));
            }
            other => panic!("expected capacity violation, got {other:?}"),
        }
    }

    #[test]
    fn perspective_one_rejects_mixed_dimensions() {
        let dir = tempfile::tempdir().unwrap();
        let small = crate::image::synth_image(1, 16, 16).unwrap();
        let path = dir.path().join("small.png");
        crate::image::save_image_file(&small, &path).unwrap();
        let mut spec = base_spec(1);
        spec.dimensions = vec![];
        spec.payload_sizes = vec![4];
        spec.images = vec![
            ImageSpec {
                name: "small".into(),
                source: ImageSource::File { path: path.clone() },
            },
            ImageSpec {
                name: "small-again".into(),
                source: ImageSource::File { path },
            },
        ];
        // Two identical files pass; then break one of them.
        assert!(FixedPayloadAcrossImages.run(&spec).is_ok());
        let big = crate::image::synth_image(1, 24, 24).unwrap();
        let big_path = dir.path().join("big.png");
        crate::image::save_image_file(&big, &big_path).unwrap();
        spec.images[1].source = ImageSource::File { path: big_path };
        assert!(matches!(
            FixedPayloadAcrossImages.run(&spec),
            Err(ExperimentError::InvalidSpec(_))
        ));
    }
}
