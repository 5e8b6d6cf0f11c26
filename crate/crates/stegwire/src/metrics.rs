//! Imperceptibility metrics for a (cover, stego) pair: MSE, PSNR, NCC, SSIM.
//!
//! All four treat the pair as plain sample arrays. MSE, PSNR, and NCC pool
//! the three color planes into one population; SSIM is computed per plane
//! from whole-plane statistics (no sliding window) and the three scores are
//! averaged. Sums over samples are accumulated in 64-bit integers, which is
//! exact for 8-bit data at any realistic image size, so MSE and NCC carry
//! no floating-point accumulation error at all.
//!
//! NCC here is the stego-normalized form `sum(S*C) / sum(S^2)`. It is not
//! symmetric in its arguments and can exceed 1 (a cover twice as bright as
//! the stego scores 2.0); tests pin that behavior on a small fixture.

use thiserror::Error;

use crate::image::{RgbImage, MAX_INTENSITY};

/// SSIM stabilizers for L = 255: `C1 = (0.01 L)^2`, `C2 = (0.03 L)^2`.
const SSIM_C1: f64 = (0.01 * MAX_INTENSITY as f64) * (0.01 * MAX_INTENSITY as f64);
const SSIM_C2: f64 = (0.03 * MAX_INTENSITY as f64) * (0.03 * MAX_INTENSITY as f64);

/// Errors from metric evaluation.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum MetricsError {
    #[error("dimension mismatch: cover is {cover_width}x{cover_height}, stego is {stego_width}x{stego_height}")]
    DimensionMismatch {
        cover_width: u32,
        cover_height: u32,
        stego_width: u32,
        stego_height: u32,
    },
    /// NCC denominator `sum(S^2)` is zero (all-black stego image).
    #[error("NCC denominator is zero: stego image has no nonzero sample")]
    DegenerateDenominator,
}

/// One row of scores for a (cover, stego) pair.
///
/// `psnr` is `f64::INFINITY` when the images are identical (MSE 0); it is
/// serialized as the string `inf` in CSV output.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricReport {
    pub psnr: f64,
    pub mse: f64,
    pub ncc: f64,
    pub ssim: f64,
}

fn check_dimensions(cover: &RgbImage, stego: &RgbImage) -> Result<(), MetricsError> {
    if cover.same_dimensions(stego) {
        Ok(())
    } else {
        Err(MetricsError::DimensionMismatch {
            cover_width: cover.width(),
            cover_height: cover.height(),
            stego_width: stego.width(),
            stego_height: stego.height(),
        })
    }
}

/// Mean squared error over all samples of all three planes.
pub fn mse(cover: &RgbImage, stego: &RgbImage) -> Result<f64, MetricsError> {
    check_dimensions(cover, stego)?;
    let mut sum: u64 = 0;
    for p in 0..3 {
        for (&c, &s) in cover.plane(p).iter().zip(stego.plane(p)) {
            let d = c as i64 - s as i64;
            sum += (d * d) as u64;
        }
    }
    Ok(sum as f64 / (3.0 * cover.pixel_count() as f64))
}

/// Peak signal-to-noise ratio in dB: `10 log10(255^2 / MSE)`.
pub fn psnr(cover: &RgbImage, stego: &RgbImage) -> Result<f64, MetricsError> {
    Ok(psnr_from_mse(mse(cover, stego)?))
}

/// PSNR of a known MSE; infinite at zero error.
pub fn psnr_from_mse(mse: f64) -> f64 {
    if mse == 0.0 {
        f64::INFINITY
    } else {
        let peak = MAX_INTENSITY as f64;
        10.0 * (peak * peak / mse).log10()
    }
}

/// Normalized cross-correlation `sum(S*C) / sum(S^2)`, pooled over planes.
pub fn ncc(cover: &RgbImage, stego: &RgbImage) -> Result<f64, MetricsError> {
    check_dimensions(cover, stego)?;
    let mut cross: u64 = 0;
    let mut stego_sq: u64 = 0;
    for p in 0..3 {
        for (&c, &s) in cover.plane(p).iter().zip(stego.plane(p)) {
            cross += c as u64 * s as u64;
            stego_sq += s as u64 * s as u64;
        }
    }
    if stego_sq == 0 {
        return Err(MetricsError::DegenerateDenominator);
    }
    Ok(cross as f64 / stego_sq as f64)
}

/// Structural similarity from whole-plane statistics, averaged over the
/// three planes.
pub fn ssim(cover: &RgbImage, stego: &RgbImage) -> Result<f64, MetricsError> {
    check_dimensions(cover, stego)?;
    let total: f64 = (0..3)
        .map(|p| ssim_plane(cover.plane(p), stego.plane(p)))
        .sum();
    Ok(total / 3.0)
}

fn ssim_plane(x: &[u8], y: &[u8]) -> f64 {
    let n = x.len() as f64;
    let mut sum_x: u64 = 0;
    let mut sum_y: u64 = 0;
    let mut sum_xx: u64 = 0;
    let mut sum_yy: u64 = 0;
    let mut sum_xy: u64 = 0;
    for (&a, &b) in x.iter().zip(y) {
        sum_x += a as u64;
        sum_y += b as u64;
        sum_xx += a as u64 * a as u64;
        sum_yy += b as u64 * b as u64;
        sum_xy += a as u64 * b as u64;
    }
    let mu_x = sum_x as f64 / n;
    let mu_y = sum_y as f64 / n;
    let var_x = sum_xx as f64 / n - mu_x * mu_x;
    let var_y = sum_yy as f64 / n - mu_y * mu_y;
    let cov = sum_xy as f64 / n - mu_x * mu_y;
    ((2.0 * mu_x * mu_y + SSIM_C1) * (2.0 * cov + SSIM_C2))
        / ((mu_x * mu_x + mu_y * mu_y + SSIM_C1) * (var_x + var_y + SSIM_C2))
}

/// All four metrics for one pair.
pub fn metric_report(cover: &RgbImage, stego: &RgbImage) -> Result<MetricReport, MetricsError> {
    let mse_value = mse(cover, stego)?;
    Ok(MetricReport {
        psnr: psnr_from_mse(mse_value),
        mse: mse_value,
        ncc: ncc(cover, stego)?,
        ssim: ssim(cover, stego)?,
    })
}
