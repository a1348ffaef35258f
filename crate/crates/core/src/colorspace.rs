//! RGB-to-HSI conversion and dominant-hue extraction.
//!
//! Hue is the pure-color angle, decoupled from brightness, which is what
//! makes it usable for reading a reagent color under varying illumination.
//! The image-level summary reduces the per-pixel hue matrix with a
//! median-of-row-medians and folds the result into `[0, 0.5]` so the red
//! wraparound at 1.0 collapses onto the red end near 0.

use thiserror::Error;

use crate::imaging::RgbImage;
use crate::scalar::{real, Real};

#[derive(Debug, Error, PartialEq)]
pub enum ColorspaceError {
    /// The hue angle is undefined when R = G = B; the denominator of the
    /// angle ratio is zero exactly and only then.
    #[error("hue angle undefined for gray pixel (r = g = b = {value})")]
    DegenerateGray { value: f64 },
    #[error("median of an empty sequence")]
    EmptySequence,
}

/// One pixel in hue/saturation/intensity form.
///
/// `h` is normalized to `[0, 1)` (degrees / 360), `s` to `[0, 1]`, and `i`
/// keeps the 0–255 channel scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HsiPixel<R: Real = f64> {
    pub h: R,
    pub s: R,
    pub i: R,
}

/// Image-level hue summary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HueSummary<R: Real = f64> {
    /// Median of the per-row hue medians, in `[0, 1)`.
    pub raw_hue: R,
    /// `min(raw_hue, 1 - raw_hue)`, in `[0, 0.5]`.
    pub actual_hue: R,
    /// Fraction of pixels with R = G = B, which carry no hue information.
    /// Near 1.0 the summary is low-confidence.
    pub degenerate_fraction: R,
}

/// Hue angle in degrees `[0, 180]` from the channel differences:
/// `acos(((R-G) + (R-B)) / 2 / sqrt((R-G)^2 + (R-B)(G-B)))`, with the ratio
/// clamped to `[-1, 1]` against floating-point overshoot.
///
/// Errors on gray pixels, where the denominator vanishes.
pub fn rgb_to_theta<R: Real>(r: R, g: R, b: R) -> Result<R, ColorspaceError> {
    if r == g && g == b {
        return Err(ColorspaceError::DegenerateGray {
            value: r.to_f64().unwrap_or(f64::NAN),
        });
    }
    let half = real::<R>(0.5);
    let num = half * ((r - g) + (r - b));
    let den = ((r - g) * (r - g) + (r - b) * (g - b)).sqrt();
    let ratio = (num / den).max(-R::one()).min(R::one());
    Ok(ratio.acos().to_degrees())
}

/// Full HSI conversion. Gray pixels take `h = 0`, `s = 0` by convention
/// (black included, where the saturation ratio is 0/0).
pub fn rgb_to_hsi<R: Real>(r: R, g: R, b: R) -> HsiPixel<R> {
    let three = real::<R>(3.0);
    let sum = r + g + b;
    let i = sum / three;
    if r == g && g == b {
        return HsiPixel {
            h: R::zero(),
            s: R::zero(),
            i,
        };
    }
    let theta = rgb_to_theta(r, g, b).expect("non-gray pixel");
    let full = real::<R>(360.0);
    let h_deg = if b <= g { theta } else { full - theta };
    let mut h = h_deg / full;
    if h >= R::one() {
        h = R::zero();
    }
    let s = R::one() - three * r.min(g).min(b) / sum;
    HsiPixel { h, s, i }
}

/// Lower median: the element at index `floor((n-1)/2)` of the sorted
/// sequence. Deterministic for even lengths, where "the middle" is
/// otherwise ambiguous.
pub fn lower_median<R: Real>(values: &[R]) -> Result<R, ColorspaceError> {
    if values.is_empty() {
        return Err(ColorspaceError::EmptySequence);
    }
    let mut sorted = values.to_vec();
    sorted.sort_unstable_by(|a, b| a.partial_cmp(b).expect("hue values are never NaN"));
    Ok(sorted[(sorted.len() - 1) / 2])
}

/// Reduces an image to its dominant hue.
///
/// Per pixel, the hue matrix is computed (gray pixels contribute 0); each
/// row is sorted and its middle element collected; the collected vector is
/// sorted and its middle element is the raw hue; the fold
/// `min(raw, 1 - raw)` is applied once, to that final scalar.
pub fn extract_hue<R: Real>(img: &RgbImage<R>) -> HueSummary<R> {
    let mut row_medians = Vec::with_capacity(img.height());
    let mut degenerate = 0usize;
    for row in 0..img.height() {
        let mut hues = Vec::with_capacity(img.width());
        for col in 0..img.width() {
            let [r, g, b] = img.at(row, col);
            if r == g && g == b {
                degenerate += 1;
            }
            hues.push(rgb_to_hsi(r, g, b).h);
        }
        row_medians.push(lower_median(&hues).expect("row has width >= 1 pixels"));
    }
    let raw_hue = lower_median(&row_medians).expect("image has height >= 1 rows");
    let actual_hue = raw_hue.min(R::one() - raw_hue);
    let degenerate_fraction =
        real::<R>(degenerate as f64) / real::<R>((img.width() * img.height()) as f64);
    HueSummary {
        raw_hue,
        actual_hue,
        degenerate_fraction,
    }
}
