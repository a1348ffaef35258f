//! Image ingestion and mean-filter denoising.
//!
//! The sensed photo of the reagent solution arrives as a binary PPM (P6) or
//! an uncompressed 24-bit BMP. Denoising runs a normalized box filter over
//! each color channel independently and reassembles the channels; borders
//! use replicate (clamp-to-edge) padding so edge pixels average real samples
//! instead of injected zeros.

mod decode;

pub use decode::{load_image, DecodeError};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::{real, Real};

/// Errors raised when constructing an [`RgbImage`] from raw parts.
#[derive(Debug, Error, PartialEq)]
pub enum ImageError {
    #[error("image dimensions must be at least 1x1, got {width}x{height}")]
    EmptyDimensions { width: usize, height: usize },
    #[error("pixel count {found} does not match {width}x{height}")]
    PixelCountMismatch {
        width: usize,
        height: usize,
        found: usize,
    },
    #[error("channel value {value} at pixel {index} outside [0, 255]")]
    ChannelOutOfRange { index: usize, value: f64 },
}

/// Row-major 3-channel raster of the sensed solution photo.
///
/// Channel values are reals on the 0–255 scale; they stay floating point
/// through the whole pipeline so filtering does not quantize the hue.
#[derive(Debug, Clone, PartialEq)]
pub struct RgbImage<R: Real = f64> {
    width: usize,
    height: usize,
    pixels: Vec<[R; 3]>,
}

impl<R: Real> RgbImage<R> {
    /// Builds an image from row-major `(r, g, b)` pixels, validating that
    /// the pixel count matches the dimensions and every channel is a finite
    /// value in `[0, 255]`.
    pub fn new(width: usize, height: usize, pixels: Vec<[R; 3]>) -> Result<Self, ImageError> {
        if width == 0 || height == 0 {
            return Err(ImageError::EmptyDimensions { width, height });
        }
        if pixels.len() != width * height {
            return Err(ImageError::PixelCountMismatch {
                width,
                height,
                found: pixels.len(),
            });
        }
        let lo = R::zero();
        let hi = real::<R>(255.0);
        for (index, px) in pixels.iter().enumerate() {
            for &c in px {
                if !(c >= lo && c <= hi) {
                    return Err(ImageError::ChannelOutOfRange {
                        index,
                        value: c.to_f64().unwrap_or(f64::NAN),
                    });
                }
            }
        }
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    /// Builds a `width` x `height` image filled with one color.
    pub fn uniform(width: usize, height: usize, pixel: [R; 3]) -> Result<Self, ImageError> {
        Self::new(width, height, vec![pixel; width * height])
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    /// Pixel at `(row, col)`, row-major.
    pub fn at(&self, row: usize, col: usize) -> [R; 3] {
        self.pixels[row * self.width + col]
    }

    pub fn pixels(&self) -> &[[R; 3]] {
        &self.pixels
    }

    /// Copies out one channel (0 = R, 1 = G, 2 = B) as a flat plane.
    pub fn plane(&self, channel: usize) -> Vec<R> {
        assert!(channel < 3, "channel index out of range");
        self.pixels.iter().map(|px| px[channel]).collect()
    }
}

/// Normalized box-filter mask of size `(2a+1) x (2b+1)`.
///
/// `a` is the half-width (column direction) and `b` the half-height (row
/// direction); every coefficient is `1 / (m*n)` so the weights sum to one
/// exactly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FilterKernel {
    pub a: usize,
    pub b: usize,
}

impl FilterKernel {
    pub fn new(a: usize, b: usize) -> Self {
        Self { a, b }
    }

    /// Mask width `m = 2a + 1`.
    pub fn mask_width(&self) -> usize {
        2 * self.a + 1
    }

    /// Mask height `n = 2b + 1`.
    pub fn mask_height(&self) -> usize {
        2 * self.b + 1
    }

    /// The constant coefficient `1 / (m*n)`.
    pub fn weight<R: Real>(&self) -> R {
        R::one() / real::<R>((self.mask_width() * self.mask_height()) as f64)
    }
}

impl Default for FilterKernel {
    /// 3x3 mask; the smallest neighborhood that still suppresses sensor
    /// speckle.
    fn default() -> Self {
        Self { a: 1, b: 1 }
    }
}

/// Mean-filters a single-channel plane with replicate padding.
///
/// Each output value is the arithmetic mean of the `(2a+1) x (2b+1)`
/// neighborhood centered on the pixel, with out-of-bounds coordinates
/// clamped to the nearest edge. Output dimensions equal the input's.
///
/// Implemented as two separable passes (columns then rows); with a constant
/// mask and per-axis clamping this equals the direct double sum. Each
/// window mean is computed anchored at the center sample,
/// `c + sum(w_i - c) / n`, so constant neighborhoods reproduce their value
/// bit for bit and uniform images are exact fixed points.
pub fn mean_filter_plane<R: Real>(
    plane: &[R],
    width: usize,
    height: usize,
    kernel: FilterKernel,
) -> Vec<R> {
    assert!(
        width > 0 && height > 0 && plane.len() == width * height,
        "plane length must equal width*height and be nonempty"
    );
    let m = real::<R>(kernel.mask_width() as f64);
    let n = real::<R>(kernel.mask_height() as f64);
    let a = kernel.a as isize;
    let b = kernel.b as isize;

    // Horizontal pass over columns (half-width a).
    let mut tmp = vec![R::zero(); plane.len()];
    for row in 0..height {
        let base = row * width;
        for col in 0..width {
            let center = plane[base + col];
            let mut deviation = R::zero();
            for s in -a..=a {
                let c = (col as isize + s).clamp(0, width as isize - 1) as usize;
                deviation = deviation + (plane[base + c] - center);
            }
            tmp[base + col] = center + deviation / m;
        }
    }

    // Vertical pass over rows (half-height b).
    let mut out = vec![R::zero(); plane.len()];
    for row in 0..height {
        for col in 0..width {
            let center = tmp[row * width + col];
            let mut deviation = R::zero();
            for t in -b..=b {
                let r = (row as isize + t).clamp(0, height as isize - 1) as usize;
                deviation = deviation + (tmp[r * width + col] - center);
            }
            out[row * width + col] = center + deviation / n;
        }
    }
    out
}

/// Denoises an image by mean-filtering the R, G, and B planes independently
/// and reassembling them.
pub fn denoise<R: Real>(img: &RgbImage<R>, kernel: FilterKernel) -> RgbImage<R> {
    if kernel.a == 0 && kernel.b == 0 {
        return img.clone();
    }
    let (w, h) = (img.width(), img.height());
    let planes: Vec<Vec<R>> = (0..3)
        .map(|ch| mean_filter_plane(&img.plane(ch), w, h, kernel))
        .collect();
    let lo = R::zero();
    let hi = real::<R>(255.0);
    let pixels = (0..w * h)
        // Means of in-range values are in range; clamping only sheds the
        // last ulp of rounding so reassembly always validates.
        .map(|i| {
            [
                planes[0][i].max(lo).min(hi),
                planes[1][i].max(lo).min(hi),
                planes[2][i].max(lo).min(hi),
            ]
        })
        .collect();
    RgbImage::new(w, h, pixels).expect("filtered planes keep image dimensions and range")
}
