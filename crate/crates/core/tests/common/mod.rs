//! Shared helpers for the integration suites: synthetic image construction
//! via the sector-wise HSI inverse, and independent oracles for the filter
//! and interpolation kernels. Nothing here calls into the code paths it is
//! used to check.

#![allow(dead_code)]

use benedict_core::imaging::RgbImage;
use rand::Rng;
use rand_distr::{Distribution, Normal};

/// RGB triple with the given normalized hue, saturation, and intensity,
/// from the standard 120-degree-sector HSI inverse. This goes the opposite
/// direction of the library's acos-based forward transform and shares no
/// code with it.
pub fn rgb_from_hsi(h: f64, s: f64, i: f64) -> [f64; 3] {
    assert!((0.0..1.0).contains(&h) && (0.0..=1.0).contains(&s) && i >= 0.0);
    let sector =
        |deg: f64| i * (1.0 + s * deg.to_radians().cos() / (60.0 - deg).to_radians().cos());
    let h_deg = h * 360.0;
    let (r, g, b);
    if h_deg < 120.0 {
        b = i * (1.0 - s);
        r = sector(h_deg);
        g = 3.0 * i - r - b;
    } else if h_deg < 240.0 {
        r = i * (1.0 - s);
        g = sector(h_deg - 120.0);
        b = 3.0 * i - r - g;
    } else {
        g = i * (1.0 - s);
        b = sector(h_deg - 240.0);
        r = 3.0 * i - g - b;
    }
    [r, g, b]
}

/// Uniform image of one HSI color.
pub fn uniform_hue_image(width: usize, height: usize, h: f64, s: f64, i: f64) -> RgbImage<f64> {
    RgbImage::uniform(width, height, rgb_from_hsi(h, s, i)).expect("in-range synthetic color")
}

/// Uniform image of one HSI color with per-channel Gaussian noise, clamped
/// to the valid channel range.
pub fn noisy_hue_image<T: Rng>(
    rng: &mut T,
    width: usize,
    height: usize,
    h: f64,
    s: f64,
    i: f64,
    sigma: f64,
) -> RgbImage<f64> {
    let base = rgb_from_hsi(h, s, i);
    let noise = Normal::new(0.0, sigma).expect("positive sigma");
    let pixels = (0..width * height)
        .map(|_| {
            [
                (base[0] + noise.sample(rng)).clamp(0.0, 255.0),
                (base[1] + noise.sample(rng)).clamp(0.0, 255.0),
                (base[2] + noise.sample(rng)).clamp(0.0, 255.0),
            ]
        })
        .collect();
    RgbImage::new(width, height, pixels).expect("clamped channels are in range")
}

/// Random image with arbitrary real channels, for oracle comparisons.
pub fn random_image<T: Rng>(rng: &mut T, width: usize, height: usize) -> RgbImage<f64> {
    let pixels = (0..width * height)
        .map(|_| {
            [
                rng.gen_range(0.0..=255.0),
                rng.gen_range(0.0..=255.0),
                rng.gen_range(0.0..=255.0),
            ]
        })
        .collect();
    RgbImage::new(width, height, pixels).expect("sampled channels are in range")
}

/// Brute-force mean filter: the direct double sum over the mask with both
/// coordinates clamped to the image, one output at a time.
pub fn direct_mean_filter(
    plane: &[f64],
    width: usize,
    height: usize,
    a: isize,
    b: isize,
) -> Vec<f64> {
    let weight = 1.0 / ((2 * a + 1) * (2 * b + 1)) as f64;
    let mut out = vec![0.0; plane.len()];
    for row in 0..height {
        for col in 0..width {
            let mut sum = 0.0;
            for t in -b..=b {
                for s in -a..=a {
                    let r = (row as isize + t).clamp(0, height as isize - 1) as usize;
                    let c = (col as isize + s).clamp(0, width as isize - 1) as usize;
                    sum += weight * plane[r * width + c];
                }
            }
            out[row * width + col] = sum;
        }
    }
    out
}

/// Naive Lagrange interpolant through the nodes (no support clipping):
/// `sum_i y_i * prod_{j != i} (x - x_j) / (x_i - x_j)`.
pub fn naive_lagrange(nodes: &[(f64, f64)], x: f64) -> f64 {
    let mut total = 0.0;
    for (i, &(xi, yi)) in nodes.iter().enumerate() {
        let mut term = yi;
        for (j, &(xj, _)) in nodes.iter().enumerate() {
            if i != j {
                term *= (x - xj) / (xi - xj);
            }
        }
        total += term;
    }
    total
}

/// Barycentric (second form) Lagrange evaluation — an algebraically
/// different route to the same interpolant.
pub fn barycentric_lagrange(nodes: &[(f64, f64)], x: f64) -> f64 {
    // Exact hit: avoid the removable singularity.
    if let Some(&(_, y)) = nodes.iter().find(|&&(xi, _)| xi == x) {
        return y;
    }
    let weights: Vec<f64> = (0..nodes.len())
        .map(|i| {
            let xi = nodes[i].0;
            1.0 / nodes
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, &(xj, _))| xi - xj)
                .product::<f64>()
        })
        .collect();
    let mut numerator = 0.0;
    let mut denominator = 0.0;
    for (&(xi, yi), &w) in nodes.iter().zip(&weights) {
        let factor = w / (x - xi);
        numerator += factor * yi;
        denominator += factor;
    }
    numerator / denominator
}
