//! Colorimetric analysis of Benedict's-reagent solutions.
//!
//! The library covers the full measurement pipeline of a desk-scale urine
//! glucose monitor:
//!
//! - [`imaging`] — PPM/BMP ingestion and mean-filter denoising of the sensed
//!   solution photo, applied per color channel.
//! - [`colorspace`] — RGB-to-HSI conversion and dominant-hue extraction via
//!   a median-of-row-medians reduction.
//! - [`fuzzy`] — color membership functions interpolated through a bundled
//!   training table, majority-vote classification, and the clinical sugar
//!   bands (Nil through `++++`).
//! - [`controller`] — a simulated measurement-cycle state machine (collect,
//!   add reagent, heat, cool, sense, drain) with actuator safety interlocks.
//! - [`identity`] — weight-based patient identification.
//! - [`app`] — configuration, measurement records, the JSON-lines log, and
//!   the operations behind the CLI subcommands.
//!
//! The numeric kernels are generic over the scalar type through [`Real`]
//! (any `num_traits::Float`, in practice `f32` or `f64`); `f64` is the
//! default everywhere and what the CLI uses.
//!
//! ```
//! use benedict_core::fuzzy::{classify, default_membership_functions};
//!
//! let sets = default_membership_functions::<f64>();
//! let report = classify(0.272, &sets);
//! assert_eq!(report.winner, Some(benedict_core::fuzzy::Color::Green));
//! ```

pub mod app;
pub mod colorspace;
pub mod controller;
pub mod fuzzy;
pub mod identity;
pub mod imaging;
pub mod record;
mod scalar;

pub use scalar::Real;

// Concrete scalar aliases for the generic kernel types.
pub type RgbImage32 = imaging::RgbImage<f32>;
pub type RgbImage64 = imaging::RgbImage<f64>;
pub type HsiPixel32 = colorspace::HsiPixel<f32>;
pub type HsiPixel64 = colorspace::HsiPixel<f64>;
pub type HueSummary32 = colorspace::HueSummary<f32>;
pub type HueSummary64 = colorspace::HueSummary<f64>;
pub type TrainingSet32 = fuzzy::TrainingSet<f32>;
pub type TrainingSet64 = fuzzy::TrainingSet<f64>;
pub type MembershipFunction32 = fuzzy::MembershipFunction<f32>;
pub type MembershipFunction64 = fuzzy::MembershipFunction<f64>;
