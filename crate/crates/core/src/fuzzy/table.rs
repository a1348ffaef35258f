//! Bundled training table for the four reagent colors.
//!
//! The columns are stored verbatim, including the `(0, 0)` rows that pad the
//! shorter columns to a common length; [`TrainingSet::new`] strips those at
//! construction time. Hues are normalized `[0, 1]`, the second member is the
//! percent presence of the color at that hue.
//!
//! [`TrainingSet::new`]: super::TrainingSet::new

use super::{Color, FuzzyError, MembershipFunction, TrainingSet};
use crate::scalar::Real;

pub const RED: &[(f64, f64)] = &[
    (0.007, 100.0),
    (0.039, 80.0),
    (0.060, 70.0),
    (0.082, 60.0),
    (0.106, 50.0),
    (0.127, 40.0),
    (0.148, 30.0),
    (0.166, 10.0),
    (0.0, 0.0),
    (0.0, 0.0),
    (0.0, 0.0),
    (0.0, 0.0),
];

pub const YELLOW: &[(f64, f64)] = &[
    (0.039, 20.0),
    (0.060, 30.0),
    (0.082, 40.0),
    (0.106, 50.0),
    (0.127, 60.0),
    (0.148, 70.0),
    (0.166, 90.0),
    (0.184, 90.0),
    (0.192, 80.0),
    (0.214, 30.0),
    (0.245, 20.0),
    (0.0, 0.0),
];

pub const GREEN: &[(f64, f64)] = &[
    (0.184, 10.0),
    (0.192, 20.0),
    (0.214, 70.0),
    (0.245, 80.0),
    (0.272, 100.0),
    (0.314, 100.0),
    (0.333, 100.0),
    (0.394, 90.0),
    (0.417, 80.0),
    (0.452, 70.0),
    (0.481, 40.0),
    (0.5, 20.0),
];

pub const BLUE: &[(f64, f64)] = &[
    (0.417, 20.0),
    (0.452, 30.0),
    (0.481, 60.0),
    (0.5, 80.0),
    (0.510, 100.0),
    (0.534, 100.0),
    (0.0, 0.0),
    (0.0, 0.0),
    (0.0, 0.0),
    (0.0, 0.0),
    (0.0, 0.0),
    (0.0, 0.0),
];

/// The four raw table columns in severity order.
pub const COLUMNS: [(Color, &[(f64, f64)]); 4] = [
    (Color::Red, RED),
    (Color::Yellow, YELLOW),
    (Color::Green, GREEN),
    (Color::Blue, BLUE),
];

/// Builds the four bundled training sets (8, 11, 12, and 6 nodes after
/// padding removal).
pub fn default_training_sets<R: Real>() -> Vec<TrainingSet<R>> {
    COLUMNS
        .iter()
        .map(|(color, rows)| {
            TrainingSet::from_f64_rows(*color, rows).expect("bundled table is valid")
        })
        .collect()
}

/// The bundled training sets wrapped as evaluable membership functions.
pub fn default_membership_functions<R: Real>() -> Vec<MembershipFunction<R>> {
    default_training_sets()
        .into_iter()
        .map(MembershipFunction::new)
        .collect()
}

/// Builds training sets from externally supplied `(hue, percent)` rows, one
/// column per color, with the same stripping and validation as the bundled
/// table.
pub fn parse_training_table<R: Real>(
    columns: &[(Color, Vec<(f64, f64)>)],
) -> Result<Vec<TrainingSet<R>>, FuzzyError> {
    columns
        .iter()
        .map(|(color, rows)| TrainingSet::from_f64_rows(*color, rows))
        .collect()
}
