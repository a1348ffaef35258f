//! Fuzzy color classification and the clinical sugar bands.
//!
//! Each reagent color gets a membership function interpolated through its
//! training nodes: inside the node support the response is the Lagrange
//! polynomial through all nodes, evaluated in direct product form; outside
//! the support it is exactly zero. Classification evaluates every color at
//! the extracted hue and picks the highest response.
//!
//! Responses are polynomial interpolants, not probabilities: between nodes
//! they may oscillate below 0 or above 100 (the usual high-degree
//! interpolation overshoot), and they are reported unclamped. The argmax
//! decision is unaffected by any common positive rescaling of the node
//! percents.

mod table;

pub use table::{
    default_membership_functions, default_training_sets, parse_training_table, COLUMNS,
};

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::{real, Real};

/// Reagent colors in severity order: brick red (highest sugar) first.
///
/// Orange has a clinical band but no bundled training set; it only becomes
/// classifiable when a user supplies nodes for it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Color {
    Red,
    Orange,
    Yellow,
    Green,
    Blue,
}

impl Color {
    pub fn name(&self) -> &'static str {
        match self {
            Color::Red => "Red",
            Color::Orange => "Orange",
            Color::Yellow => "Yellow",
            Color::Green => "Green",
            Color::Blue => "Blue",
        }
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum FuzzyError {
    /// Duplicate hues would put a zero denominator in the interpolation
    /// products.
    #[error("{color} training set: duplicate hue node {hue}")]
    DuplicateHue { color: Color, hue: f64 },
    #[error("{color} training set: {count} nodes after padding removal (need at least 2)")]
    TooFewNodes { color: Color, count: usize },
    #[error("{color} training set: hue {hue} outside [0, 1]")]
    HueOutOfRange { color: Color, hue: f64 },
    #[error("{color} training set: percent {percent} outside [0, 100]")]
    PercentOutOfRange { color: Color, percent: f64 },
}

/// One color's training nodes: `(hue, percent)` pairs, stored sorted by hue
/// with `(0, 0)` padding rows stripped.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainingSet<R: Real = f64> {
    label: Color,
    nodes: Vec<(R, R)>,
}

impl<R: Real> TrainingSet<R> {
    /// Validates and normalizes a raw node list: `(0, 0)` rows are padding
    /// and dropped; the survivors must number at least two, carry strictly
    /// distinct hues in `[0, 1]` and percents in `[0, 100]`, and are sorted
    /// ascending by hue.
    pub fn new(label: Color, rows: Vec<(R, R)>) -> Result<Self, FuzzyError> {
        let mut nodes: Vec<(R, R)> = rows
            .into_iter()
            .filter(|&(hue, percent)| !(hue == R::zero() && percent == R::zero()))
            .collect();
        if nodes.len() < 2 {
            return Err(FuzzyError::TooFewNodes {
                color: label,
                count: nodes.len(),
            });
        }
        for &(hue, percent) in &nodes {
            if !(hue >= R::zero() && hue <= R::one()) {
                return Err(FuzzyError::HueOutOfRange {
                    color: label,
                    hue: hue.to_f64().unwrap_or(f64::NAN),
                });
            }
            if !(percent >= R::zero() && percent <= real::<R>(100.0)) {
                return Err(FuzzyError::PercentOutOfRange {
                    color: label,
                    percent: percent.to_f64().unwrap_or(f64::NAN),
                });
            }
        }
        nodes.sort_unstable_by(|a, b| a.0.partial_cmp(&b.0).expect("validated hues"));
        if let Some(w) = nodes.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(FuzzyError::DuplicateHue {
                color: label,
                hue: w[0].0.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(Self { label, nodes })
    }

    /// Like [`TrainingSet::new`] but lifting `f64` rows into the working
    /// scalar type first.
    pub fn from_f64_rows(label: Color, rows: &[(f64, f64)]) -> Result<Self, FuzzyError> {
        Self::new(
            label,
            rows.iter()
                .map(|&(x, y)| (real::<R>(x), real::<R>(y)))
                .collect(),
        )
    }

    pub fn label(&self) -> Color {
        self.label
    }

    /// Nodes sorted ascending by hue.
    pub fn nodes(&self) -> &[(R, R)] {
        &self.nodes
    }
}

/// Evaluable membership function for one color: the interpolant through the
/// training nodes inside their hue span, zero outside.
#[derive(Debug, Clone, PartialEq)]
pub struct MembershipFunction<R: Real = f64> {
    training: TrainingSet<R>,
}

impl<R: Real> MembershipFunction<R> {
    pub fn new(training: TrainingSet<R>) -> Self {
        Self { training }
    }

    pub fn color(&self) -> Color {
        self.training.label()
    }

    pub fn training(&self) -> &TrainingSet<R> {
        &self.training
    }

    /// `[min node hue, max node hue]`.
    pub fn support(&self) -> (R, R) {
        let nodes = self.training.nodes();
        (nodes[0].0, nodes[nodes.len() - 1].0)
    }

    /// Response at `x`: zero outside the support, otherwise
    /// `sum_i Y_i * prod_{j != i} (x - X_j) / (X_i - X_j)`.
    ///
    /// The value is not clamped; between nodes it may leave `[0, 100]`.
    pub fn value(&self, x: R) -> R {
        let (lo, hi) = self.support();
        if x < lo || x > hi {
            return R::zero();
        }
        let nodes = self.training.nodes();
        let mut response = R::zero();
        for (i, &(xi, yi)) in nodes.iter().enumerate() {
            let mut product = R::one();
            for (j, &(xj, _)) in nodes.iter().enumerate() {
                if i != j {
                    product = product * (x - xj) / (xi - xj);
                }
            }
            response = response + product * yi;
        }
        response
    }
}

/// Severity marks for the clinical sugar bands.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SugarMarks {
    #[serde(rename = "Nil")]
    Nil,
    #[serde(rename = "+")]
    One,
    #[serde(rename = "++")]
    Two,
    #[serde(rename = "+++")]
    Three,
    #[serde(rename = "++++")]
    Four,
}

impl fmt::Display for SugarMarks {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SugarMarks::Nil => "Nil",
            SugarMarks::One => "+",
            SugarMarks::Two => "++",
            SugarMarks::Three => "+++",
            SugarMarks::Four => "++++",
        })
    }
}

/// Clinical interpretation of a reagent color.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClinicalBand {
    pub color: Color,
    pub marks: SugarMarks,
    /// Urine sugar range in g/dl; `None` means nil sugar.
    pub urine_range_g_dl: Option<[f64; 2]>,
    pub note: String,
}

const RENAL_CAVEAT: &str = "urine sugar level depends on the renal threshold";

/// The fixed color-to-band table.
pub fn clinical_band(color: Color) -> ClinicalBand {
    let (marks, range, extra) = match color {
        Color::Blue => (SugarMarks::Nil, None, ""),
        Color::Green => (SugarMarks::One, Some([0.1, 0.5]), ""),
        Color::Yellow => (SugarMarks::Two, Some([0.5, 1.0]), ""),
        Color::Orange => (SugarMarks::Three, Some([1.0, 1.5]), ""),
        Color::Red => (
            SugarMarks::Four,
            Some([1.5, 2.0]),
            "brick red marks very high sugar; pathologist estimate for this \
             color is roughly 290-350 mg/dl blood glucose; ",
        ),
    };
    ClinicalBand {
        color,
        marks,
        urine_range_g_dl: range,
        note: format!("{extra}{RENAL_CAVEAT}"),
    }
}

/// Outcome of evaluating every membership function at one hue.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassificationReport<R: Real = f64> {
    pub input_hue: R,
    /// Raw, unclamped responses per color.
    pub values: BTreeMap<Color, R>,
    /// The color with the highest response; ties break toward higher
    /// severity (fail-safe toward alerting the patient). `None` when every
    /// response is <= 0, i.e. the hue lies outside every trained range.
    pub winner: Option<Color>,
    /// Band of the winning color.
    pub band: Option<ClinicalBand>,
}

/// Majority vote over the per-color responses: with one scalar response per
/// class this is the argmax, severity-first on ties.
pub fn classify<R: Real>(hue: R, sets: &[MembershipFunction<R>]) -> ClassificationReport<R> {
    let mut values = BTreeMap::new();
    for mf in sets {
        values.insert(mf.color(), mf.value(hue));
    }
    // BTreeMap iterates in severity order, so `>` keeps the earlier
    // (more severe) color on ties.
    let mut winner: Option<(Color, R)> = None;
    for (&color, &value) in &values {
        if value > R::zero() && winner.is_none_or(|(_, best)| value > best) {
            winner = Some((color, value));
        }
    }
    let winner = winner.map(|(color, _)| color);
    ClassificationReport {
        input_hue: hue,
        values,
        winner,
        band: winner.map(clinical_band),
    }
}
