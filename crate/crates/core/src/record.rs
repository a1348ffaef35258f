//! Measurement records — the machine-readable form of the "recorded
//! message" a monitoring station would display — plus the clock they stamp
//! their time from.
//!
//! A record serializes to a single JSON line and round-trips losslessly,
//! which is what makes the append-only log greppable and replayable.

use std::collections::BTreeMap;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use crate::colorspace::HueSummary;
use crate::controller::{ActuatorState, Phase};
use crate::fuzzy::{ClassificationReport, ClinicalBand, Color};
use crate::imaging::FilterKernel;
use crate::scalar::Real;

/// Time source, injectable so tests can pin timestamps.
pub trait Clock {
    fn now(&self) -> DateTime<Utc>;
}

/// Wall-clock time.
#[derive(Debug, Clone, Copy, Default)]
pub struct SystemClock;

impl Clock for SystemClock {
    fn now(&self) -> DateTime<Utc> {
        Utc::now()
    }
}

/// Fixed instant, for deterministic tests.
#[derive(Debug, Clone, Copy)]
pub struct FixedClock(pub DateTime<Utc>);

impl Default for FixedClock {
    fn default() -> Self {
        FixedClock(DateTime::from_timestamp(1_735_689_600, 0).expect("valid epoch"))
    }
}

impl Clock for FixedClock {
    fn now(&self) -> DateTime<Utc> {
        self.0
    }
}

/// One controller event: simulated seconds since cycle start, the phase
/// entered, and the actuator pattern it drives.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CycleEvent {
    pub t_s: f64,
    pub phase: Phase,
    pub actuators: ActuatorState,
}

/// Winning color serialized by name, with `"Indeterminate"` for a hue
/// outside every trained range.
mod winner_serde {
    use super::Color;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Color(Color),
        Other(String),
    }

    pub fn serialize<S: Serializer>(
        winner: &Option<Color>,
        serializer: S,
    ) -> Result<S::Ok, S::Error> {
        match winner {
            Some(color) => Repr::Color(*color).serialize(serializer),
            None => Repr::Other("Indeterminate".to_string()).serialize(serializer),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        deserializer: D,
    ) -> Result<Option<Color>, D::Error> {
        match Repr::deserialize(deserializer)? {
            Repr::Color(color) => Ok(Some(color)),
            Repr::Other(s) if s == "Indeterminate" => Ok(None),
            Repr::Other(s) => Err(serde::de::Error::custom(format!("unknown winner {s:?}"))),
        }
    }
}

/// One persisted measurement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasurementRecord {
    pub timestamp: DateTime<Utc>,
    /// Registry id, or `"unknown"` when identification was skipped or
    /// inconclusive.
    pub patient_id: String,
    pub raw_hue: f64,
    pub actual_hue: f64,
    /// Raw membership responses per color.
    pub values: BTreeMap<Color, f64>,
    #[serde(with = "winner_serde")]
    pub winner: Option<Color>,
    pub band: Option<ClinicalBand>,
    pub kernel: FilterKernel,
    /// Controller events; empty for a direct image analysis.
    pub event_log: Vec<CycleEvent>,
}

impl MeasurementRecord {
    /// Assembles a record from the pipeline outputs, converting the working
    /// scalar type to `f64` for storage.
    pub fn new<R: Real>(
        timestamp: DateTime<Utc>,
        patient_id: Option<&str>,
        summary: &HueSummary<R>,
        report: &ClassificationReport<R>,
        kernel: FilterKernel,
        event_log: Vec<CycleEvent>,
    ) -> Self {
        let to64 = |v: R| v.to_f64().expect("finite pipeline value");
        Self {
            timestamp,
            patient_id: patient_id.unwrap_or("unknown").to_string(),
            raw_hue: to64(summary.raw_hue),
            actual_hue: to64(summary.actual_hue),
            values: report
                .values
                .iter()
                .map(|(&color, &value)| (color, to64(value)))
                .collect(),
            winner: report.winner,
            band: report.band.clone(),
            kernel,
            event_log,
        }
    }

    pub fn winner_color(&self) -> Option<Color> {
        self.winner
    }

    /// The record as one JSON line (no interior newlines).
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("record always serializes")
    }

    pub fn from_json_line(line: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(line)
    }

    /// One-line human summary of the reading.
    pub fn summary_line(&self) -> String {
        match (&self.winner, &self.band) {
            (Some(color), Some(band)) => {
                let range = match band.urine_range_g_dl {
                    Some([lo, hi]) => format!("{lo}-{hi} g/dl urine sugar"),
                    None => "no urine sugar".to_string(),
                };
                let advice = match band.marks {
                    crate::fuzzy::SugarMarks::Nil => "no action needed",
                    crate::fuzzy::SugarMarks::One => "recheck at the next cycle",
                    crate::fuzzy::SugarMarks::Two => "watch diet and recheck",
                    crate::fuzzy::SugarMarks::Three | crate::fuzzy::SugarMarks::Four => {
                        "consult a physician"
                    }
                };
                format!(
                    "patient {}: solution color {}, sugar band {} ({range}); {advice}",
                    self.patient_id, color, band.marks
                )
            }
            _ => format!(
                "patient {}: color indeterminate (hue {:.4} outside every trained range); \
                 repeat the measurement",
                self.patient_id, self.actual_hue
            ),
        }
    }
}
