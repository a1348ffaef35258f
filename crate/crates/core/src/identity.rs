//! Weight-based patient identification.
//!
//! A scale at the toilet entry reports one kilogram reading; within a
//! household of distinct weights that is enough to tell the monitored
//! patient from everyone else. The module takes the scalar reading as
//! given; transduction and signal conditioning happen upstream.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// One registered person.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PatientEntry {
    pub id: String,
    pub weight_kg: f64,
}

#[derive(Debug, Error, PartialEq)]
pub enum RegistryError {
    #[error("patient {id:?}: weight {weight_kg} kg must be positive")]
    NonPositiveWeight { id: String, weight_kg: f64 },
    #[error("duplicate patient id {id:?}")]
    DuplicateId { id: String },
    #[error("tolerance {tolerance_kg} kg must be positive")]
    NonPositiveTolerance { tolerance_kg: f64 },
}

#[derive(Debug, Error, PartialEq)]
pub enum IdentifyError {
    #[error("no registered patient within {tolerance_kg} kg of {measured_kg} kg")]
    NoMatch { measured_kg: f64, tolerance_kg: f64 },
    /// More than one registry entry lies within tolerance; refusing to
    /// guess beats misattributing a clinical record.
    #[error("measurement {measured_kg} kg is ambiguous between {candidates:?}")]
    Ambiguous {
        measured_kg: f64,
        candidates: Vec<String>,
    },
}

/// Registered household members and the matching tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct PatientRegistry {
    entries: Vec<PatientEntry>,
    tolerance_kg: f64,
}

impl PatientRegistry {
    /// Validates entries (positive weights, unique ids) and a positive
    /// tolerance.
    pub fn new(entries: Vec<PatientEntry>, tolerance_kg: f64) -> Result<Self, RegistryError> {
        if tolerance_kg.is_nan() || tolerance_kg <= 0.0 {
            return Err(RegistryError::NonPositiveTolerance { tolerance_kg });
        }
        for entry in &entries {
            if entry.weight_kg.is_nan() || entry.weight_kg <= 0.0 {
                return Err(RegistryError::NonPositiveWeight {
                    id: entry.id.clone(),
                    weight_kg: entry.weight_kg,
                });
            }
        }
        let mut ids: Vec<&str> = entries.iter().map(|e| e.id.as_str()).collect();
        ids.sort_unstable();
        if let Some(dup) = ids.windows(2).find(|w| w[0] == w[1]) {
            return Err(RegistryError::DuplicateId {
                id: dup[0].to_string(),
            });
        }
        Ok(Self {
            entries,
            tolerance_kg,
        })
    }

    pub fn entries(&self) -> &[PatientEntry] {
        &self.entries
    }

    pub fn tolerance_kg(&self) -> f64 {
        self.tolerance_kg
    }

    /// Matches a scale reading to the unique registry entry within
    /// tolerance.
    ///
    /// Errors with `NoMatch` when nobody is close enough and `Ambiguous`
    /// when two or more entries are; the result never depends on registry
    /// order.
    pub fn identify(&self, measured_kg: f64) -> Result<&str, IdentifyError> {
        assert!(measured_kg > 0.0, "measured weight must be positive");
        let mut candidates: Vec<&PatientEntry> = self
            .entries
            .iter()
            .filter(|e| (e.weight_kg - measured_kg).abs() <= self.tolerance_kg)
            .collect();
        match candidates.len() {
            0 => Err(IdentifyError::NoMatch {
                measured_kg,
                tolerance_kg: self.tolerance_kg,
            }),
            1 => Ok(&candidates[0].id),
            _ => {
                candidates.sort_by(|a, b| a.id.cmp(&b.id));
                Err(IdentifyError::Ambiguous {
                    measured_kg,
                    candidates: candidates.iter().map(|e| e.id.clone()).collect(),
                })
            }
        }
    }
}
