//! Configuration, persistence, and the operations behind the CLI
//! subcommands.
//!
//! Everything here is deliberately desk-scale: one JSON config file, a
//! JSON-lines log appended a whole line at a time, and a CSV export of the
//! membership curves for external plotting.

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::colorspace::extract_hue;
use crate::controller::{run_cycle, CycleConfig, SenseError};
use crate::fuzzy::{
    classify, default_membership_functions, Color, MembershipFunction, TrainingSet,
};
use crate::identity::{IdentifyError, PatientEntry, PatientRegistry};
use crate::imaging::{denoise, load_image, DecodeError, FilterKernel};
use crate::record::{Clock, MeasurementRecord};

/// Which exit-status class an error belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    /// Configuration problems: bad config file, bad training sets, bad
    /// registry, out-of-range parameters.
    Config,
    /// Image problems: missing, unreadable, or undecodable input.
    Image,
    /// Everything else (output I/O, log append).
    Other,
}

#[derive(Debug, Error)]
pub enum AppError {
    #[error("reading config {path}: {source}")]
    ConfigIo { path: PathBuf, source: io::Error },
    #[error("parsing config {path}: {source}")]
    ConfigParse {
        path: PathBuf,
        source: serde_json::Error,
    },
    #[error("invalid config: {0}")]
    ConfigInvalid(String),
    #[error("training sets {path}: {detail}")]
    TrainingSets { path: PathBuf, detail: String },
    #[error("registry {path}: {detail}")]
    Registry { path: PathBuf, detail: String },
    #[error("reading image {path}: {source}")]
    ImageIo { path: PathBuf, source: io::Error },
    #[error("decoding image {path}: {source}")]
    ImageDecode { path: PathBuf, source: DecodeError },
    #[error("writing {path}: {source}")]
    OutputIo { path: PathBuf, source: io::Error },
    #[error("appending log {path}: {source}")]
    LogIo { path: PathBuf, source: io::Error },
}

impl AppError {
    pub fn class(&self) -> ErrorClass {
        match self {
            AppError::ConfigIo { .. }
            | AppError::ConfigParse { .. }
            | AppError::ConfigInvalid(_)
            | AppError::TrainingSets { .. }
            | AppError::Registry { .. } => ErrorClass::Config,
            AppError::ImageIo { .. } | AppError::ImageDecode { .. } => ErrorClass::Image,
            AppError::OutputIo { .. } | AppError::LogIo { .. } => ErrorClass::Other,
        }
    }
}

/// Application configuration; every field has a default so an absent config
/// file means "run with defaults".
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AppConfig {
    /// Denoising mask half-extents.
    pub kernel: FilterKernel,
    /// Optional JSON file overriding the bundled training sets.
    pub training_sets: Option<PathBuf>,
    /// Optional JSON registry of household members.
    pub registry: Option<PathBuf>,
    /// Weight-match tolerance for identification.
    pub tolerance_kg: f64,
    /// Simulated cycle durations.
    pub cycle: CycleConfig,
    /// Optional JSON-lines log appended after each measurement.
    pub log: Option<PathBuf>,
}

impl Default for AppConfig {
    fn default() -> Self {
        Self {
            kernel: FilterKernel::default(),
            training_sets: None,
            registry: None,
            tolerance_kg: 2.0,
            cycle: CycleConfig::default(),
            log: None,
        }
    }
}

impl AppConfig {
    /// Loads and parses a config file. Paths inside the file are used as
    /// written (relative to the working directory).
    pub fn load(path: &Path) -> Result<Self, AppError> {
        let text = fs::read_to_string(path).map_err(|source| AppError::ConfigIo {
            path: path.to_path_buf(),
            source,
        })?;
        serde_json::from_str(&text).map_err(|source| AppError::ConfigParse {
            path: path.to_path_buf(),
            source,
        })
    }

    fn validate(&self) -> Result<(), AppError> {
        if self.tolerance_kg.is_nan() || self.tolerance_kg <= 0.0 {
            return Err(AppError::ConfigInvalid(format!(
                "tolerance_kg must be positive, got {}",
                self.tolerance_kg
            )));
        }
        self.cycle
            .validate()
            .map_err(|e| AppError::ConfigInvalid(e.to_string()))
    }
}

/// Training-set override file: color name -> `[hue, percent]` rows. The
/// four standard colors are required; Orange is optional and, when present,
/// becomes classifiable.
fn load_training_sets(path: &Path) -> Result<Vec<MembershipFunction<f64>>, AppError> {
    let fail = |detail: String| AppError::TrainingSets {
        path: path.to_path_buf(),
        detail,
    };
    let text = fs::read_to_string(path).map_err(|e| fail(e.to_string()))?;
    let columns: BTreeMap<String, Vec<(f64, f64)>> =
        serde_json::from_str(&text).map_err(|e| fail(e.to_string()))?;

    let mut sets = Vec::new();
    for color in [Color::Red, Color::Yellow, Color::Green, Color::Blue] {
        let rows = columns
            .get(color.name())
            .ok_or_else(|| fail(format!("missing {} training set", color.name())))?;
        let set = TrainingSet::from_f64_rows(color, rows).map_err(|e| fail(e.to_string()))?;
        sets.push(MembershipFunction::new(set));
    }
    if let Some(rows) = columns.get(Color::Orange.name()) {
        let set =
            TrainingSet::from_f64_rows(Color::Orange, rows).map_err(|e| fail(e.to_string()))?;
        sets.push(MembershipFunction::new(set));
    }
    for key in columns.keys() {
        if ![
            Color::Red,
            Color::Orange,
            Color::Yellow,
            Color::Green,
            Color::Blue,
        ]
        .iter()
        .any(|c| c.name() == key)
        {
            return Err(fail(format!("unknown color {key:?}")));
        }
    }
    Ok(sets)
}

fn load_registry(path: &Path, tolerance_kg: f64) -> Result<PatientRegistry, AppError> {
    let fail = |detail: String| AppError::Registry {
        path: path.to_path_buf(),
        detail,
    };
    let text = fs::read_to_string(path).map_err(|e| fail(e.to_string()))?;
    let entries: Vec<PatientEntry> =
        serde_json::from_str(&text).map_err(|e| fail(e.to_string()))?;
    PatientRegistry::new(entries, tolerance_kg).map_err(|e| fail(e.to_string()))
}

/// A run-cycle result: the record plus an optional identification warning
/// (ambiguous or unmatched weight leaves the record attributed to
/// `"unknown"` rather than guessing).
#[derive(Debug)]
pub struct CycleOutcome {
    pub record: MeasurementRecord,
    pub warning: Option<String>,
}

/// Wired-up application: resolved config, training sets, registry, clock.
pub struct App<'c> {
    config: AppConfig,
    sets: Vec<MembershipFunction<f64>>,
    registry: Option<PatientRegistry>,
    clock: &'c dyn Clock,
}

impl std::fmt::Debug for App<'_> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("App")
            .field("config", &self.config)
            .field("sets", &self.sets.len())
            .field("registry", &self.registry)
            .finish_non_exhaustive()
    }
}

impl<'c> App<'c> {
    /// Validates the config and eagerly loads every referenced file, so a
    /// bad path fails up front as a config error.
    pub fn new(config: AppConfig, clock: &'c dyn Clock) -> Result<Self, AppError> {
        config.validate()?;
        let sets = match &config.training_sets {
            Some(path) => load_training_sets(path)?,
            None => default_membership_functions(),
        };
        let registry = match &config.registry {
            Some(path) => Some(load_registry(path, config.tolerance_kg)?),
            None => None,
        };
        Ok(Self {
            config,
            sets,
            registry,
            clock,
        })
    }

    pub fn config(&self) -> &AppConfig {
        &self.config
    }

    pub fn membership_functions(&self) -> &[MembershipFunction<f64>] {
        &self.sets
    }

    fn read_image_bytes(&self, path: &Path) -> Result<Vec<u8>, AppError> {
        fs::read(path).map_err(|source| AppError::ImageIo {
            path: path.to_path_buf(),
            source,
        })
    }

    /// Analyzes one image file: load, denoise, extract hue, classify,
    /// append to the log. The record's event log is empty; no cycle ran.
    pub fn analyze_file(&self, image: &Path) -> Result<MeasurementRecord, AppError> {
        let bytes = self.read_image_bytes(image)?;
        let img = load_image::<f64>(&bytes).map_err(|source| AppError::ImageDecode {
            path: image.to_path_buf(),
            source,
        })?;
        let filtered = denoise(&img, self.config.kernel);
        let summary = extract_hue(&filtered);
        let report = classify(summary.actual_hue, &self.sets);
        let record = MeasurementRecord::new(
            self.clock.now(),
            None,
            &summary,
            &report,
            self.config.kernel,
            Vec::new(),
        );
        self.append_log(&record)?;
        Ok(record)
    }

    /// Runs one simulated measurement cycle with the image file as the
    /// sensor output, identifying the patient from the scale reading when
    /// one is given.
    pub fn run_cycle_file(
        &self,
        image: &Path,
        weight_kg: Option<f64>,
    ) -> Result<CycleOutcome, AppError> {
        let (patient_id, warning) = match weight_kg {
            None => (None, None),
            Some(kg) => {
                if kg.is_nan() || kg <= 0.0 {
                    return Err(AppError::ConfigInvalid(format!(
                        "weight must be positive, got {kg}"
                    )));
                }
                let registry = self.registry.as_ref().ok_or_else(|| {
                    AppError::ConfigInvalid(
                        "a weight was given but no registry is configured".to_string(),
                    )
                })?;
                match registry.identify(kg) {
                    Ok(id) => (Some(id.to_string()), None),
                    Err(e @ IdentifyError::Ambiguous { .. })
                    | Err(e @ IdentifyError::NoMatch { .. }) => {
                        (None, Some(format!("identification failed: {e}")))
                    }
                }
            }
        };

        let record = run_cycle(
            &self.config.cycle,
            || {
                let bytes = fs::read(image).map_err(SenseError::Io)?;
                load_image::<f64>(&bytes).map_err(SenseError::from)
            },
            patient_id.as_deref(),
            &self.sets,
            self.config.kernel,
            self.clock,
        )
        .map_err(|failure| match failure.error {
            SenseError::Io(source) => AppError::ImageIo {
                path: image.to_path_buf(),
                source,
            },
            SenseError::Decode(source) => AppError::ImageDecode {
                path: image.to_path_buf(),
                source,
            },
            SenseError::Image(e) => AppError::ImageDecode {
                path: image.to_path_buf(),
                source: DecodeError::Unsupported {
                    format: "image",
                    detail: e.to_string(),
                },
            },
        })?;
        self.append_log(&record)?;
        Ok(CycleOutcome { record, warning })
    }

    /// Samples the four membership curves on a step grid over `[0, 1]` and
    /// writes them as CSV with a header row and `.` decimal separator.
    pub fn export_curves(&self, step: f64, out: &Path) -> Result<(), AppError> {
        if !(step > 0.0 && step <= 0.1) {
            return Err(AppError::ConfigInvalid(format!(
                "grid step must satisfy 0 < step <= 0.1, got {step}"
            )));
        }
        let fail = |source: io::Error| AppError::OutputIo {
            path: out.to_path_buf(),
            source,
        };
        let file = fs::File::create(out).map_err(fail)?;
        let mut w = BufWriter::new(file);
        writeln!(w, "hue,red,yellow,green,blue").map_err(fail)?;
        let value_of = |color: Color, x: f64| {
            self.sets
                .iter()
                .find(|mf| mf.color() == color)
                .map(|mf| mf.value(x))
                .unwrap_or(0.0)
        };
        let mut i = 0u64;
        loop {
            let x = i as f64 * step;
            if x > 1.0 + step * 1e-9 {
                break;
            }
            let x = x.min(1.0);
            writeln!(
                w,
                "{},{},{},{},{}",
                x,
                value_of(Color::Red, x),
                value_of(Color::Yellow, x),
                value_of(Color::Green, x),
                value_of(Color::Blue, x)
            )
            .map_err(fail)?;
            i += 1;
        }
        w.flush().map_err(fail)
    }

    /// Appends one record to the log when a log path is configured. Lines
    /// are written whole so concurrent readers never see a torn record.
    fn append_log(&self, record: &MeasurementRecord) -> Result<(), AppError> {
        let Some(path) = &self.config.log else {
            return Ok(());
        };
        let fail = |source: io::Error| AppError::LogIo {
            path: path.clone(),
            source,
        };
        let mut file = fs::OpenOptions::new()
            .create(true)
            .append(true)
            .open(path)
            .map_err(fail)?;
        let mut line = record.to_json_line();
        line.push('\n');
        file.write_all(line.as_bytes()).map_err(fail)
    }
}
