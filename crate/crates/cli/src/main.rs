//! `benedict` — command-line front-end for the colorimetric urine-glucose
//! pipeline.
//!
//! Exit codes: 0 on success, 1 for image errors (missing, unreadable, or
//! undecodable input), 2 for configuration errors, 3 for anything else.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use benedict_core::app::{App, AppConfig, AppError, ErrorClass};
use benedict_core::imaging::FilterKernel;
use benedict_core::record::SystemClock;

#[derive(Parser)]
#[command(
    name = "benedict",
    version,
    about = "Colorimetric urine sugar analysis"
)]
struct Cli {
    /// JSON config file (defaults apply when omitted).
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze a solution image (PPM or BMP) and report the sugar band.
    Analyze {
        image: PathBuf,
        /// Denoising mask half-extents: A columns, B rows (mask is
        /// (2A+1) x (2B+1)).
        #[arg(long, num_args = 2, value_names = ["A", "B"])]
        kernel: Option<Vec<usize>>,
    },
    /// Run one simulated measurement cycle with the image as the sensor
    /// output at the sense step.
    RunCycle {
        image: PathBuf,
        /// Entryway scale reading, used to attribute the record to a
        /// registered patient.
        #[arg(long, value_name = "KG")]
        weight: Option<f64>,
    },
    /// Sample the membership curves over [0, 1] and write them as CSV.
    ExportCurves {
        /// Grid step (0 < step <= 0.1).
        #[arg(long, default_value_t = 0.001)]
        step: f64,
        /// Output file.
        #[arg(long, default_value = "curves.csv")]
        out: PathBuf,
    },
}

fn run(cli: Cli) -> Result<(), AppError> {
    let mut config = match &cli.config {
        Some(path) => AppConfig::load(path)?,
        None => AppConfig::default(),
    };
    if let Command::Analyze {
        kernel: Some(kernel),
        ..
    } = &cli.command
    {
        config.kernel = FilterKernel::new(kernel[0], kernel[1]);
    }

    let clock = SystemClock;
    let app = App::new(config, &clock)?;

    match cli.command {
        Command::Analyze { image, .. } => {
            let record = app.analyze_file(&image)?;
            println!("{}", record.to_json_line());
            eprintln!("{}", record.summary_line());
        }
        Command::RunCycle { image, weight } => {
            let outcome = app.run_cycle_file(&image, weight)?;
            if let Some(warning) = &outcome.warning {
                eprintln!("warning: {warning}");
            }
            println!("{}", outcome.record.to_json_line());
            eprintln!("{}", outcome.record.summary_line());
        }
        Command::ExportCurves { step, out } => {
            app.export_curves(step, &out)?;
            eprintln!("wrote membership curves to {}", out.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(match err.class() {
                ErrorClass::Image => 1u8,
                ErrorClass::Config => 2u8,
                ErrorClass::Other => 3u8,
            })
        }
    }
}
