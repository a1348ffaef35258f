//! Simulated measurement-cycle state machine.
//!
//! One cycle walks the fixed sequence collect urine (V1) -> add reagent
//! (V2) -> heat to boiling (H) -> cool -> sense color -> drain (V3), then
//! returns to idle. Phase durations are configuration-driven; heating and
//! cooling are timed phases, with no thermal model behind them.
//!
//! Two interlocks hold over every trajectory: the heater is never on while
//! any valve is open, and at most one valve is open at any instant. They are
//! an engineering safety contract at the simulation boundary where a real
//! valve/heater driver would attach.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::colorspace::extract_hue;
use crate::fuzzy::{classify, MembershipFunction};
use crate::imaging::{denoise, DecodeError, FilterKernel, ImageError, RgbImage};
use crate::record::{Clock, CycleEvent, MeasurementRecord};
use crate::scalar::Real;

/// Measurement-cycle phases, in execution order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Phase {
    Idle,
    Collect,
    AddReagent,
    Heat,
    Cool,
    Sense,
    Drain,
}

impl Phase {
    /// Successor in the cycle; `Drain` wraps back to `Idle`, which has no
    /// successor of its own (leaving `Idle` takes a start trigger).
    fn next(self) -> Phase {
        match self {
            Phase::Idle => Phase::Idle,
            Phase::Collect => Phase::AddReagent,
            Phase::AddReagent => Phase::Heat,
            Phase::Heat => Phase::Cool,
            Phase::Cool => Phase::Sense,
            Phase::Sense => Phase::Drain,
            Phase::Drain => Phase::Idle,
        }
    }
}

/// Cycle position: current phase and seconds spent in it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CycleState {
    pub phase: Phase,
    pub elapsed_in_phase: f64,
}

impl CycleState {
    pub fn idle() -> Self {
        Self {
            phase: Phase::Idle,
            elapsed_in_phase: 0.0,
        }
    }

    /// Start trigger: moves an idle machine to the first working phase.
    pub fn started() -> Self {
        Self {
            phase: Phase::Collect,
            elapsed_in_phase: 0.0,
        }
    }
}

/// Valve and heater outputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActuatorState {
    /// Urine inlet valve.
    pub v1: bool,
    /// Reagent inlet valve.
    pub v2: bool,
    /// Drain valve.
    pub v3: bool,
    pub heater: bool,
}

impl ActuatorState {
    pub const ALL_OFF: ActuatorState = ActuatorState {
        v1: false,
        v2: false,
        v3: false,
        heater: false,
    };

    /// The output pattern of a phase: each working phase drives exactly one
    /// actuator, except cooling and sensing which drive none.
    pub fn for_phase(phase: Phase) -> ActuatorState {
        let mut s = ActuatorState::ALL_OFF;
        match phase {
            Phase::Collect => s.v1 = true,
            Phase::AddReagent => s.v2 = true,
            Phase::Heat => s.heater = true,
            Phase::Drain => s.v3 = true,
            Phase::Idle | Phase::Cool | Phase::Sense => {}
        }
        s
    }

    fn valves_open(&self) -> usize {
        usize::from(self.v1) + usize::from(self.v2) + usize::from(self.v3)
    }

    /// Interlock check: heater on implies all valves closed, and never more
    /// than one valve open.
    pub fn is_safe(&self) -> bool {
        let valves = self.valves_open();
        (!self.heater || valves == 0) && valves <= 1
    }
}

/// Phase durations in seconds, plus the reagent dose.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CycleConfig {
    pub collect_s: f64,
    pub reagent_s: f64,
    pub heat_s: f64,
    pub cool_s: f64,
    pub sense_s: f64,
    pub drain_s: f64,
    pub reagent_volume_ml: f64,
}

impl Default for CycleConfig {
    fn default() -> Self {
        Self {
            collect_s: 5.0,
            reagent_s: 2.0,
            heat_s: 120.0,
            cool_s: 180.0,
            sense_s: 2.0,
            drain_s: 5.0,
            reagent_volume_ml: 3.0,
        }
    }
}

impl CycleConfig {
    pub fn validate(&self) -> Result<(), ControllerError> {
        let durations = [
            ("collect_s", self.collect_s),
            ("reagent_s", self.reagent_s),
            ("heat_s", self.heat_s),
            ("cool_s", self.cool_s),
            ("sense_s", self.sense_s),
            ("drain_s", self.drain_s),
        ];
        for (name, value) in durations {
            if !value.is_finite() || value <= 0.0 {
                return Err(ControllerError::NonPositiveDuration { field: name, value });
            }
        }
        Ok(())
    }

    fn duration_of(&self, phase: Phase) -> f64 {
        match phase {
            Phase::Idle => f64::INFINITY,
            Phase::Collect => self.collect_s,
            Phase::AddReagent => self.reagent_s,
            Phase::Heat => self.heat_s,
            Phase::Cool => self.cool_s,
            Phase::Sense => self.sense_s,
            Phase::Drain => self.drain_s,
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum ControllerError {
    #[error("cycle config: {field} must be a positive duration, got {value}")]
    NonPositiveDuration { field: &'static str, value: f64 },
}

/// Advances the cycle by `dt` seconds and reports the actuator pattern of
/// the resulting phase.
///
/// A step crosses at most one phase boundary: when the configured duration
/// of the current phase elapses, the machine enters the next phase with its
/// elapsed time reset, and any excess `dt` is discarded at the boundary.
/// Idle holds until a start trigger ([`CycleState::started`]).
pub fn step(state: CycleState, config: &CycleConfig, dt: f64) -> (CycleState, ActuatorState) {
    assert!(dt > 0.0, "dt must be positive");
    let mut next = state;
    if state.phase != Phase::Idle {
        next.elapsed_in_phase += dt;
        if next.elapsed_in_phase >= config.duration_of(state.phase) {
            next.phase = state.phase.next();
            next.elapsed_in_phase = 0.0;
        }
    }
    (next, ActuatorState::for_phase(next.phase))
}

/// Everything that can go wrong while a cycle acquires its image.
#[derive(Debug, Error)]
pub enum SenseError {
    #[error("reading sensor image: {0}")]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Decode(#[from] DecodeError),
    #[error(transparent)]
    Image(#[from] ImageError),
}

/// A failed cycle: the error plus the actuator event log up to and
/// including the abort drain, so callers can verify the chamber was
/// emptied.
#[derive(Debug, Error)]
#[error("measurement cycle aborted: {error}")]
pub struct CycleFailure {
    #[source]
    pub error: SenseError,
    pub event_log: Vec<CycleEvent>,
}

/// Runs one complete measurement cycle.
///
/// The machine is stepped phase by phase; entering a phase appends a
/// `(simulated seconds, phase, actuator pattern)` event. At the sense phase
/// the image source is drained through denoise -> hue extraction ->
/// classification. If the source fails, the cycle aborts through drain
/// before idling (never leaving liquid in the chamber) and the failure
/// carries the event log.
pub fn run_cycle<R, F>(
    config: &CycleConfig,
    image_source: F,
    patient_id: Option<&str>,
    sets: &[MembershipFunction<R>],
    kernel: FilterKernel,
    clock: &dyn Clock,
) -> Result<MeasurementRecord, CycleFailure>
where
    R: Real,
    F: FnOnce() -> Result<RgbImage<R>, SenseError>,
{
    let mut events = Vec::new();
    let mut sim_t = 0.0;
    let mut state = CycleState::started();
    let log_phase = |events: &mut Vec<CycleEvent>, t: f64, phase: Phase| {
        events.push(CycleEvent {
            t_s: t,
            phase,
            actuators: ActuatorState::for_phase(phase),
        });
    };
    log_phase(&mut events, sim_t, state.phase);

    let mut image_source = Some(image_source);
    let mut outcome = None;
    while state.phase != Phase::Idle {
        if state.phase == Phase::Sense && outcome.is_none() {
            let source = image_source.take().expect("sense phase runs once");
            match source() {
                Ok(image) => {
                    let filtered = denoise(&image, kernel);
                    let summary = extract_hue(&filtered);
                    let report = classify(summary.actual_hue, sets);
                    outcome = Some(Ok((summary, report)));
                }
                Err(error) => {
                    // Abort path: skip straight to drain so the chamber is
                    // emptied, then fall out through idle.
                    outcome = Some(Err(error));
                    sim_t += state.elapsed_in_phase;
                    state = CycleState {
                        phase: Phase::Drain,
                        elapsed_in_phase: 0.0,
                    };
                    log_phase(&mut events, sim_t, state.phase);
                    continue;
                }
            }
        }
        let duration = config.duration_of(state.phase);
        let (next, _) = step(state, config, duration);
        sim_t += duration;
        state = next;
        log_phase(&mut events, sim_t, state.phase);
    }

    match outcome.expect("sense phase always runs before idle") {
        Ok((summary, report)) => Ok(MeasurementRecord::new(
            clock.now(),
            patient_id,
            &summary,
            &report,
            kernel,
            events,
        )),
        Err(error) => Err(CycleFailure {
            error,
            event_log: events,
        }),
    }
}
