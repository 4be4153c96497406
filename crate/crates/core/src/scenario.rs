//! Scheduled operating-point changes for redundancy and what-if runs.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::plant::SimState;

/// One timed action applied to the running plant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "action", rename_all = "snake_case")]
pub enum ScenarioAction {
    SetLoadFraction { value: f64 },
    DisableChiller,
    EnableChiller,
    SetSetpoint { value: f64 },
    SetAmbient { target: AmbientTarget, value: f64 },
    /// Pins the valve at `value`; omit `value` to hand control back to the
    /// PID.
    LockValve { value: Option<f64> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AmbientTarget {
    Room,
    Outdoor,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScenarioEvent {
    pub at_s: f64,
    #[serde(flatten)]
    pub action: ScenarioAction,
}

/// Time-ordered event list.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Schedule {
    #[serde(default, rename = "events")]
    pub events: Vec<ScenarioEvent>,
}

impl Schedule {
    /// Parses and validates a scenario document.
    pub fn from_toml(text: &str) -> Result<Schedule> {
        let schedule: Schedule =
            toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        schedule.validate()?;
        Ok(schedule)
    }

    pub fn validate(&self) -> Result<()> {
        let mut last = f64::NEG_INFINITY;
        for (i, event) in self.events.iter().enumerate() {
            if !(event.at_s >= 0.0) {
                return Err(Error::InvalidConfig {
                    field: format!("events[{i}].at_s"),
                    reason: "must be non-negative".into(),
                });
            }
            if event.at_s < last {
                return Err(Error::InvalidConfig {
                    field: format!("events[{i}].at_s"),
                    reason: "event times must be non-decreasing".into(),
                });
            }
            last = event.at_s;
            match event.action {
                ScenarioAction::SetLoadFraction { value } => {
                    if !(0.0..=1.0).contains(&value) {
                        return Err(Error::InvalidConfig {
                            field: format!("events[{i}].value"),
                            reason: "load fraction must be in [0, 1]".into(),
                        });
                    }
                }
                ScenarioAction::SetSetpoint { value } => {
                    if !(-30.0..120.0).contains(&value) {
                        return Err(Error::InvalidConfig {
                            field: format!("events[{i}].value"),
                            reason: "setpoint must be plant-realistic (-30..120 C)".into(),
                        });
                    }
                }
                ScenarioAction::SetAmbient { value, .. } => {
                    if !(-30.0..120.0).contains(&value) {
                        return Err(Error::InvalidConfig {
                            field: format!("events[{i}].value"),
                            reason: "ambient must be plant-realistic (-30..120 C)".into(),
                        });
                    }
                }
                ScenarioAction::LockValve { value: Some(v) } if !(0.0..=1.0).contains(&v) => {
                    return Err(Error::InvalidConfig {
                        field: format!("events[{i}].value"),
                        reason: "valve fraction must be in [0, 1]".into(),
                    });
                }
                _ => {}
            }
        }
        Ok(())
    }

    /// Applies every event due at or before the state's current time.
    /// `cursor` carries the position between calls.
    pub fn apply_due(&self, state: &mut SimState, cursor: &mut usize) {
        while *cursor < self.events.len() && self.events[*cursor].at_s <= state.time_s {
            apply_action(self.events[*cursor].action, state);
            *cursor += 1;
        }
    }
}

fn apply_action(action: ScenarioAction, state: &mut SimState) {
    match action {
        ScenarioAction::SetLoadFraction { value } => {
            state.controls.load_fraction = value.clamp(0.0, 1.0);
        }
        ScenarioAction::DisableChiller => {
            state.controls.chiller_enabled = false;
            state.chiller.active = false;
        }
        ScenarioAction::EnableChiller => state.controls.chiller_enabled = true,
        ScenarioAction::SetSetpoint { value } => state.pid.setpoint_c = value,
        ScenarioAction::SetAmbient { target, value } => match target {
            AmbientTarget::Room => state.controls.room_c = value,
            AmbientTarget::Outdoor => state.controls.outdoor_c = value,
        },
        ScenarioAction::LockValve { value } => state.controls.valve_lock = value,
    }
}
