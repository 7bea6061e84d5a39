//! JSON scenario files.
//!
//! A scenario is a flat JSON object. Five keys are required; the rest have
//! defaults so that input files written before a parameter existed keep
//! working unchanged. Unknown keys are rejected rather than ignored: cloned
//! input files accumulate typos, and a misspelled optional key would
//! otherwise silently fall back to its default.

use serde_json::{Map, Value};
use thiserror::Error;

use crate::ode::{InvalidScenario, Vec3};
use crate::SpringScenario;

pub const DEFAULT_FRICTION: [f64; 2] = [0.0, 0.0];
pub const DEFAULT_GRAVITY: f64 = 9.81;
pub const DEFAULT_END_TIME: f64 = 5.0;
pub const DEFAULT_TIME_STEP: f64 = 1e-3;
pub const DEFAULT_OUTPUT_INTERVAL: f64 = 0.01;

const KNOWN_KEYS: [&str; 10] = [
    "masses",
    "spring constant",
    "rest length",
    "initial positions",
    "initial velocities",
    "friction",
    "gravity",
    "end time",
    "time step",
    "output interval",
];

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("scenario must be a JSON object")]
    NotAnObject,
    #[error("unknown key \"{0}\"")]
    UnknownKey(String),
    #[error("missing required key \"{0}\"")]
    MissingKey(&'static str),
    #[error("key \"{key}\" {expected}")]
    WrongShape {
        key: &'static str,
        expected: &'static str,
    },
    #[error("key \"{0}\" holds a non-finite number")]
    NotFinite(&'static str),
    #[error(transparent)]
    Constraint(#[from] InvalidScenario),
}

fn finite(value: f64, key: &'static str) -> Result<f64, ScenarioError> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(ScenarioError::NotFinite(key))
    }
}

fn number(value: &Value, key: &'static str) -> Result<f64, ScenarioError> {
    let n = value.as_f64().ok_or(ScenarioError::WrongShape {
        key,
        expected: "must be a number",
    })?;
    finite(n, key)
}

fn pair(value: &Value, key: &'static str) -> Result<[f64; 2], ScenarioError> {
    let items = value.as_array().filter(|a| a.len() == 2).ok_or(
        ScenarioError::WrongShape {
            key,
            expected: "must be an array of 2 numbers",
        },
    )?;
    Ok([number(&items[0], key)?, number(&items[1], key)?])
}

fn triple(value: &Value, key: &'static str) -> Result<Vec3<f64>, ScenarioError> {
    let items = value.as_array().filter(|a| a.len() == 3).ok_or(
        ScenarioError::WrongShape {
            key,
            expected: "must be an array of 2 arrays of 3 numbers",
        },
    )?;
    Ok(Vec3::new(
        number(&items[0], key)?,
        number(&items[1], key)?,
        number(&items[2], key)?,
    ))
}

fn vector_pair(value: &Value, key: &'static str) -> Result<[Vec3<f64>; 2], ScenarioError> {
    let items = value.as_array().filter(|a| a.len() == 2).ok_or(
        ScenarioError::WrongShape {
            key,
            expected: "must be an array of 2 arrays of 3 numbers",
        },
    )?;
    Ok([triple(&items[0], key)?, triple(&items[1], key)?])
}

fn required<'a>(
    doc: &'a Map<String, Value>,
    key: &'static str,
) -> Result<&'a Value, ScenarioError> {
    doc.get(key).ok_or(ScenarioError::MissingKey(key))
}

/// Parses a scenario document, applying defaults for absent optional keys
/// and validating every constraint.
pub fn parse_scenario(text: &str) -> Result<SpringScenario, ScenarioError> {
    let value: Value = serde_json::from_str(text)?;
    let doc = value.as_object().ok_or(ScenarioError::NotAnObject)?;

    for key in doc.keys() {
        if !KNOWN_KEYS.contains(&key.as_str()) {
            return Err(ScenarioError::UnknownKey(key.clone()));
        }
    }

    let scenario = SpringScenario {
        masses: pair(required(doc, "masses")?, "masses")?,
        spring_constant: number(required(doc, "spring constant")?, "spring constant")?,
        rest_length: number(required(doc, "rest length")?, "rest length")?,
        initial_positions: vector_pair(
            required(doc, "initial positions")?,
            "initial positions",
        )?,
        initial_velocities: vector_pair(
            required(doc, "initial velocities")?,
            "initial velocities",
        )?,
        friction: match doc.get("friction") {
            Some(v) => pair(v, "friction")?,
            None => DEFAULT_FRICTION,
        },
        gravity: match doc.get("gravity") {
            Some(v) => number(v, "gravity")?,
            None => DEFAULT_GRAVITY,
        },
        end_time: match doc.get("end time") {
            Some(v) => number(v, "end time")?,
            None => DEFAULT_END_TIME,
        },
        time_step: match doc.get("time step") {
            Some(v) => number(v, "time step")?,
            None => DEFAULT_TIME_STEP,
        },
        output_interval: match doc.get("output interval") {
            Some(v) => number(v, "output interval")?,
            None => DEFAULT_OUTPUT_INTERVAL,
        },
    };
    scenario.validate()?;
    Ok(scenario)
}
