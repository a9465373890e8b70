use std::fs;
use std::path::Path;

use renyi::constructions::ConstructionDescriptor;
use renyi::{EntropyVector, RenyiOrder, State, SubsetMask};
use serde_json::Value;

use crate::error::{CliError, CliResult};

/// Contents of a JSON input file.
pub enum Input {
    State(State),
    Descriptor(ConstructionDescriptor),
    /// Output of `construct`: a descriptor and, when small enough, a state.
    Construction { descriptor: ConstructionDescriptor, state: Option<State> },
}

impl Input {
    pub fn state(&self) -> Option<&State> {
        match self {
            Input::State(s) => Some(s),
            Input::Construction { state, .. } => state.as_ref(),
            Input::Descriptor(_) => None,
        }
    }

    pub fn descriptor(&self) -> Option<&ConstructionDescriptor> {
        match self {
            Input::Descriptor(d) | Input::Construction { descriptor: d, .. } => Some(d),
            Input::State(_) => None,
        }
    }
}

pub fn read_file(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|source| CliError::Read { path: path.to_path_buf(), source })
}

pub fn load_input(path: &Path) -> CliResult<Input> {
    let text = read_file(path)?;
    let value: Value = serde_json::from_str(&text)?;
    if value.get("type").is_some() {
        return Ok(Input::State(State::from_json(&text)?));
    }
    if value.get("kind").is_some() {
        return Ok(Input::Descriptor(ConstructionDescriptor::from_json(&text)?));
    }
    if let Some(d) = value.get("descriptor") {
        let descriptor = ConstructionDescriptor::from_json(&d.to_string())?;
        let state = match value.get("state") {
            Some(Value::Null) | None => None,
            Some(s) => Some(State::from_json(&s.to_string())?),
        };
        return Ok(Input::Construction { descriptor, state });
    }
    Err(CliError::usage(format!(
        "{}: expected a state (\"type\"), a descriptor (\"kind\") or a construction (\"descriptor\")",
        path.display()
    )))
}

pub fn load_vector(path: &Path) -> CliResult<EntropyVector> {
    Ok(EntropyVector::from_json(&read_file(path)?)?)
}

pub fn parse_alpha(s: &str) -> CliResult<RenyiOrder> {
    Ok(s.parse()?)
}

pub fn parse_subset(label: &str, n: usize) -> CliResult<SubsetMask> {
    Ok(SubsetMask::parse(label, n)?)
}

pub fn parse_generators(list: &str, n: usize) -> CliResult<Vec<SubsetMask>> {
    list.split(',').map(|g| parse_subset(g.trim(), n)).collect()
}

pub fn parse_list<T: std::str::FromStr>(list: &str, what: &str) -> CliResult<Vec<T>> {
    list.split(',')
        .map(|x| x.trim().parse::<T>().map_err(|_| CliError::usage(format!("invalid {what} entry `{x}`"))))
        .collect()
}

/// The single nonzero entry of a vector, if there is exactly one.
pub fn single_entry(v: &EntropyVector) -> Option<(SubsetMask, f64)> {
    let mut nonzero = v.iter().filter(|(_, x)| *x != 0.0);
    let first = nonzero.next()?;
    nonzero.next().is_none().then_some(first)
}

pub fn require<T>(value: Option<T>, flag: &str, context: &str) -> CliResult<T> {
    value.ok_or_else(|| CliError::usage(format!("--{flag} is required for {context}")))
}
