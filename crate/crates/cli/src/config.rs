//! Experiment configs: a JSON object whose fields depend on the command.
//! Every accessor names the field in its error.

use std::path::Path;
use std::str::FromStr;

use nilbohr::{parse_q, Q};
use serde::de::DeserializeOwned;
use serde_json::{Map, Value};

use crate::error::{CliError, CliResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Command {
    ThmA,
    ThmB,
    Staged,
    SgEnum,
    Counterexample,
    Divisible,
    PolyCheck,
    HkCheck,
}

impl Command {
    pub const ALL: [Command; 8] = [
        Command::ThmA,
        Command::ThmB,
        Command::Staged,
        Command::SgEnum,
        Command::Counterexample,
        Command::Divisible,
        Command::PolyCheck,
        Command::HkCheck,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::ThmA => "thm-a",
            Command::ThmB => "thm-b",
            Command::Staged => "staged",
            Command::SgEnum => "sg-enum",
            Command::Counterexample => "counterexample",
            Command::Divisible => "divisible",
            Command::PolyCheck => "poly-check",
            Command::HkCheck => "hk-check",
        }
    }
}

impl FromStr for Command {
    type Err = CliError;
    fn from_str(s: &str) -> CliResult<Self> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| CliError::field("command", format!("unknown command `{s}`")))
    }
}

/// A parsed config. `fields` excludes run-time settings (workers), so the
/// echo written into results does not depend on them.
#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub command: Command,
    pub workers: usize,
    pub fields: Map<String, Value>,
}

impl ExperimentConfig {
    pub fn from_path(path: &Path, command: Option<Command>) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Param(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_str_for(&text, command)
    }

    pub fn from_str_for(text: &str, command: Option<Command>) -> CliResult<Self> {
        let value: Value = serde_json::from_str(text)
            .map_err(|e| CliError::Param(format!("config is not valid JSON: {e}")))?;
        let Value::Object(mut fields) = value else {
            return Err(CliError::Param("config must be a JSON object".into()));
        };
        let named = match fields.get("command") {
            None => None,
            Some(Value::String(s)) => Some(s.parse::<Command>()?),
            Some(_) => return Err(CliError::field("command", "expected a string")),
        };
        let command = match (command, named) {
            (Some(a), Some(b)) if a != b => {
                return Err(CliError::field(
                    "command",
                    format!(
                        "config says `{}` but `{}` was requested",
                        b.name(),
                        a.name()
                    ),
                ))
            }
            (Some(a), _) | (None, Some(a)) => a,
            (None, None) => return Err(CliError::field("command", "missing")),
        };
        fields.insert("command".into(), Value::String(command.name().into()));
        let workers = match fields.remove("workers") {
            None => 1,
            Some(v) => v
                .as_u64()
                .filter(|&w| (1..=256).contains(&w))
                .ok_or_else(|| CliError::field("workers", "expected an integer in 1..=256"))?
                as usize,
        };
        fields.remove("out");
        Ok(ExperimentConfig {
            command,
            workers,
            fields,
        })
    }

    pub fn echo(&self) -> Value {
        Value::Object(self.fields.clone())
    }

    fn get(&self, name: &str) -> Option<&Value> {
        self.fields.get(name).filter(|v| !v.is_null())
    }

    pub fn has(&self, name: &str) -> bool {
        self.get(name).is_some()
    }

    pub fn u32(&self, name: &str) -> CliResult<u32> {
        self.opt_u32(name)?
            .ok_or_else(|| CliError::field(name, "missing"))
    }

    pub fn opt_u32(&self, name: &str) -> CliResult<Option<u32>> {
        self.get(name)
            .map(|v| {
                v.as_u64()
                    .and_then(|x| u32::try_from(x).ok())
                    .ok_or_else(|| CliError::field(name, "expected a non-negative integer"))
            })
            .transpose()
    }

    pub fn u32_or(&self, name: &str, default: u32) -> CliResult<u32> {
        Ok(self.opt_u32(name)?.unwrap_or(default))
    }

    pub fn positive(&self, name: &str) -> CliResult<u32> {
        match self.u32(name)? {
            0 => Err(CliError::field(name, "must be positive")),
            x => Ok(x),
        }
    }

    pub fn u64_or(&self, name: &str, default: u64) -> CliResult<u64> {
        self.get(name)
            .map(|v| {
                v.as_u64()
                    .ok_or_else(|| CliError::field(name, "expected a non-negative integer"))
            })
            .transpose()
            .map(|x| x.unwrap_or(default))
    }

    pub fn string(&self, name: &str) -> CliResult<String> {
        match self.get(name) {
            Some(Value::String(s)) => Ok(s.clone()),
            Some(_) => Err(CliError::field(name, "expected a string")),
            None => Err(CliError::field(name, "missing")),
        }
    }

    pub fn rational(&self, name: &str) -> CliResult<Q> {
        match self.get(name) {
            Some(v) => rational_value(name, v),
            None => Err(CliError::field(name, "missing")),
        }
    }

    pub fn rational_or(&self, name: &str, default: &str) -> CliResult<Q> {
        match self.get(name) {
            Some(v) => rational_value(name, v),
            None => Ok(parse_q(default).expect("default parses")),
        }
    }

    pub fn rationals(&self, name: &str) -> CliResult<Vec<Q>> {
        match self.get(name) {
            Some(Value::Array(a)) => a
                .iter()
                .enumerate()
                .map(|(i, v)| rational_value(&format!("{name}[{i}]"), v))
                .collect(),
            Some(_) => Err(CliError::field(
                name,
                "expected an array of \"p/q\" strings",
            )),
            None => Err(CliError::field(name, "missing")),
        }
    }

    pub fn rational_rows(&self, name: &str) -> CliResult<Vec<Vec<Q>>> {
        match self.get(name) {
            Some(Value::Array(rows)) => rows
                .iter()
                .enumerate()
                .map(|(i, row)| match row {
                    Value::Array(a) => a
                        .iter()
                        .enumerate()
                        .map(|(j, v)| rational_value(&format!("{name}[{i}][{j}]"), v))
                        .collect(),
                    _ => Err(CliError::field(
                        &format!("{name}[{i}]"),
                        "expected an array",
                    )),
                })
                .collect(),
            Some(_) => Err(CliError::field(name, "expected an array of arrays")),
            None => Err(CliError::field(name, "missing")),
        }
    }

    /// Deserializes a field with the library's own serde formats.
    pub fn parsed<T: DeserializeOwned>(&self, name: &str) -> CliResult<T> {
        let v = self
            .get(name)
            .ok_or_else(|| CliError::field(name, "missing"))?;
        serde_json::from_value(v.clone()).map_err(|e| CliError::field(name, e))
    }

    pub fn opt_parsed<T: DeserializeOwned>(&self, name: &str) -> CliResult<Option<T>> {
        if self.has(name) {
            self.parsed(name).map(Some)
        } else {
            Ok(None)
        }
    }

    /// A nested object read with the same accessors.
    pub fn section(&self, name: &str) -> CliResult<Option<ExperimentConfig>> {
        match self.get(name) {
            None => Ok(None),
            Some(Value::Object(m)) => Ok(Some(ExperimentConfig {
                command: self.command,
                workers: self.workers,
                fields: m.clone(),
            })),
            Some(_) => Err(CliError::field(name, "expected an object")),
        }
    }
}

fn rational_value(name: &str, v: &Value) -> CliResult<Q> {
    match v {
        Value::String(s) => parse_q(s).map_err(|e| CliError::field(name, e)),
        Value::Number(n) if n.is_i64() => Ok(Q::from_integer(n.as_i64().unwrap().into())),
        _ => Err(CliError::field(
            name,
            "expected a rational as a \"p/q\" string",
        )),
    }
}
