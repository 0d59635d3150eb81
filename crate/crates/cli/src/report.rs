use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const SCHEMA: &str = "asphera-report/1";

/// Everything a command emits. Identical inputs give identical reports
/// unless `wall_time_ms` was requested.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub version: String,
    pub command: Vec<String>,
    pub inputs: Value,
    pub outputs: Value,
    pub wall_time_ms: Option<u64>,
}

impl Report {
    pub fn new(command: Vec<String>, inputs: Value, outputs: Value) -> Self {
        Report {
            schema: SCHEMA.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            command,
            inputs,
            outputs,
            wall_time_ms: None,
        }
    }
}

/// One expected-vs-computed line of a reproduction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub expected: Value,
    pub computed: Value,
    pub pass: bool,
}

#[derive(Debug, Default)]
pub struct Checks(pub Vec<Check>);

impl Checks {
    pub fn push(&mut self, name: &str, expected: impl Serialize, computed: impl Serialize) {
        let expected = serde_json::to_value(expected).expect("serializable");
        let computed = serde_json::to_value(computed).expect("serializable");
        let pass = expected == computed;
        self.0.push(Check {
            name: name.to_string(),
            expected,
            computed,
            pass,
        });
    }

    pub fn all_pass(&self) -> bool {
        self.0.iter().all(|c| c.pass)
    }
}
