use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const FORMAT: &str = "actomega-report";
pub const VERSION: u32 = 1;

/// The single document printed by `--format structured`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Document {
    pub format: String,
    pub version: u32,
    pub command: String,
    pub status: Status,
    pub result: Value,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    /// A definite answer.
    Ok,
    /// Budgets ran out before an answer.
    Unknown,
    /// The command ran but its check did not pass.
    Failed,
}

impl Status {
    pub fn exit_code(self) -> u8 {
        match self {
            Status::Ok => 0,
            Status::Failed => 1,
            Status::Unknown => 2,
        }
    }
}

/// What a subcommand produced, in both renderings.
pub struct Outcome {
    pub status: Status,
    pub human: String,
    pub result: Value,
}

impl Outcome {
    pub fn ok(human: impl Into<String>, result: Value) -> Self {
        Outcome { status: Status::Ok, human: human.into(), result }
    }

    pub fn document(&self, command: &str) -> Document {
        Document {
            format: FORMAT.into(),
            version: VERSION,
            command: command.into(),
            status: self.status,
            result: self.result.clone(),
        }
    }
}
