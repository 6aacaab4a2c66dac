use std::time::{SystemTime, UNIX_EPOCH};

use ptssh::tolerances;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub spectral: f64,
    pub residual: f64,
    pub positivity: f64,
    pub closed_form: f64,
    pub simple_gap: f64,
    pub ep_bisection: f64,
    pub condition_limit: f64,
    pub enclosure_slack: f64,
    pub emit_residual: f64,
}

impl Tolerances {
    pub fn current() -> Self {
        Self {
            spectral: tolerances::SPECTRAL,
            residual: tolerances::RESIDUAL,
            positivity: tolerances::POSITIVITY,
            closed_form: tolerances::CLOSED_FORM,
            simple_gap: tolerances::SIMPLE_GAP,
            ep_bisection: tolerances::EP_BISECTION,
            condition_limit: tolerances::CONDITION_LIMIT,
            enclosure_slack: tolerances::ENCLOSURE_SLACK,
            emit_residual: crate::EMIT_RESIDUAL,
        }
    }
}

/// Column layout of a CSV payload.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Schema {
    pub name: String,
    pub version: u32,
    pub columns: Vec<String>,
}

impl Schema {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Self {
            name: name.to_string(),
            version: 1,
            columns: columns.iter().map(|c| c.to_string()).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: serde_json::Value,
    pub library_version: String,
    pub tolerances: Tolerances,
    /// Seconds since the Unix epoch; `SOURCE_DATE_EPOCH` wins when set.
    pub timestamp: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub schema: Option<Schema>,
}

impl RunManifest {
    pub fn new<P: Serialize>(command: &str, parameters: &P) -> anyhow::Result<Self> {
        Ok(Self {
            command: command.to_string(),
            parameters: serde_json::to_value(parameters)?,
            library_version: env!("CARGO_PKG_VERSION").to_string(),
            tolerances: Tolerances::current(),
            timestamp: timestamp(),
            schema: None,
        })
    }

    pub fn with_schema(mut self, schema: Schema) -> Self {
        self.schema = Some(schema);
        self
    }
}

fn timestamp() -> u64 {
    std::env::var("SOURCE_DATE_EPOCH")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or_else(|| {
            SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0)
        })
}
