use serde::Serialize;
use serde_json::Value;

/// A machine-readable verification record.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub claim: String,
    pub parameters: Value,
    pub values: Value,
    pub verdict: String,
}

impl Report {
    pub fn new(
        claim: impl Into<String>,
        parameters: Value,
        values: Value,
        verdict: impl Into<String>,
    ) -> Self {
        Self {
            claim: claim.into(),
            parameters,
            values,
            verdict: verdict.into(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
