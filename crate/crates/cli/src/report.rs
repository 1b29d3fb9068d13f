use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const SCHEMA: u32 = 1;

/// The JSON document every subcommand emits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub schema: u32,
    pub command: String,
    pub parameters: Value,
    pub result: Value,
    pub elapsed_us: u64,
}

impl Report {
    pub fn new(command: &str, parameters: Value, result: Value, elapsed_us: u64) -> Self {
        Report {
            tool: "kbraid".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            schema: SCHEMA,
            command: command.into(),
            parameters,
            result,
            elapsed_us,
        }
    }

    /// Pretty JSON with every object's keys sorted, so re-serializing a
    /// parsed report reproduces it exactly.
    pub fn to_pretty(&self) -> String {
        let value = serde_json::to_value(self).expect("report is serializable");
        let mut s = serde_json::to_string_pretty(&value).expect("value is serializable");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn round_trip_is_byte_identical() {
        let r = Report::new(
            "gnk reduce",
            json!({"n": 3, "k": 2, "word": "a{1,2} a{1,2}"}),
            json!({"reduced": "e", "lengths": [2, 0], "nested": {"z": 1, "a": 2.5}}),
            1234,
        );
        let text = r.to_pretty();
        let back: Report = serde_json::from_str(&text).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.to_pretty(), text);
        let value: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(serde_json::to_string_pretty(&value).unwrap() + "\n", text);
    }
}
