//! Machine-readable verification reports.

use serde::{Deserialize, Serialize};

use crate::error::Result;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Entry {
    pub check_id: String,
    pub status: Status,
    pub detail: String,
}

impl Entry {
    pub fn check(check_id: impl Into<String>, ok: bool, detail: impl Into<String>) -> Self {
        Entry {
            check_id: check_id.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            detail: detail.into(),
        }
    }

    /// Pass/fail from the boolean, or `error` carrying the message.
    pub fn from_result(check_id: impl Into<String>, r: Result<bool>, detail: impl Into<String>) -> Self {
        match r {
            Ok(ok) => Self::check(check_id, ok, detail),
            Err(e) => Entry { check_id: check_id.into(), status: Status::Error, detail: e.to_string() },
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// Echo of the run parameters, recorded verbatim in every report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: String,
    pub seed: u64,
    pub samples: usize,
    pub input: Option<String>,
    pub output: Option<String>,
    pub level: Option<u32>,
    pub format_version: u32,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub error: usize,
    pub total: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub format_version: u32,
    pub tool_version: String,
    pub config: RunConfig,
    pub entries: Vec<Entry>,
    pub summary: Summary,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub result: Option<serde_json::Value>,
}

impl Report {
    /// Sorts entries by `check_id` and tallies them.
    pub fn new(config: RunConfig, mut entries: Vec<Entry>, result: Option<serde_json::Value>) -> Self {
        entries.sort_by(|a, b| a.check_id.cmp(&b.check_id));
        let mut summary = Summary { total: entries.len(), ..Summary::default() };
        for e in &entries {
            match e.status {
                Status::Pass => summary.pass += 1,
                Status::Fail => summary.fail += 1,
                Status::Error => summary.error += 1,
            }
        }
        Report {
            format_version: FORMAT_VERSION,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            config,
            entries,
            summary,
            result,
        }
    }

    pub fn all_passed(&self) -> bool {
        self.summary.fail == 0 && self.summary.error == 0
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    #[test]
    fn summary_and_order() {
        let cfg = RunConfig {
            command: "suite".into(),
            seed: 1,
            samples: 2,
            input: None,
            output: None,
            level: None,
            format_version: FORMAT_VERSION,
        };
        let r = Report::new(
            cfg,
            vec![
                Entry::check("b", true, ""),
                Entry::check("a", false, "x"),
                Entry::from_result("c", Err(Error::Singular), ""),
            ],
            None,
        );
        let ids: Vec<_> = r.entries.iter().map(|e| e.check_id.as_str()).collect();
        assert_eq!(ids, ["a", "b", "c"]);
        assert_eq!(r.summary, Summary { pass: 1, fail: 1, error: 1, total: 3 });
        assert!(!r.all_passed());
        let back: Report = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
    }
}
