//! Run reports: one JSON record per grid point, then a summary record.

use std::fmt::Write as _;
use std::time::Duration;

use serde::Serialize;
use serde_json::Value;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Equal,
    Mismatch,
    Skipped,
    Error,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Equal => "equal",
            Status::Mismatch => "mismatch",
            Status::Skipped => "skipped",
            Status::Error => "error",
        }
    }
}

/// Wall times in microseconds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Timings {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closed_form_us: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_us: Option<u64>,
    pub total_us: u64,
}

pub fn micros(d: Duration) -> u64 {
    d.as_micros().try_into().unwrap_or(u64::MAX)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointRecord {
    pub index: usize,
    pub trial: usize,
    pub params: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spec: Option<Value>,
    pub verdict: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub det_closed_form: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub det_oracle: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    /// Only serialized when timings were requested.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time: Option<Timings>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub equal: usize,
    pub mismatch: usize,
    pub skipped: usize,
    pub error: usize,
}

impl Summary {
    pub fn tally(records: &[PointRecord]) -> Self {
        let mut s = Summary {
            total: records.len(),
            ..Summary::default()
        };
        for r in records {
            match r.verdict {
                Status::Equal => s.equal += 1,
                Status::Mismatch => s.mismatch += 1,
                Status::Skipped => s.skipped += 1,
                Status::Error => s.error += 1,
            }
        }
        s
    }

    pub fn passed(&self) -> bool {
        self.mismatch == 0 && self.error == 0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
struct SummaryRecord<'a> {
    command: &'a str,
    family: &'a str,
    version: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    summary: Summary,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub command: String,
    pub family: String,
    pub seed: Option<u64>,
    pub records: Vec<PointRecord>,
    pub summary: Summary,
}

impl RunReport {
    pub fn new(command: &str, family: &str, seed: Option<u64>, records: Vec<PointRecord>) -> Self {
        let summary = Summary::tally(&records);
        RunReport {
            command: command.to_string(),
            family: family.to_string(),
            seed,
            records,
            summary,
        }
    }

    /// Line-delimited JSON; the last line is the summary.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&serde_json::to_string(r).expect("records serialize"));
            out.push('\n');
        }
        let tail = SummaryRecord {
            command: &self.command,
            family: &self.family,
            version: VERSION,
            seed: self.seed,
            summary: self.summary,
        };
        out.push_str(&serde_json::to_string(&tail).expect("summary serializes"));
        out.push('\n');
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            let _ = write!(out, "#{:<4} {} [trial {}] {}", r.index, r.params, r.trial, r.verdict.as_str());
            match (&r.det_closed_form, &r.det_oracle, &r.reason) {
                (_, _, Some(reason)) => {
                    let _ = write!(out, ": {reason}");
                }
                (Some(cf), Some(or), None) if r.verdict == Status::Mismatch => {
                    let _ = write!(out, ": closed form {cf}, oracle {or}");
                }
                (Some(cf), _, None) => {
                    let _ = write!(out, ": {cf}");
                }
                _ => {}
            }
            if let Some(t) = r.wall_time {
                let _ = write!(out, " ({} us)", t.total_us);
            }
            out.push('\n');
        }
        out.push_str(&self.summary_line());
        out.push('\n');
        out
    }

    pub fn summary_line(&self) -> String {
        let s = &self.summary;
        let mut line = format!(
            "{} {}: {} points, {} equal, {} mismatch, {} skipped, {} error",
            self.command, self.family, s.total, s.equal, s.mismatch, s.skipped, s.error
        );
        if let Some(seed) = self.seed {
            let _ = write!(line, " (seed {seed})");
        }
        line
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(index: usize, verdict: Status) -> PointRecord {
        PointRecord {
            index,
            trial: 0,
            params: "m=1".into(),
            spec: None,
            verdict,
            det_closed_form: Some("1".into()),
            det_oracle: Some("1".into()),
            reason: None,
            wall_time: None,
        }
    }

    #[test]
    fn summary_matches_records() {
        let records = vec![
            record(0, Status::Equal),
            record(1, Status::Skipped),
            record(2, Status::Mismatch),
            record(3, Status::Equal),
        ];
        let report = RunReport::new("verify", "power-derivative", Some(1), records);
        assert_eq!(
            report.summary,
            Summary {
                total: 4,
                equal: 2,
                mismatch: 1,
                skipped: 1,
                error: 0
            }
        );
        assert!(!report.summary.passed());
        let text = report.to_jsonl();
        assert_eq!(text.lines().count(), 5);
        let last: Value = serde_json::from_str(text.lines().last().unwrap()).unwrap();
        assert_eq!(last["summary"]["equal"], 2);
        assert_eq!(last["version"], VERSION);
    }

    #[test]
    fn skipped_points_do_not_fail() {
        let report = RunReport::new("verify", "f", None, vec![record(0, Status::Skipped)]);
        assert!(report.summary.passed());
    }

    #[test]
    fn timings_only_when_present() {
        let mut r = record(0, Status::Equal);
        assert!(!serde_json::to_string(&r).unwrap().contains("wall_time"));
        r.wall_time = Some(Timings {
            closed_form_us: Some(1),
            oracle_us: Some(2),
            total_us: 3,
        });
        assert!(serde_json::to_string(&r).unwrap().contains("\"oracle_us\":2"));
    }
}
