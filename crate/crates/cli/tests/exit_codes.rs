use detident_cli::report::{PointRecord, RunReport, Status};
use detident_cli::Outcome;

fn record(index: usize, verdict: Status) -> PointRecord {
    PointRecord {
        index,
        trial: 0,
        params: "m=1".into(),
        spec: None,
        verdict,
        det_closed_form: Some("1".into()),
        det_oracle: Some("2".into()),
        reason: None,
        wall_time: None,
    }
}

fn outcome(records: Vec<PointRecord>) -> Outcome {
    let report = RunReport::new("bench", "power-derivative", Some(0), records);
    Outcome {
        body: report.to_jsonl(),
        summary: report.summary_line(),
        passed: report.summary.passed(),
    }
}

#[test]
fn mismatch_fails_the_run() {
    assert_eq!(outcome(vec![record(0, Status::Equal), record(1, Status::Mismatch)]).exit_code(), 1);
    assert_eq!(outcome(vec![record(0, Status::Error)]).exit_code(), 1);
}

#[test]
fn skipped_points_never_mask_failures() {
    assert_eq!(outcome(vec![record(0, Status::Skipped), record(1, Status::Equal)]).exit_code(), 0);
    assert_eq!(outcome(vec![record(0, Status::Skipped), record(1, Status::Mismatch)]).exit_code(), 1);
}
