use std::fmt::Write as _;
use std::io::Write;

use indexmap::IndexSet;

use crate::error::{Error, Result};
use crate::finder::{select_best, TrialRecord};

/// Write one CSV row per trial: the fixed columns, then one column per
/// sampled name (union across trials in first-seen order, blank where a
/// trial did not sample it).
pub fn write_report<W: Write>(records: &[TrialRecord], out: W) -> Result<()> {
    let names: IndexSet<&str> = records
        .iter()
        .flat_map(|r| r.sampled.keys().map(String::as_str))
        .collect();
    let mut w = csv::Writer::from_writer(out);
    let csv_err = |e: csv::Error| Error::Data(e.to_string());
    let mut header = vec!["trial_id", "status", "feasible", "mean_score", "total_calls"];
    header.extend(names.iter());
    w.write_record(&header).map_err(csv_err)?;
    for r in records {
        let mut row = vec![
            r.trial_id.to_string(),
            serde_json::to_value(r.status)?.as_str().unwrap_or_default().to_string(),
            r.feasible.to_string(),
            r.mean_score.map(|s| s.to_string()).unwrap_or_default(),
            r.total_calls.to_string(),
        ];
        row.extend(
            names
                .iter()
                .map(|n| r.sampled.get(*n).map(|v| v.to_string()).unwrap_or_default()),
        );
        w.write_record(&row).map_err(csv_err)?;
    }
    w.flush().map_err(|e| Error::Data(e.to_string()))
}

/// Human-readable summary naming the trial `find_model` would select.
pub fn summarize(records: &[TrialRecord]) -> String {
    let complete = records.iter().filter(|r| r.is_complete()).count();
    let feasible = records.iter().filter(|r| r.is_complete() && r.feasible).count();
    let mut s = format!(
        "{} trials: {complete} complete, {} failed, {feasible} feasible\n",
        records.len(),
        records.len() - complete
    );
    match select_best(records) {
        Some(sel) => {
            let r = &records[sel.index];
            let _ = writeln!(
                s,
                "best trial {} ({}): mean_score {}, total_calls {}",
                r.trial_id,
                if sel.feasible { "feasible" } else { "infeasible-best" },
                r.mean_score.unwrap_or(f64::NAN),
                r.total_calls
            );
            for (k, v) in &r.sampled {
                let _ = writeln!(s, "  {k} = {v}");
            }
        }
        None => s.push_str("no complete trial\n"),
    }
    s
}
