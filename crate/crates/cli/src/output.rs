use std::fmt::Write;

use serde_json::Value;

use crate::args::OutputFormat;
use crate::record::RunRecord;

/// Text printed to stdout for a record in the requested format.
pub fn render(record: &RunRecord, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => serde_json::to_string(record).expect("records serialize"),
        OutputFormat::Csv => render_csv(record),
        OutputFormat::Plain => render_plain(record),
    }
}

fn field(v: &Value, path: &[&str]) -> Value {
    path.iter().fold(v.clone(), |acc, k| acc.get(k).cloned().unwrap_or(Value::Null))
}

fn render_plain(record: &RunRecord) -> String {
    let r = &record.results;
    match record.command.as_str() {
        "ved" => field(r, &["ved"]).to_string(),
        "ed-count" => field(r, &["modal_count"]).to_string(),
        "compare" => field(r, &["generic", "modal_count"]).to_string(),
        _ => render_csv(record),
    }
}

fn render_csv(record: &RunRecord) -> String {
    let r = &record.results;
    let mut out = String::new();
    match record.command.as_str() {
        "ved" => {
            out.push_str("n,ved,degs\n");
            let degs: Vec<String> =
                field(r, &["degs"]).as_array().map(|a| a.iter().map(Value::to_string).collect()).unwrap_or_default();
            let _ = write!(out, "{},{},{}", field(r, &["n"]), field(r, &["ved"]), degs.join(";"));
        }
        "ved-table" => {
            out.push_str("n,ved");
            for row in field(r, &["rows"]).as_array().into_iter().flatten() {
                let _ = write!(out, "\n{},{}", field(row, &["n"]), field(row, &["ved"]));
            }
        }
        "ed-count" => {
            out.push_str("trial,count,max_residual,paths_tracked");
            for t in field(r, &["trials"]).as_array().into_iter().flatten() {
                let _ = write!(
                    out,
                    "\n{},{},{},{}",
                    field(t, &["trial"]),
                    field(t, &["count"]),
                    field(t, &["max_residual"]),
                    field(t, &["paths_tracked"])
                );
            }
        }
        "compare" => {
            out.push_str("lane,trial,count");
            for lane in ["generic", "bombieri_weyl"] {
                for t in field(r, &[lane, "trials"]).as_array().into_iter().flatten() {
                    let _ = write!(out, "\n{lane},{},{}", field(t, &["trial"]), field(t, &["count"]));
                }
            }
        }
        other => {
            let _ = write!(out, "command\n{other}");
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use serde_json::json;
    use vedkit_core::Convention;

    use super::*;

    fn record(command: &str, results: Value) -> RunRecord {
        RunRecord::new(command, BTreeMap::new(), results, BTreeMap::new(), Convention::calibrated().unwrap())
    }

    #[test]
    fn plain_ved_is_one_integer() {
        let r = record("ved", json!({ "n": 3, "ved": 13, "degs": [3, 6, 10, 9, 3] }));
        assert_eq!(render(&r, OutputFormat::Plain), "13");
        assert_eq!(render(&r, OutputFormat::Csv), "n,ved,degs\n3,13,3;6;10;9;3");
    }

    #[test]
    fn table_csv() {
        let r = record("ved-table", json!({ "rows": [{ "n": 3, "ved": 13 }, { "n": 4, "ved": 122 }] }));
        assert_eq!(render(&r, OutputFormat::Csv), "n,ved\n3,13\n4,122");
    }

    #[test]
    fn json_is_one_line() {
        let r = record("ed-count", json!({ "modal_count": 13 }));
        let text = render(&r, OutputFormat::Json);
        assert!(!text.contains('\n'));
        assert_eq!(render(&r, OutputFormat::Plain), "13");
    }
}
