//! Text and JSON rendering of condition reports.

use reparam::{ConditionReport, Location, Verdict};
use serde_json::{json, Value};

/// One line per condition, ending in `OK`, `VACUOUS`, a violation with its
/// witness, or a consistency depth.
pub fn render_report(report: &ConditionReport) -> String {
    let mut out = String::new();
    for (c, v) in report.iter() {
        out.push_str(&format!("{c}: {v}\n"));
    }
    out
}

/// Machine-readable twin of the text report.
pub fn report_json(report: &ConditionReport) -> Value {
    let conditions: Vec<Value> = report
        .iter()
        .map(|(c, v)| {
            let mut entry = json!({ "id": c.label() });
            match v {
                Verdict::Satisfied => entry["verdict"] = json!("satisfied"),
                Verdict::Vacuous => entry["verdict"] = json!("vacuous"),
                Verdict::ConsistentUpToDepth(n) => {
                    entry["verdict"] = json!("consistent");
                    entry["depth"] = json!(n);
                }
                Verdict::Violated(w) => {
                    entry["verdict"] = json!("violated");
                    let mut witness = json!({
                        "quantity": w.quantity,
                        "actual": w.actual.to_string(),
                        "relation": w.relation.symbol(),
                        "required": w.required.to_string(),
                    });
                    match &w.location {
                        Some(Location::Interval(j)) => {
                            witness["interval"] =
                                json!([j.lo().to_string(), j.hi().to_string()]);
                        }
                        Some(Location::Cut(z)) => witness["cut"] = json!(z.to_string()),
                        None => {}
                    }
                    entry["witness"] = witness;
                }
            }
            entry
        })
        .collect();
    json!({ "ok": report.ok(), "conditions": conditions })
}
