use std::fmt;

use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;
use serde_json::value::RawValue;

use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    Pass,
    Fail,
    TolMiss,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::TolMiss => "tol-miss",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for Status {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

/// Outcome of one evaluation plan.
#[derive(Debug, Clone, PartialEq)]
pub struct PlanReport {
    pub method: String,
    pub value: f64,
    pub abs_error: f64,
    pub status: Status,
    /// Evaluator error, if the plan did not produce a usable value.
    pub reason: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub id: String,
    pub plans: Vec<PlanReport>,
    pub rhs_value: f64,
    pub abs_dev: f64,
    pub rel_dev: f64,
    pub status: Status,
    pub terms_used: u64,
    pub runtime_ms: f64,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn plan(&self, method: &str) -> Option<&PlanReport> {
        self.plans.iter().find(|p| p.method == method)
    }

    /// Reasons of the plans that did not pass.
    pub fn reasons(&self) -> Vec<String> {
        self.plans
            .iter()
            .filter(|p| p.status != Status::Pass)
            .map(|p| match &p.reason {
                Some(r) => format!("{} {}: {r}", p.method, p.status),
                None => format!(
                    "{} {}: deviation {:.3e}, error bar {:.3e}",
                    p.method,
                    p.status,
                    (p.value - self.rhs_value).abs(),
                    p.abs_error
                ),
            })
            .collect()
    }
}

/// 17 significant digits; non-finite values become `null`.
fn number(x: f64) -> Box<RawValue> {
    let text = if x.is_finite() { format!("{x:.16e}") } else { "null".to_string() };
    RawValue::from_string(text).expect("formatted float is valid JSON")
}

struct PlanJson<'a>(&'a PlanReport);

impl Serialize for PlanJson<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Plan", 3)?;
        st.serialize_field("method", &self.0.method)?;
        st.serialize_field("value", &number(self.0.value))?;
        st.serialize_field("abs_error", &number(self.0.abs_error))?;
        st.end()
    }
}

impl Serialize for VerificationReport {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let plans: Vec<PlanJson> = self.plans.iter().map(PlanJson).collect();
        let mut st = s.serialize_struct("VerificationReport", 8)?;
        st.serialize_field("id", &self.id)?;
        st.serialize_field("plans", &plans)?;
        st.serialize_field("rhs_value", &number(self.rhs_value))?;
        st.serialize_field("abs_dev", &number(self.abs_dev))?;
        st.serialize_field("rel_dev", &number(self.rel_dev))?;
        st.serialize_field("status", &self.status)?;
        st.serialize_field("terms_used", &self.terms_used)?;
        st.serialize_field("runtime_ms", &number(self.runtime_ms))?;
        st.end()
    }
}

/// JSON array of reports.
pub fn to_json(reports: &[VerificationReport]) -> String {
    serde_json::to_string_pretty(reports).expect("reports serialize")
}

fn cell(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        String::new()
    }
}

/// Flat CSV: plans are joined as `method=value±abs_error` separated by `;`.
pub fn to_csv(reports: &[VerificationReport]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| crate::Error::OutsideDomain(format!("csv: {e}"));
    w.write_record(["id", "plans", "rhs_value", "abs_dev", "rel_dev", "status", "terms_used", "runtime_ms"])
        .map_err(io)?;
    for r in reports {
        let plans: Vec<String> =
            r.plans.iter().map(|p| format!("{}={}±{}", p.method, cell(p.value), cell(p.abs_error))).collect();
        w.write_record([
            r.id.clone(),
            plans.join(";"),
            cell(r.rhs_value),
            cell(r.abs_dev),
            cell(r.rel_dev),
            r.status.to_string(),
            r.terms_used.to_string(),
            cell(r.runtime_ms),
        ])
        .map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| crate::Error::OutsideDomain(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> VerificationReport {
        VerificationReport {
            id: "X".into(),
            plans: vec![PlanReport {
                method: "series".into(),
                value: 0.1,
                abs_error: f64::NAN,
                status: Status::Fail,
                reason: Some("boom".into()),
            }],
            rhs_value: std::f64::consts::PI,
            abs_dev: 1e-12,
            rel_dev: 3e-13,
            status: Status::TolMiss,
            terms_used: 12,
            runtime_ms: 0.0,
        }
    }

    #[test]
    fn json_schema() {
        let text = to_json(&[sample()]);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        let obj = v[0].as_object().unwrap();
        let mut keys: Vec<&str> = obj.keys().map(|k| k.as_str()).collect();
        keys.sort();
        assert_eq!(keys, ["abs_dev", "id", "plans", "rel_dev", "rhs_value", "runtime_ms", "status", "terms_used"]);
        let plan = obj["plans"][0].as_object().unwrap();
        assert_eq!(plan.len(), 3);
        assert!(plan["abs_error"].is_null());
        assert_eq!(obj["status"], "tol-miss");
        assert_eq!(obj["rhs_value"].as_f64().unwrap(), std::f64::consts::PI);
        assert!(text.contains("3.1415926535897931e0"));
    }

    #[test]
    fn csv_columns() {
        let text = to_csv(&[sample()]).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "id,plans,rhs_value,abs_dev,rel_dev,status,terms_used,runtime_ms");
        assert!(lines.next().unwrap().starts_with("X,series=1.0000000000000001e-1±,"));
    }
}
