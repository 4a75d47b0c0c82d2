//! JSON and CSV report writers sharing one number formatter.
//!
//! Floats are written with 17 significant digits in exponent form and
//! non-finite values as `null`, so a JSON and a CSV of the same run carry
//! identical numeric strings.

use hspec::verify::{CheckKind, Param, VerificationReport};
use std::collections::BTreeMap;
use std::fmt::Write as _;

/// A complete run: the command, its parameters and its reports.
#[derive(Debug, Clone)]
pub struct RunOutput<'a> {
    pub version: &'a str,
    pub command: &'a str,
    pub params: &'a BTreeMap<String, Param>,
    pub results: &'a [VerificationReport],
    pub runtime_ms: u64,
}

pub fn number(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        "null".to_string()
    }
}

pub fn param_string(p: &Param) -> String {
    match p {
        Param::Int(i) => i.to_string(),
        Param::Num(x) => number(*x),
        Param::Text(s) => s.clone(),
    }
}

fn quote(s: &str) -> String {
    serde_json::to_string(s).expect("strings always serialize")
}

fn json_param(p: &Param) -> String {
    match p {
        Param::Text(s) => quote(s),
        other => param_string(other),
    }
}

fn kind_name(k: CheckKind) -> &'static str {
    match k {
        CheckKind::Bound => "bound",
        CheckKind::StrictBound => "strict_bound",
        CheckKind::Residual => "residual",
        CheckKind::Value => "value",
    }
}

fn json_object<V>(map: &BTreeMap<String, V>, fmt: impl Fn(&V) -> String) -> String {
    let body: Vec<String> = map.iter().map(|(k, v)| format!("{}: {}", quote(k), fmt(v))).collect();
    format!("{{{}}}", body.join(", "))
}

pub fn to_json(run: &RunOutput) -> String {
    let mut s = String::new();
    s.push_str("{\n");
    let _ = writeln!(s, "  \"version\": {},", quote(run.version));
    let _ = writeln!(s, "  \"command\": {},", quote(run.command));
    let _ = writeln!(s, "  \"params\": {},", json_object(run.params, json_param));
    s.push_str("  \"results\": [");
    for (i, r) in run.results.iter().enumerate() {
        s.push_str(if i == 0 { "\n" } else { ",\n" });
        s.push_str("    {\n");
        let _ = writeln!(s, "      \"name\": {},", quote(&r.name));
        let _ = writeln!(s, "      \"kind\": {},", quote(kind_name(r.kind)));
        let _ = writeln!(s, "      \"params\": {},", json_object(&r.params, json_param));
        let _ = writeln!(s, "      \"measured\": {},", number(r.measured));
        let _ = writeln!(s, "      \"bound\": {},", number(r.bound));
        let _ = writeln!(s, "      \"tolerance\": {},", number(r.tolerance));
        let _ = writeln!(s, "      \"margin\": {},", number(r.margin));
        let _ = writeln!(s, "      \"pass\": {},", r.pass);
        let _ = writeln!(s, "      \"residuals\": {},", json_object(&r.residuals, |x| number(*x)));
        let _ = writeln!(s, "      \"gates\": {},", json_object(&r.gates, |x| number(*x)));
        let _ = writeln!(s, "      \"runtime_ms\": {}", r.runtime_ms);
        s.push_str("    }");
    }
    s.push_str(if run.results.is_empty() { "],\n" } else { "\n  ],\n" });
    let _ = writeln!(s, "  \"runtime_ms\": {}", run.runtime_ms);
    s.push_str("}\n");
    s
}

fn flat<V>(map: &BTreeMap<String, V>, fmt: impl Fn(&V) -> String) -> String {
    map.iter().map(|(k, v)| format!("{k}={}", fmt(v))).collect::<Vec<_>>().join(";")
}

pub const CSV_HEADER: [&str; 13] = [
    "version",
    "command",
    "name",
    "kind",
    "measured",
    "bound",
    "tolerance",
    "margin",
    "pass",
    "params",
    "residuals",
    "gates",
    "runtime_ms",
];

pub fn to_csv(run: &RunOutput) -> csv::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER)?;
    for r in run.results {
        let mut params = run.params.clone();
        params.extend(r.params.iter().map(|(k, v)| (k.clone(), v.clone())));
        w.write_record([
            run.version.to_string(),
            run.command.to_string(),
            r.name.clone(),
            kind_name(r.kind).to_string(),
            number(r.measured),
            number(r.bound),
            number(r.tolerance),
            number(r.margin),
            r.pass.to_string(),
            flat(&params, param_string),
            flat(&r.residuals, |x| number(*x)),
            flat(&r.gates, |x| number(*x)),
            r.runtime_ms.to_string(),
        ])?;
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv of utf-8 fields is utf-8"))
}
