//! Simulation configs: JSON documents described by `schema/sim-config.schema.json`.

use std::path::Path;

use lindley_core::estimators::EstimatorKind;
use lindley_core::simulation::{ConfigIssue, EvalPoints};
use lindley_core::SimConfig;
use serde::de::DeserializeOwned;
use serde_json::Value;

use crate::error::{CliError, Result};

pub const SCHEMA: &str = include_str!("../schema/sim-config.schema.json");

const REQUIRED: [&str; 3] = ["theta0", "sample_sizes", "master_seed"];
const OPTIONAL: [&str; 3] = ["replications", "eval_points", "methods"];

fn issue(field: &str, message: impl Into<String>) -> ConfigIssue {
    ConfigIssue {
        field: field.into(),
        message: message.into(),
    }
}

fn check<T: DeserializeOwned>(obj: &serde_json::Map<String, Value>, field: &str, expected: &str, issues: &mut Vec<ConfigIssue>) {
    if let Some(v) = obj.get(field) {
        if serde_json::from_value::<T>(v.clone()).is_err() {
            issues.push(issue(field, format!("expected {expected}, got {v}")));
        }
    }
}

/// Parses and validates a config, reporting every offending field at once.
pub fn parse_config(text: &str) -> Result<SimConfig, Vec<ConfigIssue>> {
    let doc: Value = serde_json::from_str(text).map_err(|e| vec![issue("(document)", format!("not valid JSON: {e}"))])?;
    let Value::Object(obj) = &doc else {
        return Err(vec![issue("(document)", "expected a JSON object")]);
    };
    let mut issues = Vec::new();
    for key in obj.keys() {
        if !REQUIRED.contains(&key.as_str()) && !OPTIONAL.contains(&key.as_str()) {
            issues.push(issue(key, "unknown field"));
        }
    }
    for key in REQUIRED {
        if !obj.contains_key(key) {
            issues.push(issue(key, "missing required field"));
        }
    }
    check::<f64>(obj, "theta0", "a number", &mut issues);
    check::<Vec<usize>>(obj, "sample_sizes", "an array of non-negative integers", &mut issues);
    check::<u64>(obj, "master_seed", "an unsigned 64-bit integer", &mut issues);
    check::<usize>(obj, "replications", "a non-negative integer", &mut issues);
    check::<EvalPoints>(obj, "eval_points", r#"{"values": [...]} or {"quantiles": [...]}"#, &mut issues);
    let mut methods = Vec::new();
    match obj.get("methods") {
        Some(Value::Array(items)) => {
            for (i, m) in items.iter().enumerate() {
                match serde_json::from_value::<EstimatorKind>(m.clone()) {
                    Ok(k) => methods.push(k),
                    Err(_) => {
                        let names: Vec<_> = EstimatorKind::ALL.iter().map(|k| k.name()).collect();
                        issues.push(issue(&format!("methods[{i}]"), format!("unknown method {m}, expected one of {}", names.join(", "))));
                    }
                }
            }
        }
        Some(v) => issues.push(issue("methods", format!("expected an array of method names, got {v}"))),
        None => methods = EstimatorKind::ALL.to_vec(),
    }
    if issues.is_empty() {
        let cfg: SimConfig = serde_json::from_value(doc).map_err(|e| vec![issue("(document)", e.to_string())])?;
        cfg.validate()?;
        return Ok(cfg);
    }
    // Check the well-typed fields for range problems too, so that one run
    // reports everything.
    let mut partial = SimConfig::new(1.0, vec![2], 0);
    partial.methods = methods;
    fill(obj, "theta0", &mut partial.theta0);
    fill(obj, "sample_sizes", &mut partial.sample_sizes);
    fill(obj, "replications", &mut partial.replications);
    fill(obj, "eval_points", &mut partial.eval_points);
    if let Err(more) = partial.validate() {
        let flagged = |field: &str| issues.iter().any(|i| root(&i.field) == root(field));
        let fresh: Vec<_> = more.into_iter().filter(|i| !flagged(&i.field)).collect();
        issues.extend(fresh);
    }
    Err(issues)
}

fn root(field: &str) -> &str {
    field.split(['.', '[']).next().unwrap_or(field)
}

fn fill<T: DeserializeOwned>(obj: &serde_json::Map<String, Value>, field: &str, slot: &mut T) {
    if let Some(v) = obj.get(field).and_then(|v| serde_json::from_value(v.clone()).ok()) {
        *slot = v;
    }
}

pub fn load_config(path: &Path) -> Result<SimConfig> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_owned(),
        source,
    })?;
    parse_config(&text).map_err(CliError::Schema)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fields(text: &str) -> Vec<String> {
        parse_config(text).unwrap_err().into_iter().map(|i| i.field).collect()
    }

    #[test]
    fn minimal_config() {
        let cfg = parse_config(r#"{"theta0": 1, "sample_sizes": [10], "master_seed": 3}"#).unwrap();
        assert_eq!(cfg.replications, 1000);
        assert_eq!(cfg.methods.len(), 7);
    }

    #[test]
    fn every_bad_field_is_listed() {
        let f = fields(r#"{"theta0": "one", "sample_sizes": [1.5], "replication": 3, "methods": ["MLE", "BAYES"]}"#);
        for want in ["replication", "master_seed", "theta0", "sample_sizes", "methods[1]"] {
            assert!(f.iter().any(|x| x == want), "{want} not in {f:?}");
        }
    }

    #[test]
    fn range_problems_are_reported_next_to_type_problems() {
        let issues = parse_config(r#"{"theta0": 1, "sample_sizes": [1], "master_seed": 1, "methods": ["UMVUE", "FOO"]}"#).unwrap_err();
        let f: Vec<_> = issues.iter().map(|i| i.field.as_str()).collect();
        assert_eq!(f, vec!["methods[1]", "sample_sizes"]);
        assert!(issues[1].message.contains("UMVUE"));
    }

    #[test]
    fn semantic_issues_follow_type_checks() {
        let f = fields(r#"{"theta0": -1, "sample_sizes": [1], "master_seed": 0, "replications": 0}"#);
        assert_eq!(f, vec!["theta0", "sample_sizes", "replications"]);
        assert!(fields("[1, 2]") == vec!["(document)"]);
        assert!(fields("{").iter().all(|x| x == "(document)"));
    }

    #[test]
    fn schema_lists_the_accepted_fields() {
        let schema: Value = serde_json::from_str(SCHEMA).unwrap();
        let props = schema["properties"].as_object().unwrap();
        let mut keys: Vec<_> = props.keys().map(String::as_str).collect();
        keys.sort_unstable();
        let mut known: Vec<_> = REQUIRED.iter().chain(OPTIONAL.iter()).copied().collect();
        known.sort_unstable();
        assert_eq!(keys, known);
        let required: Vec<_> = schema["required"].as_array().unwrap().iter().map(|v| v.as_str().unwrap()).collect();
        assert_eq!(required, REQUIRED);
        assert_eq!(schema["additionalProperties"], Value::Bool(false));
    }
}
