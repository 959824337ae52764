//! JSON instance files.
//!
//! ```json
//! {
//!   "attributes": [{"name": "sex", "values": ["F", "M"]}],
//!   "candidates": [{"name": "Ann", "values": ["F"]}],
//!   "target": {"sex": {"F": "1/2", "M": "0.5"}},
//!   "k": 1
//! }
//! ```
//!
//! Target shares are strings holding `p/q` or a decimal; JSON numbers are
//! rejected. Output always writes shares as reduced `p/q` (or integers),
//! so serializing a parsed file is stable.

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Attribute, AttributeSchema, CandidateDatabase, Instance, TargetDistribution};
use crate::rational;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AttributeEntry {
    name: String,
    values: Vec<String>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CandidateEntry {
    name: String,
    values: Vec<String>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceFile {
    attributes: Vec<AttributeEntry>,
    candidates: Vec<CandidateEntry>,
    target: IndexMap<String, IndexMap<String, String>>,
    k: usize,
}

fn at(location: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Parse {
        location: location.into(),
        message: message.into(),
    }
}

pub fn parse_instance(text: &str) -> Result<Instance> {
    let file: InstanceFile = serde_json::from_str(text).map_err(|e| {
        let message = e.to_string();
        let message = message
            .rsplit_once(" at line ")
            .map_or(message.as_str(), |(head, _)| head)
            .to_string();
        at(format!("line {} column {}", e.line(), e.column()), message)
    })?;

    let schema = AttributeSchema::new(
        file.attributes
            .iter()
            .map(|a| Attribute::new(a.name.clone(), a.values.iter().cloned()))
            .collect(),
    )
    .map_err(|e| at("attributes", e.to_string()))?;

    let rows = file.candidates.into_iter().map(|c| (c.name, c.values));
    let db = CandidateDatabase::from_labels(schema.clone(), rows).map_err(|e| at("candidates", e.to_string()))?;

    for name in file.target.keys() {
        if schema.attribute_index(name).is_none() {
            return Err(at(format!("target.{name}"), "unknown attribute"));
        }
    }
    let mut shares = Vec::with_capacity(schema.len());
    for attr in schema.attributes() {
        let entry = file
            .target
            .get(attr.name())
            .ok_or_else(|| at(format!("target.{}", attr.name()), "missing attribute"))?;
        for label in entry.keys() {
            if attr.value_index(label).is_none() {
                return Err(at(format!("target.{}.{label}", attr.name()), "unknown value"));
            }
        }
        let row = attr
            .values()
            .iter()
            .map(|label| {
                let path = format!("target.{}.{label}", attr.name());
                let text = entry.get(label).ok_or_else(|| at(&path, "missing value"))?;
                rational::parse(text).map_err(|e| at(&path, e.to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        shares.push(row);
    }
    let target = TargetDistribution::new(&schema, shares).map_err(|e| at("target", e.to_string()))?;
    Instance::new(db, target, file.k).map_err(|e| at("k", e.to_string()))
}

/// Pretty-printed JSON with a trailing newline.
pub fn to_json_string(instance: &Instance) -> String {
    let schema = instance.schema();
    let file = InstanceFile {
        attributes: schema
            .attributes()
            .iter()
            .map(|a| AttributeEntry {
                name: a.name().to_string(),
                values: a.values().to_vec(),
            })
            .collect(),
        candidates: instance
            .db()
            .candidates()
            .iter()
            .map(|c| CandidateEntry {
                name: c.name().to_string(),
                values: c
                    .values()
                    .iter()
                    .enumerate()
                    .map(|(i, &v)| schema.attribute(i).values()[v].clone())
                    .collect(),
            })
            .collect(),
        target: schema
            .attributes()
            .iter()
            .zip(instance.target().shares())
            .map(|(a, row)| {
                let values = a
                    .values()
                    .iter()
                    .zip(row)
                    .map(|(l, x)| (l.clone(), rational::format(x)))
                    .collect();
                (a.name().to_string(), values)
            })
            .collect(),
        k: instance.k(),
    };
    let mut out = serde_json::to_string_pretty(&file).expect("instance files always serialize");
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::catalog;
    use crate::rational::ratio;

    #[test]
    fn catalog_round_trips() {
        for entry in catalog::paper_instances() {
            let text = to_json_string(&entry.instance);
            let back = parse_instance(&text).unwrap();
            assert_eq!(back, entry.instance, "{}", entry.name);
            assert_eq!(to_json_string(&back), text);
        }
    }

    #[test]
    fn decimals_are_exact() {
        let text = r#"{
            "attributes": [{"name": "g", "values": ["A", "B", "C"]}],
            "candidates": [{"name": "x", "values": ["A"]}],
            "target": {"g": {"A": "0.55", "B": "1/4", "C": ".2"}},
            "k": 1
        }"#;
        let inst = parse_instance(text).unwrap();
        assert_eq!(inst.target().attribute(0), &[ratio(11, 20), ratio(1, 4), ratio(1, 5)]);
    }

    #[test]
    fn errors_carry_positions() {
        let err = parse_instance("{\n  \"attributes\": [,\n}").unwrap_err();
        let Error::Parse { location, .. } = err else {
            panic!("expected a parse error");
        };
        assert!(location.starts_with("line 2"), "{location}");

        let numbers = r#"{"attributes": [{"name": "g", "values": ["A", "B"]}],
            "candidates": [], "target": {"g": {"A": 0.5, "B": "1/2"}}, "k": 1}"#;
        assert!(matches!(parse_instance(numbers), Err(Error::Parse { .. })));

        let unknown = r#"{"attributes": [], "candidates": [], "target": {}, "k": 1, "extra": 0}"#;
        let err = parse_instance(unknown).unwrap_err().to_string();
        assert!(err.contains("extra"), "{err}");

        let bad_value = r#"{"attributes": [{"name": "g", "values": ["A", "B"]}],
            "candidates": [], "target": {"g": {"A": "1/2", "Z": "1/2"}}, "k": 1}"#;
        let err = parse_instance(bad_value).unwrap_err();
        assert_eq!(
            err,
            Error::Parse {
                location: "target.g.Z".into(),
                message: "unknown value".into()
            }
        );
    }
}
