//! Dotted-path addressing into JSON documents.
//!
//! Scenario and profile overrides (`--set key=value`) and sweep axes share
//! one addressing scheme: `link.distance_m`, `comm.p_lo_w`,
//! `coding.correctable_t`, `pipeline.mfcc.n_mel_bands`, ... Paths may index
//! arrays numerically (`processing.memory_levels.0.name`).

use serde_json::Value;

use crate::error::{Error, Result};

/// Looks up a path; `None` if any segment is missing.
pub fn get_path<'a>(root: &'a Value, path: &str) -> Option<&'a Value> {
    let mut current = root;
    for segment in path.split('.') {
        current = match current {
            Value::Object(map) => map.get(segment)?,
            Value::Array(items) => items.get(segment.parse::<usize>().ok()?)?,
            _ => return None,
        };
    }
    Some(current)
}

/// Sets a path, creating intermediate objects as needed. Array segments must
/// already exist.
pub fn set_path(root: &mut Value, path: &str, leaf: Value) -> Result<()> {
    let segments: Vec<&str> = path.split('.').collect();
    if segments.is_empty() || segments.iter().any(|s| s.is_empty()) {
        return Err(Error::config(path, "empty path segment"));
    }
    let mut current = root;
    for (i, segment) in segments.iter().enumerate() {
        let last = i + 1 == segments.len();
        match current {
            Value::Object(map) => {
                if last {
                    map.insert(segment.to_string(), leaf);
                    return Ok(());
                }
                current = map
                    .entry(segment.to_string())
                    .or_insert_with(|| Value::Object(Default::default()));
            }
            Value::Array(items) => {
                let index: usize = segment
                    .parse()
                    .map_err(|_| Error::config(path, format!("'{segment}' is not an array index")))?;
                let slot = items.get_mut(index).ok_or_else(|| {
                    Error::config(path, format!("array index {index} out of bounds"))
                })?;
                if last {
                    *slot = leaf;
                    return Ok(());
                }
                current = slot;
            }
            other => {
                return Err(Error::config(
                    path,
                    format!("cannot descend into non-container value {other}"),
                ))
            }
        }
    }
    unreachable!("loop returns on the last segment")
}

/// Parses an override value: JSON when it parses (numbers, booleans, quoted
/// strings, arrays), a bare string otherwise.
pub fn parse_override_value(raw: &str) -> Value {
    serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()))
}

/// Splits a `--set key=value` argument.
pub fn parse_assignment(raw: &str) -> Result<(String, Value)> {
    let (key, value) = raw
        .split_once('=')
        .ok_or_else(|| Error::config(raw, "expected key=value"))?;
    if key.trim().is_empty() {
        return Err(Error::config(raw, "empty key"));
    }
    Ok((key.trim().to_string(), parse_override_value(value.trim())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn get_and_set_nested() {
        let mut doc = json!({"link": {"distance_m": 10.0}});
        set_path(&mut doc, "link.distance_m", json!(20.0)).unwrap();
        assert_eq!(get_path(&doc, "link.distance_m"), Some(&json!(20.0)));
        set_path(&mut doc, "coding.correctable_t", json!(2)).unwrap();
        assert_eq!(get_path(&doc, "coding.correctable_t"), Some(&json!(2)));
        assert_eq!(get_path(&doc, "nope.deeper"), None);
    }

    #[test]
    fn set_into_array_by_index() {
        let mut doc = json!({"levels": [{"name": "a"}, {"name": "b"}]});
        set_path(&mut doc, "levels.1.name", json!("c")).unwrap();
        assert_eq!(get_path(&doc, "levels.1.name"), Some(&json!("c")));
        assert!(set_path(&mut doc, "levels.9.name", json!("x")).is_err());
    }

    #[test]
    fn assignment_parsing() {
        let (k, v) = parse_assignment("link.distance_m=20").unwrap();
        assert_eq!(k, "link.distance_m");
        assert_eq!(v, json!(20));
        let (_, v) = parse_assignment("sensing.mic_kind=passive").unwrap();
        assert_eq!(v, json!("passive"));
        let (_, v) = parse_assignment("comm.p_lo_w=\"22.5 mW\"").unwrap();
        assert_eq!(v, json!("22.5 mW"));
        assert!(parse_assignment("no-equals").is_err());
    }
}
