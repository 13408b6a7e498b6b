//! Canonical JSONL encoding of values, one event per line.
//!
//! The encoding is fixed so trace files are byte-stable across runs and
//! replayable from other tooling:
//! `{"t":"unit"}`, `{"t":"int","v":N}`, `{"t":"loc","v":N}`,
//! `{"t":"fun","v":N}`, `{"t":"sym","v":"name"}`,
//! `{"t":"pair","v":[enc,enc]}`.

use serde_json::{json, Value as Json};

use crate::lang::Value;

#[derive(Debug, thiserror::Error)]
pub enum TraceFileError {
    #[error("line {0}: {1}")]
    Malformed(usize, String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub fn value_to_json(v: &Value) -> Json {
    match v {
        Value::Unit => json!({"t": "unit"}),
        Value::Int(n) => json!({"t": "int", "v": n}),
        Value::Loc(l) => json!({"t": "loc", "v": l}),
        Value::Fun(f) => json!({"t": "fun", "v": f}),
        Value::Sym(s) => json!({"t": "sym", "v": s}),
        Value::Pair(a, b) => json!({"t": "pair", "v": [value_to_json(a), value_to_json(b)]}),
    }
}

/// One canonical line, no trailing newline. serde_json's map is ordered, so
/// `t` always precedes `v` and the output is byte-deterministic.
pub fn encode_value(v: &Value) -> String {
    value_to_json(v).to_string()
}

pub fn encode_trace(trace: &[Value]) -> String {
    let mut out = String::new();
    for v in trace {
        out.push_str(&encode_value(v));
        out.push('\n');
    }
    out
}

fn json_to_value(j: &Json) -> Result<Value, String> {
    let obj = j.as_object().ok_or("event is not an object")?;
    let tag = obj
        .get("t")
        .and_then(Json::as_str)
        .ok_or("missing string field \"t\"")?;
    let payload = obj.get("v");
    let need = |p: Option<&Json>| p.ok_or_else(|| format!("`{tag}` needs a \"v\" field"));
    match tag {
        "unit" => Ok(Value::Unit),
        "int" => need(payload)?
            .as_i64()
            .map(Value::Int)
            .ok_or_else(|| "int payload must be an i64".to_string()),
        "loc" => need(payload)?
            .as_u64()
            .map(Value::Loc)
            .ok_or_else(|| "loc payload must be a u64".to_string()),
        "fun" => need(payload)?
            .as_u64()
            .map(Value::Fun)
            .ok_or_else(|| "fun payload must be a u64".to_string()),
        "sym" => {
            let s = need(payload)?
                .as_str()
                .ok_or("sym payload must be a string")?;
            if s.is_empty() || !s.is_ascii() {
                return Err("sym payload must be a non-empty ASCII string".to_string());
            }
            Ok(Value::Sym(s.to_string()))
        }
        "pair" => {
            let arr = need(payload)?
                .as_array()
                .ok_or("pair payload must be an array")?;
            if arr.len() != 2 {
                return Err("pair payload must have exactly two elements".to_string());
            }
            Ok(Value::pair(json_to_value(&arr[0])?, json_to_value(&arr[1])?))
        }
        other => Err(format!("unknown event tag `{other}`")),
    }
}

pub fn decode_value(line: &str) -> Result<Value, TraceFileError> {
    let j: Json = serde_json::from_str(line)?;
    json_to_value(&j).map_err(|m| TraceFileError::Malformed(0, m))
}

/// Decode a whole trace file; blank lines are ignored.
pub fn decode_trace(text: &str) -> Result<Vec<Value>, TraceFileError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let j: Json =
            serde_json::from_str(line).map_err(|e| TraceFileError::Malformed(i + 1, e.to_string()))?;
        out.push(json_to_value(&j).map_err(|m| TraceFileError::Malformed(i + 1, m))?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn encoding_is_canonical() {
        let ev = Value::pair(Value::sym("pop"), Value::Int(7));
        assert_eq!(
            encode_value(&ev),
            r#"{"t":"pair","v":[{"t":"sym","v":"pop"},{"t":"int","v":7}]}"#
        );
        assert_eq!(encode_value(&Value::Unit), r#"{"t":"unit"}"#);
        assert_eq!(encode_value(&Value::Loc(3)), r#"{"t":"loc","v":3}"#);
    }

    #[test]
    fn decode_rejects_garbage() {
        assert!(decode_value(r#"{"t":"sym","v":""}"#).is_err());
        assert!(decode_value(r#"{"t":"pair","v":[{"t":"unit"}]}"#).is_err());
        assert!(decode_value(r#"{"t":"what"}"#).is_err());
        assert!(decode_trace("{\"t\":\"unit\"}\nnot json\n").is_err());
    }
}
