//! Small helpers for reading JSON payloads with precise error paths.

use num_bigint::BigInt;
use serde_json::{Map, Value};

use crate::error::{Error, Result};

pub fn object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| Error::schema(path, "expected an object"))
}

pub fn field<'a>(obj: &'a Map<String, Value>, key: &str, path: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| Error::schema(format!("{path}.{key}"), "missing field"))
}

pub fn array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| Error::schema(path, "expected an array"))
}

pub fn uint(v: &Value, path: &str) -> Result<u64> {
    match v {
        Value::Number(n) => n.as_u64().ok_or_else(|| Error::schema(path, "expected a non-negative integer")),
        Value::String(s) => s.trim().parse().map_err(|_| Error::schema(path, format!("bad integer `{s}`"))),
        _ => Err(Error::schema(path, "expected a non-negative integer")),
    }
}

pub fn usize_field(obj: &Map<String, Value>, key: &str, path: &str) -> Result<usize> {
    Ok(uint(field(obj, key, path)?, &format!("{path}.{key}"))? as usize)
}

/// An arbitrary-precision integer given as a decimal string or a JSON number.
pub fn bigint(v: &Value, path: &str) -> Result<BigInt> {
    match v {
        Value::String(s) => s.trim().parse().map_err(|_| Error::schema(path, format!("bad integer `{s}`"))),
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| Error::schema(path, "expected an integer")),
        _ => Err(Error::schema(path, "expected an integer string")),
    }
}

/// Reads {"rows", "cols", "entries"} and checks the shape.
pub fn matrix_shape<'a>(v: &'a Value, path: &str) -> Result<(usize, usize, Vec<&'a Vec<Value>>)> {
    let obj = object(v, path)?;
    let rows = usize_field(obj, "rows", path)?;
    let cols = usize_field(obj, "cols", path)?;
    let entries = array(field(obj, "entries", path)?, &format!("{path}.entries"))?;
    if entries.len() != rows {
        return Err(Error::schema(format!("{path}.entries"), format!("expected {rows} rows, found {}", entries.len())));
    }
    let mut out = Vec::with_capacity(rows);
    for (i, r) in entries.iter().enumerate() {
        let r = array(r, &format!("{path}.entries[{i}]"))?;
        if r.len() != cols {
            return Err(Error::schema(
                format!("{path}.entries[{i}]"),
                format!("expected {cols} entries, found {}", r.len()),
            ));
        }
        out.push(r);
    }
    Ok((rows, cols, out))
}
