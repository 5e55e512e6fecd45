//! JSON instance files.
//!
//! ```json
//! {"A": [[1,0,1],[0,1,1],[2,2,1]], "B": [[4,1],[1,4]], "p": [4,4,8], "c": 1, "r": "5"}
//! ```
//!
//! Numbers may be JSON integers, decimal strings or `"num/den"` strings.
//! Two optional keys carry a user resource game for the resource-game
//! commands: `"R"` maps coalition keys (`"12"`) to amounts and `"u"` is a
//! point of its core.

use serde_json::{Map, Value};

use crate::coalition::Coalition;
use crate::error::{Error, Result};
use crate::game::CharacteristicGame;
use crate::model::LppInstance;
use crate::rational::{format_rational, parse_rational, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceDocument {
    pub instance: LppInstance,
    pub resource_game: Option<CharacteristicGame>,
    pub core_point: Option<Vec<Rational>>,
}

fn number(value: &Value, field: &str) -> Result<Rational> {
    match value {
        Value::Number(num) => {
            if let Some(i) = num.as_i64() {
                Ok(Rational::from_integer(i.into()))
            } else if let Some(u) = num.as_u64() {
                Ok(Rational::from_integer(u.into()))
            } else {
                Err(Error::Parse(format!(
                    "{field}: {num} is a JSON float; write it as a decimal string such as \"{num}\""
                )))
            }
        }
        Value::String(s) => parse_rational(s).map_err(|e| Error::Parse(format!("{field}: {e}"))),
        other => Err(Error::Parse(format!("{field}: expected a number, found {other}"))),
    }
}

fn vector(value: &Value, field: &str) -> Result<Vec<Rational>> {
    let items = value
        .as_array()
        .ok_or_else(|| Error::Parse(format!("{field}: expected an array")))?;
    items
        .iter()
        .enumerate()
        .map(|(i, v)| number(v, &format!("{field}[{}]", i + 1)))
        .collect()
}

fn matrix(value: &Value, field: &str) -> Result<Vec<Vec<Rational>>> {
    let rows = value
        .as_array()
        .ok_or_else(|| Error::Parse(format!("{field}: expected an array of rows")))?;
    rows.iter()
        .enumerate()
        .map(|(i, row)| vector(row, &format!("{field}[{}]", i + 1)))
        .collect()
}

fn required<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Value> {
    obj.get(key)
        .ok_or_else(|| Error::Parse(format!("missing key {key:?}")))
}

pub fn parse_instance(text: &str) -> Result<InstanceDocument> {
    let root: Value = serde_json::from_str(text).map_err(|e| {
        Error::Parse(format!("line {}, column {}: {e}", e.line(), e.column()))
    })?;
    let obj = root
        .as_object()
        .ok_or_else(|| Error::Parse("top level must be a JSON object".into()))?;
    for key in obj.keys() {
        if !matches!(key.as_str(), "A" | "B" | "p" | "c" | "r" | "R" | "u") {
            return Err(Error::Parse(format!("unknown key {key:?}")));
        }
    }
    let a = matrix(required(obj, "A")?, "A")?;
    let b = matrix(required(obj, "B")?, "B")?;
    let p = vector(required(obj, "p")?, "p")?;
    let c = number(required(obj, "c")?, "c")?;
    let r = number(required(obj, "r")?, "r")?;
    let instance = LppInstance::new(a, b, p, c, r)?;
    let n = instance.n();
    let resource_game = match obj.get("R") {
        None => None,
        Some(v) => {
            let map = v
                .as_object()
                .ok_or_else(|| Error::Parse("R: expected an object keyed by coalition".into()))?;
            let mut worth = Vec::with_capacity(map.len());
            for (key, val) in map {
                let coalition = Coalition::parse_key(key, n)?;
                worth.push((coalition, number(val, &format!("R[{key}]"))?));
            }
            Some(CharacteristicGame::from_entries(n, worth)?)
        }
    };
    let core_point = match obj.get("u") {
        None => None,
        Some(v) => {
            let u = vector(v, "u")?;
            if u.len() != n {
                return Err(Error::Parse(format!("u: {} entries, expected n = {n}", u.len())));
            }
            Some(u)
        }
    };
    Ok(InstanceDocument {
        instance,
        resource_game,
        core_point,
    })
}

pub fn read_instance(path: &std::path::Path) -> Result<InstanceDocument> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    parse_instance(&text)
}

/// Integers stay JSON integers when they fit in `i64`; everything else is
/// written as an exact string.
pub fn rational_json(value: &Rational) -> Value {
    if value.is_integer() {
        if let Ok(i) = i64::try_from(value.numer().clone()) {
            return Value::from(i);
        }
    }
    Value::String(format_rational(value))
}

fn vector_json(values: &[Rational]) -> Value {
    Value::Array(values.iter().map(rational_json).collect())
}

pub fn instance_json(instance: &LppInstance) -> Value {
    let mut obj = Map::new();
    obj.insert(
        "A".into(),
        Value::Array(instance.a().iter().map(|r| vector_json(r)).collect()),
    );
    obj.insert(
        "B".into(),
        Value::Array(instance.b().iter().map(|r| vector_json(r)).collect()),
    );
    obj.insert("p".into(), vector_json(instance.prices()));
    obj.insert("c".into(), rational_json(instance.cost()));
    obj.insert("r".into(), rational_json(instance.stock()));
    Value::Object(obj)
}

pub fn document_json(doc: &InstanceDocument) -> Value {
    let mut value = instance_json(&doc.instance);
    let obj = value.as_object_mut().expect("instance json is an object");
    if let Some(game) = &doc.resource_game {
        obj.insert("R".into(), game.worth_json());
    }
    if let Some(u) = &doc.core_point {
        obj.insert("u".into(), vector_json(u));
    }
    value
}

/// Pretty-printed instance file text, newline terminated.
pub fn write_instance(instance: &LppInstance) -> String {
    let mut s = serde_json::to_string_pretty(&instance_json(instance)).expect("serializable");
    s.push('\n');
    s
}
