//! JSON scheme files.
//!
//! ```text
//! {
//!   "colors":  ["black", "white"],          // at least two distinct names
//!   "theta":   1,                           // declared balance, must match the rows
//!   "initial": [1, 1],
//!   "rows": [ ROW, ROW ]                    // one per color, in color order
//! }
//!
//! ROW   := {"table":   [{"add": [ints], "prob": RAT}, ...]}   joint law, listed outright
//!        | {"entries": [ENTRY, ...]}                          one entry per column,
//!                                                            independent, product law
//! ENTRY := int                                                fixed
//!        | "complement"                                       theta minus the rest (at most one)
//!        | {"deterministic": int}
//!        | {"bernoulli": RAT}
//!        | {"binomial": {"n": int, "p": RAT}}
//!        | {"uniform":  {"low": int, "high": int}}
//!        | {"table":    [{"value": int, "prob": RAT}, ...]}
//! RAT   := int | "a/b" | "a" | "0.25"
//! ```
//!
//! Coupled rows such as `(-1, B, 1-B)` are written with `"complement"` for the
//! last entry or as an explicit table.

use serde::Deserialize;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use urn_core::{
    parse_rational, Configuration, EntryDistribution, Invariant, Rational, ReplacementRow, RowEntry,
    UrnError, UrnScheme,
};

use crate::error::{CliError, Result};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScheme {
    colors: Vec<String>,
    theta: i64,
    initial: Vec<u64>,
    rows: Vec<RawRow>,
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
enum RawRow {
    Table(Vec<RawRealization>),
    Entries(Vec<Value>),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRealization {
    add: Vec<i64>,
    prob: Value,
}

fn invalid(context: impl Into<String>, message: impl Into<String>) -> CliError {
    CliError::Scheme {
        context: context.into(),
        source: Invariant::Other(message.into()).into(),
    }
}

fn rational(value: &Value, context: &str) -> Result<Rational> {
    match value {
        Value::Number(n) => match n.as_i64() {
            Some(i) => Ok(Rational::from_integer(i.into())),
            None => parse_rational(&n.to_string()).map_err(CliError::scheme(context)),
        },
        Value::String(s) => parse_rational(s).map_err(CliError::scheme(context)),
        other => Err(invalid(context, format!("expected a rational literal, found {other}"))),
    }
}

fn integer(value: &Value, context: &str) -> Result<i64> {
    value
        .as_i64()
        .ok_or_else(|| invalid(context, format!("expected an integer, found {value}")))
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str, context: &str) -> Result<&'a Value> {
    obj.get(key)
        .ok_or_else(|| invalid(context, format!("missing field {key:?}")))
}

fn entry(value: &Value, context: &str) -> Result<RowEntry> {
    let dist = |r: urn_core::Result<EntryDistribution>| {
        r.map(RowEntry::Random).map_err(CliError::scheme(context))
    };
    match value {
        Value::Number(_) => Ok(RowEntry::Fixed(integer(value, context)?)),
        Value::String(s) if s == "complement" => Ok(RowEntry::Complement),
        Value::Object(obj) if obj.len() == 1 => {
            let (kind, arg) = obj.iter().next().expect("one key");
            match kind.as_str() {
                "deterministic" => Ok(RowEntry::Fixed(integer(arg, context)?)),
                "bernoulli" => dist(EntryDistribution::bernoulli(rational(arg, context)?)),
                "binomial" => {
                    let obj = arg
                        .as_object()
                        .ok_or_else(|| invalid(context, "binomial takes {\"n\": .., \"p\": ..}"))?;
                    let n = integer(field(obj, "n", context)?, context)?;
                    let n = u64::try_from(n).map_err(|_| invalid(context, "binomial n must be >= 0"))?;
                    dist(EntryDistribution::binomial(n, rational(field(obj, "p", context)?, context)?))
                }
                "uniform" => {
                    let obj = arg
                        .as_object()
                        .ok_or_else(|| invalid(context, "uniform takes {\"low\": .., \"high\": ..}"))?;
                    let low = integer(field(obj, "low", context)?, context)?;
                    let high = integer(field(obj, "high", context)?, context)?;
                    dist(EntryDistribution::uniform(low, high))
                }
                "table" => {
                    let items = arg
                        .as_array()
                        .ok_or_else(|| invalid(context, "table takes a list of {value, prob}"))?;
                    let pairs = items
                        .iter()
                        .map(|item| {
                            let obj = item
                                .as_object()
                                .ok_or_else(|| invalid(context, "table items are {value, prob}"))?;
                            Ok((
                                integer(field(obj, "value", context)?, context)?,
                                rational(field(obj, "prob", context)?, context)?,
                            ))
                        })
                        .collect::<Result<Vec<_>>>()?;
                    dist(EntryDistribution::new(pairs))
                }
                other => Err(invalid(context, format!("unknown entry constructor {other:?}"))),
            }
        }
        other => Err(invalid(context, format!("unrecognized entry {other}"))),
    }
}

/// Parses a scheme document; `source_name` labels parse errors.
pub fn parse_scheme(text: &str, source_name: &str) -> Result<UrnScheme> {
    let raw: RawScheme = serde_json::from_str(text).map_err(|e| CliError::Parse {
        source_name: source_name.to_string(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    if raw.theta < 0 {
        return Err(CliError::Scheme {
            context: source_name.to_string(),
            source: UrnError::NegativeBalance(raw.theta),
        });
    }
    let rows = raw
        .rows
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let context = format!("{source_name}: rows[{i}]");
            match row {
                RawRow::Table(items) => {
                    let pairs = items
                        .iter()
                        .map(|r| Ok((r.add.clone(), rational(&r.prob, &context)?)))
                        .collect::<Result<Vec<_>>>()?;
                    ReplacementRow::table(pairs).map_err(CliError::scheme(context))
                }
                RawRow::Entries(values) => {
                    let entries = values
                        .iter()
                        .enumerate()
                        .map(|(j, v)| entry(v, &format!("{context}.entries[{j}]")))
                        .collect::<Result<Vec<_>>>()?;
                    ReplacementRow::from_entries(&entries, raw.theta).map_err(CliError::scheme(context))
                }
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let scheme = UrnScheme::new(raw.colors, rows, Configuration::new(raw.initial))
        .map_err(CliError::scheme(source_name))?;
    if scheme.theta() as i64 != raw.theta {
        return Err(CliError::Scheme {
            context: source_name.to_string(),
            source: Invariant::DeclaredBalance {
                declared: raw.theta,
                actual: scheme.theta() as i64,
            }
            .into(),
        });
    }
    Ok(scheme)
}

pub fn read_scheme(path: &std::path::Path) -> Result<UrnScheme> {
    let text = std::fs::read_to_string(path).map_err(CliError::io(path.display()))?;
    parse_scheme(&text, &path.display().to_string())
}

/// Every row as an explicit table; keys sorted, so the text is canonical.
pub fn to_json(scheme: &UrnScheme) -> Value {
    let rows: Vec<Value> = scheme
        .rows()
        .iter()
        .map(|row| {
            let table: Vec<Value> = row
                .realizations()
                .iter()
                .map(|(v, p)| json!({ "add": v, "prob": p.to_string() }))
                .collect();
            json!({ "table": table })
        })
        .collect();
    json!({
        "colors": scheme.colors(),
        "theta": scheme.theta(),
        "initial": scheme.initial().counts(),
        "rows": rows,
    })
}

/// First 16 hex digits of the SHA-256 of the canonical JSON.
pub fn scheme_hash(scheme: &UrnScheme) -> String {
    let digest = Sha256::digest(to_json(scheme).to_string().as_bytes());
    hex::encode(&digest[..8])
}
