//! Particle files: a JSON array of `{"m", "x", "v"}` records or a CSV file
//! with header `m,x,v`. Values may be integers or strings holding an
//! integer, `p/q`, or a finite decimal. When `x` is absent from every
//! record, positions default to `1..=n`.

use std::path::Path;

use serde_json::Value;
use sticky_core::{rational_parse, Particle, ParticleSystem, Rational};

use crate::Failure;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// One record before validation, tagged with the line it starts on.
struct RawRecord {
    line: usize,
    m: Rational,
    x: Option<Rational>,
    v: Rational,
}

/// Reads and validates a particle file; the format defaults from the
/// extension (`.csv` is CSV, anything else JSON).
pub fn read_particle_file(path: &Path, format: Option<Format>) -> Result<ParticleSystem, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::parse(format!("cannot read {}: {e}", path.display())))?;
    let format = format.unwrap_or_else(|| match path.extension().and_then(|e| e.to_str()) {
        Some(ext) if ext.eq_ignore_ascii_case("csv") => Format::Csv,
        _ => Format::Json,
    });
    let records = match format {
        Format::Json => parse_json(&text)?,
        Format::Csv => parse_csv(&text)?,
    };
    build_system(records)
}

fn field(value: &Value, key: &str, line: usize) -> Result<Option<Rational>, Failure> {
    let Some(v) = value.get(key) else {
        return Ok(None);
    };
    let parsed = match v {
        Value::String(s) => rational_parse(s),
        Value::Number(n) if n.is_i64() || n.is_u64() => rational_parse(&n.to_string()),
        other => {
            return Err(Failure::parse(format!(
                "line {line}: field {key:?} must be an integer or a string, got {other}"
            )))
        }
    };
    parsed
        .map(Some)
        .map_err(|e| Failure::parse(format!("line {line}: field {key:?}: {e}")))
}

/// Line number of each top-level array element's opening brace.
fn object_start_lines(text: &str) -> Vec<usize> {
    let mut lines = Vec::new();
    let (mut line, mut depth, mut in_string, mut escaped) = (1, 0usize, false, false);
    for ch in text.chars() {
        if in_string {
            match ch {
                _ if escaped => escaped = false,
                '\\' => escaped = true,
                '"' => in_string = false,
                '\n' => line += 1,
                _ => {}
            }
            continue;
        }
        match ch {
            '"' => in_string = true,
            '\n' => line += 1,
            '[' | '{' => {
                if depth == 1 && ch == '{' {
                    lines.push(line);
                }
                depth += 1;
            }
            ']' | '}' => depth = depth.saturating_sub(1),
            _ => {}
        }
    }
    lines
}

fn parse_json(text: &str) -> Result<Vec<RawRecord>, Failure> {
    let value: Value =
        serde_json::from_str(text).map_err(|e| Failure::parse(format!("invalid JSON: {e}")))?;
    let Value::Array(items) = value else {
        return Err(Failure::parse("expected a JSON array of particle records"));
    };
    let lines = object_start_lines(text);
    items
        .iter()
        .enumerate()
        .map(|(i, item)| {
            let line = lines.get(i).copied().unwrap_or(0);
            if !item.is_object() {
                return Err(Failure::parse(format!("line {line}: record {} is not an object", i + 1)));
            }
            let require = |key: &str| -> Result<Rational, Failure> {
                field(item, key, line)?
                    .ok_or_else(|| Failure::parse(format!("line {line}: missing field {key:?}")))
            };
            Ok(RawRecord {
                line,
                m: require("m")?,
                x: field(item, "x", line)?,
                v: require("v")?,
            })
        })
        .collect()
}

fn parse_csv(text: &str) -> Result<Vec<RawRecord>, Failure> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| Failure::parse(format!("invalid CSV header: {e}")))?
        .clone();
    let column = |name: &str| headers.iter().position(|h| h == name);
    let (Some(m_col), Some(v_col)) = (column("m"), column("v")) else {
        return Err(Failure::parse("CSV header must contain columns m and v (and optionally x)"));
    };
    let x_col = column("x");

    let mut records = Vec::new();
    for row in reader.records() {
        let row = row.map_err(|e| Failure::parse(format!("invalid CSV: {e}")))?;
        let line = row.position().map(|p| p.line() as usize).unwrap_or(0);
        let cell = |col: usize, name: &str| -> Result<Rational, Failure> {
            let raw = row
                .get(col)
                .ok_or_else(|| Failure::parse(format!("line {line}: missing column {name:?}")))?;
            rational_parse(raw).map_err(|e| Failure::parse(format!("line {line}: column {name:?}: {e}")))
        };
        let x = match x_col {
            Some(col) if row.get(col).is_some_and(|s| !s.is_empty()) => Some(cell(col, "x")?),
            _ => None,
        };
        records.push(RawRecord {
            line,
            m: cell(m_col, "m")?,
            x,
            v: cell(v_col, "v")?,
        });
    }
    Ok(records)
}

fn build_system(records: Vec<RawRecord>) -> Result<ParticleSystem, Failure> {
    if records.is_empty() {
        return Err(Failure::invalid("the file contains no particles"));
    }
    let with_x = records.iter().filter(|r| r.x.is_some()).count();
    if with_x != 0 && with_x != records.len() {
        let line = records.iter().find(|r| r.x.is_none()).map(|r| r.line).unwrap_or(0);
        return Err(Failure::invalid(format!(
            "line {line}: position x is missing here but given elsewhere; give it everywhere or nowhere"
        )));
    }
    for (i, r) in records.iter().enumerate() {
        if !r.m.is_positive() {
            return Err(Failure::invalid(format!("line {}: mass must be positive, got {}", r.line, r.m)));
        }
        if i > 0 {
            if let (Some(prev), Some(cur)) = (&records[i - 1].x, &r.x) {
                if cur == prev {
                    return Err(Failure::invalid(format!(
                        "line {}: duplicate position {cur} (also on line {})",
                        r.line,
                        records[i - 1].line
                    )));
                }
                if cur < prev {
                    return Err(Failure::invalid(format!(
                        "line {}: position {cur} is left of the previous particle at {prev}; positions must increase",
                        r.line
                    )));
                }
            }
        }
    }
    let particles = records
        .into_iter()
        .enumerate()
        .map(|(i, r)| {
            let x = r.x.unwrap_or_else(|| Rational::from(i as i64 + 1));
            Particle::new(r.m, x, r.v)
        })
        .collect();
    ParticleSystem::new(particles).map_err(|e| Failure::invalid(e.to_string()))
}
