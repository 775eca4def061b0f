//! JSON form of a compact set:
//!
//! ```json
//! { "regions": [[[0,0],[1,0],[1,1]]], "holes": [[]], "chains": [[[2,0],[3,0]]] }
//! ```
//!
//! `holes[i]` lists the holes of `regions[i]` and may be omitted. A chain
//! with a single point is an isolated point.

use std::fmt::Write as _;
use std::path::Path;

use serde_json::Value;

use super::{Chain, CompactSet, Point, Region, Ring};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

fn parse_point<T: Scalar>(v: &Value, field: &str) -> Result<Point<T>> {
    let pair = v
        .as_array()
        .filter(|a| a.len() == 2)
        .ok_or_else(|| Error::parse(field, "expected an [x, y] pair"))?;
    let coord = |k: usize| -> Result<T> {
        let x = pair[k]
            .as_f64()
            .ok_or_else(|| Error::parse(field, "coordinates must be numbers"))?;
        if !x.is_finite() {
            return Err(Error::parse(field, "coordinates must be finite"));
        }
        Ok(T::lit(x))
    };
    Ok(Point::new(coord(0)?, coord(1)?))
}

fn parse_points<T: Scalar>(v: &Value, field: &str) -> Result<Vec<Point<T>>> {
    let arr = v
        .as_array()
        .ok_or_else(|| Error::parse(field, "expected a list of points"))?;
    arr.iter()
        .enumerate()
        .map(|(i, p)| parse_point(p, &format!("{field}[{i}]")))
        .collect()
}

fn parse_ring<T: Scalar>(v: &Value, field: &str) -> Result<Ring<T>> {
    let pts = parse_points(v, field)?;
    Ring::new(pts).map_err(|e| Error::parse(field, e.to_string()))
}

fn list<'a>(doc: &'a Value, key: &str) -> Result<&'a [Value]> {
    match doc.get(key) {
        None | Some(Value::Null) => Ok(&[]),
        Some(Value::Array(a)) => Ok(a),
        Some(_) => Err(Error::parse(key, "expected a list")),
    }
}

/// Parses and validates a set. Errors name the offending field, e.g.
/// `regions[0][3]`.
pub fn set_from_json<T: Scalar>(text: &str) -> Result<CompactSet<T>> {
    let doc: Value = serde_json::from_str(text).map_err(|e| Error::parse("document", e.to_string()))?;
    if !doc.is_object() {
        return Err(Error::parse("document", "expected a JSON object"));
    }
    if let Some(k) = doc
        .as_object()
        .unwrap()
        .keys()
        .find(|k| !matches!(k.as_str(), "regions" | "holes" | "chains"))
    {
        return Err(Error::parse(k, "unknown field"));
    }
    let outers = list(&doc, "regions")?;
    let holes = list(&doc, "holes")?;
    if holes.len() > outers.len() {
        return Err(Error::parse("holes", "more hole lists than regions"));
    }
    let mut regions = Vec::with_capacity(outers.len());
    for (i, o) in outers.iter().enumerate() {
        let field = format!("regions[{i}]");
        let outer = parse_ring(o, &field)?;
        let mut hs = Vec::new();
        if let Some(h) = holes.get(i) {
            let arr = h
                .as_array()
                .ok_or_else(|| Error::parse(format!("holes[{i}]"), "expected a list of rings"))?;
            for (k, r) in arr.iter().enumerate() {
                hs.push(parse_ring(r, &format!("holes[{i}][{k}]"))?);
            }
        }
        regions.push(Region::new(outer, hs).map_err(|e| Error::parse(&field, e.to_string()))?);
    }
    let mut chains = Vec::new();
    for (i, c) in list(&doc, "chains")?.iter().enumerate() {
        let field = format!("chains[{i}]");
        let pts = parse_points(c, &field)?;
        chains.push(Chain::new(pts).map_err(|e| Error::parse(&field, e.to_string()))?);
    }
    CompactSet::new(regions, chains)
}

fn push_num(out: &mut String, x: f64) {
    // shortest representation that parses back to the same double
    out.push_str(&serde_json::to_string(&x).expect("finite coordinate"));
}

fn push_points<T: Scalar>(out: &mut String, pts: &[Point<T>]) {
    out.push('[');
    for (i, p) in pts.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push('[');
        push_num(out, p.x.as_f64());
        out.push(',');
        push_num(out, p.y.as_f64());
        out.push(']');
    }
    out.push(']');
}

/// Serializes with one ring or chain per line. Numbers round-trip exactly.
pub fn set_to_json<T: Scalar>(set: &CompactSet<T>) -> String {
    let mut out = String::from("{\n  \"regions\": [");
    for (i, r) in set.regions().iter().enumerate() {
        out.push_str(if i == 0 { "\n    " } else { ",\n    " });
        push_points(&mut out, r.outer().vertices());
    }
    out.push_str(if set.regions().is_empty() { "],\n  \"holes\": [" } else { "\n  ],\n  \"holes\": [" });
    for (i, r) in set.regions().iter().enumerate() {
        out.push_str(if i == 0 { "\n    [" } else { ",\n    [" });
        for (k, h) in r.holes().iter().enumerate() {
            if k > 0 {
                out.push(',');
            }
            push_points(&mut out, h.vertices());
        }
        out.push(']');
    }
    out.push_str(if set.regions().is_empty() { "],\n  \"chains\": [" } else { "\n  ],\n  \"chains\": [" });
    for (i, c) in set.chains().iter().enumerate() {
        out.push_str(if i == 0 { "\n    " } else { ",\n    " });
        push_points(&mut out, c.points());
    }
    let _ = write!(out, "{}", if set.chains().is_empty() { "]\n}\n" } else { "\n  ]\n}\n" });
    out
}

pub fn read_set<T: Scalar>(path: impl AsRef<Path>) -> Result<CompactSet<T>> {
    let text = std::fs::read_to_string(path)?;
    set_from_json(&text)
}

pub fn write_set<T: Scalar>(path: impl AsRef<Path>, set: &CompactSet<T>) -> Result<()> {
    std::fs::write(path, set_to_json(set))?;
    Ok(())
}
