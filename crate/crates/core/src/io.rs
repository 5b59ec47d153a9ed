//! JSON file formats.
//!
//! Graph: `{"delta": int, "edges": [{"label": int, "u": int, "v": int}, ...], "n": int}`.
//! Matrix: `{"d": [[int, ...], ...], "n": int}`.
//!
//! Output is deterministic: keys sorted, one edge or matrix row per line.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::graph::{DurationMatrix, PeriodicTemporalGraph, Vertex};

pub fn graph_to_json(g: &PeriodicTemporalGraph) -> String {
    let mut s = String::new();
    write_graph(&mut s, g, "");
    s.push('\n');
    s
}

/// A JSON array of graphs, in the given order.
pub fn graphs_to_json(gs: &[PeriodicTemporalGraph]) -> String {
    let mut s = String::from("[\n");
    for (i, g) in gs.iter().enumerate() {
        s.push_str("  ");
        write_graph(&mut s, g, "  ");
        s.push_str(if i + 1 < gs.len() { ",\n" } else { "\n" });
    }
    s.push_str("]\n");
    s
}

fn write_graph(s: &mut String, g: &PeriodicTemporalGraph, indent: &str) {
    let _ = write!(s, "{{\n{indent}  \"delta\": {},\n{indent}  \"edges\": [", g.delta());
    for (i, e) in g.edges().iter().enumerate() {
        let sep = if i == 0 { "\n" } else { ",\n" };
        let _ = write!(s, "{sep}{indent}    {{\"label\": {}, \"u\": {}, \"v\": {}}}", e.label, e.u, e.v);
    }
    if !g.edges().is_empty() {
        let _ = write!(s, "\n{indent}  ");
    }
    let _ = write!(s, "],\n{indent}  \"n\": {}\n{indent}}}", g.n());
}

pub fn matrix_to_json(d: &DurationMatrix) -> String {
    let mut s = String::from("{\n  \"d\": [");
    for i in 0..d.n() {
        let row: Vec<String> = d.row(i).iter().map(u64::to_string).collect();
        let sep = if i == 0 { "\n" } else { ",\n" };
        let _ = write!(s, "{sep}    [{}]", row.join(", "));
    }
    if d.n() > 0 {
        s.push_str("\n  ");
    }
    let _ = writeln!(s, "],\n  \"n\": {}\n}}", d.n());
    s
}

pub fn vertex_map_to_json(map: &BTreeMap<String, Vertex>) -> String {
    #[derive(serde::Serialize)]
    struct Sidecar<'a> {
        #[serde(rename = "vertexMap")]
        vertex_map: &'a BTreeMap<String, Vertex>,
    }
    let mut s = serde_json::to_string_pretty(&Sidecar { vertex_map: map }).expect("string map serializes");
    s.push('\n');
    s
}

pub fn parse_graph(text: &str) -> Result<PeriodicTemporalGraph> {
    let bad = |m: String| Error::MalformedGraph(m);
    let root = parse_value(text).map_err(bad)?;
    let obj = as_object(&root, "$", &["delta", "edges", "n"]).map_err(bad)?;
    let n = field_uint(obj, "n", "n").map_err(bad)? as usize;
    let delta = field_uint(obj, "delta", "delta").map_err(bad)?;
    if delta == 0 {
        return Err(bad("delta: must be at least 1".into()));
    }
    let edges = match obj.get("edges") {
        Some(Value::Array(a)) => a,
        Some(_) => return Err(bad("edges: expected an array".into())),
        None => return Err(bad("missing field `edges`".into())),
    };
    let mut list = Vec::with_capacity(edges.len());
    for (k, e) in edges.iter().enumerate() {
        let path = format!("edges[{k}]");
        let eo = as_object(e, &path, &["label", "u", "v"]).map_err(bad)?;
        let u = field_uint(eo, "u", &format!("{path}.u")).map_err(bad)? as usize;
        let v = field_uint(eo, "v", &format!("{path}.v")).map_err(bad)? as usize;
        let label = field_uint(eo, "label", &format!("{path}.label")).map_err(bad)?;
        for (name, x) in [("u", u), ("v", v)] {
            if x >= n {
                return Err(bad(format!("{path}.{name}: vertex {x} outside 0..{n}")));
            }
        }
        if label == 0 || label > delta {
            return Err(bad(format!("{path}.label: {label} outside [1, {delta}]")));
        }
        list.push((u, v, label));
    }
    PeriodicTemporalGraph::new(n, delta, list)
}

pub fn parse_matrix(text: &str) -> Result<DurationMatrix> {
    let bad = |m: String| Error::MalformedMatrix(m);
    let root = parse_value(text).map_err(bad)?;
    let obj = as_object(&root, "$", &["d", "n"]).map_err(bad)?;
    let n = field_uint(obj, "n", "n").map_err(bad)? as usize;
    let rows = match obj.get("d") {
        Some(Value::Array(a)) => a,
        Some(_) => return Err(bad("d: expected an array of rows".into())),
        None => return Err(bad("missing field `d`".into())),
    };
    if rows.len() != n {
        return Err(bad(format!("d: {} rows but n = {n}", rows.len())));
    }
    let mut out = Vec::with_capacity(n);
    for (i, r) in rows.iter().enumerate() {
        let Value::Array(r) = r else {
            return Err(bad(format!("d[{i}]: expected an array")));
        };
        if r.len() != n {
            return Err(bad(format!("d[{i}]: {} entries but n = {n}", r.len())));
        }
        let row = r
            .iter()
            .enumerate()
            .map(|(j, x)| uint(x, &format!("d[{i}][{j}]")))
            .collect::<std::result::Result<Vec<u64>, String>>()
            .map_err(bad)?;
        out.push(row);
    }
    DurationMatrix::from_rows(out)
}

pub fn read_graph(path: &Path) -> Result<PeriodicTemporalGraph> {
    parse_graph(&std::fs::read_to_string(path)?)
}

pub fn read_matrix(path: &Path) -> Result<DurationMatrix> {
    parse_matrix(&std::fs::read_to_string(path)?)
}

fn parse_value(text: &str) -> std::result::Result<Value, String> {
    // the message already ends with "at line L column C"
    serde_json::from_str(text).map_err(|e| e.to_string())
}

fn as_object<'a>(v: &'a Value, path: &str, allowed: &[&str]) -> std::result::Result<&'a Map<String, Value>, String> {
    let Value::Object(o) = v else {
        return Err(format!("{path}: expected an object"));
    };
    if let Some(k) = o.keys().find(|k| !allowed.contains(&k.as_str())) {
        return Err(format!("{path}: unknown field `{k}`"));
    }
    Ok(o)
}

fn field_uint(o: &Map<String, Value>, key: &str, path: &str) -> std::result::Result<u64, String> {
    match o.get(key) {
        Some(v) => uint(v, path),
        None => Err(format!("{path}: missing field")),
    }
}

fn uint(v: &Value, path: &str) -> std::result::Result<u64, String> {
    v.as_u64().ok_or_else(|| format!("{path}: expected a non-negative integer, got {v}"))
}
