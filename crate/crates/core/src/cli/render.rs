//! JSON and DOT rendering of results. Rationals are written as `"p/q"`.

use crate::curvature::CurvatureRecord;
use crate::graph::{DistanceValue, Graph};
use crate::rational::{format_rational, to_decimal_string, to_f64, Rational};
use crate::transport::TransportPlan;
use serde_json::{json, Map, Value};
use std::collections::BTreeMap;
use std::fmt::Write;

pub fn rational(r: &Rational) -> Value {
    Value::String(format_rational(r))
}

pub fn distance(d: &DistanceValue) -> Value {
    match d {
        DistanceValue::Finite(r) => rational(r),
        DistanceValue::Unreachable => Value::String("unreachable".into()),
    }
}

pub fn opt_rational(r: Option<&Rational>) -> Value {
    r.map_or(Value::Null, rational)
}

/// Adds `<key>_f64` next to each listed rational field when `floats` is set.
pub fn add_floats(obj: &mut Map<String, Value>, floats: bool, fields: &[(&str, Option<&Rational>)]) {
    if floats {
        for (key, r) in fields {
            obj.insert(format!("{key}_f64"), r.map_or(Value::Null, |r| json!(to_f64(r))));
        }
    }
}

pub fn plan(g: &Graph, p: &TransportPlan) -> Value {
    let entries: Vec<Value> = p
        .entries()
        .iter()
        .map(|e| json!({"source": g.name(e.source), "target": g.name(e.target), "mass": rational(&e.mass)}))
        .collect();
    json!({"cost": rational(p.cost()), "entries": entries})
}

pub fn record(g: &Graph, r: &CurvatureRecord, floats: bool) -> Value {
    let mut obj = Map::new();
    obj.insert("u".into(), json!(g.name(r.x)));
    obj.insert("v".into(), json!(g.name(r.y)));
    obj.insert("alpha".into(), rational(&r.alpha));
    obj.insert("distance".into(), distance(&r.distance));
    obj.insert("w1".into(), distance(&r.w1));
    match &r.kappa {
        Some(k) => obj.insert("kappa".into(), rational(k)),
        None => obj.insert("kappa".into(), json!("undefined (blocked transport)")),
    };
    add_floats(&mut obj, floats, &[("kappa", r.kappa.as_ref()), ("w1", r.w1.finite())]);
    if let Some(p) = &r.plan {
        obj.insert("plan".into(), plan(g, p));
    }
    Value::Object(obj)
}

/// Labels by vertex name.
pub fn labels(g: &Graph, labels: &[usize]) -> Value {
    let map: BTreeMap<String, usize> = labels.iter().enumerate().map(|(v, l)| (g.name(v), *l)).collect();
    json!(map)
}

/// Pretty JSON with a trailing newline.
pub fn to_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

const NEGATIVE: (f64, f64, f64) = (33.0, 102.0, 172.0);
const NEUTRAL: (f64, f64, f64) = (247.0, 247.0, 247.0);
const POSITIVE: (f64, f64, f64) = (178.0, 24.0, 43.0);

/// Diverging blue-white-red scale, saturating at `-1` and `1`.
pub fn curvature_color(kappa: &Rational) -> String {
    let t = to_f64(kappa).clamp(-1.0, 1.0);
    let (from, to, s) = if t < 0.0 { (NEUTRAL, NEGATIVE, -t) } else { (NEUTRAL, POSITIVE, t) };
    let mix = |a: f64, b: f64| (a + (b - a) * s).round() as u8;
    format!("#{:02x}{:02x}{:02x}", mix(from.0, to.0), mix(from.1, to.1), mix(from.2, to.2))
}

/// DOT text of `g`; edges with a record are labeled with the decimal
/// curvature and colored by [`curvature_color`].
pub fn export_dot(g: &Graph, records: &[CurvatureRecord]) -> String {
    let by_edge: BTreeMap<_, _> = records.iter().map(|r| ((r.x, r.y), r)).collect();
    let (kind, arrow) = if g.is_directed() { ("digraph", "->") } else { ("graph", "--") };
    let mut out = format!("{kind} curvature {{\n");
    for v in 0..g.n() {
        let _ = writeln!(out, "  {v} [label={:?}];", g.name(v));
    }
    for (u, v) in g.edges() {
        let rec = by_edge.get(&(u, v)).or_else(|| if g.is_directed() { None } else { by_edge.get(&(v, u)) });
        match rec {
            Some(r) => match &r.kappa {
                Some(k) => {
                    let _ = writeln!(
                        out,
                        "  {u} {arrow} {v} [label=\"{}\", color=\"{}\"];",
                        to_decimal_string(k, 4),
                        curvature_color(k)
                    );
                }
                None => {
                    let _ = writeln!(out, "  {u} {arrow} {v} [label=\"undefined\", color=\"#999999\", style=dashed];");
                }
            },
            None => {
                let _ = writeln!(out, "  {u} {arrow} {v};");
            }
        }
    }
    out.push_str("}\n");
    out
}
