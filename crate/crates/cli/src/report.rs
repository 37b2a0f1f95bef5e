//! Report construction. Every command builds one JSON value; the text format
//! is rendered from that same value.

use formlab_core::catalog::CatalogEntry;
use formlab_core::classifier::{Fingerprint, OrbitLabel, OrbitReport, Verdict};
use formlab_core::exterior::{act, Form, Polyvector};
use formlab_core::invariants::{
    alternating_rank, is_multisymplectic, nilpotency_witness_degenerate,
    orientation_reversing_stabilizer_witness, LengthSign,
};
use formlab_core::sampling::SampleStatistics;
use serde_json::{json, Map, Value};

use crate::document::{matrix_to_value, rat_value, Element, FormDocument};

pub fn fingerprint_value(fp: &Fingerprint) -> Value {
    let s = &fp.killing_signature;
    json!({
        "rank_profile": fp.rank_profile,
        "stab_dim": fp.stab_dim,
        "killing_signature": {"positive": s.positive, "negative": s.negative, "null": s.null},
    })
}

pub fn form_value(phi: &Form) -> Value {
    FormDocument::new(Element::Form(phi.clone())).to_value()
}

pub fn label_value(label: &OrbitLabel) -> Value {
    Value::from(label.to_string())
}

pub fn verdict_value(r: &OrbitReport) -> Value {
    let (kind, orbits) = match &r.verdict {
        Verdict::Exact(l) => ("exact", vec![label_value(l)]),
        Verdict::Candidates(ls) => ("candidates", ls.iter().map(label_value).collect()),
        Verdict::Unknown => ("unknown", vec![]),
    };
    let mut obj = Map::new();
    obj.insert("kind".into(), Value::from(kind));
    obj.insert("orbits".into(), Value::Array(orbits));
    obj.insert("open".into(), Value::from(r.open));
    obj.insert(
        "components".into(),
        r.components.map_or(Value::Null, Value::from),
    );
    match &r.canonical {
        Some(c) => {
            obj.insert("canonical".into(), form_value(c));
            obj.insert("canonical_text".into(), Value::from(c.to_string()));
        }
        None => {
            obj.insert("canonical".into(), Value::Null);
        }
    }
    Value::Object(obj)
}

pub fn insert_length_sign(obj: &mut Map<String, Value>, ls: &LengthSign) {
    obj.insert("length".into(), Value::from(ls.length));
    obj.insert("sign".into(), Value::from(ls.sign));
    obj.insert(
        "lambda".into(),
        ls.lambda.as_ref().map_or(Value::Null, rat_value),
    );
}

/// Degeneracy witnesses for the input element, with notes explaining any
/// absence.
pub fn witnesses(element: &Element, notes: &mut Vec<String>) -> Value {
    let mut obj = Map::new();
    match element {
        Element::Form(phi) => form_witness(phi, &mut obj, notes),
        Element::Vector(x) => vector_witness(x, &mut obj, notes),
    }
    Value::Object(obj)
}

fn form_witness(phi: &Form, obj: &mut Map<String, Value>, notes: &mut Vec<String>) {
    match orientation_reversing_stabilizer_witness(phi) {
        Ok(g) => {
            let fixes = act(&g, phi).is_ok_and(|moved| &moved == phi);
            obj.insert(
                "orientation_reversing".into(),
                json!({
                    "matrix": matrix_to_value(g.matrix()),
                    "det": rat_value(g.det()),
                    "fixes_input": fixes,
                }),
            );
        }
        Err(_) if is_multisymplectic(phi).unwrap_or(false) => {
            notes.push("nondegenerate input: no degeneracy witnesses".into())
        }
        Err(e) => notes.push(format!("no orientation-reversing witness: {e}")),
    }
}

fn vector_witness(x: &Polyvector, obj: &mut Map<String, Value>, notes: &mut Vec<String>) {
    if x.degree() == 0 || alternating_rank(x).is_ok_and(|r| r == x.n()) {
        notes.push("nondegenerate input: no degeneracy witnesses".into());
        return;
    }
    match nilpotency_witness_degenerate(x) {
        Ok(w) => {
            let verified = w.verify(x).unwrap_or(false);
            obj.insert(
                "nilpotency".into(),
                json!({
                    "exponents": w.exponents,
                    "contraction_rate": w.contraction_rate,
                    "basis": matrix_to_value(w.basis.matrix()),
                    "verified": verified,
                }),
            );
        }
        Err(e) => notes.push(format!("no nilpotency witness: {e}")),
    }
}

pub fn catalog_entry_value(e: &CatalogEntry) -> Value {
    json!({
        "name": e.name,
        "provenance": e.provenance.to_string(),
        "source": e.source,
        "stabilizer_note": e.stabilizer_note,
        "fingerprint": fingerprint_value(&e.fingerprint),
        "components": e.components,
        "representative": form_value(&e.representative),
        "representative_text": e.representative.to_string(),
    })
}

pub fn sample_value(s: &SampleStatistics) -> Value {
    let rows: Vec<Value> = s
        .histogram
        .iter()
        .map(|(fp, count)| {
            json!({
                "count": count,
                "fingerprint": fingerprint_value(fp),
                "stable": fp.is_stable(s.n, s.k),
            })
        })
        .collect();
    json!({
        "command": "sample",
        "n": s.n,
        "k": s.k,
        "trials": s.trials,
        "bound": s.bound,
        "seed": s.seed,
        "distinct": s.distinct(),
        "histogram": rows,
    })
}

/// Human-readable rendering: one `path: value` line per scalar leaf, arrays
/// of scalars kept on one line.
pub fn render_text(v: &Value) -> String {
    let mut out = String::new();
    render_into(&mut out, "", v);
    out
}

fn render_into(out: &mut String, path: &str, v: &Value) {
    let join = |key: &str| {
        if path.is_empty() {
            key.to_string()
        } else {
            format!("{path}.{key}")
        }
    };
    match v {
        Value::Object(obj) if !obj.is_empty() => {
            for (key, child) in obj {
                render_into(out, &join(key), child);
            }
        }
        Value::Array(items) if items.iter().any(|i| i.is_object() || i.is_array()) => {
            for (i, child) in items.iter().enumerate() {
                render_into(out, &join(&(i + 1).to_string()), child);
            }
        }
        _ => {
            let shown = match v {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            out.push_str(&format!("{path}: {shown}\n"));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_rendering_flattens_paths() {
        let v = json!({"b": {"x": [1, 2], "y": "s"}, "a": [{"c": true}], "e": {}});
        assert_eq!(render_text(&v), "a.1.c: true\nb.x: [1,2]\nb.y: s\ne: {}\n");
    }
}
