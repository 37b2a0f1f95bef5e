//! The JSON form document read and written by every subcommand.
//!
//! ```json
//! {"n": 4, "k": 2, "variance": "form",
//!  "terms": [{"idx": [2, 1], "num": 3, "den": 2}],
//!  "volume": "1/2", "metric": [[1, 0], [0, 1]]}
//! ```
//!
//! Integers may be JSON numbers or decimal strings; rationals may also be
//! strings of the form `p/q`. Serialization sorts keys and multi-indices.

use std::str::FromStr;

use formlab_core::duality::{InnerProduct, VolumeForm};
use formlab_core::exterior::{Alternating, Form, Polyvector, Variance};
use formlab_core::linalg::{Matrix, Rat};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{Map, Value};

use crate::CliError;

/// Largest accepted dimension.
pub const MAX_N: usize = 12;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Element {
    Form(Form),
    Vector(Polyvector),
}

impl Element {
    pub fn n(&self) -> usize {
        match self {
            Element::Form(f) => f.n(),
            Element::Vector(x) => x.n(),
        }
    }

    pub fn degree(&self) -> usize {
        match self {
            Element::Form(f) => f.degree(),
            Element::Vector(x) => x.degree(),
        }
    }

    pub fn variance(&self) -> &'static str {
        match self {
            Element::Form(_) => "form",
            Element::Vector(_) => "vector",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormDocument {
    pub element: Element,
    pub volume: Option<Rat>,
    pub metric: Option<Matrix>,
}

impl FormDocument {
    pub fn new(element: Element) -> Self {
        FormDocument {
            element,
            volume: None,
            metric: None,
        }
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let value: Value = serde_json::from_str(text)
            .map_err(|e| CliError::Parse(format!("invalid JSON: {e}")))?;
        Self::from_value(&value)
    }

    pub fn from_value(value: &Value) -> Result<Self, CliError> {
        let obj = value
            .as_object()
            .ok_or_else(|| parse_err("document must be a JSON object"))?;
        for key in obj.keys() {
            if !["n", "k", "variance", "terms", "volume", "metric"].contains(&key.as_str()) {
                return Err(parse_err(format!("unknown field `{key}`")));
            }
        }
        let n = size_field(obj, "n")?;
        let k = size_field(obj, "k")?;
        if n > MAX_N {
            return Err(CliError::Domain(format!(
                "n = {n} exceeds the cap n ≤ {MAX_N}"
            )));
        }
        if k > n {
            return Err(CliError::Domain(format!("degree k = {k} exceeds n = {n}")));
        }
        let variance = match obj.get("variance") {
            None => "form",
            Some(Value::String(s)) if s == "form" || s == "vector" => s.as_str(),
            Some(other) => {
                return Err(parse_err(format!(
                    "variance must be \"form\" or \"vector\", found {other}"
                )))
            }
        };
        let terms = match obj.get("terms") {
            Some(Value::Array(ts)) => parse_terms(ts, n, k)?,
            Some(_) => return Err(parse_err("`terms` must be an array")),
            None => return Err(parse_err("missing field `terms`")),
        };
        let element = match variance {
            "form" => Element::Form(build(n, k, terms)?),
            _ => Element::Vector(build(n, k, terms)?),
        };
        let volume = match obj.get("volume") {
            None => None,
            Some(v) => {
                let r = rational_value(v).map_err(|e| parse_err(format!("volume: {e}")))?;
                if r.is_zero() {
                    return Err(CliError::Domain("volume scale must be nonzero".into()));
                }
                Some(r)
            }
        };
        let metric = match obj.get("metric") {
            None => None,
            Some(v) => {
                let m = matrix_value(v).map_err(|e| parse_err(format!("metric: {e}")))?;
                check_square(&m, n, "metric")?;
                InnerProduct::new(m.clone())
                    .map_err(|e| CliError::Domain(format!("metric: {e}")))?;
                Some(m)
            }
        };
        Ok(FormDocument {
            element,
            volume,
            metric,
        })
    }

    pub fn n(&self) -> usize {
        self.element.n()
    }

    pub fn k(&self) -> usize {
        self.element.degree()
    }

    pub fn to_value(&self) -> Value {
        let mut obj = Map::new();
        obj.insert("n".into(), Value::from(self.n()));
        obj.insert("k".into(), Value::from(self.k()));
        obj.insert("variance".into(), Value::from(self.element.variance()));
        let terms = match &self.element {
            Element::Form(f) => terms_value(f),
            Element::Vector(x) => terms_value(x),
        };
        obj.insert("terms".into(), terms);
        if let Some(v) = &self.volume {
            obj.insert("volume".into(), rat_value(v));
        }
        if let Some(m) = &self.metric {
            obj.insert("metric".into(), matrix_to_value(m));
        }
        Value::Object(obj)
    }

    /// Pretty JSON with sorted keys and a trailing newline.
    pub fn to_json(&self) -> String {
        to_pretty(&self.to_value())
    }

    /// The volume form, preferring `scale` over the document's own value.
    pub fn volume_form(&self, scale: Option<&Rat>) -> Result<VolumeForm, CliError> {
        let s = scale
            .or(self.volume.as_ref())
            .cloned()
            .unwrap_or_else(Rat::one);
        VolumeForm::new(self.n(), s).map_err(|e| CliError::Domain(e.to_string()))
    }

    /// The inner product, preferring `metric` over the document's own value.
    pub fn inner_product(&self, metric: Option<&Matrix>) -> Result<InnerProduct, CliError> {
        match metric.or(self.metric.as_ref()) {
            None => Ok(InnerProduct::identity(self.n())),
            Some(m) => {
                check_square(m, self.n(), "metric")?;
                InnerProduct::new(m.clone()).map_err(|e| CliError::Domain(format!("metric: {e}")))
            }
        }
    }
}

fn parse_err(msg: impl Into<String>) -> CliError {
    CliError::Parse(msg.into())
}

fn size_field(obj: &Map<String, Value>, key: &str) -> Result<usize, CliError> {
    let v = obj
        .get(key)
        .ok_or_else(|| parse_err(format!("missing field `{key}`")))?;
    v.as_u64()
        .and_then(|x| usize::try_from(x).ok())
        .ok_or_else(|| parse_err(format!("`{key}` must be a non-negative integer, found {v}")))
}

fn parse_terms(ts: &[Value], n: usize, k: usize) -> Result<Vec<(Vec<usize>, Rat)>, CliError> {
    ts.iter()
        .enumerate()
        .map(|(i, t)| {
            parse_term(t, n, k).map_err(|e| parse_err(format!("term #{} {t}: {e}", i + 1)))
        })
        .collect()
}

fn parse_term(t: &Value, n: usize, k: usize) -> Result<(Vec<usize>, Rat), String> {
    let obj = t.as_object().ok_or("a term must be an object")?;
    for key in obj.keys() {
        if !["idx", "num", "den"].contains(&key.as_str()) {
            return Err(format!("unknown field `{key}`"));
        }
    }
    let idx = obj
        .get("idx")
        .and_then(Value::as_array)
        .ok_or("missing index list `idx`")?;
    let idx: Vec<usize> = idx
        .iter()
        .map(|i| {
            i.as_u64()
                .and_then(|x| usize::try_from(x).ok())
                .filter(|&x| (1..=n).contains(&x))
                .ok_or_else(|| format!("index {i} outside 1..={n}"))
        })
        .collect::<Result<_, _>>()?;
    if idx.len() != k {
        return Err(format!("expected {k} indices, found {}", idx.len()));
    }
    let mut sorted = idx.clone();
    sorted.sort_unstable();
    if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
        return Err(format!("index {} repeats", w[0]));
    }
    let num = integer_value(obj.get("num").ok_or("missing numerator `num`")?)?;
    let den = match obj.get("den") {
        None => BigInt::one(),
        Some(d) => integer_value(d)?,
    };
    if !den.is_positive() {
        return Err("denominator must be positive".into());
    }
    Ok((idx, Rat::new(num, den)))
}

fn build<V: Variance>(
    n: usize,
    k: usize,
    terms: Vec<(Vec<usize>, Rat)>,
) -> Result<Alternating<V>, CliError> {
    Alternating::from_terms(n, k, terms).map_err(|e| parse_err(e.to_string()))
}

fn check_square(m: &Matrix, n: usize, what: &str) -> Result<(), CliError> {
    if m.rows() != n || m.cols() != n {
        return Err(CliError::Domain(format!(
            "{what} is {}×{}, expected {n}×{n}",
            m.rows(),
            m.cols()
        )));
    }
    Ok(())
}

fn terms_value<V: Variance>(x: &Alternating<V>) -> Value {
    Value::Array(
        x.terms()
            .map(|(m, c)| {
                let mut t = Map::new();
                t.insert("idx".into(), Value::from(m.to_vec()));
                t.insert("num".into(), int_value(c.numer()));
                t.insert("den".into(), int_value(c.denom()));
                Value::Object(t)
            })
            .collect(),
    )
}

/// A JSON number when it fits in i64, a decimal string otherwise.
pub fn int_value(i: &BigInt) -> Value {
    match i.to_i64() {
        Some(x) => Value::from(x),
        None => Value::from(i.to_string()),
    }
}

/// Integers as [`int_value`], other rationals as `"p/q"` strings.
pub fn rat_value(r: &Rat) -> Value {
    if r.is_integer() {
        int_value(r.numer())
    } else {
        Value::from(r.to_string())
    }
}

pub fn matrix_to_value(m: &Matrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|r| Value::Array(m.row(r).iter().map(rat_value).collect()))
            .collect(),
    )
}

pub fn integer_value(v: &Value) -> Result<BigInt, String> {
    match v {
        Value::Number(x) => x
            .as_i64()
            .map(BigInt::from)
            .or_else(|| x.as_u64().map(BigInt::from))
            .ok_or_else(|| format!("{x} is not an integer (write large integers as strings)")),
        Value::String(s) => BigInt::from_str(s).map_err(|_| format!("\"{s}\" is not an integer")),
        other => Err(format!("expected an integer, found {other}")),
    }
}

pub fn parse_rational(s: &str) -> Result<Rat, String> {
    let bad = || format!("\"{s}\" is not a rational number");
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s.trim(), "1"),
    };
    let p = BigInt::from_str(p).map_err(|_| bad())?;
    let q = BigInt::from_str(q).map_err(|_| bad())?;
    if q.is_zero() {
        return Err(format!("\"{s}\" has a zero denominator"));
    }
    Ok(Rat::new(p, q))
}

pub fn rational_value(v: &Value) -> Result<Rat, String> {
    match v {
        Value::String(s) => parse_rational(s),
        other => integer_value(other).map(Rat::from_integer),
    }
}

/// A rectangular array of rationals.
pub fn matrix_value(v: &Value) -> Result<Matrix, String> {
    let rows = v.as_array().ok_or("expected an array of rows")?;
    let rows: Vec<Vec<Rat>> = rows
        .iter()
        .enumerate()
        .map(|(i, row)| {
            row.as_array()
                .ok_or_else(|| format!("row {} is not an array", i + 1))?
                .iter()
                .map(|x| rational_value(x).map_err(|e| format!("row {}: {e}", i + 1)))
                .collect()
        })
        .collect::<Result<_, String>>()?;
    if let Some(first) = rows.first() {
        if rows.iter().any(|r| r.len() != first.len()) {
            return Err("rows have different lengths".into());
        }
    }
    Ok(Matrix::from_rows(rows))
}

pub fn to_pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use formlab_core::linalg::{rat, ratio};

    #[test]
    fn unsorted_indices_pick_up_the_permutation_sign() {
        let doc = FormDocument::parse(
            r#"{"n":3,"k":2,"variance":"form","terms":[{"idx":[2,1],"num":3,"den":2}]}"#,
        )
        .unwrap();
        let Element::Form(f) = &doc.element else {
            panic!()
        };
        assert_eq!(f.coefficient_at(&[1, 2]), ratio(-3, 2));
    }

    #[test]
    fn duplicate_monomials_are_summed() {
        let doc = FormDocument::parse(
            r#"{"n":3,"k":2,"terms":[{"idx":[1,2],"num":1},{"idx":[2,1],"num":1},{"idx":[1,3],"num":"5","den":"10"}]}"#,
        )
        .unwrap();
        let Element::Form(f) = &doc.element else {
            panic!()
        };
        assert_eq!(f.len(), 1);
        assert_eq!(f.coefficient_at(&[1, 3]), ratio(1, 2));
    }

    #[test]
    fn repeated_index_is_rejected_with_the_term() {
        let err = FormDocument::parse(
            r#"{"n":3,"k":3,"terms":[{"idx":[1,2,3],"num":1},{"idx":[1,1,2],"num":1}]}"#,
        )
        .unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains("term #2"), "{err}");
        assert!(err.to_string().contains("[1,1,2]"), "{err}");
    }

    #[test]
    fn malformed_inputs() {
        for (text, code) in [
            ("{", 2),
            (r#"{"n":3,"k":2}"#, 2),
            (r#"{"n":3,"k":2,"terms":[{"idx":[1,4],"num":1}]}"#, 2),
            (r#"{"n":3,"k":2,"terms":[{"idx":[1],"num":1}]}"#, 2),
            (
                r#"{"n":3,"k":2,"terms":[{"idx":[1,2],"num":1,"den":0}]}"#,
                2,
            ),
            (r#"{"n":3,"k":2,"terms":[{"idx":[1,2],"num":1.5}]}"#, 2),
            (r#"{"n":3,"k":2,"terms":[],"colour":1}"#, 2),
            (r#"{"n":3,"k":2,"variance":"tensor","terms":[]}"#, 2),
            (r#"{"n":13,"k":2,"terms":[]}"#, 3),
            (r#"{"n":3,"k":4,"terms":[]}"#, 3),
            (r#"{"n":2,"k":1,"terms":[],"volume":"0/5"}"#, 3),
            (r#"{"n":2,"k":1,"terms":[],"metric":[[1,2],[2,1]]}"#, 3),
            (r#"{"n":2,"k":1,"terms":[],"metric":[[1]]}"#, 3),
        ] {
            let err = FormDocument::parse(text).unwrap_err();
            assert_eq!(err.exit_code(), code, "{text}: {err}");
        }
    }

    #[test]
    fn serialization_is_sorted_and_round_trips() {
        let text = r#"{"terms":[{"num":"-123456789012345678901234567890","idx":[3,1]},{"idx":[1,2],"den":4,"num":2}],
            "volume":"-2/6","metric":[[2,"1/2"],["1/2",1]],"k":2,"n":3,"variance":"vector"}"#;
        let doc = FormDocument::parse(text).unwrap_err();
        // metric must be 3×3
        assert_eq!(doc.exit_code(), 3);
        let text = text.replace(
            r#"[[2,"1/2"],["1/2",1]]"#,
            r#"[[2,"1/2",0],["1/2",1,0],[0,0,1]]"#,
        );
        let doc = FormDocument::parse(&text).unwrap();
        let out = doc.to_json();
        let again = FormDocument::parse(&out).unwrap();
        assert_eq!(again, doc);
        assert_eq!(again.to_json(), out);
        assert_eq!(doc.volume, Some(ratio(-1, 3)));
        let first = out.find("\"idx\": [\n        1,\n        2").unwrap();
        let second = out.find("\"123456789012345678901234567890\"").unwrap();
        assert!(first < second);
        assert!(out.find("\"k\"").unwrap() < out.find("\"n\"").unwrap());
    }

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("3").unwrap(), rat(3));
        assert_eq!(parse_rational(" -4 / 6 ").unwrap(), ratio(-2, 3));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(rat_value(&ratio(6, 3)), Value::from(2));
        assert_eq!(rat_value(&ratio(1, 3)), Value::from("1/3"));
    }
}
