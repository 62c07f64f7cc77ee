//! Line-oriented JSON corpora: one record per line, tagged by `kind`.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use fsplit_core::algebra::FiniteAlgebra;
use fsplit_core::varieties::PlaneCurve;
use fsplit_core::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    Algebra,
    Curve,
    AbelianProduct,
    CartierPair,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CorpusRecord {
    pub id: String,
    pub kind: Kind,
    pub payload: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected: Option<Value>,
}

/// Parse a corpus; blank lines and lines starting with `#` are skipped.
pub fn parse_corpus(text: &str) -> Result<Vec<CorpusRecord>> {
    let mut out = Vec::new();
    let mut ids = HashSet::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let rec: CorpusRecord =
            serde_json::from_str(line).map_err(|e| Error::Parse(format!("line {}: {e}", i + 1)))?;
        if !ids.insert(rec.id.clone()) {
            return Err(Error::Parse(format!("line {}: duplicate id `{}`", i + 1, rec.id)));
        }
        out.push(rec);
    }
    Ok(out)
}

fn field<'a>(v: &'a Value, name: &str) -> Result<&'a Value> {
    v.get(name).ok_or_else(|| Error::Parse(format!("payload: missing field `{name}`")))
}

fn as_u32(v: &Value, name: &str) -> Result<u32> {
    field(v, name)?
        .as_u64()
        .map(|x| x as u32)
        .ok_or_else(|| Error::Parse(format!("payload: `{name}` must be a non-negative integer")))
}

fn as_strings(v: &Value, name: &str) -> Result<Vec<String>> {
    field(v, name)?
        .as_array()
        .and_then(|a| a.iter().map(|x| x.as_str().map(String::from)).collect())
        .ok_or_else(|| Error::Parse(format!("payload: `{name}` must be an array of strings")))
}

/// `"F_2[x]/(x^2)"`, or `{"p", "variables", "relations", "name"?}`, or
/// `{"p", "degree"}` for F_{p^e}.
pub fn algebra_from(v: &Value) -> Result<FiniteAlgebra> {
    if let Some(s) = v.as_str() {
        return FiniteAlgebra::from_spec(s);
    }
    let p = as_u32(v, "p")?;
    let alg = if v.get("degree").is_some() {
        FiniteAlgebra::finite_field(p, as_u32(v, "degree")?)?
    } else {
        let vars = as_strings(v, "variables")?;
        let rels = as_strings(v, "relations")?;
        let vars: Vec<&str> = vars.iter().map(String::as_str).collect();
        let rels: Vec<&str> = rels.iter().map(String::as_str).collect();
        FiniteAlgebra::from_presentation(&vars, &rels, p)?
    };
    Ok(match v.get("name").and_then(Value::as_str) {
        Some(n) => alg.with_name(n),
        None => alg,
    })
}

/// `{"p", "f"}` with f in x, y, z, or `{"p", "weierstrass": [a1, a2, a3, a4, a6]}`.
pub fn curve_from(v: &Value) -> Result<PlaneCurve> {
    let p = as_u32(v, "p")?;
    if let Some(w) = v.get("weierstrass") {
        let a: Vec<i64> = w
            .as_array()
            .and_then(|a| a.iter().map(Value::as_i64).collect())
            .filter(|a: &Vec<i64>| a.len() == 5)
            .ok_or_else(|| Error::Parse("payload: `weierstrass` must hold five integers".into()))?;
        return PlaneCurve::weierstrass(p, [a[0], a[1], a[2], a[3], a[4]]);
    }
    let f = field(v, "f")?
        .as_str()
        .ok_or_else(|| Error::Parse("payload: `f` must be a string".into()))?;
    PlaneCurve::parse(f, p)
}

/// `{"p", "factors": [f, ...]}`.
pub fn product_from(v: &Value) -> Result<Vec<PlaneCurve>> {
    let p = as_u32(v, "p")?;
    as_strings(v, "factors")?.iter().map(|f| PlaneCurve::parse(f, p)).collect()
}

/// `{"a": algebra, "b": algebra}`.
pub fn pair_from(v: &Value) -> Result<(FiniteAlgebra, FiniteAlgebra)> {
    Ok((algebra_from(field(v, "a")?)?, algebra_from(field(v, "b")?)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_records() {
        let text = r#"
# comment
{"id": "a1", "kind": "algebra", "payload": "F_2[x]/(x^2)", "expected": {"height": "inf"}}
{"id": "c1", "kind": "curve", "payload": {"p": 7, "f": "x^3 + y^3 + z^3"}}
{"id": "e1", "kind": "curve", "payload": {"p": 5, "weierstrass": [0, 0, 0, 0, 1]}}
{"id": "ab", "kind": "abelian-product", "payload": {"p": 5, "factors": ["y^2*z - x^3 - z^3"]}}
{"id": "pr", "kind": "cartier-pair", "payload": {"a": "F_4", "b": {"p": 2, "variables": ["t"], "relations": ["t^3 - 1"]}}}
"#;
        let recs = parse_corpus(text).unwrap();
        assert_eq!(recs.len(), 5);
        assert_eq!(algebra_from(&recs[0].payload).unwrap().dim(), 2);
        assert_eq!(curve_from(&recs[2].payload).unwrap().count_points(1).unwrap(), 6);
        assert_eq!(product_from(&recs[3].payload).unwrap().len(), 1);
        assert_eq!(pair_from(&recs[4].payload).unwrap().1.dim(), 3);
    }

    #[test]
    fn reports_line_numbers() {
        let err = parse_corpus("{\"id\": \"x\", \"kind\": \"algebra\", \"payload\": 1}\n{oops").unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
        let dup = "{\"id\": \"x\", \"kind\": \"curve\", \"payload\": 1}\n{\"id\": \"x\", \"kind\": \"curve\", \"payload\": 1}";
        assert!(parse_corpus(dup).unwrap_err().to_string().contains("duplicate"));
    }
}
