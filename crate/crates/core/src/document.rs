//! JSON documents describing algebras, and name resolution.
//!
//! ```json
//! {
//!   "kind": "lie",
//!   "basis": ["h", "e", "f"],
//!   "brackets": [[0, 1, 1, "2"], [0, 2, 2, "-2"], [1, 2, 0, "1"]]
//! }
//! ```
//!
//! Commutative algebras use `"kind": "comm"` and `"products"`, and may give
//! `"unit"` coordinates and `"idempotents": [{"point": "p", "coords": [...]}]`.
//! Coefficients are strings `"p/q"` or `"p"`, or JSON integers. An optional
//! `"dim"` must agree with the basis.

use std::path::Path;
use std::str::FromStr;

use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::catalog;
use crate::comm::{CommAlgebra, CommError, Idempotent};
use crate::lie::{LieAlgebra, LieError};
use crate::linalg::{format_scalar, Scalar};

#[derive(Debug, Error)]
pub enum DocumentError {
    #[error("invalid JSON: {0}")]
    Json(String),
    #[error("schema violation: {0}")]
    Schema(String),
    #[error("bad rational {0:?}")]
    Rational(String),
    #[error("unknown algebra {0:?}: not a catalog name, file or inline document")]
    Unknown(String),
    #[error("expected a {expected} algebra, found {found}")]
    WrongKind { expected: &'static str, found: &'static str },
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("invalid Lie algebra: {0}")]
    Lie(#[from] LieError),
    #[error("invalid commutative algebra: {0}")]
    Comm(#[from] CommError),
}

#[derive(Clone, Debug)]
pub enum Algebra {
    Lie(LieAlgebra),
    Comm(CommAlgebra),
}

impl Algebra {
    pub fn kind(&self) -> &'static str {
        match self {
            Algebra::Lie(_) => "lie",
            Algebra::Comm(_) => "comm",
        }
    }
}

pub fn parse_rational(s: &str) -> Result<Scalar, DocumentError> {
    let t = s.trim();
    if t.is_empty() {
        return Err(DocumentError::Rational(s.to_string()));
    }
    Scalar::from_str(t).map_err(|_| DocumentError::Rational(s.to_string()))
}

fn scalar(v: &Value) -> Result<Scalar, DocumentError> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) if n.is_i64() || n.is_u64() => parse_rational(&n.to_string()),
        other => Err(DocumentError::Rational(other.to_string())),
    }
}

fn index(v: &Value, what: &str) -> Result<usize, DocumentError> {
    v.as_u64()
        .map(|n| n as usize)
        .ok_or_else(|| DocumentError::Schema(format!("{what} must be a non-negative integer")))
}

fn vector(v: &Value, len: usize, what: &str) -> Result<Vec<Scalar>, DocumentError> {
    let arr = v
        .as_array()
        .ok_or_else(|| DocumentError::Schema(format!("{what} must be an array")))?;
    if arr.len() != len {
        return Err(DocumentError::Schema(format!(
            "{what} has {} entries, expected {len}",
            arr.len()
        )));
    }
    arr.iter().map(scalar).collect()
}

fn triplets(v: Option<&Value>, what: &str) -> Result<Vec<(usize, usize, usize, Scalar)>, DocumentError> {
    let Some(v) = v else {
        return Ok(Vec::new());
    };
    let arr = v
        .as_array()
        .ok_or_else(|| DocumentError::Schema(format!("{what} must be an array")))?;
    arr.iter()
        .map(|e| {
            let t = e
                .as_array()
                .filter(|t| t.len() == 4)
                .ok_or_else(|| DocumentError::Schema(format!("each {what} entry must be [i, j, k, coefficient]")))?;
            Ok((index(&t[0], what)?, index(&t[1], what)?, index(&t[2], what)?, scalar(&t[3])?))
        })
        .collect()
}

pub fn parse_algebra_document(text: &str) -> Result<Algebra, DocumentError> {
    let doc: Value = serde_json::from_str(text).map_err(|e| DocumentError::Json(e.to_string()))?;
    let obj = doc
        .as_object()
        .ok_or_else(|| DocumentError::Schema("document must be an object".into()))?;
    let labels: Vec<String> = obj
        .get("basis")
        .and_then(Value::as_array)
        .ok_or_else(|| DocumentError::Schema("missing \"basis\" label array".into()))?
        .iter()
        .map(|l| {
            l.as_str()
                .map(String::from)
                .ok_or_else(|| DocumentError::Schema("basis labels must be strings".into()))
        })
        .collect::<Result<_, _>>()?;
    let n = labels.len();
    if let Some(d) = obj.get("dim") {
        if index(d, "dim")? != n {
            return Err(DocumentError::Schema(format!("dim does not match the {n} basis labels")));
        }
    }
    for (entry, _) in obj.iter() {
        let known = ["kind", "basis", "dim", "brackets", "products", "unit", "idempotents"];
        if !known.contains(&entry.as_str()) {
            return Err(DocumentError::Schema(format!("unknown field {entry:?}")));
        }
    }
    match obj.get("kind").and_then(Value::as_str) {
        Some("lie") => {
            for f in ["products", "unit", "idempotents"] {
                if obj.contains_key(f) {
                    return Err(DocumentError::Schema(format!("field {f:?} is not allowed for a Lie algebra")));
                }
            }
            let entries = triplets(obj.get("brackets"), "brackets")?;
            Ok(Algebra::Lie(LieAlgebra::new(labels, &entries)?))
        }
        Some("comm") => {
            if obj.contains_key("brackets") {
                return Err(DocumentError::Schema("field \"brackets\" is not allowed for a commutative algebra".into()));
            }
            let entries = triplets(obj.get("products"), "products")?;
            let unit = obj.get("unit").map(|u| vector(u, n, "unit")).transpose()?;
            let idempotents = match obj.get("idempotents") {
                None => Vec::new(),
                Some(v) => v
                    .as_array()
                    .ok_or_else(|| DocumentError::Schema("idempotents must be an array".into()))?
                    .iter()
                    .map(|e| {
                        let point = e
                            .get("point")
                            .and_then(Value::as_str)
                            .ok_or_else(|| DocumentError::Schema("idempotent needs a \"point\" label".into()))?;
                        let coords = vector(
                            e.get("coords")
                                .ok_or_else(|| DocumentError::Schema("idempotent needs \"coords\"".into()))?,
                            n,
                            "idempotent coords",
                        )?;
                        Ok(Idempotent {
                            point: point.to_string(),
                            coords,
                        })
                    })
                    .collect::<Result<_, DocumentError>>()?,
            };
            Ok(Algebra::Comm(CommAlgebra::new(labels, &entries, unit, idempotents)?))
        }
        Some(other) => Err(DocumentError::Schema(format!("unknown kind {other:?}"))),
        None => Err(DocumentError::Schema("missing \"kind\"".into())),
    }
}

/// Catalog name, path to a JSON document, or an inline document.
pub fn resolve(name: &str) -> Result<Algebra, DocumentError> {
    if let Some(g) = catalog::lie(name) {
        return Ok(Algebra::Lie(g));
    }
    if let Some(a) = catalog::comm(name) {
        return Ok(Algebra::Comm(a));
    }
    let trimmed = name.trim_start();
    if trimmed.starts_with('{') {
        return parse_algebra_document(trimmed);
    }
    let path = Path::new(name);
    if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|e| DocumentError::Io {
            path: name.to_string(),
            message: e.to_string(),
        })?;
        return parse_algebra_document(&text);
    }
    Err(DocumentError::Unknown(name.to_string()))
}

pub fn resolve_lie(name: &str) -> Result<LieAlgebra, DocumentError> {
    match resolve(name)? {
        Algebra::Lie(g) => Ok(g),
        Algebra::Comm(_) => Err(DocumentError::WrongKind {
            expected: "lie",
            found: "comm",
        }),
    }
}

pub fn resolve_comm(name: &str) -> Result<CommAlgebra, DocumentError> {
    match resolve(name)? {
        Algebra::Comm(a) => Ok(a),
        Algebra::Lie(_) => Err(DocumentError::WrongKind {
            expected: "comm",
            found: "lie",
        }),
    }
}

pub fn scalar_json(x: &Scalar) -> Value {
    Value::String(format_scalar(x))
}

pub fn vector_json(v: &[Scalar]) -> Value {
    Value::Array(v.iter().map(scalar_json).collect())
}

pub fn matrix_json(m: &[Vec<Scalar>]) -> Value {
    Value::Array(m.iter().map(|r| vector_json(r)).collect())
}

/// The document form of an algebra; parsing it gives the algebra back.
pub fn to_document(alg: &Algebra) -> Value {
    let mut obj = Map::new();
    obj.insert("kind".into(), json!(alg.kind()));
    match alg {
        Algebra::Lie(g) => {
            obj.insert("basis".into(), json!(g.labels()));
            let brackets: Vec<Value> = g
                .upper_brackets()
                .flat_map(|((i, j), v)| v.iter().map(move |(k, c)| json!([i, j, k, format_scalar(c)])))
                .collect();
            obj.insert("brackets".into(), Value::Array(brackets));
        }
        Algebra::Comm(a) => {
            obj.insert("basis".into(), json!(a.labels()));
            let products: Vec<Value> = a
                .upper_products()
                .flat_map(|((i, j), v)| v.iter().map(move |(k, c)| json!([i, j, k, format_scalar(c)])))
                .collect();
            obj.insert("products".into(), Value::Array(products));
            if let Some(u) = a.unit() {
                obj.insert("unit".into(), vector_json(u));
            }
            if !a.idempotents().is_empty() {
                let ids: Vec<Value> = a
                    .idempotents()
                    .iter()
                    .map(|e| json!({"point": e.point, "coords": vector_json(&e.coords)}))
                    .collect();
                obj.insert("idempotents".into(), Value::Array(ids));
            }
        }
    }
    Value::Object(obj)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{q, qf};

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("-3/6").unwrap(), qf(-1, 2));
        assert_eq!(parse_rational(" 7 ").unwrap(), q(7));
        assert!(parse_rational("2/0").is_err());
        assert!(parse_rational("1.5").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn sl2_document() {
        let text = r#"{"kind":"lie","basis":["h","e","f"],
            "brackets":[[0,1,1,"2"],[0,2,2,"-2"],[1,2,0,"1"]]}"#;
        match parse_algebra_document(text).unwrap() {
            Algebra::Lie(g) => assert_eq!(g, catalog::sl2()),
            _ => panic!("expected a Lie algebra"),
        }
    }

    #[test]
    fn zero_denominator_is_rejected() {
        let text = r#"{"kind":"lie","basis":["a","b"],"brackets":[[0,1,1,"2/0"]]}"#;
        assert!(matches!(parse_algebra_document(text), Err(DocumentError::Rational(_))));
    }

    #[test]
    fn jacobi_failure_is_reported() {
        let text = r#"{"kind":"lie","basis":["x","y","z"],
            "brackets":[[0,1,2,"1"],[1,2,0,"1"],[0,2,0,"1"]]}"#;
        assert!(matches!(parse_algebra_document(text), Err(DocumentError::Lie(_))));
    }

    #[test]
    fn round_trip_through_documents() {
        for name in ["sl3", "heis3", "sl2+so3"] {
            let alg = resolve(name).unwrap();
            let text = to_document(&alg).to_string();
            match (alg, parse_algebra_document(&text).unwrap()) {
                (Algebra::Lie(a), Algebra::Lie(b)) => assert_eq!(a, b),
                _ => panic!("kind changed"),
            }
        }
        for name in ["fun:3", "sq2", "fun:2*jets:2"] {
            let alg = resolve(name).unwrap();
            let text = to_document(&alg).to_string();
            match (alg, parse_algebra_document(&text).unwrap()) {
                (Algebra::Comm(a), Algebra::Comm(b)) => assert_eq!(a, b),
                _ => panic!("kind changed"),
            }
        }
    }

    #[test]
    fn resolution_errors() {
        assert!(matches!(resolve("nonsense"), Err(DocumentError::Unknown(_))));
        assert!(matches!(resolve_lie("sq2"), Err(DocumentError::WrongKind { .. })));
        assert!(matches!(resolve("{"), Err(DocumentError::Json(_))));
        assert!(matches!(
            resolve(r#"{"kind":"lie","basis":["a"],"extra":1}"#),
            Err(DocumentError::Schema(_))
        ));
    }
}
