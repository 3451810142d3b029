//! The JSON description of a simplex or Gram matrix.
//!
//! ```json
//! {"geometry": "hyperbolic", "model": "poincare", "vertices": [[0, 0], [0.5, 0], [0, 0.5]], "label": "t"}
//! {"gram": [[1, -0.5, -0.5], [-0.5, 1, -0.5], [-0.5, -0.5, 1]]}
//! ```
//!
//! `model` applies to hyperbolic vertices only: `"hyperboloid"` (default)
//! gives points of the upper sheet with the time-like coordinate last,
//! `"poincare"` gives points of the open unit ball. Spherical vertices are
//! unit vectors with one more coordinate than the dimension; Euclidean
//! vertices are plain coordinates.

use nalgebra::DVector;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::geometry::{hyperboloid_to_poincare, poincare_to_hyperboloid, GeometryTag, ModelPoint};
use crate::numeric::SymmetricMatrix;
use crate::simplex::Simplex;

/// Coordinate model for hyperbolic vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HyperbolicModel {
    Hyperboloid,
    Poincare,
}

/// A parsed and validated description.
#[derive(Debug, Clone, PartialEq)]
pub enum SpecBody {
    Simplex(Simplex),
    Gram(SymmetricMatrix),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimplexSpec {
    pub label: Option<String>,
    pub body: SpecBody,
}

fn spec_error(path: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Spec {
        path: path.into(),
        message: message.into(),
    }
}

fn number_rows(value: &Value, path: &str) -> Result<Vec<Vec<f64>>> {
    let rows = value
        .as_array()
        .ok_or_else(|| spec_error(path, "expected an array of arrays of numbers"))?;
    rows.iter()
        .enumerate()
        .map(|(i, row)| {
            let row_path = format!("{path}[{i}]");
            let entries = row
                .as_array()
                .ok_or_else(|| spec_error(&row_path, "expected an array of numbers"))?;
            entries
                .iter()
                .enumerate()
                .map(|(j, v)| {
                    v.as_f64()
                        .filter(|x| x.is_finite())
                        .ok_or_else(|| spec_error(format!("{row_path}[{j}]"), "expected a finite number"))
                })
                .collect()
        })
        .collect()
}

/// Parses a description, reporting the offending field on failure.
pub fn parse_simplex_spec(text: &str) -> Result<SimplexSpec> {
    let value: Value = serde_json::from_str(text)
        .map_err(|e| spec_error(format!("line {} column {}", e.line(), e.column()), e.to_string()))?;
    parse_spec_value(&value)
}

pub fn parse_spec_value(value: &Value) -> Result<SimplexSpec> {
    let obj = value
        .as_object()
        .ok_or_else(|| spec_error("$", "expected a JSON object"))?;
    for key in obj.keys() {
        if !matches!(key.as_str(), "geometry" | "model" | "vertices" | "gram" | "label") {
            return Err(spec_error(key.as_str(), "unknown field"));
        }
    }
    let label = match obj.get("label") {
        None | Some(Value::Null) => None,
        Some(Value::String(s)) => Some(s.clone()),
        Some(_) => return Err(spec_error("label", "expected a string")),
    };

    if let Some(gram) = obj.get("gram") {
        for key in ["geometry", "model", "vertices"] {
            if obj.contains_key(key) {
                return Err(spec_error(key, "not allowed together with gram"));
            }
        }
        let rows = number_rows(gram, "gram")?;
        let matrix = SymmetricMatrix::from_rows(&rows).map_err(|e| spec_error("gram", e.to_string()))?;
        return Ok(SimplexSpec {
            label,
            body: SpecBody::Gram(matrix),
        });
    }

    let tag = match obj.get("geometry") {
        None => return Err(spec_error("geometry", "missing; expected spherical, euclidean or hyperbolic (or give gram)")),
        Some(Value::String(s)) => match s.as_str() {
            "spherical" => GeometryTag::Spherical,
            "euclidean" => GeometryTag::Euclidean,
            "hyperbolic" => GeometryTag::Hyperbolic,
            other => return Err(spec_error("geometry", format!("unknown geometry {other:?}"))),
        },
        Some(_) => return Err(spec_error("geometry", "expected a string")),
    };
    let model = match (obj.get("model"), tag) {
        (None, _) => HyperbolicModel::Hyperboloid,
        (Some(Value::String(s)), GeometryTag::Hyperbolic) => match s.as_str() {
            "hyperboloid" => HyperbolicModel::Hyperboloid,
            "poincare" => HyperbolicModel::Poincare,
            other => return Err(spec_error("model", format!("unknown model {other:?}; expected hyperboloid or poincare"))),
        },
        (Some(_), GeometryTag::Hyperbolic) => return Err(spec_error("model", "expected a string")),
        (Some(_), _) => return Err(spec_error("model", "only hyperbolic vertices take a model")),
    };
    let rows = number_rows(
        obj.get("vertices").ok_or_else(|| spec_error("vertices", "missing"))?,
        "vertices",
    )?;
    let n = rows.len().saturating_sub(1);
    let expected = match model {
        HyperbolicModel::Poincare => n,
        HyperbolicModel::Hyperboloid => tag.ambient_dim(n),
    };
    let vertices = rows
        .into_iter()
        .enumerate()
        .map(|(i, row)| {
            if row.len() != expected {
                return Err(spec_error(
                    format!("vertices[{i}]"),
                    format!("{} coordinates, expected {expected} for {} vertices", row.len(), n + 1),
                ));
            }
            let coords = DVector::from_vec(row);
            let point = match model {
                HyperbolicModel::Poincare => poincare_to_hyperboloid(&coords),
                HyperbolicModel::Hyperboloid => ModelPoint::new(tag, coords),
            };
            point.map_err(|e| spec_error(format!("vertices[{i}]"), e.to_string()))
        })
        .collect::<Result<Vec<_>>>()?;
    let simplex = Simplex::new(tag, vertices).map_err(|e| spec_error("vertices", e.to_string()))?;
    Ok(SimplexSpec {
        label,
        body: SpecBody::Simplex(simplex),
    })
}

/// JSON description of a simplex, with hyperbolic vertices in the given model.
pub fn simplex_to_value(s: &Simplex, model: HyperbolicModel, label: Option<&str>) -> Value {
    let mut obj = Map::new();
    obj.insert("geometry".into(), json!(s.tag().name()));
    let vertices: Vec<Vec<f64>> = match (s.tag(), model) {
        (GeometryTag::Hyperbolic, HyperbolicModel::Poincare) => {
            obj.insert("model".into(), json!("poincare"));
            s.vertices()
                .iter()
                .map(|v| hyperboloid_to_poincare(v).map(|y| y.iter().copied().collect()).unwrap_or_default())
                .collect()
        }
        (GeometryTag::Hyperbolic, HyperbolicModel::Hyperboloid) => {
            obj.insert("model".into(), json!("hyperboloid"));
            s.vertex_rows()
        }
        _ => s.vertex_rows(),
    };
    obj.insert("vertices".into(), json!(vertices));
    if let Some(l) = label {
        obj.insert("label".into(), json!(l));
    }
    Value::Object(obj)
}

pub fn gram_to_value(g: &SymmetricMatrix, label: Option<&str>) -> Value {
    let mut obj = Map::new();
    obj.insert("gram".into(), json!(g.to_rows()));
    if let Some(l) = label {
        obj.insert("label".into(), json!(l));
    }
    Value::Object(obj)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path_of(text: &str) -> String {
        match parse_simplex_spec(text) {
            Err(Error::Spec { path, .. }) => path,
            other => panic!("expected a spec error, got {other:?}"),
        }
    }

    #[test]
    fn orthant_and_gram() {
        let s = parse_simplex_spec(r#"{"geometry":"spherical","vertices":[[1,0,0],[0,1,0],[0,0,1]]}"#).unwrap();
        assert!(matches!(s.body, SpecBody::Simplex(ref x) if x.tag() == GeometryTag::Spherical));
        let g = parse_simplex_spec(r#"{"gram":[[1,-0.5,-0.5],[-0.5,1,-0.5],[-0.5,-0.5,1]],"label":"regular"}"#).unwrap();
        assert_eq!(g.label.as_deref(), Some("regular"));
        assert!(matches!(g.body, SpecBody::Gram(_)));
    }

    #[test]
    fn poincare_input_matches_hyperboloid() {
        let p = parse_simplex_spec(r#"{"geometry":"hyperbolic","model":"poincare","vertices":[[0,0],[0.5,0],[0,0.5]]}"#).unwrap();
        let SpecBody::Simplex(s) = p.body else { panic!() };
        // y = 0.5 maps to x = (2y, 1 + y^2) / (1 - y^2) = (4/3, 5/3).
        assert!((s.vertex(1).coords()[0] - 4.0 / 3.0).abs() < 1e-15);
        assert!((s.vertex(1).coords()[2] - 5.0 / 3.0).abs() < 1e-15);
        let back = simplex_to_value(&s, HyperbolicModel::Poincare, None);
        let again = parse_spec_value(&back).unwrap();
        let SpecBody::Simplex(t) = again.body else { panic!() };
        for i in 0..3 {
            assert!((t.vertex(i).coords() - s.vertex(i).coords()).amax() < 1e-14);
        }
    }

    #[test]
    fn diagnostics_name_the_field() {
        assert_eq!(path_of(r#"{"geometry":"spherical","vertices":[[1,0,0],[0,1,0],[-0.6,0.8,0]]}"#), "vertices");
        assert_eq!(path_of(r#"{"geometry":"spherical","vertices":[[1,0,0],[0,1,0],[0,0,2]]}"#), "vertices[2]");
        assert_eq!(path_of(r#"{"geometry":"euclidean","vertices":[[0,0],[1,"a"],[0,1]]}"#), "vertices[1][1]");
        assert_eq!(path_of(r#"{"geometry":"planar","vertices":[]}"#), "geometry");
        assert_eq!(path_of(r#"{"geometry":"euclidean","model":"poincare","vertices":[]}"#), "model");
        assert_eq!(path_of(r#"{"gram":[[1,0],[0,1]],"vertices":[]}"#), "vertices");
        assert_eq!(path_of(r#"{"gram":[[1,0],[0.5,1]]}"#), "gram");
        assert_eq!(path_of(r#"{"colour":1}"#), "colour");
        assert_eq!(path_of(r#"[1, 2]"#), "$");
        assert!(path_of("{\n  \"gram\": [1,\n").starts_with("line "));
    }

    #[test]
    fn value_roundtrip_is_exact() {
        let s = crate::random::random_simplex(GeometryTag::Spherical, 3, 9).unwrap();
        let text = serde_json::to_string(&simplex_to_value(&s, HyperbolicModel::Hyperboloid, Some("x"))).unwrap();
        let back = parse_simplex_spec(&text).unwrap();
        assert_eq!(back.body, SpecBody::Simplex(s));
        assert_eq!(back.label.as_deref(), Some("x"));
    }
}
