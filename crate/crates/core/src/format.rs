//! JSON file formats for complexes, fields, gauge assignments and results.
//!
//! Group elements are written as an angle (U1) or a unit quaternion
//! `[w, x, y, z]` (SO3, SU2). Face values are `{"source", "target", "lift"}`:
//! for U1 the lift is the unwrapped angle, for SO3 and SU2 `source` and
//! `target` are the SU(2) lift endpoints and no `lift` key is written.
//! Floats use serde_json's shortest round-trip representation, so a
//! write/read cycle is lossless.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value as Json};
use thiserror::Error;

use crate::charge::{BundleClassification, ChargeResult};
use crate::complex::{build_builtin, ComplexError, Simplex, SkeletalComplex, VertexId};
use crate::field::{CellValue, ConsistencyReport, FieldError, GaugeAssignment, Hlgf, Value, EXACT_TOLERANCE};
use crate::gauge_group::{Backend, GroupElement, LoopClass, Pi1Element, Quat};

/// Quaternions further than this from unit norm are rejected.
pub const UNIT_NORM_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Shape(String),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

fn shape(msg: impl Into<String>) -> FormatError {
    FormatError::Shape(msg.into())
}

fn quat_json(q: &Quat) -> Json {
    json!([q.w, q.i, q.j, q.k])
}

pub fn element_to_json(g: &GroupElement) -> Json {
    match g {
        GroupElement::U1(a) => json!(a),
        GroupElement::SO3(q) | GroupElement::SU2(q) => quat_json(q),
    }
}

fn quat_from_json(v: &Json) -> Result<Quat, FormatError> {
    let arr = v
        .as_array()
        .filter(|a| a.len() == 4)
        .ok_or_else(|| shape(format!("expected a quaternion [w, x, y, z], got {v}")))?;
    let c: Vec<f64> = arr
        .iter()
        .map(|x| x.as_f64().ok_or_else(|| shape(format!("non-numeric quaternion entry {x}"))))
        .collect::<Result<_, _>>()?;
    let q = Quat::new(c[0], c[1], c[2], c[3]);
    if (q.norm() - 1.0).abs() > UNIT_NORM_TOLERANCE {
        return Err(shape(format!("quaternion {v} is not unit")));
    }
    Ok(q)
}

pub fn element_from_json(backend: Backend, v: &Json) -> Result<GroupElement, FormatError> {
    Ok(match backend {
        Backend::U1 => GroupElement::U1(
            v.as_f64()
                .ok_or_else(|| shape(format!("expected a U1 angle, got {v}")))?,
        ),
        Backend::SO3 => GroupElement::SO3(quat_from_json(v)?),
        Backend::SU2 => GroupElement::SU2(quat_from_json(v)?),
    })
}

pub fn loop_to_json(l: &LoopClass) -> Json {
    match l {
        LoopClass::U1 { base, lift } => json!({
            "source": base,
            "target": l.target().angle(),
            "lift": lift,
        }),
        LoopClass::SO3 { start, end } | LoopClass::SU2 { start, end } => json!({
            "source": quat_json(start),
            "target": quat_json(end),
        }),
    }
}

pub fn loop_from_json(backend: Backend, v: &Json, tol: f64) -> Result<LoopClass, FormatError> {
    let get = |k: &str| v.get(k).ok_or_else(|| shape(format!("loop value lacks `{k}`: {v}")));
    Ok(match backend {
        Backend::U1 => {
            let base = get("source")?
                .as_f64()
                .ok_or_else(|| shape("U1 loop source must be a number"))?;
            let lift = get("lift")?
                .as_f64()
                .ok_or_else(|| shape("U1 loop lift must be a number"))?;
            let l = LoopClass::U1 { base, lift };
            if let Some(t) = v.get("target") {
                let t = element_from_json(backend, t)?;
                if !l.target().approx_eq(&t, tol) {
                    return Err(shape(format!("U1 loop target disagrees with source + lift: {v}")));
                }
            }
            l
        }
        Backend::SO3 => LoopClass::SO3 {
            start: quat_from_json(get("source")?)?,
            end: quat_from_json(get("target")?)?,
        },
        Backend::SU2 => LoopClass::SU2 {
            start: quat_from_json(get("source")?)?,
            end: quat_from_json(get("target")?)?,
        },
    })
}

fn key_simplex(key: &str, dim: usize) -> Result<Simplex, FormatError> {
    Simplex::from_key(key)
        .filter(|s| s.dim() == dim)
        .ok_or_else(|| shape(format!("`{key}` is not a {dim}-simplex key")))
}

fn object<'a>(v: &'a Json, what: &str) -> Result<&'a Map<String, Json>, FormatError> {
    v.as_object()
        .ok_or_else(|| shape(format!("{what} must be a JSON object")))
}

pub fn complex_to_json(c: &SkeletalComplex) -> Json {
    let mut simplices = Map::new();
    for k in 1..=c.dim() {
        let list: Vec<&Simplex> = c.simplices(k).collect();
        simplices.insert(k.to_string(), json!(list));
    }
    let mut out = json!({
        "name": c.name(),
        "dim": c.dim(),
        "simplices": simplices,
    });
    if let Some(o) = c.orientation() {
        let signs: Map<String, Json> = o.iter().map(|(s, e)| (s.key(), json!(e))).collect();
        out["orientation"] = Json::Object(signs);
    }
    out
}

/// Reads a complex and validates it; an invalid complex yields
/// [`ComplexError::Invalid`] carrying the full report.
pub fn complex_from_json(v: &Json) -> Result<SkeletalComplex, FormatError> {
    let c = complex_from_json_unchecked(v)?;
    let report = c.validate();
    if !report.is_empty() {
        return Err(ComplexError::Invalid {
            name: c.name().to_string(),
            report,
        }
        .into());
    }
    Ok(c)
}

/// Reads a complex without validating it.
pub fn complex_from_json_unchecked(v: &Json) -> Result<SkeletalComplex, FormatError> {
    let obj = object(v, "complex")?;
    let name = obj
        .get("name")
        .and_then(Json::as_str)
        .ok_or_else(|| shape("complex lacks a string `name`"))?;
    let dim = obj
        .get("dim")
        .and_then(Json::as_u64)
        .ok_or_else(|| shape("complex lacks an integer `dim`"))? as usize;
    if !(1..=3).contains(&dim) {
        return Err(shape(format!("complex dimension {dim} outside 1..=3")));
    }
    let simplices = object(
        obj.get("simplices").ok_or_else(|| shape("complex lacks `simplices`"))?,
        "simplices",
    )?;
    if let Some(k) = simplices.keys().find(|k| !(1..=dim).any(|d| d.to_string() == **k)) {
        return Err(shape(format!("simplices key `{k}` outside 1..={dim}")));
    }
    let mut by_dim = Vec::new();
    for k in 1..=dim {
        let list: Vec<Vec<VertexId>> = match simplices.get(&k.to_string()) {
            Some(l) => serde_json::from_value(l.clone())?,
            None => Vec::new(),
        };
        let level = list
            .iter()
            .map(|vs| Simplex::new(vs).ok_or_else(|| shape(format!("bad simplex {vs:?}"))))
            .collect::<Result<Vec<_>, _>>()?;
        by_dim.push(level);
    }
    let orientation = match obj.get("orientation") {
        None | Some(Json::Null) => None,
        Some(o) => {
            let mut signs = BTreeMap::new();
            for (key, sign) in object(o, "orientation")? {
                let s = key_simplex(key, 2)?;
                let e = sign
                    .as_i64()
                    .ok_or_else(|| shape(format!("orientation of {key} must be an integer")))?;
                signs.insert(s, e.clamp(-128, 127) as i8);
            }
            Some(signs)
        }
    };
    Ok(SkeletalComplex::from_parts(name, by_dim, orientation))
}

/// Resolves a complex reference: a built-in name or an inline complex.
fn complex_ref(v: &Json) -> Result<SkeletalComplex, FormatError> {
    match v {
        Json::String(name) => Ok(build_builtin(name)?),
        other => complex_from_json(other),
    }
}

fn complex_ref_json(c: &SkeletalComplex) -> Json {
    match build_builtin(c.name()) {
        Ok(b) if &b == c => json!(c.name()),
        _ => complex_to_json(c),
    }
}

pub fn field_to_json(f: &Hlgf) -> Json {
    let edges: Map<String, Json> = f
        .edges()
        .iter()
        .map(|(s, g)| (s.key(), element_to_json(g)))
        .collect();
    let faces: Map<String, Json> = f
        .faces()
        .iter()
        .map(|(s, l)| (s.key(), loop_to_json(l)))
        .collect();
    let mut out = json!({
        "group": f.backend().to_string(),
        "complex": complex_ref_json(f.complex()),
        "edges": edges,
        "faces": faces,
        "tolerance": f.tolerance(),
    });
    if !f.cells3().is_empty() {
        let cells: Map<String, Json> = f
            .cells3()
            .iter()
            .map(|(s, c)| {
                (
                    s.key(),
                    json!({"source": loop_to_json(&c.source), "target": loop_to_json(&c.target)}),
                )
            })
            .collect();
        out["cells3"] = Json::Object(cells);
    }
    out
}

fn backend_of(obj: &Map<String, Json>) -> Result<Backend, FormatError> {
    obj.get("group")
        .and_then(Json::as_str)
        .ok_or_else(|| shape("missing string `group`"))?
        .parse()
        .map_err(|e: crate::gauge_group::GroupError| shape(e.to_string()))
}

/// The parts of a field file before validation.
pub struct FieldParts {
    pub complex: SkeletalComplex,
    pub backend: Backend,
    pub edges: BTreeMap<Simplex, GroupElement>,
    pub faces: BTreeMap<Simplex, LoopClass>,
    pub cells3: Option<BTreeMap<Simplex, CellValue>>,
    pub tolerance: f64,
}

impl FieldParts {
    pub fn build(self) -> Result<Hlgf, FieldError> {
        Hlgf::new(
            self.complex,
            self.backend,
            self.edges,
            self.faces,
            self.cells3,
            self.tolerance,
        )
    }

    /// Assembles the field without validation, deriving missing 3-cells is
    /// not attempted.
    pub fn build_unchecked(self) -> Hlgf {
        Hlgf::from_parts_unchecked(
            self.complex,
            self.backend,
            self.edges,
            self.faces,
            self.cells3.unwrap_or_default(),
            self.tolerance,
        )
    }
}

pub fn field_parts_from_json(v: &Json) -> Result<FieldParts, FormatError> {
    let obj = object(v, "field")?;
    let backend = backend_of(obj)?;
    let complex = complex_ref(obj.get("complex").ok_or_else(|| shape("field lacks `complex`"))?)?;
    let tolerance = match obj.get("tolerance") {
        None => EXACT_TOLERANCE,
        Some(t) => t
            .as_f64()
            .filter(|t| *t > 0.0)
            .ok_or_else(|| shape("`tolerance` must be a positive number"))?,
    };
    let section = |k: &str| -> Result<Map<String, Json>, FormatError> {
        match obj.get(k) {
            None => Ok(Map::new()),
            Some(v) => object(v, k).cloned(),
        }
    };
    let mut edges = BTreeMap::new();
    for (k, g) in section("edges")? {
        edges.insert(key_simplex(&k, 1)?, element_from_json(backend, &g)?);
    }
    let mut faces = BTreeMap::new();
    for (k, l) in section("faces")? {
        faces.insert(key_simplex(&k, 2)?, loop_from_json(backend, &l, tolerance)?);
    }
    let cells3 = match obj.get("cells3") {
        None => None,
        Some(_) => {
            let mut cells = BTreeMap::new();
            for (k, c) in section("cells3")? {
                let part = |p: &str| {
                    c.get(p)
                        .ok_or_else(|| shape(format!("cell {k} lacks `{p}`")))
                        .and_then(|l| loop_from_json(backend, l, tolerance))
                };
                cells.insert(
                    key_simplex(&k, 3)?,
                    CellValue {
                        source: part("source")?,
                        target: part("target")?,
                    },
                );
            }
            Some(cells)
        }
    };
    Ok(FieldParts {
        complex,
        backend,
        edges,
        faces,
        cells3,
        tolerance,
    })
}

pub fn field_from_json(v: &Json) -> Result<Hlgf, FormatError> {
    Ok(field_parts_from_json(v)?.build()?)
}

pub fn gauge_to_json(backend: Backend, g: &GaugeAssignment) -> Json {
    let assignment: Map<String, Json> = g
        .iter()
        .map(|(v, x)| (v.to_string(), element_to_json(x)))
        .collect();
    json!({"group": backend.to_string(), "assignment": assignment})
}

pub fn gauge_from_json(v: &Json) -> Result<(Backend, GaugeAssignment), FormatError> {
    let obj = object(v, "gauge assignment")?;
    let backend = backend_of(obj)?;
    let mut g = GaugeAssignment::new();
    let entries = object(
        obj.get("assignment")
            .ok_or_else(|| shape("gauge file lacks `assignment`"))?,
        "assignment",
    )?;
    for (k, x) in entries {
        let vertex: VertexId = k
            .parse()
            .map_err(|_| shape(format!("`{k}` is not a vertex id")))?;
        g.insert(vertex, element_from_json(backend, x)?);
    }
    Ok((backend, g))
}

pub fn pi1_to_json(p: &Pi1Element) -> Json {
    match p {
        Pi1Element::U1(n) => json!(n),
        Pi1Element::SO3(_) => json!(p.to_string()),
        Pi1Element::SU2 => json!(0),
    }
}

pub fn charge_to_json(q: &ChargeResult) -> Json {
    json!({
        "Q": pi1_to_json(&q.value),
        "route": q.route.to_string(),
        "residual": q.residual,
    })
}

pub fn value_to_json(v: &Value) -> Json {
    match v {
        Value::Element(g) => json!({"kind": "element", "value": element_to_json(g)}),
        Value::Loop(l) => json!({"kind": "loop", "value": loop_to_json(l)}),
        Value::Cell(c) => json!({
            "kind": "cell",
            "value": {"source": loop_to_json(&c.source), "target": loop_to_json(&c.target)},
        }),
    }
}

pub fn report_to_json(r: &ConsistencyReport) -> Json {
    let violations: Vec<Json> = r
        .violations
        .iter()
        .map(|v| {
            json!({
                "simplex": v.simplex.key(),
                "condition": v.condition,
                "residual": v.residual,
                "pi1": v.pi1.as_ref().map(pi1_to_json),
            })
        })
        .collect();
    json!({"consistent": r.is_empty(), "violations": violations})
}

pub fn classification_to_json(b: &BundleClassification) -> Json {
    json!({
        "base_dim": b.base_dim,
        "group": b.backend.to_string(),
        "invariant": b.invariant.as_ref().map(pi1_to_json),
        "statement": b.statement,
    })
}
