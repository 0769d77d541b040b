//! Ordered simplicial complexes with their skeletal filtration.
//!
//! A [`SkeletalComplex`] stores its simplices as strictly increasing vertex
//! tuples (the simplicial-set convention), one set per dimension. The
//! skeleton `X_k` is the union of the simplices of dimension `<= k`.
//! Two-dimensional complexes may carry a global orientation: one sign per
//! top simplex, relative to the orientation induced by the vertex order.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type VertexId = u32;

/// Largest vertex id usable in the compact `G124` / `"124"` notation.
pub const MAX_VERTEX_ID: VertexId = 9;

/// A vertex tuple of length 1..=4.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Simplex {
    len: u8,
    verts: [VertexId; 4],
}

impl Simplex {
    pub fn new(verts: &[VertexId]) -> Option<Self> {
        if verts.is_empty() || verts.len() > 4 {
            return None;
        }
        let mut v = [0; 4];
        v[..verts.len()].copy_from_slice(verts);
        Some(Self {
            len: verts.len() as u8,
            verts: v,
        })
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.verts[..self.len as usize]
    }

    /// Simplicial dimension (number of vertices minus one).
    pub fn dim(&self) -> usize {
        self.len as usize - 1
    }

    pub fn is_ordered(&self) -> bool {
        self.vertices().windows(2).all(|w| w[0] < w[1])
    }

    /// The facet obtained by deleting the vertex at position `i`.
    pub fn facet(&self, i: usize) -> Simplex {
        let rest: Vec<VertexId> = self
            .vertices()
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != i)
            .map(|(_, &v)| v)
            .collect();
        Simplex::new(&rest).expect("facet of a simplex with at least two vertices")
    }

    pub fn facets(&self) -> Vec<Simplex> {
        if self.len < 2 {
            return Vec::new();
        }
        (0..self.len as usize).map(|i| self.facet(i)).collect()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.vertices().contains(&v)
    }

    /// Compact key (`"124"`); only meaningful for single-digit ids.
    pub fn key(&self) -> String {
        self.vertices().iter().map(|v| v.to_string()).collect()
    }

    /// Parses a compact key such as `"124"`.
    pub fn from_key(key: &str) -> Option<Self> {
        let verts: Option<Vec<VertexId>> = key.chars().map(|c| c.to_digit(10)).collect();
        Simplex::new(&verts?)
    }
}

impl fmt::Debug for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.key())
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.key())
    }
}

impl Serialize for Simplex {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.vertices().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Simplex {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Vec::<VertexId>::deserialize(d)?;
        Simplex::new(&v).ok_or_else(|| serde::de::Error::custom("simplex must have 1 to 4 vertices"))
    }
}

/// A top 2-simplex together with its coherent orientation sign.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OrientedFace {
    pub face: Simplex,
    pub sign: i8,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ComplexError {
    #[error("unknown built-in complex `{0}`")]
    UnknownBuiltin(String),
    #[error("complex `{name}` is invalid: {report}")]
    Invalid {
        name: String,
        report: ValidationReport,
    },
    #[error("complex `{0}` carries no orientation")]
    NoOrientation(String),
    #[error("operation requires a {expected}-dimensional complex, `{name}` has dimension {found}")]
    WrongDimension {
        name: String,
        expected: usize,
        found: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    /// A listed simplex has a facet that is not listed.
    MissingFace { simplex: Simplex, face: Simplex },
    /// Vertex tuple not strictly increasing.
    Unordered { simplex: Simplex },
    /// Simplex listed under the wrong dimension, or of unsupported size.
    BadDimension { simplex: Simplex, listed_as: usize },
    /// Vertex id outside 1..=9.
    BadVertex { vertex: VertexId },
    /// Two incident top faces induce the same direction on an edge.
    Incoherent { edge: Simplex, faces: Vec<Simplex> },
    /// An edge lies in more than two oriented faces.
    NonManifoldEdge { edge: Simplex, faces: Vec<Simplex> },
    /// Orientation sign missing, not ±1, or attached to a non-face.
    BadOrientation { simplex: Simplex },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::MissingFace { simplex, face } => {
                write!(f, "closure: {simplex} lists face {face} which is missing")
            }
            Violation::Unordered { simplex } => write!(f, "ordering: {simplex} is not increasing"),
            Violation::BadDimension { simplex, listed_as } => {
                write!(f, "{simplex} listed as a {listed_as}-simplex")
            }
            Violation::BadVertex { vertex } => write!(f, "vertex id {vertex} outside 1..=9"),
            Violation::Incoherent { edge, faces } => {
                write!(f, "orientation: faces {faces:?} induce the same direction on {edge}")
            }
            Violation::NonManifoldEdge { edge, faces } => {
                write!(f, "edge {edge} lies in {} faces {faces:?}", faces.len())
            }
            Violation::BadOrientation { simplex } => write!(f, "orientation entry for {simplex}"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.violations.iter().map(|v| v.to_string()).collect();
        f.write_str(&parts.join("; "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkeletalComplex {
    name: String,
    dim: usize,
    vertices: Vec<VertexId>,
    /// `simplices[k]` holds the k-simplices; index 0 holds the vertices.
    simplices: Vec<BTreeSet<Simplex>>,
    orientation: Option<BTreeMap<Simplex, i8>>,
}

impl SkeletalComplex {
    /// Builds and validates a complex. `by_dim[k - 1]` lists the k-simplices.
    pub fn new(
        name: impl Into<String>,
        by_dim: Vec<Vec<Simplex>>,
        orientation: Option<BTreeMap<Simplex, i8>>,
    ) -> Result<Self, ComplexError> {
        let c = Self::from_parts(name, by_dim, orientation);
        let report = c.validate();
        if report.is_empty() {
            Ok(c)
        } else {
            Err(ComplexError::Invalid {
                name: c.name,
                report,
            })
        }
    }

    /// Builds without validation, so that [`validate`](Self::validate) can report on it.
    pub fn from_parts(
        name: impl Into<String>,
        by_dim: Vec<Vec<Simplex>>,
        orientation: Option<BTreeMap<Simplex, i8>>,
    ) -> Self {
        let dim = by_dim.len();
        let mut simplices = vec![BTreeSet::new(); dim + 1];
        let mut verts = BTreeSet::new();
        for (k, list) in by_dim.into_iter().enumerate() {
            for s in list {
                verts.extend(s.vertices().iter().copied());
                simplices[k + 1].insert(s);
            }
        }
        simplices[0] = verts
            .iter()
            .map(|&v| Simplex::new(&[v]).unwrap())
            .collect();
        Self {
            name: name.into(),
            dim,
            vertices: verts.into_iter().collect(),
            simplices,
            orientation,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    /// The k-simplices (k = 0 gives the vertices as 1-tuples).
    pub fn simplices(&self, k: usize) -> impl Iterator<Item = &Simplex> {
        self.simplices.get(k).into_iter().flatten()
    }

    pub fn edges(&self) -> impl Iterator<Item = &Simplex> {
        self.simplices(1)
    }

    pub fn faces(&self) -> impl Iterator<Item = &Simplex> {
        self.simplices(2)
    }

    pub fn tetrahedra(&self) -> impl Iterator<Item = &Simplex> {
        self.simplices(3)
    }

    pub fn contains(&self, s: &Simplex) -> bool {
        self.simplices
            .get(s.dim())
            .is_some_and(|set| set.contains(s))
    }

    pub fn has_vertex(&self, v: VertexId) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    pub fn orientation(&self) -> Option<&BTreeMap<Simplex, i8>> {
        self.orientation.as_ref()
    }

    /// The edge joining two vertices, if present.
    pub fn edge_between(&self, a: VertexId, b: VertexId) -> Option<Simplex> {
        let s = Simplex::new(&[a.min(b), a.max(b)])?;
        (a != b && self.contains(&s)).then_some(s)
    }

    /// Neighbours of `v` in the 1-skeleton, ascending.
    pub fn neighbours(&self, v: VertexId) -> Vec<VertexId> {
        self.edges()
            .filter(|e| e.contains(v))
            .map(|e| {
                let vs = e.vertices();
                if vs[0] == v {
                    vs[1]
                } else {
                    vs[0]
                }
            })
            .collect()
    }

    /// Top simplices incident to a given simplex.
    pub fn cofaces(&self, s: &Simplex) -> Vec<Simplex> {
        self.simplices(s.dim() + 1)
            .filter(|t| s.vertices().iter().all(|&v| t.contains(v)))
            .copied()
            .collect()
    }

    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        for &v in &self.vertices {
            if v == 0 || v > MAX_VERTEX_ID {
                violations.push(Violation::BadVertex { vertex: v });
            }
        }
        for k in 1..=self.dim {
            for s in &self.simplices[k] {
                if s.dim() != k {
                    violations.push(Violation::BadDimension {
                        simplex: *s,
                        listed_as: k,
                    });
                    continue;
                }
                if !s.is_ordered() {
                    violations.push(Violation::Unordered { simplex: *s });
                }
                if k >= 2 {
                    for face in s.facets() {
                        if !self.simplices[k - 1].contains(&face) {
                            violations.push(Violation::MissingFace { simplex: *s, face });
                        }
                    }
                }
            }
        }
        if let Some(orient) = &self.orientation {
            violations.extend(self.orientation_violations(orient));
        }
        ValidationReport { violations }
    }

    fn orientation_violations(&self, orient: &BTreeMap<Simplex, i8>) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.dim != 2 {
            return out;
        }
        for (s, &sign) in orient {
            if !self.simplices[2].contains(s) || (sign != 1 && sign != -1) {
                out.push(Violation::BadOrientation { simplex: *s });
            }
        }
        for f in &self.simplices[2] {
            if !orient.contains_key(f) {
                out.push(Violation::BadOrientation { simplex: *f });
            }
        }
        if !out.is_empty() {
            return out;
        }
        for e in &self.simplices[1] {
            let incident = self.cofaces(e);
            if incident.len() > 2 {
                out.push(Violation::NonManifoldEdge {
                    edge: *e,
                    faces: incident,
                });
            } else if incident.len() == 2 {
                let a = induced_edge_sign(&incident[0], e) * orient[&incident[0]];
                let b = induced_edge_sign(&incident[1], e) * orient[&incident[1]];
                if a == b {
                    out.push(Violation::Incoherent {
                        edge: *e,
                        faces: incident,
                    });
                }
            }
        }
        out
    }

    /// One entry per 2-simplex with its coherent orientation sign.
    pub fn oriented_faces(&self) -> Result<Vec<OrientedFace>, ComplexError> {
        if self.dim != 2 {
            return Err(ComplexError::WrongDimension {
                name: self.name.clone(),
                expected: 2,
                found: self.dim,
            });
        }
        let orient = self
            .orientation
            .as_ref()
            .ok_or_else(|| ComplexError::NoOrientation(self.name.clone()))?;
        self.simplices[2]
            .iter()
            .map(|f| {
                orient
                    .get(f)
                    .map(|&sign| OrientedFace { face: *f, sign })
                    .ok_or_else(|| ComplexError::Invalid {
                        name: self.name.clone(),
                        report: ValidationReport {
                            violations: vec![Violation::BadOrientation { simplex: *f }],
                        },
                    })
            })
            .collect()
    }

    /// Orientation sign of a face; `None` without orientation.
    pub fn face_sign(&self, f: &Simplex) -> Option<i8> {
        self.orientation.as_ref()?.get(f).copied()
    }

    /// True for a 2-complex with orientation in which every edge has exactly two faces.
    pub fn is_closed_oriented_surface(&self) -> bool {
        self.dim == 2
            && self.orientation.is_some()
            && self.validate().is_empty()
            && self.edges().all(|e| self.cofaces(e).len() == 2)
    }
}

/// Sign with which the boundary of the ordered face `[a b c]` traverses
/// the ordered edge: `∂[abc] = [bc] − [ac] + [ab]`.
pub fn induced_edge_sign(face: &Simplex, edge: &Simplex) -> i8 {
    let missing = face
        .vertices()
        .iter()
        .position(|v| !edge.contains(*v))
        .expect("edge is a facet of the face");
    if missing % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Names accepted by [`build_builtin`].
pub const BUILTIN_NAMES: [&str; 3] = ["s2_five_vertex", "s2_tetra", "s3_pentachoron"];

fn sx(v: &[VertexId]) -> Simplex {
    Simplex::new(v).unwrap()
}

/// All k-subsets (as increasing tuples) of the given simplices' vertices.
fn closure(tops: &[Simplex]) -> Vec<Vec<Simplex>> {
    let dim = tops.iter().map(|s| s.dim()).max().unwrap_or(0);
    let mut by_dim: Vec<BTreeSet<Simplex>> = vec![BTreeSet::new(); dim];
    let mut stack: Vec<Simplex> = tops.to_vec();
    while let Some(s) = stack.pop() {
        if s.dim() == 0 {
            continue;
        }
        if by_dim[s.dim() - 1].insert(s) {
            stack.extend(s.facets());
        }
    }
    by_dim.into_iter().map(|s| s.into_iter().collect()).collect()
}

/// The built-in triangulations.
///
/// * `s2_five_vertex`: the two-pole sphere with three equatorial vertices
///   (`v1 → v2 → v3` west to east, `v4` north, `v5` south).
/// * `s2_tetra`: the boundary of the 3-simplex.
/// * `s3_pentachoron`: the boundary of the 4-simplex.
pub fn build_builtin(name: &str) -> Result<SkeletalComplex, ComplexError> {
    let (tops, orientation): (Vec<Simplex>, Option<Vec<(Simplex, i8)>>) = match name {
        "s2_five_vertex" => {
            let signed = [
                ([1, 2, 4], 1),
                ([2, 3, 4], 1),
                ([1, 3, 4], -1),
                ([1, 2, 5], -1),
                ([2, 3, 5], -1),
                ([1, 3, 5], 1),
            ];
            let faces = signed.iter().map(|(f, _)| sx(f)).collect();
            (faces, Some(signed.iter().map(|(f, s)| (sx(f), *s)).collect()))
        }
        "s2_tetra" => {
            // ∂[1234] = [234] − [134] + [124] − [123], outward for the built-in embedding
            let signed = [([2, 3, 4], 1), ([1, 3, 4], -1), ([1, 2, 4], 1), ([1, 2, 3], -1)];
            let faces = signed.iter().map(|(f, _)| sx(f)).collect();
            (faces, Some(signed.iter().map(|(f, s)| (sx(f), *s)).collect()))
        }
        "s3_pentachoron" => {
            let all = [1, 2, 3, 4, 5];
            let tets = (0..5)
                .map(|skip| {
                    let v: Vec<VertexId> = all
                        .iter()
                        .enumerate()
                        .filter(|&(i, _)| i != skip)
                        .map(|(_, &v)| v)
                        .collect();
                    sx(&v)
                })
                .collect();
            (tets, None)
        }
        other => return Err(ComplexError::UnknownBuiltin(other.to_string())),
    };
    SkeletalComplex::new(
        name,
        closure(&tops),
        orientation.map(|o| o.into_iter().collect()),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn keys<'a>(it: impl Iterator<Item = &'a Simplex>) -> Vec<String> {
        it.map(|s| s.key()).collect()
    }

    #[test]
    fn five_vertex_sphere_matches_listing() {
        let c = build_builtin("s2_five_vertex").unwrap();
        assert_eq!(c.vertices(), &[1, 2, 3, 4, 5]);
        assert_eq!(
            keys(c.edges()),
            ["12", "13", "14", "15", "23", "24", "25", "34", "35"]
        );
        assert_eq!(keys(c.faces()), ["124", "125", "134", "135", "234", "235"]);
        assert!(c.validate().is_empty());
        assert!(c.is_closed_oriented_surface());
    }

    #[test]
    fn tetra_boundary() {
        let c = build_builtin("s2_tetra").unwrap();
        assert_eq!(keys(c.faces()), ["123", "124", "134", "234"]);
        assert_eq!(c.edges().count(), 6);
        assert!(c.is_closed_oriented_surface());
    }

    #[test]
    fn pentachoron_triangles_in_two_tetrahedra() {
        let c = build_builtin("s3_pentachoron").unwrap();
        assert_eq!(c.dim(), 3);
        assert_eq!(c.tetrahedra().count(), 5);
        assert_eq!(c.faces().count(), 10);
        assert_eq!(c.edges().count(), 10);
        // independent enumeration: 3-subsets of {1..5} each lie in the 4-subsets containing them
        for a in 1..=5u32 {
            for b in a + 1..=5 {
                for d in b + 1..=5 {
                    let t = sx(&[a, b, d]);
                    let count = (1..=5u32)
                        .filter(|x| ![a, b, d].contains(x))
                        .count();
                    assert_eq!(c.cofaces(&t).len(), count);
                    assert_eq!(count, 2);
                }
            }
        }
    }

    #[test]
    fn unknown_builtin() {
        assert_eq!(
            build_builtin("torus"),
            Err(ComplexError::UnknownBuiltin("torus".into()))
        );
    }

    #[test]
    fn builtin_is_deterministic() {
        for name in BUILTIN_NAMES {
            assert_eq!(build_builtin(name).unwrap(), build_builtin(name).unwrap());
        }
    }

    #[test]
    fn missing_edge_is_reported() {
        let by_dim = vec![
            vec![sx(&[1, 4]), sx(&[2, 4])],
            vec![sx(&[1, 2, 4])],
        ];
        let c = SkeletalComplex::from_parts("broken", by_dim, None);
        let report = c.validate();
        assert_eq!(
            report.violations,
            vec![Violation::MissingFace {
                simplex: sx(&[1, 2, 4]),
                face: sx(&[1, 2])
            }]
        );
    }

    #[test]
    fn unordered_tuple_is_reported() {
        let c = SkeletalComplex::from_parts("bad", vec![vec![sx(&[2, 1])]], None);
        assert_eq!(
            c.validate().violations,
            vec![Violation::Unordered { simplex: sx(&[2, 1]) }]
        );
    }

    #[test]
    fn all_plus_orientation_on_tetra_is_incoherent() {
        let base = build_builtin("s2_tetra").unwrap();
        let orient = base.faces().map(|f| (*f, 1)).collect();
        let c = SkeletalComplex::from_parts(
            "tetra_plus",
            closure(&base.faces().copied().collect::<Vec<_>>()),
            Some(orient),
        );
        let report = c.validate();
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::Incoherent { .. })));
    }

    #[test]
    fn tetra_orientation_unique_up_to_flip() {
        let base = build_builtin("s2_tetra").unwrap();
        let faces: Vec<Simplex> = base.faces().copied().collect();
        let mut coherent = Vec::new();
        for mask in 0u32..16 {
            let orient: BTreeMap<Simplex, i8> = faces
                .iter()
                .enumerate()
                .map(|(i, f)| (*f, if mask >> i & 1 == 1 { -1 } else { 1 }))
                .collect();
            let c = SkeletalComplex::from_parts("t", closure(&faces), Some(orient.clone()));
            if c.validate().is_empty() {
                coherent.push(orient);
            }
        }
        assert_eq!(coherent.len(), 2);
        for f in &faces {
            assert_eq!(coherent[0][f], -coherent[1][f]);
        }
    }

    #[test]
    fn five_vertex_oriented_faces() {
        let c = build_builtin("s2_five_vertex").unwrap();
        let signs: BTreeMap<String, i8> = c
            .oriented_faces()
            .unwrap()
            .into_iter()
            .map(|o| (o.face.key(), o.sign))
            .collect();
        let expect = [
            ("124", 1),
            ("234", 1),
            ("134", -1),
            ("125", -1),
            ("235", -1),
            ("135", 1),
        ];
        for (k, s) in expect {
            assert_eq!(signs[k], s, "face {k}");
        }
    }

    #[test]
    fn oriented_faces_rejects_other_dimensions() {
        let c = SkeletalComplex::new("segment", vec![vec![sx(&[1, 2])]], None).unwrap();
        assert!(matches!(
            c.oriented_faces(),
            Err(ComplexError::WrongDimension { .. })
        ));
        let s3 = build_builtin("s3_pentachoron").unwrap();
        assert!(s3.oriented_faces().is_err());
    }

    #[test]
    fn induced_signs_follow_boundary_formula() {
        let f = sx(&[1, 2, 4]);
        assert_eq!(induced_edge_sign(&f, &sx(&[2, 4])), 1);
        assert_eq!(induced_edge_sign(&f, &sx(&[1, 4])), -1);
        assert_eq!(induced_edge_sign(&f, &sx(&[1, 2])), 1);
    }
}
