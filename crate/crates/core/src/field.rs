//! Trivialized homotopy lattice gauge fields.
//!
//! An [`Hlgf`] stores the generator data: a group element per edge
//! (`A_ij = PT(Γ_ij)`), a loop class per face (`A_ijk = PT(Γ_ijk)`) and, on
//! 3D bases, a 2-globe endpoint pair per tetrahedron. Evaluation extends
//! this data homomorphically to every globe word.

use std::collections::BTreeMap;
use std::fmt;
use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::complex::{Simplex, SkeletalComplex, VertexId};
use crate::gauge_group::{wrap_signed, Backend, GroupElement, GroupError, LoopClass, Pi1Element};
use crate::globes::{tetra_boundary_word, GlobeError, Kind, Sign, Word};

/// Comparison tolerance for algebraic data.
pub const EXACT_TOLERANCE: f64 = 1e-9;
/// Comparison tolerance for data produced by numerical transport.
pub const CUTOFF_TOLERANCE: f64 = 1e-3;

/// Endpoint data of a 2-globe in the group: two homotopic loop classes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CellValue {
    pub source: LoopClass,
    pub target: LoopClass,
}

impl CellValue {
    pub fn constant(l: LoopClass) -> Self {
        CellValue {
            source: l,
            target: l,
        }
    }

    fn map(&self, f: impl Fn(&LoopClass) -> LoopClass) -> Self {
        CellValue {
            source: f(&self.source),
            target: f(&self.target),
        }
    }
}

/// The value of a globe word: a group element (dimensions 0 and 1), a loop
/// class (dimension 2) or a 2-globe endpoint pair (dimension 3).
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Value {
    Element(GroupElement),
    Loop(LoopClass),
    Cell(CellValue),
}

impl Value {
    pub fn as_element(&self) -> Option<&GroupElement> {
        match self {
            Value::Element(g) => Some(g),
            _ => None,
        }
    }

    pub fn as_loop(&self) -> Option<&LoopClass> {
        match self {
            Value::Loop(l) => Some(l),
            _ => None,
        }
    }

    pub fn as_cell(&self) -> Option<&CellValue> {
        match self {
            Value::Cell(c) => Some(c),
            _ => None,
        }
    }

    pub fn approx_eq(&self, other: &Value, tol: f64) -> bool {
        match (self, other) {
            (Value::Element(a), Value::Element(b)) => a.approx_eq(b, tol),
            (Value::Loop(a), Value::Loop(b)) => a.approx_eq(b, tol),
            (Value::Cell(a), Value::Cell(b)) => {
                a.source.approx_eq(&b.source, tol) && a.target.approx_eq(&b.target, tol)
            }
            _ => false,
        }
    }
}

#[derive(Clone, Debug, Error, PartialEq)]
pub enum FieldError {
    #[error("no data for {0}")]
    Missing(Simplex),
    #[error("data given for {0}, which is not a simplex of the complex")]
    Extra(Simplex),
    #[error("value on {simplex} has backend {found}, field is {expected}")]
    Backend {
        simplex: Simplex,
        expected: Backend,
        found: Backend,
    },
    #[error("face {face} is incompatible with its edges (residual {residual:.3e})")]
    FaceIncompatible { face: Simplex, residual: f64 },
    #[error("3-cell {cell} is incompatible with its faces (residual {residual:.3e})")]
    CellIncompatible { cell: Simplex, residual: f64 },
    #[error("gauge assignment misses vertex v{0}")]
    MissingVertex(VertexId),
    #[error("complex of dimension {0} is not supported (need 1, 2 or 3)")]
    Dimension(usize),
}

#[derive(Clone, Debug, Error, PartialEq)]
pub enum EvalError {
    #[error(transparent)]
    Globe(#[from] GlobeError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("2-globe composite does not match: {0:.3e}")]
    CellMismatch(f64),
}

pub type GaugeAssignment = BTreeMap<VertexId, GroupElement>;

#[derive(Clone, Debug, PartialEq)]
pub struct Hlgf {
    complex: SkeletalComplex,
    backend: Backend,
    edges: BTreeMap<Simplex, GroupElement>,
    faces: BTreeMap<Simplex, LoopClass>,
    cells3: BTreeMap<Simplex, CellValue>,
    tolerance: f64,
}

impl Hlgf {
    /// Builds and validates a field. Missing 3-cell data is derived from
    /// the faces; given 3-cell data is checked against them.
    pub fn new(
        complex: SkeletalComplex,
        backend: Backend,
        edges: BTreeMap<Simplex, GroupElement>,
        faces: BTreeMap<Simplex, LoopClass>,
        cells3: Option<BTreeMap<Simplex, CellValue>>,
        tolerance: f64,
    ) -> Result<Self, FieldError> {
        if !(1..=3).contains(&complex.dim()) {
            return Err(FieldError::Dimension(complex.dim()));
        }
        let given_cells = cells3.is_some();
        let mut f = Hlgf::from_parts_unchecked(
            complex,
            backend,
            edges,
            faces,
            cells3.unwrap_or_default(),
            tolerance,
        );
        f.check_totality()?;
        for face in f.complex.faces() {
            let residual = f.face_residual(face);
            if residual > tolerance {
                return Err(FieldError::FaceIncompatible {
                    face: *face,
                    residual,
                });
            }
        }
        if given_cells {
            for t in f.complex.tetrahedra() {
                let residual = f.cell_residual(t);
                if residual > tolerance {
                    return Err(FieldError::CellIncompatible { cell: *t, residual });
                }
            }
        } else {
            f.cells3 = f.derived_cells();
        }
        Ok(f)
    }

    /// Assembles a field without any validation (for reporting on broken data).
    pub fn from_parts_unchecked(
        complex: SkeletalComplex,
        backend: Backend,
        edges: BTreeMap<Simplex, GroupElement>,
        faces: BTreeMap<Simplex, LoopClass>,
        cells3: BTreeMap<Simplex, CellValue>,
        tolerance: f64,
    ) -> Self {
        Hlgf {
            complex,
            backend,
            edges,
            faces,
            cells3,
            tolerance,
        }
    }

    /// The field with every edge at the identity and constant face loops.
    pub fn identity(complex: SkeletalComplex, backend: Backend) -> Self {
        let id = GroupElement::identity(backend);
        let edges = complex.edges().map(|e| (*e, id)).collect();
        let faces = complex
            .faces()
            .map(|f| (*f, LoopClass::constant(&id)))
            .collect();
        Hlgf::new(complex, backend, edges, faces, None, EXACT_TOLERANCE)
            .expect("identity data is compatible")
    }

    fn check_totality(&self) -> Result<(), FieldError> {
        let levels: [(usize, Vec<(&Simplex, Backend)>); 3] = [
            (1, self.edges.iter().map(|(s, g)| (s, g.backend())).collect()),
            (2, self.faces.iter().map(|(s, l)| (s, l.backend())).collect()),
            (
                3,
                self.cells3
                    .iter()
                    .map(|(s, c)| (s, c.source.backend()))
                    .collect(),
            ),
        ];
        for (k, given) in levels {
            for (s, b) in &given {
                if s.dim() != k || !self.complex.contains(s) {
                    return Err(FieldError::Extra(**s));
                }
                if *b != self.backend {
                    return Err(FieldError::Backend {
                        simplex: **s,
                        expected: self.backend,
                        found: *b,
                    });
                }
            }
            if k == 3 && given.is_empty() {
                continue;
            }
            if let Some(s) = self
                .complex
                .simplices(k)
                .find(|s| !given.iter().any(|(g, _)| g == s))
            {
                return Err(FieldError::Missing(*s));
            }
        }
        Ok(())
    }

    pub fn complex(&self) -> &SkeletalComplex {
        &self.complex
    }

    pub fn backend(&self) -> Backend {
        self.backend
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.tolerance = tol;
        self
    }

    pub fn edges(&self) -> &BTreeMap<Simplex, GroupElement> {
        &self.edges
    }

    pub fn faces(&self) -> &BTreeMap<Simplex, LoopClass> {
        &self.faces
    }

    pub fn cells3(&self) -> &BTreeMap<Simplex, CellValue> {
        &self.cells3
    }

    fn edge(&self, a: VertexId, b: VertexId) -> GroupElement {
        self.edges[&Simplex::new(&[a, b]).expect("two vertices")]
    }

    /// Expected endpoints of the face loop: `(A_jk, A_ij⁻¹ A_ik)`.
    pub fn face_boundary(&self, f: &Simplex) -> (GroupElement, GroupElement) {
        let v = f.vertices();
        let (i, j, k) = (v[0], v[1], v[2]);
        let src = self.edge(j, k);
        let tgt = self
            .edge(i, j)
            .inv()
            .mul(&self.edge(i, k))
            .expect("one backend");
        (src, tgt)
    }

    fn face_residual(&self, f: &Simplex) -> f64 {
        let (src, tgt) = self.face_boundary(f);
        let l = &self.faces[f];
        let a = l.source().dist(&src).expect("backend checked");
        let b = l.target().dist(&tgt).expect("backend checked");
        a.max(b)
    }

    /// Evaluations of `d_2^- Γ_t` and `d_2^+ Γ_t` for a tetrahedron.
    fn cell_boundary(&self, t: &Simplex) -> Result<CellValue, EvalError> {
        let g = Word::gen(*t).expect("ordered");
        let src = self.eval(&g.face(2, Sign::Minus)?)?;
        let tgt = self.eval(&g.face(2, Sign::Plus)?)?;
        Ok(CellValue {
            source: *src.as_loop().expect("2-globe"),
            target: *tgt.as_loop().expect("2-globe"),
        })
    }

    fn cell_residual(&self, t: &Simplex) -> f64 {
        let Ok(expect) = self.cell_boundary(t) else {
            return f64::INFINITY;
        };
        let c = &self.cells3[t];
        c.source.distance(&expect.source).max(c.target.distance(&expect.target))
    }

    fn derived_cells(&self) -> BTreeMap<Simplex, CellValue> {
        self.complex
            .tetrahedra()
            .filter_map(|t| self.cell_boundary(t).ok().map(|c| (*t, c)))
            .collect()
    }

    /// Evaluates a word over this field's complex.
    pub fn evaluate(&self, w: &Word) -> Result<Value, EvalError> {
        w.check_against(&self.complex)?;
        self.eval(w)
    }

    fn eval(&self, w: &Word) -> Result<Value, EvalError> {
        let tol = self.tolerance;
        Ok(match w.kind() {
            Kind::Vertex(_) => Value::Element(GroupElement::identity(self.backend)),
            Kind::Gen(s) => match s.dim() {
                1 => Value::Element(self.edges[s]),
                2 => Value::Loop(self.faces[s]),
                _ => Value::Cell(
                    *self
                        .cells3
                        .get(s)
                        .ok_or(GlobeError::UnknownSimplex(*s))?,
                ),
            },
            Kind::Degenerate { i, k, child } => {
                let id = GroupElement::identity(self.backend);
                let inner = self.eval(child)?;
                let constant = |v: &Value| match v {
                    Value::Element(g) => LoopClass::constant(g),
                    _ => unreachable!("degenerate argument of dimension <= 1"),
                };
                match (i, k) {
                    (_, 1) => Value::Element(id),
                    (0, 2) => Value::Loop(LoopClass::constant(&id)),
                    (1, 2) => Value::Loop(constant(&inner)),
                    (0, 3) => Value::Cell(CellValue::constant(LoopClass::constant(&id))),
                    (1, 3) => Value::Cell(CellValue::constant(constant(&inner))),
                    _ => Value::Cell(CellValue::constant(*inner.as_loop().expect("2-globe"))),
                }
            }
            Kind::Compose { level, left, right } => {
                let a = self.eval(left)?;
                let b = self.eval(right)?;
                compose_values(*level, &a, &b, tol)?
            }
            Kind::Invert { level, child } => invert_value(*level, &self.eval(child)?),
        })
    }

    /// `g ▷ A`: edges `g_i A_ij g_j⁻¹`, faces and cells conjugated by the
    /// constant loops at their `d_0` endpoints.
    pub fn gauge_transform(&self, g: &GaugeAssignment) -> Result<Hlgf, FieldError> {
        for &v in self.complex.vertices() {
            match g.get(&v) {
                None => return Err(FieldError::MissingVertex(v)),
                Some(x) if x.backend() != self.backend => {
                    return Err(FieldError::Backend {
                        simplex: Simplex::new(&[v]).expect("vertex"),
                        expected: self.backend,
                        found: x.backend(),
                    })
                }
                _ => {}
            }
        }
        let conj = |l: &LoopClass, t: VertexId, s: VertexId| {
            LoopClass::constant(&g[&t])
                .compose0(l)
                .and_then(|x| x.compose0(&LoopClass::constant(&g[&s]).inv0()))
                .expect("backend checked")
        };
        let edges = self
            .edges
            .iter()
            .map(|(e, a)| {
                let v = e.vertices();
                let x = g[&v[0]]
                    .mul(a)
                    .and_then(|x| x.mul(&g[&v[1]].inv()))
                    .expect("backend checked");
                (*e, x)
            })
            .collect();
        let faces = self
            .faces
            .iter()
            .map(|(f, l)| {
                let v = f.vertices();
                (*f, conj(l, v[1], v[2]))
            })
            .collect();
        let cells = (!self.cells3.is_empty()).then(|| {
            self.cells3
                .iter()
                .map(|(t, c)| {
                    let v = t.vertices();
                    (*t, c.map(|l| conj(l, v[2], v[3])))
                })
                .collect()
        });
        Hlgf::new(
            self.complex.clone(),
            self.backend,
            edges,
            faces,
            cells,
            self.tolerance,
        )
    }

    /// Change of trivialization `φ ↦ ψ·φ`; the same formula as a gauge transformation.
    pub fn change_trivialization(&self, psi: &GaugeAssignment) -> Result<Hlgf, FieldError> {
        self.gauge_transform(psi)
    }

    /// Runs face compatibility on every face and, on 3D bases, 3-cell
    /// compatibility and the tetrahedron extendibility condition.
    pub fn check_consistency(&self) -> ConsistencyReport {
        let mut violations = Vec::new();
        for f in self.complex.faces() {
            let residual = self.face_residual(f);
            if residual > self.tolerance {
                violations.push(ConsistencyViolation {
                    simplex: *f,
                    condition: Condition::FaceCompatibility,
                    residual,
                    pi1: None,
                });
            }
        }
        for t in self.complex.tetrahedra() {
            if self.cells3.contains_key(t) {
                let residual = self.cell_residual(t);
                if residual > self.tolerance {
                    violations.push(ConsistencyViolation {
                        simplex: *t,
                        condition: Condition::CellCompatibility,
                        residual,
                        pi1: None,
                    });
                }
            }
            let w = tetra_boundary_word(&self.complex, t).expect("tetrahedron of the complex");
            let residual_of = |l: &LoopClass| l.lift_size();
            match self.eval(&w) {
                Ok(Value::Loop(l)) => match l.pi1_class(self.tolerance) {
                    Ok(p) if p.is_zero() => {}
                    Ok(p) => violations.push(ConsistencyViolation {
                        simplex: *t,
                        condition: Condition::Extendibility,
                        residual: residual_of(&l),
                        pi1: Some(p),
                    }),
                    Err(_) => violations.push(ConsistencyViolation {
                        simplex: *t,
                        condition: Condition::Extendibility,
                        residual: residual_of(&l),
                        pi1: None,
                    }),
                },
                _ => violations.push(ConsistencyViolation {
                    simplex: *t,
                    condition: Condition::Extendibility,
                    residual: f64::INFINITY,
                    pi1: None,
                }),
            }
        }
        ConsistencyReport { violations }
    }

    /// Replaces one face value without validation (used to build tampered fixtures).
    pub fn with_face_unchecked(mut self, f: Simplex, l: LoopClass) -> Self {
        self.faces.insert(f, l);
        self
    }
}

pub(crate) fn compose_values(level: usize, a: &Value, b: &Value, tol: f64) -> Result<Value, EvalError> {
    Ok(match (level, a, b) {
        (0, Value::Element(x), Value::Element(y)) => Value::Element(x.mul(y)?),
        (0, Value::Loop(x), Value::Loop(y)) => Value::Loop(x.compose0(y)?),
        (1, Value::Loop(x), Value::Loop(y)) => Value::Loop(x.compose1(y, tol)?),
        (0, Value::Cell(x), Value::Cell(y)) => Value::Cell(CellValue {
            source: x.source.compose0(&y.source)?,
            target: x.target.compose0(&y.target)?,
        }),
        (1, Value::Cell(x), Value::Cell(y)) => Value::Cell(CellValue {
            source: x.source.compose1(&y.source, tol)?,
            target: x.target.compose1(&y.target, tol)?,
        }),
        (2, Value::Cell(x), Value::Cell(y)) => {
            if !y.target.approx_eq(&x.source, tol) {
                return Err(EvalError::CellMismatch(y.target.distance(&x.source)));
            }
            Value::Cell(CellValue {
                source: y.source,
                target: x.target,
            })
        }
        _ => unreachable!("words are well typed"),
    })
}

pub(crate) fn invert_value(level: usize, v: &Value) -> Value {
    match (level, v) {
        (0, Value::Element(g)) => Value::Element(g.inv()),
        (0, Value::Loop(l)) => Value::Loop(l.inv0()),
        (1, Value::Loop(l)) => Value::Loop(l.inv1()),
        (0, Value::Cell(c)) => Value::Cell(c.map(LoopClass::inv0)),
        (1, Value::Cell(c)) => Value::Cell(c.map(LoopClass::inv1)),
        (2, Value::Cell(c)) => Value::Cell(CellValue {
            source: c.target,
            target: c.source,
        }),
        _ => unreachable!("words are well typed"),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition {
    FaceCompatibility,
    CellCompatibility,
    Extendibility,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConsistencyViolation {
    pub simplex: Simplex,
    pub condition: Condition,
    pub residual: f64,
    pub pi1: Option<Pi1Element>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ConsistencyReport {
    pub violations: Vec<ConsistencyViolation>,
}

impl ConsistencyReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    /// Distinct simplices flagged under a condition.
    pub fn flagged(&self, condition: Condition) -> Vec<Simplex> {
        let mut out: Vec<Simplex> = self
            .violations
            .iter()
            .filter(|v| v.condition == condition)
            .map(|v| v.simplex)
            .collect();
        out.dedup();
        out
    }
}

impl fmt::Display for ConsistencyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return f.write_str("consistent");
        }
        for v in &self.violations {
            write!(f, "{} {:?} residual {:.3e}", v.simplex, v.condition, v.residual)?;
            if let Some(p) = v.pi1 {
                write!(f, " pi1 {p}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Number of extra `2π` windings (U1) sampled per face by [`random_field`].
pub const RANDOM_WINDING_RANGE: i64 = 2;

/// Haar-random edges; each face gets the endpoint-compatible class with a
/// uniform extra winding in `[-2, 2]` (U1) or a uniform lift sign (SO3).
/// On 3D bases some faces are then corrected so the field is extendible.
pub fn random_field(c: &SkeletalComplex, backend: Backend, seed: u64) -> Hlgf {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edges: BTreeMap<Simplex, GroupElement> = c
        .edges()
        .map(|e| (*e, GroupElement::random(backend, &mut rng)))
        .collect();
    let scaffold = Hlgf::from_parts_unchecked(
        c.clone(),
        backend,
        edges.clone(),
        BTreeMap::new(),
        BTreeMap::new(),
        EXACT_TOLERANCE,
    );
    let faces = c
        .faces()
        .map(|f| {
            let (src, tgt) = scaffold.face_boundary(f);
            (*f, random_class(&src, &tgt, &mut rng))
        })
        .collect();
    let faces = make_extendible(c, backend, &edges, faces);
    Hlgf::new(c.clone(), backend, edges, faces, None, EXACT_TOLERANCE)
        .expect("random data is compatible by construction")
}

/// Re-chooses face windings (U1) or lift signs (SO3) along a spanning tree
/// of the tetrahedron adjacency graph so that every tetrahedron passes the
/// extendibility condition. Each correction on the face shared with the
/// parent fixes the child; the root is fixed by the others on a closed
/// 3-manifold.
fn make_extendible(
    c: &SkeletalComplex,
    backend: Backend,
    edges: &BTreeMap<Simplex, GroupElement>,
    mut faces: BTreeMap<Simplex, LoopClass>,
) -> BTreeMap<Simplex, LoopClass> {
    let tets: Vec<Simplex> = c.tetrahedra().copied().collect();
    let Some(&root) = tets.first() else {
        return faces;
    };
    let mut parent: BTreeMap<Simplex, Simplex> = BTreeMap::new();
    let mut order = vec![root];
    let mut k = 0;
    while k < order.len() {
        let t = order[k];
        for f in t.facets() {
            for u in c.cofaces(&f) {
                if u != root && !parent.contains_key(&u) {
                    parent.insert(u, f);
                    order.push(u);
                }
            }
        }
        k += 1;
    }
    for t in order.iter().skip(1).rev() {
        let f = parent[t];
        let scratch = Hlgf::from_parts_unchecked(
            c.clone(),
            backend,
            edges.clone(),
            faces.clone(),
            BTreeMap::new(),
            EXACT_TOLERANCE,
        );
        let w = tetra_boundary_word(c, t).expect("tetrahedron of the complex");
        let Ok(Value::Loop(l)) = scratch.eval(&w) else {
            continue;
        };
        let removed = t
            .vertices()
            .iter()
            .position(|v| !f.contains(*v))
            .expect("facet misses one vertex");
        let sign = if removed % 2 == 0 { 1.0 } else { -1.0 };
        let face = faces.get_mut(&f).expect("total face data");
        match (l.pi1_class(EXACT_TOLERANCE), *face) {
            (Ok(Pi1Element::U1(n)), LoopClass::U1 { base, lift }) if n != 0 => {
                *face = LoopClass::U1 {
                    base,
                    lift: lift - TAU * n as f64 * sign,
                };
            }
            (Ok(Pi1Element::SO3(-1)), LoopClass::SO3 { start, end }) => {
                *face = LoopClass::SO3 { start, end: -end };
            }
            _ => {}
        }
    }
    faces
}

/// A random loop class from `src` to `tgt`.
pub fn random_class<R: Rng + ?Sized>(src: &GroupElement, tgt: &GroupElement, rng: &mut R) -> LoopClass {
    match (src, tgt) {
        (GroupElement::U1(a), GroupElement::U1(b)) => {
            let k = rng.random_range(-RANDOM_WINDING_RANGE..=RANDOM_WINDING_RANGE);
            LoopClass::U1 {
                base: *a,
                lift: wrap_signed(b - a) + TAU * k as f64,
            }
        }
        (GroupElement::SO3(p), GroupElement::SO3(q)) => LoopClass::SO3 {
            start: *p,
            end: if rng.random::<bool>() { *q } else { -q },
        },
        (GroupElement::SU2(p), GroupElement::SU2(q)) => LoopClass::SU2 {
            start: *p,
            end: *q,
        },
        _ => panic!("endpoints on different backends"),
    }
}

/// A random gauge assignment drawn from a seed.
pub fn seeded_gauge(c: &SkeletalComplex, backend: Backend, seed: u64) -> GaugeAssignment {
    random_gauge(c, backend, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// A random gauge assignment on the vertices of `c`.
pub fn random_gauge<R: Rng + ?Sized>(c: &SkeletalComplex, backend: Backend, rng: &mut R) -> GaugeAssignment {
    c.vertices()
        .iter()
        .map(|&v| (v, GroupElement::random(backend, rng)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::build_builtin;
    use crate::globes::{covering_word, parse_word};
    use std::f64::consts::PI;

    const THETA_F: f64 = 4.0 * PI / 6.0;

    fn s(v: &[VertexId]) -> Simplex {
        Simplex::new(v).unwrap()
    }

    /// The round-sphere data: face lifts `x_ijk = ε_ijk θ_f` with edges in
    /// the tree gauge (`A = id` on the tree 14, 24, 34, 35, then solved).
    fn round_field() -> Hlgf {
        let c = build_builtin("s2_five_vertex").unwrap();
        let eps: BTreeMap<Simplex, i8> = c
            .oriented_faces()
            .unwrap()
            .into_iter()
            .map(|o| (o.face, o.sign))
            .collect();
        // A_ij⁻¹ A_ik = A_jk e^{i x}: solve the non-tree edges from faces 134, 234, 135, 235
        let x = |f: &[VertexId]| eps[&s(f)] as f64 * THETA_F;
        let mut a: BTreeMap<Simplex, f64> = [(s(&[1, 4]), 0.0), (s(&[2, 4]), 0.0), (s(&[3, 4]), 0.0), (s(&[3, 5]), 0.0)]
            .into_iter()
            .collect();
        // face [i,j,k]: -a_ij + a_ik = a_jk + x_ijk
        a.insert(s(&[1, 3]), a[&s(&[1, 4])] - a[&s(&[3, 4])] - x(&[1, 3, 4]));
        a.insert(s(&[2, 3]), a[&s(&[2, 4])] - a[&s(&[3, 4])] - x(&[2, 3, 4]));
        a.insert(s(&[1, 2]), a[&s(&[1, 4])] - a[&s(&[2, 4])] - x(&[1, 2, 4]));
        a.insert(s(&[1, 5]), a[&s(&[1, 3])] + a[&s(&[3, 5])] + x(&[1, 3, 5]));
        a.insert(s(&[2, 5]), a[&s(&[2, 3])] + a[&s(&[3, 5])] + x(&[2, 3, 5]));
        let edges: BTreeMap<Simplex, GroupElement> =
            a.iter().map(|(e, t)| (*e, GroupElement::u1(*t))).collect();
        let faces = c
            .faces()
            .map(|f| {
                let v = f.vertices();
                let base = a[&s(&[v[1], v[2]])];
                (*f, LoopClass::u1(base, x(v)))
            })
            .collect();
        Hlgf::new(c, Backend::U1, edges, faces, None, EXACT_TOLERANCE).unwrap()
    }

    #[test]
    fn round_field_is_valid_and_face_125_closes() {
        // [125] is not used to solve the edges, so its compatibility is a real check
        let f = round_field();
        assert!(f.check_consistency().is_empty());
    }

    #[test]
    fn identity_field_evaluates_trivially() {
        let c = build_builtin("s2_five_vertex").unwrap();
        let f = Hlgf::identity(c.clone(), Backend::U1);
        let w = parse_word("inv0(G135) o0 G134", &c).unwrap();
        assert_eq!(f.evaluate(&w).unwrap(), Value::Loop(LoopClass::u1(0.0, 0.0)));
        let cw = covering_word(&c).unwrap();
        assert_eq!(f.evaluate(&cw).unwrap().as_loop().unwrap().lift(), Some(0.0));
        assert!(f.check_consistency().is_empty());
    }

    #[test]
    fn round_covering_lift_is_four_pi() {
        let f = round_field();
        let w = covering_word(f.complex()).unwrap();
        let l = *f.evaluate(&w).unwrap().as_loop().unwrap();
        // six faces each contributing θ_f: 6θ_f = 4π
        assert!((l.lift().unwrap() - 4.0 * PI).abs() < 1e-12);
        assert_eq!(l.pi1_class(EXACT_TOLERANCE).unwrap(), Pi1Element::U1(2));
    }

    #[test]
    fn round_thin_piece() {
        let f = round_field();
        let c = f.complex().clone();
        // eastward piece: −x_135 + x_134 = −2θ_f; westward piece: x_234 − x_235 = +2θ_f
        let east = parse_word("inv0(G135) o0 G134", &c).unwrap();
        let west = parse_word("inv0(G235) o0 G234", &c).unwrap();
        let lift = |w| f.evaluate(&w).unwrap().as_loop().unwrap().lift().unwrap();
        assert!((lift(east) + 2.0 * THETA_F).abs() < 1e-12);
        assert!((lift(west) - 2.0 * THETA_F).abs() < 1e-12);
    }

    #[test]
    fn shifted_face_breaks_compatibility() {
        let f = round_field();
        let c = f.complex().clone();
        let mut faces = f.faces().clone();
        let l = faces[&s(&[1, 3, 5])];
        faces.insert(s(&[1, 3, 5]), LoopClass::u1(l.source().angle().unwrap(), l.lift().unwrap() + 0.1));
        let err = Hlgf::new(c.clone(), Backend::U1, f.edges().clone(), faces.clone(), None, EXACT_TOLERANCE)
            .unwrap_err();
        assert!(matches!(err, FieldError::FaceIncompatible { face, .. } if face == s(&[1, 3, 5])));
        // a full turn keeps the endpoints
        faces.insert(s(&[1, 3, 5]), LoopClass::u1(l.source().angle().unwrap(), l.lift().unwrap() + TAU));
        assert!(Hlgf::new(c, Backend::U1, f.edges().clone(), faces, None, EXACT_TOLERANCE).is_ok());
    }

    #[test]
    fn missing_and_foreign_data() {
        let f = round_field();
        let c = f.complex().clone();
        let mut edges = f.edges().clone();
        edges.remove(&s(&[1, 2]));
        assert_eq!(
            Hlgf::new(c.clone(), Backend::U1, edges, f.faces().clone(), None, EXACT_TOLERANCE),
            Err(FieldError::Missing(s(&[1, 2])))
        );
        let mut edges = f.edges().clone();
        edges.insert(s(&[4, 5]), GroupElement::u1(0.0));
        assert_eq!(
            Hlgf::new(c, Backend::U1, edges, f.faces().clone(), None, EXACT_TOLERANCE),
            Err(FieldError::Extra(s(&[4, 5])))
        );
    }

    #[test]
    fn random_field_is_deterministic_and_valid() {
        for name in ["s2_five_vertex", "s2_tetra", "s3_pentachoron"] {
            let c = build_builtin(name).unwrap();
            for b in Backend::ALL {
                let a = random_field(&c, b, 11);
                assert_eq!(a, random_field(&c, b, 11));
                assert!(a.check_consistency().is_empty(), "{name} {b}");
            }
        }
    }

    #[test]
    fn gauge_transform_constant_on_identity() {
        let c = build_builtin("s2_five_vertex").unwrap();
        let f = Hlgf::identity(c.clone(), Backend::SO3);
        let g0 = GroupElement::so3_axis_angle([0.0, 0.6, 0.8], 1.1);
        let g: GaugeAssignment = c.vertices().iter().map(|v| (*v, g0)).collect();
        let h = f.gauge_transform(&g).unwrap();
        for (e, a) in h.edges() {
            assert!(a.approx_eq(&f.edges()[e], 1e-12));
        }
        for (face, l) in h.faces() {
            assert!(l.approx_eq(&f.faces()[face], 1e-12));
        }
    }

    #[test]
    fn gauge_transform_keeps_u1_lifts() {
        let c = build_builtin("s2_tetra").unwrap();
        let f = random_field(&c, Backend::U1, 3);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let g = random_gauge(&c, Backend::U1, &mut rng);
        let h = f.gauge_transform(&g).unwrap();
        for (face, l) in h.faces() {
            assert_eq!(l.lift(), f.faces()[face].lift());
        }
    }

    #[test]
    fn gauge_action_composes() {
        let c = build_builtin("s2_five_vertex").unwrap();
        let f = random_field(&c, Backend::SO3, 5);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let g = random_gauge(&c, Backend::SO3, &mut rng);
        let h = random_gauge(&c, Backend::SO3, &mut rng);
        let gh: GaugeAssignment = c
            .vertices()
            .iter()
            .map(|v| (*v, g[v].mul(&h[v]).unwrap()))
            .collect();
        let lhs = f.gauge_transform(&gh).unwrap();
        let rhs = f.gauge_transform(&h).unwrap().gauge_transform(&g).unwrap();
        for (face, l) in lhs.faces() {
            assert!(l.approx_eq(&rhs.faces()[face], 1e-12));
        }
        let id: GaugeAssignment = c
            .vertices()
            .iter()
            .map(|v| (*v, GroupElement::identity(Backend::SO3)))
            .collect();
        assert_eq!(f.gauge_transform(&id).unwrap().faces(), f.faces());
        assert!(matches!(
            f.gauge_transform(&BTreeMap::new()),
            Err(FieldError::MissingVertex(1))
        ));
    }

    #[test]
    fn tampered_pentachoron_flags_incident_tetrahedra() {
        let c = build_builtin("s3_pentachoron").unwrap();
        let f = Hlgf::identity(c.clone(), Backend::U1);
        assert!(f.check_consistency().is_empty());
        let face = s(&[1, 3, 4]);
        let l = f.faces()[&face];
        let t = f.clone().with_face_unchecked(face, LoopClass::u1(l.source().angle().unwrap(), TAU));
        let report = t.check_consistency();
        let flagged = report.flagged(Condition::Extendibility);
        // tetrahedra containing [134]: [1234] and [1345]
        assert_eq!(flagged, vec![s(&[1, 2, 3, 4]), s(&[1, 3, 4, 5])]);
        for v in report.violations.iter().filter(|v| v.condition == Condition::Extendibility) {
            assert!((v.residual - TAU).abs() < 1e-12);
            assert!(matches!(v.pi1, Some(Pi1Element::U1(n)) if n.abs() == 1));
        }
    }

    #[test]
    fn tetra_lift_is_the_coboundary() {
        let c = build_builtin("s3_pentachoron").unwrap();
        let f = random_field(&c, Backend::U1, 4);
        for t in c.tetrahedra() {
            let w = tetra_boundary_word(&c, t).unwrap();
            let l = *f.evaluate(&w).unwrap().as_loop().unwrap();
            let v = t.vertices();
            let x = |a: usize, b: usize, d: usize| f.faces()[&s(&[v[a], v[b], v[d]])].lift().unwrap();
            let expect = x(1, 2, 3) - x(0, 2, 3) + x(0, 1, 3) - x(0, 1, 2);
            assert!((l.lift().unwrap() - expect).abs() < 1e-12);
        }
    }
}
