//! The cutoff map: from a smooth connection, presented by an oracle, to a
//! trivialized field on an embedded base.
//!
//! Edge values are transports along the embedded edges. Face values are
//! the lifts of the transport along the face homotopy, tracked step by step
//! through the sampled family of paths. Steps above the lift guard
//! are refused rather than guessed.

mod geometry;
mod oracles;

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::f64::consts::{FRAC_PI_2, PI};

use rayon::prelude::*;

pub use geometry::{
    angle_between, arc, arc_reversed, builtin_embedding, concat, edge_samples, face_homotopy,
    slerp, slerp_velocity, Embedding, Point,
};
pub use oracles::{
    oracle_from_spec, Gauged, Monopole, OracleSpecError, RoundSphere, TransportOracle, Trivial,
    MAX_MONOPOLE_CHARGE,
};

use crate::complex::{Simplex, SkeletalComplex, VertexId};
use crate::field::{FieldError, GaugeAssignment, Hlgf, CUTOFF_TOLERANCE};
use crate::gauge_group::{wrap_signed, GroupElement, LoopClass, Quat};

/// Coarsest accepted resolution.
pub const MIN_RESOLUTION: usize = 16;
pub const DEFAULT_RESOLUTION: usize = 256;
/// Default bound on the change of the transport between consecutive paths.
pub const LIFT_GUARD: f64 = FRAC_PI_2;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Trivialization {
    /// Oracle frames gauged so the transports along a spanning tree are the identity.
    Tree,
    /// The oracle's own frames.
    Native,
}

#[derive(Clone, Copy, Debug)]
pub struct CutoffOptions {
    pub resolution: usize,
    pub trivialization: Trivialization,
    /// Largest accepted transport jump between consecutive homotopy samples.
    pub lift_guard: f64,
}

impl Default for CutoffOptions {
    fn default() -> Self {
        CutoffOptions {
            resolution: DEFAULT_RESOLUTION,
            trivialization: Trivialization::Tree,
            lift_guard: LIFT_GUARD,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CutoffError {
    #[error("complex `{0}` has no built-in embedding")]
    NoEmbedding(String),
    #[error("resolution {0} is below the minimum of {MIN_RESOLUTION}")]
    Resolution(usize),
    #[error("lift guard {0} must lie in (0, pi)")]
    Guard(f64),
    #[error("lift of {simplex} is ambiguous: transport jumped by {jump:.3} rad between consecutive paths at resolution {resolution}")]
    LiftAmbiguity {
        simplex: Simplex,
        jump: f64,
        resolution: usize,
    },
    #[error("oracle `{oracle}` lives in R^{ambient} and does not reach the embedding of `{complex}`")]
    Unsupported {
        oracle: String,
        ambient: usize,
        complex: String,
    },
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Follows a continuous family of group elements and returns the class of
/// the path they sample. Steps longer than `guard` are refused.
pub fn track_lift(
    samples: &[GroupElement],
    simplex: Simplex,
    resolution: usize,
    guard: f64,
) -> Result<LoopClass, CutoffError> {
    let ambiguous = |jump: f64| CutoffError::LiftAmbiguity {
        simplex,
        jump,
        resolution,
    };
    match samples[0] {
        GroupElement::U1(a0) => {
            let mut lift = 0.0;
            let mut prev = a0;
            for g in &samples[1..] {
                let a = g.angle().expect("one backend per family");
                let step = wrap_signed(a - prev);
                if step.abs() > guard {
                    return Err(ambiguous(step.abs()));
                }
                lift += step;
                prev = a;
            }
            Ok(LoopClass::u1(a0, lift))
        }
        GroupElement::SO3(q0) | GroupElement::SU2(q0) => {
            let so3 = matches!(samples[0], GroupElement::SO3(_));
            let mut prev: Quat = q0;
            for g in &samples[1..] {
                let mut q = g.quaternion().expect("one backend per family");
                if so3 && prev.coords.dot(&q.coords) < 0.0 {
                    q = -q;
                }
                let jump = 2.0 * (prev - q).norm().atan2((prev + q).norm());
                if jump > guard {
                    return Err(ambiguous(jump));
                }
                prev = q;
            }
            Ok(if so3 {
                LoopClass::SO3 { start: q0, end: prev }
            } else {
                LoopClass::SU2 { start: q0, end: prev }
            })
        }
    }
}

/// Spanning tree used for the tree trivialization, as (parent, child) pairs.
///
/// The five-vertex sphere uses links from the north pole `v4` to the
/// equator and the meridian `v3 → v5`; other complexes grow a BFS tree from
/// their highest vertex, visiting neighbours in ascending order.
pub fn spanning_tree(c: &SkeletalComplex) -> (VertexId, Vec<(VertexId, VertexId)>) {
    if c.name() == "s2_five_vertex" && c.vertices() == [1, 2, 3, 4, 5] {
        let tree = vec![(4, 1), (4, 2), (4, 3), (3, 5)];
        if tree.iter().all(|&(a, b)| c.edge_between(a, b).is_some()) {
            return (4, tree);
        }
    }
    let root = *c.vertices().last().expect("complex has vertices");
    let mut seen = BTreeSet::from([root]);
    let mut queue = VecDeque::from([root]);
    let mut tree = Vec::new();
    while let Some(p) = queue.pop_front() {
        for n in c.neighbours(p) {
            if seen.insert(n) {
                tree.push((p, n));
                queue.push_back(n);
            }
        }
    }
    (root, tree)
}

/// Gauge that trivializes the edge values along the spanning tree.
pub fn tree_gauge(field: &Hlgf) -> GaugeAssignment {
    let (root, tree) = spanning_tree(field.complex());
    let backend = field.backend();
    let mut g = GaugeAssignment::new();
    g.insert(root, GroupElement::identity(backend));
    for (p, c) in tree {
        let gp = g[&p];
        let gc = if p < c {
            let a = field.edges()[&Simplex::new(&[p, c]).expect("edge")];
            gp.mul(&a)
        } else {
            let a = field.edges()[&Simplex::new(&[c, p]).expect("edge")];
            gp.mul(&a.inv())
        }
        .expect("one backend");
        g.insert(c, gc);
    }
    // vertices outside the tree's component keep their native frame
    for v in field.complex().vertices() {
        g.entry(*v).or_insert(GroupElement::identity(backend));
    }
    g
}

/// Cutoff map on a built-in complex.
pub fn cutoff(
    c: &SkeletalComplex,
    oracle: &dyn TransportOracle,
    opts: &CutoffOptions,
) -> Result<Hlgf, CutoffError> {
    let e = builtin_embedding(c).ok_or_else(|| CutoffError::NoEmbedding(c.name().to_string()))?;
    cutoff_with_embedding(c, &e, oracle, opts)
}

/// Cutoff map for an explicitly embedded complex.
pub fn cutoff_with_embedding(
    c: &SkeletalComplex,
    e: &Embedding,
    oracle: &dyn TransportOracle,
    opts: &CutoffOptions,
) -> Result<Hlgf, CutoffError> {
    let r = opts.resolution;
    if r < MIN_RESOLUTION {
        return Err(CutoffError::Resolution(r));
    }
    if !(opts.lift_guard > 0.0 && opts.lift_guard < PI) {
        return Err(CutoffError::Guard(opts.lift_guard));
    }
    if c.vertices().iter().any(|v| !e.contains_key(v)) {
        return Err(CutoffError::NoEmbedding(c.name().to_string()));
    }
    let ambient = oracle.ambient_dim();
    if ambient < 4 && e.values().any(|p| p.iter().skip(ambient).any(|x| *x != 0.0)) {
        return Err(CutoffError::Unsupported {
            oracle: oracle.label(),
            ambient,
            complex: c.name().to_string(),
        });
    }

    let edge_list: Vec<Simplex> = c.edges().copied().collect();
    let edges: BTreeMap<Simplex, GroupElement> = edge_list
        .par_iter()
        .map(|s| {
            let v = s.vertices();
            (*s, oracle.transport(&edge_samples(e, v[0], v[1], r)))
        })
        .collect();

    let face_list: Vec<Simplex> = c.faces().copied().collect();
    let faces: BTreeMap<Simplex, LoopClass> = face_list
        .par_iter()
        .map(|f| {
            let v = f.vertices();
            let samples: Vec<GroupElement> = face_homotopy(e, v[0], v[1], v[2], r)
                .iter()
                .map(|path| oracle.transport(path))
                .collect();
            track_lift(&samples, *f, r, opts.lift_guard).map(|l| (*f, l))
        })
        .collect::<Result<_, _>>()?;

    let native = Hlgf::new(
        c.clone(),
        oracle.backend(),
        edges,
        faces,
        None,
        CUTOFF_TOLERANCE,
    )?;
    Ok(match opts.trivialization {
        Trivialization::Native => native,
        Trivialization::Tree => native.gauge_transform(&tree_gauge(&native))?,
    })
}
