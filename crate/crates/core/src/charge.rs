//! Topological charge of fields on closed oriented surfaces, computed along
//! three independent routes, and the bundle classification built on it.

use std::f64::consts::TAU;
use std::fmt;

use thiserror::Error;

use crate::complex::{SkeletalComplex, VertexId};
use crate::field::{ConsistencyReport, EvalError, Hlgf};
use crate::gauge_group::{Backend, GroupElement, GroupError, LoopClass, Pi1Element, WINDING_TOLERANCE};
use crate::globes::{covering_word, transition_word, SweepError, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    CoveringWord,
    FaceSum,
    TransitionWinding,
}

impl Route {
    pub const ALL: [Route; 3] = [Route::CoveringWord, Route::FaceSum, Route::TransitionWinding];
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Route::CoveringWord => "covering_word",
            Route::FaceSum => "face_sum",
            Route::TransitionWinding => "transition_winding",
        })
    }
}

impl std::str::FromStr for Route {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "covering" | "covering_word" => Ok(Route::CoveringWord),
            "facesum" | "face_sum" => Ok(Route::FaceSum),
            "transition" | "transition_winding" => Ok(Route::TransitionWinding),
            _ => Err(format!("unknown route `{s}` (expected covering, facesum or transition)")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChargeResult {
    pub value: Pi1Element,
    pub route: Route,
    /// Distance of the U1 lift from `2π·Q`; the endpoint gap for SO3/SU2.
    pub residual: f64,
}

#[derive(Debug, Error, PartialEq)]
pub enum ChargeError {
    #[error("charge needs a closed oriented 2D base; `{name}` has dimension {dim}")]
    NotSurface { name: String, dim: usize },
    #[error(transparent)]
    Sweep(#[from] SweepError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("charge is not quantized: {0}")]
    Group(#[from] GroupError),
    #[error("bundle classification needs a 2D or 3D base, got dimension {0}")]
    Dimension(usize),
    #[error("gluing data is inconsistent, no bundle is induced:\n{0}")]
    Refused(ConsistencyReport),
}

fn require_surface(f: &Hlgf) -> Result<(), ChargeError> {
    let c = f.complex();
    if c.dim() != 2 || !c.is_closed_oriented_surface() {
        return Err(ChargeError::NotSurface {
            name: c.name().to_string(),
            dim: c.dim(),
        });
    }
    Ok(())
}

/// π₁ class of a based loop, with the residual measured against the field's tolerance.
fn classify(l: &LoopClass, route: Route, tol: f64) -> Result<ChargeResult, ChargeError> {
    let value = l.pi1_class(tol)?;
    let residual = match (l, value) {
        (LoopClass::U1 { lift, .. }, Pi1Element::U1(n)) => (lift - TAU * n as f64).abs(),
        _ => l.endpoint_gap(),
    };
    if residual > tol.max(TAU * WINDING_TOLERANCE) {
        return Err(GroupError::NonInteger { winding: l.lift().unwrap_or(0.0) / TAU }.into());
    }
    Ok(ChargeResult { value, route, residual })
}

fn evaluate_loop(f: &Hlgf, w: &Word, route: Route) -> Result<ChargeResult, ChargeError> {
    let v = f.evaluate(w)?;
    let l = v.as_loop().expect("2-globe words evaluate to loops");
    classify(l, route, f.tolerance())
}

/// Evaluates the field on the covering 2-globe of the surface.
pub fn topological_charge(f: &Hlgf) -> Result<ChargeResult, ChargeError> {
    require_surface(f)?;
    evaluate_loop(f, &covering_word(f.complex())?, Route::CoveringWord)
}

/// Sums the face lifts with their orientation signs (U1), or multiplies the
/// face lift signs relative to the stored edge representatives (SO3).
pub fn charge_face_sum(f: &Hlgf) -> Result<ChargeResult, ChargeError> {
    require_surface(f)?;
    let oriented = f.complex().oriented_faces().expect("checked surface");
    match f.backend() {
        Backend::U1 => {
            let total: f64 = oriented
                .iter()
                .map(|o| o.sign as f64 * f.faces()[&o.face].lift().expect("U1 face"))
                .sum();
            let l = LoopClass::u1(0.0, total);
            classify(&l, Route::FaceSum, f.tolerance())
        }
        Backend::SO3 => {
            let mut sign = 1i8;
            let mut gap = 0.0f64;
            for o in &oriented {
                let (src, tgt) = f.face_boundary(&o.face);
                let l = &f.faces()[&o.face];
                gap = gap.max(l.source().dist(&src)?).max(l.target().dist(&tgt)?);
                let q = |g: GroupElement| g.quaternion().expect("SO3 element");
                sign *= l.relative_sign(&q(src), &q(tgt)).expect("SO3 face");
            }
            Ok(ChargeResult {
                value: Pi1Element::SO3(sign),
                route: Route::FaceSum,
                residual: gap,
            })
        }
        Backend::SU2 => Ok(ChargeResult {
            value: Pi1Element::SU2,
            route: Route::FaceSum,
            residual: 0.0,
        }),
    }
}

/// Default equator: `v1 v2 v3` when it is an edge cycle, otherwise the
/// boundary of the lowest face.
pub fn default_equator(c: &SkeletalComplex) -> Option<Vec<VertexId>> {
    let cycle = [1, 2, 3];
    let closed = (0..3).all(|k| c.edge_between(cycle[k], cycle[(k + 1) % 3]).is_some());
    if closed && c.faces().count() > 1 {
        return Some(cycle.to_vec());
    }
    c.faces().next().map(|f| f.vertices().to_vec())
}

/// Winding of the loop obtained by sweeping an equator across both disks it bounds.
pub fn transition_winding(f: &Hlgf, equator: Option<&[VertexId]>) -> Result<ChargeResult, ChargeError> {
    require_surface(f)?;
    let eq = match equator {
        Some(e) => e.to_vec(),
        None => default_equator(f.complex()).expect("surface has faces"),
    };
    evaluate_loop(f, &transition_word(f.complex(), &eq)?, Route::TransitionWinding)
}

pub fn charge(f: &Hlgf, route: Route) -> Result<ChargeResult, ChargeError> {
    match route {
        Route::CoveringWord => topological_charge(f),
        Route::FaceSum => charge_face_sum(f),
        Route::TransitionWinding => transition_winding(f, None),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BundleClassification {
    pub base_dim: usize,
    pub backend: Backend,
    /// π₁ class on surfaces; `None` on 3D bases, where only consistency is decided.
    pub invariant: Option<Pi1Element>,
    pub statement: String,
}

pub fn classify_bundle(f: &Hlgf) -> Result<BundleClassification, ChargeError> {
    let dim = f.complex().dim();
    let backend = f.backend();
    match dim {
        2 => {
            let q = topological_charge(f)?.value;
            let statement = match q {
                Pi1Element::U1(n) => format!("U1 bundle of Chern number {n}"),
                Pi1Element::SO3(s) => format!(
                    "SO3 bundle with second Stiefel-Whitney class {}",
                    if s > 0 { 0 } else { 1 }
                ),
                Pi1Element::SU2 => "SU2 bundle, trivial (pi1(SU2) = 0)".to_string(),
            };
            Ok(BundleClassification {
                base_dim: 2,
                backend,
                invariant: Some(q),
                statement: format!(
                    "{statement}; bundles over a closed oriented surface are classified by pi1({backend})"
                ),
            })
        }
        3 => {
            let report = f.check_consistency();
            if !report.is_empty() {
                return Err(ChargeError::Refused(report));
            }
            Ok(BundleClassification {
                base_dim: 3,
                backend,
                invariant: None,
                statement: format!(
                    "gluing data passes every tetrahedron condition and induces a {backend} bundle; no finer invariant is computed in 3D"
                ),
            })
        }
        d => Err(ChargeError::Dimension(d)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::build_builtin;
    use crate::field::random_field;

    #[test]
    fn identity_field_has_zero_charge_on_every_route() {
        for name in ["s2_five_vertex", "s2_tetra"] {
            for b in Backend::ALL {
                let f = Hlgf::identity(build_builtin(name).unwrap(), b);
                for r in Route::ALL {
                    let q = charge(&f, r).unwrap();
                    assert!(q.value.is_zero(), "{name} {b} {r}");
                    assert_eq!(q.residual, 0.0);
                }
            }
        }
    }

    #[test]
    fn routes_agree_on_random_fields() {
        for name in ["s2_five_vertex", "s2_tetra"] {
            let c = build_builtin(name).unwrap();
            for b in [Backend::U1, Backend::SO3] {
                for seed in 0..20 {
                    let f = random_field(&c, b, seed);
                    let qs: Vec<_> = Route::ALL.iter().map(|r| charge(&f, *r).unwrap().value).collect();
                    assert!(qs.iter().all(|q| *q == qs[0]), "{name} {b} seed {seed}: {qs:?}");
                }
            }
        }
    }

    #[test]
    fn non_surfaces_are_rejected() {
        let f = Hlgf::identity(build_builtin("s3_pentachoron").unwrap(), Backend::U1);
        assert!(matches!(topological_charge(&f), Err(ChargeError::NotSurface { dim: 3, .. })));
        assert!(classify_bundle(&f).unwrap().invariant.is_none());
    }

    #[test]
    fn route_names() {
        for r in Route::ALL {
            assert_eq!(r.to_string().parse::<Route>().unwrap(), r);
        }
        assert_eq!("facesum".parse::<Route>().unwrap(), Route::FaceSum);
        assert!("sum".parse::<Route>().is_err());
    }

    #[test]
    fn default_equators() {
        let c = build_builtin("s2_five_vertex").unwrap();
        assert_eq!(default_equator(&c), Some(vec![1, 2, 3]));
        let t = build_builtin("s2_tetra").unwrap();
        assert_eq!(default_equator(&t), Some(vec![1, 2, 3]));
    }
}
