//! Cutoffs of the charge-n monopole and their gauge behaviour.

use std::sync::Arc;

use hlgf::charge::{charge, topological_charge, Route};
use hlgf::complex::build_builtin;
use hlgf::continuum::{
    builtin_embedding, cutoff, CutoffError, CutoffOptions, Gauged, Monopole, Point, Trivialization,
};
use hlgf::field::{GaugeAssignment, Hlgf};
use hlgf::gauge_group::{Backend, GroupElement, Pi1Element};

fn opts(r: usize, t: Trivialization) -> CutoffOptions {
    CutoffOptions {
        resolution: r,
        trivialization: t,
        ..Default::default()
    }
}

#[test]
fn charge_equals_the_transition_winding() {
    // the transition function e^{inφ} winds n times around the equator
    for name in ["s2_five_vertex", "s2_tetra"] {
        let c = build_builtin(name).unwrap();
        for n in -2..=3 {
            let f = cutoff(&c, &Monopole { n }, &CutoffOptions::default()).unwrap();
            for route in Route::ALL {
                let q = charge(&f, route).unwrap();
                assert_eq!(q.value, Pi1Element::U1(n as i64), "{name} n={n} {route}");
                assert!(q.residual < 1e-3);
            }
        }
    }
}

#[test]
fn monopole_zero_is_the_identity_field() {
    let c = build_builtin("s2_five_vertex").unwrap();
    let f = cutoff(&c, &Monopole { n: 0 }, &opts(64, Trivialization::Tree)).unwrap();
    assert_eq!(f, Hlgf::identity(c, Backend::U1).with_tolerance(f.tolerance()));
}

#[test]
fn lifts_converge_in_the_resolution() {
    let c = build_builtin("s2_tetra").unwrap();
    for n in [-2, 3] {
        let a = cutoff(&c, &Monopole { n }, &opts(128, Trivialization::Tree)).unwrap();
        let b = cutoff(&c, &Monopole { n }, &opts(256, Trivialization::Tree)).unwrap();
        for (face, l) in a.faces() {
            let d = (l.lift().unwrap() - b.faces()[face].lift().unwrap()).abs();
            assert!(d < 1e-4, "n={n} {face}: {d}");
        }
    }
}

fn lambda(p: &Point) -> GroupElement {
    GroupElement::u1(3.0 * p.x + (2.0 * p.y).sin() - p.z * p.z)
}

#[test]
fn cutoff_commutes_with_gauge_transformations() {
    for name in ["s2_five_vertex", "s2_tetra"] {
        let c = build_builtin(name).unwrap();
        let e = builtin_embedding(&c).unwrap();
        let inner = Arc::new(Monopole { n: 2 });
        let gauged = Gauged {
            inner: inner.clone(),
            lambda: Arc::new(lambda),
        };
        let native = opts(64, Trivialization::Native);
        let lhs = cutoff(&c, &gauged, &native).unwrap();
        let g: GaugeAssignment = e.iter().map(|(v, p)| (*v, lambda(p))).collect();
        let rhs = cutoff(&c, inner.as_ref(), &native).unwrap().gauge_transform(&g).unwrap();
        for (edge, a) in lhs.edges() {
            assert!(a.approx_eq(&rhs.edges()[edge], 1e-12), "{name} {edge}");
        }
        for (face, l) in lhs.faces() {
            assert!(l.approx_eq(&rhs.faces()[face], 1e-9), "{name} {face}");
        }
        assert_eq!(topological_charge(&lhs).unwrap().value, Pi1Element::U1(2));
    }
}

#[test]
fn a_tight_guard_reports_the_ambiguity() {
    let c = build_builtin("s2_tetra").unwrap();
    let o = CutoffOptions {
        resolution: 16,
        lift_guard: 0.05,
        ..Default::default()
    };
    match cutoff(&c, &Monopole { n: 8 }, &o) {
        Err(CutoffError::LiftAmbiguity { resolution, jump, .. }) => {
            assert_eq!(resolution, 16);
            assert!(jump > 0.05);
        }
        other => panic!("{other:?}"),
    }
}
