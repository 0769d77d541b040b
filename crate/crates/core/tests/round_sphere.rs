//! The Levi-Civita connection of the round sphere on the five-vertex triangulation.

use std::f64::consts::{PI, TAU};

use hlgf::charge::{charge, classify_bundle, transition_winding, Route};
use hlgf::complex::{build_builtin, Simplex};
use hlgf::continuum::{cutoff, CutoffOptions, RoundSphere};
use hlgf::field::Hlgf;
use hlgf::gauge_group::{wrap_signed, Pi1Element};
use hlgf::globes::covering_word;

const THETA_F: f64 = 4.0 * PI / 6.0;

fn round(r: usize) -> Hlgf {
    let c = build_builtin("s2_five_vertex").unwrap();
    let opts = CutoffOptions {
        resolution: r,
        ..Default::default()
    };
    cutoff(&c, &RoundSphere, &opts).unwrap()
}

fn s(v: &[u32]) -> Simplex {
    Simplex::new(v).unwrap()
}

#[test]
fn face_lifts_reproduce_the_worked_example() {
    let f = round(256);
    let table = [
        ([1, 2, 4], THETA_F),
        ([2, 3, 4], THETA_F),
        ([1, 3, 4], -THETA_F),
        ([1, 2, 5], -THETA_F),
        ([2, 3, 5], -THETA_F),
        ([1, 3, 5], THETA_F),
    ];
    for (face, x) in table {
        let lift = f.faces()[&s(&face)].lift().unwrap();
        assert!((lift - x).abs() < 1e-3, "{face:?}: {lift}");
    }
}

#[test]
fn charge_is_two() {
    let f = round(256);
    for route in Route::ALL {
        assert_eq!(charge(&f, route).unwrap().value, Pi1Element::U1(2), "{route}");
    }
    let q = transition_winding(&f, Some(&[1, 2, 3])).unwrap();
    assert_eq!(q.value, Pi1Element::U1(2));
}

#[test]
fn covering_lift_is_four_pi() {
    let f = round(256);
    let v = f.evaluate(&covering_word(f.complex()).unwrap()).unwrap();
    let lift = v.as_loop().unwrap().lift().unwrap();
    assert!((lift - 4.0 * PI).abs() < 1e-3, "{lift}");
    // Σ ε·x over the oriented faces is 6θ_f
    let sum: f64 = f
        .complex()
        .oriented_faces()
        .unwrap()
        .iter()
        .map(|o| o.sign as f64 * f.faces()[&o.face].lift().unwrap())
        .sum();
    assert!((sum - 6.0 * THETA_F).abs() < 1e-3);
}

#[test]
fn edge_holonomies_follow_gauss_bonnet() {
    // In the tree gauge A_ij is the holonomy of the loop closing [ij] through
    // the tree, i.e. the rotation by the enclosed spherical area: a 120° slice
    // of a hemisphere (θ_f) for equator edges and a full 120° lune (2θ_f ≡ −θ_f)
    // for the southern edges off the tree.
    let f = round(256);
    let expect = [
        ([1, 2], -1),
        ([1, 3], 1),
        ([2, 3], -1),
        ([1, 5], -1),
        ([2, 5], 1),
        ([1, 4], 0),
        ([2, 4], 0),
        ([3, 4], 0),
        ([3, 5], 0),
    ];
    for (e, n) in expect {
        let a = wrap_signed(f.edges()[&s(&e)].angle().unwrap());
        assert!((a - n as f64 * THETA_F).abs() < 1e-9, "{e:?}: {}", a / THETA_F);
    }
    // enclosed areas, independent of the sign convention
    let hemisphere_slice = TAU * (120.0 / 360.0);
    let lune = 2.0 * hemisphere_slice;
    for e in [[1, 2], [1, 3], [2, 3]] {
        let a = f.edges()[&s(&e)].angle().unwrap();
        assert!((wrap_signed(a).abs() - hemisphere_slice).abs() < 1e-9);
    }
    for e in [[1, 5], [2, 5]] {
        let a = f.edges()[&s(&e)].angle().unwrap();
        assert!((wrap_signed(a).abs() - wrap_signed(lune).abs()).abs() < 1e-9);
    }
}

#[test]
fn bundle_is_the_unit_tangent_bundle() {
    let b = classify_bundle(&round(256)).unwrap();
    assert_eq!(b.invariant, Some(Pi1Element::U1(2)));
    assert!(b.statement.contains("Chern number 2"), "{}", b.statement);
}

#[test]
fn lifts_converge_in_the_resolution() {
    let (a, b) = (round(128), round(256));
    for (face, l) in a.faces() {
        let d = (l.lift().unwrap() - b.faces()[face].lift().unwrap()).abs();
        assert!(d < 1e-4, "{face}: {d}");
    }
}
