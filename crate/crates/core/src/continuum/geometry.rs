//! Embeddings of the built-in complexes and sampled simplices of paths.
//!
//! Points live on the unit sphere of R⁴; two-dimensional bases use `w = 0`.
//! Edges are great-circle arcs. The homotopy `Γ_ijk` moves the corner
//! `x(s) = slerp(p_j, p_i, s)` along the edge `[ij]` and uses the path
//! `p_k → x(s) → p_j`, so `s = 0` gives `Γ_jk` and `s = 1` gives
//! `(−Γ_ij) ∘ Γ_ik` with samples bit-identical to the edge samples.

use std::collections::BTreeMap;

use nalgebra::Vector4;

use crate::complex::{build_builtin, SkeletalComplex, VertexId};

pub type Point = Vector4<f64>;

/// Angle between unit vectors, stable near 0 and π.
pub fn angle_between(a: &Point, b: &Point) -> f64 {
    2.0 * (a - b).norm().atan2((a + b).norm())
}

/// Great-circle interpolation with exact endpoints at `t = 0` and `t = 1`.
pub fn slerp(a: &Point, b: &Point, t: f64) -> Point {
    if t == 0.0 || a == b {
        return *a;
    }
    if t == 1.0 {
        return *b;
    }
    let w = angle_between(a, b);
    let s = w.sin();
    (a * ((1.0 - t) * w).sin() + b * (t * w).sin()) / s
}

/// Derivative of [`slerp`] in `t`.
pub fn slerp_velocity(a: &Point, b: &Point, t: f64) -> Point {
    if a == b {
        return Point::zeros();
    }
    let w = angle_between(a, b);
    let s = w.sin();
    (b * (t * w).cos() - a * ((1.0 - t) * w).cos()) * (w / s)
}

/// `r + 1` samples of the arc from `a` to `b`.
pub fn arc(a: &Point, b: &Point, r: usize) -> Vec<Point> {
    (0..=r).map(|m| slerp(a, b, m as f64 / r as f64)).collect()
}

/// The same points as `arc(b, a, r)`, in reverse order.
pub fn arc_reversed(a: &Point, b: &Point, r: usize) -> Vec<Point> {
    (0..=r)
        .map(|m| slerp(b, a, (r - m) as f64 / r as f64))
        .collect()
}

/// Concatenates sampled paths sharing their junction points.
pub fn concat(first: Vec<Point>, second: &[Point]) -> Vec<Point> {
    let mut out = first;
    out.extend_from_slice(&second[1..]);
    out
}

pub type Embedding = BTreeMap<VertexId, Point>;

fn p3(x: f64, y: f64, z: f64) -> Point {
    Vector4::new(x, y, z, 0.0).normalize()
}

/// Vertex positions for a built-in complex (returns `None` for other complexes,
/// including modified copies of a built-in).
///
/// * `s2_five_vertex`: `v3` on the Greenwich meridian at the equator, `v2`
///   and `v1` 120° and 240° to its west, `v4` and `v5` at the poles.
/// * `s2_tetra`: a regular tetrahedron with positive orientation for `[1234]`.
/// * `s3_pentachoron`: a regular 4-simplex inscribed in S³.
pub fn builtin_embedding(c: &SkeletalComplex) -> Option<Embedding> {
    let reference = build_builtin(c.name()).ok()?;
    if &reference != c {
        return None;
    }
    let third = 2.0 * std::f64::consts::PI / 3.0;
    let pts: Vec<Point> = match c.name() {
        "s2_five_vertex" => vec![
            p3(third.cos(), third.sin(), 0.0),
            p3(third.cos(), -third.sin(), 0.0),
            p3(1.0, 0.0, 0.0),
            p3(0.0, 0.0, 1.0),
            p3(0.0, 0.0, -1.0),
        ],
        "s2_tetra" => vec![
            p3(1.0, 1.0, 1.0),
            p3(1.0, -1.0, -1.0),
            p3(-1.0, -1.0, 1.0),
            p3(-1.0, 1.0, -1.0),
        ],
        "s3_pentachoron" => {
            let h = -1.0 / 5f64.sqrt();
            [
                [1.0, 1.0, 1.0, h],
                [1.0, -1.0, -1.0, h],
                [-1.0, 1.0, -1.0, h],
                [-1.0, -1.0, 1.0, h],
                [0.0, 0.0, 0.0, 4.0 / 5f64.sqrt()],
            ]
            .iter()
            .map(|v| Vector4::new(v[0], v[1], v[2], v[3]).normalize())
            .collect()
        }
        _ => return None,
    };
    Some((1..).zip(pts).collect())
}

/// Samples of `Γ_ij` (from `p_j` to `p_i`).
pub fn edge_samples(e: &Embedding, i: VertexId, j: VertexId, r: usize) -> Vec<Point> {
    arc(&e[&j], &e[&i], r)
}

/// The `r + 1` paths of the homotopy `Γ_ijk`, each with `2r + 1` samples.
pub fn face_homotopy(e: &Embedding, i: VertexId, j: VertexId, k: VertexId, r: usize) -> Vec<Vec<Point>> {
    let (pi, pj, pk) = (e[&i], e[&j], e[&k]);
    (0..=r)
        .map(|m| {
            let x = slerp(&pj, &pi, m as f64 / r as f64);
            concat(arc(&pk, &x, r), &arc_reversed(&x, &pj, r))
        })
        .collect()
}
