//! Continuum connections presented as parallel-transport callbacks.

use std::f64::consts::TAU;
use std::fmt;
use std::sync::Arc;

use nalgebra::Vector3;

use super::geometry::{slerp, slerp_velocity, Point};
use crate::gauge_group::{Backend, GroupElement};

/// A connection given by its transport along sampled paths.
///
/// Transports are expressed in the oracle's native frames at the path's
/// endpoints; the cutoff map re-trivializes them afterwards.
pub trait TransportOracle: Send + Sync + fmt::Debug {
    fn backend(&self) -> Backend;

    /// Name as accepted on the command line.
    fn label(&self) -> String;

    /// Dimension of the ambient space the oracle is defined in (3 for S²).
    fn ambient_dim(&self) -> usize;

    /// Transport from the first to the last sample.
    fn transport(&self, path: &[Point]) -> GroupElement;
}

fn v3(p: &Point) -> Vector3<f64> {
    Vector3::new(p.x, p.y, p.z)
}

/// Levi-Civita transport of unit tangent vectors on the round unit sphere,
/// as an angle in SO(2) ≅ U(1).
#[derive(Clone, Debug, Default)]
pub struct RoundSphere;

/// Generic axis whose tangential projection gives the native frames.
const FRAME_AXIS: [f64; 3] = [0.267, 0.534, 0.802];

impl RoundSphere {
    /// Unit tangent frame vector at `p`.
    pub fn frame(p: &Vector3<f64>) -> Vector3<f64> {
        let a = Vector3::from(FRAME_AXIS);
        (a - p * a.dot(p)).normalize()
    }

    /// Rotates `v` by the rotation carrying `a` to `b` along their great circle.
    fn transport_step(a: &Vector3<f64>, b: &Vector3<f64>, v: &Vector3<f64>) -> Vector3<f64> {
        let axis = a.cross(b);
        let s = axis.norm();
        if s < 1e-300 {
            return *v;
        }
        let k = axis / s;
        let c = a.dot(b);
        // Rodrigues with sin = s, cos = c
        v * c + k.cross(v) * s + k * k.dot(v) * (1.0 - c)
    }

    /// Angle of `w` relative to `e`, counterclockwise about the outward normal `n`.
    pub fn angle(e: &Vector3<f64>, w: &Vector3<f64>, n: &Vector3<f64>) -> f64 {
        e.cross(w).dot(n).atan2(e.dot(w))
    }
}

impl TransportOracle for RoundSphere {
    fn backend(&self) -> Backend {
        Backend::U1
    }

    fn label(&self) -> String {
        "round-sphere".into()
    }

    fn ambient_dim(&self) -> usize {
        3
    }

    fn transport(&self, path: &[Point]) -> GroupElement {
        let start = v3(&path[0]);
        let end = v3(path.last().expect("non-empty path"));
        let mut w = RoundSphere::frame(&start);
        for pair in path.windows(2) {
            w = RoundSphere::transport_step(&v3(&pair[0]), &v3(&pair[1]), &w);
        }
        GroupElement::u1(RoundSphere::angle(&RoundSphere::frame(&end), &w, &end))
    }
}

/// The charge-`n` U(1) monopole in two hemisphere charts:
/// `A_N = (n/2)(x dy − y dx)/(1 + z)` on `z ≥ 0` and
/// `A_S = −(n/2)(x dy − y dx)/(1 − z)` below, with `A_N − A_S = n dφ`.
/// Transport multiplies by `exp(i∫A)`; crossing into the southern chart at
/// longitude `φ` multiplies by `exp(−inφ)`.
#[derive(Clone, Debug)]
pub struct Monopole {
    pub n: i32,
}

/// Largest supported `|n|`.
pub const MAX_MONOPOLE_CHARGE: i32 = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Chart {
    North,
    South,
}

fn chart(p: &Point) -> Chart {
    if p.z >= 0.0 {
        Chart::North
    } else {
        Chart::South
    }
}

impl Monopole {
    pub fn new(n: i32) -> Option<Self> {
        (n.abs() <= MAX_MONOPOLE_CHARGE).then_some(Monopole { n })
    }

    fn potential(&self, ch: Chart, p: &Point, v: &Point) -> f64 {
        let rot = p.x * v.y - p.y * v.x;
        let half = self.n as f64 / 2.0;
        match ch {
            Chart::North => half * rot / (1.0 + p.z),
            Chart::South => -half * rot / (1.0 - p.z),
        }
    }

    /// `∫A` along the arc from `a` to `b` in one chart (Simpson, two panels).
    fn arc_integral(&self, ch: Chart, a: &Point, b: &Point) -> f64 {
        if a == b {
            return 0.0;
        }
        let f = |t: f64| self.potential(ch, &slerp(a, b, t), &slerp_velocity(a, b, t));
        (f(0.0) + 4.0 * f(0.25) + 2.0 * f(0.5) + 4.0 * f(0.75) + f(1.0)) / 12.0
    }

    fn switch(&self, from: Chart, p: &Point) -> f64 {
        let phi = p.y.atan2(p.x);
        match from {
            Chart::North => -(self.n as f64) * phi,
            Chart::South => self.n as f64 * phi,
        }
    }
}

impl TransportOracle for Monopole {
    fn backend(&self) -> Backend {
        Backend::U1
    }

    fn label(&self) -> String {
        format!("monopole:{}", self.n)
    }

    fn ambient_dim(&self) -> usize {
        3
    }

    fn transport(&self, path: &[Point]) -> GroupElement {
        let mut current = chart(&path[0]);
        let mut alpha = 0.0;
        for pair in path.windows(2) {
            let ch = chart(&pair[0]);
            if ch != current {
                alpha += self.switch(current, &pair[0]);
                current = ch;
            }
            alpha += self.arc_integral(current, &pair[0], &pair[1]);
        }
        let end = path.last().expect("non-empty path");
        if chart(end) != current {
            alpha += self.switch(current, end);
        }
        GroupElement::u1(alpha.rem_euclid(TAU))
    }
}

/// The trivial connection: every transport is the identity.
#[derive(Clone, Debug)]
pub struct Trivial {
    pub backend: Backend,
    pub ambient: usize,
}

impl TransportOracle for Trivial {
    fn backend(&self) -> Backend {
        self.backend
    }

    fn label(&self) -> String {
        "trivial".into()
    }

    fn ambient_dim(&self) -> usize {
        self.ambient
    }

    fn transport(&self, _path: &[Point]) -> GroupElement {
        GroupElement::identity(self.backend)
    }
}

/// An oracle with its native frames rotated by a smooth gauge function:
/// `T'(path) = λ(end) · T(path) · λ(start)⁻¹`.
#[derive(Clone)]
pub struct Gauged {
    pub inner: Arc<dyn TransportOracle>,
    pub lambda: Arc<dyn Fn(&Point) -> GroupElement + Send + Sync>,
}

impl fmt::Debug for Gauged {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Gauged({:?})", self.inner)
    }
}

impl TransportOracle for Gauged {
    fn backend(&self) -> Backend {
        self.inner.backend()
    }

    fn label(&self) -> String {
        format!("gauged {}", self.inner.label())
    }

    fn ambient_dim(&self) -> usize {
        self.inner.ambient_dim()
    }

    fn transport(&self, path: &[Point]) -> GroupElement {
        let t = self.inner.transport(path);
        let end = (self.lambda)(path.last().expect("non-empty path"));
        let start = (self.lambda)(&path[0]);
        end.mul(&t)
            .and_then(|x| x.mul(&start.inv()))
            .expect("gauge function on the oracle's backend")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum OracleSpecError {
    #[error("unknown oracle `{0}` (expected round-sphere, monopole:<n> or trivial)")]
    Unknown(String),
    #[error("monopole charge must be an integer with |n| <= {MAX_MONOPOLE_CHARGE}, got `{0}`")]
    BadCharge(String),
    #[error("oracle `{oracle}` is a U1 connection, not {backend}")]
    Backend { oracle: String, backend: Backend },
}

/// Parses an oracle name. `trivial` takes its backend from `backend`; the
/// other oracles are U1 connections on S².
pub fn oracle_from_spec(
    spec: &str,
    backend: Backend,
    ambient: usize,
) -> Result<Arc<dyn TransportOracle>, OracleSpecError> {
    let u1_only = |o: Arc<dyn TransportOracle>| {
        if backend == Backend::U1 {
            Ok(o)
        } else {
            Err(OracleSpecError::Backend {
                oracle: spec.to_string(),
                backend,
            })
        }
    };
    match spec {
        "round-sphere" => u1_only(Arc::new(RoundSphere)),
        "trivial" => Ok(Arc::new(Trivial { backend, ambient })),
        _ => {
            let n = spec
                .strip_prefix("monopole:")
                .ok_or_else(|| OracleSpecError::Unknown(spec.to_string()))?;
            let m = n
                .parse::<i32>()
                .ok()
                .and_then(Monopole::new)
                .ok_or_else(|| OracleSpecError::BadCharge(n.to_string()))?;
            u1_only(Arc::new(m))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::continuum::geometry::{arc, concat};
    use nalgebra::Vector4;
    use std::f64::consts::PI;

    fn p(x: f64, y: f64, z: f64) -> Point {
        Vector4::new(x, y, z, 0.0).normalize()
    }

    fn closed(points: &[Point], r: usize) -> Vec<Point> {
        let mut path = vec![points[0]];
        for k in 0..points.len() {
            let a = points[k];
            let b = points[(k + 1) % points.len()];
            path = concat(path, &arc(&a, &b, r));
        }
        path
    }

    #[test]
    fn equator_is_a_geodesic() {
        let eq = [p(1.0, 0.0, 0.0), p(-0.5, 0.866, 0.0), p(-0.5, -0.866, 0.0)];
        let h = RoundSphere.transport(&closed(&eq, 64));
        assert!(h.dist(&GroupElement::identity(Backend::U1)).unwrap() < 1e-12);
    }

    #[test]
    fn octant_holonomy_is_the_spherical_excess() {
        // Gauss–Bonnet: the octant triangle has area (excess) π/2
        let tri = [p(1.0, 0.0, 0.0), p(0.0, 1.0, 0.0), p(0.0, 0.0, 1.0)];
        let h = RoundSphere.transport(&closed(&tri, 64)).angle().unwrap();
        let signed = crate::gauge_group::wrap_signed(h);
        assert!((signed.abs() - PI / 2.0).abs() < 1e-12, "{signed}");
    }

    #[test]
    fn reversed_path_transports_inversely() {
        let path = concat(
            arc(&p(1.0, 0.2, 0.1), &p(0.1, 1.0, 0.3), 40),
            &arc(&p(0.1, 1.0, 0.3), &p(-0.3, 0.2, 1.0), 40),
        );
        let mut rev = path.clone();
        rev.reverse();
        for o in [&RoundSphere as &dyn TransportOracle, &Monopole { n: 3 }] {
            let a = o.transport(&path);
            let b = o.transport(&rev);
            assert!(a.mul(&b).unwrap().dist(&GroupElement::identity(Backend::U1)).unwrap() < 1e-9);
        }
    }

    #[test]
    fn concatenation_is_the_ordered_product() {
        let a = arc(&p(1.0, 0.2, 0.1), &p(0.1, 1.0, -0.3), 40);
        let b = arc(&p(0.1, 1.0, -0.3), &p(-0.3, 0.2, 1.0), 40);
        for o in [&RoundSphere as &dyn TransportOracle, &Monopole { n: -2 }] {
            let whole = o.transport(&concat(a.clone(), &b));
            let parts = o.transport(&b).mul(&o.transport(&a)).unwrap();
            assert!(whole.dist(&parts).unwrap() < 1e-9);
        }
    }

    #[test]
    fn monopole_zero_is_flat() {
        let tri = [p(1.0, 0.0, 0.3), p(0.0, 1.0, -0.5), p(0.0, -0.2, 1.0)];
        let h = Monopole { n: 0 }.transport(&closed(&tri, 32));
        assert_eq!(h, GroupElement::identity(Backend::U1));
    }

    #[test]
    fn monopole_flux_through_a_cap() {
        // holonomy of a latitude circle at height z encloses flux n·π(1 − z) around the north pole
        let (n, z) = (3, 0.4_f64);
        let rho = (1.0 - z * z).sqrt();
        let pts: Vec<Point> = (0..=400)
            .map(|m| {
                let t = TAU * m as f64 / 400.0;
                Vector4::new(rho * t.cos(), rho * t.sin(), z, 0.0)
            })
            .collect();
        let h = Monopole { n }.transport(&pts).angle().unwrap();
        let expect = (n as f64 * PI * (1.0 - z)).rem_euclid(TAU);
        // the samples are joined by short great-circle chords, which cut the cap slightly
        assert!(crate::gauge_group::wrap_signed(h - expect).abs() < 1e-4, "{h} vs {expect}");
    }

    #[test]
    fn spec_parsing() {
        assert_eq!(oracle_from_spec("round-sphere", Backend::U1, 3).unwrap().label(), "round-sphere");
        assert_eq!(oracle_from_spec("monopole:-2", Backend::U1, 3).unwrap().label(), "monopole:-2");
        assert_eq!(oracle_from_spec("trivial", Backend::SO3, 4).unwrap().backend(), Backend::SO3);
        assert!(matches!(oracle_from_spec("monopole:9", Backend::U1, 3), Err(OracleSpecError::BadCharge(_))));
        assert!(matches!(oracle_from_spec("monopole:x", Backend::U1, 3), Err(OracleSpecError::BadCharge(_))));
        assert!(matches!(oracle_from_spec("flat", Backend::U1, 3), Err(OracleSpecError::Unknown(_))));
        assert!(matches!(oracle_from_spec("round-sphere", Backend::SO3, 3), Err(OracleSpecError::Backend { .. })));
    }
}
