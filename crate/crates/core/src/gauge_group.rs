//! Gauge-group backends and their 1-globes up to homotopy rel endpoints.
//!
//! [`LoopClass`] is the level-1 data an HLGF attaches to 2-globes of the
//! base. For `U1` it is a base angle plus an unwrapped real lift, so the
//! winding of a closed loop is read off exactly. For `SO3` a class is a
//! pair of unit quaternions `(q0, q1)`: the endpoints of the unique lift to
//! SU(2) of a path starting at `q0`; the pair is defined up to a
//! simultaneous sign flip. `SU2` is simply connected, so a class is just its
//! endpoints.

use std::f64::consts::{PI, TAU};
use std::fmt;

use nalgebra::Quaternion;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Quat = Quaternion<f64>;

/// Winding must lie this close (in units of 2π) to an integer.
pub const WINDING_TOLERANCE: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Backend {
    U1,
    SO3,
    SU2,
}

impl Backend {
    pub const ALL: [Backend; 3] = [Backend::U1, Backend::SO3, Backend::SU2];
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Backend::U1 => "U1",
            Backend::SO3 => "SO3",
            Backend::SU2 => "SU2",
        })
    }
}

impl std::str::FromStr for Backend {
    type Err = GroupError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "U1" => Ok(Backend::U1),
            "SO3" => Ok(Backend::SO3),
            "SU2" => Ok(Backend::SU2),
            other => Err(GroupError::UnknownBackend(other.to_string())),
        }
    }
}

#[derive(Clone, Debug, Error, PartialEq)]
pub enum GroupError {
    #[error("unknown group backend `{0}` (expected U1, SO3 or SU2)")]
    UnknownBackend(String),
    #[error("backend mismatch: {0} vs {1}")]
    BackendMismatch(Backend, Backend),
    #[error("endpoints do not match (distance {distance:.3e} > {tolerance:.1e})")]
    EndpointMismatch { distance: f64, tolerance: f64 },
    #[error("loop is not based: source and target differ by {distance:.3e}")]
    NotBased { distance: f64 },
    #[error("winding {winding} is not within {WINDING_TOLERANCE} of an integer")]
    NonInteger { winding: f64 },
}

/// Reduces an angle to `[0, 2π)`.
pub fn wrap_angle(a: f64) -> f64 {
    let r = a.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Signed representative of an angle in `(-π, π]`.
pub fn wrap_signed(a: f64) -> f64 {
    let r = wrap_angle(a);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

fn quat_normalize(q: Quat) -> Quat {
    q / q.norm()
}

fn quat_dot(a: &Quat, b: &Quat) -> f64 {
    a.coords.dot(&b.coords)
}

/// Rotation angle of `a⁻¹ b` on SU(2), in `[0, 2π]`.
fn su2_distance(a: &Quat, b: &Quat) -> f64 {
    let d = a.conjugate() * b;
    2.0 * d.imag().norm().atan2(d.w)
}

/// Geodesic distance on SU(2)/±1.
fn so3_distance(a: &Quat, b: &Quat) -> f64 {
    let d = a.conjugate() * b;
    2.0 * d.imag().norm().atan2(d.w.abs())
}

/// Haar-random unit quaternion (normalised Gaussian 4-vector).
pub fn random_unit_quaternion<R: Rng + ?Sized>(rng: &mut R) -> Quat {
    loop {
        let v: [f64; 4] = std::array::from_fn(|_| rng.sample(StandardNormal));
        let q = Quaternion::new(v[0], v[1], v[2], v[3]);
        let n = q.norm();
        if n > 1e-6 {
            return q / n;
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GroupElement {
    /// Angle in `[0, 2π)`.
    U1(f64),
    /// Unit quaternion, either sign representing the same rotation.
    SO3(Quat),
    SU2(Quat),
}

impl GroupElement {
    pub fn u1(angle: f64) -> Self {
        GroupElement::U1(wrap_angle(angle))
    }

    pub fn so3(q: Quat) -> Self {
        GroupElement::SO3(quat_normalize(q))
    }

    pub fn su2(q: Quat) -> Self {
        GroupElement::SU2(quat_normalize(q))
    }

    /// Rotation by `angle` about a unit axis, as an SO3 element.
    pub fn so3_axis_angle(axis: [f64; 3], angle: f64) -> Self {
        let (s, c) = (angle / 2.0).sin_cos();
        GroupElement::so3(Quaternion::new(c, s * axis[0], s * axis[1], s * axis[2]))
    }

    pub fn identity(backend: Backend) -> Self {
        match backend {
            Backend::U1 => GroupElement::U1(0.0),
            Backend::SO3 => GroupElement::SO3(Quaternion::identity()),
            Backend::SU2 => GroupElement::SU2(Quaternion::identity()),
        }
    }

    pub fn random<R: Rng + ?Sized>(backend: Backend, rng: &mut R) -> Self {
        match backend {
            Backend::U1 => GroupElement::U1(rng.random_range(0.0..TAU)),
            Backend::SO3 => GroupElement::SO3(random_unit_quaternion(rng)),
            Backend::SU2 => GroupElement::SU2(random_unit_quaternion(rng)),
        }
    }

    pub fn backend(&self) -> Backend {
        match self {
            GroupElement::U1(_) => Backend::U1,
            GroupElement::SO3(_) => Backend::SO3,
            GroupElement::SU2(_) => Backend::SU2,
        }
    }

    /// Quaternion representative (SO3/SU2 only).
    pub fn quaternion(&self) -> Option<Quat> {
        match self {
            GroupElement::U1(_) => None,
            GroupElement::SO3(q) | GroupElement::SU2(q) => Some(*q),
        }
    }

    pub fn angle(&self) -> Option<f64> {
        match self {
            GroupElement::U1(a) => Some(*a),
            _ => None,
        }
    }

    pub fn mul(&self, other: &GroupElement) -> Result<GroupElement, GroupError> {
        Ok(match (self, other) {
            (GroupElement::U1(a), GroupElement::U1(b)) => GroupElement::u1(a + b),
            (GroupElement::SO3(a), GroupElement::SO3(b)) => GroupElement::SO3(a * b),
            (GroupElement::SU2(a), GroupElement::SU2(b)) => GroupElement::SU2(a * b),
            _ => return Err(GroupError::BackendMismatch(self.backend(), other.backend())),
        })
    }

    pub fn inv(&self) -> GroupElement {
        match self {
            GroupElement::U1(a) => GroupElement::u1(-a),
            GroupElement::SO3(q) => GroupElement::SO3(q.conjugate()),
            GroupElement::SU2(q) => GroupElement::SU2(q.conjugate()),
        }
    }

    /// Bi-invariant distance: angular for U1, rotation angle otherwise.
    pub fn dist(&self, other: &GroupElement) -> Result<f64, GroupError> {
        Ok(match (self, other) {
            (GroupElement::U1(a), GroupElement::U1(b)) => wrap_signed(a - b).abs(),
            (GroupElement::SO3(a), GroupElement::SO3(b)) => so3_distance(a, b),
            (GroupElement::SU2(a), GroupElement::SU2(b)) => su2_distance(a, b),
            _ => return Err(GroupError::BackendMismatch(self.backend(), other.backend())),
        })
    }

    pub fn approx_eq(&self, other: &GroupElement, tol: f64) -> bool {
        self.dist(other).is_ok_and(|d| d <= tol)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LoopClass {
    /// The class of `t ↦ base + t·lift`, `t ∈ [0, 1]`.
    U1 { base: f64, lift: f64 },
    /// Endpoints of an SU(2) lift; identified with `(-start, -end)`.
    SO3 { start: Quat, end: Quat },
    SU2 { start: Quat, end: Quat },
}

impl LoopClass {
    pub fn u1(base: f64, lift: f64) -> Self {
        LoopClass::U1 {
            base: wrap_angle(base),
            lift,
        }
    }

    pub fn backend(&self) -> Backend {
        match self {
            LoopClass::U1 { .. } => Backend::U1,
            LoopClass::SO3 { .. } => Backend::SO3,
            LoopClass::SU2 { .. } => Backend::SU2,
        }
    }

    /// The constant path at `g`.
    pub fn constant(g: &GroupElement) -> Self {
        match g {
            GroupElement::U1(a) => LoopClass::U1 { base: *a, lift: 0.0 },
            GroupElement::SO3(q) => LoopClass::SO3 { start: *q, end: *q },
            GroupElement::SU2(q) => LoopClass::SU2 { start: *q, end: *q },
        }
    }

    pub fn source(&self) -> GroupElement {
        match self {
            LoopClass::U1 { base, .. } => GroupElement::U1(*base),
            LoopClass::SO3 { start, .. } => GroupElement::SO3(*start),
            LoopClass::SU2 { start, .. } => GroupElement::SU2(*start),
        }
    }

    pub fn target(&self) -> GroupElement {
        match self {
            LoopClass::U1 { base, lift } => GroupElement::u1(base + lift),
            LoopClass::SO3 { end, .. } => GroupElement::SO3(*end),
            LoopClass::SU2 { end, .. } => GroupElement::SU2(*end),
        }
    }

    /// Unwrapped lift (U1 only).
    pub fn lift(&self) -> Option<f64> {
        match self {
            LoopClass::U1 { lift, .. } => Some(*lift),
            _ => None,
        }
    }

    /// Pointwise product; the image of `∘_0`.
    pub fn compose0(&self, b: &LoopClass) -> Result<LoopClass, GroupError> {
        Ok(match (self, b) {
            (LoopClass::U1 { base: a0, lift: ax }, LoopClass::U1 { base: b0, lift: bx }) => {
                LoopClass::u1(a0 + b0, ax + bx)
            }
            (LoopClass::SO3 { start: a0, end: a1 }, LoopClass::SO3 { start: b0, end: b1 }) => {
                LoopClass::SO3 {
                    start: a0 * b0,
                    end: a1 * b1,
                }
            }
            (LoopClass::SU2 { start: a0, end: a1 }, LoopClass::SU2 { start: b0, end: b1 }) => {
                LoopClass::SU2 {
                    start: a0 * b0,
                    end: a1 * b1,
                }
            }
            _ => return Err(GroupError::BackendMismatch(self.backend(), b.backend())),
        })
    }

    /// Concatenation, the image of `∘_1`: `b` runs first, then `self`.
    pub fn compose1(&self, b: &LoopClass, tol: f64) -> Result<LoopClass, GroupError> {
        let gap = b.target().dist(&self.source())?;
        if gap > tol {
            return Err(GroupError::EndpointMismatch {
                distance: gap,
                tolerance: tol,
            });
        }
        Ok(match (self, b) {
            (LoopClass::U1 { lift: ax, .. }, LoopClass::U1 { base: b0, lift: bx }) => {
                LoopClass::U1 {
                    base: *b0,
                    lift: bx + ax,
                }
            }
            (LoopClass::SO3 { start: a0, end: a1 }, LoopClass::SO3 { start: b0, end: b1 }) => {
                let s = quat_dot(a0, b1).signum();
                LoopClass::SO3 {
                    start: *b0,
                    end: a1 * s,
                }
            }
            (LoopClass::SU2 { end: a1, .. }, LoopClass::SU2 { start: b0, .. }) => {
                LoopClass::SU2 {
                    start: *b0,
                    end: *a1,
                }
            }
            _ => unreachable!("dist rejects mismatched backends"),
        })
    }

    /// Pointwise inverse, the image of `−_0`.
    pub fn inv0(&self) -> LoopClass {
        match self {
            LoopClass::U1 { base, lift } => LoopClass::u1(-base, -lift),
            LoopClass::SO3 { start, end } => LoopClass::SO3 {
                start: start.conjugate(),
                end: end.conjugate(),
            },
            LoopClass::SU2 { start, end } => LoopClass::SU2 {
                start: start.conjugate(),
                end: end.conjugate(),
            },
        }
    }

    /// Reversed path, the image of `−_1`.
    pub fn inv1(&self) -> LoopClass {
        match self {
            LoopClass::U1 { base, lift } => LoopClass::u1(base + lift, -lift),
            LoopClass::SO3 { start, end } => LoopClass::SO3 {
                start: *end,
                end: *start,
            },
            LoopClass::SU2 { start, end } => LoopClass::SU2 {
                start: *end,
                end: *start,
            },
        }
    }

    /// Distance between source and target.
    pub fn endpoint_gap(&self) -> f64 {
        self.source()
            .dist(&self.target())
            .expect("same backend")
    }

    /// The π₁ class of a based loop.
    pub fn pi1_class(&self, tol: f64) -> Result<Pi1Element, GroupError> {
        let gap = self.endpoint_gap();
        if gap > tol {
            return Err(GroupError::NotBased { distance: gap });
        }
        Ok(match self {
            LoopClass::U1 { lift, .. } => {
                let w = lift / TAU;
                let n = w.round();
                if (w - n).abs() > WINDING_TOLERANCE {
                    return Err(GroupError::NonInteger { winding: w });
                }
                Pi1Element::U1(n as i64)
            }
            LoopClass::SO3 { start, end } => {
                Pi1Element::SO3(if quat_dot(start, end) >= 0.0 { 1 } else { -1 })
            }
            LoopClass::SU2 { .. } => Pi1Element::SU2,
        })
    }

    /// Distance between classes: endpoint distances of the lifts (after sign
    /// alignment for SO3) and, for U1, the difference of the lifts. Distinct
    /// classes with equal endpoints are `2π` apart.
    pub fn distance(&self, other: &LoopClass) -> f64 {
        match (self, other) {
            (LoopClass::U1 { base: a0, lift: ax }, LoopClass::U1 { base: b0, lift: bx }) => {
                wrap_signed(a0 - b0).abs().max((ax - bx).abs())
            }
            (LoopClass::SO3 { start: a0, end: a1 }, LoopClass::SO3 { start: b0, end: b1 }) => {
                let s = if quat_dot(a0, b0) >= 0.0 { 1.0 } else { -1.0 };
                su2_distance(a0, &(b0 * s)).max(su2_distance(a1, &(b1 * s)))
            }
            (LoopClass::SU2 { start: a0, end: a1 }, LoopClass::SU2 { start: b0, end: b1 }) => {
                su2_distance(a0, b0).max(su2_distance(a1, b1))
            }
            _ => f64::INFINITY,
        }
    }

    /// Equality of classes within `tol`.
    pub fn approx_eq(&self, other: &LoopClass, tol: f64) -> bool {
        self.distance(other) <= tol
    }

    /// How far the lift travels: `|x|` for U1, the SU(2) distance between
    /// the lift endpoints otherwise. A nontrivial based loop measures `2π·|n|` (U1) or `2π` (SO3).
    pub fn lift_size(&self) -> f64 {
        match self {
            LoopClass::U1 { lift, .. } => lift.abs(),
            LoopClass::SO3 { start, end } | LoopClass::SU2 { start, end } => {
                su2_distance(start, end)
            }
        }
    }

    /// Sign relating the SU(2) lift pair to reference lifts of its
    /// endpoints: `start = s0·ref_source`, `end = s1·ref_target`; returns `s0·s1`.
    pub fn relative_sign(&self, ref_source: &Quat, ref_target: &Quat) -> Option<i8> {
        match self {
            LoopClass::SO3 { start, end } => {
                let s0 = quat_dot(start, ref_source).signum();
                let s1 = quat_dot(end, ref_target).signum();
                Some(if s0 * s1 >= 0.0 { 1 } else { -1 })
            }
            _ => None,
        }
    }
}

/// Element of π₁(G): ℤ for U1, ℤ/2 (as ±1) for SO3, trivial for SU2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pi1Element {
    U1(i64),
    SO3(i8),
    SU2,
}

impl Pi1Element {
    pub fn zero(backend: Backend) -> Self {
        match backend {
            Backend::U1 => Pi1Element::U1(0),
            Backend::SO3 => Pi1Element::SO3(1),
            Backend::SU2 => Pi1Element::SU2,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Pi1Element::U1(0) | Pi1Element::SO3(1) | Pi1Element::SU2)
    }

    pub fn add(&self, other: &Pi1Element) -> Result<Pi1Element, GroupError> {
        Ok(match (self, other) {
            (Pi1Element::U1(a), Pi1Element::U1(b)) => Pi1Element::U1(a + b),
            (Pi1Element::SO3(a), Pi1Element::SO3(b)) => Pi1Element::SO3(a * b),
            (Pi1Element::SU2, Pi1Element::SU2) => Pi1Element::SU2,
            _ => return Err(GroupError::BackendMismatch(self.backend(), other.backend())),
        })
    }

    pub fn neg(&self) -> Pi1Element {
        match self {
            Pi1Element::U1(a) => Pi1Element::U1(-a),
            other => *other,
        }
    }

    pub fn backend(&self) -> Backend {
        match self {
            Pi1Element::U1(_) => Backend::U1,
            Pi1Element::SO3(_) => Backend::SO3,
            Pi1Element::SU2 => Backend::SU2,
        }
    }
}

impl fmt::Display for Pi1Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pi1Element::U1(n) => write!(f, "{n}"),
            Pi1Element::SO3(s) => write!(f, "{}", if *s > 0 { "+1" } else { "-1" }),
            Pi1Element::SU2 => f.write_str("0"),
        }
    }
}
