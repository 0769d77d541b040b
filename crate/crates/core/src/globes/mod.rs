//! Globe words over simplices of paths.
//!
//! A [`Word`] is a free expression tree built from vertices, generators
//! `Γ_σ`, degeneracies `s_{i,k}`, compositions `∘_j` and inversions `−_j`.
//! Composition reads right to left: `a ∘_j b` runs `b` first, so it is
//! defined when `d_j^+ b = d_j^- a`, and then `d_j^-(a ∘_j b) = d_j^- b`,
//! `d_j^+(a ∘_j b) = d_j^+ a`.
//!
//! Words are never rewritten. Boundaries are computed by structural
//! recursion; paths (1-globes) are compared as reduced words in the free
//! groupoid on the 1-skeleton, which is exactly thin homotopy of edge paths.

mod parse;
mod path;
mod sweep;

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::complex::{Simplex, SkeletalComplex, VertexId};

pub use parse::{parse_word, ParseError, ParseErrorKind};
pub use path::{hop, path_word, reduce_path, reduce_sequence};
pub use sweep::{
    covering_sweep, covering_word, face_coverage, tetra_boundary_word, transition_sweep,
    transition_word, validate_equator, Move, Sweep, SweepError,
};

/// Highest globe dimension handled (3-globes appear over 3D bases).
pub const MAX_DIM: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Minus,
    Plus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Minus => Sign::Plus,
            Sign::Plus => Sign::Minus,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Minus => "-",
            Sign::Plus => "+",
        })
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum GlobeError {
    #[error("level {level} out of range for a word of dimension {dim}")]
    LevelOutOfRange { level: usize, dim: usize },
    #[error("cannot compose at level {level}: dimensions {left} and {right} differ")]
    DimensionMismatch {
        level: usize,
        left: usize,
        right: usize,
    },
    #[error("not composable at level {level}: d{level}+ of `{right}` is {found}, d{level}- of `{left}` is {expected}")]
    NotComposable {
        level: usize,
        left: String,
        right: String,
        found: String,
        expected: String,
    },
    #[error("generator {0} must be an increasing tuple of 2 to 4 vertices")]
    BadGenerator(Simplex),
    #[error("degeneracy s{i}{k} needs 0 <= i < k <= 3 and an argument of dimension {i}, got {dim}")]
    BadDegeneracy { i: usize, k: usize, dim: usize },
    #[error("simplex {0} is not in the complex")]
    UnknownSimplex(Simplex),
    #[error("vertex v{0} is not in the complex")]
    UnknownVertex(VertexId),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    Vertex(VertexId),
    /// `Γ_σ` for a simplex with `k + 2` vertices: a `(k + 1)`-globe.
    Gen(Simplex),
    /// `s_{i,k}` lifting an `i`-globe to a degenerate `k`-globe.
    Degenerate { i: usize, k: usize, child: Word },
    Compose { level: usize, left: Word, right: Word },
    Invert { level: usize, child: Word },
}

#[derive(Debug, PartialEq, Eq, Hash)]
struct Node {
    dim: usize,
    kind: Kind,
}

/// An immutable, cheaply clonable globe word.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Word(Arc<Node>);

impl Word {
    fn raw(dim: usize, kind: Kind) -> Word {
        Word(Arc::new(Node { dim, kind }))
    }

    pub fn vertex(v: VertexId) -> Word {
        Word::raw(0, Kind::Vertex(v))
    }

    pub fn gen(s: Simplex) -> Result<Word, GlobeError> {
        if s.dim() == 0 || !s.is_ordered() {
            return Err(GlobeError::BadGenerator(s));
        }
        Ok(Word::raw(s.dim(), Kind::Gen(s)))
    }

    /// Generator from a vertex list; panics on a malformed tuple.
    pub fn g(verts: &[VertexId]) -> Word {
        Word::gen(Simplex::new(verts).expect("2 to 4 vertices")).expect("increasing tuple")
    }

    pub fn degenerate(i: usize, k: usize, child: Word) -> Result<Word, GlobeError> {
        if i >= k || k > MAX_DIM || child.dim() != i {
            return Err(GlobeError::BadDegeneracy {
                i,
                k,
                dim: child.dim(),
            });
        }
        Ok(Word::raw(k, Kind::Degenerate { i, k, child }))
    }

    /// `s_{d,d+1}`: the identity on a `d`-globe.
    pub fn identity(child: Word) -> Word {
        let d = child.dim();
        Word::degenerate(d, d + 1, child).expect("dimension below MAX_DIM")
    }

    pub fn compose(level: usize, left: Word, right: Word) -> Result<Word, GlobeError> {
        if left.dim() != right.dim() {
            return Err(GlobeError::DimensionMismatch {
                level,
                left: left.dim(),
                right: right.dim(),
            });
        }
        if level >= left.dim() {
            return Err(GlobeError::LevelOutOfRange {
                level,
                dim: left.dim(),
            });
        }
        let found = right.face(level, Sign::Plus)?;
        let expected = left.face(level, Sign::Minus)?;
        if !same_globe(&found, &expected) {
            return Err(GlobeError::NotComposable {
                level,
                left: left.to_string(),
                right: right.to_string(),
                found: found.to_string(),
                expected: expected.to_string(),
            });
        }
        Ok(Word::compose_unchecked(level, left, right))
    }

    fn compose_unchecked(level: usize, left: Word, right: Word) -> Word {
        let dim = left.dim();
        Word::raw(dim, Kind::Compose { level, left, right })
    }

    pub fn invert(level: usize, child: Word) -> Result<Word, GlobeError> {
        if level >= child.dim() {
            return Err(GlobeError::LevelOutOfRange {
                level,
                dim: child.dim(),
            });
        }
        Ok(Word::invert_unchecked(level, child))
    }

    fn invert_unchecked(level: usize, child: Word) -> Word {
        let dim = child.dim();
        Word::raw(dim, Kind::Invert { level, child })
    }

    pub fn dim(&self) -> usize {
        self.0.dim
    }

    pub fn kind(&self) -> &Kind {
        &self.0.kind
    }

    /// The boundary `d_j^±`, a `j`-dimensional word.
    pub fn face(&self, j: usize, sign: Sign) -> Result<Word, GlobeError> {
        if j >= self.dim() {
            return Err(GlobeError::LevelOutOfRange {
                level: j,
                dim: self.dim(),
            });
        }
        Ok(self.face_unchecked(j, sign))
    }

    fn face_unchecked(&self, j: usize, sign: Sign) -> Word {
        match self.kind() {
            Kind::Vertex(_) => unreachable!("vertices have no faces"),
            Kind::Gen(s) => generator_face(s, j, sign),
            Kind::Degenerate { i, child, .. } => {
                if j < *i {
                    child.face_unchecked(j, sign)
                } else if j == *i {
                    child.clone()
                } else {
                    Word::raw(
                        j,
                        Kind::Degenerate {
                            i: *i,
                            k: j,
                            child: child.clone(),
                        },
                    )
                }
            }
            Kind::Compose { level, left, right } => {
                if j < *level {
                    left.face_unchecked(j, sign)
                } else if j == *level {
                    match sign {
                        Sign::Minus => right.face_unchecked(j, sign),
                        Sign::Plus => left.face_unchecked(j, sign),
                    }
                } else {
                    Word::compose_unchecked(
                        *level,
                        left.face_unchecked(j, sign),
                        right.face_unchecked(j, sign),
                    )
                }
            }
            Kind::Invert { level, child } => {
                if j < *level {
                    child.face_unchecked(j, sign)
                } else if j == *level {
                    child.face_unchecked(j, sign.flip())
                } else {
                    Word::invert_unchecked(*level, child.face_unchecked(j, sign))
                }
            }
        }
    }

    /// Source and target vertices (`d_0^-`, `d_0^+`) of a positive-dimensional word.
    pub fn endpoints(&self) -> Option<(VertexId, VertexId)> {
        let v = |w: Word| match w.kind() {
            Kind::Vertex(v) => *v,
            _ => unreachable!("0-dimensional words are vertices"),
        };
        (self.dim() > 0).then(|| {
            (
                v(self.face_unchecked(0, Sign::Minus)),
                v(self.face_unchecked(0, Sign::Plus)),
            )
        })
    }

    /// Every generator and vertex occurring in the word.
    pub fn support(&self) -> (Vec<Simplex>, Vec<VertexId>) {
        let mut gens = Vec::new();
        let mut verts = Vec::new();
        let mut stack = vec![self];
        while let Some(w) = stack.pop() {
            match w.kind() {
                Kind::Vertex(v) => verts.push(*v),
                Kind::Gen(s) => gens.push(*s),
                Kind::Degenerate { child, .. } | Kind::Invert { child, .. } => stack.push(child),
                Kind::Compose { left, right, .. } => {
                    stack.push(left);
                    stack.push(right);
                }
            }
        }
        (gens, verts)
    }

    /// Checks that every generator and vertex belongs to `c` (generators
    /// must be simplices of paths of `c`).
    pub fn check_against(&self, c: &SkeletalComplex) -> Result<(), GlobeError> {
        let (gens, verts) = self.support();
        if let Some(s) = gens.into_iter().find(|s| !c.contains(s)) {
            return Err(GlobeError::UnknownSimplex(s));
        }
        if let Some(v) = verts.into_iter().find(|v| !c.has_vertex(*v)) {
            return Err(GlobeError::UnknownVertex(v));
        }
        Ok(())
    }

    /// Number of nodes in the expression tree.
    pub fn size(&self) -> usize {
        match self.kind() {
            Kind::Vertex(_) | Kind::Gen(_) => 1,
            Kind::Degenerate { child, .. } | Kind::Invert { child, .. } => 1 + child.size(),
            Kind::Compose { left, right, .. } => 1 + left.size() + right.size(),
        }
    }
}

/// Boundary table for generators.
///
/// For `Γ_{i..}` with `m` vertices, `d_0^-` is the last vertex and `d_0^+`
/// the one before it. Two-simplices follow `d_1^- Γ_ijk = Γ_jk`,
/// `d_1^+ Γ_ijk = (−_0 Γ_ij) ∘_0 Γ_ik`; three-simplices take `d_2^- Γ_ijkl = Γ_jkl`
/// and `d_2^+ Γ_ijkl = ((−_1 −_0 Γ_ijk) ∘_0 (−_1 Γ_ijl)) ∘_1 Γ_ikl`.
fn generator_face(s: &Simplex, j: usize, sign: Sign) -> Word {
    let v = s.vertices();
    let m = v.len();
    match (j, sign) {
        (0, Sign::Minus) => Word::vertex(v[m - 1]),
        (0, Sign::Plus) => Word::vertex(v[m - 2]),
        (1, Sign::Minus) => Word::g(&v[m - 2..]),
        (1, Sign::Plus) => {
            // (−Γ_ab) ∘_0 Γ_ac for the last three vertices a < b < c
            let (a, b, c) = (v[m - 3], v[m - 2], v[m - 1]);
            Word::compose_unchecked(
                0,
                Word::invert_unchecked(0, Word::g(&[a, b])),
                Word::g(&[a, c]),
            )
        }
        (2, Sign::Minus) => Word::g(&v[1..]),
        (2, Sign::Plus) => {
            let (i, jj, k, l) = (v[0], v[1], v[2], v[3]);
            let left = Word::compose_unchecked(
                0,
                Word::invert_unchecked(1, Word::invert_unchecked(0, Word::g(&[i, jj, k]))),
                Word::invert_unchecked(1, Word::g(&[i, jj, l])),
            );
            Word::compose_unchecked(1, left, Word::g(&[i, k, l]))
        }
        _ => unreachable!("face level checked against the generator dimension"),
    }
}

/// Equality of boundary globes: vertices by id, paths up to thin homotopy
/// (free reduction), higher globes structurally.
pub fn same_globe(a: &Word, b: &Word) -> bool {
    if a.dim() != b.dim() {
        return false;
    }
    match a.dim() {
        0 => a == b,
        1 => reduce_path(a) == reduce_path(b),
        _ => a == b,
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind() {
            Kind::Vertex(v) => write!(f, "v{v}"),
            Kind::Gen(s) => write!(f, "G{}", s.key()),
            Kind::Degenerate { i, k, child } => write!(f, "s{i}{k}({child})"),
            Kind::Invert { level, child } => write!(f, "inv{level}({child})"),
            Kind::Compose { level, left, right } => {
                write!(f, "{left} o{level} ")?;
                if matches!(right.kind(), Kind::Compose { .. }) {
                    write!(f, "({right})")
                } else {
                    write!(f, "{right}")
                }
            }
        }
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::build_builtin;

    fn v(x: VertexId) -> Word {
        Word::vertex(x)
    }

    #[test]
    fn edge_generator_faces() {
        let g = Word::g(&[1, 2]);
        assert_eq!(g.dim(), 1);
        assert_eq!(g.face(0, Sign::Minus).unwrap(), v(2));
        assert_eq!(g.face(0, Sign::Plus).unwrap(), v(1));
    }

    #[test]
    fn face_generator_faces() {
        let g = Word::g(&[1, 3, 5]);
        assert_eq!(g.dim(), 2);
        assert_eq!(g.face(1, Sign::Minus).unwrap(), Word::g(&[3, 5]));
        assert_eq!(g.face(0, Sign::Plus).unwrap(), v(3));
        assert_eq!(g.face(0, Sign::Minus).unwrap(), v(5));
        // d_1^+ is the path v5 → v1 → v3
        assert_eq!(reduce_path(&g.face(1, Sign::Plus).unwrap()), vec![5, 1, 3]);
    }

    #[test]
    fn globular_identities_on_generators() {
        for s in [&[1, 2, 4][..], &[1, 2, 3, 4][..]] {
            let g = Word::g(s);
            for j in 0..g.dim() {
                for a in [Sign::Minus, Sign::Plus] {
                    let dj = g.face(j, a).unwrap();
                    for i in 0..j {
                        for b in [Sign::Minus, Sign::Plus] {
                            assert!(
                                same_globe(&dj.face(i, b).unwrap(), &g.face(i, b).unwrap()),
                                "d{i}{b} d{j}{a} {g}"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn three_globe_faces_are_well_typed() {
        let g = Word::g(&[1, 2, 3, 4]);
        let top = g.face(2, Sign::Plus).unwrap();
        // rebuilding with checks succeeds
        let Kind::Compose { left, right, .. } = top.kind() else {
            panic!("composite expected")
        };
        let Kind::Compose {
            left: l1, right: r1, ..
        } = left.kind()
        else {
            panic!("composite expected")
        };
        let rebuilt = Word::compose(
            1,
            Word::compose(0, l1.clone(), r1.clone()).unwrap(),
            right.clone(),
        )
        .unwrap();
        assert_eq!(rebuilt, top);
        assert_eq!(reduce_path(&top.face(1, Sign::Minus).unwrap()), vec![4, 3]);
        assert_eq!(reduce_path(&top.face(1, Sign::Plus).unwrap()), vec![4, 2, 3]);
    }

    #[test]
    fn composition_reads_right_to_left() {
        let ok = Word::compose(0, Word::g(&[1, 2]), Word::g(&[2, 3])).unwrap();
        assert_eq!(reduce_path(&ok), vec![3, 2, 1]);
        assert!(matches!(
            Word::compose(0, Word::g(&[2, 3]), Word::g(&[1, 2])),
            Err(GlobeError::NotComposable { level: 0, .. })
        ));
    }

    #[test]
    fn thin_equivalence_piece() {
        // inv0(Γ135) ∘_0 Γ134 sweeps v4→v3→v5 to v4→v1→v5
        let w = Word::compose(0, Word::invert(0, Word::g(&[1, 3, 5])).unwrap(), Word::g(&[1, 3, 4]))
            .unwrap();
        assert_eq!(reduce_path(&w.face(1, Sign::Minus).unwrap()), vec![4, 3, 5]);
        assert_eq!(reduce_path(&w.face(1, Sign::Plus).unwrap()), vec![4, 1, 5]);
    }

    #[test]
    fn degenerate_faces() {
        let s = Word::degenerate(0, 1, v(4)).unwrap();
        assert_eq!(s.face(0, Sign::Minus).unwrap(), v(4));
        assert_eq!(s.face(0, Sign::Plus).unwrap(), v(4));
        let s2 = Word::degenerate(0, 2, v(4)).unwrap();
        let expect = Word::degenerate(0, 1, v(4)).unwrap();
        assert_eq!(s2.dim(), 2);
        assert_eq!(s2.face(1, Sign::Minus).unwrap(), expect);
        assert_eq!(s2.face(1, Sign::Plus).unwrap(), expect);
        assert!(Word::degenerate(1, 2, v(4)).is_err());
        assert!(Word::degenerate(2, 1, Word::g(&[1, 2, 3])).is_err());
    }

    #[test]
    fn level_checks() {
        assert!(matches!(
            Word::g(&[1, 2]).face(1, Sign::Minus),
            Err(GlobeError::LevelOutOfRange { level: 1, dim: 1 })
        ));
        assert!(Word::invert(1, Word::g(&[1, 2])).is_err());
        assert!(matches!(
            Word::compose(0, Word::g(&[1, 2, 3]), Word::g(&[1, 2])),
            Err(GlobeError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn check_against_complex() {
        let c = build_builtin("s2_five_vertex").unwrap();
        assert!(Word::g(&[1, 3, 5]).check_against(&c).is_ok());
        assert_eq!(
            Word::g(&[1, 2, 3]).check_against(&c),
            Err(GlobeError::UnknownSimplex(Simplex::new(&[1, 2, 3]).unwrap()))
        );
        assert!(v(7).check_against(&c).is_err());
    }

    #[test]
    fn display_parenthesizes_right_composites() {
        let p = Word::compose(0, Word::g(&[1, 2]), Word::g(&[2, 3])).unwrap();
        let q = Word::compose(0, Word::g(&[3, 4]), Word::invert(0, Word::g(&[3, 4])).unwrap())
            .unwrap();
        let w = Word::compose(0, Word::invert(0, p.clone()).unwrap(), p).unwrap();
        assert_eq!(w.to_string(), "inv0(G12 o0 G23) o0 (G12 o0 G23)");
        assert_eq!(q.to_string(), "G34 o0 inv0(G34)");
        let r = Word::compose(0, Word::g(&[1, 2]), Word::compose(0, Word::g(&[2, 3]), Word::g(&[3, 4])).unwrap()).unwrap();
        assert_eq!(r.to_string(), "G12 o0 (G23 o0 G34)");
    }
}
