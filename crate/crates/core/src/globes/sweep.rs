//! Distinguished 2-globe words: sweeps of paths across faces.
//!
//! An elementary move replaces a hop `a → b` of a path by `a → c → b`
//! through the face `{a, b, c}` (insertion), or the reverse (removal). Its
//! word is a generator `Γ_ijk` dressed with `−_0`, `−_1` and a constant
//! homotopy on one extra hop, whiskered by the constant homotopies on the
//! rest of the path. The U(1) lift of an insertion is `+x_ijk` when
//! `(a, c, b)` is an even permutation of `(i, j, k)` and `−x_ijk` otherwise.
//!
//! A sweep composes moves with `∘_1`, later moves on the left.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use thiserror::Error;

use super::path::{path_word, reduce_sequence};
use super::{Kind, Word};
use crate::complex::{Simplex, SkeletalComplex, VertexId};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum SweepError {
    #[error("complex `{0}` is not a closed oriented surface")]
    NotOrientedSurface(String),
    #[error("no covering sweep found for `{0}`")]
    CoveringUnavailable(String),
    #[error("equator is not a closed edge cycle: {0}")]
    NotClosed(String),
    #[error("equator does not separate the surface into two disks ({components} components)")]
    NotSeparating { components: usize },
    #[error("no sweep of the equator across both disks was found")]
    TransitionUnavailable,
    #[error("{0} is not a tetrahedron of the complex")]
    NotTetrahedron(Simplex),
}

/// One elementary move of a sweep.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Move {
    pub face: Simplex,
    /// Sign with which the move contributes the face lift.
    pub sign: i8,
    pub insertion: bool,
    /// Hop index (insertion) or index of the removed vertex (removal).
    position: usize,
    vertex: VertexId,
}

#[derive(Clone, Debug)]
pub struct Sweep {
    pub start: Vec<VertexId>,
    pub end: Vec<VertexId>,
    pub moves: Vec<Move>,
    pub word: Word,
}

fn face_of(a: VertexId, b: VertexId, c: VertexId) -> Simplex {
    let mut v = [a, b, c];
    v.sort_unstable();
    Simplex::new(&v).expect("three vertices")
}

/// +1 if `(a, c, b)` is an even permutation of its sorted order.
fn insertion_sign(a: VertexId, c: VertexId, b: VertexId) -> i8 {
    let inversions = (a > c) as u8 + (a > b) as u8 + (c > b) as u8;
    if inversions.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

fn inv(level: usize, w: Word) -> Word {
    Word::invert(level, w).expect("level below dimension")
}

fn comp(level: usize, a: Word, b: Word) -> Word {
    Word::compose(level, a, b).expect("sweep words are composable by construction")
}

fn constant(path: &[VertexId]) -> Word {
    Word::degenerate(1, 2, path_word(path)).expect("paths are 1-globes")
}

/// The 2-globe from the hop `a → b` to `a → c → b`.
fn insertion_core(a: VertexId, b: VertexId, c: VertexId) -> Word {
    let f = face_of(a, b, c);
    let [i, j, k] = [f.vertices()[0], f.vertices()[1], f.vertices()[2]];
    let g = Word::gen(f).expect("ordered face");
    match (a, b) {
        _ if (a, b) == (k, j) => g,
        _ if (a, b) == (j, k) => inv(0, g),
        _ if (a, b) == (i, j) => comp(0, inv(1, g), constant(&[i, k])),
        _ if (a, b) == (j, i) => comp(0, constant(&[k, i]), inv(0, inv(1, g))),
        _ if (a, b) == (k, i) => comp(0, constant(&[j, i]), inv(1, g)),
        _ if (a, b) == (i, k) => comp(0, inv(0, inv(1, g)), constant(&[i, j])),
        _ => unreachable!("hop lies in the face"),
    }
}

/// Whiskers a core homotopy by constant homotopies on `prefix` and `suffix`.
fn whisker(core: Word, prefix: &[VertexId], suffix: &[VertexId]) -> Word {
    let mut w = core;
    if prefix.len() > 1 {
        w = comp(0, w, constant(prefix));
    }
    if suffix.len() > 1 {
        w = comp(0, constant(suffix), w);
    }
    w
}

impl Move {
    /// The path after the move (reduced) and the move's 2-globe word.
    fn apply(&self, path: &[VertexId]) -> (Vec<VertexId>, Word) {
        let p = self.position;
        if self.insertion {
            let (a, b) = (path[p], path[p + 1]);
            let word = whisker(
                insertion_core(a, b, self.vertex),
                &path[..=p],
                &path[p + 1..],
            );
            let mut next = path[..=p].to_vec();
            next.push(self.vertex);
            next.extend_from_slice(&path[p + 1..]);
            (reduce_sequence(&next), word)
        } else {
            let (a, b) = (path[p - 1], path[p + 1]);
            let word = whisker(
                inv(1, insertion_core(a, b, self.vertex)),
                &path[..p],
                &path[p + 1..],
            );
            let mut next = path[..p].to_vec();
            next.extend_from_slice(&path[p + 1..]);
            (reduce_sequence(&next), word)
        }
    }
}

fn candidate_moves(
    c: &SkeletalComplex,
    path: &[VertexId],
    open: &BTreeSet<Simplex>,
    wanted: &BTreeMap<Simplex, i8>,
) -> Vec<Move> {
    let mut out = Vec::new();
    for p in 1..path.len().saturating_sub(1) {
        let (a, x, b) = (path[p - 1], path[p], path[p + 1]);
        let f = face_of(a, b, x);
        let sign = -insertion_sign(a, x, b);
        if open.contains(&f) && wanted.get(&f) == Some(&sign) {
            out.push(Move {
                face: f,
                sign,
                insertion: false,
                position: p,
                vertex: x,
            });
        }
    }
    for p in 0..path.len().saturating_sub(1) {
        let (a, b) = (path[p], path[p + 1]);
        for &x in c.vertices() {
            if x == a || x == b {
                continue;
            }
            let f = face_of(a, b, x);
            let sign = insertion_sign(a, x, b);
            if open.contains(&f) && c.contains(&f) && wanted.get(&f) == Some(&sign) {
                out.push(Move {
                    face: f,
                    sign,
                    insertion: true,
                    position: p,
                    vertex: x,
                });
            }
        }
    }
    out
}

/// Depth-first search for a sequence of moves sweeping every face in
/// `wanted` once, each with the prescribed sign, ending at `goal`.
fn search(
    c: &SkeletalComplex,
    start: &[VertexId],
    goal: &[VertexId],
    wanted: &BTreeMap<Simplex, i8>,
) -> Option<Vec<Move>> {
    let mut dead = HashSet::new();
    let mut moves = Vec::new();
    let open: BTreeSet<Simplex> = wanted.keys().copied().collect();
    dfs(c, start.to_vec(), open, goal, wanted, &mut moves, &mut dead).then_some(moves)
}

fn dfs(
    c: &SkeletalComplex,
    path: Vec<VertexId>,
    open: BTreeSet<Simplex>,
    goal: &[VertexId],
    wanted: &BTreeMap<Simplex, i8>,
    moves: &mut Vec<Move>,
    dead: &mut HashSet<(Vec<VertexId>, Vec<Simplex>)>,
) -> bool {
    if open.is_empty() {
        return path == goal;
    }
    let key = (path.clone(), open.iter().copied().collect::<Vec<_>>());
    if dead.contains(&key) {
        return false;
    }
    for m in candidate_moves(c, &path, &open, wanted) {
        let next = m.apply_path(&path);
        let mut rest = open.clone();
        rest.remove(&m.face);
        moves.push(m);
        if dfs(c, next, rest, goal, wanted, moves, dead) {
            return true;
        }
        moves.pop();
    }
    dead.insert(key);
    false
}

impl Move {
    fn apply_path(&self, path: &[VertexId]) -> Vec<VertexId> {
        let mut next = path.to_vec();
        if self.insertion {
            next.insert(self.position + 1, self.vertex);
        } else {
            next.remove(self.position);
        }
        reduce_sequence(&next)
    }
}

fn assemble(start: &[VertexId], moves: Vec<Move>) -> Sweep {
    let mut path = start.to_vec();
    let mut word: Option<Word> = None;
    for m in &moves {
        let (next, step) = m.apply(&path);
        word = Some(match word {
            None => step,
            Some(w) => comp(1, step, w),
        });
        path = next;
    }
    let word = word.unwrap_or_else(|| constant(start));
    Sweep {
        start: start.to_vec(),
        end: path,
        moves,
        word,
    }
}

fn orientation_of(c: &SkeletalComplex) -> Result<BTreeMap<Simplex, i8>, SweepError> {
    if !c.is_closed_oriented_surface() {
        return Err(SweepError::NotOrientedSurface(c.name().to_string()));
    }
    Ok(c.oriented_faces()
        .expect("checked above")
        .into_iter()
        .map(|o| (o.face, o.sign))
        .collect())
}

/// A sweep of the whole surface starting and ending at the same path, each
/// face crossed once with its orientation sign.
///
/// On `s2_five_vertex` the base path is the Greenwich meridian
/// `v4 → v3 → v5`; otherwise the first edge (in either direction) that admits
/// a sweep is used.
pub fn covering_sweep(c: &SkeletalComplex) -> Result<Sweep, SweepError> {
    let wanted = orientation_of(c)?;
    let mut bases: Vec<Vec<VertexId>> = Vec::new();
    if c.name() == "s2_five_vertex" {
        bases.push(vec![4, 3, 5]);
    }
    for e in c.edges() {
        let v = e.vertices();
        bases.push(vec![v[1], v[0]]);
        bases.push(vec![v[0], v[1]]);
    }
    for base in bases {
        if let Some(moves) = search(c, &base, &base, &wanted) {
            return Ok(assemble(&base, moves));
        }
    }
    Err(SweepError::CoveringUnavailable(c.name().to_string()))
}

/// The covering 2-globe: a loop of paths based at the sweep's base path.
pub fn covering_word(c: &SkeletalComplex) -> Result<Word, SweepError> {
    covering_sweep(c).map(|s| s.word)
}

/// Checks that `equator` (a vertex cycle, closing edge implied) is a simple
/// closed edge cycle splitting the faces into two edge-connected parts.
pub fn validate_equator(
    c: &SkeletalComplex,
    equator: &[VertexId],
) -> Result<[BTreeSet<Simplex>; 2], SweepError> {
    if equator.len() < 3 {
        return Err(SweepError::NotClosed("fewer than three vertices".into()));
    }
    let distinct: BTreeSet<_> = equator.iter().collect();
    if distinct.len() != equator.len() {
        return Err(SweepError::NotClosed("repeated vertex".into()));
    }
    let mut cut = BTreeSet::new();
    for (k, &a) in equator.iter().enumerate() {
        let b = equator[(k + 1) % equator.len()];
        let e = c
            .edge_between(a, b)
            .ok_or_else(|| SweepError::NotClosed(format!("no edge between v{a} and v{b}")))?;
        cut.insert(e);
    }
    let faces: Vec<Simplex> = c.faces().copied().collect();
    let mut component = vec![usize::MAX; faces.len()];
    let mut count = 0;
    for seed in 0..faces.len() {
        if component[seed] != usize::MAX {
            continue;
        }
        let mut stack = vec![seed];
        component[seed] = count;
        while let Some(f) = stack.pop() {
            for e in faces[f].facets() {
                if cut.contains(&e) {
                    continue;
                }
                for (g, other) in faces.iter().enumerate() {
                    if component[g] == usize::MAX && other.facets().contains(&e) {
                        component[g] = count;
                        stack.push(g);
                    }
                }
            }
        }
        count += 1;
    }
    if count != 2 {
        return Err(SweepError::NotSeparating { components: count });
    }
    let mut parts = [BTreeSet::new(), BTreeSet::new()];
    for (f, comp) in faces.iter().zip(component) {
        parts[comp].insert(*f);
    }
    Ok(parts)
}

/// Sweeps of the equator loop to the constant path across each disk,
/// assembled into one loop of loops `P ∘_1 (−_1 M)` based at the constant
/// path, where `P` crosses its faces with their orientation sign and `M`
/// against it. Returns the combined sweep (moves of `M` first, negated).
pub fn transition_sweep(
    c: &SkeletalComplex,
    equator: &[VertexId],
) -> Result<Sweep, SweepError> {
    let orient = orientation_of(c)?;
    let parts = validate_equator(c, equator)?;
    let n = equator.len();
    let mut loops = Vec::new();
    for rot in 0..n {
        let forward: Vec<VertexId> = (0..=n).map(|k| equator[(rot + k) % n]).collect();
        let mut backward = forward.clone();
        backward.reverse();
        loops.push(forward);
        loops.push(backward);
    }
    for ell in loops {
        let goal = vec![ell[0]];
        let sweep_part = |part: &BTreeSet<Simplex>, sigma: i8| {
            let wanted: BTreeMap<Simplex, i8> =
                part.iter().map(|f| (*f, orient[f] * sigma)).collect();
            search(c, &ell, &goal, &wanted).map(|m| assemble(&ell, m))
        };
        for (p, m) in [(0, 1), (1, 0)] {
            let (Some(plus), Some(minus)) = (sweep_part(&parts[p], 1), sweep_part(&parts[m], -1))
            else {
                continue;
            };
            let word = comp(1, plus.word, inv(1, minus.word));
            let mut moves: Vec<Move> = minus
                .moves
                .iter()
                .rev()
                .map(|m| Move {
                    sign: -m.sign,
                    ..*m
                })
                .collect();
            moves.extend(plus.moves);
            return Ok(Sweep {
                start: goal.clone(),
                end: goal,
                moves,
                word,
            });
        }
    }
    Err(SweepError::TransitionUnavailable)
}

pub fn transition_word(c: &SkeletalComplex, equator: &[VertexId]) -> Result<Word, SweepError> {
    transition_sweep(c, equator).map(|s| s.word)
}

/// The loop of paths bounding the 3-globe generator of a tetrahedron
/// `[i j k l]`: `s_{1,2}(−_0 Γ_kl) ∘_0 ((−_1 d_2^+ Γ_ijkl) ∘_1 Γ_jkl)`, based at
/// the constant path at `v_l`. Its U(1) lift is the simplicial coboundary
/// `x_jkl − x_ikl + x_ijl − x_ijk`.
pub fn tetra_boundary_word(c: &SkeletalComplex, t: &Simplex) -> Result<Word, SweepError> {
    if t.dim() != 3 || !c.contains(t) {
        return Err(SweepError::NotTetrahedron(*t));
    }
    let v = t.vertices();
    let (j, k, l) = (v[1], v[2], v[3]);
    let top = Word::gen(*t)
        .expect("ordered")
        .face(2, super::Sign::Plus)
        .expect("3-globe");
    let loop_at_kl = comp(1, inv(1, top), Word::g(&[j, k, l]));
    Ok(comp(0, constant(&[k, l]), loop_at_kl))
}

/// Signed count of face generators in a 2-globe word (each `−_0` or `−_1`
/// above a generator flips its sign).
pub fn face_coverage(w: &Word) -> BTreeMap<Simplex, i32> {
    let mut out = BTreeMap::new();
    fn walk(w: &Word, sign: i32, out: &mut BTreeMap<Simplex, i32>) {
        match w.kind() {
            Kind::Gen(s) if s.dim() == 2 => *out.entry(*s).or_insert(0) += sign,
            Kind::Gen(_) | Kind::Vertex(_) | Kind::Degenerate { .. } => {}
            Kind::Invert { child, .. } => walk(child, -sign, out),
            Kind::Compose { left, right, .. } => {
                walk(left, sign, out);
                walk(right, sign, out);
            }
        }
    }
    walk(w, 1, &mut out);
    out.retain(|_, n| *n != 0);
    out
}
