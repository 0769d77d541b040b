//! Edge paths as 1-globes and their free-groupoid normal form.

use super::{Kind, Word};
use crate::complex::VertexId;

/// The vertex sequence of a 1-globe with backtracks `u → w → u` cancelled.
///
/// Sequences read in travel order: `reduce_path(Γ_12) == [2, 1]`.
pub fn reduce_path(w: &Word) -> Vec<VertexId> {
    assert_eq!(w.dim(), 1, "reduce_path takes a 1-globe, got `{w}`");
    let mut out = Vec::new();
    push_path(w, false, &mut out);
    out
}

fn push_vertex(out: &mut Vec<VertexId>, v: VertexId) {
    let n = out.len();
    if n >= 2 && out[n - 2] == v {
        out.pop();
    } else if out.last() != Some(&v) {
        out.push(v);
    }
}

fn push_path(w: &Word, reversed: bool, out: &mut Vec<VertexId>) {
    match w.kind() {
        Kind::Gen(s) => {
            let v = s.vertices();
            let (from, to) = if reversed { (v[0], v[1]) } else { (v[1], v[0]) };
            push_vertex(out, from);
            push_vertex(out, to);
        }
        Kind::Degenerate { child, .. } => match child.kind() {
            Kind::Vertex(v) => push_vertex(out, *v),
            _ => unreachable!("a degenerate 1-globe has a vertex argument"),
        },
        Kind::Compose { left, right, .. } => {
            if reversed {
                push_path(left, true, out);
                push_path(right, true, out);
            } else {
                push_path(right, false, out);
                push_path(left, false, out);
            }
        }
        Kind::Invert { child, .. } => push_path(child, !reversed, out),
        Kind::Vertex(_) => unreachable!("dimension checked"),
    }
}

/// Reduces a vertex sequence in the same way as [`reduce_path`].
pub fn reduce_sequence(seq: &[VertexId]) -> Vec<VertexId> {
    let mut out = Vec::with_capacity(seq.len());
    for &v in seq {
        push_vertex(&mut out, v);
    }
    out
}

/// The single-edge path from `from` to `to` (`Γ` or `−_0 Γ`).
pub fn hop(from: VertexId, to: VertexId) -> Word {
    assert_ne!(from, to, "a hop joins distinct vertices");
    if from > to {
        Word::g(&[to, from])
    } else {
        Word::invert_unchecked(0, Word::g(&[from, to]))
    }
}

/// The path word visiting `seq` in order; a single vertex gives `s_{0,1}(v)`.
pub fn path_word(seq: &[VertexId]) -> Word {
    assert!(!seq.is_empty(), "a path visits at least one vertex");
    if seq.len() == 1 {
        return Word::identity(Word::vertex(seq[0]));
    }
    let mut w = hop(seq[0], seq[1]);
    for pair in seq[1..].windows(2) {
        w = Word::compose_unchecked(0, hop(pair[0], pair[1]), w);
    }
    w
}
