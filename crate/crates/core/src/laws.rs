//! Random well-typed globe words and the algebraic laws they must satisfy
//! under evaluation.
//!
//! Words are free, so a law such as the interchange law only holds after
//! evaluating both sides under a field. [`check_laws`] samples words from a
//! [`WordPool`], instantiates every applicable law and compares both sides.

use std::collections::BTreeMap;
use std::fmt;

use rand::seq::IndexedRandom;
use rand::Rng;

use crate::complex::SkeletalComplex;
use crate::field::{EvalError, Hlgf, Value};
use crate::globes::{reduce_path, Kind, Sign, Word};

/// Words above this many nodes are not added to a pool.
pub const MAX_WORD_SIZE: usize = 96;
/// Words kept per dimension.
pub const POOL_CAPACITY: usize = 400;

/// The thin-homotopy class of a boundary, as used for composability.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum BoundaryKey {
    Vertex(u32),
    Path(Vec<u32>),
    Globe(Word),
}

fn key(w: &Word) -> BoundaryKey {
    match (w.dim(), w.kind()) {
        (0, Kind::Vertex(v)) => BoundaryKey::Vertex(*v),
        (1, _) => BoundaryKey::Path(reduce_path(w)),
        _ => BoundaryKey::Globe(w.clone()),
    }
}

#[derive(Clone, Debug)]
struct Entry {
    word: Word,
    minus: Vec<BoundaryKey>,
    plus: Vec<BoundaryKey>,
}

impl Entry {
    fn new(word: Word) -> Self {
        let faces = |s| {
            (0..word.dim())
                .map(|j| key(&word.face(j, s).expect("level below dim")))
                .collect()
        };
        Entry {
            minus: faces(Sign::Minus),
            plus: faces(Sign::Plus),
            word,
        }
    }
}

/// A growing collection of well-typed words over one complex, by dimension.
#[derive(Clone, Debug)]
pub struct WordPool {
    max_dim: usize,
    pools: Vec<Vec<Entry>>,
}

impl WordPool {
    /// Seeds the pool with generators and degeneracies, then grows it by
    /// `rounds` random constructions.
    pub fn new<R: Rng + ?Sized>(c: &SkeletalComplex, rounds: usize, rng: &mut R) -> Self {
        let max_dim = c.dim();
        let mut pool = WordPool {
            max_dim,
            pools: vec![Vec::new(); max_dim + 1],
        };
        for &v in c.vertices() {
            pool.push(Word::vertex(v));
        }
        for k in 1..=c.dim() {
            for s in c.simplices(k) {
                pool.push(Word::gen(*s).expect("ordered simplex"));
            }
        }
        for d in 1..=max_dim {
            for i in 0..d {
                let lower: Vec<Word> = pool.pools[i].iter().map(|e| e.word.clone()).collect();
                for x in lower {
                    pool.push(Word::degenerate(i, d, x).expect("valid degeneracy"));
                }
            }
        }
        for _ in 0..rounds {
            pool.grow(rng);
        }
        pool
    }

    pub fn max_dim(&self) -> usize {
        self.max_dim
    }

    pub fn len(&self, dim: usize) -> usize {
        self.pools[dim].len()
    }

    pub fn is_empty(&self) -> bool {
        self.pools.iter().all(Vec::is_empty)
    }

    fn push(&mut self, w: Word) {
        let d = w.dim();
        if w.size() <= MAX_WORD_SIZE && self.pools[d].len() < POOL_CAPACITY {
            self.pools[d].push(Entry::new(w));
        }
    }

    fn entry<R: Rng + ?Sized>(&self, dim: usize, rng: &mut R) -> &Entry {
        self.pools[dim].choose(rng).expect("seeded pools are non-empty")
    }

    /// A random word of dimension `dim` (at most `max_dim`).
    pub fn sample<R: Rng + ?Sized>(&self, dim: usize, rng: &mut R) -> Word {
        self.entry(dim, rng).word.clone()
    }

    /// A word `a` with `d_level^- a = d_level^+ b`; falls back to `−_level b`.
    pub fn left_partner<R: Rng + ?Sized>(&self, b: &Word, level: usize, rng: &mut R) -> Word {
        let want = key(&b.face(level, Sign::Plus).expect("level below dim"));
        self.find(b.dim(), level, Sign::Minus, &want, rng)
            .unwrap_or_else(|| Word::invert(level, b.clone()).expect("level below dim"))
    }

    /// A word `c` with `d_level^+ c = d_level^- b`; falls back to `−_level b`.
    pub fn right_partner<R: Rng + ?Sized>(&self, b: &Word, level: usize, rng: &mut R) -> Word {
        let want = key(&b.face(level, Sign::Minus).expect("level below dim"));
        self.find(b.dim(), level, Sign::Plus, &want, rng)
            .unwrap_or_else(|| Word::invert(level, b.clone()).expect("level below dim"))
    }

    fn find<R: Rng + ?Sized>(
        &self,
        dim: usize,
        level: usize,
        side: Sign,
        want: &BoundaryKey,
        rng: &mut R,
    ) -> Option<Word> {
        let hits: Vec<&Entry> = self.pools[dim]
            .iter()
            .filter(|e| {
                let k = match side {
                    Sign::Minus => &e.minus[level],
                    Sign::Plus => &e.plus[level],
                };
                k == want
            })
            .collect();
        hits.choose(rng).map(|e| e.word.clone())
    }

    fn grow<R: Rng + ?Sized>(&mut self, rng: &mut R) {
        let d = rng.random_range(1..=self.max_dim);
        let level = rng.random_range(0..d);
        let x = self.sample(d, rng);
        let w = match rng.random_range(0..4) {
            0 => Word::invert(level, x),
            1 => Word::compose(level, self.left_partner(&x, level, rng), x),
            2 => Word::compose(level, x.clone(), self.right_partner(&x, level, rng)),
            _ => {
                let i = rng.random_range(0..d);
                Word::degenerate(i, d, self.sample(i, rng))
            }
        };
        if let Ok(w) = w {
            self.push(w);
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Law {
    DoubleInverse,
    Inverse,
    Unit,
    Associativity,
    Interchange,
    BoundaryOfComposite,
    Globular,
    Degeneracy,
    DegeneracyOfComposite,
    Homomorphism,
}

impl fmt::Display for Law {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Law::DoubleInverse => "double inverse",
            Law::Inverse => "inverse",
            Law::Unit => "unit",
            Law::Associativity => "associativity",
            Law::Interchange => "interchange",
            Law::BoundaryOfComposite => "boundary of composite",
            Law::Globular => "globular",
            Law::Degeneracy => "degeneracy faces",
            Law::DegeneracyOfComposite => "degeneracy of composite",
            Law::Homomorphism => "homomorphism",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LawFailure {
    pub law: Law,
    pub instance: String,
    /// Distance between the two sides, or `None` if evaluation failed.
    pub residual: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct LawReport {
    pub checked: BTreeMap<Law, usize>,
    pub failures: Vec<LawFailure>,
    pub max_residual: f64,
}

impl LawReport {
    pub fn total(&self) -> usize {
        self.checked.values().sum()
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Distance between two values of the same shape.
pub fn value_distance(a: &Value, b: &Value) -> f64 {
    match (a, b) {
        (Value::Element(x), Value::Element(y)) => x.dist(y).unwrap_or(f64::INFINITY),
        (Value::Loop(x), Value::Loop(y)) => x.distance(y),
        (Value::Cell(x), Value::Cell(y)) => x.source.distance(&y.source).max(x.target.distance(&y.target)),
        _ => f64::INFINITY,
    }
}

/// The composite of the parts' values at `level`, computed directly with
/// the group operations.
fn compose_parts(level: usize, a: &Value, b: &Value, tol: f64) -> Option<Value> {
    match (level, a, b) {
        (0, Value::Element(x), Value::Element(y)) => x.mul(y).ok().map(Value::Element),
        (0, Value::Loop(x), Value::Loop(y)) => x.compose0(y).ok().map(Value::Loop),
        (1, Value::Loop(x), Value::Loop(y)) => x.compose1(y, tol).ok().map(Value::Loop),
        _ => None,
    }
}

struct Checker<'a> {
    field: &'a Hlgf,
    tol: f64,
    report: LawReport,
}

impl Checker<'_> {
    fn eval(&self, w: &Word) -> Result<Value, EvalError> {
        self.field.evaluate(w)
    }

    fn record(&mut self, law: Law, instance: impl FnOnce() -> String, residual: Option<f64>) {
        *self.report.checked.entry(law).or_insert(0) += 1;
        match residual {
            Some(r) if r <= self.tol => self.report.max_residual = self.report.max_residual.max(r),
            _ => self.report.failures.push(LawFailure {
                law,
                instance: instance(),
                residual,
            }),
        }
    }

    fn equal(&mut self, law: Law, lhs: &Word, rhs: &Word) {
        let r = match (self.eval(lhs), self.eval(rhs)) {
            (Ok(a), Ok(b)) => Some(value_distance(&a, &b)),
            _ => None,
        };
        self.record(law, || format!("{lhs} = {rhs}"), r);
    }

    fn single(&mut self, w: &Word) {
        let d = w.dim();
        for j in 0..d {
            let inv = Word::invert(j, w.clone()).expect("level below dim");
            self.equal(
                Law::DoubleInverse,
                &Word::invert(j, inv.clone()).expect("level below dim"),
                w,
            );
            let tgt = w.face(j, Sign::Plus).expect("level below dim");
            let src = w.face(j, Sign::Minus).expect("level below dim");
            let id_tgt = Word::degenerate(j, d, tgt).expect("degeneracy");
            let id_src = Word::degenerate(j, d, src).expect("degeneracy");
            self.equal(Law::Inverse, &Word::compose(j, w.clone(), inv.clone()).expect("composable"), &id_tgt);
            self.equal(Law::Inverse, &Word::compose(j, inv, w.clone()).expect("composable"), &id_src);
            self.equal(Law::Unit, &Word::compose(j, w.clone(), id_src).expect("composable"), w);
            self.equal(Law::Unit, &Word::compose(j, id_tgt, w.clone()).expect("composable"), w);
            for i in 0..j {
                for (a, b) in [(Sign::Minus, Sign::Minus), (Sign::Minus, Sign::Plus), (Sign::Plus, Sign::Minus), (Sign::Plus, Sign::Plus)] {
                    let lhs = w.face(j, b).and_then(|x| x.face(i, a)).expect("levels below dim");
                    self.equal(Law::Globular, &lhs, &w.face(i, a).expect("level below dim"));
                }
            }
        }
    }

    fn degeneracies(&mut self, x: &Word, max_dim: usize) {
        let i = x.dim();
        for k in i + 1..=max_dim {
            let s = Word::degenerate(i, k, x.clone()).expect("degeneracy");
            for j in 0..k {
                for sign in [Sign::Minus, Sign::Plus] {
                    let face = s.face(j, sign).expect("level below dim");
                    let expect = match j.cmp(&i) {
                        std::cmp::Ordering::Less => x.face(j, sign).expect("level below dim"),
                        std::cmp::Ordering::Equal => x.clone(),
                        std::cmp::Ordering::Greater => Word::degenerate(i, j, x.clone()).expect("degeneracy"),
                    };
                    self.equal(Law::Degeneracy, &face, &expect);
                }
            }
        }
    }

    fn pair(&mut self, a: &Word, b: &Word, level: usize, max_dim: usize) {
        let d = a.dim();
        let ab = Word::compose(level, a.clone(), b.clone()).expect("composable pair");
        for i in 0..d {
            for sign in [Sign::Minus, Sign::Plus] {
                let lhs = ab.face(i, sign).expect("level below dim");
                let rhs = if i < level {
                    a.face(i, sign).expect("level below dim")
                } else if i == level {
                    match sign {
                        Sign::Minus => b.face(i, sign).expect("level below dim"),
                        Sign::Plus => a.face(i, sign).expect("level below dim"),
                    }
                } else {
                    Word::compose(
                        level,
                        a.face(i, sign).expect("level below dim"),
                        b.face(i, sign).expect("level below dim"),
                    )
                    .expect("faces of composable globes compose")
                };
                self.equal(Law::BoundaryOfComposite, &lhs, &rhs);
            }
        }
        if d < max_dim {
            let lhs = Word::identity(ab.clone());
            let rhs = Word::compose(level, Word::identity(a.clone()), Word::identity(b.clone()))
                .expect("identities of composable globes compose");
            self.equal(Law::DegeneracyOfComposite, &lhs, &rhs);
        }
        if d <= 2 {
            let r = match (self.eval(&ab), self.eval(a), self.eval(b)) {
                (Ok(whole), Ok(va), Ok(vb)) => {
                    compose_parts(level, &va, &vb, self.field.tolerance()).map(|p| value_distance(&whole, &p))
                }
                _ => None,
            };
            self.record(Law::Homomorphism, || format!("{ab}"), r);
        }
    }

    fn triple(&mut self, a: &Word, b: &Word, c: &Word, level: usize) {
        let lhs = Word::compose(level, Word::compose(level, a.clone(), b.clone()).expect("composable"), c.clone())
            .expect("composable");
        let rhs = Word::compose(level, a.clone(), Word::compose(level, b.clone(), c.clone()).expect("composable"))
            .expect("composable");
        self.equal(Law::Associativity, &lhs, &rhs);
    }

    /// `(a ∘_j b) ∘_i (c ∘_j d) = (a ∘_i c) ∘_j (b ∘_i d)` for `i < j`.
    fn interchange(&mut self, [a, b, c, d]: [&Word; 4], i: usize, j: usize) {
        let comp = |l, x: &Word, y: &Word| Word::compose(l, x.clone(), y.clone());
        let lhs = comp(j, a, b).and_then(|ab| Ok((ab, comp(j, c, d)?))).and_then(|(ab, cd)| comp(i, &ab, &cd));
        let rhs = comp(i, a, c).and_then(|ac| Ok((ac, comp(i, b, d)?))).and_then(|(ac, bd)| comp(j, &ac, &bd));
        match (lhs, rhs) {
            (Ok(l), Ok(r)) => self.equal(Law::Interchange, &l, &r),
            _ => self.record(Law::Interchange, || format!("{a}, {b}, {c}, {d} at ({i}, {j})"), None),
        }
    }
}

/// Samples `words` random words from `pool` and checks every applicable
/// law instance under `field` to within `tol`.
pub fn check_laws<R: Rng + ?Sized>(field: &Hlgf, pool: &WordPool, words: usize, tol: f64, rng: &mut R) -> LawReport {
    let max_dim = pool.max_dim();
    let mut ck = Checker {
        field,
        tol,
        report: LawReport::default(),
    };
    for _ in 0..words {
        let d = rng.random_range(1..=max_dim);
        let b = pool.sample(d, rng);
        ck.single(&b);
        ck.degeneracies(&b, max_dim);
        let j = rng.random_range(0..d);
        let a = pool.left_partner(&b, j, rng);
        ck.pair(&a, &b, j, max_dim);
        let c = pool.right_partner(&b, j, rng);
        ck.pair(&b, &c, j, max_dim);
        ck.triple(&a, &b, &c, j);
        if d >= 2 {
            // interchange at levels i < j = i + 1
            let i = rng.random_range(0..d - 1);
            let j = i + 1;
            let a2 = pool.left_partner(&b, j, rng);
            let wd = pool.right_partner(&b, i, rng);
            let wc = pool.left_partner(&wd, j, rng);
            ck.interchange([&a2, &b, &wc, &wd], i, j);
        }
    }
    ck.report
}

/// Random composable pairs `(a, b)` at every level, for homomorphism checks.
pub fn composable_pairs<R: Rng + ?Sized>(pool: &WordPool, count: usize, rng: &mut R) -> Vec<(usize, Word, Word)> {
    (0..count)
        .map(|_| {
            let d = rng.random_range(1..=pool.max_dim().min(2));
            let level = rng.random_range(0..d);
            let b = pool.sample(d, rng);
            (level, pool.left_partner(&b, level, rng), b)
        })
        .collect()
}

/// Checks `evaluate(a ∘_j b) = loop_compose_j(evaluate(a), evaluate(b))`.
pub fn check_homomorphism(field: &Hlgf, pairs: &[(usize, Word, Word)], tol: f64) -> LawReport {
    let mut ck = Checker {
        field,
        tol,
        report: LawReport::default(),
    };
    for (level, a, b) in pairs {
        let ab = Word::compose(*level, a.clone(), b.clone()).expect("composable pair");
        let r = match (ck.eval(&ab), ck.eval(a), ck.eval(b)) {
            (Ok(whole), Ok(va), Ok(vb)) => compose_parts(*level, &va, &vb, field.tolerance()).map(|p| value_distance(&whole, &p)),
            _ => None,
        };
        ck.record(Law::Homomorphism, || format!("{ab}"), r);
    }
    ck.report
}
