//! Vertex addressing and the level-`m` graph approximations of the gasket.
//!
//! A point of `V_m` is written `F_w(q_i)` for a word `w` of length at most
//! `m`. Trailing copies of `i` can be dropped (`F_i(q_i) = q_i`), and a point
//! born at level `n >= 1` has exactly two addresses of length `n`:
//! `F_{u a}(q_b) = F_{u b}(q_a)` with `a != b`. The lexicographically smaller
//! one is the canonical [`VertexId`].
//!
//! Coordinates are kept exact as integer numerators over `2^m` in the affine
//! frame `q0 = (0,0)`, `q1 = (1,0)`, `q2 = (0,1)`; planar positions only come
//! into play through [`Triangle`] when exporting.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Result, SgError};

/// Default cap on graph levels; `SG_MAX_LEVEL` overrides it.
pub const DEFAULT_LEVEL_CAP: usize = 10;
/// Levels above this are refused even when `SG_MAX_LEVEL` asks for them.
pub const HARD_LEVEL_CAP: usize = 14;

/// Current level cap, read once from `SG_MAX_LEVEL`.
pub fn level_cap() -> usize {
    static CAP: OnceLock<usize> = OnceLock::new();
    *CAP.get_or_init(|| {
        std::env::var("SG_MAX_LEVEL")
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok())
            .map(|v| v.min(HARD_LEVEL_CAP))
            .unwrap_or(DEFAULT_LEVEL_CAP)
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(u8);

impl Letter {
    pub const ALL: [Letter; 3] = [Letter(0), Letter(1), Letter(2)];

    pub fn new(value: u8) -> Result<Self> {
        if value < 3 {
            Ok(Letter(value))
        } else {
            Err(SgError::Invalid(format!("letter {value} is not in {{0,1,2}}")))
        }
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    /// `q_{i+k}` with indices taken mod 3.
    pub fn shifted(self, k: usize) -> Letter {
        Letter(((self.0 as usize + k) % 3) as u8)
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A finite word; the empty word is the identity map.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn from_letters(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, l: Letter) {
        self.0.push(l);
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn prefix(&self, n: usize) -> Word {
        Word(self.0[..n].to_vec())
    }

    /// Position of the cell `F_w(SG)` among the cells of level `|w|`,
    /// in lexicographic order.
    pub fn cell_index(&self) -> usize {
        self.0.iter().fold(0, |acc, l| acc * 3 + l.index())
    }

    /// Inverse of [`Word::cell_index`].
    pub fn from_cell_index(mut index: usize, len: usize) -> Self {
        let mut letters = vec![Letter(0); len];
        for slot in letters.iter_mut().rev() {
            *slot = Letter((index % 3) as u8);
            index /= 3;
        }
        Word(letters)
    }

    /// Apply a relabelling of the three letters.
    pub fn permuted(&self, perm: &[Letter; 3]) -> Word {
        Word(self.0.iter().map(|l| perm[l.index()]).collect())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.0 {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = SgError;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(Letter(0)),
                '1' => Ok(Letter(1)),
                '2' => Ok(Letter(2)),
                _ => Err(SgError::Invalid(format!("bad letter {c:?} in word {s:?}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }
}

/// `prefix · tail · tail · …`, the address of a point of `V_*` together with
/// the direction from which it is approached.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EventuallyConstantWord {
    prefix: Word,
    tail: Letter,
}

impl EventuallyConstantWord {
    /// Builds the word, shortening the prefix while it ends in `tail`.
    pub fn new(prefix: Word, tail: Letter) -> Self {
        let mut letters = prefix.0;
        while letters.last() == Some(&tail) {
            letters.pop();
        }
        EventuallyConstantWord {
            prefix: Word(letters),
            tail,
        }
    }

    pub fn constant(tail: Letter) -> Self {
        Self::new(Word::empty(), tail)
    }

    pub fn prefix(&self) -> &Word {
        &self.prefix
    }

    pub fn tail(&self) -> Letter {
        self.tail
    }

    /// Letter `w_j` (1-based).
    pub fn letter(&self, j: usize) -> Letter {
        assert!(j >= 1, "letters are 1-based");
        self.prefix.0.get(j - 1).copied().unwrap_or(self.tail)
    }

    /// `[w]_m`, the truncation to length `m`.
    pub fn truncate(&self, m: usize) -> Word {
        Word((1..=m).map(|j| self.letter(j)).collect())
    }

    /// The point `F_w(SG) = F_prefix(q_tail)`.
    pub fn vertex(&self) -> VertexId {
        VertexId::from_address(&self.prefix, self.tail)
    }

    pub fn permuted(&self, perm: &[Letter; 3]) -> Self {
        Self::new(self.prefix.permuted(perm), perm[self.tail.index()])
    }
}

impl fmt::Display for EventuallyConstantWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.prefix, self.tail)
    }
}

impl FromStr for EventuallyConstantWord {
    type Err = SgError;

    /// Parses `prefix:tail`, e.g. `01:2` or `:0`.
    fn from_str(s: &str) -> Result<Self> {
        let (p, t) = s
            .split_once(':')
            .ok_or_else(|| SgError::Invalid(format!("word {s:?} is not of the form prefix:tail")))?;
        let tail: Word = t.parse()?;
        if tail.len() != 1 {
            return Err(SgError::Invalid(format!("tail of {s:?} must be a single letter")));
        }
        Ok(Self::new(p.parse()?, tail.0[0]))
    }
}

/// Canonical address of a vertex of `V_*`: the shortest word `u` and letter
/// `i` with the vertex equal to `F_u(q_i)`, lexicographically smallest among
/// the (at most two) such pairs. The birth level is `|u|`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexId {
    // field order gives the canonical ordering: level, then word, then letter
    level: usize,
    word: Word,
    letter: Letter,
}

impl VertexId {
    pub fn boundary(i: Letter) -> Self {
        VertexId {
            level: 0,
            word: Word::empty(),
            letter: i,
        }
    }

    /// Canonical id of `F_w(q_i)`.
    pub fn from_address(w: &Word, i: Letter) -> Self {
        let mut letters = w.0.clone();
        while letters.last() == Some(&i) {
            letters.pop();
        }
        let Some(&a) = letters.last() else {
            return Self::boundary(i);
        };
        let level = letters.len();
        let mut other = letters.clone();
        *other.last_mut().unwrap() = i;
        let (word, letter) = std::cmp::min((Word(letters), i), (Word(other), a));
        VertexId {
            level,
            word,
            letter,
        }
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn word(&self) -> &Word {
        &self.word
    }

    pub fn letter(&self) -> Letter {
        self.letter
    }

    pub fn is_boundary(&self) -> bool {
        self.level == 0
    }

    /// All addresses of the vertex at its birth level: one for a boundary
    /// point, two for a junction point.
    pub fn addresses(&self) -> Vec<(Word, Letter)> {
        match self.word.0.last() {
            None => vec![(Word::empty(), self.letter)],
            Some(&a) => {
                let mut other = self.word.0.clone();
                *other.last_mut().unwrap() = self.letter;
                vec![(self.word.clone(), self.letter), (Word(other), a)]
            }
        }
    }

    /// Exact coordinates as numerators over `2^scale`; requires `scale >= level`.
    pub fn dyadic(&self, scale: usize) -> (i64, i64) {
        dyadic_coordinates(&self.word, self.letter, scale)
    }

    pub fn permuted(&self, perm: &[Letter; 3]) -> Self {
        Self::from_address(&self.word.permuted(perm), perm[self.letter.index()])
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.word, self.letter)
    }
}

const Q_AFFINE: [(i64, i64); 3] = [(0, 0), (1, 0), (0, 1)];

/// `F_w(q_i)` in the affine frame, as numerators over `2^scale`.
pub fn dyadic_coordinates(w: &Word, i: Letter, scale: usize) -> (i64, i64) {
    assert!(scale >= w.len(), "scale below word length");
    assert!(scale < 62, "scale too large for exact coordinates");
    let (mut s, mut t) = Q_AFFINE[i.index()];
    // F_w = F_{w1} ∘ … ∘ F_{wm}: innermost letter first; each step halves,
    // so keep numerators over 2^(steps so far).
    for (k, l) in w.0.iter().rev().enumerate() {
        let (qs, qt) = Q_AFFINE[l.index()];
        s += qs << k;
        t += qt << k;
    }
    let shift = scale - w.len();
    (s << shift, t << shift)
}

/// The three corners of the gasket in the plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Triangle {
    pub q: [[f64; 2]; 3],
}

impl Default for Triangle {
    /// Unit-side equilateral triangle.
    fn default() -> Self {
        Triangle {
            q: [[0.0, 0.0], [1.0, 0.0], [0.5, 3f64.sqrt() / 2.0]],
        }
    }
}

impl Triangle {
    /// `F_{w1} ∘ … ∘ F_{wm}(p)` with `F_i(x) = (x + q_i)/2`.
    pub fn apply_ifs(&self, w: &Word, p: [f64; 2]) -> [f64; 2] {
        w.0.iter().rev().fold(p, |p, l| {
            let q = self.q[l.index()];
            [(p[0] + q[0]) / 2.0, (p[1] + q[1]) / 2.0]
        })
    }

    /// Planar position of exact affine coordinates over `2^scale`.
    pub fn position(&self, (s, t): (i64, i64), scale: usize) -> [f64; 2] {
        let d = (1u64 << scale) as f64;
        let (s, t) = (s as f64 / d, t as f64 / d);
        let [q0, q1, q2] = self.q;
        [
            q0[0] + s * (q1[0] - q0[0]) + t * (q2[0] - q0[0]),
            q0[1] + s * (q1[1] - q0[1]) + t * (q2[1] - q0[1]),
        ]
    }

    pub fn vertex_position(&self, v: &VertexId) -> [f64; 2] {
        self.position(v.dyadic(v.level()), v.level())
    }
}

/// The level-`m` graph: vertices `V_m` in canonical order (the three boundary
/// points first), the `3^m` cells in lexicographic word order, and the
/// intra-cell adjacency.
#[derive(Debug, Clone)]
pub struct LevelGraph {
    level: usize,
    vertices: Vec<VertexId>,
    coords: Vec<(i64, i64)>,
    cells: Vec<[usize; 3]>,
    neighbors: Vec<Vec<usize>>,
    by_coord: HashMap<(i64, i64), usize>,
}

impl LevelGraph {
    /// Builds `V_m` by enumerating every cell and merging corners with equal
    /// exact coordinates.
    pub fn build(m: usize) -> Result<Self> {
        let cap = level_cap();
        if m > cap {
            return Err(SgError::LevelCap {
                requested: m,
                cap,
                what: "graph level",
            });
        }
        let n_cells = 3usize.pow(m as u32);
        let mut by_coord: HashMap<(i64, i64), usize> = HashMap::new();
        let mut ids: Vec<VertexId> = Vec::new();
        let mut coords: Vec<(i64, i64)> = Vec::new();
        let mut raw_cells = Vec::with_capacity(n_cells);
        for c in 0..n_cells {
            let w = Word::from_cell_index(c, m);
            let mut cell = [0usize; 3];
            for (j, l) in Letter::ALL.iter().enumerate() {
                let xy = dyadic_coordinates(&w, *l, m);
                cell[j] = *by_coord.entry(xy).or_insert_with(|| {
                    ids.push(VertexId::from_address(&w, *l));
                    coords.push(xy);
                    ids.len() - 1
                });
            }
            raw_cells.push(cell);
        }

        // renumber into canonical order
        let mut order: Vec<usize> = (0..ids.len()).collect();
        order.sort_by(|&a, &b| ids[a].cmp(&ids[b]));
        let mut new_index = vec![0usize; ids.len()];
        for (new, &old) in order.iter().enumerate() {
            new_index[old] = new;
        }
        let vertices: Vec<VertexId> = order.iter().map(|&o| ids[o].clone()).collect();
        let coords: Vec<(i64, i64)> = order.iter().map(|&o| coords[o]).collect();
        let cells: Vec<[usize; 3]> = raw_cells
            .iter()
            .map(|c| [new_index[c[0]], new_index[c[1]], new_index[c[2]]])
            .collect();
        for v in by_coord.values_mut() {
            *v = new_index[*v];
        }

        let mut neighbors = vec![Vec::with_capacity(4); vertices.len()];
        for cell in &cells {
            for (a, b) in [(0, 1), (0, 2), (1, 2)] {
                neighbors[cell[a]].push(cell[b]);
                neighbors[cell[b]].push(cell[a]);
            }
        }
        for n in &mut neighbors {
            n.sort_unstable();
        }

        Ok(LevelGraph {
            level: m,
            vertices,
            coords,
            cells,
            neighbors,
            by_coord,
        })
    }

    /// Process-wide cached graph for level `m`.
    pub fn shared(m: usize) -> Result<Arc<LevelGraph>> {
        static CACHE: OnceLock<Mutex<HashMap<usize, Arc<LevelGraph>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        if let Some(g) = cache.lock().unwrap().get(&m) {
            return Ok(g.clone());
        }
        let g = Arc::new(Self::build(m)?);
        Ok(cache.lock().unwrap().entry(m).or_insert(g).clone())
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Exact affine coordinates of vertex `idx`, over `2^level`.
    pub fn coords(&self, idx: usize) -> (i64, i64) {
        self.coords[idx]
    }

    /// Corner vertex indices `(F_w q0, F_w q1, F_w q2)` of every cell, indexed by
    /// [`Word::cell_index`].
    pub fn cells(&self) -> &[[usize; 3]] {
        &self.cells
    }

    pub fn neighbors(&self, idx: usize) -> &[usize] {
        &self.neighbors[idx]
    }

    /// Boundary vertices are always indices 0, 1, 2 (`q0`, `q1`, `q2`).
    pub fn is_interior(&self, idx: usize) -> bool {
        idx >= 3
    }

    pub fn interior(&self) -> std::ops::Range<usize> {
        3..self.vertices.len()
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut e = Vec::with_capacity(self.cells.len() * 3);
        for cell in &self.cells {
            for (a, b) in [(0, 1), (0, 2), (1, 2)] {
                e.push((cell[a].min(cell[b]), cell[a].max(cell[b])));
            }
        }
        e.sort_unstable();
        e
    }

    pub fn index_of(&self, v: &VertexId) -> Option<usize> {
        if v.level() > self.level {
            return None;
        }
        self.by_coord.get(&v.dyadic(self.level)).copied()
    }

    /// Index of `F_w(q_i)` for any word with `|w| <= level`.
    pub fn index_of_address(&self, w: &Word, i: Letter) -> Option<usize> {
        if w.len() > self.level {
            return None;
        }
        self.by_coord.get(&dyadic_coordinates(w, i, self.level)).copied()
    }
}

/// Expected `|V_m| = (3^{m+1} + 3) / 2`.
pub fn vertex_count(m: usize) -> usize {
    (3usize.pow(m as u32 + 1) + 3) / 2
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn l(i: u8) -> Letter {
        Letter::new(i).unwrap()
    }

    #[test]
    fn letter_range() {
        assert!(Letter::new(3).is_err());
        assert_eq!(l(2).shifted(2), l(1));
    }

    #[test]
    fn ifs_identity_and_fixed_point() {
        let tri = Triangle::default();
        let p = [0.3, 0.2];
        assert_eq!(tri.apply_ifs(&Word::empty(), p), p);
        assert_eq!(tri.apply_ifs(&w("0"), tri.q[0]), tri.q[0]);
    }

    #[test]
    fn ifs_two_letters_matches_explicit_composition() {
        let tri = Triangle::default();
        // F_0(F_1(q1)) = F_0(q1) = midpoint of q0 q1
        let f1 = |p: [f64; 2]| [(p[0] + tri.q[1][0]) / 2.0, (p[1] + tri.q[1][1]) / 2.0];
        let f0 = |p: [f64; 2]| [(p[0] + tri.q[0][0]) / 2.0, (p[1] + tri.q[0][1]) / 2.0];
        let expected = f0(f1(tri.q[1]));
        let got = tri.apply_ifs(&w("01"), tri.q[1]);
        assert!((got[0] - expected[0]).abs() < 1e-15 && (got[1] - expected[1]).abs() < 1e-15);
        assert!((got[0] - 0.5).abs() < 1e-15 && got[1].abs() < 1e-15);
    }

    #[test]
    fn level_zero_is_triangle() {
        let g = LevelGraph::build(0).unwrap();
        assert_eq!(g.len(), 3);
        assert_eq!(g.edges().len(), 3);
        assert_eq!(g.interior().count(), 0);
    }

    #[test]
    fn level_one_degrees() {
        let g = LevelGraph::build(1).unwrap();
        assert_eq!(g.len(), 6);
        for i in g.interior() {
            assert_eq!(g.neighbors(i).len(), 4);
        }
        for i in 0..3 {
            assert_eq!(g.neighbors(i).len(), 2);
        }
        // canonical order of the level-1 births
        let names: Vec<String> = g.vertices().iter().map(|v| v.to_string()).collect();
        assert_eq!(names, [":0", ":1", ":2", "0:1", "0:2", "1:2"]);
    }

    #[test]
    fn cardinalities() {
        for m in 0..=6 {
            let g = LevelGraph::build(m).unwrap();
            assert_eq!(g.len(), vertex_count(m), "level {m}");
            assert_eq!(g.edges().len(), 3usize.pow(m as u32 + 1));
            let deg_ok = (0..g.len()).all(|i| g.neighbors(i).len() == if i < 3 { 2 } else { 4 });
            assert!(deg_ok);
        }
        assert_eq!(vertex_count(2), 15);
    }

    #[test]
    fn junction_addresses() {
        let v = VertexId::from_address(&w("1"), l(0));
        assert_eq!(v.to_string(), "0:1");
        let a = v.addresses();
        assert_eq!(a, vec![(w("0"), l(1)), (w("1"), l(0))]);

        assert_eq!(VertexId::boundary(l(0)).addresses(), vec![(Word::empty(), l(0))]);
        assert_eq!(VertexId::from_address(&w("000"), l(0)), VertexId::boundary(l(0)));

        let v = VertexId::from_address(&w("02"), l(1));
        assert_eq!(v.to_string(), "01:2");
        let tri = Triangle::default();
        let pts: Vec<[f64; 2]> = v
            .addresses()
            .iter()
            .map(|(word, i)| tri.apply_ifs(word, tri.q[i.index()]))
            .collect();
        assert!((pts[0][0] - pts[1][0]).abs() < 1e-12 && (pts[0][1] - pts[1][1]).abs() < 1e-12);
    }

    #[test]
    fn dyadic_lookup_agrees_with_addresses() {
        let g = LevelGraph::build(3).unwrap();
        for (c, cell) in g.cells().iter().enumerate() {
            let word = Word::from_cell_index(c, 3);
            for j in 0..3 {
                assert_eq!(g.index_of_address(&word, Letter::ALL[j]), Some(cell[j]));
            }
        }
        for (i, v) in g.vertices().iter().enumerate() {
            assert_eq!(g.index_of(v), Some(i));
        }
    }

    #[test]
    fn eventually_constant_parsing() {
        let e: EventuallyConstantWord = "0111:1".parse().unwrap();
        assert_eq!(e.prefix(), &w("0"));
        assert_eq!(e.to_string(), "0:1");
        assert_eq!(e.truncate(4), w("0111"));
        assert_eq!(e.vertex().to_string(), "0:1");
        assert!("01".parse::<EventuallyConstantWord>().is_err());
        assert!("0:12".parse::<EventuallyConstantWord>().is_err());
    }

    #[test]
    fn cell_index_round_trip() {
        for c in 0..27 {
            assert_eq!(Word::from_cell_index(c, 3).cell_index(), c);
        }
    }
}
