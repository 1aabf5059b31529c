//! Tangents of Dirichlet eigenfunctions assembled from a few model pieces.
//!
//! Restricted to a cell of level `m0` (or `m0 − 1` for the 6-series), a
//! Dirichlet eigenfunction is a combination of rotated copies of
//!
//! * `Two`: `λ_0 = 2`, boundary `(0, 1, 1)`;
//! * `FiveMiddle`: `λ_0 = 5`, boundary `(0, 1, −1)`;
//! * `FiveCorner`: `λ_0 = 5`, boundary `(0, 0, 1)`;
//! * `Six`: `λ_1 = 6`, the level-1 piece with value 2 at `q_2`.
//!
//! The tangent of the whole function is the pulled-back sum of the piece
//! tangents.

use std::fmt;
use std::str::FromStr;

use crate::address::{EventuallyConstantWord, Letter, Word};
use crate::decimation::{dirichlet_basis, Branch, DirichletSeed, EigenvalueSequence, Series, SpectralEigenfunction};
use crate::error::{Result, SgError};
use crate::harmonic::{harmonic_inverse, CellTriple};
use crate::linalg::Vec3;
use crate::tangent::{tangent_at, TangentTriple};

/// Relative tolerance for recognising a cell as a multiple of a piece.
const FIT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TangentPiece {
    Two,
    FiveMiddle,
    FiveCorner,
    Six,
}

impl TangentPiece {
    pub const ALL: [TangentPiece; 4] = [
        TangentPiece::Two,
        TangentPiece::FiveMiddle,
        TangentPiece::FiveCorner,
        TangentPiece::Six,
    ];

    /// Level of the piece's initial data.
    pub fn m0(self) -> usize {
        match self {
            TangentPiece::Six => 1,
            _ => 0,
        }
    }

    pub fn lambda_m0(self) -> f64 {
        match self {
            TangentPiece::Two => 2.0,
            TangentPiece::FiveMiddle | TangentPiece::FiveCorner => 5.0,
            TangentPiece::Six => 6.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            TangentPiece::Two => "two",
            TangentPiece::FiveMiddle => "five-middle",
            TangentPiece::FiveCorner => "five-corner",
            TangentPiece::Six => "six",
        }
    }

    /// The sequence with the given choice at the first free level (level 1,
    /// or level 3 for `Six`, whose level-2 value is forced to be 3).
    pub fn sequence(self, branch: Branch) -> Result<EigenvalueSequence> {
        let mut plus = Vec::new();
        if self == TangentPiece::Six {
            plus.push(2);
        }
        if branch == Branch::Plus {
            plus.push(self.m0() + 1 + usize::from(self == TangentPiece::Six));
        }
        EigenvalueSequence::new(self.m0(), self.lambda_m0(), plus)
    }
}

impl fmt::Display for TangentPiece {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TangentPiece {
    type Err = SgError;

    fn from_str(s: &str) -> Result<Self> {
        TangentPiece::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| SgError::Invalid(format!("unknown tangent piece {s:?}")))
    }
}

/// A piece together with its tangents at the three boundary vertices.
#[derive(Debug, Clone)]
pub struct PieceTangents {
    pub piece: TangentPiece,
    pub eigenfunction: SpectralEigenfunction,
    pub lambda: f64,
    /// `T_{i^∞}` for `i = 0, 1, 2`.
    pub at_vertex: [TangentTriple; 3],
}

/// The piece as an eigenfunction with the sequence `seq`, which must start
/// at the piece's level with the piece's eigenvalue.
pub fn piece_eigenfunction(piece: TangentPiece, seq: EigenvalueSequence) -> Result<SpectralEigenfunction> {
    if seq.m0() != piece.m0() || seq.lambda(seq.m0()) != piece.lambda_m0() {
        return Err(SgError::Invalid(format!(
            "{piece} piece needs λ_{} = {}, got λ_{} = {}",
            piece.m0(),
            piece.lambda_m0(),
            seq.m0(),
            seq.lambda(seq.m0())
        )));
    }
    let b = match piece {
        TangentPiece::Two => CellTriple::new(0.0, 1.0, 1.0),
        TangentPiece::FiveMiddle => CellTriple::new(0.0, 1.0, -1.0),
        TangentPiece::FiveCorner => CellTriple::new(0.0, 0.0, 1.0),
        TangentPiece::Six => {
            let seed = DirichletSeed::new(Series::SixPiece, 1, 1)?;
            return SpectralEigenfunction::new(seq, seed.initial_values()?);
        }
    };
    SpectralEigenfunction::from_boundary(seq, b)
}

/// The piece with the given branch and its vertex tangents.
pub fn dirichlet_tangent_seed(piece: TangentPiece, branch: Branch) -> Result<PieceTangents> {
    let eigenfunction = piece_eigenfunction(piece, piece.sequence(branch)?)?;
    let mut at_vertex = [TangentTriple([0.0; 3]); 3];
    for i in Letter::ALL {
        at_vertex[i.index()] = tangent_at(&eigenfunction, &EventuallyConstantWord::constant(i))?;
    }
    Ok(PieceTangents {
        piece,
        lambda: eigenfunction.lambda(),
        eigenfunction,
        at_vertex,
    })
}

/// Checks that `value` is an admissible eigenvalue at the piece's first free
/// level and returns the branch it corresponds to. `Two` accepts
/// `(5 ± √17)/2`, the 5-pieces `(5 ± √5)/2`, and `Six` only the forced 3.
pub fn validate_piece_lambda1(piece: TangentPiece, value: f64) -> Result<Branch> {
    let candidates: Vec<(f64, Branch)> = match piece {
        TangentPiece::Two => vec![
            ((5.0 - 17f64.sqrt()) / 2.0, Branch::Minus),
            ((5.0 + 17f64.sqrt()) / 2.0, Branch::Plus),
        ],
        TangentPiece::FiveMiddle | TangentPiece::FiveCorner => vec![
            ((5.0 - 5f64.sqrt()) / 2.0, Branch::Minus),
            ((5.0 + 5f64.sqrt()) / 2.0, Branch::Plus),
        ],
        TangentPiece::Six => vec![(3.0, Branch::Plus)],
    };
    candidates
        .into_iter()
        .find(|(c, _)| (value - c).abs() <= 1e-12 * c.abs())
        .map(|(_, b)| b)
        .ok_or_else(|| SgError::Domain(format!("{value} is not an admissible next eigenvalue for the {piece} piece")))
}

/// Transposition of `a` and `b` as a relabelling permutation.
fn swap(a: usize, b: usize) -> [Letter; 3] {
    let mut perm = Letter::ALL;
    perm.swap(a, b);
    perm
}

/// Boundary values of the piece after relabelling by `perm`.
fn rotated(base: Vec3, perm: &[Letter; 3]) -> Vec3 {
    let mut out = [0.0; 3];
    for i in 0..3 {
        out[perm[i].index()] = base[i];
    }
    out
}

/// `(piece, relabelling, coefficient)` with `c = Σ coefficient · rotated piece`.
fn decompose(c: Vec3, five: bool) -> Vec<(TangentPiece, [Letter; 3], f64)> {
    if !five {
        let half = c.iter().sum::<f64>() / 2.0;
        return (0..3)
            .map(|j| (TangentPiece::Two, swap(0, j), half - c[j]))
            .filter(|t| t.2 != 0.0)
            .collect();
    }
    let scale = c.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    for j in 0..3 {
        let perm = swap(0, j);
        let r = rotated([0.0, 1.0, -1.0], &perm);
        let s = c.iter().zip(&r).map(|(x, y)| x * y).sum::<f64>() / 2.0;
        if c.iter().zip(&r).all(|(x, y)| (x - s * y).abs() <= FIT_TOL * scale) {
            return vec![(TangentPiece::FiveMiddle, perm, s)];
        }
    }
    (0..3)
        .map(|j| (TangentPiece::FiveCorner, swap(2, j), c[j]))
        .filter(|t| t.2 != 0.0)
        .collect()
}

/// `T_w u` for a Dirichlet eigenfunction `u` built from a 2-, 5- or
/// 6-series seed, computed from piece tangents.
pub fn assemble_dirichlet_tangent(u: &SpectralEigenfunction, w: &EventuallyConstantWord) -> Result<TangentTriple> {
    let m0 = u.m0();
    let (level, six) = match u.seq().lambda(m0) {
        x if x == 2.0 || x == 5.0 => (m0, false),
        x if x == 6.0 && m0 >= 1 => (m0 - 1, true),
        x => {
            return Err(SgError::Unsupported(format!(
                "piece assembly needs λ_m0 in {{2, 5, 6}}, got {x}"
            )))
        }
    };
    let cell = w.truncate(level);
    let rest_prefix = w.prefix().letters().get(level..).unwrap_or(&[]).to_vec();
    let rest = EventuallyConstantWord::new(Word::from_letters(rest_prefix), w.tail());
    let seq = u.seq().shifted(level)?;

    let mut total = [0.0; 3];
    let mut add = |piece: TangentPiece, perm: [Letter; 3], a: f64| -> Result<()> {
        let f = piece_eigenfunction(piece, seq.clone())?.relabel(perm)?;
        let t = tangent_at(&f, &rest)?.0;
        for (s, x) in total.iter_mut().zip(t) {
            *s += a * x;
        }
        Ok(())
    };
    if six {
        let g = u.restrict_to_cell(&cell)?;
        let corners = g.boundary().0;
        let base = DirichletSeed::new(Series::SixPiece, 1, 1)?;
        let base = dirichlet_basis(base, &[])?;
        let mut fitted = vec![0.0; g.initial().values.len()];
        for j in 0..3 {
            if corners[j] == 0.0 {
                continue;
            }
            let a = corners[j] / 2.0;
            let piece = base.relabel(swap(2, j))?;
            for (f, v) in fitted.iter_mut().zip(&piece.initial().values) {
                *f += a * v;
            }
            add(TangentPiece::Six, swap(2, j), a)?;
        }
        let scale = g.initial().values.iter().fold(0.0f64, |a, x| a.max(x.abs()));
        let misfit = fitted
            .iter()
            .zip(&g.initial().values)
            .fold(0.0f64, |a, (f, v)| a.max((f - v).abs()));
        if misfit > FIT_TOL * scale.max(f64::MIN_POSITIVE) {
            return Err(SgError::Unsupported(format!(
                "cell {cell} is not a combination of six pieces (misfit {misfit:e})"
            )));
        }
    } else {
        let c = u.cell_triple(&cell)?.0;
        for (piece, perm, a) in decompose(c, u.seq().lambda(m0) == 5.0) {
            add(piece, perm, a)?;
        }
    }
    let t = cell
        .letters()
        .iter()
        .rev()
        .fold(total, |acc, &l| harmonic_inverse(l) * acc);
    Ok(TangentTriple(t))
}
