//! Initial configurations of the Dirichlet eigenfunctions.
//!
//! Labelling: `q0` bottom left, `q1` bottom right, `q2` top, so the level-1
//! midpoints are `0:1` (bottom), `0:2` (left) and `1:2` (right).
//!
//! * 2-series, `m0 = 1`: 1 at the three midpoints.
//! * 5-series, `m0 = 1`: `(bottom, left, right) = (1, -1, 0)` and `(1, 0, -1)`.
//! * 5-series, `m0 = 2`: three `±1` chains on `V_2`. Chains are read off
//!   positionally and confirmed by the eigen-equation at every vertex.
//! * 5-series, `m0 >= 3`: no closed form; the `λ = 5` eigenvectors of the
//!   dense level-`m0` problem are used instead (`m0 <= 6`).
//! * 6-series, `m0 >= 2`: indexed by an interior vertex `p` of `V_{m0-1}`.
//!   Each of the two `(m0-1)`-cells at `p` carries a copy of the 6-piece:
//!   2 at `p`, -1 at the two level-`m0` midpoints next to `p`, 1 at the
//!   opposite midpoint.
//! * 6-piece, `m0 = 1`: the building block itself, `(q0, q1, q2) = (0, 0, 2)`,
//!   `(0:1, 0:2, 1:2) = (1, -1, -1)`. It is not Dirichlet.

use std::fmt;
use std::str::FromStr;

use crate::address::{Letter, LevelGraph, VertexId, Word};
use crate::decimation::{Branch, EigenvalueSequence, SpectralEigenfunction};
use crate::error::{Result, SgError};
use crate::harmonic::LevelValues;
use crate::oracle::shared_dense_spectrum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Series {
    Two,
    Five,
    Six,
    SixPiece,
}

impl Series {
    pub fn lambda_m0(self) -> f64 {
        match self {
            Series::Two => 2.0,
            Series::Five => 5.0,
            Series::Six | Series::SixPiece => 6.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Series::Two => "two",
            Series::Five => "five",
            Series::Six => "six",
            Series::SixPiece => "sixpiece",
        }
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Series {
    type Err = SgError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "two" => Ok(Series::Two),
            "five" => Ok(Series::Five),
            "six" => Ok(Series::Six),
            "sixpiece" => Ok(Series::SixPiece),
            _ => Err(SgError::Invalid(format!("unknown series {s:?}"))),
        }
    }
}

/// Largest level at which 5-series seeds come from the dense solver.
pub const DENSE_SEED_CAP: usize = 6;

const DENSE_CLUSTER_TOL: f64 = 1e-8;

/// One basis element of a Dirichlet eigenspace at level `m0`. `index` is
/// 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DirichletSeed {
    pub series: Series,
    pub m0: usize,
    pub index: usize,
}

impl DirichletSeed {
    pub fn new(series: Series, m0: usize, index: usize) -> Result<Self> {
        let count = basis_size(series, m0)?;
        if index == 0 || index > count {
            return Err(SgError::Invalid(format!(
                "{series} series at m0 = {m0} has indices 1..={count}, got {index}"
            )));
        }
        Ok(DirichletSeed { series, m0, index })
    }

    /// False for seeds taken from the dense solver rather than a closed form.
    pub fn closed_form(&self) -> bool {
        !(self.series == Series::Five && self.m0 >= 3)
    }

    /// The eigenvalue sequence with plus roots at the levels `m0 + j + 1`
    /// where `branches[j]` is plus. For 6-series seeds the first step must be
    /// plus (the minus root is 2); an empty pattern defaults to that.
    pub fn sequence(&self, branches: &[Branch]) -> Result<EigenvalueSequence> {
        let mut plus: Vec<usize> = branches
            .iter()
            .enumerate()
            .filter(|(_, b)| **b == Branch::Plus)
            .map(|(j, _)| self.m0 + j + 1)
            .collect();
        if matches!(self.series, Series::Six | Series::SixPiece) && branches.is_empty() {
            plus.push(self.m0 + 1);
        }
        EigenvalueSequence::new(self.m0, self.series.lambda_m0(), plus)
    }

    /// Values on `V_{m0}`.
    pub fn initial_values(&self) -> Result<LevelValues> {
        let graph = LevelGraph::shared(self.m0)?;
        let mut values = vec![0.0; graph.len()];
        let mut set = |word: &str, letter: u8, x: f64| -> Result<()> {
            let idx = graph
                .index_of_address(&word.parse()?, Letter::new(letter)?)
                .expect("seed vertices lie in V_m0");
            values[idx] = x;
            Ok(())
        };
        match (self.series, self.m0, self.index) {
            (Series::Two, 1, _) => {
                set("0", 1, 1.0)?;
                set("0", 2, 1.0)?;
                set("1", 2, 1.0)?;
            }
            (Series::Five, 1, i) => {
                set("0", 1, 1.0)?;
                set(if i == 1 { "0" } else { "1" }, 2, -1.0)?;
            }
            (Series::Five, 2, 1) => {
                for (w, l, x) in [("00", 1, -1.0), ("01", 2, 1.0), ("20", 1, -1.0), ("21", 2, 1.0)] {
                    set(w, l, x)?;
                }
            }
            (Series::Five, 2, 2) => {
                for (w, l, x) in [
                    ("00", 1, 1.0),
                    ("00", 2, -1.0),
                    ("20", 2, 1.0),
                    ("21", 2, -1.0),
                    ("11", 2, 1.0),
                    ("10", 1, -1.0),
                ] {
                    set(w, l, x)?;
                }
            }
            (Series::Five, 2, _) => {
                for (w, l, x) in [("10", 1, -1.0), ("10", 2, 1.0), ("20", 1, -1.0), ("20", 2, 1.0)] {
                    set(w, l, x)?;
                }
            }
            (Series::Five, m0, i) => {
                if m0 > DENSE_SEED_CAP {
                    return Err(SgError::LevelCap {
                        requested: m0,
                        cap: DENSE_SEED_CAP,
                        what: "5-series seeds without a closed form",
                    });
                }
                let dense = shared_dense_spectrum(m0)?;
                let space = dense.eigenspace(5.0, DENSE_CLUSTER_TOL);
                let expected = basis_size(Series::Five, m0)?;
                if space.len() != expected {
                    return Err(SgError::Invalid(format!(
                        "dense λ = 5 eigenspace at level {m0} has dimension {}, expected {expected}",
                        space.len()
                    )));
                }
                return Ok(dense.to_level_values(space[i - 1]));
            }
            (Series::Six, m0, i) => {
                let coarse = LevelGraph::shared(m0 - 1)?;
                let p = coarse.vertices()[2 + i].clone();
                for (cell, corner) in gluing_cells(&p, m0 - 1) {
                    let others: Vec<Letter> =
                        Letter::ALL.into_iter().filter(|l| *l != corner).collect();
                    let mut put = |w: Word, l: Letter, x: f64| {
                        values[graph.index_of_address(&w, l).expect("vertex of V_m0")] = x;
                    };
                    put(cell.clone(), corner, 2.0);
                    let mut at_corner = cell.clone();
                    at_corner.push(corner);
                    for &o in &others {
                        put(at_corner.clone(), o, -1.0);
                    }
                    let mut opposite = cell.clone();
                    opposite.push(others[0]);
                    put(opposite, others[1], 1.0);
                }
            }
            (Series::SixPiece, 1, _) => {
                set("", 2, 2.0)?;
                set("0", 1, 1.0)?;
                set("0", 2, -1.0)?;
                set("1", 2, -1.0)?;
            }
            (s, m0, _) => {
                return Err(SgError::Unsupported(format!("{s} series at m0 = {m0}")));
            }
        }
        Ok(LevelValues::new(self.m0, values))
    }
}

/// The two `(level)`-cells meeting at the junction `p`, with the corner of
/// each cell at `p`.
fn gluing_cells(p: &VertexId, level: usize) -> Vec<(Word, Letter)> {
    p.addresses()
        .into_iter()
        .map(|(mut w, i)| {
            while w.len() < level {
                w.push(i);
            }
            (w, i)
        })
        .collect()
}

/// Number of basis functions of a series born at `m0`.
pub fn basis_size(series: Series, m0: usize) -> Result<usize> {
    match (series, m0) {
        (Series::Two, 1) => Ok(1),
        // 2 at m0 = 1, 3 at m0 = 2 (the three chains), then one per loop
        (Series::Five, m0) if m0 >= 1 => Ok((3usize.pow(m0 as u32 - 1) + 3) / 2),
        // interior vertices of V_{m0-1}
        (Series::Six, m0) if m0 >= 2 => Ok((3usize.pow(m0 as u32) - 3) / 2),
        (Series::SixPiece, 1) => Ok(1),
        (s, m0) => Err(SgError::Unsupported(format!("{s} series at m0 = {m0}"))),
    }
}

/// The eigenfunction grown from `seed` with the given branch pattern.
pub fn dirichlet_basis(seed: DirichletSeed, branches: &[Branch]) -> Result<SpectralEigenfunction> {
    SpectralEigenfunction::new(seed.sequence(branches)?, seed.initial_values()?)
}
