use std::sync::Arc;

use crate::address::{Letter, LevelGraph, Word};
use crate::decimation::{eigen_matrix, extend_eigen, EigenvalueSequence};
use crate::error::{Result, SgError};
use crate::harmonic::{eigen_residual, CellTriple, LevelValues, PointEvaluator};
use crate::linalg::Mat3;

/// Seeds must satisfy the level-`m0` eigen-equation to this (relative) accuracy.
const SEED_RESIDUAL_TOL: f64 = 1e-9;
/// Junction values computed from the two adjacent cells must agree to this.
const JUNCTION_TOL: f64 = 1e-10;

/// A solution of `(Δ + λ) u = 0` given by spectral decimation: an eigenvalue
/// sequence from level `m0` and the values of `u` on `V_{m0}`.
#[derive(Debug, Clone)]
pub struct SpectralEigenfunction {
    seq: EigenvalueSequence,
    graph: Arc<LevelGraph>,
    initial: LevelValues,
    cells: Vec<CellTriple>,
}

impl SpectralEigenfunction {
    /// Checks `(Δ_{m0} + λ_{m0}) u = 0` on the interior of `V_{m0}`.
    pub fn new(seq: EigenvalueSequence, initial: LevelValues) -> Result<Self> {
        let m0 = seq.m0();
        if initial.level != m0 {
            return Err(SgError::LevelMismatch {
                expected: m0,
                actual: initial.level,
            });
        }
        let graph = LevelGraph::shared(m0)?;
        let residual = eigen_residual(&graph, &initial, seq.lambda(m0))?;
        let scale = initial.values.iter().fold(1.0f64, |a, v| a.max(v.abs()));
        if residual > SEED_RESIDUAL_TOL * scale {
            return Err(SgError::Invalid(format!(
                "initial data violate the level-{m0} eigen-equation (residual {residual:e})"
            )));
        }
        let cells = graph
            .cells()
            .iter()
            .map(|c| CellTriple(c.map(|v| initial.values[v])))
            .collect();
        Ok(SpectralEigenfunction {
            seq,
            graph,
            initial,
            cells,
        })
    }

    /// The eigenfunction with `m0 = 0` and boundary values `b`.
    pub fn from_boundary(seq: EigenvalueSequence, b: CellTriple) -> Result<Self> {
        if seq.m0() != 0 {
            return Err(SgError::Invalid(format!(
                "boundary data need m0 = 0, sequence starts at {}",
                seq.m0()
            )));
        }
        Self::new(seq, LevelValues::new(0, b.0.to_vec()))
    }

    /// The non-Dirichlet eigenfunction with eigenvalue `lambda` and boundary
    /// values `b`, using `λ_m = Ψ(5^{-m} λ)`.
    pub fn free(lambda: f64, b: CellTriple) -> Result<Self> {
        Self::from_boundary(EigenvalueSequence::from_limit(lambda, 0)?, b)
    }

    /// The harmonic function with boundary values `b`.
    pub fn harmonic(b: CellTriple) -> Self {
        Self::from_boundary(EigenvalueSequence::harmonic(0), b).expect("harmonic data are valid")
    }

    pub fn seq(&self) -> &EigenvalueSequence {
        &self.seq
    }

    pub fn m0(&self) -> usize {
        self.seq.m0()
    }

    /// The eigenvalue `λ`.
    pub fn lambda(&self) -> f64 {
        self.seq.limit()
    }

    pub fn initial(&self) -> &LevelValues {
        &self.initial
    }

    pub fn boundary(&self) -> CellTriple {
        CellTriple([0, 1, 2].map(|i| self.initial.values[i]))
    }

    /// Corner values of the cell `F_w(SG)`.
    pub fn cell_triple(&self, w: &Word) -> Result<CellTriple> {
        let m0 = self.m0();
        if w.len() < m0 {
            let mut t = [0.0; 3];
            for l in Letter::ALL {
                let idx = self
                    .graph
                    .index_of_address(w, l)
                    .expect("vertices of shorter words lie in V_m0");
                t[l.index()] = self.initial.values[idx];
            }
            return Ok(CellTriple(t));
        }
        let head = w.prefix(m0);
        let suffix = Word::from_letters(w.letters()[m0..].to_vec());
        extend_eigen(self.cells[head.cell_index()], &suffix, &self.seq, m0)
    }

    /// `u(F_w(q_i))`.
    pub fn value(&self, w: &Word, i: Letter) -> Result<f64> {
        Ok(self.cell_triple(w)?.0[i.index()])
    }

    /// Values on `V_m`, `m >= m0`, built cell by cell; every junction value is
    /// computed from both adjacent cells and the two results compared.
    pub fn on_level(&self, m: usize) -> Result<LevelValues> {
        let m0 = self.m0();
        if m < m0 {
            return Err(SgError::Domain(format!("level {m} is below m0 = {m0}")));
        }
        let graph = LevelGraph::shared(m)?;
        let mut triples = self.cells.clone();
        for level in m0 + 1..=m {
            let lambda = self.seq.lambda(level);
            let mats: Vec<Mat3> = Letter::ALL
                .iter()
                .map(|&l| {
                    eigen_matrix(l, lambda).map_err(|_| SgError::Singular {
                        level,
                        value: lambda,
                        reason: "A_i(λ_m) is singular",
                    })
                })
                .collect::<Result<_>>()?;
            triples = triples
                .iter()
                .flat_map(|t| mats.iter().map(move |a| CellTriple(*a * t.0)))
                .collect();
        }
        let mut values = vec![f64::NAN; graph.len()];
        for (cell, t) in graph.cells().iter().zip(&triples) {
            for j in 0..3 {
                let slot = &mut values[cell[j]];
                let v = t.0[j];
                if slot.is_nan() {
                    *slot = v;
                } else if (*slot - v).abs() > JUNCTION_TOL * v.abs().max(1.0) {
                    return Err(SgError::Invalid(format!(
                        "junction values disagree at {}: {} vs {}",
                        graph.vertices()[cell[j]],
                        slot,
                        v
                    )));
                }
            }
        }
        Ok(LevelValues::new(m, values))
    }

    /// `v = u ∘ S^{-1}` where `S` is the gasket symmetry sending `q_i` to
    /// `q_{perm[i]}`, so `v(F_{σw} q_{σi}) = u(F_w q_i)`. The sequence is unchanged.
    pub fn relabel(&self, perm: [Letter; 3]) -> Result<Self> {
        let mut seen = [false; 3];
        for l in perm {
            seen[l.index()] = true;
        }
        if seen.contains(&false) {
            return Err(SgError::Invalid(format!("{perm:?} is not a permutation")));
        }
        let mut values = vec![0.0; self.graph.len()];
        for (idx, v) in self.graph.vertices().iter().enumerate() {
            let target = self
                .graph
                .index_of(&v.permuted(&perm))
                .expect("symmetries preserve V_m");
            values[target] = self.initial.values[idx];
        }
        Self::new(self.seq.clone(), LevelValues::new(self.m0(), values))
    }

    /// `u ∘ F_v` for `|v| <= m0`, an eigenfunction with eigenvalue `λ / 5^{|v|}`.
    pub fn restrict_to_cell(&self, v: &Word) -> Result<Self> {
        let seq = self.seq.shifted(v.len())?;
        let level = seq.m0();
        let graph = LevelGraph::shared(level)?;
        let values = graph
            .vertices()
            .iter()
            .map(|id| self.value(&v.concat(id.word()), id.letter()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(seq, LevelValues::new(level, values))
    }

    /// Scales the function, keeping the sequence.
    pub fn scaled(&self, s: f64) -> Self {
        let values = self.initial.values.iter().map(|v| v * s).collect();
        Self::new(self.seq.clone(), LevelValues::new(self.m0(), values))
            .expect("scaling preserves the eigen-equation")
    }
}

impl PointEvaluator for SpectralEigenfunction {
    fn eval(&self, w: &Word, i: Letter) -> Result<f64> {
        self.value(w, i)
    }
}
