//! Harmonic extension matrices, the graph Laplacian on `V_m`, and the
//! renormalized boundary limit that defines the normal derivative.

use num_rational::Ratio;

use crate::address::{LevelGraph, Letter, Word};
use crate::error::{Result, SgError};
use crate::linalg::{Mat3, Vec3};

/// Exact rational used for the constant extension matrices.
pub type Rational = Ratio<i128>;

/// Longest word accepted by the exact product path (denominators are `5^m`).
pub const EXACT_WORD_CAP: usize = 24;

/// Values `(u(F_w q0), u(F_w q1), u(F_w q2))` at the corners of a cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellTriple(pub Vec3);

impl CellTriple {
    pub fn new(v0: f64, v1: f64, v2: f64) -> Self {
        CellTriple([v0, v1, v2])
    }

    pub fn min(&self) -> f64 {
        self.0.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.0.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

/// A function on `V_m`, one value per vertex of [`LevelGraph`] `m` in
/// canonical order.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelValues {
    pub level: usize,
    pub values: Vec<f64>,
}

impl LevelValues {
    pub fn new(level: usize, values: Vec<f64>) -> Self {
        LevelValues { level, values }
    }

    fn check(&self, graph: &LevelGraph) -> Result<()> {
        if graph.level() != self.level {
            return Err(SgError::LevelMismatch {
                expected: graph.level(),
                actual: self.level,
            });
        }
        if graph.len() != self.values.len() {
            return Err(SgError::Invalid(format!(
                "{} values supplied for {} vertices",
                self.values.len(),
                graph.len()
            )));
        }
        Ok(())
    }
}

fn r(n: i128, d: i128) -> Rational {
    Rational::new(n, d)
}

/// `A_i` as exact rationals.
pub fn harmonic_matrix_exact(i: Letter) -> [[Rational; 3]; 3] {
    let rows: [[i128; 3]; 3] = match i.index() {
        0 => [[5, 0, 0], [2, 2, 1], [2, 1, 2]],
        1 => [[2, 2, 1], [0, 5, 0], [1, 2, 2]],
        _ => [[2, 1, 2], [1, 2, 2], [0, 0, 5]],
    };
    rows.map(|row| row.map(|x| r(x, 5)))
}

/// `A_i^{-1}` computed exactly from the adjugate.
pub fn harmonic_inverse_exact(i: Letter) -> [[Rational; 3]; 3] {
    let a = harmonic_matrix_exact(i);
    let cof = |r0: usize, c0: usize| {
        let rows: Vec<usize> = (0..3).filter(|&x| x != r0).collect();
        let cols: Vec<usize> = (0..3).filter(|&x| x != c0).collect();
        let minor = a[rows[0]][cols[0]] * a[rows[1]][cols[1]] - a[rows[0]][cols[1]] * a[rows[1]][cols[0]];
        if (r0 + c0) % 2 == 0 {
            minor
        } else {
            -minor
        }
    };
    let det = (0..3).map(|c| a[0][c] * cof(0, c)).fold(r(0, 1), |s, x| s + x);
    let mut inv = [[r(0, 1); 3]; 3];
    for (row, inv_row) in inv.iter_mut().enumerate() {
        for (col, x) in inv_row.iter_mut().enumerate() {
            *x = cof(col, row) / det;
        }
    }
    inv
}

fn to_f64(m: &[[Rational; 3]; 3]) -> Mat3 {
    Mat3::from_fn(|r, c| *m[r][c].numer() as f64 / *m[r][c].denom() as f64)
}

/// `A_i` in floating point.
pub fn harmonic_matrix(i: Letter) -> Mat3 {
    to_f64(&harmonic_matrix_exact(i))
}

/// `A_i^{-1}` in floating point, rounded once from the exact inverse.
pub fn harmonic_inverse(i: Letter) -> Mat3 {
    static INVERSES: std::sync::OnceLock<[Mat3; 3]> = std::sync::OnceLock::new();
    INVERSES.get_or_init(|| Letter::ALL.map(|l| to_f64(&harmonic_inverse_exact(l))))[i.index()]
}

/// `A_w b` with `A_w = A_{w_m} ⋯ A_{w_1}`: the corner values of the
/// harmonic function with boundary values `b` on the cell `F_w(SG)`.
pub fn extend_harmonic(b: CellTriple, w: &Word) -> CellTriple {
    CellTriple(
        w.letters()
            .iter()
            .fold(b.0, |v, &l| harmonic_matrix(l).apply(&v)),
    )
}

/// Exact version of [`extend_harmonic`] for words up to [`EXACT_WORD_CAP`].
pub fn extend_harmonic_exact(b: [Rational; 3], w: &Word) -> Result<[Rational; 3]> {
    if w.len() > EXACT_WORD_CAP {
        return Err(SgError::LevelCap {
            requested: w.len(),
            cap: EXACT_WORD_CAP,
            what: "exact harmonic extension",
        });
    }
    Ok(w.letters().iter().fold(b, |v, &l| {
        let a = harmonic_matrix_exact(l);
        [0, 1, 2].map(|row| a[row][0] * v[0] + a[row][1] * v[1] + a[row][2] * v[2])
    }))
}

/// Harmonic extension of boundary values to all of `V_m`.
pub fn harmonic_on_level(b: CellTriple, m: usize) -> Result<LevelValues> {
    let graph = LevelGraph::shared(m)?;
    let mut values = vec![0.0; graph.len()];
    for (c, cell) in graph.cells().iter().enumerate() {
        let t = extend_harmonic(b, &Word::from_cell_index(c, m));
        for j in 0..3 {
            values[cell[j]] = t.0[j];
        }
    }
    Ok(LevelValues::new(m, values))
}

/// `(Δ_m u)(x) = Σ_{y ~ x} (u(y) − u(x))` at interior vertices; boundary
/// entries are `None`.
pub fn graph_laplacian_apply(graph: &LevelGraph, vals: &LevelValues) -> Result<Vec<Option<f64>>> {
    vals.check(graph)?;
    let u = &vals.values;
    Ok((0..graph.len())
        .map(|x| {
            graph.is_interior(x).then(|| {
                graph.neighbors(x).iter().map(|&y| u[y] - u[x]).sum()
            })
        })
        .collect())
}

/// `max_x |(Δ_m + λ_m) u(x)|` over interior vertices.
pub fn eigen_residual(graph: &LevelGraph, vals: &LevelValues, lambda_m: f64) -> Result<f64> {
    let lap = graph_laplacian_apply(graph, vals)?;
    Ok(lap
        .iter()
        .enumerate()
        .filter_map(|(x, d)| d.map(|d| (d + lambda_m * vals.values[x]).abs()))
        .fold(0.0, f64::max))
}

/// Anything that can be evaluated at the points `F_w(q_i)` of `V_*`.
pub trait PointEvaluator {
    fn eval(&self, w: &Word, i: Letter) -> Result<f64>;
}

/// The harmonic function with given boundary values.
#[derive(Debug, Clone, Copy)]
pub struct HarmonicFunction(pub CellTriple);

impl PointEvaluator for HarmonicFunction {
    fn eval(&self, w: &Word, i: Letter) -> Result<f64> {
        Ok(extend_harmonic(self.0, w).0[i.index()])
    }
}

impl<F: Fn(&Word, Letter) -> Result<f64>> PointEvaluator for F {
    fn eval(&self, w: &Word, i: Letter) -> Result<f64> {
        self(w, i)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalDerivativeEstimate {
    pub value: f64,
    /// Difference from the level `M − 1` estimate.
    pub error: f64,
    /// False when the last differences stopped shrinking.
    pub converged: bool,
}

/// `(5/3)^M (2 f(q_i) − f(F_i^M q_{i+1}) − f(F_i^M q_{i+2}))`.
pub fn normal_derivative_limit(
    f: &dyn PointEvaluator,
    i: Letter,
    depth: usize,
) -> Result<NormalDerivativeEstimate> {
    if depth < 2 {
        return Err(SgError::Domain(format!("normal derivative depth {depth} < 2")));
    }
    let at_vertex = f.eval(&Word::empty(), i)?;
    let estimate = |m: usize| -> Result<f64> {
        let word = Word::from_letters(vec![i; m]);
        let a = f.eval(&word, i.shifted(1))?;
        let b = f.eval(&word, i.shifted(2))?;
        Ok((5f64 / 3.0).powi(m as i32) * (2.0 * at_vertex - a - b))
    };
    let e2 = estimate(depth - 2)?;
    let e1 = estimate(depth - 1)?;
    let e0 = estimate(depth)?;
    let error = (e0 - e1).abs();
    let previous = (e1 - e2).abs();
    // rounding in the difference is amplified by (5/3)^M
    let noise = 64.0 * f64::EPSILON * (5f64 / 3.0).powi(depth as i32) * at_vertex.abs().max(1.0);
    Ok(NormalDerivativeEstimate {
        value: e0,
        error,
        converged: error <= previous.max(noise),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn displayed_matrices() {
        let a0 = harmonic_matrix(Letter::ALL[0]);
        let expected = Mat3([[1.0, 0.0, 0.0], [0.4, 0.4, 0.2], [0.4, 0.2, 0.4]]);
        assert!(a0.max_abs_diff(&expected) < 1e-16);
        let a1 = harmonic_matrix(Letter::ALL[1]);
        let expected = Mat3([[0.4, 0.4, 0.2], [0.0, 1.0, 0.0], [0.2, 0.4, 0.4]]);
        assert!(a1.max_abs_diff(&expected) < 1e-16);
        for l in Letter::ALL {
            let s = harmonic_matrix(l).row_sums();
            assert!(s.iter().all(|x| (x - 1.0).abs() < 1e-15));
        }
    }

    #[test]
    fn exact_inverse() {
        let inv = harmonic_inverse_exact(Letter::ALL[0]);
        assert_eq!(inv[0], [r(1, 1), r(0, 1), r(0, 1)]);
        assert_eq!(inv[1], [r(-2, 3), r(10, 3), r(-5, 3)]);
        assert_eq!(inv[2], [r(-2, 3), r(-5, 3), r(10, 3)]);
        for l in Letter::ALL {
            let prod = harmonic_inverse(l) * harmonic_matrix(l);
            assert!(prod.max_abs_diff(&Mat3::IDENTITY) < 1e-15);
        }
    }

    #[test]
    fn extension_examples() {
        let b = CellTriple::new(0.3, -1.0, 2.0);
        assert_eq!(extend_harmonic(b, &Word::empty()), b);
        let ones = extend_harmonic(CellTriple::new(1.0, 1.0, 1.0), &w("0120210"));
        assert!(ones.0.iter().all(|x| (x - 1.0).abs() < 1e-14));
        let e = extend_harmonic_exact([r(1, 1), r(0, 1), r(0, 1)], &w("0")).unwrap();
        assert_eq!(e, [r(1, 1), r(2, 5), r(2, 5)]);
    }

    #[test]
    fn composition_order() {
        // A_w = A_{w_m} ⋯ A_{w_1}: "01" means apply A_0 first
        let b = CellTriple::new(1.0, 0.0, 0.0);
        let via = harmonic_matrix(Letter::ALL[1]) * (harmonic_matrix(Letter::ALL[0]) * b.0);
        let got = extend_harmonic(b, &w("01"));
        assert!(crate::linalg::max_abs_diff(&via, &got.0) < 1e-16);
    }

    #[test]
    fn harmonic_is_graph_harmonic() {
        for m in 1..=5 {
            let vals = harmonic_on_level(CellTriple::new(0.7, -1.3, 2.5), m).unwrap();
            let g = LevelGraph::shared(m).unwrap();
            assert!(eigen_residual(&g, &vals, 0.0).unwrap() < 1e-12);
        }
    }

    #[test]
    fn level_one_two_series_values() {
        let g = LevelGraph::shared(1).unwrap();
        let vals = LevelValues::new(1, vec![0.0, 0.0, 0.0, 1.0, 1.0, 1.0]);
        let lap = graph_laplacian_apply(&g, &vals).unwrap();
        assert_eq!(&lap[..3], &[None, None, None]);
        for x in 3..6 {
            assert_eq!(lap[x], Some(-2.0));
        }
    }

    #[test]
    fn laplacian_level_mismatch() {
        let g = LevelGraph::shared(2).unwrap();
        let vals = LevelValues::new(1, vec![0.0; 6]);
        assert!(matches!(
            graph_laplacian_apply(&g, &vals),
            Err(SgError::LevelMismatch { .. })
        ));
    }

    #[test]
    fn harmonic_normal_derivative_is_exact() {
        // (5/3)^M (3/5)^M (2a − b − c) at every depth
        let h = HarmonicFunction(CellTriple::new(1.0, 0.0, 0.0));
        for depth in [2, 5, 20] {
            let nd = normal_derivative_limit(&h, Letter::ALL[0], depth).unwrap();
            assert!((nd.value - 2.0).abs() < 1e-10, "{nd:?}");
            assert!(nd.converged);
        }
        let c = HarmonicFunction(CellTriple::new(3.0, 3.0, 3.0));
        let nd = normal_derivative_limit(&c, Letter::ALL[2], 10).unwrap();
        assert!(nd.value.abs() < 1e-10);
        assert!(normal_derivative_limit(&c, Letter::ALL[2], 1).is_err());
    }
}
