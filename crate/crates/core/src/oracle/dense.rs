use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::address::LevelGraph;
use crate::error::{Result, SgError};
use crate::harmonic::LevelValues;

/// Largest level accepted by the dense solver (`1092 × 1092` at `m = 6`).
pub const DENSE_LEVEL_CAP: usize = 6;

const MAX_SWEEPS: usize = 50;

/// Full eigendecomposition of `-Δ_m` restricted to interior vertices.
#[derive(Debug, Clone)]
pub struct DenseSpectrum {
    pub level: usize,
    /// Graph indices of the interior vertices, in the order used by the
    /// eigenvectors.
    pub interior: Vec<usize>,
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Unit eigenvectors, one per eigenvalue.
    pub eigenvectors: Vec<Vec<f64>>,
    matrix: Vec<Vec<f64>>,
}

/// Cyclic Jacobi rotations on a dense symmetric matrix. Returns eigenvalues
/// and the matrix of eigenvectors (as columns).
///
/// Threshold variant: early sweeps skip small entries, later sweeps zero any
/// off-diagonal entry that no longer changes the diagonal in floating point,
/// so the iteration ends with an exactly diagonal matrix instead of stalling
/// at the rounding floor.
pub fn jacobi_eigen(a: Vec<Vec<f64>>) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let n = a.len();
    let mut m: Vec<f64> = a.into_iter().flatten().collect();
    if m.len() != n * n {
        return Err(SgError::Invalid("matrix is not square".into()));
    }
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let mut d: Vec<f64> = (0..n).map(|i| m[i * n + i]).collect();
    let mut b = d.clone();
    let mut z = vec![0.0; n];

    // rotates the pair (x, y) = (m[i], m[k])
    let rotate = |m: &mut [f64], i: usize, k: usize, s: f64, tau: f64| {
        let (g, h) = (m[i], m[k]);
        m[i] = g - s * (h + g * tau);
        m[k] = h + s * (g - h * tau);
    };

    for sweep in 1..=MAX_SWEEPS {
        let off: f64 = (0..n).flat_map(|p| (p + 1..n).map(move |q| (p, q))).map(|(p, q)| m[p * n + q].abs()).sum();
        if off == 0.0 {
            let vectors = (0..n).map(|i| v[i * n..(i + 1) * n].to_vec()).collect();
            return Ok((d, vectors));
        }
        let threshold = if sweep < 4 { 0.2 * off / (n * n) as f64 } else { 0.0 };
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[p * n + q];
                let g = 100.0 * apq.abs();
                if sweep > 4 && d[p].abs() + g == d[p].abs() && d[q].abs() + g == d[q].abs() {
                    m[p * n + q] = 0.0;
                    continue;
                }
                if apq.abs() <= threshold {
                    continue;
                }
                let h = d[q] - d[p];
                let t = if h.abs() + g == h.abs() {
                    apq / h
                } else {
                    let theta = 0.5 * h / apq;
                    let t = 1.0 / (theta.abs() + (1.0 + theta * theta).sqrt());
                    if theta < 0.0 {
                        -t
                    } else {
                        t
                    }
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let tau = s / (1.0 + c);
                let h = t * apq;
                z[p] -= h;
                z[q] += h;
                d[p] -= h;
                d[q] += h;
                m[p * n + q] = 0.0;
                for j in 0..p {
                    rotate(&mut m, j * n + p, j * n + q, s, tau);
                }
                for j in p + 1..q {
                    rotate(&mut m, p * n + j, j * n + q, s, tau);
                }
                for j in q + 1..n {
                    rotate(&mut m, p * n + j, q * n + j, s, tau);
                }
                for j in 0..n {
                    rotate(&mut v, j * n + p, j * n + q, s, tau);
                }
            }
        }
        for p in 0..n {
            b[p] += z[p];
            d[p] = b[p];
            z[p] = 0.0;
        }
    }
    Err(SgError::NonConvergence {
        iterations: MAX_SWEEPS,
        what: "Jacobi sweeps",
    })
}

/// Householder reduction to tridiagonal form followed by implicit QL with
/// shifts. Returns eigenvalues (unsorted) and one eigenvector per value.
///
/// This is the production path for the level matrices; at `m = 6` the
/// matrix is `1092 × 1092`, where Jacobi sweeps take minutes.
pub fn symmetric_eigen(a: Vec<Vec<f64>>) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let n = a.len();
    let mut z: Vec<f64> = a.into_iter().flatten().collect();
    if z.len() != n * n {
        return Err(SgError::Invalid("matrix is not square".into()));
    }
    if n == 0 {
        return Ok((Vec::new(), Vec::new()));
    }
    let (mut d, mut e) = tridiagonalize(&mut z, n);
    // rows of `q` are the columns of the accumulated transform
    let mut q = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            q[j * n + i] = z[i * n + j];
        }
    }
    implicit_ql(&mut d, &mut e, &mut q, n)?;
    Ok((d, q.chunks(n).map(<[f64]>::to_vec).collect()))
}

/// In place on the row-major `z`; leaves the orthogonal transform in `z`.
fn tridiagonalize(z: &mut [f64], n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    for i in (1..n).rev() {
        let l = i - 1;
        let mut h = 0.0;
        if l > 0 {
            let scale: f64 = (0..i).map(|k| z[i * n + k].abs()).sum();
            if scale == 0.0 {
                e[i] = z[i * n + l];
            } else {
                for k in 0..i {
                    z[i * n + k] /= scale;
                    h += z[i * n + k] * z[i * n + k];
                }
                let f = z[i * n + l];
                let g = if f >= 0.0 { -h.sqrt() } else { h.sqrt() };
                e[i] = scale * g;
                h -= f * g;
                z[i * n + l] = f - g;
                let mut f = 0.0;
                for j in 0..i {
                    z[j * n + i] = z[i * n + j] / h;
                    let mut g = 0.0;
                    for k in 0..=j {
                        g += z[j * n + k] * z[i * n + k];
                    }
                    for k in j + 1..i {
                        g += z[k * n + j] * z[i * n + k];
                    }
                    e[j] = g / h;
                    f += e[j] * z[i * n + j];
                }
                let hh = f / (h + h);
                for j in 0..i {
                    let f = z[i * n + j];
                    let g = e[j] - hh * f;
                    e[j] = g;
                    for k in 0..=j {
                        z[j * n + k] -= f * e[k] + g * z[i * n + k];
                    }
                }
            }
        } else {
            e[i] = z[i * n + l];
        }
        d[i] = h;
    }
    d[0] = 0.0;
    e[0] = 0.0;
    for i in 0..n {
        if d[i] != 0.0 {
            for j in 0..i {
                let g: f64 = (0..i).map(|k| z[i * n + k] * z[k * n + j]).sum();
                for k in 0..i {
                    z[k * n + j] -= g * z[k * n + i];
                }
            }
        }
        d[i] = z[i * n + i];
        z[i * n + i] = 1.0;
        for j in 0..i {
            z[j * n + i] = 0.0;
            z[i * n + j] = 0.0;
        }
    }
    (d, e)
}

/// Eigenvalues of the tridiagonal `(d, e)` into `d`, rotating the rows of `q`.
fn implicit_ql(d: &mut [f64], e: &mut [f64], q: &mut [f64], n: usize) -> Result<()> {
    const MAX_ITER: usize = 60;
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > MAX_ITER {
                return Err(SgError::NonConvergence {
                    iterations: MAX_ITER,
                    what: "implicit QL",
                });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut early = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    early = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                let (head, tail) = q.split_at_mut((i + 1) * n);
                let row_i = &mut head[i * n..];
                let row_next = &mut tail[..n];
                for (zi, zn) in row_i.iter_mut().zip(row_next.iter_mut()) {
                    let f = *zn;
                    *zn = s * *zi + c * f;
                    *zi = c * *zi - s * f;
                }
            }
            if early {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

/// Dense Dirichlet spectrum of `-Δ_m` for `m <= 6`.
pub fn dense_dirichlet_spectrum(m: usize) -> Result<DenseSpectrum> {
    if m > DENSE_LEVEL_CAP {
        return Err(SgError::LevelCap {
            requested: m,
            cap: DENSE_LEVEL_CAP,
            what: "dense eigensolver",
        });
    }
    let graph = LevelGraph::shared(m)?;
    let interior: Vec<usize> = graph.interior().collect();
    let n = interior.len();
    let pos: HashMap<usize, usize> = interior.iter().enumerate().map(|(k, &g)| (g, k)).collect();
    let mut matrix = vec![vec![0.0; n]; n];
    for (k, &x) in interior.iter().enumerate() {
        matrix[k][k] = graph.neighbors(x).len() as f64;
        for y in graph.neighbors(x) {
            if let Some(&l) = pos.get(y) {
                matrix[k][l] -= 1.0;
            }
        }
    }
    let (values, vecs) = symmetric_eigen(matrix.clone())?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    Ok(DenseSpectrum {
        level: m,
        eigenvalues: order.iter().map(|&j| values[j]).collect(),
        eigenvectors: order.iter().map(|&j| vecs[j].clone()).collect(),
        interior,
        matrix,
    })
}

/// Process-wide cached [`dense_dirichlet_spectrum`].
pub fn shared_dense_spectrum(m: usize) -> Result<Arc<DenseSpectrum>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<DenseSpectrum>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(s) = cache.lock().unwrap().get(&m) {
        return Ok(s.clone());
    }
    let s = Arc::new(dense_dirichlet_spectrum(m)?);
    Ok(cache.lock().unwrap().entry(m).or_insert(s).clone())
}

/// Worst gap between two multisets paired after sorting; `None` when the
/// sizes differ.
pub fn multiset_gap(a: &[f64], b: &[f64]) -> Option<f64> {
    if a.len() != b.len() {
        return None;
    }
    let sorted = |v: &[f64]| {
        let mut v = v.to_vec();
        v.sort_by(f64::total_cmp);
        v
    };
    Some(
        sorted(a)
            .iter()
            .zip(sorted(b))
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max),
    )
}

impl DenseSpectrum {
    /// `(λ, multiplicity)` with eigenvalues closer than `tol` merged.
    pub fn clusters(&self, tol: f64) -> Vec<(f64, usize)> {
        let mut out: Vec<(f64, usize)> = Vec::new();
        for &v in &self.eigenvalues {
            match out.last_mut() {
                Some((first, count)) if (v - *first).abs() < tol => *count += 1,
                _ => out.push((v, 1)),
            }
        }
        out
    }

    pub fn eigenspace(&self, lambda: f64, tol: f64) -> Vec<&[f64]> {
        self.eigenvalues
            .iter()
            .zip(&self.eigenvectors)
            .filter(|(v, _)| (**v - lambda).abs() < tol)
            .map(|(_, e)| e.as_slice())
            .collect()
    }

    pub fn multiplicity_of(&self, lambda: f64, tol: f64) -> usize {
        self.eigenspace(lambda, tol).len()
    }

    /// `‖(-Δ_m − λ) v‖_∞` for a vector on the interior.
    pub fn residual(&self, v: &[f64], lambda: f64) -> f64 {
        self.matrix
            .iter()
            .zip(v)
            .map(|(row, vi)| {
                let av: f64 = row.iter().zip(v).map(|(a, x)| a * x).sum();
                (av - lambda * vi).abs()
            })
            .fold(0.0, f64::max)
    }

    /// Largest residual over all computed eigenpairs.
    pub fn max_residual(&self) -> f64 {
        self.eigenvalues
            .iter()
            .zip(&self.eigenvectors)
            .map(|(l, v)| self.residual(v, *l))
            .fold(0.0, f64::max)
    }

    /// Relative distance of `v` from the eigenspace of `lambda`:
    /// `‖v − P v‖ / ‖v‖` with `P` the orthogonal projection.
    pub fn eigenspace_distance(&self, v: &[f64], lambda: f64, tol: f64) -> f64 {
        let norm: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            return 0.0;
        }
        let mut rest = v.to_vec();
        for e in self.eigenspace(lambda, tol) {
            let c: f64 = e.iter().zip(v).map(|(a, b)| a * b).sum();
            for (r, x) in rest.iter_mut().zip(e) {
                *r -= c * x;
            }
        }
        rest.iter().map(|x| x * x).sum::<f64>().sqrt() / norm
    }

    /// Restriction of level values to the interior, in eigenvector order.
    pub fn restrict(&self, vals: &LevelValues) -> Result<Vec<f64>> {
        if vals.level != self.level {
            return Err(SgError::LevelMismatch {
                expected: self.level,
                actual: vals.level,
            });
        }
        Ok(self.interior.iter().map(|&g| vals.values[g]).collect())
    }

    /// Extends an interior vector by zero boundary values.
    pub fn to_level_values(&self, v: &[f64]) -> LevelValues {
        let mut values = vec![0.0; self.interior.len() + 3];
        for (&g, x) in self.interior.iter().zip(v) {
            values[g] = *x;
        }
        LevelValues::new(self.level, values)
    }
}
