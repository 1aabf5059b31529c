use crate::decimation::seeds::{basis_size, Series};
use crate::decimation::{Branch, EigenvalueSequence};
use crate::error::Result;

/// One eigenvalue of the level-`m` Dirichlet problem, with the family it
/// descends from.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumEntry {
    pub series: Series,
    pub m0: usize,
    /// Roots chosen at levels `m0 + 1 ..= m`.
    pub branches: Vec<Branch>,
    pub lambda_m: f64,
    /// `λ` for the continuation that takes minus roots above level `m`
    /// (plus at `m0 + 1` for a 6-series born at `m`).
    pub limit: f64,
    pub multiplicity: usize,
}

impl SpectrumEntry {
    pub fn branch_string(&self) -> String {
        self.branches.iter().map(|b| b.symbol()).collect()
    }
}

fn patterns(len: usize) -> impl Iterator<Item = Vec<Branch>> {
    (0..1usize << len).map(move |bits| {
        (0..len)
            .map(|j| {
                if bits >> (len - 1 - j) & 1 == 1 {
                    Branch::Plus
                } else {
                    Branch::Minus
                }
            })
            .collect()
    })
}

/// All Dirichlet eigenvalues of `-Δ_m` as produced by the 2-, 5- and
/// 6-series, ordered by series, birth level and branch pattern (minus first).
pub fn enumerate_dirichlet(m: usize) -> Result<Vec<SpectrumEntry>> {
    let mut families: Vec<(Series, usize)> = Vec::new();
    if m >= 1 {
        families.push((Series::Two, 1));
    }
    families.extend((1..=m).map(|m0| (Series::Five, m0)));
    families.extend((2..=m).map(|m0| (Series::Six, m0)));

    let mut out = Vec::new();
    for (series, m0) in families {
        let multiplicity = basis_size(series, m0)?;
        let forced = usize::from(series == Series::Six);
        let free = (m - m0).saturating_sub(forced);
        for tail in patterns(free) {
            let mut branches = vec![Branch::Plus; forced.min(m - m0)];
            branches.extend(tail);
            let mut plus: Vec<usize> = branches
                .iter()
                .enumerate()
                .filter(|(_, b)| **b == Branch::Plus)
                .map(|(j, _)| m0 + j + 1)
                .collect();
            if series == Series::Six && m == m0 {
                plus.push(m0 + 1);
            }
            let seq = EigenvalueSequence::new(m0, series.lambda_m0(), plus)?;
            out.push(SpectrumEntry {
                series,
                m0,
                lambda_m: seq.lambda(m),
                limit: seq.limit(),
                branches,
                multiplicity,
            });
        }
    }
    Ok(out)
}

/// The entries expanded by multiplicity and sorted ascending.
pub fn dirichlet_eigenvalues(m: usize) -> Result<Vec<f64>> {
    let mut all: Vec<f64> = enumerate_dirichlet(m)?
        .iter()
        .flat_map(|e| std::iter::repeat(e.lambda_m).take(e.multiplicity))
        .collect();
    all.sort_by(f64::total_cmp);
    Ok(all)
}
