//! Seed specs: `series:m0:index[:branches]` for a Dirichlet basis function
//! (`two`, `five`, `six`, or `sixpiece`, index 1-based, branches a string of
//! `+`/`-` for levels `m0+1, m0+2, …`), or `free:λ:u0,u1,u2` for the
//! non-Dirichlet eigenfunction with eigenvalue `λ` and boundary values `u`.

use std::fmt;
use std::str::FromStr;

use sg_core::decimation::{dirichlet_basis, Branch, DirichletSeed, Series, SpectralEigenfunction};
use sg_core::harmonic::CellTriple;
use sg_core::Result;

#[derive(Debug, Clone, PartialEq)]
pub enum SeedSpec {
    Dirichlet { seed: DirichletSeed, branches: Vec<Branch> },
    Free { lambda: f64, boundary: [f64; 3] },
}

impl SeedSpec {
    pub fn build(&self) -> Result<SpectralEigenfunction> {
        match self {
            SeedSpec::Dirichlet { seed, branches } => dirichlet_basis(*seed, branches),
            SeedSpec::Free { lambda, boundary } => SpectralEigenfunction::free(*lambda, CellTriple(*boundary)),
        }
    }
}

fn number(s: &str, what: &str) -> std::result::Result<f64, String> {
    let x: f64 = s.trim().parse().map_err(|_| format!("{what} {s:?} is not a number"))?;
    if x.is_finite() {
        Ok(x)
    } else {
        Err(format!("{what} must be finite"))
    }
}

impl FromStr for SeedSpec {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            ["free", lambda, values] => {
                let lambda = number(lambda, "λ")?;
                let values = values
                    .split(',')
                    .map(|v| number(v, "boundary value"))
                    .collect::<std::result::Result<Vec<_>, _>>()?;
                let boundary: [f64; 3] = values
                    .try_into()
                    .map_err(|_| "free seeds need three boundary values".to_string())?;
                Ok(SeedSpec::Free { lambda, boundary })
            }
            [series, m0, index, rest @ ..] if rest.len() <= 1 => {
                let series: Series = series.parse().map_err(|e: sg_core::SgError| e.to_string())?;
                let m0: usize = m0.parse().map_err(|_| format!("m0 {m0:?} is not a level"))?;
                let index: usize = index.parse().map_err(|_| format!("index {index:?} is not a positive integer"))?;
                let seed = DirichletSeed::new(series, m0, index).map_err(|e| e.to_string())?;
                let branches = rest
                    .first()
                    .map_or(Ok(Vec::new()), |b| b.chars().map(Branch::from_symbol).collect())
                    .map_err(|e| e.to_string())?;
                Ok(SeedSpec::Dirichlet { seed, branches })
            }
            _ => Err(format!("seed {s:?} is neither series:m0:index[:branches] nor free:λ:u0,u1,u2")),
        }
    }
}

impl fmt::Display for SeedSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeedSpec::Dirichlet { seed, branches } => {
                write!(f, "{}:{}:{}", seed.series, seed.m0, seed.index)?;
                if !branches.is_empty() {
                    let b: String = branches.iter().map(|b| b.symbol()).collect();
                    write!(f, ":{b}")?;
                }
                Ok(())
            }
            SeedSpec::Free { lambda, boundary } => {
                write!(f, "free:{lambda:?}:{:?},{:?},{:?}", boundary[0], boundary[1], boundary[2])
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_both_forms() {
        let s: SeedSpec = "five:2:3:+-".parse().unwrap();
        assert_eq!(s.to_string(), "five:2:3:+-");
        let SeedSpec::Dirichlet { seed, branches } = &s else { panic!() };
        assert_eq!((seed.series, seed.m0, seed.index), (Series::Five, 2, 3));
        assert_eq!(branches, &[Branch::Plus, Branch::Minus]);

        let f: SeedSpec = "free:3.5:1,0,-2".parse().unwrap();
        assert_eq!(f, SeedSpec::Free { lambda: 3.5, boundary: [1.0, 0.0, -2.0] });
        assert_eq!(f.to_string().parse::<SeedSpec>().unwrap(), f);
        assert_eq!("two:1:1".parse::<SeedSpec>().unwrap().to_string(), "two:1:1");
    }

    #[test]
    fn rejects_malformed() {
        for bad in ["", "two", "two:1", "two:1:2", "five:1:0", "seven:1:1", "two:1:1:x", "free:1:1,2", "free:nan:1,1,1", "two:1:1:+:+"] {
            assert!(bad.parse::<SeedSpec>().is_err(), "{bad}");
        }
    }

    #[test]
    fn builds() {
        let u = "sixpiece:1:1".parse::<SeedSpec>().unwrap().build().unwrap();
        assert_eq!(u.seq().lambda(2), 3.0);
        let h = "free:0:1,1,1".parse::<SeedSpec>().unwrap().build().unwrap();
        assert_eq!(h.lambda(), 0.0);
    }
}
