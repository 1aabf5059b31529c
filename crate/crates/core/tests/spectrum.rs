use std::time::Instant;

use sg_core::address::{vertex_count, LevelGraph};
use sg_core::decimation::seeds::basis_size;
use sg_core::decimation::{dirichlet_basis, dirichlet_eigenvalues, enumerate_dirichlet, DirichletSeed};
use sg_core::harmonic::eigen_residual;
use sg_core::oracle::{dense_dirichlet_spectrum, multiset_gap, shared_dense_spectrum};

#[test]
fn level_one_is_two_five_five() {
    let start = Instant::now();
    let dense = dense_dirichlet_spectrum(1).unwrap();
    let decimated = dirichlet_eigenvalues(1).unwrap();
    assert_eq!(decimated, vec![2.0, 5.0, 5.0]);
    assert!(multiset_gap(&dense.eigenvalues, &decimated).unwrap() < 1e-12);
    assert!(start.elapsed().as_secs_f64() < 1.0);
}

#[test]
fn decimation_matches_dense_spectrum() {
    for m in 1..=4 {
        let dense = shared_dense_spectrum(m).unwrap();
        let decimated = dirichlet_eigenvalues(m).unwrap();
        assert_eq!(decimated.len(), vertex_count(m) - 3);
        let gap = multiset_gap(&dense.eigenvalues, &decimated).unwrap();
        assert!(gap < 1e-9, "m={m}: worst gap {gap:e}");
        assert!(dense.max_residual() < 1e-9);
    }
}

#[test]
fn multiplicities_follow_the_series() {
    let dense = shared_dense_spectrum(4).unwrap();
    for entry in enumerate_dirichlet(4).unwrap() {
        let count = dense.multiplicity_of(entry.lambda_m, 1e-8);
        let expected: usize = enumerate_dirichlet(4)
            .unwrap()
            .iter()
            .filter(|e| (e.lambda_m - entry.lambda_m).abs() < 1e-8)
            .map(|e| e.multiplicity)
            .sum();
        assert_eq!(count, expected, "λ_4 = {}", entry.lambda_m);
    }
    assert_eq!(basis_size(sg_core::decimation::Series::Five, 3).unwrap(), 6);
    assert_eq!(basis_size(sg_core::decimation::Series::Six, 3).unwrap(), 12);
}

/// Every basis function of every family, extended to level `m`, is a dense
/// eigenvector with the predicted eigenvalue.
#[test]
fn extended_basis_functions_are_dense_eigenvectors() {
    for m in 1..=6 {
        let dense = shared_dense_spectrum(m).unwrap();
        for entry in enumerate_dirichlet(m).unwrap() {
            for index in 1..=entry.multiplicity {
                let seed = DirichletSeed::new(entry.series, entry.m0, index).unwrap();
                let u = dirichlet_basis(seed, &entry.branches).unwrap();
                assert_eq!(u.seq().lambda(m), entry.lambda_m);
                let v = dense.restrict(&u.on_level(m).unwrap()).unwrap();
                let scale = v.iter().fold(0.0f64, |a, x| a.max(x.abs()));
                let residual = dense.residual(&v, entry.lambda_m);
                assert!(residual < 1e-9 * scale.max(1.0), "m={m} {seed:?}: residual {residual:e}");
                let distance = dense.eigenspace_distance(&v, entry.lambda_m, 1e-8);
                assert!(distance < 1e-9, "m={m} {seed:?}: distance {distance:e}");
            }
        }
    }
}

#[test]
fn residuals_stay_small_through_level_eight() {
    let graph = LevelGraph::shared(8).unwrap();
    for entry in enumerate_dirichlet(3).unwrap() {
        for index in 1..=entry.multiplicity {
            let seed = DirichletSeed::new(entry.series, entry.m0, index).unwrap();
            let u = dirichlet_basis(seed, &entry.branches).unwrap();
            let start = Instant::now();
            let values = u.on_level(8).unwrap();
            let residual = eigen_residual(&graph, &values, u.seq().lambda(8)).unwrap();
            assert!(residual < 1e-9, "{seed:?} {}: {residual:e}", entry.branch_string());
            assert!(start.elapsed().as_secs_f64() < 10.0);
        }
    }
}

#[test]
fn level_six_dense_solve() {
    let start = Instant::now();
    let dense = shared_dense_spectrum(6).unwrap();
    assert_eq!(dense.eigenvalues.len(), vertex_count(6) - 3);
    let decimated = dirichlet_eigenvalues(6).unwrap();
    let gap = multiset_gap(&dense.eigenvalues, &decimated).unwrap();
    assert!(gap < 1e-9, "worst gap {gap:e}");
    eprintln!("level-6 dense solve and comparison: {:?}", start.elapsed());
}
