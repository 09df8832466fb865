//! Dense complex linear algebra helpers (singular values, rank, spectra).

use nalgebra::DMatrix;

use crate::multilinear::Cplx;

/// Singular values in descending order.
pub fn singular_values(m: &DMatrix<Cplx>) -> Vec<f64> {
    if m.is_empty() {
        return Vec::new();
    }
    let mut s: Vec<f64> = m.clone().singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Numerical rank: count of `σ_k > max(rel · σ_max, abs_floor)`.
pub fn numerical_rank(sigma: &[f64], rel: f64, abs_floor: f64) -> usize {
    let smax = sigma.first().copied().unwrap_or(0.0);
    let cut = (rel * smax).max(abs_floor);
    sigma.iter().filter(|&&s| s > cut).count()
}

/// Eigenvalues of a general complex square matrix (complex Schur form).
pub fn eigenvalues(m: &DMatrix<Cplx>) -> Vec<Cplx> {
    let schur = nalgebra::linalg::Schur::new(m.clone());
    let (_, t) = schur.unpack();
    (0..t.nrows()).map(|i| t[(i, i)]).collect()
}

pub fn max_abs(m: &DMatrix<Cplx>) -> f64 {
    m.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

pub fn max_diff(a: &DMatrix<Cplx>, b: &DMatrix<Cplx>) -> f64 {
    max_abs(&(a - b))
}

/// Greedy nearest-neighbour matching of two multisets of complex numbers;
/// returns the largest distance between matched pairs.
pub fn multiset_distance(found: &[Cplx], expected: &[Cplx]) -> f64 {
    if found.len() != expected.len() {
        return f64::INFINITY;
    }
    let mut pool: Vec<Cplx> = found.to_vec();
    let mut worst: f64 = 0.0;
    for e in expected {
        let (k, d) = pool
            .iter()
            .enumerate()
            .map(|(k, f)| (k, (f - e).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("non-empty pool");
        worst = worst.max(d);
        pool.swap_remove(k);
    }
    worst
}
