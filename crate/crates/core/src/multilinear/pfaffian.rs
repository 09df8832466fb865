use nalgebra::SMatrix;

use super::Cplx;
use crate::{Error, Result};

pub type Mat6 = SMatrix<Cplx, 6, 6>;

/// Pfaffian of a 6×6 antisymmetric matrix as the signed sum over the 15
/// perfect matchings of six points. Inputs with `‖ω + ωᵀ‖ > tol · max|ω|`
/// are rejected.
pub fn pfaffian6(omega: &Mat6, tol: f64) -> Result<Cplx> {
    let scale = omega.iter().map(|x| x.norm()).fold(0.0, f64::max);
    let residual = (omega + omega.transpose()).iter().map(|x| x.norm()).fold(0.0, f64::max);
    if residual > tol * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::NotAntisymmetric { residual });
    }
    Ok(matchings(omega, &[0, 1, 2, 3, 4, 5]))
}

// Expansion along the first remaining index: Pf = Σ_j (-1)^{j-1} ω_{0j} Pf(ω without 0, j).
fn matchings(omega: &Mat6, idx: &[usize]) -> Cplx {
    if idx.is_empty() {
        return Cplx::new(1.0, 0.0);
    }
    let first = idx[0];
    let mut total = Cplx::new(0.0, 0.0);
    for k in 1..idx.len() {
        let rest: Vec<usize> = idx[1..].iter().copied().filter(|&m| m != idx[k]).collect();
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        total += omega[(first, idx[k])] * sign * matchings(omega, &rest);
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multilinear::c64;

    #[test]
    fn zero_and_standard_symplectic() {
        assert_eq!(pfaffian6(&Mat6::zeros(), 1e-9).unwrap(), c64(0.0, 0.0));
        // ω = [[0, I], [-I, 0]]
        let mut w = Mat6::zeros();
        for i in 0..3 {
            w[(i, i + 3)] = c64(1.0, 0.0);
            w[(i + 3, i)] = c64(-1.0, 0.0);
        }
        assert_eq!(pfaffian6(&w, 1e-9).unwrap(), c64(-1.0, 0.0));
    }

    #[test]
    fn block_diagonal_pairs() {
        let mut w = Mat6::zeros();
        for (k, v) in [(0, 2.0), (2, 3.0), (4, 5.0)] {
            w[(k, k + 1)] = c64(v, 0.0);
            w[(k + 1, k)] = c64(-v, 0.0);
        }
        assert_eq!(pfaffian6(&w, 1e-9).unwrap(), c64(30.0, 0.0));
    }

    #[test]
    fn rejects_symmetric_input() {
        assert!(pfaffian6(&Mat6::identity(), 1e-9).is_err());
    }
}
