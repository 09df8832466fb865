//! Three fermions on seven modes: covariants `M`, `N`, `L`, the septic
//! invariant `J`, its closed CC forms, the Pfaffian factorization and the
//! rank-of-`N` classification.

mod classify;
mod closed_form;
mod omega;

pub use classify::{classify7, canonical7, SevenClass, SevenClassReport};
pub use closed_form::{closed_form_nl, invariant_j_alt, invariant_j_cc, invariant_j_cc_unregularized};
pub use omega::{compatible, factorization_check, omega_action_norm, omega_matrix, FactorizationReport};

use nalgebra::DMatrix;

use crate::multilinear::{combinations, levi_civita, AntisymTensor, Cplx};
use crate::{Error, Result};

/// `2⁴·3²·7`.
pub const J_NORMALIZATION: f64 = 1008.0;

/// The covariants of a seven-mode state. `m[I]` holds `(M^I)^J_K` with rows
/// `J` and columns `K`.
#[derive(Debug, Clone, PartialEq)]
pub struct Covariants7 {
    pub m: Vec<DMatrix<Cplx>>,
    pub n: DMatrix<Cplx>,
    pub l: DMatrix<Cplx>,
}

impl Covariants7 {
    /// `J = Tr(NL) / 1008`.
    pub fn j(&self) -> Cplx {
        (&self.n * &self.l).trace() / J_NORMALIZATION
    }

    /// `B = −N/6`.
    pub fn b(&self) -> DMatrix<Cplx> {
        &self.n / Cplx::new(-6.0, 0.0)
    }
}

pub(crate) fn check(t: &AntisymTensor) -> Result<()> {
    if (t.fermions(), t.modes()) != (3, 7) {
        return Err(Error::DimensionMismatch {
            expected: "3 fermions on 7 modes".into(),
            found: format!("{} fermions on {} modes", t.fermions(), t.modes()),
        });
    }
    Ok(())
}

fn pick(rest: &[usize], sel: &[usize]) -> Vec<usize> {
    sel.iter().map(|&k| rest[k]).collect()
}

fn complement(rest: &[usize], taken: &[usize]) -> Vec<usize> {
    rest.iter().copied().filter(|m| !taken.contains(m)).collect()
}

/// `(M^I)^J_K = (1/12) ε^{IJA1…A5} Ψ_{KA1A2} Ψ_{A3A4A5}`, summed over the ten
/// pair/triple splits of the five remaining modes.
pub fn covariant_m(t: &AntisymTensor) -> Result<Vec<DMatrix<Cplx>>> {
    check(t)?;
    let mut m = vec![DMatrix::zeros(7, 7); 7];
    for i in 0..7 {
        for j in 0..7 {
            if i == j {
                continue;
            }
            let rest: Vec<usize> = (0..7).filter(|&x| x != i && x != j).collect();
            for sel in combinations(5, 2) {
                let p = pick(&rest, &sel);
                let tri = complement(&rest, &p);
                let sign = f64::from(levi_civita(&[i, j, p[0], p[1], tri[0], tri[1], tri[2]]));
                let tail = t.get(&tri) * sign;
                if tail == Cplx::new(0.0, 0.0) {
                    continue;
                }
                for k in 0..7 {
                    m[i][(j, k)] += t.get(&[k, p[0], p[1]]) * tail;
                }
            }
        }
    }
    Ok(m)
}

/// `N_IJ = (1/24) ε^{A1…A7} Ψ_{IA1A2} Ψ_{JA3A4} Ψ_{A5A6A7}`, summed over the
/// 210 ordered (pair, pair, triple) splits of the seven modes.
pub fn covariant_n(t: &AntisymTensor) -> Result<DMatrix<Cplx>> {
    check(t)?;
    let all: Vec<usize> = (0..7).collect();
    let mut n = DMatrix::zeros(7, 7);
    for s1 in combinations(7, 2) {
        let rest = complement(&all, &s1);
        for sel in combinations(5, 2) {
            let p2 = pick(&rest, &sel);
            let tri = complement(&rest, &p2);
            let sign = f64::from(levi_civita(&[s1[0], s1[1], p2[0], p2[1], tri[0], tri[1], tri[2]]));
            let tail = t.get(&tri) * sign;
            if tail == Cplx::new(0.0, 0.0) {
                continue;
            }
            for i in 0..7 {
                let a = t.get(&[i, s1[0], s1[1]]);
                if a == Cplx::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..7 {
                    n[(i, j)] += a * t.get(&[j, p2[0], p2[1]]) * tail;
                }
            }
        }
    }
    Ok(n)
}

fn symmetrize(m: &DMatrix<Cplx>) -> DMatrix<Cplx> {
    (m + m.transpose()) * Cplx::new(0.5, 0.0)
}

/// `M`, `N` and `L^IJ = Tr(M^I M^J)`; `N` and `L` are symmetrized so that
/// they are exactly symmetric.
pub fn covariants7(t: &AntisymTensor) -> Result<Covariants7> {
    let m = covariant_m(t)?;
    let n = covariant_n(t)?;
    let l = DMatrix::from_fn(7, 7, |i, j| (&m[i] * &m[j]).trace());
    Ok(Covariants7 {
        n: symmetrize(&n),
        l: symmetrize(&l),
        m,
    })
}

/// `J = Tr(NL) / 1008`.
pub fn invariant_j(t: &AntisymTensor) -> Result<Cplx> {
    Ok(covariants7(t)?.j())
}

/// `|J³ − Det(−N/6)|`, compared on cubes to avoid choosing a branch of the
/// cube root.
pub fn j_cubed_residual(c: &Covariants7) -> f64 {
    (c.j().powi(3) - c.b().determinant()).norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multilinear::c64;
    use crate::oracle::{brute_l, brute_m, brute_n};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_state(seed: u64) -> AntisymTensor {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        AntisymTensor::from_sorted(
            3,
            7,
            combinations(7, 3)
                .into_iter()
                .map(|i| (i, c64(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0)))),
        )
        .unwrap()
    }

    fn max_abs(m: &DMatrix<Cplx>) -> f64 {
        m.iter().map(|x| x.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn subset_sums_match_brute_force() {
        let t = random_state(41);
        let c = covariants7(&t).unwrap();
        let bm = brute_m(&t);
        for i in 0..7 {
            assert!(max_abs(&(&c.m[i] - &bm[i])) < 1e-12);
        }
        assert!(max_abs(&(&c.n - brute_n(&t))) < 1e-12);
        assert!(max_abs(&(&c.l - brute_l(&t))) < 1e-11);
    }

    #[test]
    fn raw_n_and_l_are_symmetric() {
        let t = random_state(42);
        let n = covariant_n(&t).unwrap();
        assert!(max_abs(&(&n - n.transpose())) < 1e-12);
        let m = covariant_m(&t).unwrap();
        let l = DMatrix::from_fn(7, 7, |i, j| (&m[i] * &m[j]).trace());
        assert!(max_abs(&(&l - l.transpose())) < 1e-11);
    }

    #[test]
    fn cubic_identity() {
        for seed in 43..48 {
            let c = covariants7(&random_state(seed)).unwrap();
            assert!(j_cubed_residual(&c) < 1e-9 * c.j().norm().powi(3).max(1.0));
        }
    }

    #[test]
    fn zero_state() {
        let c = covariants7(&AntisymTensor::zeros(3, 7)).unwrap();
        assert_eq!(c.j(), c64(0.0, 0.0));
        assert_eq!(max_abs(&c.n) + max_abs(&c.l), 0.0);
    }

    #[test]
    fn six_mode_states_have_zero_j() {
        let t = random_state(49).restrict(&[0, 1, 2, 3, 4, 5]).unwrap().embed(7).unwrap();
        assert!(invariant_j(&t).unwrap().norm() < 1e-12);
    }
}
