//! Complex multilinear algebra on few-mode fermionic amplitudes.

mod mat3;
mod pfaffian;
mod slocc;
mod tensor;

pub use mat3::{adjugate, cross, det_sum_identity_check, AntisymMat3, Mat3, Vec3};
pub use pfaffian::{pfaffian6, Mat6};
pub use slocc::{slocc_apply, SloccMatrix};
pub use tensor::AntisymTensor;

/// Complex amplitude type used throughout.
pub type Cplx = num_complex::Complex64;

/// Shorthand constructor.
pub const fn c64(re: f64, im: f64) -> Cplx {
    Cplx::new(re, im)
}

/// Sign of the permutation that sorts `indices`; `0` if any index repeats.
pub fn levi_civita(indices: &[usize]) -> i8 {
    let mut sign = 1i8;
    for i in 0..indices.len() {
        for j in (i + 1)..indices.len() {
            match indices[i].cmp(&indices[j]) {
                std::cmp::Ordering::Equal => return 0,
                std::cmp::Ordering::Greater => sign = -sign,
                std::cmp::Ordering::Less => {}
            }
        }
    }
    sign
}

pub(crate) fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc = 1usize;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// All strictly increasing `k`-tuples drawn from `0..n`, in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::with_capacity(binomial(n, k));
    rec(0, n, k, &mut Vec::with_capacity(k), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn levi_civita_examples() {
        assert_eq!(levi_civita(&[1, 2, 3, 4, 5, 6]), 1);
        assert_eq!(levi_civita(&[2, 1, 3]), -1);
        assert_eq!(levi_civita(&[1, 1, 2]), 0);
        assert_eq!(levi_civita(&[3, 1, 2]), 1);
        assert_eq!(levi_civita(&[]), 1);
    }

    #[test]
    fn binomials_and_combination_counts() {
        assert_eq!(binomial(6, 3), 20);
        assert_eq!(binomial(7, 3), 35);
        assert_eq!(binomial(8, 4), 70);
        assert_eq!(binomial(2, 5), 0);
        assert_eq!(combinations(7, 3).len(), 35);
        assert_eq!(combinations(4, 2), vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);
    }
}
