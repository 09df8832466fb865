//! Definition-level evaluation of the covariants by summing over every
//! index assignment allowed by the Levi-Civita symbol. Slow on purpose.

use nalgebra::DMatrix;

use crate::multilinear::{levi_civita, AntisymTensor, Cplx};

/// Which covariant to contract.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Covariant {
    K,
    M,
    N,
    L,
}

/// Dense `N×N×N` copy of a three-fermion tensor with all signs expanded.
pub struct Dense3 {
    n: usize,
    data: Vec<Cplx>,
}

impl Dense3 {
    pub fn new(t: &AntisymTensor) -> Self {
        assert_eq!(t.fermions(), 3, "dense expansion is for three fermions");
        let n = t.modes();
        let mut data = vec![Cplx::new(0.0, 0.0); n * n * n];
        for (idx, v) in t.iter() {
            for p in permutations(3) {
                let s = f64::from(levi_civita(&p));
                let (a, b, c) = (idx[p[0]], idx[p[1]], idx[p[2]]);
                data[(a * n + b) * n + c] = v * s;
            }
        }
        Self { n, data }
    }

    #[inline]
    pub fn at(&self, a: usize, b: usize, c: usize) -> Cplx {
        self.data[(a * self.n + b) * self.n + c]
    }
}

/// All permutations of `0..k` in lexicographic order.
pub fn permutations(k: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for m in 0..used.len() {
            if !used[m] {
                used[m] = true;
                prefix.push(m);
                rec(prefix, used, out);
                prefix.pop();
                used[m] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::with_capacity(k), &mut vec![false; k], &mut out);
    out
}

/// `K^μ_ν = (1/12) ε^{μρ1…ρ5} ψ_{νρ1ρ2} ψ_{ρ3ρ4ρ5}` for six modes.
pub fn brute_k(t: &AntisymTensor) -> DMatrix<Cplx> {
    assert_eq!((t.fermions(), t.modes()), (3, 6));
    let p = Dense3::new(t);
    let mut k = DMatrix::zeros(6, 6);
    for s in permutations(6) {
        let sg = f64::from(levi_civita(&s));
        let tail = p.at(s[3], s[4], s[5]);
        if tail == Cplx::new(0.0, 0.0) {
            continue;
        }
        for nu in 0..6 {
            k[(s[0], nu)] += p.at(nu, s[1], s[2]) * tail * sg;
        }
    }
    k / Cplx::new(12.0, 0.0)
}

/// `(M^I)^J_K = (1/12) ε^{IJA1…A5} Ψ_{KA1A2} Ψ_{A3A4A5}`; entry `I` of the
/// result is the matrix with rows `J` and columns `K`.
pub fn brute_m(t: &AntisymTensor) -> Vec<DMatrix<Cplx>> {
    assert_eq!((t.fermions(), t.modes()), (3, 7));
    let p = Dense3::new(t);
    let mut m = vec![DMatrix::zeros(7, 7); 7];
    for s in permutations(7) {
        let sg = f64::from(levi_civita(&s));
        let tail = p.at(s[4], s[5], s[6]);
        if tail == Cplx::new(0.0, 0.0) {
            continue;
        }
        for k in 0..7 {
            m[s[0]][(s[1], k)] += p.at(k, s[2], s[3]) * tail * sg;
        }
    }
    for x in &mut m {
        *x /= Cplx::new(12.0, 0.0);
    }
    m
}

/// `N_IJ = (1/24) ε^{A1…A7} Ψ_{IA1A2} Ψ_{JA3A4} Ψ_{A5A6A7}`.
pub fn brute_n(t: &AntisymTensor) -> DMatrix<Cplx> {
    assert_eq!((t.fermions(), t.modes()), (3, 7));
    let p = Dense3::new(t);
    let mut n = DMatrix::zeros(7, 7);
    for s in permutations(7) {
        let sg = f64::from(levi_civita(&s));
        let tail = p.at(s[4], s[5], s[6]);
        if tail == Cplx::new(0.0, 0.0) {
            continue;
        }
        for i in 0..7 {
            let a = p.at(i, s[0], s[1]);
            if a == Cplx::new(0.0, 0.0) {
                continue;
            }
            for j in 0..7 {
                n[(i, j)] += a * p.at(j, s[2], s[3]) * tail * sg;
            }
        }
    }
    n / Cplx::new(24.0, 0.0)
}

/// `L^IJ = (M^I)^{A1}_{A2} (M^J)^{A2}_{A1}`.
pub fn brute_l_from_m(m: &[DMatrix<Cplx>]) -> DMatrix<Cplx> {
    DMatrix::from_fn(7, 7, |i, j| (&m[i] * &m[j]).trace())
}

pub fn brute_l(t: &AntisymTensor) -> DMatrix<Cplx> {
    brute_l_from_m(&brute_m(t))
}

/// Contracts the requested covariant. `M` is returned as seven stacked
/// 7×7 blocks (a 49×7 matrix, block `I` in rows `7I..7I+7`).
pub fn brute_covariant(t: &AntisymTensor, which: Covariant) -> DMatrix<Cplx> {
    match which {
        Covariant::K => brute_k(t),
        Covariant::N => brute_n(t),
        Covariant::L => brute_l(t),
        Covariant::M => {
            let m = brute_m(t);
            DMatrix::from_fn(49, 7, |r, c| m[r / 7][(r % 7, c)])
        }
    }
}
